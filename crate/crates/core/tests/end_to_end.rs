use serde_json::json;

use toric_ech::capacities::{dominates, ellipsoid_caps};
use toric_ech::domain::{parse_region, region_to_json, DomainSpec};
use toric_ech::embedding::{obstruct, Embeds};
use toric_ech::geometry::{region_area, sample_omega0};
use toric_ech::packing::{shipped_certificate, verify_placement, TrianglePlacement};
use toric_ech::scenario::{run_scenario, SCENARIOS};
use toric_ech::weights::weight_sequence;
use toric_ech::Error;

#[test]
fn region_json_round_trip_keeps_weights() {
    let r = sample_omega0(512).unwrap();
    let back = parse_region(&region_to_json(&r)).unwrap();
    assert_eq!(r, back);
    let a = weight_sequence(&r, 20, 0.0).unwrap();
    let b = weight_sequence(&back, 20, 0.0).unwrap();
    assert_eq!(a, b);
}

#[test]
fn domain_spec_to_verdict() {
    let source = DomainSpec::from_json(&json!({"concave": "omega0:4096"})).unwrap();
    let ball = DomainSpec::from_json(&json!({"ball": 5.0})).unwrap();
    let v = obstruct(&source, &ball, 20, 1e-9).unwrap();
    assert_eq!(v.embeds, Embeds::No);
    assert_eq!(v.witness_k(), Some(2));
    let big = DomainSpec::from_json(&json!({"ellipsoid": [4.5, 5.5]})).unwrap();
    assert_eq!(obstruct(&source, &big, 60, 1e-9).unwrap().embeds, Embeds::ObstructionFree);
}

#[test]
fn union_spec_matches_parts() {
    let u = DomainSpec::from_json(&json!({"union": [{"ball": 1.0}, {"ball": 1.0}]})).unwrap();
    let c = u.capacities(12).unwrap();
    // two unit balls fit in B(2) but not in the ball of equal volume
    let (ok, _) = dominates(&ellipsoid_caps(2.0, 2.0, 12).unwrap(), &c, 1e-12).unwrap();
    assert!(ok);
    let (ok, k) = dominates(&ellipsoid_caps(2f64.sqrt(), 2f64.sqrt(), 12).unwrap(), &c, 1e-12).unwrap();
    assert!(!ok);
    assert_eq!(k, Some(2));
    assert_eq!(c.get(1), 1.0);
    assert_eq!(c.get(2), 2.0);
}

#[test]
fn weights_never_exceed_area() {
    for n in [16, 256, 2048] {
        let r = sample_omega0(n).unwrap();
        let w = weight_sequence(&r, 300, 0.0).unwrap();
        assert!(w.area_covered() <= region_area(&r) * (1.0 + 1e-12));
    }
}

#[test]
fn certificate_survives_serialization() {
    let p = shipped_certificate();
    let back = TrianglePlacement::from_json(&p.to_json()).unwrap();
    assert_eq!(p, back);
    assert!(verify_placement(&back).unwrap().ok);
}

#[test]
fn every_scenario_passes() {
    for (name, alias) in SCENARIOS {
        let a = run_scenario(name).unwrap();
        assert!(a.pass, "{name}: {:?}", a.records);
        assert_eq!(run_scenario(alias).unwrap(), a);
    }
    assert!(matches!(run_scenario("nope"), Err(Error::UnknownScenario(_))));
}
