use std::fs;
use std::io::Write;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use toric_ech::billiard::{make_model, MomentProfile};
use toric_ech::domain::{parse_region, DomainSpec};
use toric_ech::embedding::{
    contains_ellipsoid, obstruct, verdict_bidisk_into, verdict_ellipsoid_into_bidisk,
    EmbeddingVerdict, Embeds, Witness,
};
use toric_ech::format::{fmt_f64, json_f64};
use toric_ech::geometry::{region_area, sample_omega0, Omega0Curve, Point2};
use toric_ech::packing::{shipped_certificate, verify_placement, PackingFailure, TrianglePlacement};
use toric_ech::plot::{emit_plot, Curve, Dataset};
use toric_ech::scenario::run_scenario;
use toric_ech::weights::weight_sequence;

/// Resolution used whenever the bidisk enters a capacity comparison.
const BIDISK_SAMPLES: usize = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Parser)]
#[command(name = "toric-ech", version, about = "ECH capacities of toric domains and the lagrangian bidisk")]
struct Cli {
    /// Output file, or "-" for stdout.
    #[arg(long, global = true, default_value = "-")]
    output: String,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the boundary curve of the bidisk's toric image.
    Curve {
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
    /// Weight expansion of a concave region.
    Weights {
        /// Region JSON, or a literal such as "omega0:8192" or "triangle:2:3".
        region: String,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 0.0)]
        min_weight: f64,
    },
    /// ECH capacity sequence of a domain.
    Capacities {
        /// Domain JSON, e.g. {"ellipsoid":[4,5.196152422]}.
        domain: String,
        #[arg(long, default_value_t = 10)]
        kmax: usize,
    },
    /// Decide or obstruct an embedding between two domains.
    CheckEmbedding {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 100)]
        kmax: usize,
        #[arg(long, default_value_t = 1e-9)]
        slack: f64,
    },
    /// Moment profile of the smoothed billiard.
    Billiard {
        /// One or more values in (0, 1); repeat the flag or separate by commas.
        #[arg(long, required = true, value_delimiter = ',')]
        epsilon: Vec<f64>,
        #[arg(long, default_value_t = 65)]
        samples: usize,
        /// Cross-check the quadrature against direct integration.
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_enum)]
        emit: Option<Format>,
    },
    /// Verify a triangle placement certificate.
    VerifyPacking {
        /// Placement JSON; the shipped certificate when omitted.
        #[arg(long)]
        placement: Option<String>,
        #[arg(long)]
        margin: Option<f64>,
    },
    /// Run a named end-to-end check.
    Scenario { name: String },
}

/// Result of a subcommand: rendered output, plus whether its check passed.
struct Outcome {
    text: String,
    pass: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, pass: true }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            if let Err(e) = write_output(&cli.output, &out.text) {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            ExitCode::from(if out.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn write_output(path: &str, text: &str) -> anyhow::Result<()> {
    if path == "-" {
        std::io::stdout().write_all(text.as_bytes())?;
        Ok(())
    } else {
        fs::write(path, text).with_context(|| format!("writing {path}"))
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn csv(header: &str, rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = format!("{header}\n");
    for r in rows {
        out.push_str(&r.into_iter().map(fmt_f64).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}

fn pick(requested: Option<Format>, default: Format, allowed: &[Format]) -> anyhow::Result<Format> {
    let f = requested.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        bail!("format {f:?} is not available for this subcommand")
    }
}

fn json_input(text: &str) -> anyhow::Result<Value> {
    serde_json::from_str(text).with_context(|| format!("invalid JSON: {text}"))
}

/// Accepts JSON or a bare region literal.
fn region_arg(text: &str) -> anyhow::Result<toric_ech::geometry::ConcaveRegion> {
    let v = serde_json::from_str(text).unwrap_or_else(|_| Value::String(text.to_string()));
    Ok(parse_region(&v)?)
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    use Format::*;
    match &cli.command {
        Command::Curve { samples } => {
            let c = Omega0Curve::chebyshev(*samples)?;
            let rows = c.alpha_samples.iter().zip(&c.points).map(|(a, p)| vec![*a, p.x, p.y]);
            Ok(Outcome::ok(match pick(cli.format, Json, &[Json, Csv, Svg])? {
                Json => pretty(&json!({
                    "alpha": c.alpha_samples.iter().map(|&a| json_f64(a)).collect::<Vec<_>>(),
                    "points": points_json(&c.points),
                })),
                Csv => csv("alpha,x,y", rows),
                Svg => emit_plot(&Dataset {
                    title: "Omega0".into(),
                    curves: vec![Curve { label: "Omega0".into(), points: c.points.clone() }],
                })?,
            }))
        }
        Command::Weights { region, count, min_weight } => {
            let r = region_arg(region)?;
            let w = weight_sequence(&r, *count, *min_weight)?;
            if w.truncated {
                eprintln!("note: expansion truncated at {} weights", w.weights.len());
            }
            Ok(Outcome::ok(match pick(cli.format, Json, &[Json, Csv])? {
                Csv => csv("i,w", w.weights.iter().enumerate().map(|(i, &x)| vec![(i + 1) as f64, x])),
                _ => pretty(&json!({
                    "weights": w.weights.iter().map(|&x| json_f64(x)).collect::<Vec<_>>(),
                    "area_covered": json_f64(w.area_covered()),
                    "region_area": json_f64(region_area(&r)),
                })),
            }))
        }
        Command::Capacities { domain, kmax } => {
            let c = DomainSpec::from_json(&json_input(domain)?)?.capacities(*kmax)?;
            Ok(Outcome::ok(match pick(cli.format, Csv, &[Json, Csv])? {
                Json => pretty(&json!({
                    "capacities": c.values().iter().map(|&x| json_f64(x)).collect::<Vec<_>>(),
                })),
                _ => csv("k,c_k", c.values().iter().enumerate().map(|(k, &x)| vec![k as f64, x])),
            }))
        }
        Command::CheckEmbedding { source, target, kmax, slack } => {
            pick(cli.format, Json, &[Json])?;
            let v = check_embedding(source, target, *kmax, *slack)?;
            Ok(Outcome {
                text: pretty(&json!({
                    "embeds": v.embeds.as_str(),
                    "witness_k": v.witness_k(),
                    "criterion": v.criterion(),
                })),
                pass: v.embeds != Embeds::No,
            })
        }
        Command::Billiard { epsilon, samples, oracle, emit } => {
            let format = pick(emit.or(cli.format), Csv, &[Json, Csv, Svg])?;
            billiard(epsilon, *samples, *oracle, format)
        }
        Command::VerifyPacking { placement, margin } => {
            pick(cli.format, Json, &[Json])?;
            let mut p = match placement {
                Some(path) => {
                    let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
                    TrianglePlacement::from_json(&text)?
                }
                None => shipped_certificate(),
            };
            if let Some(m) = margin {
                p.target.margin = *m;
            }
            let rep = verify_placement(&p)?;
            for f in &rep.failures {
                eprintln!("failure: {}", describe(f));
            }
            Ok(Outcome {
                text: pretty(&json!({
                    "ok": rep.ok,
                    "failures": rep.failures.iter().map(failure_json).collect::<Vec<_>>(),
                })),
                pass: rep.ok,
            })
        }
        Command::Scenario { name } => {
            pick(cli.format, Json, &[Json])?;
            let rep = run_scenario(name)?;
            for r in rep.records.iter().filter(|r| !r.pass) {
                eprintln!("FAIL {}: expected {} got {}", r.name, r.expected, r.computed);
            }
            Ok(Outcome { text: pretty(&rep.to_json()), pass: rep.pass })
        }
    }
}

fn points_json(points: &[Point2]) -> Vec<Value> {
    points.iter().map(|p| json!([json_f64(p.x), json_f64(p.y)])).collect()
}

fn bidisk() -> anyhow::Result<DomainSpec> {
    Ok(DomainSpec::Concave { region: sample_omega0(BIDISK_SAMPLES)?, k_weights: None })
}

fn check_embedding(source: &str, target: &str, kmax: usize, slack: f64) -> anyhow::Result<EmbeddingVerdict> {
    let spec = |s: &str| -> anyhow::Result<Option<DomainSpec>> {
        if s.trim() == "bidisk" {
            Ok(None)
        } else {
            Ok(Some(DomainSpec::from_json(&json_input(s)?)?))
        }
    };
    match (spec(source)?, spec(target)?) {
        (None, None) => bail!("source and target are both the bidisk"),
        (None, Some(t)) => match t {
            DomainSpec::Ball(_) | DomainSpec::Ellipsoid(..) | DomainSpec::Polydisk(..) => {
                let v = verdict_bidisk_into(&t)?;
                if v.embeds == Embeds::No {
                    // the obstruction is sharp here, so name the violating index when it is in range
                    let o = obstruct(&bidisk()?, &t, kmax, slack)?;
                    if o.witness_k().is_some() {
                        return Ok(o);
                    }
                }
                Ok(v)
            }
            t => Ok(obstruct(&bidisk()?, &t, kmax, slack)?),
        },
        (Some(s), None) => {
            let (a, b) = match s {
                DomainSpec::Ball(a) => (a, a),
                DomainSpec::Ellipsoid(a, b) => (a.min(b), a.max(b)),
                s => return Ok(obstruct(&s, &bidisk()?, kmax, slack)?),
            };
            let omega = sample_omega0(BIDISK_SAMPLES)?;
            if contains_ellipsoid(&omega, a, b) || contains_ellipsoid(&omega, b, a) {
                return Ok(EmbeddingVerdict {
                    embeds: Embeds::Yes,
                    witness: Witness::Construction("inclusion"),
                });
            }
            if a == b {
                Ok(verdict_ellipsoid_into_bidisk(1, a)?)
            } else if b == 2.0 * a {
                Ok(verdict_ellipsoid_into_bidisk(2, a)?)
            } else {
                Ok(obstruct(&s, &bidisk()?, kmax, slack)?)
            }
        }
        (Some(s), Some(t)) => Ok(obstruct(&s, &t, kmax, slack)?),
    }
}

fn sample_json(p: &MomentProfile) -> Value {
    json!({
        "epsilon": json_f64(p.epsilon),
        "samples": p.samples.iter().map(|s| json!({
            "v": json_f64(s.v),
            "G": json_f64(s.g),
            "alpha": json_f64(s.alpha),
            "rho1": json_f64(s.rho1),
            "rho2": json_f64(s.rho2),
        })).collect::<Vec<_>>(),
    })
}

const ORACLE_FRACTIONS: [f64; 4] = [0.2, 0.4, 0.6, 0.8];
const ORACLE_TOL: f64 = 1e-4;
const ORACLE_DT: f64 = 1e-3;

fn billiard(eps: &[f64], samples: usize, oracle: bool, format: Format) -> anyhow::Result<Outcome> {
    let mut profiles = Vec::with_capacity(eps.len());
    let mut pass = true;
    for &e in eps {
        let m = make_model(e)?;
        if oracle {
            for f in ORACLE_FRACTIONS {
                let v = f * m.max_momentum();
                let (g, a) = m.g_alpha(v)?;
                let (go, ao) = m.ode_oracle(v, ORACLE_DT)?;
                let (dg, da) = (((go - g) / g).abs(), ((ao - a) / a).abs());
                let ok = dg <= ORACLE_TOL && da <= ORACLE_TOL;
                pass &= ok;
                eprintln!(
                    "oracle eps={e} v={}M: dG={dg:.3e} dalpha={da:.3e} {}",
                    f,
                    if ok { "ok" } else { "MISMATCH" }
                );
            }
        }
        profiles.push(m.moment_profile(samples)?);
    }
    let text = match format {
        Format::Json => pretty(&json!({ "profiles": profiles.iter().map(sample_json).collect::<Vec<_>>() })),
        Format::Csv if profiles.len() == 1 => csv(
            "v,G,alpha,rho1,rho2",
            profiles[0].samples.iter().map(|s| vec![s.v, s.g, s.alpha, s.rho1, s.rho2]),
        ),
        Format::Csv => csv(
            "epsilon,v,G,alpha,rho1,rho2",
            profiles.iter().flat_map(|p| {
                p.samples.iter().map(|s| vec![p.epsilon, s.v, s.g, s.alpha, s.rho1, s.rho2])
            }),
        ),
        Format::Svg => {
            let omega = sample_omega0(256)?;
            let mut curves = vec![Curve { label: "Omega0".into(), points: omega.vertices().to_vec() }];
            for p in &profiles {
                curves.push(Curve { label: format!("eps = {}", p.epsilon), points: p.chain() });
            }
            emit_plot(&Dataset { title: "moment images".into(), curves })?
        }
    };
    Ok(Outcome { text, pass })
}

fn describe(f: &PackingFailure) -> String {
    match f {
        PackingFailure::OutsideTarget { piece, clearance } => {
            format!("piece {piece} has clearance {clearance:e}")
        }
        PackingFailure::Overlap { first, second, depth } => {
            format!("pieces {first} and {second} overlap by {depth:e}")
        }
        PackingFailure::Undersized { piece, legs, required } => format!(
            "piece {piece} has legs ({}, {}) below required ({}, {})",
            legs.0, legs.1, required.0, required.1
        ),
    }
}

fn failure_json(f: &PackingFailure) -> Value {
    match f {
        PackingFailure::OutsideTarget { piece, clearance } => {
            json!({"kind": "outside-target", "piece": piece, "clearance": json_f64(*clearance)})
        }
        PackingFailure::Overlap { first, second, depth } => {
            json!({"kind": "overlap", "pieces": [first, second], "depth": json_f64(*depth)})
        }
        PackingFailure::Undersized { piece, legs, required } => json!({
            "kind": "undersized",
            "piece": piece,
            "legs": [json_f64(legs.0), json_f64(legs.1)],
            "required": [json_f64(required.0), json_f64(required.1)],
        }),
    }
}
