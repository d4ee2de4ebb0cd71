use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parameter {name} = {value} outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: String,
    },
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("region exhausted (area {area:e} below {area_min:e})")]
    Exhausted { area: f64, area_min: f64 },
    #[error("{what} did not converge (estimate {estimate}, error estimate {error:e})")]
    NoConvergence {
        what: &'static str,
        estimate: f64,
        error: f64,
    },
    #[error("invalid potential: {0}")]
    InvalidPotential(String),
    #[error("event not found within {steps} steps")]
    EventNotFound { steps: usize },
    #[error("malformed placement: {0}")]
    MalformedPlacement(String),
    #[error("search failed after {attempts} attempts")]
    SearchFailed { attempts: usize },
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("empty dataset")]
    EmptyDataset,
}

pub type Result<T> = std::result::Result<T, Error>;
