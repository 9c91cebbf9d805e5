use thiserror::Error;

/// Errors raised across the chain backend, the moment engine and the CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error("site {site} is outside the chain 1..={sites}")]
    SiteOutOfRange { site: usize, sites: usize },

    #[error("chains longer than {max} sites cannot be encoded (requested {sites})")]
    ChainTooLong { sites: usize, max: usize },

    #[error("invalid exciton index: electron {electron}, hole {hole} on {sites} sites")]
    InvalidExciton {
        electron: usize,
        hole: usize,
        sites: usize,
    },

    #[error("exciton span y = {y} must lie in 1..={max}")]
    SpanOutOfRange { y: usize, max: usize },

    #[error("cannot parse basis fixture {text:?}: {reason}")]
    Fixture { text: String, reason: String },

    #[error("state spans {found} sites but {expected} were expected")]
    SiteMismatch { expected: usize, found: usize },

    #[error("observable has a non-integer spectrum on this state (residual {residual:.3e})")]
    NonIntegerSpectrum { residual: f64 },

    #[error("truncated coherent state rejected: tail weight {tail:.3e} exceeds {limit:.1e} (chain too short for |lambda| = {lambda})")]
    TailTooHeavy { tail: f64, limit: f64, lambda: f64 },

    #[error("occupation m = {m} exceeds the packing ceiling {max} for L = {sites}, y = {y}")]
    OccupationTooLarge {
        m: usize,
        max: usize,
        sites: usize,
        y: usize,
    },

    #[error("mode {0} has no moment declaration")]
    UndeclaredMode(u32),

    #[error("cannot parse operator word {text:?}: {reason}")]
    WordParse { text: String, reason: String },

    #[error("{what} evaluated too close to a pole (denominator {denominator:.3e})")]
    PoleProximity { what: &'static str, denominator: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("pattern mismatch: {0}")]
    PatternMismatch(String),

    #[error("target occupation cannot be allocated: {0}")]
    Infeasible(String),

    #[error("L = {sites} needs an estimated {needed_mib} MiB, above the {limit_mib} MiB budget")]
    MemoryBudget {
        sites: usize,
        needed_mib: u64,
        limit_mib: u64,
    },

    #[error("unknown observable {0:?}")]
    UnknownObservable(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
