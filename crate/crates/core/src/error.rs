use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("invalid lottery: {0}")]
    InvalidLottery(String),
    #[error("invalid menu: {0}")]
    InvalidMenu(String),
    #[error("chart mismatch: expected {expected:?}, found {found:?}")]
    ChartMismatch {
        expected: crate::geometry::Chart,
        found: crate::geometry::Chart,
    },
    #[error("chart conversion requires a prize ranking")]
    MissingRanking,
    #[error("subset is not contained in the menu")]
    NotSubset,
    #[error("invalid preference: {0}")]
    InvalidPreference(String),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("weighted utility denominator vanishes at this lottery")]
    ZeroDenominator,
    #[error("implicit representation invalid: {0}")]
    RepresentationInvalid(String),
    #[error("singular linear system: {0}")]
    Singular(String),
    #[error("collinear triple has no interior angle")]
    CollinearTriple,
    #[error("recursion depth {0} exceeded while decomposing joint event")]
    DepthExceeded(usize),
    #[error("decomposition failed: {0}")]
    Decomposition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
