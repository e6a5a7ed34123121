use thiserror::Error;

/// Errors produced by parsing, graph construction, and the solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed header at line {line}: {reason}")]
    MalformedHeader { line: usize, reason: String },

    #[error("unsupported TYPE {0:?} (only TSP is supported)")]
    UnsupportedType(String),

    #[error("unsupported EDGE_WEIGHT_TYPE {0:?} (only EUC_2D is supported)")]
    UnsupportedEdgeWeightType(String),

    #[error("DIMENSION is {declared} but {found} coordinates were listed")]
    DimensionMismatch { declared: usize, found: usize },

    #[error("instance needs at least 3 cities, got {0}")]
    TooFewCities(usize),

    #[error("non-finite coordinate for city {0}")]
    NonFiniteCoordinate(usize),

    #[error("invalid tour: {0}")]
    InvalidTour(String),

    #[error("invalid edge list: {0}")]
    InvalidEdgeList(String),

    #[error("k = {k} out of range for n = {n} (need 1 <= k <= n-1)")]
    KOutOfRange { k: usize, n: usize },

    #[error("extra_edges = {requested} exceeds the {max} chords available for n = {n}")]
    TooManyChords { requested: usize, max: usize, n: usize },

    #[error("max_segment = {0} out of range (need 1 <= max_segment <= 3)")]
    SegmentOutOfRange(usize),

    #[error("instance too large for the DP oracle: n = {n} > {max}")]
    OracleTooLarge { n: usize, max: usize },

    #[error("contract violation: {0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, Error>;
