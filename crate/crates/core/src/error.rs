use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("tree depth must be between 1 and 63, got {0}")]
    InvalidDepth(u32),
    #[error("leaf {leaf} outside [1, {max}]")]
    LeafOutOfRange { leaf: u64, max: u64 },
    #[error("delta undefined on equal leaves")]
    EqualLeaves,
    #[error("leaf set must be strictly increasing")]
    UnsortedLeaves,
    #[error("u_X undefined for fewer than 2 leaves")]
    TooFewForSplit,
    #[error("shape undefined below 3 leaves")]
    TooFewForShape,
    #[error("expected a set of {expected} elements, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("color {color} outside palette {palette}")]
    ColorOutOfPalette { color: u8, palette: &'static str },
    #[error("palette mismatch: {0}")]
    Palette(String),
    #[error("ground size at uniformity {level} is {size}, exceeding the cap {cap}")]
    CapExceeded {
        level: usize,
        size: String,
        cap: u64,
    },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no ({n},{k})-separated set exists; the minimal feasible n for k={k} is {min_n}")]
    NoSeparatedSet { n: usize, k: usize, min_n: usize },
    #[error("coloring file: {0}")]
    Format(String),
    #[error("missing label {0}")]
    MissingLabel(String),
    #[error("ground set of size {ground} is too small: need at least {needed} leaves")]
    GroundTooSmall { ground: u64, needed: u64 },
    #[error("unsupported plane order {0}: only primes are supported")]
    UnsupportedOrder(u64),
    #[error("plane of order {order} has lines of {line} points, too few for {needed} vertices")]
    PlaneTooSmall {
        order: u64,
        line: u64,
        needed: u64,
    },
    #[error("{0} is not a transversal of the classes indexed by J")]
    NotTransversal(String),
    #[error("io: {0}")]
    Io(String),
    #[error("json: {0}")]
    Json(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
