use thiserror::Error;

/// Errors produced by the geometry kernel, the interpolators and the harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("query coincides with site {index}")]
    CoincidentQuery { index: usize },

    #[error("query ({x}, {y}) lies outside the convex hull of the sites")]
    OutsideDomain { x: f64, y: f64 },

    #[error("query ({x}, {y}) lies on the boundary of the site hull between samples")]
    DegenerateBoundary { x: f64, y: f64 },

    #[error("two or more lune angles reach pi; the query lies on a hull edge")]
    MultipleInfiniteWeights,

    #[error("duplicate site ({x}, {y}) at index {second} repeats index {first}")]
    DuplicateSite {
        first: usize,
        second: usize,
        x: f64,
        y: f64,
    },

    #[error("need at least 3 sites, got {0}")]
    TooFewSites(usize),

    #[error("{0} sites but {1} elevations")]
    LengthMismatch(usize, usize),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("random map generator exhausted after {0} attempts")]
    GeneratorExhausted(usize),

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
