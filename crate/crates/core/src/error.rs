use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty max: at least one histogram is required")]
    EmptyMax,

    #[error("no hyperplanes: n' must be at least 1")]
    NoHyperplanes,

    #[error("gamma column too large: n' = {nprime} exceeds the configured cap of {cap} (raise it with --gamma-cap)")]
    GammaCapExceeded { nprime: usize, cap: usize },

    #[error("dimension mismatch: {left_rows}x{left_cols} cannot be combined with {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("degenerate maxout: rank {0} is below 2")]
    DegenerateMaxout(usize),

    #[error("unknown gamma variant `{0}`")]
    UnknownVariant(String),

    #[error("unknown counting method `{0}`")]
    UnknownMethod(String),

    #[error("unknown builtin architecture `{0}`")]
    UnknownBuiltin(String),

    #[error("invalid document at {path}: {message}")]
    Document { path: String, message: String },

    #[error("invalid architecture: {0}")]
    Architecture(String),

    #[error("invalid network: {0}")]
    Network(String),

    #[error("1-D oracle only: network has {0} inputs")]
    NotOneDimensional(usize),

    #[error("invalid histogram text `{0}`")]
    HistogramSyntax(String),
}

impl Error {
    /// True for errors caused by a configured resource limit rather than bad input.
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::GammaCapExceeded { .. })
    }
}
