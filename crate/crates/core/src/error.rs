use std::path::PathBuf;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("analysis order {lmax} exceeds the grid exactness order {order}")]
    AliasingOrder { lmax: usize, order: usize },

    #[error("degenerate multipole: sample power spectrum vanishes at ell = {ell}")]
    DegenerateMultipole { ell: usize },

    #[error("replicate {replicate}: {source}")]
    Replicate {
        replicate: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("tail sum of (2l+1)C_l does not converge: {0}")]
    NonSummableTail(String),

    #[error("mean scenario violates the top-exponent condition: sum over m of mu1 at ell = {ell} is zero")]
    TopExponentSum { ell: usize },

    #[error("quantile level {0} not present in table")]
    MissingLevel(f64),

    #[error("schema violation in {context}: {message}")]
    Schema { context: String, message: String },

    #[error("irregular grid along {axis}: {message}")]
    IrregularGrid { axis: &'static str, message: String },

    #[error("missing value at time {year}-{month:02}, lat {lat}, lon {lon}")]
    MissingCell { year: i32, month: u32, lat: f64, lon: f64 },

    #[error("base period {start}-{end} is not covered by the data")]
    BaseNotCovered { start: i32, end: i32 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True when the error stems from caller-supplied arguments rather than
    /// from data or runtime conditions.
    pub fn is_usage(&self) -> bool {
        match self {
            Error::Domain(_) | Error::InvalidArgument(_) | Error::AliasingOrder { .. } | Error::MissingLevel(_) => true,
            Error::Replicate { source, .. } => source.is_usage(),
            _ => false,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
