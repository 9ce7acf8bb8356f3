use std::path::PathBuf;

use crate::lp::LpError;
use crate::model::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("unsupported format version {found} (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("invalid instance: {}", format_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("solution references edge ({buyer}, {seller}) which is not in the instance")]
    UnknownEdge { buyer: usize, seller: usize },
    #[error("solution objective {stated} does not match recomputed {recomputed}")]
    ObjectiveMismatch { stated: f64, recomputed: f64 },
    #[error("seller index {0} out of range")]
    SellerOutOfRange(usize),
    #[error("{what} has size {size}, above the exhaustive-search cap of {cap}")]
    OracleTooLarge {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("SDP dimension {dim} exceeds the cap of {cap}; use the ilp, lp-round or greedy methods instead")]
    SdpTooLarge { dim: usize, cap: usize },
    #[error("matrix is not positive semidefinite (minimum eigenvalue {0:e})")]
    NotPsd(f64),
    #[error("infeasible selection: {0}")]
    Infeasible(String),
    #[error("invalid scheduling instance: {0}")]
    InvalidRmis(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Lp(#[from] LpError),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}
