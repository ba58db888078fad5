use std::fmt;

/// Errors raised by the edge-detection library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A size guard was exceeded.
    #[error("capacity exceeded: {what} = {value} exceeds limit {limit}")]
    Capacity {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    /// An iterative numerical routine broke down.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// A matrix expected to be positive semidefinite has a significantly negative eigenvalue.
    #[error("matrix is not positive semidefinite: eigenvalue {min_eigenvalue:e} below -{tolerance:e}")]
    NotPsd { min_eigenvalue: f64, tolerance: f64 },

    /// The interior-point solver hit its iteration cap before closing the duality gap.
    #[error("SDP solver reached {iterations} iterations with duality gap {gap:e}")]
    MaxIterations { iterations: usize, gap: f64 },

    /// The Padé matching system is singular.
    #[error("degenerate Padé approximant [{n}/{m}]: singular matching system")]
    DegeneratePade { n: usize, m: usize },

    /// No exact coefficient table is shipped for this local dimension.
    #[error("no Maclaurin coefficient table for d = {0}; use the numeric estimator instead")]
    NotTabulated(u32),

    /// The coefficient data asset is missing or malformed.
    #[error("coefficient data asset: {0}")]
    DataAsset(String),

    /// Every Padé approximant in a sequence was rejected.
    #[error("no acceptable Padé approximant: {0}")]
    NoAcceptedPade(String),

    /// A block-level failure, tagged with the block it came from.
    #[error("block {label}: {source}")]
    Block {
        label: BlockTag,
        #[source]
        source: Box<Error>,
    },

    /// One or more blocks of a discrimination problem failed.
    #[error("{} block(s) failed; first: {}", .0.len(), .0.first().map(|e| e.to_string()).unwrap_or_default())]
    Blocks(Vec<Error>),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn in_block(self, label: BlockTag) -> Self {
        Error::Block {
            label,
            source: Box::new(self),
        }
    }
}

/// Compact identifier of a discrimination block, used to tag errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockTag {
    /// Irrep block `[N - lambda, lambda]` of the unknown–unknown scenario.
    Irrep(u32),
    /// Block of the known–unknown scenario labelled by the number of
    /// excitations `N - n_tilde0` (equal to `n1` for qubits).
    Excitations(u32),
}

impl fmt::Display for BlockTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockTag::Irrep(l) => write!(f, "lambda={l}"),
            BlockTag::Excitations(e) => write!(f, "excitations={e}"),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
