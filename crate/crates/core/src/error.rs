use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("graph has {vertices} vertices, above the exhaustive-enumeration cap of {cap}")]
    CapacityExceeded { vertices: usize, cap: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("cut game exceeded its round budget of {l_max} rounds on {terminals} terminals")]
    RoundLimit { l_max: u32, terminals: usize },

    #[error("decomposition recursion depth {depth} exceeds the bound {bound}")]
    RecursionDepth { depth: u32, bound: u32 },

    #[error("sparsified terminal set has {kept} of {total} terminals, more than half")]
    SparsifyTooLarge { kept: usize, total: usize },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
