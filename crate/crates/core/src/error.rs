use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("maps at degrees {degree} and {} do not compose to zero", degree + 1)]
    NotAComplex { degree: usize },
    #[error("malformed complex: {0}")]
    MalformedComplex(&'static str),
    #[error("vectors do not span a subspace of the ambient span")]
    NotASubspace,
    #[error("contraction needs two distinct positions, got {0} twice")]
    SamePosition(usize),
    #[error("index group is empty or not strictly increasing")]
    BadIndexGroup,
    #[error("invalid Young diagram: {0}")]
    BadDiagram(String),
    #[error("unsupported shape {0}")]
    UnsupportedShape(String),
    #[error("negative Dynkin label at node {0}")]
    NegativeLabel(usize),
    #[error("vector does not lie in the realized subspace")]
    NotInSubspace,
    #[error("dimension cap exceeded: {dim} > {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("tensor is not symmetric")]
    NotSymmetric,
    #[error("metric is not invertible")]
    SingularMetric,
    #[error("base dimension mismatch: {0} vs {1}")]
    BaseDimension(usize, usize),
    #[error("unsupported mode: {0}")]
    UnsupportedMode(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = core::result::Result<T, Error>;
