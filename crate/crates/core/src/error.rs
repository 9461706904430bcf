use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid root system spec: {0}")]
    InvalidSpec(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vector is not a root of the system")]
    NotARoot,

    #[error("enumeration exceeded cap of {cap} elements ({partial} found before stopping)")]
    CapExceeded { cap: usize, partial: usize },

    #[error("automorphism does not normalize the group")]
    NotNormalized,

    #[error("type {ty} is not simply laced; only ADE types can be folded")]
    NotSimplyLaced { ty: String },

    #[error("r_bar = {r_bar} is not admissible for type {ty}")]
    InadmissibleRBar { ty: String, r_bar: usize },

    #[error("the given reflections do not generate the group ({generated} of {order} elements)")]
    NotGenerated { generated: u128, order: usize },

    #[error("Coxeter graph not in the finite catalog: {0}")]
    UnrecognizedGraph(String),

    #[error("k(p) is zero-dimensional; there is no arrangement")]
    ZeroDimensional,

    #[error("arrangement has {count} hyperplanes, limit is {limit}")]
    TooManyHyperplanes { count: usize, limit: usize },

    #[error("group action does not permute the chambers")]
    OrbitMismatch,

    #[error("W' is not generated by reflections")]
    NotReflectionGroup,

    #[error("no gallery reaches the target chamber")]
    NoPath,

    #[error("matrix is not an element of the action group")]
    NotInGroup,

    #[error("levi index {index} out of range 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
