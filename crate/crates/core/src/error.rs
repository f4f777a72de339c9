use thiserror::Error;

use crate::multi_index::MultiIndex;

pub type Result<T> = std::result::Result<T, Error>;

/// Component indices in messages are 1-based, matching `∂/∂z_j` notation.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("ambient dimension must be at least 2, got {0}")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("component index {component} out of range 1..={n}")]
    ComponentOutOfRange { component: usize, n: usize },

    #[error("multi-index {index} has a negative entry in a polynomial object")]
    NegativeExponent { index: MultiIndex },

    #[error("multi-index {index} lies outside the declared box")]
    OutsideBox { index: MultiIndex },

    #[error("eigenvalues are not in the Poincaré domain (0 lies in their convex hull)")]
    NotInPoincareDomain,

    #[error("term z^{index}∂{component} is not resonant; normalize the field first")]
    NotResonant { component: usize, index: MultiIndex },

    #[error("term z^{index}∂{component} is resonant and cannot be removed by a homological step")]
    ResonantTerm { component: usize, index: MultiIndex },

    #[error("small divisor {divisor:e} for term z^{index}∂{component}")]
    SmallDivisor {
        component: usize,
        index: MultiIndex,
        divisor: f64,
    },

    #[error("linear part is not diag(λ): {0}")]
    LinearPartMismatch(String),

    #[error("term z^{index}∂{component} is outside the triangular Poincaré–Dulac support")]
    NotTriangular { component: usize, index: MultiIndex },

    #[error("bracket left the resonant algebra at z^{index}∂{component}")]
    BracketEscapedAlgebra { component: usize, index: MultiIndex },

    #[error("polynomial map has a non-invertible linear part")]
    SingularLinearPart,

    #[error("polynomial map has a non-zero constant term")]
    NonZeroConstantTerm,

    #[error("polynomial map is not near-identity")]
    NotNearIdentity,

    #[error("homogeneous input of degree {expected} expected, found a term of degree {found}")]
    NotHomogeneous { expected: i64, found: i64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("complement construction failed: {0}")]
    Complement(String),
}
