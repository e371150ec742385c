use thiserror::Error;

/// Which range inclusion of a solvability test failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inclusion {
    /// `R(C) ⊆ R(A)`
    RangeOfLeftFactor,
    /// `R(C*) ⊆ R(B*)`
    RangeOfRightFactorAdjoint,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is not Hermitian (asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },
    #[error("matrix is not positive semidefinite (eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("subspaces are not complementary: dims {range_dim} + {null_dim}, span dim {span_dim}, ambient {ambient}")]
    NotComplementary {
        range_dim: usize,
        null_dim: usize,
        span_dim: usize,
        ambient: usize,
    },
    #[error("pair (W, S) failed the compatibility test")]
    NotCompatible,
    #[error("equation has no solution: {0:?} fails")]
    Infeasible(Inclusion),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
