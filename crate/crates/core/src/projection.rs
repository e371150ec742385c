use crate::error::{Error, Result};
use crate::linalg::{ensure_dim, frobenius, identity};
use crate::scalar::{ComplexMatrix, Real};
use crate::subspace::Subspace;
use crate::tolerance::Tolerance;

/// Idempotent `P_{M//N}` with its range `M` and nullspace `N`.
#[derive(Debug, Clone)]
pub struct Projection<T: Real> {
    matrix: ComplexMatrix<T>,
    range: Subspace<T>,
    nullspace: Subspace<T>,
}

impl<T: Real> Projection<T> {
    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn range(&self) -> &Subspace<T> {
        &self.range
    }

    pub fn nullspace(&self) -> &Subspace<T> {
        &self.nullspace
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `I − P = P_{N//M}`
    pub fn complementary(&self) -> Self {
        Self {
            matrix: identity::<T>(self.dim()) - &self.matrix,
            range: self.nullspace.clone(),
            nullspace: self.range.clone(),
        }
    }

    /// Orthogonal projection `P_S`.
    pub fn orthogonal(s: &Subspace<T>) -> Self {
        Self {
            matrix: s.projector(),
            range: s.clone(),
            nullspace: s.complement(),
        }
    }

    /// `‖P² − P‖_F`
    pub fn idempotence_defect(&self) -> T {
        frobenius(&(&self.matrix * &self.matrix - &self.matrix))
    }
}

/// `P_{M//N}` for `M ∔ N = C^n`.
///
/// With `Z` an orthonormal basis of `N^⊥`, `P = Q_M (Z* Q_M)^{-1} Z*`; the
/// `k×k` core is invertible exactly when the sum is direct.
pub fn oblique_projection<T: Real>(
    range: &Subspace<T>,
    nullspace: &Subspace<T>,
    tol: &Tolerance<T>,
) -> Result<Projection<T>> {
    let n = range.ambient_dim();
    ensure_dim(n, nullspace.ambient_dim(), "oblique projection")?;
    let span_dim = range.sum(nullspace, tol)?.dim();
    if range.dim() + nullspace.dim() != n || span_dim != n {
        return Err(Error::NotComplementary {
            range_dim: range.dim(),
            null_dim: nullspace.dim(),
            span_dim,
            ambient: n,
        });
    }
    let z = nullspace.complement();
    let core = z.basis().adjoint() * range.basis();
    let inv = if core.is_empty() {
        core.clone()
    } else {
        core.clone().try_inverse().ok_or(Error::NotComplementary {
            range_dim: range.dim(),
            null_dim: nullspace.dim(),
            span_dim,
            ambient: n,
        })?
    };
    let matrix = range.basis() * inv * z.basis().adjoint();
    Ok(Projection {
        matrix,
        range: range.clone(),
        nullspace: nullspace.clone(),
    })
}
