use crate::error::{Error, Result};
use crate::linalg::{self, ensure_finite, ensure_hermitian, ensure_square, scalar};
use crate::scalar::{ComplexMatrix, Real};
use crate::subspace::Subspace;
use crate::tolerance::Tolerance;

/// Hermitian positive semidefinite operator with its spectral decomposition
/// and square root.
///
/// Eigenvalues with `|λ| ≤ rank_rel·λ_max` are set to exactly zero, and small
/// negative ones down to `−(cmp_abs + cmp_rel·λ_max)` are clamped to zero.
/// Anything more negative is rejected. When clamping changed the spectrum the
/// stored matrix is rebuilt from it, so `sqrt² = matrix` holds to rounding.
#[derive(Debug, Clone)]
pub struct PsdOperator<T: Real> {
    matrix: ComplexMatrix<T>,
    eigenvalues: Vec<T>,
    eigenvectors: ComplexMatrix<T>,
    sqrt: ComplexMatrix<T>,
    rank: usize,
}

impl<T: Real> PsdOperator<T> {
    pub fn new(matrix: ComplexMatrix<T>, tol: &Tolerance<T>) -> Result<Self> {
        Self::with_scale(matrix, T::zero(), tol)
    }

    /// Like [`new`](Self::new), with spectral decisions made relative to
    /// `max(λ_max, scale)`. Use it for computed operators such as `W_{/S}`,
    /// whose natural size is that of `W`: a result made only of round-off
    /// then has rank 0.
    pub fn with_scale(matrix: ComplexMatrix<T>, scale: T, tol: &Tolerance<T>) -> Result<Self> {
        ensure_finite(&matrix)?;
        ensure_square(&matrix, "PSD operator")?;
        ensure_hermitian(&matrix, tol)?;
        let herm = linalg::hermitian_part(&matrix);
        let (mut values, vectors) = linalg::hermitian_eigen(&herm);
        let lmax = values.first().copied().unwrap_or_else(T::zero).max(scale).max(T::zero());
        let floor = -tol.slack(lmax);
        let cutoff = tol.rank_cutoff(lmax);
        let mut clamped = false;
        for v in values.iter_mut() {
            if *v < floor {
                return Err(Error::NotPsd {
                    min_eigenvalue: v.as_f64(),
                });
            }
            if *v <= cutoff && *v != T::zero() {
                *v = T::zero();
                clamped = true;
            }
        }
        let rank = values.iter().filter(|&&v| v > T::zero()).count();
        let rebuild = |f: &dyn Fn(T) -> T| {
            let mut out = ComplexMatrix::zeros(vectors.nrows(), vectors.nrows());
            for (k, &v) in values.iter().enumerate().take(rank) {
                let col = vectors.column(k);
                out += col * col.adjoint() * scalar(f(v));
            }
            out
        };
        let sqrt = rebuild(&|v: T| v.sqrt());
        let matrix = if clamped { rebuild(&|v: T| v) } else { herm };
        Ok(Self {
            matrix,
            eigenvalues: values,
            eigenvectors: vectors,
            sqrt,
            rank,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(n, n),
            eigenvalues: vec![T::one(); n],
            eigenvectors: ComplexMatrix::identity(n, n),
            sqrt: ComplexMatrix::identity(n, n),
            rank: n,
        }
    }

    pub fn zero(n: usize) -> Self {
        Self {
            matrix: ComplexMatrix::zeros(n, n),
            eigenvalues: vec![T::zero(); n],
            eigenvectors: ComplexMatrix::identity(n, n),
            sqrt: ComplexMatrix::zeros(n, n),
            rank: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    /// `W^{1/2}`
    pub fn sqrt(&self) -> &ComplexMatrix<T> {
        &self.sqrt
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    /// Unitary eigenvector matrix, columns ordered as [`Self::eigenvalues`].
    pub fn eigenvectors(&self) -> &ComplexMatrix<T> {
        &self.eigenvectors
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn range(&self) -> Subspace<T> {
        Subspace::from_orthonormal(self.eigenvectors.columns(0, self.rank).into_owned())
    }

    pub fn nullspace(&self) -> Subspace<T> {
        let n = self.dim();
        Subspace::from_orthonormal(self.eigenvectors.columns(self.rank, n - self.rank).into_owned())
    }

    /// Largest eigenvalue, i.e. the operator norm.
    pub fn norm(&self) -> T {
        self.eigenvalues.first().copied().unwrap_or_else(T::zero)
    }

    pub fn trace(&self) -> T {
        self.eigenvalues.iter().fold(T::zero(), |a, &b| a + b)
    }
}
