use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::linalg::{self, ensure_dim, frobenius, modulus, spectral_norm};
use crate::scalar::{ComplexMatrix, Real};
use crate::tolerance::Tolerance;

/// A subspace of `C^n`, stored as an orthonormal column basis.
///
/// Each basis column is phase-normalised so that its largest entry is real
/// and positive, which makes bases reproducible for a given input.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace<T: Real> {
    basis: ComplexMatrix<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubspaceOp {
    Sum,
    Intersect,
    OrthoComplement,
    Ominus,
}

impl<T: Real> Subspace<T> {
    /// Wraps columns that are already orthonormal.
    pub(crate) fn from_orthonormal(mut basis: ComplexMatrix<T>) -> Self {
        for mut col in basis.column_iter_mut() {
            let mut best = T::zero();
            for z in col.iter() {
                best = best.max(modulus(*z));
            }
            if best <= T::zero() {
                continue;
            }
            // first entry within rounding of the largest modulus
            let cut = best * (T::one() - T::lit(1e-6));
            if let Some(pivot) = col.iter().copied().find(|z| modulus(*z) >= cut) {
                let phase = pivot.conj() / Complex::new(modulus(pivot), T::zero());
                col *= phase;
            }
        }
        Self { basis }
    }

    /// Orthonormalised span of the columns of `spanning`.
    pub fn span(spanning: &ComplexMatrix<T>, tol: &Tolerance<T>) -> Self {
        linalg::range_scaled(spanning, T::zero(), tol)
    }

    pub fn full(n: usize) -> Self {
        Self {
            basis: ComplexMatrix::identity(n, n),
        }
    }

    pub fn trivial(n: usize) -> Self {
        Self {
            basis: ComplexMatrix::zeros(n, 0),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_trivial(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &ComplexMatrix<T> {
        &self.basis
    }

    /// Orthogonal projector `P_S`.
    pub fn projector(&self) -> ComplexMatrix<T> {
        &self.basis * self.basis.adjoint()
    }

    /// `S^⊥`. Singular values of an orthonormal basis are 0 or 1, so the
    /// split at 1/2 needs no tolerance.
    pub fn complement(&self) -> Self {
        let n = self.ambient_dim();
        if self.is_trivial() {
            return Self::full(n);
        }
        let mut padded = ComplexMatrix::zeros(n, n);
        padded.rows_mut(0, self.dim()).copy_from(&self.basis.adjoint());
        let (sigma, v) = linalg::full_right_svd(&padded);
        let k = sigma
            .iter()
            .filter(|&&s| s > T::lit(0.5))
            .count();
        Self::from_orthonormal(v.columns(k, n - k).into_owned())
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        ensure_dim(self.ambient_dim(), other.ambient_dim(), "subspace ambient")
    }

    /// `S + T`
    pub fn sum(&self, other: &Self, tol: &Tolerance<T>) -> Result<Self> {
        self.check_ambient(other)?;
        let joined = concat_columns(&self.basis, &other.basis);
        Ok(linalg::range_scaled(&joined, T::one(), tol))
    }

    /// `S ∩ T = (S^⊥ + T^⊥)^⊥`
    pub fn intersect(&self, other: &Self, tol: &Tolerance<T>) -> Result<Self> {
        Ok(self.complement().sum(&other.complement(), tol)?.complement())
    }

    /// `M ⊖ N = M ∩ (M ∩ N)^⊥`
    pub fn ominus(&self, other: &Self, tol: &Tolerance<T>) -> Result<Self> {
        let common = self.intersect(other, tol)?;
        self.intersect(&common.complement(), tol)
    }

    /// `‖(I − P_self) Q_other‖`: zero iff `other ⊆ self`.
    pub fn excess(&self, other: &Self) -> Result<T> {
        self.check_ambient(other)?;
        if other.is_trivial() {
            return Ok(T::zero());
        }
        let resid = other.basis() - &self.basis * (self.basis.adjoint() * other.basis());
        Ok(spectral_norm(&resid))
    }

    pub fn contains(&self, other: &Self, tol: &Tolerance<T>) -> Result<bool> {
        Ok(tol.close(self.excess(other)?, T::one()))
    }

    /// Gap between subspaces: the sine of the largest principal angle when
    /// dimensions agree, and 1 when they differ.
    pub fn distance(&self, other: &Self) -> Result<T> {
        Ok(self.excess(other)?.max(other.excess(self)?))
    }

    /// Equality as mutual containment.
    pub fn equals(&self, other: &Self, tol: &Tolerance<T>) -> bool {
        self.distance(other).is_ok_and(|d| tol.close(d, T::one()))
    }

    /// Whether `S + T` is direct: `dim S + dim T = dim(S + T)`.
    pub fn is_direct_with(&self, other: &Self, tol: &Tolerance<T>) -> Result<bool> {
        Ok(self.sum(other, tol)?.dim() == self.dim() + other.dim())
    }

    /// Smallest singular value of the joined bases: positive iff the sum is
    /// direct, and a measure of how far from degenerate it is.
    pub fn direct_sum_margin(&self, other: &Self) -> Result<T> {
        self.check_ambient(other)?;
        if self.dim() + other.dim() > self.ambient_dim() {
            return Ok(T::zero());
        }
        let joined = concat_columns(&self.basis, &other.basis);
        Ok(linalg::singular_values(&joined)
            .last()
            .copied()
            .unwrap_or_else(T::one))
    }

    /// `M(S)`, the image of the subspace under `m`.
    pub fn image(&self, m: &ComplexMatrix<T>, tol: &Tolerance<T>) -> Result<Self> {
        ensure_dim(m.ncols(), self.ambient_dim(), "image: matrix columns vs ambient")?;
        Ok(linalg::range_scaled(&(m * &self.basis), spectral_norm(m), tol))
    }

    /// Frobenius distance between orthogonal projectors; handy in reports.
    pub fn projector_distance(&self, other: &Self) -> T {
        frobenius(&(self.projector() - other.projector()))
    }
}

/// Dispatches one of the four subspace operations. `T` is required for every
/// operation except the orthogonal complement.
pub fn subspace_algebra<T: Real>(
    op: SubspaceOp,
    s: &Subspace<T>,
    t: Option<&Subspace<T>>,
    tol: &Tolerance<T>,
) -> Result<Subspace<T>> {
    let need = || {
        t.ok_or_else(|| Error::DimensionMismatch("second subspace required".into()))
    };
    match op {
        SubspaceOp::Sum => s.sum(need()?, tol),
        SubspaceOp::Intersect => s.intersect(need()?, tol),
        SubspaceOp::OrthoComplement => Ok(s.complement()),
        SubspaceOp::Ominus => s.ominus(need()?, tol),
    }
}

pub fn concat_columns<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let mut out = ComplexMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
    out.columns_mut(0, a.ncols()).copy_from(a);
    out.columns_mut(a.ncols(), b.ncols()).copy_from(b);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real_matrix;

    fn tol() -> Tolerance<f64> {
        Tolerance::default()
    }

    fn e(i: usize, n: usize) -> Subspace<f64> {
        let mut m = ComplexMatrix::zeros(n, 1);
        m[(i, 0)] = Complex::new(1.0, 0.0);
        Subspace::span(&m, &tol())
    }

    #[test]
    fn sum_intersect_ominus_examples() {
        let t = tol();
        let e12 = e(0, 2).sum(&e(1, 2), &t).unwrap();
        assert!(e12.equals(&Subspace::full(2), &t));

        let s = Subspace::span(&real_matrix(&[&[1.0, 0.0], &[1.0, 1.0], &[0.0, 1.0]]), &t);
        assert!(s.intersect(&s, &t).unwrap().equals(&s, &t));

        let m = e(0, 3).sum(&e(1, 3), &t).unwrap();
        assert!(m.ominus(&e(0, 3), &t).unwrap().equals(&e(1, 3), &t));
    }

    #[test]
    fn complement_of_extremes() {
        assert_eq!(Subspace::<f64>::trivial(3).complement().dim(), 3);
        assert_eq!(Subspace::<f64>::full(3).complement().dim(), 0);
        let c = e(1, 3).complement();
        assert!(c.equals(&e(0, 3).sum(&e(2, 3), &tol()).unwrap(), &tol()));
    }

    #[test]
    fn mismatched_ambient_is_rejected() {
        assert!(e(0, 2).sum(&e(0, 3), &tol()).is_err());
        assert!(subspace_algebra(SubspaceOp::Sum, &e(0, 2), None, &tol()).is_err());
    }

    #[test]
    fn phase_normalisation_is_deterministic() {
        let s = Subspace::span(&real_matrix::<f64>(&[&[1.0], &[-2.0]]), &tol());
        let b = s.basis();
        let r5 = 5f64.sqrt();
        assert!((b[(1, 0)] - Complex::new(2.0 / r5, 0.0)).norm() < 1e-15);
        assert!((b[(0, 0)] - Complex::new(-1.0 / r5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn direct_sum_margin_detects_overlap() {
        let t = tol();
        let a = e(0, 2);
        let d = Subspace::span(&real_matrix(&[&[1.0], &[1.0]]), &t);
        assert!(a.is_direct_with(&d, &t).unwrap());
        assert!((a.direct_sum_margin(&d).unwrap() - (1.0 - 0.5f64.sqrt()).sqrt()).abs() < 1e-12);
        assert!(!a.is_direct_with(&a, &t).unwrap());
    }
}
