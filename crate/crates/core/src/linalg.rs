//! Tolerance-aware dense kernel: SVD-based rank, pseudoinverse, range and
//! nullspace, preimages, Löwner comparison and Schatten norms.

use nalgebra::{Complex, ComplexField, SymmetricEigen};

use crate::error::{Error, Result};
use crate::psd::PsdOperator;
use crate::scalar::{ComplexMatrix, Real};
use crate::subspace::Subspace;
use crate::tolerance::Tolerance;

pub(crate) struct ThinSvd<T: Real> {
    pub u: ComplexMatrix<T>,
    pub sigma: Vec<T>,
    pub v: ComplexMatrix<T>,
}

/// One-sided (Hestenes) Jacobi SVD of a matrix with `rows ≥ cols`.
///
/// Returns the singular values in descending order, `U` (columns for zero
/// singular values are zero) and a unitary `V`. Used instead of nalgebra's
/// bidiagonal SVD, which returns inaccurate factors for some rank-deficient
/// inputs.
fn jacobi_svd<T: Real>(m: &ComplexMatrix<T>) -> (Vec<T>, ComplexMatrix<T>, ComplexMatrix<T>) {
    let c = m.ncols();
    let mut a = m.clone();
    let mut v = ComplexMatrix::<T>::identity(c, c);
    let eps = T::default_epsilon() * T::lit(4.0);
    // columns below this are round-off; rotating them only loses accuracy
    let negligible = {
        let f = m.norm() * eps;
        f * f
    };
    for _ in 0..100 {
        let mut rotated = false;
        for p in 0..c {
            for q in p + 1..c {
                let alpha = a.column(p).norm_squared();
                let beta = a.column(q).norm_squared();
                let gamma = a.column(p).dotc(&a.column(q));
                if alpha <= negligible || beta <= negligible {
                    continue;
                }
                let g = gamma.re.hypot(gamma.im);
                if g <= eps * alpha.sqrt() * beta.sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (g + g);
                let sign = if zeta >= T::zero() { T::one() } else { -T::one() };
                let t = sign / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = cs * t;
                let phase = Complex::new(gamma.re / g, -gamma.im / g);
                for mat in [&mut a, &mut v] {
                    for i in 0..mat.nrows() {
                        let xp = mat[(i, p)];
                        let xq = mat[(i, q)] * phase;
                        mat[(i, p)] = xp * scalar(cs) - xq * scalar(sn);
                        mat[(i, q)] = xp * scalar(sn) + xq * scalar(cs);
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<T> = (0..c).map(|j| a.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..c).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(std::cmp::Ordering::Equal));
    let mut u = ComplexMatrix::zeros(a.nrows(), c);
    let mut vs = ComplexMatrix::zeros(c, c);
    let mut sigma = Vec::with_capacity(c);
    let floor = norms[order[0]] * eps * eps;
    for (k, &j) in order.iter().enumerate() {
        let s = norms[j];
        if s > floor && s > T::zero() {
            u.set_column(k, &(a.column(j) * scalar(T::one() / s)));
        }
        vs.set_column(k, &v.column(j));
        sigma.push(s);
    }
    (sigma, u, vs)
}

/// Thin SVD with singular values in descending order. Columns of `u`
/// beyond the numerical rank carry no meaning.
pub(crate) fn thin_svd<T: Real>(m: &ComplexMatrix<T>) -> ThinSvd<T> {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return ThinSvd {
            u: ComplexMatrix::zeros(r, 0),
            sigma: Vec::new(),
            v: ComplexMatrix::zeros(c, 0),
        };
    }
    if r >= c {
        let (sigma, u, v) = jacobi_svd(m);
        ThinSvd { u, sigma, v }
    } else {
        let (sigma, v, u) = jacobi_svd(&m.adjoint());
        ThinSvd { u, sigma, v }
    }
}

/// Right singular vectors forming a full unitary basis of the domain,
/// with the (zero-padded) singular values in descending order.
pub(crate) fn full_right_svd<T: Real>(m: &ComplexMatrix<T>) -> (Vec<T>, ComplexMatrix<T>) {
    let (r, c) = m.shape();
    if c == 0 {
        return (Vec::new(), ComplexMatrix::zeros(0, 0));
    }
    let padded = if r < c {
        let mut p = ComplexMatrix::zeros(c, c);
        if r > 0 {
            p.rows_mut(0, r).copy_from(m);
        }
        p
    } else {
        m.clone()
    };
    let (sigma, _, v) = jacobi_svd(&padded);
    (sigma, v)
}

pub fn singular_values<T: Real>(m: &ComplexMatrix<T>) -> Vec<T> {
    thin_svd(m).sigma
}

pub fn spectral_norm<T: Real>(m: &ComplexMatrix<T>) -> T {
    singular_values(m).first().copied().unwrap_or_else(T::zero)
}

pub fn frobenius<T: Real>(m: &ComplexMatrix<T>) -> T {
    m.norm()
}

pub fn identity<T: Real>(n: usize) -> ComplexMatrix<T> {
    ComplexMatrix::identity(n, n)
}

/// Real diagonal matrix.
pub fn diag<T: Real>(d: &[f64]) -> ComplexMatrix<T> {
    let n = d.len();
    ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex::new(T::lit(d[i]), T::zero())
        } else {
            Complex::new(T::zero(), T::zero())
        }
    })
}

/// Real matrix from rows.
pub fn real_matrix<T: Real>(rows: &[&[f64]]) -> ComplexMatrix<T> {
    let r = rows.len();
    let c = rows.first().map_or(0, |x| x.len());
    ComplexMatrix::from_fn(r, c, |i, j| Complex::new(T::lit(rows[i][j]), T::zero()))
}

pub fn is_finite<T: Real>(m: &ComplexMatrix<T>) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub(crate) fn ensure_finite<T: Real>(m: &ComplexMatrix<T>) -> Result<()> {
    if is_finite(m) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

pub(crate) fn ensure_square<T: Real>(m: &ComplexMatrix<T>, what: &str) -> Result<usize> {
    if m.nrows() == m.ncols() {
        Ok(m.nrows())
    } else {
        Err(Error::DimensionMismatch(format!(
            "{what} must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )))
    }
}

pub(crate) fn ensure_same_shape<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<()> {
    if a.shape() == b.shape() {
        Ok(())
    } else {
        Err(Error::ShapeMismatch {
            left: a.shape(),
            right: b.shape(),
        })
    }
}

pub(crate) fn ensure_dim(expected: usize, got: usize, what: &str) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!(
            "{what}: expected dimension {expected}, got {got}"
        )))
    }
}

fn count_above<T: Real>(sigma: &[T], cutoff: T) -> usize {
    let smax = sigma.first().copied().unwrap_or_else(T::zero);
    if smax <= T::zero() {
        return 0;
    }
    sigma.iter().filter(|&&s| s > cutoff).count()
}

/// Numerical rank with the cutoff `rank_rel * max(σ_max, scale)`.
///
/// `scale = 0` gives the plain relative rule. A positive scale is used when
/// `m` is a computed difference or product whose natural magnitude is set by
/// its inputs rather than by itself.
pub fn rank_scaled<T: Real>(m: &ComplexMatrix<T>, scale: T, tol: &Tolerance<T>) -> usize {
    let sigma = singular_values(m);
    let smax = sigma.first().copied().unwrap_or_else(T::zero);
    count_above(&sigma, tol.rank_cutoff(smax.max(scale)))
}

pub fn rank<T: Real>(m: &ComplexMatrix<T>, tol: &Tolerance<T>) -> usize {
    rank_scaled(m, T::zero(), tol)
}

pub(crate) fn pinv_scaled<T: Real>(
    m: &ComplexMatrix<T>,
    scale: T,
    tol: &Tolerance<T>,
) -> (usize, ComplexMatrix<T>) {
    let (r, c) = m.shape();
    let svd = thin_svd(m);
    let smax = svd.sigma.first().copied().unwrap_or_else(T::zero);
    let k = count_above(&svd.sigma, tol.rank_cutoff(smax.max(scale)));
    let mut pinv = ComplexMatrix::zeros(c, r);
    for i in 0..k {
        let inv = Complex::new(T::one() / svd.sigma[i], T::zero());
        pinv += svd.v.column(i) * svd.u.column(i).adjoint() * inv;
    }
    (k, pinv)
}

/// Numerical rank and Moore-Penrose pseudoinverse. The zero matrix maps to
/// the zero matrix of transposed shape.
pub fn rank_and_pinv<T: Real>(m: &ComplexMatrix<T>, tol: &Tolerance<T>) -> (usize, ComplexMatrix<T>) {
    pinv_scaled(m, T::zero(), tol)
}

pub fn pinv<T: Real>(m: &ComplexMatrix<T>, tol: &Tolerance<T>) -> ComplexMatrix<T> {
    rank_and_pinv(m, tol).1
}

pub(crate) fn range_scaled<T: Real>(m: &ComplexMatrix<T>, scale: T, tol: &Tolerance<T>) -> Subspace<T> {
    let svd = thin_svd(m);
    let smax = svd.sigma.first().copied().unwrap_or_else(T::zero);
    let k = count_above(&svd.sigma, tol.rank_cutoff(smax.max(scale)));
    Subspace::from_orthonormal(svd.u.columns(0, k).into_owned())
}

pub(crate) fn nullspace_scaled<T: Real>(
    m: &ComplexMatrix<T>,
    scale: T,
    tol: &Tolerance<T>,
) -> Subspace<T> {
    let c = m.ncols();
    let (sigma, v) = full_right_svd(m);
    let smax = sigma.first().copied().unwrap_or_else(T::zero);
    let k = count_above(&sigma, tol.rank_cutoff(smax.max(scale))).min(c);
    Subspace::from_orthonormal(v.columns(k, c - k).into_owned())
}

/// Range (column space) and nullspace of `m`.
pub fn range_nullspace<T: Real>(m: &ComplexMatrix<T>, tol: &Tolerance<T>) -> (Subspace<T>, Subspace<T>) {
    (range_scaled(m, T::zero(), tol), nullspace_scaled(m, T::zero(), tol))
}

/// `{x : Mx ∈ S}`, computed as the nullspace of `P_{S^⊥} M`.
pub fn preimage<T: Real>(m: &ComplexMatrix<T>, s: &Subspace<T>, tol: &Tolerance<T>) -> Result<Subspace<T>> {
    ensure_dim(m.nrows(), s.ambient_dim(), "preimage: subspace ambient vs rows")?;
    let perp = s.complement();
    let projected = perp.basis().adjoint() * m;
    Ok(nullspace_scaled(&projected, spectral_norm(m), tol))
}

/// `(M + M*) / 2`
pub fn hermitian_part<T: Real>(m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    (m + m.adjoint()) * Complex::new(T::lit(0.5), T::zero())
}

pub(crate) fn ensure_hermitian<T: Real>(m: &ComplexMatrix<T>, tol: &Tolerance<T>) -> Result<()> {
    let asym = frobenius(&(m - m.adjoint()));
    if tol.close(asym, frobenius(m)) {
        Ok(())
    } else {
        Err(Error::NotHermitian {
            asymmetry: asym.as_f64(),
        })
    }
}

/// Eigenpairs of a Hermitian matrix, eigenvalues descending.
pub(crate) fn hermitian_eigen<T: Real>(m: &ComplexMatrix<T>) -> (Vec<T>, ComplexMatrix<T>) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), ComplexMatrix::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, k| eig.eigenvectors[(r, order[k])]);
    (values, vectors)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue<T: Real>(m: &ComplexMatrix<T>) -> T {
    hermitian_eigen(m).0.last().copied().unwrap_or_else(T::zero)
}

/// `X ≤ Y` in the Löwner order: the smallest eigenvalue of `Y − X` is at
/// least `−(cmp_abs + cmp_rel·‖Y − X‖)`.
pub fn loewner_leq<T: Real>(x: &ComplexMatrix<T>, y: &ComplexMatrix<T>, tol: &Tolerance<T>) -> Result<bool> {
    ensure_same_shape(x, y)?;
    ensure_square(x, "loewner_leq operand")?;
    ensure_hermitian(x, tol)?;
    ensure_hermitian(y, tol)?;
    let (values, _) = hermitian_eigen(&(y - x));
    let lo = values.last().copied().unwrap_or_else(T::zero);
    let hi = values.first().copied().unwrap_or_else(T::zero);
    let norm = lo.abs().max(hi.abs());
    Ok(lo >= -tol.slack(norm))
}

/// Schatten norm of `m`: the ℓ_p norm of its singular values. `p = ∞`
/// gives the operator norm.
pub fn schatten_norm<T: Real>(m: &ComplexMatrix<T>, p: f64) -> T {
    assert!(p >= 1.0, "Schatten index must be at least 1");
    let sigma = singular_values(m);
    let smax = sigma.first().copied().unwrap_or_else(T::zero);
    if smax <= T::zero() {
        return T::zero();
    }
    if p.is_infinite() {
        return smax;
    }
    let pt = T::lit(p);
    let sum = sigma
        .iter()
        .fold(T::zero(), |acc, &s| acc + (s / smax).powf(pt));
    smax * sum.powf(T::one() / pt)
}

/// `‖X‖_{p,W} = ‖W^{1/2} X‖_p`.
pub fn weighted_schatten_norm<T: Real>(x: &ComplexMatrix<T>, p: f64, w: &PsdOperator<T>) -> Result<T> {
    ensure_dim(w.dim(), x.nrows(), "weighted Schatten norm: weight vs rows")?;
    Ok(schatten_norm(&(w.sqrt() * x), p))
}

/// Cosine of the Dixmier angle: `‖P_S P_T‖`.
pub fn dixmier_cosine<T: Real>(s: &Subspace<T>, t: &Subspace<T>) -> Result<T> {
    ensure_dim(s.ambient_dim(), t.ambient_dim(), "dixmier_cosine")?;
    Ok(spectral_norm(&(s.basis().adjoint() * t.basis())).min(T::one()))
}

pub(crate) fn scalar<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

pub(crate) fn modulus<T: Real>(z: Complex<T>) -> T {
    ComplexField::modulus(z)
}

#[cfg(test)]
mod svd_tests {
    use super::*;
    #[test]
    fn jacobi_svd_is_accurate_on_rank_deficient_inputs() {
        let t = Tolerance::<f64>::default();
        let mut r = crate::sampling::rng(2);
        let mut worst = 0.0f64;
        for i in 0..3000 {
            let s = crate::sampling::subspace_any::<f64, _>(&mut r, 4, &t);
            let mut padded = ComplexMatrix::<f64>::zeros(4, 4);
            padded.rows_mut(0, s.dim()).copy_from(&s.basis().adjoint());
            let (_, _u, v) = jacobi_svd(&padded);
            let e = frobenius(&(v.adjoint() * &v - ComplexMatrix::<f64>::identity(4, 4)));
            assert!(e < 1e-13, "{e}");
            let n = 2 + i % 7;
            let m = crate::sampling::matrix_of_rank::<f64, _>(&mut r, n, n + i % 3, i % (n + 1));
            let svd = thin_svd(&m);
            let k = count_above(&svd.sigma, 1e-10 * svd.sigma[0]);
            let mut recon = ComplexMatrix::<f64>::zeros(m.nrows(), m.ncols());
            for j in 0..k { recon += svd.u.column(j) * svd.v.column(j).adjoint() * scalar(svd.sigma[j]); }
            worst = worst.max(frobenius(&(recon - &m)) / (frobenius(&m) + 1.0));
            let uk = svd.u.columns(0, k);
            assert!(frobenius(&(uk.adjoint() * uk - ComplexMatrix::<f64>::identity(k, k))) < 1e-12);
        }
        assert!(worst < 1e-13, "{worst}");
    }
}
