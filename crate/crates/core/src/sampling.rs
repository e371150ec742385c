//! Seeded random instance generators for the verification reports and the
//! `verify` suites. All generators are deterministic in the RNG state.

use nalgebra::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{self, scalar, spectral_norm};
use crate::psd::PsdOperator;
use crate::scalar::{ComplexMatrix, Real};
use crate::subspace::{concat_columns, Subspace};
use crate::tolerance::Tolerance;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries with independent `N(0, 1/2)` real and imaginary parts.
pub fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix<T> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex::new(T::lit(re * h), T::lit(im * h))
    })
}

/// Haar-distributed unitary matrix.
pub fn unitary<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix<T> {
    let qr = gaussian::<T, R>(rng, n, n).qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let m = linalg::modulus(d);
        if m > T::zero() {
            let phase = d / scalar(m);
            let mut col = q.column_mut(j);
            col *= phase;
        }
    }
    q
}

/// Random Hermitian matrix.
pub fn hermitian<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix<T> {
    linalg::hermitian_part(&gaussian::<T, R>(rng, n, n))
}

/// `U diag(λ) U*` with `rank` eigenvalues log-uniform in `[0.1, 10]` and the
/// rest exactly zero.
pub fn psd_matrix<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> ComplexMatrix<T> {
    let u = unitary::<T, R>(rng, n);
    let mut out = ComplexMatrix::zeros(n, n);
    for k in 0..rank.min(n) {
        let lambda = 10f64.powf(rng.random_range(-1.0..1.0));
        let col = u.column(k);
        out += col * col.adjoint() * scalar(T::lit(lambda));
    }
    linalg::hermitian_part(&out)
}

/// PSD weight of uniformly random rank in `0..=n`.
pub fn psd_mixed_rank<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    tol: &Tolerance<T>,
) -> PsdOperator<T> {
    let rank = rng.random_range(0..=n);
    PsdOperator::new(psd_matrix(rng, n, rank), tol).expect("generated matrix is PSD")
}

/// Positive definite weight.
pub fn psd_full_rank<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize, tol: &Tolerance<T>) -> PsdOperator<T> {
    PsdOperator::new(psd_matrix(rng, n, n), tol).expect("generated matrix is PSD")
}

/// `G = (H/‖H‖ + I)/2` for a random Hermitian `H`, so `0 ≤ G ≤ I`.
pub fn contraction<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix<T> {
    let h = hermitian::<T, R>(rng, n);
    let norm = spectral_norm(&h) + T::lit(1e-12);
    let half = scalar(T::lit(0.5));
    (h / scalar(norm) + ComplexMatrix::identity(n, n)) * half
}

pub fn subspace<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    dim: usize,
    tol: &Tolerance<T>,
) -> Subspace<T> {
    Subspace::span(&gaussian::<T, R>(rng, n, dim), tol)
}

/// Subspace of uniformly random dimension in `0..=n`.
pub fn subspace_any<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize, tol: &Tolerance<T>) -> Subspace<T> {
    let dim = rng.random_range(0..=n);
    subspace(rng, n, dim, tol)
}

/// Random `T` with `S ∔ T = C^n`; degenerate draws are redrawn at most 100 times.
pub fn complement<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    s: &Subspace<T>,
    tol: &Tolerance<T>,
) -> Result<Subspace<T>> {
    let n = s.ambient_dim();
    for _ in 0..100 {
        let t = subspace(rng, n, n - s.dim(), tol);
        if t.dim() + s.dim() == n && s.is_direct_with(&t, tol)? {
            return Ok(t);
        }
    }
    Err(Error::HypothesisViolated(
        "no complementary subspace found in 100 draws".into(),
    ))
}

/// Random matrix of rank `k` (generically).
pub fn matrix_of_rank<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    k: usize,
) -> ComplexMatrix<T> {
    gaussian::<T, R>(rng, rows, k) * gaussian::<T, R>(rng, k, cols)
}

/// `P_{(W·U)^⊥} G` for a random `G` with `cols` columns.
fn w_orthogonal_to<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    w: &PsdOperator<T>,
    u: &ComplexMatrix<T>,
    cols: usize,
    tol: &Tolerance<T>,
) -> ComplexMatrix<T> {
    let n = w.dim();
    let wu = Subspace::span(&(w.matrix() * u), tol);
    wu.complement().projector() * gaussian::<T, R>(rng, n, cols)
}

/// Pair `(A, B)` with `A ≤⁻ B`, built as `B = A + U₂V₂*` with independent
/// factor columns, so ranks add.
pub fn minus_pair<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> (ComplexMatrix<T>, ComplexMatrix<T>) {
    let total = rng.random_range(1..=n);
    let k1 = rng.random_range(0..=total);
    let u = gaussian::<T, R>(rng, n, total);
    let v = gaussian::<T, R>(rng, n, total);
    let a = u.columns(0, k1) * v.columns(0, k1).adjoint();
    let d = u.columns(k1, total - k1) * v.columns(k1, total - k1).adjoint();
    let b = &a + d;
    (a, b)
}

/// Unstructured pair of random rank-deficient matrices.
pub fn random_pair<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> (ComplexMatrix<T>, ComplexMatrix<T>) {
    let ka = rng.random_range(0..=n);
    let kb = rng.random_range(0..=n);
    (matrix_of_rank(rng, n, n, ka), matrix_of_rank(rng, n, n, kb))
}

/// `(A, D)` with `A ≤_{*W} A + D` on the left; when `two_sided` the right
/// weighted-star condition holds as well.
pub fn weighted_star_pair<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    w: &PsdOperator<T>,
    two_sided: bool,
    tol: &Tolerance<T>,
) -> (ComplexMatrix<T>, ComplexMatrix<T>) {
    let n = w.dim();
    let total = rng.random_range(1..=n);
    let k1 = rng.random_range(0..=total);
    let k2 = total - k1;
    let u1 = gaussian::<T, R>(rng, n, k1);
    let v1 = gaussian::<T, R>(rng, n, k1);
    let u2 = w_orthogonal_to(rng, w, &u1, k2, tol);
    let v2 = if two_sided {
        w_orthogonal_to(rng, w, &v1, k2, tol)
    } else {
        gaussian::<T, R>(rng, n, k2)
    };
    (&u1 * v1.adjoint(), &u2 * v2.adjoint())
}

/// Which relation a generated chain is built for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainKind {
    Minus,
    Star,
    WeightedStar,
}

/// `A ≤ B ≤ C` with `B = A + C₁`, `C = B + C₂` for the chosen relation.
///
/// * minus: independent factor columns,
/// * star: orthonormal factor columns,
/// * weighted star: factor columns mutually `W`-orthogonal on both sides.
pub fn chain<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    kind: ChainKind,
    w: &PsdOperator<T>,
    tol: &Tolerance<T>,
) -> [ComplexMatrix<T>; 3] {
    let n = w.dim();
    let total = rng.random_range(1..=n);
    let k1 = rng.random_range(0..=total);
    let k2 = rng.random_range(0..=total - k1);
    let k3 = total - k1 - k2;
    let ks = [k1, k2, k3];
    let factor = |rng: &mut R| -> ComplexMatrix<T> {
        match kind {
            ChainKind::Minus => gaussian::<T, R>(rng, n, total),
            ChainKind::Star => unitary::<T, R>(rng, n).columns(0, total).into_owned(),
            ChainKind::WeightedStar => {
                let mut acc = ComplexMatrix::zeros(n, 0);
                for &k in &ks {
                    let next = w_orthogonal_to(rng, w, &acc, k, tol);
                    acc = concat_columns(&acc, &next);
                }
                acc
            }
        }
    };
    let u = factor(rng);
    let v = factor(rng);
    let piece = |start: usize, len: usize| u.columns(start, len) * v.columns(start, len).adjoint();
    let a = piece(0, k1);
    let b = &a + piece(k1, k2);
    let c = &b + piece(k1 + k2, k3);
    [a, b, c]
}

/// `B = U·P_{N(A*W)^⊥}` with `U` Haar unitary, so that `N(B) = N(A*W)` and
/// `‖B†‖ = 1`.
pub fn nullspace_matched_factor<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    a: &ComplexMatrix<T>,
    w: &PsdOperator<T>,
    tol: &Tolerance<T>,
) -> ComplexMatrix<T> {
    let n = a.nrows();
    let aw = a.adjoint() * w.matrix();
    let null = linalg::nullspace_scaled(&aw, spectral_norm(a) * w.norm(), tol);
    unitary::<T, R>(rng, n) * null.complement().projector()
}
