//! Shorted operator `W_{/S}` and compression `W_S = W − W_{/S}`.
//!
//! The production route is `W_{/S} = W^{1/2} P_K W^{1/2}` with
//! `K = (W^{1/2})^{-1}(S^⊥)`. The generalized Schur complement of the
//! `S`-block is kept as an independent cross-check.

use crate::compat;
use crate::error::Result;
use crate::linalg::{self, ensure_dim, frobenius, loewner_leq, min_eigenvalue, spectral_norm};
use crate::orders;
use crate::projection::oblique_projection;
use crate::psd::PsdOperator;
use crate::report::Report;
use crate::sampling;
use crate::scalar::{ComplexMatrix, Real};
use crate::subspace::Subspace;
use crate::tolerance::Tolerance;

#[derive(Debug, Clone)]
pub struct ShortedResult<T: Real> {
    /// `W_{/S}`
    pub shorted: PsdOperator<T>,
    /// `W_S = W − W_{/S}`
    pub compression: PsdOperator<T>,
    pub shorted_range: Subspace<T>,
    pub shorted_nullspace: Subspace<T>,
    pub compression_nullspace: Subspace<T>,
}

fn check_dims<T: Real>(w: &PsdOperator<T>, s: &Subspace<T>) -> Result<()> {
    ensure_dim(w.dim(), s.ambient_dim(), "weight vs subspace ambient")
}

/// `K = (W^{1/2})^{-1}(S^⊥)`
fn pekarev_kernel<T: Real>(w: &PsdOperator<T>, s: &Subspace<T>, tol: &Tolerance<T>) -> Result<Subspace<T>> {
    linalg::preimage(w.sqrt(), &s.complement(), tol)
}

/// `W^{1/2} P_K W^{1/2}` as a plain matrix.
pub fn shorted_matrix<T: Real>(
    w: &PsdOperator<T>,
    s: &Subspace<T>,
    tol: &Tolerance<T>,
) -> Result<ComplexMatrix<T>> {
    check_dims(w, s)?;
    let k = pekarev_kernel(w, s, tol)?;
    let half = w.sqrt() * k.basis();
    Ok(linalg::hermitian_part(&(&half * half.adjoint())))
}

pub fn shorted_operator<T: Real>(
    w: &PsdOperator<T>,
    s: &Subspace<T>,
    tol: &Tolerance<T>,
) -> Result<ShortedResult<T>> {
    let shorted = PsdOperator::with_scale(shorted_matrix(w, s, tol)?, w.norm(), tol)?;
    let compression = PsdOperator::with_scale(w.matrix() - shorted.matrix(), w.norm(), tol)?;
    Ok(ShortedResult {
        shorted_range: shorted.range(),
        shorted_nullspace: shorted.nullspace(),
        compression_nullspace: compression.nullspace(),
        shorted,
        compression,
    })
}

/// Compression `W_S` only.
pub fn compression_matrix<T: Real>(
    w: &PsdOperator<T>,
    s: &Subspace<T>,
    tol: &Tolerance<T>,
) -> Result<ComplexMatrix<T>> {
    Ok(w.matrix() - shorted_matrix(w, s, tol)?)
}

/// Generalized Schur complement oracle.
///
/// In the unitary basis `[Q_{S^⊥} Q_S]`, `W = [[W11, W12], [W12*, W22]]` and
/// the result is `(W11 − W12 W22† W12*) ⊕ 0` mapped back.
pub fn shorted_schur_oracle<T: Real>(
    w: &PsdOperator<T>,
    s: &Subspace<T>,
    tol: &Tolerance<T>,
) -> Result<ComplexMatrix<T>> {
    check_dims(w, s)?;
    let qs = s.basis();
    let qp = s.complement().basis().clone();
    let wm = w.matrix();
    let w11 = qp.adjoint() * wm * &qp;
    let w12 = qp.adjoint() * wm * qs;
    let w22 = qs.adjoint() * wm * qs;
    let (_, w22_pinv) = linalg::pinv_scaled(&w22, w.norm(), tol);
    let schur = w11 - &w12 * w22_pinv * w12.adjoint();
    Ok(linalg::hermitian_part(&(&qp * schur * qp.adjoint())))
}

/// `W^{1/2} P_K G P_K W^{1/2}`, a member of `M(W,S)` whenever `0 ≤ G ≤ I`.
pub fn dominated_member<T: Real>(
    w: &PsdOperator<T>,
    s: &Subspace<T>,
    g: &ComplexMatrix<T>,
    tol: &Tolerance<T>,
) -> Result<ComplexMatrix<T>> {
    check_dims(w, s)?;
    ensure_dim(w.dim(), g.nrows(), "contraction size")?;
    let pk = pekarev_kernel(w, s, tol)?.projector();
    let x = w.sqrt() * &pk * g * &pk * w.sqrt();
    Ok(linalg::hermitian_part(&x))
}

/// Seeded member of `M(W,S) = {X : 0 ≤ X ≤ W, R(X) ⊆ S^⊥}`.
pub fn sample_dominated<T: Real>(
    w: &PsdOperator<T>,
    s: &Subspace<T>,
    seed: u64,
    tol: &Tolerance<T>,
) -> Result<ComplexMatrix<T>> {
    let g = sampling::contraction::<T, _>(&mut sampling::rng(seed), w.dim());
    dominated_member(w, s, &g, tol)
}

fn rel_diff<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>, w: &PsdOperator<T>) -> f64 {
    (frobenius(&(a - b)) / (frobenius(w.matrix()) + T::one())).as_f64()
}

/// Löwner violation `max(0, −λ_min(Y − X))`.
fn loewner_violation<T: Real>(x: &ComplexMatrix<T>, y: &ComplexMatrix<T>) -> f64 {
    (-min_eigenvalue(&linalg::hermitian_part(&(y - x)))).max(T::zero()).as_f64()
}

/// Checks the characterisations of `W_{/S}` on one instance:
/// Schur agreement, maximality over `M(W,S)`, the projection infimum and
/// its attainment, idempotence `W_{/S} = W_{/N(W_{/S})}`, the companion
/// identity `W(N(W_{/S}))^⊥ = W(S)^⊥`, and the finite-dimensional range and
/// nullspace identities.
pub fn verify_shorted<T: Real>(
    w: &PsdOperator<T>,
    s: &Subspace<T>,
    samples: usize,
    seed: u64,
    tol: &Tolerance<T>,
) -> Result<Report> {
    check_dims(w, s)?;
    let n = w.dim();
    let mut rng = sampling::rng(seed);
    let mut rep = Report::new("shorted operator");
    let res = shorted_operator(w, s, tol)?;
    let ws = res.shorted.matrix();
    let one = T::one();
    let cmp = tol.cmp_abs.as_f64();

    let schur = shorted_schur_oracle(w, s, tol)?;
    let r = rel_diff(ws, &schur, w);
    rep.check("pekarev_vs_schur", r <= cmp, r);

    let mut worst = 0.0f64;
    let mut ok = true;
    let p_s = s.projector();
    for _ in 0..samples {
        let g = sampling::contraction::<T, _>(&mut rng, n);
        let x = dominated_member(w, s, &g, tol)?;
        let in_range = tol.close(spectral_norm(&(&p_s * &x)), spectral_norm(&x));
        let below_shorted = loewner_leq(&x, ws, tol)?;
        let below_w = loewner_leq(&x, w.matrix(), tol)?;
        ok &= in_range && below_shorted && below_w;
        worst = worst.max(loewner_violation(&x, ws));
    }
    rep.check("maximality", ok, worst);

    let mut worst = 0.0f64;
    let mut ok = true;
    for _ in 0..samples {
        let t = sampling::complement(&mut rng, s, tol)?;
        let e = oblique_projection(&t, s, tol)?;
        let ewe = e.matrix().adjoint() * w.matrix() * e.matrix();
        ok &= loewner_leq(ws, &linalg::hermitian_part(&ewe), tol)?;
        worst = worst.max(loewner_violation(ws, &ewe));
    }
    rep.check("projection_infimum", ok, worst);

    let q = compat::canonical_projection(w, s, tol)?;
    let e0 = q.complementary();
    let attained = e0.matrix().adjoint() * w.matrix() * e0.matrix();
    let r = rel_diff(&attained, ws, w);
    rep.check("projection_infimum_attained", r <= cmp, r);

    let again = shorted_matrix(w, &res.shorted_nullspace, tol)?;
    let r = rel_diff(&again, ws, w);
    rep.check("idempotence", r <= cmp, r);

    let lhs = res.shorted_nullspace.image(w.matrix(), tol)?.complement();
    let rhs = s.image(w.matrix(), tol)?.complement();
    let d = lhs.distance(&rhs)?;
    rep.check("companion_identity", tol.close(d, one), d.as_f64());

    let range_target = w.range().intersect(&s.complement(), tol)?;
    let d = res.shorted_range.distance(&range_target)?;
    rep.check("range_identity", tol.close(d, one), d.as_f64());
    let null_target = w.nullspace().sum(s, tol)?;
    let d = res.shorted_nullspace.distance(&null_target)?;
    rep.check("nullspace_identity", tol.close(d, one), d.as_f64());
    let companion = compat::w_companion(w, s, tol)?;
    let d = res.compression_nullspace.distance(&companion)?;
    rep.check("compression_nullspace_identity", tol.close(d, one), d.as_f64());
    rep.note_last("inclusions collapse to equalities in finite dimension");

    // Members of M⁻(W,S): compressions of W_{/S} to random subspaces.
    let mut ok = true;
    for _ in 0..samples.min(20) {
        let t = sampling::subspace_any(&mut rng, n, tol);
        let x = compression_matrix(&res.shorted, &t, tol)?;
        let member = orders::leq_minus(&x, w.matrix(), tol)?.holds;
        ok &= !member || orders::leq_minus(&x, ws, tol)?.holds;
    }
    rep.check("minus_maximality", ok, 0.0);

    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag, identity, real_matrix};

    fn tol() -> Tolerance<f64> {
        Tolerance::default()
    }

    fn span(rows: &[&[f64]]) -> Subspace<f64> {
        Subspace::span(&real_matrix(rows), &tol())
    }

    fn psd(rows: &[&[f64]]) -> PsdOperator<f64> {
        PsdOperator::new(real_matrix(rows), &tol()).unwrap()
    }

    fn close(a: &ComplexMatrix<f64>, b: &ComplexMatrix<f64>, eps: f64) -> bool {
        frobenius(&(a - b)) <= eps
    }

    #[test]
    fn identity_weight_gives_orthogonal_projection() {
        let r = shorted_operator(&PsdOperator::identity(2), &span(&[&[1.0], &[0.0]]), &tol()).unwrap();
        assert!(close(r.shorted.matrix(), &diag(&[0.0, 1.0]), 1e-14));
    }

    #[test]
    fn running_example() {
        // Schur complement of the e1-block of [[2,1],[1,1]]: 1 − 1·(1/2)·1 = 1/2.
        let w = psd(&[&[2.0, 1.0], &[1.0, 1.0]]);
        let s = span(&[&[1.0], &[0.0]]);
        let r = shorted_operator(&w, &s, &tol()).unwrap();
        assert!(close(r.shorted.matrix(), &diag(&[0.0, 0.5]), 1e-14));
        assert!(close(r.compression.matrix(), &real_matrix(&[&[2.0, 1.0], &[1.0, 0.5]]), 1e-14));
        assert!(close(&shorted_schur_oracle(&w, &s, &tol()).unwrap(), &diag(&[0.0, 0.5]), 1e-14));
    }

    #[test]
    fn extreme_subspaces() {
        let w = psd(&[&[2.0, 1.0], &[1.0, 1.0]]);
        let zero = shorted_matrix(&w, &Subspace::trivial(2), &tol()).unwrap();
        assert!(close(&zero, w.matrix(), 1e-14));
        let full = shorted_matrix(&w, &Subspace::full(2), &tol()).unwrap();
        assert!(close(&full, &ComplexMatrix::zeros(2, 2), 1e-14));
    }

    #[test]
    fn schur_oracle_block_diagonal() {
        let w = psd(&[&[3.0, 0.0], &[0.0, 7.0]]);
        let s = span(&[&[0.0], &[1.0]]);
        assert!(close(&shorted_schur_oracle(&w, &s, &tol()).unwrap(), &diag(&[3.0, 0.0]), 1e-14));
        let s1 = span(&[&[1.0], &[0.0]]);
        assert!(close(&shorted_schur_oracle(&PsdOperator::identity(2), &s1, &tol()).unwrap(), &diag(&[0.0, 1.0]), 1e-14));
    }

    #[test]
    fn dominated_members_from_fixed_contractions() {
        let w = psd(&[&[2.0, 1.0], &[1.0, 1.0]]);
        let s = span(&[&[1.0], &[0.0]]);
        let t = tol();
        let at_identity = dominated_member(&w, &s, &identity(2), &t).unwrap();
        assert!(close(&at_identity, &diag(&[0.0, 0.5]), 1e-14));
        let at_zero = dominated_member(&w, &s, &ComplexMatrix::zeros(2, 2), &t).unwrap();
        assert!(close(&at_zero, &ComplexMatrix::zeros(2, 2), 0.0));
        let half = dominated_member(&w, &s, &diag(&[0.5, 0.5]), &t).unwrap();
        assert!(close(&half, &diag(&[0.0, 0.25]), 1e-14));
    }

    #[test]
    fn verification_report_passes_on_examples() {
        let t = tol();
        let rep = verify_shorted(&PsdOperator::identity(2), &span(&[&[1.0], &[0.0]]), 10, 1, &t).unwrap();
        assert!(rep.all_passed(), "{rep}");

        let w = psd(&[&[2.0, 1.0], &[1.0, 1.0]]);
        let rep = verify_shorted(&w, &span(&[&[1.0], &[0.0]]), 100, 2, &t).unwrap();
        assert!(rep.all_passed(), "{rep}");
        for c in &rep.checks {
            assert!(c.residual <= 1e-9, "{}: {}", c.name, c.residual);
        }
    }

    #[test]
    fn singular_weight_case() {
        let t = tol();
        let w = psd(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let s = span(&[&[0.0], &[1.0]]);
        let r = shorted_operator(&w, &s, &t).unwrap();
        assert!(close(r.shorted.matrix(), &diag(&[1.0, 0.0]), 1e-14));
        assert!(r.shorted_nullspace.equals(&s, &t));
        let rep = verify_shorted(&w, &s, 20, 3, &t).unwrap();
        assert!(rep.all_passed(), "{rep}");
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let w = PsdOperator::<f64>::identity(3);
        assert!(shorted_operator(&w, &span(&[&[1.0], &[0.0]]), &tol()).is_err());
    }
}
