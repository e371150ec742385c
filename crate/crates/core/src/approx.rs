//! Operator equations, W-inverses and weighted least-squares problems.
//!
//! Every normal-equation solve returns the pseudoinverse particular solution,
//! i.e. the component in the nullspace of the normal matrix is zero.

use crate::error::{Error, Inclusion, Result};
use crate::linalg::{self, ensure_dim, frobenius, loewner_leq, spectral_norm, weighted_schatten_norm};
use crate::orders::{self, WeightedVariant};
use crate::psd::PsdOperator;
use crate::report::Report;
use crate::sampling;
use crate::scalar::{ComplexMatrix, Real};
use crate::shorted;
use crate::subspace::Subspace;
use crate::tolerance::Tolerance;

#[derive(Debug, Clone)]
pub struct WInverseResult<T: Real> {
    /// `X₀ = (A*WA)† A*WB`
    pub solution: ComplexMatrix<T>,
    /// `‖A*W(AX₀ − B)‖_F`
    pub normal_residual: T,
    /// `(AX₀ − B)*W(AX₀ − B)`
    pub achieved: PsdOperator<T>,
    pub is_minimum: bool,
    /// `dim N(A*WA)`, the dimension of the solution set's free part.
    pub free_dim: usize,
    /// `rank(A*WA) = rank(W^{1/2}A)`
    pub rank_consistent: bool,
}

#[derive(Debug, Clone)]
pub struct MinimizationReport<T: Real> {
    pub minimizer: ComplexMatrix<T>,
    /// `F(X₀) = (AX₀B − I)*W(AX₀B − I)`
    pub value: PsdOperator<T>,
    pub equals_shorted: bool,
    /// `‖F(X₀) − W_{/R(A)}‖_F`
    pub shorted_residual: T,
    /// `‖A*W(AX₀B − I)‖_F`
    pub normal_residual: T,
    /// `‖A‖·‖W‖·(‖A‖·‖X₀‖·‖B‖ + 1)`, the size the normal residual is judged against.
    pub normal_scale: T,
    /// Sampled `X` with `F(X₀) ≤⁻ F(X)`.
    pub minus_lower_bound_checked: usize,
    /// Sampled `X` with `F(X₀) ≤ F(X)` in the Löwner order.
    pub loewner_lower_bound_checked: usize,
    pub samples: usize,
    /// Every column of `X₀B` is a `W`-least-squares solution against sampled
    /// perturbations.
    pub w_inverse_by_definition: bool,
    /// `R(F(X₀)) = R(A)^⊥ ∩ R(W)` and `N(F(X₀)) = N(W) + R(A)`.
    pub range_identities: bool,
    pub schatten_values: Vec<(f64, T)>,
}

impl<T: Real> MinimizationReport<T> {
    pub fn report(&self, tol: &Tolerance<T>) -> Report {
        let mut rep = Report::new("quadratic minimization");
        rep.check("normal_equation", self.is_normal(tol), self.normal_residual.as_f64());
        rep.check("value_equals_shorted", self.equals_shorted, self.shorted_residual.as_f64());
        rep.check("minus_minimum", self.minus_lower_bound_checked == self.samples, 0.0);
        rep.note_last(format!("{}/{} samples", self.minus_lower_bound_checked, self.samples));
        rep.check("loewner_minimum", self.loewner_lower_bound_checked == self.samples, 0.0);
        rep.note_last(format!("{}/{} samples", self.loewner_lower_bound_checked, self.samples));
        rep.check(
            "minus_and_loewner_minima_coincide",
            self.minus_lower_bound_checked == self.loewner_lower_bound_checked,
            0.0,
        );
        rep.check("w_inverse_by_definition", self.w_inverse_by_definition, 0.0);
        rep.check("range_nullspace_identities", self.range_identities, 0.0);
        for (p, v) in &self.schatten_values {
            rep.record(format!("schatten_p{p}"), format!("{:.6e}", v.as_f64()));
        }
        rep
    }

    fn is_normal(&self, tol: &Tolerance<T>) -> bool {
        tol.close(self.normal_residual, self.normal_scale)
    }
}

/// Solves `AXB = C`, returning the particular solution `A†CB†`.
pub fn solve_operator_equation<T: Real>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
    c: &ComplexMatrix<T>,
    tol: &Tolerance<T>,
) -> Result<ComplexMatrix<T>> {
    ensure_dim(a.nrows(), c.nrows(), "rows of A vs rows of C")?;
    ensure_dim(b.ncols(), c.ncols(), "columns of B vs columns of C")?;
    linalg::ensure_finite(a)?;
    linalg::ensure_finite(b)?;
    linalg::ensure_finite(c)?;
    let (_, ap) = linalg::rank_and_pinv(a, tol);
    let (_, bp) = linalg::rank_and_pinv(b, tol);
    let cn = frobenius(c);
    let left = c - a * (&ap * c);
    if !tol.close(frobenius(&left), cn) {
        return Err(Error::Infeasible(Inclusion::RangeOfLeftFactor));
    }
    let right = c - (c * &bp) * b;
    if !tol.close(frobenius(&right), cn) {
        return Err(Error::Infeasible(Inclusion::RangeOfRightFactorAdjoint));
    }
    let x = &ap * c * &bp;
    let r = frobenius(&(a * &x * b - c));
    if !tol.close(r, cn) {
        return Err(Error::HypothesisViolated(format!(
            "particular solution misses AXB = C by {:.3e}",
            r.as_f64()
        )));
    }
    Ok(x)
}

/// `W`-inverse of `A` on `B` from the normal equation `A*WAX = A*WB`.
pub fn w_inverse<T: Real>(
    a: &ComplexMatrix<T>,
    w: &PsdOperator<T>,
    b: &ComplexMatrix<T>,
    tol: &Tolerance<T>,
) -> Result<WInverseResult<T>> {
    ensure_dim(w.dim(), a.nrows(), "weight vs rows of A")?;
    ensure_dim(a.nrows(), b.nrows(), "rows of A vs rows of B")?;
    linalg::ensure_finite(a)?;
    linalg::ensure_finite(b)?;
    let wm = w.matrix();
    let an = spectral_norm(a);
    let aw = a.adjoint() * wm;
    let normal = &aw * a;
    let (r_normal, normal_pinv) = linalg::pinv_scaled(&normal, an * an * w.norm(), tol);
    let r_half = linalg::rank_scaled(&(w.sqrt() * a), an * w.norm().sqrt(), tol);
    let x = normal_pinv * (&aw * b);
    let resid = a * &x - b;
    let normal_residual = frobenius(&(&aw * &resid));
    let size = an * frobenius(&x) + frobenius(b);
    let achieved = PsdOperator::with_scale(
        linalg::hermitian_part(&(resid.adjoint() * wm * &resid)),
        w.norm() * size * size,
        tol,
    )?;
    let scale = an * w.norm() * size;
    Ok(WInverseResult {
        is_minimum: tol.close(normal_residual, scale),
        normal_residual,
        achieved,
        free_dim: a.ncols() - r_normal,
        rank_consistent: r_normal == r_half,
        solution: x,
    })
}

fn w_norms<T: Real>(w: &PsdOperator<T>, m: &ComplexMatrix<T>) -> Vec<T> {
    let h = w.sqrt() * m;
    h.column_iter().map(|c| c.norm()).collect()
}

/// Column-wise check that `Y` is a `W`-inverse of `A` on `B` by definition:
/// `‖AYb − b‖_W ≤ ‖A(Yb + δ) − b‖_W` for sampled `δ`.
pub fn w_least_squares_holds<T: Real>(
    a: &ComplexMatrix<T>,
    w: &PsdOperator<T>,
    b: &ComplexMatrix<T>,
    y: &ComplexMatrix<T>,
    samples: usize,
    seed: u64,
    tol: &Tolerance<T>,
) -> Result<bool> {
    ensure_dim(a.ncols(), y.nrows(), "columns of A vs rows of Y")?;
    let mut rng = sampling::rng(seed);
    let base = w_norms(w, &(a * y - b));
    let spread = frobenius(y) + T::one();
    for _ in 0..samples {
        let delta = sampling::gaussian::<T, _>(&mut rng, y.nrows(), y.ncols()) * linalg::scalar(spread);
        let other = w_norms(w, &(a * (y + delta) - b));
        for (m, o) in base.iter().zip(&other) {
            if *m > *o + tol.slack(*o) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `X₀` with `A*W(AX₀B − I) = 0`, from `Y₀ = w_inverse(A, W, I)` and
/// `X₀ = Y₀B†`. Requires `N(B) = N(A*W)`.
fn quadratic_minimizer<T: Real>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
    w: &PsdOperator<T>,
    tol: &Tolerance<T>,
) -> Result<ComplexMatrix<T>> {
    let n = w.dim();
    ensure_dim(n, a.nrows(), "weight vs rows of A")?;
    ensure_dim(n, b.ncols(), "weight vs columns of B")?;
    linalg::ensure_finite(b)?;
    let aw = a.adjoint() * w.matrix();
    let null_aw = linalg::nullspace_scaled(&aw, spectral_norm(a) * w.norm(), tol);
    let null_b = linalg::nullspace_scaled(b, T::zero(), tol);
    if !null_aw.equals(&null_b, tol) {
        return Err(Error::HypothesisViolated(format!(
            "N(B) (dim {}) differs from N(A*W) (dim {})",
            null_b.dim(),
            null_aw.dim()
        )));
    }
    let y0 = w_inverse(a, w, &linalg::identity(n), tol)?.solution;
    let (_, bp) = linalg::rank_and_pinv(b, tol);
    let defect = &y0 - &y0 * (&bp * b);
    if !tol.close(frobenius(&defect), frobenius(&y0)) {
        return Err(Error::HypothesisViolated(
            "X₀B = Y₀ has no solution: Y₀(I − B†B) ≠ 0".into(),
        ));
    }
    Ok(y0 * bp)
}

fn quadratic_value<T: Real>(
    a: &ComplexMatrix<T>,
    x: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
    w: &PsdOperator<T>,
) -> ComplexMatrix<T> {
    let r = a * x * b - linalg::identity::<T>(w.dim());
    linalg::hermitian_part(&(r.adjoint() * w.matrix() * r))
}

/// Minimizes `F(X) = (AXB − I)*W(AXB − I)` in the minus and Löwner orders
/// and checks the minimizer against the shorted operator `W_{/R(A)}`.
pub fn minimize_quadratic<T: Real>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
    w: &PsdOperator<T>,
    samples: usize,
    seed: u64,
    tol: &Tolerance<T>,
) -> Result<MinimizationReport<T>> {
    let x0 = quadratic_minimizer(a, b, w, tol)?;
    let n = w.dim();
    let value = PsdOperator::with_scale(quadratic_value(a, &x0, b, w), w.norm(), tol)?;
    let ra = Subspace::span(a, tol);
    let short = shorted::shorted_matrix(w, &ra, tol)?;
    let shorted_residual = frobenius(&(value.matrix() - &short));
    let equals_shorted = tol.close(shorted_residual, frobenius(w.matrix()));

    let resid = a * &x0 * b - linalg::identity::<T>(n);
    let normal_residual = frobenius(&(a.adjoint() * w.matrix() * &resid));
    let an = spectral_norm(a);
    let normal_scale = an * w.norm() * (an * spectral_norm(&x0) * spectral_norm(b) + T::one());

    let mut rng = sampling::rng(seed);
    let spread = linalg::scalar(frobenius(&x0) + T::one());
    let (mut minus, mut loewner) = (0, 0);
    for _ in 0..samples {
        let x = &x0 + sampling::gaussian::<T, _>(&mut rng, x0.nrows(), x0.ncols()) * spread;
        let fx = quadratic_value(a, &x, b, w);
        if orders::leq_minus(value.matrix(), &fx, tol)?.holds {
            minus += 1;
        }
        if loewner_leq(value.matrix(), &fx, tol)? {
            loewner += 1;
        }
    }

    let identity = linalg::identity::<T>(n);
    let x0b = &x0 * b;
    let w_inverse_by_definition = w_least_squares_holds(a, w, &identity, &x0b, samples.min(20), seed ^ 0x5eed, tol)?;

    let range_target = ra.complement().intersect(&w.range(), tol)?;
    let null_target = w.nullspace().sum(&ra, tol)?;
    let range_identities = value.range().equals(&range_target, tol) && value.nullspace().equals(&null_target, tol);

    let schatten_values = [1.0, 2.0, 3.0]
        .into_iter()
        .map(|p| Ok((p, weighted_schatten_norm(&resid, p, w)?)))
        .collect::<Result<Vec<_>>>()?;

    Ok(MinimizationReport {
        minimizer: x0,
        value,
        equals_shorted,
        shorted_residual,
        normal_residual,
        normal_scale,
        minus_lower_bound_checked: minus,
        loewner_lower_bound_checked: loewner,
        samples,
        w_inverse_by_definition,
        range_identities,
        schatten_values,
    })
}

/// Weighted Schatten minimality of `X₀`: `‖AX₀B − I‖_{p,W}` equals
/// `‖W_{/R(A)}^{1/2}‖_p` and is not beaten by sampled perturbations.
pub fn schatten_min_check<T: Real>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
    w: &PsdOperator<T>,
    p: f64,
    perturbations: usize,
    seed: u64,
    tol: &Tolerance<T>,
) -> Result<Report> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::HypothesisViolated(format!("Schatten index {p} is below 1")));
    }
    let x0 = quadratic_minimizer(a, b, w, tol)?;
    let n = w.dim();
    let identity = linalg::identity::<T>(n);
    let norm_at = |x: &ComplexMatrix<T>| weighted_schatten_norm(&(a * x * b - &identity), p, w);
    let m = norm_at(&x0)?;

    let short = PsdOperator::with_scale(shorted::shorted_matrix(w, &Subspace::span(a, tol), tol)?, w.norm(), tol)?;
    let target = linalg::schatten_norm(short.sqrt(), p);
    let mut rep = Report::new(format!("weighted Schatten minimality, p = {p}"));
    let d = (m - target).abs();
    rep.check("equals_shorted_root_norm", tol.close(d, target), d.as_f64());
    rep.note_last(format!("m = {:.17e}", m.as_f64()));

    let mut rng = sampling::rng(seed);
    let spread = linalg::scalar(frobenius(&x0) + T::one());
    let mut worst = 0.0f64;
    let mut ok = true;
    for _ in 0..perturbations {
        let delta = sampling::gaussian::<T, _>(&mut rng, x0.nrows(), x0.ncols()) * spread;
        let other = norm_at(&(&x0 + delta))?;
        worst = worst.max((m - other).as_f64());
        ok &= m <= other + tol.cmp_abs;
    }
    rep.check("minimal_against_perturbations", ok, worst.max(0.0));
    rep.note_last(format!("{perturbations} perturbations"));
    if p.is_infinite() {
        rep.record("p_infinity", "outside the proven range 1 <= p < inf; reported only");
    }
    Ok(rep)
}

fn require_weighted_star<T: Real>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
    w: &PsdOperator<T>,
    tol: &Tolerance<T>,
) -> Result<ComplexMatrix<T>> {
    let sum = a + b;
    if !orders::leq_weighted_star(WeightedVariant::Left, a, &sum, w, tol)?.holds {
        return Err(Error::HypothesisViolated(
            "A is not below A + B in the left weighted star order".into(),
        ));
    }
    Ok(sum)
}

/// Joint versus separate weighted least squares under `A ≤_{*W} A + B`.
pub fn simultaneous_ls<T: Real>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
    c: &ComplexMatrix<T>,
    w: &PsdOperator<T>,
    p: f64,
    tol: &Tolerance<T>,
) -> Result<Report> {
    let sum = require_weighted_star(a, b, w, tol)?;
    ensure_dim(a.nrows(), c.nrows(), "rows of A vs rows of C")?;
    let wm = w.matrix();
    let normal_residual = |m: &ComplexMatrix<T>, x: &ComplexMatrix<T>| frobenius(&(m.adjoint() * wm * (m * x - c)));
    let scale = (spectral_norm(&sum) * w.norm() * (spectral_norm(&sum) + frobenius(c) + T::one())).max(T::one());

    let mut rep = Report::new("simultaneous least squares");
    let joint = w_inverse(&sum, w, c, tol)?.solution;
    for (name, m) in [("joint_solves_joint", &sum), ("joint_solves_a", a), ("joint_solves_b", b)] {
        let r = normal_residual(m, &joint);
        rep.check(name, tol.close(r, scale), r.as_f64());
    }

    // a common solution of the two separate normal equations
    let stacked_lhs = crate::subspace::concat_columns(&(a.adjoint() * wm * a).adjoint(), &(b.adjoint() * wm * b).adjoint())
        .adjoint();
    let stacked_rhs = crate::subspace::concat_columns(&(a.adjoint() * wm * c).adjoint(), &(b.adjoint() * wm * c).adjoint())
        .adjoint();
    let (_, pinv) = linalg::pinv_scaled(&stacked_lhs, spectral_norm(&sum).powi(2) * w.norm(), tol);
    let pair = pinv * stacked_rhs;
    for (name, m) in [("pair_solves_a", a), ("pair_solves_b", b), ("pair_solves_joint", &sum)] {
        let r = normal_residual(m, &pair);
        rep.check(name, tol.close(r, scale), r.as_f64());
    }

    for (name, m) in [("norm_joint", &sum), ("norm_a", a), ("norm_b", b)] {
        let v = weighted_schatten_norm(&(m * &joint - c), p, w)?;
        rep.record(format!("{name}_p{p}"), format!("{:.16e}", v.as_f64()));
    }
    if p.is_infinite() {
        rep.record("p_infinity", "outside the proven range 1 <= p < inf; reported only");
    }
    Ok(rep)
}

/// `W_{R(A+B)} = W_{R(A)} + W_{R(B)}` under `A ≤_{*W} A + B`.
pub fn compression_additivity_check<T: Real>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
    w: &PsdOperator<T>,
    tol: &Tolerance<T>,
) -> Result<Report> {
    let sum = require_weighted_star(a, b, w, tol)?;
    let scale = spectral_norm(a).max(spectral_norm(b)).max(spectral_norm(&sum));
    let range = |m: &ComplexMatrix<T>| linalg::range_scaled(m, scale, tol);
    let total = shorted::compression_matrix(w, &range(&sum), tol)?;
    let parts = shorted::compression_matrix(w, &range(a), tol)? + shorted::compression_matrix(w, &range(b), tol)?;
    let r = frobenius(&(total - parts));
    let mut rep = Report::new("compression additivity");
    rep.check("additivity", tol.close(r, frobenius(w.matrix())), r.as_f64());
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag, identity, real_matrix};

    type M = ComplexMatrix<f64>;

    fn tol() -> Tolerance<f64> {
        Tolerance::default()
    }

    fn close(a: &M, b: &M, eps: f64) -> bool {
        frobenius(&(a - b)) <= eps
    }

    fn running_w() -> PsdOperator<f64> {
        PsdOperator::new(real_matrix(&[&[2.0, 1.0], &[1.0, 1.0]]), &tol()).unwrap()
    }

    /// `P_{span{(2,1)/√5}}`
    fn running_b() -> M {
        real_matrix(&[&[0.8, 0.4], &[0.4, 0.2]])
    }

    #[test]
    fn operator_equation_examples() {
        let t = tol();
        let c = real_matrix(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let x = solve_operator_equation(&identity(2), &identity(2), &c, &t).unwrap();
        assert!(close(&x, &c, 1e-14));

        let a = diag(&[1.0, 0.0]);
        let x = solve_operator_equation(&a, &identity(2), &diag(&[1.0, 0.0]), &t).unwrap();
        assert!(close(&x, &diag(&[1.0, 0.0]), 1e-14));

        let err = solve_operator_equation(&a, &identity(2), &diag(&[0.0, 1.0]), &t).unwrap_err();
        assert!(matches!(err, Error::Infeasible(Inclusion::RangeOfLeftFactor)));
        let err = solve_operator_equation(&identity(2), &a, &diag(&[0.0, 1.0]), &t).unwrap_err();
        assert!(matches!(err, Error::Infeasible(Inclusion::RangeOfRightFactorAdjoint)));
    }

    #[test]
    fn w_inverse_examples() {
        let t = tol();
        let r = w_inverse(&diag(&[1.0, 0.0]), &running_w(), &identity(2), &t).unwrap();
        assert!(close(&r.solution, &real_matrix(&[&[1.0, 0.5], &[0.0, 0.0]]), 1e-14));
        assert!(r.is_minimum && r.rank_consistent);
        assert_eq!(r.free_dim, 1);
        // B = I: the achieved value is W_{/R(A)} = diag(0, 1/2).
        assert!(close(r.achieved.matrix(), &diag(&[0.0, 0.5]), 1e-14));

        let b = real_matrix(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let r = w_inverse(&identity(2), &running_w(), &b, &t).unwrap();
        assert!(close(&r.solution, &b, 1e-13));

        // orthonormal columns, W = I: Moore-Penrose, X₀ = A*.
        let s = 0.5f64.sqrt();
        let a = real_matrix(&[&[s, 0.0], &[s, 0.0], &[0.0, 1.0]]);
        let r = w_inverse(&a, &PsdOperator::identity(3), &identity(3), &t).unwrap();
        assert!(close(&r.solution, &a.adjoint(), 1e-14));
    }

    #[test]
    fn minimize_examples() {
        let t = tol();
        let i = identity::<f64>(2);
        let rep = minimize_quadratic(&i, &i, &running_w(), 10, 1, &t).unwrap();
        assert!(close(&rep.minimizer, &i, 1e-13));
        assert!(frobenius(rep.value.matrix()) < 1e-13);

        let err = minimize_quadratic(&diag(&[1.0, 0.0]), &i, &running_w(), 10, 1, &t).unwrap_err();
        assert!(matches!(err, Error::HypothesisViolated(_)));

        let rep = minimize_quadratic(&diag(&[1.0, 0.0]), &running_b(), &running_w(), 30, 2, &t).unwrap();
        assert!(close(rep.value.matrix(), &diag(&[0.0, 0.5]), 1e-13));
        assert!(rep.equals_shorted);
        assert!(rep.report(&t).all_passed(), "{}", rep.report(&t));
    }

    #[test]
    fn schatten_examples() {
        let t = tol();
        let i = identity::<f64>(2);
        let rep = schatten_min_check(&i, &i, &running_w(), 2.0, 10, 1, &t).unwrap();
        assert!(rep.all_passed(), "{rep}");

        let rep = schatten_min_check(&diag(&[1.0, 0.0]), &running_b(), &running_w(), 2.0, 50, 3, &t).unwrap();
        assert!(rep.all_passed(), "{rep}");
        let x0 = quadratic_minimizer(&diag(&[1.0, 0.0]), &running_b(), &running_w(), &t).unwrap();
        let m = weighted_schatten_norm(&(diag::<f64>(&[1.0, 0.0]) * x0 * running_b() - &i), 2.0, &running_w()).unwrap();
        assert!((m - 0.5f64.sqrt()).abs() < 1e-13);

        // W = I, A = B = P_S with dim S = 2 in C^5: m = 5 − 2 at p = 1.
        let a = diag::<f64>(&[1.0, 1.0, 0.0, 0.0, 0.0]);
        let w = PsdOperator::identity(5);
        let x0 = quadratic_minimizer(&a, &a, &w, &t).unwrap();
        let m = weighted_schatten_norm(&(&a * x0 * &a - identity::<f64>(5)), 1.0, &w).unwrap();
        assert!((m - 3.0).abs() < 1e-13);
        assert!(schatten_min_check(&a, &a, &w, 1.0, 20, 4, &t).unwrap().all_passed());
    }

    #[test]
    fn simultaneous_examples() {
        let t = tol();
        let a = diag::<f64>(&[1.0, 0.0, 0.0]);
        let b = diag::<f64>(&[0.0, 2.0, 0.0]);
        let w = PsdOperator::identity(3);
        let rep = simultaneous_ls(&a, &b, &identity(3), &w, 2.0, &t).unwrap();
        assert!(rep.all_passed(), "{rep}");
        let x0 = w_inverse(&(&a + &b), &w, &identity(3), &t).unwrap().solution;
        assert!(close(&x0, &diag(&[1.0, 0.5, 0.0]), 1e-14));

        let rep = simultaneous_ls(&a, &M::zeros(3, 3), &identity(3), &w, 1.0, &t).unwrap();
        assert!(rep.all_passed(), "{rep}");

        // orders running example: B − A = [[0,1],[0,−2]] with A*WB = 0.
        let a = diag::<f64>(&[1.0, 0.0]);
        let d = real_matrix(&[&[0.0, 1.0], &[0.0, -2.0]]);
        let c = real_matrix(&[&[1.0, -1.0], &[2.0, 0.5]]);
        let rep = simultaneous_ls(&a, &d, &c, &running_w(), 2.0, &t).unwrap();
        assert!(rep.all_passed(), "{rep}");
        assert!(compression_additivity_check(&a, &d, &running_w(), &t).unwrap().all_passed());

        let err = simultaneous_ls(&a, &diag(&[0.0, 1.0]), &c, &running_w(), 2.0, &t).unwrap_err();
        assert!(matches!(err, Error::HypothesisViolated(_)));
    }

    #[test]
    fn compression_additivity_examples() {
        let t = tol();
        let w = PsdOperator::identity(3);
        let a = diag::<f64>(&[1.0, 0.0, 0.0]);
        assert!(compression_additivity_check(&a, &diag(&[0.0, 1.0, 0.0]), &w, &t).unwrap().all_passed());
        assert!(compression_additivity_check(&a, &M::zeros(3, 3), &w, &t).unwrap().all_passed());
    }
}
