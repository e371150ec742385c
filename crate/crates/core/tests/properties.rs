use proptest::prelude::*;
use rand::Rng;
use shortcalc::linalg::{self, frobenius, identity, loewner_leq, schatten_norm, weighted_schatten_norm};
use shortcalc::orders::{self, StarVariant, WeightedVariant};
use shortcalc::sampling::{self, SampleRng};
use shortcalc::subspace::concat_columns;
use shortcalc::{approx, compat, oblique_projection, shorted, Complex, Matrix64, Psd64, Subspace64, Tolerance64};

fn tol() -> Tolerance64 {
    Tolerance64::default()
}

fn rel(a: &Matrix64, b: &Matrix64, scale: f64) -> f64 {
    frobenius(&(a - b)) / (scale + 1.0)
}

fn instance(seed: u64, n: usize) -> (SampleRng, Psd64, Subspace64) {
    let mut rng = sampling::rng(seed);
    let w = sampling::psd_mixed_rank(&mut rng, n, &tol());
    let s = sampling::subspace_any(&mut rng, n, &tol());
    (rng, w, s)
}

/// Well-conditioned invertible matrix: singular values in [0.5, 2].
fn conditioned(rng: &mut SampleRng, n: usize) -> Matrix64 {
    let d: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..2.0)).collect();
    sampling::unitary::<f64, _>(rng, n) * linalg::diag::<f64>(&d) * sampling::unitary::<f64, _>(rng, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pinv_is_a_generalized_inverse(seed in any::<u64>(), rows in 1usize..=7, cols in 1usize..=7) {
        let mut rng = sampling::rng(seed);
        let k = rng.random_range(0..=rows.min(cols));
        let m = sampling::matrix_of_rank::<f64, _>(&mut rng, rows, cols, k);
        let p = linalg::pinv(&m, &tol());
        let scale = frobenius(&m);
        prop_assert!(rel(&(&m * &p * &m), &m, scale) < 1e-9);
        prop_assert!(rel(&linalg::pinv(&p, &tol()), &m, scale) < 1e-8);
        prop_assert_eq!(linalg::rank(&m, &tol()), k);
    }

    #[test]
    fn rank_nullity_and_preimage(seed in any::<u64>(), rows in 1usize..=7, cols in 1usize..=7) {
        let mut rng = sampling::rng(seed);
        let k = rng.random_range(0..=rows.min(cols));
        let m = sampling::matrix_of_rank::<f64, _>(&mut rng, rows, cols, k);
        let t = tol();
        let (range, null) = linalg::range_nullspace(&m, &t);
        prop_assert_eq!(range.dim() + null.dim(), cols);
        let full = linalg::preimage(&m, &Subspace64::full(rows), &t).unwrap();
        prop_assert_eq!(full.dim(), cols);
        let kernel = linalg::preimage(&m, &Subspace64::trivial(rows), &t).unwrap();
        prop_assert!(kernel.equals(&null, &t));
    }

    #[test]
    fn oblique_projection_reconstructs_idempotents(seed in any::<u64>(), n in 1usize..=7) {
        let mut rng = sampling::rng(seed);
        let k = rng.random_range(0..=n);
        let v = conditioned(&mut rng, n);
        let kblock = sampling::gaussian::<f64, _>(&mut rng, k, n - k);
        let core = Matrix64::from_fn(n, n, |i, j| match (i < k, j < k) {
            (true, true) if i == j => Complex::new(1.0, 0.0),
            (true, false) => kblock[(i, j - k)],
            _ => Complex::new(0.0, 0.0),
        });
        let p = &v * core * v.clone().try_inverse().unwrap();
        let t = tol();
        let (range, null) = linalg::range_nullspace(&p, &t);
        let q = oblique_projection(&range, &null, &t).unwrap();
        prop_assert!(rel(q.matrix(), &p, frobenius(&p)) < 1e-9);
    }

    #[test]
    fn loewner_order_axioms(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = sampling::rng(seed);
        let t = tol();
        let x = sampling::hermitian::<f64, _>(&mut rng, n);
        let r1 = rng.random_range(0..=n);
        let r2 = rng.random_range(0..=n);
        let y = &x + sampling::psd_matrix::<f64, _>(&mut rng, n, r1);
        let z = &y + sampling::psd_matrix::<f64, _>(&mut rng, n, r2);
        prop_assert!(loewner_leq(&x, &x, &t).unwrap());
        prop_assert!(loewner_leq(&x, &y, &t).unwrap() && loewner_leq(&y, &z, &t).unwrap());
        prop_assert!(loewner_leq(&x, &z, &t).unwrap());
        if loewner_leq(&y, &x, &t).unwrap() {
            prop_assert!(frobenius(&(&y - &x)) <= 1e-8 * (frobenius(&x) + 1.0));
        }
        // a tiny PSD bump is within tolerance both ways
        let bump = &x + sampling::psd_matrix::<f64, _>(&mut rng, n, 1) * Complex::new(1e-14, 0.0);
        prop_assert!(loewner_leq(&bump, &x, &t).unwrap() && loewner_leq(&x, &bump, &t).unwrap());
    }

    #[test]
    fn schatten_norms(seed in any::<u64>(), rows in 1usize..=6, cols in 1usize..=6) {
        let mut rng = sampling::rng(seed);
        let x = sampling::gaussian::<f64, _>(&mut rng, rows, cols);
        let i = Psd64::identity(rows);
        let ps = [1.0, 1.5, 2.0, 3.0, f64::INFINITY];
        let mut prev = f64::INFINITY;
        for p in ps {
            let plain = schatten_norm(&x, p);
            let weighted = weighted_schatten_norm(&x, p, &i).unwrap();
            prop_assert!((plain - weighted).abs() <= 1e-12 * (plain + 1.0));
            prop_assert!(plain <= prev * (1.0 + 1e-12));
            prev = plain;
        }
        prop_assert!((schatten_norm(&x, 2.0) - frobenius(&x)).abs() < 1e-12 * (frobenius(&x) + 1.0));
    }

    #[test]
    fn shorted_operator_characterisations(seed in any::<u64>(), n in 1usize..=8) {
        let (_, w, s) = instance(seed, n);
        let t = tol();
        let res = shorted::shorted_operator(&w, &s, &t).unwrap();
        let ws = res.shorted.matrix();
        let wn = frobenius(w.matrix());
        prop_assert!(rel(ws, &shorted::shorted_schur_oracle(&w, &s, &t).unwrap(), wn) <= 1e-9);
        prop_assert!(loewner_leq(&Matrix64::zeros(n, n), ws, &t).unwrap());
        prop_assert!(loewner_leq(ws, w.matrix(), &t).unwrap());
        prop_assert!(rel(&(ws + res.compression.matrix()), w.matrix(), wn) <= 1e-12);
        prop_assert!(res.shorted_range.equals(&w.range().intersect(&s.complement(), &t).unwrap(), &t));
        prop_assert!(res.shorted_nullspace.equals(&w.nullspace().sum(&s, &t).unwrap(), &t));
    }

    #[test]
    fn shorting_is_monotone_in_the_subspace(seed in any::<u64>(), n in 1usize..=8) {
        let (mut rng, w, s) = instance(seed, n);
        let t = tol();
        let extra = sampling::subspace_any(&mut rng, n, &t);
        let bigger = s.sum(&extra, &t).unwrap();
        let small = shorted::shorted_matrix(&w, &s, &t).unwrap();
        let large = shorted::shorted_matrix(&w, &bigger, &t).unwrap();
        prop_assert!(loewner_leq(&large, &small, &t).unwrap());
    }

    #[test]
    fn canonical_projection_and_conditions(seed in any::<u64>(), n in 1usize..=8) {
        let (_, w, s) = instance(seed, n);
        let t = tol();
        let conds = compat::compatibility_conditions(&w, &s, &t).unwrap();
        prop_assert!(conds.iter().all(|&c| c == conds[0]));
        let cert = compat::is_compatible(&w, &s, &t).unwrap();
        prop_assert!(cert.compatible, "finite-dimensional pairs are compatible");
        let q = cert.canonical.unwrap();
        prop_assert!(compat::projection_set_member(q.matrix(), &w, &s, &t).unwrap());
        let via = compat::shorted_via_projection(&w, &s, &t).unwrap();
        let pekarev = shorted::shorted_matrix(&w, &s, &t).unwrap();
        prop_assert!(rel(&via, &pekarev, frobenius(w.matrix())) <= 1e-9);

        let res = shorted::shorted_operator(&w, &s, &t).unwrap();
        let minus = orders::leq_minus(res.shorted.matrix(), w.matrix(), &t).unwrap().holds;
        let inclusion = w.range().contains(&res.shorted_range, &t).unwrap();
        prop_assert_eq!(minus, inclusion);
    }

    #[test]
    fn every_member_of_the_projection_set_shorts_alike(seed in any::<u64>(), n in 2usize..=7) {
        // S meets N(W) so that P(W,S) has more than one element
        let mut rng = sampling::rng(seed);
        let t = tol();
        let r = rng.random_range(0..n);
        let w = Psd64::new(sampling::psd_matrix::<f64, _>(&mut rng, n, r), &t).unwrap();
        let null = w.nullspace();
        let from_null = null.basis().columns(0, 1).into_owned();
        let extra = rng.random_range(0..n);
        let s = Subspace64::span(&concat_columns(&from_null, &sampling::gaussian::<f64, _>(&mut rng, n, extra)), &t);
        let defect = s.intersect(&null, &t).unwrap();
        prop_assume!(!defect.is_trivial());

        let p = compat::canonical_projection(&w, &s, &t).unwrap();
        let g = sampling::gaussian::<f64, _>(&mut rng, n, n);
        let q = p.matrix() + defect.projector() * g * (identity::<f64>(n) - p.matrix());
        prop_assert!(compat::projection_set_member(&q, &w, &s, &t).unwrap());
        let shorted_q = w.matrix() * (identity::<f64>(n) - &q);
        let ws = shorted::shorted_matrix(&w, &s, &t).unwrap();
        prop_assert!(rel(&shorted_q, &ws, frobenius(w.matrix()) * frobenius(&q)) <= 1e-9);
    }

    #[test]
    fn minus_order_routes_agree(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = sampling::rng(seed);
        let t = tol();
        let (pa, pb) = sampling::minus_pair::<f64, _>(&mut rng, n);
        prop_assert!(orders::leq_minus(&pa, &pb, &t).unwrap().holds);
        let (ra, rb) = sampling::random_pair::<f64, _>(&mut rng, n);
        for (a, b) in [(&pa, &pb), (&ra, &rb)] {
            let v = orders::leq_minus(a, b, &t).unwrap();
            prop_assert_eq!(v.holds, orders::minus_by_definition(a, b, &t).unwrap());
            prop_assert_eq!(v.holds, orders::leq_left_minus(a, b, &t).unwrap());
            if v.holds {
                let p = v.left_witness.unwrap();
                let q = v.right_witness.unwrap();
                let bn = frobenius(b) + 1.0;
                prop_assert!(frobenius(&(a - p.matrix() * b)) <= 1e-9 * bn * (frobenius(p.matrix()) + 1.0));
                prop_assert!(frobenius(&(a.adjoint() - q.matrix() * b.adjoint())) <= 1e-9 * bn * (frobenius(q.matrix()) + 1.0));
            }
        }
    }

    #[test]
    fn star_orders(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = sampling::rng(seed);
        let t = tol();
        let i = Psd64::identity(n);
        let (sa, sd) = sampling::weighted_star_pair(&mut rng, &i, true, &t);
        let sb = &sa + sd;
        let (ra, rb) = sampling::random_pair::<f64, _>(&mut rng, n);
        for (a, b) in [(&sa, &sb), (&ra, &rb)] {
            for (wv, sv) in [
                (WeightedVariant::Left, StarVariant::LeftStar),
                (WeightedVariant::Right, StarVariant::RightStar),
                (WeightedVariant::Both, StarVariant::Star),
            ] {
                let star = orders::leq_star(sv, a, b, &t).unwrap().holds;
                prop_assert_eq!(orders::leq_weighted_star(wv, a, b, &i, &t).unwrap().holds, star);
            }
            if orders::leq_star(StarVariant::Star, a, b, &t).unwrap().holds {
                prop_assert!(orders::leq_minus(a, b, &t).unwrap().holds);
            }
        }
        prop_assert!(orders::leq_star(StarVariant::Star, &sa, &sb, &t).unwrap().holds);
    }

    #[test]
    fn weighted_star_forms_agree(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = sampling::rng(seed);
        let t = tol();
        let w = sampling::psd_mixed_rank(&mut rng, n, &t);
        let (a, d) = sampling::weighted_star_pair(&mut rng, &w, false, &t);
        let b = &a + d;
        let (ra, rb) = sampling::random_pair::<f64, _>(&mut rng, n);
        prop_assert!(orders::leq_weighted_star(WeightedVariant::Left, &a, &b, &w, &t).unwrap().holds);
        for (a, b) in [(&a, &b), (&ra, &rb)] {
            let algebraic = orders::leq_weighted_star(WeightedVariant::Left, a, b, &w, &t).unwrap().holds;
            prop_assert_eq!(algebraic, orders::weighted_star_definitional(a, b, &w, &t).unwrap());
        }
    }

    #[test]
    fn w_inverse_solves_the_normal_equation(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = sampling::rng(seed);
        let t = tol();
        let w = sampling::psd_mixed_rank(&mut rng, n, &t);
        let k = rng.random_range(0..=n);
        let a = sampling::matrix_of_rank::<f64, _>(&mut rng, n, n, k);
        let b = sampling::gaussian::<f64, _>(&mut rng, n, 2);
        let r = approx::w_inverse(&a, &w, &b, &t).unwrap();
        prop_assert!(r.rank_consistent);
        prop_assert!(r.is_minimum);
        prop_assert!(approx::w_least_squares_holds(&a, &w, &b, &r.solution, 10, seed, &t).unwrap());
    }

    #[test]
    fn minimizer_equivalences(seed in any::<u64>(), n in 1usize..=7) {
        let mut rng = sampling::rng(seed);
        let t = tol();
        let w = sampling::psd_mixed_rank(&mut rng, n, &t);
        let k = rng.random_range(0..=n);
        let a = sampling::matrix_of_rank::<f64, _>(&mut rng, n, n, k);
        let b = sampling::nullspace_matched_factor(&mut rng, &a, &w, &t);
        let m = approx::minimize_quadratic(&a, &b, &w, 10, seed, &t).unwrap();
        let rep = m.report(&t);
        prop_assert!(rep.all_passed(), "{}", rep);
        prop_assert!(m.equals_shorted && m.range_identities);
    }

    #[test]
    fn joint_least_squares_under_weighted_star(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = sampling::rng(seed);
        let t = tol();
        let w = sampling::psd_mixed_rank(&mut rng, n, &t);
        let (a, d) = sampling::weighted_star_pair(&mut rng, &w, false, &t);
        let c = sampling::gaussian::<f64, _>(&mut rng, n, 2);
        let rep = approx::simultaneous_ls(&a, &d, &c, &w, 2.0, &t).unwrap();
        prop_assert!(rep.all_passed(), "{}", rep);
        let add = approx::compression_additivity_check(&a, &d, &w, &t).unwrap();
        prop_assert!(add.all_passed(), "{}", add);
    }
}

#[test]
fn single_precision_instantiation() {
    use shortcalc::{Psd32, Subspace32, Tolerance32};
    let t = Tolerance32::default();
    let w = Psd32::new(linalg::real_matrix(&[&[2.0, 1.0], &[1.0, 1.0]]), &t).unwrap();
    let s = Subspace32::span(&linalg::real_matrix(&[&[1.0], &[0.0]]), &t);
    let res = shorted::shorted_operator(&w, &s, &t).unwrap();
    let expected = linalg::real_matrix::<f32>(&[&[0.0, 0.0], &[0.0, 0.5]]);
    assert!(frobenius(&(res.shorted.matrix() - expected)) < 1e-5);
    let p = compat::canonical_projection(&w, &s, &t).unwrap();
    assert!(frobenius(&(p.matrix() - linalg::real_matrix::<f32>(&[&[1.0, 0.5], &[0.0, 0.0]]))) < 1e-5);

    let mut rng = sampling::rng(5);
    for _ in 0..50 {
        let w = sampling::psd_mixed_rank::<f32, _>(&mut rng, 5, &t);
        let s = sampling::subspace_any::<f32, _>(&mut rng, 5, &t);
        let a = shorted::shorted_matrix(&w, &s, &t).unwrap();
        let b = shorted::shorted_schur_oracle(&w, &s, &t).unwrap();
        assert!(frobenius(&(a - b)) / (frobenius(w.matrix()) + 1.0) < 1e-4);
        let (x, y) = sampling::minus_pair::<f32, _>(&mut rng, 5);
        assert!(orders::leq_minus(&x, &y, &t).unwrap().holds);
    }
}
