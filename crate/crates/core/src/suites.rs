//! Randomized verification suites, one per group of equivalences.
//!
//! Each suite draws `trials` instances of size `n` from a seeded generator and
//! folds the per-instance reports into one report: a check passes only if it
//! passed on every trial, and its residual is the worst one seen.

use rand::Rng;

use crate::approx;
use crate::compat;
use crate::error::{Error, Result};
use crate::linalg::frobenius;
use crate::orders::{self, StarVariant, WeightedVariant};
use crate::psd::PsdOperator;
use crate::report::Report;
use crate::sampling::{self, ChainKind, SampleRng};
use crate::scalar::{ComplexMatrix, Real};
use crate::shorted;
use crate::tolerance::Tolerance;

pub const SUITES: [&str; 8] = [
    "comp1",
    "teoshorted",
    "teoshorted2",
    "minus-rap",
    "prop1",
    "propmin",
    "thm1",
    "compression-additivity",
];

/// Samples drawn inside a single trial (dominated members, perturbations).
const INNER_SAMPLES: usize = 8;

#[derive(Debug, Clone)]
struct Tally {
    name: String,
    passed: usize,
    total: usize,
    worst: f64,
    note: Option<String>,
}

#[derive(Debug, Default)]
struct Aggregate {
    tallies: Vec<Tally>,
    errors: Vec<String>,
}

impl Aggregate {
    fn add(&mut self, rep: &Report) {
        for c in &rep.checks {
            let idx = match self.tallies.iter().position(|t| t.name == c.name) {
                Some(i) => i,
                None => {
                    self.tallies.push(Tally {
                        name: c.name.clone(),
                        passed: 0,
                        total: 0,
                        worst: 0.0,
                        note: None,
                    });
                    self.tallies.len() - 1
                }
            };
            let t = &mut self.tallies[idx];
            t.total += 1;
            if c.passed {
                t.passed += 1;
            } else if t.note.is_none() {
                t.note = c.note.clone();
            }
            t.worst = t.worst.max(c.residual);
        }
    }

    fn absorb(&mut self, outcome: Result<Report>) {
        match outcome {
            Ok(rep) => self.add(&rep),
            Err(e) => self.errors.push(e.to_string()),
        }
    }

    fn finish(self, title: &str) -> Report {
        let mut rep = Report::new(title);
        for t in self.tallies {
            rep.check(t.name, t.passed == t.total, t.worst);
            let mut note = format!("{}/{}", t.passed, t.total);
            if let Some(n) = t.note {
                note.push_str(&format!("; first failure: {n}"));
            }
            rep.note_last(note);
        }
        rep.check("trials_without_error", self.errors.is_empty(), 0.0);
        if let Some(first) = self.errors.first() {
            rep.note_last(format!("{} errors; first: {first}", self.errors.len()));
        }
        rep
    }
}

fn keep(rep: Report, names: &[&str]) -> Report {
    Report {
        title: rep.title,
        checks: rep
            .checks
            .into_iter()
            .filter(|c| names.contains(&c.name.as_str()))
            .collect(),
    }
}

fn compatibility<T: Real>(rng: &mut SampleRng, n: usize, tol: &Tolerance<T>) -> Result<Report> {
    let w = sampling::psd_mixed_rank(rng, n, tol);
    let s = sampling::subspace_any(rng, n, tol);
    compat::verify_compatibility(&w, &s, tol)
}

fn shorted_checks<T: Real>(rng: &mut SampleRng, n: usize, tol: &Tolerance<T>, names: &[&str]) -> Result<Report> {
    let w = sampling::psd_mixed_rank(rng, n, tol);
    let s = sampling::subspace_any(rng, n, tol);
    let seed = rng.random();
    Ok(keep(shorted::verify_shorted(&w, &s, INNER_SAMPLES, seed, tol)?, names))
}

fn minus_rap<T: Real>(rng: &mut SampleRng, n: usize, tol: &Tolerance<T>) -> Result<Report> {
    let mut rep = Report::new("minus order");
    let (a, b) = sampling::minus_pair::<T, _>(rng, n);
    let v = orders::leq_minus(&a, &b, tol)?;
    rep.check("constructed_positive_detected", v.holds, 0.0);
    for (label, (a, b)) in [("positive", (a, b)), ("random", sampling::random_pair::<T, _>(rng, n))] {
        let v = orders::leq_minus(&a, &b, tol)?;
        let by_definition = orders::minus_by_definition(&a, &b, tol)?;
        rep.check(format!("{label}_definition_agrees"), v.holds == by_definition, 0.0);
        let left = orders::leq_left_minus(&a, &b, tol)?;
        rep.check(format!("{label}_left_minus_agrees"), v.holds == left, 0.0);
        let mut worst = T::zero();
        if let (Some(p), Some(q)) = (&v.left_witness, &v.right_witness) {
            worst = frobenius(&(&a - p.matrix() * &b)).max(frobenius(&(a.adjoint() - q.matrix() * b.adjoint())));
        }
        let sound = !v.holds || (v.left_witness.is_some() && tol.close(worst, frobenius(&b) + T::one()));
        rep.check(format!("{label}_witnesses_sound"), sound, worst.as_f64());
    }
    let [a, b, _] = sampling::chain::<T, _>(rng, ChainKind::Star, &PsdOperator::identity(n), tol);
    let star = orders::leq_star(StarVariant::Star, &a, &b, tol)?.holds;
    rep.check("star_implies_minus", !star || orders::leq_minus(&a, &b, tol)?.holds, 0.0);
    Ok(rep)
}

fn weighted_star<T: Real>(rng: &mut SampleRng, n: usize, tol: &Tolerance<T>) -> Result<Report> {
    let mut rep = Report::new("weighted star order");
    let w = sampling::psd_mixed_rank(rng, n, tol);
    let (a, d) = sampling::weighted_star_pair(rng, &w, true, tol);
    let b = &a + &d;
    let left = orders::leq_weighted_star(WeightedVariant::Left, &a, &b, &w, tol)?;
    rep.check("constructed_positive_detected", left.holds, 0.0);
    let both = orders::leq_weighted_star(WeightedVariant::Both, &a, &b, &w, tol)?;
    rep.check("constructed_two_sided_detected", both.holds, 0.0);

    let (ra, rb) = sampling::random_pair::<T, _>(rng, n);
    for (label, a, b) in [("positive", &a, &b), ("random", &ra, &rb)] {
        let algebraic = orders::leq_weighted_star(WeightedVariant::Left, a, b, &w, tol)?.holds;
        let definitional = orders::weighted_star_definitional(a, b, &w, tol)?;
        rep.check(format!("{label}_forms_agree"), algebraic == definitional, 0.0);
        match orders::weighted_star_forms(a, b, &w, tol)? {
            Some(f) => {
                let ok = f.via_projection == algebraic && f.via_identity == algebraic;
                rep.check(format!("{label}_projection_form_agrees"), ok, 0.0);
            }
            None => {
                rep.record(format!("{label}_projection_form_agrees"), "skipped: N(W) meets R(A)");
            }
        }
        if let Some([proj, ident]) = orders::weighted_star_two_sided_forms(a, b, &w, tol)? {
            let two = orders::leq_weighted_star(WeightedVariant::Both, a, b, &w, tol)?.holds;
            rep.check(format!("{label}_two_sided_forms_agree"), proj == two && ident == two, 0.0);
        }
    }

    let i = PsdOperator::identity(n);
    let pairs = [
        (WeightedVariant::Left, StarVariant::LeftStar),
        (WeightedVariant::Right, StarVariant::RightStar),
        (WeightedVariant::Both, StarVariant::Star),
    ];
    let mut agree = true;
    let (sa, sb) = sampling::weighted_star_pair(rng, &i, true, tol);
    let sb = &sa + sb;
    for (wv, sv) in pairs {
        for (a, b) in [(&sa, &sb), (&ra, &rb)] {
            agree &= orders::leq_weighted_star(wv, a, b, &i, tol)?.holds == orders::leq_star(sv, a, b, tol)?.holds;
        }
    }
    rep.check("identity_weight_matches_star", agree, 0.0);

    for (kind, label) in [
        (ChainKind::Minus, "minus"),
        (ChainKind::Star, "star"),
        (ChainKind::WeightedStar, "weighted_star"),
    ] {
        let chain = sampling::chain(rng, kind, &w, tol);
        let relation = |x: &ComplexMatrix<T>, y: &ComplexMatrix<T>| -> Result<bool> {
            Ok(match kind {
                ChainKind::Minus => orders::leq_minus(x, y, tol)?.holds,
                ChainKind::Star => orders::leq_star(StarVariant::Star, x, y, tol)?.holds,
                ChainKind::WeightedStar => orders::leq_weighted_star(WeightedVariant::Both, x, y, &w, tol)?.holds,
            })
        };
        let elements = [chain[0].clone(), chain[2].clone()];
        let axioms = orders::order_axioms_harness(relation, &elements, &[chain], tol)?;
        rep.absorb(label, axioms);
    }
    Ok(rep)
}

fn minimization<T: Real>(rng: &mut SampleRng, n: usize, tol: &Tolerance<T>) -> Result<Report> {
    let w = sampling::psd_mixed_rank(rng, n, tol);
    let k = rng.random_range(0..=n);
    let a = sampling::matrix_of_rank::<T, _>(rng, n, n, k);
    let b = sampling::nullspace_matched_factor(rng, &a, &w, tol);
    let seed: u64 = rng.random();
    let mut rep = approx::minimize_quadratic(&a, &b, &w, INNER_SAMPLES, seed, tol)?.report(tol);
    for p in [1.0, 2.0, 3.0] {
        let s = approx::schatten_min_check(&a, &b, &w, p, INNER_SAMPLES, seed.wrapping_add(1), tol)?;
        rep.absorb(&format!("p{p}"), s);
    }
    // the records carry instance-specific values; keep only checks
    rep.checks.retain(|c| c.note.is_none() || !c.name.starts_with("schatten_p"));
    Ok(rep)
}

fn joint_least_squares<T: Real>(rng: &mut SampleRng, n: usize, tol: &Tolerance<T>) -> Result<Report> {
    let w = sampling::psd_mixed_rank(rng, n, tol);
    let (a, b) = sampling::weighted_star_pair(rng, &w, false, tol);
    let c = sampling::gaussian::<T, _>(rng, n, n);
    let mut rep = approx::simultaneous_ls(&a, &b, &c, &w, 2.0, tol)?;
    rep.checks.retain(|c| c.note.is_none());
    Ok(rep)
}

fn compression_additivity<T: Real>(rng: &mut SampleRng, n: usize, tol: &Tolerance<T>) -> Result<Report> {
    let w = sampling::psd_mixed_rank(rng, n, tol);
    let (a, b) = sampling::weighted_star_pair(rng, &w, false, tol);
    approx::compression_additivity_check(&a, &b, &w, tol)
}

/// Runs one named suite. Unknown names are a usage error.
pub fn run_suite<T: Real>(name: &str, n: usize, trials: usize, seed: u64, tol: &Tolerance<T>) -> Result<Report> {
    if n == 0 {
        return Err(Error::DimensionMismatch("suite dimension must be positive".into()));
    }
    type Trial<T> = fn(&mut SampleRng, usize, &Tolerance<T>) -> Result<Report>;
    let trial: Trial<T> = match name {
        "comp1" => compatibility,
        "teoshorted" => |r, n, t| shorted_checks(r, n, t, &["pekarev_vs_schur", "maximality", "minus_maximality"]),
        "teoshorted2" => |r, n, t| {
            shorted_checks(
                r,
                n,
                t,
                &[
                    "projection_infimum",
                    "projection_infimum_attained",
                    "idempotence",
                    "companion_identity",
                    "range_identity",
                    "nullspace_identity",
                    "compression_nullspace_identity",
                ],
            )
        },
        "minus-rap" => minus_rap,
        "prop1" => weighted_star,
        "propmin" => minimization,
        "thm1" => joint_least_squares,
        "compression-additivity" => compression_additivity,
        other => return Err(Error::HypothesisViolated(format!("unknown suite '{other}'"))),
    };
    let mut rng = sampling::rng(seed);
    let mut agg = Aggregate::default();
    for _ in 0..trials {
        let mut trial_rng = sampling::rng(rng.random());
        agg.absorb(trial(&mut trial_rng, n, tol));
    }
    Ok(agg.finish(&format!("suite {name}: n = {n}, trials = {trials}, seed = {seed}")))
}

/// Every suite in [`SUITES`] order, each seeded from `seed`.
pub fn run_all<T: Real>(n: usize, trials: usize, seed: u64, tol: &Tolerance<T>) -> Result<Vec<Report>> {
    SUITES.iter().map(|s| run_suite(s, n, trials, seed, tol)).collect()
}
