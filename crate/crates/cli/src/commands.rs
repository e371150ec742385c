use shortcalc::linalg::{frobenius, identity};
use shortcalc::orders::{self, Relation};
use shortcalc::{approx, compat, shorted, suites, Error, Matrix64, Report, Tolerance64};

use crate::args::Command;
use crate::error::{usage, CliError};
use crate::output::{Outcome, Value};
use crate::problem::ProblemFile;

fn mat(m: &Matrix64) -> Value {
    Value::Matrix(m.clone())
}

pub fn run_command(cmd: &Command, problem: &ProblemFile, tol: &Tolerance64, seed: u64) -> Result<Outcome, CliError> {
    match cmd {
        Command::Short { w, s, trials, .. } => short(problem, w, s, *trials, seed, tol),
        Command::Compat { w, s, .. } => compat_cmd(problem, w, s, tol),
        Command::Order { rel, a, b, w, c, p, .. } => order(problem, *rel, a, b, w, c.as_deref(), *p, tol),
        Command::Winverse { a, w, b, trials, .. } => winverse(problem, a, w, b.as_deref(), *trials, seed, tol),
        Command::Minimize { a, b, w, p, trials, .. } => minimize(problem, a, b, w, *p, *trials, seed, tol),
        Command::Verify { suite, n, trials, .. } => verify(suite, *n, *trials, seed, tol),
    }
}

/// Outcome for a well-formed input whose mathematics fails a precondition.
pub fn failed(cmd: &Command, err: &CliError) -> Outcome {
    let mut out = Outcome::new(cmd.name(), cmd.name());
    out.report.check("preconditions", false, 0.0).note_last(err.to_string());
    out
}

fn check_p(p: f64) -> Result<(), CliError> {
    if p.is_nan() || p < 1.0 {
        return Err(usage(format!("--p must be at least 1 (got {p})")));
    }
    Ok(())
}

fn short(pf: &ProblemFile, w: &str, s: &str, trials: usize, seed: u64, tol: &Tolerance64) -> Result<Outcome, CliError> {
    let w = pf.weight(w, tol)?;
    let s = pf.subspace(s, tol)?;
    let res = shorted::shorted_operator(&w, &s, tol)?;
    let mut out = Outcome::new("short", "");
    out.put("shorted", mat(res.shorted.matrix()))
        .put("compression", mat(res.compression.matrix()))
        .put("shorted_rank", Value::Count(res.shorted.rank() as u64))
        .put("compression_rank", Value::Count(res.compression.rank() as u64));
    out.report = shorted::verify_shorted(&w, &s, trials, seed, tol)?;
    Ok(out)
}

fn compat_cmd(pf: &ProblemFile, w: &str, s: &str, tol: &Tolerance64) -> Result<Outcome, CliError> {
    let w = pf.weight(w, tol)?;
    let s = pf.subspace(s, tol)?;
    let cert = compat::is_compatible(&w, &s, tol)?;
    let mut out = Outcome::new("compat", "");
    out.put("compatible", Value::Flag(cert.compatible))
        .put("companion_basis", mat(cert.companion.basis()))
        .put("defect_dim", Value::Count(cert.defect.dim() as u64))
        .put("margin", Value::Real(cert.margin))
        .put("direct_decomposition", Value::Flag(cert.direct_decomposition));
    if let Some(p) = &cert.canonical {
        out.put("canonical_projection", mat(p.matrix()));
    }
    out.report = match compat::verify_compatibility(&w, &s, tol) {
        Ok(r) => r,
        // incompatible pairs: only the equivalence of the four conditions applies
        Err(Error::NotCompatible) => {
            let conds = compat::compatibility_conditions(&w, &s, tol)?;
            let mut r = Report::new("compatibility");
            r.check("conditions_agree", conds.iter().all(|&c| c == conds[0]), 0.0)
                .note_last(format!("{conds:?}"));
            r
        }
        Err(e) => return Err(e.into()),
    };
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn order(
    pf: &ProblemFile,
    rel: Relation,
    a: &str,
    b: &str,
    w: &str,
    c: Option<&str>,
    p: f64,
    tol: &Tolerance64,
) -> Result<Outcome, CliError> {
    check_p(p)?;
    let a = pf.matrix(a)?;
    let b = pf.matrix(b)?;
    let weight = match rel.needs_weight() {
        true => Some(pf.weight(w, tol)?),
        false => None,
    };
    let v = orders::decide(rel, a, b, weight.as_ref(), tol)?;
    let mut out = Outcome::new("order", "");
    out.put("relation", Value::Text(rel.name().into()))
        .put("holds", Value::Flag(v.holds))
        .put("reason", Value::Text(v.failure.as_str().into()));
    let mut rep = Report::new(format!("A {rel} B"));

    let witnesses = [
        ("left_witness", &v.left_witness, a.clone(), b.clone()),
        ("right_witness", &v.right_witness, a.adjoint(), b.adjoint()),
    ];
    for (name, wit, x, y) in witnesses {
        let Some(q) = wit else { continue };
        out.put(name, mat(q.matrix()));
        let r = frobenius(&(&x - q.matrix() * &y));
        let scale = frobenius(q.matrix()) * frobenius(&y) + frobenius(&x);
        rep.check(format!("{name}_identity"), tol.close(r, scale), r);
        let d = q.idempotence_defect();
        let pn = frobenius(q.matrix());
        rep.check(format!("{name}_idempotent"), tol.close(d, pn * pn + pn), d);
    }

    match rel {
        Relation::Minus | Relation::LeftMinus => {
            let by_def = orders::minus_by_definition(a, b, tol)?;
            rep.check("definition_route_agrees", by_def == v.holds, 0.0);
        }
        Relation::WStarLeft => {
            let w = weight.as_ref().expect("weighted relation");
            let by_def = orders::weighted_star_definitional(a, b, w, tol)?;
            rep.check("definition_route_agrees", by_def == v.holds, 0.0);
            match orders::weighted_star_forms(a, b, w, tol)? {
                Some(f) => {
                    rep.check(
                        "alternative_forms_agree",
                        f.via_projection == v.holds && f.via_identity == v.holds,
                        0.0,
                    );
                }
                None => {
                    rep.record("alternative_forms", "not applicable: N(W) meets R(A)");
                }
            }
        }
        _ => {}
    }

    if v.holds && matches!(rel, Relation::WStarLeft | Relation::WStar) {
        let w = weight.as_ref().expect("weighted relation");
        let d = b - a;
        rep.absorb("additivity", approx::compression_additivity_check(a, &d, w, tol)?);
        if let Some(c) = c {
            let c = pf.matrix(c)?;
            rep.absorb("least_squares", approx::simultaneous_ls(a, &d, c, w, p, tol)?);
        }
    }
    out.report = rep;
    Ok(out)
}

fn winverse(
    pf: &ProblemFile,
    a: &str,
    w: &str,
    b: Option<&str>,
    trials: usize,
    seed: u64,
    tol: &Tolerance64,
) -> Result<Outcome, CliError> {
    let a = pf.matrix(a)?;
    let w = pf.weight(w, tol)?;
    let b = match b {
        Some(id) => pf.matrix(id)?.clone(),
        None if pf.matrices.contains_key("B") => pf.matrix("B")?.clone(),
        None => identity::<f64>(a.nrows()),
    };
    let r = approx::w_inverse(a, &w, &b, tol)?;
    let mut out = Outcome::new("winverse", "");
    out.put("solution", mat(&r.solution))
        .put("achieved", mat(r.achieved.matrix()))
        .put("normal_residual", Value::Real(r.normal_residual))
        .put("free_dim", Value::Count(r.free_dim as u64));
    let mut rep = Report::new("W-inverse");
    rep.check("minimum", r.is_minimum, r.normal_residual);
    rep.check("rank_consistent", r.rank_consistent, 0.0);
    let by_def = approx::w_least_squares_holds(a, &w, &b, &r.solution, trials, seed, tol)?;
    rep.check("least_squares_by_definition", by_def, 0.0);
    out.report = rep;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn minimize(
    pf: &ProblemFile,
    a: &str,
    b: &str,
    w: &str,
    p: f64,
    trials: usize,
    seed: u64,
    tol: &Tolerance64,
) -> Result<Outcome, CliError> {
    check_p(p)?;
    let a = pf.matrix(a)?;
    let b = pf.matrix(b)?;
    let w = pf.weight(w, tol)?;
    let m = approx::minimize_quadratic(a, b, &w, trials, seed, tol)?;
    let mut out = Outcome::new("minimize", "");
    out.put("minimizer", mat(&m.minimizer))
        .put("value", mat(m.value.matrix()))
        .put("shorted_residual", Value::Real(m.shorted_residual))
        .put("normal_residual", Value::Real(m.normal_residual));
    let mut rep = m.report(tol);
    rep.absorb("schatten", approx::schatten_min_check(a, b, &w, p, trials, seed, tol)?);
    out.report = rep;
    Ok(out)
}

fn verify(suite: &str, n: usize, trials: usize, seed: u64, tol: &Tolerance64) -> Result<Outcome, CliError> {
    if n == 0 {
        return Err(usage("--n must be positive"));
    }
    let names: Vec<&str> = match suite {
        "all" => suites::SUITES.to_vec(),
        s if suites::SUITES.contains(&s) => vec![s],
        s => {
            return Err(usage(format!(
                "unknown suite `{s}`; expected `all` or one of {}",
                suites::SUITES.join(", ")
            )))
        }
    };
    let mut out = Outcome::new("verify", "");
    let mut rep = Report::new(format!("verify: n = {n}, trials = {trials}, seed = {seed}"));
    for name in names {
        let r = suites::run_suite(name, n, trials, seed, tol)?;
        out.put(name, Value::Flag(r.all_passed()));
        rep.absorb(name, r);
    }
    out.report = rep;
    Ok(out)
}
