//! Compatibility of a positive weight `W` with a subspace `S`, and the
//! canonical `W`-Hermitian projection `P_{W,S}`.

use crate::error::{Error, Result};
use crate::linalg::{self, ensure_dim, frobenius, identity};
use crate::orders;
use crate::projection::{oblique_projection, Projection};
use crate::psd::PsdOperator;
use crate::report::Report;
use crate::scalar::{ComplexMatrix, Real};
use crate::shorted;
use crate::subspace::Subspace;
use crate::tolerance::Tolerance;

#[derive(Debug, Clone)]
pub struct CompatibilityCertificate<T: Real> {
    pub compatible: bool,
    /// `S^{⊥_W} = W^{-1}(S^⊥)`
    pub companion: Subspace<T>,
    /// `P_{W,S}`; present iff compatible.
    pub canonical: Option<Projection<T>>,
    /// `N = S ∩ N(W)`
    pub defect: Subspace<T>,
    /// Smallest singular value of `[Q_S, Q_{S^{⊥_W} ⊖ N}]`: how far the
    /// decomposition is from degenerate.
    pub margin: T,
    /// `C^n = S ∔ (S^{⊥_W} ⊖ S)`
    pub direct_decomposition: bool,
}

/// `S^{⊥_W} = {x : ⟨Wx, y⟩ = 0 for all y ∈ S}`.
pub fn w_companion<T: Real>(w: &PsdOperator<T>, s: &Subspace<T>, tol: &Tolerance<T>) -> Result<Subspace<T>> {
    ensure_dim(w.dim(), s.ambient_dim(), "weight vs subspace ambient")?;
    linalg::preimage(w.matrix(), &s.complement(), tol)
}

pub fn is_compatible<T: Real>(
    w: &PsdOperator<T>,
    s: &Subspace<T>,
    tol: &Tolerance<T>,
) -> Result<CompatibilityCertificate<T>> {
    let n = w.dim();
    let companion = w_companion(w, s, tol)?;
    let defect = s.intersect(&w.nullspace(), tol)?;
    let compatible = s.sum(&companion, tol)?.dim() == n;
    let reduced = companion.ominus(s, tol)?;
    let direct_decomposition =
        s.dim() + reduced.dim() == n && s.is_direct_with(&reduced, tol)?;
    let margin = s.direct_sum_margin(&reduced)?;
    let canonical = if compatible {
        let null = companion.ominus(&defect, tol)?;
        oblique_projection(s, &null, tol).ok()
    } else {
        None
    };
    Ok(CompatibilityCertificate {
        compatible: compatible && canonical.is_some(),
        companion,
        canonical,
        defect,
        margin,
        direct_decomposition,
    })
}

/// `P_{W,S} = P_{S // S^{⊥_W} ⊖ N}`.
pub fn canonical_projection<T: Real>(
    w: &PsdOperator<T>,
    s: &Subspace<T>,
    tol: &Tolerance<T>,
) -> Result<Projection<T>> {
    is_compatible(w, s, tol)?.canonical.ok_or(Error::NotCompatible)
}

/// Membership in `P(W,S) = {Q : Q² = Q, R(Q) = S, WQ = Q*W}`.
pub fn projection_set_member<T: Real>(
    q: &ComplexMatrix<T>,
    w: &PsdOperator<T>,
    s: &Subspace<T>,
    tol: &Tolerance<T>,
) -> Result<bool> {
    let n = w.dim();
    ensure_dim(n, s.ambient_dim(), "weight vs subspace ambient")?;
    ensure_dim(n, q.nrows(), "projection rows")?;
    ensure_dim(n, q.ncols(), "projection cols")?;
    let qn = frobenius(q);
    let idempotent = tol.close(frobenius(&(q * q - q)), qn * qn);
    let range_ok = Subspace::span(q, tol).equals(s, tol);
    let wq = w.matrix() * q;
    let hermitian = tol.close(frobenius(&(&wq - wq.adjoint())), frobenius(w.matrix()) * qn);
    Ok(idempotent && range_ok && hermitian)
}

/// `W(I − P_{W,S})`, which equals `W_{/S}` for compatible pairs.
pub fn shorted_via_projection<T: Real>(
    w: &PsdOperator<T>,
    s: &Subspace<T>,
    tol: &Tolerance<T>,
) -> Result<ComplexMatrix<T>> {
    let q = canonical_projection(w, s, tol)?;
    let out = w.matrix() * (identity::<T>(w.dim()) - q.matrix());
    Ok(out)
}

fn rel_diff<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>, w: &PsdOperator<T>) -> f64 {
    (frobenius(&(a - b)) / (frobenius(w.matrix()) + T::one())).as_f64()
}

/// The four compatibility conditions, evaluated independently.
pub fn compatibility_conditions<T: Real>(
    w: &PsdOperator<T>,
    s: &Subspace<T>,
    tol: &Tolerance<T>,
) -> Result<[bool; 4]> {
    let n = w.dim();
    let cert = is_compatible(w, s, tol)?;
    // i) some Q ∈ P(W,S) exists; the canonical candidate is the witness.
    let cond_i = match &cert.canonical {
        Some(q) => projection_set_member(q.matrix(), w, s, tol)?,
        None => false,
    };
    // ii) C^n = S + S^{⊥_W}
    let cond_ii = s.sum(&cert.companion, tol)?.dim() == n;
    // iii) (W, S + N(W)) compatible, again via a witness in P(W, S + N(W)).
    let enlarged = s.sum(&w.nullspace(), tol)?;
    let cert3 = is_compatible(w, &enlarged, tol)?;
    let cond_iii = match &cert3.canonical {
        Some(q) => projection_set_member(q.matrix(), w, &enlarged, tol)?,
        None => false,
    };
    // iv) C^n = S ∔ (S^{⊥_W} ⊖ S)
    let cond_iv = cert.direct_decomposition;
    Ok([cond_i, cond_ii, cond_iii, cond_iv])
}

/// Compatibility equivalences, the range/nullspace form of the shorted
/// operator, `W_{/S} = W(I − Q) = (I − Q)*W(I − Q)`, and the minus-order
/// characterisation of `W_{/S} ≤⁻ W`.
pub fn verify_compatibility<T: Real>(w: &PsdOperator<T>, s: &Subspace<T>, tol: &Tolerance<T>) -> Result<Report> {
    let n = w.dim();
    let one = T::one();
    let cmp = tol.cmp_abs.as_f64();
    let mut rep = Report::new("compatibility");

    let conds = compatibility_conditions(w, s, tol)?;
    for (name, c) in ["cond_i_projection_exists", "cond_ii_sum_is_whole", "cond_iii_enlarged_compatible", "cond_iv_direct_decomposition"]
        .iter()
        .zip(conds)
    {
        rep.check(*name, c, 0.0);
    }
    let agree = conds.iter().all(|&c| c == conds[0]);
    rep.check("conditions_agree", agree, 0.0);

    let res = shorted::shorted_operator(w, s, tol)?;
    let ws = res.shorted.matrix();
    let range_target = w.range().intersect(&s.complement(), tol)?;
    let d = res.shorted_range.distance(&range_target)?;
    rep.check("range_identity", tol.close(d, one), d.as_f64());
    let null_target = w.nullspace().sum(s, tol)?;
    let d = res.shorted_nullspace.distance(&null_target)?;
    rep.check("nullspace_identity", tol.close(d, one), d.as_f64());

    let q = canonical_projection(w, s, tol)?;
    let iq = identity::<T>(n) - q.matrix();
    let r = rel_diff(&(w.matrix() * &iq), ws, w);
    rep.check("shorted_equals_w_times_complement", r <= cmp, r);
    let r = rel_diff(&(iq.adjoint() * w.matrix() * &iq), ws, w);
    rep.check("shorted_equals_congruence", r <= cmp, r);

    let minus = orders::leq_minus(ws, w.matrix(), tol)?.holds;
    let inclusion = w.range().contains(&res.shorted_range, tol)?;
    rep.check("minus_matches_range_inclusion", minus == inclusion, 0.0);
    rep.note_last(format!("minus={minus} inclusion={inclusion}"));
    let nullspace_compatible = is_compatible(w, &res.shorted_nullspace, tol)?.compatible;
    rep.check("nullspace_compatible_iff_minus", nullspace_compatible == minus, 0.0);
    let spans = res
        .shorted_nullspace
        .sum(&res.compression_nullspace, tol)?
        .dim()
        == n;
    rep.check("nullspaces_span_iff_minus", spans == minus, 0.0);
    rep.check("compatible_iff_minus", conds[0] == minus, 0.0);
    rep.note_last("W^{1/2}(S) is closed automatically in finite dimension");
    Ok(rep)
}
