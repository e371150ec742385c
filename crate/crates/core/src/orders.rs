//! Minus, left-minus, star and weighted-star orders, with witness projections.
//!
//! Ranks are decided relative to `max(‖A‖, ‖B‖)` so that a difference
//! `B − A` made of round-off is not mistaken for a full-rank matrix.

use std::fmt;
use std::str::FromStr;

use crate::compat;
use crate::error::Result;
use crate::linalg::{self, ensure_dim, ensure_same_shape, frobenius, spectral_norm};
use crate::projection::{oblique_projection, Projection};
use crate::psd::PsdOperator;
use crate::report::Report;
use crate::scalar::{ComplexMatrix, Real};
use crate::subspace::{concat_columns, Subspace};
use crate::tolerance::Tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureReason {
    RangeSumNotDirect,
    AdjointSumNotDirect,
    RangeNotContained,
    AlgebraicIdentityFails,
    None,
}

impl FailureReason {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::RangeSumNotDirect => "range_sum_not_direct",
            Self::AdjointSumNotDirect => "adjoint_sum_not_direct",
            Self::RangeNotContained => "range_not_contained",
            Self::AlgebraicIdentityFails => "algebraic_identity_fails",
            Self::None => "none",
        }
    }
}

#[derive(Debug, Clone)]
pub struct OrderVerdict<T: Real> {
    pub holds: bool,
    /// `P` with `A = PB`.
    pub left_witness: Option<Projection<T>>,
    /// `Q` with `A* = QB*`.
    pub right_witness: Option<Projection<T>>,
    pub failure: FailureReason,
}

impl<T: Real> OrderVerdict<T> {
    fn fail(reason: FailureReason) -> Self {
        Self {
            holds: false,
            left_witness: None,
            right_witness: None,
            failure: reason,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarVariant {
    Star,
    LeftStar,
    RightStar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightedVariant {
    Left,
    Right,
    Both,
}

/// Every relation the crate decides, as named on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Minus,
    LeftMinus,
    Star,
    LeftStar,
    RightStar,
    WStarLeft,
    WStarRight,
    WStar,
}

impl Relation {
    pub const ALL: [Relation; 8] = [
        Self::Minus,
        Self::LeftMinus,
        Self::Star,
        Self::LeftStar,
        Self::RightStar,
        Self::WStarLeft,
        Self::WStarRight,
        Self::WStar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Minus => "minus",
            Self::LeftMinus => "left-minus",
            Self::Star => "star",
            Self::LeftStar => "left-star",
            Self::RightStar => "right-star",
            Self::WStarLeft => "wstar-left",
            Self::WStarRight => "wstar-right",
            Self::WStar => "wstar",
        }
    }

    pub fn needs_weight(self) -> bool {
        matches!(self, Self::WStarLeft | Self::WStarRight | Self::WStar)
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Relation {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown relation '{s}'"))
    }
}

struct Ranks<'a, T: Real> {
    scale: T,
    tol: &'a Tolerance<T>,
}

impl<T: Real> Ranks<'_, T> {
    fn rank(&self, m: &ComplexMatrix<T>) -> usize {
        linalg::rank_scaled(m, self.scale, self.tol)
    }

    fn range(&self, m: &ComplexMatrix<T>) -> Subspace<T> {
        linalg::range_scaled(m, self.scale, self.tol)
    }
}

fn ranks<'a, T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>, tol: &'a Tolerance<T>) -> Ranks<'a, T> {
    Ranks {
        scale: spectral_norm(a).max(spectral_norm(b)),
        tol,
    }
}

/// `‖X − Y‖_F ≤ slack(‖X‖_F + ‖Y‖_F + 1)`
fn identity_holds<T: Real>(x: &ComplexMatrix<T>, y: &ComplexMatrix<T>, tol: &Tolerance<T>) -> bool {
    tol.close(frobenius(&(x - y)), frobenius(x) + frobenius(y) + T::one())
}

/// `A ≈ PB` relative to the sizes involved.
fn witness_holds<T: Real>(
    p: &ComplexMatrix<T>,
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
    tol: &Tolerance<T>,
) -> bool {
    tol.close(frobenius(&(a - p * b)), frobenius(p) * frobenius(b) + frobenius(a))
}

/// `P_{R(A) // R(B−A) ⊕ (R(A) + R(B−A))^⊥}`, the canonical minus witness.
fn minus_witness<T: Real>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
    r: &Ranks<'_, T>,
) -> Result<Projection<T>> {
    let ra = r.range(a);
    let rd = r.range(&(b - a));
    let rest = ra.sum(&rd, r.tol)?.complement();
    let null = rd.sum(&rest, r.tol)?;
    oblique_projection(&ra, &null, r.tol)
}

/// `A ≤⁻ B` via range additivity on both sides, with witnesses `A = PB`,
/// `A* = QB*`.
pub fn leq_minus<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>, tol: &Tolerance<T>) -> Result<OrderVerdict<T>> {
    ensure_same_shape(a, b)?;
    let r = ranks(a, b, tol);
    let d = b - a;
    let (ra, rb, rd) = (r.rank(a), r.rank(b), r.rank(&d));
    if rb != ra + rd {
        return Ok(OrderVerdict::fail(FailureReason::RangeSumNotDirect));
    }
    if !r.range(b).contains(&r.range(a), tol)? {
        return Ok(OrderVerdict::fail(FailureReason::RangeNotContained));
    }
    let (a_adj, b_adj) = (a.adjoint(), b.adjoint());
    if r.rank(&b_adj) != r.rank(&a_adj) + r.rank(&d.adjoint())
        || !r.range(&b_adj).contains(&r.range(&a_adj), tol)?
    {
        return Ok(OrderVerdict::fail(FailureReason::AdjointSumNotDirect));
    }
    let (p, q) = match (minus_witness(a, b, &r), minus_witness(&a_adj, &b_adj, &r)) {
        (Ok(p), Ok(q)) => (p, q),
        _ => return Ok(OrderVerdict::fail(FailureReason::AlgebraicIdentityFails)),
    };
    if !witness_holds(p.matrix(), a, b, tol) || !witness_holds(q.matrix(), &a_adj, &b_adj, tol) {
        return Ok(OrderVerdict::fail(FailureReason::AlgebraicIdentityFails));
    }
    Ok(OrderVerdict {
        holds: true,
        left_witness: Some(p),
        right_witness: Some(q),
        failure: FailureReason::None,
    })
}

/// `R(B) = R(A) ∔ R(B − A)`, decided from the rank of `[A, B − A]`.
pub fn leq_left_minus<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>, tol: &Tolerance<T>) -> Result<bool> {
    ensure_same_shape(a, b)?;
    let r = ranks(a, b, tol);
    let d = b - a;
    let joined = r.rank(&concat_columns(a, &d));
    Ok(joined == r.rank(a) + r.rank(&d) && joined == r.rank(b))
}

/// Minus order checked straight from its definition: `P = AB†` and
/// `Q = A*(B*)†` must be idempotents with `A = PB` and `A* = QB*`.
///
/// Independent of the rank-additivity route used by [`leq_minus`].
pub fn minus_by_definition<T: Real>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
    tol: &Tolerance<T>,
) -> Result<bool> {
    ensure_same_shape(a, b)?;
    let scale = spectral_norm(a).max(spectral_norm(b));
    let (_, b_pinv) = linalg::pinv_scaled(b, scale, tol);
    let idempotent = |p: &ComplexMatrix<T>| {
        let pn = frobenius(p);
        tol.close(frobenius(&(p * p - p)), pn * pn + pn)
    };
    let p = a * &b_pinv;
    let q = a.adjoint() * b_pinv.adjoint();
    Ok(idempotent(&p)
        && idempotent(&q)
        && witness_holds(&p, a, b, tol)
        && witness_holds(&q, &a.adjoint(), &b.adjoint(), tol))
}

/// Star order and its one-sided halves.
pub fn leq_star<T: Real>(
    variant: StarVariant,
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
    tol: &Tolerance<T>,
) -> Result<OrderVerdict<T>> {
    ensure_same_shape(a, b)?;
    let r = ranks(a, b, tol);
    let a_adj = a.adjoint();
    let b_adj = b.adjoint();
    let left_identity = || identity_holds(&(&a_adj * a), &(&a_adj * b), tol);
    let right_identity = || identity_holds(&(a * &a_adj), &(b * &a_adj), tol);
    let (identities, inclusion) = match variant {
        // both identities already force both range inclusions; check them anyway
        StarVariant::Star => (
            left_identity() && right_identity(),
            r.range(b).contains(&r.range(a), tol)? && r.range(&b_adj).contains(&r.range(&a_adj), tol)?,
        ),
        StarVariant::LeftStar => (left_identity(), r.range(b).contains(&r.range(a), tol)?),
        StarVariant::RightStar => (
            right_identity(),
            r.range(&b_adj).contains(&r.range(&a_adj), tol)?,
        ),
    };
    if !identities {
        return Ok(OrderVerdict::fail(FailureReason::AlgebraicIdentityFails));
    }
    if !inclusion {
        return Ok(OrderVerdict::fail(FailureReason::RangeNotContained));
    }
    let left = matches!(variant, StarVariant::Star | StarVariant::LeftStar)
        .then(|| Projection::orthogonal(&r.range(a)));
    let right = matches!(variant, StarVariant::Star | StarVariant::RightStar)
        .then(|| Projection::orthogonal(&r.range(&a_adj)));
    Ok(OrderVerdict {
        holds: true,
        left_witness: left,
        right_witness: right,
        failure: FailureReason::None,
    })
}

/// Witness for one side of the weighted star order: `P_{W,R(A)}` when
/// `N(W) ∩ R(A) = {0}`, the canonical minus witness otherwise.
fn weighted_witness<T: Real>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
    w: &PsdOperator<T>,
    r: &Ranks<'_, T>,
) -> Result<Option<Projection<T>>> {
    let ra = r.range(a);
    let p = if ra.intersect(&w.nullspace(), r.tol)?.is_trivial() {
        compat::canonical_projection(w, &ra, r.tol).ok()
    } else {
        None
    };
    let p = match p {
        Some(p) => Some(p),
        None => minus_witness(a, b, r).ok(),
    };
    Ok(p.filter(|p| witness_holds(p.matrix(), a, b, r.tol)))
}

/// Weighted star order, decided by range additivity plus `A*WA = A*WB`
/// (left) and its adjoint form `AWA* = BWA*` (right).
pub fn leq_weighted_star<T: Real>(
    variant: WeightedVariant,
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
    w: &PsdOperator<T>,
    tol: &Tolerance<T>,
) -> Result<OrderVerdict<T>> {
    ensure_same_shape(a, b)?;
    ensure_dim(w.dim(), a.nrows(), "weight vs rows")?;
    ensure_dim(w.dim(), a.ncols(), "weight vs cols")?;
    let r = ranks(a, b, tol);
    let wm = w.matrix();
    let (a_adj, b_adj) = (a.adjoint(), b.adjoint());
    let want_left = matches!(variant, WeightedVariant::Left | WeightedVariant::Both);
    let want_right = matches!(variant, WeightedVariant::Right | WeightedVariant::Both);

    let mut left_witness = None;
    let mut right_witness = None;
    if want_left {
        if !leq_left_minus(a, b, tol)? {
            return Ok(OrderVerdict::fail(FailureReason::RangeSumNotDirect));
        }
        if !identity_holds(&(&a_adj * wm * a), &(&a_adj * wm * b), tol) {
            return Ok(OrderVerdict::fail(FailureReason::AlgebraicIdentityFails));
        }
        left_witness = weighted_witness(a, b, w, &r)?;
    }
    if want_right {
        if !leq_left_minus(&a_adj, &b_adj, tol)? {
            return Ok(OrderVerdict::fail(FailureReason::AdjointSumNotDirect));
        }
        if !identity_holds(&(a * wm * &a_adj), &(b * wm * &a_adj), tol) {
            return Ok(OrderVerdict::fail(FailureReason::AlgebraicIdentityFails));
        }
        right_witness = weighted_witness(&a_adj, &b_adj, w, &r)?;
    }
    Ok(OrderVerdict {
        holds: true,
        left_witness,
        right_witness,
        failure: FailureReason::None,
    })
}

/// Left weighted star order from its definition: left minus order plus
/// `R(B − A) ⊆ R(A)^{⊥_W}`.
pub fn weighted_star_definitional<T: Real>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
    w: &PsdOperator<T>,
    tol: &Tolerance<T>,
) -> Result<bool> {
    ensure_same_shape(a, b)?;
    let r = ranks(a, b, tol);
    if !leq_left_minus(a, b, tol)? {
        return Ok(false);
    }
    let companion = compat::w_companion(w, &r.range(a), tol)?;
    companion.contains(&r.range(&(b - a)), tol)
}

/// The two alternative characterisations of the left weighted star order
/// that hold when `N(W) ∩ R(A) = {0}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightedStarForms {
    /// `R(A) ⊆ R(B)` and `A = P_{W,R(A)} B`
    pub via_projection: bool,
    /// `R(A) ⊆ R(B)` and `A*WA = A*WB`
    pub via_identity: bool,
}

/// `None` when the hypothesis `N(W) ∩ R(A) = {0}` fails.
pub fn weighted_star_forms<T: Real>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
    w: &PsdOperator<T>,
    tol: &Tolerance<T>,
) -> Result<Option<WeightedStarForms>> {
    ensure_same_shape(a, b)?;
    let r = ranks(a, b, tol);
    let ra = r.range(a);
    if !ra.intersect(&w.nullspace(), tol)?.is_trivial() {
        return Ok(None);
    }
    let contained = r.range(b).contains(&ra, tol)?;
    let p = compat::canonical_projection(w, &ra, tol)?;
    let wm = w.matrix();
    Ok(Some(WeightedStarForms {
        via_projection: contained && witness_holds(p.matrix(), a, b, tol),
        via_identity: contained && identity_holds(&(a.adjoint() * wm * a), &(a.adjoint() * wm * b), tol),
    }))
}

/// Two-sided forms, `None` unless `N(W)` meets neither `R(A)` nor
/// `R(A*)`: `[projection form, identity form]`.
pub fn weighted_star_two_sided_forms<T: Real>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
    w: &PsdOperator<T>,
    tol: &Tolerance<T>,
) -> Result<Option<[bool; 2]>> {
    ensure_same_shape(a, b)?;
    let r = ranks(a, b, tol);
    let (a_adj, b_adj) = (a.adjoint(), b.adjoint());
    let ra = r.range(a);
    let ra_adj = r.range(&a_adj);
    let nw = w.nullspace();
    if !ra.intersect(&nw, tol)?.is_trivial() || !ra_adj.intersect(&nw, tol)?.is_trivial() {
        return Ok(None);
    }
    let p = compat::canonical_projection(w, &ra, tol)?;
    let q = compat::canonical_projection(w, &ra_adj, tol)?;
    let projection_form =
        witness_holds(p.matrix(), a, b, tol) && witness_holds(q.matrix(), &a_adj, &b_adj, tol);
    let wm = w.matrix();
    let identity_form = identity_holds(&(a * wm * &a_adj), &(b * wm * &a_adj), tol)
        && identity_holds(&(&a_adj * wm * a), &(&a_adj * wm * b), tol);
    Ok(Some([projection_form, identity_form]))
}

/// Dispatch by relation name. Weighted relations require `w`.
pub fn decide<T: Real>(
    rel: Relation,
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
    w: Option<&PsdOperator<T>>,
    tol: &Tolerance<T>,
) -> Result<OrderVerdict<T>> {
    let weight = || {
        w.ok_or_else(|| crate::Error::HypothesisViolated(format!("relation {rel} needs a weight W")))
    };
    match rel {
        Relation::Minus => leq_minus(a, b, tol),
        Relation::LeftMinus => {
            let holds = leq_left_minus(a, b, tol)?;
            if holds {
                // finite dimension: left minus coincides with minus, reuse its witnesses
                let mut v = leq_minus(a, b, tol)?;
                v.holds = true;
                Ok(v)
            } else {
                Ok(OrderVerdict::fail(FailureReason::RangeSumNotDirect))
            }
        }
        Relation::Star => leq_star(StarVariant::Star, a, b, tol),
        Relation::LeftStar => leq_star(StarVariant::LeftStar, a, b, tol),
        Relation::RightStar => leq_star(StarVariant::RightStar, a, b, tol),
        Relation::WStarLeft => leq_weighted_star(WeightedVariant::Left, a, b, weight()?, tol),
        Relation::WStarRight => leq_weighted_star(WeightedVariant::Right, a, b, weight()?, tol),
        Relation::WStar => leq_weighted_star(WeightedVariant::Both, a, b, weight()?, tol),
    }
}

/// Checks reflexivity on `elements`, antisymmetry on every mutually related
/// pair drawn from `elements` and the chains, and transitivity on `chains`
/// (each built so that `c[0] ≤ c[1] ≤ c[2]`).
pub fn order_axioms_harness<T, F>(
    relation: F,
    elements: &[ComplexMatrix<T>],
    chains: &[[ComplexMatrix<T>; 3]],
    tol: &Tolerance<T>,
) -> Result<Report>
where
    T: Real,
    F: Fn(&ComplexMatrix<T>, &ComplexMatrix<T>) -> Result<bool>,
{
    let mut rep = Report::new("order axioms");

    let mut reflexive = 0;
    for x in elements {
        if relation(x, x)? {
            reflexive += 1;
        }
    }
    rep.check("reflexivity", reflexive == elements.len(), 0.0);
    rep.note_last(format!("{reflexive}/{} elements", elements.len()));

    let mut mutual = 0;
    let mut worst = 0.0f64;
    let mut antisym = true;
    let mut pairs: Vec<(&ComplexMatrix<T>, &ComplexMatrix<T>)> = Vec::new();
    for (i, x) in elements.iter().enumerate() {
        for y in &elements[i + 1..] {
            pairs.push((x, y));
        }
    }
    for c in chains {
        pairs.push((&c[0], &c[1]));
        pairs.push((&c[1], &c[2]));
        pairs.push((&c[0], &c[2]));
    }
    for (x, y) in pairs {
        if relation(x, y)? && relation(y, x)? {
            mutual += 1;
            let diff = frobenius(&(x - y));
            worst = worst.max(diff.as_f64());
            antisym &= tol.close(diff, frobenius(x) + frobenius(y));
        }
    }
    rep.check("antisymmetry", antisym, worst);
    rep.note_last(format!("{mutual} mutually related pairs"));

    let mut premises = true;
    let mut transitive = true;
    for c in chains {
        premises &= relation(&c[0], &c[1])? && relation(&c[1], &c[2])?;
        transitive &= relation(&c[0], &c[2])?;
    }
    rep.check("chain_premises", premises, 0.0);
    rep.check("transitivity", transitive, 0.0);
    rep.note_last(format!("{} chains", chains.len()));
    Ok(rep)
}
