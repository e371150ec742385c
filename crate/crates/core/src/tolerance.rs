use crate::scalar::Real;

/// Numerical policy threaded through every rank or comparison decision.
///
/// * `rank_rel`: singular values at or below `rank_rel * scale` count as zero,
///   where `scale` is the largest singular value of the matrix (or a larger
///   reference scale supplied by the caller).
/// * `cmp_abs`, `cmp_rel`: a comparison of size-`s` quantities passes when the
///   discrepancy is at most `cmp_abs + cmp_rel * s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance<T> {
    pub rank_rel: T,
    pub cmp_abs: T,
    pub cmp_rel: T,
}

impl<T: Real> Default for Tolerance<T> {
    fn default() -> Self {
        let (rank_rel, cmp_abs, cmp_rel) = T::DEFAULT_TOLERANCE;
        Self {
            rank_rel: T::lit(rank_rel),
            cmp_abs: T::lit(cmp_abs),
            cmp_rel: T::lit(cmp_rel),
        }
    }
}

impl<T: Real> Tolerance<T> {
    /// Returns `None` when any field is negative or not finite.
    pub fn new(rank_rel: T, cmp_abs: T, cmp_rel: T) -> Option<Self> {
        let ok = |x: T| x >= T::zero() && x.is_finite();
        (ok(rank_rel) && ok(cmp_abs) && ok(cmp_rel)).then_some(Self {
            rank_rel,
            cmp_abs,
            cmp_rel,
        })
    }

    /// Uniform scaling of all three fields, used by the `--tol` override.
    pub fn scaled_to(base: T) -> Option<Self> {
        let d = Self::default();
        let factor = base / d.cmp_abs;
        Self::new(d.rank_rel * factor, base, d.cmp_rel * factor)
    }

    /// Allowed discrepancy for quantities of magnitude `scale`.
    pub fn slack(&self, scale: T) -> T {
        self.cmp_abs + self.cmp_rel * scale
    }

    pub fn close(&self, discrepancy: T, scale: T) -> bool {
        discrepancy <= self.slack(scale)
    }

    /// Singular-value cutoff for a matrix whose reference scale is `scale`.
    pub fn rank_cutoff(&self, scale: T) -> T {
        self.rank_rel * scale
    }
}
