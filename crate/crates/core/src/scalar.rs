//! Real scalar abstraction.
//!
//! Every operator lives in `C^n`; the complex entries are `Complex<T>` for a
//! real field `T`. `f64` is the working precision, `f32` is supported with
//! correspondingly looser default tolerances.

use nalgebra::{Complex, DMatrix, RealField};
use num_traits::{FromPrimitive, ToPrimitive};

/// Real field backing the complex scalars.
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive {
    /// Default `(rank_rel, cmp_abs, cmp_rel)` for this precision.
    const DEFAULT_TOLERANCE: (f64, f64, f64);

    /// Converts an `f64` literal into this field.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in every Real")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const DEFAULT_TOLERANCE: (f64, f64, f64) = (1e-10, 1e-9, 1e-8);
}

impl Real for f32 {
    const DEFAULT_TOLERANCE: (f64, f64, f64) = (1e-5, 1e-4, 1e-3);
}

/// Dense complex matrix; the representation of every operator on `C^n`.
pub type ComplexMatrix<T> = DMatrix<Complex<T>>;
