use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar type the simulator is generic over: `f32` or `f64`.
///
/// The tolerances are the thresholds past which a computation is reported as
/// an internal-consistency failure rather than rounding noise.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Maximum tolerated drift of Σ|amp|² away from 1.
    const NORM_TOLERANCE: f64;
    /// Maximum tolerated imaginary residue of a Hermitian quadratic form.
    const RESIDUE_TOLERANCE: f64;
    /// Maximum tolerated overshoot of a Bloch vector norm past 1.
    const BLOCH_TOLERANCE: f64;

    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable in every Real")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("Real always converts to f64")
    }
}

impl Real for f32 {
    const NORM_TOLERANCE: f64 = 1e-4;
    const RESIDUE_TOLERANCE: f64 = 1e-4;
    const BLOCH_TOLERANCE: f64 = 1e-4;
}

impl Real for f64 {
    const NORM_TOLERANCE: f64 = 1e-9;
    const RESIDUE_TOLERANCE: f64 = 1e-10;
    const BLOCH_TOLERANCE: f64 = 1e-9;
}
