use serde::{Deserialize, Serialize};

use crate::scalar::{lit, Real};

/// Even plateau cutoff: 1 on |x| <= 1, 0 on |x| >= 2, monotone in between.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cutoff {
    /// C-infinity transition built from `exp(-1/t)`.
    #[default]
    Smooth,
    /// Quintic smoothstep transition, C2 only.
    Quintic,
}

impl Cutoff {
    pub fn eval<T: Real>(self, x: T) -> T {
        let a = x.abs();
        if a <= T::one() {
            return T::one();
        }
        if a >= lit(2.0) {
            return T::zero();
        }
        let t = lit::<T>(2.0) - a;
        match self {
            Cutoff::Smooth => {
                let phi = |s: T| if s > T::zero() { (-s.recip()).exp() } else { T::zero() };
                let p = phi(t);
                p / (p + phi(T::one() - t))
            }
            Cutoff::Quintic => t * t * t * (t * (t * lit(6.0) - lit(15.0)) + lit(10.0)),
        }
    }
}
