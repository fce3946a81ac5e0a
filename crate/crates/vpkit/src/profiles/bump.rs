use serde::{Deserialize, Serialize};

use crate::scalar::{lit, Real};

/// Even positive bump `F(v)` used to modify a profile near a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BumpFamily {
    /// `exp(-(v-v0)^2/2) + exp(-(v+v0)^2/2)`; raises `∫F'/v` above zero once `v0` is large enough.
    DoubleGaussian { v0: f64 },
    /// `exp(-v^2/2)`, for which `∫F'/v = -sqrt(2π)`.
    Gaussian,
}

impl BumpFamily {
    pub fn positive_nu(v0: f64) -> Self {
        BumpFamily::DoubleGaussian { v0 }
    }

    pub fn negative_nu() -> Self {
        BumpFamily::Gaussian
    }

    pub fn eval<T: Real>(&self, v: T) -> T {
        match *self {
            BumpFamily::DoubleGaussian { v0 } => {
                let v0 = lit::<T>(v0);
                let h = lit::<T>(-0.5);
                (h * (v - v0) * (v - v0)).exp() + (h * (v + v0) * (v + v0)).exp()
            }
            BumpFamily::Gaussian => (lit::<T>(-0.5) * v * v).exp(),
        }
    }

    pub fn deriv<T: Real>(&self, v: T) -> T {
        match *self {
            BumpFamily::DoubleGaussian { v0 } => {
                let v0 = lit::<T>(v0);
                let h = lit::<T>(-0.5);
                -(v - v0) * (h * (v - v0) * (v - v0)).exp() - (v + v0) * (h * (v + v0) * (v + v0)).exp()
            }
            BumpFamily::Gaussian => -v * (lit::<T>(-0.5) * v * v).exp(),
        }
    }

    /// `F` as a function of `y = v^2`, continued to `y < 0` analytically
    /// (`cosh` becomes `cos`). Needed for trapped energies.
    pub fn eval_sq(&self, y: f64) -> f64 {
        match *self {
            BumpFamily::DoubleGaussian { v0 } => {
                if y >= 0.0 {
                    let r = y.sqrt();
                    (-(r - v0) * (r - v0) / 2.0).exp() + (-(r + v0) * (r + v0) / 2.0).exp()
                } else {
                    2.0 * (-(y + v0 * v0) / 2.0).exp() * (v0 * (-y).sqrt()).cos()
                }
            }
            BumpFamily::Gaussian => (-y / 2.0).exp(),
        }
    }

    /// `C0 = ∫F dv`.
    pub fn mass(&self) -> f64 {
        let s = (2.0 * std::f64::consts::PI).sqrt();
        match self {
            BumpFamily::DoubleGaussian { .. } => 2.0 * s,
            BumpFamily::Gaussian => s,
        }
    }

    /// `∫F'(v)/v dv`. `F` is even, so the integrand is smooth at 0 and the
    /// trapezoid rule converges spectrally.
    pub fn pv_weight(&self) -> f64 {
        let (half, curv) = match *self {
            BumpFamily::DoubleGaussian { v0 } => (v0.abs() + 14.0, 2.0 * (v0 * v0 - 1.0) * (-v0 * v0 / 2.0).exp()),
            BumpFamily::Gaussian => (14.0, -1.0),
        };
        let h = 1e-2;
        let n = (half / h).ceil() as usize;
        let mut s = curv;
        for i in 1..=n {
            let v = i as f64 * h;
            s += 2.0 * self.deriv(v) / v;
        }
        s * h
    }

    /// `∫F^p dv` for the `L^p` scaling identity.
    pub fn lp_norm(&self, p: f64) -> f64 {
        let half = match *self {
            BumpFamily::DoubleGaussian { v0 } => v0.abs() + 14.0,
            BumpFamily::Gaussian => 14.0,
        };
        let h = 1e-3;
        let n = (half / h).ceil() as usize;
        let mut s = self.eval(0.0f64).powf(p);
        for i in 1..=n {
            s += 2.0 * self.eval(i as f64 * h).powf(p);
        }
        (s * h).powf(1.0 / p)
    }
}
