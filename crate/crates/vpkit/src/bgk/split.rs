use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::Chebyshev;
use crate::profiles::{Cutoff, Sampled, VelocityProfile};

const POLY_NODES: usize = 15;

/// `f(c + u) = g_+(u^2)` for `u > 0` and `g_-(u^2)` for `u <= 0`.
///
/// Near `y = u^2 = 0` both branches use one polynomial in `y` fitted to the
/// even part of `f`; this is smooth in `u` and extends to slightly negative `y`,
/// where trapped particles sit. Above `poly_hi` the branches are read off the
/// samples directly (the common even part below `half_width^2`), with a smooth
/// blend over `[poly_lo, poly_hi]`.
#[derive(Debug, Clone)]
pub struct EnergySplit {
    pub center: f64,
    pub half_width: f64,
    profile: Sampled<f64>,
    poly: Chebyshev,
    poly_lo: f64,
    poly_hi: f64,
    y_min: f64,
}

/// Tabulated branches for output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitTable {
    pub y: Vec<f64>,
    pub g_plus: Vec<f64>,
    pub g_minus: Vec<f64>,
}

/// Splits `profile` about `c`. The profile must already be even about `c` on
/// `|v - c| <= 2 half_width` (see `symmetrize_near` with `delta2 = 2 half_width`).
pub fn energy_split(profile: &VelocityProfile<f64>, c: f64, half_width: f64) -> Result<EnergySplit> {
    let grid = profile.grid;
    if !(half_width > 0.0) || c - 2.0 * half_width < grid.v_min || c + 2.0 * half_width > grid.v_max {
        return Err(Error::OutOfDomain(format!("split window {c} ± 2·{half_width} leaves the grid")));
    }
    let s = profile.as_sampled();
    let fmax = profile.max_value();
    let m = (2.0 * half_width / grid.dv()).floor() as usize;
    let mut asym: f64 = 0.0;
    for j in 0..=m {
        let u = j as f64 * grid.dv();
        asym = asym.max((s.eval(c + u) - s.eval(c - u)).abs());
    }
    if asym > 1e-8 * fmax {
        return Err(Error::NotSymmetric(asym / fmax));
    }
    let poly_hi = 0.5 * half_width * half_width;
    let poly_lo = 0.5 * poly_hi;
    let even = |y: f64| {
        let u = y.max(0.0).sqrt();
        0.5 * (s.eval(c + u) + s.eval(c - u))
    };
    let poly = Chebyshev::fit(even, 0.0, poly_hi, POLY_NODES);
    Ok(EnergySplit { center: c, half_width, profile: s, poly, poly_lo, poly_hi, y_min: -0.1 * poly_hi })
}

impl EnergySplit {
    /// Smallest argument the polynomial continuation is trusted at.
    pub fn y_min(&self) -> f64 {
        self.y_min
    }

    fn direct(&self, plus: bool, y: f64) -> f64 {
        let u = y.sqrt();
        let (c, s) = (self.center, &self.profile);
        if y < self.half_width * self.half_width {
            0.5 * (s.eval(c + u) + s.eval(c - u))
        } else if plus {
            s.eval(c + u)
        } else {
            s.eval(c - u)
        }
    }

    /// `g_+(y)` for `plus`, else `g_-(y)`.
    pub fn g(&self, plus: bool, y: f64) -> Result<f64> {
        if y < self.y_min || !y.is_finite() {
            return Err(Error::OutOfTabulatedRange(y));
        }
        if y <= self.poly_lo {
            return Ok(self.poly.eval(y));
        }
        if y >= self.poly_hi {
            return Ok(self.direct(plus, y));
        }
        let t = (y - self.poly_lo) / (self.poly_hi - self.poly_lo);
        let w = 1.0 - Cutoff::Smooth.eval(1.0 + t);
        Ok((1.0 - w) * self.poly.eval(y) + w * self.direct(plus, y))
    }

    pub fn g_plus(&self, y: f64) -> Result<f64> {
        self.g(true, y)
    }

    pub fn g_minus(&self, y: f64) -> Result<f64> {
        self.g(false, y)
    }

    /// `f(c + u)` rebuilt from the branches.
    pub fn reconstruct(&self, u: f64) -> Result<f64> {
        self.g(u > 0.0, u * u)
    }

    /// Both branches on `n` uniform points of `[y_min, y_max]`.
    pub fn tabulate(&self, y_max: f64, n: usize) -> Result<SplitTable> {
        let y: Vec<f64> = (0..n).map(|i| self.y_min + (y_max - self.y_min) * i as f64 / (n - 1) as f64).collect();
        let g_plus = y.iter().map(|&y| self.g_plus(y)).collect::<Result<_>>()?;
        let g_minus = y.iter().map(|&y| self.g_minus(y)).collect::<Result<_>>()?;
        Ok(SplitTable { y, g_plus, g_minus })
    }
}
