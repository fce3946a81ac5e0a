//! Linear stability of homogeneous states: Nyquist curve, critical period,
//! unstable wave-number intervals, dispersion roots and unstable neighbours.

mod neighbor;
mod roots;

pub use neighbor::{unstable_neighbor, NeighborOptions, UnstableNeighbor};
pub use roots::{dispersion_function, dispersion_root, growth_rates, most_unstable_root, DispersionRoot, NEUTRAL_IM};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::profiles::{find_extrema, ExtremumKind, VelocityProfile};
use crate::quadrature::{cauchy_integral, hilbert_boundary, pv_integral};
use crate::scalar::{to_f64, Real};

/// Point where the Nyquist curve meets the real axis: an extremum `v_i` of
/// `f0` and the value `∫ f0'/(v - v_i) dv`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing<T> {
    pub v: T,
    pub integral: T,
    pub kind: ExtremumKind,
    pub degenerate: bool,
}

/// Boundary values `Z(ξ + i0) = P∫ f0'/(v - ξ) dv + iπ f0'(ξ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NyquistCurve<T> {
    pub xi: Vec<T>,
    pub z: Vec<Complex<T>>,
    pub crossings: Vec<Crossing<T>>,
}

/// Nyquist curve on the profile's own grid nodes.
pub fn nyquist<T: Real>(profile: &VelocityProfile<T>) -> Result<NyquistCurve<T>> {
    let d = profile.derivative();
    let z = hilbert_boundary(&d)?;
    Ok(NyquistCurve { xi: profile.grid.nodes(), z, crossings: crossings(profile)? })
}

/// Nyquist curve at arbitrary interior points.
pub fn nyquist_at<T: Real>(profile: &VelocityProfile<T>, xi: &[T]) -> Result<NyquistCurve<T>> {
    let d = profile.derivative();
    let z = xi
        .iter()
        .map(|&x| cauchy_integral(&d, Complex::new(x, T::zero())))
        .collect::<Result<Vec<_>>>()?;
    Ok(NyquistCurve { xi: xi.to_vec(), z, crossings: crossings(profile)? })
}

fn crossings<T: Real>(profile: &VelocityProfile<T>) -> Result<Vec<Crossing<T>>> {
    let d = profile.derivative();
    find_extrema(profile)
        .into_iter()
        .map(|e| {
            Ok(Crossing { v: e.v, integral: pv_integral(&d, e.v)?, kind: e.kind, degenerate: e.degenerate })
        })
        .collect()
}

/// Critical period and the unstable wave-number set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport<T> {
    /// `+∞` when every extremum integral is nonpositive.
    pub t0: T,
    pub extrema: Vec<Crossing<T>>,
    pub unstable_intervals: Vec<(T, T)>,
    pub gaps: Vec<(T, T)>,
    /// Degenerate extrema and numerical anomalies, in words.
    pub flags: Vec<String>,
}

impl<T: Real> StabilityReport<T> {
    /// `2π/T0`, zero for a stable profile.
    pub fn k_max(&self) -> T {
        if self.t0.is_infinite() {
            T::zero()
        } else {
            T::TAU() / self.t0
        }
    }

    pub fn is_unstable_at(&self, k: T) -> bool {
        let k = k.abs();
        self.unstable_intervals.iter().any(|&(a, b)| k > a && k < b)
    }
}

/// `(2π/T0)^2 = max{0, max_i ∫ f0'/(v - v_i) dv}` together with the intervals of
/// unstable `k`.
///
/// The number of unstable modes at `k` equals the winding number of the
/// Nyquist curve about `k^2`. Each crossing to the right of `k^2` contributes
/// `+1` at a minimum (upward crossing) and `-1` at a maximum, so the count is
/// piecewise constant between the positive crossing values.
pub fn critical_period<T: Real>(profile: &VelocityProfile<T>) -> Result<StabilityReport<T>> {
    let extrema = crossings(profile)?;
    let mut flags = Vec::new();
    let usable: Vec<&Crossing<T>> = extrema
        .iter()
        .filter(|c| {
            if c.degenerate {
                flags.push(format!("degenerate extremum at v = {:.6}; excluded", to_f64(c.v)));
            }
            !c.degenerate
        })
        .collect();

    let best = usable.iter().copied().max_by(|a, b| a.integral.partial_cmp(&b.integral).unwrap());
    let kmax2 = best.map(|c| c.integral).unwrap_or(T::zero()).max(T::zero());
    let t0 = if kmax2 > T::zero() { T::TAU() / kmax2.sqrt() } else { T::infinity() };
    if let Some(c) = best {
        if c.integral > T::zero() && c.kind == ExtremumKind::Max {
            flags.push(format!("anomaly: largest integral attained at a maximum (v = {:.6})", to_f64(c.v)));
        }
    }

    let winding = |p: T| -> i64 {
        usable
            .iter()
            .filter(|c| c.integral > p)
            .map(|c| if c.kind == ExtremumKind::Min { 1 } else { -1 })
            .sum()
    };
    let mut cuts: Vec<T> = usable.iter().map(|c| c.integral).filter(|&x| x > T::zero()).collect();
    cuts.push(T::zero());
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup_by(|a, b| (*a - *b).abs() <= T::from_f64(1e-14).unwrap() * (T::one() + b.abs()));

    let mut unstable: Vec<(T, T)> = Vec::new();
    let mut gaps: Vec<(T, T)> = Vec::new();
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let n = winding((lo + hi) / T::from_f64(2.0).unwrap());
        if n < 0 {
            flags.push(format!("anomaly: negative winding number on k^2 in ({}, {})", to_f64(lo), to_f64(hi)));
        }
        let seg = (lo.sqrt(), hi.sqrt());
        let target = if n > 0 { &mut unstable } else { &mut gaps };
        match target.last_mut() {
            Some(last) if last.1 == seg.0 => last.1 = seg.1,
            _ => target.push(seg),
        }
    }
    Ok(StabilityReport { t0, extrema, unstable_intervals: unstable, gaps, flags })
}
