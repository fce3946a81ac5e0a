use serde::{Deserialize, Serialize};

use super::FieldTimeSeries;
use crate::error::{Error, Result};
use crate::numerics::trapezoid;
use crate::scalar::{lit, Real};

/// `|E| ≈ prefactor · t^{-exponent}` over `window`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit<T> {
    pub exponent: T,
    pub prefactor: T,
    pub window: (T, T),
    pub r_squared: T,
    pub points: usize,
}

/// Least squares of `log|E|` against `log t` on the envelope: the largest
/// sample in each consecutive block of length `2π/|k|` inside the window.
pub fn fit_decay<T: Real>(series: &FieldTimeSeries<T>, t_lo: T, t_hi: T) -> Result<DecayFit<T>> {
    if series.t.len() != series.e.len() {
        return Err(Error::GridMismatch("times and field samples differ in length".into()));
    }
    let first = *series.t.first().ok_or(Error::InsufficientPoints(0))?;
    let last = *series.t.last().unwrap();
    if !(t_lo > T::zero() && t_lo < t_hi && t_lo >= first && t_hi <= last) {
        return Err(Error::InvalidSpec(format!("window ({t_lo}, {t_hi}) outside series support ({first}, {last})")));
    }
    let block = T::TAU() / series.k.abs();
    let mut pts: Vec<(T, T)> = Vec::new();
    let mut start = t_lo;
    while start + block <= t_hi + lit::<T>(1e-12) * t_hi {
        let end = start + block;
        let best = series
            .t
            .iter()
            .zip(&series.e)
            .filter(|(t, _)| **t >= start && **t < end)
            .map(|(t, e)| (*t, e.norm()))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        if let Some((t, a)) = best {
            if a > T::zero() && a.is_finite() {
                pts.push((t.ln(), a.ln()));
            }
        }
        start = end;
    }
    if pts.len() < 20 {
        return Err(Error::InsufficientPoints(pts.len()));
    }
    let n = lit::<T>(pts.len() as f64);
    let mx = pts.iter().map(|p| p.0).sum::<T>() / n;
    let my = pts.iter().map(|p| p.1).sum::<T>() / n;
    let sxx = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum::<T>();
    let sxy = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<T>();
    let syy = pts.iter().map(|p| (p.1 - my) * (p.1 - my)).sum::<T>();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let res = pts.iter().map(|p| (p.1 - icpt - slope * p.0).powi(2)).sum::<T>();
    let r2 = if syy > T::zero() { T::one() - res / syy } else { T::one() };
    Ok(DecayFit {
        exponent: -slope,
        prefactor: icpt.exp(),
        window: (t_lo, t_hi),
        r_squared: r2.max(T::zero()).min(T::one()),
        points: pts.len(),
    })
}

/// Truncated weighted norm over modes, with the same quantity on the first half
/// of the time range as a convergence check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralNorm<T> {
    pub value: T,
    pub half_range_value: T,
    /// `(value - half_range_value) / value`, zero when both vanish.
    pub tail_change: T,
}

/// `(Σ_k |k|^{3 + 2 s_v + 2 s_x} ∫ t^{2 s_v} |E_k|^2 dt)^{1/2}` by the trapezoidal rule.
pub fn integral_decay_norm<T: Real>(series: &[FieldTimeSeries<T>], s_x: T, s_v: T) -> Result<IntegralNorm<T>> {
    if s_v < T::zero() {
        return Err(Error::InvalidSpec(format!("s_v = {s_v} must be nonnegative")));
    }
    let two = lit::<T>(2.0);
    let mut full = T::zero();
    let mut half = T::zero();
    for s in series {
        if s.t.len() != s.e.len() {
            return Err(Error::GridMismatch("times and field samples differ in length".into()));
        }
        let w = s.k.abs().powf(lit::<T>(3.0) + two * s_v + two * s_x);
        let dt = s.dt();
        let vals: Vec<T> = s
            .t
            .iter()
            .zip(&s.e)
            .map(|(t, e)| if s_v == T::zero() { e.norm_sqr() } else { t.powf(two * s_v) * e.norm_sqr() })
            .collect();
        let cut = vals.len() / 2 + 1;
        full = full + w * trapezoid(&vals, dt);
        half = half + w * trapezoid(&vals[..cut.min(vals.len())], dt);
    }
    let (value, half_range_value) = (full.sqrt(), half.sqrt());
    let tail_change = if value > T::zero() { (value - half_range_value) / value } else { T::zero() };
    Ok(IntegralNorm { value, half_range_value, tail_change })
}
