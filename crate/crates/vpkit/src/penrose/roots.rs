use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profiles::{find_extrema, Sampled, VelocityProfile};
use crate::quadrature::{cauchy_integral, pv_integral};
use crate::scalar::{lit, to_f64, Real};

/// Roots with `Im c` at or below this are neutral.
pub const NEUTRAL_IM: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionRoot<T> {
    pub k: T,
    /// Phase velocity.
    pub c: Complex<T>,
    /// `k Im c`.
    pub growth_rate: T,
    /// `|k^2 - ∫ f0'/(v - c) dv|`.
    pub residual: T,
    pub neutral: bool,
}

/// `D(c) = k^2 - ∫ f0'/(v - c) dv` for `Im c >= 0`.
pub fn dispersion_function<T: Real>(profile: &VelocityProfile<T>, k: T, c: Complex<T>) -> Result<Complex<T>> {
    let d = profile.derivative();
    Ok(Complex::new(k * k, T::zero()) - cauchy_integral(&d, c)?)
}

/// Damped Newton iteration on `D(c)` kept in the upper half plane.
pub fn dispersion_root<T: Real>(profile: &VelocityProfile<T>, k: T, seed: Complex<T>) -> Result<DispersionRoot<T>> {
    let d1 = profile.derivative();
    let d2 = d1.derivative();
    newton(&d1, &d2, k, seed)
}

fn newton<T: Real>(d1: &Sampled<T>, d2: &Sampled<T>, k: T, seed: Complex<T>) -> Result<DispersionRoot<T>> {
    if !(seed.im > T::zero()) || !(k > T::zero()) {
        return Err(Error::PoleOutsideDomain { c: to_f64(seed.im) });
    }
    let k2 = Complex::new(k * k, T::zero());
    let eval = |c: Complex<T>| -> Result<Complex<T>> { Ok(k2 - cauchy_integral(d1, c)?) };
    let floor = lit::<T>(1e-12);
    let mut c = seed;
    let mut dc = eval(c)?;
    let tol = lit::<T>(1e-11) * (T::one() + k * k);
    for it in 0..100 {
        if dc.norm() <= tol {
            return Ok(finish(k, c, dc.norm()));
        }
        let deriv = -cauchy_integral(d2, c)?;
        let step = dc / deriv;
        let mut lambda = T::one();
        let mut accepted = None;
        for _ in 0..40 {
            let mut trial = c - step * lambda;
            if trial.im <= T::zero() {
                // stay above the axis: never move more than 90% of the way down
                trial.im = c.im * lit(0.1);
                if trial.im < floor {
                    return Err(Error::RootCollapsedToRealAxis { im_c: to_f64(c.im) });
                }
            }
            let dt = eval(trial)?;
            if dt.norm() < dc.norm() {
                accepted = Some((trial, dt));
                break;
            }
            lambda = lambda * lit(0.5);
        }
        match accepted {
            Some((t, dt)) => {
                let moved = (t - c).norm();
                c = t;
                dc = dt;
                if moved <= lit::<T>(1e-15) * (T::one() + c.norm()) {
                    break;
                }
            }
            None => {
                if dc.norm() <= lit::<T>(1e-8) {
                    break;
                }
                return Err(Error::NoConvergence { iterations: it + 1, residual: to_f64(dc.norm()) });
            }
        }
    }
    if dc.norm() <= lit::<T>(1e-8) {
        Ok(finish(k, c, dc.norm()))
    } else {
        Err(Error::NoConvergence { iterations: 100, residual: to_f64(dc.norm()) })
    }
}

fn finish<T: Real>(k: T, c: Complex<T>, residual: T) -> DispersionRoot<T> {
    DispersionRoot { k, c, growth_rate: k * c.im, residual, neutral: c.im <= lit(NEUTRAL_IM) }
}

/// Fastest-growing root at wave number `k`, or `None` when every seeded search
/// ends neutral. Seeds sit above each extremum with a positive integral, at a
/// few heights; roots are deduplicated by distance.
pub fn most_unstable_root<T: Real>(profile: &VelocityProfile<T>, k: T) -> Result<Option<DispersionRoot<T>>> {
    let k = k.abs();
    let d1 = profile.derivative();
    let d2 = d1.derivative();
    let mut centers: Vec<T> = Vec::new();
    for e in find_extrema(profile) {
        if pv_integral(&d1, e.v)? > T::zero() {
            centers.push(e.v);
        }
    }
    let mut found: Vec<DispersionRoot<T>> = Vec::new();
    for &v in &centers {
        for h in [0.2, 0.05, 0.01, 0.5, 1.0] {
            let root = match newton(&d1, &d2, k, Complex::new(v, lit(h))) {
                Ok(r) => r,
                Err(Error::NoConvergence { .. }) | Err(Error::RootCollapsedToRealAxis { .. }) => continue,
                Err(e) => return Err(e),
            };
            if root.neutral {
                continue;
            }
            if !found.iter().any(|r| (r.c - root.c).norm() < lit(1e-6)) {
                found.push(root);
            }
        }
    }
    Ok(found.into_iter().max_by(|a, b| a.growth_rate.partial_cmp(&b.growth_rate).unwrap()))
}

/// Growth rates (zero when stable) for many wave numbers, computed in parallel
/// and returned in input order.
pub fn growth_rates<T: Real>(profile: &VelocityProfile<T>, ks: &[T]) -> Result<Vec<T>> {
    ks.par_iter()
        .map(|&k| Ok(most_unstable_root(profile, k)?.map(|r| r.growth_rate).unwrap_or(T::zero())))
        .collect()
}
