use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{FieldTimeSeries, ModeInitialData};
use crate::error::{Error, Result};
use crate::numerics::{trapezoid, trapezoid_c};
use crate::profiles::VelocityProfile;
use crate::scalar::{from_usize, lit, to_f64, Real};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvolveOptions {
    /// With `false` the field is only measured, never fed back: pure phase mixing.
    pub coupled: bool,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions { coupled: true }
    }
}

/// Time-domain solution of `h_t + ikv h = E f0'`, `E = (i/k) ∫ h dv`.
///
/// Free streaming is integrated exactly by the factor `e^{-ikv dt}`; the source
/// is integrated by the trapezoidal rule along the characteristic, which makes
/// each step a scalar implicit equation for the new field, solved in closed
/// form. Returns `n_steps + 1` samples starting at `t = 0`.
pub fn linearized_evolve<T: Real>(
    profile: &VelocityProfile<T>,
    data: &ModeInitialData<T>,
    dt: T,
    n_steps: usize,
    opts: &EvolveOptions,
) -> Result<FieldTimeSeries<T>> {
    if data.k < T::zero() {
        let mut s = linearized_evolve(profile, &data.mirrored(), dt, n_steps, opts)?;
        s.k = data.k;
        s.e.iter_mut().for_each(|z| *z = z.conj());
        return Ok(s);
    }
    profile.grid.check_same(&data.grid)?;
    let grid = profile.grid;
    let k = data.k;
    let vmax = grid.v_min.abs().max(grid.v_max.abs());
    let cfl = dt * k * vmax;
    if !(dt > T::zero()) || cfl > lit(0.5) {
        return Err(Error::StepTooLarge(to_f64(cfl)));
    }
    let dv = grid.dv();
    let fp = profile.derivative().values;
    let phase: Vec<Complex<T>> = grid.nodes().iter().map(|&v| Complex::from_polar(T::one(), -k * v * dt)).collect();
    let ik = Complex::new(T::zero(), k.recip());
    let half = dt * lit(0.5);
    // (1 - (i/k)(dt/2) ∫ f0') E^{n+1} = (i/k) ∫ e^{-ikv dt} (h^n + dt/2 E^n f0')
    let solve = Complex::new(T::one(), T::zero()) - ik * (half * trapezoid(&fp, dv));

    let mut h = data.g.clone();
    let mut e = ik * trapezoid_c(&h, dv);
    let mut out_e = Vec::with_capacity(n_steps + 1);
    out_e.push(e);
    for _ in 0..n_steps {
        if opts.coupled {
            for ((hi, p), f) in h.iter_mut().zip(&phase).zip(&fp) {
                *hi = (*hi + e * (half * *f)) * *p;
            }
            let e_new = ik * trapezoid_c(&h, dv) / solve;
            for (hi, f) in h.iter_mut().zip(&fp) {
                *hi = *hi + e_new * (half * *f);
            }
            e = e_new;
        } else {
            for (hi, p) in h.iter_mut().zip(&phase) {
                *hi = *hi * *p;
            }
            e = ik * trapezoid_c(&h, dv);
        }
        out_e.push(e);
    }
    let t = (0..=n_steps).map(|i| from_usize::<T>(i) * dt).collect();
    Ok(FieldTimeSeries { k, t, e: out_e })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{NamedProfile, VelocityGrid};

    #[test]
    fn free_streaming_phase_mixing() {
        let p = NamedProfile::Maxwellian.build(VelocityGrid::<f64>::symmetric(8.0, 4096).unwrap()).unwrap();
        let k = 0.5;
        let d = ModeInitialData::from_real_fn(k, p.grid, |v| p.eval(v)).unwrap();
        let s = linearized_evolve(&p, &d, 0.05, 400, &EvolveOptions { coupled: false }).unwrap();
        for (t, e) in s.t.iter().zip(&s.e) {
            // |∫h| = k |E|
            assert!((e.norm() * k - (-k * k * t * t / 2.0).exp()).abs() < 1e-8);
        }
    }

    #[test]
    fn step_too_large() {
        let p = NamedProfile::Maxwellian.build(VelocityGrid::<f64>::symmetric(8.0, 256).unwrap()).unwrap();
        let d = ModeInitialData::zero(1.0, p.grid).unwrap();
        assert!(matches!(linearized_evolve(&p, &d, 0.1, 1, &EvolveOptions::default()), Err(Error::StepTooLarge(_))));
        let s = linearized_evolve(&p, &d, 0.05, 10, &EvolveOptions::default()).unwrap();
        assert!(s.e.iter().all(|z| z.norm() == 0.0));
    }
}
