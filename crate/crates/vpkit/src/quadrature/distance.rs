use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::sobolev::{gagliardo_seminorm_periodic, spectral_derivative_periodic, SobolevMethod, SobolevSpec};
use crate::error::Result;
use crate::field::PhaseSpaceField;
use crate::numerics::{fft_freqs, fft_in_place, trapezoid};
use crate::profiles::{Sampled, VelocityProfile};
use crate::quadrature::sobolev_norm;
use crate::scalar::{from_usize, lit, Real};

/// The three parts of the distance between a phase-space density and a homogeneous state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Distance<T> {
    /// `∫∫ |f - f0|`.
    pub l1: T,
    /// `∫∫ v^2 |f - f0|`.
    pub energy_l1: T,
    /// `||f - f0||_{W^{s,p}}` over one period in `x` and the velocity grid.
    pub wsp: T,
}

impl<T: Real> Distance<T> {
    pub fn total(&self) -> T {
        self.l1 + self.energy_l1 + self.wsp
    }
}

/// Distance of `f(x, v)` to the homogeneous `g(v)` over one period.
pub fn weighted_distance<T: Real>(f: &PhaseSpaceField<T>, g: &VelocityProfile<T>, spec: SobolevSpec) -> Result<Distance<T>> {
    spec.validate()?;
    f.vgrid.check_same(&g.grid)?;
    let nv = f.nv();
    let dv = f.vgrid.dv();
    let dx = f.dx();
    let u: Vec<T> = f.f.chunks(nv).flat_map(|row| row.iter().zip(&g.values).map(|(&a, &b)| a - b)).collect();

    let mut l1 = T::zero();
    let mut en = T::zero();
    for row in u.chunks(nv) {
        let a: Vec<T> = row.iter().map(|x| x.abs()).collect();
        let b: Vec<T> = a.iter().enumerate().map(|(i, &x)| f.vgrid.node(i).powi(2) * x).collect();
        l1 = l1 + trapezoid(&a, dv);
        en = en + trapezoid(&b, dv);
    }
    let wsp = match spec.method {
        SobolevMethod::SpectralP2 => spectral_2d(&u, f.nx, nv, f.period, dv, lit(spec.s)),
        SobolevMethod::Gagliardo => gagliardo_2d(&u, f, spec)?,
    };
    Ok(Distance { l1: l1 * dx, energy_l1: en * dx, wsp })
}

/// `(Σ (1 + k^2 + ξ^2)^s |û|^2 Δk Δξ / 4π^2)^{1/2}` on the periodic-in-x, truncated-in-v box.
pub fn spectral_2d<T: Real>(u: &[T], nx: usize, nv: usize, period: T, dv: T, s: T) -> T {
    let zero = Complex::new(T::zero(), T::zero());
    let mut data: Vec<Complex<T>> = u.iter().map(|&x| Complex::new(x, T::zero())).collect();
    for row in data.chunks_mut(nv) {
        fft_in_place(row, false);
    }
    let mut col = vec![zero; nx];
    let kx = fft_freqs::<T>(nx, period / from_usize::<T>(nx));
    let xi = fft_freqs::<T>(nv, dv);
    let mut sum = T::zero();
    for j in 0..nv {
        for i in 0..nx {
            col[i] = data[i * nv + j];
        }
        fft_in_place(&mut col, false);
        for i in 0..nx {
            let w = (T::one() + kx[i] * kx[i] + xi[j] * xi[j]).powf(s);
            sum = sum + w * col[i].norm_sqr();
        }
    }
    let dx = period / from_usize::<T>(nx);
    (sum * dx * dv / (from_usize::<T>(nx) * from_usize::<T>(nv))).sqrt()
}

fn gagliardo_2d<T: Real>(u: &[T], f: &PhaseSpaceField<T>, spec: SobolevSpec) -> Result<T> {
    let nv = f.nv();
    let (nx, dx) = (f.nx, f.dx());
    let p = lit::<T>(spec.p);
    let mut vpart = T::zero();
    for row in u.chunks(nv) {
        let s = Sampled::new(f.vgrid, row.to_vec())?;
        vpart = vpart + sobolev_norm(&s, spec)?.powf(p);
    }
    vpart = (vpart * dx).powf(p.recip());

    let m = spec.s.floor() as usize;
    let sigma = lit::<T>(spec.s - m as f64);
    let mut xpart = T::zero();
    let mut col = vec![T::zero(); nx];
    let mut acc = vec![T::zero(); nv];
    for j in 0..nv {
        for i in 0..nx {
            col[i] = u[i * nv + j];
        }
        let mut c = col.clone();
        let mut s = T::zero();
        for _ in 0..m {
            c = spectral_derivative_periodic(&c, f.period);
            s = s + lp_norm_periodic(&c, dx, p);
        }
        if sigma > lit(1e-12) {
            s = s + gagliardo_seminorm_periodic(&c, f.period, sigma, p);
        }
        acc[j] = s.powf(p);
    }
    xpart = xpart + trapezoid(&acc, f.vgrid.dv());
    Ok(vpart + xpart.powf(p.recip()))
}

fn lp_norm_periodic<T: Real>(u: &[T], dx: T, p: T) -> T {
    (u.iter().map(|x| x.abs().powf(p)).sum::<T>() * dx).powf(p.recip())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{NamedProfile, VelocityGrid};

    #[test]
    fn homogeneous_state_is_at_distance_zero() {
        let g = NamedProfile::Maxwellian.build(VelocityGrid::<f64>::symmetric(8.0, 256).unwrap()).unwrap();
        let f = PhaseSpaceField::homogeneous(&g, std::f64::consts::TAU, 16).unwrap();
        for spec in [SobolevSpec::h(1.2), SobolevSpec::gagliardo(0.5, 2.0)] {
            let d = weighted_distance(&f, &g, spec).unwrap();
            assert_eq!((d.l1, d.energy_l1, d.wsp), (0.0, 0.0, 0.0));
        }
    }

    #[test]
    fn separable_l1_and_energy() {
        let grid = VelocityGrid::<f64>::symmetric(8.0, 1025).unwrap();
        let g = NamedProfile::Maxwellian.build(grid).unwrap();
        let t = 4.0 * std::f64::consts::PI;
        let eps = 1e-3;
        // φ(x) = 1 + cos(kx) >= 0 and ψ(v) = bump supported in |v| < 1: |εφψ| = εφψ
        let psi = |v: f64| if v.abs() < 1.0 { (1.0 - v * v).powi(4) } else { 0.0 };
        let f = PhaseSpaceField::from_fn(t, 64, grid, |x, v| g.eval(v) + eps * (1.0 + (x / 2.0).cos()) * psi(v)).unwrap();
        let d = weighted_distance(&f, &g, SobolevSpec::h(0.5)).unwrap();
        let phi_l1 = t;
        let psi_l1 = 256.0 / 315.0;
        let want = eps * phi_l1 * psi_l1;
        assert!(((d.l1 - want) / want).abs() < 1e-6, "{} {want}", d.l1);
        assert!(d.energy_l1 <= d.l1);
    }
}
