use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{fd_first, fft_freqs, fft_in_place, trapezoid};
use crate::profiles::Sampled;
use crate::scalar::{from_usize, lit, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SobolevMethod {
    /// `(Σ (1+ξ^2)^s |ĝ(ξ)|^2 Δξ/2π)^{1/2}`; `p = 2` only.
    SpectralP2,
    /// `Σ_{j<=m} ||g^(j)||_p + [g^(m)]_{σ,p}` with `s = m + σ`.
    Gagliardo,
}

/// Smoothness `s`, integrability `p` and evaluation method of a `W^{s,p}` norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SobolevSpec {
    pub s: f64,
    pub p: f64,
    pub method: SobolevMethod,
}

impl SobolevSpec {
    pub fn h(s: f64) -> Self {
        SobolevSpec { s, p: 2.0, method: SobolevMethod::SpectralP2 }
    }

    pub fn gagliardo(s: f64, p: f64) -> Self {
        SobolevSpec { s, p, method: SobolevMethod::Gagliardo }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.s >= 0.0) || !self.s.is_finite() {
            return Err(Error::InvalidSpec(format!("smoothness {} must be finite and >= 0", self.s)));
        }
        if !(self.p > 1.0) || !self.p.is_finite() {
            return Err(Error::InvalidSpec(format!("integrability {} must exceed 1", self.p)));
        }
        if self.method == SobolevMethod::SpectralP2 && self.p != 2.0 {
            return Err(Error::InvalidSpec(format!("spectral method needs p = 2, got {}", self.p)));
        }
        Ok(())
    }
}

/// `W^{s,p}` norm of samples that decay at the grid ends.
pub fn sobolev_norm<T: Real>(g: &Sampled<T>, spec: SobolevSpec) -> Result<T> {
    spec.validate()?;
    g.check_finite()?;
    Ok(match spec.method {
        SobolevMethod::SpectralP2 => spectral_weighted(g, 1, |xi| (T::one() + xi * xi).powf(lit(spec.s))).sqrt(),
        SobolevMethod::Gagliardo => gagliardo_norm(&g.values, g.grid.dv(), lit(spec.s), lit(spec.p)),
    })
}

/// Homogeneous spectral seminorm `(Σ |ξ|^{2s} |ĝ|^2 Δξ/2π)^{1/2}`. The weight
/// is not smooth at `ξ = 0`, so the spectrum is refined by eightfold zero padding.
pub fn homogeneous_seminorm_p2<T: Real>(g: &Sampled<T>, s: T) -> T {
    let two = lit::<T>(2.0);
    spectral_weighted(g, 8, |xi| if s == T::zero() { T::one() } else { xi.abs().powf(two * s) }).sqrt()
}

/// Plain `L^p` norm by the trapezoid rule.
pub fn lp_norm<T: Real>(values: &[T], dv: T, p: T) -> T {
    let pw: Vec<T> = values.iter().map(|x| x.abs().powf(p)).collect();
    trapezoid(&pw, dv).powf(p.recip())
}

/// Constant `C(σ)` in `[u]_{σ,2}^2 = C(σ) ∫ |ξ|^{2σ} |û|^2 dξ/2π` for `0 < σ < 1`.
pub fn gagliardo_constant(sigma: f64) -> f64 {
    if (sigma - 0.5).abs() < 1e-12 {
        return 2.0 * std::f64::consts::PI;
    }
    -4.0 * statrs::function::gamma::gamma(-2.0 * sigma) * (std::f64::consts::PI * sigma).cos()
}

fn spectral_weighted<T: Real, W: Fn(T) -> T>(g: &Sampled<T>, pad: usize, weight: W) -> T {
    let n = g.grid.n * pad;
    let mut data: Vec<Complex<T>> = g.values.iter().map(|&x| Complex::new(x, T::zero())).collect();
    data.resize(n, Complex::new(T::zero(), T::zero()));
    fft_in_place(&mut data, false);
    let xi = fft_freqs::<T>(n, g.grid.dv());
    let sum: T = data.iter().zip(&xi).map(|(z, &k)| weight(k) * z.norm_sqr()).sum();
    sum * g.grid.dv() / from_usize::<T>(n)
}

fn gagliardo_norm<T: Real>(values: &[T], dv: T, s: T, p: T) -> T {
    let m = s.floor().to_usize().unwrap_or(0);
    let sigma = s - from_usize::<T>(m);
    let mut u = values.to_vec();
    let mut total = lp_norm(&u, dv, p);
    for _ in 0..m {
        u = fd_first(&u, dv);
        total = total + lp_norm(&u, dv, p);
    }
    if sigma > lit(1e-12) {
        total = total + gagliardo_seminorm_line(&u, dv, sigma, p);
    }
    total
}

/// `[u]_{σ,p} = (∫∫ |u(x)-u(y)|^p / |x-y|^{1+σp})^{1/p}` on the line, `u` extended by zero.
///
/// Off-diagonal node cells are summed directly; the diagonal cells use the
/// local linear model `|u(x)-u(y)| ≈ |u'||x-y|`, integrated exactly over the
/// square cell; the part with one point outside the grid is integrated
/// analytically in the outer variable.
pub fn gagliardo_seminorm_line<T: Real>(u: &[T], dv: T, sigma: T, p: T) -> T {
    let n = u.len();
    let expo = T::one() + sigma * p;
    let kern: Vec<T> = (0..n).map(|m| if m == 0 { T::zero() } else { (from_usize::<T>(m) * dv).powf(-expo) }).collect();
    let off: T = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = T::zero();
            for j in i + 1..n {
                acc = acc + (u[i] - u[j]).abs().powf(p) * kern[j - i];
            }
            acc
        })
        .collect::<Vec<T>>()
        .into_iter()
        .sum();
    let two = lit::<T>(2.0);
    let mut total = two * off * dv * dv;

    let du = fd_first(u, dv);
    let q = p - T::one() - sigma * p;
    let cell = two * dv.powf(q + two) / ((q + T::one()) * (q + two));
    total = total + du.iter().map(|d| d.abs().powf(p)).sum::<T>() * cell;

    let a = -dv / two;
    let b = from_usize::<T>(n - 1) * dv + dv / two;
    let sp = sigma * p;
    let outside: T = u
        .iter()
        .enumerate()
        .map(|(i, &ui)| {
            let x = from_usize::<T>(i) * dv;
            ui.abs().powf(p) * ((x - a).powf(-sp) + (b - x).powf(-sp)) / sp
        })
        .sum();
    total = total + two * outside * dv;
    total.powf(p.recip())
}

/// Periodic version of [`gagliardo_seminorm_line`] on a period `period` sampled at `u.len()` nodes.
pub fn gagliardo_seminorm_periodic<T: Real>(u: &[T], period: T, sigma: T, p: T) -> T {
    let n = u.len();
    let dx = period / from_usize::<T>(n);
    let expo = T::one() + sigma * p;
    let images = 64usize;
    let kern: Vec<T> = (0..n)
        .map(|m| {
            let d = from_usize::<T>(m) * dx;
            let mut k = T::zero();
            for r in 0..=images {
                let shift = from_usize::<T>(r) * period;
                if !(r == 0 && m == 0) {
                    k = k + (d + shift).powf(-expo);
                }
                if r > 0 {
                    k = k + (shift - d).powf(-expo);
                }
            }
            // remaining images as an integral
            let far = from_usize::<T>(images) * period + period / lit(2.0);
            k + lit::<T>(2.0) * far.powf(-sigma * p) / (sigma * p * period)
        })
        .collect();
    let mut off = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let m = if j > i { j - i } else { n + j - i };
                off = off + (u[i] - u[j]).abs().powf(p) * kern[m];
            }
        }
    }
    let mut total = off * dx * dx;
    // self-images of the diagonal cell (m = 0, r ≠ 0) vanish since u is periodic
    let du = spectral_derivative_periodic(u, period);
    let two = lit::<T>(2.0);
    let q = p - T::one() - sigma * p;
    let cell = two * dx.powf(q + two) / ((q + T::one()) * (q + two));
    total = total + du.iter().map(|d| d.abs().powf(p)).sum::<T>() * cell;
    total.powf(p.recip())
}

/// Spectral derivative of periodic samples.
pub fn spectral_derivative_periodic<T: Real>(u: &[T], period: T) -> Vec<T> {
    let n = u.len();
    let mut data: Vec<Complex<T>> = u.iter().map(|&x| Complex::new(x, T::zero())).collect();
    fft_in_place(&mut data, false);
    let k = fft_freqs::<T>(n, period / from_usize::<T>(n));
    for (j, d) in data.iter_mut().enumerate() {
        *d = if n.is_multiple_of(2) && j == n / 2 { Complex::new(T::zero(), T::zero()) } else { *d * Complex::new(T::zero(), k[j]) };
    }
    fft_in_place(&mut data, true);
    let scale = from_usize::<T>(n).recip();
    data.iter().map(|z| z.re * scale).collect()
}
