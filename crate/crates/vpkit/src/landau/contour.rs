use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{FieldTimeSeries, ModeInitialData};
use crate::error::{Error, Result};
use crate::numerics::trapezoid_c;
use crate::penrose::critical_period;
use crate::profiles::{Cutoff, VelocityProfile};
use crate::quadrature::{hilbert_boundary, hilbert_boundary_complex};
use crate::scalar::{from_usize, lit, to_f64, Real};

/// Knobs of the contour evaluation.
///
/// `H = G/(k^2 - F)` decays only like `1/x`, so its large-`x` expansion is
/// subtracted as `Σ_j β_j (u + i a)^{-j}` (analytic in the upper half plane,
/// Fourier transform known in closed form). The remainder decays like
/// `x^{-tail_terms-1}`; it is sampled on the velocity grid extended to
/// `extension` times its half width, smoothly tapered from `taper_start` of
/// that width, and transformed by a direct sum at each requested time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LandauOptions {
    pub extension: f64,
    pub tail_terms: usize,
    pub tail_scale: f64,
    pub taper_start: f64,
    pub check_stability: bool,
}

impl Default for LandauOptions {
    fn default() -> Self {
        LandauOptions { extension: 4.0, tail_terms: 6, tail_scale: 1.0, taper_start: 0.75, check_stability: true }
    }
}

/// `E_k(t) = (k/2π) ∫ G(x+i0)/(k^2 - F(x+i0)) e^{-ikxt} dx` with
/// `G = ∫ g/(v - z)`, `F = ∫ f0'/(v - z)`. Times are `t >= 0`; `t = 0` is
/// understood as the limit from above. Negative `k` is handled by conjugation.
pub fn landau_field<T: Real>(
    profile: &VelocityProfile<T>,
    data: &ModeInitialData<T>,
    t_grid: &[T],
    opts: &LandauOptions,
) -> Result<FieldTimeSeries<T>> {
    if data.k < T::zero() {
        let mut s = landau_field(profile, &data.mirrored(), t_grid, opts)?;
        s.k = data.k;
        s.e.iter_mut().for_each(|z| *z = z.conj());
        return Ok(s);
    }
    profile.grid.check_same(&data.grid)?;
    if t_grid.iter().any(|&t| !(t >= T::zero()) || !t.is_finite()) {
        return Err(Error::InvalidSpec("times must be finite and nonnegative".into()));
    }
    if !(opts.extension >= 1.0) || !(opts.taper_start > 0.0 && opts.taper_start < 1.0) || opts.tail_terms == 0 {
        return Err(Error::InvalidSpec(format!("bad contour options {opts:?}")));
    }
    let k = data.k;
    if opts.check_stability && critical_period(profile)?.is_unstable_at(k) {
        return Err(Error::UnstableMode { k: to_f64(k) });
    }
    let grid = profile.grid;
    let n = grid.n;
    let dv = grid.dv();
    let d = profile.derivative();
    let fin = hilbert_boundary(&d)?;
    let gin = hilbert_boundary_complex(grid, &data.g)?;

    // extended node set x_j = v_min + j dv, j in [-m, n - 1 + m]
    let xc = (grid.v_min + grid.v_max) * lit(0.5);
    let half = (grid.v_max - grid.v_min) * lit(0.5);
    let big_x = half * lit(opts.extension);
    let m = ((big_x - half) / dv).floor().to_usize().unwrap_or(0);
    let total = n + 2 * m;
    let x_of = |j: usize| grid.v_min + (from_usize::<T>(j) - from_usize::<T>(m)) * dv;

    let trap_w = |i: usize| if i == 0 || i == n - 1 { lit::<T>(0.5) } else { T::one() };
    let vs = grid.nodes();
    let outside = |x: T| -> (Complex<T>, Complex<T>) {
        let mut gs = Complex::new(T::zero(), T::zero());
        let mut fs = T::zero();
        for (i, &v) in vs.iter().enumerate() {
            let r = trap_w(i) / (v - x);
            gs = gs + data.g[i] * r;
            fs = fs + d.values[i] * r;
        }
        (gs * dv, Complex::new(fs * dv, T::zero()))
    };
    let gf: Vec<(Complex<T>, Complex<T>)> = (0..total)
        .into_par_iter()
        .map(|j| if j >= m && j < m + n { (gin[j - m], fin[j - m]) } else { outside(x_of(j)) })
        .collect();

    let k2 = Complex::new(k * k, T::zero());
    let mut min_den = T::infinity();
    let h: Vec<Complex<T>> = gf
        .iter()
        .map(|&(g, f)| {
            let den = k2 - f;
            min_den = min_den.min(den.norm());
            g / den
        })
        .collect();
    if min_den < lit::<T>(1e-3) * k * k {
        return Err(Error::DenominatorNearZero { min: to_f64(min_den) });
    }

    let a = lit::<T>(opts.tail_scale);
    let beta = tail_model(&data.g, &d.values, &vs, xc, dv, k, a, opts.tail_terms);
    let model = |u: T| -> Complex<T> {
        let w = Complex::new(u, a).inv();
        let mut p = w;
        let mut s = Complex::new(T::zero(), T::zero());
        for b in &beta {
            s = s + *b * p;
            p = p * w;
        }
        s
    };

    let taper_at = lit::<T>(opts.taper_start) * big_x;
    let u: Vec<T> = (0..total).map(|j| x_of(j) - xc).collect();
    let rem: Vec<Complex<T>> = (0..total)
        .map(|j| {
            let au = u[j].abs();
            let taper = if au <= taper_at {
                T::one()
            } else {
                Cutoff::Smooth.eval(T::one() + (au - taper_at) / (big_x - taper_at))
            };
            (h[j] - model(u[j])) * taper
        })
        .collect();

    let e: Vec<Complex<T>> = t_grid
        .par_iter()
        .map(|&t| {
            let tau = k * t;
            let direct = phase_sum(&rem, u[0], dv, tau);
            let mut analytic = Complex::new(T::zero(), T::zero());
            // ∫ (u + ia)^{-j} e^{-iτu} du = -2πi (-iτ)^{j-1} e^{-aτ} / (j-1)!
            let mut c = Complex::new(T::zero(), -T::TAU()) * (-a * tau).exp();
            for (j, b) in beta.iter().enumerate() {
                if j > 0 {
                    c = c * Complex::new(T::zero(), -tau) / from_usize::<T>(j);
                }
                analytic = analytic + *b * c;
            }
            let shift = Complex::from_polar(T::one(), -tau * xc);
            (direct + analytic) * shift * (k / T::TAU())
        })
        .collect();
    Ok(FieldTimeSeries { k, t: t_grid.to_vec(), e })
}

/// `Σ_j r_j e^{-iτ(u0 + j du)} du` by phase rotation, re-anchored periodically.
fn phase_sum<T: Real>(r: &[Complex<T>], u0: T, du: T, tau: T) -> Complex<T> {
    let rot = Complex::from_polar(T::one(), -tau * du);
    let mut acc = Complex::new(T::zero(), T::zero());
    let mut z = Complex::new(T::one(), T::zero());
    for (j, &rj) in r.iter().enumerate() {
        if j % 256 == 0 {
            z = Complex::from_polar(T::one(), -tau * (u0 + from_usize::<T>(j) * du));
        }
        acc = acc + rj * z;
        z = z * rot;
    }
    acc * du
}

/// Coefficients `β_1..β_J` such that `Σ β_j (u + ia)^{-j}` matches the large-`u`
/// expansion of `G/(k^2 - F)` through `u^{-J}`, all moments taken about `xc`.
#[allow(clippy::too_many_arguments)]
fn tail_model<T: Real>(
    g: &[Complex<T>],
    fp: &[T],
    v: &[T],
    xc: T,
    dv: T,
    k: T,
    a: T,
    terms: usize,
) -> Vec<Complex<T>> {
    let zero = Complex::new(T::zero(), T::zero());
    // G = -Σ_{n>=0} mg_n u^{-n-1},  F = -Σ mf_n u^{-n-1}
    let mut mg = Vec::with_capacity(terms);
    let mut mf = Vec::with_capacity(terms);
    let mut pw: Vec<T> = vec![T::one(); v.len()];
    for _ in 0..terms {
        let wg: Vec<Complex<T>> = g.iter().zip(&pw).map(|(z, p)| *z * *p).collect();
        let wf: Vec<Complex<T>> = fp.iter().zip(&pw).map(|(f, p)| Complex::new(*f * *p, T::zero())).collect();
        mg.push(trapezoid_c(&wg, dv));
        mf.push(trapezoid_c(&wf, dv));
        for (p, vi) in pw.iter_mut().zip(v) {
            *p = *p * (*vi - xc);
        }
    }
    // series in w = 1/u, index = power of w
    let mut den = vec![zero; terms + 1];
    den[0] = Complex::new(k * k, T::zero());
    den[1..=terms].copy_from_slice(&mf[..terms]);
    let mut inv = vec![zero; terms + 1];
    inv[0] = den[0].inv();
    for i in 1..=terms {
        let mut s = zero;
        for l in 1..=i {
            s = s + den[l] * inv[i - l];
        }
        inv[i] = -s * inv[0];
    }
    let mut num = vec![zero; terms + 1];
    for i in 1..=terms {
        num[i] = -mg[i - 1];
    }
    let mut hs = vec![zero; terms + 1];
    for i in 1..=terms {
        for l in 1..=i {
            hs[i] = hs[i] + num[l] * inv[i - l];
        }
    }
    // (u + ia)^{-j} = Σ_{p>=0} C(j+p-1, p) (-ia)^p u^{-j-p}
    let mia = Complex::new(T::zero(), -a);
    let mut beta = vec![zero; terms];
    for i in 1..=terms {
        let mut s = hs[i];
        for j in 1..i {
            let p = i - j;
            s = s - beta[j - 1] * mia.powu(p as u32) * binom::<T>(i - 1, p);
        }
        beta[i - 1] = s;
    }
    beta
}

fn binom<T: Real>(n: usize, r: usize) -> T {
    let mut c = 1.0f64;
    for i in 0..r {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    lit(c)
}
