//! Homogeneous velocity profiles `f0(v)` and the transformations applied to
//! them before stability analysis or wave construction.

mod bump;
mod cutoff;
mod extrema;
mod grid;
mod named;

pub use bump::BumpFamily;
pub use cutoff::Cutoff;
pub use extrema::{find_extrema, find_extrema_with, Extremum, ExtremaOptions, ExtremumKind};
pub use grid::{Sampled, VelocityGrid};
pub use named::NamedProfile;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::trapezoid;
use crate::scalar::{lit, to_f64, Real};

pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// Nonnegative homogeneous distribution sampled on a velocity grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VelocityProfile<T> {
    pub grid: VelocityGrid<T>,
    pub values: Vec<T>,
    pub mass: T,
    pub second_moment: T,
    pub tail_tol: T,
}

impl<T: Real> VelocityProfile<T> {
    pub fn new(grid: VelocityGrid<T>, values: Vec<T>) -> Result<Self> {
        Self::with_tail_tol(grid, values, lit(DEFAULT_TAIL_TOL))
    }

    pub fn with_tail_tol(grid: VelocityGrid<T>, values: Vec<T>, tail_tol: T) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::GridMismatch(format!("{} values for {} nodes", values.len(), grid.n)));
        }
        if let Some(i) = values.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFiniteSample(i));
        }
        if let Some(i) = values.iter().position(|&x| x < T::zero()) {
            return Err(Error::InvalidProfile(format!("negative value {} at v = {}", values[i], grid.node(i))));
        }
        let (a, b) = (values[0], values[grid.n - 1]);
        if a > tail_tol || b > tail_tol {
            return Err(Error::InvalidProfile(format!(
                "endpoint values {a:e}, {b:e} exceed the tail tolerance {tail_tol:e}"
            )));
        }
        let dv = grid.dv();
        let mass = trapezoid(&values, dv);
        let v2: Vec<T> = values.iter().enumerate().map(|(i, &f)| grid.node(i).powi(2) * f).collect();
        let second_moment = trapezoid(&v2, dv);
        Ok(VelocityProfile { grid, values, mass, second_moment, tail_tol })
    }

    pub fn from_fn<F: Fn(T) -> T>(grid: VelocityGrid<T>, f: F) -> Result<Self> {
        Self::new(grid, (0..grid.n).map(|i| f(grid.node(i))).collect())
    }

    /// Same profile with new values; keeps the grid and tail tolerance.
    pub fn replace_values(&self, values: Vec<T>) -> Result<Self> {
        Self::with_tail_tol(self.grid, values, self.tail_tol)
    }

    pub fn as_sampled(&self) -> Sampled<T> {
        Sampled { grid: self.grid, values: self.values.clone() }
    }

    /// `f0'` by sixth-order central differences.
    pub fn derivative(&self) -> Sampled<T> {
        self.as_sampled().derivative()
    }

    pub fn eval(&self, v: T) -> T {
        self.as_sampled().eval(v)
    }

    pub fn max_value(&self) -> T {
        self.values.iter().fold(T::zero(), |a, &x| a.max(x))
    }

    /// The same values, read on a grid whose origin is moved by `offset`.
    /// Used to pass to a frame moving with speed `-offset`.
    pub fn shifted_grid(&self, offset: T) -> Self {
        let mut p = self.clone();
        p.grid = self.grid.shifted(offset);
        let v2: Vec<T> = p.values.iter().enumerate().map(|(i, &f)| p.grid.node(i).powi(2) * f).collect();
        p.second_moment = trapezoid(&v2, p.grid.dv());
        p
    }
}

/// Scale to unit mass.
pub fn normalize<T: Real>(profile: &VelocityProfile<T>) -> Result<VelocityProfile<T>> {
    if !(profile.mass > profile.tail_tol) {
        return Err(Error::ZeroMass(to_f64(profile.mass)));
    }
    let s = profile.mass.recip();
    let mut out = profile.replace_values(profile.values.iter().map(|&x| x * s).collect())?;
    // one more correction pass absorbs the rounding of the reciprocal
    let s2 = out.mass.recip();
    if s2 != T::one() {
        out = out.replace_values(out.values.iter().map(|&x| x * s2).collect())?;
    }
    Ok(out)
}

/// Convolution with the standard mollifier `C exp(1/(x^2-1))` of half-width `delta1`.
pub fn mollify<T: Real>(profile: &VelocityProfile<T>, delta1: T) -> Result<VelocityProfile<T>> {
    let dv = profile.grid.dv();
    if !(delta1 >= lit::<T>(2.0) * dv) {
        return Err(Error::UnresolvableKernel { delta: to_f64(delta1), dv: to_f64(dv) });
    }
    let half = (delta1 / dv).floor().to_usize().unwrap();
    let raw: Vec<T> = (0..=half)
        .map(|j| {
            let x = crate::scalar::from_usize::<T>(j) * dv / delta1;
            if x < T::one() {
                (T::one() / (x * x - T::one())).exp()
            } else {
                T::zero()
            }
        })
        .collect();
    let total = raw[0] + lit::<T>(2.0) * raw[1..].iter().copied().sum::<T>();
    let w: Vec<T> = raw.iter().map(|&x| x / total).collect();
    let f = &profile.values;
    let n = f.len();
    let out: Vec<T> = (0..n)
        .map(|i| {
            let mut acc = w[0] * f[i];
            for (j, &wj) in w.iter().enumerate().skip(1) {
                if i >= j {
                    acc = acc + wj * f[i - j];
                }
                if i + j < n {
                    acc = acc + wj * f[i + j];
                }
            }
            acc
        })
        .collect();
    check_positive(&out)?;
    profile.replace_values(out)
}

/// `f(v) - ((f(v) - f(2c - v))/2) σ((v - c)/delta2)`: even about `c` on
/// `[c - delta2, c + delta2]`, untouched outside `[c - 2 delta2, c + 2 delta2]`.
pub fn symmetrize_near<T: Real>(profile: &VelocityProfile<T>, c: T, delta2: T) -> Result<VelocityProfile<T>> {
    symmetrize_with(profile, c, delta2, Cutoff::Smooth)
}

pub fn symmetrize_with<T: Real>(
    profile: &VelocityProfile<T>,
    c: T,
    delta2: T,
    cutoff: Cutoff,
) -> Result<VelocityProfile<T>> {
    let g = profile.grid;
    let two = lit::<T>(2.0);
    if !(delta2 > T::zero()) || c - two * delta2 < g.v_min || c + two * delta2 > g.v_max {
        return Err(Error::OutOfDomain(format!("window {c} ± 2·{delta2} leaves [{}, {}]", g.v_min, g.v_max)));
    }
    let s = profile.as_sampled();
    let aligned = g.node_index(c).is_some() || g.node_index(c + g.dv() / two).is_some();
    let mut out = profile.values.clone();
    for (i, o) in out.iter_mut().enumerate() {
        let v = g.node(i);
        let sig = cutoff.eval((v - c) / delta2);
        if sig == T::zero() {
            continue;
        }
        let mirror = two * c - v;
        let fm = if aligned {
            // reflection maps nodes onto nodes
            let j = g.position(mirror).round().to_usize().unwrap();
            profile.values[j]
        } else {
            s.eval(mirror)
        };
        *o = profile.values[i] - (profile.values[i] - fm) / two * sig;
    }
    check_positive(&out)?;
    profile.replace_values(out)
}

/// `[f0 + (γ/δ) F(v/(γδ))] / (1 + C0 γ^2)`.
pub fn modified_family<T: Real>(
    profile: &VelocityProfile<T>,
    bump: &BumpFamily,
    gamma: T,
    delta: T,
) -> Result<VelocityProfile<T>> {
    modified_family_at(profile, bump, gamma, delta, T::zero())
}

/// [`modified_family`] with the bump centred at `center` instead of 0.
pub fn modified_family_at<T: Real>(
    profile: &VelocityProfile<T>,
    bump: &BumpFamily,
    gamma: T,
    delta: T,
    center: T,
) -> Result<VelocityProfile<T>> {
    if gamma == T::zero() {
        return Ok(profile.clone());
    }
    let dv = profile.grid.dv();
    let w = gamma * delta;
    if !(gamma > T::zero() && delta > T::zero()) || w < lit::<T>(2.0) * dv {
        return Err(Error::UnresolvedBump { width: to_f64(w), dv: to_f64(dv) });
    }
    let amp = gamma / delta;
    let norm = T::one() + lit::<T>(bump.mass()) * gamma * gamma;
    let values = profile
        .values
        .iter()
        .enumerate()
        .map(|(i, &f)| (f + amp * bump.eval((profile.grid.node(i) - center) / w)) / norm)
        .collect();
    profile.replace_values(values)
}

/// `(1/δ) f(center + (v - center)/δ)`.
pub fn rescale_profile<T: Real>(profile: &VelocityProfile<T>, center: T, delta: T) -> Result<VelocityProfile<T>> {
    if !(delta > T::zero()) {
        return Err(Error::OutOfDomain(format!("rescale factor {delta} must be positive")));
    }
    if delta == T::one() {
        return Ok(profile.clone());
    }
    let g = profile.grid;
    let s = profile.as_sampled();
    let values: Vec<T> = (0..g.n)
        .map(|i| s.eval(center + (g.node(i) - center) / delta) / delta)
        .collect();
    let (a, b) = (values[0], values[g.n - 1]);
    if a > profile.tail_tol || b > profile.tail_tol {
        return Err(Error::OutOfDomain(format!(
            "rescaled support reaches the grid ends (endpoint values {a:e}, {b:e})"
        )));
    }
    profile.replace_values(values)
}

fn check_positive<T: Real>(values: &[T]) -> Result<()> {
    let min = values.iter().fold(T::infinity(), |a, &x| a.min(x));
    if min < T::zero() {
        return Err(Error::PositivityViolated(to_f64(min)));
    }
    Ok(())
}
