//! Linear Landau damping of a single Fourier mode: the contour formula for
//! `E_k(t)`, a time-domain solver of the linearized equation used as its
//! oracle, algebraic decay fits and weighted integral decay norms.

mod contour;
mod evolve;
mod fit;

pub use contour::{landau_field, LandauOptions};
pub use evolve::{linearized_evolve, EvolveOptions};
pub use fit::{fit_decay, integral_decay_norm, DecayFit, IntegralNorm};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profiles::VelocityGrid;
use crate::scalar::{lit, Real};

/// Velocity profile of the `k`-th Fourier coefficient of an initial perturbation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeInitialData<T> {
    pub k: T,
    pub grid: VelocityGrid<T>,
    pub g: Vec<Complex<T>>,
}

impl<T: Real> ModeInitialData<T> {
    pub fn new(k: T, grid: VelocityGrid<T>, g: Vec<Complex<T>>) -> Result<Self> {
        if k == T::zero() {
            return Err(Error::InvalidSpec("the homogeneous mode k = 0 is not a perturbation".into()));
        }
        if g.len() != grid.n {
            return Err(Error::GridMismatch(format!("{} samples for {} nodes", g.len(), grid.n)));
        }
        Ok(ModeInitialData { k, grid, g })
    }

    pub fn from_real_fn<F: Fn(T) -> T>(k: T, grid: VelocityGrid<T>, f: F) -> Result<Self> {
        let g = (0..grid.n).map(|i| Complex::new(f(grid.node(i)), T::zero())).collect();
        Self::new(k, grid, g)
    }

    pub fn zero(k: T, grid: VelocityGrid<T>) -> Result<Self> {
        Self::from_real_fn(k, grid, |_| T::zero())
    }

    /// `amp exp(-(v - center)^2 / (2 width^2))`.
    pub fn gaussian(k: T, grid: VelocityGrid<T>, amp: T, center: T, width: T) -> Result<Self> {
        Self::from_real_fn(k, grid, |v| amp * (-(v - center) * (v - center) / (lit::<T>(2.0) * width * width)).exp())
    }

    /// `(v - α)^2 exp(-(v - α)^2)` for `v >= α`, zero below: `C^1` with a jump in
    /// the second derivative at `α`.
    pub fn weizner(k: T, grid: VelocityGrid<T>, alpha: T) -> Result<Self> {
        Self::from_real_fn(k, grid, |v| {
            let u = v - alpha;
            if u >= T::zero() {
                u * u * (-u * u).exp()
            } else {
                T::zero()
            }
        })
    }

    /// Piecewise-linear hat of half-width `width` centred at `center`: continuous
    /// with jumps in the first derivative.
    pub fn hat(k: T, grid: VelocityGrid<T>, center: T, width: T) -> Result<Self> {
        Self::from_real_fn(k, grid, |v| (T::one() - (v - center).abs() / width).max(T::zero()))
    }

    /// `∫ g dv`.
    pub fn integral(&self) -> Complex<T> {
        crate::numerics::trapezoid_c(&self.g, self.grid.dv())
    }

    /// Data of the mode `-k` for a real perturbation: `conj(g)`.
    pub fn mirrored(&self) -> Self {
        ModeInitialData { k: -self.k, grid: self.grid, g: self.g.iter().map(|z| z.conj()).collect() }
    }

    pub fn scaled_add(&self, a: T, other: &Self, b: T) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        Self::new(self.k, self.grid, self.g.iter().zip(&other.g).map(|(x, y)| *x * a + *y * b).collect())
    }
}

/// `E_k(t)` on a uniform time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldTimeSeries<T> {
    pub k: T,
    pub t: Vec<T>,
    pub e: Vec<Complex<T>>,
}

impl<T: Real> FieldTimeSeries<T> {
    pub fn abs(&self) -> Vec<T> {
        self.e.iter().map(|z| z.norm()).collect()
    }

    pub fn dt(&self) -> T {
        if self.t.len() < 2 {
            T::zero()
        } else {
            self.t[1] - self.t[0]
        }
    }
}

/// `n` uniform times `0, dt, ..., (n-1) dt`.
pub fn uniform_times<T: Real>(dt: T, n: usize) -> Vec<T> {
    (0..n).map(|i| crate::scalar::from_usize::<T>(i) * dt).collect()
}
