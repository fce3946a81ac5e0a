use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::trapezoid;
use crate::profiles::{VelocityGrid, VelocityProfile};
use crate::scalar::{from_usize, Real};

/// `f(x, v)` on a periodic `x` grid of `nx` nodes over `[0, period)` times a
/// truncated velocity grid. Row-major: `f[ix * nv + iv]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpaceField<T> {
    pub period: T,
    pub nx: usize,
    pub vgrid: VelocityGrid<T>,
    pub f: Vec<T>,
}

impl<T: Real> PhaseSpaceField<T> {
    pub fn new(period: T, nx: usize, vgrid: VelocityGrid<T>, f: Vec<T>) -> Result<Self> {
        if nx < 2 || !(period > T::zero()) {
            return Err(Error::InvalidGrid(format!("need nx >= 2 and a positive period, got {nx}, {period}")));
        }
        if f.len() != nx * vgrid.n {
            return Err(Error::GridMismatch(format!("{} values for {}x{} grid", f.len(), nx, vgrid.n)));
        }
        Ok(PhaseSpaceField { period, nx, vgrid, f })
    }

    pub fn from_fn<F: Fn(T, T) -> T>(period: T, nx: usize, vgrid: VelocityGrid<T>, f: F) -> Result<Self> {
        let dx = period / from_usize::<T>(nx);
        let mut data = Vec::with_capacity(nx * vgrid.n);
        for ix in 0..nx {
            let x = from_usize::<T>(ix) * dx;
            for iv in 0..vgrid.n {
                data.push(f(x, vgrid.node(iv)));
            }
        }
        Self::new(period, nx, vgrid, data)
    }

    pub fn homogeneous(profile: &VelocityProfile<T>, period: T, nx: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(nx * profile.grid.n);
        for _ in 0..nx {
            data.extend_from_slice(&profile.values);
        }
        Self::new(period, nx, profile.grid, data)
    }

    pub fn nv(&self) -> usize {
        self.vgrid.n
    }

    pub fn dx(&self) -> T {
        self.period / from_usize::<T>(self.nx)
    }

    pub fn x(&self, ix: usize) -> T {
        from_usize::<T>(ix) * self.dx()
    }

    pub fn row(&self, ix: usize) -> &[T] {
        let nv = self.nv();
        &self.f[ix * nv..(ix + 1) * nv]
    }

    pub fn row_mut(&mut self, ix: usize) -> &mut [T] {
        let nv = self.nv();
        &mut self.f[ix * nv..(ix + 1) * nv]
    }

    pub fn at(&self, ix: usize, iv: usize) -> T {
        self.f[ix * self.nv() + iv]
    }

    /// `ρ(x) = ∫ f dv` at every x node.
    pub fn density(&self) -> Vec<T> {
        let dv = self.vgrid.dv();
        (0..self.nx).map(|ix| trapezoid(self.row(ix), dv)).collect()
    }

    /// `∫∫ f dx dv`.
    pub fn mass(&self) -> T {
        self.density().into_iter().sum::<T>() * self.dx()
    }

    /// `m` periodic copies side by side.
    pub fn tiled(&self, m: usize) -> Self {
        let mut f = Vec::with_capacity(self.f.len() * m);
        for _ in 0..m {
            f.extend_from_slice(&self.f);
        }
        PhaseSpaceField { period: self.period * from_usize::<T>(m), nx: self.nx * m, vgrid: self.vgrid, f }
    }
}
