use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{fd_first, fd_second, interp6, interp6_deriv, trapezoid};
use crate::scalar::{from_usize, to_f64, Real};

/// Uniform truncated velocity grid with `n` nodes on `[v_min, v_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VelocityGrid<T> {
    pub v_min: T,
    pub v_max: T,
    pub n: usize,
}

impl<T: Real> VelocityGrid<T> {
    pub fn new(v_min: T, v_max: T, n: usize) -> Result<Self> {
        if !(v_min < v_max) || !v_min.is_finite() || !v_max.is_finite() {
            return Err(Error::InvalidGrid(format!("need v_min < v_max, got [{v_min}, {v_max}]")));
        }
        if n < 16 {
            return Err(Error::InvalidGrid(format!("need at least 16 nodes, got {n}")));
        }
        Ok(VelocityGrid { v_min, v_max, n })
    }

    /// Symmetric grid `[-v_max, v_max]`.
    pub fn symmetric(v_max: T, n: usize) -> Result<Self> {
        Self::new(-v_max, v_max, n)
    }

    pub fn dv(&self) -> T {
        (self.v_max - self.v_min) / from_usize::<T>(self.n - 1)
    }

    pub fn node(&self, i: usize) -> T {
        self.v_min + from_usize::<T>(i) * self.dv()
    }

    pub fn nodes(&self) -> Vec<T> {
        (0..self.n).map(|i| self.node(i)).collect()
    }

    /// Fractional node coordinate of `v`.
    pub fn position(&self, v: T) -> T {
        (v - self.v_min) / self.dv()
    }

    pub fn contains(&self, v: T) -> bool {
        v >= self.v_min && v <= self.v_max
    }

    /// Index of the node at `v`, if `v` lies on a node to rounding accuracy.
    pub fn node_index(&self, v: T) -> Option<usize> {
        let s = self.position(v);
        let r = s.round();
        if r < T::zero() || r > from_usize::<T>(self.n - 1) {
            return None;
        }
        let tol = T::from_f64(64.0 * T::EPS).unwrap() * (T::one() + s.abs());
        ((s - r).abs() <= tol).then(|| r.to_usize().unwrap())
    }

    /// Same node count and spacing, origin moved by `offset`.
    pub fn shifted(&self, offset: T) -> Self {
        VelocityGrid { v_min: self.v_min + offset, v_max: self.v_max + offset, n: self.n }
    }

    pub fn check_same(&self, other: &Self) -> Result<()> {
        let tol = T::from_f64(1e3 * T::EPS).unwrap() * (self.v_max - self.v_min);
        if self.n != other.n
            || (self.v_min - other.v_min).abs() > tol
            || (self.v_max - other.v_max).abs() > tol
        {
            return Err(Error::GridMismatch(format!(
                "[{}, {}; {}] vs [{}, {}; {}]",
                self.v_min, self.v_max, self.n, other.v_min, other.v_max, other.n
            )));
        }
        Ok(())
    }
}

/// Real samples of a function on a velocity grid. No sign or decay constraint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sampled<T> {
    pub grid: VelocityGrid<T>,
    pub values: Vec<T>,
}

impl<T: Real> Sampled<T> {
    pub fn new(grid: VelocityGrid<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::GridMismatch(format!("{} values for {} nodes", values.len(), grid.n)));
        }
        Ok(Sampled { grid, values })
    }

    pub fn from_fn<F: Fn(T) -> T>(grid: VelocityGrid<T>, f: F) -> Self {
        let values = (0..grid.n).map(|i| f(grid.node(i))).collect();
        Sampled { grid, values }
    }

    pub fn zeros(grid: VelocityGrid<T>) -> Self {
        Sampled { grid, values: vec![T::zero(); grid.n] }
    }

    pub fn derivative(&self) -> Self {
        Sampled { grid: self.grid, values: fd_first(&self.values, self.grid.dv()) }
    }

    pub fn second_derivative(&self) -> Self {
        Sampled { grid: self.grid, values: fd_second(&self.values, self.grid.dv()) }
    }

    /// Six-point interpolation; zero outside the grid.
    pub fn eval(&self, v: T) -> T {
        if !self.grid.contains(v) {
            return T::zero();
        }
        interp6(&self.values, self.grid.v_min, self.grid.dv(), v)
    }

    pub fn eval_deriv(&self, v: T) -> T {
        if !self.grid.contains(v) {
            return T::zero();
        }
        interp6_deriv(&self.values, self.grid.v_min, self.grid.dv(), v)
    }

    pub fn integral(&self) -> T {
        trapezoid(&self.values, self.grid.dv())
    }

    pub fn scaled(&self, a: T) -> Self {
        Sampled { grid: self.grid, values: self.values.iter().map(|&x| a * x).collect() }
    }

    pub fn check_finite(&self) -> Result<()> {
        match self.values.iter().position(|x| !x.is_finite()) {
            Some(i) => Err(Error::NonFiniteSample(i)),
            None => Ok(()),
        }
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |a, &x| a.max(x.abs()))
    }

    pub fn to_complex(&self) -> Vec<Complex<T>> {
        self.values.iter().map(|&x| Complex::new(x, T::zero())).collect()
    }

    pub fn to_f64(&self) -> Sampled<f64> {
        Sampled {
            grid: VelocityGrid { v_min: to_f64(self.grid.v_min), v_max: to_f64(self.grid.v_max), n: self.grid.n },
            values: self.values.iter().map(|&x| to_f64(x)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert!(VelocityGrid::<f64>::new(1.0, -1.0, 100).is_err());
        assert!(VelocityGrid::<f64>::new(-1.0, 1.0, 15).is_err());
        assert!(VelocityGrid::<f32>::new(-1.0, 1.0, 16).is_ok());
    }

    #[test]
    fn nodes_are_uniform() {
        let g = VelocityGrid::<f64>::symmetric(8.0, 4097).unwrap();
        assert_eq!(g.node(0), -8.0);
        assert!((g.node(4096) - 8.0).abs() < 1e-14);
        assert_eq!(g.node_index(1.0), Some(2304));
        assert_eq!(g.node_index(1.001), None);
    }
}
