use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numerics::{fd_first, lagrange6};
use crate::profiles::Sampled;
use crate::scalar::{lit, to_f64, Real};

/// `P∫ g(v)/(v - c) dv` over the grid interval by singularity subtraction:
/// the trapezoid rule on `(g(v) - g(c))/(v - c)` with an endpoint
/// Euler-Maclaurin correction, plus `g(c) log((v_max - c)/(c - v_min))`.
pub fn pv_integral<T: Real>(g: &Sampled<T>, c: T) -> Result<T> {
    let grid = g.grid;
    if !(c > grid.v_min && c < grid.v_max) {
        return Err(Error::PoleOutsideDomain { c: to_f64(c) });
    }
    g.check_finite()?;
    let n = grid.n;
    let dv = grid.dv();
    let gc = match grid.node_index(c) {
        Some(j) => g.values[j],
        None => g.eval(c),
    };
    let near = lit::<T>(1e-2) * dv;
    let mut r = Vec::with_capacity(n);
    for (i, &gi) in g.values.iter().enumerate() {
        let u = grid.node(i) - c;
        r.push(if u.abs() < near { g.eval_deriv(c) } else { (gi - gc) / u });
    }
    let inner: T = r[1..n - 1].iter().copied().sum();
    let mut total = (inner + lit::<T>(0.5) * (r[0] + r[n - 1])) * dv;
    let d = fd_first(&g.values, dv);
    let rp = |i: usize| {
        let u = grid.node(i) - c;
        (d[i] * u - (g.values[i] - gc)) / (u * u)
    };
    total = total - dv * dv / lit(12.0) * (rp(n - 1) - rp(0));
    Ok(total + gc * ((grid.v_max - c) / (c - grid.v_min)).ln())
}

/// `∫ g(v)/(v - c) dv` for `Im c >= 0`; `Im c = 0` is read as the boundary
/// value from above (`c + i0`), whose imaginary part is `π g(Re c)`.
///
/// The pole is subtracted with the value at `c` of the six-point interpolant
/// around `Re c`, continued into the complex plane, which keeps the
/// remainder smooth for poles just above the grid.
pub fn cauchy_integral<T: Real>(g: &Sampled<T>, c: Complex<T>) -> Result<Complex<T>> {
    let grid = g.grid;
    let (x, y) = (c.re, c.im);
    if y < T::zero() || !y.is_finite() || !x.is_finite() {
        return Err(Error::PoleOutsideDomain { c: to_f64(x) });
    }
    let inside = x > grid.v_min && x < grid.v_max;
    if y == T::zero() && !inside {
        return Err(Error::PoleOutsideDomain { c: to_f64(x) });
    }
    g.check_finite()?;
    let n = grid.n;
    let dv = grid.dv();
    let zero = Complex::new(T::zero(), T::zero());

    let pz = if inside { interp_complex(g, c) } else { zero };
    let near = lit::<T>(1e-3) * dv;
    let mut acc = zero;
    for (i, &gi) in g.values.iter().enumerate() {
        let den = Complex::new(grid.node(i) - x, -y);
        let r = if y == T::zero() && den.re.abs() < near {
            Complex::new(g.eval_deriv(x), T::zero())
        } else {
            (Complex::new(gi, T::zero()) - pz) / den
        };
        let w = if i == 0 || i == n - 1 { lit::<T>(0.5) } else { T::one() };
        acc = acc + r * w;
    }
    let mut total = acc * dv;
    let d = fd_first(&g.values, dv);
    let rp = |i: usize| {
        let den = Complex::new(grid.node(i) - x, -y);
        (den * d[i] - (Complex::new(g.values[i], T::zero()) - pz)) / (den * den)
    };
    total = total - (rp(n - 1) - rp(0)) * (dv * dv / lit(12.0));
    let log_term = if y == T::zero() {
        Complex::new(((grid.v_max - x) / (x - grid.v_min)).ln(), T::PI())
    } else {
        Complex::new(grid.v_max - x, -y).ln() - Complex::new(grid.v_min - x, -y).ln()
    };
    Ok(total + pz * log_term)
}

/// Six-point interpolant of real samples evaluated at a complex point.
fn interp_complex<T: Real>(g: &Sampled<T>, c: Complex<T>) -> Complex<T> {
    let grid = g.grid;
    let s = grid.position(c.re);
    let (start, _) = lagrange6(grid.n, s);
    let t = Complex::new(s - crate::scalar::from_usize::<T>(start), c.im / grid.dv());
    let mut out = Complex::new(T::zero(), T::zero());
    for j in 0..6 {
        let mut l = Complex::new(T::one(), T::zero());
        for m in 0..6 {
            if m != j {
                let (jf, mf) = (crate::scalar::from_usize::<T>(j), crate::scalar::from_usize::<T>(m));
                l = l * (t - mf) / (jf - mf);
            }
        }
        out = out + l * g.values[start + j];
    }
    out
}
