//! Small numerical building blocks shared by the modules: uniform-grid
//! interpolation and differencing, quadrature rules, root finding, FFT helpers.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::scalar::{from_usize, lit, Real};

/// Stencil start and Lagrange weights of the six-point interpolant at
/// fractional node position `s` (node units, `0 <= s <= n-1`).
pub fn lagrange6<T: Real>(n: usize, s: T) -> (usize, [T; 6]) {
    assert!(n >= 6, "six-point interpolation needs at least six nodes");
    let fl = s.floor().to_isize().unwrap_or(0);
    let start = (fl - 2).clamp(0, n as isize - 6) as usize;
    let t = s - from_usize::<T>(start);
    let mut w = [T::zero(); 6];
    for (j, wj) in w.iter_mut().enumerate() {
        let mut acc = T::one();
        for m in 0..6 {
            if m != j {
                acc = acc * (t - from_usize::<T>(m)) / (from_usize::<T>(j) - from_usize::<T>(m));
            }
        }
        *wj = acc;
    }
    (start, w)
}

/// Weights of the derivative (with respect to `s`) of the six-point interpolant.
pub fn lagrange6_deriv<T: Real>(n: usize, s: T) -> (usize, [T; 6]) {
    assert!(n >= 6);
    let fl = s.floor().to_isize().unwrap_or(0);
    let start = (fl - 2).clamp(0, n as isize - 6) as usize;
    let t = s - from_usize::<T>(start);
    let mut w = [T::zero(); 6];
    for (j, wj) in w.iter_mut().enumerate() {
        let denom: T = (0..6)
            .filter(|&m| m != j)
            .map(|m| from_usize::<T>(j) - from_usize::<T>(m))
            .fold(T::one(), |a, b| a * b);
        let mut sum = T::zero();
        for skip in 0..6 {
            if skip == j {
                continue;
            }
            let mut prod = T::one();
            for m in 0..6 {
                if m != j && m != skip {
                    prod = prod * (t - from_usize::<T>(m));
                }
            }
            sum = sum + prod;
        }
        *wj = sum / denom;
    }
    (start, w)
}

/// Six-point Lagrange interpolation of uniformly spaced samples starting at `x0`.
pub fn interp6<T: Real>(values: &[T], x0: T, dx: T, x: T) -> T {
    let (start, w) = lagrange6(values.len(), (x - x0) / dx);
    (0..6).fold(T::zero(), |a, j| a + w[j] * values[start + j])
}

pub fn interp6_deriv<T: Real>(values: &[T], x0: T, dx: T, x: T) -> T {
    let (start, w) = lagrange6_deriv(values.len(), (x - x0) / dx);
    (0..6).fold(T::zero(), |a, j| a + w[j] * values[start + j]) / dx
}

/// First derivative by central differences: sixth order in the interior,
/// dropping to fourth and second order near the ends, one-sided at the ends.
pub fn fd_first<T: Real>(values: &[T], dx: T) -> Vec<T> {
    let n = values.len();
    let mut d = vec![T::zero(); n];
    if n < 3 {
        return d;
    }
    let c6 = [lit::<T>(3.0 / 4.0), lit(-3.0 / 20.0), lit(1.0 / 60.0)];
    let c4 = [lit::<T>(2.0 / 3.0), lit(-1.0 / 12.0)];
    for i in 0..n {
        d[i] = if i >= 3 && i + 3 < n {
            (c6[0] * (values[i + 1] - values[i - 1])
                + c6[1] * (values[i + 2] - values[i - 2])
                + c6[2] * (values[i + 3] - values[i - 3]))
                / dx
        } else if i >= 2 && i + 2 < n {
            (c4[0] * (values[i + 1] - values[i - 1]) + c4[1] * (values[i + 2] - values[i - 2])) / dx
        } else if i >= 1 && i + 1 < n {
            (values[i + 1] - values[i - 1]) / (lit::<T>(2.0) * dx)
        } else if i == 0 {
            (lit::<T>(-1.5) * values[0] + lit::<T>(2.0) * values[1] - lit::<T>(0.5) * values[2]) / dx
        } else {
            (lit::<T>(1.5) * values[n - 1] - lit::<T>(2.0) * values[n - 2] + lit::<T>(0.5) * values[n - 3])
                / dx
        };
    }
    d
}

/// Second derivative, sixth order in the interior.
pub fn fd_second<T: Real>(values: &[T], dx: T) -> Vec<T> {
    let n = values.len();
    let mut d = vec![T::zero(); n];
    if n < 3 {
        return d;
    }
    let dx2 = dx * dx;
    for i in 0..n {
        d[i] = if i >= 3 && i + 3 < n {
            (lit::<T>(-49.0 / 18.0) * values[i]
                + lit::<T>(1.5) * (values[i + 1] + values[i - 1])
                + lit::<T>(-3.0 / 20.0) * (values[i + 2] + values[i - 2])
                + lit::<T>(1.0 / 90.0) * (values[i + 3] + values[i - 3]))
                / dx2
        } else if i >= 2 && i + 2 < n {
            (lit::<T>(-2.5) * values[i]
                + lit::<T>(4.0 / 3.0) * (values[i + 1] + values[i - 1])
                + lit::<T>(-1.0 / 12.0) * (values[i + 2] + values[i - 2]))
                / dx2
        } else if i >= 1 && i + 1 < n {
            (values[i + 1] - lit::<T>(2.0) * values[i] + values[i - 1]) / dx2
        } else if i == 0 {
            (values[0] - lit::<T>(2.0) * values[1] + values[2]) / dx2
        } else {
            (values[n - 1] - lit::<T>(2.0) * values[n - 2] + values[n - 3]) / dx2
        };
    }
    d
}

pub fn trapezoid<T: Real>(values: &[T], dx: T) -> T {
    let n = values.len();
    if n < 2 {
        return T::zero();
    }
    let inner: T = values[1..n - 1].iter().copied().sum();
    (inner + lit::<T>(0.5) * (values[0] + values[n - 1])) * dx
}

pub fn trapezoid_c<T: Real>(values: &[Complex<T>], dx: T) -> Complex<T> {
    let n = values.len();
    if n < 2 {
        return Complex::new(T::zero(), T::zero());
    }
    let mut acc = Complex::new(T::zero(), T::zero());
    for v in &values[1..n - 1] {
        acc = acc + *v;
    }
    (acc + (values[0] + values[n - 1]) * lit::<T>(0.5)) * dx
}

/// In-place forward (sign -1) or inverse (sign +1, unnormalized) FFT.
pub fn fft_in_place<T: Real>(data: &mut [Complex<T>], inverse: bool) {
    let mut planner = FftPlanner::<T>::new();
    let plan = if inverse {
        planner.plan_fft_inverse(data.len())
    } else {
        planner.plan_fft_forward(data.len())
    };
    plan.process(data);
}

/// Angular frequencies of an FFT of length `n` with sample spacing `dx`, in FFT order.
pub fn fft_freqs<T: Real>(n: usize, dx: T) -> Vec<T> {
    let scale = T::TAU() / (from_usize::<T>(n) * dx);
    (0..n)
        .map(|j| {
            if j <= n / 2 {
                from_usize::<T>(j) * scale
            } else {
                -from_usize::<T>(n - j) * scale
            }
        })
        .collect()
}

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let (pn, pn1) = if n == 1 { (z, 1.0) } else { (p1, p0) };
            let dp = n as f64 * (z * pn - pn1) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (mut p0, mut p1) = (1.0, z);
        for k in 2..=n {
            let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
            p0 = p1;
            p1 = p2;
        }
        let dp = if n == 1 { 1.0 } else { n as f64 * (z * p1 - p0) / (z * z - 1.0) };
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

/// Brent's method on a sign-changing bracket `[a, b]`.
pub fn brent<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> Option<f64> {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa * fb > 0.0 {
        return None;
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb * fc > 0.0 {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Some(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            if 2.0 * p < (3.0 * xm * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
    }
    Some(b)
}

/// Chebyshev interpolant of a smooth function on `[a, b]`.
#[derive(Debug, Clone)]
pub struct Chebyshev {
    a: f64,
    b: f64,
    coeffs: Vec<f64>,
}

impl Chebyshev {
    pub fn fit<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, n: usize) -> Self {
        let pi = std::f64::consts::PI;
        let vals: Vec<f64> = (0..n)
            .map(|k| {
                let x = (pi * (k as f64 + 0.5) / n as f64).cos();
                f(0.5 * (b - a) * x + 0.5 * (b + a))
            })
            .collect();
        let coeffs = (0..n)
            .map(|j| {
                let s: f64 = (0..n)
                    .map(|k| vals[k] * (pi * j as f64 * (k as f64 + 0.5) / n as f64).cos())
                    .sum();
                2.0 * s / n as f64
            })
            .collect();
        Chebyshev { a, b, coeffs }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let y = (2.0 * x - self.a - self.b) / (self.b - self.a);
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coeffs.iter().skip(1).rev() {
            let t = 2.0 * y * b1 - b2 + c;
            b2 = b1;
            b1 = t;
        }
        y * b1 - b2 + 0.5 * self.coeffs[0]
    }

    /// Magnitude of the trailing coefficients, a cheap accuracy estimate.
    pub fn tail(&self) -> f64 {
        self.coeffs.iter().rev().take(3).map(|c| c.abs()).fold(0.0, f64::max)
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.a, self.b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lagrange_reproduces_quintics() {
        let x0 = -1.0;
        let dx = 0.1;
        let p = |x: f64| 1.0 - 2.0 * x + 0.5 * x.powi(3) - x.powi(5);
        let vals: Vec<f64> = (0..21).map(|i| p(x0 + i as f64 * dx)).collect();
        for &x in &[-0.97, -0.5, 0.033, 0.71, 0.99] {
            assert!((interp6(&vals, x0, dx, x) - p(x)).abs() < 1e-13);
            let dp = -2.0 + 1.5 * x * x - 5.0 * x.powi(4);
            assert!((interp6_deriv(&vals, x0, dx, x) - dp).abs() < 1e-11);
        }
    }

    #[test]
    fn sixth_order_differences() {
        let dx = 0.01;
        let vals: Vec<f64> = (0..200).map(|i| (i as f64 * dx).sin()).collect();
        let d = fd_first(&vals, dx);
        let d2 = fd_second(&vals, dx);
        for i in 3..197 {
            let x = i as f64 * dx;
            assert!((d[i] - x.cos()).abs() < 1e-12);
            assert!((d2[i] + x.sin()).abs() < 1e-9);
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(10);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((s - 2.0 / 19.0).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn brent_finds_cos_root() {
        let r = brent(f64::cos, 1.0, 2.0, 1e-15).unwrap();
        assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-14);
    }

    #[test]
    fn chebyshev_fit_exp() {
        let c = Chebyshev::fit(f64::exp, -1.0, 2.0, 30);
        for &x in &[-1.0, 0.3, 1.7, 2.0] {
            assert!((c.eval(x) - x.exp()).abs() < 1e-13);
        }
    }
}
