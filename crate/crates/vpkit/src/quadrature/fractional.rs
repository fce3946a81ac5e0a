use num_complex::Complex;

use crate::numerics::{fft_freqs, fft_in_place};
use crate::profiles::Sampled;
use crate::scalar::{from_usize, lit, to_f64, Real};

/// `|D|^order g`: Fourier multiplier `|ξ|^order` applied on a zero-padded
/// periodic extension four times the grid length.
pub fn fractional_derivative_p2<T: Real>(g: &Sampled<T>, order: T) -> Sampled<T> {
    let len = (4 * g.grid.n).next_power_of_two();
    fractional_derivative_padded(g, order, len)
}

/// As [`fractional_derivative_p2`] with an explicit padded length (at least the grid size).
///
/// The transform of the padded data is the periodic sum of the exact result
/// over images a padded length `L` apart. For orders that are not even
/// integers the exact result decays like `|u|^{-1-order}`, so the images are
/// removed using its monopole and dipole far field; the residual is of order
/// `L^{-3-order}`.
pub fn fractional_derivative_padded<T: Real>(g: &Sampled<T>, order: T, len: usize) -> Sampled<T> {
    let n = g.grid.n;
    let len = len.max(n);
    if order == T::zero() {
        return g.clone();
    }
    let mut data = vec![Complex::new(T::zero(), T::zero()); len];
    for (d, &x) in data.iter_mut().zip(&g.values) {
        *d = Complex::new(x, T::zero());
    }
    fft_in_place(&mut data, false);
    let xi = fft_freqs::<T>(len, g.grid.dv());
    for (d, k) in data.iter_mut().zip(&xi) {
        *d = *d * k.abs().powf(order);
    }
    fft_in_place(&mut data, true);
    let scale = from_usize::<T>(len).recip();
    let mut values: Vec<T> = data[..n].iter().map(|z| z.re * scale).collect();
    let a = to_f64(order);
    let tail = -statrs::function::gamma::gamma(1.0 + a) * (std::f64::consts::FRAC_PI_2 * a).sin() / std::f64::consts::PI;
    if tail != 0.0 {
        // monopole and dipole about the grid midpoint
        let dv = to_f64(g.grid.dv());
        let mid = 0.5 * to_f64(g.grid.v_min + g.grid.v_max);
        let (m0, m1) = g.values.iter().enumerate().fold((0.0, 0.0), |(m0, m1), (i, &x)| {
            let x = to_f64(x) * dv;
            (m0 + x, m1 + x * (to_f64(g.grid.node(i)) - mid))
        });
        let (p, period) = (1.0 + a, len as f64 * dv);
        for (i, v) in values.iter_mut().enumerate() {
            let u = to_f64(g.grid.node(i)) - mid;
            let images = m0 * image_sum(u, period, p, 1.0) + m1 * p * image_sum(u, period, p + 1.0, -1.0);
            *v = *v - lit(tail * images);
        }
    }
    Sampled { grid: g.grid, values }
}

/// `Σ_{m >= 1} (mL + u)^{-p} + sign (mL - u)^{-p}` for `|u| < L`, with an Euler–Maclaurin tail.
fn image_sum(u: f64, l: f64, p: f64, sign: f64) -> f64 {
    const N: usize = 64;
    let side = |u: f64| {
        let f = |m: f64| (m * l + u).powf(-p);
        let head: f64 = (1..N).map(|m| f(m as f64)).sum();
        let x = N as f64 * l + u;
        let tail = x.powf(1.0 - p) / ((p - 1.0) * l) + 0.5 * f(N as f64) + p * l * x.powf(-p - 1.0) / 12.0;
        head + tail
    };
    side(u) + sign * side(-u)
}
#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::VelocityGrid;

    #[test]
    fn order_zero_is_identity() {
        let g = VelocityGrid::<f64>::symmetric(8.0, 512).unwrap();
        let s = Sampled::from_fn(g, |v: f64| (-v * v).exp() * v.sin());
        assert_eq!(fractional_derivative_p2(&s, 0.0).values, s.values);
    }

    #[test]
    fn order_two_is_minus_second_derivative() {
        let g = VelocityGrid::<f64>::symmetric(12.0, 1024).unwrap();
        let s = Sampled::from_fn(g, |v: f64| (-v * v / 2.0).exp());
        let d = fractional_derivative_p2(&s, 2.0);
        for (i, &x) in d.values.iter().enumerate() {
            let v = g.node(i);
            let exact = (1.0 - v * v) * (-v * v / 2.0).exp();
            assert!((x - exact).abs() < 1e-8, "{v}: {x} {exact}");
        }
    }

    #[test]
    fn parity_is_preserved() {
        let g = VelocityGrid::<f64>::symmetric(10.0, 801).unwrap();
        let s = Sampled::from_fn(g, |v: f64| v * (-v * v).exp());
        let d = fractional_derivative_p2(&s, 0.7);
        for i in 0..401 {
            assert!((d.values[i] + d.values[800 - i]).abs() < 1e-12);
        }
    }
}
