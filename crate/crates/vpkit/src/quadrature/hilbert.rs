use num_complex::Complex;

use crate::error::Result;
use crate::numerics::{fd_first, fft_in_place};
use crate::profiles::Sampled;
use crate::scalar::{from_usize, lit, Real};

/// Boundary values `G(x + i0) = P∫ g(v)/(v - x) dv + iπ g(x)` at every grid node.
///
/// The real part is the same discrete rule as [`super::pv_integral`] applied at
/// each node; the off-diagonal sum is a linear convolution with the kernel
/// `1/m`, evaluated exactly through a zero-padded FFT, so no taper is needed.
pub fn hilbert_boundary<T: Real>(g: &Sampled<T>) -> Result<Vec<Complex<T>>> {
    g.check_finite()?;
    let re = pv_on_nodes(&g.values, g.grid.dv(), g.grid.v_min, g.grid.v_max);
    Ok(re
        .into_iter()
        .zip(&g.values)
        .map(|(r, &gi)| Complex::new(r, T::PI() * gi))
        .collect())
}

/// Boundary values for complex samples, by linearity.
pub fn hilbert_boundary_complex<T: Real>(
    grid: crate::profiles::VelocityGrid<T>,
    g: &[Complex<T>],
) -> Result<Vec<Complex<T>>> {
    let re: Vec<T> = g.iter().map(|z| z.re).collect();
    let im: Vec<T> = g.iter().map(|z| z.im).collect();
    let a = hilbert_boundary(&Sampled::new(grid, re)?)?;
    let b = hilbert_boundary(&Sampled::new(grid, im)?)?;
    Ok(a.into_iter().zip(b).map(|(a, b)| a + Complex::new(-b.im, b.re)).collect())
}

fn pv_on_nodes<T: Real>(g: &[T], dv: T, a: T, b: T) -> Vec<T> {
    let n = g.len();
    let half = lit::<T>(0.5);
    let w = |i: usize| if i == 0 || i == n - 1 { half } else { T::one() };

    // conv_j = Σ_{i≠j} w_i g_i / (i - j)
    let len = (2 * n).next_power_of_two();
    let zero = Complex::new(T::zero(), T::zero());
    let mut data = vec![zero; len];
    for i in 0..n {
        data[i] = Complex::new(w(i) * g[i], T::zero());
    }
    let mut kern = vec![zero; len];
    for m in 1..n {
        let inv = from_usize::<T>(m).recip();
        kern[m] = Complex::new(-inv, T::zero());
        kern[len - m] = Complex::new(inv, T::zero());
    }
    fft_in_place(&mut data, false);
    fft_in_place(&mut kern, false);
    for (d, k) in data.iter_mut().zip(&kern) {
        *d = *d * *k;
    }
    fft_in_place(&mut data, true);
    let scale = from_usize::<T>(len).recip();

    // harmonic numbers for Σ_{i≠j} w_i / (i - j)
    let mut harm = vec![T::zero(); n];
    for m in 1..n {
        harm[m] = harm[m - 1] + from_usize::<T>(m).recip();
    }
    let d = fd_first(g, dv);
    let twelfth = dv * dv / lit(12.0);
    (0..n)
        .map(|j| {
            let conv = data[j].re * scale;
            let mut s = harm[n - 1 - j] - harm[j];
            if j != 0 {
                s = s + half / from_usize::<T>(j);
            }
            if j != n - 1 {
                s = s - half / from_usize::<T>(n - 1 - j);
            }
            let mut total = conv - g[j] * s + dv * w(j) * d[j];
            let x = a + from_usize::<T>(j) * dv;
            if j != 0 && j != n - 1 {
                let rp = |i: usize, u: T| (d[i] * u - (g[i] - g[j])) / (u * u);
                total = total - twelfth * (rp(n - 1, b - x) - rp(0, a - x));
                total = total + g[j] * ((b - x) / (x - a)).ln();
            }
            total
        })
        .collect()
}
