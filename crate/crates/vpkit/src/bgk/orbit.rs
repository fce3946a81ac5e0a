use crate::error::{Error, Result};
use crate::numerics::{brent, gauss_legendre};

const GL_INNER: usize = 32;
const GL_PERIOD: usize = 64;

/// `h'(0)` by a Richardson-extrapolated central difference with step `eps`.
pub fn center_slope<H: Fn(f64) -> f64>(h: &H, eps: f64) -> f64 {
    let d = |s: f64| (h(s) - h(-s)) / (2.0 * s);
    (4.0 * d(eps / 2.0) - d(eps)) / 3.0
}

/// `∫_a^b h` by Gauss-Legendre.
fn integrate<H: Fn(f64) -> f64>(h: &H, a: f64, b: f64, nodes: &(Vec<f64>, Vec<f64>)) -> f64 {
    let (m, r) = (0.5 * (a + b), 0.5 * (b - a));
    nodes.0.iter().zip(&nodes.1).map(|(x, w)| w * h(m + r * x)).sum::<f64>() * r
}

/// Turning points `(β_min, β_max)` of the orbit of `β'' = h(β)` through
/// `β = amplitude, β' = 0`.
pub fn turning_points<H: Fn(f64) -> f64>(h: &H, amplitude: f64) -> Result<(f64, f64)> {
    if !(amplitude > 0.0) || !amplitude.is_finite() {
        return Err(Error::InvalidSpec(format!("orbit amplitude {amplitude} must be positive")));
    }
    let slope = center_slope(h, 0.1 * amplitude);
    if !(slope < 0.0) {
        return Err(Error::NotACenter(slope));
    }
    let gl = gauss_legendre(GL_INNER);
    for j in 1..=16 {
        let b = amplitude * j as f64 / 16.0;
        if !(h(b) < 0.0) {
            return Err(Error::OrbitEscapesWell(format!("h({b:e}) >= 0 inside the requested amplitude")));
        }
    }
    // W(β) = -∫_0^β h; the left turning point has W(β_min) = W(β_max)
    let w = |b: f64| -integrate(h, 0.0, b, &gl);
    let wmax = w(amplitude);
    let mut lo = -amplitude;
    let mut tries = 0;
    while w(lo) < wmax {
        if !(h(lo) > 0.0) {
            return Err(Error::OrbitEscapesWell(format!("no restoring force at β = {lo:e}")));
        }
        lo *= 1.5;
        tries += 1;
        if tries > 40 {
            return Err(Error::OrbitEscapesWell("left turning point not found".into()));
        }
    }
    let bmin = brent(|b| w(b) - wmax, lo, 0.0, 1e-16 * amplitude)
        .ok_or_else(|| Error::OrbitEscapesWell("left turning point not bracketed".into()))?;
    Ok((bmin, amplitude))
}

/// Period of the orbit of `β'' = h(β)` with right turning point `amplitude`:
/// `T = √2 ∫_{β_min}^{β_max} dβ / √(W(β_max) - W(β))`, `W = -∫_0^β h`.
///
/// The substitution `β = m - r cos θ` removes both inverse square-root
/// singularities; the potential difference is integrated from the nearer
/// turning point so it keeps full relative accuracy there.
pub fn orbit_period<H: Fn(f64) -> f64>(h: &H, amplitude: f64) -> Result<f64> {
    let (bmin, bmax) = turning_points(h, amplitude)?;
    let gl = gauss_legendre(GL_INNER);
    let (tn, tw) = gauss_legendre(GL_PERIOD);
    let (m, r) = (0.5 * (bmax + bmin), 0.5 * (bmax - bmin));
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut total = 0.0;
    for (x, wgt) in tn.iter().zip(&tw) {
        let theta = half_pi * (x + 1.0);
        let b = m - r * theta.cos();
        let gap = if b >= m { -integrate(h, b, bmax, &gl) } else { integrate(h, bmin, b, &gl) };
        if !(gap > 0.0) {
            return Err(Error::OrbitEscapesWell(format!("potential not monotone at β = {b:e}")));
        }
        total += wgt * r * theta.sin() / gap.sqrt();
    }
    Ok(std::f64::consts::SQRT_2 * total * half_pi)
}

/// `2π/√(-h'(0))`, the small-amplitude limit of [`orbit_period`].
pub fn linear_period<H: Fn(f64) -> f64>(h: &H, eps: f64) -> Result<f64> {
    let s = center_slope(h, eps);
    if !(s < 0.0) {
        return Err(Error::NotACenter(s));
    }
    Ok(std::f64::consts::TAU / (-s).sqrt())
}

/// `β` and `β'` at `n` equally spaced points over one period `period`, starting
/// at the right turning point, by classical RK4 with `substeps` steps per sample.
pub fn trace_orbit<H: Fn(f64) -> f64>(h: &H, amplitude: f64, period: f64, n: usize, substeps: usize) -> (Vec<f64>, Vec<f64>) {
    let dx = period / (n * substeps) as f64;
    let (mut b, mut p) = (amplitude, 0.0);
    let mut beta = Vec::with_capacity(n);
    let mut slope = Vec::with_capacity(n);
    for _ in 0..n {
        beta.push(b);
        slope.push(p);
        for _ in 0..substeps {
            let (k1b, k1p) = (p, h(b));
            let (k2b, k2p) = (p + 0.5 * dx * k1p, h(b + 0.5 * dx * k1b));
            let (k3b, k3p) = (p + 0.5 * dx * k2p, h(b + 0.5 * dx * k2b));
            let (k4b, k4p) = (p + dx * k3p, h(b + dx * k3b));
            b += dx / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
            p += dx / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        }
    }
    (beta, slope)
}

/// Complete elliptic integral of the first kind `K(m)`, `m = k^2`, by the
/// arithmetic-geometric mean.
pub fn elliptic_k(m: f64) -> f64 {
    let (mut a, mut g) = (1.0f64, (1.0 - m).sqrt());
    for _ in 0..64 {
        if (a - g).abs() <= 4.0 * f64::EPSILON * a {
            break;
        }
        (a, g) = (0.5 * (a + g), (a * g).sqrt());
    }
    std::f64::consts::PI / (2.0 * a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_period_independent_of_amplitude() {
        let h = |b: f64| -4.0 * b;
        for a in [1e-4, 0.1, 3.0] {
            let t = orbit_period(&h, a).unwrap();
            assert!((t - std::f64::consts::PI).abs() < 1e-12, "{a} {t}");
        }
    }

    #[test]
    fn pendulum_matches_elliptic_oracle() {
        let h = |b: f64| -b.sin();
        let t = orbit_period(&h, 1.0).unwrap();
        let oracle = 4.0 * elliptic_k(0.5f64.sin().powi(2));
        assert!((oracle - 6.699975664370452).abs() < 1e-12);
        assert!((t - oracle).abs() < 1e-12, "{t}");
        let t0 = orbit_period(&h, 1e-6).unwrap();
        assert!((t0 - linear_period(&h, 1e-3).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn asymmetric_well() {
        // h = -β + β^2: softer on the right, so the left turning point is nearer 0
        let h = |b: f64| -b + b * b;
        let (lo, hi) = turning_points(&h, 0.3).unwrap();
        assert!(lo > -0.3 && lo < -0.2 && hi == 0.3, "{lo}");
        let t = orbit_period(&h, 0.3).unwrap();
        let (beta, _) = trace_orbit(&h, 0.3, t, 200, 50);
        let (twice, _) = trace_orbit(&h, 0.3, 2.0 * t, 2, 20000);
        assert!((twice[1] - 0.3).abs() < 1e-10, "{}", twice[1]);
        assert!((beta.iter().cloned().fold(f64::INFINITY, f64::min) - lo).abs() < 1e-6);
    }

    #[test]
    fn not_a_center() {
        assert!(matches!(orbit_period(&|b: f64| b, 0.1), Err(Error::NotACenter(_))));
        assert!(matches!(orbit_period(&|b: f64| -b.sin(), 4.0), Err(Error::OrbitEscapesWell(_))));
    }
}
