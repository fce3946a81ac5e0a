//! Reference values computed independently (30-digit quadrature and root
//! finding with the Faddeeva function, complete elliptic integrals) and frozen here.

use num_complex::Complex;
use vpkit::bgk::{elliptic_k, orbit_period};
use vpkit::landau::{linearized_evolve, EvolveOptions, ModeInitialData};
use vpkit::penrose::{critical_period, dispersion_root, most_unstable_root};
use vpkit::profiles::{rescale_profile, NamedProfile, Sampled, VelocityGrid, VelocityProfile};
use vpkit::quadrature::{lp_norm, pv_integral};
use vpkit::sim::exponential_rate;

/// `∫ F'(v)/v dv` for the normalized double Gaussian, `v0 = 3`.
const DG3_INTEGRAL: f64 = 0.179_500_637_500_610_3;
/// Same for `v0 = 2.4`.
const DG24_INTEGRAL: f64 = 0.267_175_438_583_641_8;
/// Phase velocity of the growing mode, double Gaussian `v0 = 2.4`, `k = 0.3` (purely imaginary).
const DG24_ROOT_IM: f64 = 0.733_319_246_500_376_7;
/// Least damped Maxwellian mode at `k = 0.5`: `ω + iγ`.
const MAXWELL_K05: (f64, f64) = (1.415_661_888_604_536_4, -0.153_359_466_909_604_83);
/// `4 K(sin^2(1/2))`.
const PENDULUM: f64 = 6.699_975_664_370_453;
/// `0.1^{3/2} π^{1/4}`.
const BUMP_L2: f64 = 0.042_100_520_791_381_15;

fn build(p: NamedProfile, vmax: f64, n: usize) -> VelocityProfile<f64> {
    p.build(VelocityGrid::symmetric(vmax, n).unwrap()).unwrap()
}

#[test]
fn maxwellian_and_lorentzian_pv() {
    let m = build(NamedProfile::Maxwellian, 8.0, 4096);
    assert!((pv_integral(&m.derivative(), 0.0).unwrap() + 1.0).abs() < 1e-8);
    let l = build(NamedProfile::Lorentzian, 64.0, 8192);
    assert!((pv_integral(&l.derivative(), 0.0).unwrap() + 1.0).abs() < 1e-4);
}

#[test]
fn rescaled_maxwellian_pv() {
    let m = build(NamedProfile::Maxwellian, 16.0, 8192);
    let r = rescale_profile(&m, 0.0, 2.0).unwrap();
    assert!((pv_integral(&r.derivative(), 0.0).unwrap() + 0.25).abs() < 1e-6);
}

#[test]
fn rational_principal_value() {
    let g = Sampled::from_fn(VelocityGrid::symmetric(400.0, 160_001).unwrap(), |v: f64| 1.0 / (1.0 + v * v));
    assert!((pv_integral(&g, 1.0).unwrap() + std::f64::consts::FRAC_PI_2).abs() < 1e-4);
}

#[test]
fn double_gaussian_critical_wave_numbers() {
    let p = build(NamedProfile::DoubleGaussian { v0: 3.0 }, 16.0, 8192);
    let r = critical_period(&p).unwrap();
    let k = r.k_max();
    assert!((k * k - DG3_INTEGRAL).abs() < 1e-8 * DG3_INTEGRAL, "{}", k * k);
    let p = build(NamedProfile::DoubleGaussian { v0: 2.4 }, 16.0, 8192);
    let k = critical_period(&p).unwrap().k_max();
    assert!((k * k - DG24_INTEGRAL).abs() < 1e-8 * DG24_INTEGRAL);
}

#[test]
fn double_gaussian_growing_mode() {
    let p = build(NamedProfile::DoubleGaussian { v0: 2.4 }, 12.0, 4096);
    let r = most_unstable_root(&p, 0.3).unwrap().unwrap();
    assert!(r.c.re.abs() < 1e-8);
    assert!((r.c.im - DG24_ROOT_IM).abs() < 1e-6 * DG24_ROOT_IM, "{}", r.c.im);
    let r = dispersion_root(&p, 0.3, Complex::new(0.1, 0.5)).unwrap();
    assert!((r.growth_rate - 0.3 * DG24_ROOT_IM).abs() < 1e-6);
}

#[test]
fn maxwellian_damping_rate_in_time_domain() {
    // internal cross-check only: the algebraic decay is the target elsewhere
    let p = build(NamedProfile::Maxwellian, 8.0, 4096);
    let k = 0.5;
    let d = ModeInitialData::gaussian(k, p.grid, 1.0, 0.0, 1.0).unwrap();
    let s = linearized_evolve(&p, &d, 0.01, 4000, &EvolveOptions::default()).unwrap();
    // successive envelope maxima half an oscillation apart
    let a = s.abs();
    let peaks: Vec<(f64, f64)> = (1..a.len() - 1)
        .filter(|&i| a[i] > a[i - 1] && a[i] >= a[i + 1] && s.t[i] > 8.0)
        .map(|i| (s.t[i], a[i]))
        .collect();
    let (t, amp): (Vec<f64>, Vec<f64>) = peaks.into_iter().unzip();
    let (rate, _, _) = exponential_rate(&t, &amp, 0.0, f64::INFINITY).unwrap();
    assert!((rate - MAXWELL_K05.1).abs() < 0.02 * MAXWELL_K05.1.abs(), "{rate}");
    let spacing = (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64;
    assert!((spacing - std::f64::consts::PI / MAXWELL_K05.0).abs() < 0.02);
}

#[test]
fn pendulum_period() {
    assert!((4.0 * elliptic_k(0.5f64.sin().powi(2)) - PENDULUM).abs() < 1e-13);
    assert!((orbit_period(&|b: f64| -b.sin(), 1.0).unwrap() - PENDULUM).abs() < 1e-11);
}

#[test]
fn bump_l2_norm() {
    let g = VelocityGrid::symmetric(4.0, 8001).unwrap();
    let h: Vec<f64> = g.nodes().iter().map(|&v: &f64| 0.1 * (-(v / 0.1) * (v / 0.1) / 2.0).exp()).collect();
    assert!((lp_norm(&h, g.dv(), 2.0) - BUMP_L2).abs() < 1e-10);
}
