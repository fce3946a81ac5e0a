use proptest::prelude::*;
use std::f64::consts::TAU;

use vpkit::bgk::{energy_split, orbit_period, linear_period};
use vpkit::field::PhaseSpaceField;
use vpkit::io::{fmt_num, json_num, num_from_json};
use vpkit::landau::{landau_field, LandauOptions, ModeInitialData};
use vpkit::penrose::critical_period;
use vpkit::profiles::{normalize, rescale_profile, symmetrize_near, NamedProfile, Sampled, VelocityGrid, VelocityProfile};
use vpkit::quadrature::{fractional_derivative_p2, hilbert_boundary, pv_integral, sobolev_norm, SobolevSpec};
use vpkit::sim::{evolve, poisson_solve, DiagnosticsConfig, SimOptions, Simulation};

fn maxwellian(vmax: f64, n: usize) -> VelocityProfile<f64> {
    NamedProfile::Maxwellian.build(VelocityGrid::symmetric(vmax, n).unwrap()).unwrap()
}

fn bump(g: VelocityGrid<f64>, a: f64, c: f64, w: f64) -> Sampled<f64> {
    Sampled::from_fn(g, move |v: f64| a * (-(v - c) * (v - c) / (2.0 * w * w)).exp())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn pv_is_linear(a in -2.0..2.0f64, b in -2.0..2.0f64, c in -1.5..1.5f64, m in -1.0..1.0f64) {
        let g = VelocityGrid::symmetric(10.0, 2048).unwrap();
        let (u, w) = (bump(g, 1.0, m, 0.7), bump(g, 1.0, -m, 1.3));
        let sum = Sampled::from_fn(g, |v| a * u.eval(v) + b * w.eval(v));
        let lhs = pv_integral(&sum, c).unwrap();
        let rhs = a * pv_integral(&u, c).unwrap() + b * pv_integral(&w, c).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()));
    }

    #[test]
    fn odd_about_pole_reduces_to_plain_quadrature(c in -1.0..1.0f64, w in 0.5..1.5f64) {
        // g(c + u) = u e^{-u^2/2w^2} is odd about c: P∫ g/(v - c) = ∫ e^{-u^2/2w^2} du
        let g = VelocityGrid::symmetric(12.0, 4096).unwrap();
        let s = Sampled::from_fn(g, |v: f64| (v - c) * (-(v - c) * (v - c) / (2.0 * w * w)).exp());
        let direct = w * TAU.sqrt();
        prop_assert!((pv_integral(&s, c).unwrap() - direct).abs() < 1e-6 * direct);
    }

    #[test]
    fn hilbert_imaginary_part_is_pi_g(m in -1.0..1.0f64, w in 0.5..1.5f64) {
        let s = bump(VelocityGrid::symmetric(10.0, 1024).unwrap(), 1.0, m, w);
        let z = hilbert_boundary(&s).unwrap();
        for (z, g) in z.iter().zip(&s.values) {
            prop_assert!(z.im == std::f64::consts::PI * g);
        }
    }

    #[test]
    fn sobolev_homogeneous_and_monotone(lam in -5.0..5.0f64, s in 0.0..3.0f64, w in 0.4..1.5f64) {
        let g = bump(VelocityGrid::symmetric(10.0, 1024).unwrap(), 1.0, 0.3, w);
        let n = sobolev_norm(&g, SobolevSpec::h(s)).unwrap();
        let scaled = Sampled::from_fn(g.grid, |v| lam * g.eval(v));
        let ns = sobolev_norm(&scaled, SobolevSpec::h(s)).unwrap();
        prop_assert!((ns - lam.abs() * n).abs() <= 1e-12 * (1.0 + ns));
        prop_assert!(sobolev_norm(&g, SobolevSpec::h(s + 0.3)).unwrap() >= n);
    }

    #[test]
    fn parseval(w in 0.3..2.0f64, m in -1.0..1.0f64) {
        let g = bump(VelocityGrid::symmetric(12.0, 2048).unwrap(), 1.0, m, w);
        let l2 = vpkit::quadrature::lp_norm(&g.values, g.grid.dv(), 2.0);
        prop_assert!((sobolev_norm(&g, SobolevSpec::h(0.0)).unwrap() - l2).abs() <= 1e-10 * l2);
    }

    #[test]
    fn fractional_derivative_scaling(order in 0.2..1.8f64, d in 1.2..2.5f64) {
        // (|D|^a g(·/d))(v) = d^{-a} (|D|^a g)(v/d)
        let grid = VelocityGrid::symmetric(40.0, 8192).unwrap();
        let g = bump(grid, 1.0, 0.0, 1.0);
        let gd = bump(grid, 1.0, 0.0, d);
        let (a, b) = (fractional_derivative_p2(&g, order), fractional_derivative_p2(&gd, order));
        let scale = a.max_abs();
        for v in [0.0, 0.7, 1.9, 3.1] {
            prop_assert!((b.eval(v) - d.powf(-order) * a.eval(v / d)).abs() < 1e-6 * scale);
        }
    }

    #[test]
    fn normalize_gives_unit_mass(a in 0.1..5.0f64, v0 in 0.0..3.0f64) {
        let grid = VelocityGrid::symmetric(12.0, 2048).unwrap();
        let p = VelocityProfile::from_fn(grid, |v| a * NamedProfile::DoubleGaussian { v0 }.eval(v)).unwrap();
        let n = normalize(&p).unwrap();
        prop_assert!((n.as_sampled().integral() - 1.0).abs() < 1e-13);
        let nn = normalize(&n).unwrap();
        prop_assert!(nn.values.iter().zip(&n.values).all(|(x, y)| (x - y).abs() <= 1e-14 * y.abs()));
    }

    #[test]
    fn symmetrized_profile_is_even_near_center(c in -2.0..2.0f64, d2 in 0.3..1.0f64) {
        let p = maxwellian(8.0, 2048);
        let s = symmetrize_near(&p, c, d2).unwrap();
        let h = s.grid.dv();
        for j in 0..(d2 / h) as usize {
            let u = j as f64 * h;
            prop_assert!((s.eval(c + u) - s.eval(c - u)).abs() < 1e-12);
        }
    }

    #[test]
    fn split_round_trip(c in -1.5..1.5f64) {
        let p = maxwellian(8.0, 2048);
        let s = symmetrize_near(&p, c, 2.0).unwrap();
        let sp = energy_split(&s, c, 1.0).unwrap();
        for i in (0..s.grid.n).step_by(5) {
            let v = s.grid.node(i);
            prop_assert!((sp.reconstruct(v - c).unwrap() - s.values[i]).abs() < 1e-6);
        }
    }

    #[test]
    fn rescale_law(delta in 0.7..1.4f64) {
        let p = NamedProfile::DoubleGaussian { v0: 3.0 }.build(VelocityGrid::symmetric(16.0, 4096).unwrap()).unwrap();
        let k0 = critical_period(&p).unwrap().k_max();
        let r = rescale_profile(&p, 0.0, delta).unwrap();
        let k1 = critical_period(&r).unwrap().k_max();
        prop_assert!((k1 - k0 / delta).abs() < 1e-6 * k0 / delta);
    }

    #[test]
    fn negative_wave_number_is_conjugate(k in 0.4..1.5f64, m in -1.0..1.0f64) {
        let p = maxwellian(8.0, 1024);
        let d = ModeInitialData::gaussian(k, p.grid, 1.0, m, 0.8).unwrap();
        let t: Vec<f64> = (0..6).map(|i| 1.5 * i as f64).collect();
        let a = landau_field(&p, &d, &t, &LandauOptions::default()).unwrap();
        let b = landau_field(&p, &d.mirrored(), &t, &LandauOptions::default()).unwrap();
        for (x, y) in a.e.iter().zip(&b.e) {
            prop_assert!(*x == y.conj());
        }
    }

    #[test]
    fn harmonic_period_is_amplitude_free(w in 0.5..3.0f64, a in 1e-3..2.0f64) {
        let h = move |b: f64| -w * w * b;
        prop_assert!((orbit_period(&h, a).unwrap() - TAU / w).abs() < 1e-11);
        prop_assert!((linear_period(&h, 1e-3).unwrap() - TAU / w).abs() < 1e-11);
    }

    #[test]
    fn pendulum_period_grows_with_amplitude(a in 0.05..2.5f64) {
        let h = |b: f64| -b.sin();
        prop_assert!(orbit_period(&h, a + 0.05).unwrap() > orbit_period(&h, a).unwrap());
    }

    #[test]
    fn numbers_survive_text(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
        prop_assert_eq!(fmt_num(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        prop_assert_eq!(num_from_json(&json_num(x)).unwrap().to_bits(), x.to_bits());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    #[test]
    fn poisson_derivative_matches_charge(eps in 0.0..0.2f64, k in 0.3..1.5f64, ph in 0.0..6.0f64) {
        let p = maxwellian(8.0, 256);
        let f = PhaseSpaceField::from_fn(TAU / k, 32, p.grid, |x, v| p.eval(v) * (1.0 + eps * (k * x + ph).cos() + 0.3 * eps * (2.0 * k * x).sin())).unwrap();
        let e = poisson_solve(&f).unwrap();
        let ex = vpkit::quadrature::spectral_derivative_periodic(&e, f.period);
        let rho = f.density();
        let err: f64 = ex.iter().zip(&rho).map(|(a, r)| (a - (1.0 - r)).powi(2)).sum::<f64>().sqrt();
        let scale: f64 = rho.iter().map(|r| (1.0 - r).powi(2)).sum::<f64>().sqrt();
        prop_assert!(err <= 1e-10 * scale.max(1e-3));
        prop_assert!(e.iter().sum::<f64>().abs() < 1e-13);
    }

    #[test]
    fn mass_conserved_and_density_bound_holds(eps in 0.0..0.3f64, k in 0.3..1.2f64, dt in 0.02..0.3f64) {
        let p = maxwellian(8.0, 512);
        let f = PhaseSpaceField::from_fn(TAU / k, 32, p.grid, |x, v| p.eval(v) * (1.0 + eps * (k * x).cos())).unwrap();
        let o = SimOptions { max_shift_x: f64::INFINITY, ..Default::default() };
        let (_, d) = evolve(&f, dt, 20, &o, &DiagnosticsConfig { stride: 1, ..Default::default() }).unwrap();
        for m in &d.mass {
            prop_assert!((m - d.mass[0]).abs() <= 1e-12 * d.mass[0]);
        }
        prop_assert!(d.density_bound_ratio.iter().all(|r| *r <= 1.0));
    }

    #[test]
    fn time_reversal(eps in 0.0..0.1f64, dt in 0.02..0.2f64) {
        let p = maxwellian(8.0, 512);
        let f = PhaseSpaceField::from_fn(TAU / 0.5, 32, p.grid, |x, v| p.eval(v) * (1.0 + eps * (0.5 * x).cos())).unwrap();
        let o = SimOptions { max_shift_x: f64::INFINITY, ..Default::default() };
        let mut sim = Simulation::new(f.clone(), o).unwrap();
        for _ in 0..3 { sim.step(dt).unwrap(); }
        for _ in 0..3 { sim.step(-dt).unwrap(); }
        let err = sim.state.f.iter().zip(&f.f).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        // six-point interpolation error of the perturbation at this shift size
        let shift = eps / 0.5 * dt / p.grid.dv();
        let bound = 10.0 * 6.0 * eps * p.max_value() * (p.grid.dv() / 0.5).powi(6) * (1.0 + shift) + 1e-14;
        prop_assert!(err <= bound, "{} {}", err, bound);
    }
}
