//! One PASS/FAIL line per acceptance criterion. Always exits 0; failures are
//! reported, not hidden.

use std::f64::consts::TAU;
use std::time::Instant;

use num_complex::Complex;
use vpkit::bgk::{construct_bgk, orbit_period, BgkOptions};
use vpkit::field::PhaseSpaceField;
use vpkit::landau::{
    fit_decay, integral_decay_norm, landau_field, linearized_evolve, uniform_times, EvolveOptions, LandauOptions, ModeInitialData,
};
use vpkit::penrose::{critical_period, dispersion_root, most_unstable_root, unstable_neighbor, NeighborOptions};
use vpkit::profiles::{BumpFamily, NamedProfile, Sampled, VelocityGrid, VelocityProfile};
use vpkit::quadrature::{gagliardo_seminorm_line, homogeneous_seminorm_p2, lp_norm, pv_integral, sobolev_norm, SobolevSpec};
use vpkit::sim::{evolve, exponential_rate, DiagnosticsConfig, SimOptions};
use vpkit::Error;

type Outcome = Result<Vec<(String, bool, String)>, Error>;
type Criterion = (&'static str, fn() -> Outcome);

/// `4 K(sin^2(1/2))`, the pendulum period at amplitude 1.
const PENDULUM: f64 = 6.699_975_664_370_453;
/// Value quoted for the same period in the criterion text.
const PENDULUM_QUOTED: f64 = 6.5960;
/// `T0` of the double Gaussian at `v0 = 3`.
const DG3_T0: f64 = 14.830_195_312_710_067;

fn build(p: NamedProfile, vmax: f64, n: usize) -> VelocityProfile<f64> {
    p.build(VelocityGrid::symmetric(vmax, n).unwrap()).unwrap()
}

fn line(id: &str, ok: bool, detail: String) -> (String, bool, String) {
    (id.to_string(), ok, detail)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn c1() -> Outcome {
    let m = build(NamedProfile::Maxwellian, 8.0, 4096);
    let a = pv_integral(&m.derivative(), 0.0)?;
    let l = build(NamedProfile::Lorentzian, 64.0, 8192);
    let b = pv_integral(&l.derivative(), 0.0)?;
    Ok(vec![line(
        "1",
        (a + 1.0).abs() <= 1e-8 && (b + 1.0).abs() <= 1e-4,
        format!("maxwellian {a:.12} (err {:.1e}), lorentzian {b:.8} (err {:.1e})", (a + 1.0).abs(), (b + 1.0).abs()),
    )])
}

fn c2() -> Outcome {
    let m = critical_period(&build(NamedProfile::Maxwellian, 8.0, 4096))?;
    let dg = NamedProfile::DoubleGaussian { v0: 3.0 };
    let a = critical_period(&build(dg, 16.0, 4096))?.t0;
    let b = critical_period(&build(dg, 16.0, 8192))?.t0;
    let ok = m.t0.is_infinite() && a.is_finite() && rel(a, b) <= 1e-4 && rel(b, DG3_T0) <= 1e-4;
    Ok(vec![line(
        "2",
        ok,
        format!("maxwellian T0 = {}, double gaussian T0 = {a:.10} / {b:.10} (doubling {:.1e}, oracle {:.1e})", m.t0, rel(a, b), rel(b, DG3_T0)),
    )])
}

fn c3() -> Outcome {
    let p = build(NamedProfile::DoubleGaussian { v0: 2.4 }, 12.0, 4096);
    let k = 0.3;
    let root = dispersion_root(&p, k, Complex::new(0.0, 0.5))?;
    let d = ModeInitialData::gaussian(k, p.grid, 1.0, 0.0, 1.0)?;
    let s = linearized_evolve(&p, &d, 0.05, 1200, &EvolveOptions::default())?;
    let (rate, r2, _) = exponential_rate(&s.t, &s.abs(), 20.0, f64::INFINITY)?;
    Ok(vec![line(
        "3",
        rel(rate, root.growth_rate) <= 0.02,
        format!("root rate {:.6}, time-domain rate {rate:.6} (r2 {r2:.6}), rel {:.2e}", root.growth_rate, rel(rate, root.growth_rate)),
    )])
}

fn c4() -> Outcome {
    let p = build(NamedProfile::Maxwellian, 8.0, 2048);
    let d = ModeInitialData::gaussian(0.5, p.grid, 1.0, 0.0, 1.0)?;
    let t = uniform_times(0.01, 8001);
    let a = landau_field(&p, &d, &t, &LandauOptions::default())?;
    let b = linearized_evolve(&p, &d, 0.01, 8000, &EvolveOptions::default())?;
    let sup = b.e.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let err = a.e.iter().zip(&b.e).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / sup;
    Ok(vec![line("4", err <= 1e-3, format!("relative sup difference on [0, 80]: {err:.2e}"))])
}

fn c5() -> Outcome {
    // odd node count puts a node on the kink at 0
    let g = VelocityGrid::<f64>::symmetric(8.0, 2049)?;
    let p = NamedProfile::Maxwellian.build(g)?;
    let t = uniform_times(0.05, 4001);
    let w = fit_decay(&landau_field(&p, &ModeInitialData::weizner(1.0, g, 0.0)?, &t, &LandauOptions::default())?, 20.0, 200.0)?;
    let h = fit_decay(&landau_field(&p, &ModeInitialData::hat(1.0, g, 0.0, 1.0)?, &t, &LandauOptions::default())?, 20.0, 200.0)?;
    Ok(vec![
        line(
            "5a",
            (w.exponent - 3.0).abs() <= 0.3 && w.r_squared >= 0.98,
            format!("weizner exponent {:.4}, r2 {:.5}", w.exponent, w.r_squared),
        ),
        line("5b", (h.exponent - 2.0).abs() <= 0.3, format!("hat exponent {:.4}, r2 {:.5}", h.exponent, h.r_squared)),
    ])
}

fn c6() -> Outcome {
    let ratio = |n: usize, t_max: f64| -> Result<f64, Error> {
        let g = VelocityGrid::symmetric(8.0, n)?;
        let p = NamedProfile::Maxwellian.build(g)?;
        let dt = 0.02;
        let steps = (t_max / dt).round() as usize;
        let (mut series, mut g_norm) = (Vec::new(), 0.0);
        for k in [0.5, 1.0, 1.5] {
            let d = ModeInitialData::gaussian(k, g, 1.0, 0.0, 1.0)?;
            series.push(linearized_evolve(&p, &d, dt, steps, &EvolveOptions::default())?);
            let re = Sampled::new(g, d.g.iter().map(|z| z.re).collect())?;
            g_norm += sobolev_norm(&re, SobolevSpec::h(1.0))?.powi(2);
        }
        Ok(integral_decay_norm(&series, 0.0, 1.0)?.value / g_norm.sqrt())
    };
    let base = ratio(2048, 60.0)?;
    let (t2, n2) = (ratio(2048, 120.0)?, ratio(4096, 60.0)?);
    let ok = rel(t2, base) <= 0.05 && rel(n2, base) <= 0.05;
    Ok(vec![line("6", ok, format!("ratio {base:.8}; doubled t_max {:+.1e}, doubled n_v {:+.1e}", t2 / base - 1.0, n2 / base - 1.0))])
}

/// `(γ/δ) F(v/(γδ))` with `F = e^{-v^2/2}`.
fn bump(grid: VelocityGrid<f64>, gamma: f64, delta: f64) -> Sampled<f64> {
    let w = gamma * delta;
    Sampled::from_fn(grid, move |v: f64| gamma / delta * (-(v / w) * (v / w) / 2.0).exp())
}

fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = x.iter().zip(y).map(|(a, b)| (a.ln(), b.ln())).unzip();
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

fn c7() -> Outcome {
    let mut out = Vec::new();
    let grid = VelocityGrid::symmetric(4.0, 8001)?;
    let h = bump(grid, 0.1, 1.0);
    let l2 = lp_norm(&h.values, grid.dv(), 2.0);
    let exact2 = 0.1f64.powf(1.5) * std::f64::consts::PI.powf(0.25);
    // ‖F‖_3 = (2π/3)^{1/6}; Gagliardo seminorm of F(·/w) scales as w^{1/p - σ}
    let l3 = lp_norm(&h.values, grid.dv(), 3.0);
    let exact3 = 0.1f64.powf(1.0 + 1.0 / 3.0) * (TAU / 3.0).powf(1.0 / 6.0);
    let coarse = VelocityGrid::symmetric(8.0, 1601)?;
    let (gf, gh) = (bump(coarse, 1.0, 1.0), bump(coarse, 0.5, 1.0));
    let (sf, sh) = (
        gagliardo_seminorm_line(&gf.values, coarse.dv(), 0.5, 3.0),
        gagliardo_seminorm_line(&gh.values, coarse.dv(), 0.5, 3.0),
    );
    let pred = 0.5 * 0.5f64.powf(1.0 / 3.0 - 0.5);
    out.push(line(
        "7a",
        (l2 - 0.042069).abs() <= 1e-4 && rel(l2, exact2) <= 1e-10 && rel(l3, exact3) <= 0.01 && rel(sh / sf, pred) <= 0.01,
        format!(
            "L2 {l2:.8} (exact {exact2:.8}), L3 rel {:.1e}, W^(0.5,3) seminorm ratio {:.6} vs {pred:.6}",
            rel(l3, exact3),
            sh / sf
        ),
    ));

    // derivative term: |D|^{s-1} d/dv has symbol i sgn(ξ)|ξ|^s, so its L2 norm is the Ḣ^s seminorm
    let fine = VelocityGrid::symmetric(8.0, 8192)?;
    let gammas = [0.4, 0.2, 0.1, 0.05];
    let mut ok = true;
    let mut detail = Vec::new();
    for s in [0.2, 0.8] {
        let y: Vec<f64> = gammas.iter().map(|&g| homogeneous_seminorm_p2(&bump(fine, g, 1.0), s)).collect();
        let k = slope(&gammas, &y);
        ok &= (k - (1.5 - s)).abs() <= 0.05;
        detail.push(format!("s={s}: slope {k:.4} (target {:.1})", 1.5 - s));
    }
    out.push(line("7b", ok, detail.join(", ")));

    // crossover: H^s distance of the bump to zero as γ shrinks
    let mut detail = Vec::new();
    let mut trend = Vec::new();
    for s in [1.2, 1.8] {
        let y: Vec<f64> = gammas.iter().map(|&g| sobolev_norm(&bump(fine, g, 1.0), SobolevSpec::h(s))).collect::<Result<_, _>>()?;
        let k = slope(&gammas, &y);
        trend.push(k);
        detail.push(format!("s={s}: norms {:.3e}..{:.3e}, slope {k:.3}", y[0], y[y.len() - 1]));
    }
    out.push(line("7c", trend[0] > 0.0 && trend[1] < 0.0, detail.join(", ")));
    Ok(out)
}

fn c8() -> Outcome {
    let p = build(NamedProfile::Maxwellian, 8.0, 4096);
    let mut out = Vec::new();
    for c in [0.0, 1.35] {
        let o = BgkOptions { distance_s: None, ..Default::default() };
        let r = construct_bgk(&p, TAU, c, &o)?;
        let s = r.wave.spec;
        let period_err = rel(s.period, TAU);
        let limit_err = rel(s.small_amplitude_period, s.linear_period);
        let slope_err = rel(-s.h_slope, s.modified_integral);
        let ok = period_err <= 1e-6 && r.vlasov_residual <= 1e-6 && r.poisson_residual <= 1e-6 && limit_err <= 1e-4 && slope_err <= 1e-4;
        out.push(line(
            &format!("8 c={c}"),
            ok,
            format!(
                "{:?}, period rel {period_err:.1e}, residuals {:.1e}/{:.1e}, small-amplitude limit rel {limit_err:.1e}, -h'(0) vs integral rel {slope_err:.1e}",
                s.case, r.vlasov_residual, r.poisson_residual
            ),
        ));
    }
    let o = BgkOptions { epsilon: 1e-2, distance_s: Some(1.2), ..Default::default() };
    let (ok, detail) = match construct_bgk(&p, TAU, 0.0, &o) {
        Ok(r) => (true, format!("distance {:.3e}", r.distance.map(|d| d.total()).unwrap_or(f64::NAN))),
        Err(e) => (false, e.to_string()),
    };
    out.push(line("8 distance", ok, detail));
    Ok(out)
}

fn c9() -> Outcome {
    let t = orbit_period(&|b: f64| -b.sin(), 1.0)?;
    Ok(vec![
        line("9a", (t - PENDULUM).abs() <= 1e-4, format!("period {t:.12}, elliptic oracle {PENDULUM:.12}")),
        line("9b", (t - PENDULUM_QUOTED).abs() <= 1e-4, format!("period {t:.6} against quoted {PENDULUM_QUOTED}")),
    ])
}

fn drift(x: &[f64]) -> f64 {
    x.iter().map(|a| rel(*a, x[0])).fold(0.0, f64::max)
}

fn c10() -> Outcome {
    let mut out = Vec::new();
    let spectral = SimOptions { max_shift_x: f64::INFINITY, ..Default::default() };
    let every = DiagnosticsConfig { stride: 10, ..Default::default() };
    let (dt, steps) = (0.1, (50.0 * TAU / 0.1f64).round() as usize);

    let m = build(NamedProfile::Maxwellian, 8.0, 4096);
    let f = PhaseSpaceField::homogeneous(&m, TAU, 128)?;
    let (_, d) = evolve(&f, dt, steps, &spectral, &every)?;
    let e = d.e_l2.iter().fold(0.0, |a: f64, b| a.max(*b));
    let (dm, de) = (drift(&d.mass), drift(&d.energy));
    out.push(line(
        "10a",
        e <= 1e-12 && dm <= 1e-12 && de <= 1e-6,
        format!("t = {:.1}: max |E| {e:.1e}, mass drift {dm:.1e}, energy drift {de:.1e}", d.t[d.len() - 1]),
    ));

    let c = 1.35;
    let r = construct_bgk(&m, TAU, c, &BgkOptions { distance_s: None, ..Default::default() })?;
    let o = SimOptions { frame_speed: c, ..spectral };
    let (_, d) = evolve(&r.wave.field, dt, steps, &o, &every)?;
    let de = drift(&d.e_l2);
    out.push(line("10b", de <= 0.05, format!("c = {c}: ‖E‖ {:.6e}, max drift {de:.2e} over t = {:.1}", d.e_l2[0], d.t[d.len() - 1])));

    let (k, eps) = (0.5, 1e-3);
    let g = VelocityGrid::symmetric(8.0, 1024)?;
    let m = NamedProfile::Maxwellian.build(g)?;
    let f = PhaseSpaceField::from_fn(TAU / k, 32, g, |x, v| m.eval(v) * (1.0 + eps * (k * x).cos()))?;
    let (_, d) = evolve(&f, 0.1, 600, &spectral, &DiagnosticsConfig { stride: 1, ..Default::default() })?;
    let recurrence = TAU / (k * g.dv());
    let late = d.t.iter().zip(&d.e_mode1).filter(|(t, _)| **t >= 40.0).map(|(_, a)| *a).fold(0.0, f64::max);
    let drop = d.e_mode1[0] / late;
    out.push(line(
        "10c",
        drop >= 10.0 && d.t[d.len() - 1] < recurrence,
        format!("|E_1| {:.2e} -> max {late:.2e} on [40, 60] (drop {drop:.0}x), recurrence at {recurrence:.0}", d.e_mode1[0]),
    ));

    let p = build(NamedProfile::DoubleGaussian { v0: 2.4 }, 10.0, 2048);
    let k = 0.5 * critical_period(&p)?.k_max();
    let root = most_unstable_root(&p, k)?.ok_or_else(|| Error::TargetNotReachable("no growing mode".into()))?;
    let f = PhaseSpaceField::from_fn(TAU / k, 64, p.grid, |x, v| p.eval(v) * (1.0 + 1e-6 * (k * x).cos()))?;
    let (_, d) = evolve(&f, 0.05, 600, &spectral, &DiagnosticsConfig { stride: 1, ..Default::default() })?;
    let (rate, r2, _) = exponential_rate(&d.t, &d.e_mode1, 20.0, 1e-3)?;
    out.push(line(
        "10d",
        rel(rate, root.growth_rate) <= 0.05,
        format!("k = {k:.5}: simulated rate {rate:.6} (r2 {r2:.6}), root {:.6}, rel {:.1e}", root.growth_rate, rel(rate, root.growth_rate)),
    ));
    Ok(out)
}

fn c11() -> Outcome {
    let p = build(NamedProfile::Maxwellian, 8.0, 4096);
    let o = NeighborOptions { bump: BumpFamily::positive_nu(2.0), ..Default::default() };
    let a = match unstable_neighbor(&p, TAU, 1.2, 0.05, &o) {
        Ok(n) => {
            let check = most_unstable_root(&n.profile, 1.0)?;
            let ok = check.is_some_and(|r| r.growth_rate > 0.0) && n.distance.total() < 0.05;
            line("11a", ok, format!("distance {:.3e}, growth rate {:.3e}", n.distance.total(), n.root.growth_rate))
        }
        Err(e) => line("11a", false, e.to_string()),
    };
    let b = match unstable_neighbor(&p, TAU, 1.8, 1e-3, &o) {
        Ok(n) => line("11b", false, format!("unexpectedly reached distance {:.3e}", n.distance.total())),
        Err(e @ Error::TargetNotReachable(_)) => line("11b", true, e.to_string()),
        Err(e) => line("11b", false, e.to_string()),
    };
    Ok(vec![a, b])
}

fn main() {
    let criteria: [Criterion; 11] =
        [("1", c1), ("2", c2), ("3", c3), ("4", c4), ("5", c5), ("6", c6), ("7", c7), ("8", c8), ("9", c9), ("10", c10), ("11", c11)];
    let mut failed = 0;
    for (id, run) in criteria {
        let start = Instant::now();
        let lines = run().unwrap_or_else(|e| vec![line(id, false, format!("error: {e}"))]);
        let secs = start.elapsed().as_secs_f64();
        for (name, ok, detail) in lines {
            failed += usize::from(!ok);
            println!("{} criterion {name}: {detail} [{secs:.1}s]", if ok { "PASS" } else { "FAIL" });
        }
    }
    println!("{failed} failing line(s)");
}
