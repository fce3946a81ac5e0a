use std::f64::consts::TAU;
use std::path::Path;

use serde_json::{json, Value};
use vpkit::bgk::{construct_bgk, BgkOptions, BgkResult};
use vpkit::field::PhaseSpaceField;
use vpkit::io::{
    csv_table, diagnostics_csv, fit_json, json_num, nyquist_csv, read_checkpoint, report_json, series_csv, write_atomic, write_bgk,
    write_checkpoint, write_json,
};
use vpkit::landau::{fit_decay, landau_field, linearized_evolve, uniform_times, EvolveOptions, FieldTimeSeries, ModeInitialData};
use vpkit::penrose::{critical_period, most_unstable_root, nyquist};
use vpkit::profiles::{Sampled, VelocityGrid, VelocityProfile};
use vpkit::quadrature::{homogeneous_seminorm_p2, lp_norm, sobolev_norm, SobolevSpec};
use vpkit::sim::{evolve, DiagnosticsConfig, SimOptions};

use crate::config::{DataKind, InitKind, NormMethod, RunConfig};
use crate::svg::{thin, Plot, Series, Style};
use crate::Failure;

const MAX_PLOT_POINTS: usize = 4000;

fn svg(path: &Path, plot: &Plot) -> Result<(), Failure> {
    Ok(write_atomic(path, plot.render().as_bytes())?)
}

pub fn penrose(cfg: &RunConfig, out: &Path) -> Result<(), Failure> {
    let p = cfg.build_profile()?;
    let report = critical_period(&p)?;
    let curve = nyquist(&p)?;
    let mut rep = report_json(&report);
    if !cfg.penrose.k.is_empty() {
        let roots = cfg
            .penrose
            .k
            .iter()
            .map(|&k| {
                Ok(match most_unstable_root(&p, k)? {
                    Some(r) => json!({"k": json_num(k), "growth_rate": json_num(r.growth_rate), "c": [json_num(r.c.re), json_num(r.c.im)]}),
                    None => json!({"k": json_num(k), "growth_rate": json_num(0.0), "c": Value::Null}),
                })
            })
            .collect::<Result<Vec<_>, Failure>>()?;
        rep["roots"] = Value::Array(roots);
    }
    write_json(&out.join("report.json"), &rep)?;
    write_atomic(&out.join("nyquist.csv"), nyquist_csv(&curve).as_bytes())?;
    let pts = curve.z.iter().map(|z| (z.re, z.im)).collect();
    let cross = curve.crossings.iter().map(|c| (c.integral, 0.0)).collect();
    svg(
        &out.join("nyquist.svg"),
        &Plot {
            title: "Nyquist curve Z(ξ + i0)".into(),
            x_label: "Re Z".into(),
            y_label: "Im Z".into(),
            series: vec![Series::new("Z", thin(pts, MAX_PLOT_POINTS), Style::Line), Series::new("real-axis crossings", cross, Style::Markers)],
            ..Default::default()
        },
    )?;
    println!("t0 = {}, unstable intervals: {:?}", report.t0, report.unstable_intervals);
    Ok(())
}

fn mode_data(cfg: &RunConfig, grid: VelocityGrid<f64>) -> Result<ModeInitialData<f64>, Failure> {
    let l = &cfg.landau;
    let d = match l.data {
        DataKind::Gaussian => ModeInitialData::gaussian(l.k, grid, 1.0, l.center, l.width)?,
        DataKind::Weizner => ModeInitialData::weizner(l.k, grid, l.alpha)?,
        DataKind::Hat => ModeInitialData::hat(l.k, grid, l.center, l.width)?,
        DataKind::Zero => ModeInitialData::zero(l.k, grid)?,
    };
    Ok(d.scaled_add(l.amplitude, &d, 0.0)?)
}

fn abs_points(s: &FieldTimeSeries<f64>) -> Vec<(f64, f64)> {
    thin(s.t.iter().zip(&s.e).map(|(t, e)| (*t, e.norm())).collect(), MAX_PLOT_POINTS)
}

pub fn landau(cfg: &RunConfig, out: &Path) -> Result<(), Failure> {
    let l = &cfg.landau;
    if !(l.dt > 0.0 && l.t_max > l.dt) {
        return Err(Failure::Config(format!("need 0 < dt < t_max, got dt = {}, t_max = {}", l.dt, l.t_max)));
    }
    let p = cfg.build_profile()?;
    let data = mode_data(cfg, p.grid)?;
    let n = (l.t_max / l.dt).round() as usize;
    let contour = landau_field(&p, &data, &uniform_times(l.dt, n + 1), &l.contour)?;
    write_atomic(&out.join("contour.csv"), series_csv(&contour).as_bytes())?;

    let mut summary = json!({"k": json_num(l.k), "t_max": json_num(contour.t[n])});
    let fit = fit_decay(&contour, l.window.0, l.window.1);
    summary["fit"] = match &fit {
        Ok(f) => fit_json(f),
        Err(e) => json!({"error": e.to_string()}),
    };
    let mut series = vec![Series::new("contour formula", abs_points(&contour), Style::Line)];
    if l.oracle {
        let o = linearized_evolve(&p, &data, l.dt, n, &EvolveOptions::default())?;
        write_atomic(&out.join("oracle.csv"), series_csv(&o).as_bytes())?;
        let sup = o.e.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let diff = contour.e.iter().zip(&o.e).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        summary["sup_difference"] = json_num(diff);
        summary["relative_sup_difference"] = json_num(if sup > 0.0 { diff / sup } else { diff });
        series.push(Series::new("linearized solver", abs_points(&o), Style::Dashed));
    }
    if let Ok(f) = &fit {
        let line = [f.window.0, f.window.1].iter().map(|&t| (t, f.prefactor * t.powf(-f.exponent))).collect();
        series.push(Series::new(&format!("fit t^-{:.3}", f.exponent), line, Style::Dashed));
        println!("decay exponent {:.4} (r2 {:.5}) on [{}, {}]", f.exponent, f.r_squared, f.window.0, f.window.1);
    }
    write_json(&out.join("fit.json"), &summary)?;
    svg(
        &out.join("decay.svg"),
        &Plot { title: format!("|E_k(t)|, k = {}", l.k), x_label: "t".into(), y_label: "|E|".into(), log_x: true, log_y: true, series },
    )
}

fn bgk_options(cfg: &RunConfig, with_distance: bool) -> Result<BgkOptions, Failure> {
    let b = &cfg.bgk;
    if b.epsilon.is_some() && b.distance_s.is_none() {
        return Err(Failure::Config("bgk.epsilon needs bgk.distance_s".into()));
    }
    Ok(BgkOptions {
        half_width: b.half_width,
        amplitude: b.amplitude,
        gamma: b.gamma,
        nx: cfg.grid.n_x,
        epsilon: if with_distance { b.epsilon.unwrap_or(f64::INFINITY) } else { f64::INFINITY },
        distance_s: if with_distance { b.distance_s } else { None },
        ..Default::default()
    })
}

fn build_bgk(cfg: &RunConfig, p: &VelocityProfile<f64>, with_distance: bool) -> Result<BgkResult, Failure> {
    Ok(construct_bgk(p, cfg.bgk.period, cfg.bgk.speed, &bgk_options(cfg, with_distance)?)?)
}

pub fn bgk(cfg: &RunConfig, out: &Path) -> Result<(), Failure> {
    let p = cfg.build_profile()?;
    let r = build_bgk(cfg, &p, true)?;
    write_bgk(out, &r)?;
    let w = &r.wave;
    svg(
        &out.join("wave.svg"),
        &Plot {
            title: format!("BGK wave, T = {:.6}, c = {}", w.period, w.speed),
            x_label: "x".into(),
            y_label: "β, E".into(),
            series: vec![
                Series::new("potential β", w.x.iter().copied().zip(w.beta.iter().copied()).collect(), Style::Line),
                Series::new("field E", w.x.iter().copied().zip(w.e_field.iter().copied()).collect(), Style::Line),
            ],
            ..Default::default()
        },
    )?;
    println!(
        "{:?}: amplitude {:.4e}, residuals {:.2e} / {:.2e}{}",
        w.spec.case,
        w.amplitude,
        r.vlasov_residual,
        r.poisson_residual,
        r.distance.map(|d| format!(", distance {:.4e}", d.total())).unwrap_or_default()
    );
    Ok(())
}

pub fn simulate(cfg: &RunConfig, out: &Path) -> Result<(), Failure> {
    let s = &cfg.simulate;
    if !(s.k > 0.0) && matches!(s.init, InitKind::Equilibrium | InitKind::Perturbed) {
        return Err(Failure::Config(format!("simulate.k = {} must be positive", s.k)));
    }
    let p = cfg.build_profile()?;
    let nx = cfg.grid.n_x;
    let (state, speed) = match s.init {
        InitKind::Equilibrium => (PhaseSpaceField::homogeneous(&p, TAU / s.k, nx)?, 0.0),
        InitKind::Perturbed => {
            let (k, eps) = (s.k, s.epsilon);
            (PhaseSpaceField::from_fn(TAU / k, nx, p.grid, |x, v| p.eval(v) * (1.0 + eps * (k * x).cos()))?, 0.0)
        }
        InitKind::Bgk => {
            let r = build_bgk(cfg, &p, false)?;
            (r.wave.field, r.wave.speed)
        }
        InitKind::Checkpoint => {
            let dir = s.checkpoint.as_ref().ok_or_else(|| Failure::Config("init = checkpoint needs simulate.checkpoint".into()))?;
            read_checkpoint(dir)?
        }
    };
    let opts = SimOptions {
        coupled: true,
        frame_speed: s.frame_speed.unwrap_or(speed),
        max_shift_x: s.max_shift_x.unwrap_or(f64::INFINITY),
        max_shift_v: s.max_shift_v,
        strict: s.strict,
    };
    let dc = DiagnosticsConfig {
        stride: s.stride.max(1),
        reference: if s.distance_s.is_empty() { None } else { Some(p.clone()) },
        distance_s: s.distance_s.clone(),
    };
    let (fin, d) = evolve(&state, s.dt, s.steps, &opts, &dc)?;
    write_atomic(&out.join("diagnostics.csv"), diagnostics_csv(&d).as_bytes())?;
    let last = d.len() - 1;
    let drift = |x: &[f64]| x.iter().map(|a| (a - x[0]).abs() / x[0].abs()).fold(0.0, f64::max);
    let summary = json!({
        "steps": s.steps,
        "t_final": json_num(d.t[last]),
        "frame_speed": json_num(opts.frame_speed),
        "mass_drift": json_num(drift(&d.mass)),
        "energy_drift": json_num(drift(&d.energy)),
        "e_l2": [json_num(d.e_l2[0]), json_num(d.e_l2[last])],
        "accuracy_warnings": d.accuracy_warnings,
        "undershoot_flags": d.undershoot_flags,
    });
    write_json(&out.join("summary.json"), &summary)?;
    if s.write_final {
        write_checkpoint(&out.join("final"), &fin, opts.frame_speed, d.t[last])?;
    }
    let rel = |x: &[f64]| d.t.iter().zip(x).map(|(t, a)| (*t, (a - x[0]) / x[0].abs())).collect::<Vec<_>>();
    svg(
        &out.join("energy.svg"),
        &Plot {
            title: "conservation".into(),
            x_label: "t".into(),
            y_label: "relative change".into(),
            series: vec![Series::new("energy", rel(&d.energy), Style::Line), Series::new("mass", rel(&d.mass), Style::Dashed)],
            ..Default::default()
        },
    )?;
    let pts = |x: &[f64]| d.t.iter().copied().zip(x.iter().copied()).collect::<Vec<_>>();
    svg(
        &out.join("field.svg"),
        &Plot {
            title: "electric field".into(),
            x_label: "t".into(),
            y_label: "amplitude".into(),
            log_y: true,
            series: vec![Series::new("‖E‖ L2", pts(&d.e_l2), Style::Line), Series::new("first mode", pts(&d.e_mode1), Style::Dashed)],
            ..Default::default()
        },
    )?;
    println!(
        "t = {:.4}: ‖E‖ {:.4e} -> {:.4e}, energy drift {:.2e}, {} accuracy warnings",
        d.t[last], d.e_l2[0], d.e_l2[last], drift(&d.energy), d.accuracy_warnings
    );
    Ok(())
}

fn log_slope(x: &[f64], y: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = x.iter().zip(y).filter(|(a, b)| **a > 0.0 && **b > 0.0).map(|(a, b)| (a.ln(), b.ln())).collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return f64::NAN;
    }
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Norms of the profile, and the scaling sweep of `(γ/δ) F(v/(γδ))`, `F = e^{-v^2/2}`.
pub fn norms(cfg: &RunConfig, out: &Path) -> Result<(), Failure> {
    let n = &cfg.norms;
    let spec = match n.method {
        NormMethod::SpectralP2 if n.p != 2.0 => return Err(Failure::Config(format!("spectral_p2 needs p = 2, got {}", n.p))),
        NormMethod::SpectralP2 => SobolevSpec::h(n.s),
        NormMethod::Gagliardo => SobolevSpec::gagliardo(n.s, n.p),
    };
    spec.validate()?;
    if n.gammas.iter().any(|g| !(*g > 0.0)) || !(n.delta > 0.0) {
        return Err(Failure::Config("norms.gammas and norms.delta must be positive".into()));
    }
    let p = cfg.build_profile()?;
    let dv = p.grid.dv();
    let profile = json!({
        "lp": json_num(lp_norm(&p.values, dv, n.p)),
        "wsp": json_num(sobolev_norm(&p.as_sampled(), spec)?),
    });

    let f_norm = (TAU / n.p).powf(0.5 / n.p);
    let mut rows = Vec::new();
    for &g in &n.gammas {
        let w = g * n.delta;
        let h = Sampled::from_fn(p.grid, |v: f64| g / n.delta * (-(v / w) * (v / w) / 2.0).exp());
        let predicted = g.powf(1.0 + 1.0 / n.p) * n.delta.powf(1.0 / n.p - 1.0) * f_norm;
        rows.push(vec![g, lp_norm(&h.values, dv, n.p), predicted, homogeneous_seminorm_p2(&h, n.s), sobolev_norm(&h, spec)?]);
    }
    let col = |j: usize| rows.iter().map(|r| r[j]).collect::<Vec<f64>>();
    let gammas = col(0);
    let slopes = json!({
        "lp": json_num(log_slope(&gammas, &col(1))),
        "lp_expected": json_num(1.0 + 1.0 / n.p),
        "derivative_term": json_num(log_slope(&gammas, &col(3))),
        "derivative_term_expected": json_num(1.5 - n.s),
        "wsp": json_num(log_slope(&gammas, &col(4))),
    });
    write_atomic(&out.join("scaling.csv"), csv_table(&["gamma", "lp", "lp_predicted", "derivative_term", "wsp"], rows.clone()).as_bytes())?;
    write_json(&out.join("norms.json"), &json!({"profile": profile, "slopes": slopes}))?;
    let pts = |j: usize| gammas.iter().copied().zip(col(j)).collect::<Vec<_>>();
    svg(
        &out.join("scaling.svg"),
        &Plot {
            title: format!("bump norms against γ (δ = {})", n.delta),
            x_label: "γ".into(),
            y_label: "norm".into(),
            log_x: true,
            log_y: true,
            series: vec![
                Series::new("L^p", pts(1), Style::Line),
                Series::new("derivative term", pts(3), Style::Line),
                Series::new(&format!("W^({},{})", n.s, n.p), pts(4), Style::Line),
                Series::new("predicted L^p", pts(2), Style::Markers),
            ],
        },
    )?;
    println!("slopes: {slopes}");
    Ok(())
}
