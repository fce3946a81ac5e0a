use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::orbit::{linear_period, orbit_period, trace_orbit};
use super::split::{energy_split, EnergySplit};
use crate::error::{Error, Result};
use crate::field::PhaseSpaceField;
use crate::numerics::{fd_first, fft_in_place, fft_freqs, Chebyshev};
use crate::profiles::{modified_family_at, rescale_profile, symmetrize_near, BumpFamily, VelocityProfile};
use crate::quadrature::{pv_integral, spectral_derivative_periodic, weighted_distance, Distance, SobolevSpec};

/// Which modification makes `∫ f'/(v - c) dv` equal `(2π/T)^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BgkCase {
    /// Integral below target: add a bump with `∫F'/v > 0`.
    Case1,
    /// Integral above target: add a bump with `∫F'/v < 0`.
    Case2,
    /// Integral on target: rescale `f_δ(u) = f(u/δ)/δ` about `c`.
    Case3,
}

/// Matched orbit parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitSpec {
    /// Right turning point `β_max`, the amplitude parameter.
    pub r: f64,
    pub gamma: f64,
    pub delta: f64,
    pub case: BgkCase,
    pub center: f64,
    pub bump: Option<BumpFamily>,
    /// Orbit period at `r`.
    pub period: f64,
    pub beta_min: f64,
    /// `2π/√(-h'(0))`.
    pub linear_period: f64,
    /// Orbit period at `r/100`.
    pub small_amplitude_period: f64,
    /// `h'(0)`.
    pub h_slope: f64,
    /// `∫ f'_{γ,δ}/(v - c) dv` of the modified profile.
    pub modified_integral: f64,
}

/// `h(β) = ∫ f^β dv - 1` for a modified profile, with `f^β` built from the
/// energy split and (cases 1, 2) the bump `G(y/(γδ)^2)`.
#[derive(Debug, Clone)]
pub struct DensityModel {
    pub split: EnergySplit,
    pub base: VelocityProfile<f64>,
    pub bump: Option<BumpFamily>,
    pub gamma: f64,
    pub delta: f64,
    norm: f64,
    u: Vec<f64>,
    f0: Vec<f64>,
}

impl DensityModel {
    /// `f_{γ,δ} = [f + (γ/δ) F((v - c)/(γδ))]/(1 + C0 γ^2)`; `sym` must be even about `c`.
    pub fn with_bump(sym: &VelocityProfile<f64>, split: EnergySplit, bump: BumpFamily, gamma: f64, delta: f64) -> Result<Self> {
        let base = modified_family_at(sym, &bump, gamma, delta, split.center)?;
        let norm = 1.0 / (1.0 + bump.mass() * gamma * gamma);
        Self::finish(split, base, Some(bump), gamma, delta, norm)
    }

    /// `f_δ(v) = f(c + (v - c)/δ)/δ`.
    pub fn rescaled(sym: &VelocityProfile<f64>, c: f64, half_width: f64, delta: f64) -> Result<Self> {
        let base = rescale_profile(sym, c, delta)?;
        let split = energy_split(&base, c, half_width * delta.min(1.0))?;
        Self::finish(split, base, None, 0.0, delta, 1.0)
    }

    fn finish(split: EnergySplit, base: VelocityProfile<f64>, bump: Option<BumpFamily>, gamma: f64, delta: f64, norm: f64) -> Result<Self> {
        let u: Vec<f64> = base.grid.nodes().iter().map(|v| v - split.center).collect();
        let mut m = DensityModel { split, base, bump, gamma, delta, norm, u, f0: Vec::new() };
        m.f0 = m.u.iter().map(|&u| m.f_beta(u, 0.0)).collect::<Result<_>>()?;
        Ok(m)
    }

    /// Steady distribution at co-moving velocity `u` where the potential is `β`.
    pub fn f_beta(&self, u: f64, beta: f64) -> Result<f64> {
        let y = u * u - 2.0 * beta;
        let mut v = self.split.g(u > 0.0, y)?;
        if let Some(b) = self.bump {
            let w = self.gamma * self.delta;
            v += self.gamma / self.delta * b.eval_sq(y / (w * w));
        }
        Ok(self.norm * v)
    }

    /// One row of `f(x, ·)` on the lab grid at potential `β`.
    pub fn row(&self, beta: f64) -> Result<Vec<f64>> {
        self.u
            .iter()
            .zip(&self.f0)
            .zip(&self.base.values)
            .map(|((&u, &f0), &b)| Ok(b + self.f_beta(u, beta)? - f0))
            .collect()
    }

    /// `h(β)`; `h(0)` is the discrete mass defect of the modified profile.
    pub fn h(&self, beta: f64) -> Result<f64> {
        let n = self.u.len();
        let mut acc = 0.0;
        for i in 0..n {
            let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            acc += w * (self.f_beta(self.u[i], beta)? - self.f0[i]);
        }
        Ok(acc * self.base.grid.dv() + self.base.mass - 1.0)
    }

    /// Chebyshev proxy of `h` on `[-reach, reach]`, with `reach` capped by the
    /// trusted range of the split. `NaN` outside.
    pub fn proxy(&self, reach: f64, nodes: usize) -> Result<impl Fn(f64) -> f64> {
        let reach = reach.min(-0.5 * self.split.y_min() * 0.999);
        let vals: Vec<f64> = {
            let pi = std::f64::consts::PI;
            (0..nodes)
                .into_par_iter()
                .map(|k| self.h(reach * (pi * (k as f64 + 0.5) / nodes as f64).cos()))
                .collect::<Result<_>>()?
        };
        let mut it = vals.into_iter();
        let cheb = Chebyshev::fit(|_| it.next().unwrap(), -reach, reach, nodes);
        Ok(move |b: f64| if b.abs() <= reach { cheb.eval(b) } else { f64::NAN })
    }
}

/// `∫ f^β dv - 1`.
pub fn density_response(model: &DensityModel, beta: f64) -> Result<f64> {
    model.h(beta)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BgkOptions {
    /// Half width `a` of the symmetrization plateau: the profile is made even
    /// on `|v - c| <= 2a` and the energy split uses the even branch below `a^2`.
    pub half_width: f64,
    /// `β_max`, capped at `amplitude_ratio (γδ)^2` when a bump is used.
    pub amplitude: f64,
    pub amplitude_ratio: f64,
    /// `γ`; derived from the target wave number when absent.
    pub gamma: Option<f64>,
    pub bump_case1: BumpFamily,
    pub bump_case2: BumpFamily,
    pub nx: usize,
    pub substeps: usize,
    pub proxy_nodes: usize,
    /// Relative period tolerance of the δ bisection.
    pub period_tol: f64,
    /// Case-3 detection tolerance on `|∫f'/(v-c) - k^2|`.
    pub case3_tol: f64,
    /// Requested triple distance to the input profile; `∞` disables the search.
    pub epsilon: f64,
    /// Sobolev order of the distance.
    pub distance_s: Option<f64>,
    /// `γ` ladder ratio and stopping resolution (bump width in grid cells)
    /// when searching for `epsilon`.
    pub gamma_ratio: f64,
    pub min_cells: f64,
}

impl Default for BgkOptions {
    fn default() -> Self {
        BgkOptions {
            half_width: 1.0,
            amplitude: 1e-2,
            amplitude_ratio: 0.15,
            gamma: None,
            bump_case1: BumpFamily::positive_nu(2.0),
            bump_case2: BumpFamily::negative_nu(),
            nx: 128,
            substeps: 64,
            proxy_nodes: 48,
            period_tol: 1e-10,
            case3_tol: 1e-8,
            epsilon: f64::INFINITY,
            distance_s: Some(1.2),
            gamma_ratio: 0.7,
            min_cells: 4.0,
        }
    }
}

fn model_for(sym: &VelocityProfile<f64>, split: &EnergySplit, case: BgkCase, bump: BumpFamily, gamma: f64, delta: f64, opts: &BgkOptions) -> Result<DensityModel> {
    match case {
        BgkCase::Case3 => DensityModel::rescaled(sym, split.center, opts.half_width, delta),
        _ => DensityModel::with_bump(sym, split.clone(), bump, gamma, delta),
    }
}

fn period_of(model: &DensityModel, amplitude: f64, opts: &BgkOptions) -> Result<f64> {
    let h = model.proxy(3.0 * amplitude, opts.proxy_nodes)?;
    orbit_period(&h, amplitude)
}

/// Picks the case from `∫ f'/(v - c) dv` against `(2π/T)^2` and bisects on `δ`
/// until the orbit of amplitude `opts.amplitude` (capped, see [`BgkOptions`]) has
/// period `period`.
/// `sym` must be even about `c` on `|v - c| <= 2 half_width`.
pub fn match_period(sym: &VelocityProfile<f64>, c: f64, period: f64, opts: &BgkOptions) -> Result<(OrbitSpec, DensityModel)> {
    if !(period > 0.0) {
        return Err(Error::InvalidSpec(format!("period {period} must be positive")));
    }
    let k2 = (std::f64::consts::TAU / period).powi(2);
    let i0 = pv_integral(&sym.derivative(), c)?;
    let split = energy_split(sym, c, opts.half_width)?;
    let (case, bump) = if (i0 - k2).abs() < opts.case3_tol {
        (BgkCase::Case3, opts.bump_case1)
    } else if i0 < k2 {
        (BgkCase::Case1, opts.bump_case1)
    } else {
        (BgkCase::Case2, opts.bump_case2)
    };
    let (c0, i_f) = (bump.mass(), bump.pv_weight());
    if case == BgkCase::Case1 && !(i_f > 0.0) || case == BgkCase::Case2 && !(i_f < 0.0) {
        return Err(Error::InvalidSpec(format!("bump {bump:?} has the wrong sign of ∫F'/v for {case:?}")));
    }
    let gamma = match case {
        BgkCase::Case3 => 0.0,
        BgkCase::Case1 => opts.gamma.unwrap_or_else(|| ((k2 - i0) / (3.0 * k2 * c0)).sqrt()),
        BgkCase::Case2 => opts.gamma.unwrap_or_else(|| ((i0 - k2) / (2.0 * k2 * c0)).sqrt()),
    };
    // small-amplitude estimate of δ
    let d_star = match case {
        BgkCase::Case3 => 1.0,
        _ => {
            let den = k2 * (1.0 + c0 * gamma * gamma) - i0;
            let d2 = i_f / den;
            if !(d2 > 0.0) {
                return Err(Error::BracketNotFound(format!("no δ balances the integral (γ = {gamma})")));
            }
            d2.sqrt()
        }
    };
    // keep trapped energies well inside the bump's scale: 2β_max stays a
    // fraction of (γδ)^2
    let amplitude = match case {
        BgkCase::Case3 => opts.amplitude,
        _ => opts.amplitude.min(opts.amplitude_ratio * (gamma * d_star).powi(2)),
    };
    let eval = |delta: f64| -> Option<(f64, DensityModel)> {
        let m = model_for(sym, &split, case, bump, gamma, delta, opts).ok()?;
        let t = period_of(&m, amplitude, opts).ok()?;
        Some((t - period, m))
    };
    let (mut lo, mut hi) = (0.9 * d_star, 1.1 * d_star);
    let mut bracket = None;
    for _ in 0..8 {
        if let (Some((a, _)), Some((b, _))) = (eval(lo), eval(hi)) {
            if a * b <= 0.0 {
                bracket = Some((a, b));
                break;
            }
        }
        lo /= 1.25;
        hi *= 1.25;
    }
    let (mut flo, _) = bracket.ok_or_else(|| {
        Error::BracketNotFound(format!("period {period} not bracketed near δ = {d_star:e} ({case:?}, γ = {gamma:e})"))
    })?;
    let mut best = None;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let (fm, m) = eval(mid).ok_or_else(|| Error::BracketNotFound(format!("orbit lost at δ = {mid:e}")))?;
        let done = fm.abs() <= opts.period_tol * period || (hi - lo) <= 1e-15 * mid;
        best = Some((mid, fm, m));
        if done {
            break;
        }
        if fm * flo > 0.0 {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    let (delta, fm, model) = best.unwrap();
    let h = model.proxy(3.0 * amplitude, opts.proxy_nodes)?;
    let (beta_min, _) = super::orbit::turning_points(&h, amplitude)?;
    let eps = 0.01 * amplitude;
    let spec = OrbitSpec {
        r: amplitude,
        gamma,
        delta,
        case,
        center: c,
        bump: if case == BgkCase::Case3 { None } else { Some(bump) },
        period: period + fm,
        beta_min,
        linear_period: linear_period(&h, eps)?,
        small_amplitude_period: orbit_period(&h, eps)?,
        h_slope: super::orbit::center_slope(&h, eps),
        modified_integral: pv_integral(&model.base.derivative(), c)?,
    };
    Ok((spec, model))
}

/// Travelling BGK wave on one period, in the lab velocity frame at `t = 0`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BgkWave {
    pub x: Vec<f64>,
    pub beta: Vec<f64>,
    pub e_field: Vec<f64>,
    pub field: PhaseSpaceField<f64>,
    pub period: f64,
    pub speed: f64,
    /// `max β - min β`.
    pub amplitude: f64,
    /// `‖β‖_{H^2(0, T)}`.
    pub h2_norm: f64,
    pub spec: OrbitSpec,
}

/// Integrates the orbit over one period and fills `f(x, v)`.
pub fn assemble_bgk(spec: &OrbitSpec, model: &DensityModel, period: f64, opts: &BgkOptions) -> Result<BgkWave> {
    let h = model.proxy(3.0 * spec.r, opts.proxy_nodes)?;
    let nx = opts.nx;
    let (beta, _) = trace_orbit(&h, spec.r, spec.period, nx, opts.substeps);
    if beta.iter().any(|b| !b.is_finite()) {
        return Err(Error::OrbitEscapesWell("orbit left the tabulated range".into()));
    }
    let bx = spectral_derivative_periodic(&beta, period);
    let bxx = spectral_derivative_periodic(&bx, period);
    let e_field: Vec<f64> = bx.iter().map(|d| -d).collect();
    let rows: Vec<Vec<f64>> = beta.par_iter().map(|&b| model.row(b)).collect::<Result<_>>()?;
    let fmax = model.base.max_value();
    let mut f = Vec::with_capacity(nx * model.base.grid.n);
    for row in rows {
        for v in row {
            if v < -1e-13 * fmax {
                return Err(Error::PositivityViolated(v));
            }
            f.push(v.max(0.0));
        }
    }
    let field = PhaseSpaceField::new(period, nx, model.base.grid, f)?;
    let dx = period / nx as f64;
    let h2 = (beta.iter().zip(&bx).zip(&bxx).map(|((a, b), c)| a * a + b * b + c * c).sum::<f64>() * dx).sqrt();
    let (bmin, bmax) = beta.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    Ok(BgkWave {
        x: (0..nx).map(|i| i as f64 * dx).collect(),
        beta,
        e_field,
        field,
        period,
        speed: spec.center,
        amplitude: bmax - bmin,
        h2_norm: h2,
        spec: *spec,
    })
}

impl BgkWave {
    /// Zeros of `E` over the stored range, counted as sign changes of `E`
    /// resampled half a cell off the grid (the grid holds the exact zeros).
    pub fn e_zero_count(&self) -> usize {
        let n = self.e_field.len();
        let mut c: Vec<Complex<f64>> = self.e_field.iter().map(|&e| Complex::new(e, 0.0)).collect();
        fft_in_place(&mut c, false);
        let dx = self.period / n as f64;
        for (z, k) in c.iter_mut().zip(fft_freqs(n, dx)) {
            *z *= Complex::from_polar(1.0 / n as f64, 0.5 * k * dx);
        }
        if n.is_multiple_of(2) {
            c[n / 2] = Complex::new(0.0, 0.0);
        }
        fft_in_place(&mut c, true);
        (0..n).filter(|&i| c[i].re * c[(i + 1) % n].re < 0.0).count()
    }

    /// `m` periods side by side.
    pub fn tiled(&self, m: usize) -> Self {
        let rep = |v: &Vec<f64>| v.iter().cycle().take(v.len() * m).copied().collect::<Vec<_>>();
        let period = self.period * m as f64;
        let nx = self.x.len() * m;
        BgkWave {
            x: (0..nx).map(|i| i as f64 * period / nx as f64).collect(),
            beta: rep(&self.beta),
            e_field: rep(&self.e_field),
            field: self.field.tiled(m),
            period,
            ..self.clone()
        }
    }

    /// Mean of `E` over the stored range.
    pub fn e_mean(&self) -> f64 {
        self.e_field.iter().sum::<f64>() / self.e_field.len() as f64
    }
}

/// Discrete `L^2` norms of `(v - c) f_x - E f_v` and of `E_x + ∫ f dv - 1`.
pub fn verify_steady(field: &PhaseSpaceField<f64>, e: &[f64], c: f64) -> Result<(f64, f64)> {
    if e.len() != field.nx {
        return Err(Error::GridMismatch(format!("{} field values for {} x nodes", e.len(), field.nx)));
    }
    let (nx, nv) = (field.nx, field.nv());
    let (dx, dv) = (field.dx(), field.vgrid.dv());
    let fx_cols: Vec<Vec<f64>> = (0..nv)
        .into_par_iter()
        .map(|iv| {
            let col: Vec<f64> = (0..nx).map(|ix| field.at(ix, iv)).collect();
            spectral_derivative_periodic(&col, field.period)
        })
        .collect();
    let vlasov: f64 = (0..nx)
        .into_par_iter()
        .map(|ix| {
            let fv = fd_first(field.row(ix), dv);
            (0..nv)
                .map(|iv| {
                    let r = (field.vgrid.node(iv) - c) * fx_cols[iv][ix] - e[ix] * fv[iv];
                    r * r
                })
                .sum::<f64>()
        })
        .sum();
    let ex = spectral_derivative_periodic(e, field.period);
    let rho = field.density();
    let poisson: f64 = ex.iter().zip(&rho).map(|(a, r)| (a + r - 1.0).powi(2)).sum();
    Ok(((vlasov * dx * dv).sqrt(), (poisson * dx).sqrt()))
}

/// Full construction result.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BgkResult {
    pub wave: BgkWave,
    pub vlasov_residual: f64,
    pub poisson_residual: f64,
    /// Distance of the wave to the input profile, if requested.
    pub distance: Option<Distance<f64>>,
    /// Every `γ` tried and its total distance.
    pub ladder: Vec<(f64, f64)>,
}

/// Symmetrizes `profile` near `c`, matches the period, assembles and verifies.
///
/// With a finite `opts.epsilon`, `γ` is shrunk geometrically from its default
/// until the triple distance (order `opts.distance_s`) to `profile` falls below
/// `epsilon` or the bump reaches the grid resolution; in the latter case the
/// result is [`Error::TargetNotReachable`] carrying the best distance reached.
pub fn construct_bgk(profile: &VelocityProfile<f64>, period: f64, c: f64, opts: &BgkOptions) -> Result<BgkResult> {
    let sym = symmetrize_near(profile, c, 2.0 * opts.half_width)?;
    let build = |o: &BgkOptions| -> Result<BgkResult> {
        let (spec, model) = match_period(&sym, c, period, o)?;
        let wave = assemble_bgk(&spec, &model, period, o)?;
        let (vr, pr) = verify_steady(&wave.field, &wave.e_field, c)?;
        let distance = match o.distance_s {
            Some(s) => Some(weighted_distance(&wave.field, profile, SobolevSpec::h(s))?),
            None => None,
        };
        Ok(BgkResult { wave, vlasov_residual: vr, poisson_residual: pr, distance, ladder: Vec::new() })
    };
    let first = build(opts)?;
    if opts.epsilon.is_infinite() {
        return Ok(first);
    }
    let s = opts.distance_s.ok_or_else(|| Error::InvalidSpec("epsilon needs distance_s".into()))?;
    let total = |r: &BgkResult| r.distance.map(|d| d.total()).unwrap_or(f64::INFINITY);
    let mut ladder = vec![(first.wave.spec.gamma, total(&first))];
    let mut best = first;
    let dv = profile.grid.dv();
    let mut gamma = best.wave.spec.gamma;
    while total(&best) >= opts.epsilon && best.wave.spec.case != BgkCase::Case3 {
        gamma *= opts.gamma_ratio;
        let o = BgkOptions { gamma: Some(gamma), ..opts.clone() };
        match build(&o) {
            Ok(r) => {
                ladder.push((gamma, total(&r)));
                let width = r.wave.spec.gamma * r.wave.spec.delta;
                if total(&r) < total(&best) {
                    best = r;
                }
                if width < opts.min_cells * dv {
                    break;
                }
            }
            Err(Error::UnresolvedBump { .. }) | Err(Error::BracketNotFound(_)) | Err(Error::PositivityViolated(_)) => break,
            Err(e) => return Err(e),
        }
    }
    best.ladder = ladder;
    if total(&best) < opts.epsilon {
        Ok(best)
    } else {
        Err(Error::TargetNotReachable(format!(
            "best distance {:.4e} (order {s}) at γ = {:.4e} is above ε = {:.1e}",
            total(&best),
            best.wave.spec.gamma,
            opts.epsilon
        )))
    }
}
