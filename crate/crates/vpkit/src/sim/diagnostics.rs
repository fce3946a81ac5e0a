use serde::{Deserialize, Serialize};

use super::Simulation;
use crate::error::{Error, Result};
use crate::field::PhaseSpaceField;
use crate::numerics::trapezoid;
use crate::profiles::{Sampled, VelocityProfile};
use crate::quadrature::{sobolev_norm, SobolevSpec};

/// Sharp constant of `ρ <= C ‖f‖_∞^{2/3} (∫ v^2 f dv)^{1/3}` in one velocity dimension.
pub fn density_bound_constant() -> f64 {
    2.0 * 1.5f64.cbrt()
}

/// What to record and how often.
#[derive(Debug, Clone, Default)]
pub struct DiagnosticsConfig {
    pub stride: usize,
    /// Homogeneous state the distance tracker measures against.
    pub reference: Option<VelocityProfile<f64>>,
    /// Smoothness indices of the tracked `L^2_x H^s_v` distances.
    pub distance_s: Vec<f64>,
}

/// Time-aligned diagnostic series.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SimDiagnostics {
    pub t: Vec<f64>,
    pub mass: Vec<f64>,
    pub momentum: Vec<f64>,
    /// `∫∫ v^2 f + ‖E‖^2`.
    pub energy: Vec<f64>,
    pub e_l2: Vec<f64>,
    pub f_l2: Vec<f64>,
    pub distance_s: Vec<f64>,
    /// `distances[j][n]` is the distance at `distance_s[j]` and time `t[n]`.
    pub distances: Vec<Vec<f64>>,
    /// Amplitude of the fundamental Fourier mode of `E`.
    pub e_mode1: Vec<f64>,
    /// `max_x ρ / (C ‖f‖_∞^{2/3} (∫ v^2 f)^{1/3})`; at most 1.
    pub density_bound_ratio: Vec<f64>,
    /// `max(0, -min f) / max f`.
    pub undershoot: Vec<f64>,
    /// Records whose undershoot exceeded `1e-12`.
    pub undershoot_flags: usize,
    pub accuracy_warnings: usize,
}

impl SimDiagnostics {
    pub(super) fn new(cfg: &DiagnosticsConfig) -> Self {
        let distance_s = if cfg.reference.is_some() { cfg.distance_s.clone() } else { Vec::new() };
        let distances = vec![Vec::new(); distance_s.len()];
        SimDiagnostics { distance_s, distances, ..Default::default() }
    }

    pub(super) fn record(&mut self, sim: &Simulation, cfg: &DiagnosticsConfig) -> Result<()> {
        let f = &sim.state;
        let e = sim.field()?;
        let (nx, nv) = (f.nx, f.nv());
        let (dx, dv) = (f.dx(), f.vgrid.dv());
        let v = f.vgrid.nodes();
        let fmax = f.f.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        let fmin = f.f.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        let (mut mass, mut mom, mut kin, mut l2, mut ratio) = (0.0, 0.0, 0.0, 0.0, 0.0f64);
        let cst = density_bound_constant();
        let mut w = vec![0.0; nv];
        for ix in 0..nx {
            let row = f.row(ix);
            let rho = trapezoid(row, dv);
            mass += rho;
            w.iter_mut().zip(row).zip(&v).for_each(|((w, f), v)| *w = v * f);
            mom += trapezoid(&w, dv);
            w.iter_mut().zip(row).zip(&v).for_each(|((w, f), v)| *w = v * v * f);
            let m2 = trapezoid(&w, dv);
            kin += m2;
            w.iter_mut().zip(row).for_each(|(w, f)| *w = f * f);
            l2 += trapezoid(&w, dv);
            if rho > 0.0 {
                ratio = ratio.max(rho / (cst * fmax.powf(2.0 / 3.0) * m2.max(0.0).cbrt()));
            }
        }
        let e2 = e.iter().map(|e| e * e).sum::<f64>() * dx;
        self.t.push(sim.time);
        self.mass.push(mass * dx);
        self.momentum.push(mom * dx);
        self.energy.push(kin * dx + e2);
        self.e_l2.push(e2.sqrt());
        self.f_l2.push((l2 * dx).sqrt());
        self.e_mode1.push(mode_amplitude(&e, 1));
        self.density_bound_ratio.push(ratio);
        let under = (-fmin).max(0.0) / fmax;
        if under > 1e-12 {
            self.undershoot_flags += 1;
        }
        self.undershoot.push(under);
        if let Some(r) = &cfg.reference {
            for (j, &s) in self.distance_s.iter().enumerate() {
                self.distances[j].push(distance_tracker(f, r, s)?);
            }
        }
        Ok(())
    }

    /// `t,mass,momentum,energy,e_l2,f_l2,dist_<s>...,e_mode1,density_bound_ratio,undershoot`.
    pub fn header(&self) -> Vec<String> {
        let mut h: Vec<String> = ["t", "mass", "momentum", "energy", "e_l2", "f_l2"].iter().map(|s| s.to_string()).collect();
        h.extend(self.distance_s.iter().map(|s| format!("dist_{s}")));
        h.extend(["e_mode1", "density_bound_ratio", "undershoot"].iter().map(|s| s.to_string()));
        h
    }

    /// Row `n` in [`header`](Self::header) order.
    pub fn row(&self, n: usize) -> Vec<f64> {
        let mut r = vec![self.t[n], self.mass[n], self.momentum[n], self.energy[n], self.e_l2[n], self.f_l2[n]];
        r.extend(self.distances.iter().map(|d| d[n]));
        r.extend([self.e_mode1[n], self.density_bound_ratio[n], self.undershoot[n]]);
        r
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

/// `|c_m|` where `E = Σ c_m e^{2πimx/T}` summed over `±m`, i.e. the cosine amplitude.
fn mode_amplitude(e: &[f64], m: usize) -> f64 {
    let n = e.len();
    let (mut re, mut im) = (0.0, 0.0);
    for (j, x) in e.iter().enumerate() {
        let th = std::f64::consts::TAU * (m * j) as f64 / n as f64;
        re += x * th.cos();
        im -= x * th.sin();
    }
    2.0 * (re * re + im * im).sqrt() / n as f64
}

/// `(Σ_x Δx ‖f(x, ·) - f0‖^2_{H^s_v})^{1/2}` with the spectral `H^s` norm.
pub fn distance_tracker(state: &PhaseSpaceField<f64>, reference: &VelocityProfile<f64>, s: f64) -> Result<f64> {
    if !(0.0..=4.0).contains(&s) {
        return Err(Error::InvalidSpec(format!("tracked smoothness {s} must lie in [0, 4]")));
    }
    state.vgrid.check_same(&reference.grid)?;
    let mut sum = 0.0;
    for ix in 0..state.nx {
        let d: Vec<f64> = state.row(ix).iter().zip(&reference.values).map(|(a, b)| a - b).collect();
        if d.iter().all(|x| *x == 0.0) {
            continue;
        }
        sum += sobolev_norm(&Sampled::new(state.vgrid, d)?, SobolevSpec::h(s))?.powi(2);
    }
    Ok((sum * state.dx()).sqrt())
}

/// Least-squares slope of `ln a` against `t` over `t >= t_lo`, up to the first
/// sample exceeding `a_hi`. Returns `(rate, r_squared, points)`.
pub fn exponential_rate(t: &[f64], a: &[f64], t_lo: f64, a_hi: f64) -> Result<(f64, f64, usize)> {
    let pts: Vec<(f64, f64)> = t
        .iter()
        .zip(a)
        .skip_while(|(t, _)| **t < t_lo)
        .take_while(|(_, a)| **a <= a_hi)
        .filter(|(_, a)| **a > 0.0)
        .map(|(t, a)| (*t, a.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientPoints(pts.len()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let res: f64 = pts.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2)).sum();
    let r2 = if syy > 0.0 { 1.0 - res / syy } else { 1.0 };
    Ok((slope, r2, pts.len()))
}
