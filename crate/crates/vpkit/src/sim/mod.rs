//! Nonlinear Vlasov–Poisson evolution by Strang splitting.

mod diagnostics;

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PhaseSpaceField;

pub use diagnostics::{density_bound_constant, distance_tracker, exponential_rate, DiagnosticsConfig, SimDiagnostics};

/// Relative neutrality tolerance accepted by [`poisson_solve`].
pub const NEUTRALITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimOptions {
    /// With `false` the field is never applied: free streaming.
    pub coupled: bool,
    /// Travelling-wave speed subtracted from `v` in the `x` advection.
    pub frame_speed: f64,
    /// Warning level for `dt max|v - c| / dx`.
    pub max_shift_x: f64,
    /// Warning level for `dt max|E| / dv`.
    pub max_shift_v: f64,
    /// Turn accuracy warnings into `AccuracyBoundExceeded` errors.
    pub strict: bool,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions { coupled: true, frame_speed: 0.0, max_shift_x: 2.0, max_shift_v: 2.0, strict: false }
    }
}

/// Zero-mean periodic `E` with `E_x = 1 - ρ`, by spectral antiderivative.
pub fn poisson_solve(f: &PhaseSpaceField<f64>) -> Result<Vec<f64>> {
    let rho = f.density();
    let mean = rho.iter().sum::<f64>() / f.nx as f64;
    if !((mean - 1.0).abs() <= NEUTRALITY_TOL) {
        return Err(Error::NeutralityViolated(mean - 1.0));
    }
    let mut planner = FftPlanner::new();
    Ok(field_from_density(&rho, f.period, &*planner.plan_fft_forward(f.nx), &*planner.plan_fft_inverse(f.nx)))
}

fn field_from_density(rho: &[f64], period: f64, fwd: &dyn Fft<f64>, inv: &dyn Fft<f64>) -> Vec<f64> {
    let n = rho.len();
    let mut s: Vec<Complex<f64>> = rho.iter().map(|r| Complex::new(1.0 - r, 0.0)).collect();
    fwd.process(&mut s);
    s[0] = Complex::new(0.0, 0.0);
    for (j, z) in s.iter_mut().enumerate().skip(1) {
        if 2 * j == n {
            // the Nyquist antiderivative is not real; drop it
            *z = Complex::new(0.0, 0.0);
            continue;
        }
        let m = if j <= n / 2 { j as f64 } else { j as f64 - n as f64 };
        let k = std::f64::consts::TAU * m / period;
        *z /= Complex::new(0.0, k);
    }
    inv.process(&mut s);
    s.iter().map(|z| z.re / n as f64).collect()
}

/// Owns a state and the transforms needed to advance it.
pub struct Simulation {
    pub state: PhaseSpaceField<f64>,
    pub time: f64,
    pub opts: SimOptions,
    /// Steps on which an accuracy bound was exceeded.
    pub warnings: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    kx: Vec<f64>,
    buf: Vec<Complex<f64>>,
    row: Vec<f64>,
    e: Vec<f64>,
    /// `e^{-ik_j (v - c) τ}` for `j <= nx/2`, per velocity node, with its `τ`.
    phases: Option<(f64, Vec<Complex<f64>>)>,
}

impl std::fmt::Debug for Simulation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Simulation").field("time", &self.time).field("opts", &self.opts).finish_non_exhaustive()
    }
}

impl Simulation {
    pub fn new(state: PhaseSpaceField<f64>, opts: SimOptions) -> Result<Self> {
        if state.nv() < 6 {
            return Err(Error::InvalidGrid("velocity interpolation needs at least six nodes".into()));
        }
        let nx = state.nx;
        let mut planner = FftPlanner::new();
        let (fwd, inv) = (planner.plan_fft_forward(nx), planner.plan_fft_inverse(nx));
        let kx = (0..nx)
            .map(|j| {
                let m = if j <= nx / 2 { j as f64 } else { j as f64 - nx as f64 };
                std::f64::consts::TAU * m / state.period
            })
            .collect();
        let e = vec![0.0; nx];
        let (buf, row) = (vec![Complex::new(0.0, 0.0); nx * state.nv().div_ceil(2)], vec![0.0; state.nv()]);
        let mut sim = Simulation { state, time: 0.0, opts, warnings: 0, fwd, inv, kx, buf, row, e, phases: None };
        sim.e = sim.field()?;
        Ok(sim)
    }

    /// Self-consistent field of the current state (zero when uncoupled).
    pub fn field(&self) -> Result<Vec<f64>> {
        if !self.opts.coupled {
            return Ok(vec![0.0; self.state.nx]);
        }
        let rho = self.state.density();
        let mean = rho.iter().sum::<f64>() / rho.len() as f64;
        if !((mean - 1.0).abs() <= NEUTRALITY_TOL) {
            return Err(Error::NeutralityViolated(mean - 1.0));
        }
        Ok(field_from_density(&rho, self.state.period, &*self.fwd, &*self.inv))
    }

    /// Field used in the last velocity advection.
    pub fn last_field(&self) -> &[f64] {
        &self.e
    }

    /// Half `x` advection, field solve, full `v` advection, half `x` advection.
    pub fn step(&mut self, dt: f64) -> Result<()> {
        if dt == 0.0 {
            return Ok(());
        }
        if !dt.is_finite() {
            return Err(Error::InvalidSpec(format!("time step {dt}")));
        }
        let g = self.state.vgrid;
        let vmax = (g.v_min - self.opts.frame_speed).abs().max((g.v_max - self.opts.frame_speed).abs());
        let cx = dt.abs() * vmax / self.state.dx();
        if cx > self.opts.max_shift_x {
            self.flag(format!("dt max|v - c| / dx = {cx:.3}"))?;
        }
        self.advect_x(0.5 * dt);
        self.e = self.field()?;
        let emax = self.e.iter().fold(0.0f64, |a, e| a.max(e.abs()));
        let cv = dt.abs() * emax / g.dv();
        if cv > self.opts.max_shift_v {
            self.flag(format!("dt max|E| / dv = {cv:.3}"))?;
        }
        if self.opts.coupled {
            self.advect_v(dt);
        }
        self.advect_x(0.5 * dt);
        self.time += dt;
        Ok(())
    }

    fn flag(&mut self, what: String) -> Result<()> {
        if self.opts.strict {
            return Err(Error::AccuracyBoundExceeded(what));
        }
        if self.warnings == 0 {
            log::warn!("accuracy bound exceeded: {what}");
        }
        self.warnings += 1;
        Ok(())
    }

    /// `f(x, v) <- f(x - (v - c) dt, v)`, spectrally, two real columns per complex transform.
    fn advect_x(&mut self, dt: f64) {
        let (nx, nv) = (self.state.nx, self.state.nv());
        let pairs = nv.div_ceil(2);
        let f = &mut self.state.f;
        for p in 0..pairs {
            let (a, b) = (2 * p, 2 * p + 1);
            let col = &mut self.buf[p * nx..(p + 1) * nx];
            for (ix, z) in col.iter_mut().enumerate() {
                let im = if b < nv { f[ix * nv + b] } else { 0.0 };
                *z = Complex::new(f[ix * nv + a], im);
            }
        }
        self.fwd.process(&mut self.buf);
        let half = nx / 2 + 1;
        if self.phases.as_ref().is_none_or(|(tau, _)| *tau != dt) {
            let (c, g, kx) = (self.opts.frame_speed, self.state.vgrid, &self.kx);
            let mut tab = Vec::with_capacity(nv * half);
            for iv in 0..nv {
                let s = (g.node(iv) - c) * dt;
                for (j, &kj) in kx.iter().enumerate().take(half) {
                    let z = Complex::from_polar(1.0, -kj * s);
                    // self-conjugate modes keep only the real part so real data stays real
                    tab.push(if (nx - j) % nx == j { Complex::new(z.re, 0.0) } else { z });
                }
            }
            self.phases = Some((dt, tab));
        }
        let tab = &self.phases.as_ref().unwrap().1;
        let half_i = Complex::new(0.0, -0.5);
        let i = Complex::new(0.0, 1.0);
        for p in 0..pairs {
            let ta = &tab[2 * p * half..(2 * p + 1) * half];
            let tb = if 2 * p + 1 < nv { &tab[(2 * p + 1) * half..(2 * p + 2) * half] } else { ta };
            let col = &mut self.buf[p * nx..(p + 1) * nx];
            // the packed transform is A + iB with A, B the transforms of the two real columns
            for j in 0..half {
                let jm = (nx - j) % nx;
                let (zj, zm) = (col[j], col[jm].conj());
                let (fa, fb) = (0.5 * (zj + zm), half_i * (zj - zm));
                col[j] = fa * ta[j] + i * fb * tb[j];
                if jm != j {
                    col[jm] = fa.conj() * ta[j].conj() + i * fb.conj() * tb[j].conj();
                }
            }
        }
        self.inv.process(&mut self.buf);
        let scale = 1.0 / nx as f64;
        for p in 0..pairs {
            let (a, b) = (2 * p, 2 * p + 1);
            let col = &self.buf[p * nx..(p + 1) * nx];
            for (ix, z) in col.iter().enumerate() {
                f[ix * nv + a] = z.re * scale;
                if b < nv {
                    f[ix * nv + b] = z.im * scale;
                }
            }
        }
    }

    /// `f(x, v) <- f(x, v + E(x) dt)`, six-point Lagrange, zero inflow.
    fn advect_v(&mut self, dt: f64) {
        let nv = self.state.nv();
        let dv = self.state.vgrid.dv();
        for ix in 0..self.state.nx {
            let s = self.e[ix] * dt / dv;
            if s == 0.0 {
                continue;
            }
            let m = s.floor();
            let w = lagrange_weights(s - m);
            let m = m as isize - 2;
            let row = self.state.row_mut(ix);
            self.row.copy_from_slice(row);
            for (i, out) in row.iter_mut().enumerate() {
                let base = i as isize + m;
                let mut acc = 0.0;
                for (j, wj) in w.iter().enumerate() {
                    let q = base + j as isize;
                    if q >= 0 && (q as usize) < nv {
                        acc += wj * self.row[q as usize];
                    }
                }
                *out = acc;
            }
        }
    }
}

/// Weights of the nodes at offsets `-2..=3` for a point `t ∈ [0, 1)` past node 0.
fn lagrange_weights(t: f64) -> [f64; 6] {
    let mut w = [0.0; 6];
    for (j, wj) in w.iter_mut().enumerate() {
        let xj = j as f64 - 2.0;
        let mut acc = 1.0;
        for m in 0..6 {
            if m != j {
                let xm = m as f64 - 2.0;
                acc *= (t - xm) / (xj - xm);
            }
        }
        *wj = acc;
    }
    w
}

/// One step from a fresh [`Simulation`].
pub fn step(state: &PhaseSpaceField<f64>, dt: f64, opts: &SimOptions) -> Result<PhaseSpaceField<f64>> {
    let mut sim = Simulation::new(state.clone(), *opts)?;
    sim.step(dt)?;
    Ok(sim.state)
}

/// `n_steps` steps of size `dt`, with diagnostics every `diag.stride` steps and at the end.
pub fn evolve(
    state: &PhaseSpaceField<f64>,
    dt: f64,
    n_steps: usize,
    opts: &SimOptions,
    diag: &DiagnosticsConfig,
) -> Result<(PhaseSpaceField<f64>, SimDiagnostics)> {
    let mut sim = Simulation::new(state.clone(), *opts)?;
    let mut out = SimDiagnostics::new(diag);
    let stride = diag.stride.max(1);
    out.record(&sim, diag)?;
    for n in 1..=n_steps {
        sim.step(dt)?;
        if n % stride == 0 || n == n_steps {
            out.record(&sim, diag)?;
        }
    }
    out.accuracy_warnings = sim.warnings;
    Ok((sim.state, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{NamedProfile, VelocityGrid, VelocityProfile};
    use crate::quadrature::{sobolev_norm, SobolevSpec};
    use std::f64::consts::TAU;

    fn maxwellian(n: usize) -> VelocityProfile<f64> {
        NamedProfile::Maxwellian.build(VelocityGrid::<f64>::symmetric(8.0, n).unwrap()).unwrap()
    }

    fn perturbed(p: &VelocityProfile<f64>, k: f64, eps: f64, nx: usize) -> PhaseSpaceField<f64> {
        PhaseSpaceField::from_fn(TAU / k, nx, p.grid, |x, v| p.eval(v) * (1.0 + eps * (k * x).cos())).unwrap()
    }

    fn density_mode(f: &PhaseSpaceField<f64>) -> f64 {
        let rho = f.density();
        let n = rho.len() as f64;
        let (re, im) = rho.iter().enumerate().fold((0.0, 0.0), |(a, b), (j, r)| {
            let th = TAU * j as f64 / n;
            (a + r * th.cos(), b - r * th.sin())
        });
        (re * re + im * im).sqrt() / n
    }

    #[test]
    fn poisson_cosine_density() {
        let p = maxwellian(512);
        let (k, eps) = (0.5, 0.05);
        let f = perturbed(&p, k, eps, 32);
        let e = poisson_solve(&f).unwrap();
        let rho0 = p.as_sampled().integral();
        for (ix, e) in e.iter().enumerate() {
            let x = f.x(ix);
            assert!((e + eps * rho0 / k * (k * x).sin()).abs() < 1e-12);
        }
        assert!(e.iter().sum::<f64>().abs() / 32.0 < 1e-14);
        let h = PhaseSpaceField::homogeneous(&p, TAU, 16).unwrap();
        assert!(poisson_solve(&h).unwrap().iter().all(|e| e.abs() < 1e-14));
    }

    #[test]
    fn neutrality_violation() {
        let p = maxwellian(256);
        let f = PhaseSpaceField::from_fn(TAU, 8, p.grid, |_, v| 1.1 * p.eval(v)).unwrap();
        assert!(matches!(poisson_solve(&f), Err(Error::NeutralityViolated(_))));
    }

    #[test]
    fn free_streaming_single_mode_is_exact() {
        let p = maxwellian(256);
        let k = 0.5;
        let f = perturbed(&p, k, 0.1, 16);
        let o = SimOptions { coupled: false, max_shift_x: f64::INFINITY, ..Default::default() };
        let dt = 0.37;
        let g = step(&f, dt, &o).unwrap();
        for ix in 0..16 {
            for iv in (0..256).step_by(7) {
                let (x, v) = (f.x(ix), p.grid.node(iv));
                let exact = p.values[iv] * (1.0 + 0.1 * (k * (x - v * dt)).cos());
                assert!((g.at(ix, iv) - exact).abs() < 1e-12);
            }
        }
        assert_eq!(step(&f, 0.0, &o).unwrap(), f);
    }

    #[test]
    fn phase_mixing_of_density() {
        let p = maxwellian(2048);
        let (k, eps) = (0.5, 1e-4);
        let f = perturbed(&p, k, eps, 16);
        let o = SimOptions { coupled: false, max_shift_x: f64::INFINITY, ..Default::default() };
        let mut sim = Simulation::new(f, o).unwrap();
        for n in 1..=60 {
            sim.step(0.1).unwrap();
            let t = 0.1 * n as f64;
            assert!((density_mode(&sim.state) - 0.5 * eps * (-k * k * t * t / 2.0).exp()).abs() < 1e-6);
        }
    }

    #[test]
    fn mass_per_step_and_time_reversal() {
        let p = maxwellian(512);
        let f = perturbed(&p, 0.5, 0.05, 32);
        let o = SimOptions { max_shift_x: f64::INFINITY, ..Default::default() };
        let mut sim = Simulation::new(f.clone(), o).unwrap();
        let m0 = f.mass();
        for _ in 0..20 {
            sim.step(0.1).unwrap();
            assert!((sim.state.mass() - m0).abs() <= 1e-12 * m0);
        }
        let mut sim = Simulation::new(f.clone(), o).unwrap();
        sim.step(0.1).unwrap();
        sim.step(-0.1).unwrap();
        let back = sim.state.f.iter().zip(&f.f).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        // error of one six-point shift by the largest field, against the exact Maxwellian
        let emax = poisson_solve(&f).unwrap().iter().fold(0.0f64, |a, e| a.max(e.abs()));
        let m = |v: f64| (-v * v / 2.0).exp() / TAU.sqrt();
        let interp = p
            .grid
            .nodes()
            .iter()
            .map(|&v| (crate::numerics::interp6(&p.values, p.grid.v_min, p.grid.dv(), v + emax * 0.1) - m(v + emax * 0.1)).abs())
            .fold(0.0, f64::max);
        assert!(interp > 0.0 && back < 10.0 * interp, "{back} {interp}");
    }

    #[test]
    fn homogeneous_equilibrium_stays_put() {
        let p = maxwellian(1024);
        let f = PhaseSpaceField::homogeneous(&p, TAU, 16).unwrap();
        let o = SimOptions { max_shift_x: f64::INFINITY, ..Default::default() };
        let (g, d) = evolve(&f, 0.1, 50, &o, &DiagnosticsConfig { stride: 5, reference: Some(p.clone()), distance_s: vec![1.2] }).unwrap();
        assert!(d.e_l2.iter().all(|e| *e <= 1e-12));
        assert_eq!(d.len(), 11);
        assert!(d.distances[0].iter().all(|x| *x < 1e-12));
        assert!(d.density_bound_ratio.iter().all(|r| *r <= 1.0 && *r > 0.5));
        assert!((d.energy[10] / d.energy[0] - 1.0).abs() < 1e-12);
        assert!(g.f.iter().zip(&f.f).all(|(a, b)| (a - b).abs() < 1e-14));
    }

    #[test]
    fn separable_distance() {
        let p = maxwellian(512);
        let b: Vec<f64> = p.grid.nodes().iter().map(|v| 0.01 * (-(v - 1.0) * (v - 1.0)).exp()).collect();
        let f = PhaseSpaceField::from_fn(TAU, 32, p.grid, |x, v| p.eval(v) + x.cos() * 0.01 * (-(v - 1.0) * (v - 1.0)).exp()).unwrap();
        for s in [0.0, 1.2, 1.8] {
            let d = distance_tracker(&f, &p, s).unwrap();
            let bn = sobolev_norm(&crate::profiles::Sampled::new(p.grid, b.clone()).unwrap(), SobolevSpec::h(s)).unwrap();
            let an = std::f64::consts::PI.sqrt();
            assert!((d - an * bn).abs() <= 1e-6 * d, "{s}");
        }
        assert!(matches!(distance_tracker(&f, &p, 4.5), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn exponential_rate_exact() {
        let t: Vec<f64> = (0..100).map(|i| i as f64 * 0.1).collect();
        let a: Vec<f64> = t.iter().map(|t| 1e-6 * (0.3 * t).exp()).collect();
        let (r, r2, n) = exponential_rate(&t, &a, 1.0, 1e-5).unwrap();
        assert!((r - 0.3).abs() < 1e-12 && r2 > 0.999999);
        assert_eq!(n, t.iter().filter(|&&t| t >= 1.0 && 1e-6 * (0.3 * t).exp() <= 1e-5).count());
    }
}
