//! Run configuration: defaults, overlaid by a JSON file, overlaid by flags.

use std::f64::consts::TAU;
use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use vpkit::io::profile_from_csv;
use vpkit::landau::LandauOptions;
use vpkit::profiles::{NamedProfile, VelocityGrid, VelocityProfile};

use crate::Failure;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Subcommand that produced this file; informational.
    pub command: Option<String>,
    pub profile: ProfileSource,
    pub grid: GridConfig,
    /// Recorded with every run; no current subcommand draws random numbers.
    pub seed: u64,
    pub penrose: PenroseConfig,
    pub landau: LandauConfig,
    pub bgk: BgkConfig,
    pub simulate: SimulateConfig,
    pub norms: NormsConfig,
}

/// A named profile (`maxwellian`, `double_gaussian(3)`, ...) or a `v,f` CSV file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProfileSource {
    pub name: String,
    /// Overrides the parameter of `double_gaussian`.
    pub v0: Option<f64>,
    /// Overrides the parameter of `weizner`.
    pub alpha: Option<f64>,
    /// Takes precedence over `name`; the file's grid replaces `grid.v_max`/`grid.n_v`.
    pub path: Option<PathBuf>,
}

impl Default for ProfileSource {
    fn default() -> Self {
        ProfileSource { name: "maxwellian".into(), v0: None, alpha: None, path: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub v_max: f64,
    pub n_v: usize,
    pub n_x: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { v_max: 8.0, n_v: 4096, n_x: 128 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PenroseConfig {
    /// Wave numbers at which the most unstable root is reported.
    pub k: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum DataKind {
    Gaussian,
    Weizner,
    Hat,
    Zero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LandauConfig {
    pub k: f64,
    pub data: DataKind,
    pub amplitude: f64,
    pub center: f64,
    /// Gaussian standard deviation or hat half width.
    pub width: f64,
    /// Kink location of the Weizner data.
    pub alpha: f64,
    pub dt: f64,
    pub t_max: f64,
    pub window: (f64, f64),
    /// Also run the time-domain linearized solver and report the sup difference.
    pub oracle: bool,
    pub contour: LandauOptions,
}

impl Default for LandauConfig {
    fn default() -> Self {
        LandauConfig {
            k: 1.0,
            data: DataKind::Gaussian,
            amplitude: 1.0,
            center: 0.0,
            width: 1.0,
            alpha: 0.0,
            dt: 0.05,
            t_max: 200.0,
            window: (20.0, 200.0),
            oracle: true,
            contour: LandauOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BgkConfig {
    pub period: f64,
    pub speed: f64,
    /// Requested distance to the profile; absent means no search.
    pub epsilon: Option<f64>,
    /// Sobolev order of the reported distance; absent skips the distance.
    pub distance_s: Option<f64>,
    pub amplitude: f64,
    pub half_width: f64,
    pub gamma: Option<f64>,
}

impl Default for BgkConfig {
    fn default() -> Self {
        BgkConfig { period: TAU, speed: 0.0, epsilon: None, distance_s: Some(1.2), amplitude: 1e-2, half_width: 1.0, gamma: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum InitKind {
    /// The homogeneous profile on a period `2π/k`.
    Equilibrium,
    /// `f0(v)(1 + ε cos kx)`.
    Perturbed,
    /// A BGK wave built from the `bgk` section.
    Bgk,
    /// A directory holding `f.csv` and `meta.json`.
    Checkpoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateConfig {
    pub init: InitKind,
    pub k: f64,
    pub epsilon: f64,
    pub checkpoint: Option<PathBuf>,
    pub dt: f64,
    pub steps: usize,
    pub stride: usize,
    /// Defaults to the wave speed for BGK and checkpoint starts, zero otherwise.
    pub frame_speed: Option<f64>,
    /// Orders of the tracked distances to the profile.
    pub distance_s: Vec<f64>,
    /// Shift bound in cells for the x advection; absent means unbounded.
    pub max_shift_x: Option<f64>,
    pub max_shift_v: f64,
    pub strict: bool,
    /// Write the final state as a checkpoint under `final/`.
    pub write_final: bool,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        SimulateConfig {
            init: InitKind::Perturbed,
            k: 0.5,
            epsilon: 1e-3,
            checkpoint: None,
            dt: 0.1,
            steps: 600,
            stride: 5,
            frame_speed: None,
            distance_s: Vec::new(),
            max_shift_x: None,
            max_shift_v: 2.0,
            strict: false,
            write_final: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum NormMethod {
    SpectralP2,
    Gagliardo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NormsConfig {
    pub s: f64,
    pub p: f64,
    pub method: NormMethod,
    /// Bump scales `γ` of the scaling sweep, at fixed `delta`.
    pub gammas: Vec<f64>,
    pub delta: f64,
}

impl Default for NormsConfig {
    fn default() -> Self {
        NormsConfig { s: 1.2, p: 2.0, method: NormMethod::SpectralP2, gammas: vec![0.4, 0.2, 0.1, 0.05], delta: 1.0 }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("configuration is plain data")
    }

    pub fn velocity_grid(&self) -> Result<VelocityGrid<f64>, Failure> {
        Ok(VelocityGrid::symmetric(self.grid.v_max, self.grid.n_v)?)
    }

    pub fn named_profile(&self) -> Result<NamedProfile, Failure> {
        let mut p: NamedProfile = self.profile.name.parse()?;
        match &mut p {
            NamedProfile::DoubleGaussian { v0 } => *v0 = self.profile.v0.unwrap_or(*v0),
            NamedProfile::Weizner { alpha } => *alpha = self.profile.alpha.unwrap_or(*alpha),
            _ => {}
        }
        Ok(p)
    }

    pub fn build_profile(&self) -> Result<VelocityProfile<f64>, Failure> {
        match &self.profile.path {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
                Ok(profile_from_csv(&text)?)
            }
            None => Ok(self.named_profile()?.build(self.velocity_grid()?)?),
        }
    }
}
