//! `vpkit`: Penrose analysis, Landau damping, BGK waves, nonlinear runs and norms.
//!
//! Exit codes: 0 success, 2 configuration or I/O error, 3 numerical failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use vpkit::io::write_json;

use config::{DataKind, InitKind, NormMethod, RunConfig};

#[derive(Debug)]
pub enum Failure {
    Config(String),
    Numerical(String),
}

impl From<vpkit::Error> for Failure {
    fn from(e: vpkit::Error) -> Self {
        use vpkit::Error::*;
        match e {
            Io(_) | InvalidGrid(_) | InvalidProfile(_) | InvalidSpec(_) | ZeroMass(_) | GridMismatch(_) => Failure::Config(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "vpkit", version, about = "Vlasov-Poisson near homogeneous equilibria")]
struct Cli {
    /// JSON run configuration; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (default `out/<subcommand>`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Named profile: maxwellian, lorentzian, double_gaussian, weizner.
    #[arg(long)]
    profile: Option<String>,
    #[arg(long)]
    v0: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    /// `v,f` CSV profile; replaces --profile.
    #[arg(long)]
    profile_file: Option<PathBuf>,
    #[arg(long)]
    v_max: Option<f64>,
    #[arg(long)]
    n_v: Option<usize>,
    #[arg(long)]
    n_x: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Critical period, unstable intervals and the Nyquist curve.
    Penrose {
        #[command(flatten)]
        common: Common,
        /// Wave numbers at which to report the most unstable root.
        #[arg(long, value_delimiter = ',')]
        k: Vec<f64>,
    },
    /// Linear field of one Fourier mode by the contour formula, with decay fit.
    Landau {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: Option<f64>,
        #[arg(long, value_enum)]
        data: Option<DataKind>,
        #[arg(long)]
        amplitude: Option<f64>,
        #[arg(long)]
        center: Option<f64>,
        #[arg(long)]
        width: Option<f64>,
        /// Kink location of the Weizner data.
        #[arg(long)]
        kink: Option<f64>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        t_max: Option<f64>,
        /// Fit window `lo,hi`.
        #[arg(long, value_parser = parse_window)]
        window: Option<(f64, f64)>,
        /// Skip the time-domain comparison.
        #[arg(long)]
        no_oracle: bool,
    },
    /// Travelling BGK wave of prescribed period and speed.
    Bgk {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        period: Option<f64>,
        #[arg(long)]
        speed: Option<f64>,
        /// Requested distance to the profile.
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        distance_s: Option<f64>,
        #[arg(long)]
        amplitude: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
    },
    /// Nonlinear Vlasov-Poisson run.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        init: Option<InitKind>,
        #[arg(long)]
        k: Option<f64>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        stride: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        frame_speed: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        distance_s: Vec<f64>,
        /// Treat accuracy-bound violations as errors.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        write_final: bool,
        /// BGK period and speed for `--init bgk`.
        #[arg(long)]
        period: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        speed: Option<f64>,
    },
    /// Norms of the profile and bump scaling laws.
    Norms {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        s: Option<f64>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, value_enum)]
        method: Option<NormMethod>,
        #[arg(long, value_delimiter = ',')]
        gammas: Vec<f64>,
        #[arg(long)]
        delta: Option<f64>,
    },
}

fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected lo,hi")?;
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
    Ok((num(a)?, num(b)?))
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

impl Common {
    fn apply(self, c: &mut RunConfig) {
        set(&mut c.profile.name, self.profile);
        if self.v0.is_some() {
            c.profile.v0 = self.v0;
        }
        if self.alpha.is_some() {
            c.profile.alpha = self.alpha;
        }
        if self.profile_file.is_some() {
            c.profile.path = self.profile_file;
        }
        set(&mut c.grid.v_max, self.v_max);
        set(&mut c.grid.n_v, self.n_v);
        set(&mut c.grid.n_x, self.n_x);
        set(&mut c.seed, self.seed);
    }
}

/// Applies the flags and returns the subcommand name.
fn resolve(command: Command, c: &mut RunConfig) -> &'static str {
    match command {
        Command::Penrose { common, k } => {
            common.apply(c);
            if !k.is_empty() {
                c.penrose.k = k;
            }
            "penrose"
        }
        Command::Landau { common, k, data, amplitude, center, width, kink, dt, t_max, window, no_oracle } => {
            common.apply(c);
            let l = &mut c.landau;
            set(&mut l.k, k);
            set(&mut l.data, data);
            set(&mut l.amplitude, amplitude);
            set(&mut l.center, center);
            set(&mut l.width, width);
            set(&mut l.alpha, kink);
            set(&mut l.dt, dt);
            set(&mut l.t_max, t_max);
            set(&mut l.window, window);
            if no_oracle {
                l.oracle = false;
            }
            "landau"
        }
        Command::Bgk { common, period, speed, epsilon, distance_s, amplitude, gamma } => {
            common.apply(c);
            let b = &mut c.bgk;
            set(&mut b.period, period);
            set(&mut b.speed, speed);
            if epsilon.is_some() {
                b.epsilon = epsilon;
            }
            if distance_s.is_some() {
                b.distance_s = distance_s;
            }
            set(&mut b.amplitude, amplitude);
            if gamma.is_some() {
                b.gamma = gamma;
            }
            "bgk"
        }
        Command::Simulate {
            common,
            init,
            k,
            epsilon,
            checkpoint,
            dt,
            steps,
            stride,
            frame_speed,
            distance_s,
            strict,
            write_final,
            period,
            speed,
        } => {
            common.apply(c);
            let s = &mut c.simulate;
            set(&mut s.init, init);
            set(&mut s.k, k);
            set(&mut s.epsilon, epsilon);
            if checkpoint.is_some() {
                s.checkpoint = checkpoint;
            }
            set(&mut s.dt, dt);
            set(&mut s.steps, steps);
            set(&mut s.stride, stride);
            if frame_speed.is_some() {
                s.frame_speed = frame_speed;
            }
            if !distance_s.is_empty() {
                s.distance_s = distance_s;
            }
            s.strict |= strict;
            s.write_final |= write_final;
            set(&mut c.bgk.period, period);
            set(&mut c.bgk.speed, speed);
            "simulate"
        }
        Command::Norms { common, s, p, method, gammas, delta } => {
            common.apply(c);
            let n = &mut c.norms;
            set(&mut n.s, s);
            set(&mut n.p, p);
            set(&mut n.method, method);
            if !gammas.is_empty() {
                n.gammas = gammas;
            }
            set(&mut n.delta, delta);
            "norms"
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::Config(e.to_string()))?;
    }
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let name = resolve(cli.command, &mut cfg);
    cfg.command = Some(name.to_string());
    let out = cli.out.unwrap_or_else(|| Path::new("out").join(name));
    write_json(&out.join("config.resolved.json"), &cfg.to_json())?;
    match name {
        "penrose" => commands::penrose(&cfg, &out),
        "landau" => commands::landau(&cfg, &out),
        "bgk" => commands::bgk(&cfg, &out),
        "simulate" => commands::simulate(&cfg, &out),
        _ => commands::norms(&cfg, &out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("numerical failure: {m}");
            ExitCode::from(3)
        }
    }
}
