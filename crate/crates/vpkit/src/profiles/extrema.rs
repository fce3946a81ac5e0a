use serde::{Deserialize, Serialize};

use super::VelocityProfile;
use crate::numerics::{brent, fd_first, fd_second, interp6};
use crate::scalar::{lit, to_f64, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremumKind {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum<T> {
    pub v: T,
    pub kind: ExtremumKind,
    /// `f0''` at the extremum.
    pub curvature: T,
    /// `|f0''|` below the degeneracy tolerance.
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremaOptions {
    /// Relative to `max |f0''|` over the grid.
    pub degeneracy_tol: f64,
    /// Sign changes where `f0` is below this fraction of `max f0` are treated as tail noise.
    pub significance: f64,
}

impl Default for ExtremaOptions {
    fn default() -> Self {
        ExtremaOptions { degeneracy_tol: 1e-6, significance: 1e-10 }
    }
}

pub fn find_extrema<T: Real>(profile: &VelocityProfile<T>) -> Vec<Extremum<T>> {
    find_extrema_with(profile, ExtremaOptions::default())
}

/// Interior sign changes of the discrete derivative, located by a quadratic fit
/// and polished as roots of the interpolated derivative.
pub fn find_extrema_with<T: Real>(profile: &VelocityProfile<T>, opts: ExtremaOptions) -> Vec<Extremum<T>> {
    let g = profile.grid;
    let n = g.n;
    let f = &profile.values;
    if n < 7 {
        return Vec::new();
    }
    let dv = g.dv();
    let d = fd_first(f, dv);
    let d2 = fd_second(f, dv);
    let fmax = to_f64(profile.max_value());
    let d2max = d2.iter().fold(0.0f64, |a, &x| a.max(to_f64(x).abs()));
    let df: Vec<f64> = d.iter().map(|&x| to_f64(x)).collect();
    let d2f: Vec<f64> = d2.iter().map(|&x| to_f64(x)).collect();

    let mut out = Vec::new();
    let mut i = 1;
    while i + 2 < n {
        // bracket [i, i+1] in node units, relative to node i
        let local = if df[i] == 0.0 && df[i - 1] * df[i + 1] < 0.0 {
            Some(0.0)
        } else if df[i] * df[i + 1] < 0.0 {
            // quadratic vertex through the three samples around the larger |change|
            let j = if df[i].abs() < df[i + 1].abs() { i } else { i + 1 };
            let (fm, f0, fp) = (to_f64(f[j - 1]), to_f64(f[j]), to_f64(f[j + 1]));
            let den = fm - 2.0 * f0 + fp;
            let guess = if den != 0.0 { (j - i) as f64 + 0.5 * (fm - fp) / den } else { 0.5 };
            let guess = guess.clamp(0.0, 1.0);
            let dd = |s: f64| interp6(&df, 0.0, 1.0, i as f64 + s);
            let r = brent(dd, 0.0, 1.0, 1e-14).unwrap_or(guess);
            Some(r)
        } else {
            None
        };
        if let Some(s) = local {
            let v = g.node(i) + lit::<T>(s) * dv;
            let fv = interp6(&profile.values, g.v_min, dv, v);
            if to_f64(fv) >= opts.significance * fmax {
                let curv = interp6(&d2f, 0.0, 1.0, i as f64 + s);
                let kind = if curv < 0.0 { ExtremumKind::Max } else { ExtremumKind::Min };
                let degenerate = curv.abs() < opts.degeneracy_tol * d2max;
                if degenerate {
                    log::warn!("degenerate extremum at v = {}", to_f64(v));
                }
                out.push(Extremum { v, kind, curvature: lit(curv), degenerate });
            }
            i += if s == 0.0 { 1 } else { 2 };
            continue;
        }
        i += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{NamedProfile, VelocityGrid};

    #[test]
    fn maxwellian_single_max() {
        let g = VelocityGrid::<f64>::symmetric(8.0, 4096).unwrap();
        let m = NamedProfile::Maxwellian.build(g).unwrap();
        let e = find_extrema(&m);
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].kind, ExtremumKind::Max);
        assert!(e[0].v.abs() < g.dv() * g.dv());
    }

    #[test]
    fn double_gaussian_three_extrema() {
        let g = VelocityGrid::<f64>::symmetric(12.0, 4096).unwrap();
        let p = NamedProfile::DoubleGaussian { v0: 3.0 }.build(g).unwrap();
        let e = find_extrema(&p);
        let kinds: Vec<_> = e.iter().map(|x| x.kind).collect();
        assert_eq!(kinds, vec![ExtremumKind::Max, ExtremumKind::Min, ExtremumKind::Max]);
        // F'(v) = 0 near ±3 solved analytically: v = 3 tanh(3 v)
        let mut r = 3.0f64;
        for _ in 0..50 {
            r = 3.0 * (3.0 * r).tanh();
        }
        assert!((e[2].v - r).abs() < 1e-8 && (e[0].v + r).abs() < 1e-8);
        assert!(e[1].v.abs() < 1e-8);
    }

    #[test]
    fn monotone_ramp_has_none() {
        let g = VelocityGrid::<f64>::new(0.0, 1.0, 64).unwrap();
        let p = VelocityProfile::with_tail_tol(g, g.nodes().iter().map(|v| v * 1e-13).collect(), 1e-12).unwrap();
        assert!(find_extrema(&p).is_empty());
    }
}
