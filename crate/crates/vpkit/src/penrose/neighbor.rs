use serde::{Deserialize, Serialize};

use super::roots::{most_unstable_root, DispersionRoot};
use super::critical_period;
use crate::error::{Error, Result};
use crate::field::PhaseSpaceField;
use crate::profiles::{modified_family_at, rescale_profile, BumpFamily, VelocityProfile};
use crate::quadrature::{weighted_distance, Distance, SobolevSpec};
use crate::scalar::{lit, to_f64, Real};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeighborOptions {
    /// Bump used when `k^2` exceeds the extremum integral; the single Gaussian
    /// is used otherwise.
    pub bump: BumpFamily,
    /// Largest bump width `γδ` tried.
    pub max_width: f64,
    /// Geometric ratio between successive widths.
    pub width_ratio: f64,
    /// Smallest width, in grid spacings.
    pub min_cells: f64,
    /// Rescaling factors about the extremum that push `k0` past `k`.
    pub rescales: Vec<f64>,
}

impl Default for NeighborOptions {
    fn default() -> Self {
        NeighborOptions {
            bump: BumpFamily::positive_nu(2.0),
            max_width: 0.5,
            width_ratio: 0.85,
            min_cells: 4.0,
            rescales: vec![0.99, 0.995, 0.998, 0.999],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnstableNeighbor<T> {
    pub profile: VelocityProfile<T>,
    pub root: DispersionRoot<T>,
    pub distance: Distance<T>,
    pub center: T,
    pub gamma: T,
    pub delta: T,
    pub rescale: T,
}

/// A homogeneous profile within `epsilon` of `profile` (triple distance with the
/// `H^s` norm, over one period `T`) that has a growing mode at `k = 2π/T`.
///
/// A bump is added at the extremum with the largest integral so that this
/// integral equals `k^2` exactly, then the profile is compressed about that
/// point by a factor slightly below one, which moves its critical wave number
/// just above `k`. All widths down to the grid resolution are tried; the
/// closest unstable candidate is returned.
pub fn unstable_neighbor<T: Real>(
    profile: &VelocityProfile<T>,
    period: T,
    s: f64,
    epsilon: f64,
    opts: &NeighborOptions,
) -> Result<UnstableNeighbor<T>> {
    let k = T::TAU() / period;
    let spec = SobolevSpec::h(s);
    let distance = |p: &VelocityProfile<T>| -> Result<Distance<T>> {
        let f = PhaseSpaceField::homogeneous(p, period, 4)?;
        weighted_distance(&f, profile, spec)
    };
    if let Some(root) = most_unstable_root(profile, k)? {
        let zero = Distance { l1: T::zero(), energy_l1: T::zero(), wsp: T::zero() };
        return Ok(UnstableNeighbor {
            profile: profile.clone(),
            root,
            distance: zero,
            center: root.c.re,
            gamma: T::zero(),
            delta: T::one(),
            rescale: T::one(),
        });
    }
    let report = critical_period(profile)?;
    let ext = report
        .extrema
        .iter()
        .filter(|c| !c.degenerate)
        .max_by(|a, b| a.integral.partial_cmp(&b.integral).unwrap())
        .ok_or_else(|| Error::TargetNotReachable("profile has no usable extremum".into()))?;
    let (center, i0) = (ext.v, to_f64(ext.integral));
    let k2 = to_f64(k * k);
    let bump = if k2 > i0 { opts.bump } else { BumpFamily::negative_nu() };
    let (i_f, c0) = (bump.pv_weight(), bump.mass());
    if (k2 > i0) != (i_f > 0.0) {
        return Err(Error::TargetNotReachable(format!("bump with ∫F'/v = {i_f:.4} cannot move {i0:.4} to {k2:.4}")));
    }
    let dv = to_f64(profile.grid.dv());
    let min_w = opts.min_cells * dv;

    let mut best: Option<f64> = None;
    let mut w = opts.max_width;
    while w >= min_w {
        let d2 = (i_f - k2 * c0 * w * w) / (k2 - i0);
        if d2 > 0.0 {
            let delta = d2.sqrt();
            let gamma = w / delta;
            let base = modified_family_at(profile, &bump, lit(gamma), lit(delta), center)?;
            for &r in &opts.rescales {
                let cand = match rescale_profile(&base, center, lit(r)) {
                    Ok(c) => c,
                    Err(Error::OutOfDomain(_)) => continue,
                    Err(e) => return Err(e),
                };
                let dist = distance(&cand)?;
                let total = to_f64(dist.total());
                best = Some(best.map_or(total, |b: f64| b.min(total)));
                if total < epsilon {
                    if let Some(root) = most_unstable_root(&cand, k)? {
                        return Ok(UnstableNeighbor {
                            profile: cand,
                            root,
                            distance: dist,
                            center,
                            gamma: lit(gamma),
                            delta: lit(delta),
                            rescale: lit(r),
                        });
                    }
                }
            }
        }
        w *= opts.width_ratio;
    }
    Err(Error::TargetNotReachable(match best {
        Some(b) => format!("smallest distance among resolvable candidates is {b:.4e}, requested {epsilon:.4e}"),
        None => "no resolvable bump width".into(),
    }))
}
