use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{VelocityGrid, VelocityProfile};
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Built-in profiles, addressable by name (`maxwellian`, `double_gaussian(3)`, ...).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum NamedProfile {
    /// `exp(-v^2/2)/sqrt(2π)`.
    Maxwellian,
    /// Two unit-variance Gaussians at `±v0`, unit mass.
    DoubleGaussian { v0: f64 },
    /// `1/(π(1+v^2))`. Heavy tails: built with a tail tolerance of `1e-3`.
    Lorentzian,
    /// `(v-α)^2 exp(-(v-α)^2)` for `v >= α`, zero below. Not normalized.
    Weizner { alpha: f64 },
}

impl NamedProfile {
    pub fn eval<T: Real>(&self, v: T) -> T {
        let s2pi = (T::TAU()).sqrt();
        match *self {
            NamedProfile::Maxwellian => (lit::<T>(-0.5) * v * v).exp() / s2pi,
            NamedProfile::DoubleGaussian { v0 } => {
                let v0 = lit::<T>(v0);
                ((lit::<T>(-0.5) * (v - v0) * (v - v0)).exp() + (lit::<T>(-0.5) * (v + v0) * (v + v0)).exp())
                    / (lit::<T>(2.0) * s2pi)
            }
            NamedProfile::Lorentzian => T::FRAC_1_PI() / (T::one() + v * v),
            NamedProfile::Weizner { alpha } => {
                let u = v - lit::<T>(alpha);
                if u >= T::zero() {
                    u * u * (-u * u).exp()
                } else {
                    T::zero()
                }
            }
        }
    }

    pub fn build<T: Real>(&self, grid: VelocityGrid<T>) -> Result<VelocityProfile<T>> {
        let values = (0..grid.n).map(|i| self.eval(grid.node(i))).collect();
        let tol = match self {
            NamedProfile::Lorentzian => lit(1e-3),
            _ => lit(super::DEFAULT_TAIL_TOL),
        };
        VelocityProfile::with_tail_tol(grid, values, tol)
    }
}

impl fmt::Display for NamedProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedProfile::Maxwellian => write!(f, "maxwellian"),
            NamedProfile::DoubleGaussian { v0 } => write!(f, "double_gaussian({v0})"),
            NamedProfile::Lorentzian => write!(f, "lorentzian"),
            NamedProfile::Weizner { alpha } => write!(f, "weizner({alpha})"),
        }
    }
}

impl FromStr for NamedProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, arg) = match s.find('(') {
            Some(i) if s.ends_with(')') => (&s[..i], Some(&s[i + 1..s.len() - 1])),
            Some(_) => return Err(Error::InvalidProfile(format!("malformed profile name {s:?}"))),
            None => (s, None),
        };
        let num = |a: Option<&str>, default: Option<f64>| -> Result<f64> {
            match a {
                Some(a) => a.trim().parse().map_err(|_| Error::InvalidProfile(format!("bad parameter in {s:?}"))),
                None => default.ok_or_else(|| Error::InvalidProfile(format!("{name} needs a parameter"))),
            }
        };
        match name {
            "maxwellian" => Ok(NamedProfile::Maxwellian),
            "lorentzian" => Ok(NamedProfile::Lorentzian),
            "double_gaussian" => Ok(NamedProfile::DoubleGaussian { v0: num(arg, Some(3.0))? }),
            "weizner" => Ok(NamedProfile::Weizner { alpha: num(arg, Some(0.0))? }),
            _ => Err(Error::InvalidProfile(format!("unknown profile {name:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        for p in [
            NamedProfile::Maxwellian,
            NamedProfile::Lorentzian,
            NamedProfile::DoubleGaussian { v0: 2.4 },
            NamedProfile::Weizner { alpha: 0.5 },
        ] {
            assert_eq!(p.to_string().parse::<NamedProfile>().unwrap(), p);
        }
        assert!("gauss".parse::<NamedProfile>().is_err());
    }

    #[test]
    fn unit_mass() {
        let g = VelocityGrid::<f64>::symmetric(12.0, 2049).unwrap();
        for p in [NamedProfile::Maxwellian, NamedProfile::DoubleGaussian { v0: 3.0 }] {
            assert!((p.build(g).unwrap().mass - 1.0).abs() < 1e-13);
        }
    }
}
