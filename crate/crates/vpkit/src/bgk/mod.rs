//! Small travelling BGK waves of prescribed minimal period near a homogeneous
//! profile: symmetrize near the wave speed, modify the profile so the period
//! of the potential ODE can be matched, integrate the orbit and rebuild `f`
//! from the energy split.

mod construct;
mod orbit;
mod split;

pub use construct::{
    assemble_bgk, construct_bgk, density_response, match_period, verify_steady, BgkCase, BgkOptions, BgkResult,
    BgkWave, DensityModel, OrbitSpec,
};
pub use orbit::{center_slope, elliptic_k, linear_period, orbit_period, trace_orbit, turning_points};
pub use split::{energy_split, EnergySplit, SplitTable};
