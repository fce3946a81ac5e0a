//! Singular and oscillatory quadrature: principal values, boundary values of
//! Cauchy integrals, fractional derivatives and fractional Sobolev norms.

mod distance;
mod fractional;
mod hilbert;
mod pv;
mod sobolev;

pub use distance::{spectral_2d, weighted_distance, Distance};
pub use fractional::{fractional_derivative_p2, fractional_derivative_padded};
pub use hilbert::{hilbert_boundary, hilbert_boundary_complex};
pub use pv::{cauchy_integral, pv_integral};
pub use sobolev::{
    gagliardo_constant, gagliardo_seminorm_line, gagliardo_seminorm_periodic, homogeneous_seminorm_p2, lp_norm,
    sobolev_norm, spectral_derivative_periodic, SobolevMethod, SobolevSpec,
};
