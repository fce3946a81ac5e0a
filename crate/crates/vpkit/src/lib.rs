//! Numerical toolkit for the one-dimensional Vlasov-Poisson system near
//! homogeneous equilibria.
//!
//! The library is generic over the scalar type ([`Real`], implemented for
//! `f32` and `f64`); the aliases at the crate root fix it to `f64`.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bgk;
pub mod error;
pub mod field;
pub mod io;
pub mod landau;
pub mod numerics;
pub mod profiles;
pub mod penrose;
pub mod quadrature;
pub mod scalar;
pub mod sim;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Grid = profiles::VelocityGrid<f64>;
pub type Profile = profiles::VelocityProfile<f64>;
pub type SampledFn = profiles::Sampled<f64>;
pub type Field = field::PhaseSpaceField<f64>;
