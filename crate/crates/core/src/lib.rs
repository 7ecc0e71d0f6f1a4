//! Space-time fractional Allen-Cahn solver in one space dimension.
//!
//! Solves ∂_t^α u + ε²(-Δ)^s u = g(u) on an interval with zero exterior data:
//! Caputo derivative by backward-Euler convolution quadrature, P1 finite
//! elements for the fractional Laplacian, a fixed-point iteration per step.
//! Everything numeric is generic over [`Real`]; the aliases below fix f64.
// NaN-rejecting argument checks are written as !(x > 0)
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod energy;
pub mod error;
pub mod femcore;
pub mod harness;
pub mod quadrature;
pub mod quadweights;
pub mod reference;
pub mod scalar;
pub mod special;
pub mod stepper;

pub use error::{FracError, Result};
pub use scalar::Real;

pub type Mesh = femcore::Mesh1d<f64>;
pub type System = femcore::FemSystem<f64>;
pub type Eigen = femcore::EigenDecomposition<f64>;
pub type Params = stepper::FracParams<f64>;
pub type Weights = quadweights::CqWeights<f64>;
pub type Reaction = stepper::ReactionTerm<f64>;
pub type Datum = stepper::InitialDatum<f64>;
pub type Run = stepper::Trajectory<f64>;
pub type Energy = energy::EnergyReport<f64>;
