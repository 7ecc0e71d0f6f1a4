//! Time stepping for the fractional Allen–Cahn equation.

mod initial;
mod reaction;
mod scheme;

pub use initial::{InitialDatum, Lcg64};
pub use reaction::{make_reaction, ReactionKind, ReactionTerm};
pub use scheme::{
    backward_euler, contraction_factor, max_stable_tau, run, FixedPointOptions, FracParams, StepOutcome, Stepper,
    Trajectory,
};
