//! Gamma-function helpers and the Mittag-Leffler function.

mod gamma;
mod mittag_leffler;

pub use gamma::{gamma, ln_gamma, rgamma, sin_pi};
pub use mittag_leffler::{
    mittag_leffler, mittag_leffler_detailed, ml_asymptotic, ml_integral, ml_integral_primitive, ml_series,
    MlEvaluation, MlParams, MlRegime,
};
