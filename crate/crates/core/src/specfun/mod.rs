//! Special-function kernel: log-gamma and modified Bessel functions of the
//! first and third kind for real order and positive real argument.
//!
//! Everything here is self-contained; no external special-function crate is
//! involved, so every downstream number is reproducible from this module.

mod bessel;
mod gamma;

pub use bessel::{
    bessel_i, bessel_i_ratio, bessel_k, i_switch_point, log_bessel_i, log_bessel_k, EvalResult, LogEval, Method,
};
pub use gamma::log_gamma;

pub(crate) use gamma::ln_gamma;
