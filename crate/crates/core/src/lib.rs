//! Phase and modulus operators on SU(1,1) discrete-series representations,
//! Barut-Girardello coherent states and the special functions they need.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coherent;
pub mod error;
pub mod irrep;
pub mod number_obs;
pub mod quad;
pub mod reproduce;
pub mod specfun;
pub mod spectral;
pub mod two_mode;

pub use error::{Error, Result};
