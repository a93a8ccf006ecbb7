//! Exact coefficients of `G(q) = 1/(q, -q^3; q^4)_inf` together with the
//! circle-method machinery that bounds them: main terms on Farey arcs,
//! near-pole expansions at `q = ±1`, explicit error budgets and a per-`n`
//! positivity certificate.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotic;
pub mod error;
pub mod farey;
pub mod lemmas;
pub mod logmag;
pub mod mainterm;
pub mod nearpole;
pub mod series;
pub mod specfun;

pub use error::{Error, Result};
pub use logmag::LogMagnitude;
