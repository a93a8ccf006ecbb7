//! Four-term expansions of `log G` at the dominant poles `q = ±1`, valid for
//! `τ = 1/X + 2πiY` with `|Y| <= 1/(2πX)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mainterm::TauParam;
use crate::specfun::{log_gamma, LN_2, LN_PI, PI};

/// `c₊ = -(3/4) log 2 - (1/2) log π + log Γ(1/4)`
pub fn c_plus() -> f64 {
    -0.75 * LN_2 - 0.5 * LN_PI + log_gamma(0.25).expect("positive argument")
}

/// `c₋ = -(1/4) log 2 - (1/2) log π + log Γ(3/4)`
pub fn c_minus() -> f64 {
    -0.25 * LN_2 - 0.5 * LN_PI + log_gamma(0.75).expect("positive argument")
}

/// An approximation together with its certified absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearPoleApprox {
    pub value: Complex64,
    pub err_bound: f64,
}

fn check_window(tau: &TauParam) -> Result<()> {
    let bound = 1.0 / (2.0 * PI * tau.x());
    if tau.y().abs() > bound {
        return Err(Error::YOutOfRange {
            y: tau.y().abs(),
            bound,
            constraint: "|Y| <= 1/(2 pi X)",
        });
    }
    Ok(())
}

/// `log G(e^{-τ}) ≈ π²/(48τ) - (1/4) log τ + c₊`, error at most `0.66 X^{-3/4}`.
pub fn log_g_near_plus1(tau: &TauParam) -> Result<NearPoleApprox> {
    check_window(tau)?;
    let value = tau.inv_tau() * (PI * PI / 48.0) - tau.tau().ln() * 0.25 + c_plus();
    Ok(NearPoleApprox {
        value,
        err_bound: 0.66 * tau.x().powf(-0.75),
    })
}

/// `log G(-e^{-τ}) ≈ π²/(48τ) + (1/4) log τ + c₋`, error at most `0.82 X^{-3/4}`.
pub fn log_g_near_minus1(tau: &TauParam) -> Result<NearPoleApprox> {
    check_window(tau)?;
    let value = tau.inv_tau() * (PI * PI / 48.0) + tau.tau().ln() * 0.25 + c_minus();
    Ok(NearPoleApprox {
        value,
        err_bound: 0.82 * tau.x().powf(-0.75),
    })
}
