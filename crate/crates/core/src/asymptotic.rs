//! Assembly of the circle method for `g(n)`: the two Bessel main terms, their
//! explicit error budgets, the minor-arc bound and a per-`n` positivity
//! certificate. Everything is carried in log-space.

use crate::error::{Error, Result};
use crate::logmag::LogMagnitude;
use crate::mainterm::MINOR_ARC_CERTIFIED_X;
use crate::specfun::{bessel_i_log, log_gamma, LN_2, LN_PI, PI};

/// Log-units by which the main term must beat the error sum.
pub const SAFETY_MARGIN_LOG: f64 = 1e-9;

const LN_3: f64 = 1.098_612_288_668_109_6;

fn check_n(n: u128) -> Result<f64> {
    if n == 0 {
        Err(Error::ZeroIndex)
    } else {
        Ok(n as f64)
    }
}

fn lg(x: f64) -> f64 {
    log_gamma(x).expect("positive argument")
}

/// `X = √(48n/π²)`
pub fn x_of_n(n: u128) -> Result<f64> {
    let n = check_n(n)?;
    Ok((48.0 * n).sqrt() / PI)
}

/// `(π/2)√(n/3)`, the Bessel argument.
pub fn bessel_argument(n: u128) -> Result<f64> {
    let n = check_n(n)?;
    Ok(0.5 * PI * (n / 3.0).sqrt())
}

/// `π^{1/4} Γ(1/4) / (2^{9/4} 3^{3/8} n^{3/8}) · I_{-3/4}((π/2)√(n/3))`
pub fn g1_main(n: u128) -> Result<LogMagnitude> {
    let nf = check_n(n)?;
    let prefactor =
        0.25 * LN_PI + lg(0.25) - 2.25 * LN_2 - 0.375 * LN_3 - 0.375 * nf.ln();
    Ok(LogMagnitude::from_log(prefactor) * bessel_i_log(-0.75, bessel_argument(n)?)?)
}

/// `(-1)^n π^{3/4} Γ(3/4) / (2^{11/4} 3^{5/8} n^{5/8}) · I_{-5/4}((π/2)√(n/3))`,
/// signed. `I_{-5/4}` is itself negative for small arguments.
pub fn g2_main(n: u128) -> Result<LogMagnitude> {
    let nf = check_n(n)?;
    let prefactor =
        0.75 * LN_PI + lg(0.75) - 2.75 * LN_2 - 0.625 * LN_3 - 0.625 * nf.ln();
    let parity = if n.is_multiple_of(2) { 1 } else { -1 };
    Ok(LogMagnitude::new(parity, prefactor) * bessel_i_log(-1.25, bessel_argument(n)?)?)
}

/// Every magnitude entering the positivity certificate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBudget {
    pub n: u128,
    pub x: f64,
    pub main1: LogMagnitude,
    pub main2_abs: LogMagnitude,
    pub e_g1: LogMagnitude,
    pub e_g2: LogMagnitude,
    pub g3: LogMagnitude,
    /// `X >= 3.4e7`, where the minor-arc bound holds.
    pub certified: bool,
}

impl ErrorBudget {
    /// `|g2| + E_g1 + E_g2 + g3`
    pub fn total_error(&self) -> LogMagnitude {
        self.main2_abs + self.e_g1 + self.e_g2 + self.g3
    }

    /// `g1 - (|g2| + E_g1 + E_g2 + g3)`
    pub fn margin(&self) -> LogMagnitude {
        self.main1 - self.total_error()
    }
}

pub fn error_budget(n: u128) -> Result<ErrorBudget> {
    let nf = check_n(n)?;
    let ln_n = nf.ln();
    let xb = bessel_argument(n)?;
    let i34 = bessel_i_log(-0.75, xb)?.abs();
    let i54 = bessel_i_log(-1.25, xb)?.abs();
    let e = LogMagnitude::from_log;
    let one = e(0.0);
    let exp_3_8 = 0.75 * xb;
    let exp_1_8 = 0.25 * xb;

    let outer1 = e(lg(0.25) - 0.75 * LN_2 - 0.5 * LN_PI);
    let a1 = e(1.32f64.ln() + 1.5 * LN_PI - 3.0 * LN_2 - 0.75 * LN_3 - 0.75 * ln_n)
        * i34;
    let c1 = one + e(1.32f64.ln() + 0.75 * LN_PI - 1.5 * LN_2 - 0.375 * LN_3 - 0.375 * ln_n);
    let b1 = e(0.5 * LN_2 + 0.125 * LN_3 - 1.25 * LN_PI - 0.875 * ln_n + exp_3_8);
    let e_g1 = outer1 * (a1 + c1 * b1);

    let outer2 = e(lg(0.75) - 0.25 * LN_2 - 0.5 * LN_PI);
    let a2 = e(1.64f64.ln() + 2.0 * LN_PI - 4.0 * LN_2 - LN_3 - ln_n) * i54;
    let c2 = one + e(1.64f64.ln() + 0.75 * LN_PI - 1.5 * LN_2 - 0.375 * LN_3 - 0.375 * ln_n);
    let b2a = e(lg(1.25) - LN_2 - LN_PI - 1.25 * ln_n + exp_1_8);
    let b2b = e(-0.5 * LN_2 - 0.125 * LN_3 - 0.75 * LN_PI - 1.125 * ln_n + exp_3_8);
    let e_g2 = outer2 * (a2 + c2 * e(LN_2) * (b2a + b2b));

    let g3 = e(xb - (3.0 * nf).sqrt() / (25.0 * PI));
    let x = x_of_n(n)?;

    Ok(ErrorBudget {
        n,
        x,
        main1: g1_main(n)?,
        main2_abs: g2_main(n)?.abs(),
        e_g1,
        e_g2,
        g3,
        certified: x >= MINOR_ARC_CERTIFIED_X,
    })
}

/// Why a certificate could not be issued.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UncertifiedReason {
    /// `X < 3.4e7`: the minor-arc bound is not proved there.
    BelowMinorArcThreshold { x: f64 },
    /// The leading term does not beat the error sum by the safety margin.
    ErrorsDominate { margin_log: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Certificate {
    Certified { margin: LogMagnitude },
    Uncertified { reason: UncertifiedReason },
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        matches!(self, Certificate::Certified { .. })
    }
}

/// Certifies `g(n) > 0` when `X >= 3.4e7` and
/// `g1 > |g2| + E_g1 + E_g2 + g3` with a log-space safety margin.
pub fn positivity_certificate(n: u128) -> Result<Certificate> {
    let budget = error_budget(n)?;
    Ok(certificate_from_budget(&budget))
}

pub fn certificate_from_budget(budget: &ErrorBudget) -> Certificate {
    if !budget.certified {
        return Certificate::Uncertified {
            reason: UncertifiedReason::BelowMinorArcThreshold { x: budget.x },
        };
    }
    let errors = budget.total_error();
    if budget.main1.log_abs() > errors.log_abs() + SAFETY_MARGIN_LOG {
        Certificate::Certified {
            margin: budget.margin(),
        }
    } else {
        let margin = budget.margin();
        Certificate::Uncertified {
            reason: UncertifiedReason::ErrorsDominate {
                margin_log: f64::from(margin.sign()) * margin.log_abs(),
            },
        }
    }
}

fn certified(n: u128) -> Result<bool> {
    Ok(positivity_certificate(n)?.is_certified())
}

/// Brackets up to this width fall back to a linear scan when the sampled
/// certificate is not monotone.
pub const LINEAR_SCAN_LIMIT: u128 = 1_000_000;

const MONOTONE_SAMPLES: u32 = 64;

/// Smallest `n` in `[lo, hi]` with a certificate, found by bisection after
/// sampling the bracket for monotonicity.
pub fn find_certified_threshold(lo: u128, hi: u128) -> Result<u128> {
    let lo = lo.max(1);
    if lo > hi {
        return Err(Error::NoCertifiedEndpoint { lo, hi });
    }
    if certified(lo)? {
        return Ok(lo);
    }
    if !certified(hi)? {
        return Err(Error::NoCertifiedEndpoint { lo, hi });
    }

    if !sampled_monotone(lo, hi)? {
        return linear_scan(lo, hi);
    }

    let (mut a, mut b) = (lo, hi);
    while b - a > 1 {
        let mid = a + (b - a) / 2;
        if certified(mid)? {
            b = mid;
        } else {
            a = mid;
        }
    }

    // Dense check around the crossover.
    let span = (b / 1000).max(16);
    let below = b.saturating_sub(span).max(lo);
    let above = b.saturating_add(span).min(hi);
    if !sampled_monotone(below, above)? {
        return linear_scan(lo, hi);
    }
    Ok(b)
}

fn sampled_monotone(lo: u128, hi: u128) -> Result<bool> {
    let (llo, lhi) = ((lo as f64).ln(), (hi as f64).ln());
    let mut seen_certified = false;
    for i in 0..=MONOTONE_SAMPLES {
        let t = f64::from(i) / f64::from(MONOTONE_SAMPLES);
        let n = ((llo + t * (lhi - llo)).exp() as u128).clamp(lo, hi);
        let c = certified(n)?;
        if seen_certified && !c {
            return Ok(false);
        }
        seen_certified |= c;
    }
    Ok(true)
}

fn linear_scan(lo: u128, hi: u128) -> Result<u128> {
    if hi - lo > LINEAR_SCAN_LIMIT {
        return Err(Error::NonMonotoneBracket { lo, hi });
    }
    for n in lo..=hi {
        if certified(n)? {
            return Ok(n);
        }
    }
    Err(Error::NoCertifiedEndpoint { lo, hi })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_of_n_examples() {
        let n = (PI * PI / 48.0 * 1e4).round() as u128;
        assert!((x_of_n(n).unwrap() - 100.0).abs() < 0.05);
        let x = x_of_n(240_000_000_000_000).unwrap();
        assert!((3.4e7..3.42e7).contains(&x));
        assert_eq!(x_of_n(0), Err(Error::ZeroIndex));
        assert!(x_of_n(11).unwrap() > x_of_n(10).unwrap());
    }

    #[test]
    fn g2_parity() {
        for n in [7u128, 100, 10_001] {
            let s = g2_main(n).unwrap().sign();
            assert_eq!(s, if n % 2 == 0 { 1 } else { -1 });
        }
    }

    #[test]
    fn g1_shape() {
        let shapes: Vec<f64> = [1e4, 1e6, 1e8, 1e10]
            .iter()
            .map(|&n: &f64| {
                let v = g1_main(n as u128).unwrap().log_abs();
                v - 0.5 * PI * (n / 3.0).sqrt() + 0.5 * n.ln()
            })
            .collect();
        for w in shapes.windows(2) {
            assert!((w[1] - w[0]).abs() < 1.0);
        }
    }

    #[test]
    fn g1_ratio_at_one_million() {
        let n = 1e6f64;
        let r = g1_main(4_000_000).unwrap().log_abs() - g1_main(1_000_000).unwrap().log_abs();
        // I_s(x) ~ e^x / √(2πx): extra √(x ratio) = 2^{1/2} from n^{1/4}.
        let expected =
            0.5 * PI * ((4.0 * n / 3.0).sqrt() - (n / 3.0).sqrt()) - 0.375 * 4f64.ln()
                - 0.25 * 4f64.ln();
        assert!((r - expected).abs() < 0.01);
    }

    #[test]
    fn g3_at_three() {
        let b = error_budget(3).unwrap();
        assert!((b.g3.log_abs() - (0.5 * PI - 3.0 / (25.0 * PI))).abs() < 1e-14);
    }

    #[test]
    fn relative_error_budget_decays() {
        let rel = |n: u128| {
            let b = error_budget(n).unwrap();
            b.e_g1.log_abs() - b.main1.log_abs()
        };
        assert!(rel(1_000_000) < rel(10_000));
        assert!(rel(100_000_000) < rel(1_000_000));
    }

    #[test]
    fn budget_finite_across_range() {
        let mut n = 1u128;
        while n <= 100_000_000_000_000_000_000 {
            let b = error_budget(n).unwrap();
            for v in [b.main1, b.main2_abs, b.e_g1, b.e_g2, b.g3] {
                assert!(v.sign() > 0 && v.log_abs().is_finite(), "n = {n}: {b:?}");
            }
            n *= 7;
        }
    }

    #[test]
    fn certificate_examples() {
        assert!(positivity_certificate(240_000_000_000_000).unwrap().is_certified());
        assert!(matches!(
            positivity_certificate(1_000_000).unwrap(),
            Certificate::Uncertified {
                reason: UncertifiedReason::BelowMinorArcThreshold { .. }
            }
        ));
    }

    #[test]
    fn threshold_search() {
        let n = find_certified_threshold(10_000_000_000, 10_000_000_000_000_000).unwrap();
        assert!(n as f64 / 2.4e14 < 1.2 && 2.4e14 / (n as f64) < 1.2);
        assert!(x_of_n(n).unwrap() >= 3.4e7);
        assert!(x_of_n(n - 1).unwrap() < 3.4e7);

        let hi = 300_000_000_000_000;
        assert_eq!(find_certified_threshold(hi, hi * 2).unwrap(), hi);
        assert!(matches!(
            find_certified_threshold(10, 1000),
            Err(Error::NoCertifiedEndpoint { .. })
        ));
    }
}
