//! Finite trigonometric sums of Hurwitz zeta and digamma values at `α/k`,
//! checked against their closed forms.

use crate::error::Result;
use crate::specfun::{digamma, hurwitz_zeta, hurwitz_zeta_deriv_minus1, EULER_GAMMA, PI};

/// Largest deviation seen for one identity.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub name: &'static str,
    pub checks: usize,
    pub max_abs_error: f64,
    /// `(k, θ)` (or `(k, d)` for the multiplication identity) where the
    /// maximum occurred.
    pub worst_at: (i64, i64),
}

impl IdentityReport {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checks: 0,
            max_abs_error: 0.0,
            worst_at: (0, 0),
        }
    }

    fn record(&mut self, lhs: f64, rhs: f64, at: (i64, i64)) {
        self.checks += 1;
        let err = (lhs - rhs).abs();
        if err > self.max_abs_error || err.is_nan() {
            self.max_abs_error = err;
            self.worst_at = at;
        }
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_abs_error <= tol
    }
}

/// The seven digamma/zeta sums over `α = 1..=k`, for every `k <= k_max` and
/// `1 <= θ <= k - 1` (all `θ` for the plain digamma sum).
pub fn lemma_suite(k_max: i64) -> Result<Vec<IdentityReport>> {
    let mut cos_z0 = IdentityReport::new("sum cos(2 pi a t/k) zeta(0, a/k) = -1/2");
    let mut cos_z2 =
        IdentityReport::new("sum cos(2 pi a t/k) zeta(2, a/k) = (pi^2/6)(6t^2 - 6kt + k^2)");
    let mut sin_z0 = IdentityReport::new("sum sin(2 pi a t/k) zeta(0, a/k) = cot(pi t/k)/2");
    let mut sin_z2 = IdentityReport::new(
        "sum sin(2 pi a t/k) zeta(2, a/k) = 2 pi k^2 (zeta'(-1, t/k) - zeta'(-1, 1 - t/k))",
    );
    let mut cos_psi = IdentityReport::new("sum cos(2 pi a t/k) psi(a/k) = k log(2 sin(pi t/k))");
    let mut sin_psi = IdentityReport::new("sum sin(2 pi a t/k) psi(a/k) = (pi/2)(2t - k)");
    let mut sum_psi = IdentityReport::new("sum psi(a/k) = -k(gamma + log k)");

    for k in 1..=k_max {
        let kf = k as f64;
        let mut z0 = Vec::with_capacity(k as usize);
        let mut z2 = Vec::with_capacity(k as usize);
        let mut psi = Vec::with_capacity(k as usize);
        for alpha in 1..=k {
            let x = alpha as f64 / kf;
            z0.push(hurwitz_zeta(0.0, x)?);
            z2.push(hurwitz_zeta(2.0, x)?);
            psi.push(digamma(x)?);
        }
        sum_psi.record(psi.iter().sum(), -kf * (EULER_GAMMA + kf.ln()), (k, 0));

        for theta in 1..k {
            let tf = theta as f64;
            let mut sums = [0.0f64; 6];
            for alpha in 1..=k {
                // Reduce α θ mod k first so the angle stays small and exact.
                let turn = ((alpha * theta) % k) as f64 / kf;
                let (s, c) = (2.0 * PI * turn).sin_cos();
                let i = (alpha - 1) as usize;
                sums[0] += c * z0[i];
                sums[1] += c * z2[i];
                sums[2] += s * z0[i];
                sums[3] += s * z2[i];
                sums[4] += c * psi[i];
                sums[5] += s * psi[i];
            }
            let at = (k, theta);
            let x = tf / kf;
            cos_z0.record(sums[0], -0.5, at);
            cos_z2.record(
                sums[1],
                PI * PI / 6.0 * (6.0 * tf * tf - 6.0 * kf * tf + kf * kf),
                at,
            );
            sin_z0.record(sums[2], 0.5 / (PI * x).tan(), at);
            sin_z2.record(
                sums[3],
                2.0 * PI
                    * kf
                    * kf
                    * (hurwitz_zeta_deriv_minus1(x)? - hurwitz_zeta_deriv_minus1(1.0 - x)?),
                at,
            );
            cos_psi.record(sums[4], kf * (2.0 * (PI * x).sin()).ln(), at);
            sin_psi.record(sums[5], 0.5 * PI * (2.0 * tf - kf), at);
        }
    }
    Ok(vec![cos_z0, cos_z2, sin_z0, sin_z2, cos_psi, sin_psi, sum_psi])
}

/// `Σ_{ℓ ≡ c (d), 1 <= ℓ <= k} ζ(s, ℓ/k) = (k/d)^s ζ(s, c/d)` for every
/// `d | k`, `1 <= c <= d`, `k <= k_max` and each `s` given.
pub fn multiplication_identity(k_max: i64, exponents: &[f64]) -> Result<IdentityReport> {
    let mut report = IdentityReport::new("sum_{l = c (d)} zeta(s, l/k) = (k/d)^s zeta(s, c/d)");
    for k in 1..=k_max {
        let kf = k as f64;
        for &s in exponents {
            let values = (1..=k)
                .map(|l| hurwitz_zeta(s, l as f64 / kf))
                .collect::<Result<Vec<_>>>()?;
            for d in (1..=k).filter(|d| k % d == 0) {
                for c in 1..=d {
                    let lhs: f64 = (c..=k).step_by(d as usize).map(|l| values[(l - 1) as usize]).sum();
                    let rhs = (kf / d as f64).powf(s) * hurwitz_zeta(s, c as f64 / d as f64)?;
                    report.record(lhs, rhs, (k, d));
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        for r in lemma_suite(12).unwrap() {
            assert!(r.passes(1e-10), "{r:?}");
            assert!(r.checks > 0);
        }
        let m = multiplication_identity(12, &[0.0, 0.5, 2.0]).unwrap();
        assert!(m.passes(1e-10), "{m:?}");
    }

    #[test]
    fn report_tracks_worst_case() {
        let mut r = IdentityReport::new("x");
        r.record(1.0, 1.5, (3, 1));
        r.record(1.0, 1.1, (4, 1));
        assert_eq!(r.worst_at, (3, 1));
        assert_eq!(r.checks, 2);
        assert!(!r.passes(0.1));
    }
}
