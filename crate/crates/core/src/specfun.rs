//! Real special functions: Hurwitz zeta and its s-derivative, digamma,
//! log-gamma and the modified Bessel function `I_ν` in log space.
//!
//! Zeta, digamma and log-gamma share one scheme: shift the argument up to at
//! least [`SHIFT_THRESHOLD`] with the functional recurrence, then apply an
//! Euler–Maclaurin / Stirling tail with [`BERNOULLI_TERMS`] Bernoulli numbers.
#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};
use crate::logmag::LogMagnitude;

pub const PI: f64 = std::f64::consts::PI;
pub const EULER_GAMMA: f64 = 0.577215664901532860606512090082;
pub const LN_2: f64 = std::f64::consts::LN_2;
pub const LN_PI: f64 = 1.14472988584940017414342735135;
/// `ln sqrt(2π)`
pub const LN_SQRT_2PI: f64 = 0.918938533204672741780329736406;
/// Glaisher–Kinkelin constant.
pub const GLAISHER_A: f64 = 1.28242712910062263687534256887;

const SHIFT_THRESHOLD: f64 = 15.0;

/// Taylor coefficients of `ζ'(-1, 3/2 + u)` in `u`.
const ZETA_PRIME_MINUS1_TAYLOR: [f64; 34] = [
    -0.292744150953078244661,
    -0.0397207708399179641258,
    0.51824498698928826028,
    0.15580036675744655157,
    -0.0345331935097633331498,
    0.011742425283353643637,
    -0.00482534698148225720908,
    0.00220506916714990004797,
    -0.00107782549114641086883,
    0.000551747645497313077288,
    -0.000292097045866795194697,
    0.000158639597799102726367,
    -0.0000879096411556359974513,
    0.0000495156140798575828372,
    -0.0000282693956890362694741,
    0.0000163247460321962749654,
    -0.00000951974613391880087287,
    0.00000559878803676622791938,
    -0.00000331742352012987242831,
    0.00000197867943524274705387,
    -0.00000118715927346046714713,
    7.16046828969486543807e-7,
    -4.33961417824917601064e-7,
    2.64148107586290852315e-7,
    -1.61422992917073757181e-7,
    9.90057893771837433767e-8,
    -6.09265240883453783719e-8,
    3.76089227037980143142e-8,
    -2.32816981654106910782e-8,
    1.44507032890988403362e-8,
    -8.99154650429937438157e-9,
    5.60763032668358260865e-9,
    -3.50476864423379772508e-9,
    2.1949054991191320206e-9,
];
const BERNOULLI_TERMS: usize = 12;

/// `B_{2j}` for `j = 1..=12`.
const BERNOULLI: [f64; BERNOULLI_TERMS] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

/// Order at which the Bessel evaluator switches from the power series to the
/// large-argument expansion.
pub const BESSEL_SEAM: f64 = 30.0;
const BESSEL_ASYMPTOTIC_TERMS: usize = 20;

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "alpha",
            value: alpha,
            constraint: "0 < alpha <= 1",
        })
    }
}

/// Euler–Maclaurin value of `ζ(s, α)` together with `∂ζ/∂s`.
fn hurwitz_with_derivative(s: f64, alpha: f64) -> (f64, f64) {
    let shift = (SHIFT_THRESHOLD - alpha).ceil().max(0.0) as usize;
    let mut value = 0.0;
    let mut deriv = 0.0;
    for n in 0..shift {
        let base = n as f64 + alpha;
        let lb = base.ln();
        let t = (-s * lb).exp();
        value += t;
        deriv -= lb * t;
    }
    let x = shift as f64 + alpha;
    let lx = x.ln();
    let xs = (-s * lx).exp();
    let sm1 = s - 1.0;
    value += x * xs / sm1;
    deriv += x * xs * (-lx / sm1 - 1.0 / (sm1 * sm1));
    value += 0.5 * xs;
    deriv -= 0.5 * lx * xs;

    // Rising factorial s (s+1) ... (s+2j-2) and its s-derivative.
    let mut poch = s;
    let mut poch_d = 1.0;
    let mut factorial = 2.0;
    let mut x_pow = xs / x;
    for (j, b) in BERNOULLI.iter().enumerate() {
        let j = j + 1;
        if j > 1 {
            let f1 = s + (2 * j - 3) as f64;
            let f2 = s + (2 * j - 2) as f64;
            poch_d = poch_d * f1 * f2 + poch * (f1 + f2);
            poch *= f1 * f2;
            factorial *= ((2 * j - 1) * (2 * j)) as f64;
            x_pow /= x * x;
        }
        let c = b / factorial;
        value += c * poch * x_pow;
        deriv += c * (poch_d - lx * poch) * x_pow;
    }
    (value, deriv)
}

/// Hurwitz zeta `ζ(s, α) = Σ_{n>=0} (n+α)^{-s}` for real `s ≠ 1`, `0 < α <= 1`.
pub fn hurwitz_zeta(s: f64, alpha: f64) -> Result<f64> {
    if s == 1.0 {
        return Err(Error::ZetaPole);
    }
    check_alpha(alpha)?;
    Ok(hurwitz_with_derivative(s, alpha).0)
}

/// `∂ζ(s, α)/∂s` for real `s ≠ 1`.
pub fn hurwitz_zeta_deriv(s: f64, alpha: f64) -> Result<f64> {
    if s == 1.0 {
        return Err(Error::ZetaPole);
    }
    check_alpha(alpha)?;
    Ok(hurwitz_with_derivative(s, alpha).1)
}

/// `ζ'(-1, α) = -α log α + ζ'(-1, 1 + α)`, the second term from a Taylor
/// series about `3/2`. Accurate to a few ulps of the result.
pub fn hurwitz_zeta_deriv_minus1(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let u = alpha - 0.5;
    let shifted = ZETA_PRIME_MINUS1_TAYLOR
        .iter()
        .rev()
        .fold(0.0f64, |acc, c| acc.mul_add(u, *c));
    Ok(shifted - alpha * alpha.ln())
}

/// `ψ(x) = Γ'(x)/Γ(x)` for `x > 0`.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            name: "x",
            value: x,
            constraint: "x > 0",
        });
    }
    let mut z = x;
    let mut acc = 0.0;
    while z < SHIFT_THRESHOLD {
        acc -= 1.0 / z;
        z += 1.0;
    }
    let inv2 = 1.0 / (z * z);
    let mut pow = inv2;
    let mut tail = 0.0;
    for (j, b) in BERNOULLI.iter().enumerate() {
        let two_j = (2 * (j + 1)) as f64;
        tail += b / two_j * pow;
        pow *= inv2;
    }
    Ok(acc + z.ln() - 0.5 / z - tail)
}

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            name: "x",
            value: x,
            constraint: "x > 0",
        });
    }
    Ok(log_gamma_positive(x))
}

fn log_gamma_positive(x: f64) -> f64 {
    let mut z = x;
    let mut prod = 1.0;
    while z < SHIFT_THRESHOLD {
        prod *= z;
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut pow = inv;
    let mut tail = 0.0;
    for (j, b) in BERNOULLI.iter().enumerate() {
        let two_j = (2 * (j + 1)) as f64;
        tail += b / (two_j * (two_j - 1.0)) * pow;
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + LN_SQRT_2PI + tail - prod.ln()
}

/// `(sign Γ(x), ln |Γ(x)|)` for any real `x` that is not a pole; `None` at
/// the poles `0, -1, -2, ...`.
pub fn log_gamma_signed(x: f64) -> Option<(i8, f64)> {
    if x > 0.0 {
        return Some((1, log_gamma_positive(x)));
    }
    if x == x.floor() {
        return None;
    }
    // Reflection: Γ(x) Γ(1-x) = π / sin(πx).
    let s = sin_pi(x);
    let sign = if s > 0.0 { 1 } else { -1 };
    Some((sign, LN_PI - s.abs().ln() - log_gamma_positive(1.0 - x)))
}

/// `sin(πx)` with the argument reduced exactly first.
fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (0.5 * x).floor();
    // r in [0, 2)
    let (r, sign) = if r >= 1.0 { (r - 1.0, -1.0) } else { (r, 1.0) };
    let r = if r > 0.5 { 1.0 - r } else { r };
    sign * (PI * r).sin()
}

fn bessel_series(order: f64, x: f64) -> LogMagnitude {
    let log_half = (0.5 * x).ln();
    let mut pos = (0.0f64, 0.0f64);
    let mut neg = (0.0f64, 0.0f64);
    let mut scale = None;
    let mut k = 0usize;
    loop {
        let kf = k as f64;
        if let Some((sign, lg)) = log_gamma_signed(kf + order + 1.0) {
            let log_term = (2.0 * kf + order) * log_half - log_gamma_positive(kf + 1.0) - lg;
            let s = *scale.get_or_insert(log_term);
            let t = (log_term - s).exp();
            let acc = if sign > 0 { &mut pos } else { &mut neg };
            let y = t - acc.1;
            let sum = acc.0 + y;
            acc.1 = (sum - acc.0) - y;
            acc.0 = sum;
            let total = pos.0 + neg.0;
            if kf > 0.5 * x + 1.0 && kf + order > 0.0 && t < 1e-18 * total.abs() {
                break;
            }
        }
        k += 1;
        if k > 2000 {
            break;
        }
    }
    let scale = scale.unwrap_or(0.0);
    let total = pos.0 - neg.0;
    let mut out = LogMagnitude::from_f64(total);
    if !out.is_zero() {
        out = LogMagnitude::new(out.sign(), out.log_abs() + scale);
    }
    out
}

fn bessel_asymptotic(order: f64, x: f64) -> LogMagnitude {
    let mu = 4.0 * order * order;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=BESSEL_ASYMPTOTIC_TERMS {
        let odd = (2 * k - 1) as f64;
        term *= -(mu - odd * odd) / (8.0 * k as f64 * x);
        sum += term;
    }
    let log_prefactor = x - 0.5 * (2.0 * PI * x).ln();
    let s = LogMagnitude::from_f64(sum);
    LogMagnitude::new(s.sign(), s.log_abs() + log_prefactor)
}

/// `I_ν(x)` as a [`LogMagnitude`]: power series for `x <= 30`, the
/// large-argument expansion with 20 correction terms beyond.
pub fn bessel_i_log(order: f64, x: f64) -> Result<LogMagnitude> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            name: "x",
            value: x,
            constraint: "x > 0",
        });
    }
    if !order.is_finite() {
        return Err(Error::Domain {
            name: "order",
            value: order,
            constraint: "finite",
        });
    }
    Ok(if x <= BESSEL_SEAM {
        bessel_series(order, x)
    } else {
        bessel_asymptotic(order, x)
    })
}

/// Exposed so tests can probe both sides of the seam.
#[doc(hidden)]
pub fn bessel_i_log_branches(order: f64, x: f64) -> (LogMagnitude, LogMagnitude) {
    (bessel_series(order, x), bessel_asymptotic(order, x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_riemann_values() {
        assert!((hurwitz_zeta(2.0, 1.0).unwrap() - PI * PI / 6.0).abs() < 1e-14);
        assert!((hurwitz_zeta(2.0, 0.5).unwrap() - PI * PI / 2.0).abs() < 1e-13);
        assert!((hurwitz_zeta(4.0, 1.0).unwrap() - PI.powi(4) / 90.0).abs() < 1e-14);
    }

    #[test]
    fn zeta_at_zero_is_linear() {
        for &a in &[0.25, 0.5, 1.0] {
            assert!((hurwitz_zeta(0.0, a).unwrap() - (0.5 - a)).abs() < 1e-13);
        }
    }

    #[test]
    fn zeta_at_minus_one_is_bernoulli() {
        for &a in &[0.1, 0.25, 0.5, 0.9, 1.0] {
            let b2 = a * a - a + 1.0 / 6.0;
            assert!((hurwitz_zeta(-1.0, a).unwrap() + 0.5 * b2).abs() < 1e-12);
        }
    }

    #[test]
    fn zeta_rejects_pole_and_bad_alpha() {
        assert_eq!(hurwitz_zeta(1.0, 0.5), Err(Error::ZetaPole));
        assert!(hurwitz_zeta(2.0, 0.0).is_err());
        assert!(hurwitz_zeta(2.0, 1.5).is_err());
    }

    #[test]
    fn zeta_derivative_at_minus_one() {
        let expected = 1.0 / 12.0 - GLAISHER_A.ln();
        assert!((hurwitz_zeta_deriv_minus1(1.0).unwrap() - expected).abs() < 1e-15);
        let half = -LN_2 / 24.0 - 0.5 * expected;
        assert!((hurwitz_zeta_deriv_minus1(0.5).unwrap() - half).abs() < 1e-15);
    }

    #[test]
    fn zeta_derivative_minus_one_paths_agree() {
        for i in 1..=200 {
            let a = i as f64 / 200.0;
            let series = hurwitz_zeta_deriv_minus1(a).unwrap();
            let euler_maclaurin = hurwitz_zeta_deriv(-1.0, a).unwrap();
            assert!((series - euler_maclaurin).abs() < 1e-12, "alpha = {a}");
        }
    }

    #[test]
    fn zeta_derivative_matches_central_difference() {
        for &(s, a) in &[(2.0, 0.3), (-0.5, 0.7), (3.5, 1.0)] {
            let h = 1e-5;
            let fd = (hurwitz_zeta(s + h, a).unwrap() - hurwitz_zeta(s - h, a).unwrap()) / (2.0 * h);
            assert!((hurwitz_zeta_deriv(s, a).unwrap() - fd).abs() < 1e-8);
        }
    }

    #[test]
    fn digamma_values() {
        assert!((digamma(1.0).unwrap() + EULER_GAMMA).abs() < 1e-14);
        assert!((digamma(0.5).unwrap() + EULER_GAMMA + 2.0 * LN_2).abs() < 1e-14);
        let k = 7;
        let sum: f64 = (1..=k).map(|a| digamma(a as f64 / k as f64).unwrap()).sum();
        let kf = k as f64;
        assert!((sum + kf * (EULER_GAMMA + kf.ln())).abs() < 1e-12);
        assert!(digamma(0.0).is_err());
        assert!(digamma(-1.5).is_err());
    }

    #[test]
    fn log_gamma_values() {
        assert!(log_gamma(1.0).unwrap().abs() < 1e-14);
        assert!(log_gamma(2.0).unwrap().abs() < 1e-14);
        assert!((log_gamma(0.5).unwrap() - 0.5 * LN_PI).abs() < 1e-14);
        let refl = log_gamma(0.25).unwrap() + log_gamma(0.75).unwrap();
        assert!((refl - (PI * 2f64.sqrt()).ln()).abs() < 1e-14);
        assert!((log_gamma(11.0).unwrap() - 3628800f64.ln()).abs() < 1e-13);
        assert!(log_gamma(0.0).is_err());
    }

    #[test]
    fn gamma_reflection_for_negative_arguments() {
        // Γ(-1/4) = -4.901666809860710580...
        let (s, l) = log_gamma_signed(-0.25).unwrap();
        assert_eq!(s, -1);
        assert!((l.exp() - 4.901_666_809_860_71).abs() < 1e-12);
        assert_eq!(log_gamma_signed(-2.0), None);
        assert_eq!(log_gamma_signed(0.0), None);
    }

    #[test]
    fn bessel_small_argument_leading_term() {
        let x = 1e-6;
        for &nu in &[-0.75, -1.25, 0.5] {
            let v = bessel_i_log(nu, x).unwrap();
            let (sg, lg) = log_gamma_signed(nu + 1.0).unwrap();
            assert_eq!(v.sign(), sg);
            assert!((v.log_abs() - (nu * (0.5 * x).ln() - lg)).abs() < 1e-10);
        }
    }

    #[test]
    fn bessel_half_order_closed_forms() {
        // I_{1/2}(x) = sqrt(2/(πx)) sinh x, I_{-1/2}(x) = sqrt(2/(πx)) cosh x.
        for &x in &[0.3, 2.0, 12.0, 29.0, 31.0, 80.0, 600.0] {
            let pre = 0.5 * (2.0 / (PI * x)).ln();
            let sinh_log = x + (-(-2.0 * x).exp_m1() / 2.0).ln();
            let cosh_log = x + ((1.0 + (-2.0 * x).exp()) / 2.0).ln();
            let a = bessel_i_log(0.5, x).unwrap().log_abs();
            let b = bessel_i_log(-0.5, x).unwrap().log_abs();
            assert!((a - pre - sinh_log).abs() < 1e-10, "x = {x}");
            assert!((b - pre - cosh_log).abs() < 1e-10, "x = {x}");
        }
    }

    #[test]
    fn bessel_seam_agreement() {
        for &nu in &[-0.75, -1.25] {
            for &x in &[29.5, 30.0, 30.5] {
                let (series, asym) = bessel_i_log_branches(nu, x);
                assert!((series.log_abs() - asym.log_abs()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn bessel_rejects_nonpositive_argument() {
        assert!(bessel_i_log(-0.75, 0.0).is_err());
        assert!(bessel_i_log(-0.75, -1.0).is_err());
    }
}
