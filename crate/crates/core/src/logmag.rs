use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};

/// A real number stored as a sign and the natural log of its magnitude.
///
/// Covers values far outside binary64 range, e.g. `exp(10^7)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogMagnitude {
    sign: i8,
    log_abs: f64,
}

impl LogMagnitude {
    pub const ZERO: Self = Self {
        sign: 0,
        log_abs: f64::NEG_INFINITY,
    };

    /// `sign` is clamped to {-1, 0, 1}; a zero sign ignores `log_abs`.
    pub fn new(sign: i8, log_abs: f64) -> Self {
        if sign == 0 || log_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            Self {
                sign: sign.signum(),
                log_abs,
            }
        }
    }

    /// The positive number `exp(log_abs)`.
    pub fn from_log(log_abs: f64) -> Self {
        Self::new(1, log_abs)
    }

    pub fn from_f64(value: f64) -> Self {
        if value == 0.0 {
            Self::ZERO
        } else {
            Self::new(if value > 0.0 { 1 } else { -1 }, value.abs().ln())
        }
    }

    pub fn to_f64(self) -> f64 {
        f64::from(self.sign) * self.log_abs.exp()
    }

    pub fn sign(self) -> i8 {
        self.sign
    }

    /// `ln |x|`, or `-inf` for zero.
    pub fn log_abs(self) -> f64 {
        self.log_abs
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn is_finite(self) -> bool {
        self.sign == 0 || self.log_abs.is_finite()
    }

    pub fn abs(self) -> Self {
        Self::new(self.sign.abs(), self.log_abs)
    }

    /// `x^p` for positive `x`.
    pub fn powf(self, p: f64) -> Self {
        assert!(self.sign > 0, "powf needs a positive base");
        Self::from_log(self.log_abs * p)
    }
}

impl From<&BigInt> for LogMagnitude {
    /// Uses the leading 64 bits, so the log is accurate to about `2^-63` relative.
    fn from(value: &BigInt) -> Self {
        let sign = match value.sign() {
            Sign::NoSign => return Self::ZERO,
            Sign::Plus => 1,
            Sign::Minus => -1,
        };
        let bits = value.bits();
        let shift = bits.saturating_sub(64);
        let top = (value.magnitude() >> shift).iter_u64_digits().next().unwrap_or(0);
        Self::new(sign, (top as f64).ln() + shift as f64 * std::f64::consts::LN_2)
    }
}

impl Default for LogMagnitude {
    fn default() -> Self {
        Self::ZERO
    }
}

impl fmt::Display for LogMagnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            1 => write!(f, "exp({})", self.log_abs),
            _ => write!(f, "-exp({})", self.log_abs),
        }
    }
}

impl Neg for LogMagnitude {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            sign: -self.sign,
            log_abs: self.log_abs,
        }
    }
}

impl Mul for LogMagnitude {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(self.sign * rhs.sign, self.log_abs + rhs.log_abs)
    }
}

impl Div for LogMagnitude {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.is_zero(), "division by zero");
        Self::new(self.sign * rhs.sign, self.log_abs - rhs.log_abs)
    }
}

impl Add for LogMagnitude {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.log_abs >= rhs.log_abs {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let d = small.log_abs - big.log_abs;
        if big.sign == small.sign {
            Self::new(big.sign, big.log_abs + d.exp().ln_1p())
        } else if d == 0.0 {
            Self::ZERO
        } else {
            Self::new(big.sign, big.log_abs + (-d.exp_m1()).ln())
        }
    }
}

impl Sub for LogMagnitude {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl PartialOrd for LogMagnitude {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                0 => Some(Ordering::Equal),
                1 => self.log_abs.partial_cmp(&other.log_abs),
                _ => other.log_abs.partial_cmp(&self.log_abs),
            },
            o => Some(o),
        }
    }
}

impl std::iter::Sum for LogMagnitude {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs())
    }

    #[test]
    fn arithmetic_matches_f64() {
        let vals = [3.5, -2.25, 1e-8, -7e5, 0.0];
        for &a in &vals {
            for &b in &vals {
                let (la, lb) = (LogMagnitude::from_f64(a), LogMagnitude::from_f64(b));
                assert!(close((la + lb).to_f64(), a + b, 1e-12), "{a} + {b}");
                assert!(close((la - lb).to_f64(), a - b, 1e-12), "{a} - {b}");
                assert!(close((la * lb).to_f64(), a * b, 1e-12), "{a} * {b}");
                assert_eq!(la.partial_cmp(&lb), a.partial_cmp(&b), "{a} cmp {b}");
            }
        }
    }

    #[test]
    fn exact_cancellation_is_zero() {
        let x = LogMagnitude::from_log(1e7);
        assert!((x - x).is_zero());
    }

    #[test]
    fn huge_magnitudes_compare() {
        let a = LogMagnitude::from_log(1.0e7);
        let b = LogMagnitude::from_log(1.0e7 - 1.0);
        assert!(a > b);
        assert!((a + b).log_abs() > a.log_abs());
        assert!(-a < -b);
        assert!(LogMagnitude::ZERO < b);
    }

    #[test]
    fn from_bigint() {
        assert!(LogMagnitude::from(&BigInt::from(0)).is_zero());
        let v = LogMagnitude::from(&BigInt::from(-12345));
        assert_eq!(v.sign(), -1);
        assert!(close(v.to_f64(), -12345.0, 1e-15));
        let big = BigInt::from(3).pow(5000);
        let l = LogMagnitude::from(&big);
        assert!(close(l.log_abs(), 5000.0 * 3f64.ln(), 1e-15));
    }

    proptest! {
        #[test]
        fn round_trip(mant in 1.0f64..10.0, exp in -299i32..299, neg in any::<bool>()) {
            let v = if neg { -mant } else { mant } * 10f64.powi(exp);
            let l = LogMagnitude::from_f64(v);
            prop_assert_eq!(l.sign(), if neg { -1 } else { 1 });
            prop_assert_eq!(l.log_abs(), v.abs().ln());
            prop_assert!(close(l.to_f64(), v, 1e-13));
        }
    }
}
