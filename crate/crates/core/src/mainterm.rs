//! Main terms of `log 1/(q^a; q^M)_inf` on a Farey arc, the four closed forms
//! of `𝔐_G = 𝔐_{1,4} - 𝔐_{3,4} + 𝔐_{6,8}` and the explicit bounds that go
//! with them.

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::specfun::{hurwitz_zeta_deriv_minus1, PI};

/// Standing lower bound on `X`.
pub const MIN_X: f64 = 16.0;

/// `X` from which the minor-arc bound is certified.
pub const MINOR_ARC_CERTIFIED_X: f64 = 3.4e7;

/// A reduced fraction `h/k` with `1 <= h <= k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArcParams {
    h: i64,
    k: i64,
}

impl ArcParams {
    pub fn new(h: i64, k: i64) -> Result<Self> {
        if k <= 0 {
            return Err(Error::NonPositiveDenominator(k));
        }
        if !(1..=k).contains(&h) {
            return Err(Error::ArcOutOfRange { h, k });
        }
        let g = h.gcd(&k);
        if g != 1 {
            return Err(Error::NotCoprime { h, k, gcd: g });
        }
        Ok(Self { h, k })
    }

    pub fn h(&self) -> i64 {
        self.h
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn as_f64(&self) -> f64 {
        self.h as f64 / self.k as f64
    }
}

/// Residue-class data of a pair `(h/k, a mod M)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResidueData {
    /// `(k, M)`
    pub m_star: i64,
    /// The representative of `-h a (mod (k, M))` in `1..=(k, M)`.
    pub b: i64,
    /// `(k, M) - b`, or `(k, M)` when `b = (k, M)`.
    pub b_star: i64,
    /// `k M / (k, M)`
    pub big_k: i64,
}

pub fn compute_residue_data(h: i64, a: i64, k: i64, modulus: i64) -> Result<ResidueData> {
    if k <= 0 {
        return Err(Error::NonPositiveDenominator(k));
    }
    if modulus <= 0 {
        return Err(Error::NonPositiveModulus(modulus));
    }
    if !(1..=modulus).contains(&a) {
        return Err(Error::ResidueOutOfRange { a, modulus });
    }
    let g = h.gcd(&k);
    if g != 1 {
        return Err(Error::NotCoprime { h, k, gcd: g });
    }
    let m_star = k.gcd(&modulus);
    let mut b = (-h * a).rem_euclid(m_star);
    if b == 0 {
        b = m_star;
    }
    let b_star = if b == m_star { m_star } else { m_star - b };
    Ok(ResidueData {
        m_star,
        b,
        b_star,
        big_k: k / m_star * modulus,
    })
}

/// `τ = 1/X + 2πiY` with `N = ⌊√(2πX)⌋`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauParam {
    x: f64,
    y: f64,
    big_n: u64,
}

impl TauParam {
    /// Checks only the standing assumption `X >= 16`; arc admissibility is
    /// checked by [`crate::farey::make_tau`].
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x >= MIN_X) || !x.is_finite() {
            return Err(Error::XTooSmall(x));
        }
        if !y.is_finite() {
            return Err(Error::Domain {
                name: "Y",
                value: y,
                constraint: "finite",
            });
        }
        Ok(Self {
            x,
            y,
            big_n: farey_order_for(x),
        })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    /// `N = ⌊√(2πX)⌋`
    pub fn big_n(&self) -> u64 {
        self.big_n
    }

    pub fn tau(&self) -> Complex64 {
        Complex64::new(1.0 / self.x, 2.0 * PI * self.y)
    }

    /// `1/τ` written without forming `τ` first.
    pub fn inv_tau(&self) -> Complex64 {
        let xi = 1.0 / self.x;
        let w = 2.0 * PI * self.y;
        let d = xi * xi + w * w;
        Complex64::new(xi / d, -w / d)
    }
}

/// `⌊√(2πX)⌋`, corrected for rounding at perfect squares.
pub fn farey_order_for(x: f64) -> u64 {
    let target = 2.0 * PI * x;
    let mut n = target.sqrt().floor() as u64;
    while ((n + 1) as f64) * ((n + 1) as f64) <= target {
        n += 1;
    }
    while n > 0 && (n as f64) * (n as f64) > target {
        n -= 1;
    }
    n
}

/// `𝔐_{a,M}`: the main term of `log 1/(q^a; q^M)_inf` at
/// `q = exp(-τ + 2πi h/k)`.
pub fn main_term(a: i64, modulus: i64, arc: ArcParams, tau: &TauParam) -> Result<Complex64> {
    let r = compute_residue_data(arc.h, a, arc.k, modulus)?;
    let ms = r.m_star as f64;
    let beta = r.b as f64 / ms;
    let beta_star = r.b_star as f64 / ms;
    let k = arc.k as f64;
    let prefactor = ms * ms / (k * k * modulus as f64);
    let real = PI * PI * (beta * beta - beta + 1.0 / 6.0);
    let imag = if r.b == r.b_star {
        0.0
    } else {
        2.0 * PI * (hurwitz_zeta_deriv_minus1(beta_star)? - hurwitz_zeta_deriv_minus1(beta)?)
    };
    Ok(tau.inv_tau() * prefactor * Complex64::new(real, imag))
}

/// Residue class of `k` that selects the closed form of `𝔐_G`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArcCase {
    /// `k` odd
    Case1,
    /// `k ≡ 2 (mod 4)`
    Case2,
    /// `k ≡ 4 (mod 8)`
    Case3,
    /// `k ≡ 0 (mod 8)`
    Case4,
}

impl ArcCase {
    pub fn index(self) -> u8 {
        match self {
            ArcCase::Case1 => 1,
            ArcCase::Case2 => 2,
            ArcCase::Case3 => 3,
            ArcCase::Case4 => 4,
        }
    }
}

pub fn case_classify(k: i64) -> Result<ArcCase> {
    if k <= 0 {
        return Err(Error::NonPositiveDenominator(k));
    }
    Ok(if k % 2 == 1 {
        ArcCase::Case1
    } else if k % 4 == 2 {
        ArcCase::Case2
    } else if k % 8 == 4 {
        ArcCase::Case3
    } else {
        ArcCase::Case4
    })
}

/// `ζ'(-1, 1/4) - ζ'(-1, 3/4)`.
pub fn zeta_prime_quarter_difference() -> f64 {
    // Arguments are in range, so these cannot fail.
    hurwitz_zeta_deriv_minus1(0.25).expect("1/4 in range")
        - hurwitz_zeta_deriv_minus1(0.75).expect("3/4 in range")
}

/// `χ(h)`: `+1` for `h ≡ 1`, `-1` for `h ≡ 3 (mod 4)`. Even `h` cannot occur
/// on an arc with `4 | k`.
fn chi(h: i64) -> Result<f64> {
    match h.rem_euclid(4) {
        1 => Ok(1.0),
        3 => Ok(-1.0),
        _ => Err(Error::NotCoprime {
            h,
            k: 4,
            gcd: h.gcd(&4),
        }),
    }
}

/// Closed form of `𝔐_G` on the arc `h/k`.
pub fn main_term_g(arc: ArcParams, tau: &TauParam) -> Result<Complex64> {
    let k2 = (arc.k as f64).powi(2);
    let inv_tau = tau.inv_tau();
    let value = match case_classify(arc.k)? {
        ArcCase::Case1 => inv_tau * (PI * PI / (48.0 * k2)),
        ArcCase::Case2 => inv_tau * (PI * PI / (12.0 * k2)),
        ArcCase::Case3 => {
            let imag = 16.0 * PI * chi(arc.h)? / k2 * zeta_prime_quarter_difference();
            inv_tau * Complex64::new(-PI * PI / (6.0 * k2), imag)
        }
        ArcCase::Case4 => inv_tau * (-PI * PI / (6.0 * k2)),
    };
    debug_assert!({
        let composed = main_term_g_composed(arc, tau)?;
        (value - composed).norm() <= 1e-10 * value.norm().max(1e-300)
    });
    Ok(value)
}

/// `𝔐_{1,4} - 𝔐_{3,4} + 𝔐_{6,8}` from three [`main_term`] evaluations.
pub fn main_term_g_composed(arc: ArcParams, tau: &TauParam) -> Result<Complex64> {
    Ok(main_term(1, 4, arc, tau)? - main_term(3, 4, arc, tau)? + main_term(6, 8, arc, tau)?)
}

/// Upper bound on `Re 𝔐_G` over every admissible `Y` on an arc of
/// denominator `k`.
pub fn re_mainterm_upper_bound(case: ArcCase, k: i64, x: f64) -> f64 {
    let k2 = (k as f64).powi(2);
    match case {
        ArcCase::Case1 => PI * PI * x / (48.0 * k2),
        ArcCase::Case2 => PI * PI * x / (12.0 * k2),
        ArcCase::Case3 => 2.94 * x / k2,
        ArcCase::Case4 => 0.0,
    }
}

/// Coefficients of `c1 X^{1/2} log X + c2 X^{1/2} + c3 log X + c4 + c5 X^{-1/2}`
/// bounding `|Re E_G|` in each case.
pub fn error_bound_coefficients(case: ArcCase) -> [f64; 5] {
    match case {
        ArcCase::Case1 => [1.32, 512.74, 1.92, 42.74, 2.72],
        ArcCase::Case2 => [1.32, 95.77, 0.96, 11.61, 2.72],
        ArcCase::Case3 => [1.32, 21.1, 0.48, 3.22, 2.72],
        ArcCase::Case4 => [1.32, 13.27, 0.36, 1.73, 2.72],
    }
}

/// Explicit bound on `|Re(log G(q) - 𝔐_G)|` on an arc of the given case.
pub fn error_bound_g(case: ArcCase, x: f64) -> Result<f64> {
    if !(x >= MIN_X) || !x.is_finite() {
        return Err(Error::XTooSmall(x));
    }
    let [c1, c2, c3, c4, c5] = error_bound_coefficients(case);
    let sq = x.sqrt();
    let lx = x.ln();
    Ok(c1 * sq * lx + c2 * sq + c3 * lx + c4 + c5 / sq)
}

/// `log |G(q)|` bound off the two dominant arcs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinorArcBound {
    /// `(π²/48 - 1/100) X`
    pub log_bound: f64,
    /// Whether `X >= 3.4e7`, the regime in which the bound is proved.
    pub certified: bool,
}

pub fn minor_arc_log_bound(x: f64) -> MinorArcBound {
    MinorArcBound {
        log_bound: (PI * PI / 48.0 - 0.01) * x,
        certified: x >= MINOR_ARC_CERTIFIED_X,
    }
}

/// Re-does the arithmetic behind the minor-arc bound at a given `X`: every
/// non-dominant arc (and the dominant ones once `|Y| >= 1/(2πX)`) has
/// `Re 𝔐_G + |Re E_G|` below `(π²/48 - 1/100) X`.
///
/// Only the worst denominator of each case matters since the main-term bound
/// decreases in `k` while the error bound does not depend on it.
pub fn minor_arc_arithmetic_holds(x: f64) -> Result<bool> {
    let target = minor_arc_log_bound(x).log_bound;
    let worst = [
        (ArcCase::Case1, 3),
        (ArcCase::Case2, 6),
        (ArcCase::Case3, 4),
        (ArcCase::Case4, 8),
    ];
    for (case, k) in worst {
        if re_mainterm_upper_bound(case, k, x) + error_bound_g(case, x)? > target {
            return Ok(false);
        }
    }
    // Dominant arcs with |Y| >= 1/(2πX): Re(1/τ) <= X/2.
    for case in [ArcCase::Case1, ArcCase::Case2] {
        if PI * PI / 48.0 * x / 2.0 + error_bound_g(case, x)? > target {
            return Ok(false);
        }
    }
    Ok(true)
}
