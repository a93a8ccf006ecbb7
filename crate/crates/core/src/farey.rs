//! Farey dissection of `R/Z`: arcs `[h/k - 1/(kN), h/k + 1/(kN)]` around the
//! order-`N` fractions in `(0, 1]`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::mainterm::{ArcParams, TauParam};
use crate::specfun::PI;

/// All reduced `h/k` with `1 <= h <= k <= N`, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FareySystem {
    order: u64,
    fractions: Vec<ArcParams>,
}

impl FareySystem {
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn fractions(&self) -> &[ArcParams] {
        &self.fractions
    }

    pub fn len(&self) -> usize {
        self.fractions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fractions.is_empty()
    }

    /// Arc containing `t` mod 1. See [`arc_of`].
    pub fn arc_of(&self, t: f64) -> Result<ArcParams> {
        arc_of(t, self.order)
    }
}

pub fn farey_sequence(order: u64) -> Result<FareySystem> {
    if order == 0 {
        return Err(Error::ZeroOrder);
    }
    let n = order as i64;
    let mut fractions = Vec::new();
    let (mut a, mut b, mut c, mut d) = (0i64, 1i64, 1i64, n);
    loop {
        fractions.push(ArcParams::new(c, d)?);
        if c == d {
            break;
        }
        let m = (n + b) / d;
        (a, b, c, d) = (c, d, m * c - a, m * d - b);
    }
    Ok(FareySystem { order, fractions })
}

/// The arc of order `N` containing `t` (taken mod 1).
///
/// Arcs overlap; the one with the smallest `k`, then the smallest `h`, wins.
/// The arc around `1/1` also covers a neighbourhood of `0`.
pub fn arc_of(t: f64, order: u64) -> Result<ArcParams> {
    if order == 0 {
        return Err(Error::ZeroOrder);
    }
    if !t.is_finite() {
        return Err(Error::Domain {
            name: "t",
            value: t,
            constraint: "finite",
        });
    }
    match dyadic_numerator(t) {
        Some(num) if order <= FAST_ORDER_LIMIT => Ok(arc_of_dyadic(num, order)),
        _ => Ok(arc_of_rational(t, order)),
    }
}

/// Orders up to which `arc_of` works in `i128` for dyadic `t`.
const FAST_ORDER_LIMIT: u64 = 1 << 28;
const TWO_64: f64 = 18_446_744_073_709_551_616.0;

/// `t 2^64` when `t` is in `[0, 1)` and that product is an integer.
fn dyadic_numerator(t: f64) -> Option<i128> {
    if !(0.0..1.0).contains(&t) {
        return None;
    }
    let scaled = t * TWO_64;
    (scaled.fract() == 0.0).then_some(scaled as i128)
}

fn pick(h: i64, k: i64) -> Option<ArcParams> {
    let h = if h == 0 { k } else { h };
    if h > k || h.gcd(&k) != 1 {
        return None;
    }
    ArcParams::new(h, k).ok()
}

fn arc_of_dyadic(num: i128, order: u64) -> ArcParams {
    let den: i128 = 1 << 64;
    let n = order as i128;
    for k in 1..=order as i64 {
        let tk = num * k as i128;
        let lo = tk >> 64;
        for h in [lo, lo + 1] {
            // |t k - h| N <= 1, scaled by 2^64.
            if (tk - h * den).abs() * n <= den {
                if let Some(arc) = pick(h as i64, k) {
                    return arc;
                }
            }
        }
    }
    unreachable!("Farey arcs cover the circle")
}

fn arc_of_rational(t: f64, order: u64) -> ArcParams {
    let t_exact = BigRational::from_float(t).expect("finite");
    let t_exact = &t_exact - t_exact.floor();
    let n = BigInt::from(order);
    let one = BigRational::from_integer(BigInt::from(1));
    for k in 1..=order as i64 {
        let tk = &t_exact * BigInt::from(k);
        let lo = tk.floor().to_integer();
        let hi = tk.ceil().to_integer();
        for h in [lo, hi] {
            let dist = (&tk - BigRational::from_integer(h.clone())).abs() * &n;
            if dist > one {
                continue;
            }
            if let Some(arc) = pick(h.to_i64().expect("h <= k"), k) {
                return arc;
            }
        }
    }
    unreachable!("Farey arcs cover the circle")
}

/// Exact check of the order-`N` covering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringReport {
    pub order: u64,
    /// Uncovered open intervals `(left, right)` of `[0, 1)`.
    pub gaps: Vec<(Ratio<i128>, Ratio<i128>)>,
    /// Neighbours `p/q, r/s` violating `N <= q + s <= 2N`, i.e. whose mediant
    /// distances `1/(q(q+s))`, `1/(s(q+s))` leave `[1/(2qN), 1/(qN)]`.
    pub mediant_violations: Vec<(ArcParams, ArcParams)>,
    /// Neighbours with `rq - ps != 1`.
    pub determinant_violations: Vec<(ArcParams, ArcParams)>,
}

impl CoveringReport {
    pub fn covers(&self) -> bool {
        self.gaps.is_empty()
    }

    pub fn passed(&self) -> bool {
        self.gaps.is_empty()
            && self.mediant_violations.is_empty()
            && self.determinant_violations.is_empty()
    }
}

pub fn covering_check(order: u64) -> Result<CoveringReport> {
    let system = farey_sequence(order)?;
    let n = order as i128;
    let radius = |k: i64| Ratio::new(1, k as i128 * n);

    // Arcs sorted by centre, with 1/1 also represented as 0/1 on the left.
    let mut centres: Vec<(Ratio<i128>, i64)> = vec![(Ratio::from_integer(0), 1)];
    centres.extend(
        system
            .fractions
            .iter()
            .map(|a| (Ratio::new(a.h() as i128, a.k() as i128), a.k())),
    );

    let mut gaps = Vec::new();
    let mut reach = Ratio::from_integer(0i128);
    for (c, k) in &centres {
        let left = c - radius(*k);
        if left > reach {
            gaps.push((reach, left));
        }
        let right = c + radius(*k);
        if right > reach {
            reach = right;
        }
    }
    if reach < Ratio::from_integer(1) {
        gaps.push((reach, Ratio::from_integer(1)));
    }

    let mut mediant_violations = Vec::new();
    let mut determinant_violations = Vec::new();
    let mut prev = (0i128, 1i128, None::<ArcParams>);
    for &arc in &system.fractions {
        let (p, q) = (prev.0, prev.1);
        let (r, s) = (arc.h() as i128, arc.k() as i128);
        let left_arc = prev.2.unwrap_or(ArcParams::new(1, 1)?);
        if r * q - p * s != 1 {
            determinant_violations.push((left_arc, arc));
        }
        if q + s < n || q + s > 2 * n {
            mediant_violations.push((left_arc, arc));
        }
        prev = (r, s, Some(arc));
    }

    Ok(CoveringReport {
        order,
        gaps,
        mediant_violations,
        determinant_violations,
    })
}

/// Attaches `τ = 1/X + 2πiY` to the arc `h/k`, enforcing `|Y| <= 1/(kN)`.
pub fn make_tau(x: f64, y: f64, arc: ArcParams) -> Result<TauParam> {
    let tau = TauParam::new(x, y)?;
    let n = tau.big_n() as f64;
    let k = arc.k() as f64;
    if arc.k() as u64 > tau.big_n() {
        return Err(Error::Domain {
            name: "k",
            value: k,
            constraint: "k <= floor(sqrt(2 pi X))",
        });
    }
    let bound = 1.0 / (k * n);
    if y.abs() > bound {
        return Err(Error::YOutOfRange {
            y: y.abs(),
            bound,
            constraint: "|Y| <= 1/(kN)",
        });
    }
    let re_inv = tau.inv_tau().re;
    if re_inv < 0.07 * k * k {
        return Err(Error::Domain {
            name: "Re(1/tau)",
            value: re_inv,
            constraint: "Re(1/tau) >= 0.07 k^2",
        });
    }
    let tau_bound = 2.0 * std::f64::consts::SQRT_2 * PI / (k * n);
    if tau.tau().norm() > tau_bound * (1.0 + 1e-12) {
        return Err(Error::Domain {
            name: "|tau|",
            value: tau.tau().norm(),
            constraint: "|tau| <= 2 sqrt(2) pi/(kN)",
        });
    }
    Ok(tau)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn totient(n: u64) -> u64 {
        (1..=n).filter(|h| h.gcd(&n) == 1).count() as u64
    }

    #[test]
    fn order_three_and_five() {
        let f = farey_sequence(3).unwrap();
        let pairs: Vec<_> = f.fractions().iter().map(|a| (a.h(), a.k())).collect();
        assert_eq!(pairs, vec![(1, 3), (1, 2), (2, 3), (1, 1)]);
        assert_eq!(farey_sequence(5).unwrap().len(), 10);
        assert_eq!(farey_sequence(0), Err(Error::ZeroOrder));
    }

    #[test]
    fn count_is_totient_sum() {
        let mut total = 0;
        for n in 1..=200 {
            total += totient(n);
            assert_eq!(farey_sequence(n).unwrap().len() as u64, total);
        }
    }

    #[test]
    fn arc_of_examples() {
        assert_eq!(arc_of(0.49, 4).unwrap(), ArcParams::new(1, 2).unwrap());
        for n in [1, 2, 7, 100] {
            assert_eq!(arc_of(0.0, n).unwrap(), ArcParams::new(1, 1).unwrap());
        }
        let t = 1.0 / 3.0 + 1.0 / 30.0;
        assert_eq!(arc_of(t, 10).unwrap(), ArcParams::new(1, 3).unwrap());
        assert_eq!(arc_of(0.999, 10).unwrap(), ArcParams::new(1, 1).unwrap());
        assert_eq!(arc_of(1.49, 4).unwrap(), ArcParams::new(1, 2).unwrap());
        assert_eq!(arc_of(-0.51, 4).unwrap(), ArcParams::new(1, 2).unwrap());
    }

    #[test]
    fn dyadic_and_rational_paths_agree() {
        for i in 0..2000 {
            let t = (i as f64 * 0.618_033_988_749_895).fract();
            for n in [1, 5, 37, 100] {
                let num = dyadic_numerator(t).unwrap();
                assert_eq!(arc_of_dyadic(num, n), arc_of_rational(t, n), "t = {t}, N = {n}");
            }
        }
        assert_eq!(arc_of(1e-30, 10).unwrap(), ArcParams::new(1, 1).unwrap());
    }

    #[test]
    fn covering_small_orders() {
        for n in [1, 2, 3, 50, 100] {
            let r = covering_check(n).unwrap();
            assert!(r.passed(), "N = {n}: {r:?}");
        }
    }

    #[test]
    fn make_tau_examples() {
        let one = ArcParams::new(1, 1).unwrap();
        let tau = make_tau(16.0, 0.0, one).unwrap();
        assert_eq!(tau.big_n(), 10);
        assert_eq!(tau.tau().re, 1.0 / 16.0);

        let two = ArcParams::new(1, 2).unwrap();
        assert!(matches!(
            make_tau(16.0, 1.0, two),
            Err(Error::YOutOfRange { .. })
        ));

        for x in [16.0, 100.0, 1e4, 1e7] {
            let n = crate::mainterm::farey_order_for(x) as i64;
            for k in [1, 2, n / 2, n] {
                let arc = ArcParams::new(1, k.max(1)).unwrap();
                let y = 1.0 / (arc.k() as f64 * n as f64);
                let tau = make_tau(x, y, arc).unwrap();
                assert!(tau.inv_tau().re / (arc.k() as f64).powi(2) >= 0.07);
            }
        }
    }
}
