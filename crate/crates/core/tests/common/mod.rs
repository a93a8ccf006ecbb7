#![allow(dead_code)]

use num_rational::Ratio;
use num_traits::Signed;
use qcircle::farey::farey_sequence;
use qcircle::mainterm::ArcParams;

/// `g(n)` for `n <= n_max` by listing every partition into odd parts and
/// weighting it by `(-1)^(number of parts ≡ 3 mod 4)`.
pub fn enumerate_g(n_max: usize) -> Vec<i64> {
    fn walk(remaining: usize, max_part: usize, sign: i64, n: usize, out: &mut [i64]) {
        if remaining == 0 {
            out[n] += sign;
            return;
        }
        let mut p = max_part.min(remaining);
        if p.is_multiple_of(2) {
            p -= 1;
        }
        while p >= 1 {
            let s = if p % 4 == 3 { -sign } else { sign };
            walk(remaining - p, p, s, n, out);
            if p < 2 {
                break;
            }
            p -= 2;
        }
    }
    let mut out = vec![0i64; n_max + 1];
    for n in 0..=n_max {
        walk(n, n, 1, n, &mut out);
    }
    out
}

/// Scans every order-`N` arc (with `1/1` also placed at `0`) and keeps the
/// containing arc with the smallest `k`, then the smallest `h`. Works on
/// points `t = m / 2^53`.
pub fn brute_force_arc(t: f64, order: u64) -> ArcParams {
    let den = 1i128 << 53;
    let scaled = t * den as f64;
    assert!((0.0..1.0).contains(&t) && scaled.fract() == 0.0);
    let t = Ratio::new(scaled as i128, den);
    let radius = |k: i64| Ratio::new(1, k as i128 * order as i128);
    let mut best: Option<ArcParams> = None;
    for arc in farey_sequence(order).unwrap().fractions() {
        let centre = Ratio::new(arc.h() as i128, arc.k() as i128);
        let mut contains = (t - centre).abs() <= radius(arc.k());
        if arc.h() == arc.k() {
            contains |= t <= radius(1);
        }
        if contains && best.is_none_or(|b| (arc.k(), arc.h()) < (b.k(), b.h())) {
            best = Some(*arc);
        }
    }
    best.expect("order-N arcs cover the circle")
}
