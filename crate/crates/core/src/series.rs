//! Exact truncated q-series for restricted partition products and direct
//! numeric evaluation of their logarithms inside the unit disk.
//!
//! The coefficient engine applies one factor `1/(1 - s q^p)` at a time with the
//! prefix recurrence `c[n] += s c[n - p]`, walking parts in increasing order.
//! Written in block form (`block_j += s * block_{j-1}` where blocks have length
//! `p`) each step is an elementwise slice update, so large parts spread across
//! threads without aliasing. Coefficients live in a flat fixed-width limb
//! arena during the recurrence and become `BigInt`s only at the end.

use std::f64::consts::{PI, TAU};
use std::io::{self, BufRead, Read, Write};

use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Blocks at least this long are updated in parallel.
const PAR_BLOCK: usize = 4096;

const BINARY_MAGIC: &[u8; 5] = b"QSER1";

/// A power series truncated after `q^N`, with exact integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<BigInt>,
}

impl QSeries {
    /// The series `1 + O(q^{N+1})`.
    pub fn one(order: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); order + 1];
        coeffs[0] = BigInt::one();
        Self { coeffs }
    }

    /// Wraps explicit coefficients; `coeffs` must be non-empty.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Format("a series needs at least one coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn truncation_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Option<&BigInt> {
        self.coeffs.get(n)
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Index and value of the first negative coefficient, if any.
    pub fn first_negative(&self) -> Option<(usize, &BigInt)> {
        self.coeffs.iter().enumerate().find(|(_, c)| c.is_negative())
    }

    /// Writes `n,g_n` rows (with a header line) in decimal.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "n,g_n")?;
        for (n, c) in self.coeffs.iter().enumerate() {
            writeln!(out, "{n},{c}")?;
        }
        out.flush()
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut coeffs = Vec::new();
        for (lineno, line) in input.lines().enumerate() {
            let line = line.map_err(|e| Error::Format(e.to_string()))?;
            if lineno == 0 && line.trim() == "n,g_n" {
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let (idx, val) = line
                .split_once(',')
                .ok_or_else(|| Error::Format(format!("line {}: missing comma", lineno + 1)))?;
            let idx: usize = idx
                .trim()
                .parse()
                .map_err(|_| Error::Format(format!("line {}: bad index", lineno + 1)))?;
            if idx != coeffs.len() {
                return Err(Error::Format(format!(
                    "line {}: expected index {}, found {idx}",
                    lineno + 1,
                    coeffs.len()
                )));
            }
            let val: BigInt = val
                .trim()
                .parse()
                .map_err(|_| Error::Format(format!("line {}: bad integer", lineno + 1)))?;
            coeffs.push(val);
        }
        Self::from_coeffs(coeffs)
    }

    /// Binary golden-file layout: `QSER1`, little-endian `u64` truncation
    /// order, then per coefficient a sign byte (`0` zero, `1` positive,
    /// `0xff` negative), a little-endian `u32` limb count and that many
    /// little-endian `u64` limbs, least significant first.
    pub fn write_binary<W: Write>(&self, mut out: W) -> io::Result<()> {
        out.write_all(BINARY_MAGIC)?;
        out.write_all(&(self.truncation_order() as u64).to_le_bytes())?;
        for c in &self.coeffs {
            let (sign, limbs) = c.to_u64_digits();
            let sign_byte: u8 = match sign {
                Sign::NoSign => 0,
                Sign::Plus => 1,
                Sign::Minus => 0xff,
            };
            out.write_all(&[sign_byte])?;
            let count = u32::try_from(limbs.len())
                .map_err(|_| io::Error::new(io::ErrorKind::InvalidData, "coefficient too large"))?;
            out.write_all(&count.to_le_bytes())?;
            for limb in limbs {
                out.write_all(&limb.to_le_bytes())?;
            }
        }
        out.flush()
    }

    pub fn read_binary<R: Read>(mut input: R) -> Result<Self> {
        let io_err = |e: io::Error| Error::Format(e.to_string());
        let mut magic = [0u8; 5];
        input.read_exact(&mut magic).map_err(io_err)?;
        if &magic != BINARY_MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        let mut word = [0u8; 8];
        input.read_exact(&mut word).map_err(io_err)?;
        let order = u64::from_le_bytes(word);
        let order = usize::try_from(order).map_err(|_| Error::Format("order too large".into()))?;
        let mut coeffs = Vec::with_capacity(order.saturating_add(1).min(1 << 20));
        for _ in 0..=order {
            let mut sign_byte = [0u8; 1];
            input.read_exact(&mut sign_byte).map_err(io_err)?;
            let mut count = [0u8; 4];
            input.read_exact(&mut count).map_err(io_err)?;
            let count = u32::from_le_bytes(count) as usize;
            let mut limbs = Vec::with_capacity(count.min(1 << 16));
            for _ in 0..count {
                input.read_exact(&mut word).map_err(io_err)?;
                limbs.push(u64::from_le_bytes(word));
            }
            let sign = match (sign_byte[0], count) {
                (0, 0) => Sign::NoSign,
                (1, c) if c > 0 => Sign::Plus,
                (0xff, c) if c > 0 => Sign::Minus,
                _ => return Err(Error::Format("inconsistent sign byte".into())),
            };
            let bytes: Vec<u8> = limbs.iter().flat_map(|l| l.to_le_bytes()).collect();
            coeffs.push(BigInt::from_bytes_le(sign, &bytes));
        }
        let mut trailing = [0u8; 1];
        if input.read(&mut trailing).map_err(io_err)? != 0 {
            return Err(Error::Format("trailing bytes after last coefficient".into()));
        }
        Self::from_coeffs(coeffs)
    }
}

fn check_residue(a: i64, modulus: i64) -> Result<()> {
    if modulus <= 0 {
        return Err(Error::NonPositiveModulus(modulus));
    }
    if !(1..=modulus).contains(&a) {
        return Err(Error::ResidueOutOfRange { a, modulus });
    }
    Ok(())
}

/// One family of factors `1/(1 - s q^p)` over parts `p ≡ a (mod M)`.
#[derive(Debug, Clone, Copy)]
struct Family {
    a: usize,
    modulus: usize,
    negate: bool,
}

impl Family {
    fn parts(self, order: usize) -> impl Iterator<Item = usize> {
        (self.a..=order).step_by(self.modulus)
    }
}

/// Natural log of an upper bound on the number of partitions of `n` into
/// parts drawn from `families` (signs ignored).
///
/// Uses `[q^n] F(q) <= F(x) / x^n` for a series with nonnegative
/// coefficients, minimised over `x = e^{-t}` by golden-section search.
fn log_count_bound(families: &[Family], n: usize) -> f64 {
    let eval = |t: f64| -> f64 {
        let mut s = n as f64 * t;
        for f in families {
            for p in f.parts(n) {
                s -= (-(-(p as f64) * t).exp()).ln_1p();
            }
        }
        s
    };
    if n == 0 {
        return 0.0;
    }
    let (mut lo, mut hi) = ((1e-7f64).ln(), (20.0f64).ln());
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let m1 = hi - g * (hi - lo);
        let m2 = lo + g * (hi - lo);
        if eval(m1.exp()) < eval(m2.exp()) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    eval((0.5 * (lo + hi)).exp())
}

/// Coefficient arena: `order + 1` fixed-width two's-complement integers of
/// `width` 64-bit limbs each, stored contiguously. Arithmetic wraps modulo
/// `2^{64 width}`; the width is chosen so no true value reaches `2^{64 width - 1}`.
struct LimbArena {
    limbs: Vec<u64>,
    width: usize,
    len: usize,
}

impl LimbArena {
    fn for_families(families: &[Family], order: usize) -> Self {
        // The count bound grows with n, so the largest index decides.
        let log_bound = log_count_bound(families, order);
        let bits = (log_bound * (1.0 + 1e-9) / std::f64::consts::LN_2).ceil() as usize + 3;
        let width = bits.div_ceil(64).max(1);
        let len = order + 1;
        let mut limbs = vec![0u64; len * width];
        limbs[0] = 1;
        Self { limbs, width, len }
    }

    /// Multiplies in place by `1/(1 - q^part)` or, with `negate`, `1/(1 + q^part)`.
    fn absorb_part(&mut self, part: usize, negate: bool) {
        macro_rules! dispatch {
            ($($w:literal)*) => {
                match self.width {
                    $($w => self.absorb_fixed::<$w>(part, negate),)*
                    _ => self.absorb_dynamic(part, negate),
                }
            };
        }
        dispatch!(1 2 3 4 5 6 7 8 9 10 11 12 13 14 15 16 17 18 19 20 21 22 23 24);
    }

    fn absorb_fixed<const W: usize>(&mut self, part: usize, negate: bool) {
        debug_assert_eq!(W, self.width);
        let (cells, _) = self.limbs.as_chunks_mut::<W>();
        let mut start = part;
        while start < self.len {
            let end = (start + part).min(self.len);
            let (head, tail) = cells.split_at_mut(start);
            let prev = &head[start - part..start - part + (end - start)];
            let cur = &mut tail[..end - start];
            let update = |(dst, src): (&mut [u64; W], &[u64; W])| {
                if negate {
                    sub_assign(dst, src);
                } else {
                    add_assign(dst, src);
                }
            };
            if end - start >= PAR_BLOCK {
                cur.par_iter_mut().zip(prev.par_iter()).for_each(update);
            } else {
                cur.iter_mut().zip(prev.iter()).for_each(update);
            }
            start = end;
        }
    }

    fn absorb_dynamic(&mut self, part: usize, negate: bool) {
        let w = self.width;
        let mut start = part;
        while start < self.len {
            let end = (start + part).min(self.len);
            let (head, tail) = self.limbs.split_at_mut(start * w);
            let prev = &head[(start - part) * w..(start - part + end - start) * w];
            let cur = &mut tail[..(end - start) * w];
            let update = |(dst, src): (&mut [u64], &[u64])| {
                if negate {
                    sub_assign(dst, src);
                } else {
                    add_assign(dst, src);
                }
            };
            if end - start >= PAR_BLOCK {
                cur.par_chunks_exact_mut(w)
                    .zip(prev.par_chunks_exact(w))
                    .for_each(update);
            } else {
                cur.chunks_exact_mut(w).zip(prev.chunks_exact(w)).for_each(update);
            }
            start = end;
        }
    }

    fn into_series(self) -> QSeries {
        let w = self.width;
        let coeffs = self
            .limbs
            .chunks_exact(w)
            .map(|c| {
                let bytes: Vec<u8> = c.iter().flat_map(|l| l.to_le_bytes()).collect();
                BigInt::from_signed_bytes_le(&bytes)
            })
            .collect();
        QSeries { coeffs }
    }
}

#[inline]
fn add_assign(dst: &mut [u64], src: &[u64]) {
    let mut carry = false;
    for (d, s) in dst.iter_mut().zip(src) {
        let (v, c1) = d.overflowing_add(*s);
        let (v, c2) = v.overflowing_add(carry as u64);
        *d = v;
        carry = c1 | c2;
    }
}

#[inline]
fn sub_assign(dst: &mut [u64], src: &[u64]) {
    let mut borrow = false;
    for (d, s) in dst.iter_mut().zip(src) {
        let (v, b1) = d.overflowing_sub(*s);
        let (v, b2) = v.overflowing_sub(borrow as u64);
        *d = v;
        borrow = b1 | b2;
    }
}

fn expand(families: &[Family], order: usize) -> QSeries {
    let mut arena = LimbArena::for_families(families, order);
    for f in families {
        for p in f.parts(order) {
            arena.absorb_part(p, f.negate);
        }
    }
    arena.into_series()
}

/// Coefficients of `1/(q^a; q^M)_inf`: partitions into parts `≡ a (mod M)`.
pub fn inv_pochhammer_series(a: i64, modulus: i64, order: usize) -> Result<QSeries> {
    check_residue(a, modulus)?;
    let family = Family {
        a: a as usize,
        modulus: modulus as usize,
        negate: false,
    };
    Ok(expand(&[family], order))
}

/// Coefficients of `1/(-q^a; q^M)_inf`: partitions into parts `≡ a (mod M)`
/// counted with sign `(-1)^{#parts}`.
pub fn inv_neg_pochhammer_series(a: i64, modulus: i64, order: usize) -> Result<QSeries> {
    check_residue(a, modulus)?;
    let family = Family {
        a: a as usize,
        modulus: modulus as usize,
        negate: true,
    };
    Ok(expand(&[family], order))
}

/// `g(0..=N)` for `G(q) = 1/(q, -q^3; q^4)_inf`.
///
/// Both factor families are absorbed into a single coefficient array, which
/// is the truncated product of the two factor series.
pub fn g_series(order: usize) -> QSeries {
    expand(
        &[
            Family {
                a: 1,
                modulus: 4,
                negate: false,
            },
            Family {
                a: 3,
                modulus: 4,
                negate: true,
            },
        ],
        order,
    )
}

/// Sign of a factor family in [`naive_product_oracle`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorSign {
    /// `prod 1/(1 - q^p)`
    Plus,
    /// `prod 1/(1 + q^p)`
    Minus,
}

/// One factor family `prod_{j >= 0} 1/(1 ∓ q^{a + jM})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Factor {
    pub sign: FactorSign,
    pub a: i64,
    pub modulus: i64,
}

impl Factor {
    pub fn new(sign: FactorSign, a: i64, modulus: i64) -> Self {
        Self { sign, a, modulus }
    }
}

/// Independent oracle: expands every factor into its geometric series
/// `sum_j (±1)^j q^{jp}` and multiplies by schoolbook polynomial
/// multiplication. Quadratic per factor, only meant for cross-checks.
pub fn naive_product_oracle(factors: &[Factor], order: usize) -> Result<QSeries> {
    let mut acc: Vec<BigInt> = vec![BigInt::zero(); order + 1];
    acc[0] = BigInt::one();
    for f in factors {
        check_residue(f.a, f.modulus)?;
        let mut part = f.a as usize;
        while part <= order {
            let geometric: Vec<(usize, i32)> = (0..=order / part)
                .map(|j| {
                    let sign = match f.sign {
                        FactorSign::Plus => 1,
                        FactorSign::Minus if j % 2 == 0 => 1,
                        FactorSign::Minus => -1,
                    };
                    (j * part, sign)
                })
                .collect();
            let mut next = vec![BigInt::zero(); order + 1];
            for (i, ai) in acc.iter().enumerate() {
                if ai.is_zero() {
                    continue;
                }
                for &(e, sign) in &geometric {
                    if i + e > order {
                        break;
                    }
                    if sign > 0 {
                        next[i + e] += ai;
                    } else {
                        next[i + e] -= ai;
                    }
                }
            }
            acc = next;
            part += f.modulus as usize;
        }
    }
    QSeries::from_coeffs(acc)
}

/// A point `q = exp(modulus_log + i angle)` strictly inside the unit disk.
///
/// Kept in polar-log form: points a distance `1/X` from the circle lose most
/// of their information when rounded to Cartesian parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPoint {
    modulus_log: f64,
    angle: f64,
}

impl ComplexPoint {
    /// `modulus_log` must be negative (`-inf` is allowed and means `q = 0`);
    /// the angle is reduced into `[0, 2π)`.
    pub fn new(modulus_log: f64, angle: f64) -> Result<Self> {
        if modulus_log.is_nan() || modulus_log >= 0.0 || !angle.is_finite() {
            return Err(Error::OutsideUnitDisk(modulus_log));
        }
        let mut angle = angle.rem_euclid(TAU);
        if angle >= TAU {
            angle = 0.0;
        }
        Ok(Self { modulus_log, angle })
    }

    /// `q = exp(-tau + 2πi h/k)` with `tau = 1/X + 2πiY`.
    pub fn from_tau(x: f64, y: f64, h: i64, k: i64) -> Result<Self> {
        if !(x > 0.0) {
            return Err(Error::Domain {
                name: "X",
                value: x,
                constraint: "X > 0",
            });
        }
        let turns = (h as f64 / k as f64) - y;
        Self::new(-1.0 / x, TAU * turns.rem_euclid(1.0))
    }

    /// The real point `q = exp(-1/X)`.
    pub fn real(x: f64) -> Result<Self> {
        Self::from_tau(x, 0.0, 1, 1)
    }

    pub fn modulus_log(&self) -> f64 {
        self.modulus_log
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    /// `-q`.
    pub fn negated(&self) -> Self {
        Self {
            modulus_log: self.modulus_log,
            angle: (self.angle + PI).rem_euclid(TAU),
        }
    }

    pub fn to_cartesian(&self) -> Complex64 {
        Complex64::from_polar(self.modulus_log.exp(), self.angle)
    }
}

/// Neumaier-compensated sum of complex terms.
#[derive(Default, Clone, Copy)]
struct CompensatedSum {
    re: (f64, f64),
    im: (f64, f64),
}

impl CompensatedSum {
    fn add_part(acc: &mut (f64, f64), x: f64) {
        let t = acc.0 + x;
        if acc.0.abs() >= x.abs() {
            acc.1 += (acc.0 - t) + x;
        } else {
            acc.1 += (x - t) + acc.0;
        }
        acc.0 = t;
    }

    fn add(&mut self, z: Complex64) {
        Self::add_part(&mut self.re, z.re);
        Self::add_part(&mut self.im, z.im);
    }

    fn total(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

/// `-log(1 - q^m)` for `q^m = exp(m modulus_log + i m angle)`, principal branch.
fn neg_log_one_minus_power(modulus_log: f64, angle: f64, m: f64) -> Complex64 {
    let log_r = m * modulus_log;
    let r = log_r.exp();
    let phi = m * angle;
    if r < 0.25 {
        // Geometric tail after L terms is below r^{L+1} / (1 - r) <= eps * r.
        let z = Complex64::from_polar(r, phi);
        let mut power = z;
        let mut sum = z;
        let mut l = 1.0;
        while power.norm() > f64::EPSILON * 0.25 * r {
            power *= z;
            l += 1.0;
            sum += power / l;
        }
        sum
    } else {
        // 1 - r e^{i phi} with the real part formed without cancellation.
        let half = 0.5 * phi;
        let re = -log_r.exp_m1() + 2.0 * r * half.sin() * half.sin();
        let im = -r * phi.sin();
        -Complex64::new(re, im).ln()
    }
}

/// `Φ_{a,M}(q) = log 1/(q^a; q^M)_inf = Σ_{m ≡ a (M)} Σ_{ℓ ≥ 1} q^{ℓm}/ℓ`.
///
/// The outer sum stops at the first `m` with `|q|^m / (1-|q|)^2 <= tol/2`,
/// which bounds the whole discarded tail. Fails when the accumulated rounding
/// floor of the kept terms exceeds the remaining half of `tol`.
pub fn eval_phi(a: i64, modulus: i64, q: ComplexPoint, tol: f64) -> Result<Complex64> {
    check_residue(a, modulus)?;
    if !(tol > 0.0) {
        return Err(Error::Domain {
            name: "tol",
            value: tol,
            constraint: "tol > 0",
        });
    }
    let ml = q.modulus_log;
    if ml == f64::NEG_INFINITY {
        return Ok(Complex64::zero());
    }
    let one_minus_r = -ml.exp_m1();
    let log_scale = 2.0 * one_minus_r.ln();
    let log_cut = (0.5 * tol).ln();

    let mut sum = CompensatedSum::default();
    let mut abs_total = 0.0;
    let mut count = 0u64;
    let mut m = a as f64;
    let step = modulus as f64;
    while m * ml - log_scale > log_cut {
        let term = neg_log_one_minus_power(ml, q.angle, m);
        abs_total += term.norm();
        sum.add(term);
        count += 1;
        m += step;
    }
    let floor = 4.0 * f64::EPSILON * (abs_total + count as f64 * f64::EPSILON);
    if floor > 0.5 * tol {
        return Err(Error::ToleranceUnattainable {
            requested: tol,
            floor: 2.0 * floor,
        });
    }
    Ok(sum.total())
}

/// `log G(q) = Φ_{1,4}(q) + Φ_{3,4}(-q)`, the branch continuous from `q = 0`.
pub fn eval_log_g(q: ComplexPoint, tol: f64) -> Result<Complex64> {
    Ok(eval_phi(1, 4, q, 0.5 * tol)? + eval_phi(3, 4, q.negated(), 0.5 * tol)?)
}

/// `log G(±e^{-1/X})` on the real axis.
pub fn eval_log_g_real(x: f64, at_minus_one: bool, tol: f64) -> Result<f64> {
    let q = ComplexPoint::real(x)?;
    let q = if at_minus_one { q.negated() } else { q };
    Ok(eval_log_g(q, tol)?.re)
}
