use thiserror::Error;

/// Errors raised by the library surface.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("residue {a} outside 1..={modulus}")]
    ResidueOutOfRange { a: i64, modulus: i64 },

    #[error("modulus must be positive, got {0}")]
    NonPositiveModulus(i64),

    #[error("gcd({h}, {k}) = {gcd}, expected 1")]
    NotCoprime { h: i64, k: i64, gcd: i64 },

    #[error("arc numerator {h} outside 1..={k}")]
    ArcOutOfRange { h: i64, k: i64 },

    #[error("denominator must be positive, got {0}")]
    NonPositiveDenominator(i64),

    #[error("Farey order must be positive")]
    ZeroOrder,

    #[error("point must lie inside the unit disk (log-modulus {0})")]
    OutsideUnitDisk(f64),

    #[error("tolerance {requested:e} unattainable in binary64 here (floor {floor:e})")]
    ToleranceUnattainable { requested: f64, floor: f64 },

    #[error("{name} = {value} violates {constraint}")]
    Domain {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("Hurwitz zeta has a pole at s = 1")]
    ZetaPole,

    #[error("X = {0} is below the standing assumption X >= 16")]
    XTooSmall(f64),

    #[error("|Y| = {y:e} exceeds the admissible bound {bound:e} ({constraint})")]
    YOutOfRange {
        y: f64,
        bound: f64,
        constraint: &'static str,
    },

    #[error("n must be at least 1")]
    ZeroIndex,

    #[error("bracket [{lo}, {hi}] has no certified endpoint")]
    NoCertifiedEndpoint { lo: u128, hi: u128 },

    #[error("certificate margin is not monotone in [{lo}, {hi}] and the bracket is too wide to scan")]
    NonMonotoneBracket { lo: u128, hi: u128 },

    #[error("malformed series data: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
