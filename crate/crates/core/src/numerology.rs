//! Exact dimension and exponent arithmetic.
//!
//! Radon-Hurwitz numbers, admissibility of `(d1, d2)`, the three exceptional
//! pairs, Stein-Tomas exponents, and the threshold formulas. Everything here
//! is integer or rational; tests compare with `==`.

use crate::error::{Error, Result};
use num_rational::Ratio;

pub type Rational = Ratio<i64>;

pub fn rational(num: i64, den: i64) -> Rational {
    Ratio::new(num, den)
}

/// Radon-Hurwitz number: for `n = (2a+1) 2^b` with `b = 4q + r`, `0 <= r < 4`,
/// `rho(n) = 2^r + 8q`.
pub fn radon_hurwitz(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::validation("radon_hurwitz requires n >= 1"));
    }
    let b = n.trailing_zeros() as u64;
    let q = b / 4;
    let r = b % 4;
    Ok((1 << r) + 8 * q)
}

/// A Metivier group with layer dimensions `(d1, d2)` exists iff `d2 < rho(d1)`.
pub fn admissible(d1: u64, d2: u64) -> Result<bool> {
    if d1 == 0 || d2 == 0 {
        return Err(Error::validation("dimensions must be >= 1"));
    }
    Ok(d2 < radon_hurwitz(d1)?)
}

pub const EXCEPTIONAL_PAIRS: [(u64, u64); 3] = [(4, 3), (8, 6), (8, 7)];

pub fn is_exceptional(d1: u64, d2: u64) -> bool {
    EXCEPTIONAL_PAIRS.contains(&(d1, d2))
}

/// `2 d1 > 3 d2`, as integers.
pub fn three_halves_holds(d1: u64, d2: u64) -> bool {
    2 * d1 > 3 * d2
}

/// Stein-Tomas exponent `p_n = 2(n+1)/(n+3)`.
pub fn stein_tomas(n: u64) -> Result<Rational> {
    if n == 0 {
        return Err(Error::validation("stein_tomas requires n >= 1"));
    }
    Ok(rational(2 * (n as i64 + 1), n as i64 + 3))
}

/// Threshold `p_{d1,d2}`: the Stein-Tomas exponent `p_{d2}` except for the
/// two eight-dimensional exceptional pairs. Total as a formula; admissibility
/// is reported separately (see `admissible`).
pub fn p_threshold(d1: u64, d2: u64) -> Result<Rational> {
    match (d1, d2) {
        (8, 6) => Ok(rational(17, 12)),
        (8, 7) => Ok(rational(14, 11)),
        _ => stein_tomas(d2),
    }
}

/// Threshold `bar p_{d1,d2}`: as `p_threshold` but `(4,3)` drops to `6/5`.
pub fn bar_p_threshold(d1: u64, d2: u64) -> Result<Rational> {
    match (d1, d2) {
        (4, 3) => Ok(rational(6, 5)),
        (8, 6) => Ok(rational(17, 12)),
        (8, 7) => Ok(rational(14, 11)),
        _ => stein_tomas(d2),
    }
}

/// Solve `1/p = (1 - theta) + theta / min(p_{d1}, p_{d2})` for `theta` in `[0,1]`.
pub fn theta_p(p: Rational, d1: u64, d2: u64) -> Result<Rational> {
    let p_star = stein_tomas(d1)?.min(stein_tomas(d2)?);
    let one = rational(1, 1);
    if p < one || p > p_star {
        return Err(Error::validation(format!(
            "p = {p} outside [1, min(p_d1, p_d2) = {p_star}]"
        )));
    }
    // theta = (1 - 1/p) / (1 - 1/p*)
    let theta = (one - p.recip()) / (one - p_star.recip());
    debug_assert!(theta >= rational(0, 1) && theta <= one);
    Ok(theta)
}

/// Sharp regularity threshold `s = d (1/p - 1/2)`.
pub fn regularity_threshold(p: Rational, d: u64) -> Result<Rational> {
    if p < rational(1, 1) {
        return Err(Error::validation("p must be >= 1"));
    }
    Ok(Rational::from_integer(d as i64) * (p.recip() - rational(1, 2)))
}

/// `(p_{d2}' + 2(d1 - d2)) / (p_{d2}' + d1 - d2)` with `p' = p/(p-1)`.
pub fn condition_iii_threshold(d1: u64, d2: u64) -> Result<Rational> {
    if d2 < 2 {
        return Err(Error::validation(
            "dual Stein-Tomas exponent undefined for d2 = 1 (p_1 = 1)",
        ));
    }
    if d1 <= d2 {
        return Err(Error::validation("requires d1 > d2"));
    }
    let p = stein_tomas(d2)?;
    let pd = p / (p - rational(1, 1));
    let gap = Rational::from_integer((d1 - d2) as i64);
    Ok((pd + gap * 2) / (pd + gap))
}

/// One row of the numerology table the CLI prints.
#[derive(Clone, Debug)]
pub struct TableRow {
    pub d1: u64,
    pub d2: u64,
    pub rho: u64,
    pub admissible: bool,
    pub exceptional: bool,
    pub p_threshold: Option<Rational>,
    pub bar_p: Option<Rational>,
    pub condition_iii: Option<Rational>,
}

pub fn table(d1_max: u64) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for d1 in 1..=d1_max {
        let rho = radon_hurwitz(d1)?;
        for d2 in 1..d1 {
            let adm = d2 < rho;
            if !adm {
                continue;
            }
            rows.push(TableRow {
                d1,
                d2,
                rho,
                admissible: adm,
                exceptional: is_exceptional(d1, d2),
                p_threshold: p_threshold(d1, d2).ok(),
                bar_p: bar_p_threshold(d1, d2).ok(),
                condition_iii: condition_iii_threshold(d1, d2).ok(),
            });
        }
    }
    Ok(rows)
}
