//! Wigner 3-j / 6-j symbols and Clebsch-Gordan coefficients.
//!
//! Quantum numbers are carried as [`HalfInt`], which stores twice the
//! value, so no float comparison is ever made on an angular momentum.
//! Phases follow the Condon-Shortley convention.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Largest supported angular momentum (doubled: 40).
pub const MAX_TWICE_J: i32 = 40;

/// A half-integer quantum number, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const ONE: HalfInt = HalfInt(2);

    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    /// Converts a float that must be an integer or half-integer.
    pub fn new(value: f64) -> Result<Self> {
        let twice = 2.0 * value;
        let rounded = twice.round();
        if !value.is_finite() || (twice - rounded).abs() > 1e-9 || rounded.abs() > 1e6 {
            return Err(Error::Argument(format!(
                "{value} is not an integer or half-integer"
            )));
        }
        Ok(HalfInt(rounded as i32))
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl TryFrom<f64> for HalfInt {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        HalfInt::new(value)
    }
}

fn factorial(n: i32) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(171);
        let mut acc = 1.0_f64;
        t.push(acc);
        for k in 1..=170 {
            acc *= f64::from(k);
            t.push(acc);
        }
        t
    });
    debug_assert!((0..=170).contains(&n), "factorial argument {n}");
    table[n as usize]
}

fn check_range(twice: &[i32]) -> Result<()> {
    if let Some(&j) = twice.iter().find(|&&j| j > MAX_TWICE_J) {
        return Err(Error::Argument(format!(
            "angular momentum {} exceeds the supported maximum {}",
            HalfInt(j),
            HalfInt(MAX_TWICE_J)
        )));
    }
    Ok(())
}

/// Triangle rule for doubled momenta, including integer parity of the sum.
fn triangle(a: i32, b: i32, c: i32) -> bool {
    a >= 0 && b >= 0 && c >= 0 && c >= (a - b).abs() && c <= a + b && (a + b + c) % 2 == 0
}

/// `|m| <= j` with `j - m` integral.
fn projection_ok(j: i32, m: i32) -> bool {
    m.abs() <= j && (j + m) % 2 == 0
}

fn sign(k: i32) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Squared triangle coefficient (a+b-c)!(a-b+c)!(-a+b+c)!/(a+b+c+1)!.
fn delta_sq(a: i32, b: i32, c: i32) -> f64 {
    factorial((a + b - c) / 2) * factorial((a - b + c) / 2) * factorial((b + c - a) / 2)
        / factorial((a + b + c) / 2 + 1)
}

/// 3-j symbol from doubled arguments.
pub fn wigner3j_twice(j1: i32, j2: i32, j3: i32, m1: i32, m2: i32, m3: i32) -> Result<f64> {
    check_range(&[j1, j2, j3])?;
    if m1 + m2 + m3 != 0
        || !triangle(j1, j2, j3)
        || !projection_ok(j1, m1)
        || !projection_ok(j2, m2)
        || !projection_ok(j3, m3)
    {
        return Ok(0.0);
    }

    let kmin = 0.max((j2 - j3 - m1) / 2).max((j1 - j3 + m2) / 2);
    let kmax = ((j1 + j2 - j3) / 2).min((j1 - m1) / 2).min((j2 + m2) / 2);
    let mut sum = 0.0;
    for k in kmin..=kmax {
        let denom = factorial(k)
            * factorial((j1 + j2 - j3) / 2 - k)
            * factorial((j1 - m1) / 2 - k)
            * factorial((j2 + m2) / 2 - k)
            * factorial((j3 - j2 + m1) / 2 + k)
            * factorial((j3 - j1 - m2) / 2 + k);
        sum += sign(k) / denom;
    }

    let prefactor = delta_sq(j1, j2, j3)
        * factorial((j1 + m1) / 2)
        * factorial((j1 - m1) / 2)
        * factorial((j2 + m2) / 2)
        * factorial((j2 - m2) / 2)
        * factorial((j3 + m3) / 2)
        * factorial((j3 - m3) / 2);
    Ok(sign((j1 - j2 - m3) / 2) * prefactor.sqrt() * sum)
}

/// Wigner 3-j symbol `(j1 j2 j3; m1 m2 m3)`.
pub fn wigner3j(j1: f64, j2: f64, j3: f64, m1: f64, m2: f64, m3: f64) -> Result<f64> {
    let t = |x| HalfInt::new(x).map(HalfInt::twice);
    wigner3j_twice(t(j1)?, t(j2)?, t(j3)?, t(m1)?, t(m2)?, t(m3)?)
}

/// 6-j symbol from doubled arguments, `{a b c; d e f}`.
pub fn wigner6j_twice(a: i32, b: i32, c: i32, d: i32, e: i32, f: i32) -> Result<f64> {
    check_range(&[a, b, c, d, e, f])?;
    if !(triangle(a, b, c) && triangle(a, e, f) && triangle(d, b, f) && triangle(d, e, c)) {
        return Ok(0.0);
    }
    let tmin = ((a + b + c) / 2)
        .max((a + e + f) / 2)
        .max((d + b + f) / 2)
        .max((d + e + c) / 2);
    let tmax = ((a + b + d + e) / 2)
        .min((a + c + d + f) / 2)
        .min((b + c + e + f) / 2);
    let mut sum = 0.0;
    for t in tmin..=tmax {
        let denom = factorial(t - (a + b + c) / 2)
            * factorial(t - (a + e + f) / 2)
            * factorial(t - (d + b + f) / 2)
            * factorial(t - (d + e + c) / 2)
            * factorial((a + b + d + e) / 2 - t)
            * factorial((a + c + d + f) / 2 - t)
            * factorial((b + c + e + f) / 2 - t);
        sum += sign(t) * factorial(t + 1) / denom;
    }
    let prefactor = delta_sq(a, b, c) * delta_sq(a, e, f) * delta_sq(d, b, f) * delta_sq(d, e, c);
    Ok(prefactor.sqrt() * sum)
}

/// Wigner 6-j symbol `{j1 j2 j3; j4 j5 j6}`.
pub fn wigner6j(j1: f64, j2: f64, j3: f64, j4: f64, j5: f64, j6: f64) -> Result<f64> {
    let t = |x| HalfInt::new(x).map(HalfInt::twice);
    wigner6j_twice(t(j1)?, t(j2)?, t(j3)?, t(j4)?, t(j5)?, t(j6)?)
}

/// Clebsch-Gordan coefficient `<j1 m1; j2 m2 | J M>` from doubled arguments.
pub fn clebsch_gordan_twice(j1: i32, m1: i32, j2: i32, m2: i32, j: i32, m: i32) -> Result<f64> {
    let w = wigner3j_twice(j1, j2, j, m1, m2, -m)?;
    Ok(sign((j1 - j2 + m) / 2) * f64::from(j + 1).sqrt() * w)
}

/// Clebsch-Gordan coefficient `<j1 m1; j2 m2 | J M>`.
pub fn clebsch_gordan(j1: f64, m1: f64, j2: f64, m2: f64, j: f64, m: f64) -> Result<f64> {
    let t = |x| HalfInt::new(x).map(HalfInt::twice);
    clebsch_gordan_twice(t(j1)?, t(m1)?, t(j2)?, t(m2)?, t(j)?, t(m)?)
}

fn big_factorial(n: i32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn delta_sq_exact(a: i32, b: i32, c: i32) -> BigRational {
    BigRational::new(
        big_factorial((a + b - c) / 2)
            * big_factorial((a - b + c) / 2)
            * big_factorial((b + c - a) / 2),
        big_factorial((a + b + c) / 2 + 1),
    )
}

/// Exact square of the 6-j symbol `{a b c; d e f}` (doubled arguments).
///
/// The square of a 6-j symbol is always rational.
pub fn wigner6j_squared_exact(a: i32, b: i32, c: i32, d: i32, e: i32, f: i32) -> BigRational {
    if !(triangle(a, b, c) && triangle(a, e, f) && triangle(d, b, f) && triangle(d, e, c)) {
        return BigRational::zero();
    }
    let tmin = ((a + b + c) / 2)
        .max((a + e + f) / 2)
        .max((d + b + f) / 2)
        .max((d + e + c) / 2);
    let tmax = ((a + b + d + e) / 2)
        .min((a + c + d + f) / 2)
        .min((b + c + e + f) / 2);
    let mut sum = BigRational::zero();
    for t in tmin..=tmax {
        let denom = big_factorial(t - (a + b + c) / 2)
            * big_factorial(t - (a + e + f) / 2)
            * big_factorial(t - (d + b + f) / 2)
            * big_factorial(t - (d + e + c) / 2)
            * big_factorial((a + b + d + e) / 2 - t)
            * big_factorial((a + c + d + f) / 2 - t)
            * big_factorial((b + c + e + f) / 2 - t);
        let mut term = BigRational::new(big_factorial(t + 1), denom);
        if t % 2 != 0 {
            term = -term;
        }
        sum += term;
    }
    delta_sq_exact(a, b, c)
        * delta_sq_exact(a, e, f)
        * delta_sq_exact(d, b, f)
        * delta_sq_exact(d, e, c)
        * sum.clone()
        * sum
}
