//! Exact rationals over `i128` with a big-integer fallback.
//!
//! Values are always stored reduced with a positive denominator. Products
//! that overflow `i128` are recomputed with `BigInt`; a result that still
//! does not fit is a hard error (coordinates in this crate stay far below
//! that range).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i128,
    den: i128,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RationalParseError {
    #[error("expected <num>/<den>")]
    Syntax,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("denominator must be positive")]
    NegativeDenominator,
    #[error("not in lowest terms")]
    Unreduced,
    #[error("integer out of range")]
    Range,
}

fn gcd(a: i128, b: i128) -> i128 {
    a.unsigned_abs().gcd(&b.unsigned_abs()) as i128
}

fn from_big(num: BigInt, den: BigInt) -> Rational {
    let g = num.gcd(&den);
    let (mut n, mut d) = (num / &g, den / &g);
    if d.is_negative() {
        n = -n;
        d = -d;
    }
    match (n.to_i128(), d.to_i128()) {
        (Some(num), Some(den)) => Rational { num, den },
        _ => panic!("rational overflow: {n}/{d} exceeds i128"),
    }
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    /// Builds `num/den` in lowest terms. Panics on a zero denominator.
    pub fn new(num: i128, den: i128) -> Rational {
        assert!(den != 0, "zero denominator");
        if num == 0 {
            return Rational::ZERO;
        }
        let g = gcd(num, den);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        Rational { num: n, den: d }
    }

    pub fn from_int(n: i128) -> Rational {
        Rational { num: n, den: 1 }
    }

    pub fn numer(&self) -> i128 {
        self.num
    }

    pub fn denom(&self) -> i128 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn signum(&self) -> i32 {
        self.num.signum() as i32
    }

    pub fn abs(&self) -> Rational {
        Rational { num: self.num.abs(), den: self.den }
    }

    pub fn floor(&self) -> i128 {
        self.num.div_euclid(self.den)
    }

    /// Fractional part in `[0, 1)`.
    pub fn fract(&self) -> Rational {
        *self - Rational::from_int(self.floor())
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn midpoint(a: Rational, b: Rational) -> Rational {
        (a + b) / Rational::from_int(2)
    }

    fn big(&self) -> (BigInt, BigInt) {
        (BigInt::from(self.num), BigInt::from(self.den))
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::ZERO
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_int(v as i128)
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, o: Rational) -> Rational {
        let g = gcd(self.den, o.den);
        let (db, ob) = (self.den / g, o.den / g);
        let fast = (|| {
            let n = self.num.checked_mul(ob)?.checked_add(o.num.checked_mul(db)?)?;
            let d = self.den.checked_mul(ob)?;
            Some(Rational::new(n, d))
        })();
        fast.unwrap_or_else(|| {
            let (a, b) = self.big();
            let (c, d) = o.big();
            from_big(a * &d + c * &b, b * d)
        })
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational { num: -self.num, den: self.den }
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, o: Rational) -> Rational {
        self + (-o)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, o: Rational) -> Rational {
        if self.num == 0 || o.num == 0 {
            return Rational::ZERO;
        }
        let g1 = gcd(self.num, o.den);
        let g2 = gcd(o.num, self.den);
        let fast = (|| {
            let n = (self.num / g1).checked_mul(o.num / g2)?;
            let d = (self.den / g2).checked_mul(o.den / g1)?;
            Some(Rational::new(n, d))
        })();
        fast.unwrap_or_else(|| {
            let (a, b) = self.big();
            let (c, d) = o.big();
            from_big(a * c, b * d)
        })
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, o: Rational) -> Rational {
        assert!(o.num != 0, "division by zero");
        self * Rational::new(o.den, o.num)
    }
}

impl Ord for Rational {
    fn cmp(&self, o: &Rational) -> Ordering {
        if self.den == o.den {
            return self.num.cmp(&o.num);
        }
        match (self.num.checked_mul(o.den), o.num.checked_mul(self.den)) {
            (Some(l), Some(r)) => l.cmp(&r),
            _ => {
                let (a, b) = self.big();
                let (c, d) = o.big();
                (a * d).cmp(&(c * b))
            }
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, o: &Rational) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Rational {
    type Err = RationalParseError;

    /// Parses the strict `num/den` form: positive denominator, lowest terms.
    fn from_str(s: &str) -> Result<Rational, RationalParseError> {
        let (n, d) = s.split_once('/').ok_or(RationalParseError::Syntax)?;
        let digits = |t: &str, signed: bool| {
            let body = if signed { t.strip_prefix('-').unwrap_or(t) } else { t };
            !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
        };
        if !digits(n, true) || !digits(d, true) {
            return Err(RationalParseError::Syntax);
        }
        let num: i128 = n.parse().map_err(|_| RationalParseError::Range)?;
        let den: i128 = d.parse().map_err(|_| RationalParseError::Range)?;
        if den == 0 {
            return Err(RationalParseError::ZeroDenominator);
        }
        if den < 0 {
            return Err(RationalParseError::NegativeDenominator);
        }
        if gcd(num, den) != 1 && !(num == 0 && den == 1) {
            return Err(RationalParseError::Unreduced);
        }
        if num == 0 && den != 1 {
            return Err(RationalParseError::Unreduced);
        }
        Ok(Rational { num, den })
    }
}

/// Shorthand constructor used throughout the crate and its tests.
pub fn q(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational::ZERO
    }
    fn is_zero(&self) -> bool {
        self.num == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_and_normalises_sign() {
        let r = Rational::new(6, -4);
        assert_eq!((r.numer(), r.denom()), (-3, 2));
        assert_eq!(Rational::new(0, -7), Rational::ZERO);
    }

    #[test]
    fn arithmetic() {
        assert_eq!(q(1, 3) + q(1, 6), q(1, 2));
        assert_eq!(q(1, 3) - q(1, 2), q(-1, 6));
        assert_eq!(q(2, 3) * q(9, 4), q(3, 2));
        assert_eq!(q(2, 3) / q(4, 9), q(3, 2));
        assert_eq!(q(-7, 2).floor(), -4);
        assert_eq!(q(-7, 2).fract(), q(1, 2));
    }

    #[test]
    fn big_fallback_in_products_and_compare() {
        let a = Rational::new(i128::MAX / 3, 7);
        let b = Rational::new(3, i128::MAX / 5);
        // the intermediate product overflows but the result is small
        let p = a * b;
        assert!(p > Rational::ZERO);
        let c = Rational::new(i128::MAX / 2, 1_000_000_007);
        let d = Rational::new(i128::MAX / 2 - 1, 1_000_000_007);
        assert!(c > d);
    }

    #[test]
    fn parse_strict() {
        assert_eq!("3/4".parse::<Rational>(), Ok(q(3, 4)));
        assert_eq!("-3/4".parse::<Rational>(), Ok(q(-3, 4)));
        assert_eq!("0/1".parse::<Rational>(), Ok(Rational::ZERO));
        assert_eq!("2/4".parse::<Rational>(), Err(RationalParseError::Unreduced));
        assert_eq!("0/3".parse::<Rational>(), Err(RationalParseError::Unreduced));
        assert_eq!("1/0".parse::<Rational>(), Err(RationalParseError::ZeroDenominator));
        assert_eq!("1/-2".parse::<Rational>(), Err(RationalParseError::NegativeDenominator));
        assert_eq!("1".parse::<Rational>(), Err(RationalParseError::Syntax));
        assert_eq!("1/2x".parse::<Rational>(), Err(RationalParseError::Syntax));
    }
}
