//! Exact rational helpers: parsing, formatting, powers and the discount factor.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Arbitrary-precision fraction kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Builds `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Builds `p/q` as a rational. Panics when `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p/q` or a bare integer, with an optional leading sign.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let num: BigInt = parse_int(num).ok_or_else(|| format!("invalid rational `{text}`"))?;
    if !den.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("invalid denominator in `{text}`"));
    }
    let den: BigInt = parse_int(den).ok_or_else(|| format!("invalid rational `{text}`"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in `{text}`"));
    }
    Ok(Rational::new(num, den))
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Serializes as `p/q` in lowest terms, or as a bare integer when `q = 1`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal rendering rounded half away from zero to `places` digits. Advisory only.
pub fn to_decimal(r: &Rational, places: usize) -> String {
    let scale = BigInt::from(10u32).pow(places as u32);
    let scaled = r.abs() * Rational::from_integer(scale.clone());
    let (q, rem) = scaled.numer().div_rem(scaled.denom());
    let twice = rem * 2u32;
    let rounded = if &twice >= scaled.denom() { q + 1u32 } else { q };
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let sign = if r.is_negative() && !rounded.is_zero() { "-" } else { "" };
    if places == 0 {
        return format!("{sign}{int_part}");
    }
    let frac = frac_part.to_string();
    format!("{sign}{int_part}.{}{frac}", "0".repeat(places - frac.len()))
}

/// `base^n` for a non-negative exponent.
pub fn pow(base: &Rational, n: usize) -> Rational {
    let mut acc = Rational::one();
    let mut b = base.clone();
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    acc
}

/// Discount factor `lambda = alpha/beta` with `0 < lambda < 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiscountFactor {
    lambda: Rational,
}

impl DiscountFactor {
    pub fn new(lambda: Rational) -> Result<Self, Error> {
        if !lambda.is_positive() || lambda >= Rational::one() {
            return Err(Error::LambdaRange(format_rational(&lambda)));
        }
        Ok(DiscountFactor { lambda })
    }

    pub fn value(&self) -> &Rational {
        &self.lambda
    }

    pub fn alpha(&self) -> &BigInt {
        self.lambda.numer()
    }

    pub fn beta(&self) -> &BigInt {
        self.lambda.denom()
    }

    /// `lambda^n`.
    pub fn pow(&self, n: usize) -> Rational {
        pow(&self.lambda, n)
    }

    /// `1 - lambda`.
    pub fn complement(&self) -> Rational {
        Rational::one() - &self.lambda
    }

    /// Cached `lambda^0 .. lambda^n` inclusive.
    pub fn powers(&self, n: usize) -> Vec<Rational> {
        let mut out = Vec::with_capacity(n + 1);
        let mut cur = Rational::one();
        for _ in 0..=n {
            out.push(cur.clone());
            cur *= &self.lambda;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("6/4").unwrap(), ratio(3, 2));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert_eq!(parse_rational("+2/-4").ok(), None);
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1.5").is_err());
        assert_eq!(format_rational(&ratio(-6, 4)), "-3/2");
        assert_eq!(format_rational(&int(12)), "12");
    }

    #[test]
    fn decimals() {
        assert_eq!(to_decimal(&ratio(1, 3), 4), "0.3333");
        assert_eq!(to_decimal(&ratio(2, 3), 4), "0.6667");
        assert_eq!(to_decimal(&ratio(-1, 8), 2), "-0.13");
        assert_eq!(to_decimal(&ratio(-1, 1000), 2), "0.00");
        assert_eq!(to_decimal(&int(5), 0), "5");
    }

    #[test]
    fn lambda_bounds() {
        assert!(DiscountFactor::new(int(1)).is_err());
        assert!(DiscountFactor::new(int(0)).is_err());
        let l = DiscountFactor::new(ratio(9, 10)).unwrap();
        assert_eq!(l.alpha(), &BigInt::from(9));
        assert_eq!(l.beta(), &BigInt::from(10));
        assert_eq!(l.pow(2), ratio(81, 100));
        assert_eq!(l.powers(2)[2], ratio(81, 100));
    }
}
