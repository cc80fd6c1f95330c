//! Probability scalar that keeps exact rational values alive as long as possible.
//!
//! Machine definitions are written with rational probabilities, and the
//! headline quantities of this crate (3/2 bits, 1/2 bit, backward weights
//! 1/2, 1/4, 1/4) are exact numbers. A [`Prob`] starts out exact when it is
//! built from a ratio and silently degrades to `f64` only when it is mixed
//! with an approximate value, so analytic pipelines stay exact end to end
//! while empirical estimates use plain floats.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_rational::BigRational;

use crate::error::{Error, Result};

/// A probability that is either an exact rational or an `f64` approximation.
#[derive(Clone, Debug, PartialEq)]
pub enum Prob {
    Exact(BigRational),
    Approx(f64),
}

impl Prob {
    pub fn zero() -> Self {
        Prob::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Prob::Exact(BigRational::one())
    }

    /// Exact probability `num/den`. Panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        Prob::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn approx(value: f64) -> Self {
        Prob::Approx(value)
    }

    /// Parses `"num/den"`, `"num"` or a decimal literal.
    ///
    /// Fraction and integer forms stay exact; anything with a decimal point
    /// or exponent becomes an approximation.
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        let bad = || Error::MachineFormat(format!("cannot parse probability {trimmed:?}"));
        if let Some((num, den)) = trimmed.split_once('/') {
            let num: BigInt = num.trim().parse().map_err(|_| bad())?;
            let den: BigInt = den.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            return Ok(Prob::Exact(BigRational::new(num, den)));
        }
        if let Ok(int) = trimmed.parse::<BigInt>() {
            return Ok(Prob::Exact(BigRational::from_integer(int)));
        }
        trimmed
            .parse::<f64>()
            .map(Prob::Approx)
            .map_err(|_| bad())
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Prob::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Prob::Approx(v) => *v,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Prob::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Prob::Exact(r) => Some(r),
            Prob::Approx(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Prob::Exact(r) => r.is_zero(),
            Prob::Approx(v) => *v == 0.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Prob::Exact(r) => r.is_negative(),
            Prob::Approx(v) => *v < 0.0,
        }
    }

    pub fn mul(&self, other: &Prob) -> Prob {
        match (self, other) {
            (Prob::Exact(a), Prob::Exact(b)) => Prob::Exact(a * b),
            _ => Prob::Approx(self.to_f64() * other.to_f64()),
        }
    }

    pub fn add(&self, other: &Prob) -> Prob {
        match (self, other) {
            (Prob::Exact(a), Prob::Exact(b)) => Prob::Exact(a + b),
            _ => Prob::Approx(self.to_f64() + other.to_f64()),
        }
    }

    /// Division used to form conditional probabilities; `other` must be nonzero.
    pub fn div(&self, other: &Prob) -> Prob {
        match (self, other) {
            (Prob::Exact(a), Prob::Exact(b)) if !b.is_zero() => Prob::Exact(a / b),
            _ => Prob::Approx(self.to_f64() / other.to_f64()),
        }
    }

    /// Renders exact values as `num/den` (or an integer), approximations
    /// as a decimal literal.
    pub fn format(&self) -> String {
        match self {
            Prob::Exact(r) => rational_to_string(r),
            Prob::Approx(v) => format!("{v}"),
        }
    }
}

pub fn rational_to_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `log2` of a positive rational, when that logarithm is itself an integer.
///
/// `log2(num/den)` is rational only when both `num` and `den` are powers of
/// two, in which case it is the integer difference of the exponents. This is
/// what makes entropies of dyadic distributions exactly representable.
pub fn log2_exact(r: &BigRational) -> Option<i64> {
    let a = power_of_two_exponent(r.numer())?;
    let b = power_of_two_exponent(r.denom())?;
    Some(a - b)
}

fn power_of_two_exponent(n: &BigInt) -> Option<i64> {
    if n.sign() != Sign::Plus {
        return None;
    }
    let tz = n.trailing_zeros()?;
    if (n >> tz).is_one() {
        Some(tz as i64)
    } else {
        None
    }
}

/// Exact Shannon entropy in bits of a list of probabilities, when every
/// nonzero probability is an exact dyadic rational. Returns `None` otherwise,
/// in which case callers fall back to the floating-point evaluation.
pub fn entropy_exact<'a>(probs: impl IntoIterator<Item = &'a Prob>) -> Option<BigRational> {
    let mut total = BigRational::zero();
    for p in probs {
        let r = p.as_exact()?;
        if r.is_zero() {
            continue;
        }
        // -p log2 p = p * (log2 den - log2 num)
        let log = log2_exact(r)?;
        total += r * BigRational::from_integer(BigInt::from(-log));
    }
    Some(total)
}

/// Floating-point Shannon entropy in bits with the 0·log 0 := 0 convention.
pub fn entropy_f64<'a>(probs: impl IntoIterator<Item = &'a Prob>) -> f64 {
    let mut h = 0.0;
    for p in probs {
        let v = p.to_f64();
        if v > 0.0 {
            h -= v * v.log2();
        }
    }
    h.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_fraction_and_float() {
        assert_eq!(Prob::parse("1/2").unwrap(), Prob::ratio(1, 2));
        assert_eq!(Prob::parse("3").unwrap(), Prob::ratio(3, 1));
        assert_eq!(Prob::parse("0.25").unwrap(), Prob::Approx(0.25));
        assert!(Prob::parse("1/0").is_err());
        assert!(Prob::parse("abc").is_err());
    }

    #[test]
    fn exactness_propagates_through_products() {
        let p = Prob::ratio(1, 4).mul(&Prob::ratio(1, 2));
        assert_eq!(p, Prob::ratio(1, 8));
        let q = Prob::ratio(1, 4).mul(&Prob::approx(0.5));
        assert!(!q.is_exact());
        assert_eq!(q.to_f64(), 0.125);
    }

    #[test]
    fn dyadic_log2() {
        assert_eq!(log2_exact(&BigRational::new(1.into(), 4.into())), Some(-2));
        assert_eq!(log2_exact(&BigRational::new(8.into(), 1.into())), Some(3));
        assert_eq!(log2_exact(&BigRational::new(3.into(), 4.into())), None);
        assert_eq!(log2_exact(&BigRational::new(1.into(), 3.into())), None);
    }

    #[test]
    fn exact_entropy_of_the_half_quarter_quarter_distribution() {
        let probs = [Prob::ratio(1, 2), Prob::ratio(1, 4), Prob::ratio(1, 4)];
        let h = entropy_exact(&probs).unwrap();
        assert_eq!(h, BigRational::new(3.into(), 2.into()));
    }

    #[test]
    fn non_dyadic_entropy_falls_back_to_float() {
        let probs = [Prob::ratio(2, 3), Prob::ratio(1, 3)];
        assert!(entropy_exact(&probs).is_none());
        let h = entropy_f64(&probs);
        assert!((h - 0.9182958340544896).abs() < 1e-12);
    }

    #[test]
    fn format_round_trips() {
        assert_eq!(Prob::ratio(3, 4).format(), "3/4");
        assert_eq!(Prob::ratio(2, 1).format(), "2");
        assert_eq!(Prob::approx(0.5).format(), "0.5");
    }
}
