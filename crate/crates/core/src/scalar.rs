//! Scalar abstraction for bound arithmetic.
//!
//! Every algorithm in the crate is written against [`Scalar`], an ordered
//! field. The exact instantiation is [`BigRational`]; `f32`/`f64` are
//! provided for quick experiments where exactness is not required.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive};

/// An ordered field usable as the codomain of constraint bounds.
pub trait Scalar:
    Clone + Debug + Display + FromStr + PartialOrd + Num + Signed + Send + Sync + 'static
{
    /// Converts an exact rational into this scalar type.
    fn from_rational(value: &BigRational) -> Option<Self>;

    /// Converts this scalar into an exact rational, if it is finite.
    fn to_rational(&self) -> Option<BigRational>;

    /// `self + other` without consuming either operand.
    fn add_ref(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }

    fn from_int(value: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(value)))
            .expect("small integers are representable in every scalar type")
    }

    fn half(&self) -> Self {
        self.clone() / (Self::one() + Self::one())
    }

    fn double(&self) -> Self {
        self.add_ref(self)
    }
}

impl Scalar for BigRational {
    fn from_rational(value: &BigRational) -> Option<Self> {
        Some(value.clone())
    }

    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }

    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
}

macro_rules! impl_float_scalar {
    ($f:ty, $to:ident) => {
        impl Scalar for $f {
            fn from_rational(value: &BigRational) -> Option<Self> {
                value.$to()
            }

            fn to_rational(&self) -> Option<BigRational> {
                BigRational::from_float(*self)
            }

            fn add_ref(&self, other: &Self) -> Self {
                self + other
            }
        }
    };
}

impl_float_scalar!(f32, to_f32);
impl_float_scalar!(f64, to_f64);

/// Parses an exact rational literal: an integer, `p/q`, or a finite decimal
/// such as `-1.25`.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((numer, denom)) = text.split_once('/') {
        let numer = parse_decimal(numer.trim())?;
        let denom = parse_decimal(denom.trim())?;
        if denom == BigRational::from_integer(BigInt::from(0)) {
            return None;
        }
        return Some(numer / denom);
    }
    parse_decimal(text)
}

fn parse_decimal(text: &str) -> Option<BigRational> {
    let (negative, digits) = match text.as_bytes().first()? {
        b'-' => (true, &text[1..]),
        b'+' => (false, &text[1..]),
        _ => (false, text),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole
        .bytes()
        .chain(frac.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let all: String = format!("{whole}{frac}");
    let numer = BigInt::from_str(if all.is_empty() { "0" } else { &all }).ok()?;
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    let value = BigRational::new(numer, denom);
    Some(if negative { -value } else { value })
}
