use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use crate::scalar::Scalar;

/// Extended upper bound: a finite scalar or `+∞`.
///
/// `-∞` is deliberately absent; unbounded-below situations surface as an
/// infeasibility verdict instead.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Bound<T> {
    Finite(T),
    Infinite,
}

impl<T: Scalar> Bound<T> {
    pub fn zero() -> Self {
        Bound::Finite(T::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Bound::Finite(_))
    }

    pub fn finite(&self) -> Option<&T> {
        match self {
            Bound::Finite(v) => Some(v),
            Bound::Infinite => None,
        }
    }

    pub fn into_finite(self) -> Option<T> {
        match self {
            Bound::Finite(v) => Some(v),
            Bound::Infinite => None,
        }
    }

    /// Sum of two bounds; `+∞` absorbs.
    pub fn add_ref(&self, other: &Self) -> Self {
        match (self, other) {
            (Bound::Finite(a), Bound::Finite(b)) => Bound::Finite(a.add_ref(b)),
            _ => Bound::Infinite,
        }
    }

    pub fn scale(&self, factor: &T) -> Self {
        match self {
            Bound::Finite(v) => Bound::Finite(v.clone() * factor.clone()),
            Bound::Infinite => Bound::Infinite,
        }
    }

    pub fn half(&self) -> Self {
        match self {
            Bound::Finite(v) => Bound::Finite(v.half()),
            Bound::Infinite => Bound::Infinite,
        }
    }

    pub fn double(&self) -> Self {
        match self {
            Bound::Finite(v) => Bound::Finite(v.double()),
            Bound::Infinite => Bound::Infinite,
        }
    }

    /// Lowers `self` to `candidate` if that is strictly smaller. Returns
    /// whether `self` changed.
    pub fn tighten(&mut self, candidate: &Self) -> bool {
        if candidate < self {
            *self = candidate.clone();
            true
        } else {
            false
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Bound::Finite(v) if v.is_negative())
    }

    /// Textual form used by the CLI and JSON: reduced `p/q`, plain integers,
    /// or `inf`.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn from_text(text: &str) -> Option<Self> {
        let text = text.trim();
        if text == "inf" || text == "+inf" {
            return Some(Bound::Infinite);
        }
        let value = crate::scalar::parse_rational(text)?;
        T::from_rational(&value).map(Bound::Finite)
    }
}

impl<T: Scalar> PartialOrd for Bound<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Bound::Finite(a), Bound::Finite(b)) => a.partial_cmp(b),
            (Bound::Finite(_), Bound::Infinite) => Some(Ordering::Less),
            (Bound::Infinite, Bound::Finite(_)) => Some(Ordering::Greater),
            (Bound::Infinite, Bound::Infinite) => Some(Ordering::Equal),
        }
    }
}

impl<T: Scalar> Add for Bound<T> {
    type Output = Bound<T>;

    fn add(self, rhs: Self) -> Self::Output {
        self.add_ref(&rhs)
    }
}

impl<T: Scalar> From<T> for Bound<T> {
    fn from(value: T) -> Self {
        Bound::Finite(value)
    }
}

impl<T: Scalar> fmt::Display for Bound<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(v) => write!(f, "{v}"),
            Bound::Infinite => f.write_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type B = Bound<BigRational>;

    fn fin(n: i64, d: i64) -> B {
        Bound::Finite(BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn infinity_absorbs_addition() {
        assert_eq!(fin(1, 2).add_ref(&fin(1, 3)), fin(5, 6));
        assert_eq!(fin(1, 2).add_ref(&B::Infinite), B::Infinite);
        assert_eq!(B::Infinite + fin(-7, 1), B::Infinite);
    }

    #[test]
    fn finite_is_below_infinity() {
        assert!(fin(1_000_000, 1) < B::Infinite);
        assert!(fin(-1, 1) < fin(0, 1));
        assert_eq!(B::Infinite.partial_cmp(&B::Infinite), Some(Ordering::Equal));
    }

    #[test]
    fn text_form() {
        assert_eq!(fin(6, 4).to_text(), "3/2");
        assert_eq!(fin(-8, 2).to_text(), "-4");
        assert_eq!(B::Infinite.to_text(), "inf");
        assert_eq!(B::from_text("-3/2"), Some(fin(-3, 2)));
        assert_eq!(B::from_text("inf"), Some(B::Infinite));
        assert_eq!(B::from_text("x"), None);
    }

    #[test]
    fn tighten_reports_change() {
        let mut b = B::Infinite;
        assert!(b.tighten(&fin(3, 1)));
        assert!(!b.tighten(&fin(3, 1)));
        assert!(!b.tighten(&fin(4, 1)));
        assert!(b.tighten(&fin(-1, 1)));
        assert_eq!(b, fin(-1, 1));
    }
}
