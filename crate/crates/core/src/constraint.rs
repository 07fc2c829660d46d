//! Canonical 4-constraints `(x_i - x_j) - (x_p - x_q) <= m` and their normal
//! vectors. Index 0 is the reserved variable `x0`, pinned to zero.

use std::fmt;

use crate::bound::Bound;
use crate::scalar::Scalar;

/// Index quadruple `(i, j, p, q)` of a canonical 4-constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quad {
    pub i: usize,
    pub j: usize,
    pub p: usize,
    pub q: usize,
}

impl Quad {
    pub const fn new(i: usize, j: usize, p: usize, q: usize) -> Self {
        Quad { i, j, p, q }
    }

    /// `c_ijpq -> c_jiqp`.
    pub const fn complement(self) -> Self {
        Quad::new(self.j, self.i, self.q, self.p)
    }

    pub fn max_index(self) -> usize {
        self.i.max(self.j).max(self.p).max(self.q)
    }

    /// `e_i - e_j - e_p + e_q` over `x0..xn`.
    pub fn normal_vector(self, n: usize) -> NormalVector {
        let mut coeffs = vec![0i64; n + 1];
        coeffs[self.i] += 1;
        coeffs[self.j] -= 1;
        coeffs[self.p] -= 1;
        coeffs[self.q] += 1;
        NormalVector(coeffs)
    }

    /// The canonical quadruple a parser produces for a normal vector:
    /// positive occurrences (ascending, with multiplicity) fill `i` then `q`,
    /// negative ones fill `j` then `p`, and `x0` pads the rest.
    ///
    /// Returns `None` when the vector is not the normal vector of any
    /// 4-constraint.
    pub fn from_vector(vector: &NormalVector) -> Option<Quad> {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (k, &c) in vector.0.iter().enumerate().skip(1) {
            for _ in 0..c.max(0) {
                pos.push(k);
            }
            for _ in 0..(-c).max(0) {
                neg.push(k);
            }
        }
        if pos.len() > 2 || neg.len() > 2 {
            return None;
        }
        let at = |v: &Vec<usize>, k: usize| v.get(k).copied().unwrap_or(0);
        Some(Quad::new(
            at(&pos, 0),
            at(&neg, 0),
            at(&neg, 1),
            at(&pos, 1),
        ))
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.i, self.j, self.p, self.q)
    }
}

/// Integer normal vector of a constraint hyperplane, stored over all `n + 1`
/// coordinates including `x0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalVector(pub Vec<i64>);

impl NormalVector {
    pub fn zeros(len: usize) -> Self {
        NormalVector(vec![0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn neg(&self) -> Self {
        NormalVector(self.0.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        NormalVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scaled(&self, factor: i64) -> Self {
        NormalVector(self.0.iter().map(|c| c * factor).collect())
    }

    /// Divides out the gcd of the entries (`2e_1 - 2e_0` becomes `e_1 - e_0`).
    pub fn primitive(&self) -> Self {
        let g = self
            .0
            .iter()
            .fold(0i64, |g, &c| num_integer::gcd(g, c.abs()));
        if g <= 1 {
            self.clone()
        } else {
            NormalVector(self.0.iter().map(|c| c / g).collect())
        }
    }

    /// Sum of positive coefficients over `x1..xn`.
    pub fn positive_mass(&self) -> i64 {
        self.0.iter().skip(1).filter(|&&c| c > 0).sum()
    }

    /// Sum of absolute negative coefficients over `x1..xn`.
    pub fn negative_mass(&self) -> i64 {
        -self.0.iter().skip(1).filter(|&&c| c < 0).sum::<i64>()
    }

    /// Evaluates `coeffs · valuation`; `valuation[0]` is `x0`.
    pub fn dot<T: Scalar>(&self, valuation: &[T]) -> T {
        self.0
            .iter()
            .zip(valuation)
            .filter(|(&c, _)| c != 0)
            .fold(T::zero(), |acc, (&c, v)| acc + T::from_int(c) * v.clone())
    }
}

impl fmt::Display for NormalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// One canonical 4-constraint `(x_i - x_j) - (x_p - x_q) <= bound`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint4<T> {
    pub quad: Quad,
    pub bound: Bound<T>,
}

impl<T: Scalar> Constraint4<T> {
    pub fn new(i: usize, j: usize, p: usize, q: usize, bound: impl Into<Bound<T>>) -> Self {
        Constraint4 {
            quad: Quad::new(i, j, p, q),
            bound: bound.into(),
        }
    }

    /// Permutes the indices to `c_jiqp`. The bound field is carried over
    /// untouched; the complement's own bound has to be looked up separately.
    pub fn complement(&self) -> Self {
        Constraint4 {
            quad: self.quad.complement(),
            bound: self.bound.clone(),
        }
    }

    pub fn normal_vector(&self, n: usize) -> NormalVector {
        self.quad.normal_vector(n)
    }

    /// Left-hand side `(v_i - v_j) - (v_p - v_q)` under a valuation over
    /// `x0..xn`.
    pub fn evaluate(&self, valuation: &[T]) -> T {
        let Quad { i, j, p, q } = self.quad;
        (valuation[i].clone() - valuation[j].clone())
            - (valuation[p].clone() - valuation[q].clone())
    }

    pub fn is_satisfied_by(&self, valuation: &[T]) -> bool {
        match &self.bound {
            Bound::Infinite => true,
            Bound::Finite(m) => self.evaluate(valuation) <= *m,
        }
    }
}

impl<T: Scalar> fmt::Display for Constraint4<T> {
    /// Prints the aggregated linear form, e.g. `x1 - x2 - x3 <= 8`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.quad.max_index();
        let vector = self.quad.normal_vector(n);
        let mut first = true;
        for (k, &c) in vector.0.iter().enumerate().skip(1) {
            for _ in 0..c.abs() {
                match (first, c > 0) {
                    (true, true) => write!(f, "x{k}")?,
                    (true, false) => write!(f, "-x{k}")?,
                    (false, true) => write!(f, " + x{k}")?,
                    (false, false) => write!(f, " - x{k}")?,
                }
                first = false;
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " <= {}", self.bound)
    }
}
