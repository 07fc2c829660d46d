//! Hypergraph closure of a 2D-DBM.
//!
//! Each sweep tightens every cell through the two composition laws
//!
//! ```text
//! M_ijpq <= M_ijkl + M_klpq
//! M_ijpq <= M_iklq + M_kjpl
//! ```
//!
//! for every intermediate pair `(k, l)`, then re-normalizes. Sweeps repeat
//! until nothing changes, a zero-vector cell goes negative, or the cap of
//! `ceil((n+1)^4 / 2)` sweeps is reached.

use std::fmt;

use num_rational::BigRational;
use serde::Serialize;

use crate::bound::Bound;
use crate::constraint::{Constraint4, NormalVector};
use crate::matrix2d::Matrix2D;
use crate::scalar::Scalar;

/// Syntactic subclass of a constraint set. The closure is exact on every
/// class except `General`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Subclass {
    /// Every constraint is `±x_i ± x_j <= k`.
    Octagon,
    /// Every constraint is `x_i - x_j <= x_p + k`.
    UpperBound,
    /// Every constraint is `x_p <= x_i - x_j + k`.
    LowerBound,
    General,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Exactness {
    Exact,
    UpperApprox,
}

impl fmt::Display for Subclass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl fmt::Display for Exactness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug)]
pub struct ClosureResult<T: Scalar = BigRational> {
    pub matrix: Matrix2D<T>,
    pub feasible: bool,
    pub sweeps_used: usize,
    pub subclass: Subclass,
    pub exactness: Exactness,
}

impl<T: Scalar> ClosureResult<T> {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "feasible": self.feasible,
            "sweeps_used": self.sweeps_used,
            "subclass": self.subclass,
            "exactness": self.exactness,
            "matrix": self.matrix.to_json_value(),
        })
    }
}

pub fn exactness_of(subclass: Subclass) -> Exactness {
    match subclass {
        Subclass::Octagon | Subclass::UpperBound | Subclass::LowerBound => Exactness::Exact,
        Subclass::General => Exactness::UpperApprox,
    }
}

/// Classifies by the primitive normal vector of each constraint, so `2x1 <= 8`
/// counts as `x1 <= 4`. Constraints with a zero normal vector are ignored.
pub fn classify_vectors<'a>(vectors: impl IntoIterator<Item = &'a NormalVector>) -> Subclass {
    let (mut octagon, mut upper, mut lower) = (true, true, true);
    for v in vectors {
        if v.is_zero() {
            continue;
        }
        let v = v.primitive();
        let (pos, neg) = (v.positive_mass(), v.negative_mass());
        octagon &= pos + neg <= 2;
        upper &= pos <= 1 && neg <= 2;
        lower &= pos <= 2 && neg <= 1;
    }
    if octagon {
        Subclass::Octagon
    } else if upper {
        Subclass::UpperBound
    } else if lower {
        Subclass::LowerBound
    } else {
        Subclass::General
    }
}

pub fn classify<T: Scalar>(constraints: &[Constraint4<T>]) -> Subclass {
    let n = constraints
        .iter()
        .map(|c| c.quad.max_index())
        .max()
        .unwrap_or(0);
    let vectors: Vec<NormalVector> = constraints.iter().map(|c| c.normal_vector(n)).collect();
    classify_vectors(&vectors)
}

/// Classifies the constraints a matrix currently encodes (its finite,
/// nonzero-vector cells).
pub fn classify_matrix<T: Scalar>(m: &Matrix2D<T>) -> Subclass {
    let vectors: Vec<&NormalVector> = (0..m.class_count())
        .filter(|&c| m.cells()[m.class_representative(c)].is_finite())
        .map(|c| m.class_vector(c))
        .collect();
    classify_vectors(vectors)
}

/// `ceil((n+1)^4 / 2)`.
pub fn sweep_cap(n: usize) -> usize {
    (n + 1).pow(4).div_ceil(2)
}

pub fn close<T: Scalar>(m: &Matrix2D<T>) -> ClosureResult<T> {
    close_with_cap(m, None)
}

/// Closure with an optional lower sweep cap (the default cap always
/// applies as an upper limit).
pub fn close_with_cap<T: Scalar>(m: &Matrix2D<T>, max_sweeps: Option<usize>) -> ClosureResult<T> {
    let subclass = classify_matrix(m);
    let cap = max_sweeps.map_or(sweep_cap(m.n()), |s| s.clamp(1, sweep_cap(m.n())));
    let mut matrix = m.clone();
    matrix.normalize();
    let mut sweeps_used = 0;
    let mut feasible = !matrix.has_negative_cycle();
    while feasible && sweeps_used < cap {
        let tightened = sweep(&mut matrix);
        let normalized = matrix.normalize();
        sweeps_used += 1;
        feasible = !matrix.has_negative_cycle();
        if !tightened && !normalized {
            break;
        }
    }
    ClosureResult {
        matrix,
        feasible,
        sweeps_used,
        subclass,
        exactness: exactness_of(subclass),
    }
}

/// One pass of both composition laws: intermediates `(k, l)` outermost, then
/// every cell in row-major order (rows `(p, q)`, columns `(i, j)`).
fn sweep<T: Scalar>(m: &mut Matrix2D<T>) -> bool {
    let s = m.n() + 1;
    let s2 = s * s;
    let idx = |i: usize, j: usize, p: usize, q: usize| (p * s + q) * s2 + i * s + j;
    let cells = m.cells_mut();
    let mut changed = false;
    for k in 0..s {
        for l in 0..s {
            for p in 0..s {
                for q in 0..s {
                    for i in 0..s {
                        for j in 0..s {
                            let target = idx(i, j, p, q);
                            for (a, b) in [
                                (idx(i, j, k, l), idx(k, l, p, q)),
                                (idx(i, k, l, q), idx(k, j, p, l)),
                            ] {
                                let (Bound::Finite(x), Bound::Finite(y)) = (&cells[a], &cells[b])
                                else {
                                    continue;
                                };
                                let sum = x.add_ref(y);
                                let better = match &cells[target] {
                                    Bound::Infinite => true,
                                    Bound::Finite(cur) => sum < *cur,
                                };
                                if better {
                                    cells[target] = Bound::Finite(sum);
                                    changed = true;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    changed
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_system;

    type M = Matrix2D<BigRational>;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    fn load(src: &str) -> M {
        let sys = parse_system::<BigRational>(src).unwrap();
        M::load(&sys.constraints, sys.n).unwrap()
    }

    fn subclass_of(src: &str) -> Subclass {
        classify(&parse_system::<BigRational>(src).unwrap().constraints)
    }

    const WORKED_EXAMPLE: &str =
        "x1 - x2 - x3 <= 3\nx2 - x1 - x4 <= -4\nx4 + x3 <= 5\nx2 <= 3\nx3 <= 1\nx4 <= 5\nx1 <= 6\n";

    #[test]
    fn worked_example_is_feasible_and_valuation_fits() {
        let r = close(&load(WORKED_EXAMPLE));
        assert!(r.feasible);
        assert!(*r.matrix.get(1, 0, 0, 0).unwrap() <= Bound::Finite(q(6)));
        let nu: Vec<BigRational> = [0, 6, 3, 1, 2].iter().map(|&v| q(v)).collect();
        assert!(r.matrix.is_satisfied_by(&nu));
        assert_eq!(r.subclass, Subclass::General);
        assert_eq!(r.exactness, Exactness::UpperApprox);
    }

    #[test]
    fn negative_difference_cycle_is_infeasible() {
        let r = close(&load("x1 - x2 <= 1\nx2 - x1 <= -2\n"));
        assert!(!r.feasible);
        assert!(r.matrix.has_negative_cycle());
    }

    #[test]
    fn unconstrained_matrix_is_a_fixpoint() {
        let r = close(&M::new(3).unwrap());
        assert!(r.feasible);
        assert_eq!(r.sweeps_used, 1);
        assert_eq!(r.matrix, M::new(3).unwrap());
    }

    #[test]
    fn hypercycle_of_weight_four_stays_feasible() {
        let r = close(&load(
            "x1 - x2 - x3 <= 3\nx2 - x1 - x4 <= -4\nx4 + x3 <= 5\n",
        ));
        assert!(r.feasible);
        assert!(r
            .matrix
            .zero_vector_cells()
            .all(|c| !r.matrix.cells()[c].is_negative()));
        // the cycle yields 0 <= 4; the closure cannot tighten x3 + x4 below
        // what the path through the other two constraints gives (-1 + 5 - 5)
        assert_eq!(*r.matrix.get(0, 3, 4, 0).unwrap(), Bound::Finite(q(-1)));
    }

    #[test]
    fn second_closure_is_one_quiet_sweep() {
        let r = close(&load(WORKED_EXAMPLE));
        let again = close(&r.matrix);
        assert_eq!(again.sweeps_used, 1);
        assert_eq!(again.matrix, r.matrix);
    }

    #[test]
    fn sweep_cap_values() {
        assert_eq!(sweep_cap(1), 8);
        assert_eq!(sweep_cap(2), 41);
        assert_eq!(sweep_cap(4), 313);
    }

    #[test]
    fn explicit_cap_limits_sweeps() {
        let r = close_with_cap(&load(WORKED_EXAMPLE), Some(1));
        assert_eq!(r.sweeps_used, 1);
    }

    #[test]
    fn classification_examples() {
        assert_eq!(
            subclass_of("x1 + x2 <= 5\nx1 - x2 <= 3\n"),
            Subclass::Octagon
        );
        assert_eq!(subclass_of("x1 - x2 - x3 <= 8\n"), Subclass::UpperBound);
        assert_eq!(subclass_of("x3 - x1 + x2 <= 8\n"), Subclass::LowerBound);
        assert_eq!(subclass_of(WORKED_EXAMPLE), Subclass::General);
        assert_eq!(
            subclass_of("x1 + x1 <= 8\nx1 - x2 - x3 <= 1\n"),
            Subclass::UpperBound
        );
        assert_eq!(
            subclass_of("x1 + x2 <= 5\nx1 - x2 - x3 <= 1\n"),
            Subclass::General
        );
    }

    #[test]
    fn exactness_table() {
        assert_eq!(exactness_of(Subclass::Octagon), Exactness::Exact);
        assert_eq!(exactness_of(Subclass::UpperBound), Exactness::Exact);
        assert_eq!(exactness_of(Subclass::LowerBound), Exactness::Exact);
        assert_eq!(exactness_of(Subclass::General), Exactness::UpperApprox);
    }

    #[test]
    fn generic_over_floats() {
        let mut m = Matrix2D::<f64>::new(2).unwrap();
        m.set_min(1, 2, 0, 0, &Bound::Finite(1.0)).unwrap();
        m.set_min(2, 0, 0, 0, &Bound::Finite(2.5)).unwrap();
        m.normalize();
        let r = close(&m);
        assert!(r.feasible);
        assert_eq!(*r.matrix.get(1, 0, 0, 0).unwrap(), Bound::Finite(3.5));
    }

    #[test]
    fn non_dyadic_bound_is_only_approached() {
        // the tight bound -x1 <= 5/3 needs a 1/3 multiplier; sums and halvings
        // of integers only produce dyadic values, so every sweep still tightens
        let r = close(&load("-x1 - x1 + x2 <= 1\nx1 - x2 - x2 <= 3\n-x2 <= 3\n"));
        assert!(r.feasible);
        assert_eq!(r.sweeps_used, sweep_cap(2));
        let Bound::Finite(b) = r.matrix.get(0, 1, 0, 0).unwrap().clone() else {
            panic!("-x1 should be bounded");
        };
        let limit = BigRational::new(5.into(), 3.into());
        assert!(b > limit && b - &limit < BigRational::new(1.into(), 1_000_000.into()));
        assert!(close(&r.matrix).matrix != r.matrix);
    }
}
