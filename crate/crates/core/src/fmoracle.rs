//! Fourier-Motzkin elimination over an ordered field.
//!
//! This is the independent oracle for feasibility verdicts and tight bounds.
//! It knows nothing about 2D-DBMs: a system is a list of rows
//! `coeffs · (x0..xn) <= bound` with `x0 = 0` encoded as two rows.

use std::cmp::Ordering;

use num_rational::BigRational;

use crate::bound::Bound;
use crate::constraint::{Constraint4, NormalVector};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default limit on the number of rows alive during elimination.
pub const DEFAULT_ROW_CAP: usize = 50_000;

#[derive(Clone, Debug, PartialEq)]
pub struct Row<T> {
    pub coeffs: Vec<T>,
    pub bound: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearSystem<T = BigRational> {
    n: usize,
    rows: Vec<Row<T>>,
    row_cap: usize,
}

impl<T: Scalar> LinearSystem<T> {
    /// The system `x0 = 0` over `x0..xn`.
    pub fn new(n: usize) -> Self {
        let mut sys = LinearSystem {
            n,
            rows: Vec::new(),
            row_cap: DEFAULT_ROW_CAP,
        };
        let mut e0 = vec![T::zero(); n + 1];
        e0[0] = T::one();
        sys.add_row(e0.clone(), T::zero());
        e0[0] = -T::one();
        sys.add_row(e0, T::zero());
        sys
    }

    /// Encodes every finite constraint; `+∞` bounds are skipped.
    pub fn from_constraints(constraints: &[Constraint4<T>], n: usize) -> Self {
        let mut sys = Self::new(n);
        for c in constraints {
            sys.add_constraint(c);
        }
        sys
    }

    pub fn with_row_cap(mut self, cap: usize) -> Self {
        self.row_cap = cap;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Row<T>] {
        &self.rows
    }

    pub fn add_row(&mut self, coeffs: Vec<T>, bound: T) {
        assert_eq!(coeffs.len(), self.n + 1, "row length must be n + 1");
        self.rows.push(Row { coeffs, bound });
    }

    pub fn add_constraint(&mut self, c: &Constraint4<T>) {
        if let Bound::Finite(m) = &c.bound {
            let coeffs = to_scalar_vec(&c.normal_vector(self.n));
            self.add_row(coeffs, m.clone());
        }
    }

    /// Adds `x_var = value` as two rows.
    pub fn pin(&mut self, var: usize, value: &T) {
        let mut e = vec![T::zero(); self.n + 1];
        e[var] = T::one();
        self.add_row(e.clone(), value.clone());
        e[var] = -T::one();
        self.add_row(e, -value.clone());
    }

    /// Whether a valuation over `x0..xn` satisfies every row.
    pub fn is_satisfied_by(&self, valuation: &[T]) -> bool {
        self.rows
            .iter()
            .all(|r| dot(&r.coeffs, valuation) <= r.bound)
    }
}

fn to_scalar_vec<T: Scalar>(v: &NormalVector) -> Vec<T> {
    v.0.iter().map(|&c| T::from_int(c)).collect()
}

fn dot<T: Scalar>(coeffs: &[T], x: &[T]) -> T {
    coeffs
        .iter()
        .zip(x)
        .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
}

/// Nonemptiness of the polyhedron.
pub fn fm_feasible<T: Scalar>(sys: &LinearSystem<T>) -> Result<bool> {
    let order: Vec<usize> = (1..=sys.n).chain(std::iter::once(0)).collect();
    match eliminate(sys.rows.clone(), &order, sys.row_cap) {
        Ok(_) => Ok(true),
        Err(Error::Infeasible) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Supremum of `objective · x` over the polyhedron, `+∞` when unbounded.
/// Fails with [`Error::Infeasible`] on an empty polyhedron.
pub fn fm_tight_bound<T: Scalar>(
    sys: &LinearSystem<T>,
    objective: &NormalVector,
) -> Result<Bound<T>> {
    assert_eq!(objective.len(), sys.n + 1, "objective length must be n + 1");
    fm_tight_bound_scalar(sys, &to_scalar_vec(objective))
}

/// Same as [`fm_tight_bound`] for an arbitrary objective row.
pub fn fm_tight_bound_scalar<T: Scalar>(
    sys: &LinearSystem<T>,
    objective: &[T],
) -> Result<Bound<T>> {
    // Append t with t - objective·x <= 0 and project everything onto t.
    let t = sys.n + 1;
    let mut rows: Vec<Row<T>> = sys
        .rows
        .iter()
        .map(|r| {
            let mut coeffs = r.coeffs.clone();
            coeffs.push(T::zero());
            Row {
                coeffs,
                bound: r.bound.clone(),
            }
        })
        .collect();
    let mut link: Vec<T> = objective.iter().map(|c| -c.clone()).collect();
    link.push(T::one());
    rows.push(Row {
        coeffs: link,
        bound: T::zero(),
    });
    let order: Vec<usize> = (1..=sys.n).chain(std::iter::once(0)).collect();
    let projected = eliminate(rows, &order, sys.row_cap)?;
    let mut best = Bound::Infinite;
    for r in projected {
        let a = &r.coeffs[t];
        if a.is_positive() {
            best.tighten(&Bound::Finite(r.bound.clone() / a.clone()));
        }
    }
    Ok(best)
}

/// A row with the set of input rows it was combined from.
struct Work<T> {
    row: Row<T>,
    origin: u128,
}

/// Eliminates the listed variables in order. Returns the surviving rows
/// (all of which have zero coefficients on eliminated variables) or
/// [`Error::Infeasible`] as soon as a row `0 <= b` with `b < 0` appears.
///
/// Besides duplicate pruning, Chernikov's rule drops any row combined from
/// more than `s + 1` input rows after `s` eliminations; such rows are implied
/// by the others. Origins are tracked for up to 128 input rows.
fn eliminate<T: Scalar>(rows: Vec<Row<T>>, order: &[usize], cap: usize) -> Result<Vec<Row<T>>> {
    let track = rows.len() <= 128;
    eliminate_with(rows, order, cap, track)
}

fn eliminate_with<T: Scalar>(
    rows: Vec<Row<T>>,
    order: &[usize],
    cap: usize,
    track: bool,
) -> Result<Vec<Row<T>>> {
    let mut rows = prune(
        rows.into_iter()
            .enumerate()
            .map(|(k, row)| Work {
                row,
                origin: if track { 1u128 << k } else { 0 },
            })
            .collect(),
    )?;
    for (step, &var) in order.iter().enumerate() {
        let (mut pos, mut neg, mut keep) = (Vec::new(), Vec::new(), Vec::new());
        for w in rows {
            if w.row.coeffs[var].is_positive() {
                pos.push(w);
            } else if w.row.coeffs[var].is_negative() {
                neg.push(w);
            } else {
                keep.push(w);
            }
        }
        let limit = step + 2;
        for p in &pos {
            for q in &neg {
                let origin = p.origin | q.origin;
                if track && origin.count_ones() as usize > limit {
                    continue;
                }
                if keep.len() >= cap {
                    return Err(Error::EliminationBlowUp { cap });
                }
                let a = p.row.coeffs[var].clone();
                let b = -q.row.coeffs[var].clone();
                let mut coeffs: Vec<T> = p
                    .row
                    .coeffs
                    .iter()
                    .zip(&q.row.coeffs)
                    .map(|(x, y)| x.clone() * b.clone() + y.clone() * a.clone())
                    .collect();
                coeffs[var] = T::zero();
                let bound = p.row.bound.clone() * b + q.row.bound.clone() * a;
                keep.push(Work {
                    row: Row { coeffs, bound },
                    origin,
                });
            }
        }
        rows = prune(keep)?;
    }
    Ok(rows.into_iter().map(|w| w.row).collect())
}

/// Scales each row so its first nonzero coefficient is ±1, drops trivial
/// rows, detects contradictions, and keeps only the tightest of rows with
/// identical coefficients and origin.
fn prune<T: Scalar>(rows: Vec<Work<T>>) -> Result<Vec<Work<T>>> {
    let mut out: Vec<Work<T>> = Vec::with_capacity(rows.len());
    for mut w in rows {
        let r = &mut w.row;
        match r.coeffs.iter().find(|c| !c.is_zero()).cloned() {
            None => {
                if r.bound.is_negative() {
                    return Err(Error::Infeasible);
                }
            }
            Some(lead) => {
                let scale = lead.abs();
                if scale != T::one() {
                    r.coeffs
                        .iter_mut()
                        .for_each(|c| *c = c.clone() / scale.clone());
                    r.bound = r.bound.clone() / scale;
                }
                out.push(w);
            }
        }
    }
    // Only rows with the same origin set are merged: dropping a tighter
    // duplicate built from fewer rows would break Chernikov's rule later.
    out.sort_by(|a, b| {
        compare_coeffs(&a.row.coeffs, &b.row.coeffs)
            .then(a.origin.cmp(&b.origin))
            .then(partial(&a.row.bound, &b.row.bound))
    });
    out.dedup_by(|later, earlier| {
        later.origin == earlier.origin
            && compare_coeffs(&later.row.coeffs, &earlier.row.coeffs) == Ordering::Equal
    });
    Ok(out)
}

fn partial<T: Scalar>(a: &T, b: &T) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

fn compare_coeffs<T: Scalar>(a: &[T], b: &[T]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| partial(x, y))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal)
}
