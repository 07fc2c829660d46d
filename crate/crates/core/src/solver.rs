//! End-to-end pipeline: load, close, reduce domains, extract a witness.

use std::fmt;

use num_rational::BigRational;

use crate::bound::Bound;
use crate::closure::{classify, close_with_cap, exactness_of, ClosureResult, Subclass};
use crate::constraint::{Constraint4, NormalVector, Quad};
use crate::error::{Error, Result};
use crate::fmoracle::{fm_feasible, fm_tight_bound, LinearSystem};
use crate::matrix2d::Matrix2D;
use crate::scalar::Scalar;

/// Closed interval with optional (infinite) ends.
#[derive(Clone, Debug, PartialEq)]
pub struct Interval<T> {
    pub lo: Option<T>,
    pub hi: Option<T>,
}

impl<T: Scalar> Interval<T> {
    pub fn is_bounded(&self) -> bool {
        self.lo.is_some() && self.hi.is_some()
    }

    pub fn contains(&self, x: &T) -> bool {
        self.lo.as_ref().is_none_or(|lo| lo <= x) && self.hi.as_ref().is_none_or(|hi| x <= hi)
    }

    pub fn lo_text(&self) -> String {
        self.lo
            .as_ref()
            .map_or_else(|| "-inf".to_string(), T::to_string)
    }

    pub fn hi_text(&self) -> String {
        self.hi
            .as_ref()
            .map_or_else(|| "inf".to_string(), T::to_string)
    }
}

impl<T: Scalar> fmt::Display for Interval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo_text(), self.hi_text())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveOptions {
    pub max_sweeps: Option<usize>,
    /// Extract a witness even when some domain is unbounded.
    pub witness_anyway: bool,
}

#[derive(Clone, Debug)]
pub struct SolveReport<T: Scalar = BigRational> {
    pub feasible: bool,
    pub closed: ClosureResult<T>,
    /// Intervals of `x1..xn`; empty when infeasible.
    pub domains: Vec<Interval<T>>,
    /// Valuation of `x0..xn` with `x0 = 0`.
    pub witness: Option<Vec<T>>,
}

impl<T: Scalar> SolveReport<T> {
    pub fn to_json_value(&self) -> serde_json::Value {
        let domains: Vec<serde_json::Value> = self
            .domains
            .iter()
            .enumerate()
            .map(|(k, d)| serde_json::json!({ "var": k + 1, "lo": d.lo_text(), "hi": d.hi_text() }))
            .collect();
        let witness = self
            .witness
            .as_ref()
            .map(|w| w.iter().map(T::to_string).collect::<Vec<_>>());
        serde_json::json!({
            "feasible": self.feasible,
            "domains": domains,
            "witness": witness,
            "closed": self.closed.to_json_value(),
        })
    }
}

/// `[-M_0i00, M_i000]` for each `i >= 1`.
pub fn reduce_domains<T: Scalar>(closed: &Matrix2D<T>) -> Vec<Interval<T>> {
    (1..=closed.n())
        .map(|i| Interval {
            lo: closed
                .bound(Quad::new(0, i, 0, 0))
                .finite()
                .map(|m| -m.clone()),
            hi: closed.bound(Quad::new(i, 0, 0, 0)).finite().cloned(),
        })
        .collect()
}

pub fn is_bounded<T: Scalar>(closed: &Matrix2D<T>) -> bool {
    reduce_domains(closed).iter().all(Interval::is_bounded)
}

fn pinned<T: Scalar>(m: &Matrix2D<T>, var: usize, value: &T) -> Matrix2D<T> {
    let mut out = m.clone();
    out.set_min(var, 0, 0, 0, &Bound::Finite(value.clone()))
        .expect("index in range");
    out.set_min(0, var, 0, 0, &Bound::Finite(-value.clone()))
        .expect("index in range");
    out.normalize();
    out
}

fn unit(n: usize, var: usize, sign: i64) -> NormalVector {
    let mut v = NormalVector::zeros(n + 1);
    v.0[var] = sign;
    v.0[0] = -sign;
    v
}

/// Fixes `x1, .., xn` one at a time to their current upper bound and
/// re-closes after each step.
///
/// `constraints` are the originals the matrix was closed from. Unless they
/// are octagonal, every pin is checked with [`fm_feasible`]; a rejected pin
/// is replaced by the exact supremum from [`fm_tight_bound`]. The result is
/// always checked by substitution.
pub fn extract_witness<T: Scalar>(
    closed: &Matrix2D<T>,
    constraints: &[Constraint4<T>],
    options: &SolveOptions,
) -> Result<Vec<T>> {
    // Upper and lower bound forms are not closed exactly in general, so
    // only octagons skip the oracle.
    let trusted = classify(constraints) == Subclass::Octagon;
    let n = closed.n();
    let mut m = closed.clone();
    if m.has_negative_cycle() {
        return Err(Error::Infeasible);
    }
    if !options.witness_anyway {
        if let Some(k) = reduce_domains(&m).iter().position(|d| !d.is_bounded()) {
            return Err(Error::Unbounded { var: k + 1 });
        }
    }
    let mut sys = LinearSystem::from_constraints(constraints, n);
    let mut valuation = vec![T::zero(); n + 1];
    for var in 1..=n {
        let dom = &reduce_domains(&m)[var - 1];
        let candidate = match (&dom.hi, &dom.lo) {
            (Some(hi), _) => hi.clone(),
            _ if !options.witness_anyway => return Err(Error::Unbounded { var }),
            (None, Some(lo)) => lo.clone(),
            (None, None) => T::zero(),
        };
        let mut trial = close_with_cap(&pinned(&m, var, &candidate), options.max_sweeps);
        let mut value = candidate;
        let accepted = trial.feasible
            && (trusted || {
                let mut check = sys.clone();
                check.pin(var, &value);
                fm_feasible(&check)?
            });
        if !accepted {
            value = match fm_tight_bound(&sys, &unit(n, var, 1))? {
                Bound::Finite(hi) => hi,
                Bound::Infinite => match fm_tight_bound(&sys, &unit(n, var, -1))? {
                    Bound::Finite(neg_lo) if options.witness_anyway => -neg_lo,
                    Bound::Infinite if options.witness_anyway => T::zero(),
                    _ => return Err(Error::Unbounded { var }),
                },
            };
            trial = close_with_cap(&pinned(&m, var, &value), options.max_sweeps);
            if !trial.feasible {
                return Err(Error::WitnessFailed(format!(
                    "closure rejects x{var} = {value}, which the elimination oracle accepts"
                )));
            }
        }
        sys.pin(var, &value);
        valuation[var] = value;
        m = trial.matrix;
    }
    if let Some(c) = constraints.iter().find(|c| !c.is_satisfied_by(&valuation)) {
        return Err(Error::WitnessFailed(format!("valuation violates `{c}`")));
    }
    Ok(valuation)
}

pub fn solve<T: Scalar>(constraints: &[Constraint4<T>], n: usize) -> Result<SolveReport<T>> {
    solve_with(constraints, n, &SolveOptions::default())
}

/// Load, close, reduce domains and, when bounded (or when
/// `witness_anyway` is set), extract a witness.
///
/// Fails with [`Error::Infeasible`] if the closure reports a feasible
/// system that the elimination oracle refutes during extraction.
pub fn solve_with<T: Scalar>(
    constraints: &[Constraint4<T>],
    n: usize,
    options: &SolveOptions,
) -> Result<SolveReport<T>> {
    let loaded = Matrix2D::load(constraints, n)?;
    let mut closed = close_with_cap(&loaded, options.max_sweeps);
    // Pins never leave a subclass, so exactness follows the input constraints.
    closed.subclass = classify(constraints);
    closed.exactness = exactness_of(closed.subclass);
    if !closed.feasible {
        return Ok(SolveReport {
            feasible: false,
            closed,
            domains: Vec::new(),
            witness: None,
        });
    }
    let domains = reduce_domains(&closed.matrix);
    let witness = if options.witness_anyway || domains.iter().all(Interval::is_bounded) {
        Some(extract_witness(&closed.matrix, constraints, options)?)
    } else {
        None
    };
    Ok(SolveReport {
        feasible: true,
        closed,
        domains,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::close;
    use crate::parse::parse_system;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    const WORKED_EXAMPLE: &str = "x1 - x2 - x3 <= 3\nx2 - x1 - x4 <= -4\nx4 + x3 <= 5\n\
                         x2 <= 3\nx3 <= 1\nx4 <= 5\nx1 <= 6\n";

    fn system(src: &str) -> (Vec<Constraint4<BigRational>>, usize) {
        let s = parse_system::<BigRational>(src).unwrap();
        (s.constraints, s.n)
    }

    #[test]
    fn worked_example_domains() {
        let (cs, n) = system(WORKED_EXAMPLE);
        let closed = close(&Matrix2D::load(&cs, n).unwrap());
        let d = reduce_domains(&closed.matrix);
        assert!(d[2].hi.as_ref().unwrap() <= &q(1));
        assert!(!is_bounded(&closed.matrix));
    }

    #[test]
    fn worked_example_witness_when_bounded_below() {
        let mut src = WORKED_EXAMPLE.to_string();
        for i in 1..=4 {
            src.push_str(&format!("x{i} >= -100\n"));
        }
        let (cs, n) = system(&src);
        let report = solve(&cs, n).unwrap();
        assert!(report.feasible);
        assert!(report.domains.iter().all(Interval::is_bounded));
        let w = report.witness.unwrap();
        assert_eq!(w[0], q(0));
        assert!(cs.iter().all(|c| c.is_satisfied_by(&w)));
        assert!(report.closed.matrix.is_satisfied_by(&w));
    }

    #[test]
    fn trivial_cases() {
        let m = Matrix2D::<BigRational>::new(3).unwrap();
        assert!(reduce_domains(&m)
            .iter()
            .all(|d| d.lo.is_none() && d.hi.is_none()));
        assert!(!is_bounded(&m));

        let (cs, n) = system("x1 <= 4\n-x1 <= -4\n");
        let report = solve(&cs, n).unwrap();
        assert_eq!(
            report.domains,
            vec![Interval {
                lo: Some(q(4)),
                hi: Some(q(4))
            }]
        );
        assert_eq!(report.witness, Some(vec![q(0), q(4)]));

        let (cs, n) = system("x1 <= 4\n");
        assert!(!is_bounded(&close(&Matrix2D::load(&cs, n).unwrap()).matrix));
    }

    #[test]
    fn infeasible_and_empty() {
        let (cs, n) = system("x1 - x2 <= 1\nx2 - x1 <= -2\n");
        let report = solve(&cs, n).unwrap();
        assert!(!report.feasible);
        assert!(report.witness.is_none());

        let report = solve::<BigRational>(&[], 2).unwrap();
        assert!(report.feasible);
        assert!(report.domains.iter().all(|d| !d.is_bounded()));
        assert!(report.witness.is_none());
    }

    #[test]
    fn witness_anyway_on_unbounded_system() {
        let (cs, n) = system(WORKED_EXAMPLE);
        let opts = SolveOptions {
            witness_anyway: true,
            ..SolveOptions::default()
        };
        let w = solve_with(&cs, n, &opts).unwrap().witness.unwrap();
        assert!(cs.iter().all(|c| c.is_satisfied_by(&w)));

        let (cs, n) = system("x1 - x2 <= 1\n");
        let w = solve_with(&cs, n, &opts).unwrap().witness.unwrap();
        assert!(cs[0].is_satisfied_by(&w));
    }

    #[test]
    fn unbounded_extraction_is_an_error_by_default() {
        let (cs, n) = system("x1 <= 4\n");
        let closed = close(&Matrix2D::load(&cs, n).unwrap());
        assert_eq!(
            extract_witness(&closed.matrix, &cs, &SolveOptions::default()),
            Err(Error::Unbounded { var: 1 })
        );
    }

    #[test]
    fn report_json_is_deterministic() {
        let (cs, n) = system("x1 + x2 <= 5\nx1 >= 1\nx2 >= 1/2\n");
        let a = solve(&cs, n).unwrap().to_json_value().to_string();
        let b = solve(&cs, n).unwrap().to_json_value().to_string();
        assert_eq!(a, b);
        assert!(a.contains("\"hi\":\"9/2\""));
    }
}
