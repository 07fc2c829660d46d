//! Positive linear dependence and brute-force hypercycle enumeration.
//!
//! Everything here is exact and exponential in the family size. It exists to
//! validate the closure on small instances, not to solve large ones.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bound::Bound;
use crate::constraint::{Constraint4, NormalVector, Quad};
use crate::error::{Error, Result};
use crate::fmoracle::{fm_feasible, fm_tight_bound_scalar, LinearSystem};
use crate::scalar::Scalar;

pub const DEFAULT_MAX_CYCLE_SIZE: usize = 6;
pub const DEFAULT_MAX_CONSTRAINTS: usize = 16;

/// Subset enumeration limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest family (cycle including the complemented target) considered.
    pub max_size: usize,
    /// Largest constraint list accepted.
    pub max_constraints: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_size: DEFAULT_MAX_CYCLE_SIZE,
            max_constraints: DEFAULT_MAX_CONSTRAINTS,
        }
    }
}

impl Caps {
    pub fn with_max_size(max_size: usize) -> Self {
        Caps {
            max_size,
            ..Caps::default()
        }
    }
}

/// Constraints with positive multipliers.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedFamily<T: Scalar = BigRational> {
    pub members: Vec<Constraint4<T>>,
    pub coeffs: Vec<BigRational>,
}

/// A family completing the complement of `target` to a hypercycle, with
/// multipliers normalised so the complement carries coefficient 1.
#[derive(Clone, Debug, PartialEq)]
pub struct HyperPath<T: Scalar = BigRational> {
    pub path: WeightedFamily<T>,
    pub target: Constraint4<T>,
}

impl<T: Scalar> WeightedFamily<T> {
    /// `Σ λ_i · V_i` over `x0..xn`.
    pub fn combination(&self, n: usize) -> Vec<BigRational> {
        let mut sum = vec![BigRational::zero(); n + 1];
        for (c, l) in self.members.iter().zip(&self.coeffs) {
            for (s, v) in sum.iter_mut().zip(c.normal_vector(n).0) {
                *s += l * BigRational::from_integer(v.into());
            }
        }
        sum
    }

    pub fn weight(&self) -> Bound<T> {
        cycle_weight(self, |c| c.bound.clone())
    }
}

impl<T: Scalar> HyperPath<T> {
    pub fn weight(&self) -> Bound<T> {
        self.path.weight()
    }
}

fn check_family(vectors: &[NormalVector], cap: usize) -> Result<()> {
    if vectors.len() > cap {
        return Err(Error::FamilyTooLarge {
            size: vectors.len(),
            cap,
        });
    }
    let len = vectors.first().map_or(0, NormalVector::len);
    for (k, v) in vectors.iter().enumerate() {
        if v.len() != len || v.is_zero() || vectors[..k].contains(v) {
            return Err(Error::InvalidFamily);
        }
    }
    Ok(())
}

/// Basis of `{λ : Σ λ_k V_k = 0}` by reduced row echelon form.
fn kernel(vectors: &[NormalVector]) -> Vec<Vec<BigRational>> {
    let r = vectors.len();
    let d = vectors.first().map_or(0, NormalVector::len);
    let mut a: Vec<Vec<BigRational>> = (0..d)
        .map(|row| {
            vectors
                .iter()
                .map(|v| BigRational::from_integer(v.0[row].into()))
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..r {
        let Some(p) = (row..d).find(|&k| !a[k][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for x in a[row].iter_mut() {
            *x *= &inv;
        }
        for k in 0..d {
            if k != row && !a[k][col].is_zero() {
                let f = a[k][col].clone();
                for c in 0..r {
                    let delta = &f * &a[row][c];
                    a[k][c] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == d {
            break;
        }
    }
    (0..r)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![BigRational::zero(); r];
            v[free] = BigRational::one();
            for (k, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[k][free].clone();
            }
            v
        })
        .collect()
}

/// Scales a positive rational vector to coprime positive integers.
fn to_coprime_integers(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.into_iter().map(|x| x / &gcd).collect()
}

/// `U(f)` when the family is simple: a one-dimensional kernel spanned by a
/// strictly positive vector.
fn simple_coeffs(vectors: &[NormalVector]) -> Option<Vec<BigInt>> {
    if vectors.len() < 2 {
        return None;
    }
    let basis = kernel(vectors);
    if basis.len() != 1 {
        return None;
    }
    let mut v = basis.into_iter().next().unwrap();
    if v[0].is_negative() {
        v.iter_mut().for_each(|x| *x = -x.clone());
    }
    if v.iter().all(Signed::is_positive) {
        Some(to_coprime_integers(&v))
    } else {
        None
    }
}

/// A strictly positive combination of the vectors that vanishes, as coprime
/// positive integers, or `None` if the family is positively independent.
///
/// The vanishing combinations are parameterised by a kernel basis, `λ = Bt`;
/// Fourier-Motzkin elimination then decides `{t : Bt >= 1}` and fixes each
/// `λ_k` in turn to its least feasible value.
pub fn positive_dependence(vectors: &[NormalVector]) -> Result<Option<Vec<BigInt>>> {
    check_family(vectors, DEFAULT_MAX_CONSTRAINTS)?;
    let basis = kernel(vectors);
    if basis.is_empty() {
        return Ok(None);
    }
    let k = basis.len();
    let zero = BigRational::zero();
    // Row over (x0, t_1..t_k) evaluating λ_i.
    let lambda_row = |i: usize| -> Vec<BigRational> {
        std::iter::once(zero.clone())
            .chain(basis.iter().map(|b| b[i].clone()))
            .collect()
    };
    let negate =
        |row: &[BigRational]| -> Vec<BigRational> { row.iter().map(|x| -x.clone()).collect() };
    let mut sys = LinearSystem::<BigRational>::new(k);
    for i in 0..vectors.len() {
        sys.add_row(negate(&lambda_row(i)), -BigRational::one());
    }
    if !fm_feasible(&sys)? {
        return Ok(None);
    }
    let mut lambda = Vec::with_capacity(vectors.len());
    for i in 0..vectors.len() {
        let row = lambda_row(i);
        let least = match fm_tight_bound_scalar(&sys, &negate(&row))? {
            Bound::Finite(m) => -m,
            Bound::Infinite => unreachable!("lambda is bounded below by 1"),
        };
        sys.add_row(row.clone(), least.clone());
        sys.add_row(negate(&row), -least.clone());
        lambda.push(least);
    }
    Ok(Some(to_coprime_integers(&lambda)))
}

/// Whether a positively dependent family has no positively dependent proper
/// subfamily. Positively independent families are reported as not simple.
pub fn is_simple(vectors: &[NormalVector]) -> Result<bool> {
    check_family(vectors, DEFAULT_MAX_CONSTRAINTS)?;
    Ok(simple_coeffs(vectors).is_some())
}

/// The minimal positive-integer vanishing combination `U(f)` of a simple family.
pub fn unique_coeffs(vectors: &[NormalVector]) -> Result<Vec<BigInt>> {
    check_family(vectors, DEFAULT_MAX_CONSTRAINTS)?;
    simple_coeffs(vectors).ok_or(Error::NotSimple)
}

fn dimension<T: Scalar>(constraints: &[Constraint4<T>], extra: Option<Quad>) -> usize {
    constraints
        .iter()
        .map(|c| c.quad.max_index())
        .chain(extra.map(Quad::max_index))
        .max()
        .unwrap_or(0)
}

/// Calls `visit` on every index subset of `0..len` with size in `1..=max`,
/// smallest subsets first.
fn for_each_subset(len: usize, max: usize, mut visit: impl FnMut(&[usize])) {
    fn rec(
        start: usize,
        len: usize,
        size: usize,
        cur: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if cur.len() == size {
            visit(cur);
            return;
        }
        for k in start..len {
            if len - k < size - cur.len() {
                break;
            }
            cur.push(k);
            rec(k + 1, len, size, cur, visit);
            cur.pop();
        }
    }
    for size in 1..=max.min(len) {
        rec(0, len, size, &mut Vec::new(), &mut visit);
    }
}

/// All simple hypercycles among `constraints` of at most `caps.max_size`
/// members. Zero-vector constraints never take part in a hypercycle, and
/// subsets repeating a normal vector are skipped.
pub fn enumerate_simple_hcycles<T: Scalar>(
    constraints: &[Constraint4<T>],
    caps: Caps,
) -> Result<Vec<WeightedFamily<T>>> {
    if constraints.len() > caps.max_constraints {
        return Err(Error::FamilyTooLarge {
            size: constraints.len(),
            cap: caps.max_constraints,
        });
    }
    let n = dimension(constraints, None);
    let vectors: Vec<NormalVector> = constraints.iter().map(|c| c.normal_vector(n)).collect();
    // A simple family spans a space of dimension one less than its size, and
    // all normal vectors live in the n-dimensional zero-sum subspace.
    let max = caps.max_size.min(n + 1);
    let mut out = Vec::new();
    for_each_subset(constraints.len(), max, |idx| {
        if idx.len() < 2 {
            return;
        }
        let family: Vec<NormalVector> = idx.iter().map(|&k| vectors[k].clone()).collect();
        if check_family(&family, usize::MAX).is_err() {
            return;
        }
        if let Some(u) = simple_coeffs(&family) {
            out.push(WeightedFamily {
                members: idx.iter().map(|&k| constraints[k].clone()).collect(),
                coeffs: u.into_iter().map(BigRational::from_integer).collect(),
            });
        }
    });
    Ok(out)
}

/// `Σ λ_k · bound(member_k)`; `+∞` if any member bound is `+∞`.
pub fn cycle_weight<T: Scalar>(
    f: &WeightedFamily<T>,
    bound: impl Fn(&Constraint4<T>) -> Bound<T>,
) -> Bound<T> {
    let mut total = Bound::zero();
    for (c, l) in f.members.iter().zip(&f.coeffs) {
        let lambda = T::from_rational(l).expect("multiplier representable in scalar");
        total = total.add_ref(&bound(c).scale(&lambda));
    }
    total
}

/// Every simple hyperpath of `target` drawn from `constraints`, with at most
/// `caps.max_size - 1` members.
pub fn simple_hyperpaths<T: Scalar>(
    target: &Constraint4<T>,
    constraints: &[Constraint4<T>],
    caps: Caps,
) -> Result<Vec<HyperPath<T>>> {
    if constraints.len() > caps.max_constraints {
        return Err(Error::FamilyTooLarge {
            size: constraints.len(),
            cap: caps.max_constraints,
        });
    }
    let n = dimension(constraints, Some(target.quad));
    let head = target.quad.normal_vector(n).neg();
    let mut out = Vec::new();
    if head.is_zero() {
        return Ok(out);
    }
    let vectors: Vec<NormalVector> = constraints.iter().map(|c| c.normal_vector(n)).collect();
    let max = caps.max_size.saturating_sub(1).min(n);
    for_each_subset(constraints.len(), max, |idx| {
        let mut family = vec![head.clone()];
        family.extend(idx.iter().map(|&k| vectors[k].clone()));
        if check_family(&family, usize::MAX).is_err() {
            return;
        }
        if let Some(u) = simple_coeffs(&family) {
            let lead = BigRational::from_integer(u[0].clone());
            out.push(HyperPath {
                path: WeightedFamily {
                    members: idx.iter().map(|&k| constraints[k].clone()).collect(),
                    coeffs: u[1..]
                        .iter()
                        .map(|x| BigRational::from_integer(x.clone()) / &lead)
                        .collect(),
                },
                target: target.clone(),
            });
        }
    });
    Ok(out)
}

/// Least weight of a simple hyperpath of `target`, `+∞` if there is none.
/// Zero-vector targets have no hyperpaths.
pub fn min_weight_bruteforce<T: Scalar>(
    target: &Constraint4<T>,
    constraints: &[Constraint4<T>],
    caps: Caps,
) -> Result<Bound<T>> {
    Ok(simple_hyperpaths(target, constraints, caps)?
        .iter()
        .map(HyperPath::weight)
        .fold(Bound::Infinite, Bound::min))
}

/// The most negative simple hypercycle, if any has negative weight.
pub fn most_negative_hcycle<T: Scalar>(
    constraints: &[Constraint4<T>],
    caps: Caps,
) -> Result<Option<(WeightedFamily<T>, T)>> {
    let mut best: Option<(WeightedFamily<T>, T)> = None;
    for f in enumerate_simple_hcycles(constraints, caps)? {
        if let Bound::Finite(w) = f.weight() {
            if w.is_negative() && best.as_ref().is_none_or(|(_, b)| w < *b) {
                best = Some((f, w));
            }
        }
    }
    Ok(best)
}
