#![allow(dead_code)]

use fourcsp::{Bound, Constraint4, NormalVector, Quad, Rational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Octagon,
    UpperBound,
    LowerBound,
    General,
}

impl Kind {
    /// Allowed (positive, negative) masses over `x1..xn`.
    fn shapes(self) -> &'static [(usize, usize)] {
        match self {
            Kind::Octagon => &[(1, 0), (0, 1), (1, 1), (2, 0), (0, 2)],
            Kind::UpperBound => &[(1, 0), (0, 1), (1, 1), (0, 2), (1, 2)],
            Kind::LowerBound => &[(1, 0), (0, 1), (1, 1), (2, 0), (2, 1)],
            Kind::General => &[
                (1, 0),
                (0, 1),
                (1, 1),
                (2, 0),
                (0, 2),
                (1, 2),
                (2, 1),
                (2, 2),
            ],
        }
    }

    /// The shape that takes an instance out of the smaller subclasses.
    fn signature(self) -> (usize, usize) {
        match self {
            Kind::Octagon => (1, 1),
            Kind::UpperBound => (1, 2),
            Kind::LowerBound => (2, 1),
            Kind::General => (2, 2),
        }
    }

    /// Fewest variables for which the signature survives division by the gcd
    /// (`2x1 - 2x2` is just `x1 - x2`).
    fn signature_vars(self) -> usize {
        if self == Kind::General {
            3
        } else {
            2
        }
    }
}

fn vector_with_shape(rng: &mut ChaCha8Rng, n: usize, (pos, neg): (usize, usize)) -> NormalVector {
    loop {
        let mut v = NormalVector::zeros(n + 1);
        for _ in 0..pos {
            v.0[rng.gen_range(1..=n)] += 1;
        }
        for _ in 0..neg {
            v.0[rng.gen_range(1..=n)] -= 1;
        }
        v.0[0] = -v.0[1..].iter().sum::<i64>();
        if !v.is_zero() {
            return v;
        }
    }
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize, kind: Kind) -> NormalVector {
    // with a single variable, balanced shapes always cancel to zero
    let shapes: Vec<(usize, usize)> = kind
        .shapes()
        .iter()
        .copied()
        .filter(|&(p, m)| n > 1 || p != m)
        .collect();
    let shape = *shapes.choose(rng).unwrap();
    vector_with_shape(rng, n, shape)
}

pub fn dot(v: &NormalVector, point: &[i64]) -> i64 {
    v.0.iter().zip(point).map(|(a, b)| a * b).sum()
}

pub fn random_point(rng: &mut ChaCha8Rng, n: usize, radius: i64) -> Vec<i64> {
    std::iter::once(0)
        .chain((0..n).map(|_| rng.gen_range(-radius..=radius)))
        .collect()
}

/// A constraint over `v` with an integer bound in `[-10, 10]`; when a
/// planted point is given the bound is chosen so that the point satisfies it.
pub fn constraint_for(
    rng: &mut ChaCha8Rng,
    v: &NormalVector,
    planted: Option<&[i64]>,
) -> Option<Constraint4<Rational>> {
    let quad = Quad::from_vector(v).expect("generated vectors have 4-constraint shape");
    let bound = match planted {
        Some(p) => dot(v, p) + rng.gen_range(0..=4),
        None => rng.gen_range(-10..=10),
    };
    (-10..=10)
        .contains(&bound)
        .then(|| Constraint4::new(quad.i, quad.j, quad.p, quad.q, q(bound)))
}

/// `count` constraints of the given kind over `x1..xn`. When `n` is large
/// enough, the first one has the kind's signature shape so the instance really
/// belongs to that kind.
pub fn random_instance(
    rng: &mut ChaCha8Rng,
    n: usize,
    count: usize,
    kind: Kind,
    planted: Option<&[i64]>,
) -> Vec<Constraint4<Rational>> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v = if out.is_empty() && n >= kind.signature_vars() {
            let v = vector_with_shape(rng, n, kind.signature());
            let prim = v.primitive();
            let (p, m) = kind.signature();
            if (prim.positive_mass(), prim.negative_mass()) != (p as i64, m as i64) {
                continue;
            }
            v
        } else {
            random_vector(rng, n, kind)
        };
        if let Some(c) = constraint_for(rng, &v, planted) {
            out.push(c);
        }
    }
    out
}

/// `lo <= x_i <= hi` for every variable.
pub fn box_constraints(n: usize, lo: i64, hi: i64) -> Vec<Constraint4<Rational>> {
    (1..=n)
        .flat_map(|i| {
            [
                Constraint4::new(i, 0, 0, 0, q(hi)),
                Constraint4::new(0, i, 0, 0, q(-lo)),
            ]
        })
        .collect()
}

/// All-pairs shortest paths; `None` if there is a negative cycle.
/// `d[k][l]` bounds `x_l - x_k`.
pub fn floyd_warshall(dbm: &[Vec<Option<i64>>]) -> Option<Vec<Vec<Option<i64>>>> {
    let size = dbm.len();
    let mut d = dbm.to_vec();
    for k in 0..size {
        for i in 0..size {
            for j in 0..size {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    (0..size)
        .all(|i| d[i][i].is_none_or(|x| x >= 0))
        .then_some(d)
}

pub fn random_dbm(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<Option<i64>>> {
    (0..=n)
        .map(|k| {
            (0..=n)
                .map(|l| {
                    if k == l {
                        Some(0)
                    } else if rng.gen_bool(0.45) {
                        Some(rng.gen_range(-4..=10))
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect()
}

pub fn to_bounds(dbm: &[Vec<Option<i64>>]) -> Vec<Vec<Bound<Rational>>> {
    dbm.iter()
        .map(|row| {
            row.iter()
                .map(|x| x.map_or(Bound::Infinite, |v| Bound::Finite(q(v))))
                .collect()
        })
        .collect()
}
