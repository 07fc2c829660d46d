//! The 2D difference-bound matrix.
//!
//! Rows and columns are indexed by ordered variable pairs: the cell at row
//! `p·(n+1)+q`, column `i·(n+1)+j` holds `M_ijpq`, the upper bound of
//! `(x_i - x_j) - (x_p - x_q)`. Storage is dense and row-major.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::bound::Bound;
use crate::constraint::{Constraint4, NormalVector, Quad};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest supported number of variables (excluding `x0`). At this size the
/// matrix has `33^4 ≈ 1.2M` cells.
pub const MAX_VARS: usize = 32;

/// Partition of all cells by normal vector, shared between clones of a
/// matrix of the same size.
#[derive(Debug)]
pub(crate) struct CellClasses {
    class_of: Vec<u32>,
    members: Vec<Vec<u32>>,
    vectors: Vec<NormalVector>,
    zero_class: usize,
    /// `half_of[c] = Some(h)` when the vector of class `c` is twice the
    /// vector of class `h` (cells `M_ijji` versus `M_ij00`).
    half_of: Vec<Option<usize>>,
}

impl CellClasses {
    fn build(n: usize) -> Self {
        let stride = n + 1;
        let cells = stride.pow(4);
        let mut index: HashMap<NormalVector, usize> = HashMap::new();
        let mut class_of = Vec::with_capacity(cells);
        let mut members: Vec<Vec<u32>> = Vec::new();
        let mut vectors = Vec::new();
        for cell in 0..cells {
            let quad = quad_of(cell, stride);
            let v = quad.normal_vector(n);
            let class = *index.entry(v.clone()).or_insert_with(|| {
                members.push(Vec::new());
                vectors.push(v);
                members.len() - 1
            });
            class_of.push(class as u32);
            members[class].push(cell as u32);
        }
        let zero_class = index[&NormalVector::zeros(stride)];
        let half_of = vectors
            .iter()
            .enumerate()
            .map(|(c, v)| {
                if c == zero_class || v.0.iter().any(|x| x % 2 != 0) {
                    return None;
                }
                let half = NormalVector(v.0.iter().map(|x| x / 2).collect());
                index.get(&half).copied()
            })
            .collect();
        CellClasses {
            class_of,
            members,
            vectors,
            zero_class,
            half_of,
        }
    }
}

fn quad_of(cell: usize, stride: usize) -> Quad {
    let dim = stride * stride;
    let (row, col) = (cell / dim, cell % dim);
    Quad::new(col / stride, col % stride, row / stride, row % stride)
}

/// A `(n+1)² × (n+1)²` matrix of bounds.
#[derive(Clone)]
pub struct Matrix2D<T = BigRational> {
    n: usize,
    cells: Vec<Bound<T>>,
    classes: Arc<CellClasses>,
}

impl<T: Scalar> Matrix2D<T> {
    /// The unconstrained matrix: `+∞` everywhere except cells whose normal
    /// vector is zero, which hold 0.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoVariables);
        }
        if n > MAX_VARS {
            return Err(Error::TooManyVariables { n, max: MAX_VARS });
        }
        let classes = Arc::new(CellClasses::build(n));
        let mut cells = vec![Bound::Infinite; classes.class_of.len()];
        for &cell in &classes.members[classes.zero_class] {
            cells[cell as usize] = Bound::zero();
        }
        Ok(Matrix2D { n, cells, classes })
    }

    /// Builds the normalized matrix of a constraint list. Duplicate cells
    /// keep the smallest bound.
    pub fn load(constraints: &[Constraint4<T>], n: usize) -> Result<Self> {
        let mut m = Self::new(n)?;
        for c in constraints {
            let Quad { i, j, p, q } = c.quad;
            m.set_min(i, j, p, q, &c.bound)?;
        }
        m.normalize();
        Ok(m)
    }

    /// Embeds a classic DBM, where `dbm[k][l]` bounds `x_l - x_k`.
    pub fn from_dbm(dbm: &[Vec<Bound<T>>]) -> Result<Self> {
        let size = dbm.len();
        if let Some(row) = dbm.iter().find(|row| row.len() != size) {
            return Err(Error::NonSquare {
                rows: size,
                len: row.len(),
            });
        }
        if size < 2 {
            return Err(Error::NoVariables);
        }
        let mut m = Self::new(size - 1)?;
        for (k, row) in dbm.iter().enumerate() {
            for (l, b) in row.iter().enumerate() {
                if b.is_finite() {
                    m.set_min(l, k, 0, 0, b)?;
                }
            }
        }
        m.normalize();
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Side length `(n+1)²`.
    pub fn dim(&self) -> usize {
        (self.n + 1) * (self.n + 1)
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    #[inline]
    pub fn index_of(&self, i: usize, j: usize, p: usize, q: usize) -> usize {
        let stride = self.n + 1;
        (p * stride + q) * stride * stride + i * stride + j
    }

    pub fn quad_of(&self, cell: usize) -> Quad {
        quad_of(cell, self.n + 1)
    }

    fn check(&self, i: usize, j: usize, p: usize, q: usize) -> Result<usize> {
        let n = self.n;
        if i > n || j > n || p > n || q > n {
            return Err(Error::CellOutOfRange { i, j, p, q, n });
        }
        Ok(self.index_of(i, j, p, q))
    }

    pub fn get(&self, i: usize, j: usize, p: usize, q: usize) -> Result<&Bound<T>> {
        Ok(&self.cells[self.check(i, j, p, q)?])
    }

    /// Bound of a quadruple. Panics if an index exceeds `n`.
    pub fn bound(&self, quad: Quad) -> &Bound<T> {
        let Quad { i, j, p, q } = quad;
        self.get(i, j, p, q).expect("quadruple index out of range")
    }

    /// Stores `min(current, bound)`; returns whether the cell changed.
    pub fn set_min(
        &mut self,
        i: usize,
        j: usize,
        p: usize,
        q: usize,
        bound: &Bound<T>,
    ) -> Result<bool> {
        let idx = self.check(i, j, p, q)?;
        Ok(self.cells[idx].tighten(bound))
    }

    /// Cell by flat `(row, column)` coordinates.
    pub fn at(&self, row: usize, col: usize) -> &Bound<T> {
        &self.cells[row * self.dim() + col]
    }

    pub fn cells(&self) -> &[Bound<T>] {
        &self.cells
    }

    pub(crate) fn cells_mut(&mut self) -> &mut [Bound<T>] {
        &mut self.cells
    }

    pub fn is_zero_vector_cell(&self, cell: usize) -> bool {
        self.classes.class_of[cell] as usize == self.classes.zero_class
    }

    pub fn zero_vector_cells(&self) -> impl Iterator<Item = usize> + '_ {
        self.classes.members[self.classes.zero_class]
            .iter()
            .map(|&c| c as usize)
    }

    /// True iff some cell with a zero normal vector holds a negative bound,
    /// i.e. the matrix encodes `0 <= m` with `m < 0`.
    pub fn has_negative_cycle(&self) -> bool {
        self.zero_vector_cells()
            .any(|c| self.cells[c].is_negative())
    }

    /// Number of distinct normal vectors among the cells.
    pub fn class_count(&self) -> usize {
        self.classes.members.len()
    }

    pub fn class_vector(&self, class: usize) -> &NormalVector {
        &self.classes.vectors[class]
    }

    pub fn class_of(&self, cell: usize) -> usize {
        self.classes.class_of[cell] as usize
    }

    /// First cell (in storage order) of each class.
    pub fn class_representative(&self, class: usize) -> usize {
        self.classes.members[class][0] as usize
    }

    /// Enforces equality of cells that share a normal vector and the
    /// halving law `M_ijji = 2·M_ij00`, always by lowering. Returns whether
    /// any cell changed.
    pub fn normalize(&mut self) -> bool {
        let classes = Arc::clone(&self.classes);
        let mut values: Vec<Bound<T>> =
            classes
                .members
                .iter()
                .map(|members| {
                    members.iter().map(|&c| &self.cells[c as usize]).fold(
                        Bound::Infinite,
                        |acc, b| if *b < acc { b.clone() } else { acc },
                    )
                })
                .collect();
        for (c, half) in classes.half_of.iter().enumerate() {
            if let Some(h) = *half {
                let doubled = values[h].double();
                values[c].tighten(&doubled);
                let halved = values[c].half();
                values[h].tighten(&halved);
            }
        }
        let mut changed = false;
        for (members, value) in classes.members.iter().zip(&values) {
            for &c in members {
                let cell = &mut self.cells[c as usize];
                if cell != value {
                    *cell = value.clone();
                    changed = true;
                }
            }
        }
        changed
    }

    pub fn normalized(mut self) -> Self {
        self.normalize();
        self
    }

    /// One constraint per finite cell with a nonzero normal vector.
    pub fn finite_constraints(&self) -> Vec<Constraint4<T>> {
        self.cells
            .iter()
            .enumerate()
            .filter(|(c, b)| b.is_finite() && !self.is_zero_vector_cell(*c))
            .map(|(c, b)| Constraint4 {
                quad: self.quad_of(c),
                bound: b.clone(),
            })
            .collect()
    }

    /// Whether a valuation over `x0..xn` satisfies every finite cell.
    pub fn is_satisfied_by(&self, valuation: &[T]) -> bool {
        self.cells.iter().enumerate().all(|(c, b)| match b {
            Bound::Infinite => true,
            Bound::Finite(m) => {
                let constraint = Constraint4 {
                    quad: self.quad_of(c),
                    bound: Bound::Finite(m.clone()),
                };
                constraint.is_satisfied_by(valuation)
            }
        })
    }

    fn default_cell(&self, cell: usize) -> Bound<T> {
        if self.is_zero_vector_cell(cell) {
            Bound::zero()
        } else {
            Bound::Infinite
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.to_wire()).expect("matrix serialization is infallible")
    }

    /// `{"n": .., "cells": [[row, col, "p/q" | "inf"], ..]}` listing only
    /// cells that differ from [`Matrix2D::new`].
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_wire()).expect("matrix serialization is infallible")
    }

    fn to_wire(&self) -> MatrixWire {
        let dim = self.dim();
        let cells = self
            .cells
            .iter()
            .enumerate()
            .filter(|(c, b)| **b != self.default_cell(*c))
            .map(|(c, b)| (c / dim, c % dim, b.to_text()))
            .collect();
        MatrixWire { n: self.n, cells }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: MatrixWire =
            serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
        let mut m = Self::new(wire.n)?;
        let dim = m.dim();
        for (row, col, value) in wire.cells {
            if row >= dim || col >= dim {
                return Err(Error::Json(format!(
                    "cell ({row}, {col}) outside a {dim}x{dim} matrix"
                )));
            }
            let bound = Bound::from_text(&value)
                .ok_or_else(|| Error::Json(format!("bad bound `{value}`")))?;
            m.cells[row * dim + col] = bound;
        }
        Ok(m)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixWire {
    n: usize,
    cells: Vec<(usize, usize, String)>,
}

impl<T: Scalar> PartialEq for Matrix2D<T> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.cells == other.cells
    }
}

impl<T: Scalar> fmt::Debug for Matrix2D<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let finite = self.cells.iter().filter(|b| b.is_finite()).count();
        f.debug_struct("Matrix2D")
            .field("n", &self.n)
            .field("finite_cells", &finite)
            .finish()
    }
}
