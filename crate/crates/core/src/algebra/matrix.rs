//! Dense matrices over `F_p` and deterministic Gaussian elimination.
//!
//! Pivots are taken in ascending column order; within a column the first
//! remaining row (ascending index) holding a nonzero entry is chosen.

use std::collections::BTreeMap;

use super::fpvec::{inv_mod, FpVector};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    p: u32,
    cols: usize,
    rows: Vec<FpVector>,
}

impl FpMatrix {
    pub fn new(p: u32, cols: usize) -> Self {
        Self { p, cols, rows: Vec::new() }
    }

    pub fn from_rows(p: u32, cols: usize, rows: Vec<FpVector>) -> Result<Self> {
        for r in &rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: r.len() });
            }
            if r.p() != p {
                return Err(Error::AlgebraMismatch);
            }
        }
        Ok(Self { p, cols, rows })
    }

    pub fn identity(p: u32, n: usize) -> Self {
        Self { p, cols: n, rows: (0..n).map(|i| FpVector::unit(p, n, i)).collect() }
    }

    pub fn push_row(&mut self, row: FpVector) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: row.len() });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }
    pub fn ncols(&self) -> usize {
        self.cols
    }
    pub fn rows(&self) -> &[FpVector] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        Echelon::new(self, false).rank()
    }

    pub fn echelon(&self) -> Echelon {
        Echelon::new(self, true)
    }

    /// Reduced row echelon basis of the row space.
    pub fn row_basis(&self) -> FpMatrix {
        let e = Echelon::new(self, false);
        FpMatrix { p: self.p, cols: self.cols, rows: e.rows }
    }

    /// Coordinates `c` with `Σ c_i·row_i = v`, or `None` when `v` is outside
    /// the row space.
    pub fn membership(&self, v: &FpVector) -> Result<Option<Vec<u32>>> {
        self.echelon().solve(v)
    }

    pub fn solve(&self, v: &FpVector) -> Result<Option<Vec<u32>>> {
        self.membership(v)
    }
}

/// Reduced row echelon form, optionally tracking each reduced row as a
/// combination of the original rows.
#[derive(Clone, Debug)]
pub struct Echelon {
    p: u32,
    cols: usize,
    nrows: usize,
    rows: Vec<FpVector>,
    pivots: Vec<usize>,
    combos: Option<Vec<FpVector>>,
}

impl Echelon {
    pub fn new(m: &FpMatrix, track: bool) -> Self {
        let p = m.p;
        let n = m.rows.len();
        let mut rows = m.rows.clone();
        let mut combos: Option<Vec<FpVector>> = track.then(|| (0..n).map(|i| FpVector::unit(p, n, i)).collect());
        let mut pivots = Vec::new();
        let mut next = 0usize;
        for col in 0..m.cols {
            if next == n {
                break;
            }
            let Some(r) = (next..n).find(|&r| rows[r].get(col) != 0) else {
                continue;
            };
            rows.swap(next, r);
            if let Some(c) = combos.as_mut() {
                c.swap(next, r);
            }
            let lead = rows[next].get(col);
            if lead != 1 {
                let f = inv_mod(lead, p);
                rows[next].scale(f);
                if let Some(c) = combos.as_mut() {
                    c[next].scale(f);
                }
            }
            let pivot_row = rows[next].clone();
            let pivot_combo = combos.as_ref().map(|c| c[next].clone());
            for other in 0..n {
                if other == next {
                    continue;
                }
                let f = rows[other].get(col);
                if f != 0 {
                    let neg = (p - f) % p;
                    rows[other].axpy_from(neg, &pivot_row, col);
                    if let (Some(c), Some(pc)) = (combos.as_mut(), pivot_combo.as_ref()) {
                        c[other].axpy_from(neg, pc, 0);
                    }
                }
            }
            pivots.push(col);
            next += 1;
        }
        rows.truncate(next);
        if let Some(c) = combos.as_mut() {
            c.truncate(next);
        }
        Self { p, cols: m.cols, nrows: n, rows, pivots, combos }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn reduced_rows(&self) -> &[FpVector] {
        &self.rows
    }

    pub fn contains(&self, v: &FpVector) -> bool {
        let mut w = v.clone();
        for (row, &col) in self.rows.iter().zip(&self.pivots) {
            let f = w.get(col);
            if f != 0 {
                w.axpy_from((self.p - f) % self.p, row, col);
            }
        }
        w.is_zero()
    }

    /// Coordinates of `v` over the original rows (requires tracking).
    pub fn solve(&self, v: &FpVector) -> Result<Option<Vec<u32>>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        let combos = self.combos.as_ref().expect("echelon built without tracking");
        let mut w = v.clone();
        let mut coords = FpVector::zero(self.p, self.nrows);
        for ((row, combo), &col) in self.rows.iter().zip(combos).zip(&self.pivots) {
            let f = w.get(col);
            if f != 0 {
                w.axpy_from((self.p - f) % self.p, row, col);
                coords.axpy_from(f, combo, 0);
            }
        }
        if !w.is_zero() {
            return Ok(None);
        }
        Ok(Some((0..self.nrows).map(|i| coords.get(i)).collect()))
    }
}

/// Incrementally grown subspace in semi-echelon form.
#[derive(Clone, Debug)]
pub struct RowSpace {
    p: u32,
    cols: usize,
    rows: BTreeMap<usize, FpVector>,
}

impl RowSpace {
    pub fn new(p: u32, cols: usize) -> Self {
        Self { p, cols, rows: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut FpVector) {
        let mut from = 0;
        while let Some(lead) = v.leading_from(from) {
            match self.rows.get(&lead) {
                Some(row) => {
                    let f = v.get(lead);
                    v.axpy_from((self.p - f) % self.p, row, lead);
                }
                None => from = lead + 1,
            }
        }
    }

    /// Inserts `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &FpVector) -> bool {
        debug_assert_eq!(v.len(), self.cols);
        let mut w = v.clone();
        self.reduce(&mut w);
        match w.leading() {
            None => false,
            Some(lead) => {
                let f = w.get(lead);
                if f != 1 {
                    w.scale(inv_mod(f, self.p));
                }
                self.rows.insert(lead, w);
                true
            }
        }
    }

    pub fn contains(&self, v: &FpVector) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_zero()
    }

    pub fn to_matrix(&self) -> FpMatrix {
        FpMatrix { p: self.p, cols: self.cols, rows: self.rows.values().cloned().collect() }
    }

    pub fn basis(&self) -> impl Iterator<Item = &FpVector> {
        self.rows.values()
    }
}
