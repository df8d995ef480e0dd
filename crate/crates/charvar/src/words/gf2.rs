//! Dense linear algebra over the two-element field.
//!
//! Sizes here are tiny (generators x relators), so bits are stored one per
//! byte and elimination is the plain textbook algorithm. Everything is
//! exact; no tolerances are involved.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use std::fmt;

/// A vector over GF(2); entries are 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct F2Vector {
    bits: Vec<u8>,
}

impl F2Vector {
    pub fn zeros(len: usize) -> Self {
        F2Vector {
            bits: vec![0; len],
        }
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        F2Vector {
            bits: bits.iter().map(|&b| b & 1).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> u8 {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, value: u8) {
        self.bits[i] = value & 1;
    }

    pub fn flip(&mut self, i: usize) {
        self.bits[i] ^= 1;
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }

    /// In-place XOR with another vector of the same length.
    pub fn add_assign(&mut self, other: &F2Vector) {
        assert_eq!(self.len(), other.len());
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a ^= b;
        }
    }

    pub fn to_bits(&self) -> Vec<u8> {
        self.bits.clone()
    }
}

impl fmt::Display for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, b) in self.bits.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, "]")
    }
}

impl Serialize for F2Vector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.bits.len()))?;
        for b in &self.bits {
            seq.serialize_element(b)?;
        }
        seq.end()
    }
}

/// A dense matrix over GF(2), row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        F2Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols));
        F2Matrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().map(|&b| b & 1).collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: u8) {
        self.data[i * self.cols + j] = value & 1;
    }

    pub fn row(&self, i: usize) -> F2Vector {
        F2Vector::from_bits(&self.data[i * self.cols..(i + 1) * self.cols])
    }

    pub fn column(&self, j: usize) -> F2Vector {
        let mut v = F2Vector::zeros(self.rows);
        for i in 0..self.rows {
            v.set(i, self.get(i, j));
        }
        v
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    /// Row-reduces a copy and returns (reduced matrix, pivot column indices).
    fn row_echelon(&self) -> (F2Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row >= m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&i| m.get(i, col) == 1) else {
                continue;
            };
            // Swap pivot row into place.
            for j in 0..m.cols {
                let tmp = m.get(row, j);
                m.set(row, j, m.get(p, j));
                m.set(p, j, tmp);
            }
            // Clear the column everywhere else (full reduction).
            for i in 0..m.rows {
                if i != row && m.get(i, col) == 1 {
                    for j in 0..m.cols {
                        let v = m.get(i, j) ^ m.get(row, j);
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.row_echelon().1.len()
    }

    /// Solves `self * x = rhs`, returning one solution if any exists.
    pub fn solve(&self, rhs: &F2Vector) -> Option<F2Vector> {
        assert_eq!(rhs.len(), self.rows);
        // Eliminate on the augmented matrix.
        let mut aug = F2Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, rhs.get(i));
        }
        let (red, pivots) = aug.row_echelon();
        // Inconsistent iff some pivot lands in the augmented column.
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = F2Vector::zeros(self.cols);
        for (row, &col) in pivots.iter().enumerate() {
            x.set(col, red.get(row, self.cols));
        }
        Some(x)
    }

    /// A basis of the null space `{x : self * x = 0}`.
    pub fn null_space_basis(&self) -> Vec<F2Vector> {
        let (red, pivots) = self.row_echelon();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = F2Vector::zeros(self.cols);
            v.set(free, 1);
            for (row, &col) in pivots.iter().enumerate() {
                v.set(col, red.get(row, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Dimension of the null space.
    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Matrix-vector product over GF(2).
    pub fn mul_vector(&self, x: &F2Vector) -> F2Vector {
        assert_eq!(x.len(), self.cols);
        let mut out = F2Vector::zeros(self.rows);
        for i in 0..self.rows {
            let mut acc = 0u8;
            for j in 0..self.cols {
                acc ^= self.get(i, j) & x.get(j);
            }
            out.set(i, acc);
        }
        out
    }
}

impl fmt::Display for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "{}", self.row(i))?;
        }
        Ok(())
    }
}

impl Serialize for F2Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows = self.to_rows();
        let mut seq = serializer.serialize_seq(Some(rows.len()))?;
        for r in &rows {
            seq.serialize_element(r)?;
        }
        seq.end()
    }
}
