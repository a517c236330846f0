//! Bit vectors and sparse bit matrices over GF(2).
//!
//! Vectors are dense and packed; matrices store, per row, the strictly
//! increasing column indices of their set bits. Addition is XOR and
//! multiplication is AND, so a matrix-vector product is the parity of the
//! vector bits selected by each row.

use std::fmt;

use bitvec::prelude::*;

use crate::error::{Error, Result};

/// A dense, packed vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector(BitVec<u64, Lsb0>);

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector(bitvec![u64, Lsb0; 0; len])
    }

    pub fn ones(len: usize) -> Self {
        BitVector(bitvec![u64, Lsb0; 1; len])
    }

    /// Builds a vector of length `len` with ones at `positions`.
    pub fn from_positions(len: usize, positions: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for p in positions {
            v.set(p, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.0.set(i, value);
    }

    pub fn flip(&mut self, i: usize) {
        let b = self.0[i];
        self.0.set(i, !b);
    }

    /// Hamming weight.
    pub fn count_ones(&self) -> usize {
        self.0.count_ones()
    }

    pub fn is_zero(&self) -> bool {
        self.0.not_any()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter_ones()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.iter().by_vals()
    }

    /// Number of positions where `self` and `other` differ.
    pub fn hamming(&self, other: &BitVector) -> Result<usize> {
        check_len(self.len(), other.len())?;
        let mut x = self.0.clone();
        x ^= &other.0;
        Ok(x.count_ones())
    }

    pub fn xor_assign(&mut self, other: &BitVector) -> Result<()> {
        check_len(self.len(), other.len())?;
        self.0 ^= &other.0;
        Ok(())
    }

    /// GF(2) inner product.
    pub fn dot(&self, other: &BitVector) -> Result<bool> {
        check_len(self.len(), other.len())?;
        let mut x = self.0.clone();
        x &= &other.0;
        Ok(x.count_ones() % 2 == 1)
    }
}

impl FromIterator<bool> for BitVector {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        BitVector(iter.into_iter().collect())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector(")?;
        for b in self.iter() {
            write!(f, "{}", u8::from(b))?;
        }
        write!(f, ")")
    }
}

fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}

/// A sparse row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<Vec<usize>>,
}

impl BitMatrix {
    pub fn new(cols: usize) -> Self {
        BitMatrix {
            cols,
            rows: Vec::new(),
        }
    }

    /// Builds a matrix from per-row column lists. Columns are sorted and
    /// duplicate entries cancel pairwise, as they would under XOR.
    pub fn from_rows(cols: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        let mut m = BitMatrix::new(cols);
        for row in rows {
            m.push_row(row)?;
        }
        Ok(m)
    }

    pub fn from_dense(rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = BitMatrix::new(cols);
        for r in rows {
            check_len(cols, r.len())?;
            m.push_row(r.iter().enumerate().filter(|(_, &b)| b != 0).map(|(j, _)| j).collect())?;
        }
        Ok(m)
    }

    pub fn push_row(&mut self, mut row: Vec<usize>) -> Result<()> {
        row.sort_unstable();
        let mut reduced: Vec<usize> = Vec::with_capacity(row.len());
        for c in row {
            if c >= self.cols {
                return Err(Error::DimensionMismatch {
                    expected: self.cols,
                    actual: c + 1,
                });
            }
            if reduced.last() == Some(&c) {
                reduced.pop();
            } else {
                reduced.push(c);
            }
        }
        self.rows.push(reduced);
        Ok(())
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    /// Sorted column indices of the set bits in row `i`.
    pub fn row(&self, i: usize) -> &[usize] {
        &self.rows[i]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[usize]> {
        self.rows.iter().map(Vec::as_slice)
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].binary_search(&j).is_ok()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn row_vector(&self, i: usize) -> BitVector {
        BitVector::from_positions(self.cols, self.rows[i].iter().copied())
    }

    /// Matrix-vector product `self · vᵀ` over GF(2).
    pub fn mul_vec(&self, v: &BitVector) -> Result<BitVector> {
        check_len(self.cols, v.len())?;
        Ok(self
            .rows
            .iter()
            .map(|row| row.iter().filter(|&&j| v.get(j)).count() % 2 == 1)
            .collect())
    }

    /// Product `self · otherᵀ` over GF(2); entry (i, k) is the parity of the
    /// overlap between row i of `self` and row k of `other`.
    pub fn mul_transpose(&self, other: &BitMatrix) -> Result<BitMatrix> {
        check_len(self.cols, other.cols)?;
        let mut out = BitMatrix::new(other.num_rows());
        for a in &self.rows {
            let mut row = Vec::new();
            for (k, b) in other.rows.iter().enumerate() {
                if sorted_overlap(a, b) % 2 == 1 {
                    row.push(k);
                }
            }
            out.rows.push(row);
        }
        Ok(out)
    }

    /// Per-column lists of the rows that contain each column.
    pub fn column_lists(&self) -> Vec<Vec<usize>> {
        let mut cols = vec![Vec::new(); self.cols];
        for (i, row) in self.rows.iter().enumerate() {
            for &j in row {
                cols[j].push(i);
            }
        }
        cols
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        self.rows
            .iter()
            .map(|row| {
                let mut d = vec![0u8; self.cols];
                for &j in row {
                    d[j] = 1;
                }
                d
            })
            .collect()
    }

    /// Dense 0/1 text rendering: one row per line, entries space separated.
    pub fn to_dense_text(&self) -> String {
        let mut s = String::new();
        for row in self.to_dense() {
            let line: Vec<&str> = row.iter().map(|&b| if b == 1 { "1" } else { "0" }).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.num_rows(), self.cols)?;
        write!(f, "{}", self.to_dense_text())
    }
}

fn sorted_overlap(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xor_and_dot_follow_gf2() {
        let a = BitVector::from_positions(4, [0, 1]);
        let b = BitVector::from_positions(4, [1, 2]);
        assert!(a.dot(&b).unwrap());
        assert!(!a.dot(&a.clone()).unwrap());
        let mut c = a.clone();
        c.xor_assign(&b).unwrap();
        assert_eq!(c, BitVector::from_positions(4, [0, 2]));
        assert_eq!(a.hamming(&b).unwrap(), 2);
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let a = BitVector::zeros(3);
        let b = BitVector::zeros(4);
        assert!(matches!(
            a.hamming(&b),
            Err(Error::DimensionMismatch { expected: 3, actual: 4 })
        ));
    }

    #[test]
    fn rows_cancel_duplicate_columns() {
        let m = BitMatrix::from_rows(5, vec![vec![3, 1, 3, 0]]).unwrap();
        assert_eq!(m.row(0), &[0, 1]);
        assert!(BitMatrix::from_rows(2, vec![vec![2]]).is_err());
    }

    #[test]
    fn mul_vec_is_row_parity() {
        let m = BitMatrix::from_dense(&[vec![1, 1, 1], vec![1, 0, 1]]).unwrap();
        let v = BitVector::from_positions(3, [2]);
        assert_eq!(m.mul_vec(&v).unwrap(), BitVector::from_positions(2, [0, 1]));
        assert!(m.mul_vec(&BitVector::zeros(2)).is_err());
    }

    #[test]
    fn dense_text_round_trip_shape() {
        let m = BitMatrix::from_dense(&[vec![1, 0, 1], vec![0, 1, 0]]).unwrap();
        assert_eq!(m.to_dense_text(), "1 0 1\n0 1 0\n");
        assert_eq!(m.column_lists(), vec![vec![0], vec![1], vec![0]]);
    }
}
