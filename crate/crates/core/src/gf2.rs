//! Linear algebra over GF(2).
//!
//! [`BitVec`] is a packed bit vector and [`BitMatrix`] a row-major matrix of
//! them. All eliminations choose the lowest available pivot column first, so
//! reduced forms and canonical coset representatives are reproducible.

use std::fmt;

use crate::error::{Error, Result};

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Vector with ones exactly at `indices` (0-based).
    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut v = BitVec::zeros(len);
        for &i in indices {
            v.flip(i);
        }
        v
    }

    /// Low `len` bits of `value`; bit `i` of the vector is bit `i` of the integer.
    pub fn from_u64(len: usize, value: u64) -> Self {
        assert!(len <= 64, "from_u64 supports at most 64 bits");
        let mut v = BitVec::zeros(len);
        if len > 0 {
            let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
            v.words[0] = value & mask;
        }
        v
    }

    /// Integer with bit `i` equal to entry `i`, if the vector fits in 64 bits.
    pub fn to_u64(&self) -> Option<u64> {
        match self.len {
            0 => Some(0),
            l if l <= 64 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &BitVec) -> BitVec {
        assert_eq!(self.len, other.len, "length mismatch in and");
        BitVec { len: self.len, words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect() }
    }

    pub fn or(&self, other: &BitVec) -> BitVec {
        assert_eq!(self.len, other.len, "length mismatch in or");
        BitVec { len: self.len, words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect() }
    }

    /// GF(2) inner product.
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        let ones: u32 = self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum();
        ones % 2 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Indices of set bits in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    /// Sub-vector made of the entries at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> BitVec {
        let mut out = BitVec::zeros(indices.len());
        for (j, &i) in indices.iter().enumerate() {
            out.set(j, self.get(i));
        }
        out
    }

    /// Concatenation `self ‖ other`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        for i in self.ones() {
            out.set(i, true);
        }
        for i in other.ones() {
            out.set(self.len + i, true);
        }
        out
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVec>,
}

/// Reduced row echelon form together with the pivot column of each row.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: BitMatrix,
    pub pivots: Vec<usize>,
}

impl BitMatrix {
    /// Empty matrix with `cols` columns and no rows.
    pub fn new(cols: usize) -> Self {
        BitMatrix { cols, rows: Vec::new() }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix { cols, rows: vec![BitVec::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.rows[i].set(i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Dimension { expected: cols, got: bad.len() });
        }
        Ok(BitMatrix { cols, rows })
    }

    pub fn push_row(&mut self, row: BitVec) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::Dimension { expected: self.cols, got: row.len() });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value);
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones() {
                t.rows[c].set(r, true);
            }
        }
        t
    }

    /// Matrix-vector product `M x`.
    pub fn mul_vec(&self, x: &BitVec) -> Result<BitVec> {
        if x.len() != self.cols {
            return Err(Error::Dimension { expected: self.cols, got: x.len() });
        }
        Ok(BitVec::from_bools(&self.rows.iter().map(|r| r.dot(x)).collect::<Vec<_>>()))
    }

    /// Reduced row echelon form; zero rows are dropped.
    pub fn rref(&self) -> Rref {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..self.cols {
            let Some(found) = (next..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(next, found);
            let pivot_row = rows[next].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != next && row.get(col) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(col);
            next += 1;
            if next == rows.len() {
                break;
            }
        }
        rows.truncate(next);
        Rref { matrix: BitMatrix { cols: self.cols, rows }, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the right null space `{x : M x = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<BitVec> {
        let Rref { matrix, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = BitVec::zeros(self.cols);
                x.set(f, true);
                for (row, &p) in matrix.rows.iter().zip(&pivots) {
                    if row.get(f) {
                        x.set(p, true);
                    }
                }
                x
            })
            .collect()
    }

    /// Coefficients `c` with `Σ c_i row_i = target`, or `None` if `target`
    /// is outside the row space.
    pub fn solve_combination(&self, target: &BitVec) -> Result<Option<BitVec>> {
        if target.len() != self.cols {
            return Err(Error::Dimension { expected: self.cols, got: target.len() });
        }
        let m = self.rows.len();
        // Each working row carries the combination of original rows it equals.
        let mut work: Vec<(BitVec, BitVec)> =
            self.rows.iter().enumerate().map(|(i, r)| (r.clone(), BitVec::from_indices(m, &[i]))).collect();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..self.cols {
            let Some(found) = (next..work.len()).find(|&r| work[r].0.get(col)) else {
                continue;
            };
            work.swap(next, found);
            let (pr, pc) = work[next].clone();
            for (r, (row, comb)) in work.iter_mut().enumerate() {
                if r != next && row.get(col) {
                    row.xor_assign(&pr);
                    comb.xor_assign(&pc);
                }
            }
            pivots.push(col);
            next += 1;
        }
        let mut residual = target.clone();
        let mut coeffs = BitVec::zeros(m);
        for (i, &p) in pivots.iter().enumerate() {
            if residual.get(p) {
                residual.xor_assign(&work[i].0);
                coeffs.xor_assign(&work[i].1);
            }
        }
        Ok(residual.is_zero().then_some(coeffs))
    }
}

/// Rank over GF(2).
pub fn rank(m: &BitMatrix) -> usize {
    m.rank()
}

/// Basis of the right null space.
pub fn kernel(m: &BitMatrix) -> Vec<BitVec> {
    m.kernel()
}

/// Canonical representative of `v + rowspace(subspace)`: reduce `v` against
/// the reduced row echelon form so that every pivot column is cleared.
pub fn coset_canonical(v: &BitVec, subspace: &BitMatrix) -> Result<BitVec> {
    if v.len() != subspace.ncols() {
        return Err(Error::Dimension { expected: subspace.ncols(), got: v.len() });
    }
    let Rref { matrix, pivots } = subspace.rref();
    let mut out = v.clone();
    for (row, &p) in matrix.rows.iter().zip(&pivots) {
        if out.get(p) {
            out.xor_assign(row);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&str]) -> BitMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows.iter().map(|r| BitVec::from_bools(&r.chars().map(|c| c == '1').collect::<Vec<_>>())).collect();
        BitMatrix::from_rows(cols, rows).unwrap()
    }

    #[test]
    fn identity_rank_and_kernel() {
        assert_eq!(rank(&BitMatrix::identity(2)), 2);
        assert!(kernel(&BitMatrix::identity(5)).is_empty());
    }

    #[test]
    fn zero_column_kernel_is_unit_vector() {
        let k = kernel(&m(&["10", "10"]));
        assert_eq!(k, vec![BitVec::from_indices(2, &[1])]);
    }

    #[test]
    fn rref_prefers_lowest_pivot() {
        let r = m(&["011", "110"]).rref();
        assert_eq!(r.pivots, vec![0, 1]);
        assert_eq!(r.matrix.row(0).to_string(), "101");
        assert_eq!(r.matrix.row(1).to_string(), "011");
    }

    #[test]
    fn coset_canonical_trivial_cases() {
        let v = BitVec::from_indices(4, &[0, 2]);
        assert_eq!(coset_canonical(&v, &BitMatrix::new(4)).unwrap(), v);
        let span = BitMatrix::from_rows(4, vec![v.clone()]).unwrap();
        assert!(coset_canonical(&v, &span).unwrap().is_zero());
        assert!(coset_canonical(&BitVec::zeros(3), &span).is_err());
    }

    #[test]
    fn solve_combination_finds_coefficients() {
        let a = m(&["1100", "0110", "0011"]);
        let c = a.solve_combination(&BitVec::from_indices(4, &[0, 3])).unwrap().unwrap();
        assert_eq!(c.to_string(), "111");
        assert!(a.solve_combination(&BitVec::from_indices(4, &[0])).unwrap().is_none());
    }

    #[test]
    fn u64_round_trip() {
        let v = BitVec::from_u64(5, 0b10110);
        assert_eq!(v.to_string(), "01101");
        assert_eq!(v.to_u64(), Some(0b10110));
    }
}
