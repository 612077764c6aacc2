//! Binary linear codes described by a sparse parity-check matrix.
//!
//! Indices are 0-based everywhere in memory. The alist reader and writer are
//! the only places that translate from and to the 1-based file convention.

mod alist;
mod gf2;

pub use alist::{parse_alist, read_alist, render_alist};
pub use gf2::{BitMatrix, GeneratorMatrix};

use thiserror::Error;

/// Largest length accepted by [`ParityCheckCode::enumerate_codewords`].
pub const MAX_ENUMERATION_LENGTH: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("line {line}: {msg}")]
    Alist { line: usize, msg: String },
    #[error("invalid code structure: {0}")]
    Structure(String),
    #[error("word length {got} does not match expected length {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error(
        "code length {0} is too large for exhaustive enumeration (limit {MAX_ENUMERATION_LENGTH})"
    )]
    TooLarge(usize),
    #[error("i/o error reading {path}: {msg}")]
    Io { path: String, msg: String },
}

/// A binary code given by the check neighbourhoods of its parity-check matrix.
///
/// The matrix is stored twice: `check_neighbors[j]` lists the variables taking
/// part in check `j`, and `var_neighbors[i]` lists the checks containing
/// variable `i`. Both lists are sorted ascending and are exact transposes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheckCode {
    n: usize,
    check_neighbors: Vec<Vec<usize>>,
    var_neighbors: Vec<Vec<usize>>,
}

impl ParityCheckCode {
    /// Builds a code of length `n` from its rows.
    ///
    /// Rows are sorted; out-of-range or repeated indices, empty matrices and
    /// `m >= n` are rejected.
    pub fn from_checks(n: usize, checks: Vec<Vec<usize>>) -> Result<Self, CodeError> {
        let m = checks.len();
        if m == 0 || m >= n {
            return Err(CodeError::Structure(format!(
                "need 1 <= m < n, got n={n}, m={m}"
            )));
        }
        let mut check_neighbors = checks;
        let mut var_neighbors = vec![Vec::new(); n];
        for (j, row) in check_neighbors.iter_mut().enumerate() {
            row.sort_unstable();
            if let Some(&i) = row.iter().find(|&&i| i >= n) {
                return Err(CodeError::Structure(format!(
                    "check {j} references variable {i} outside 0..{n}"
                )));
            }
            if row.windows(2).any(|w| w[0] == w[1]) {
                return Err(CodeError::Structure(format!(
                    "check {j} contains a repeated variable"
                )));
            }
            for &i in row.iter() {
                var_neighbors[i].push(j);
            }
        }
        Ok(Self {
            n,
            check_neighbors,
            var_neighbors,
        })
    }

    /// Builds a code from a dense 0/1 matrix given row by row.
    pub fn from_dense(rows: &[Vec<u8>]) -> Result<Self, CodeError> {
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(CodeError::Structure("ragged dense matrix".into()));
        }
        let checks = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &b)| b != 0)
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        Self::from_checks(n, checks)
    }

    /// The length-`n` repetition code: `n - 1` checks tying consecutive bits.
    pub fn repetition(n: usize) -> Result<Self, CodeError> {
        Self::from_checks(n, (1..n).map(|i| vec![i - 1, i]).collect())
    }

    /// The (7,4) Hamming code.
    pub fn hamming_7_4() -> Self {
        Self::from_checks(
            7,
            vec![vec![0, 1, 3, 4], vec![0, 2, 3, 5], vec![1, 2, 3, 6]],
        )
        .expect("static Hamming matrix is well formed")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.check_neighbors.len()
    }

    /// Design rate `(n - m) / n`. See [`GeneratorMatrix::rate`] for the true rate.
    pub fn design_rate(&self) -> f64 {
        (self.n - self.m()) as f64 / self.n as f64
    }

    pub fn check_neighbors(&self) -> &[Vec<usize>] {
        &self.check_neighbors
    }

    pub fn var_neighbors(&self) -> &[Vec<usize>] {
        &self.var_neighbors
    }

    pub fn num_edges(&self) -> usize {
        self.check_neighbors.iter().map(Vec::len).sum()
    }

    /// `H c^T` over GF(2), one entry per check.
    pub fn syndrome(&self, c: &[u8]) -> Result<Vec<u8>, CodeError> {
        self.check_len(c.len())?;
        Ok(self
            .check_neighbors
            .iter()
            .map(|row| row.iter().fold(0u8, |acc, &i| acc ^ (c[i] & 1)))
            .collect())
    }

    /// True when every parity check is satisfied.
    ///
    /// Panics if `c.len() != n`.
    pub fn is_codeword(&self, c: &[u8]) -> bool {
        assert_eq!(c.len(), self.n, "word length must equal code length");
        self.check_neighbors
            .iter()
            .all(|row| row.iter().fold(0u8, |acc, &i| acc ^ (c[i] & 1)) == 0)
    }

    /// Dense copy of `H` packed into 64-bit words.
    pub fn to_bit_matrix(&self) -> BitMatrix {
        let mut h = BitMatrix::zeros(self.m(), self.n);
        for (j, row) in self.check_neighbors.iter().enumerate() {
            for &i in row {
                h.set(j, i, true);
            }
        }
        h
    }

    /// GF(2) rank of `H`.
    pub fn rank(&self) -> usize {
        self.to_bit_matrix().rank()
    }

    /// Basis of the null space of `H`, computed by Gaussian elimination.
    pub fn derive_generator(&self) -> GeneratorMatrix {
        GeneratorMatrix::from_parity_check(self)
    }

    /// Every codeword, found by testing all `2^n` words against `H`.
    ///
    /// Words are returned in increasing order of their integer value with bit
    /// `i` of the integer mapped to position `i`.
    pub fn enumerate_codewords(&self) -> Result<Vec<Vec<u8>>, CodeError> {
        if self.n > MAX_ENUMERATION_LENGTH {
            return Err(CodeError::TooLarge(self.n));
        }
        let masks: Vec<u32> = self
            .check_neighbors
            .iter()
            .map(|row| row.iter().fold(0u32, |acc, &i| acc | (1 << i)))
            .collect();
        let words = (0u32..(1u32 << self.n))
            .filter(|w| masks.iter().all(|m| (w & m).count_ones() % 2 == 0))
            .map(|w| (0..self.n).map(|i| ((w >> i) & 1) as u8).collect())
            .collect();
        Ok(words)
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<(), CodeError> {
        if len != self.n {
            return Err(CodeError::LengthMismatch {
                expected: self.n,
                got: len,
            });
        }
        Ok(())
    }
}

/// Number of positions where `a` and `b` differ.
pub fn hamming_distance(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn syndrome_of_repetition_code() {
        let code = ParityCheckCode::repetition(2).unwrap();
        assert_eq!(code.syndrome(&[0, 0]).unwrap(), vec![0]);
        assert_eq!(code.syndrome(&[1, 0]).unwrap(), vec![1]);
        assert_eq!(code.syndrome(&[1, 1]).unwrap(), vec![0]);
        assert!(matches!(
            code.syndrome(&[1]),
            Err(CodeError::LengthMismatch {
                expected: 2,
                got: 1
            })
        ));
    }

    #[test]
    fn transpose_is_consistent() {
        let code = ParityCheckCode::hamming_7_4();
        for (j, row) in code.check_neighbors().iter().enumerate() {
            for &i in row {
                assert!(code.var_neighbors()[i].contains(&j));
            }
        }
        for (i, col) in code.var_neighbors().iter().enumerate() {
            for &j in col {
                assert!(code.check_neighbors()[j].contains(&i));
            }
        }
        assert_eq!(code.num_edges(), 12);
    }

    #[test]
    fn rejects_bad_structure() {
        assert!(ParityCheckCode::from_checks(2, vec![vec![0, 2]]).is_err());
        assert!(ParityCheckCode::from_checks(3, vec![vec![0, 0, 1]]).is_err());
        assert!(ParityCheckCode::from_checks(2, vec![]).is_err());
        assert!(ParityCheckCode::from_checks(2, vec![vec![0], vec![1]]).is_err());
    }

    #[test]
    fn enumerates_small_codes() {
        let rep2 = ParityCheckCode::repetition(2).unwrap();
        assert_eq!(
            rep2.enumerate_codewords().unwrap(),
            vec![vec![0, 0], vec![1, 1]]
        );
        assert_eq!(
            ParityCheckCode::hamming_7_4()
                .enumerate_codewords()
                .unwrap()
                .len(),
            16
        );
        let rep5 = ParityCheckCode::repetition(5).unwrap();
        assert_eq!(
            rep5.enumerate_codewords().unwrap(),
            vec![vec![0; 5], vec![1; 5]]
        );
        let big = ParityCheckCode::repetition(25).unwrap();
        assert_eq!(big.enumerate_codewords(), Err(CodeError::TooLarge(25)));
    }

    #[test]
    fn dense_constructor_matches_sparse() {
        let code = ParityCheckCode::from_dense(&[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        assert_eq!(code.check_neighbors(), &[vec![0, 1], vec![1, 2]]);
        assert_eq!(code.var_neighbors(), &[vec![0], vec![0, 1], vec![1]]);
        assert!((code.design_rate() - 1.0 / 3.0).abs() < 1e-15);
    }
}
