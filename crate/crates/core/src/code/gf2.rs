use super::{CodeError, ParityCheckCode};

/// Dense GF(2) matrix, each row packed into 64-bit words (bit `i % 64` of
/// word `i / 64` holds column `i`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64);
        Self {
            rows,
            cols,
            words_per_row,
            data: vec![0; rows * words_per_row],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.row(r)[c / 64] >> (c % 64)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        let w = &mut self.row_mut(r)[c / 64];
        if value {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.words_per_row {
            self.data
                .swap(a * self.words_per_row + w, b * self.words_per_row + w);
        }
    }

    /// `row[dst] ^= row[src]`
    fn xor_row_into(&mut self, src: usize, dst: usize) {
        let wpr = self.words_per_row;
        for w in 0..wpr {
            let v = self.data[src * wpr + w];
            self.data[dst * wpr + w] ^= v;
        }
    }

    /// Reduces in place to reduced row echelon form and returns the pivot
    /// column of each of the leading `rank` rows.
    pub fn reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else {
                continue;
            };
            self.swap_rows(r, p);
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    self.xor_row_into(r, i);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().reduce().len()
    }

    /// Row `r` unpacked into one byte per column.
    pub fn row_bits(&self, r: usize) -> Vec<u8> {
        (0..self.cols).map(|c| self.get(r, c) as u8).collect()
    }
}

/// Basis of a code's null space, used to turn information words into codewords.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMatrix {
    n: usize,
    k: usize,
    check_rank: usize,
    num_checks: usize,
    rows: BitMatrix,
}

impl GeneratorMatrix {
    pub fn from_parity_check(code: &ParityCheckCode) -> Self {
        let n = code.n();
        let mut h = code.to_bit_matrix();
        let pivots = h.reduce();
        let rank = pivots.len();
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        // One basis vector per free column f: x_f = 1, and each pivot variable
        // takes the value its reduced row has in column f.
        let mut rows = BitMatrix::zeros(free.len(), n);
        for (b, &f) in free.iter().enumerate() {
            rows.set(b, f, true);
            for (r, &p) in pivots.iter().enumerate() {
                if h.get(r, f) {
                    rows.set(b, p, true);
                }
            }
        }
        if rank < code.m() {
            log::info!(
                "parity-check matrix is rank deficient: rank {rank} < m {}, k = {}",
                code.m(),
                free.len()
            );
        }
        Self {
            n,
            k: free.len(),
            check_rank: rank,
            num_checks: code.m(),
            rows,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Information length `n - rank(H)`.
    pub fn k(&self) -> usize {
        self.k
    }

    /// GF(2) rank of the parity-check matrix this basis was derived from.
    pub fn check_rank(&self) -> usize {
        self.check_rank
    }

    /// True when `H` has dependent rows, so `k > n - m`.
    pub fn is_rank_deficient(&self) -> bool {
        self.check_rank < self.num_checks
    }

    /// True rate `k / n`.
    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn rows(&self) -> &BitMatrix {
        &self.rows
    }

    pub fn row_bits(&self, r: usize) -> Vec<u8> {
        self.rows.row_bits(r)
    }

    /// GF(2) combination of the rows selected by `u`.
    pub fn encode(&self, u: &[u8]) -> Result<Vec<u8>, CodeError> {
        if u.len() != self.k {
            return Err(CodeError::LengthMismatch {
                expected: self.k,
                got: u.len(),
            });
        }
        let mut acc = vec![0u64; self.n.div_ceil(64)];
        for (r, _) in u.iter().enumerate().filter(|(_, &b)| b & 1 == 1) {
            for (a, w) in acc.iter_mut().zip(self.rows.row(r)) {
                *a ^= w;
            }
        }
        Ok((0..self.n)
            .map(|c| ((acc[c / 64] >> (c % 64)) & 1) as u8)
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repetition_generator() {
        let code = ParityCheckCode::repetition(2).unwrap();
        let g = code.derive_generator();
        assert_eq!(g.k(), 1);
        assert_eq!(g.row_bits(0), vec![1, 1]);
        assert!(!g.is_rank_deficient());
    }

    #[test]
    fn two_by_three_generator() {
        let code = ParityCheckCode::from_dense(&[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        let g = code.derive_generator();
        assert_eq!(g.k(), 1);
        assert_eq!(g.row_bits(0), vec![1, 1, 1]);
    }

    #[test]
    fn rank_deficiency_is_reported() {
        // Third row is the sum of the first two.
        let code =
            ParityCheckCode::from_dense(&[vec![1, 1, 0, 0], vec![0, 1, 1, 0], vec![1, 0, 1, 0]])
                .unwrap();
        let g = code.derive_generator();
        assert_eq!(g.check_rank(), 2);
        assert_eq!(g.k(), 2);
        assert!(g.is_rank_deficient());
        assert!((g.rate() - 0.5).abs() < 1e-15);
        for r in 0..g.k() {
            assert!(code.is_codeword(&g.row_bits(r)));
        }
    }

    #[test]
    fn encode_checks_length() {
        let g = ParityCheckCode::hamming_7_4().derive_generator();
        assert_eq!(g.encode(&[0; 4]).unwrap(), vec![0; 7]);
        assert!(g.encode(&[0; 3]).is_err());
    }

    #[test]
    fn wide_matrix_crosses_word_boundary() {
        let code = ParityCheckCode::repetition(130).unwrap();
        let g = code.derive_generator();
        assert_eq!(g.k(), 1);
        assert_eq!(g.encode(&[1]).unwrap(), vec![1; 130]);
    }
}
