#![allow(dead_code)]

use ldpc_prox::code::{read_alist, ParityCheckCode};
use ldpc_prox::list::correlation;
use ldpc_prox::proximal::eval_h;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const REGULAR_204: &str = concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/../../codes/regular_204_102.alist"
);
pub const HAMMING_7_4: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../codes/hamming_7_4.alist");
pub const REPETITION_2: &str = concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/../../codes/repetition_2.alist"
);

pub fn code_204() -> ParityCheckCode {
    read_alist(REGULAR_204).expect("bundled (3,6)-regular code parses")
}

/// Random full-rank `m x n` parity-check matrix with i.i.d. fair entries.
pub fn random_code(n: usize, m: usize, seed: u64) -> ParityCheckCode {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let rows: Vec<Vec<u8>> = (0..m)
            .map(|_| (0..n).map(|_| rng.gen_range(0..2)).collect())
            .collect();
        if let Ok(code) = ParityCheckCode::from_dense(&rows) {
            if code.rank() == m && code.check_neighbors().iter().all(|r| r.len() >= 2) {
                return code;
            }
        }
    }
}

/// Maximum-correlation codeword; ties go to the earliest codeword.
pub fn exhaustive_ml(codewords: &[Vec<u8>], y: &[f64]) -> Vec<u8> {
    let mut best = (f64::NEG_INFINITY, 0);
    for (idx, c) in codewords.iter().enumerate() {
        let v = correlation(c, y);
        if v > best.0 {
            best = (v, idx);
        }
    }
    codewords[best.1].clone()
}

/// Central finite differences of `eval_h`.
pub fn fd_gradient(code: &ParityCheckCode, x: &[f64], step: f64) -> Vec<f64> {
    let mut xp = x.to_vec();
    (0..x.len())
        .map(|i| {
            xp[i] = x[i] + step;
            let up = eval_h(code, &xp);
            xp[i] = x[i] - step;
            let down = eval_h(code, &xp);
            xp[i] = x[i];
            (up - down) / (2.0 * step)
        })
        .collect()
}

/// Worst `|a - b| / max(|b|, 1)` over components.
pub fn max_rel_error(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / y.abs().max(1.0))
        .fold(0.0, f64::max)
}

pub fn print_line(id: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "acceptance {id:>2} [{}] {name}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

pub fn report(id: u32, name: &str, pass: bool, detail: &str) {
    print_line(id, name, pass, detail);
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
}
