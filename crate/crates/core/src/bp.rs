//! Sum-product belief propagation on LLRs with a flooding schedule.

use crate::code::ParityCheckCode;
use crate::proximal::DecodeOutcome;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BpParams {
    pub max_iters: usize,
    /// Saturation magnitude applied to every message.
    pub llr_clip: f64,
}

impl Default for BpParams {
    fn default() -> Self {
        Self {
            max_iters: 200,
            llr_clip: 30.0,
        }
    }
}

impl BpParams {
    pub fn validate(&self) -> Result<(), String> {
        if self.max_iters == 0 {
            return Err("BP max_iters must be at least 1".into());
        }
        if !(self.llr_clip > 0.0) {
            return Err(format!(
                "BP llr_clip must be positive, got {}",
                self.llr_clip
            ));
        }
        Ok(())
    }
}

/// Decodes `y` received over AWGN with noise deviation `sigma`.
///
/// Iteration `t` first checks the current hard decision (iteration 1 uses the
/// channel LLRs) and then runs one check and one variable update. The
/// returned outcome has no gradient tail; `s_final` holds posterior LLRs.
pub fn decode_bp(
    code: &ParityCheckCode,
    y: &[f64],
    sigma: f64,
    params: &BpParams,
) -> DecodeOutcome {
    assert_eq!(
        y.len(),
        code.n(),
        "received word length must equal code length"
    );
    assert!(sigma > 0.0, "sigma must be positive");
    let clip = params.llr_clip;
    let channel: Vec<f64> = y
        .iter()
        .map(|&v| (2.0 * v / (sigma * sigma)).clamp(-clip, clip))
        .collect();

    // Edge messages are stored per check, in the order of check_neighbors.
    let rows = code.check_neighbors();
    let mut offsets = Vec::with_capacity(rows.len() + 1);
    offsets.push(0);
    for row in rows {
        offsets.push(offsets.last().unwrap() + row.len());
    }
    let edges = *offsets.last().unwrap();
    let mut v2c: Vec<f64> = rows.iter().flatten().map(|&i| channel[i]).collect();
    let mut c2v = vec![0.0; edges];
    let mut posterior = channel.clone();
    let mut c_hat: Vec<u8> = posterior.iter().map(|&l| u8::from(l <= 0.0)).collect();
    let mut tanh = Vec::new();

    for it in 1..=params.max_iters {
        if code.is_codeword(&c_hat) {
            return DecodeOutcome {
                c_hat,
                converged: true,
                iterations: it,
                grad_tail: None,
                s_final: posterior,
            };
        }
        // Check update, tanh rule with products of all other edges.
        for (j, row) in rows.iter().enumerate() {
            let base = offsets[j];
            tanh.clear();
            tanh.extend((0..row.len()).map(|k| (0.5 * v2c[base + k]).tanh()));
            let mut prefix = 1.0;
            for k in 0..row.len() {
                c2v[base + k] = prefix;
                prefix *= tanh[k];
            }
            let mut suffix = 1.0;
            for k in (0..row.len()).rev() {
                let t = (c2v[base + k] * suffix).clamp(-1.0, 1.0);
                c2v[base + k] = (2.0 * t.atanh()).clamp(-clip, clip);
                suffix *= tanh[k];
            }
        }
        posterior.copy_from_slice(&channel);
        for (j, row) in rows.iter().enumerate() {
            for (k, &i) in row.iter().enumerate() {
                posterior[i] += c2v[offsets[j] + k];
            }
        }
        for (j, row) in rows.iter().enumerate() {
            for (k, &i) in row.iter().enumerate() {
                let e = offsets[j] + k;
                v2c[e] = (posterior[i] - c2v[e]).clamp(-clip, clip);
            }
        }
        for (c, &l) in c_hat.iter_mut().zip(&posterior) {
            *c = u8::from(l <= 0.0);
        }
    }
    let converged = code.is_codeword(&c_hat);
    DecodeOutcome {
        c_hat,
        converged,
        iterations: params.max_iters,
        grad_tail: None,
        s_final: posterior,
    }
}
