//! Proximal decoding: alternating gradient steps on the channel likelihood
//! and on the code-constraint polynomial, with projection onto `[-eta, eta]^n`.
//!
//! The code-constraint polynomial is
//!
//! ```text
//! h(x) = sum_i (x_i^2 - 1)^2 + sum_j (prod_{i in N(j)} x_i - 1)^2
//! ```
//!
//! which vanishes exactly on the bipolar images of codewords.

use thiserror::Error;

use crate::channel::neg_log_likelihood;
use crate::code::ParityCheckCode;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamsError {
    #[error("gamma must be positive, got {0}")]
    Gamma(f64),
    #[error("omega must be positive, got {0}")]
    Omega(f64),
    #[error("eta must exceed 1, got {0}")]
    Eta(f64),
    #[error("max_iters must be at least 1")]
    MaxIters,
}

/// Step sizes, projection radius and iteration budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoderParams {
    /// Step size of the code-constraint gradient step.
    pub gamma: f64,
    /// Step size of the likelihood gradient step.
    pub omega: f64,
    /// Half-width of the projection hypercube.
    pub eta: f64,
    /// Iteration budget `K`.
    pub max_iters: usize,
}

impl Default for DecoderParams {
    fn default() -> Self {
        Self {
            gamma: 0.05,
            omega: 0.05,
            eta: 1.5,
            max_iters: 200,
        }
    }
}

impl DecoderParams {
    pub fn validate(&self) -> Result<(), ParamsError> {
        if !(self.gamma > 0.0) {
            return Err(ParamsError::Gamma(self.gamma));
        }
        if !(self.omega > 0.0) {
            return Err(ParamsError::Omega(self.omega));
        }
        if !(self.eta > 1.0) {
            return Err(ParamsError::Eta(self.eta));
        }
        if self.max_iters == 0 {
            return Err(ParamsError::MaxIters);
        }
        Ok(())
    }
}

/// `grad h` from the last two iterations of a run that did not converge.
#[derive(Debug, Clone, PartialEq)]
pub struct GradTail {
    /// Gradient evaluated in iteration `K - 1` (all zero when `K = 1`).
    pub prev: Vec<f64>,
    /// Gradient evaluated in iteration `K`.
    pub last: Vec<f64>,
}

/// Result of decoding one received word.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutcome {
    /// Hard decision.
    pub c_hat: Vec<u8>,
    /// True iff `c_hat` satisfies every parity check.
    pub converged: bool,
    /// Iterations actually executed.
    pub iterations: usize,
    /// Present iff `converged` is false and the decoder keeps gradients.
    pub grad_tail: Option<GradTail>,
    /// Final continuous estimate.
    pub s_final: Vec<f64>,
}

/// Evaluates the code-constraint polynomial.
pub fn eval_h(code: &ParityCheckCode, x: &[f64]) -> f64 {
    assert_eq!(x.len(), code.n());
    let bipolar: f64 = x.iter().map(|&v| (v * v - 1.0).powi(2)).sum();
    let parity: f64 = code
        .check_neighbors()
        .iter()
        .map(|row| (row.iter().map(|&i| x[i]).product::<f64>() - 1.0).powi(2))
        .sum();
    bipolar + parity
}

/// Objective `g(x) = L(y | x) + gamma h(x)`. Diagnostic only; the decoder
/// never evaluates it.
pub fn eval_objective(code: &ParityCheckCode, y: &[f64], x: &[f64], gamma: f64) -> f64 {
    neg_log_likelihood(y, x).expect("y and x must have equal length") + gamma * eval_h(code, x)
}

/// Scratch space for [`grad_h_into`].
#[derive(Debug, Default, Clone)]
pub struct GradWorkspace {
    prefix: Vec<f64>,
}

/// Writes `grad h(x)` into `out`.
///
/// The parity term of variable `i` in check `j` needs the product of the other
/// members of `j`. It is formed from prefix and suffix products so that zero
/// entries (e.g. at the all-zero start) never lead to a division.
pub fn grad_h_into(code: &ParityCheckCode, x: &[f64], out: &mut [f64], ws: &mut GradWorkspace) {
    assert_eq!(x.len(), code.n());
    assert_eq!(out.len(), code.n());
    for (o, &v) in out.iter_mut().zip(x) {
        *o = 4.0 * v * (v * v - 1.0);
    }
    for row in code.check_neighbors() {
        let d = row.len();
        ws.prefix.clear();
        let mut acc = 1.0;
        for &i in row {
            ws.prefix.push(acc);
            acc *= x[i];
        }
        let scale = 2.0 * (acc - 1.0);
        let mut suffix = 1.0;
        for k in (0..d).rev() {
            let i = row[k];
            out[i] += scale * ws.prefix[k] * suffix;
            suffix *= x[i];
        }
    }
}

/// Gradient of the code-constraint polynomial.
pub fn grad_h(code: &ParityCheckCode, x: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; x.len()];
    grad_h_into(code, x, &mut out, &mut GradWorkspace::default());
    out
}

/// Gradient of the AWGN negative log-likelihood at `s`: `s - y`.
pub fn grad_l(s: &[f64], y: &[f64]) -> Vec<f64> {
    assert_eq!(s.len(), y.len(), "s and y must have equal length");
    s.iter().zip(y).map(|(a, b)| a - b).collect()
}

/// Componentwise clamp to `[-eta, eta]`.
pub fn project_hypercube(v: &[f64], eta: f64) -> Vec<f64> {
    v.iter().map(|x| x.clamp(-eta, eta)).collect()
}

/// `c_i = 1` iff `s_i <= 0`.
pub fn hard_decision(s: &[f64]) -> Vec<u8> {
    s.iter().map(|&v| u8::from(v <= 0.0)).collect()
}

/// Per-iteration state handed to a decode observer.
#[derive(Debug)]
pub struct IterationView<'a> {
    /// 1-based iteration number.
    pub iteration: usize,
    /// Estimate after the projected code step.
    pub s: &'a [f64],
    /// Estimate after the likelihood step.
    pub r: &'a [f64],
    /// `grad L` at the estimate entering this iteration.
    pub grad_l: &'a [f64],
    /// `grad h(r)`.
    pub grad_h: &'a [f64],
}

/// Runs proximal decoding on the received word `y`.
pub fn decode_proximal(code: &ParityCheckCode, y: &[f64], params: &DecoderParams) -> DecodeOutcome {
    decode_proximal_observed(code, y, params, |_| {})
}

/// [`decode_proximal`] with a callback after every iteration.
pub fn decode_proximal_observed<F>(
    code: &ParityCheckCode,
    y: &[f64],
    params: &DecoderParams,
    mut observe: F,
) -> DecodeOutcome
where
    F: FnMut(&IterationView<'_>),
{
    let n = code.n();
    assert_eq!(y.len(), n, "received word length must equal code length");
    let mut s = vec![0.0; n];
    let mut r = vec![0.0; n];
    let mut gl = vec![0.0; n];
    let mut gh = vec![0.0; n];
    let mut gh_prev = vec![0.0; n];
    let mut c_hat = vec![0u8; n];
    let mut ws = GradWorkspace::default();

    for it in 1..=params.max_iters {
        for i in 0..n {
            gl[i] = s[i] - y[i];
            r[i] = s[i] - params.omega * gl[i];
        }
        std::mem::swap(&mut gh, &mut gh_prev);
        grad_h_into(code, &r, &mut gh, &mut ws);
        for i in 0..n {
            s[i] = (r[i] - params.gamma * gh[i]).clamp(-params.eta, params.eta);
            c_hat[i] = u8::from(s[i] <= 0.0);
        }
        observe(&IterationView {
            iteration: it,
            s: &s,
            r: &r,
            grad_l: &gl,
            grad_h: &gh,
        });
        if code.is_codeword(&c_hat) {
            return DecodeOutcome {
                c_hat,
                converged: true,
                iterations: it,
                grad_tail: None,
                s_final: s,
            };
        }
    }
    DecodeOutcome {
        c_hat,
        converged: false,
        iterations: params.max_iters,
        grad_tail: Some(GradTail {
            prev: gh_prev,
            last: gh,
        }),
        s_final: s,
    }
}
