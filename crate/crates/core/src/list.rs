//! List post-processing for proximal decoding.
//!
//! When proximal decoding stops without reaching a codeword, the positions
//! whose `grad h` moved least between the last two iterations are the most
//! likely to be wrong. All `2^N` assignments of the `N` lowest-moving
//! positions are tried and the candidate with the largest correlation
//! `<1 - 2c, y>` wins, valid codewords taking priority.

use thiserror::Error;

use crate::code::ParityCheckCode;
use crate::proximal::{decode_proximal, DecodeOutcome, DecoderParams};

/// Largest suspect set for which candidates are enumerated.
pub const MAX_LIST_BITS: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ListError {
    #[error("decoder converged; no gradient tail to measure oscillation on")]
    Converged,
    #[error("{0} suspect positions exceed the list-size limit of {MAX_LIST_BITS}")]
    TooManySuspects(usize),
    #[error("candidate list is empty")]
    EmptyList,
    #[error("word length {got} does not match expected length {expected}")]
    LengthMismatch { expected: usize, got: usize },
}

/// Positions picked for flipping, in order of increasing oscillation height.
#[derive(Debug, Clone, PartialEq)]
pub struct SuspectSet {
    pub indices: Vec<usize>,
    pub heights: Vec<f64>,
}

impl SuspectSet {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Suspect positions in ascending index order; this is the bit order
    /// used for candidate enumeration.
    pub fn sorted_indices(&self) -> Vec<usize> {
        let mut v = self.indices.clone();
        v.sort_unstable();
        v
    }
}

/// All assignments of the suspect bits on top of a base word.
///
/// Word `p` takes bit `b` of `p` as the value of the `b`-th smallest suspect
/// index.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateList {
    pub words: Vec<Vec<u8>>,
    pub base: Vec<u8>,
    pub positions: Vec<usize>,
}

/// `|grad h[K] - grad h[K-1]|` per position.
pub fn oscillation_heights(outcome: &DecodeOutcome) -> Result<Vec<f64>, ListError> {
    let tail = outcome.grad_tail.as_ref().ok_or(ListError::Converged)?;
    Ok(tail
        .last
        .iter()
        .zip(&tail.prev)
        .map(|(a, b)| (a - b).abs())
        .collect())
}

/// Orders all positions by increasing `delta`, ties by ascending index.
pub fn rank_positions(delta: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..delta.len()).collect();
    order.sort_by(|&a, &b| delta[a].total_cmp(&delta[b]));
    order
}

/// The `min(count, n)` positions with the smallest oscillation height.
pub fn select_suspect_indices(delta: &[f64], count: usize) -> SuspectSet {
    if count > delta.len() {
        log::warn!(
            "requested {count} suspect positions but the word has only {}; using all",
            delta.len()
        );
    }
    let indices: Vec<usize> = rank_positions(delta)
        .into_iter()
        .take(count.min(delta.len()))
        .collect();
    let heights = indices.iter().map(|&i| delta[i]).collect();
    SuspectSet { indices, heights }
}

/// Materialises the `2^N` candidate words.
pub fn generate_candidates(
    c_hat: &[u8],
    suspects: &SuspectSet,
) -> Result<CandidateList, ListError> {
    if suspects.len() > MAX_LIST_BITS {
        return Err(ListError::TooManySuspects(suspects.len()));
    }
    let positions = suspects.sorted_indices();
    let words = (0u32..(1u32 << positions.len()))
        .map(|p| {
            let mut w = c_hat.to_vec();
            for (b, &i) in positions.iter().enumerate() {
                w[i] = ((p >> b) & 1) as u8;
            }
            w
        })
        .collect();
    Ok(CandidateList {
        words,
        base: c_hat.to_vec(),
        positions,
    })
}

/// `<1 - 2c, y>`
pub fn correlation(c: &[u8], y: &[f64]) -> f64 {
    c.iter()
        .zip(y)
        .map(|(&b, &v)| if b & 1 == 1 { -v } else { v })
        .sum()
}

fn argmax_first<'a>(words: impl Iterator<Item = &'a Vec<u8>>, y: &[f64]) -> Option<&'a Vec<u8>> {
    let mut best: Option<(f64, &Vec<u8>)> = None;
    for w in words {
        let c = correlation(w, y);
        if best.is_none_or(|(b, _)| c > b) {
            best = Some((c, w));
        }
    }
    best.map(|(_, w)| w)
}

/// ML selection within a materialised list.
///
/// Returns the best valid codeword with `true`, or, if the list holds no
/// codeword, the best word overall with `false`. Ties go to the earlier word.
pub fn ml_in_list(
    code: &ParityCheckCode,
    candidates: &CandidateList,
    y: &[f64],
) -> Result<(Vec<u8>, bool), ListError> {
    if candidates.words.is_empty() {
        return Err(ListError::EmptyList);
    }
    if y.len() != code.n() {
        return Err(ListError::LengthMismatch {
            expected: code.n(),
            got: y.len(),
        });
    }
    let valid = candidates.words.iter().filter(|w| code.is_codeword(w));
    if let Some(w) = argmax_first(valid, y) {
        return Ok((w.clone(), true));
    }
    let w = argmax_first(candidates.words.iter(), y).expect("list is non-empty");
    Ok((w.clone(), false))
}

/// Result of the streaming list search.
#[derive(Debug, Clone, PartialEq)]
pub struct ListChoice {
    pub word: Vec<u8>,
    pub valid: bool,
    /// Enumeration index of the chosen word.
    pub pattern: u32,
}

/// Streaming equivalent of [`generate_candidates`] followed by [`ml_in_list`].
///
/// Candidates are visited in Gray-code order so each step flips one bit and
/// updates the packed syndrome with that column's mask. Ties are still
/// resolved towards the smallest enumeration index.
pub fn search_candidates(
    code: &ParityCheckCode,
    c_hat: &[u8],
    suspects: &SuspectSet,
    y: &[f64],
) -> Result<ListChoice, ListError> {
    let nbits = suspects.len();
    if nbits > MAX_LIST_BITS {
        return Err(ListError::TooManySuspects(nbits));
    }
    for len in [c_hat.len(), y.len()] {
        if len != code.n() {
            return Err(ListError::LengthMismatch {
                expected: code.n(),
                got: len,
            });
        }
    }
    let positions = suspects.sorted_indices();
    let words = code.m().div_ceil(64);
    let mut syndrome = vec![0u64; words];
    for (j, row) in code.check_neighbors().iter().enumerate() {
        if row.iter().fold(0u8, |a, &i| a ^ (c_hat[i] & 1)) == 1 {
            syndrome[j / 64] |= 1 << (j % 64);
        }
    }
    let masks: Vec<Vec<u64>> = positions
        .iter()
        .map(|&i| {
            let mut m = vec![0u64; words];
            for &j in &code.var_neighbors()[i] {
                m[j / 64] |= 1 << (j % 64);
            }
            m
        })
        .collect();
    let base: u32 = positions
        .iter()
        .enumerate()
        .map(|(b, &i)| u32::from(c_hat[i] & 1) << b)
        .sum();
    // Correlation restricted to the suspect positions; the rest is common to
    // every candidate.
    let partial = |p: u32| -> f64 {
        positions
            .iter()
            .enumerate()
            .map(|(b, &i)| if (p >> b) & 1 == 1 { -y[i] } else { y[i] })
            .sum()
    };
    let better = |c: f64, p: u32, best: Option<(f64, u32)>| match best {
        None => true,
        Some((bc, bp)) => c > bc || (c == bc && p < bp),
    };

    let mut best_valid: Option<(f64, u32)> = None;
    let mut best_any: Option<(f64, u32)> = None;
    let mut flips = 0u32;
    for t in 0u32..(1u32 << nbits) {
        if t > 0 {
            let b = t.trailing_zeros() as usize;
            flips ^= 1 << b;
            for (s, m) in syndrome.iter_mut().zip(&masks[b]) {
                *s ^= m;
            }
        }
        let p = base ^ flips;
        let c = partial(p);
        if syndrome.iter().all(|&w| w == 0) {
            if better(c, p, best_valid) {
                best_valid = Some((c, p));
            }
        } else if best_valid.is_none() && better(c, p, best_any) {
            best_any = Some((c, p));
        }
    }
    let (pattern, valid) = match (best_valid, best_any) {
        (Some((_, p)), _) => (p, true),
        (None, Some((_, p))) => (p, false),
        (None, None) => unreachable!("at least one candidate is visited"),
    };
    let mut word = c_hat.to_vec();
    for (b, &i) in positions.iter().enumerate() {
        word[i] = ((pattern >> b) & 1) as u8;
    }
    Ok(ListChoice {
        word,
        valid,
        pattern,
    })
}

/// Proximal decoding followed, on failure, by the list step over `list_bits`
/// suspect positions.
///
/// Converged runs are returned untouched. Otherwise `converged` reports
/// whether the list produced a valid codeword; the gradient tail is kept only
/// if it did not.
pub fn decode_improved(
    code: &ParityCheckCode,
    y: &[f64],
    params: &DecoderParams,
    list_bits: usize,
) -> DecodeOutcome {
    let outcome = decode_proximal(code, y, params);
    improve(code, y, outcome, list_bits)
}

/// The list step applied to an existing proximal outcome.
pub fn improve(
    code: &ParityCheckCode,
    y: &[f64],
    outcome: DecodeOutcome,
    list_bits: usize,
) -> DecodeOutcome {
    let Ok(delta) = oscillation_heights(&outcome) else {
        return outcome;
    };
    let suspects = select_suspect_indices(&delta, list_bits.min(MAX_LIST_BITS));
    let choice = search_candidates(code, &outcome.c_hat, &suspects, y)
        .expect("suspect count is capped and lengths match");
    DecodeOutcome {
        c_hat: choice.word,
        converged: choice.valid,
        iterations: outcome.iterations,
        grad_tail: if choice.valid {
            None
        } else {
            outcome.grad_tail
        },
        s_final: outcome.s_final,
    }
}
