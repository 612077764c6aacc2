//! BPSK over the real AWGN channel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("code rate must lie in (0, 1], got {0}")]
    InvalidRate(f64),
    #[error("sequence lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
}

/// An operating point: Eb/N0 and the code rate it is normalised to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelPoint {
    pub ebn0_db: f64,
    pub rate: f64,
    pub sigma: f64,
}

impl ChannelPoint {
    pub fn new(ebn0_db: f64, rate: f64) -> Result<Self, ChannelError> {
        Ok(Self {
            ebn0_db,
            rate,
            sigma: ebn0_to_sigma(ebn0_db, rate)?,
        })
    }
}

/// Noise standard deviation per real dimension for unit-energy BPSK:
/// `sigma = sqrt(1 / (2 R 10^(Eb/N0 / 10)))`.
pub fn ebn0_to_sigma(ebn0_db: f64, rate: f64) -> Result<f64, ChannelError> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(ChannelError::InvalidRate(rate));
    }
    Ok((1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0))).sqrt())
}

/// Maps bits to antipodal symbols, `x = 1 - 2c`.
pub fn bpsk_map(c: &[u8]) -> Vec<f64> {
    c.iter()
        .map(|&b| if b & 1 == 1 { -1.0 } else { 1.0 })
        .collect()
}

/// `y = x + sigma * z` with `z` drawn i.i.d. standard normal from `rng`.
pub fn add_awgn<R: Rng + ?Sized>(x: &[f64], sigma: f64, rng: &mut R) -> Vec<f64> {
    x.iter()
        .map(|&xi| {
            let z: f64 = rng.sample(StandardNormal);
            xi + sigma * z
        })
        .collect()
}

/// `1/2 * ||y - x||^2`. The noise variance is deliberately left out; its
/// gradient in `x` is exactly `x - y`.
pub fn neg_log_likelihood(y: &[f64], x: &[f64]) -> Result<f64, ChannelError> {
    if y.len() != x.len() {
        return Err(ChannelError::LengthMismatch(y.len(), x.len()));
    }
    Ok(0.5 * y.iter().zip(x).map(|(a, b)| (a - b).powi(2)).sum::<f64>())
}

/// Random stream owned by one simulated frame.
///
/// ChaCha is counter based: stream `frame` of key `master_seed` is independent
/// of how many other frames were drawn before, and of which thread draws it.
pub fn frame_rng(master_seed: u64, frame: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(frame);
    rng
}
