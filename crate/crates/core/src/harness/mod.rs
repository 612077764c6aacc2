//! Monte Carlo driver: SNR sweeps, error-position profiles and iteration traces.
//!
//! Every frame draws its message and noise from its own counter-based stream
//! keyed by `(master_seed, frame index)`. Frames are decoded in parallel
//! batches but folded into the counters strictly in frame order, so the
//! stopping point and every counter are independent of the worker count.

mod profile;
mod stats;
mod trace;

pub use profile::ErrorProfile;
pub use stats::{
    parse_nsweep_csv, parse_sweep_csv, render_nsweep_csv, render_sweep_csv, snr_for_target_fer,
    PointStats, SweepStats, NSWEEP_CSV_HEADER, SWEEP_CSV_HEADER,
};
pub use trace::{render_trace_csv, TraceRow};

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::bp::{decode_bp, BpParams};
use crate::channel::{add_awgn, bpsk_map, ebn0_to_sigma, frame_rng, ChannelError};
use crate::code::{hamming_distance, read_alist, CodeError, GeneratorMatrix, ParityCheckCode};
use crate::list::{decode_improved, oscillation_heights, MAX_LIST_BITS};
use crate::proximal::{decode_proximal, DecodeOutcome, DecoderParams};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("SNR grid is empty")]
    EmptyGrid,
    #[error("watch index {index} out of range for code length {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("csv line {line}: {msg}")]
    Csv { line: usize, msg: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Which decoder a sweep runs, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecoderKind {
    Proximal(DecoderParams),
    Improved {
        params: DecoderParams,
        list_bits: usize,
    },
    Bp(BpParams),
}

impl DecoderKind {
    pub fn name(&self) -> &'static str {
        match self {
            DecoderKind::Proximal(_) => "proximal",
            DecoderKind::Improved { .. } => "improved",
            DecoderKind::Bp(_) => "bp",
        }
    }

    fn validate(&self) -> Result<(), HarnessError> {
        let cfg = |e: String| HarnessError::Config(e);
        match self {
            DecoderKind::Proximal(p) => p.validate().map_err(|e| cfg(e.to_string())),
            DecoderKind::Improved { params, list_bits } => {
                params.validate().map_err(|e| cfg(e.to_string()))?;
                if *list_bits > MAX_LIST_BITS {
                    return Err(cfg(format!(
                        "list_bits {list_bits} exceeds the limit of {MAX_LIST_BITS}"
                    )));
                }
                Ok(())
            }
            DecoderKind::Bp(p) => p.validate().map_err(cfg),
        }
    }

    /// Decodes one received word.
    pub fn decode(&self, code: &ParityCheckCode, y: &[f64], sigma: f64) -> DecodeOutcome {
        match self {
            DecoderKind::Proximal(p) => decode_proximal(code, y, p),
            DecoderKind::Improved { params, list_bits } => {
                decode_improved(code, y, params, *list_bits)
            }
            DecoderKind::Bp(p) => decode_bp(code, y, sigma, p),
        }
    }
}

/// Where transmitted codewords come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MessageSource {
    AllZero,
    #[default]
    Random,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub code_path: PathBuf,
    pub decoder: DecoderKind,
    pub ebn0_grid: Vec<f64>,
    pub master_seed: u64,
    /// Frame cap per SNR point.
    pub max_frames: u64,
    /// Stop a point once this many frame errors have been seen; 0 disables.
    pub min_frame_errors: u64,
    pub message_source: MessageSource,
    /// Worker threads; 0 lets rayon decide.
    pub threads: usize,
    /// Record wall time per point. Disable for byte-reproducible CSV.
    pub record_timing: bool,
}

impl SweepConfig {
    pub fn new(code_path: impl Into<PathBuf>, decoder: DecoderKind, ebn0_grid: Vec<f64>) -> Self {
        Self {
            code_path: code_path.into(),
            decoder,
            ebn0_grid,
            master_seed: 0,
            max_frames: 10_000_000,
            min_frame_errors: 100,
            message_source: MessageSource::Random,
            threads: 0,
            record_timing: true,
        }
    }

    fn validate(&self) -> Result<(), HarnessError> {
        if self.ebn0_grid.is_empty() {
            return Err(HarnessError::EmptyGrid);
        }
        if self.max_frames == 0 {
            return Err(HarnessError::Config("max_frames must be at least 1".into()));
        }
        self.decoder.validate()
    }
}

/// One transmitted frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub codeword: Vec<u8>,
    pub received: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
struct FrameResult {
    bit_errors: u64,
    frame_error: bool,
    failure: bool,
}

/// A loaded code plus everything needed to simulate it.
pub struct Harness {
    code: Arc<ParityCheckCode>,
    generator: GeneratorMatrix,
    config: SweepConfig,
    pool: rayon::ThreadPool,
}

impl std::fmt::Debug for Harness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Harness")
            .field("n", &self.code.n())
            .field("k", &self.generator.k())
            .field("config", &self.config)
            .finish()
    }
}

impl Harness {
    /// Reads the code named in `config`.
    pub fn load(config: SweepConfig) -> Result<Self, HarnessError> {
        let code = read_alist(&config.code_path)?;
        Self::with_code(code, config)
    }

    /// Uses an in-memory code; `config.code_path` is ignored.
    pub fn with_code(code: ParityCheckCode, config: SweepConfig) -> Result<Self, HarnessError> {
        config.validate()?;
        let generator = code.derive_generator();
        if generator.k() == 0 {
            return Err(HarnessError::Config(
                "code has no non-zero codewords".into(),
            ));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        Ok(Self {
            code: Arc::new(code),
            generator,
            config,
            pool,
        })
    }

    pub fn code(&self) -> &ParityCheckCode {
        &self.code
    }

    pub fn generator(&self) -> &GeneratorMatrix {
        &self.generator
    }

    pub fn config(&self) -> &SweepConfig {
        &self.config
    }

    /// Rate used for the Eb/N0 conversion: `k / n` of the derived generator.
    pub fn rate(&self) -> f64 {
        self.generator.rate()
    }

    pub fn sigma(&self, ebn0_db: f64) -> Result<f64, HarnessError> {
        Ok(ebn0_to_sigma(ebn0_db, self.rate())?)
    }

    /// Codeword and channel output of frame `index` at noise level `sigma`.
    pub fn frame(&self, sigma: f64, index: u64) -> Frame {
        let mut rng = frame_rng(self.config.master_seed, index);
        let codeword = match self.config.message_source {
            MessageSource::AllZero => vec![0; self.code.n()],
            MessageSource::Random => {
                let u: Vec<u8> = (0..self.generator.k())
                    .map(|_| u8::from(rng.gen::<bool>()))
                    .collect();
                self.generator.encode(&u).expect("message has length k")
            }
        };
        let received = add_awgn(&bpsk_map(&codeword), sigma, &mut rng);
        Frame { codeword, received }
    }

    /// Evaluates `eval` for frames `0, 1, ...` in parallel batches and feeds
    /// the results to `fold` in frame order until it returns `false` or
    /// `max_frames` is reached. Returns the number of frames folded.
    fn scan_frames<T, E, F>(&self, eval: E, mut fold: F) -> u64
    where
        T: Send,
        E: Fn(u64) -> T + Sync,
        F: FnMut(u64, T) -> bool,
    {
        let batch = 256 * self.pool.current_num_threads() as u64;
        let mut next = 0u64;
        while next < self.config.max_frames {
            let end = (next + batch).min(self.config.max_frames);
            let results: Vec<T> = self
                .pool
                .install(|| (next..end).into_par_iter().map(&eval).collect());
            for (offset, r) in results.into_iter().enumerate() {
                let index = next + offset as u64;
                if !fold(index, r) {
                    return index + 1;
                }
            }
            next = end;
        }
        self.config.max_frames
    }

    /// Simulates one SNR point with the configured decoder.
    pub fn run_point(&self, ebn0_db: f64) -> Result<PointStats, HarnessError> {
        self.run_point_with(&self.config.decoder, ebn0_db)
    }

    /// Simulates one SNR point with `decoder`, on the same frames the
    /// configured decoder would see.
    pub fn run_point_with(
        &self,
        decoder: &DecoderKind,
        ebn0_db: f64,
    ) -> Result<PointStats, HarnessError> {
        decoder.validate()?;
        let sigma = self.sigma(ebn0_db)?;
        let start = Instant::now();
        let code = &*self.code;
        let target = self.config.min_frame_errors;
        let (mut bit_errors, mut frame_errors, mut failures) = (0u64, 0u64, 0u64);
        let frames = self.scan_frames(
            |index| {
                let frame = self.frame(sigma, index);
                let out = decoder.decode(code, &frame.received, sigma);
                let bit_errors = hamming_distance(&out.c_hat, &frame.codeword) as u64;
                FrameResult {
                    bit_errors,
                    frame_error: bit_errors > 0,
                    failure: !out.converged,
                }
            },
            |_, r| {
                bit_errors += r.bit_errors;
                frame_errors += u64::from(r.frame_error);
                failures += u64::from(r.failure);
                target == 0 || frame_errors < target
            },
        );
        let seconds = if self.config.record_timing {
            start.elapsed().as_secs_f64()
        } else {
            0.0
        };
        Ok(PointStats::new(
            ebn0_db,
            frames,
            bit_errors,
            frame_errors,
            failures,
            code.n(),
            seconds,
        ))
    }

    /// Runs every grid point.
    pub fn run_sweep(&self) -> Result<SweepStats, HarnessError> {
        self.run_sweep_with(&self.config.decoder)
    }

    pub fn run_sweep_with(&self, decoder: &DecoderKind) -> Result<SweepStats, HarnessError> {
        if self.config.ebn0_grid.is_empty() {
            return Err(HarnessError::EmptyGrid);
        }
        let points = self
            .config
            .ebn0_grid
            .iter()
            .map(|&e| {
                let p = self.run_point_with(decoder, e)?;
                log::info!(
                    "{} {:.2} dB: frames={} fe={} fer={:.3e} ber={:.3e} dfr={:.3e}",
                    decoder.name(),
                    e,
                    p.frames,
                    p.frame_errors,
                    p.fer,
                    p.ber,
                    p.dfr
                );
                Ok(p)
            })
            .collect::<Result<_, HarnessError>>()?;
        Ok(SweepStats { points })
    }

    /// Improved-decoder sweeps for several list sizes.
    pub fn run_nsweep(
        &self,
        list_bits: &[usize],
    ) -> Result<Vec<(usize, SweepStats)>, HarnessError> {
        let params = match self.config.decoder {
            DecoderKind::Proximal(p) | DecoderKind::Improved { params: p, .. } => p,
            DecoderKind::Bp(_) => {
                return Err(HarnessError::Config(
                    "list-size sweeps need proximal decoder parameters".into(),
                ))
            }
        };
        list_bits
            .iter()
            .map(|&nb| {
                let decoder = DecoderKind::Improved {
                    params,
                    list_bits: nb,
                };
                Ok((nb, self.run_sweep_with(&decoder)?))
            })
            .collect()
    }

    /// Collects proximal decoding failures and, for each Δ-rank, how often
    /// the bit at that rank was wrong.
    ///
    /// Uses the proximal parameters of the configured decoder. Stops after
    /// `target_failures` failures or `max_frames` frames, whichever first;
    /// the returned profile reports how many were collected.
    pub fn error_position_profile(
        &self,
        ebn0_db: f64,
        target_failures: u64,
    ) -> Result<ErrorProfile, HarnessError> {
        let params = match self.config.decoder {
            DecoderKind::Proximal(p) | DecoderKind::Improved { params: p, .. } => p,
            DecoderKind::Bp(_) => {
                return Err(HarnessError::Config(
                    "error-position profiles need the proximal decoder".into(),
                ))
            }
        };
        let sigma = self.sigma(ebn0_db)?;
        let code = &*self.code;
        let mut profile = ErrorProfile::new(code.n());
        if target_failures == 0 {
            return Ok(profile);
        }
        let frames = self.scan_frames(
            |index| {
                let frame = self.frame(sigma, index);
                let out = decode_proximal(code, &frame.received, &params);
                oscillation_heights(&out)
                    .ok()
                    .map(|delta| (delta, out.c_hat, frame.codeword))
            },
            |_, r| {
                if let Some((delta, c_hat, c)) = r {
                    profile.record(&delta, &c_hat, &c);
                }
                profile.failures < target_failures
            },
        );
        profile.frames = frames;
        if profile.failures < target_failures {
            log::warn!(
                "profile collected {} of {target_failures} failures in {frames} frames",
                profile.failures
            );
        }
        Ok(profile)
    }

    /// Per-iteration trace of frame `frame` for the 0-based positions in
    /// `watch`, decoded with the proximal parameters of the configured decoder.
    pub fn trace_run(
        &self,
        ebn0_db: f64,
        frame: u64,
        watch: &[usize],
    ) -> Result<(Vec<TraceRow>, DecodeOutcome), HarnessError> {
        let params = match self.config.decoder {
            DecoderKind::Proximal(p) | DecoderKind::Improved { params: p, .. } => p,
            DecoderKind::Bp(_) => {
                return Err(HarnessError::Config(
                    "traces need the proximal decoder".into(),
                ))
            }
        };
        let n = self.code.n();
        if let Some(&index) = watch.iter().find(|&&i| i >= n) {
            return Err(HarnessError::IndexOutOfRange { index, n });
        }
        let sigma = self.sigma(ebn0_db)?;
        let f = self.frame(sigma, frame);
        let (rows, out) = trace::trace_decode(&self.code, &f.received, &params, watch);
        Ok((rows, out))
    }

    /// First frame at or after `start` where proximal decoding fails.
    pub fn find_failure_frame(
        &self,
        ebn0_db: f64,
        start: u64,
        limit: u64,
    ) -> Result<Option<u64>, HarnessError> {
        let params = match self.config.decoder {
            DecoderKind::Proximal(p) | DecoderKind::Improved { params: p, .. } => p,
            DecoderKind::Bp(_) => return Ok(None),
        };
        let sigma = self.sigma(ebn0_db)?;
        Ok((start..start.saturating_add(limit)).find(|&i| {
            let f = self.frame(sigma, i);
            !decode_proximal(&self.code, &f.received, &params).converged
        }))
    }
}

/// Loads the code and runs one point.
pub fn run_point(config: &SweepConfig, ebn0_db: f64) -> Result<PointStats, HarnessError> {
    Harness::load(config.clone())?.run_point(ebn0_db)
}

/// Loads the code and runs the whole grid.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepStats, HarnessError> {
    Harness::load(config.clone())?.run_sweep()
}
