use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ldpc_prox::channel::ebn0_to_sigma;
use ldpc_prox::code::hamming_distance;
use ldpc_prox::harness::{
    render_nsweep_csv, render_sweep_csv, render_trace_csv, snr_for_target_fer, DecoderKind,
    Harness, MessageSource, SweepConfig,
};
use ldpc_prox::{BpParams, DecoderParams};

#[derive(Parser)]
#[command(
    name = "ldpc-prox",
    version,
    about = "Proximal and list-improved LDPC decoding over AWGN"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decode a single simulated frame and print the outcome.
    Decode {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = DecoderArg::Proximal)]
        decoder: DecoderArg,
        /// Number of suspect positions for the improved decoder.
        #[arg(long, default_value_t = 8)]
        list_bits: usize,
        #[arg(long, allow_hyphen_values = true)]
        ebn0: f64,
        /// Frame index within the seed's stream.
        #[arg(long, default_value_t = 0)]
        frame: u64,
    },
    /// FER/BER/DFR over a grid of Eb/N0 values.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = DecoderArg::Proximal)]
        decoder: DecoderArg,
        /// Number of suspect positions for the improved decoder.
        #[arg(long, default_value_t = 8)]
        list_bits: usize,
        /// `start:step:stop`, a single value, or a comma-separated list (dB).
        #[arg(long, allow_hyphen_values = true)]
        ebn0: String,
        #[command(flatten)]
        stop: Stopping,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-rank error probability over proximal decoding failures.
    Profile {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        ebn0: f64,
        #[arg(long, default_value_t = 10_000)]
        failures: u64,
        #[arg(long, default_value_t = 10_000_000)]
        max_frames: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-iteration values of selected positions during proximal decoding.
    Trace {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        ebn0: f64,
        /// Frame index within the seed's stream.
        #[arg(long, default_value_t = 0)]
        frame: u64,
        /// Start at `--frame` and trace the first frame that fails to converge.
        #[arg(long)]
        find_failure: bool,
        /// 1-based positions to record.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        watch: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Improved-decoder sweeps for several list sizes.
    Nsweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        ebn0: String,
        #[arg(long, value_delimiter = ',', default_value = "4,6,8,10,12")]
        list_bits: Vec<usize>,
        #[command(flatten)]
        stop: Stopping,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DecoderArg {
    Proximal,
    Improved,
    Bp,
}

#[derive(Clone, Copy, ValueEnum)]
enum MessageArg {
    Random,
    AllZero,
}

#[derive(Args)]
struct Common {
    /// Parity-check matrix in alist format.
    #[arg(long)]
    code: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.05)]
    gamma: f64,
    #[arg(long, default_value_t = 0.05)]
    omega: f64,
    #[arg(long, default_value_t = 1.5)]
    eta: f64,
    #[arg(long, default_value_t = 200)]
    max_iters: usize,
    #[arg(long, default_value_t = 200)]
    bp_iters: usize,
    #[arg(long, default_value_t = 30.0)]
    llr_clip: f64,
    #[arg(long, value_enum, default_value_t = MessageArg::Random)]
    message: MessageArg,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Args)]
struct Stopping {
    #[arg(long, default_value_t = 100)]
    min_frame_errors: u64,
    #[arg(long, default_value_t = 10_000_000)]
    max_frames: u64,
    /// Write 0 in the `seconds` column so reruns produce identical files.
    #[arg(long)]
    reproducible: bool,
}

impl Common {
    fn params(&self) -> DecoderParams {
        DecoderParams {
            gamma: self.gamma,
            omega: self.omega,
            eta: self.eta,
            max_iters: self.max_iters,
        }
    }

    fn decoder(&self, arg: DecoderArg, list_bits: usize) -> DecoderKind {
        match arg {
            DecoderArg::Proximal => DecoderKind::Proximal(self.params()),
            DecoderArg::Improved => DecoderKind::Improved {
                params: self.params(),
                list_bits,
            },
            DecoderArg::Bp => DecoderKind::Bp(BpParams {
                max_iters: self.bp_iters,
                llr_clip: self.llr_clip,
            }),
        }
    }

    fn config(&self, decoder: DecoderArg, list_bits: usize, grid: Vec<f64>) -> SweepConfig {
        SweepConfig {
            master_seed: self.seed,
            message_source: match self.message {
                MessageArg::Random => MessageSource::Random,
                MessageArg::AllZero => MessageSource::AllZero,
            },
            threads: self.threads,
            ..SweepConfig::new(&self.code, self.decoder(decoder, list_bits), grid)
        }
    }
}

/// Parses `start:step:stop`, `a,b,c` or a single value.
fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let spec = spec.trim();
    if spec.contains(':') {
        let parts: Vec<f64> = spec
            .split(':')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .with_context(|| format!("bad range {spec:?}"))?;
        let [start, step, stop] = parts[..] else {
            bail!("range must be start:step:stop, got {spec:?}");
        };
        if !(step > 0.0) || stop < start {
            bail!("range needs step > 0 and stop >= start");
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        // Round to the step's decimal grid so 0.1 steps print cleanly.
        Ok((0..count)
            .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
            .collect())
    } else {
        spec.split(',')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .with_context(|| format!("bad value {p:?}"))
            })
            .collect()
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match Cli::parse().command {
        Command::Decode {
            common,
            decoder,
            list_bits,
            ebn0,
            frame,
        } => {
            let config = SweepConfig {
                max_frames: 1,
                ..common.config(decoder, list_bits, vec![ebn0])
            };
            let harness = Harness::load(config)?;
            let sigma = harness.sigma(ebn0)?;
            let f = harness.frame(sigma, frame);
            let kind = harness.config().decoder;
            let out = kind.decode(harness.code(), &f.received, sigma);
            let errors = hamming_distance(&out.c_hat, &f.codeword);
            println!("decoder     {}", kind.name());
            println!(
                "n, k        {}, {}",
                harness.code().n(),
                harness.generator().k()
            );
            println!("ebn0_db     {ebn0}");
            println!("sigma       {sigma:.6}");
            println!("converged   {}", out.converged);
            println!("iterations  {}", out.iterations);
            println!("bit_errors  {errors}");
            println!("correct     {}", errors == 0);
        }
        Command::Sweep {
            common,
            decoder,
            list_bits,
            ebn0,
            stop,
            out,
        } => {
            let config = SweepConfig {
                max_frames: stop.max_frames,
                min_frame_errors: stop.min_frame_errors,
                record_timing: !stop.reproducible,
                ..common.config(decoder, list_bits, parse_grid(&ebn0)?)
            };
            let stats = Harness::load(config)?.run_sweep()?;
            emit(&out, &render_sweep_csv(&stats))?;
        }
        Command::Profile {
            common,
            ebn0,
            failures,
            max_frames,
            out,
        } => {
            let config = SweepConfig {
                max_frames,
                ..common.config(DecoderArg::Proximal, 0, vec![ebn0])
            };
            let profile = Harness::load(config)?.error_position_profile(ebn0, failures)?;
            log::info!(
                "{} failures in {} frames; Spearman(rank, P) over ranks 1-50: {:?}",
                profile.failures,
                profile.frames,
                profile.spearman(50)
            );
            emit(&out, &profile.render_csv())?;
        }
        Command::Trace {
            common,
            ebn0,
            frame,
            find_failure,
            watch,
            out,
        } => {
            let harness = Harness::load(common.config(DecoderArg::Proximal, 0, vec![ebn0]))?;
            let n = harness.code().n();
            let watch = watch
                .iter()
                .map(|&i| {
                    if i == 0 || i > n {
                        bail!("watch index {i} out of range 1..={n}");
                    }
                    Ok(i - 1)
                })
                .collect::<Result<Vec<_>>>()?;
            let frame = if find_failure {
                harness
                    .find_failure_frame(ebn0, frame, 10_000_000)?
                    .context("no failing frame found")?
            } else {
                frame
            };
            let (rows, outcome) = harness.trace_run(ebn0, frame, &watch)?;
            log::info!(
                "frame {frame}: converged={} iterations={} (sigma {:.4})",
                outcome.converged,
                outcome.iterations,
                ebn0_to_sigma(ebn0, harness.rate())?
            );
            emit(&out, &render_trace_csv(&rows))?;
        }
        Command::Nsweep {
            common,
            ebn0,
            list_bits,
            stop,
            out,
        } => {
            let config = SweepConfig {
                max_frames: stop.max_frames,
                min_frame_errors: stop.min_frame_errors,
                record_timing: !stop.reproducible,
                ..common.config(
                    DecoderArg::Improved,
                    list_bits.first().copied().unwrap_or(8),
                    parse_grid(&ebn0)?,
                )
            };
            let runs = Harness::load(config)?.run_nsweep(&list_bits)?;
            for (nb, stats) in &runs {
                let fmt = |t: f64| {
                    snr_for_target_fer(stats, t).map_or("n/a".to_string(), |v| format!("{v:.2} dB"))
                };
                log::info!(
                    "N={nb}: FER 1e-2 at {}, FER 1e-3 at {}",
                    fmt(1e-2),
                    fmt(1e-3)
                );
            }
            emit(&out, &render_nsweep_csv(&runs))?;
        }
    }
    Ok(())
}
