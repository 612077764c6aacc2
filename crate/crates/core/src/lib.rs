//! Proximal decoding of binary LDPC codes over AWGN.
//!
//! * [`code`]: sparse parity-check codes, alist I/O, GF(2) encoding.
//! * [`channel`]: BPSK, Eb/N0 conversion, Gaussian noise.
//! * [`proximal`]: the proximal decoder and the code-constraint polynomial.
//! * [`list`]: list post-processing on oscillation-selected positions.
//! * [`bp`]: sum-product belief propagation baseline.
//! * [`harness`]: Monte Carlo sweeps, error-position profiles, traces.

pub mod bp;
pub mod channel;
pub mod code;
pub mod harness;
pub mod list;
pub mod proximal;

pub use bp::{decode_bp, BpParams};
pub use code::{GeneratorMatrix, ParityCheckCode};
pub use list::decode_improved;
pub use proximal::{decode_proximal, DecodeOutcome, DecoderParams};
