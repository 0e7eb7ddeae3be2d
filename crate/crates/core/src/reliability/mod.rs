//! Page-level error correction: a quasi-cyclic LDPC code, a hard-decision
//! gradient-descent bit-flipping decoder, and a binary symmetric read channel.

mod channel;
mod code;
mod decode;

pub use channel::{inject_errors, ChannelModel};
pub use code::{bits_to_bytes, bytes_to_bits, ldpc_encode, QcLdpcCode};
pub use decode::{gdbf_decode, gdbf_decode_with, DecodeResult, FlipSchedule, DEFAULT_MAX_ITER};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReliabilityError {
    #[error("expected {expected} {unit}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize, unit: &'static str },
    #[error("raw bit error rate {0} outside [0, 0.5)")]
    InvalidBer(f64),
    #[error("invalid code description: {0}")]
    InvalidCode(String),
}
