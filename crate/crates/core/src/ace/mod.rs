//! Asymmetric cipher engine: hash ALUs, RSA and ECDSA over limb arithmetic,
//! the NTT primitive, and cycle schedules for the post-quantum signatures.

pub mod ecdsa;
pub mod keccak;
pub mod ntt;
pub mod pqc;
pub mod rsa;
pub mod sha2;

pub use ecdsa::{ecdsa_op, Curve, EcdsaKey, EcdsaOutput, EcdsaSignature};
pub use keccak::keccak_f1600;
pub use ntt::{ntt_transform, Direction, NttParams};
pub use pqc::{pqc_latency, schedule_for, PqcCycleSchedule};
pub use rsa::{rsa_op, RsaKey, RsaOutput, RsaPadding};

use crate::calib::Calibration;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AceError {
    #[error("invalid key: {0}")]
    InvalidKey(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("point is not on the curve")]
    InvalidPoint,
    #[error("polynomial has {actual} coefficients, expected {expected}")]
    BadLength { expected: usize, actual: usize },
    #[error("invalid NTT parameters: {0}")]
    InvalidParams(String),
    #[error("unknown scheme `{0}`")]
    UnknownScheme(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignOp {
    Sign,
    Verify,
}

/// Outcome of a verification. Rejection is a result, not an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HashVariant {
    Sha256,
    Sha512,
}

impl HashVariant {
    pub fn block_bytes(self) -> u64 {
        match self {
            HashVariant::Sha256 => 64,
            HashVariant::Sha512 => 128,
        }
    }

    pub fn digest_bytes(self) -> usize {
        match self {
            HashVariant::Sha256 => 32,
            HashVariant::Sha512 => 64,
        }
    }

    fn length_bytes(self) -> u64 {
        self.block_bytes() / 8
    }

    pub fn block_cycles(self, calib: &Calibration) -> u64 {
        match self {
            HashVariant::Sha256 => calib.ace.sha256_block_cycles,
            HashVariant::Sha512 => calib.ace.sha512_block_cycles,
        }
    }

    /// Compression-function calls for a `len`-byte message.
    pub fn blocks(self, len: u64) -> u64 {
        sha2::block_count(len, self.block_bytes(), self.length_bytes())
    }

    pub fn digest(self, message: &[u8]) -> Vec<u8> {
        match self {
            HashVariant::Sha256 => sha2::sha256(message).to_vec(),
            HashVariant::Sha512 => sha2::sha512(message).to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashJob {
    pub message: Vec<u8>,
    pub variant: HashVariant,
    pub alu_count: u32,
}

impl HashJob {
    pub fn new(message: Vec<u8>, variant: HashVariant) -> Self {
        HashJob { message, variant, alu_count: 8 }
    }
}

/// Standard SHA-2 digest and its cycle cost on the hash ALUs.
///
/// A single message chains sequentially, so `alu_count` affects neither value.
pub fn sha2_digest(job: &HashJob, calib: &Calibration) -> (Vec<u8>, u64) {
    let blocks = job.variant.blocks(job.message.len() as u64);
    (job.variant.digest(&job.message), blocks * job.variant.block_cycles(calib))
}

/// Cycles to hash `total_bytes` split into `segment_bytes` segments spread
/// over `alus` ALUs, followed by one pass over the concatenated segment digests.
pub fn tree_hash_cycles(total_bytes: u64, segment_bytes: u64, variant: HashVariant, alus: u32, calib: &Calibration) -> u64 {
    let per_block = variant.block_cycles(calib);
    if total_bytes == 0 {
        return variant.blocks(0) * per_block;
    }
    let segment_bytes = segment_bytes.max(1);
    let segments = total_bytes.div_ceil(segment_bytes);
    if segments == 1 {
        return variant.blocks(total_bytes) * per_block;
    }
    let alus = u64::from(alus.max(1));
    let mut load = vec![0u64; alus.min(segments) as usize];
    for i in 0..segments {
        let len = segment_bytes.min(total_bytes - i * segment_bytes);
        load[(i % alus) as usize] += variant.blocks(len) * per_block;
    }
    let root = variant.blocks(segments * variant.digest_bytes() as u64) * per_block;
    load.into_iter().max().unwrap_or(0) + root
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeId {
    Rsa,
    Ecdsa,
    Dilithium,
    Falcon,
    SphincsPlus,
}

impl SchemeId {
    pub const ALL: [SchemeId; 5] = [SchemeId::Rsa, SchemeId::Ecdsa, SchemeId::Dilithium, SchemeId::Falcon, SchemeId::SphincsPlus];
    pub const PQC: [SchemeId; 3] = [SchemeId::Dilithium, SchemeId::Falcon, SchemeId::SphincsPlus];

    /// Calibration-file key.
    pub fn key(self) -> &'static str {
        match self {
            SchemeId::Rsa => "rsa",
            SchemeId::Ecdsa => "ecdsa",
            SchemeId::Dilithium => "dilithium",
            SchemeId::Falcon => "falcon",
            SchemeId::SphincsPlus => "sphincsplus",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SchemeId::Rsa => "RSA-3072",
            SchemeId::Ecdsa => "ECDSA-384",
            SchemeId::Dilithium => "Dilithium",
            SchemeId::Falcon => "Falcon-1024",
            SchemeId::SphincsPlus => "SPHINCS+",
        }
    }

    pub fn is_pqc(self) -> bool {
        Self::PQC.contains(&self)
    }

    pub fn key_options(self) -> &'static [u32] {
        match self {
            SchemeId::Rsa => &[1024, 2048, 3072, 4096],
            SchemeId::Ecdsa => &[160, 224, 256, 384, 521],
            SchemeId::Dilithium => &[2048, 3072],
            SchemeId::Falcon => &[896, 1280],
            SchemeId::SphincsPlus => &[256, 384, 512],
        }
    }

    pub fn granularity_bits(self) -> u32 {
        match self {
            SchemeId::Rsa => 1024,
            SchemeId::Ecdsa => 256,
            SchemeId::Dilithium => 23,
            SchemeId::Falcon => 64,
            SchemeId::SphincsPlus => 32,
        }
    }

    /// Digest paired with the evaluated parameter set.
    pub fn default_digest(self) -> HashVariant {
        match self {
            SchemeId::Rsa => HashVariant::Sha256,
            _ => HashVariant::Sha512,
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeId {
    type Err = AceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        Ok(match norm.as_str() {
            "rsa" | "rsa3072" => SchemeId::Rsa,
            "ecdsa" | "ecdsa384" => SchemeId::Ecdsa,
            "dilithium" | "dilithiumiv" => SchemeId::Dilithium,
            "falcon" | "falcon1024" => SchemeId::Falcon,
            "sphincs" | "sphincsplus" => SchemeId::SphincsPlus,
            _ => return Err(AceError::UnknownScheme(s.to_string())),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchemeSpec {
    pub scheme_id: SchemeId,
    pub key_bits: u32,
    pub digest_bits: u32,
    pub granularity_bits: u32,
}

impl SchemeSpec {
    pub fn new(scheme_id: SchemeId, key_bits: u32, digest: HashVariant) -> Result<Self, AceError> {
        if !scheme_id.key_options().contains(&key_bits) {
            return Err(AceError::InvalidKey(format!("{scheme_id} does not support {key_bits}-bit keys")));
        }
        Ok(SchemeSpec {
            scheme_id,
            key_bits,
            digest_bits: 8 * digest.digest_bytes() as u32,
            granularity_bits: scheme_id.granularity_bits(),
        })
    }

    /// The parameter set used in the evaluation workloads.
    pub fn evaluated(scheme_id: SchemeId) -> Self {
        let key_bits = match scheme_id {
            SchemeId::Rsa => 3072,
            SchemeId::Ecdsa => 384,
            SchemeId::Dilithium => 3072,
            SchemeId::Falcon => 1280,
            SchemeId::SphincsPlus => 512,
        };
        Self::new(scheme_id, key_bits, scheme_id.default_digest()).expect("listed option")
    }

    pub fn digest_variant(&self) -> HashVariant {
        if self.digest_bits == 256 {
            HashVariant::Sha256
        } else {
            HashVariant::Sha512
        }
    }
}
