//! Block cipher engine: the seven ciphers as programs over the primitive units.
//!
//! Every cipher is written against [`Lane`], which executes each step on a
//! datapath unit and can record the step as an [`Instruction`]. Tracing one
//! block yields the cipher's [`Microprogram`].

mod aes;
mod camellia;
mod ctr;
mod des;
mod hight;
mod idea;
mod lane;
mod serpent;
mod sm4;
mod tables;

pub use ctr::{ctr_process, ctr_timing, CtrOutput};
pub use lane::{Instruction, Lane, Primitive, Unit};

use crate::calib::Calibration;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BceError {
    #[error("unsupported cipher {0:?}")]
    UnsupportedCipher(String),
    #[error("{cipher} does not accept a {bytes}-byte key")]
    IllegalKeyLength { cipher: CipherId, bytes: usize },
    #[error("block must be {expected} bytes, got {actual}")]
    BlockLength { expected: usize, actual: usize },
    #[error("cipher state not initialized")]
    NotInitialized,
    #[error("input must be non-empty")]
    EmptyInput,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CipherId {
    Aes,
    Tdes,
    Idea,
    Serpent,
    Hight,
    Sm4,
    Camellia,
}

impl CipherId {
    pub const ALL: [CipherId; 7] = [
        CipherId::Tdes,
        CipherId::Hight,
        CipherId::Idea,
        CipherId::Serpent,
        CipherId::Sm4,
        CipherId::Camellia,
        CipherId::Aes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CipherId::Aes => "AES",
            CipherId::Tdes => "3DES",
            CipherId::Idea => "IDEA",
            CipherId::Serpent => "Serpent",
            CipherId::Hight => "HIGHT",
            CipherId::Sm4 => "SM4",
            CipherId::Camellia => "Camellia",
        }
    }

    /// Lower-case key used in configuration files.
    pub fn key(self) -> &'static str {
        match self {
            CipherId::Aes => "aes",
            CipherId::Tdes => "tdes",
            CipherId::Idea => "idea",
            CipherId::Serpent => "serpent",
            CipherId::Hight => "hight",
            CipherId::Sm4 => "sm4",
            CipherId::Camellia => "camellia",
        }
    }

    pub fn block_bytes(self) -> usize {
        match self {
            CipherId::Tdes | CipherId::Idea | CipherId::Hight => 8,
            _ => 16,
        }
    }

    /// Legal key lengths in bytes.
    pub fn key_lengths(self) -> &'static [usize] {
        match self {
            CipherId::Aes | CipherId::Serpent | CipherId::Camellia => &[16, 24, 32],
            CipherId::Tdes => &[16, 24],
            CipherId::Idea | CipherId::Hight | CipherId::Sm4 => &[16],
        }
    }

    /// Primitive operations listed for the cipher in the algorithm decomposition table.
    pub fn required_primitives(self) -> BTreeSet<Primitive> {
        use Primitive::*;
        let ops: &[Primitive] = match self {
            CipherId::Aes => &[Xor, SBox, Shift, Multiplication],
            CipherId::Tdes => &[Xor, SBox, Permutation],
            CipherId::Idea => &[Xor, ModAdd, ModMult],
            CipherId::Serpent => &[Xor, SBox, Shift, Permutation],
            CipherId::Hight => &[Xor, Shift, ModAdd, ModMult],
            CipherId::Sm4 => &[Xor, SBox, Shift],
            CipherId::Camellia => &[Xor, SBox, Shift, And, Or],
        };
        ops.iter().copied().collect()
    }
}

impl fmt::Display for CipherId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CipherId {
    type Err = BceError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "aes" => Ok(CipherId::Aes),
            "3des" | "tdes" | "tripledes" => Ok(CipherId::Tdes),
            "idea" => Ok(CipherId::Idea),
            "serpent" => Ok(CipherId::Serpent),
            "hight" => Ok(CipherId::Hight),
            "sm4" => Ok(CipherId::Sm4),
            "camellia" => Ok(CipherId::Camellia),
            _ => Err(BceError::UnsupportedCipher(s.to_string())),
        }
    }
}

/// Static parameters of a loaded cipher.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CipherSpec {
    pub cipher_id: CipherId,
    /// Round-function executions per block. IDEA's trailing half round is the output transform.
    pub rounds: u32,
    pub half_round: bool,
    pub key_bits: u32,
    pub block_bits: u32,
    pub granularity_bits: u32,
}

impl CipherSpec {
    pub fn new(cipher_id: CipherId, key_bytes: usize) -> Result<Self, BceError> {
        if !cipher_id.key_lengths().contains(&key_bytes) {
            return Err(BceError::IllegalKeyLength { cipher: cipher_id, bytes: key_bytes });
        }
        let key_bits = match cipher_id {
            CipherId::Tdes => 7 * key_bytes as u32,
            _ => 8 * key_bytes as u32,
        };
        let (rounds, granularity_bits) = match cipher_id {
            CipherId::Aes => (6 + key_bytes as u32 / 4, 8),
            CipherId::Tdes => (48, 4),
            CipherId::Idea => (8, 16),
            CipherId::Serpent => (32, 4),
            CipherId::Hight => (32, 8),
            CipherId::Sm4 => (32, 8),
            CipherId::Camellia => (if key_bytes == 16 { 18 } else { 24 }, 8),
        };
        Ok(CipherSpec {
            cipher_id,
            rounds,
            half_round: cipher_id == CipherId::Idea,
            key_bits,
            block_bits: 8 * cipher_id.block_bytes() as u32,
            granularity_bits,
        })
    }

    /// Round count as printed in the decomposition table (IDEA: 8.5).
    pub fn rounds_display(&self) -> String {
        if self.half_round {
            format!("{}.5", self.rounds)
        } else {
            self.rounds.to_string()
        }
    }
}

/// Engine geometry: SIMD lanes per engine, engines per die, clock.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineGeometry {
    pub bce_lanes_per_engine: u32,
    pub engines_per_die: u32,
    pub clock_hz: u64,
}

impl Default for EngineGeometry {
    fn default() -> Self {
        EngineGeometry {
            bce_lanes_per_engine: 16,
            engines_per_die: 2,
            clock_hz: 200_000_000,
        }
    }
}

impl EngineGeometry {
    pub fn total_lanes(&self) -> u32 {
        self.bce_lanes_per_engine * self.engines_per_die
    }
}

pub(crate) trait CipherCore: Send + Sync {
    fn encrypt(&self, lane: &mut Lane, block: &mut [u8]);
    fn decrypt(&self, lane: &mut Lane, block: &mut [u8]);
}

/// Recorded instruction schedule for one cipher and key size.
#[derive(Debug, Clone)]
pub struct Microprogram {
    pub spec: CipherSpec,
    pub encrypt: Vec<Instruction>,
    pub decrypt: Vec<Instruction>,
    pub key_schedule_program: Vec<Instruction>,
    pub cycles_per_round: u64,
    pub overhead_cycles: u64,
}

impl Microprogram {
    /// Primitive categories executed by the encrypt and decrypt programs.
    pub fn primitives_used(&self) -> BTreeSet<Primitive> {
        self.encrypt.iter().chain(&self.decrypt).map(|i| i.op).collect()
    }

    pub fn units_used(&self) -> BTreeSet<Unit> {
        self.encrypt.iter().chain(&self.decrypt).map(|i| i.unit).collect()
    }

    pub fn block_cycles(&self) -> u64 {
        self.spec.rounds as u64 * self.cycles_per_round + self.overhead_cycles
    }
}

/// Expanded key material bound to a cipher.
pub struct BceState {
    spec: CipherSpec,
    core: Option<Box<dyn CipherCore>>,
}

impl fmt::Debug for BceState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BceState")
            .field("spec", &self.spec)
            .field("initialized", &self.core.is_some())
            .finish()
    }
}

impl BceState {
    /// A state with no key loaded.
    pub fn uninitialized(spec: CipherSpec) -> Self {
        BceState { spec, core: None }
    }

    pub fn spec(&self) -> &CipherSpec {
        &self.spec
    }

    fn core(&self) -> Result<&dyn CipherCore, BceError> {
        self.core.as_deref().ok_or(BceError::NotInitialized)
    }

    fn check_block(&self, block: &[u8]) -> Result<(), BceError> {
        let expected = self.spec.cipher_id.block_bytes();
        if block.len() != expected {
            return Err(BceError::BlockLength { expected, actual: block.len() });
        }
        Ok(())
    }

    /// Encrypts in place without tracing. Returns executed cycles.
    pub fn encrypt_in_place(&self, block: &mut [u8]) -> Result<u64, BceError> {
        self.check_block(block)?;
        let mut lane = Lane::new();
        self.core()?.encrypt(&mut lane, block);
        Ok(lane.cycles())
    }

    pub fn decrypt_in_place(&self, block: &mut [u8]) -> Result<u64, BceError> {
        self.check_block(block)?;
        let mut lane = Lane::new();
        self.core()?.decrypt(&mut lane, block);
        Ok(lane.cycles())
    }
}

fn build_core(cipher_id: CipherId, key: &[u8], lane: &mut Lane) -> Box<dyn CipherCore> {
    match cipher_id {
        CipherId::Aes => Box::new(aes::Aes::new(key, lane)),
        CipherId::Tdes => Box::new(des::TripleDes::new(key, lane)),
        CipherId::Idea => Box::new(idea::Idea::new(key, lane)),
        CipherId::Serpent => Box::new(serpent::Serpent::new(key, lane)),
        CipherId::Hight => Box::new(hight::Hight::new(key, lane)),
        CipherId::Sm4 => Box::new(sm4::Sm4::new(key, lane)),
        CipherId::Camellia => Box::new(camellia::Camellia::new(key, lane)),
    }
}

/// Expands the key and records the cipher's microprogram.
pub fn load_cipher(cipher_id: CipherId, key: &[u8]) -> Result<(Microprogram, BceState), BceError> {
    let spec = CipherSpec::new(cipher_id, key.len())?;
    let mut ks_lane = Lane::tracing();
    let core = build_core(cipher_id, key, &mut ks_lane);

    let mut block = vec![0u8; cipher_id.block_bytes()];
    let mut enc_lane = Lane::tracing();
    core.encrypt(&mut enc_lane, &mut block);
    let mut dec_lane = Lane::tracing();
    core.decrypt(&mut dec_lane, &mut block);

    let total = enc_lane.cycles();
    let in_rounds = enc_lane.round_cycles();
    let cycles_per_round = in_rounds / spec.rounds as u64;
    let overhead_cycles = total - cycles_per_round * spec.rounds as u64;

    let program = Microprogram {
        spec,
        encrypt: enc_lane.into_trace(),
        decrypt: dec_lane.into_trace(),
        key_schedule_program: ks_lane.into_trace(),
        cycles_per_round,
        overhead_cycles,
    };
    Ok((program, BceState { spec, core: Some(core) }))
}

/// Encrypts one block; cycles follow the traced program.
pub fn encrypt_block(state: &BceState, plaintext: &[u8]) -> Result<(Vec<u8>, u64), BceError> {
    let mut block = plaintext.to_vec();
    let cycles = state.encrypt_in_place(&mut block)?;
    Ok((block, cycles))
}

pub fn decrypt_block(state: &BceState, ciphertext: &[u8]) -> Result<(Vec<u8>, u64), BceError> {
    let mut block = ciphertext.to_vec();
    let cycles = state.decrypt_in_place(&mut block)?;
    Ok((block, cycles))
}

/// Per-block cycle count used for throughput modelling.
pub fn cycle_table(cipher_id: CipherId, calib: &Calibration) -> u64 {
    calib.cipher_cycles(cipher_id)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_length_is_checked() {
        assert_eq!(
            load_cipher(CipherId::Tdes, &[0u8; 7]).unwrap_err(),
            BceError::IllegalKeyLength { cipher: CipherId::Tdes, bytes: 7 }
        );
        assert!(load_cipher(CipherId::Hight, &[0u8; 24]).is_err());
    }

    #[test]
    fn uninitialized_state_is_rejected() {
        let st = BceState::uninitialized(CipherSpec::new(CipherId::Aes, 16).unwrap());
        assert_eq!(encrypt_block(&st, &[0u8; 16]).unwrap_err(), BceError::NotInitialized);
    }

    #[test]
    fn block_length_is_checked() {
        let (_, st) = load_cipher(CipherId::Aes, &[0u8; 16]).unwrap();
        assert!(matches!(encrypt_block(&st, &[0u8; 8]), Err(BceError::BlockLength { .. })));
    }

    #[test]
    fn spec_rows() {
        let h = CipherSpec::new(CipherId::Hight, 16).unwrap();
        assert_eq!((h.rounds, h.key_bits, h.block_bits, h.granularity_bits), (32, 128, 64, 8));
        assert_eq!(CipherSpec::new(CipherId::Idea, 16).unwrap().rounds_display(), "8.5");
        assert_eq!(CipherSpec::new(CipherId::Aes, 32).unwrap().rounds, 14);
        assert_eq!(CipherSpec::new(CipherId::Camellia, 24).unwrap().rounds, 24);
        assert_eq!(CipherSpec::new(CipherId::Tdes, 24).unwrap().key_bits, 168);
    }

    #[test]
    fn cycles_follow_round_structure() {
        for id in CipherId::ALL {
            let key = vec![7u8; id.key_lengths()[0]];
            let (prog, st) = load_cipher(id, &key).unwrap();
            let (_, cycles) = encrypt_block(&st, &vec![1u8; id.block_bytes()]).unwrap();
            assert_eq!(cycles, prog.block_cycles(), "{id}");
            assert!(prog.cycles_per_round > 0);
        }
    }
}
