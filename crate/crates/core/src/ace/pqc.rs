//! Cycle schedules for the post-quantum signature schemes.

use super::{AceError, SchemeId, SignOp};
use crate::calib::{Calibration, OpCounts};

/// SHAKE256 absorption rate in bytes.
pub const MESSAGE_RATE: u64 = 136;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PqcCycleSchedule {
    pub scheme: SchemeId,
    pub sign: OpCounts,
    pub verify: OpCounts,
}

impl PqcCycleSchedule {
    pub fn counts(&self, op: SignOp) -> &OpCounts {
        match op {
            SignOp::Sign => &self.sign,
            SignOp::Verify => &self.verify,
        }
    }

    /// `Σ count × unit cost`; Keccak calls spread over `keccak_parallelism` ALUs.
    pub fn core_cycles(&self, op: SignOp, calib: &Calibration) -> u64 {
        let c = self.counts(op);
        let a = &calib.ace;
        c.keccak.div_ceil(c.keccak_parallelism.max(1)) * a.keccak_permutation_cycles
            + c.ntt * a.ntt_cycles
            + c.fft * a.fft_cycles
            + c.modmul * a.modmul_cycles_per_word
            + c.pointwise * a.pointwise_cycles
            + c.comparison * a.comparison_cycles
    }
}

pub fn schedule_for(scheme: SchemeId, calib: &Calibration) -> Result<PqcCycleSchedule, AceError> {
    if !scheme.is_pqc() {
        return Err(AceError::UnknownScheme(scheme.name().to_string()));
    }
    let s = calib
        .ace
        .schedules
        .get(scheme.key())
        .ok_or_else(|| AceError::UnknownScheme(scheme.key().to_string()))?;
    Ok(PqcCycleSchedule { scheme, sign: s.sign, verify: s.verify })
}

/// Permutations spent absorbing the message; zero for an empty message.
pub fn message_permutations(msg_bytes: u64) -> u64 {
    msg_bytes.div_ceil(MESSAGE_RATE)
}

pub fn pqc_latency(scheme: SchemeId, op: SignOp, msg_bytes: u64, calib: &Calibration) -> Result<u64, AceError> {
    let sched = schedule_for(scheme, calib)?;
    let hash = message_permutations(msg_bytes) * calib.ace.keccak_permutation_cycles;
    Ok(hash + sched.core_cycles(op, calib))
}
