//! Counter mode over the SIMD lane array.

use super::{BceError, BceState, CipherId, EngineGeometry};
use crate::calib::Calibration;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CtrOutput {
    pub output: Vec<u8>,
    pub cycles: u64,
    /// Lane-parallel block batches.
    pub batches: u64,
}

/// Cycle cost of `blocks` CTR blocks: one batch per `total_lanes` blocks plus pipeline fill.
pub fn ctr_timing(blocks: u64, cipher: CipherId, geometry: &EngineGeometry, calib: &Calibration) -> (u64, u64) {
    let lanes = geometry.total_lanes().max(1) as u64;
    let batches = blocks.div_ceil(lanes);
    let cycles = batches * calib.cipher_cycles(cipher) + calib.bce.pipeline_fill_cycles;
    (batches, cycles)
}

/// Counter block for block index `i`: the nonce followed by a 32-bit
/// big-endian counter. 64-bit block ciphers use the first 4 nonce bytes.
fn counter_block(nonce: &[u8; 12], i: u32, block_bytes: usize) -> Vec<u8> {
    let prefix = block_bytes - 4;
    let mut b = nonce[..prefix].to_vec();
    b.extend_from_slice(&i.to_be_bytes());
    b
}

/// Encrypts or decrypts `data`; the two directions are the same function.
/// Block `i` is assigned to lane `i mod total_lanes`.
pub fn ctr_process(
    data: &[u8],
    state: &BceState,
    nonce: &[u8; 12],
    geometry: &EngineGeometry,
    calib: &Calibration,
) -> Result<CtrOutput, BceError> {
    if data.is_empty() {
        return Err(BceError::EmptyInput);
    }
    let id = state.spec().cipher_id;
    let bb = id.block_bytes();
    let mut output = Vec::with_capacity(data.len());
    for (i, chunk) in data.chunks(bb).enumerate() {
        let mut ks = counter_block(nonce, i as u32, bb);
        state.encrypt_in_place(&mut ks)?;
        output.extend(chunk.iter().zip(&ks).map(|(d, k)| d ^ k));
    }
    let blocks = data.len().div_ceil(bb) as u64;
    let (batches, cycles) = ctr_timing(blocks, id, geometry, calib);
    Ok(CtrOutput { output, cycles, batches })
}
