use super::ReliabilityError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Binary symmetric channel standing in for threshold-voltage drift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelModel {
    raw_ber: f64,
    pub seed: u64,
}

impl ChannelModel {
    pub fn new(raw_ber: f64, seed: u64) -> Result<Self, ReliabilityError> {
        if !(0.0..0.5).contains(&raw_ber) {
            return Err(ReliabilityError::InvalidBer(raw_ber));
        }
        Ok(ChannelModel { raw_ber, seed })
    }

    pub fn raw_ber(&self) -> f64 {
        self.raw_ber
    }

    pub fn with_seed(self, seed: u64) -> Self {
        ChannelModel { seed, ..self }
    }
}

/// Flips each bit independently with probability `raw_ber`.
pub fn inject_errors(codeword: &[u8], channel: &ChannelModel) -> Vec<u8> {
    if channel.raw_ber == 0.0 {
        return codeword.to_vec();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(channel.seed);
    codeword.iter().map(|&b| b ^ u8::from(rng.gen_bool(channel.raw_ber))).collect()
}
