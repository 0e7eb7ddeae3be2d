//! Ring-oscillator PUF: each response bit compares two oscillator frequencies.

use super::KeyError;
use crate::reliability::bits_to_bytes;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PufParams {
    pub oscillators: usize,
    pub f0_mhz: f64,
    /// Process variation across oscillators.
    pub sigma_proc_mhz: f64,
    /// Per-read jitter.
    pub noise_sigma_mhz: f64,
}

impl Default for PufParams {
    fn default() -> Self {
        PufParams { oscillators: 512, f0_mhz: 200.0, sigma_proc_mhz: 2.0, noise_sigma_mhz: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoPufInstance {
    pub chip_seed: u64,
    freqs: Vec<f64>,
    pub noise_sigma: f64,
}

impl RoPufInstance {
    pub fn new(chip_seed: u64, params: PufParams) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(chip_seed);
        let dist = Normal::new(params.f0_mhz, params.sigma_proc_mhz).expect("finite sigma");
        let freqs = (0..params.oscillators).map(|_| dist.sample(&mut rng)).collect();
        RoPufInstance { chip_seed, freqs, noise_sigma: params.noise_sigma_mhz }
    }

    pub fn oscillator_freqs(&self) -> &[f64] {
        &self.freqs
    }

    /// One read; `read_seed` draws the jitter when `noise_sigma > 0`.
    pub fn measure(&self, challenge: &Challenge, read_seed: u64) -> Result<Vec<u8>, KeyError> {
        challenge.check(self.freqs.len())?;
        let mut rng = ChaCha8Rng::seed_from_u64(read_seed ^ self.chip_seed.rotate_left(17));
        let jitter = Normal::new(0.0, self.noise_sigma.max(0.0)).expect("finite sigma");
        let mut read = |i: usize| {
            if self.noise_sigma > 0.0 {
                self.freqs[i] + jitter.sample(&mut rng)
            } else {
                self.freqs[i]
            }
        };
        Ok(challenge.pairs.iter().map(|&(a, b)| u8::from(read(a) > read(b))).collect())
    }
}

/// Ordered oscillator pairs; one response bit per pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Challenge {
    pub pairs: Vec<(usize, usize)>,
}

impl Challenge {
    /// Pairs `(2i, 2i + 1)`, so no oscillator is reused.
    pub fn disjoint(bits: usize) -> Self {
        Challenge { pairs: (0..bits).map(|i| (2 * i, 2 * i + 1)).collect() }
    }

    fn check(&self, count: usize) -> Result<(), KeyError> {
        for &(a, b) in &self.pairs {
            for index in [a, b] {
                if index >= count {
                    return Err(KeyError::IndexOutOfRange { index, count });
                }
            }
            if a == b {
                return Err(KeyError::DegeneratePair(a));
            }
        }
        Ok(())
    }
}

/// Noise-free response packed into bytes.
pub fn puf_response(puf: &RoPufInstance, challenge: &Challenge) -> Result<Vec<u8>, KeyError> {
    let exact = RoPufInstance { noise_sigma: 0.0, ..puf.clone() };
    Ok(bits_to_bytes(&exact.measure(challenge, 0)?))
}

/// Code-offset enrollment with a `factor`-fold repetition code. Returns the key
/// bits (first bit of each group) and the public helper data.
pub fn repetition_enroll(response: &[u8], factor: usize) -> (Vec<u8>, Vec<u8>) {
    let factor = factor.max(1);
    let groups = response.len() / factor;
    let key: Vec<u8> = (0..groups).map(|g| response[g * factor]).collect();
    let helper = (0..groups * factor).map(|i| response[i] ^ key[i / factor]).collect();
    (key, helper)
}

/// Majority decode of `noisy XOR helper` per group.
pub fn repetition_reconstruct(noisy: &[u8], helper: &[u8], factor: usize) -> Result<Vec<u8>, KeyError> {
    let factor = factor.max(1);
    if noisy.len() < helper.len() {
        return Err(KeyError::HelperMismatch { helper: helper.len(), response: noisy.len() });
    }
    Ok(helper
        .chunks(factor)
        .enumerate()
        .map(|(g, h)| {
            let ones: usize = h.iter().enumerate().map(|(i, &x)| usize::from(x ^ noisy[g * factor + i] == 1)).sum();
            u8::from(2 * ones > factor)
        })
        .collect())
}
