//! Key management: a ring-oscillator PUF supplies the root key and an
//! HKDF over the engine's SHA-256 expands it into working keys.

mod kdf;
mod puf;

pub use kdf::{derive_key, hkdf_expand, hkdf_extract, KdfContext};
pub use puf::{puf_response, repetition_enroll, repetition_reconstruct, Challenge, PufParams, RoPufInstance};

use crate::ace::ecdsa::{Curve, EcdsaKey};
use crate::ace::rsa::RsaKey;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KeyError {
    #[error("oscillator index {index} out of range for {count} oscillators")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("challenge pairs oscillator {0} with itself")]
    DegeneratePair(usize),
    #[error("invalid KDF request: {0}")]
    InvalidKdf(String),
    #[error("helper data length {helper} does not match response length {response}")]
    HelperMismatch { helper: usize, response: usize },
}

/// Holds the PUF root key; only derived keys leave it.
pub struct KeyManager {
    root: Vec<u8>,
}

impl KeyManager {
    pub fn enroll(puf: &RoPufInstance, challenge: &Challenge) -> Result<Self, KeyError> {
        Ok(KeyManager { root: puf_response(puf, challenge)? })
    }

    pub fn derive(&self, ctx: &KdfContext) -> Result<Vec<u8>, KeyError> {
        derive_key(&self.root, ctx)
    }

    /// 64-bit seed bound to a purpose label.
    pub fn scheme_seed(&self, label: &str) -> u64 {
        let out = self.derive(&KdfContext::new(b"flashvault-seed".to_vec(), label.as_bytes().to_vec(), 8).expect("8 bytes is valid")).expect("root is non-empty");
        u64::from_be_bytes(out.try_into().expect("8 bytes"))
    }

    pub fn ecdsa_key(&self, curve: Curve) -> EcdsaKey {
        EcdsaKey::from_seed(curve, self.scheme_seed(&format!("ecdsa-{curve:?}")))
    }

    pub fn rsa_key(&self, bits: usize) -> RsaKey {
        let mut rng = ChaCha8Rng::seed_from_u64(self.scheme_seed(&format!("rsa-{bits}")));
        RsaKey::generate(bits, &mut rng)
    }
}

impl std::fmt::Debug for KeyManager {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("KeyManager").field("root_bits", &self.root.len()).finish_non_exhaustive()
    }
}
