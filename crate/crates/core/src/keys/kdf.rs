use super::KeyError;
use crate::ace::sha2::hmac_sha256;

const HASH_LEN: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KdfContext {
    pub salt: Vec<u8>,
    pub context: Vec<u8>,
    out_len: usize,
}

impl KdfContext {
    pub fn new(salt: Vec<u8>, context: Vec<u8>, out_len: usize) -> Result<Self, KeyError> {
        if out_len == 0 || out_len > 255 * HASH_LEN {
            return Err(KeyError::InvalidKdf(format!("output length {out_len} outside 1..={}", 255 * HASH_LEN)));
        }
        Ok(KdfContext { salt, context, out_len })
    }

    pub fn out_len(&self) -> usize {
        self.out_len
    }
}

pub fn hkdf_extract(salt: &[u8], ikm: &[u8]) -> [u8; 32] {
    hmac_sha256(salt, ikm)
}

/// `T(i) = HMAC(prk, T(i-1) || info || i)`, concatenated and truncated.
pub fn hkdf_expand(prk: &[u8], info: &[u8], out_len: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(out_len + HASH_LEN);
    let mut prev: Vec<u8> = Vec::new();
    let mut counter = 1u8;
    while out.len() < out_len {
        let mut msg = prev.clone();
        msg.extend_from_slice(info);
        msg.push(counter);
        prev = hmac_sha256(prk, &msg).to_vec();
        out.extend_from_slice(&prev);
        counter = counter.wrapping_add(1);
    }
    out.truncate(out_len);
    out
}

/// HKDF-SHA256 over packed root bits.
pub fn derive_key(root: &[u8], ctx: &KdfContext) -> Result<Vec<u8>, KeyError> {
    if root.is_empty() {
        return Err(KeyError::InvalidKdf("empty root key".into()));
    }
    let prk = hkdf_extract(&ctx.salt, root);
    Ok(hkdf_expand(&prk, &ctx.context, ctx.out_len))
}
