//! Textbook RSA over limb integers with deterministic full-domain padding.

use super::sha2::sha256;
use super::{AceError, SignOp, Verdict};
use crate::calib::Calibration;
use crate::datapath::{LimbInt, ModContext};
use rand::RngCore;

#[derive(Debug, Clone)]
pub struct RsaKey {
    n: ModContext,
    e: LimbInt,
    d: LimbInt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RsaPadding {
    /// The digest is used directly as the message representative.
    Raw,
    /// `0x00 || MGF1-SHA256(digest)` truncated to the modulus length.
    FullDomain,
}

/// Result of an RSA operation: the signature on sign, the verdict on verify.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RsaOutput {
    Signature(Vec<u8>),
    Verdict(Verdict),
}

fn mgf1(seed: &[u8], len: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(len + 32);
    let mut counter = 0u32;
    while out.len() < len {
        let mut input = seed.to_vec();
        input.extend_from_slice(&counter.to_be_bytes());
        out.extend_from_slice(&sha256(&input));
        counter += 1;
    }
    out.truncate(len);
    out
}

const SMALL_PRIMES: [u64; 15] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

fn random_bits(rng: &mut dyn RngCore, bits: usize) -> LimbInt {
    let mut limbs: Vec<u64> = (0..bits.div_ceil(64)).map(|_| rng.next_u64()).collect();
    let spare = 64 * limbs.len() - bits;
    if let Some(top) = limbs.last_mut() {
        *top &= u64::MAX >> spare;
    }
    LimbInt::from_limbs(limbs)
}

/// Miller-Rabin with `rounds` random bases.
pub fn is_probable_prime(n: &LimbInt, rounds: usize, rng: &mut dyn RngCore) -> bool {
    let two = LimbInt::from_u64(2);
    if n < &two {
        return false;
    }
    for &p in SMALL_PRIMES.iter().chain([2u64].iter()) {
        let p = LimbInt::from_u64(p);
        if n == &p {
            return true;
        }
        if n.rem(&p).is_zero() {
            return false;
        }
    }
    let ctx = ModContext::new(n.clone()).expect("n > 1");
    let n1 = n - &LimbInt::one();
    let mut s = 0usize;
    while !n1.bit(s) {
        s += 1;
    }
    let d = n1.shr(s);
    'witness: for _ in 0..rounds {
        let a = &random_bits(rng, n.bits() - 1).rem(&(&n1 - &LimbInt::one())) + &two;
        let mut x = ctx.pow(&a, &d).0;
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = ctx.mul(&x, &x);
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn random_prime(bits: usize, rng: &mut dyn RngCore) -> LimbInt {
    loop {
        let mut c = random_bits(rng, bits);
        let top = LimbInt::one().shl(bits - 1);
        let top2 = LimbInt::one().shl(bits - 2);
        if !c.bit(bits - 1) {
            c = &c + &top;
        }
        if !c.bit(bits - 2) {
            c = &c + &top2;
        }
        if c.is_even() {
            c = &c + &LimbInt::one();
        }
        if is_probable_prime(&c, 24, rng) {
            return c;
        }
    }
}

impl RsaKey {
    pub fn from_components(n: LimbInt, e: LimbInt, d: LimbInt) -> Result<Self, AceError> {
        let n = ModContext::new(n).map_err(|_| AceError::InvalidKey("modulus must exceed 1".into()))?;
        Ok(RsaKey { n, e, d })
    }

    /// Generates a key with a `bits`-bit modulus and `e = 65537`.
    pub fn generate(bits: usize, rng: &mut dyn RngCore) -> Self {
        let e = LimbInt::from_u64(65537);
        loop {
            let p = random_prime(bits / 2, rng);
            let q = random_prime(bits - bits / 2, rng);
            if p == q {
                continue;
            }
            let n = &p * &q;
            if n.bits() != bits {
                continue;
            }
            let phi = &(&p - &LimbInt::one()) * &(&q - &LimbInt::one());
            let Ok(phi_ctx) = ModContext::new(phi) else { continue };
            let Some(d) = phi_ctx.inv(&e) else { continue };
            return RsaKey { n: ModContext::new(n).unwrap(), e, d };
        }
    }

    pub fn modulus(&self) -> &LimbInt {
        self.n.modulus()
    }

    pub fn modulus_bytes(&self) -> usize {
        self.n.modulus().bits().div_ceil(8)
    }

    pub fn limb_count(&self) -> usize {
        self.n.limb_count()
    }

    /// Modulus width in asymmetric-ALU words.
    pub fn alu_words(&self) -> usize {
        self.n.modulus().bits().div_ceil(super::SchemeId::Rsa.granularity_bits() as usize).max(1)
    }

    pub fn public_exponent(&self) -> &LimbInt {
        &self.e
    }

    fn representative(&self, digest: &[u8], padding: RsaPadding) -> Result<LimbInt, AceError> {
        let m = match padding {
            RsaPadding::Raw => LimbInt::from_be_bytes(digest),
            RsaPadding::FullDomain => {
                let k = self.modulus_bytes();
                let mut em = vec![0u8];
                em.extend(mgf1(digest, k - 1));
                LimbInt::from_be_bytes(&em)
            }
        };
        if &m >= self.n.modulus() {
            return Err(AceError::SizeMismatch("message representative exceeds modulus".into()));
        }
        Ok(m)
    }

    /// Returns the signature bytes and the number of modular multiplications.
    pub fn sign(&self, digest: &[u8], padding: RsaPadding) -> Result<(Vec<u8>, u64), AceError> {
        let m = self.representative(digest, padding)?;
        let (s, steps) = self.n.pow(&m, &self.d);
        Ok((s.to_be_bytes_padded(self.modulus_bytes()).unwrap(), steps))
    }

    pub fn verify(&self, digest: &[u8], signature: &[u8], padding: RsaPadding) -> Result<(Verdict, u64), AceError> {
        if signature.len() != self.modulus_bytes() {
            return Err(AceError::SizeMismatch(format!(
                "signature is {} bytes, modulus is {}",
                signature.len(),
                self.modulus_bytes()
            )));
        }
        let s = LimbInt::from_be_bytes(signature);
        if &s >= self.n.modulus() {
            return Ok((Verdict::Reject, 0));
        }
        let (m, steps) = self.n.pow(&s, &self.e);
        let expect = self.representative(digest, padding)?;
        Ok((if m == expect { Verdict::Accept } else { Verdict::Reject }, steps))
    }
}

/// Engine cycles for `steps` modular multiplications over `words` ALU words.
pub fn rsa_cycles(steps: u64, words: usize, calib: &Calibration) -> u64 {
    steps * calib.ace.modmul_cycles_per_word * words as u64
}

/// Sign or verify; verification failure is a `Reject` verdict, not an error.
pub fn rsa_op(
    key: &RsaKey,
    digest: &[u8],
    op: SignOp,
    signature: Option<&[u8]>,
    padding: RsaPadding,
    calib: &Calibration,
) -> Result<(RsaOutput, u64), AceError> {
    match op {
        SignOp::Sign => {
            let (sig, steps) = key.sign(digest, padding)?;
            Ok((RsaOutput::Signature(sig), rsa_cycles(steps, key.alu_words(), calib)))
        }
        SignOp::Verify => {
            let sig = signature.ok_or_else(|| AceError::SizeMismatch("verify needs a signature".into()))?;
            let (v, steps) = key.verify(digest, sig, padding)?;
            Ok((RsaOutput::Verdict(v), rsa_cycles(steps, key.alu_words(), calib)))
        }
    }
}
