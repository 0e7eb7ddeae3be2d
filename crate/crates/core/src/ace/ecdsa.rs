//! ECDSA over the NIST prime curves in Jacobian coordinates.
//!
//! Cycle cost counts field and scalar multiplications, including the ones
//! spent in Fermat inversions.

use super::sha2::hmac_sha256;
use super::{AceError, SignOp, Verdict};
use crate::calib::Calibration;
use crate::datapath::{LimbInt, ModContext};
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Curve {
    P256,
    P384,
}

struct CurveParams {
    field: ModContext,
    order: ModContext,
    a: LimbInt,
    b: LimbInt,
    gx: LimbInt,
    gy: LimbInt,
    bytes: usize,
}

fn hex(s: &str) -> LimbInt {
    LimbInt::from_hex(s).expect("curve constant")
}

fn build(p: &str, b: &str, n: &str, gx: &str, gy: &str, bytes: usize) -> CurveParams {
    let p = hex(p);
    let a = p.checked_sub(&LimbInt::from_u64(3)).unwrap();
    CurveParams {
        field: ModContext::new(p).unwrap(),
        order: ModContext::new(hex(n)).unwrap(),
        a,
        b: hex(b),
        gx: hex(gx),
        gy: hex(gy),
        bytes,
    }
}

impl Curve {
    fn params(self) -> &'static CurveParams {
        static P256: OnceLock<CurveParams> = OnceLock::new();
        static P384: OnceLock<CurveParams> = OnceLock::new();
        match self {
            Curve::P256 => P256.get_or_init(|| {
                build(
                    "ffffffff00000001000000000000000000000000ffffffffffffffffffffffff",
                    "5ac635d8aa3a93e7b3ebbd55769886bc651d06b0cc53b0f63bce3c3e27d2604b",
                    "ffffffff00000000ffffffffffffffffbce6faada7179e84f3b9cac2fc632551",
                    "6b17d1f2e12c4247f8bce6e563a440f277037d812deb33a0f4a13945d898c296",
                    "4fe342e2fe1a7f9b8ee7eb4a7c0f9e162bce33576b315ececbb6406837bf51f5",
                    32,
                )
            }),
            Curve::P384 => P384.get_or_init(|| {
                build(
                    "fffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffeffffffff0000000000000000ffffffff",
                    "b3312fa7e23ee7e4988e056be3f82d19181d9c6efe8141120314088f5013875ac656398d8a2ed19d2a85c8edd3ec2aef",
                    "ffffffffffffffffffffffffffffffffffffffffffffffffc7634d81f4372ddf581a0db248b0a77aecec196accc52973",
                    "aa87ca22be8b05378eb1c71ef320ad746e1d3b628ba79b9859f741e082542a385502f25dbf55296c3a545e3872760ab7",
                    "3617de4a96262c6f5d9e98bf9292dc29f8f41dbd289a147ce9da3113b5f0b8c00a60b1ce1d7e819d7a431d7c90ea0e5f",
                    48,
                )
            }),
        }
    }

    pub fn scalar_bytes(self) -> usize {
        self.params().bytes
    }

    pub fn order(self) -> &'static LimbInt {
        self.params().order.modulus()
    }

    pub fn generator(self) -> (LimbInt, LimbInt) {
        let c = self.params();
        (c.gx.clone(), c.gy.clone())
    }

    pub fn limb_count(self) -> usize {
        self.params().field.limb_count()
    }

    /// Field width in asymmetric-ALU words.
    pub fn alu_words(self) -> usize {
        self.params().field.modulus().bits().div_ceil(super::SchemeId::Ecdsa.granularity_bits() as usize).max(1)
    }

    /// Checks `y^2 = x^3 + ax + b` with both coordinates reduced.
    pub fn is_on_curve(self, x: &LimbInt, y: &LimbInt) -> bool {
        let c = self.params();
        let f = &c.field;
        if x >= f.modulus() || y >= f.modulus() {
            return false;
        }
        let lhs = f.mul(y, y);
        let x3 = f.mul(&f.mul(x, x), x);
        let rhs = f.add(&f.add(&x3, &f.mul(&c.a, x)), &c.b);
        lhs == rhs
    }
}

/// Modular arithmetic that counts multiplications.
struct Counter<'a> {
    ctx: &'a ModContext,
    muls: u64,
}

impl<'a> Counter<'a> {
    fn new(ctx: &'a ModContext) -> Self {
        Counter { ctx, muls: 0 }
    }
    fn mul(&mut self, a: &LimbInt, b: &LimbInt) -> LimbInt {
        self.muls += 1;
        self.ctx.mul(a, b)
    }
    fn sqr(&mut self, a: &LimbInt) -> LimbInt {
        self.mul(a, a)
    }
    fn add(&self, a: &LimbInt, b: &LimbInt) -> LimbInt {
        self.ctx.add(a, b)
    }
    fn sub(&self, a: &LimbInt, b: &LimbInt) -> LimbInt {
        self.ctx.sub(a, b)
    }
    fn small(&self, k: u64, a: &LimbInt) -> LimbInt {
        self.ctx.reduce(&(a * &LimbInt::from_u64(k)))
    }
    /// Fermat inversion; the argument must be nonzero.
    fn inv(&mut self, a: &LimbInt) -> LimbInt {
        let e = self.ctx.modulus().checked_sub(&LimbInt::from_u64(2)).unwrap();
        let (r, steps) = self.ctx.pow(a, &e);
        self.muls += steps;
        r
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Jacobian {
    x: LimbInt,
    y: LimbInt,
    z: LimbInt,
}

impl Jacobian {
    fn infinity() -> Self {
        Jacobian { x: LimbInt::one(), y: LimbInt::one(), z: LimbInt::zero() }
    }
    fn affine(x: &LimbInt, y: &LimbInt) -> Self {
        Jacobian { x: x.clone(), y: y.clone(), z: LimbInt::one() }
    }
    fn is_infinity(&self) -> bool {
        self.z.is_zero()
    }
}

fn double(f: &mut Counter, a: &LimbInt, p: &Jacobian) -> Jacobian {
    if p.is_infinity() || p.y.is_zero() {
        return Jacobian::infinity();
    }
    let xx = f.sqr(&p.x);
    let yy = f.sqr(&p.y);
    let yyyy = f.sqr(&yy);
    let zz = f.sqr(&p.z);
    let s = f.mul(&p.x, &yy);
    let s = f.small(4, &s);
    let zzzz = f.sqr(&zz);
    let az4 = f.mul(a, &zzzz);
    let m = f.add(&f.small(3, &xx), &az4);
    let m2 = f.sqr(&m);
    let x3 = f.sub(&m2, &f.small(2, &s));
    let t = f.mul(&m, &f.sub(&s, &x3));
    let y3 = f.sub(&t, &f.small(8, &yyyy));
    let yz = f.mul(&p.y, &p.z);
    let z3 = f.small(2, &yz);
    Jacobian { x: x3, y: y3, z: z3 }
}

fn add(f: &mut Counter, a: &LimbInt, p: &Jacobian, q: &Jacobian) -> Jacobian {
    if p.is_infinity() {
        return q.clone();
    }
    if q.is_infinity() {
        return p.clone();
    }
    let z1z1 = f.sqr(&p.z);
    let z2z2 = f.sqr(&q.z);
    let u1 = f.mul(&p.x, &z2z2);
    let u2 = f.mul(&q.x, &z1z1);
    let t = f.mul(&p.y, &q.z);
    let s1 = f.mul(&t, &z2z2);
    let t = f.mul(&q.y, &p.z);
    let s2 = f.mul(&t, &z1z1);
    let h = f.sub(&u2, &u1);
    let r = f.sub(&s2, &s1);
    if h.is_zero() {
        return if r.is_zero() { double(f, a, p) } else { Jacobian::infinity() };
    }
    let hh = f.sqr(&h);
    let hhh = f.mul(&h, &hh);
    let v = f.mul(&u1, &hh);
    let r2 = f.sqr(&r);
    let x3 = f.sub(&f.sub(&r2, &hhh), &f.small(2, &v));
    let t = f.mul(&r, &f.sub(&v, &x3));
    let u = f.mul(&s1, &hhh);
    let y3 = f.sub(&t, &u);
    let zz = f.mul(&p.z, &q.z);
    let z3 = f.mul(&zz, &h);
    Jacobian { x: x3, y: y3, z: z3 }
}

fn scalar_mul(f: &mut Counter, a: &LimbInt, k: &LimbInt, p: &Jacobian) -> Jacobian {
    let mut acc = Jacobian::infinity();
    for i in (0..k.bits()).rev() {
        acc = double(f, a, &acc);
        if k.bit(i) {
            acc = add(f, a, &acc, p);
        }
    }
    acc
}

fn to_affine(f: &mut Counter, p: &Jacobian) -> Option<(LimbInt, LimbInt)> {
    if p.is_infinity() {
        return None;
    }
    let zi = f.inv(&p.z);
    let zi2 = f.sqr(&zi);
    let zi3 = f.mul(&zi2, &zi);
    Some((f.mul(&p.x, &zi2), f.mul(&p.y, &zi3)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EcdsaSignature {
    pub r: LimbInt,
    pub s: LimbInt,
}

impl EcdsaSignature {
    /// `r || s`, each padded to the scalar length.
    pub fn to_bytes(&self, curve: Curve) -> Vec<u8> {
        let n = curve.scalar_bytes();
        let mut out = self.r.to_be_bytes_padded(n).expect("r < n");
        out.extend(self.s.to_be_bytes_padded(n).expect("s < n"));
        out
    }

    pub fn from_bytes(curve: Curve, bytes: &[u8]) -> Result<Self, AceError> {
        let n = curve.scalar_bytes();
        if bytes.len() != 2 * n {
            return Err(AceError::SizeMismatch(format!("signature is {} bytes, expected {}", bytes.len(), 2 * n)));
        }
        Ok(EcdsaSignature { r: LimbInt::from_be_bytes(&bytes[..n]), s: LimbInt::from_be_bytes(&bytes[n..]) })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EcdsaOutput {
    Signature(EcdsaSignature),
    Verdict(Verdict),
}

#[derive(Debug, Clone)]
pub struct EcdsaKey {
    curve: Curve,
    secret: Option<LimbInt>,
    qx: LimbInt,
    qy: LimbInt,
}

impl EcdsaKey {
    pub fn from_secret(curve: Curve, secret: &[u8]) -> Result<Self, AceError> {
        let c = curve.params();
        let d = LimbInt::from_be_bytes(secret);
        if d.is_zero() || &d >= c.order.modulus() {
            return Err(AceError::InvalidKey("secret scalar outside [1, n)".into()));
        }
        let mut f = Counter::new(&c.field);
        let q = scalar_mul(&mut f, &c.a, &d, &Jacobian::affine(&c.gx, &c.gy));
        let (qx, qy) = to_affine(&mut f, &q).ok_or(AceError::InvalidPoint)?;
        Ok(EcdsaKey { curve, secret: Some(d), qx, qy })
    }

    /// Verification-only key; the point must lie on the curve.
    pub fn from_public(curve: Curve, qx: &[u8], qy: &[u8]) -> Result<Self, AceError> {
        let (qx, qy) = (LimbInt::from_be_bytes(qx), LimbInt::from_be_bytes(qy));
        if !curve.is_on_curve(&qx, &qy) {
            return Err(AceError::InvalidPoint);
        }
        Ok(EcdsaKey { curve, secret: None, qx, qy })
    }

    /// Derives a secret scalar from `seed` by hashing until it lands in `[1, n)`.
    pub fn from_seed(curve: Curve, seed: u64) -> Self {
        let d = derive_scalar(curve, &seed.to_be_bytes(), b"ecdsa-key");
        Self::from_secret(curve, &d.to_be_bytes()).expect("scalar in range")
    }

    pub fn curve(&self) -> Curve {
        self.curve
    }

    pub fn public_point(&self) -> (&LimbInt, &LimbInt) {
        (&self.qx, &self.qy)
    }

    /// Signs with an explicit nonce. Returns the signature and multiplication count.
    pub fn sign_with_nonce(&self, digest: &[u8], k: &LimbInt) -> Result<(Option<EcdsaSignature>, u64), AceError> {
        let c = self.curve.params();
        let d = self.secret.as_ref().ok_or_else(|| AceError::InvalidKey("no secret scalar".into()))?;
        let n = &c.order;
        if k.is_zero() || k >= n.modulus() {
            return Ok((None, 0));
        }
        let mut f = Counter::new(&c.field);
        let r_pt = scalar_mul(&mut f, &c.a, k, &Jacobian::affine(&c.gx, &c.gy));
        let (rx, _) = to_affine(&mut f, &r_pt).ok_or(AceError::InvalidPoint)?;
        let mut g = Counter::new(n);
        let r = n.reduce(&rx);
        if r.is_zero() {
            return Ok((None, f.muls));
        }
        let e = n.reduce(&digest_scalar(self.curve, digest));
        let kinv = g.inv(k);
        let rd = g.mul(&r, d);
        let s = g.mul(&kinv, &g.add(&e, &rd));
        let muls = f.muls + g.muls;
        if s.is_zero() {
            return Ok((None, muls));
        }
        Ok((Some(EcdsaSignature { r, s }), muls))
    }

    /// Deterministic signature with the nonce drawn from `seed` and the digest.
    pub fn sign(&self, digest: &[u8], seed: u64) -> Result<(EcdsaSignature, u64), AceError> {
        let mut total = 0;
        for attempt in 0u32.. {
            let mut tag = seed.to_be_bytes().to_vec();
            tag.extend_from_slice(&attempt.to_be_bytes());
            let k = derive_scalar(self.curve, &tag, digest);
            let (sig, muls) = self.sign_with_nonce(digest, &k)?;
            total += muls;
            if let Some(sig) = sig {
                return Ok((sig, total));
            }
        }
        unreachable!("nonce derivation is unbounded")
    }

    pub fn verify(&self, digest: &[u8], sig: &EcdsaSignature) -> (Verdict, u64) {
        let c = self.curve.params();
        let n = &c.order;
        let in_range = |v: &LimbInt| !v.is_zero() && v < n.modulus();
        if !in_range(&sig.r) || !in_range(&sig.s) {
            return (Verdict::Reject, 0);
        }
        let mut g = Counter::new(n);
        let e = n.reduce(&digest_scalar(self.curve, digest));
        let w = g.inv(&sig.s);
        let u1 = g.mul(&e, &w);
        let u2 = g.mul(&sig.r, &w);
        let mut f = Counter::new(&c.field);
        let p1 = scalar_mul(&mut f, &c.a, &u1, &Jacobian::affine(&c.gx, &c.gy));
        let p2 = scalar_mul(&mut f, &c.a, &u2, &Jacobian::affine(&self.qx, &self.qy));
        let sum = add(&mut f, &c.a, &p1, &p2);
        let verdict = match to_affine(&mut f, &sum) {
            Some((x, _)) if n.reduce(&x) == sig.r => Verdict::Accept,
            _ => Verdict::Reject,
        };
        (verdict, f.muls + g.muls)
    }
}

/// Leftmost order-length bits of the digest.
fn digest_scalar(curve: Curve, digest: &[u8]) -> LimbInt {
    let nbits = curve.order().bits();
    let e = LimbInt::from_be_bytes(digest);
    let dbits = 8 * digest.len();
    if dbits > nbits {
        e.shr(dbits - nbits)
    } else {
        e
    }
}

fn derive_scalar(curve: Curve, key: &[u8], data: &[u8]) -> LimbInt {
    let n = curve.order();
    for ctr in 0u32.. {
        let mut stream = Vec::new();
        let mut block = 0u32;
        while stream.len() < curve.scalar_bytes() {
            let mut msg = data.to_vec();
            msg.extend_from_slice(&ctr.to_be_bytes());
            msg.extend_from_slice(&block.to_be_bytes());
            stream.extend_from_slice(&hmac_sha256(key, &msg));
            block += 1;
        }
        stream.truncate(curve.scalar_bytes());
        let k = LimbInt::from_be_bytes(&stream);
        if !k.is_zero() && &k < n {
            return k;
        }
    }
    unreachable!("derivation is unbounded")
}

pub fn ecdsa_cycles(muls: u64, curve: Curve, calib: &Calibration) -> u64 {
    muls * calib.ace.modmul_cycles_per_word * curve.alu_words() as u64
}

/// Sign (nonce from `seed`) or verify `signature`.
pub fn ecdsa_op(
    key: &EcdsaKey,
    digest: &[u8],
    op: SignOp,
    signature: Option<&EcdsaSignature>,
    seed: u64,
    calib: &Calibration,
) -> Result<(EcdsaOutput, u64), AceError> {
    match op {
        SignOp::Sign => {
            let (sig, muls) = key.sign(digest, seed)?;
            Ok((EcdsaOutput::Signature(sig), ecdsa_cycles(muls, key.curve, calib)))
        }
        SignOp::Verify => {
            let sig = signature.ok_or_else(|| AceError::SizeMismatch("verify needs a signature".into()))?;
            let (v, muls) = key.verify(digest, sig);
            Ok((EcdsaOutput::Verdict(v), ecdsa_cycles(muls, key.curve, calib)))
        }
    }
}
