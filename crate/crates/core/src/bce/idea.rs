//! IDEA over 16-bit words. Multiplication is modulo 2^16 + 1 with 0 standing for 2^16.

use super::{CipherCore, Lane};

const MUL_MOD: u64 = 65537;

pub(crate) struct Idea {
    enc: [u64; 52],
    dec: [u64; 52],
}

fn mul(lane: &mut Lane, a: u64, b: u64) -> u64 {
    lane.mulmod(a, b, 16, MUL_MOD, true)
}

/// Multiplicative inverse modulo 2^16 + 1 by exponentiation to p - 2.
fn mul_inv(lane: &mut Lane, x: u64) -> u64 {
    let mut acc = 1u64;
    let mut base = x;
    let mut e = MUL_MOD - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(lane, acc, base);
        }
        base = mul(lane, base, base);
        e >>= 1;
    }
    acc
}

/// Additive inverse modulo 2^16, as multiplication by 2^16 - 1.
fn add_inv(lane: &mut Lane, x: u64) -> u64 {
    lane.mulmod(x, 0xFFFF, 16, 1 << 16, false)
}

impl Idea {
    pub(crate) fn new(key: &[u8], lane: &mut Lane) -> Self {
        let mut k = u128::from_be_bytes(key.try_into().expect("16-byte key"));
        let mut enc = [0u64; 52];
        for (i, slot) in enc.iter_mut().enumerate() {
            if i > 0 && i % 8 == 0 {
                k = k.rotate_left(25);
            }
            *slot = ((k >> (112 - 16 * (i % 8))) & 0xFFFF) as u64;
        }

        let mut dec = [0u64; 52];
        for r in 0..9 {
            let src = 6 * (8 - r);
            let dst = 6 * r;
            dec[dst] = mul_inv(lane, enc[src]);
            let (a, b) = if r == 0 || r == 8 { (1, 2) } else { (2, 1) };
            dec[dst + 1] = add_inv(lane, enc[src + a]);
            dec[dst + 2] = add_inv(lane, enc[src + b]);
            dec[dst + 3] = mul_inv(lane, enc[src + 3]);
            if r < 8 {
                dec[dst + 4] = enc[src - 2];
                dec[dst + 5] = enc[src - 1];
            }
        }
        Idea { enc, dec }
    }
}

fn crypt(lane: &mut Lane, block: &mut [u8], k: &[u64; 52]) {
    let mut x: [u64; 4] =
        std::array::from_fn(|i| u16::from_be_bytes([block[2 * i], block[2 * i + 1]]) as u64);
    for r in 0..8 {
        lane.begin_round();
        let k = &k[6 * r..6 * r + 6];
        let a = mul(lane, x[0], k[0]);
        let b = lane.add(x[1], k[1], 16);
        let c = lane.add(x[2], k[2], 16);
        let d = mul(lane, x[3], k[3]);
        let e = lane.xor(a, c, 16);
        let f = lane.xor(b, d, 16);
        let e = mul(lane, e, k[4]);
        let f = lane.add(f, e, 16);
        let f = mul(lane, f, k[5]);
        let e = lane.add(e, f, 16);
        x[0] = lane.xor(a, f, 16);
        x[1] = lane.xor(c, f, 16);
        x[2] = lane.xor(b, e, 16);
        x[3] = lane.xor(d, e, 16);
        lane.end_round();
    }
    let y = [
        mul(lane, x[0], k[48]),
        lane.add(x[2], k[49], 16),
        lane.add(x[1], k[50], 16),
        mul(lane, x[3], k[51]),
    ];
    for (i, v) in y.iter().enumerate() {
        block[2 * i..2 * i + 2].copy_from_slice(&(*v as u16).to_be_bytes());
    }
}

impl CipherCore for Idea {
    fn encrypt(&self, lane: &mut Lane, block: &mut [u8]) {
        crypt(lane, block, &self.enc);
    }

    fn decrypt(&self, lane: &mut Lane, block: &mut [u8]) {
        crypt(lane, block, &self.dec);
    }
}
