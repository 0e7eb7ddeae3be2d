//! Serpent in bitsliced form over four 32-bit words.
//!
//! The S-box layer transposes the slices into nibbles with the permutation
//! unit, substitutes two nibbles per table byte, and transposes back.

use super::{CipherCore, Lane};
use crate::datapath::{CombinedBenes, SBoxTable};
use std::sync::OnceLock;

const SBOXES: [[u8; 16]; 8] = [
    [3, 8, 15, 1, 10, 6, 5, 11, 14, 13, 4, 2, 7, 0, 9, 12],
    [15, 12, 2, 7, 9, 0, 5, 10, 1, 11, 14, 8, 6, 13, 3, 4],
    [8, 6, 7, 9, 3, 12, 10, 15, 13, 1, 14, 4, 0, 11, 5, 2],
    [0, 15, 11, 8, 12, 9, 6, 3, 13, 1, 2, 4, 10, 7, 5, 14],
    [1, 15, 8, 3, 12, 0, 11, 6, 2, 5, 4, 10, 9, 14, 7, 13],
    [15, 5, 2, 11, 4, 10, 9, 12, 0, 3, 14, 8, 13, 6, 7, 1],
    [7, 2, 12, 5, 8, 4, 6, 11, 14, 9, 1, 15, 13, 3, 10, 0],
    [1, 13, 15, 0, 14, 8, 2, 11, 7, 4, 12, 10, 9, 3, 5, 6],
];

const PHI: u64 = 0x9e37_79b9;

struct Wiring {
    /// Pairs slice bits `j` of the two words in a 64-bit register.
    pair: CombinedBenes,
    pair_inv: CombinedBenes,
    /// Interleaves two pair groups into nibbles.
    nibble: CombinedBenes,
    nibble_inv: CombinedBenes,
    forward: [SBoxTable; 8],
    inverse: [SBoxTable; 8],
}

fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

fn wiring() -> &'static Wiring {
    static W: OnceLock<Wiring> = OnceLock::new();
    W.get_or_init(|| {
        let mut pair = vec![0usize; 64];
        for j in 0..32 {
            let base = if j < 16 { 2 * j } else { 32 + 2 * (j - 16) };
            pair[base] = j;
            pair[base + 1] = 32 + j;
        }
        let mut nibble = vec![0usize; 64];
        for j in 0..16 {
            nibble[4 * j] = 2 * j;
            nibble[4 * j + 1] = 2 * j + 1;
            nibble[4 * j + 2] = 32 + 2 * j;
            nibble[4 * j + 3] = 33 + 2 * j;
        }
        let route = |p: &[usize]| CombinedBenes::route(p).expect("transpose wiring");
        let dual = |s: [u8; 16]| SBoxTable::from_fn(|b| s[(b & 15) as usize] | (s[(b >> 4) as usize] << 4));
        let inv_box = |s: [u8; 16]| {
            let mut r = [0u8; 16];
            for (i, &v) in s.iter().enumerate() {
                r[v as usize] = i as u8;
            }
            r
        };
        Wiring {
            pair: route(&pair),
            pair_inv: route(&invert(&pair)),
            nibble: route(&nibble),
            nibble_inv: route(&invert(&nibble)),
            forward: SBOXES.map(dual),
            inverse: SBOXES.map(|s| dual(inv_box(s))),
        }
    })
}

/// Joins the low halves of `a` and `b`, then the high halves.
fn interleave_halves(lane: &mut Lane, a: u64, b: u64) -> (u64, u64) {
    let a_lo = lane.shl(a, 32, 64);
    let a_lo = lane.shr(a_lo, 32, 64);
    let b_lo = lane.shl(b, 32, 64);
    let lo = lane.xor(a_lo, b_lo, 64);
    let a_hi = lane.shr(a, 32, 64);
    let b_hi = lane.shr(b, 32, 64);
    let b_hi = lane.shl(b_hi, 32, 64);
    let hi = lane.xor(a_hi, b_hi, 64);
    (lo, hi)
}

fn sbox_layer(lane: &mut Lane, x: [u64; 4], which: usize, inverse: bool) -> [u64; 4] {
    let wr = wiring();
    let table = if inverse { &wr.inverse[which] } else { &wr.forward[which] };
    let pa = lane.permute64(x[0] | (x[1] << 32), &wr.pair);
    let pb = lane.permute64(x[2] | (x[3] << 32), &wr.pair);
    let (c1, c2) = interleave_halves(lane, pa, pb);
    let mut subbed = [0u64; 2];
    for (slot, c) in subbed.iter_mut().zip([c1, c2]) {
        let q = lane.permute64(c, &wr.nibble);
        let lo = lane.sbox(q & 0xFFFF_FFFF, &[table; 4], 32);
        let hi = lane.sbox(q >> 32, &[table; 4], 32);
        *slot = lane.permute64(lo | (hi << 32), &wr.nibble_inv);
    }
    let (pa, pb) = interleave_halves(lane, subbed[0], subbed[1]);
    let a = lane.permute64(pa, &wr.pair_inv);
    let b = lane.permute64(pb, &wr.pair_inv);
    [a & 0xFFFF_FFFF, a >> 32, b & 0xFFFF_FFFF, b >> 32]
}

fn linear(lane: &mut Lane, x: &mut [u64; 4]) {
    x[0] = lane.rotl(x[0], 13, 32);
    x[2] = lane.rotl(x[2], 3, 32);
    let t = lane.xor(x[1], x[0], 32);
    x[1] = lane.xor(t, x[2], 32);
    let s = lane.shl(x[0], 3, 32);
    let t = lane.xor(x[3], x[2], 32);
    x[3] = lane.xor(t, s, 32);
    x[1] = lane.rotl(x[1], 1, 32);
    x[3] = lane.rotl(x[3], 7, 32);
    let t = lane.xor(x[0], x[1], 32);
    x[0] = lane.xor(t, x[3], 32);
    let s = lane.shl(x[1], 7, 32);
    let t = lane.xor(x[2], x[3], 32);
    x[2] = lane.xor(t, s, 32);
    x[0] = lane.rotl(x[0], 5, 32);
    x[2] = lane.rotl(x[2], 22, 32);
}

fn linear_inv(lane: &mut Lane, x: &mut [u64; 4]) {
    x[2] = lane.rotr(x[2], 22, 32);
    x[0] = lane.rotr(x[0], 5, 32);
    let s = lane.shl(x[1], 7, 32);
    let t = lane.xor(x[2], x[3], 32);
    x[2] = lane.xor(t, s, 32);
    let t = lane.xor(x[0], x[1], 32);
    x[0] = lane.xor(t, x[3], 32);
    x[3] = lane.rotr(x[3], 7, 32);
    x[1] = lane.rotr(x[1], 1, 32);
    let s = lane.shl(x[0], 3, 32);
    let t = lane.xor(x[3], x[2], 32);
    x[3] = lane.xor(t, s, 32);
    let t = lane.xor(x[1], x[0], 32);
    x[1] = lane.xor(t, x[2], 32);
    x[2] = lane.rotr(x[2], 3, 32);
    x[0] = lane.rotr(x[0], 13, 32);
}

fn add_key(lane: &mut Lane, x: &mut [u64; 4], k: &[u64; 4]) {
    for i in 0..4 {
        x[i] = lane.xor(x[i], k[i], 32);
    }
}

pub(crate) struct Serpent {
    keys: [[u64; 4]; 33],
}

impl Serpent {
    pub(crate) fn new(key: &[u8], lane: &mut Lane) -> Self {
        let mut padded = [0u8; 32];
        padded[..key.len()].copy_from_slice(key);
        if key.len() < 32 {
            padded[key.len()] = 1;
        }
        let mut w: Vec<u64> = padded
            .chunks(4)
            .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]) as u64)
            .collect();
        for i in 0..132usize {
            let j = i + 8;
            let t = lane.xor(w[j - 8], w[j - 5], 32);
            let t = lane.xor(t, w[j - 3], 32);
            let t = lane.xor(t, w[j - 1], 32);
            let t = lane.xor(t, PHI ^ i as u64, 32);
            let v = lane.rotl(t, 11, 32);
            w.push(v);
        }
        let mut keys = [[0u64; 4]; 33];
        for (i, k) in keys.iter_mut().enumerate() {
            let pre = [w[8 + 4 * i], w[9 + 4 * i], w[10 + 4 * i], w[11 + 4 * i]];
            *k = sbox_layer(lane, pre, (35 - i) % 8, false);
        }
        Serpent { keys }
    }
}

fn load(block: &[u8]) -> [u64; 4] {
    std::array::from_fn(|i| u32::from_le_bytes(block[4 * i..4 * i + 4].try_into().unwrap()) as u64)
}

fn store(x: &[u64; 4], block: &mut [u8]) {
    for i in 0..4 {
        block[4 * i..4 * i + 4].copy_from_slice(&(x[i] as u32).to_le_bytes());
    }
}

impl CipherCore for Serpent {
    fn encrypt(&self, lane: &mut Lane, block: &mut [u8]) {
        let mut x = load(block);
        for i in 0..32 {
            lane.begin_round();
            add_key(lane, &mut x, &self.keys[i]);
            x = sbox_layer(lane, x, i % 8, false);
            if i < 31 {
                linear(lane, &mut x);
            } else {
                add_key(lane, &mut x, &self.keys[32]);
            }
            lane.end_round();
        }
        store(&x, block);
    }

    fn decrypt(&self, lane: &mut Lane, block: &mut [u8]) {
        let mut x = load(block);
        for i in (0..32).rev() {
            lane.begin_round();
            if i == 31 {
                add_key(lane, &mut x, &self.keys[32]);
            } else {
                linear_inv(lane, &mut x);
            }
            x = sbox_layer(lane, x, i % 8, true);
            add_key(lane, &mut x, &self.keys[i]);
            lane.end_round();
        }
        store(&x, block);
    }
}
