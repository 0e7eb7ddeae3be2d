//! AES on four 32-bit row words. Byte `c` of row word `r` is state byte `r + 4c`.

use super::tables::{aes_inv_sbox, aes_sbox};
use super::{CipherCore, Lane};
use crate::datapath::gf_mul;

const POLY: u16 = 0x11B;

pub(crate) struct Aes {
    /// Round keys as row words, one set per round.
    round_keys: Vec<[u64; 4]>,
}

impl Aes {
    pub(crate) fn new(key: &[u8], lane: &mut Lane) -> Self {
        let nk = key.len() / 4;
        let nr = nk + 6;
        let sbox = aes_sbox();
        // Column words, byte 0 in the low bits.
        let mut w: Vec<u64> = key
            .chunks(4)
            .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]) as u64)
            .collect();
        let mut rcon = 1u8;
        for i in nk..4 * (nr + 1) {
            let mut t = w[i - 1];
            if i % nk == 0 {
                t = lane.rotr(t, 8, 32);
                t = lane.sbox(t, &[sbox; 4], 32);
                t = lane.xor(t, rcon as u64, 32);
                rcon = gf_mul(rcon, 2, POLY);
            } else if nk > 6 && i % nk == 4 {
                t = lane.sbox(t, &[sbox; 4], 32);
            }
            let v = lane.xor(w[i - nk], t, 32);
            w.push(v);
        }
        let round_keys = (0..=nr)
            .map(|r| {
                let mut rows = [0u64; 4];
                for c in 0..4 {
                    let col = w[4 * r + c];
                    for (row, slot) in rows.iter_mut().enumerate() {
                        *slot |= ((col >> (8 * row)) & 0xFF) << (8 * c);
                    }
                }
                rows
            })
            .collect();
        Aes { round_keys }
    }

    fn rounds(&self) -> usize {
        self.round_keys.len() - 1
    }
}

fn load(block: &[u8]) -> [u64; 4] {
    let mut s = [0u64; 4];
    for (i, &b) in block.iter().enumerate() {
        s[i % 4] |= (b as u64) << (8 * (i / 4));
    }
    s
}

fn store(s: &[u64; 4], block: &mut [u8]) {
    for (i, b) in block.iter_mut().enumerate() {
        *b = (s[i % 4] >> (8 * (i / 4))) as u8;
    }
}

fn add_round_key(lane: &mut Lane, s: &mut [u64; 4], k: &[u64; 4]) {
    for r in 0..4 {
        s[r] = lane.xor(s[r], k[r], 32);
    }
}

fn sub_bytes(lane: &mut Lane, s: &mut [u64; 4], inverse: bool) {
    let t = if inverse { aes_inv_sbox() } else { aes_sbox() };
    for row in s.iter_mut() {
        *row = lane.sbox(*row, &[t; 4], 32);
    }
}

fn shift_rows(lane: &mut Lane, s: &mut [u64; 4], inverse: bool) {
    for r in 1..4 {
        s[r] = if inverse {
            lane.rotl(s[r], 8 * r as u32, 32)
        } else {
            lane.rotr(s[r], 8 * r as u32, 32)
        };
    }
}

fn mix_columns(lane: &mut Lane, s: &mut [u64; 4]) {
    let a = *s;
    let d: [u64; 4] = std::array::from_fn(|i| lane.gf_mul_bytes(a[i], 2, 32, POLY));
    let e: [u64; 4] = std::array::from_fn(|i| lane.gf_mul_bytes(a[i], 3, 32, POLY));
    for i in 0..4 {
        let t = lane.xor(d[i], e[(i + 1) % 4], 32);
        let t = lane.xor(t, a[(i + 2) % 4], 32);
        s[i] = lane.xor(t, a[(i + 3) % 4], 32);
    }
}

fn inv_mix_columns(lane: &mut Lane, s: &mut [u64; 4]) {
    let a = *s;
    const COEF: [u8; 4] = [14, 11, 13, 9];
    let mut out = [0u64; 4];
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0u64;
        for j in 0..4 {
            let p = lane.gf_mul_bytes(a[(i + j) % 4], COEF[j], 32, POLY);
            acc = if j == 0 { p } else { lane.xor(acc, p, 32) };
        }
        *o = acc;
    }
    *s = out;
}

impl CipherCore for Aes {
    fn encrypt(&self, lane: &mut Lane, block: &mut [u8]) {
        let nr = self.rounds();
        let mut s = load(block);
        add_round_key(lane, &mut s, &self.round_keys[0]);
        for r in 1..=nr {
            lane.begin_round();
            sub_bytes(lane, &mut s, false);
            shift_rows(lane, &mut s, false);
            if r != nr {
                mix_columns(lane, &mut s);
            }
            add_round_key(lane, &mut s, &self.round_keys[r]);
            lane.end_round();
        }
        store(&s, block);
    }

    fn decrypt(&self, lane: &mut Lane, block: &mut [u8]) {
        let nr = self.rounds();
        let mut s = load(block);
        add_round_key(lane, &mut s, &self.round_keys[nr]);
        for r in (0..nr).rev() {
            lane.begin_round();
            shift_rows(lane, &mut s, true);
            sub_bytes(lane, &mut s, true);
            add_round_key(lane, &mut s, &self.round_keys[r]);
            if r != 0 {
                inv_mix_columns(lane, &mut s);
            }
            lane.end_round();
        }
        store(&s, block);
    }
}
