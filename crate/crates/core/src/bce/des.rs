//! Triple DES (EDE). Blocks are big-endian `u64`s, so standard bit `k`
//! (1-based, most significant first) sits at position `64 - k`.
//!
//! The expansion E feeds the right half into both 32-bit networks: the low
//! network emits the even 6-bit groups into bytes 0..3 and the high network
//! the odd groups into bytes 4..7. Round subkeys use the same byte layout.

use super::tables::des_sboxes;
use super::{CipherCore, Lane};
use crate::datapath::{route_benes, BenesConfig, CombinedBenes, SBoxTable};
use std::sync::OnceLock;

const IP: [usize; 64] = [
    58, 50, 42, 34, 26, 18, 10, 2, 60, 52, 44, 36, 28, 20, 12, 4, 62, 54, 46, 38, 30, 22, 14, 6,
    64, 56, 48, 40, 32, 24, 16, 8, 57, 49, 41, 33, 25, 17, 9, 1, 59, 51, 43, 35, 27, 19, 11, 3,
    61, 53, 45, 37, 29, 21, 13, 5, 63, 55, 47, 39, 31, 23, 15, 7,
];

const E: [usize; 48] = [
    32, 1, 2, 3, 4, 5, 4, 5, 6, 7, 8, 9, 8, 9, 10, 11, 12, 13, 12, 13, 14, 15, 16, 17, 16, 17,
    18, 19, 20, 21, 20, 21, 22, 23, 24, 25, 24, 25, 26, 27, 28, 29, 28, 29, 30, 31, 32, 1,
];

const P: [usize; 32] = [
    16, 7, 20, 21, 29, 12, 28, 17, 1, 15, 23, 26, 5, 18, 31, 10, 2, 8, 24, 14, 32, 27, 3, 9, 19,
    13, 30, 6, 22, 11, 4, 25,
];

const PC1: [usize; 56] = [
    57, 49, 41, 33, 25, 17, 9, 1, 58, 50, 42, 34, 26, 18, 10, 2, 59, 51, 43, 35, 27, 19, 11, 3,
    60, 52, 44, 36, 63, 55, 47, 39, 31, 23, 15, 7, 62, 54, 46, 38, 30, 22, 14, 6, 61, 53, 45, 37,
    29, 21, 13, 5, 28, 20, 12, 4,
];

const PC2: [usize; 48] = [
    14, 17, 11, 24, 1, 5, 3, 28, 15, 6, 21, 10, 23, 19, 12, 4, 26, 8, 16, 7, 27, 20, 13, 2, 41,
    52, 31, 37, 47, 55, 30, 40, 51, 45, 33, 48, 44, 49, 39, 56, 34, 53, 46, 42, 50, 36, 29, 32,
];

const KEY_SHIFTS: [u32; 16] = [1, 1, 2, 2, 2, 2, 2, 2, 1, 2, 2, 2, 2, 2, 2, 1];

/// Byte that carries 6-bit group `c` of an expanded half or subkey.
fn group_byte(c: usize) -> usize {
    if c % 2 == 0 {
        c / 2
    } else {
        4 + c / 2
    }
}

/// Fills unassigned outputs with the unused sources in ascending order.
fn complete(partial: &[Option<usize>]) -> Vec<usize> {
    let n = partial.len();
    let mut used = vec![false; n];
    for &p in partial.iter().flatten() {
        assert!(!used[p], "partial permutation repeats source {p}");
        used[p] = true;
    }
    let mut free = (0..n).filter(|&s| !used[s]);
    partial
        .iter()
        .map(|p| p.unwrap_or_else(|| free.next().expect("enough free sources")))
        .collect()
}

struct Networks {
    ip: CombinedBenes,
    fp: CombinedBenes,
    e_low: BenesConfig,
    e_high: BenesConfig,
    p: CombinedBenes,
    pc1: CombinedBenes,
    rot1: CombinedBenes,
    rot2: CombinedBenes,
    pc2: CombinedBenes,
    /// Wrapper tables indexed by a byte whose top two bits are ignored.
    sbox_low: [SBoxTable; 4],
    sbox_high: [SBoxTable; 4],
}

fn networks() -> &'static Networks {
    static N: OnceLock<Networks> = OnceLock::new();
    N.get_or_init(build_networks)
}

fn route64(perm: &[usize]) -> CombinedBenes {
    CombinedBenes::route(perm).expect("DES wiring is a permutation")
}

fn build_networks() -> Networks {
    let ip: Vec<usize> = (0..64).map(|i| 64 - IP[63 - i]).collect();
    let mut fp = vec![0usize; 64];
    for (i, &s) in ip.iter().enumerate() {
        fp[s] = i;
    }

    let mut e_low = vec![None; 32];
    let mut e_high = vec![None; 32];
    for c in 0..8 {
        let b = group_byte(c);
        for t in 0..6 {
            let src = 32 - E[6 * c + t];
            let pos = 8 * (b % 4) + 5 - t;
            if b < 4 {
                e_low[pos] = Some(src);
            } else {
                e_high[pos] = Some(src);
            }
        }
    }

    let mut p = vec![None; 64];
    for i in 1..=32 {
        let m = P[i - 1] - 1;
        let (c, t) = (m / 4, m % 4);
        p[32 - i] = Some(8 * group_byte(c) + 3 - t);
    }

    // Key register: bit k of C||D at position 64 - k; the low 8 positions carry no key bits.
    let mut pc1 = vec![None; 64];
    for k in 1..=56 {
        pc1[64 - k] = Some(64 - PC1[k - 1]);
    }
    let rot = |s: usize| -> Vec<usize> {
        let mut perm: Vec<usize> = (0..64).collect();
        for half in 0..2 {
            for k in 1..=28 {
                let src = (k - 1 + s) % 28 + 1;
                perm[64 - (28 * half + k)] = 64 - (28 * half + src);
            }
        }
        perm
    };
    let mut pc2 = vec![None; 64];
    for m in 0..48 {
        let (c, t) = (m / 6, m % 6);
        pc2[8 * group_byte(c) + 5 - t] = Some(64 - PC2[m]);
    }

    let boxes = des_sboxes();
    let wrap = |j: usize| SBoxTable::from_fn(|x| boxes[j][(x & 0x3F) as usize]);

    Networks {
        ip: route64(&ip),
        fp: route64(&fp),
        e_low: route_benes(&complete(&e_low)).expect("expansion wiring"),
        e_high: route_benes(&complete(&e_high)).expect("expansion wiring"),
        p: route64(&complete(&p)),
        pc1: route64(&complete(&pc1)),
        rot1: route64(&rot(1)),
        rot2: route64(&rot(2)),
        pc2: route64(&complete(&pc2)),
        sbox_low: [wrap(0), wrap(2), wrap(4), wrap(6)],
        sbox_high: [wrap(1), wrap(3), wrap(5), wrap(7)],
    }
}

fn subkeys(key: u64, lane: &mut Lane) -> [u64; 16] {
    let n = networks();
    let mut cd = lane.permute64(key, &n.pc1);
    let mut out = [0u64; 16];
    for (i, &s) in KEY_SHIFTS.iter().enumerate() {
        cd = lane.permute64(cd, if s == 1 { &n.rot1 } else { &n.rot2 });
        out[i] = lane.permute64(cd, &n.pc2);
    }
    out
}

fn feistel(lane: &mut Lane, r: u64, k: u64) -> u64 {
    let n = networks();
    let dup = r | (r << 32);
    let x = lane.permute_pair(dup, &n.e_low, &n.e_high);
    let x = lane.xor(x, k, 64);
    let lo = n.sbox_low.each_ref();
    let hi = n.sbox_high.each_ref();
    let s_lo = lane.sbox(x & 0xFFFF_FFFF, &lo, 32);
    let s_hi = lane.sbox(x >> 32, &hi, 32);
    lane.permute64(s_lo | (s_hi << 32), &n.p) & 0xFFFF_FFFF
}

fn des_block(lane: &mut Lane, block: u64, ks: &[u64; 16], decrypt: bool) -> u64 {
    let n = networks();
    let x = lane.permute64(block, &n.ip);
    let (mut l, mut r) = (x >> 32, x & 0xFFFF_FFFF);
    for i in 0..16 {
        lane.begin_round();
        let k = if decrypt { ks[15 - i] } else { ks[i] };
        let f = feistel(lane, r, k);
        let nr = lane.xor(l, f, 32);
        l = r;
        r = nr;
        lane.end_round();
    }
    lane.permute64((r << 32) | l, &n.fp)
}

pub(crate) struct TripleDes {
    k1: [u64; 16],
    k2: [u64; 16],
    k3: [u64; 16],
}

impl TripleDes {
    pub(crate) fn new(key: &[u8], lane: &mut Lane) -> Self {
        let part = |i: usize| u64::from_be_bytes(key[8 * i..8 * i + 8].try_into().unwrap());
        let k1 = subkeys(part(0), lane);
        let k2 = subkeys(part(1), lane);
        let k3 = if key.len() == 24 { subkeys(part(2), lane) } else { k1 };
        TripleDes { k1, k2, k3 }
    }
}

impl CipherCore for TripleDes {
    fn encrypt(&self, lane: &mut Lane, block: &mut [u8]) {
        let mut x = u64::from_be_bytes(block[..8].try_into().unwrap());
        x = des_block(lane, x, &self.k1, false);
        x = des_block(lane, x, &self.k2, true);
        x = des_block(lane, x, &self.k3, false);
        block.copy_from_slice(&x.to_be_bytes());
    }

    fn decrypt(&self, lane: &mut Lane, block: &mut [u8]) {
        let mut x = u64::from_be_bytes(block[..8].try_into().unwrap());
        x = des_block(lane, x, &self.k3, true);
        x = des_block(lane, x, &self.k2, false);
        x = des_block(lane, x, &self.k1, true);
        block.copy_from_slice(&x.to_be_bytes());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_des_known_answer() {
        // Classic worked example: key 133457799BBCDFF1, plaintext 0123456789ABCDEF.
        let mut lane = Lane::new();
        let ks = subkeys(0x1334_5779_9BBC_DFF1, &mut lane);
        let c = des_block(&mut lane, 0x0123_4567_89AB_CDEF, &ks, false);
        assert_eq!(c, 0x85E8_1354_0F0A_B405);
        assert_eq!(des_block(&mut lane, c, &ks, true), 0x0123_4567_89AB_CDEF);
    }
}
