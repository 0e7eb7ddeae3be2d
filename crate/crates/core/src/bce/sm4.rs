//! SM4 on four big-endian 32-bit words.

use super::tables::sm4_sbox;
use super::{CipherCore, Lane};

const FK: [u64; 4] = [0xa3b1_bac6, 0x56aa_3350, 0x677d_9197, 0xb270_22dc];

fn ck(i: usize) -> u64 {
    (0..4).fold(0u64, |acc, j| (acc << 8) | (((4 * i + j) * 7) % 256) as u64)
}

/// Substitution followed by the linear map with the given rotation amounts.
fn t_transform(lane: &mut Lane, x: u64, rotations: &[u32]) -> u64 {
    let s = sm4_sbox();
    let b = lane.sbox(x, &[s; 4], 32);
    let mut acc = b;
    for &r in rotations {
        let t = lane.rotl(b, r, 32);
        acc = lane.xor(acc, t, 32);
    }
    acc
}

pub(crate) struct Sm4 {
    rk: [u64; 32],
}

impl Sm4 {
    pub(crate) fn new(key: &[u8], lane: &mut Lane) -> Self {
        let mut k: Vec<u64> = (0..4)
            .map(|i| {
                let mk = u32::from_be_bytes(key[4 * i..4 * i + 4].try_into().unwrap()) as u64;
                lane.xor(mk, FK[i], 32)
            })
            .collect();
        let mut rk = [0u64; 32];
        for (i, slot) in rk.iter_mut().enumerate() {
            let t = lane.xor(k[i + 1], k[i + 2], 32);
            let t = lane.xor(t, k[i + 3], 32);
            let t = lane.xor(t, ck(i), 32);
            let t = t_transform(lane, t, &[13, 23]);
            *slot = lane.xor(k[i], t, 32);
            k.push(*slot);
        }
        Sm4 { rk }
    }

    fn crypt(&self, lane: &mut Lane, block: &mut [u8], reverse: bool) {
        let mut x: [u64; 4] =
            std::array::from_fn(|i| u32::from_be_bytes(block[4 * i..4 * i + 4].try_into().unwrap()) as u64);
        for i in 0..32 {
            lane.begin_round();
            let k = if reverse { self.rk[31 - i] } else { self.rk[i] };
            let t = lane.xor(x[1], x[2], 32);
            let t = lane.xor(t, x[3], 32);
            let t = lane.xor(t, k, 32);
            let t = t_transform(lane, t, &[2, 10, 18, 24]);
            let n = lane.xor(x[0], t, 32);
            x = [x[1], x[2], x[3], n];
            lane.end_round();
        }
        for i in 0..4 {
            block[4 * i..4 * i + 4].copy_from_slice(&(x[3 - i] as u32).to_be_bytes());
        }
    }
}

impl CipherCore for Sm4 {
    fn encrypt(&self, lane: &mut Lane, block: &mut [u8]) {
        self.crypt(lane, block, false);
    }

    fn decrypt(&self, lane: &mut Lane, block: &mut [u8]) {
        self.crypt(lane, block, true);
    }
}
