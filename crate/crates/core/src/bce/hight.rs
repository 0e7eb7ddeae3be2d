//! HIGHT: a 64-bit generalized Feistel network on bytes.
//!
//! Decryption computes `a - b` as `a + b * 255 mod 256` on the arithmetic unit.

use super::{CipherCore, Lane};

pub(crate) struct Hight {
    wk: [u64; 8],
    sk: [u64; 128],
}

fn f0(lane: &mut Lane, x: u64) -> u64 {
    let a = lane.rotl(x, 1, 8);
    let b = lane.rotl(x, 2, 8);
    let c = lane.rotl(x, 7, 8);
    let t = lane.xor(a, b, 8);
    lane.xor(t, c, 8)
}

fn f1(lane: &mut Lane, x: u64) -> u64 {
    let a = lane.rotl(x, 3, 8);
    let b = lane.rotl(x, 4, 8);
    let c = lane.rotl(x, 6, 8);
    let t = lane.xor(a, b, 8);
    lane.xor(t, c, 8)
}

fn sub(lane: &mut Lane, a: u64, b: u64) -> u64 {
    let neg = lane.mulmod(b, 0xFF, 8, 256, false);
    lane.add(a, neg, 8)
}

impl Hight {
    pub(crate) fn new(key: &[u8], lane: &mut Lane) -> Self {
        // Master key bytes MK0..MK15, MK0 being the last byte of the key string.
        let mk: Vec<u64> = key.iter().rev().map(|&b| b as u64).collect();
        let mut wk = [0u64; 8];
        for i in 0..4 {
            wk[i] = mk[i + 12];
            wk[i + 4] = mk[i];
        }
        let mut delta = [0u64; 128];
        let mut s = 0x5Au64;
        for d in delta.iter_mut() {
            *d = s;
            let bit = (s ^ (s >> 3)) & 1;
            s = (s >> 1) | (bit << 6);
        }
        let mut sk = [0u64; 128];
        for i in 0..8 {
            for j in 0..8 {
                let m = (j + 8 - i) % 8;
                sk[16 * i + j] = lane.add(mk[m], delta[16 * i + j], 8);
                sk[16 * i + j + 8] = lane.add(mk[m + 8], delta[16 * i + j + 8], 8);
            }
        }
        Hight { wk, sk }
    }
}

/// Block bytes P0..P7, P0 being the last byte of the block string.
fn load(block: &[u8]) -> [u64; 8] {
    std::array::from_fn(|i| block[7 - i] as u64)
}

fn store(x: &[u64; 8], block: &mut [u8]) {
    for i in 0..8 {
        block[7 - i] = x[i] as u8;
    }
}

impl CipherCore for Hight {
    fn encrypt(&self, lane: &mut Lane, block: &mut [u8]) {
        let (wk, sk) = (&self.wk, &self.sk);
        let mut x = load(block);
        x[0] = lane.add(x[0], wk[0], 8);
        x[2] = lane.xor(x[2], wk[1], 8);
        x[4] = lane.add(x[4], wk[2], 8);
        x[6] = lane.xor(x[6], wk[3], 8);
        for i in 0..32 {
            lane.begin_round();
            let k = &sk[4 * i..4 * i + 4];
            let t = f0(lane, x[6]);
            let t = lane.add(t, k[3], 8);
            let n0 = lane.xor(x[7], t, 8);
            let t = f1(lane, x[0]);
            let t = lane.xor(t, k[0], 8);
            let n2 = lane.add(x[1], t, 8);
            let t = f0(lane, x[2]);
            let t = lane.add(t, k[1], 8);
            let n4 = lane.xor(x[3], t, 8);
            let t = f1(lane, x[4]);
            let t = lane.xor(t, k[2], 8);
            let n6 = lane.add(x[5], t, 8);
            x = if i < 31 {
                [n0, x[0], n2, x[2], n4, x[4], n6, x[6]]
            } else {
                [x[0], n2, x[2], n4, x[4], n6, x[6], n0]
            };
            lane.end_round();
        }
        x[0] = lane.add(x[0], wk[4], 8);
        x[2] = lane.xor(x[2], wk[5], 8);
        x[4] = lane.add(x[4], wk[6], 8);
        x[6] = lane.xor(x[6], wk[7], 8);
        store(&x, block);
    }

    fn decrypt(&self, lane: &mut Lane, block: &mut [u8]) {
        let (wk, sk) = (&self.wk, &self.sk);
        let mut x = load(block);
        x[0] = sub(lane, x[0], wk[4]);
        x[2] = lane.xor(x[2], wk[5], 8);
        x[4] = sub(lane, x[4], wk[6]);
        x[6] = lane.xor(x[6], wk[7], 8);
        for i in (0..32).rev() {
            lane.begin_round();
            let k = &sk[4 * i..4 * i + 4];
            // Recover the pre-round state: odd bytes came from the even bytes of the prior state.
            let (p0, p2, p4, p6, n0, n2, n4, n6) = if i < 31 {
                (x[1], x[3], x[5], x[7], x[0], x[2], x[4], x[6])
            } else {
                (x[0], x[2], x[4], x[6], x[7], x[1], x[3], x[5])
            };
            let t = f0(lane, p6);
            let t = lane.add(t, k[3], 8);
            let p7 = lane.xor(n0, t, 8);
            let t = f1(lane, p0);
            let t = lane.xor(t, k[0], 8);
            let p1 = sub(lane, n2, t);
            let t = f0(lane, p2);
            let t = lane.add(t, k[1], 8);
            let p3 = lane.xor(n4, t, 8);
            let t = f1(lane, p4);
            let t = lane.xor(t, k[2], 8);
            let p5 = sub(lane, n6, t);
            x = [p0, p1, p2, p3, p4, p5, p6, p7];
            lane.end_round();
        }
        x[0] = sub(lane, x[0], wk[0]);
        x[2] = lane.xor(x[2], wk[1], 8);
        x[4] = sub(lane, x[4], wk[2]);
        x[6] = lane.xor(x[6], wk[3], 8);
        store(&x, block);
    }
}
