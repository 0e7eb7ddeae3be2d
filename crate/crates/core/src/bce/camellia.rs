//! Camellia with 64-bit halves. Byte `y1` of the F-function is the most significant.

use super::tables::camellia_sboxes;
use super::{CipherCore, Lane};

const SIGMA: [u64; 6] = [
    0xa09e_667f_3bcc_908b,
    0xb67a_e858_4caa_73b2,
    0xc6ef_372f_e94f_82be,
    0x54ff_53a5_f1d3_6f1c,
    0x10e5_27fa_de68_2d1d,
    0xb056_88c2_b3e6_c1fd,
];

/// Output byte `z_i` as the XOR of the listed `y_j` (1-based).
const P_ROWS: [&[usize]; 8] = [
    &[1, 3, 4, 6, 7, 8],
    &[1, 2, 4, 5, 7, 8],
    &[1, 2, 3, 5, 6, 8],
    &[2, 3, 4, 5, 6, 7],
    &[1, 2, 6, 7, 8],
    &[2, 3, 5, 7, 8],
    &[3, 4, 5, 6, 8],
    &[1, 4, 5, 6, 7],
];

fn f(lane: &mut Lane, x: u64, k: u64) -> u64 {
    let [s1, s2, s3, s4] = camellia_sboxes();
    let x = lane.xor(x, k, 64);
    // Table unit bytes are least significant first: y4..y1 then y8..y5.
    let hi = lane.sbox(x >> 32, &[s4, s3, s2, s1], 32);
    let lo = lane.sbox(x & 0xFFFF_FFFF, &[s1, s4, s3, s2], 32);
    let y = (hi << 32) | lo;
    let byte = |j: usize| (y >> (8 * (8 - j))) & 0xFF;
    let mut z = 0u64;
    for (i, row) in P_ROWS.iter().enumerate() {
        let mut acc = byte(row[0]);
        for &j in &row[1..] {
            acc = lane.xor(acc, byte(j), 8);
        }
        z |= acc << (8 * (7 - i));
    }
    z
}

fn fl(lane: &mut Lane, x: u64, k: u64) -> u64 {
    let (mut xl, mut xr) = (x >> 32, x & 0xFFFF_FFFF);
    let (kl, kr) = (k >> 32, k & 0xFFFF_FFFF);
    let t = lane.and(xl, kl, 32);
    let t = lane.rotl(t, 1, 32);
    xr = lane.xor(xr, t, 32);
    let t = lane.or(xr, kr, 32);
    xl = lane.xor(xl, t, 32);
    (xl << 32) | xr
}

fn fl_inv(lane: &mut Lane, y: u64, k: u64) -> u64 {
    let (mut yl, mut yr) = (y >> 32, y & 0xFFFF_FFFF);
    let (kl, kr) = (k >> 32, k & 0xFFFF_FFFF);
    let t = lane.or(yr, kr, 32);
    yl = lane.xor(yl, t, 32);
    let t = lane.and(yl, kl, 32);
    let t = lane.rotl(t, 1, 32);
    yr = lane.xor(yr, t, 32);
    (yl << 32) | yr
}

fn halves(x: u128, rot: u32) -> (u64, u64) {
    let r = x.rotate_left(rot);
    ((r >> 64) as u64, r as u64)
}

pub(crate) struct Camellia {
    kw: [u64; 4],
    k: Vec<u64>,
    ke: Vec<u64>,
}

impl Camellia {
    pub(crate) fn new(key: &[u8], lane: &mut Lane) -> Self {
        let kl = u128::from_be_bytes(key[..16].try_into().unwrap());
        let kr = match key.len() {
            16 => 0u128,
            24 => {
                let r = u64::from_be_bytes(key[16..24].try_into().unwrap());
                ((r as u128) << 64) | (!r) as u128
            }
            _ => u128::from_be_bytes(key[16..32].try_into().unwrap()),
        };
        let x = kl ^ kr;
        let (mut d1, mut d2) = ((x >> 64) as u64, x as u64);
        let t = f(lane, d1, SIGMA[0]);
        d2 = lane.xor(d2, t, 64);
        let t = f(lane, d2, SIGMA[1]);
        d1 = lane.xor(d1, t, 64);
        d1 = lane.xor(d1, (kl >> 64) as u64, 64);
        d2 = lane.xor(d2, kl as u64, 64);
        let t = f(lane, d1, SIGMA[2]);
        d2 = lane.xor(d2, t, 64);
        let t = f(lane, d2, SIGMA[3]);
        d1 = lane.xor(d1, t, 64);
        let ka = ((d1 as u128) << 64) | d2 as u128;

        if key.len() == 16 {
            let (kw1, kw2) = halves(kl, 0);
            let (kw3, kw4) = halves(ka, 111);
            let pairs = [
                (ka, 0), (kl, 15), (ka, 15), (kl, 45), (ka, 45), (ka, 60),
                (kl, 94), (ka, 94), (kl, 111),
            ];
            let mut k: Vec<u64> = Vec::with_capacity(18);
            for (i, &(src, rot)) in pairs.iter().enumerate() {
                let (a, b) = halves(src, rot);
                k.push(a);
                // k10 is taken from KL rather than KA.
                k.push(if i == 4 { halves(kl, 60).1 } else { b });
            }
            let (ke1, ke2) = halves(ka, 30);
            let (ke3, ke4) = halves(kl, 77);
            Camellia { kw: [kw1, kw2, kw3, kw4], k, ke: vec![ke1, ke2, ke3, ke4] }
        } else {
            let x = ka ^ kr;
            let (mut d1, mut d2) = ((x >> 64) as u64, x as u64);
            let t = f(lane, d1, SIGMA[4]);
            d2 = lane.xor(d2, t, 64);
            let t = f(lane, d2, SIGMA[5]);
            d1 = lane.xor(d1, t, 64);
            let kb = ((d1 as u128) << 64) | d2 as u128;
            let (kw1, kw2) = halves(kl, 0);
            let (kw3, kw4) = halves(kb, 111);
            let pairs = [
                (kb, 0), (kr, 15), (ka, 15), (kb, 30), (kl, 45), (ka, 45),
                (kr, 60), (kb, 60), (kl, 77), (kr, 94), (ka, 94), (kl, 111),
            ];
            let k = pairs
                .iter()
                .flat_map(|&(src, rot)| {
                    let (a, b) = halves(src, rot);
                    [a, b]
                })
                .collect();
            let (ke1, ke2) = halves(kr, 30);
            let (ke3, ke4) = halves(kl, 60);
            let (ke5, ke6) = halves(ka, 77);
            Camellia { kw: [kw1, kw2, kw3, kw4], k, ke: vec![ke1, ke2, ke3, ke4, ke5, ke6] }
        }
    }

    fn crypt(&self, lane: &mut Lane, block: &mut [u8], decrypt: bool) {
        let rounds = self.k.len();
        let m = u128::from_be_bytes(block[..16].try_into().unwrap());
        let (kw_in, kw_out) = if decrypt {
            ([self.kw[2], self.kw[3]], [self.kw[0], self.kw[1]])
        } else {
            ([self.kw[0], self.kw[1]], [self.kw[2], self.kw[3]])
        };
        let key = |i: usize| if decrypt { self.k[rounds - 1 - i] } else { self.k[i] };
        let nke = self.ke.len();
        let ke = |i: usize| if decrypt { self.ke[nke - 1 - i] } else { self.ke[i] };

        let mut d1 = lane.xor((m >> 64) as u64, kw_in[0], 64);
        let mut d2 = lane.xor(m as u64, kw_in[1], 64);
        for i in 0..rounds {
            if i > 0 && i % 6 == 0 {
                let j = 2 * (i / 6 - 1);
                d1 = fl(lane, d1, ke(j));
                d2 = fl_inv(lane, d2, ke(j + 1));
            }
            lane.begin_round();
            if i % 2 == 0 {
                let t = f(lane, d1, key(i));
                d2 = lane.xor(d2, t, 64);
            } else {
                let t = f(lane, d2, key(i));
                d1 = lane.xor(d1, t, 64);
            }
            lane.end_round();
        }
        d2 = lane.xor(d2, kw_out[0], 64);
        d1 = lane.xor(d1, kw_out[1], 64);
        let c = ((d2 as u128) << 64) | d1 as u128;
        block.copy_from_slice(&c.to_be_bytes());
    }
}

impl CipherCore for Camellia {
    fn encrypt(&self, lane: &mut Lane, block: &mut [u8]) {
        self.crypt(lane, block, false);
    }

    fn decrypt(&self, lane: &mut Lane, block: &mut [u8]) {
        self.crypt(lane, block, true);
    }
}
