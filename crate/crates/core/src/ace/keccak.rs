//! Keccak-f[1600] and the SHA-3 / SHAKE sponges built on it.

const RC: [u64; 24] = [
    0x0000000000000001, 0x0000000000008082, 0x800000000000808a, 0x8000000080008000,
    0x000000000000808b, 0x0000000080000001, 0x8000000080008081, 0x8000000000008009,
    0x000000000000008a, 0x0000000000000088, 0x0000000080008009, 0x000000008000000a,
    0x000000008000808b, 0x800000000000008b, 0x8000000000008089, 0x8000000000008003,
    0x8000000000008002, 0x8000000000000080, 0x000000000000800a, 0x800000008000000a,
    0x8000000080008081, 0x8000000000008080, 0x0000000080000001, 0x8000000080008008,
];

/// Rotation offsets indexed by `x + 5y`.
const RHO: [u32; 25] = [
    0, 1, 62, 28, 27, 36, 44, 6, 55, 20, 3, 10, 43, 25, 39, 41, 45, 15, 21, 8, 18, 2, 61, 56, 14,
];

pub const ROUNDS: usize = 24;

/// The 24-round permutation on 25 lanes; lane `(x, y)` is `state[x + 5y]`.
pub fn keccak_f1600(state: &mut [u64; 25]) {
    for rc in RC {
        let mut c = [0u64; 5];
        for x in 0..5 {
            c[x] = state[x] ^ state[x + 5] ^ state[x + 10] ^ state[x + 15] ^ state[x + 20];
        }
        for x in 0..5 {
            let d = c[(x + 4) % 5] ^ c[(x + 1) % 5].rotate_left(1);
            for y in 0..5 {
                state[x + 5 * y] ^= d;
            }
        }
        let mut b = [0u64; 25];
        for x in 0..5 {
            for y in 0..5 {
                b[y + 5 * ((2 * x + 3 * y) % 5)] = state[x + 5 * y].rotate_left(RHO[x + 5 * y]);
            }
        }
        for y in 0..5 {
            for x in 0..5 {
                state[x + 5 * y] = b[x + 5 * y] ^ (!b[(x + 1) % 5 + 5 * y] & b[(x + 2) % 5 + 5 * y]);
            }
        }
        state[0] ^= rc;
    }
}

/// Sponge with the given rate in bytes and domain-separation suffix.
fn sponge(message: &[u8], rate: usize, suffix: u8, out_len: usize) -> Vec<u8> {
    let mut state = [0u64; 25];
    let mut padded = message.to_vec();
    padded.push(suffix);
    while padded.len() % rate != 0 {
        padded.push(0);
    }
    *padded.last_mut().unwrap() |= 0x80;
    for block in padded.chunks(rate) {
        for (i, lane) in block.chunks(8).enumerate() {
            state[i] ^= u64::from_le_bytes(lane.try_into().unwrap());
        }
        keccak_f1600(&mut state);
    }
    let mut out = Vec::with_capacity(out_len);
    loop {
        for lane in state.iter().take(rate / 8) {
            out.extend_from_slice(&lane.to_le_bytes());
        }
        if out.len() >= out_len {
            out.truncate(out_len);
            return out;
        }
        keccak_f1600(&mut state);
    }
}

pub fn sha3_256(message: &[u8]) -> [u8; 32] {
    sponge(message, 136, 0x06, 32).try_into().unwrap()
}

pub fn sha3_512(message: &[u8]) -> [u8; 64] {
    sponge(message, 72, 0x06, 64).try_into().unwrap()
}

pub fn shake128(message: &[u8], out_len: usize) -> Vec<u8> {
    sponge(message, 168, 0x1F, out_len)
}

pub fn shake256(message: &[u8], out_len: usize) -> Vec<u8> {
    sponge(message, 136, 0x1F, out_len)
}

/// Permutations needed to absorb `len` bytes at `rate`.
pub fn absorb_permutations(len: u64, rate: u64) -> u64 {
    len / rate + 1
}
