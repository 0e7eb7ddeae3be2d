//! Negacyclic number-theoretic transform over `Z_q[x] / (x^n + 1)`.

use super::AceError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NttParams {
    pub q: u64,
    pub n: usize,
    /// Primitive `2n`-th root of unity mod `q`.
    pub psi: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

fn pow_mod(mut b: u64, mut e: u64, q: u64) -> u64 {
    let mut r = 1u64;
    b %= q;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % q;
        }
        b = b * b % q;
        e >>= 1;
    }
    r
}

fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

impl NttParams {
    pub const DILITHIUM: NttParams = NttParams { q: 8_380_417, n: 256, psi: 1753 };

    pub fn new(q: u64, n: usize, psi: u64) -> Result<Self, AceError> {
        let p = NttParams { q, n, psi };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), AceError> {
        let bad = |m: &str| Err(AceError::InvalidParams(m.to_string()));
        if self.q >= 1 << 32 || !is_prime(self.q) {
            return bad("modulus must be a prime below 2^32");
        }
        if !self.n.is_power_of_two() || self.n < 2 {
            return bad("degree must be a power of two");
        }
        if (self.q - 1) % (2 * self.n as u64) != 0 {
            return bad("2n must divide q - 1");
        }
        if pow_mod(self.psi, self.n as u64, self.q) != self.q - 1 {
            return bad("psi must have order 2n");
        }
        Ok(())
    }

    pub fn inv(&self, a: u64) -> u64 {
        pow_mod(a, self.q - 2, self.q)
    }
}

fn bit_reverse(a: &mut [u64]) {
    let n = a.len();
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
}

/// In-place cyclic transform with root `omega` of order `n`.
fn cyclic(a: &mut [u64], omega: u64, q: u64) {
    let n = a.len();
    bit_reverse(a);
    let mut len = 2;
    while len <= n {
        let w_len = pow_mod(omega, (n / len) as u64, q);
        for start in (0..n).step_by(len) {
            let mut w = 1u64;
            for j in 0..len / 2 {
                let u = a[start + j];
                let v = a[start + j + len / 2] * w % q;
                a[start + j] = (u + v) % q;
                a[start + j + len / 2] = (u + q - v) % q;
                w = w * w_len % q;
            }
        }
        len <<= 1;
    }
}

pub fn ntt_transform(poly: &[u64], params: &NttParams, direction: Direction) -> Result<Vec<u64>, AceError> {
    if poly.len() != params.n {
        return Err(AceError::BadLength { expected: params.n, actual: poly.len() });
    }
    let q = params.q;
    if poly.iter().any(|&c| c >= q) {
        return Err(AceError::InvalidParams("coefficient not reduced".into()));
    }
    let omega = params.psi * params.psi % q;
    let mut a = poly.to_vec();
    match direction {
        Direction::Forward => {
            let mut t = 1u64;
            for c in a.iter_mut() {
                *c = *c * t % q;
                t = t * params.psi % q;
            }
            cyclic(&mut a, omega, q);
        }
        Direction::Inverse => {
            cyclic(&mut a, params.inv(omega), q);
            let n_inv = params.inv(params.n as u64);
            let psi_inv = params.inv(params.psi);
            let mut t = n_inv;
            for c in a.iter_mut() {
                *c = *c * t % q;
                t = t * psi_inv % q;
            }
        }
    }
    Ok(a)
}

/// Coefficient-wise product in the transform domain.
pub fn pointwise(a: &[u64], b: &[u64], params: &NttParams) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x * y % params.q).collect()
}

/// Negacyclic product via forward, pointwise, inverse.
pub fn negacyclic_mul(a: &[u64], b: &[u64], params: &NttParams) -> Result<Vec<u64>, AceError> {
    let fa = ntt_transform(a, params, Direction::Forward)?;
    let fb = ntt_transform(b, params, Direction::Forward)?;
    ntt_transform(&pointwise(&fa, &fb, params), params, Direction::Inverse)
}
