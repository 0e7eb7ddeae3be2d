//! Modular arithmetic over limb integers with Barrett reduction.

use super::{DatapathError, LimbInt};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModOp {
    Add,
    Mul,
}

/// A modulus together with its precomputed Barrett constant.
///
/// `k` is the limb-aligned bit length of the modulus, so `mu = floor(2^(2k) / m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModContext {
    modulus: LimbInt,
    mu: LimbInt,
    n_limbs: usize,
}

impl ModContext {
    pub fn new(modulus: LimbInt) -> Result<Self, DatapathError> {
        if modulus <= LimbInt::one() {
            return Err(DatapathError::InvalidModulus);
        }
        let n_limbs = modulus.limb_count();
        let mu = Self::compute_mu(&modulus);
        Ok(ModContext { modulus, mu, n_limbs })
    }

    fn compute_mu(modulus: &LimbInt) -> LimbInt {
        LimbInt::one().shl(128 * modulus.limb_count()).div_rem(modulus).0
    }

    pub fn modulus(&self) -> &LimbInt {
        &self.modulus
    }

    pub fn barrett_mu(&self) -> &LimbInt {
        &self.mu
    }

    pub fn k_bits(&self) -> usize {
        64 * self.n_limbs
    }

    pub fn limb_count(&self) -> usize {
        self.n_limbs
    }

    /// True when the stored Barrett constant matches a fresh recomputation.
    pub fn is_consistent(&self) -> bool {
        self.mu == Self::compute_mu(&self.modulus)
    }

    /// Reduces any `x` modulo `m`; Barrett path for `x < 2^(2k)`.
    pub fn reduce(&self, x: &LimbInt) -> LimbInt {
        let n = self.n_limbs;
        if x < &self.modulus {
            return x.clone();
        }
        if x.limb_count() > 2 * n {
            return x.rem(&self.modulus);
        }
        let q1 = x.drop_limbs(n - 1);
        let q2 = &q1 * &self.mu;
        let q3 = q2.drop_limbs(n + 1);
        let r1 = x.truncate_limbs(n + 1);
        let r2 = (&q3 * &self.modulus).truncate_limbs(n + 1);
        let mut r = match r1.checked_sub(&r2) {
            Some(r) => r,
            None => &(&r1 + &LimbInt::one().shl(64 * (n + 1))) - &r2,
        };
        while r >= self.modulus {
            r = &r - &self.modulus;
        }
        r
    }

    pub fn add(&self, a: &LimbInt, b: &LimbInt) -> LimbInt {
        let s = a + b;
        match s.checked_sub(&self.modulus) {
            Some(d) => d,
            None => s,
        }
    }

    pub fn sub(&self, a: &LimbInt, b: &LimbInt) -> LimbInt {
        match a.checked_sub(b) {
            Some(d) => d,
            None => &(a + &self.modulus) - b,
        }
    }

    pub fn neg(&self, a: &LimbInt) -> LimbInt {
        if a.is_zero() {
            LimbInt::zero()
        } else {
            &self.modulus - a
        }
    }

    pub fn mul(&self, a: &LimbInt, b: &LimbInt) -> LimbInt {
        self.reduce(&(a * b))
    }

    /// Left-to-right square-and-multiply. Returns the power and the number of
    /// modular multiplications performed (squarings plus multiplies).
    pub fn pow(&self, base: &LimbInt, exp: &LimbInt) -> (LimbInt, u64) {
        let base = self.reduce(base);
        let mut acc = self.reduce(&LimbInt::one());
        let mut steps = 0u64;
        for i in (0..exp.bits()).rev() {
            acc = self.mul(&acc, &acc);
            steps += 1;
            if exp.bit(i) {
                acc = self.mul(&acc, &base);
                steps += 1;
            }
        }
        (acc, steps)
    }

    /// Inverse by the extended Euclidean algorithm; `None` when `gcd(a, m) != 1`.
    pub fn inv(&self, a: &LimbInt) -> Option<LimbInt> {
        let a = self.reduce(a);
        if a.is_zero() {
            return None;
        }
        // Invariant: r_i == s_i * a (mod m), with s_i kept in [0, m).
        let (mut r0, mut r1) = (self.modulus.clone(), a);
        let (mut s0, mut s1) = (LimbInt::zero(), LimbInt::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let qs = self.mul(&self.reduce(&q), &s1);
            let s2 = self.sub(&s0, &qs);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
        }
        if r0.is_one() {
            Some(s0)
        } else {
            None
        }
    }
}

/// Arithmetic-unit operation: exact when `ctx` is absent, reduced otherwise.
pub fn mod_arith(
    a: &LimbInt,
    b: &LimbInt,
    op: ModOp,
    ctx: Option<&ModContext>,
) -> Result<LimbInt, DatapathError> {
    match ctx {
        None => Ok(match op {
            ModOp::Add => a + b,
            ModOp::Mul => a * b,
        }),
        Some(ctx) => {
            if a >= ctx.modulus() || b >= ctx.modulus() {
                return Err(DatapathError::OperandOutOfRange);
            }
            Ok(match op {
                ModOp::Add => ctx.add(a, b),
                ModOp::Mul => ctx.mul(a, b),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn big(x: &LimbInt) -> BigUint {
        BigUint::from_bytes_be(&x.to_be_bytes())
    }

    fn random_below(rng: &mut ChaCha8Rng, m: &LimbInt) -> LimbInt {
        let limbs: Vec<u64> = (0..m.limb_count()).map(|_| rng.gen()).collect();
        LimbInt::from_limbs(limbs).rem(m)
    }

    #[test]
    fn hand_checked_values() {
        let ctx = ModContext::new(LimbInt::from_u64(13)).unwrap();
        let r = mod_arith(&7u64.into(), &8u64.into(), ModOp::Mul, Some(&ctx)).unwrap();
        assert_eq!(r, LimbInt::from_u64(4));
        let r = mod_arith(&0u64.into(), &9u64.into(), ModOp::Add, Some(&ctx)).unwrap();
        assert_eq!(r, LimbInt::from_u64(9));
    }

    #[test]
    fn rejects_trivial_moduli() {
        assert_eq!(ModContext::new(LimbInt::one()), Err(DatapathError::InvalidModulus));
        assert_eq!(ModContext::new(LimbInt::zero()), Err(DatapathError::InvalidModulus));
    }

    #[test]
    fn mu_matches_recomputation() {
        let m = LimbInt::from_hex("ffffffff00000001000000000000000000000000ffffffffffffffffffffffff").unwrap();
        let ctx = ModContext::new(m.clone()).unwrap();
        assert!(ctx.is_consistent());
        assert_eq!(big(ctx.barrett_mu()), (BigUint::from(1u8) << 512) / big(&m));
    }

    #[test]
    fn barrett_matches_biguint_across_sizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for bits in [256usize, 384, 1024, 3072] {
            let limbs = bits / 64;
            let mut m: Vec<u64> = (0..limbs).map(|_| rng.gen()).collect();
            m[limbs - 1] |= 1 << 63;
            m[0] |= 1;
            let m = LimbInt::from_limbs(m);
            let ctx = ModContext::new(m.clone()).unwrap();
            for _ in 0..200 {
                let a = random_below(&mut rng, &m);
                let b = random_below(&mut rng, &m);
                let got = ctx.mul(&a, &b);
                assert_eq!(big(&got), big(&a) * big(&b) % big(&m));
            }
        }
    }

    #[test]
    fn pow_and_inverse() {
        let ctx = ModContext::new(LimbInt::from_u64(3233)).unwrap();
        let (c, steps) = ctx.pow(&65u64.into(), &17u64.into());
        assert_eq!(c, LimbInt::from_u64(2790));
        assert_eq!(steps, 5 + 2);
        let inv = ctx.inv(&17u64.into()).unwrap();
        assert_eq!(ctx.mul(&inv, &17u64.into()), LimbInt::one());
        assert!(ctx.inv(&61u64.into()).is_none());
    }
}
