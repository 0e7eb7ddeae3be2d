//! Arbitrary-precision non-negative integers over 64-bit limbs.
//!
//! Limbs are stored little-endian and kept normalized: the most significant
//! limb is never zero, and zero is the empty limb vector.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Sub};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LimbInt {
    limbs: Vec<u64>,
}

impl LimbInt {
    pub fn zero() -> Self {
        LimbInt { limbs: Vec::new() }
    }

    pub fn one() -> Self {
        LimbInt::from_u64(1)
    }

    pub fn from_u64(v: u64) -> Self {
        LimbInt::from_limbs(vec![v])
    }

    pub fn from_u128(v: u128) -> Self {
        LimbInt::from_limbs(vec![v as u64, (v >> 64) as u64])
    }

    pub fn from_limbs(mut limbs: Vec<u64>) -> Self {
        while limbs.last() == Some(&0) {
            limbs.pop();
        }
        LimbInt { limbs }
    }

    pub fn limbs(&self) -> &[u64] {
        &self.limbs
    }

    pub fn limb_count(&self) -> usize {
        self.limbs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.limbs == [1]
    }

    pub fn is_even(&self) -> bool {
        self.limbs.first().map_or(true, |l| l & 1 == 0)
    }

    pub fn low_u64(&self) -> u64 {
        self.limbs.first().copied().unwrap_or(0)
    }

    /// Number of significant bits; zero has length 0.
    pub fn bits(&self) -> usize {
        match self.limbs.last() {
            None => 0,
            Some(top) => 64 * (self.limbs.len() - 1) + (64 - top.leading_zeros() as usize),
        }
    }

    pub fn bit(&self, i: usize) -> bool {
        self.limbs
            .get(i / 64)
            .map_or(false, |l| (l >> (i % 64)) & 1 == 1)
    }

    pub fn from_be_bytes(bytes: &[u8]) -> Self {
        let mut limbs = Vec::with_capacity(bytes.len() / 8 + 1);
        for chunk in bytes.rchunks(8) {
            let mut l = 0u64;
            for &b in chunk {
                l = (l << 8) | b as u64;
            }
            limbs.push(l);
        }
        LimbInt::from_limbs(limbs)
    }

    pub fn from_le_bytes(bytes: &[u8]) -> Self {
        let mut rev = bytes.to_vec();
        rev.reverse();
        LimbInt::from_be_bytes(&rev)
    }

    /// Minimal big-endian encoding; zero encodes as an empty vector.
    pub fn to_be_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.limbs.len() * 8);
        for l in self.limbs.iter().rev() {
            out.extend_from_slice(&l.to_be_bytes());
        }
        let first = out.iter().position(|&b| b != 0).unwrap_or(out.len());
        out.drain(..first);
        out
    }

    /// Big-endian encoding left-padded to `len` bytes. Returns `None` if the value does not fit.
    pub fn to_be_bytes_padded(&self, len: usize) -> Option<Vec<u8>> {
        let raw = self.to_be_bytes();
        if raw.len() > len {
            return None;
        }
        let mut out = vec![0u8; len - raw.len()];
        out.extend_from_slice(&raw);
        Some(out)
    }

    pub fn from_hex(s: &str) -> Option<Self> {
        let s = s.trim().trim_start_matches("0x");
        let digits: String = s.chars().filter(|c| !c.is_whitespace() && *c != '_').collect();
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_hexdigit()) {
            return None;
        }
        let mut limbs = Vec::new();
        let bytes = digits.as_bytes();
        let mut end = bytes.len();
        while end > 0 {
            let start = end.saturating_sub(16);
            let chunk = std::str::from_utf8(&bytes[start..end]).ok()?;
            limbs.push(u64::from_str_radix(chunk, 16).ok()?);
            end = start;
        }
        Some(LimbInt::from_limbs(limbs))
    }

    pub fn to_hex(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = format!("{:x}", self.limbs.last().unwrap());
        for l in self.limbs.iter().rev().skip(1) {
            s.push_str(&format!("{:016x}", l));
        }
        s
    }

    pub fn shl(&self, bits: usize) -> LimbInt {
        if self.is_zero() {
            return LimbInt::zero();
        }
        let limb_shift = bits / 64;
        let bit_shift = bits % 64;
        let mut out = vec![0u64; limb_shift];
        if bit_shift == 0 {
            out.extend_from_slice(&self.limbs);
        } else {
            let mut carry = 0u64;
            for &l in &self.limbs {
                out.push((l << bit_shift) | carry);
                carry = l >> (64 - bit_shift);
            }
            out.push(carry);
        }
        LimbInt::from_limbs(out)
    }

    pub fn shr(&self, bits: usize) -> LimbInt {
        let limb_shift = bits / 64;
        if limb_shift >= self.limbs.len() {
            return LimbInt::zero();
        }
        let bit_shift = bits % 64;
        let src = &self.limbs[limb_shift..];
        let mut out = Vec::with_capacity(src.len());
        for i in 0..src.len() {
            let lo = src[i] >> bit_shift;
            let hi = if bit_shift == 0 {
                0
            } else {
                src.get(i + 1).map_or(0, |h| h << (64 - bit_shift))
            };
            out.push(lo | hi);
        }
        LimbInt::from_limbs(out)
    }

    /// Keeps only the lowest `n` limbs (reduction modulo 2^(64n)).
    pub fn truncate_limbs(&self, n: usize) -> LimbInt {
        LimbInt::from_limbs(self.limbs.iter().take(n).copied().collect())
    }

    /// Drops the lowest `n` limbs (floor division by 2^(64n)).
    pub fn drop_limbs(&self, n: usize) -> LimbInt {
        LimbInt::from_limbs(self.limbs.iter().skip(n).copied().collect())
    }

    pub fn checked_sub(&self, other: &LimbInt) -> Option<LimbInt> {
        if self < other {
            return None;
        }
        let mut out = Vec::with_capacity(self.limbs.len());
        let mut borrow = 0u64;
        for i in 0..self.limbs.len() {
            let b = other.limbs.get(i).copied().unwrap_or(0);
            let (d1, o1) = self.limbs[i].overflowing_sub(b);
            let (d2, o2) = d1.overflowing_sub(borrow);
            out.push(d2);
            borrow = (o1 || o2) as u64;
        }
        debug_assert_eq!(borrow, 0);
        Some(LimbInt::from_limbs(out))
    }

    /// Schoolbook long division (Knuth algorithm D). Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &LimbInt) -> (LimbInt, LimbInt) {
        assert!(!divisor.is_zero(), "division by zero");
        if self < divisor {
            return (LimbInt::zero(), self.clone());
        }
        if divisor.limbs.len() == 1 {
            let d = divisor.limbs[0] as u128;
            let mut q = vec![0u64; self.limbs.len()];
            let mut rem = 0u128;
            for i in (0..self.limbs.len()).rev() {
                let cur = (rem << 64) | self.limbs[i] as u128;
                q[i] = (cur / d) as u64;
                rem = cur % d;
            }
            return (LimbInt::from_limbs(q), LimbInt::from_u64(rem as u64));
        }

        let shift = divisor.limbs.last().unwrap().leading_zeros() as usize;
        let v = divisor.shl(shift).limbs;
        let mut u = self.shl(shift).limbs;
        let n = v.len();
        if u.len() == self.limbs.len() {
            u.push(0);
        }
        while u.len() < self.limbs.len() + 1 {
            u.push(0);
        }
        let m = u.len() - n - 1;
        let mut q = vec![0u64; m + 1];
        let base: u128 = 1 << 64;
        let vtop = v[n - 1] as u128;
        let vnext = v[n - 2] as u128;

        for j in (0..=m).rev() {
            let num = ((u[j + n] as u128) << 64) | u[j + n - 1] as u128;
            let mut qhat = num / vtop;
            let mut rhat = num % vtop;
            while qhat >= base || qhat * vnext > ((rhat << 64) | u[j + n - 2] as u128) {
                qhat -= 1;
                rhat += vtop;
                if rhat >= base {
                    break;
                }
            }

            let mut borrow: i128 = 0;
            let mut carry: u128 = 0;
            for i in 0..n {
                let p = qhat * v[i] as u128 + carry;
                carry = p >> 64;
                let t = u[i + j] as i128 - borrow - (p as u64) as i128;
                u[i + j] = t as u64;
                borrow = (t < 0) as i128;
            }
            let t = u[j + n] as i128 - borrow - carry as i128;
            u[j + n] = t as u64;

            if t < 0 {
                qhat -= 1;
                let mut c = 0u128;
                for i in 0..n {
                    let s = u[i + j] as u128 + v[i] as u128 + c;
                    u[i + j] = s as u64;
                    c = s >> 64;
                }
                u[j + n] = u[j + n].wrapping_add(c as u64);
            }
            q[j] = qhat as u64;
        }

        u.truncate(n);
        let rem = LimbInt::from_limbs(u).shr(shift);
        (LimbInt::from_limbs(q), rem)
    }

    pub fn rem(&self, m: &LimbInt) -> LimbInt {
        self.div_rem(m).1
    }

    pub fn gcd(&self, other: &LimbInt) -> LimbInt {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }
}

fn add_limbs(a: &[u64], b: &[u64]) -> Vec<u64> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = Vec::with_capacity(long.len() + 1);
    let mut carry = 0u64;
    for i in 0..long.len() {
        let s = long[i] as u128 + short.get(i).copied().unwrap_or(0) as u128 + carry as u128;
        out.push(s as u64);
        carry = (s >> 64) as u64;
    }
    out.push(carry);
    out
}

fn mul_limbs(a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        let mut carry = 0u128;
        for (j, &y) in b.iter().enumerate() {
            let t = x as u128 * y as u128 + out[i + j] as u128 + carry;
            out[i + j] = t as u64;
            carry = t >> 64;
        }
        out[i + b.len()] = carry as u64;
    }
    out
}

impl Ord for LimbInt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.limbs
            .len()
            .cmp(&other.limbs.len())
            .then_with(|| self.limbs.iter().rev().cmp(other.limbs.iter().rev()))
    }
}

impl PartialOrd for LimbInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &LimbInt {
    type Output = LimbInt;
    fn add(self, rhs: &LimbInt) -> LimbInt {
        LimbInt::from_limbs(add_limbs(&self.limbs, &rhs.limbs))
    }
}

impl Sub for &LimbInt {
    type Output = LimbInt;
    /// Panics on underflow; use `checked_sub` when the ordering is unknown.
    fn sub(self, rhs: &LimbInt) -> LimbInt {
        self.checked_sub(rhs).expect("LimbInt subtraction underflow")
    }
}

impl Mul for &LimbInt {
    type Output = LimbInt;
    fn mul(self, rhs: &LimbInt) -> LimbInt {
        LimbInt::from_limbs(mul_limbs(&self.limbs, &rhs.limbs))
    }
}

impl fmt::Debug for LimbInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LimbInt(0x{})", self.to_hex())
    }
}

impl fmt::Display for LimbInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{}", self.to_hex())
    }
}

impl From<u64> for LimbInt {
    fn from(v: u64) -> Self {
        LimbInt::from_u64(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use proptest::prelude::*;

    fn big(x: &LimbInt) -> BigUint {
        BigUint::from_bytes_be(&x.to_be_bytes())
    }

    fn limbs_strategy(max: usize) -> impl Strategy<Value = LimbInt> {
        prop::collection::vec(any::<u64>(), 0..max).prop_map(LimbInt::from_limbs)
    }

    #[test]
    fn zero_has_no_limbs() {
        assert!(LimbInt::from_limbs(vec![0, 0, 0]).is_zero());
        assert_eq!(LimbInt::zero().bits(), 0);
        assert_eq!(LimbInt::zero().to_be_bytes(), Vec::<u8>::new());
    }

    #[test]
    fn hex_parsing() {
        let x = LimbInt::from_hex("0x1_0000000000000000").unwrap();
        assert_eq!(x.limbs(), &[0, 1]);
        assert_eq!(x.to_hex(), "10000000000000000");
        assert!(LimbInt::from_hex("xyz").is_none());
    }

    #[test]
    fn division_with_qhat_correction() {
        // Divisor top limb forces the add-back branch for some quotients.
        let a = LimbInt::from_limbs(vec![0, 0, 0x8000_0000_0000_0000, 0x7fff_ffff_ffff_ffff]);
        let d = LimbInt::from_limbs(vec![1, 0, 0x8000_0000_0000_0000]);
        let (q, r) = a.div_rem(&d);
        assert_eq!(big(&q), big(&a) / big(&d));
        assert_eq!(big(&r), big(&a) % big(&d));
    }

    proptest! {
        #[test]
        fn byte_round_trip(x in limbs_strategy(8)) {
            prop_assert_eq!(LimbInt::from_be_bytes(&x.to_be_bytes()), x.clone());
            let le: Vec<u8> = x.to_be_bytes().into_iter().rev().collect();
            prop_assert_eq!(LimbInt::from_le_bytes(&le), x);
        }

        #[test]
        fn arithmetic_matches_biguint(a in limbs_strategy(6), b in limbs_strategy(6)) {
            prop_assert_eq!(big(&(&a + &b)), big(&a) + big(&b));
            prop_assert_eq!(big(&(&a * &b)), big(&a) * big(&b));
            if a >= b {
                prop_assert_eq!(big(&(&a - &b)), big(&a) - big(&b));
            }
            prop_assert_eq!(a.cmp(&b), big(&a).cmp(&big(&b)));
        }

        #[test]
        fn div_rem_matches_biguint(a in limbs_strategy(9), b in limbs_strategy(5)) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.div_rem(&b);
            prop_assert_eq!(big(&q), big(&a) / big(&b));
            prop_assert_eq!(big(&r), big(&a) % big(&b));
        }

        #[test]
        fn shifts_match_biguint(a in limbs_strategy(5), s in 0usize..300) {
            prop_assert_eq!(big(&a.shl(s)), big(&a) << s);
            prop_assert_eq!(big(&a.shr(s)), big(&a) >> s);
        }
    }
}
