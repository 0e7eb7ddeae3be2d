//! Word-level arithmetic-unit operations used by the block ciphers.

use super::{width_mask, DatapathError, Word};

/// `(a + b) mod 2^width`.
pub fn mod_add_word(a: Word, b: Word) -> Result<Word, DatapathError> {
    same_width(a, b)?;
    Word::new(a.value().wrapping_add(b.value()) & width_mask(a.width()), a.width())
}

/// `(a * b) mod modulus`. A zero operand stands for `modulus - 1` when
/// `zero_is_max` is set, which is the IDEA convention for `2^16 + 1`.
pub fn mod_mul_word(a: Word, b: Word, modulus: u64, zero_is_max: bool) -> Result<Word, DatapathError> {
    same_width(a, b)?;
    if modulus < 2 {
        return Err(DatapathError::InvalidModulus);
    }
    let lift = |v: u64| if zero_is_max && v == 0 { (modulus - 1) as u128 } else { v as u128 };
    let p = (lift(a.value()) * lift(b.value()) % modulus as u128) as u64;
    let p = if zero_is_max && p == modulus - 1 { 0 } else { p };
    Word::new(p & width_mask(a.width()), a.width())
}

/// Carry-less multiplication of two bytes reduced by `poly` (degree-8 polynomial with bit 8 set).
#[inline]
pub fn gf_mul(a: u8, b: u8, poly: u16) -> u8 {
    let (mut a, mut b) = (a as u16, b);
    let mut acc = 0u16;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        a <<= 1;
        if a & 0x100 != 0 {
            a ^= poly;
        }
        b >>= 1;
    }
    acc as u8
}

fn same_width(a: Word, b: Word) -> Result<(), DatapathError> {
    if a.width() != b.width() {
        return Err(DatapathError::WidthMismatch {
            expected: a.width(),
            actual: b.width(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf_mul_matches_known_products() {
        assert_eq!(gf_mul(0x57, 0x83, 0x11B), 0xC1);
        assert_eq!(gf_mul(0x57, 0x13, 0x11B), 0xFE);
        assert_eq!(gf_mul(0x01, 0xAB, 0x11B), 0xAB);
    }

    #[test]
    fn idea_multiplication_convention() {
        let w = |v| Word::new(v, 16).unwrap();
        // 0 encodes 2^16 == -1 mod 65537, so 0 * 0 == 1.
        assert_eq!(mod_mul_word(w(0), w(0), 65537, true).unwrap().value(), 1);
        assert_eq!(mod_mul_word(w(2), w(0x8000), 65537, true).unwrap().value(), 0);
        assert_eq!(mod_mul_word(w(3), w(5), 65537, true).unwrap().value(), 15);
    }

    #[test]
    fn add_wraps_at_width() {
        let w = |v| Word::new(v, 8).unwrap();
        assert_eq!(mod_add_word(w(0xF0), w(0x20)).unwrap().value(), 0x10);
    }
}
