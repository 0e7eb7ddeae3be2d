use super::{width_mask, DatapathError, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShiftMode {
    LogicalLeft,
    LogicalRight,
    ArithRight,
    RotateLeft,
    RotateRight,
}

/// Shift or rotate at the word's declared width. Arithmetic shifts replicate
/// the declared-width sign bit.
pub fn barrel_shift(input: Word, amount: u32, mode: ShiftMode) -> Result<Word, DatapathError> {
    let w = input.width();
    if amount >= w {
        return Err(DatapathError::ShiftOutOfRange { amount, width: w });
    }
    let x = input.value();
    let mask = width_mask(w);
    let out = if amount == 0 {
        x
    } else {
        match mode {
            ShiftMode::LogicalLeft => (x << amount) & mask,
            ShiftMode::LogicalRight => x >> amount,
            ShiftMode::ArithRight => {
                let fill = if input.sign_bit() { mask & !(mask >> amount) } else { 0 };
                (x >> amount) | fill
            }
            ShiftMode::RotateLeft => ((x << amount) | (x >> (w - amount))) & mask,
            ShiftMode::RotateRight => ((x >> amount) | (x << (w - amount))) & mask,
        }
    };
    Word::new(out, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(v: u64, width: u32) -> Word {
        Word::new(v, width).unwrap()
    }

    #[test]
    fn rotate_examples() {
        assert_eq!(barrel_shift(w(0x5A, 8), 0, ShiftMode::RotateLeft).unwrap().value(), 0x5A);
        assert_eq!(barrel_shift(w(0x01, 8), 7, ShiftMode::RotateLeft).unwrap().value(), 0x80);
    }

    #[test]
    fn arith_right_extends_sign() {
        let out = barrel_shift(w(0x8000_0000, 32), 4, ShiftMode::ArithRight).unwrap();
        assert_eq!(out.value(), ((0x8000_0000u32 as i32) >> 4) as u32 as u64);
        assert_eq!(out.value(), 0xF800_0000);
        let out = barrel_shift(w(0x4000_0000, 32), 4, ShiftMode::ArithRight).unwrap();
        assert_eq!(out.value(), 0x0400_0000);
    }

    #[test]
    fn amount_must_be_below_width() {
        assert_eq!(
            barrel_shift(w(1, 8), 8, ShiftMode::LogicalLeft),
            Err(DatapathError::ShiftOutOfRange { amount: 8, width: 8 })
        );
    }

    proptest! {
        #[test]
        fn rotations_invert(x in any::<u64>(), k in 0u32..64, wi in 0usize..6) {
            let width = super::super::WIDTHS[wi];
            let k = k % width;
            let word = Word::truncating(x, width).unwrap();
            let r = barrel_shift(word, k, ShiftMode::RotateRight).unwrap();
            prop_assert_eq!(barrel_shift(r, k, ShiftMode::RotateLeft).unwrap(), word);
        }

        #[test]
        fn arith_right_matches_signed_shift(x in any::<u32>(), k in 0u32..32) {
            let out = barrel_shift(Word::new(x as u64, 32).unwrap(), k, ShiftMode::ArithRight).unwrap();
            prop_assert_eq!(out.value(), ((x as i32) >> k) as u32 as u64);
        }
    }
}
