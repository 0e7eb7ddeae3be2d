use super::{width_mask, DatapathError, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LogicOp {
    Xor,
    And,
    Or,
    Not,
    Nand,
    Nor,
}

/// Bitwise logic unit. `Not` ignores `b`.
pub fn logic_op(a: Word, b: Word, op: LogicOp) -> Result<Word, DatapathError> {
    if op != LogicOp::Not && a.width() != b.width() {
        return Err(DatapathError::WidthMismatch {
            expected: a.width(),
            actual: b.width(),
        });
    }
    let mask = width_mask(a.width());
    let (x, y) = (a.value(), b.value());
    let v = match op {
        LogicOp::Xor => x ^ y,
        LogicOp::And => x & y,
        LogicOp::Or => x | y,
        LogicOp::Not => !x,
        LogicOp::Nand => !(x & y),
        LogicOp::Nor => !(x | y),
    };
    Word::new(v & mask, a.width())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_identities() {
        let x = Word::new(0xBEEF, 16).unwrap();
        let z = Word::new(0, 16).unwrap();
        assert_eq!(logic_op(x, x, LogicOp::Xor).unwrap(), z);
        assert_eq!(logic_op(x, z, LogicOp::Xor).unwrap(), x);
        let a = Word::new(0xF0F0, 16).unwrap();
        let b = Word::new(0x0FF0, 16).unwrap();
        assert_eq!(logic_op(a, b, LogicOp::And).unwrap().value(), 0x00F0);
        assert_eq!(logic_op(a, z, LogicOp::Not).unwrap().value(), 0x0F0F);
        assert_eq!(logic_op(a, b, LogicOp::Nor).unwrap().value(), 0x000F);
        assert_eq!(logic_op(a, b, LogicOp::Nand).unwrap().value(), 0xFF0F);
    }

    #[test]
    fn widths_must_agree() {
        let a = Word::new(1, 8).unwrap();
        let b = Word::new(1, 16).unwrap();
        assert!(logic_op(a, b, LogicOp::Or).is_err());
        assert!(logic_op(a, b, LogicOp::Not).is_ok());
    }
}
