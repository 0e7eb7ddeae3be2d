//! Bit-exact models of the compute units shared by the block and asymmetric engines.

pub mod arith;
pub mod benes;
pub mod limb;
pub mod logic;
pub mod modular;
pub mod sbox;
pub mod shift;
pub mod word;

pub use arith::{gf_mul, mod_add_word, mod_mul_word};
pub use benes::{benes_permute, benes_permute_combined, route_benes, BenesConfig, CombinedBenes};
pub use limb::LimbInt;
pub use logic::{logic_op, LogicOp};
pub use modular::{mod_arith, ModContext, ModOp};
pub use sbox::{sbox_lookup, SBoxTable};
pub use shift::{barrel_shift, ShiftMode};
pub use word::{width_mask, Word, WIDTHS};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DatapathError {
    #[error("unsupported word width {0}")]
    InvalidWidth(u32),
    #[error("value {value:#x} does not fit in {width} bits")]
    ValueTooWide { value: u64, width: u32 },
    #[error("width mismatch: expected {expected}, got {actual}")]
    WidthMismatch { expected: u32, actual: u32 },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("shift amount {amount} out of range for width {width}")]
    ShiftOutOfRange { amount: u32, width: u32 },
    #[error("modulus must exceed 1")]
    InvalidModulus,
    #[error("operand not reduced below the modulus")]
    OperandOutOfRange,
    #[error("s-box table parse error: {0}")]
    TableParse(String),
}
