use super::DatapathError;

/// Widths the datapath units accept, one per processing granularity in use.
pub const WIDTHS: [u32; 6] = [4, 8, 16, 23, 32, 64];

#[inline]
pub fn width_mask(width: u32) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// A fixed-width unsigned datapath word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Word {
    value: u64,
    width: u32,
}

impl Word {
    pub fn new(value: u64, width: u32) -> Result<Self, DatapathError> {
        if !WIDTHS.contains(&width) {
            return Err(DatapathError::InvalidWidth(width));
        }
        if value & !width_mask(width) != 0 {
            return Err(DatapathError::ValueTooWide { value, width });
        }
        Ok(Word { value, width })
    }

    /// Builds a word, dropping any bits above `width`.
    pub fn truncating(value: u64, width: u32) -> Result<Self, DatapathError> {
        Word::new(value & width_mask(width), width)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn mask(&self) -> u64 {
        width_mask(self.width)
    }

    pub fn bit(&self, i: u32) -> bool {
        (self.value >> i) & 1 == 1
    }

    pub fn sign_bit(&self) -> bool {
        self.bit(self.width - 1)
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#x}/{}", self.value, self.width)
    }
}
