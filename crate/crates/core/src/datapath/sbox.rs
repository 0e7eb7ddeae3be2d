use super::{width_mask, DatapathError, Word};

/// A 256-entry byte lookup table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SBoxTable {
    entries: [u8; 256],
}

impl SBoxTable {
    pub fn new(entries: [u8; 256]) -> Self {
        SBoxTable { entries }
    }

    pub fn identity() -> Self {
        let mut e = [0u8; 256];
        for (i, v) in e.iter_mut().enumerate() {
            *v = i as u8;
        }
        SBoxTable { entries: e }
    }

    pub fn from_fn(f: impl Fn(u8) -> u8) -> Self {
        let mut e = [0u8; 256];
        for (i, v) in e.iter_mut().enumerate() {
            *v = f(i as u8);
        }
        SBoxTable { entries: e }
    }

    /// Parses 256 whitespace-separated two-digit hex bytes. Lines starting with `#` are skipped.
    pub fn from_hex_text(text: &str) -> Result<Self, DatapathError> {
        let mut entries = [0u8; 256];
        let mut count = 0usize;
        for tok in text
            .lines()
            .filter(|l| !l.trim_start().starts_with('#'))
            .flat_map(str::split_whitespace)
        {
            if tok.len() != 2 {
                return Err(DatapathError::TableParse(format!("token {tok:?} is not two hex digits")));
            }
            let v = u8::from_str_radix(tok, 16)
                .map_err(|_| DatapathError::TableParse(format!("token {tok:?} is not hex")))?;
            if count == 256 {
                return Err(DatapathError::TableParse("more than 256 entries".into()));
            }
            entries[count] = v;
            count += 1;
        }
        if count != 256 {
            return Err(DatapathError::TableParse(format!("expected 256 entries, found {count}")));
        }
        Ok(SBoxTable { entries })
    }

    pub fn to_hex_text(&self) -> String {
        self.entries
            .chunks(16)
            .map(|row| row.iter().map(|b| format!("{b:02x}")).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("\n")
            + "\n"
    }

    #[inline]
    pub fn get(&self, i: u8) -> u8 {
        self.entries[i as usize]
    }

    pub fn entries(&self) -> &[u8; 256] {
        &self.entries
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = [false; 256];
        self.entries.iter().all(|&v| !std::mem::replace(&mut seen[v as usize], true))
    }

    pub fn inverse(&self) -> Option<SBoxTable> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = [0u8; 256];
        for (i, &v) in self.entries.iter().enumerate() {
            inv[v as usize] = i as u8;
        }
        Some(SBoxTable { entries: inv })
    }
}

/// Table unit: byte `i` of the input goes through `tables[i]`. Sub-byte
/// inputs are zero-padded into the table index and the result is truncated
/// back to the input width.
pub fn sbox_lookup(input: Word, tables: &[&SBoxTable]) -> Result<Word, DatapathError> {
    let w = input.width();
    let bytes = ((w + 7) / 8) as usize;
    if tables.is_empty() || tables.len() > 4 || bytes > tables.len() {
        return Err(DatapathError::WidthMismatch {
            expected: 8 * tables.len() as u32,
            actual: w,
        });
    }
    let x = input.value();
    let mut out = 0u64;
    for (i, t) in tables.iter().take(bytes).enumerate() {
        let b = ((x >> (8 * i)) & 0xFF) as u8;
        out |= (t.get(b) as u64) << (8 * i);
    }
    Word::new(out & width_mask(w), w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_table_passes_through() {
        let t = SBoxTable::identity();
        for b in 0..=255u64 {
            assert_eq!(sbox_lookup(Word::new(b, 8).unwrap(), &[&t]).unwrap().value(), b);
        }
    }

    #[test]
    fn hex_round_trip() {
        let t = SBoxTable::from_fn(|x| x.wrapping_mul(7).wrapping_add(3));
        assert_eq!(SBoxTable::from_hex_text(&t.to_hex_text()).unwrap(), t);
        assert!(SBoxTable::from_hex_text("00 01").is_err());
        assert!(SBoxTable::from_hex_text(&"zz ".repeat(256)).is_err());
    }

    #[test]
    fn nibble_input_is_zero_padded_and_truncated() {
        let t = SBoxTable::from_fn(|x| x ^ 0xA5);
        let out = sbox_lookup(Word::new(0x3, 4).unwrap(), &[&t]).unwrap();
        assert_eq!(out.value(), (0x03 ^ 0xA5) & 0xF);
        assert_eq!(out.width(), 4);
    }

    #[test]
    fn four_tables_on_a_32_bit_word() {
        let ts: Vec<SBoxTable> = (0..4u8).map(|k| SBoxTable::from_fn(move |x| x.wrapping_add(k))).collect();
        let refs: Vec<&SBoxTable> = ts.iter().collect();
        let out = sbox_lookup(Word::new(0x10203040, 32).unwrap(), &refs).unwrap();
        assert_eq!(out.value(), 0x13223140);
        assert!(sbox_lookup(Word::new(0, 64).unwrap(), &refs).is_err());
    }

    #[test]
    fn inverse_only_for_bijections() {
        assert!(SBoxTable::from_fn(|x| x & 0xF0).inverse().is_none());
        let t = SBoxTable::from_fn(|x| x.rotate_left(3));
        let inv = t.inverse().unwrap();
        assert!((0..=255u8).all(|x| inv.get(t.get(x)) == x));
    }
}
