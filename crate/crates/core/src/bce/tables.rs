//! Standard substitution tables, vendored as hex data files.

use crate::datapath::SBoxTable;
use std::sync::OnceLock;

fn parse(text: &str) -> SBoxTable {
    SBoxTable::from_hex_text(text).expect("vendored s-box table is well formed")
}

pub(crate) fn aes_sbox() -> &'static SBoxTable {
    static T: OnceLock<SBoxTable> = OnceLock::new();
    T.get_or_init(|| parse(include_str!("../../data/aes_sbox.hex")))
}

pub(crate) fn aes_inv_sbox() -> &'static SBoxTable {
    static T: OnceLock<SBoxTable> = OnceLock::new();
    T.get_or_init(|| aes_sbox().inverse().expect("AES s-box is bijective"))
}

pub(crate) fn sm4_sbox() -> &'static SBoxTable {
    static T: OnceLock<SBoxTable> = OnceLock::new();
    T.get_or_init(|| parse(include_str!("../../data/sm4_sbox.hex")))
}

/// Camellia s1..s4.
pub(crate) fn camellia_sboxes() -> &'static [SBoxTable; 4] {
    static T: OnceLock<[SBoxTable; 4]> = OnceLock::new();
    T.get_or_init(|| {
        let s1 = parse(include_str!("../../data/camellia_s1.hex"));
        let s2 = SBoxTable::from_fn(|x| s1.get(x).rotate_left(1));
        let s3 = SBoxTable::from_fn(|x| s1.get(x).rotate_left(7));
        let s4 = SBoxTable::from_fn(|x| s1.get(x.rotate_left(1)));
        [s1, s2, s3, s4]
    })
}

/// DES S1..S8 as 64-entry arrays indexed by the 6-bit input, first bit most significant.
pub(crate) fn des_sboxes() -> &'static [[u8; 64]; 8] {
    static T: OnceLock<[[u8; 64]; 8]> = OnceLock::new();
    T.get_or_init(|| {
        let vals: Vec<u8> = include_str!("../../data/des_sboxes.txt")
            .lines()
            .filter(|l| !l.trim_start().starts_with('#'))
            .flat_map(str::split_whitespace)
            .map(|t| t.parse().expect("DES table entry is a decimal nibble"))
            .collect();
        assert_eq!(vals.len(), 512, "DES table holds eight 64-entry boxes");
        let mut out = [[0u8; 64]; 8];
        for (i, v) in vals.into_iter().enumerate() {
            out[i / 64][i % 64] = v;
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_tables_are_bijective_where_required() {
        assert!(aes_sbox().is_bijective());
        assert!(sm4_sbox().is_bijective());
        assert_eq!(aes_sbox().get(0x00), 0x63);
        assert_eq!(aes_sbox().get(0x53), 0xED);
        assert_eq!(sm4_sbox().get(0x00), 0xD6);
        assert_eq!(camellia_sboxes()[0].get(0x00), 0x70);
    }

    #[test]
    fn des_rows_are_permutations_of_nibbles() {
        for sb in des_sboxes() {
            for row in 0..4 {
                let mut seen = [false; 16];
                for col in 0..16 {
                    let idx = ((row & 2) << 4) | (col << 1) | (row & 1);
                    seen[sb[idx] as usize] = true;
                }
                assert!(seen.iter().all(|&s| s));
            }
        }
    }
}
