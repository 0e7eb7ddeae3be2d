//! Benes permutation network in butterfly layout.
//!
//! A width-`n` network (`n = 2^L`) has `2L - 1` switch columns. Column `l`
//! on the way in and column `l` on the way out pair bit `p` with bit
//! `p + (n >> (l + 1))`; the innermost column is shared. Each column is a
//! mask over the lower member of every pair, applied as a delta swap.

use super::{DatapathError, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Upper,
    Lower,
}

/// Switch settings realizing `target_perm` on a `width`-bit word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenesConfig {
    width: u32,
    in_masks: Vec<u64>,
    out_masks: Vec<u64>,
    target_perm: Vec<usize>,
}

/// Two 32-bit networks joined by an outer switch column into one 64-bit permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinedBenes {
    outer_in: u64,
    outer_out: u64,
    upper: BenesConfig,
    lower: BenesConfig,
    target_perm: Vec<usize>,
}

#[inline]
fn delta_swap(x: u64, mask: u64, d: u32) -> u64 {
    let t = ((x >> d) ^ x) & mask;
    x ^ t ^ (t << d)
}

fn check_perm(perm: &[usize]) -> Result<u32, DatapathError> {
    let n = perm.len();
    if !(2..=64).contains(&n) || !n.is_power_of_two() {
        return Err(DatapathError::InvalidPermutation(format!(
            "width {n} is not a power of two in 2..=64"
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(DatapathError::InvalidPermutation(format!(
                "entry {p} repeated or out of range"
            )));
        }
        seen[p] = true;
    }
    Ok(n as u32)
}

/// Looping-algorithm routing of a sub-block of size `perm.len()` at `base`.
fn route_block(perm: &[usize], base: usize, level: usize, in_masks: &mut [u64], out_masks: &mut [u64]) {
    let m = perm.len();
    if m == 2 {
        if perm[0] == 1 {
            in_masks[level] |= 1 << base;
        }
        return;
    }
    let h = m / 2;
    let mut inv = vec![0usize; m];
    for (j, &s) in perm.iter().enumerate() {
        inv[s] = j;
    }
    let partner = |i: usize| if i < h { i + h } else { i - h };
    let flip = |s: Side| match s {
        Side::Upper => Side::Lower,
        Side::Lower => Side::Upper,
    };

    let mut side: Vec<Option<Side>> = vec![None; m];
    for start in 0..m {
        if side[start].is_some() {
            continue;
        }
        side[start] = Some(Side::Upper);
        let mut cur = start;
        loop {
            let k = perm[partner(inv[cur])];
            if side[k].is_some() {
                break;
            }
            let sk = flip(side[cur].unwrap());
            side[k] = Some(sk);
            let k2 = partner(k);
            if side[k2].is_some() {
                break;
            }
            side[k2] = Some(flip(sk));
            cur = k2;
        }
    }
    let side: Vec<Side> = side.into_iter().map(Option::unwrap).collect();

    for s in 0..h {
        if side[s] == Side::Lower {
            in_masks[level] |= 1 << (base + s);
        }
        if side[perm[s]] == Side::Lower {
            out_masks[level] |= 1 << (base + s);
        }
    }

    let mut up = vec![0usize; h];
    let mut lo = vec![0usize; h];
    for j in 0..h {
        let (a, b) = (perm[j], perm[j + h]);
        let (u, l) = if side[a] == Side::Upper { (a, b) } else { (b, a) };
        up[j] = u % h;
        lo[j] = l % h;
    }
    route_block(&up, base, level + 1, in_masks, out_masks);
    route_block(&lo, base + h, level + 1, in_masks, out_masks);
}

/// Computes switch settings so that output bit `i` equals input bit `perm[i]`.
pub fn route_benes(perm: &[usize]) -> Result<BenesConfig, DatapathError> {
    let width = check_perm(perm)?;
    let levels = width.trailing_zeros() as usize;
    let mut in_masks = vec![0u64; levels];
    let mut out_masks = vec![0u64; levels - 1];
    route_block(perm, 0, 0, &mut in_masks, &mut out_masks);
    Ok(BenesConfig {
        width,
        in_masks,
        out_masks,
        target_perm: perm.to_vec(),
    })
}

impl BenesConfig {
    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn target_perm(&self) -> &[usize] {
        &self.target_perm
    }

    /// Number of switches set to cross, across all columns.
    pub fn crossed_switches(&self) -> u32 {
        self.in_masks.iter().chain(&self.out_masks).map(|m| m.count_ones()).sum()
    }

    /// Applies the network to the low `width` bits of `x`.
    pub fn apply(&self, x: u64) -> u64 {
        let n = self.width;
        let mut x = x;
        for (l, &m) in self.in_masks.iter().enumerate() {
            x = delta_swap(x, m, n >> (l + 1));
        }
        for (l, &m) in self.out_masks.iter().enumerate().rev() {
            x = delta_swap(x, m, n >> (l + 1));
        }
        x
    }
}

impl CombinedBenes {
    /// Routes a 64-bit permutation and splits it across the two 32-bit networks.
    pub fn route(perm: &[usize]) -> Result<Self, DatapathError> {
        if perm.len() != 64 {
            return Err(DatapathError::WidthMismatch {
                expected: 64,
                actual: perm.len() as u32,
            });
        }
        let full = route_benes(perm)?;
        let half = |shift: u32| BenesConfig {
            width: 32,
            in_masks: full.in_masks[1..].iter().map(|m| (m >> shift) & 0xFFFF_FFFF).collect(),
            out_masks: full.out_masks[1..].iter().map(|m| (m >> shift) & 0xFFFF_FFFF).collect(),
            target_perm: Vec::new(),
        };
        Ok(CombinedBenes {
            outer_in: full.in_masks[0],
            outer_out: full.out_masks[0],
            upper: half(0),
            lower: half(32),
            target_perm: full.target_perm,
        })
    }

    pub fn target_perm(&self) -> &[usize] {
        &self.target_perm
    }

    pub fn apply(&self, x: u64) -> u64 {
        let x = delta_swap(x, self.outer_in, 32);
        let lo = self.upper.apply(x & 0xFFFF_FFFF);
        let hi = self.lower.apply(x >> 32);
        delta_swap(lo | (hi << 32), self.outer_out, 32)
    }
}

/// Permutation unit operating on a word of the configured width.
pub fn benes_permute(input: Word, cfg: &BenesConfig) -> Result<Word, DatapathError> {
    if input.width() != cfg.width {
        return Err(DatapathError::WidthMismatch {
            expected: cfg.width,
            actual: input.width(),
        });
    }
    Word::new(cfg.apply(input.value()), cfg.width)
}

/// Permutation unit in joined 64-bit mode.
pub fn benes_permute_combined(input: Word, cfg: &CombinedBenes) -> Result<Word, DatapathError> {
    if input.width() != 64 {
        return Err(DatapathError::WidthMismatch {
            expected: 64,
            actual: input.width(),
        });
    }
    Word::new(cfg.apply(input.value()), 64)
}

/// Runs the two 32-bit networks independently on the two halves of a 64-bit word.
pub fn benes_permute_pair(x: u64, low: &BenesConfig, high: &BenesConfig) -> u64 {
    low.apply(x & 0xFFFF_FFFF) | (high.apply(x >> 32) << 32)
}

/// Direct bit-mapping reference: output bit `i` takes input bit `perm[i]`.
pub fn permute_bits_direct(x: u64, perm: &[usize]) -> u64 {
    perm.iter()
        .enumerate()
        .fold(0, |acc, (i, &p)| acc | (((x >> p) & 1) << i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(rng);
        p
    }

    #[test]
    fn identity_routes_to_pass_through() {
        let cfg = route_benes(&(0..32).collect::<Vec<_>>()).unwrap();
        assert_eq!(cfg.crossed_switches(), 0);
        assert_eq!(cfg.apply(0xDEAD_BEEF), 0xDEAD_BEEF);
    }

    #[test]
    fn bit_reversal_width_8() {
        let cfg = route_benes(&(0..8).rev().collect::<Vec<_>>()).unwrap();
        let out = benes_permute(Word::new(1, 8).unwrap(), &cfg).unwrap();
        assert_eq!(out.value(), 0x80);
    }

    #[test]
    fn swap_width_4_exhaustive() {
        let perm = [1, 0, 2, 3];
        let cfg = route_benes(&perm).unwrap();
        for x in 0..16u64 {
            assert_eq!(cfg.apply(x), permute_bits_direct(x, &perm));
        }
    }

    #[test]
    fn every_width_8_perm_exhaustive_sample() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let perm = random_perm(&mut rng, 8);
            let cfg = route_benes(&perm).unwrap();
            for x in 0..256u64 {
                assert_eq!(cfg.apply(x), permute_bits_direct(x, &perm));
            }
        }
    }

    #[test]
    fn random_perms_wide() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2usize, 16, 32, 64] {
            for _ in 0..200 {
                let perm = random_perm(&mut rng, n);
                let cfg = route_benes(&perm).unwrap();
                for _ in 0..50 {
                    let x: u64 = rng.gen::<u64>() & super::super::width_mask(n as u32);
                    assert_eq!(cfg.apply(x), permute_bits_direct(x, &perm));
                }
            }
        }
    }

    #[test]
    fn combined_mode_matches_direct() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let perm = random_perm(&mut rng, 64);
            let cfg = CombinedBenes::route(&perm).unwrap();
            for _ in 0..50 {
                let x: u64 = rng.gen();
                assert_eq!(cfg.apply(x), permute_bits_direct(x, &perm));
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(route_benes(&[0, 0, 1, 2]), Err(DatapathError::InvalidPermutation(_))));
        assert!(route_benes(&[0, 1, 2]).is_err());
        let cfg = route_benes(&[1, 0, 3, 2, 5, 4, 7, 6]).unwrap();
        assert!(matches!(
            benes_permute(Word::new(1, 16).unwrap(), &cfg),
            Err(DatapathError::WidthMismatch { .. })
        ));
    }
}
