//! Quasi-cyclic LDPC code in approximate lower-triangular form.
//!
//! Block column `k` (data first) is followed by one gap column and a
//! triangular part: triangular column `t` holds the identity at block row `t`
//! and nothing above it. Encoding solves the gap column through a dense
//! `z x z` inverse, then back-substitutes.

use super::ReliabilityError;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QcLdpcCode {
    z: usize,
    rows: usize,
    cols: usize,
    data_cols: usize,
    /// `shifts[i * cols + j]` is the circulant shift at block `(i, j)`.
    shifts: Vec<Option<u16>>,
    /// Inverse of the gap system, one row of bits per output bit.
    phi_inv: Vec<Vec<u8>>,
    check_ptr: Vec<u32>,
    check_bits: Vec<u32>,
    bit_ptr: Vec<u32>,
    bit_checks: Vec<u32>,
}

/// Unpacks bytes most significant bit first.
pub fn bytes_to_bits(bytes: &[u8]) -> Vec<u8> {
    bytes.iter().flat_map(|&b| (0..8).rev().map(move |i| (b >> i) & 1)).collect()
}

pub fn bits_to_bytes(bits: &[u8]) -> Vec<u8> {
    bits.chunks(8).map(|c| c.iter().fold(0u8, |acc, &b| (acc << 1) | (b & 1))).collect()
}

const PARITY_WEIGHT: usize = 3;

impl QcLdpcCode {
    /// Rate-0.88 code over one 4 KB page: 256 data and 35 parity circulants of 128 bits.
    pub fn page(seed: u64) -> Self {
        Self::generate(128, 256, 35, 3, seed).expect("page code parameters are valid")
    }

    /// Small code for exhaustive checks: `n = 64`, `k = 40`.
    pub fn toy() -> Self {
        Self::generate(8, 5, 3, 3, 0).expect("toy code parameters are valid")
    }

    /// Builds a code by greedy lowest-degree row placement, rejecting shifts that close 4-cycles.
    pub fn generate(z: usize, data_cols: usize, rows: usize, col_weight: usize, seed: u64) -> Result<Self, ReliabilityError> {
        if rows < 3 || col_weight > rows || z < 2 || z > u16::MAX as usize {
            return Err(ReliabilityError::InvalidCode("need at least 3 block rows and weight <= rows".into()));
        }
        let cols = data_cols + rows;
        let mut shifts = vec![None; rows * cols];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gap = data_cols;
        for t in 0..rows - 1 {
            let j = gap + 1 + t;
            shifts[t * cols + j] = Some(0);
            for i in (t + 1..rows).take(PARITY_WEIGHT - 1) {
                shifts[i * cols + j] = Some(pick_shift(&shifts, cols, z, i, j, &mut rng));
            }
        }
        // The base pattern must itself be invertible mod 2, so the row set is searched too.
        let mut row_sets: Vec<Vec<usize>> = (1..rows - 1).rev().map(|mid| vec![0, mid, rows - 1]).collect();
        row_sets.push(vec![0, rows - 1]);
        'search: for set in &row_sets {
            for _ in 0..8 {
                for i in 0..rows {
                    shifts[i * cols + gap] = None;
                }
                for &i in set {
                    shifts[i * cols + gap] = Some(pick_shift(&shifts, cols, z, i, gap, &mut rng));
                }
                if gap_inverse(z, rows, cols, data_cols, &shifts).is_some() {
                    break 'search;
                }
            }
        }
        let mut degree: Vec<usize> = (0..rows).map(|i| (0..cols).filter(|&j| shifts[i * cols + j].is_some()).count()).collect();
        for j in 0..data_cols {
            let mut order: Vec<usize> = (0..rows).collect();
            order.shuffle(&mut rng);
            order.sort_by_key(|&i| degree[i]);
            for &i in order.iter().take(col_weight) {
                let s = pick_shift(&shifts, cols, z, i, j, &mut rng);
                shifts[i * cols + j] = Some(s);
                degree[i] += 1;
            }
        }
        Self::from_shifts(z, rows, cols, data_cols, shifts)
    }

    fn from_shifts(z: usize, rows: usize, cols: usize, data_cols: usize, shifts: Vec<Option<u16>>) -> Result<Self, ReliabilityError> {
        if rows < 3 || data_cols + rows != cols || shifts.len() != rows * cols {
            return Err(ReliabilityError::InvalidCode("block dimensions disagree".into()));
        }
        if shifts.iter().flatten().any(|&s| s as usize >= z) {
            return Err(ReliabilityError::InvalidCode("shift exceeds circulant size".into()));
        }
        for t in 0..rows - 1 {
            let j = data_cols + 1 + t;
            if shifts[t * cols + j] != Some(0) || (0..t).any(|i| shifts[i * cols + j].is_some()) {
                return Err(ReliabilityError::InvalidCode(format!("triangular column {t} lacks an identity diagonal")));
            }
        }
        let phi_inv = gap_inverse(z, rows, cols, data_cols, &shifts)
            .ok_or_else(|| ReliabilityError::InvalidCode("gap system is singular".into()))?;
        let n = cols * z;
        let mut check_ptr = vec![0u32];
        let mut check_bits = Vec::new();
        let mut per_bit: Vec<Vec<u32>> = vec![Vec::new(); n];
        for i in 0..rows {
            for r in 0..z {
                let c = (i * z + r) as u32;
                for j in 0..cols {
                    if let Some(s) = shifts[i * cols + j] {
                        let b = j * z + (r + s as usize) % z;
                        check_bits.push(b as u32);
                        per_bit[b].push(c);
                    }
                }
                check_ptr.push(check_bits.len() as u32);
            }
        }
        let mut bit_ptr = vec![0u32];
        let mut bit_checks = Vec::new();
        for list in per_bit {
            bit_checks.extend(list);
            bit_ptr.push(bit_checks.len() as u32);
        }
        Ok(QcLdpcCode { z, rows, cols, data_cols, shifts, phi_inv, check_ptr, check_bits, bit_ptr, bit_checks })
    }

    pub fn z(&self) -> usize {
        self.z
    }
    pub fn n(&self) -> usize {
        self.cols * self.z
    }
    pub fn k(&self) -> usize {
        self.data_cols * self.z
    }
    pub fn checks(&self) -> usize {
        self.rows * self.z
    }
    pub fn block_rows(&self) -> usize {
        self.rows
    }
    pub fn block_cols(&self) -> usize {
        self.cols
    }
    pub fn rate(&self) -> f64 {
        self.data_cols as f64 / self.cols as f64
    }
    pub fn shift(&self, row: usize, col: usize) -> Option<u16> {
        self.shifts[row * self.cols + col]
    }

    pub fn check_neighbors(&self, c: usize) -> &[u32] {
        &self.check_bits[self.check_ptr[c] as usize..self.check_ptr[c + 1] as usize]
    }

    pub fn bit_neighbors(&self, b: usize) -> &[u32] {
        &self.bit_checks[self.bit_ptr[b] as usize..self.bit_ptr[b + 1] as usize]
    }

    /// Parity of every check over `bits`.
    pub fn syndrome(&self, bits: &[u8]) -> Vec<u8> {
        (0..self.checks()).map(|c| self.check_neighbors(c).iter().fold(0u8, |acc, &b| acc ^ bits[b as usize])).collect()
    }

    pub fn is_codeword(&self, bits: &[u8]) -> bool {
        bits.len() == self.n() && self.syndrome(bits).iter().all(|&s| s == 0)
    }

    pub fn has_four_cycles(&self) -> bool {
        (0..self.rows).any(|i| {
            (0..self.cols).any(|j| self.shift(i, j).is_some_and(|s| closes_four_cycle(&self.shifts, self.cols, self.z, i, j, s)))
        })
    }

    /// Plain-text base matrix: a header line, then one line per block row of `col:shift` pairs.
    pub fn to_shift_table(&self) -> String {
        let mut out = format!("qc-ldpc z={} rows={} cols={} data_cols={}\n", self.z, self.rows, self.cols, self.data_cols);
        for i in 0..self.rows {
            let parts: Vec<String> = (0..self.cols).filter_map(|j| self.shift(i, j).map(|s| format!("{j}:{s}"))).collect();
            let _ = writeln!(out, "{}", parts.join(" "));
        }
        out
    }

    pub fn from_shift_table(text: &str) -> Result<Self, ReliabilityError> {
        let bad = |m: &str| ReliabilityError::InvalidCode(m.to_string());
        let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| bad("empty table"))?;
        let mut fields = header.split_whitespace();
        if fields.next() != Some("qc-ldpc") {
            return Err(bad("missing qc-ldpc header"));
        }
        let mut dims = [0usize; 4];
        for (slot, key) in dims.iter_mut().zip(["z", "rows", "cols", "data_cols"]) {
            let f = fields.next().ok_or_else(|| bad("short header"))?;
            let v = f.strip_prefix(key).and_then(|r| r.strip_prefix('=')).ok_or_else(|| bad("header field order"))?;
            *slot = v.parse().map_err(|_| bad("header value"))?;
        }
        let [z, rows, cols, data_cols] = dims;
        let mut shifts = vec![None; rows * cols];
        let mut seen = 0;
        for (i, line) in lines.enumerate() {
            if i >= rows {
                return Err(bad("too many block rows"));
            }
            for pair in line.split_whitespace() {
                let (j, s) = pair.split_once(':').ok_or_else(|| bad("entry is not col:shift"))?;
                let j: usize = j.parse().map_err(|_| bad("column index"))?;
                let s: u16 = s.parse().map_err(|_| bad("shift value"))?;
                if j >= cols {
                    return Err(bad("column out of range"));
                }
                shifts[i * cols + j] = Some(s);
            }
            seen += 1;
        }
        if seen != rows {
            return Err(bad("missing block rows"));
        }
        Self::from_shifts(z, rows, cols, data_cols, shifts)
    }
}

/// Random shift for block `(i, j)`, avoiding 4-cycles when a few draws allow it.
fn pick_shift(shifts: &[Option<u16>], cols: usize, z: usize, i: usize, j: usize, rng: &mut ChaCha8Rng) -> u16 {
    let mut s = rng.gen_range(0..z) as u16;
    for _ in 0..4 * z {
        if !closes_four_cycle(shifts, cols, z, i, j, s) {
            break;
        }
        s = rng.gen_range(0..z) as u16;
    }
    s
}

/// Whether `(i, j)` with shift `s` would close a length-4 cycle with existing blocks.
fn closes_four_cycle(shifts: &[Option<u16>], cols: usize, z: usize, i: usize, j: usize, s: u16) -> bool {
    let rows = shifts.len() / cols;
    for i2 in (0..rows).filter(|&r| r != i) {
        let Some(s2) = shifts[i2 * cols + j] else { continue };
        for j2 in (0..cols).filter(|&c| c != j) {
            if let (Some(a), Some(b)) = (shifts[i * cols + j2], shifts[i2 * cols + j2]) {
                let lhs = (s as usize + z - a as usize) % z;
                let rhs = (s2 as usize + z - b as usize) % z;
                if lhs == rhs {
                    return true;
                }
            }
        }
    }
    false
}

/// `(P^s v)[r] = v[(r + s) mod z]`.
fn rotate_into(acc: &mut [u8], v: &[u8], s: usize) {
    let z = acc.len();
    for r in 0..z {
        acc[r] ^= v[(r + s) % z];
    }
}

fn blocks_xor(a: &mut [u8], b: &[u8]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x ^= y;
    }
}

/// Solves `T t = x` for the triangular columns; `x` holds block rows `0..rows - 1`.
fn back_substitute(z: usize, rows: usize, cols: usize, gap: usize, shifts: &[Option<u16>], x: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let mut t: Vec<Vec<u8>> = Vec::with_capacity(rows - 1);
    for i in 0..rows - 1 {
        let mut block = x[i].clone();
        for (k, tk) in t.iter().enumerate() {
            if let Some(sh) = shifts[i * cols + gap + 1 + k] {
                rotate_into(&mut block, tk, sh as usize);
            }
        }
        debug_assert_eq!(block.len(), z);
        t.push(block);
    }
    t
}

/// Contribution of the triangular columns to the last block row.
fn last_row_of(z: usize, rows: usize, cols: usize, gap: usize, shifts: &[Option<u16>], t: &[Vec<u8>]) -> Vec<u8> {
    let mut out = vec![0u8; z];
    for (k, tk) in t.iter().enumerate() {
        if let Some(sh) = shifts[(rows - 1) * cols + gap + 1 + k] {
            rotate_into(&mut out, tk, sh as usize);
        }
    }
    out
}

/// Gap column applied to a vector: upper block rows and the last block row.
fn gap_column(z: usize, rows: usize, cols: usize, gap: usize, shifts: &[Option<u16>], v: &[u8]) -> (Vec<Vec<u8>>, Vec<u8>) {
    let mut col = vec![vec![0u8; z]; rows];
    for (i, block) in col.iter_mut().enumerate() {
        if let Some(sh) = shifts[i * cols + gap] {
            rotate_into(block, v, sh as usize);
        }
    }
    let last = col.pop().unwrap();
    (col, last)
}

/// Inverse of `phi = D + E T^-1 B` over GF(2), if it exists.
fn gap_inverse(z: usize, rows: usize, cols: usize, data_cols: usize, shifts: &[Option<u16>]) -> Option<Vec<Vec<u8>>> {
    let gap = data_cols;
    // Column `c` of phi is phi applied to the unit vector `e_c`.
    let mut phi = vec![vec![0u8; z]; z];
    for c in 0..z {
        let mut e = vec![0u8; z];
        e[c] = 1;
        let (upper, mut last) = gap_column(z, rows, cols, gap, shifts, &e);
        let t = back_substitute(z, rows, cols, gap, shifts, &upper);
        blocks_xor(&mut last, &last_row_of(z, rows, cols, gap, shifts, &t));
        for r in 0..z {
            phi[r][c] = last[r];
        }
    }
    let mut inv: Vec<Vec<u8>> = (0..z).map(|r| (0..z).map(|c| u8::from(r == c)).collect()).collect();
    for col in 0..z {
        let pivot = (col..z).find(|&r| phi[r][col] == 1)?;
        phi.swap(col, pivot);
        inv.swap(col, pivot);
        for r in 0..z {
            if r != col && phi[r][col] == 1 {
                let (pr, ir) = (phi[col].clone(), inv[col].clone());
                blocks_xor(&mut phi[r], &pr);
                blocks_xor(&mut inv[r], &ir);
            }
        }
    }
    Some(inv)
}

/// Systematic encoding: data bits occupy the first `k` positions.
pub fn ldpc_encode(data: &[u8], code: &QcLdpcCode) -> Result<Vec<u8>, ReliabilityError> {
    if data.len() * 8 != code.k() {
        return Err(ReliabilityError::SizeMismatch { expected: code.k() / 8, actual: data.len(), unit: "data bytes" });
    }
    let (z, rows, cols, gap) = (code.z, code.rows, code.cols, code.data_cols);
    let mut bits = bytes_to_bits(data);
    let mut s = vec![vec![0u8; z]; rows];
    for (i, si) in s.iter_mut().enumerate() {
        for j in 0..gap {
            if let Some(sh) = code.shifts[i * cols + j] {
                rotate_into(si, &bits[j * z..(j + 1) * z], sh as usize);
            }
        }
    }
    let s_last = s.pop().unwrap();
    let t0 = back_substitute(z, rows, cols, gap, &code.shifts, &s);
    let mut y = s_last;
    blocks_xor(&mut y, &last_row_of(z, rows, cols, gap, &code.shifts, &t0));
    let p1: Vec<u8> = code.phi_inv.iter().map(|row| row.iter().zip(&y).fold(0u8, |acc, (a, b)| acc ^ (a & b))).collect();
    let (upper, _) = gap_column(z, rows, cols, gap, &code.shifts, &p1);
    for (si, ui) in s.iter_mut().zip(&upper) {
        blocks_xor(si, ui);
    }
    let t = back_substitute(z, rows, cols, gap, &code.shifts, &s);
    bits.extend(p1);
    for block in t {
        bits.extend(block);
    }
    Ok(bits)
}
