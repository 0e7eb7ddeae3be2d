//! Hard-decision gradient-descent bit flipping.
//!
//! Bit reliability is the inversion function
//! `agree + sum over adjacent checks of (+1 satisfied, -1 unsatisfied)`,
//! where `agree` is +1 while the bit still equals the channel output.

use super::code::{bits_to_bytes, QcLdpcCode};
use super::ReliabilityError;

pub const DEFAULT_MAX_ITER: usize = 30;

/// Which bits one iteration may flip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FlipSchedule {
    /// The single lowest-score bit of the whole word.
    Global,
    /// In each circulant column in turn, its lowest-score bit if that score is
    /// at most the threshold. The threshold starts at -1 and rises to 0 after an
    /// iteration without flips; a second idle iteration falls back to the global rule.
    #[default]
    PerCirculant,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeResult {
    /// Decoded payload, `None` when checks remain unsatisfied.
    pub data: Option<Vec<u8>>,
    pub codeword: Vec<u8>,
    pub iterations_used: usize,
    pub bits_flipped: usize,
}

impl DecodeResult {
    pub fn succeeded(&self) -> bool {
        self.data.is_some()
    }
}

struct State<'a> {
    code: &'a QcLdpcCode,
    received: &'a [u8],
    bits: Vec<u8>,
    syndrome: Vec<u8>,
    unsatisfied: usize,
    flips: usize,
}

impl State<'_> {
    fn score(&self, b: usize) -> i32 {
        let agree = if self.bits[b] == self.received[b] { 1 } else { -1 };
        let checks = self.code.bit_neighbors(b);
        let bad: i32 = checks.iter().map(|&c| self.syndrome[c as usize] as i32).sum();
        agree + checks.len() as i32 - 2 * bad
    }

    /// Lowest score in `range`, ties to the lowest index.
    fn min_in(&self, range: std::ops::Range<usize>) -> (usize, i32) {
        let mut best = (range.start, i32::MAX);
        for b in range {
            let s = self.score(b);
            if s < best.1 {
                best = (b, s);
            }
        }
        best
    }

    fn flip(&mut self, b: usize) {
        self.bits[b] ^= 1;
        self.flips += 1;
        for &c in self.code.bit_neighbors(b) {
            let s = &mut self.syndrome[c as usize];
            *s ^= 1;
            if *s == 1 {
                self.unsatisfied += 1;
            } else {
                self.unsatisfied -= 1;
            }
        }
    }
}

pub fn gdbf_decode(received: &[u8], code: &QcLdpcCode, max_iter: usize) -> Result<DecodeResult, ReliabilityError> {
    gdbf_decode_with(received, code, max_iter, FlipSchedule::default())
}

pub fn gdbf_decode_with(
    received: &[u8],
    code: &QcLdpcCode,
    max_iter: usize,
    schedule: FlipSchedule,
) -> Result<DecodeResult, ReliabilityError> {
    if received.len() != code.n() {
        return Err(ReliabilityError::SizeMismatch { expected: code.n(), actual: received.len(), unit: "codeword bits" });
    }
    let syndrome = code.syndrome(received);
    let unsatisfied = syndrome.iter().map(|&s| s as usize).sum();
    let mut st = State { code, received, bits: received.to_vec(), syndrome, unsatisfied, flips: 0 };
    let mut iterations = 0;
    let mut threshold = -1;
    while st.unsatisfied > 0 && iterations < max_iter {
        iterations += 1;
        let before = st.flips;
        if schedule == FlipSchedule::PerCirculant {
            let z = code.z();
            for j in 0..code.block_cols() {
                let (b, s) = st.min_in(j * z..(j + 1) * z);
                if s <= threshold {
                    st.flip(b);
                }
            }
            if st.flips > before {
                threshold = -1;
                continue;
            }
            if threshold < 0 {
                threshold = 0;
                continue;
            }
            threshold = -1;
        }
        if st.flips == before {
            let (b, _) = st.min_in(0..code.n());
            st.flip(b);
        }
    }
    let data = (st.unsatisfied == 0).then(|| bits_to_bytes(&st.bits[..code.k()]));
    Ok(DecodeResult { data, codeword: st.bits, iterations_used: iterations, bits_flipped: st.flips })
}
