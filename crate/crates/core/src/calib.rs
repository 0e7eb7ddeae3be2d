//! Calibration constants: cycle costs of the engines and host-side latencies.
//!
//! Defaults ship in `data/calibration.toml`. A user file only needs the keys
//! it overrides; tables are merged key by key over the defaults.

use crate::bce::CipherId;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::Path;
use thiserror::Error;

pub const DEFAULT_CALIBRATION: &str = include_str!("../data/calibration.toml");

#[derive(Debug, Error)]
pub enum CalibError {
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parsing calibration: {0}")]
    Parse(String),
    #[error("calibration is missing {0}")]
    Missing(String),
}

#[derive(Debug, Clone, Deserialize)]
pub struct Calibration {
    pub bce: BceCalib,
    pub ace: AceCalib,
    pub host: HostCalib,
    pub ncp: NcpCalib,
    pub ssd: SsdCalib,
}

#[derive(Debug, Clone, Deserialize)]
pub struct BceCalib {
    pub pipeline_fill_cycles: u64,
    /// Per-block cycles, keyed by lower-case cipher name.
    pub cycles: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct AceCalib {
    pub hash_alus_per_engine: u32,
    pub sha256_block_cycles: u64,
    pub sha512_block_cycles: u64,
    pub keccak_permutation_cycles: u64,
    pub ntt_cycles: u64,
    pub fft_cycles: u64,
    pub modmul_cycles_per_word: u64,
    pub comparison_cycles: u64,
    pub pointwise_cycles: u64,
    /// Cycle schedules per scheme and operation.
    pub schedules: BTreeMap<String, ScheduleCalib>,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq, Default)]
pub struct OpCounts {
    #[serde(default)]
    pub keccak: u64,
    #[serde(default)]
    pub ntt: u64,
    #[serde(default)]
    pub fft: u64,
    #[serde(default)]
    pub modmul: u64,
    #[serde(default)]
    pub pointwise: u64,
    #[serde(default)]
    pub comparison: u64,
    /// Independent Keccak instances that may run on separate hash ALUs.
    #[serde(default = "one")]
    pub keccak_parallelism: u64,
}

fn one() -> u64 {
    1
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct ScheduleCalib {
    pub sign: OpCounts,
    pub verify: OpCounts,
}

#[derive(Debug, Clone, Deserialize)]
pub struct HostCalib {
    /// Host block-cipher throughput in nanoseconds per byte.
    pub cipher_ns_per_byte: BTreeMap<String, f64>,
    pub cipher_setup_us: f64,
    pub sha256_ns_per_byte: f64,
    pub sha512_ns_per_byte: f64,
    /// Core sign and verify times in microseconds, excluding message hashing.
    pub sign_us: BTreeMap<String, f64>,
    pub verify_us: BTreeMap<String, f64>,
    /// Host interface transfer in microseconds per KiB.
    pub transfer_us_per_kib: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct NcpCalib {
    /// Engines beside the controller.
    pub engines: u32,
    /// One LPDDR round trip per 4 KiB crypto unit.
    pub dram_round_trip_us: f64,
    /// Controller-side cycle multiplier relative to the in-die engine.
    pub cycle_scale: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct SsdCalib {
    /// FTL lookup cost: `ftl_coeff_us * kib^ftl_exponent`.
    pub ftl_coeff_us: f64,
    pub ftl_exponent: f64,
    pub reconfigure_us: f64,
    pub ldpc_us_per_page: f64,
    pub dram_us_per_kib: f64,
    pub gc_free_fraction: f64,
    pub wl_spread_threshold: u32,
}

fn merge(base: &mut toml::Value, over: toml::Value) {
    match (base, over) {
        (toml::Value::Table(b), toml::Value::Table(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

impl Default for Calibration {
    fn default() -> Self {
        Calibration::from_toml_str(DEFAULT_CALIBRATION).expect("shipped calibration parses")
    }
}

impl Calibration {
    pub fn from_toml_str(text: &str) -> Result<Self, CalibError> {
        let v: toml::Value = toml::from_str(text).map_err(|e| CalibError::Parse(e.to_string()))?;
        let cal: Calibration = v.try_into().map_err(|e: toml::de::Error| CalibError::Parse(e.to_string()))?;
        cal.validate()?;
        Ok(cal)
    }

    /// Defaults with the given TOML text merged on top.
    pub fn with_overrides(text: &str) -> Result<Self, CalibError> {
        let mut base: toml::Value = toml::from_str(DEFAULT_CALIBRATION).map_err(|e| CalibError::Parse(e.to_string()))?;
        let over: toml::Value = toml::from_str(text).map_err(|e| CalibError::Parse(e.to_string()))?;
        merge(&mut base, over);
        let cal: Calibration = base.try_into().map_err(|e: toml::de::Error| CalibError::Parse(e.to_string()))?;
        cal.validate()?;
        Ok(cal)
    }

    pub fn load_overrides(path: &Path) -> Result<Self, CalibError> {
        let text = std::fs::read_to_string(path).map_err(|source| CalibError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Calibration::with_overrides(&text)
    }

    fn validate(&self) -> Result<(), CalibError> {
        for id in CipherId::ALL {
            if !self.bce.cycles.contains_key(id.key()) {
                return Err(CalibError::Missing(format!("bce.cycles.{}", id.key())));
            }
            if !self.host.cipher_ns_per_byte.contains_key(id.key()) {
                return Err(CalibError::Missing(format!("host.cipher_ns_per_byte.{}", id.key())));
            }
        }
        Ok(())
    }

    pub fn cipher_cycles(&self, id: CipherId) -> u64 {
        self.bce.cycles[id.key()]
    }

    pub fn host_cipher_ns_per_byte(&self, id: CipherId) -> f64 {
        self.host.cipher_ns_per_byte[id.key()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_cover_every_cipher() {
        let cal = Calibration::default();
        for id in CipherId::ALL {
            assert!(cal.cipher_cycles(id) > 0);
        }
    }

    #[test]
    fn overrides_replace_only_named_keys() {
        let base = Calibration::default();
        let cal = Calibration::with_overrides("[bce.cycles]\naes = 7\n").unwrap();
        assert_eq!(cal.cipher_cycles(CipherId::Aes), 7);
        assert_eq!(cal.cipher_cycles(CipherId::Sm4), base.cipher_cycles(CipherId::Sm4));
    }

    #[test]
    fn malformed_text_is_an_error() {
        assert!(matches!(Calibration::with_overrides("[bce"), Err(CalibError::Parse(_))));
    }
}
