//! Scenario runner: block-cipher program/read breakdowns, secure boot and
//! tamper-log signing against their deadlines, and steady-state FTL overhead.

mod report;

pub use report::{overhead_csv, overhead_svg, rows_csv, rows_svg};

use crate::ace::{self, ecdsa_op, pqc, pqc_latency, rsa_op, Curve, EcdsaKey, EcdsaOutput, RsaKey, RsaOutput, RsaPadding, SchemeId, SignOp, Verdict};
use crate::bce::CipherId;
use crate::calib::Calibration;
use crate::keys::{Challenge, KeyManager, PufParams, RoPufInstance};
use crate::ssd::{BootJob, IoOp, IoRequest, LatencyBreakdown, Placement, SignJob, SignSource, Ssd, SsdConfig, SsdError};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};
use thiserror::Error;

pub const BOOT_BOUND_MS: f64 = 100.0;
pub const LOG_BOUNDS_MS: [f64; 2] = [2.0, 15.0];
pub const LOG_ENTRY_MIN: u64 = 256;
pub const LOG_ENTRY_MAX: u64 = 10 * 1024;
pub const MIB: u64 = 1024 * 1024;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid scenario: {0}")]
    Validation(String),
    #[error(transparent)]
    Ssd(#[from] SsdError),
    #[error(transparent)]
    Crypto(#[from] ace::AceError),
    #[error("writing {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScenarioKind {
    BulkCipher,
    SecureBoot,
    TamperLog,
    FtlOverhead,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::BulkCipher => "bulk_cipher",
            ScenarioKind::SecureBoot => "secure_boot",
            ScenarioKind::TamperLog => "tamper_log",
            ScenarioKind::FtlOverhead => "ftl_overhead",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "bulk_cipher" | "cipher" => ScenarioKind::BulkCipher,
            "secure_boot" | "boot" => ScenarioKind::SecureBoot,
            "tamper_log" | "log" => ScenarioKind::TamperLog,
            "ftl_overhead" | "ftl" => ScenarioKind::FtlOverhead,
            _ => return Err(BenchError::Validation(format!("unknown scenario `{s}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub kind: ScenarioKind,
    /// Cipher names for bulk runs, scheme names for boot and log runs, both for overhead runs.
    pub algorithms: Vec<String>,
    /// Request sizes in bytes. Overhead runs take `[bulk, image, message]`.
    pub sizes: Vec<u64>,
    pub placements: Vec<Placement>,
    pub ops: Vec<IoOp>,
    pub bounds_ms: Vec<f64>,
}

impl Scenario {
    pub fn bulk_cipher() -> Self {
        Scenario {
            kind: ScenarioKind::BulkCipher,
            algorithms: CipherId::ALL.iter().map(|c| c.name().to_string()).collect(),
            sizes: vec![256 * 1024],
            placements: Placement::ALL.to_vec(),
            ops: vec![IoOp::Program, IoOp::Read],
            bounds_ms: Vec::new(),
        }
    }

    pub fn secure_boot() -> Self {
        Scenario {
            kind: ScenarioKind::SecureBoot,
            algorithms: SchemeId::ALL.iter().map(|s| s.name().to_string()).collect(),
            sizes: vec![10 * MIB, 15 * MIB],
            placements: Placement::ALL.to_vec(),
            ops: Vec::new(),
            bounds_ms: vec![BOOT_BOUND_MS],
        }
    }

    pub fn tamper_log() -> Self {
        Scenario {
            kind: ScenarioKind::TamperLog,
            algorithms: SchemeId::ALL.iter().map(|s| s.name().to_string()).collect(),
            sizes: vec![LOG_ENTRY_MIN, LOG_ENTRY_MAX],
            placements: Placement::ALL.to_vec(),
            ops: Vec::new(),
            bounds_ms: LOG_BOUNDS_MS.to_vec(),
        }
    }

    pub fn ftl_overhead() -> Self {
        let mut algorithms: Vec<String> = CipherId::ALL.iter().map(|c| c.name().to_string()).collect();
        algorithms.extend(SchemeId::ALL.iter().map(|s| s.name().to_string()));
        Scenario {
            kind: ScenarioKind::FtlOverhead,
            algorithms,
            sizes: vec![256 * 1024, 15 * MIB, 10 * 1024],
            placements: vec![Placement::Fv],
            ops: vec![IoOp::Program, IoOp::Read],
            bounds_ms: Vec::new(),
        }
    }

    pub fn preset(kind: ScenarioKind) -> Self {
        match kind {
            ScenarioKind::BulkCipher => Self::bulk_cipher(),
            ScenarioKind::SecureBoot => Self::secure_boot(),
            ScenarioKind::TamperLog => Self::tamper_log(),
            ScenarioKind::FtlOverhead => Self::ftl_overhead(),
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |m: String| Err(BenchError::Validation(m));
        if self.algorithms.is_empty() {
            return bad("algorithm list is empty".into());
        }
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return bad("sizes must be present and positive".into());
        }
        if self.placements.is_empty() {
            return bad("placement list is empty".into());
        }
        if let Some(b) = self.bounds_ms.iter().find(|b| !(b.is_finite() && **b > 0.0)) {
            return bad(format!("bound {b} ms is not positive"));
        }
        for a in &self.algorithms {
            let known = match self.kind {
                ScenarioKind::BulkCipher => a.parse::<CipherId>().is_ok(),
                ScenarioKind::SecureBoot | ScenarioKind::TamperLog => a.parse::<SchemeId>().is_ok(),
                ScenarioKind::FtlOverhead => a.parse::<CipherId>().is_ok() || a.parse::<SchemeId>().is_ok(),
            };
            if !known {
                return bad(format!("`{a}` is not valid for {}", self.kind));
            }
        }
        match self.kind {
            ScenarioKind::BulkCipher if self.ops.is_empty() => bad("bulk runs need an operation".into()),
            ScenarioKind::TamperLog if self.sizes.iter().any(|s| !(LOG_ENTRY_MIN..=LOG_ENTRY_MAX).contains(s)) => {
                bad(format!("log entries must be {LOG_ENTRY_MIN}..={LOG_ENTRY_MAX} bytes"))
            }
            ScenarioKind::FtlOverhead if self.sizes.len() != 3 => bad("overhead runs take [bulk, image, message] sizes".into()),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound {
    pub limit_ms: f64,
    pub met: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub scenario: ScenarioKind,
    pub operation: String,
    pub algorithm: String,
    pub size: u64,
    pub placement: Placement,
    pub breakdown: LatencyBreakdown,
    pub total_ms: f64,
    pub bounds: Vec<Bound>,
}

impl ReportRow {
    fn new(scenario: ScenarioKind, operation: &str, algorithm: &str, size: u64, placement: Placement, breakdown: LatencyBreakdown, limits: &[f64]) -> Self {
        let total_ms = breakdown.total_ms();
        ReportRow {
            scenario,
            operation: operation.to_string(),
            algorithm: algorithm.to_string(),
            size,
            placement,
            breakdown,
            total_ms,
            bounds: limits.iter().map(|&limit_ms| Bound { limit_ms, met: total_ms <= limit_ms }).collect(),
        }
    }

    /// All declared bounds met; `None` without bounds.
    pub fn bound_met(&self) -> Option<bool> {
        (!self.bounds.is_empty()).then(|| self.bounds.iter().all(|b| b.met))
    }

    pub fn bound(&self, limit_ms: f64) -> Option<bool> {
        self.bounds.iter().find(|b| b.limit_ms == limit_ms).map(|b| b.met)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OverheadRow {
    pub workload: String,
    pub algorithm: String,
    pub size: u64,
    pub fresh_ms: f64,
    pub steady_ms: f64,
}

impl OverheadRow {
    pub fn overhead_pct(&self) -> f64 {
        (self.steady_ms / self.fresh_ms - 1.0) * 100.0
    }
}

/// Average overhead per workload, in first-seen order.
pub fn overhead_averages(rows: &[OverheadRow]) -> Vec<(String, f64)> {
    let mut order: Vec<String> = Vec::new();
    let mut acc: HashMap<String, (f64, usize)> = HashMap::new();
    for r in rows {
        if !acc.contains_key(&r.workload) {
            order.push(r.workload.clone());
        }
        let e = acc.entry(r.workload.clone()).or_default();
        e.0 += r.overhead_pct();
        e.1 += 1;
    }
    order.into_iter().map(|w| {
        let (s, n) = acc[&w];
        (w, s / n as f64)
    }).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum MatrixRows {
    Latency(Vec<ReportRow>),
    Overhead(Vec<OverheadRow>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixReport {
    pub rows: MatrixRows,
    pub csv: PathBuf,
    pub svg: PathBuf,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub ssd: SsdConfig,
    pub calib: Calibration,
    pub seed: u64,
    pub fill_fraction: f64,
    pub overwrite_ops: u64,
    /// Logical page of the bulk and signing inputs.
    pub lba: u64,
    /// Latency cells start from the aged drive instead of a fresh one.
    pub steady_state: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            ssd: SsdConfig::default(),
            calib: Calibration::default(),
            seed: 1,
            fill_fraction: 0.9,
            overwrite_ops: 1_000_000,
            lba: 4096,
            steady_state: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct SignCosts {
    hash_cycles: u64,
    sign_cycles: u64,
    host_hash_us: f64,
    host_sign_us: f64,
}

struct Keys {
    rsa: RsaKey,
    ecdsa: EcdsaKey,
}

/// Runs scenario cells. Keys derive from a PUF seeded with the bench seed.
pub struct Bench {
    cfg: BenchConfig,
    keys: OnceLock<Keys>,
    aged: OnceLock<Ssd>,
    digests: Mutex<HashMap<(u64, u32), Vec<u8>>>,
}

impl Bench {
    pub fn new(cfg: BenchConfig) -> Result<Self, BenchError> {
        cfg.ssd.validate()?;
        Ok(Bench { cfg, keys: OnceLock::new(), aged: OnceLock::new(), digests: Mutex::new(HashMap::new()) })
    }

    pub fn config(&self) -> &BenchConfig {
        &self.cfg
    }

    fn keys(&self) -> &Keys {
        self.keys.get_or_init(|| {
            let puf = RoPufInstance::new(self.cfg.seed, PufParams::default());
            let km = KeyManager::enroll(&puf, &Challenge::disjoint(256)).expect("disjoint challenge fits the array");
            Keys { rsa: km.rsa_key(3072), ecdsa: km.ecdsa_key(Curve::P384) }
        })
    }

    fn calib(&self) -> &Calibration {
        &self.cfg.calib
    }

    fn new_ssd(&self) -> Result<Ssd, BenchError> {
        Ok(Ssd::new(self.cfg.ssd.clone(), self.cfg.calib.clone())?)
    }

    /// Drive a latency cell starts from.
    fn fresh_ssd(&self) -> Result<Ssd, BenchError> {
        if !self.cfg.steady_state {
            return self.new_ssd();
        }
        if let Some(ssd) = self.aged.get() {
            return Ok(ssd.clone());
        }
        let ssd = self.steady_state_ssd()?;
        Ok(self.aged.get_or_init(|| ssd).clone())
    }

    fn message(&self, bytes: u64) -> Vec<u8> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed ^ bytes.rotate_left(17));
        let mut m = vec![0u8; bytes as usize];
        rng.fill_bytes(&mut m);
        m
    }

    fn host_hash_us(&self, scheme: SchemeId, bytes: u64) -> f64 {
        let h = &self.calib().host;
        let per = match scheme.default_digest() {
            ace::HashVariant::Sha256 => h.sha256_ns_per_byte,
            ace::HashVariant::Sha512 => h.sha512_ns_per_byte,
        };
        bytes as f64 * per / 1000.0
    }

    fn host_us(map: &std::collections::BTreeMap<String, f64>, scheme: SchemeId) -> Result<f64, BenchError> {
        map.get(scheme.key()).copied().ok_or_else(|| BenchError::Validation(format!("no host timing for {}", scheme.key())))
    }

    /// Hash and sign costs; RSA and ECDSA produce and check a real signature.
    fn sign_costs(&self, scheme: SchemeId, bytes: u64) -> Result<SignCosts, BenchError> {
        let calib = self.calib();
        let host_hash_us = self.host_hash_us(scheme, bytes);
        let host_sign_us = Self::host_us(&calib.host.sign_us, scheme)?;
        let (hash_cycles, sign_cycles) = match scheme {
            SchemeId::Rsa | SchemeId::Ecdsa => {
                let variant = scheme.default_digest();
                let (digest, hash_cycles) = ace::sha2_digest(&ace::HashJob::new(self.message(bytes), variant), calib);
                (hash_cycles, self.core_sign(scheme, &digest)?.1)
            }
            _ => {
                let total = pqc_latency(scheme, SignOp::Sign, bytes, calib)?;
                let hash = pqc::message_permutations(bytes) * calib.ace.keccak_permutation_cycles;
                (hash, total - hash)
            }
        };
        Ok(SignCosts { hash_cycles, sign_cycles, host_hash_us, host_sign_us })
    }

    /// Signs `digest`, checks the signature, returns it with the sign and verify cycles.
    fn core_sign(&self, scheme: SchemeId, digest: &[u8]) -> Result<(Vec<u8>, u64, u64), BenchError> {
        let calib = self.calib();
        let keys = self.keys();
        match scheme {
            SchemeId::Rsa => {
                let (out, sc) = rsa_op(&keys.rsa, digest, SignOp::Sign, None, RsaPadding::FullDomain, calib)?;
                let RsaOutput::Signature(sig) = out else { unreachable!("sign returns a signature") };
                let (v, vc) = rsa_op(&keys.rsa, digest, SignOp::Verify, Some(&sig), RsaPadding::FullDomain, calib)?;
                let RsaOutput::Verdict(v) = v else { unreachable!("verify returns a verdict") };
                check(v)?;
                Ok((sig, sc, vc))
            }
            SchemeId::Ecdsa => {
                let (out, sc) = ecdsa_op(&keys.ecdsa, digest, SignOp::Sign, None, self.cfg.seed, calib)?;
                let EcdsaOutput::Signature(sig) = out else { unreachable!("sign returns a signature") };
                let (v, vc) = ecdsa_op(&keys.ecdsa, digest, SignOp::Verify, Some(&sig), 0, calib)?;
                let EcdsaOutput::Verdict(v) = v else { unreachable!("verify returns a verdict") };
                check(v)?;
                Ok((sig.to_bytes(Curve::P384), sc, vc))
            }
            _ => Err(BenchError::Validation(format!("{scheme} has no functional signer"))),
        }
    }

    /// Digest over the per-segment digests of a deterministic image.
    fn image_root(&self, image_bytes: u64, variant: ace::HashVariant) -> Vec<u8> {
        let key = (image_bytes, variant.digest_bytes() as u32);
        if let Some(d) = self.digests.lock().expect("digest cache").get(&key) {
            return d.clone();
        }
        let image = self.message(image_bytes);
        let page = self.cfg.ssd.page_bytes as usize;
        let segs = self.cfg.ssd.boot_segments as usize;
        let mut parts: Vec<Vec<u8>> = vec![Vec::new(); segs.min(image.len().div_ceil(page))];
        for (i, chunk) in image.chunks(page).enumerate() {
            let n = parts.len();
            parts[i % n].extend_from_slice(chunk);
        }
        let cat: Vec<u8> = parts.iter().flat_map(|p| variant.digest(p)).collect();
        let root = variant.digest(&cat);
        self.digests.lock().expect("digest cache").insert(key, root.clone());
        root
    }

    fn verify_cycles(&self, scheme: SchemeId, image_bytes: u64) -> Result<u64, BenchError> {
        let variant = scheme.default_digest();
        let root = self.image_root(image_bytes, variant);
        if scheme.is_pqc() {
            return Ok(pqc_latency(scheme, SignOp::Verify, root.len() as u64, self.calib())?);
        }
        Ok(self.core_sign(scheme, &root)?.2)
    }

    pub fn run_bulk(&self, cipher: CipherId, op: IoOp, bytes: u64, placement: Placement) -> Result<ReportRow, BenchError> {
        let mut ssd = self.fresh_ssd()?;
        let b = self.bulk_on(&mut ssd, cipher, op, bytes, placement)?;
        Ok(ReportRow::new(ScenarioKind::BulkCipher, op.name(), cipher.name(), bytes, placement, b, &[]))
    }

    fn bulk_on(&self, ssd: &mut Ssd, cipher: CipherId, op: IoOp, bytes: u64, placement: Placement) -> Result<LatencyBreakdown, BenchError> {
        ssd.reconfigure_algorithm(cipher.key())?;
        ssd.set_self_encryption(placement == Placement::Fv);
        let req = IoRequest { op, lba: self.cfg.lba, bytes, crypto: Some(cipher), placement };
        Ok(ssd.submit_io(&req)?)
    }

    fn boot_job(&self, image_bytes: u64, scheme: SchemeId, placement: Placement) -> Result<BootJob, BenchError> {
        if image_bytes == 0 {
            return Err(SsdError::ZeroBytes.into());
        }
        Ok(BootJob {
            image_bytes,
            variant: scheme.default_digest(),
            verify_cycles: self.verify_cycles(scheme, image_bytes)?,
            host_verify_us: Self::host_us(&self.calib().host.verify_us, scheme)?,
            placement,
        })
    }

    pub fn run_secure_boot(&self, image_bytes: u64, scheme: SchemeId, placement: Placement) -> Result<ReportRow, BenchError> {
        let job = self.boot_job(image_bytes, scheme, placement)?;
        let b = self.fresh_ssd()?.secure_boot(&job)?;
        Ok(ReportRow::new(ScenarioKind::SecureBoot, "verify", scheme.name(), image_bytes, placement, b, &[BOOT_BOUND_MS]))
    }

    fn sign_job(&self, scheme: SchemeId, bytes: u64, source: SignSource, placement: Placement) -> Result<SignJob, BenchError> {
        let c = self.sign_costs(scheme, bytes)?;
        Ok(SignJob {
            source,
            bytes,
            hash_cycles: c.hash_cycles,
            sign_cycles: c.sign_cycles,
            host_hash_us: c.host_hash_us,
            host_sign_us: c.host_sign_us,
            placement,
        })
    }

    pub fn run_tamper_log(&self, entry_bytes: u64, scheme: SchemeId, placement: Placement) -> Result<ReportRow, BenchError> {
        if !(LOG_ENTRY_MIN..=LOG_ENTRY_MAX).contains(&entry_bytes) {
            return Err(BenchError::Validation(format!("log entry of {entry_bytes} bytes is outside {LOG_ENTRY_MIN}..={LOG_ENTRY_MAX}")));
        }
        let job = self.sign_job(scheme, entry_bytes, SignSource::Controller, placement)?;
        let b = self.fresh_ssd()?.sign(&job)?;
        Ok(ReportRow::new(ScenarioKind::TamperLog, "sign", scheme.name(), entry_bytes, placement, b, &LOG_BOUNDS_MS))
    }

    /// Drive in the aged state: filled, overwritten, collecting, self-encrypting.
    pub fn steady_state_ssd(&self) -> Result<Ssd, BenchError> {
        let mut ssd = self.new_ssd()?;
        ssd.reconfigure_algorithm(CipherId::Aes.key())?;
        ssd.set_self_encryption(true);
        ssd.make_steady_state(self.cfg.fill_fraction, self.cfg.overwrite_ops, self.cfg.seed)?;
        Ok(ssd)
    }

    fn self_encrypting_fresh(&self) -> Result<Ssd, BenchError> {
        let mut ssd = self.new_ssd()?;
        ssd.reconfigure_algorithm(CipherId::Aes.key())?;
        ssd.set_self_encryption(true);
        Ok(ssd)
    }

    /// Fresh versus steady-state latency of every in-die workload in the scenario.
    pub fn run_ftl_overhead(&self, scenario: &Scenario) -> Result<Vec<OverheadRow>, BenchError> {
        scenario.validate()?;
        let (bulk, image, msg) = (scenario.sizes[0], scenario.sizes[1], scenario.sizes[2]);
        let steady = self.steady_state_ssd()?;
        let fresh = self.self_encrypting_fresh()?;
        let ciphers: Vec<CipherId> = scenario.algorithms.iter().filter_map(|a| a.parse().ok()).collect();
        let schemes: Vec<SchemeId> = scenario.algorithms.iter().filter(|a| a.parse::<CipherId>().is_err()).filter_map(|a| a.parse().ok()).collect();
        let mut rows = Vec::new();
        let pair = |f: &dyn Fn(&mut Ssd) -> Result<LatencyBreakdown, BenchError>| -> Result<(f64, f64), BenchError> {
            let a = f(&mut fresh.clone())?;
            let b = f(&mut steady.clone())?;
            Ok((a.total_ms(), b.total_ms()))
        };
        for &op in &scenario.ops {
            for &c in &ciphers {
                let (fresh_ms, steady_ms) = pair(&|s: &mut Ssd| self.bulk_on(s, c, op, bulk, Placement::Fv))?;
                let workload = if op == IoOp::Program { "Program" } else { "Read" };
                rows.push(OverheadRow { workload: workload.into(), algorithm: c.name().into(), size: bulk, fresh_ms, steady_ms });
            }
        }
        for &s in &schemes {
            let job = self.boot_job(image, s, Placement::Fv)?;
            let (fresh_ms, steady_ms) = pair(&|d: &mut Ssd| Ok(d.secure_boot(&job)?))?;
            rows.push(OverheadRow { workload: "Verify".into(), algorithm: s.name().into(), size: image, fresh_ms, steady_ms });
        }
        for &s in &schemes {
            let job = self.sign_job(s, msg, SignSource::Stored { lba: self.cfg.lba }, Placement::Fv)?;
            let (fresh_ms, steady_ms) = pair(&|d: &mut Ssd| Ok(d.sign(&job)?))?;
            rows.push(OverheadRow { workload: "Sign".into(), algorithm: s.name().into(), size: msg, fresh_ms, steady_ms });
        }
        Ok(rows)
    }

    /// Every latency cell of a non-overhead scenario, in declaration order.
    pub fn run_rows(&self, scenario: &Scenario) -> Result<Vec<ReportRow>, BenchError> {
        scenario.validate()?;
        let mut rows = Vec::new();
        match scenario.kind {
            ScenarioKind::BulkCipher => {
                for &op in &scenario.ops {
                    for a in &scenario.algorithms {
                        let c: CipherId = a.parse().map_err(|_| BenchError::Validation(a.clone()))?;
                        for &size in &scenario.sizes {
                            for &p in &scenario.placements {
                                let mut r = self.run_bulk(c, op, size, p)?;
                                r.bounds = bounds(r.total_ms, &scenario.bounds_ms);
                                rows.push(r);
                            }
                        }
                    }
                }
            }
            ScenarioKind::SecureBoot | ScenarioKind::TamperLog => {
                for a in &scenario.algorithms {
                    let s: SchemeId = a.parse()?;
                    for &size in &scenario.sizes {
                        for &p in &scenario.placements {
                            let mut r = if scenario.kind == ScenarioKind::SecureBoot {
                                self.run_secure_boot(size, s, p)?
                            } else {
                                self.run_tamper_log(size, s, p)?
                            };
                            r.bounds = bounds(r.total_ms, &scenario.bounds_ms);
                            rows.push(r);
                        }
                    }
                }
            }
            ScenarioKind::FtlOverhead => return Err(BenchError::Validation("overhead runs produce overhead rows".into())),
        }
        Ok(rows)
    }

    /// Runs the scenario and writes `<kind>.csv` and `<kind>.svg` under `out_dir`.
    pub fn run_matrix(&self, scenario: &Scenario, out_dir: &Path) -> Result<MatrixReport, BenchError> {
        scenario.validate()?;
        let (rows, csv, svg) = if scenario.kind == ScenarioKind::FtlOverhead {
            let rows = self.run_ftl_overhead(scenario)?;
            let (c, s) = (overhead_csv(&rows), overhead_svg(&rows));
            (MatrixRows::Overhead(rows), c, s)
        } else {
            let rows = self.run_rows(scenario)?;
            let (c, s) = (rows_csv(&rows), rows_svg(&rows, scenario.kind.name()));
            (MatrixRows::Latency(rows), c, s)
        };
        let io = |path: &Path, e: std::io::Error| BenchError::Io { path: path.display().to_string(), source: e };
        std::fs::create_dir_all(out_dir).map_err(|e| io(out_dir, e))?;
        let csv_path = out_dir.join(format!("{}.csv", scenario.kind.name()));
        let svg_path = out_dir.join(format!("{}.svg", scenario.kind.name()));
        std::fs::write(&csv_path, csv).map_err(|e| io(&csv_path, e))?;
        std::fs::write(&svg_path, svg).map_err(|e| io(&svg_path, e))?;
        Ok(MatrixReport { rows, csv: csv_path, svg: svg_path })
    }
}

fn bounds(total_ms: f64, limits: &[f64]) -> Vec<Bound> {
    limits.iter().map(|&limit_ms| Bound { limit_ms, met: total_ms <= limit_ms }).collect()
}

fn check(v: Verdict) -> Result<(), BenchError> {
    match v {
        Verdict::Accept => Ok(()),
        Verdict::Reject => Err(BenchError::Crypto(ace::AceError::InvalidKey("signature failed to verify".into()))),
    }
}
