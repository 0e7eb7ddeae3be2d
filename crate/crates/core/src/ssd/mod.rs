//! Discrete-event SSD model: channels, dies and planes contend for buses,
//! arrays, register slots and crypto engines; a page-mapped FTL supplies the
//! garbage-collection stalls. Crypto sits in one of three places: the host
//! CPU, engines beside the controller (NCP), or engines inside each die (FV).

mod config;
mod des;
pub mod ftl;

pub use config::SsdConfig;
pub use des::{Category, Ns, TraceRow as Event};
pub use ftl::{FtlError, FtlState};

use crate::ace::HashVariant;
use crate::bce::CipherId;
use crate::calib::Calibration;
use config::us_to_ns;
use des::{Engine, ResId, Step, TaskId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SsdError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("request has zero bytes")]
    ZeroBytes,
    #[error(transparent)]
    Ftl(#[from] FtlError),
    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),
    #[error("{requested} is not loaded in the engines (active: {active})")]
    AlgorithmNotLoaded { requested: CipherId, active: String },
    #[error("fill fraction {0} is outside (0, 1)")]
    InvalidFill(f64),
    #[error("no reclaimable block")]
    NothingToCollect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IoOp {
    Read,
    Program,
}

impl IoOp {
    pub fn name(self) -> &'static str {
        match self {
            IoOp::Read => "read",
            IoOp::Program => "program",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Placement {
    Cpu,
    Ncp,
    Fv,
}

impl Placement {
    pub const ALL: [Placement; 3] = [Placement::Cpu, Placement::Ncp, Placement::Fv];

    pub fn name(self) -> &'static str {
        match self {
            Placement::Cpu => "CPU",
            Placement::Ncp => "NCP",
            Placement::Fv => "FV",
        }
    }
}

impl fmt::Display for Placement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Placement {
    type Err = SsdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cpu" | "host" => Ok(Placement::Cpu),
            "ncp" => Ok(Placement::Ncp),
            "fv" | "flashvault" => Ok(Placement::Fv),
            _ => Err(SsdError::InvalidConfig(format!("unknown placement `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IoRequest {
    pub op: IoOp,
    /// Logical address in pages.
    pub lba: u64,
    pub bytes: u64,
    pub crypto: Option<CipherId>,
    pub placement: Placement,
}

/// Critical-path time per component; `total_us` is their sum.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LatencyBreakdown {
    pub stack_us: f64,
    pub ftl_us: f64,
    pub nand_us: f64,
    pub bus_us: f64,
    pub dram_us: f64,
    pub crypto_us: f64,
    pub total_us: f64,
}

impl LatencyBreakdown {
    fn from_path(path: &[(Category, Ns)]) -> Self {
        let mut ns: BTreeMap<Category, Ns> = BTreeMap::new();
        for &(c, d) in path {
            *ns.entry(c).or_default() += d;
        }
        let us = |c| ns.get(&c).copied().unwrap_or(0) as f64 / 1000.0;
        let mut b = LatencyBreakdown {
            stack_us: us(Category::Stack),
            ftl_us: us(Category::Ftl),
            nand_us: us(Category::Nand),
            bus_us: us(Category::Bus),
            dram_us: us(Category::Dram),
            crypto_us: us(Category::Crypto),
            total_us: 0.0,
        };
        b.total_us = b.component_sum();
        b
    }

    pub fn component_sum(&self) -> f64 {
        self.stack_us + self.ftl_us + self.nand_us + self.bus_us + self.dram_us + self.crypto_us
    }

    pub fn total_ms(&self) -> f64 {
        self.total_us / 1000.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchOutcome {
    pub breakdowns: Vec<LatencyBreakdown>,
    pub events: Vec<Event>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReconfigAck {
    pub algorithm: CipherId,
    pub latency_ns: Ns,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GcReport {
    pub plane: u32,
    pub victim: u32,
    pub relocated: u32,
    pub duration_us: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SsdStats {
    pub host_pages: u64,
    pub relocated_pages: u64,
    pub blocking_collections: u64,
    pub reconfigurations: u64,
}

/// Hash and verification work for a firmware image in the boot region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootJob {
    pub image_bytes: u64,
    pub variant: HashVariant,
    pub verify_cycles: u64,
    pub host_verify_us: f64,
    pub placement: Placement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignSource {
    /// Message stored in NAND at this logical page.
    Stored { lba: u64 },
    /// Message produced in controller memory.
    Controller,
}

/// Hash-then-sign over `bytes` of message.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignJob {
    pub source: SignSource,
    pub bytes: u64,
    pub hash_cycles: u64,
    pub sign_cycles: u64,
    pub host_hash_us: f64,
    pub host_sign_us: f64,
    pub placement: Placement,
}

#[derive(Debug, Clone)]
struct Resources {
    bus: Vec<ResId>,
    array: Vec<ResId>,
    slot: Vec<ResId>,
    engine: Vec<ResId>,
    ldpc: Vec<ResId>,
    hash: Vec<ResId>,
    ace: Vec<ResId>,
    ftl: ResId,
    ecc: ResId,
    dram: ResId,
    ncp_engine: ResId,
    ncp_hash: ResId,
    ncp_ace: ResId,
    host_link: ResId,
    host_cpu: ResId,
}

#[derive(Debug, Clone)]
struct Timing {
    t_r: Ns,
    t_rcbsy: Ns,
    t_pcbsy: Ns,
    t_prog: Ns,
    t_erase: Ns,
    stack: Ns,
    bus_page: Ns,
    pcie_page: Ns,
    ldpc: Ns,
    dram_unit: Ns,
    reconfigure: Ns,
}

/// A path from an FTL page index to the hardware it lands on.
#[derive(Debug, Clone, Copy)]
struct Loc {
    fplane: u32,
    plane: u32,
    die: u32,
    ch: u32,
}

#[derive(Debug, Clone)]
pub struct Ssd {
    cfg: SsdConfig,
    calib: Calibration,
    ftl: FtlState,
    eng: Engine,
    res: Resources,
    tm: Timing,
    /// FTL plane index for each global plane.
    fplane_of: Vec<u32>,
    active: Option<CipherId>,
    self_encrypt: bool,
    next_request: u32,
    stats: SsdStats,
    tracing: bool,
    events: Vec<Event>,
}

impl Ssd {
    pub fn new(cfg: SsdConfig, calib: Calibration) -> Result<Self, SsdError> {
        cfg.validate()?;
        let mut eng = Engine::new();
        let slots = if cfg.double_buffering { 2 } else { 1 };
        let bus = (0..cfg.channels).map(|c| eng.add_resource(format!("ch{c}.bus"), 1)).collect();
        let mut array = Vec::new();
        let mut slot = Vec::new();
        for p in 0..cfg.total_planes() {
            array.push(eng.add_resource(format!("plane{p}.array"), 1));
            slot.push(eng.add_resource(format!("plane{p}.register"), slots));
        }
        let mut engine = Vec::new();
        let mut ldpc = Vec::new();
        let mut hash = Vec::new();
        let mut ace = Vec::new();
        for d in 0..cfg.total_dies() {
            engine.push(eng.add_resource(format!("die{d}.bce"), cfg.engines_per_die));
            ldpc.push(eng.add_resource(format!("die{d}.ldpc"), 1));
            hash.push(eng.add_resource(format!("die{d}.hash"), cfg.engines_per_die * calib.ace.hash_alus_per_engine));
            ace.push(eng.add_resource(format!("die{d}.ace"), 1));
        }
        let ncp = calib.ncp.engines.max(1);
        let res = Resources {
            bus,
            array,
            slot,
            engine,
            ldpc,
            hash,
            ace,
            ftl: eng.add_resource("ctrl.ftl", 1),
            ecc: eng.add_resource("ctrl.ldpc", cfg.channels),
            dram: eng.add_resource("ctrl.dram", 1),
            ncp_engine: eng.add_resource("ncp.bce", ncp),
            ncp_hash: eng.add_resource("ncp.hash", ncp * calib.ace.hash_alus_per_engine),
            ncp_ace: eng.add_resource("ncp.ace", 1),
            host_link: eng.add_resource("host.link", 1),
            host_cpu: eng.add_resource("host.cpu", 1),
        };
        let page_kib = f64::from(cfg.page_bytes) / 1024.0;
        let tm = Timing {
            t_r: us_to_ns(cfg.t_r_us),
            t_rcbsy: us_to_ns(cfg.t_rcbsy_us),
            t_pcbsy: us_to_ns(cfg.t_pcbsy_us),
            t_prog: us_to_ns(cfg.t_prog_us),
            t_erase: us_to_ns(cfg.t_erase_us),
            stack: us_to_ns(cfg.stack_us),
            bus_page: us_to_ns(cfg.page_bus_us()),
            pcie_page: us_to_ns(calib.host.transfer_us_per_kib * page_kib),
            ldpc: us_to_ns(calib.ssd.ldpc_us_per_page),
            dram_unit: us_to_ns(calib.ncp.dram_round_trip_us + calib.ssd.dram_us_per_kib * page_kib),
            reconfigure: us_to_ns(calib.ssd.reconfigure_us),
        };
        let planes = cfg.total_planes();
        let mut fplane_of = vec![0; planes as usize];
        let mut reserved = vec![0; planes as usize];
        for k in 0..planes {
            let gp = cfg.stripe_plane(u64::from(k));
            fplane_of[gp as usize] = k;
            if cfg.die_of_plane(gp) == 0 {
                reserved[k as usize] = cfg.boot_region_blocks;
            }
        }
        let ftl = FtlState::new(
            planes,
            cfg.blocks,
            cfg.pages_per_block,
            reserved,
            cfg.overprovision,
            calib.ssd.gc_free_fraction,
            cfg.gc_hard_free_blocks,
            calib.ssd.wl_spread_threshold,
        );
        Ok(Ssd {
            cfg,
            calib,
            ftl,
            eng,
            res,
            tm,
            fplane_of,
            active: None,
            self_encrypt: false,
            next_request: 0,
            stats: SsdStats::default(),
            tracing: false,
            events: Vec::new(),
        })
    }

    pub fn config(&self) -> &SsdConfig {
        &self.cfg
    }

    pub fn calibration(&self) -> &Calibration {
        &self.calib
    }

    pub fn ftl(&self) -> &FtlState {
        &self.ftl
    }

    pub fn stats(&self) -> SsdStats {
        self.stats
    }

    pub fn now_ns(&self) -> Ns {
        self.eng.now()
    }

    pub fn active_algorithm(&self) -> Option<CipherId> {
        self.active
    }

    /// In-die self-encryption: data at rest, including relocated pages, is ciphertext.
    pub fn set_self_encryption(&mut self, on: bool) {
        self.self_encrypt = on;
    }

    pub fn set_tracing(&mut self, on: bool) {
        self.tracing = on;
        if on {
            self.eng.enable_trace();
        }
    }

    pub fn take_events(&mut self) -> Vec<Event> {
        std::mem::take(&mut self.events)
    }

    /// Loads a cipher microprogram into every engine; the switch costs a fixed latency.
    pub fn reconfigure_algorithm(&mut self, id: &str) -> Result<ReconfigAck, SsdError> {
        let cipher = CipherId::from_str(id).map_err(|_| SsdError::UnknownAlgorithm(id.to_string()))?;
        self.active = Some(cipher);
        self.eng.advance(self.tm.reconfigure);
        self.stats.reconfigurations += 1;
        Ok(ReconfigAck { algorithm: cipher, latency_ns: self.tm.reconfigure })
    }

    fn loc(&self, fplane: u32) -> Loc {
        let plane = self.cfg.stripe_plane(u64::from(fplane));
        let die = self.cfg.die_of_plane(plane);
        Loc { fplane, plane, die, ch: self.cfg.channel_of_die(die) }
    }

    fn loc_of_global(&self, plane: u32) -> Loc {
        self.loc(self.fplane_of[plane as usize])
    }

    fn ftl_ns(&self, bytes: u64) -> Ns {
        let kib = bytes as f64 / 1024.0;
        us_to_ns(self.calib.ssd.ftl_coeff_us * kib.powf(self.calib.ssd.ftl_exponent))
    }

    fn bce_page_cycles(&self, cipher: CipherId) -> u64 {
        let blocks = u64::from(self.cfg.page_bytes).div_ceil(cipher.block_bytes() as u64);
        let waves = blocks.div_ceil(u64::from(self.cfg.lanes_per_engine));
        waves * self.calib.cipher_cycles(cipher) + self.calib.bce.pipeline_fill_cycles
    }

    fn fv_crypto_ns(&self, cipher: CipherId) -> Ns {
        self.cfg.cycles_to_ns(self.bce_page_cycles(cipher))
    }

    fn ncp_cycles_ns(&self, cycles: u64) -> Ns {
        self.cfg.cycles_to_ns((cycles as f64 * self.calib.ncp.cycle_scale).round() as u64)
    }

    fn host_crypto_ns(&self, cipher: CipherId, bytes: u64) -> Ns {
        us_to_ns(self.calib.host.cipher_setup_us + bytes as f64 * self.calib.host_cipher_ns_per_byte(cipher) / 1000.0)
    }

    fn host_hash_us(&self, variant: HashVariant, bytes: u64) -> f64 {
        let per = match variant {
            HashVariant::Sha256 => self.calib.host.sha256_ns_per_byte,
            HashVariant::Sha512 => self.calib.host.sha512_ns_per_byte,
        };
        bytes as f64 * per / 1000.0
    }

    fn pcie_ns(&self, bytes: u64) -> Ns {
        us_to_ns(self.calib.host.transfer_us_per_kib * bytes as f64 / 1024.0)
    }

    /// One access streaming `bytes` through controller DRAM.
    fn dram_ns(&self, bytes: u64) -> Ns {
        us_to_ns(self.calib.ncp.dram_round_trip_us + self.calib.ssd.dram_us_per_kib * bytes as f64 / 1024.0)
    }

    fn sed_cipher(&self) -> Option<CipherId> {
        self.active.filter(|_| self.self_encrypt)
    }

    fn pages_of(&self, bytes: u64) -> u64 {
        bytes.div_ceil(u64::from(self.cfg.page_bytes))
    }

    fn check_crypto(&self, req: &IoRequest) -> Result<(), SsdError> {
        if let Some(c) = req.crypto {
            if req.placement != Placement::Cpu && self.active != Some(c) {
                return Err(SsdError::AlgorithmNotLoaded {
                    requested: c,
                    active: self.active.map_or("none".into(), |a| a.name().to_string()),
                });
            }
        }
        Ok(())
    }

    // ---- task-graph helpers ----

    fn add(&mut self, step: Step, cat: Category, label: &'static str, rid: u32, deps: &[TaskId], t0: Ns) -> TaskId {
        self.eng.add(step, cat, label, rid, deps, t0)
    }

    fn work(&mut self, res: ResId, dur: Ns, cat: Category, label: &'static str, rid: u32, deps: &[TaskId], t0: Ns) -> TaskId {
        self.add(Step::Work(res, dur), cat, label, rid, deps, t0)
    }

    /// Serial copy-back chain for `moves` pages of one plane; returns its tail.
    fn relocation_chain(&mut self, rid: u32, loc: Loc, moves: usize, erase: bool, dep: TaskId, t0: Ns) -> TaskId {
        let cat = Category::Ftl;
        let sed = self.sed_cipher().map(|c| self.fv_crypto_ns(c));
        let mut tail = dep;
        for _ in 0..moves {
            let slot = self.res.slot[loc.plane as usize];
            let array = self.res.array[loc.plane as usize];
            let acq = self.add(Step::Acquire(slot), cat, "gc.register", rid, &[tail], t0);
            let r = self.work(array, self.tm.t_r, cat, "gc.sense", rid, &[acq], t0);
            let mut t = self.work(array, self.tm.t_rcbsy, cat, "gc.cache", rid, &[r], t0);
            if let Some(c) = sed {
                t = self.work(self.res.ldpc[loc.die as usize], self.tm.ldpc, cat, "gc.ldpc", rid, &[t], t0);
                t = self.work(self.res.engine[loc.die as usize], c, cat, "gc.decrypt", rid, &[t], t0);
                t = self.work(self.res.engine[loc.die as usize], c, cat, "gc.encrypt", rid, &[t], t0);
            }
            let b = self.work(array, self.tm.t_pcbsy, cat, "gc.load", rid, &[t], t0);
            let p = self.work(array, self.tm.t_prog, cat, "gc.program", rid, &[b], t0);
            tail = self.add(Step::Release(slot), cat, "gc.register", rid, &[p], t0);
        }
        if erase {
            let array = self.res.array[loc.plane as usize];
            tail = self.work(array, self.tm.t_erase, cat, "gc.erase", rid, &[tail], t0);
        }
        tail
    }

    /// Collection owed by each touched plane before host array access.
    fn collect_for(&mut self, fplanes: &[u32]) -> Result<Vec<(u32, usize, bool)>, SsdError> {
        let mut out = Vec::new();
        for &fp in fplanes {
            if self.ftl.gc_urgent(fp) {
                if let Some(r) = self.ftl.reclaim(fp)? {
                    self.stats.blocking_collections += 1;
                    self.stats.relocated_pages += r.moves.len() as u64;
                    out.push((fp, r.moves.len(), true));
                    continue;
                }
            }
            if self.ftl.gc_pending(fp) {
                let moves = self.ftl.relocate(fp, self.cfg.gc_quantum_pages)?;
                self.stats.relocated_pages += moves.len() as u64;
                if !moves.is_empty() {
                    out.push((fp, moves.len(), false));
                }
            }
        }
        Ok(out)
    }

    fn gc_tails(&mut self, rid: u32, owed: &[(u32, usize, bool)], dep: TaskId, t0: Ns) -> BTreeMap<u32, TaskId> {
        let mut tails = BTreeMap::new();
        for &(fp, n, erase) in owed {
            let loc = self.loc(fp);
            let tail = self.relocation_chain(rid, loc, n, erase, dep, t0);
            tails.insert(fp, tail);
        }
        tails
    }

    fn touched(&self, lba: u64, pages: u64) -> Vec<u32> {
        let mut v: Vec<u32> = (0..pages.min(u64::from(self.ftl.planes()))).map(|i| self.ftl.plane_of_lpn(lba + i)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    fn front_end(&mut self, rid: u32, bytes: u64, first: &[TaskId], t0: Ns) -> TaskId {
        let s = self.add(Step::Delay(self.tm.stack), Category::Stack, "stack", rid, first, t0);
        self.work(self.res.ftl, self.ftl_ns(bytes), Category::Ftl, "ftl", rid, &[s], t0)
    }

    /// Builds the task graph for one host request and returns its sink.
    fn build_io(&mut self, rid: u32, req: &IoRequest, t0: Ns) -> Result<TaskId, SsdError> {
        if req.bytes == 0 {
            return Err(SsdError::ZeroBytes);
        }
        let pages = self.pages_of(req.bytes);
        self.ftl.check_range(req.lba, pages)?;
        self.check_crypto(req)?;
        let touched = self.touched(req.lba, pages);
        let owed = self.collect_for(&touched)?;
        if req.op == IoOp::Program {
            for i in 0..pages {
                let lpn = req.lba + i;
                if let Err(FtlError::OutOfSpace(fp)) = self.ftl.write(lpn, req.crypto.is_some()) {
                    let r = self.ftl.reclaim(fp)?.ok_or(FtlError::OutOfSpace(fp))?;
                    self.stats.blocking_collections += 1;
                    self.stats.relocated_pages += r.moves.len() as u64;
                    self.ftl.write(lpn, req.crypto.is_some())?;
                }
            }
            self.stats.host_pages += pages;
        }

        let host_crypto = match (req.placement, req.crypto) {
            (Placement::Cpu, Some(c)) => Some(self.host_crypto_ns(c, req.bytes)),
            _ => None,
        };
        let mut pre = Vec::new();
        if let (IoOp::Program, Some(d)) = (req.op, host_crypto) {
            pre.push(self.work(self.res.host_cpu, d, Category::Crypto, "host.encrypt", rid, &[], t0));
        }
        let ftl = self.front_end(rid, req.bytes, &pre, t0);
        let tails = self.gc_tails(rid, &owed, ftl, t0);

        let mut ends = Vec::with_capacity(pages as usize);
        for i in 0..pages {
            let loc = self.loc(self.ftl.plane_of_lpn(req.lba + i));
            let gc = tails.get(&loc.fplane).copied();
            let end = match req.op {
                IoOp::Read => self.read_page(rid, req, loc, ftl, gc, t0),
                IoOp::Program => self.program_page(rid, req, loc, ftl, gc, t0),
            };
            ends.push(end);
        }
        let mut sink = self.add(Step::Join, Category::Stack, "done", rid, &ends, t0);
        if let (IoOp::Read, Some(d)) = (req.op, host_crypto) {
            sink = self.work(self.res.host_cpu, d, Category::Crypto, "host.decrypt", rid, &[sink], t0);
        }
        Ok(sink)
    }

    fn array_deps(first: TaskId, gc: Option<TaskId>) -> Vec<TaskId> {
        let mut v = vec![first];
        v.extend(gc);
        v
    }

    fn read_page(&mut self, rid: u32, req: &IoRequest, loc: Loc, ftl: TaskId, gc: Option<TaskId>, t0: Ns) -> TaskId {
        let (slot, array) = (self.res.slot[loc.plane as usize], self.res.array[loc.plane as usize]);
        let die = loc.die as usize;
        let acq = self.add(Step::Acquire(slot), Category::Nand, "register", rid, &[ftl], t0);
        let r = self.work(array, self.tm.t_r, Category::Nand, "sense", rid, &Self::array_deps(acq, gc), t0);
        let mut t = self.work(array, self.tm.t_rcbsy, Category::Nand, "cache", rid, &[r], t0);
        match req.placement {
            Placement::Fv => {
                t = self.work(self.res.ldpc[die], self.tm.ldpc, Category::Nand, "ldpc", rid, &[t], t0);
                if let Some(c) = req.crypto {
                    t = self.work(self.res.engine[die], self.fv_crypto_ns(c), Category::Crypto, "decrypt", rid, &[t], t0);
                }
                t = self.work(self.res.bus[loc.ch as usize], self.tm.bus_page, Category::Bus, "bus", rid, &[t], t0);
                t = self.add(Step::Release(slot), Category::Nand, "register", rid, &[t], t0);
            }
            Placement::Ncp | Placement::Cpu => {
                t = self.work(self.res.bus[loc.ch as usize], self.tm.bus_page, Category::Bus, "bus", rid, &[t], t0);
                t = self.add(Step::Release(slot), Category::Nand, "register", rid, &[t], t0);
                t = self.work(self.res.ecc, self.tm.ldpc, Category::Nand, "ldpc", rid, &[t], t0);
                if let (Placement::Ncp, Some(c)) = (req.placement, req.crypto) {
                    t = self.work(self.res.dram, self.tm.dram_unit, Category::Dram, "dram", rid, &[t], t0);
                    let d = self.ncp_cycles_ns(self.bce_page_cycles(c));
                    t = self.work(self.res.ncp_engine, d, Category::Crypto, "decrypt", rid, &[t], t0);
                }
            }
        }
        self.work(self.res.host_link, self.tm.pcie_page, Category::Bus, "host.link", rid, &[t], t0)
    }

    fn program_page(&mut self, rid: u32, req: &IoRequest, loc: Loc, ftl: TaskId, gc: Option<TaskId>, t0: Ns) -> TaskId {
        let (slot, array) = (self.res.slot[loc.plane as usize], self.res.array[loc.plane as usize]);
        let die = loc.die as usize;
        let mut t = self.work(self.res.host_link, self.tm.pcie_page, Category::Bus, "host.link", rid, &[ftl], t0);
        if let (Placement::Ncp, Some(c)) = (req.placement, req.crypto) {
            t = self.work(self.res.dram, self.tm.dram_unit, Category::Dram, "dram", rid, &[t], t0);
            let d = self.ncp_cycles_ns(self.bce_page_cycles(c));
            t = self.work(self.res.ncp_engine, d, Category::Crypto, "encrypt", rid, &[t], t0);
        }
        let acq = self.add(Step::Acquire(slot), Category::Nand, "register", rid, &[t], t0);
        t = self.work(self.res.bus[loc.ch as usize], self.tm.bus_page, Category::Bus, "bus", rid, &[acq], t0);
        if let (Placement::Fv, Some(c)) = (req.placement, req.crypto) {
            t = self.work(self.res.engine[die], self.fv_crypto_ns(c), Category::Crypto, "encrypt", rid, &[t], t0);
        }
        let mut deps = vec![t];
        deps.extend(gc);
        let b = self.work(array, self.tm.t_pcbsy, Category::Nand, "load", rid, &deps, t0);
        let p = self.work(array, self.tm.t_prog, Category::Nand, "program", rid, &[b], t0);
        self.add(Step::Release(slot), Category::Nand, "register", rid, &[p], t0)
    }

    /// Runs the engine and returns one breakdown per `(sink, submit time)`.
    fn execute(&mut self, sinks: &[(TaskId, Ns)]) -> Vec<LatencyBreakdown> {
        self.eng.run();
        let out = sinks
            .iter()
            .map(|&(sink, t0)| {
                let path = self.eng.critical_path(sink, t0);
                let b = LatencyBreakdown::from_path(&path);
                debug_assert_eq!(path.iter().map(|p| p.1).sum::<Ns>(), self.eng.end_of(sink) - t0, "critical path has a gap");
                b
            })
            .collect();
        if self.tracing {
            let rows = self.eng.take_trace();
            self.events.extend(rows);
        }
        self.eng.clear_tasks();
        out
    }

    fn new_rid(&mut self) -> u32 {
        self.next_request += 1;
        self.next_request - 1
    }

    pub fn submit_io(&mut self, req: &IoRequest) -> Result<LatencyBreakdown, SsdError> {
        let t0 = self.eng.now();
        let rid = self.new_rid();
        let sink = match self.build_io(rid, req, t0) {
            Ok(s) => s,
            Err(e) => {
                self.eng.run();
                self.eng.clear_tasks();
                return Err(e);
            }
        };
        Ok(self.execute(&[(sink, t0)]).remove(0))
    }

    /// Submits every request at the current time and runs them together.
    pub fn run_scenario_batch(&mut self, requests: &[IoRequest]) -> Result<BatchOutcome, SsdError> {
        let was = self.tracing;
        self.set_tracing(true);
        let t0 = self.eng.now();
        let mut sinks = Vec::with_capacity(requests.len());
        for req in requests {
            let rid = self.new_rid();
            match self.build_io(rid, req, t0) {
                Ok(s) => sinks.push((s, t0)),
                Err(e) => {
                    self.eng.run();
                    self.eng.take_trace();
                    self.eng.clear_tasks();
                    self.tracing = was;
                    return Err(e);
                }
            }
        }
        let breakdowns = self.execute(&sinks);
        let events = std::mem::take(&mut self.events);
        self.tracing = was;
        if !was {
            self.eng.take_trace();
        }
        Ok(BatchOutcome { breakdowns, events })
    }

    /// Fills `fill_fraction` of the logical space, overwrites random pages
    /// until every plane is collecting, then lets idle-time collection refill
    /// each free pool to one block under the trigger. Nothing here is timed.
    pub fn make_steady_state(&mut self, fill_fraction: f64, overwrite_ops: u64, seed: u64) -> Result<(), SsdError> {
        if !(fill_fraction > 0.0 && fill_fraction < 1.0) {
            return Err(SsdError::InvalidFill(fill_fraction));
        }
        let cipher = self.sed_cipher().is_some();
        let filled = ((self.ftl.logical_pages() as f64) * fill_fraction).floor().max(1.0) as u64;
        for lpn in 0..filled {
            self.prep_write(lpn, cipher)?;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..overwrite_ops {
            self.prep_write(rng.gen_range(0..filled), cipher)?;
        }
        let planes = self.ftl.planes();
        let budget = self.ftl.logical_pages() * 4;
        let mut extra = 0;
        while (0..planes).any(|p| !self.ftl.gc_pending(p)) {
            if extra == budget {
                break;
            }
            self.prep_write(rng.gen_range(0..filled), cipher)?;
            extra += 1;
        }
        for p in 0..planes {
            let target = self.ftl.gc_trigger(p).saturating_sub(1);
            while self.ftl.free_blocks(p) < target {
                let before = self.ftl.free_blocks(p);
                let moved = self.ftl.relocate(p, self.cfg.pages_per_block)?;
                if moved.is_empty() && self.ftl.free_blocks(p) == before {
                    break;
                }
            }
            self.ftl.wear_level(p)?;
        }
        Ok(())
    }

    fn prep_write(&mut self, lpn: u64, cipher: bool) -> Result<(), SsdError> {
        let fp = self.ftl.plane_of_lpn(lpn);
        if self.ftl.gc_urgent(fp) {
            while self.ftl.free_blocks(fp) <= self.ftl.gc_hard_limit() + 1 {
                if self.ftl.reclaim(fp)?.is_none() {
                    break;
                }
            }
        } else if self.ftl.gc_pending(fp) {
            self.ftl.relocate(fp, self.cfg.gc_quantum_pages)?;
        }
        self.ftl.write(lpn, cipher)?;
        Ok(())
    }

    /// Collects the device-wide greedy victim: most invalid pages, then lowest erase count.
    pub fn gc_step(&mut self) -> Result<GcReport, SsdError> {
        let best = (0..self.ftl.planes())
            .filter_map(|p| self.ftl.select_victim(p).map(|b| (p, b)))
            .max_by_key(|&(p, b)| (self.ftl.invalid_pages(p, b), std::cmp::Reverse(self.ftl.erase_count(p, b)), std::cmp::Reverse(p)));
        let Some((fp, _)) = best else { return Err(SsdError::NothingToCollect) };
        let r = self.ftl.reclaim(fp)?.ok_or(SsdError::NothingToCollect)?;
        self.stats.relocated_pages += r.moves.len() as u64;
        let t0 = self.eng.now();
        let rid = self.new_rid();
        let start = self.add(Step::Join, Category::Ftl, "gc", rid, &[], t0);
        let loc = self.loc(fp);
        let tail = self.relocation_chain(rid, loc, r.moves.len(), true, start, t0);
        let b = self.execute(&[(tail, t0)]).remove(0);
        Ok(GcReport { plane: loc.plane, victim: r.victim, relocated: r.moves.len() as u32, duration_us: b.total_us })
    }

    /// One wear-leveling pass over every plane; returns relocated pages.
    pub fn wear_level_step(&mut self) -> Result<u32, SsdError> {
        let t0 = self.eng.now();
        let rid = self.new_rid();
        let start = self.add(Step::Join, Category::Ftl, "wl", rid, &[], t0);
        let mut tails = vec![start];
        let mut moved = 0;
        for fp in 0..self.ftl.planes() {
            if let Some(r) = self.ftl.wear_level(fp)? {
                moved += r.moves.len() as u32;
                let loc = self.loc(fp);
                tails.push(self.relocation_chain(rid, loc, r.moves.len(), true, start, t0));
            }
        }
        let sink = self.add(Step::Join, Category::Ftl, "wl", rid, &tails, t0);
        self.execute(&[(sink, t0)]);
        self.stats.relocated_pages += u64::from(moved);
        Ok(moved)
    }

    /// Loads, hashes and verifies a firmware image from the boot region of die 0.
    pub fn secure_boot(&mut self, job: &BootJob) -> Result<LatencyBreakdown, SsdError> {
        if job.image_bytes == 0 {
            return Err(SsdError::ZeroBytes);
        }
        let t0 = self.eng.now();
        let rid = self.new_rid();
        let page = u64::from(self.cfg.page_bytes);
        let pages = job.image_bytes.div_ceil(page);
        let region = u64::from(self.cfg.boot_region_blocks) * u64::from(self.cfg.pages_per_block) * u64::from(self.cfg.planes);
        if pages > region {
            return Err(SsdError::Ftl(FtlError::IllegalLba { lpn: pages - 1, limit: region }));
        }
        let boot_planes: Vec<u32> = (0..self.cfg.planes).collect();
        let fplanes: Vec<u32> = boot_planes.iter().map(|&p| self.fplane_of[p as usize]).collect();
        let owed = self.collect_for(&fplanes)?;
        let start = self.add(Step::Join, Category::Stack, "boot", rid, &[], t0);
        let tails = self.gc_tails(rid, &owed, start, t0);

        let segs = u64::from(self.cfg.boot_segments).min(pages);
        let bb = job.variant.block_bytes();
        let mut seg_pages = vec![0u64; segs as usize];
        let mut seg_bytes = vec![0u64; segs as usize];
        for i in 0..pages {
            let s = (i % segs) as usize;
            seg_pages[s] += 1;
            seg_bytes[s] += page.min(job.image_bytes - i * page);
        }
        let per_block = job.variant.block_cycles(&self.calib);
        let die = 0usize;
        let ch = 0usize;
        let mut seg_tail: Vec<Option<TaskId>> = vec![None; segs as usize];
        let mut seg_seen = vec![0u64; segs as usize];
        let mut ends = Vec::with_capacity(pages as usize);
        for i in 0..pages {
            let s = (i % segs) as usize;
            seg_seen[s] += 1;
            let bytes = page.min(job.image_bytes - i * page);
            let blocks = if seg_seen[s] == seg_pages[s] {
                job.variant.blocks(seg_bytes[s]) - (seg_pages[s] - 1) * (page / bb)
            } else {
                bytes / bb
            };
            let plane = (i % u64::from(self.cfg.planes)) as usize;
            let loc = self.loc_of_global(plane as u32);
            let gc = tails.get(&loc.fplane).copied();
            let (slot, array) = (self.res.slot[plane], self.res.array[plane]);
            let acq = self.add(Step::Acquire(slot), Category::Nand, "register", rid, &[start], t0);
            let r = self.work(array, self.tm.t_r, Category::Nand, "sense", rid, &Self::array_deps(acq, gc), t0);
            let c = self.work(array, self.tm.t_rcbsy, Category::Nand, "cache", rid, &[r], t0);
            let bus_ns = us_to_ns(self.cfg.bus_us(bytes));
            match job.placement {
                Placement::Fv => {
                    let l = self.work(self.res.ldpc[die], self.tm.ldpc, Category::Nand, "ldpc", rid, &[c], t0);
                    let mut hdeps = vec![l];
                    hdeps.extend(seg_tail[s]);
                    let h = self.work(self.res.hash[die], self.cfg.cycles_to_ns(blocks * per_block), Category::Crypto, "hash", rid, &hdeps, t0);
                    seg_tail[s] = Some(h);
                    let b = self.work(self.res.bus[ch], bus_ns, Category::Bus, "bus", rid, &[l], t0);
                    ends.push(self.add(Step::Release(slot), Category::Nand, "register", rid, &[h, b], t0));
                }
                Placement::Ncp | Placement::Cpu => {
                    let b = self.work(self.res.bus[ch], bus_ns, Category::Bus, "bus", rid, &[c], t0);
                    let rel = self.add(Step::Release(slot), Category::Nand, "register", rid, &[b], t0);
                    let l = self.work(self.res.ecc, self.tm.ldpc, Category::Nand, "ldpc", rid, &[rel], t0);
                    ends.push(if job.placement == Placement::Ncp {
                        self.work(self.res.dram, self.tm.dram_unit, Category::Dram, "dram", rid, &[l], t0)
                    } else {
                        self.work(self.res.host_link, self.pcie_ns(bytes), Category::Bus, "host.link", rid, &[l], t0)
                    });
                }
            }
        }
        let loaded = self.add(Step::Join, Category::Nand, "loaded", rid, &ends, t0);
        let root_blocks = job.variant.blocks(segs * job.variant.digest_bytes() as u64);
        let sink = match job.placement {
            Placement::Fv => {
                let root = self.work(self.res.hash[die], self.cfg.cycles_to_ns(root_blocks * per_block), Category::Crypto, "hash.root", rid, &[loaded], t0);
                self.work(self.res.ace[die], self.cfg.cycles_to_ns(job.verify_cycles), Category::Crypto, "verify", rid, &[root], t0)
            }
            Placement::Ncp => {
                let mut hs = Vec::new();
                for s in 0..segs as usize {
                    let cyc = job.variant.blocks(seg_bytes[s]) * per_block;
                    hs.push(self.work(self.res.ncp_hash, self.ncp_cycles_ns(cyc), Category::Crypto, "hash", rid, &[loaded], t0));
                }
                let root = self.work(self.res.ncp_hash, self.ncp_cycles_ns(root_blocks * per_block), Category::Crypto, "hash.root", rid, &hs, t0);
                self.work(self.res.ncp_ace, self.ncp_cycles_ns(job.verify_cycles), Category::Crypto, "verify", rid, &[root], t0)
            }
            Placement::Cpu => {
                let h = self.work(self.res.host_cpu, us_to_ns(self.host_hash_us(job.variant, job.image_bytes)), Category::Crypto, "host.hash", rid, &[loaded], t0);
                self.work(self.res.host_cpu, us_to_ns(job.host_verify_us), Category::Crypto, "host.verify", rid, &[h], t0)
            }
        };
        Ok(self.execute(&[(sink, t0)]).remove(0))
    }

    /// Hashes and signs a message held in NAND or in controller memory.
    pub fn sign(&mut self, job: &SignJob) -> Result<LatencyBreakdown, SsdError> {
        if job.bytes == 0 {
            return Err(SsdError::ZeroBytes);
        }
        let t0 = self.eng.now();
        let rid = self.new_rid();
        let (ready, die) = match job.source {
            SignSource::Stored { lba } => self.sign_input_from_nand(rid, job, lba, t0)?,
            SignSource::Controller => {
                let die = 0u32;
                let t = match job.placement {
                    Placement::Fv => {
                        let ch = self.cfg.channel_of_die(die) as usize;
                        self.work(self.res.bus[ch], us_to_ns(self.cfg.bus_us(job.bytes)), Category::Bus, "bus", rid, &[], t0)
                    }
                    Placement::Ncp => self.work(self.res.dram, self.dram_ns(job.bytes), Category::Dram, "dram", rid, &[], t0),
                    Placement::Cpu => self.work(self.res.host_link, self.pcie_ns(job.bytes), Category::Bus, "host.link", rid, &[], t0),
                };
                (t, die as usize)
            }
        };
        let sink = match job.placement {
            Placement::Fv => {
                let h = self.work(self.res.hash[die], self.cfg.cycles_to_ns(job.hash_cycles), Category::Crypto, "hash", rid, &[ready], t0);
                self.work(self.res.ace[die], self.cfg.cycles_to_ns(job.sign_cycles), Category::Crypto, "sign", rid, &[h], t0)
            }
            Placement::Ncp => {
                let h = self.work(self.res.ncp_hash, self.ncp_cycles_ns(job.hash_cycles), Category::Crypto, "hash", rid, &[ready], t0);
                self.work(self.res.ncp_ace, self.ncp_cycles_ns(job.sign_cycles), Category::Crypto, "sign", rid, &[h], t0)
            }
            Placement::Cpu => {
                let h = self.work(self.res.host_cpu, us_to_ns(job.host_hash_us), Category::Crypto, "host.hash", rid, &[ready], t0);
                self.work(self.res.host_cpu, us_to_ns(job.host_sign_us), Category::Crypto, "host.sign", rid, &[h], t0)
            }
        };
        Ok(self.execute(&[(sink, t0)]).remove(0))
    }

    fn sign_input_from_nand(&mut self, rid: u32, job: &SignJob, lba: u64, t0: Ns) -> Result<(TaskId, usize), SsdError> {
        let pages = self.pages_of(job.bytes);
        self.ftl.check_range(lba, pages)?;
        let touched = self.touched(lba, pages);
        let owed = self.collect_for(&touched)?;
        let ftl = self.front_end(rid, job.bytes, &[], t0);
        let tails = self.gc_tails(rid, &owed, ftl, t0);
        let home = self.loc(self.ftl.plane_of_lpn(lba));
        let mut ends = Vec::new();
        for i in 0..pages {
            let loc = self.loc(self.ftl.plane_of_lpn(lba + i));
            let gc = tails.get(&loc.fplane).copied();
            let (slot, array) = (self.res.slot[loc.plane as usize], self.res.array[loc.plane as usize]);
            let acq = self.add(Step::Acquire(slot), Category::Nand, "register", rid, &[ftl], t0);
            let r = self.work(array, self.tm.t_r, Category::Nand, "sense", rid, &Self::array_deps(acq, gc), t0);
            let mut t = self.work(array, self.tm.t_rcbsy, Category::Nand, "cache", rid, &[r], t0);
            let bus = self.res.bus[loc.ch as usize];
            match job.placement {
                Placement::Fv => {
                    t = self.work(self.res.ldpc[loc.die as usize], self.tm.ldpc, Category::Nand, "ldpc", rid, &[t], t0);
                    if loc.die != home.die {
                        t = self.work(bus, self.tm.bus_page, Category::Bus, "bus", rid, &[t], t0);
                        if loc.ch != home.ch {
                            t = self.work(self.res.bus[home.ch as usize], self.tm.bus_page, Category::Bus, "bus", rid, &[t], t0);
                        }
                    }
                    t = self.add(Step::Release(slot), Category::Nand, "register", rid, &[t], t0);
                }
                Placement::Ncp | Placement::Cpu => {
                    t = self.work(bus, self.tm.bus_page, Category::Bus, "bus", rid, &[t], t0);
                    t = self.add(Step::Release(slot), Category::Nand, "register", rid, &[t], t0);
                    t = self.work(self.res.ecc, self.tm.ldpc, Category::Nand, "ldpc", rid, &[t], t0);
                    t = if job.placement == Placement::Ncp {
                        self.work(self.res.dram, self.tm.dram_unit, Category::Dram, "dram", rid, &[t], t0)
                    } else {
                        self.work(self.res.host_link, self.tm.pcie_page, Category::Bus, "host.link", rid, &[t], t0)
                    };
                }
            }
            ends.push(t);
        }
        let ready = self.add(Step::Join, Category::Nand, "loaded", rid, &ends, t0);
        Ok((ready, home.die as usize))
    }

    /// Mapping injectivity and page conservation.
    pub fn audit(&self) -> Result<(), String> {
        self.ftl.audit()
    }

    /// Every page resident in NAND is ciphertext.
    pub fn audit_ciphertext(&self) -> bool {
        self.ftl.all_resident_ciphertext()
    }
}

pub const TRACE_CSV_HEADER: &str = "kind,request,time_ns,seq,resource,action,label,stack_us,ftl_us,nand_us,bus_us,dram_us,crypto_us,total_us";

/// One row per event, then one row per request breakdown.
pub fn trace_csv(events: &[Event], breakdowns: &[(u32, LatencyBreakdown)]) -> String {
    let mut out = String::from(TRACE_CSV_HEADER);
    out.push('\n');
    for e in events {
        out.push_str(&format!("event,{},{},{},{},{},{},,,,,,,\n", e.request, e.time_ns, e.seq, e.resource, e.action, e.label));
    }
    for (rid, b) in breakdowns {
        out.push_str(&format!(
            "breakdown,{rid},,,,,,{:.3},{:.3},{:.3},{:.3},{:.3},{:.3},{:.3}\n",
            b.stack_us, b.ftl_us, b.nand_us, b.bus_us, b.dram_us, b.crypto_us, b.total_us
        ));
    }
    out
}
