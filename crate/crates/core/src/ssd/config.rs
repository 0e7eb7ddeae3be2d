use super::SsdError;
use serde::{Deserialize, Serialize};

/// Geometry and timing of the simulated drive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SsdConfig {
    pub channels: u32,
    pub packages: u32,
    pub dies: u32,
    pub planes: u32,
    pub blocks: u32,
    pub pages_per_block: u32,
    pub page_bytes: u32,
    pub bus_mts: u32,
    pub bus_width_bits: u32,
    pub t_r_us: f64,
    pub t_prog_us: f64,
    pub t_erase_us: f64,
    pub t_pcbsy_us: f64,
    pub t_rcbsy_us: f64,
    pub stack_us: f64,
    pub engine_mhz: f64,
    pub engines_per_die: u32,
    pub lanes_per_engine: u32,
    /// Cache and page registers alternate so transfer overlaps array access.
    pub double_buffering: bool,
    pub overprovision: f64,
    /// Blocking collection once a plane is down to this many free blocks.
    pub gc_hard_free_blocks: u32,
    /// Relocations charged to each touched plane while collection is pending.
    pub gc_quantum_pages: u32,
    /// Blocks per plane of die 0 kept for the firmware image.
    pub boot_region_blocks: u32,
    /// Independently hashed image segments.
    pub boot_segments: u32,
}

impl Default for SsdConfig {
    fn default() -> Self {
        SsdConfig {
            channels: 4,
            packages: 4,
            dies: 2,
            planes: 4,
            blocks: 682,
            pages_per_block: 128,
            page_bytes: 4096,
            bus_mts: 1600,
            bus_width_bits: 8,
            t_r_us: 45.0,
            t_prog_us: 400.0,
            t_erase_us: 2000.0,
            t_pcbsy_us: 3.0,
            t_rcbsy_us: 3.0,
            stack_us: 5.0,
            engine_mhz: 200.0,
            engines_per_die: 2,
            lanes_per_engine: 16,
            double_buffering: true,
            overprovision: 0.07,
            gc_hard_free_blocks: 2,
            gc_quantum_pages: 1,
            boot_region_blocks: 8,
            boot_segments: 2,
        }
    }
}

pub(crate) fn us_to_ns(us: f64) -> u64 {
    (us * 1000.0).round() as u64
}

impl SsdConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, SsdError> {
        let cfg: SsdConfig = toml::from_str(text).map_err(|e| SsdError::InvalidConfig(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), SsdError> {
        let counts = [
            ("channels", self.channels),
            ("packages", self.packages),
            ("dies", self.dies),
            ("planes", self.planes),
            ("blocks", self.blocks),
            ("pages_per_block", self.pages_per_block),
            ("page_bytes", self.page_bytes),
            ("bus_mts", self.bus_mts),
            ("bus_width_bits", self.bus_width_bits),
            ("engines_per_die", self.engines_per_die),
            ("lanes_per_engine", self.lanes_per_engine),
            ("gc_quantum_pages", self.gc_quantum_pages),
            ("boot_segments", self.boot_segments),
        ];
        for (name, v) in counts {
            if v == 0 {
                return Err(SsdError::InvalidConfig(format!("{name} must be positive")));
            }
        }
        let times = [
            ("t_r_us", self.t_r_us),
            ("t_prog_us", self.t_prog_us),
            ("t_erase_us", self.t_erase_us),
            ("t_pcbsy_us", self.t_pcbsy_us),
            ("t_rcbsy_us", self.t_rcbsy_us),
            ("stack_us", self.stack_us),
            ("engine_mhz", self.engine_mhz),
        ];
        for (name, v) in times {
            if !(v.is_finite() && v > 0.0) {
                return Err(SsdError::InvalidConfig(format!("{name} must be positive")));
            }
        }
        if !(0.0..1.0).contains(&self.overprovision) {
            return Err(SsdError::InvalidConfig("overprovision must lie in [0, 1)".into()));
        }
        if self.boot_region_blocks >= self.blocks {
            return Err(SsdError::InvalidConfig("boot region leaves no pool blocks".into()));
        }
        if self.blocks - self.boot_region_blocks <= self.gc_hard_free_blocks + 1 {
            return Err(SsdError::InvalidConfig("pool too small for the collection watermark".into()));
        }
        Ok(())
    }

    pub fn total_dies(&self) -> u32 {
        self.channels * self.packages * self.dies
    }

    pub fn total_planes(&self) -> u32 {
        self.total_dies() * self.planes
    }

    /// One page over the flash bus.
    pub fn page_bus_us(&self) -> f64 {
        self.bus_us(u64::from(self.page_bytes))
    }

    pub fn bus_us(&self, bytes: u64) -> f64 {
        let bytes_per_us = f64::from(self.bus_mts) * f64::from(self.bus_width_bits) / 8.0;
        bytes as f64 / bytes_per_us
    }

    pub fn cycles_to_ns(&self, cycles: u64) -> u64 {
        (cycles as f64 * 1000.0 / self.engine_mhz).round() as u64
    }

    /// Global plane index of stripe unit `k`: channel first, then plane, die, package.
    pub fn stripe_plane(&self, k: u64) -> u32 {
        let k = (k % u64::from(self.total_planes())) as u32;
        let ch = k % self.channels;
        let plane = (k / self.channels) % self.planes;
        let die = (k / (self.channels * self.planes)) % self.dies;
        let pkg = k / (self.channels * self.planes * self.dies);
        self.plane_id(ch, pkg, die, plane)
    }

    pub fn plane_id(&self, ch: u32, pkg: u32, die: u32, plane: u32) -> u32 {
        ((ch * self.packages + pkg) * self.dies + die) * self.planes + plane
    }

    pub fn die_of_plane(&self, plane_id: u32) -> u32 {
        plane_id / self.planes
    }

    pub fn channel_of_die(&self, die_id: u32) -> u32 {
        die_id / (self.packages * self.dies)
    }
}
