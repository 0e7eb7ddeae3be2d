//! Page-mapped flash translation layer with greedy garbage collection and
//! static wear leveling. Everything here is bookkeeping; timing is charged by
//! the simulator from the moves this layer reports.

use std::collections::BTreeSet;
use thiserror::Error;

pub const UNMAPPED: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FtlError {
    #[error("logical page {lpn} is outside the {limit}-page logical space")]
    IllegalLba { lpn: u64, limit: u64 },
    #[error("plane {0} has no free block left")]
    OutOfSpace(u32),
}

/// One valid page moved from `from` to `to` (physical page numbers).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Move {
    pub lpn: u32,
    pub from: u32,
    pub to: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reclaim {
    pub plane: u32,
    pub victim: u32,
    pub moves: Vec<Move>,
}

#[derive(Debug, Clone)]
pub struct FtlState {
    planes: u32,
    blocks: u32,
    ppb: u32,
    l2p: Vec<u32>,
    p2l: Vec<u32>,
    cipher: Vec<bool>,
    erase: Vec<u32>,
    valid: Vec<u32>,
    written: Vec<u32>,
    reserved: Vec<u32>,
    free: Vec<BTreeSet<(u32, u32)>>,
    active: Vec<u32>,
    victim: Vec<u32>,
    trigger: Vec<u32>,
    hard: u32,
    wl_threshold: u32,
    erased_total: u64,
}

impl FtlState {
    /// `reserved[p]` leading blocks of plane `p` are kept out of the pool.
    pub fn new(
        planes: u32,
        blocks: u32,
        ppb: u32,
        reserved: Vec<u32>,
        overprovision: f64,
        gc_free_fraction: f64,
        gc_hard_free_blocks: u32,
        wl_threshold: u32,
    ) -> Self {
        assert_eq!(reserved.len(), planes as usize);
        let pool: Vec<u32> = reserved.iter().map(|r| blocks - r).collect();
        let min_pool = *pool.iter().min().expect("at least one plane");
        let logical_per_plane = ((f64::from(min_pool) * f64::from(ppb)) * (1.0 - overprovision)).floor() as u32;
        let trigger = pool.iter().map(|&b| (f64::from(b) * gc_free_fraction).ceil().max(1.0) as u32).collect();
        let mut free = Vec::with_capacity(planes as usize);
        for p in 0..planes {
            free.push((reserved[p as usize]..blocks).map(|b| (0, b)).collect());
        }
        let phys = planes as usize * blocks as usize * ppb as usize;
        FtlState {
            planes,
            blocks,
            ppb,
            l2p: vec![UNMAPPED; planes as usize * logical_per_plane as usize],
            p2l: vec![UNMAPPED; phys],
            cipher: vec![false; phys],
            erase: vec![0; planes as usize * blocks as usize],
            valid: vec![0; planes as usize * blocks as usize],
            written: vec![0; planes as usize * blocks as usize],
            reserved,
            free,
            active: vec![UNMAPPED; planes as usize],
            victim: vec![UNMAPPED; planes as usize],
            trigger,
            hard: gc_hard_free_blocks,
            wl_threshold,
            erased_total: 0,
        }
    }

    pub fn logical_pages(&self) -> u64 {
        self.l2p.len() as u64
    }

    pub fn planes(&self) -> u32 {
        self.planes
    }

    pub fn pages_per_block(&self) -> u32 {
        self.ppb
    }

    pub fn plane_of_lpn(&self, lpn: u64) -> u32 {
        (lpn % u64::from(self.planes)) as u32
    }

    pub fn plane_of_phys(&self, phys: u32) -> u32 {
        phys / (self.blocks * self.ppb)
    }

    fn block_of(&self, phys: u32) -> usize {
        (phys / self.ppb) as usize
    }

    fn gblock(&self, plane: u32, block: u32) -> usize {
        (plane * self.blocks + block) as usize
    }

    pub fn check_range(&self, lpn: u64, pages: u64) -> Result<(), FtlError> {
        let limit = self.logical_pages();
        if lpn.checked_add(pages).is_none_or(|end| end > limit) {
            return Err(FtlError::IllegalLba { lpn: lpn + pages.saturating_sub(1), limit });
        }
        Ok(())
    }

    pub fn lookup(&self, lpn: u64) -> Option<u32> {
        self.l2p.get(lpn as usize).copied().filter(|&p| p != UNMAPPED)
    }

    pub fn free_blocks(&self, plane: u32) -> u32 {
        self.free[plane as usize].len() as u32
    }

    pub fn gc_trigger(&self, plane: u32) -> u32 {
        self.trigger[plane as usize]
    }

    pub fn gc_hard_limit(&self) -> u32 {
        self.hard
    }

    pub fn wl_threshold(&self) -> u32 {
        self.wl_threshold
    }

    /// Free pool below the trigger watermark.
    pub fn gc_pending(&self, plane: u32) -> bool {
        self.free_blocks(plane) < self.gc_trigger(plane)
    }

    pub fn gc_urgent(&self, plane: u32) -> bool {
        self.free_blocks(plane) <= self.hard
    }

    pub fn erase_count(&self, plane: u32, block: u32) -> u32 {
        self.erase[self.gblock(plane, block)]
    }

    pub fn valid_pages(&self, plane: u32, block: u32) -> u32 {
        self.valid[self.gblock(plane, block)]
    }

    pub fn invalid_pages(&self, plane: u32, block: u32) -> u32 {
        let g = self.gblock(plane, block);
        self.written[g] - self.valid[g]
    }

    pub fn erased_total(&self) -> u64 {
        self.erased_total
    }

    pub fn is_ciphertext(&self, phys: u32) -> bool {
        self.cipher[phys as usize]
    }

    fn pool(&self, plane: u32) -> std::ops::Range<u32> {
        self.reserved[plane as usize]..self.blocks
    }

    fn alloc(&mut self, plane: u32) -> Result<u32, FtlError> {
        let p = plane as usize;
        let a = self.active[p];
        if a == UNMAPPED || self.written[self.gblock(plane, a)] == self.ppb {
            let (_, b) = self.free[p].pop_first().ok_or(FtlError::OutOfSpace(plane))?;
            self.active[p] = b;
        }
        let b = self.active[p];
        let g = self.gblock(plane, b);
        let phys = g as u32 * self.ppb + self.written[g];
        self.written[g] += 1;
        Ok(phys)
    }

    fn place(&mut self, lpn: u32, phys: u32, cipher: bool) {
        self.l2p[lpn as usize] = phys;
        self.p2l[phys as usize] = lpn;
        self.cipher[phys as usize] = cipher;
        let g = self.block_of(phys);
        self.valid[g] += 1;
    }

    fn invalidate(&mut self, phys: u32) {
        self.p2l[phys as usize] = UNMAPPED;
        let g = self.block_of(phys);
        self.valid[g] -= 1;
    }

    /// Maps `lpn` to a fresh page in its plane, invalidating the old copy.
    pub fn write(&mut self, lpn: u64, cipher: bool) -> Result<u32, FtlError> {
        self.check_range(lpn, 1)?;
        let plane = self.plane_of_lpn(lpn);
        let phys = self.alloc(plane)?;
        if let Some(old) = self.lookup(lpn) {
            self.invalidate(old);
        }
        self.place(lpn as u32, phys, cipher);
        Ok(phys)
    }

    fn erase_block(&mut self, plane: u32, block: u32) {
        let g = self.gblock(plane, block);
        debug_assert_eq!(self.valid[g], 0, "erasing a block with valid data");
        self.written[g] = 0;
        self.erase[g] += 1;
        self.erased_total += 1;
        self.free[plane as usize].insert((self.erase[g], block));
    }

    /// Closed block with the most invalid pages; ties go to the lowest erase count.
    pub fn select_victim(&self, plane: u32) -> Option<u32> {
        use std::cmp::Reverse;
        let active = self.active[plane as usize];
        self.pool(plane)
            .filter(|&b| {
                let g = self.gblock(plane, b);
                b != active && self.written[g] == self.ppb && self.valid[g] < self.ppb
            })
            .max_by_key(|&b| (self.invalid_pages(plane, b), Reverse(self.erase_count(plane, b)), Reverse(b)))
    }

    fn first_valid(&self, plane: u32, block: u32) -> Option<u32> {
        let base = self.gblock(plane, block) as u32 * self.ppb;
        (base..base + self.ppb).find(|&p| self.p2l[p as usize] != UNMAPPED)
    }

    fn move_page(&mut self, from: u32) -> Result<Move, FtlError> {
        let plane = self.plane_of_phys(from);
        let lpn = self.p2l[from as usize];
        let cipher = self.cipher[from as usize];
        let to = self.alloc(plane)?;
        self.invalidate(from);
        self.place(lpn, to, cipher);
        Ok(Move { lpn, from, to })
    }

    /// Moves up to `quantum` valid pages out of the current victim, erasing
    /// victims as they empty.
    pub fn relocate(&mut self, plane: u32, quantum: u32) -> Result<Vec<Move>, FtlError> {
        let mut moves = Vec::new();
        while (moves.len() as u32) < quantum {
            let p = plane as usize;
            if self.victim[p] == UNMAPPED {
                match self.select_victim(plane) {
                    Some(v) => self.victim[p] = v,
                    None => break,
                }
            }
            let v = self.victim[p];
            match self.first_valid(plane, v) {
                Some(from) => moves.push(self.move_page(from)?),
                None => {
                    self.erase_block(plane, v);
                    self.victim[p] = UNMAPPED;
                }
            }
        }
        let v = self.victim[plane as usize];
        if v != UNMAPPED && self.valid_pages(plane, v) == 0 {
            self.erase_block(plane, v);
            self.victim[plane as usize] = UNMAPPED;
        }
        Ok(moves)
    }

    /// Reclaims one whole victim block; `None` when nothing is reclaimable.
    /// The caller erases the victim via [`FtlState::finish_reclaim`].
    pub fn reclaim(&mut self, plane: u32) -> Result<Option<Reclaim>, FtlError> {
        let p = plane as usize;
        let v = if self.victim[p] != UNMAPPED {
            self.victim[p]
        } else {
            match self.select_victim(plane) {
                Some(v) => v,
                None => return Ok(None),
            }
        };
        self.victim[p] = UNMAPPED;
        let mut moves = Vec::new();
        while let Some(from) = self.first_valid(plane, v) {
            moves.push(self.move_page(from)?);
        }
        self.erase_block(plane, v);
        Ok(Some(Reclaim { plane, victim: v, moves }))
    }

    /// Erase-count spread over the plane's pool.
    pub fn wear_spread(&self, plane: u32) -> u32 {
        let counts = self.pool(plane).map(|b| self.erase_count(plane, b));
        let (lo, hi) = counts.fold((u32::MAX, 0), |(lo, hi), c| (lo.min(c), hi.max(c)));
        hi - lo
    }

    /// Moves the data of the least-worn closed block onto the write frontier
    /// so the block rejoins the free pool, when the spread exceeds the threshold.
    pub fn wear_level(&mut self, plane: u32) -> Result<Option<Reclaim>, FtlError> {
        if self.wear_spread(plane) <= self.wl_threshold {
            return Ok(None);
        }
        let p = plane as usize;
        let (active, victim) = (self.active[p], self.victim[p]);
        let cold = self
            .pool(plane)
            .filter(|&b| b != active && b != victim && self.written[self.gblock(plane, b)] == self.ppb)
            .min_by_key(|&b| (self.erase_count(plane, b), b));
        let Some(cold) = cold else { return Ok(None) };
        let mut moves = Vec::new();
        while let Some(from) = self.first_valid(plane, cold) {
            moves.push(self.move_page(from)?);
        }
        self.erase_block(plane, cold);
        Ok(Some(Reclaim { plane, victim: cold, moves }))
    }

    /// Consistency audit: injective mapping, valid counters and page
    /// conservation per plane.
    pub fn audit(&self) -> Result<(), String> {
        let mut valid = vec![0u32; self.valid.len()];
        for (lpn, &phys) in self.l2p.iter().enumerate() {
            if phys == UNMAPPED {
                continue;
            }
            if self.p2l[phys as usize] != lpn as u32 {
                return Err(format!("logical page {lpn} maps to {phys}, which maps back to {}", self.p2l[phys as usize]));
            }
            if self.plane_of_phys(phys) != self.plane_of_lpn(lpn as u64) {
                return Err(format!("logical page {lpn} left its plane"));
            }
            valid[self.block_of(phys)] += 1;
        }
        for (phys, &lpn) in self.p2l.iter().enumerate() {
            if lpn != UNMAPPED && self.l2p[lpn as usize] != phys as u32 {
                return Err(format!("physical page {phys} claims logical page {lpn}"));
            }
        }
        if valid != self.valid {
            return Err("per-block valid counters drifted".into());
        }
        for plane in 0..self.planes {
            let mut free_pages = 0u64;
            let mut used = 0u64;
            for b in self.pool(plane) {
                let g = self.gblock(plane, b);
                if self.written[g] > self.ppb || self.valid[g] > self.written[g] {
                    return Err(format!("block {b} of plane {plane} is over-full"));
                }
                if self.free[plane as usize].contains(&(self.erase[g], b)) {
                    if self.written[g] != 0 {
                        return Err(format!("free block {b} of plane {plane} holds data"));
                    }
                    free_pages += u64::from(self.ppb);
                } else {
                    used += u64::from(self.ppb);
                }
            }
            let pool = u64::from(self.blocks - self.reserved[plane as usize]) * u64::from(self.ppb);
            if free_pages + used != pool {
                return Err(format!("plane {plane} lost pages"));
            }
        }
        Ok(())
    }

    /// Every resident valid page carries the ciphertext flag.
    pub fn all_resident_ciphertext(&self) -> bool {
        self.p2l.iter().zip(&self.cipher).all(|(&lpn, &c)| lpn == UNMAPPED || c)
    }

    pub fn resident_pages(&self) -> u64 {
        self.l2p.iter().filter(|&&p| p != UNMAPPED).count() as u64
    }
}
