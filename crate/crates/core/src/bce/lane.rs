use crate::datapath::{
    barrel_shift, benes::benes_permute_pair, gf_mul, logic_op, mod_add_word, mod_mul_word,
    sbox_lookup, BenesConfig, CombinedBenes, LogicOp, SBoxTable, ShiftMode, Word,
};

/// The five building blocks of a block cipher lane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Unit {
    /// Arithmetic unit.
    Au,
    /// Logic operation unit.
    Lou,
    /// Permutation unit.
    Pu,
    /// Shift unit.
    Su,
    /// Table unit.
    Tu,
}

/// Primitive operation categories used to describe each cipher.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Primitive {
    Xor,
    And,
    Or,
    Not,
    SBox,
    Shift,
    Permutation,
    ModAdd,
    ModMult,
    /// Finite-field multiplication.
    Multiplication,
}

impl Primitive {
    pub fn unit(self) -> Unit {
        match self {
            Primitive::Xor | Primitive::And | Primitive::Or | Primitive::Not => Unit::Lou,
            Primitive::SBox => Unit::Tu,
            Primitive::Shift => Unit::Su,
            Primitive::Permutation => Unit::Pu,
            Primitive::ModAdd | Primitive::ModMult | Primitive::Multiplication => Unit::Au,
        }
    }

    /// Issue cost in engine cycles.
    pub fn cycles(self) -> u64 {
        match self {
            Primitive::ModMult => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Instruction {
    pub unit: Unit,
    pub op: Primitive,
    pub width: u32,
    pub imm: u64,
}

/// Executes primitive operations and optionally records them.
#[derive(Debug, Default)]
pub struct Lane {
    trace: Option<Vec<Instruction>>,
    cycles: u64,
    round_cycles: u64,
    round_start: Option<u64>,
}

fn w(v: u64, width: u32) -> Word {
    Word::new(v, width).expect("lane operand exceeds its declared width")
}

impl Lane {
    pub fn new() -> Self {
        Lane::default()
    }

    pub fn tracing() -> Self {
        Lane {
            trace: Some(Vec::new()),
            ..Lane::default()
        }
    }

    pub fn cycles(&self) -> u64 {
        self.cycles
    }

    /// Cycles spent between `begin_round` and `end_round` markers.
    pub fn round_cycles(&self) -> u64 {
        self.round_cycles
    }

    pub fn into_trace(self) -> Vec<Instruction> {
        self.trace.unwrap_or_default()
    }

    pub fn begin_round(&mut self) {
        self.round_start = Some(self.cycles);
    }

    pub fn end_round(&mut self) {
        if let Some(s) = self.round_start.take() {
            self.round_cycles += self.cycles - s;
        }
    }

    fn record(&mut self, op: Primitive, width: u32, imm: u64) {
        self.cycles += op.cycles();
        if let Some(t) = self.trace.as_mut() {
            t.push(Instruction {
                unit: op.unit(),
                op,
                width,
                imm,
            });
        }
    }

    fn logic(&mut self, a: u64, b: u64, width: u32, op: LogicOp, prim: Primitive) -> u64 {
        self.record(prim, width, 0);
        logic_op(w(a, width), w(b, width), op).unwrap().value()
    }

    pub fn xor(&mut self, a: u64, b: u64, width: u32) -> u64 {
        self.logic(a, b, width, LogicOp::Xor, Primitive::Xor)
    }

    pub fn and(&mut self, a: u64, b: u64, width: u32) -> u64 {
        self.logic(a, b, width, LogicOp::And, Primitive::And)
    }

    pub fn or(&mut self, a: u64, b: u64, width: u32) -> u64 {
        self.logic(a, b, width, LogicOp::Or, Primitive::Or)
    }

    pub fn not(&mut self, a: u64, width: u32) -> u64 {
        self.logic(a, 0, width, LogicOp::Not, Primitive::Not)
    }

    fn shift(&mut self, x: u64, k: u32, width: u32, mode: ShiftMode) -> u64 {
        self.record(Primitive::Shift, width, k as u64);
        barrel_shift(w(x, width), k, mode).unwrap().value()
    }

    pub fn rotl(&mut self, x: u64, k: u32, width: u32) -> u64 {
        self.shift(x, k, width, ShiftMode::RotateLeft)
    }

    pub fn rotr(&mut self, x: u64, k: u32, width: u32) -> u64 {
        self.shift(x, k, width, ShiftMode::RotateRight)
    }

    pub fn shl(&mut self, x: u64, k: u32, width: u32) -> u64 {
        self.shift(x, k, width, ShiftMode::LogicalLeft)
    }

    pub fn shr(&mut self, x: u64, k: u32, width: u32) -> u64 {
        self.shift(x, k, width, ShiftMode::LogicalRight)
    }

    /// Byte `i` of `x` goes through `tables[i]`.
    pub fn sbox(&mut self, x: u64, tables: &[&SBoxTable], width: u32) -> u64 {
        self.record(Primitive::SBox, width, tables.len() as u64);
        sbox_lookup(w(x, width), tables).unwrap().value()
    }

    pub fn permute(&mut self, x: u64, cfg: &BenesConfig) -> u64 {
        self.record(Primitive::Permutation, cfg.width(), 0);
        cfg.apply(x)
    }

    pub fn permute64(&mut self, x: u64, cfg: &CombinedBenes) -> u64 {
        self.record(Primitive::Permutation, 64, 0);
        cfg.apply(x)
    }

    /// Two independent 32-bit permutations on the halves of `x`.
    pub fn permute_pair(&mut self, x: u64, low: &BenesConfig, high: &BenesConfig) -> u64 {
        self.record(Primitive::Permutation, 64, 1);
        benes_permute_pair(x, low, high)
    }

    /// `(a + b) mod 2^width`.
    pub fn add(&mut self, a: u64, b: u64, width: u32) -> u64 {
        self.record(Primitive::ModAdd, width, 0);
        mod_add_word(w(a, width), w(b, width)).unwrap().value()
    }

    /// `(a * b) mod modulus`, with 0 encoding `modulus - 1` when `zero_is_max`.
    pub fn mulmod(&mut self, a: u64, b: u64, width: u32, modulus: u64, zero_is_max: bool) -> u64 {
        self.record(Primitive::ModMult, width, modulus);
        mod_mul_word(w(a, width), w(b, width), modulus, zero_is_max)
            .unwrap()
            .value()
    }

    /// Multiplies every byte of `x` by `c` in GF(2^8) modulo `poly`.
    pub fn gf_mul_bytes(&mut self, x: u64, c: u8, width: u32, poly: u16) -> u64 {
        self.record(Primitive::Multiplication, width, c as u64);
        (0..width / 8).fold(0, |acc, i| {
            let b = ((x >> (8 * i)) & 0xFF) as u8;
            acc | (gf_mul(b, c, poly) as u64) << (8 * i)
        })
    }
}
