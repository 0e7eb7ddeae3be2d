//! Area and power budgeting for in-die engines.

use serde::Deserialize;
use std::collections::BTreeMap;
use thiserror::Error;

const DEFAULT_BUDGET: &str = include_str!("../data/budget.toml");

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BudgetError {
    #[error("{0} must be positive")]
    NonPositive(&'static str),
    #[error("peripheral area exceeds the memory array")]
    NegativeArea,
    #[error("no scaling factors from {from} nm to {to} nm")]
    MissingFactor { from: u32, to: u32 },
    #[error("unknown engine profile `{0}`")]
    UnknownProfile(String),
    #[error("budget data: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct DieGeometry {
    #[serde(rename = "memory_array_mm2")]
    pub m: f64,
    #[serde(rename = "d6_mm2")]
    pub d6: f64,
    #[serde(rename = "d7_mm2")]
    pub d7: f64,
}

impl DieGeometry {
    /// Peripheral area, taken as the die shrink between generations.
    pub fn peripheral(&self) -> f64 {
        self.d6 - self.d7
    }

    pub fn available(&self) -> Result<f64, BudgetError> {
        let a = self.m - self.peripheral();
        if a < 0.0 {
            return Err(BudgetError::NegativeArea);
        }
        Ok(a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct PowerParams {
    pub i_program_ma: f64,
    pub v_max: f64,
    #[serde(default)]
    pub efficiency_gain: f64,
}

/// `I_program * V_max`, reduced by the efficiency gain.
pub fn program_power(params: &PowerParams) -> Result<f64, BudgetError> {
    if params.i_program_ma <= 0.0 {
        return Err(BudgetError::NonPositive("programming current"));
    }
    if params.v_max <= 0.0 {
        return Err(BudgetError::NonPositive("maximum voltage"));
    }
    if !(0.0..1.0).contains(&params.efficiency_gain) {
        return Err(BudgetError::NonPositive("1 - efficiency gain"));
    }
    Ok(params.i_program_ma * params.v_max * (1.0 - params.efficiency_gain))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Binding {
    Area,
    Power,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineCount {
    pub n: u32,
    pub by_area: u32,
    pub by_power: u32,
    pub binding: Binding,
}

/// `min(floor(A_budget / A_engine), floor(P_budget / P_engine))`.
pub fn max_engines(a_budget: f64, p_budget: f64, a_engine: f64, p_engine: f64) -> Result<EngineCount, BudgetError> {
    if a_engine <= 0.0 {
        return Err(BudgetError::NonPositive("engine area"));
    }
    if p_engine <= 0.0 {
        return Err(BudgetError::NonPositive("engine power"));
    }
    // Budgets quoted to two decimals; the epsilon keeps exact multiples from rounding down.
    let fit = |budget: f64, cost: f64| ((budget.max(0.0) / cost) + 1e-9).floor() as u32;
    let (by_area, by_power) = (fit(a_budget, a_engine), fit(p_budget, p_engine));
    let binding = if by_power <= by_area { Binding::Power } else { Binding::Area };
    Ok(EngineCount { n: by_area.min(by_power), by_area, by_power, binding })
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct ComponentBudget {
    pub area_um2: f64,
    pub power_mw: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct ScalingFactor {
    pub from_nm: u32,
    pub to_nm: u32,
    pub area: f64,
    pub power: f64,
}

pub fn scale_node(budget: &ComponentBudget, from_nm: u32, to_nm: u32, table: &[ScalingFactor]) -> Result<ComponentBudget, BudgetError> {
    let (area, power) = if from_nm == to_nm {
        (1.0, 1.0)
    } else {
        let f = table
            .iter()
            .find(|f| f.from_nm == from_nm && f.to_nm == to_nm)
            .ok_or(BudgetError::MissingFactor { from: from_nm, to: to_nm })?;
        (f.area, f.power)
    };
    Ok(ComponentBudget { area_um2: budget.area_um2 * area, power_mw: budget.power_mw * power })
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct PnrRow {
    pub level: String,
    pub name: String,
    pub config: String,
    pub area_um2: f64,
    pub power_mw: f64,
    pub reconciled_area_um2: Option<f64>,
    pub reconciled_power_mw: Option<f64>,
    #[serde(default)]
    pub total: bool,
    #[serde(default)]
    pub engine: bool,
}

impl PnrRow {
    pub fn reconciled(&self) -> ComponentBudget {
        ComponentBudget {
            area_um2: self.reconciled_area_um2.unwrap_or(self.area_um2),
            power_mw: self.reconciled_power_mw.unwrap_or(self.power_mw),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct EngineProfile {
    pub area_mm2: f64,
    pub power_mw: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct BudgetData {
    pub die: DieGeometry,
    pub power: PowerParams,
    pub profiles: BTreeMap<String, EngineProfile>,
    pub scaling: Vec<ScalingFactor>,
    pub component: Vec<PnrRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BudgetReport {
    pub area_budget_mm2: f64,
    pub power_budget_mw: f64,
    pub profile: String,
    pub engine: EngineProfile,
    pub count: EngineCount,
}

impl BudgetData {
    pub fn shipped() -> Self {
        Self::from_toml_str(DEFAULT_BUDGET).expect("shipped budget data parses")
    }

    pub fn from_toml_str(text: &str) -> Result<Self, BudgetError> {
        toml::from_str(text).map_err(|e| BudgetError::Parse(e.to_string()))
    }

    pub fn profile(&self, name: &str) -> Result<EngineProfile, BudgetError> {
        self.profiles.get(name).copied().ok_or_else(|| BudgetError::UnknownProfile(name.to_string()))
    }

    pub fn rows(&self, level: &str) -> impl Iterator<Item = &PnrRow> {
        let level = level.to_string();
        self.component.iter().filter(move |r| r.level == level)
    }

    /// Sum of a level's non-total rows, optionally only the engine rows.
    pub fn sum_parts(&self, level: &str, engine_only: bool) -> ComponentBudget {
        self.rows(level).filter(|r| !r.total && (!engine_only || r.engine)).fold(
            ComponentBudget { area_um2: 0.0, power_mw: 0.0 },
            |acc, r| ComponentBudget { area_um2: acc.area_um2 + r.area_um2, power_mw: acc.power_mw + r.power_mw },
        )
    }

    pub fn plan(&self, profile: &str) -> Result<BudgetReport, BudgetError> {
        let engine = self.profile(profile)?;
        let area_budget_mm2 = self.die.available()?;
        let power_budget_mw = program_power(&self.power)?;
        let count = max_engines(area_budget_mm2, power_budget_mw, engine.area_mm2, engine.power_mw)?;
        Ok(BudgetReport { area_budget_mm2, power_budget_mw, profile: profile.to_string(), engine, count })
    }
}

/// Rounds to two decimals, matching how the budgets are quoted.
pub fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}
