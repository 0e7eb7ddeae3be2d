use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use flashvault::bench::{overhead_averages, Bench, BenchConfig, MatrixRows, Scenario, ScenarioKind};
use flashvault::budget::{round2, Binding, BudgetData};
use flashvault::calib::Calibration;
use flashvault::ssd::{Placement, SsdConfig};

#[derive(Parser)]
#[command(name = "flashvault", version, about = "In-NAND self-encryption simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a benchmark scenario or the budget planner.
    Bench {
        #[arg(value_enum)]
        target: Target,
        #[command(flatten)]
        opts: BenchOpts,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Cipher,
    Boot,
    Log,
    Ftl,
    Budget,
}

#[derive(Args)]
struct BenchOpts {
    /// SSD geometry and timing as TOML.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Calibration overrides merged onto the defaults.
    #[arg(long)]
    cycles_file: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// Restrict to these placements (cpu, ncp, fv).
    #[arg(long, value_delimiter = ',')]
    placement: Vec<String>,
    /// Start latency cells from the aged drive.
    #[arg(long)]
    steady_state: bool,
    /// Exit nonzero when any declared bound is missed.
    #[arg(long)]
    enforce_bounds: bool,
    /// Engine profile for the budget planner.
    #[arg(long, default_value = "text")]
    profile: String,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

/// Returns whether every enforced bound held.
fn run(cli: Cli) -> Result<bool> {
    let Command::Bench { target, opts } = cli.command;
    let kind = match target {
        Target::Budget => return budget(&opts.profile).map(|()| true),
        Target::Cipher => ScenarioKind::BulkCipher,
        Target::Boot => ScenarioKind::SecureBoot,
        Target::Log => ScenarioKind::TamperLog,
        Target::Ftl => ScenarioKind::FtlOverhead,
    };
    let bench = Bench::new(config(&opts)?)?;
    let mut scenario = Scenario::preset(kind);
    if !opts.placement.is_empty() {
        scenario.placements = opts.placement.iter().map(|p| p.parse::<Placement>()).collect::<Result<_, _>>()?;
    }
    let report = bench.run_matrix(&scenario, &opts.out_dir).with_context(|| format!("running {kind}"))?;
    let mut all_met = true;
    match &report.rows {
        MatrixRows::Latency(rows) => {
            for r in rows {
                let verdict = match r.bound_met() {
                    Some(true) => " met",
                    Some(false) => " MISSED",
                    None => "",
                };
                println!("{:<8} {:<12} {:>9} B {:<4} {:>10.4} ms{verdict}", r.operation, r.algorithm, r.size, r.placement, r.total_ms);
                all_met &= r.bound_met() != Some(false);
            }
        }
        MatrixRows::Overhead(rows) => {
            for r in rows {
                println!("{:<8} {:<12} {:>9} B {:>10.4} -> {:>10.4} ms {:>7.2}%", r.workload, r.algorithm, r.size, r.fresh_ms, r.steady_ms, r.overhead_pct());
            }
            for (w, avg) in overhead_averages(rows) {
                println!("{w} average overhead {avg:.2}%");
            }
        }
    }
    println!("wrote {} and {}", report.csv.display(), report.svg.display());
    Ok(all_met || !opts.enforce_bounds)
}

fn config(opts: &BenchOpts) -> Result<BenchConfig> {
    let mut cfg = BenchConfig { seed: opts.seed, steady_state: opts.steady_state, ..BenchConfig::default() };
    if let Some(path) = &opts.config {
        cfg.ssd = SsdConfig::from_toml_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    }
    if let Some(path) = &opts.cycles_file {
        cfg.calib = Calibration::load_overrides(path)?;
    }
    Ok(cfg)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn budget(profile: &str) -> Result<()> {
    let report = BudgetData::shipped().plan(profile)?;
    let c = report.count;
    println!("area budget  {:.2} mm2", round2(report.area_budget_mm2));
    println!("power budget {:.2} mW", round2(report.power_budget_mw));
    println!("engine ({}) {:.2} mm2, {:.2} mW", report.profile, report.engine.area_mm2, report.engine.power_mw);
    let binding = match c.binding {
        Binding::Area => "area",
        Binding::Power => "power",
    };
    println!("engines {} (area allows {}, power allows {}, {binding}-bound)", c.n, c.by_area, c.by_power);
    Ok(())
}
