// SPDX-License-Identifier: Apache-2.0

//! Command-line front end: `synth`, `verify`, `sim`, `report` and
//! `sweep-fanin`.
//!
//! Structured output is JSON with sorted keys. A bench argument is a file
//! path or the name of a bundled benchmark (`c17`, `c432`, ...).
//! Exit codes: 0 success, 1 verification failure, 2 usage or config error,
//! 3 I/O error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::analogsim::{self, CheckMode, SimError};
use crate::benchmarks;
use crate::config::ConfigError;
use crate::device::DeviceParams;
use crate::interconnect::{check_constraints, route, InterconnectError};
use crate::json::to_sorted_string;
use crate::netlist::{parse_bench_named, Netlist, NetlistError};
use crate::report::{self, BaselineEntry, ReportError};
use crate::tlgsynth::{synthesize, Mapping, SynthError, SynthStats, TlgNetwork};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_IO: u8 = 3;

/// Inputs up to this width are verified exhaustively unless a mode is given.
const AUTO_EXHAUSTIVE: usize = 16;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("bench: {0}")]
    Netlist(#[from] NetlistError),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Interconnect(#[from] InterconnectError),
    #[error(transparent)]
    Report(#[from] ReportError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => EXIT_IO,
            CliError::Config(ConfigError::Io { .. }) => EXIT_IO,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "mtl", version, about = "Pipelined magnetic threshold logic toolchain")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize a bench netlist into a staged TLG network.
    Synth(SynthArgs),
    /// Check a synthesized network against the reference evaluator.
    Verify(VerifyArgs),
    /// Cycle-accurate pipelined simulation of an input stream.
    Sim(SimArgs),
    /// Energy, delay and EDP report with baseline comparison.
    Report(ReportArgs),
    /// Gate counts at fan-in bounds 2, 3 and 4.
    SweepFanin(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Bench file or bundled benchmark name.
    pub bench: String,
    #[arg(long, default_value_t = 2)]
    pub fanin: usize,
    /// Network JSON destination; statistics go to stdout.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub bench: String,
    /// Network JSON from `synth`; synthesized on the fly when absent.
    #[arg(long)]
    pub network: Option<PathBuf>,
    #[arg(long, conflicts_with = "random")]
    pub exhaustive: bool,
    /// Number of seeded random vectors.
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    pub bench: String,
    #[arg(long)]
    pub network: Option<PathBuf>,
    /// File of 0/1 vectors, one per line.
    #[arg(long, conflicts_with = "random")]
    pub vectors: Option<PathBuf>,
    /// Number of seeded random vectors (default 16).
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    pub bench: String,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Random vectors used to average gate activity.
    #[arg(long, default_value_t = 1000)]
    pub vectors: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Append a Monte Carlo yield analysis.
    #[arg(long)]
    pub mc: bool,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Relative resistance spread for `--mc`; overrides the config.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Vectors per Monte Carlo trial.
    #[arg(long, default_value_t = 64)]
    pub mc_vectors: usize,
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub bench: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

/// Loads a bench file, falling back to the bundled benchmarks. File netlists
/// are named after the file stem.
pub fn load_bench(arg: &str) -> Result<Netlist, CliError> {
    let path = Path::new(arg);
    if path.exists() {
        let text = read(path)?;
        let stem = path.file_stem().and_then(|s| s.to_str());
        return Ok(parse_bench_named(&text, stem)?);
    }
    match benchmarks::load(arg) {
        Some(n) => Ok(n),
        None => Err(CliError::Io {
            path: path.to_owned(),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "no such file or bundled benchmark"),
        }),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn load_params(config: Option<&Path>) -> Result<DeviceParams, CliError> {
    Ok(match config {
        Some(p) => DeviceParams::from_config_file(p)?,
        None => DeviceParams::default(),
    })
}

fn load_network(netlist: &Netlist, path: Option<&Path>) -> Result<TlgNetwork, CliError> {
    match path {
        Some(p) => Ok(TlgNetwork::from_json(&read(p)?)?),
        None => Ok(synthesize(netlist, 2)?),
    }
}

/// Writes `text` to `path`, or to `out` when no path is given.
fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io {
            path: p.to_owned(),
            source,
        }),
        None => out.write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

#[derive(Debug, Serialize)]
pub struct SynthSummary {
    pub benchmark: String,
    pub fanin: usize,
    pub mapping: Mapping,
    #[serde(flatten)]
    pub stats: SynthStats,
}

/// Synthesizes; writes the network to `args.out` (stdout if absent) and the
/// statistics to `out` when a file was written.
pub fn cmd_synth(args: &SynthArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    if !(2..=4).contains(&args.fanin) {
        return Err(CliError::Usage(format!("--fanin must be 2, 3 or 4, got {}", args.fanin)));
    }
    let netlist = load_bench(&args.bench)?;
    let network = synthesize(&netlist, args.fanin)?;
    let summary = SynthSummary {
        benchmark: netlist.name().to_owned(),
        fanin: args.fanin,
        mapping: network.mapping,
        stats: network.stats(),
    };
    match &args.out {
        Some(p) => {
            emit(&network.to_json(), Some(p), out)?;
            emit(&to_sorted_string(&summary), None, out)?;
        }
        None => emit(&network.to_json(), None, out)?,
    }
    Ok(EXIT_OK)
}

fn check_mode(exhaustive: bool, random: Option<usize>, seed: u64, inputs: usize) -> CheckMode {
    match random {
        Some(vectors) => CheckMode::Random { vectors, seed },
        None if exhaustive || inputs <= AUTO_EXHAUSTIVE => CheckMode::Exhaustive,
        None => CheckMode::Random { vectors: 10_000, seed },
    }
}

#[derive(Debug, Serialize)]
struct VerifySummary {
    benchmark: String,
    check: CheckMode,
    #[serde(flatten)]
    report: analogsim::EquivalenceReport,
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let params = load_params(args.config.as_deref())?;
    let netlist = load_bench(&args.bench)?;
    let network = load_network(&netlist, args.network.as_deref())?;
    let mode = check_mode(args.exhaustive, args.random, args.seed, netlist.inputs().len());
    let report = analogsim::equivalence_check(&netlist, &network, mode, &params)?;
    let code = if report.mismatches == 0 { EXIT_OK } else { EXIT_VERIFY };
    let summary = VerifySummary {
        benchmark: netlist.name().to_owned(),
        check: mode,
        report,
    };
    emit(&to_sorted_string(&summary), None, out)?;
    Ok(code)
}

#[derive(Debug, Serialize)]
struct SimSummary {
    benchmark: String,
    stages: usize,
    cycles: u64,
    inputs: Vec<String>,
    outputs: Vec<String>,
    output_cycles: Vec<u64>,
    under_threshold_events: Vec<analogsim::UnderThresholdEvent>,
}

pub fn cmd_sim(args: &SimArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let params = load_params(args.config.as_deref())?;
    let netlist = load_bench(&args.bench)?;
    let network = load_network(&netlist, args.network.as_deref())?;
    let width = network.inputs.len();
    let stream = match &args.vectors {
        Some(p) => analogsim::parse_vectors(&read(p)?, width)?,
        None => analogsim::random_vectors(width, args.random.unwrap_or(16), args.seed),
    };
    let run = analogsim::simulate(&network, &stream, &params, None)?;
    let bits = |v: &[Vec<bool>]| -> Vec<String> {
        analogsim::format_vectors(v).lines().map(str::to_owned).collect()
    };
    let summary = SimSummary {
        benchmark: netlist.name().to_owned(),
        stages: network.num_stages(),
        cycles: run.state.cycle,
        inputs: bits(&stream),
        outputs: bits(&run.outputs),
        output_cycles: run.output_cycles,
        under_threshold_events: run.state.events,
    };
    emit(&to_sorted_string(&summary), args.out.as_deref(), out)?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
pub struct FullReport {
    pub report: report::EnergyReport,
    pub constraints: crate::interconnect::ConstraintReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub baseline: Option<BaselineEntry>,
    /// Our energy and period against the baseline LUT columns.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparison: Option<report::Comparison>,
    /// The baseline row's own MTL columns against its LUT columns.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table_comparison: Option<report::Comparison>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<analogsim::MarginReport>,
}

/// Builds the `report` payload without writing it.
pub fn build_report(args: &ReportArgs) -> Result<FullReport, CliError> {
    let mut params = load_params(args.config.as_deref())?;
    if args.vectors == 0 {
        return Err(CliError::Usage("--vectors must be positive".into()));
    }
    let netlist = load_bench(&args.bench)?;
    let network = synthesize(&netlist, 2)?;
    let routing = route(&network, &params)?;
    let vectors = analogsim::random_vectors(netlist.inputs().len(), args.vectors, args.seed);
    let energy = report::network_report(&netlist, &network, &routing, &params, &vectors)?;
    let baseline = benchmarks::baseline_for(netlist.name());
    let comparison = match &baseline {
        Some(b) => Some(report::compare_baseline(
            energy.total_energy * 1e15,
            energy.throughput_period * 1e9,
            b,
        )?),
        None => None,
    };
    let table_comparison = baseline.as_ref().map(BaselineEntry::table_comparison).transpose()?;
    let margin = if args.mc {
        if let Some(s) = args.sigma {
            params.sigma_r = s;
            params.validate().map_err(ConfigError::from)?;
        }
        let mc_vectors = analogsim::random_vectors(netlist.inputs().len(), args.mc_vectors.max(1), args.seed);
        Some(analogsim::monte_carlo(
            &netlist,
            &network,
            &params,
            args.trials,
            &mc_vectors,
            args.seed,
            args.jobs,
        )?)
    } else {
        None
    };
    Ok(FullReport {
        constraints: check_constraints(&routing.nets, &params),
        report: energy,
        baseline,
        comparison,
        table_comparison,
        margin,
    })
}

pub fn cmd_report(args: &ReportArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let full = build_report(args)?;
    let text = match args.format {
        Format::Json => to_sorted_string(&full),
        Format::Text => {
            let mut s = report::format_table(&[(full.report.clone(), full.baseline.clone())]);
            if let Some(m) = &full.margin {
                s.push_str(&format!(
                    "monte carlo: sigma {} trials {} yield {:.4} min margin {:.4}\n",
                    m.sigma_r, m.trials, m.yield_fraction, m.min_margin_ratio
                ));
            }
            s
        }
    };
    emit(&text, args.out.as_deref(), out)?;
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub fanin: usize,
    pub logic_gates: usize,
    pub buffers: usize,
    pub stages: usize,
    pub mapping: Mapping,
}

/// Synthesizes at fan-in 2, 3 and 4.
pub fn sweep_fanin(netlist: &Netlist) -> Result<Vec<SweepRow>, SynthError> {
    (2..=4)
        .map(|k| {
            let n = synthesize(netlist, k)?;
            let s = n.stats();
            Ok(SweepRow {
                fanin: k,
                logic_gates: s.logic_gates,
                buffers: s.buffers,
                stages: s.stages,
                mapping: n.mapping,
            })
        })
        .collect()
}

pub fn cmd_sweep_fanin(args: &SweepArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let netlist = load_bench(&args.bench)?;
    let rows = sweep_fanin(&netlist)?;
    let text = match args.format {
        Format::Json => to_sorted_string(&serde_json::json!({
            "benchmark": netlist.name(),
            "rows": rows,
        })),
        Format::Text => {
            let mut s = format!("{:<6} {:>11} {:>8} {:>7}  mapping\n", "fanin", "logic gates", "buffers", "stages");
            for r in &rows {
                let m = match r.mapping {
                    Mapping::Mtl => "mtl",
                    Mapping::LogicalOnly => "logical-only",
                };
                s.push_str(&format!(
                    "{:<6} {:>11} {:>8} {:>7}  {m}\n",
                    r.fanin, r.logic_gates, r.buffers, r.stages
                ));
            }
            s
        }
    };
    emit(&text, None, out)?;
    Ok(EXIT_OK)
}

/// Dispatches a parsed command line. Errors are reported on `err`; the
/// return value is the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let result = match &cli.command {
        Command::Synth(a) => cmd_synth(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Sim(a) => cmd_sim(a, out),
        Command::Report(a) => cmd_report(a, out),
        Command::SweepFanin(a) => cmd_sweep_fanin(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "mtl: {e}");
            e.exit_code()
        }
    }
}
