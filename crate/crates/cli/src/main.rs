use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use sphere_cusum::cusum::{decide, CusumPartialSums, Decision};
use sphere_cusum::fields::{scenario_preset, simulate_panel, AngularPowerSpectrum, TemporalModel};
use sphere_cusum::harness::{multiscale_scan, run_rejection_experiment, ExperimentConfig, ScanEntry};
use sphere_cusum::ingest::{pipeline, MissingPolicy};
use sphere_cusum::io::{read_json, read_panel, write_json, write_panel, write_surface, PanelMeta};
use sphere_cusum::pillowcase::{estimate_quantiles, QuantileTable, SupSampler};
use sphere_cusum::Error;

#[derive(Debug, Parser)]
#[command(
    name = "sphcusum",
    version,
    about = "CUSUM stationarity tests for spherical random fields"
)]
struct Cli {
    /// Worker threads (default: all available cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate sup-norm quantiles of the pillowcase process.
    Quantiles(QuantilesArgs),
    /// Simulate a coefficient panel under one of the mean designs.
    Simulate(SimulateArgs),
    /// Compute the sup statistic of a panel and test it.
    Test(TestArgs),
    /// Run a Monte Carlo rejection experiment from a JSON config.
    Experiment(ExperimentArgs),
    /// Turn a monthly lat-lon CSV into a coefficient panel of annual anomalies.
    Ingest(IngestArgs),
    /// Test a panel for several starting multipoles.
    Scan(ScanArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum SamplerArg {
    Auto,
    Direct,
    Wishart,
}

#[derive(Debug, Args, Serialize)]
struct QuantilesArgs {
    #[arg(long, default_value_t = 300)]
    grid: usize,
    #[arg(long, default_value_t = 10000)]
    inner_n: usize,
    #[arg(long, default_value_t = 2000)]
    draws: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [0.90, 0.95, 0.99])]
    levels: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = SamplerArg::Auto)]
    sampler: SamplerArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum HypothesisArg {
    H0,
    H1,
}

#[derive(Debug, Args, Serialize)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    hypothesis: HypothesisArg,
    #[arg(long, default_value_t = 1)]
    model: u8,
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    #[arg(long = "N")]
    n_times: usize,
    #[arg(long = "L", default_value_t = 30)]
    lmax: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output panel; `.bin` selects the binary format, anything else CSV.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
struct TestArgs {
    #[arg(long)]
    panel: PathBuf,
    #[arg(long, default_value_t = 0)]
    lmin: usize,
    #[arg(long, default_value_t = 300)]
    grid: usize,
    /// Quantile table JSON (default: published reference thresholds).
    #[arg(long)]
    quantiles: Option<PathBuf>,
    /// Also export the surface as a CSV matrix.
    #[arg(long)]
    surface: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-replicate sup values as CSV.
    #[arg(long)]
    sups: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum FillArg {
    None,
    Nearest,
}

#[derive(Debug, Args, Serialize)]
struct IngestArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    base_start: i32,
    #[arg(long)]
    base_end: i32,
    #[arg(long, default_value_t = 32)]
    lmax: usize,
    /// Cubature order (default: 2 · lmax).
    #[arg(long)]
    lstar: Option<usize>,
    #[arg(long, value_enum, default_value_t = FillArg::None)]
    fill: FillArg,
    /// Warning records as JSON lines.
    #[arg(long)]
    warnings: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
struct ScanArgs {
    #[arg(long)]
    panel: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    lmin_list: Vec<usize>,
    #[arg(long, default_value_t = 300)]
    grid: usize,
    #[arg(long)]
    quantiles: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_usage() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Runtime(e.to_string())
        }
    }
}

type CmdResult = Result<Outcome, Failure>;

struct Outcome {
    seed: Option<u64>,
    outputs: Vec<PathBuf>,
    manifest_for: Option<PathBuf>,
}

#[derive(Serialize)]
struct RunManifest<'a> {
    command: &'a str,
    parameters: Value,
    seed: Option<u64>,
    version: &'static str,
    wall_time: f64,
    outputs: Vec<PathBuf>,
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

fn load_table(path: Option<&Path>) -> Result<QuantileTable, Failure> {
    match path {
        Some(p) => Ok(read_json(p)?),
        None => Ok(QuantileTable::published()),
    }
}

fn emit(out: Option<&Path>, value: &impl Serialize) -> Result<Vec<PathBuf>, Failure> {
    match out {
        Some(p) => {
            write_json(p, value)?;
            Ok(vec![p.to_path_buf()])
        }
        None => {
            println!(
                "{}",
                serde_json::to_string_pretty(value).map_err(|e| Failure::Runtime(e.to_string()))?
            );
            Ok(Vec::new())
        }
    }
}

fn cmd_quantiles(a: &QuantilesArgs) -> CmdResult {
    let sampler = match a.sampler {
        SamplerArg::Auto => SupSampler::Auto,
        SamplerArg::Direct => SupSampler::Direct,
        SamplerArg::Wishart => SupSampler::Wishart,
    };
    let table = estimate_quantiles(a.grid, a.inner_n, a.draws, &a.levels, a.seed, sampler)?;
    write_json(&a.out, &table)?;
    Ok(Outcome {
        seed: Some(a.seed),
        outputs: vec![a.out.clone()],
        manifest_for: Some(a.out.clone()),
    })
}

fn cmd_simulate(a: &SimulateArgs) -> CmdResult {
    let scenario = scenario_preset(a.model, a.hypothesis == HypothesisArg::H1, a.alpha, a.lmax)?;
    let panel = simulate_panel(
        &AngularPowerSpectrum::default(),
        &TemporalModel::Iid,
        &scenario,
        a.n_times,
        a.lmax,
        a.seed,
    )?;
    let meta = PanelMeta {
        seed: Some(a.seed),
        scenario: Some(scenario),
        ..PanelMeta::for_panel(&panel)
    };
    write_panel(&a.out, &panel, &meta)?;
    Ok(Outcome {
        seed: Some(a.seed),
        outputs: vec![a.out.clone(), sphere_cusum::io::sidecar_path(&a.out)],
        manifest_for: Some(a.out.clone()),
    })
}

#[derive(Serialize)]
struct TestReport {
    sup: f64,
    lmin: usize,
    #[serde(rename = "N")]
    n_times: usize,
    #[serde(rename = "L")]
    lmax: usize,
    grid: usize,
    decisions: Vec<Decision>,
    surface: Option<PathBuf>,
}

fn cmd_test(a: &TestArgs) -> CmdResult {
    let (panel, _) = read_panel(&a.panel)?;
    let table = load_table(a.quantiles.as_deref())?;
    let sums = CusumPartialSums::new(&panel, a.lmin)?;
    let surface = sums.surface(a.grid, a.grid)?;
    let mut outputs = Vec::new();
    if let Some(p) = &a.surface {
        write_surface(p, &surface)?;
        outputs.push(p.clone());
    }
    let sup = sphere_cusum::cusum::sup_statistic(&surface);
    let decisions = table
        .levels()
        .iter()
        .map(|l| decide(sup, &table, *l))
        .collect::<Result<Vec<_>, _>>()?;
    let report = TestReport {
        sup,
        lmin: a.lmin,
        n_times: panel.n_times(),
        lmax: panel.lmax(),
        grid: a.grid,
        decisions,
        surface: a.surface.clone(),
    };
    outputs.extend(emit(a.out.as_deref(), &report)?);
    Ok(Outcome {
        seed: None,
        outputs,
        manifest_for: a.out.clone(),
    })
}

fn cmd_experiment(a: &ExperimentArgs) -> CmdResult {
    let text = fs::read_to_string(&a.config).map_err(|e| Failure::Runtime(format!("{}: {e}", a.config.display())))?;
    let config: ExperimentConfig = serde_json::from_str(&text).map_err(|e| {
        Failure::Usage(format!(
            "{}: line {} column {}: {e}",
            a.config.display(),
            e.line(),
            e.column()
        ))
    })?;
    config.validate()?;
    let table = config.quantile_table(a.config.parent())?;
    let result = run_rejection_experiment(&config, &table)?;
    let mut outputs = emit(a.out.as_deref(), &result)?;
    if let Some(p) = &a.sups {
        let mut text = String::from("replicate,sup\n");
        for (b, s) in result.sups.iter().enumerate() {
            text.push_str(&format!("{b},{s:?}\n"));
        }
        fs::write(p, text).map_err(|e| Failure::Runtime(format!("{}: {e}", p.display())))?;
        outputs.push(p.clone());
    }
    Ok(Outcome {
        seed: Some(config.seed),
        outputs,
        manifest_for: a.out.clone(),
    })
}

fn cmd_ingest(a: &IngestArgs) -> CmdResult {
    let lstar = a.lstar.unwrap_or(2 * a.lmax);
    let policy = match a.fill {
        FillArg::None => MissingPolicy::Fail,
        FillArg::Nearest => MissingPolicy::NearestNeighbor,
    };
    let out = pipeline(&a.input, (a.base_start, a.base_end), a.lmax, lstar, policy)?;
    let meta = PanelMeta::for_panel(&out.panel);
    write_panel(&a.out, &out.panel, &meta)?;
    let mut outputs = vec![a.out.clone(), sphere_cusum::io::sidecar_path(&a.out)];
    let lines: String = out.warnings.iter().map(|w| w.to_json_line() + "\n").collect();
    match &a.warnings {
        Some(p) => {
            fs::write(p, lines).map_err(|e| Failure::Runtime(format!("{}: {e}", p.display())))?;
            outputs.push(p.clone());
        }
        None => eprint!("{lines}"),
    }
    Ok(Outcome {
        seed: None,
        outputs,
        manifest_for: Some(a.out.clone()),
    })
}

#[derive(Serialize)]
struct ScanReport {
    #[serde(rename = "N")]
    n_times: usize,
    #[serde(rename = "L")]
    lmax: usize,
    grid: usize,
    entries: Vec<ScanEntry>,
}

fn cmd_scan(a: &ScanArgs) -> CmdResult {
    if a.lmin_list.is_empty() {
        return Err(Failure::Usage("--lmin-list must not be empty".into()));
    }
    let (panel, _) = read_panel(&a.panel)?;
    if let Some(l) = a.lmin_list.iter().find(|l| **l > panel.lmax()) {
        return Err(Failure::Usage(format!("lmin {l} exceeds panel lmax {}", panel.lmax())));
    }
    let table = load_table(a.quantiles.as_deref())?;
    let entries = multiscale_scan(&panel, &a.lmin_list, a.grid, &table)?;
    let report = ScanReport {
        n_times: panel.n_times(),
        lmax: panel.lmax(),
        grid: a.grid,
        entries,
    };
    let outputs = emit(a.out.as_deref(), &report)?;
    Ok(Outcome {
        seed: None,
        outputs,
        manifest_for: a.out.clone(),
    })
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Runtime(e.to_string()))?;
    }
    let start = Instant::now();
    let (name, params, outcome) = match &cli.command {
        Command::Quantiles(a) => ("quantiles", json!(a), cmd_quantiles(a)?),
        Command::Simulate(a) => ("simulate", json!(a), cmd_simulate(a)?),
        Command::Test(a) => ("test", json!(a), cmd_test(a)?),
        Command::Experiment(a) => ("experiment", json!(a), cmd_experiment(a)?),
        Command::Ingest(a) => ("ingest", json!(a), cmd_ingest(a)?),
        Command::Scan(a) => ("scan", json!(a), cmd_scan(a)?),
    };
    if let Some(out) = &outcome.manifest_for {
        let manifest = RunManifest {
            command: name,
            parameters: params,
            seed: outcome.seed,
            version: env!("CARGO_PKG_VERSION"),
            wall_time: start.elapsed().as_secs_f64(),
            outputs: outcome.outputs,
        };
        write_json(&manifest_path(out), &manifest)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).init();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
