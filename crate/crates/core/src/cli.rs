//! Command-line front end. Diagnostics go to stderr, data only to the files
//! named on the command line.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evalkit::{gen_synthetic, inject_noise, match_patterns, records_to_patterns, GenConfig, NoiseSpec, Span};
use crate::frb::{mine_frb, FrbOptions};
use crate::io::{load_dataset, load_patterns, save_dataset, save_patterns, Provenance};
use crate::maxgrowth::{mine_maxgrowth, MaxGrowthOptions};
use crate::model::{Dataset, MiningParams, TimeUnit, Timestamp};
use crate::oracle::{mine_bruteforce, OracleLimits};
use crate::stats::MiningOutput;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "platoon",
    version,
    about = "Mine relaxed co-movement patterns from cross-camera travel paths"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mine maximal patterns from a paths file.
    Mine(MineArgs),
    /// Generate a synthetic paths file with planted groups.
    Gen(GenArgs),
    /// Corrupt a paths file with shifts, deletions and id switches.
    Perturb(PerturbArgs),
    /// Score found patterns against golden ones.
    Eval(EvalArgs),
    /// Time miners over a grid of parameters.
    Bench(BenchArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Algo {
    Maxgrowth,
    Frb,
    Oracle,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::Maxgrowth => "maxgrowth",
            Algo::Frb => "frb",
            Algo::Oracle => "oracle",
        }
    }
}

#[derive(Args, Debug, Clone, Copy)]
struct ParamArgs {
    /// Minimum group size.
    #[arg(short = 'm', long = "min-objects")]
    m: usize,
    /// Minimum route length.
    #[arg(short = 'k', long = "min-route")]
    k: usize,
    /// Cameras that may be skipped between consecutive route cameras.
    #[arg(short = 'd', long = "max-skip")]
    d: usize,
    /// Largest entrance spread at one camera, seconds.
    #[arg(long)]
    eps: f64,
}

fn seconds_to_ticks(seconds: f64, unit: TimeUnit) -> Result<Timestamp> {
    if !seconds.is_finite() || seconds < 0.0 {
        return Err(Error::input(format!(
            "time value {seconds} must be a non-negative number of seconds"
        )));
    }
    Ok((seconds * unit.ticks_per_second() as f64).round() as Timestamp)
}

fn params_for(m: usize, k: usize, d: usize, eps_seconds: f64, unit: TimeUnit) -> Result<MiningParams> {
    MiningParams::new(m, k, d, seconds_to_ticks(eps_seconds, unit)?)
}

#[derive(Args, Debug)]
struct MineArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    algo: Algo,
    #[command(flatten)]
    params: ParamArgs,
    /// Disable root pruning (maxgrowth).
    #[arg(long)]
    no_root_prune: bool,
    /// Disable dependency pruning (maxgrowth).
    #[arg(long)]
    no_dep_prune: bool,
    /// Use all cores.
    #[arg(long)]
    parallel: bool,
    /// Write per-stage statistics as JSON lines.
    #[arg(long)]
    stats: Option<PathBuf>,
    #[arg(long)]
    output: PathBuf,
    /// Object count above which the oracle refuses to run.
    #[arg(long, default_value_t = OracleLimits::default().max_objects)]
    oracle_max_objects: usize,
    /// Path length above which the oracle refuses to run.
    #[arg(long, default_value_t = OracleLimits::default().max_route_len)]
    oracle_max_path_len: usize,
}

fn parse_span(s: &str) -> std::result::Result<Span, String> {
    let parse = |x: &str| x.trim().parse::<u64>().map_err(|e| format!("{x:?}: {e}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let span = Span::new(parse(a)?, parse(b)?);
            if span.min > span.max {
                return Err(format!("empty range {s}"));
            }
            Ok(span)
        }
        None => {
            let v = parse(s)?;
            Ok(Span::new(v, v))
        }
    }
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    cameras: usize,
    #[arg(long)]
    objects: usize,
    /// Number of planted groups.
    #[arg(long)]
    groups: usize,
    /// Members per planted group, `A..B` inclusive.
    #[arg(long, value_parser = parse_span)]
    group_size: Span,
    /// Cameras per planted route, `A..B` inclusive.
    #[arg(long, value_parser = parse_span)]
    route_len: Span,
    /// Largest entrance offset inside a group, seconds.
    #[arg(long)]
    jitter: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    output: PathBuf,
    /// Also mine and write the golden patterns (needs -m, -k, -d, --eps).
    #[arg(long, requires_all = ["m", "k", "d", "eps"])]
    golden: Option<PathBuf>,
    #[arg(short = 'm', long = "min-objects")]
    m: Option<usize>,
    #[arg(short = 'k', long = "min-route")]
    k: Option<usize>,
    #[arg(short = 'd', long = "max-skip")]
    d: Option<usize>,
    #[arg(long)]
    eps: Option<f64>,
    /// Average road links per camera.
    #[arg(long, default_value_t = GenConfig::default().grid_degree)]
    degree: usize,
    /// Background path lengths, `A..B`.
    #[arg(long, value_parser = parse_span, default_value = "2..8")]
    background_len: Span,
    /// Seconds between cameras, `A..B`.
    #[arg(long, value_parser = parse_span, default_value = "60..240")]
    travel: Span,
    /// Seconds in view of a camera, `A..B`.
    #[arg(long, value_parser = parse_span, default_value = "5..20")]
    dwell: Span,
    /// Paths start within this many seconds.
    #[arg(long, default_value_t = GenConfig::default().horizon)]
    horizon: u64,
}

#[derive(Args, Debug)]
struct PerturbArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    shift_rate: f64,
    /// Largest shift, seconds.
    #[arg(long, default_value_t = 0.0)]
    shift_max: f64,
    #[arg(long, default_value_t = 0.0)]
    delete_rate: f64,
    #[arg(long, default_value_t = 0.0)]
    idswitch_rate: f64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long)]
    found: PathBuf,
    #[arg(long)]
    golden: PathBuf,
    /// Both IoUs must exceed this to count as a match.
    #[arg(long, default_value_t = 0.8)]
    iou: f64,
    /// Let several found patterns match the same golden one.
    #[arg(long)]
    many_to_one: bool,
    /// Score files mined with different parameters anyway.
    #[arg(long)]
    allow_param_mismatch: bool,
    /// JSON lines report; `.summary.txt` and `.hist.csv` siblings are
    /// written next to it.
    #[arg(long)]
    report: PathBuf,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long)]
    input: PathBuf,
    /// Comma separated miners.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "maxgrowth,frb")]
    algos: Vec<Algo>,
    /// CSV with header `m,k,d,eps` (eps in seconds).
    #[arg(long)]
    params_grid: PathBuf,
    /// JSON lines report; a `.summary.txt` sibling is written next to it.
    #[arg(long)]
    report: PathBuf,
    #[arg(long)]
    parallel: bool,
}

/// Parses `args` (program name first), runs the command, returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Mine(a) => mine(a),
        Command::Gen(a) => gen(a),
        Command::Perturb(a) => perturb(a),
        Command::Eval(a) => eval(a),
        Command::Bench(a) => bench(a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::LimitExceeded { .. } => EXIT_LIMIT,
        _ => EXIT_INPUT,
    }
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn run_algo(
    algo: Algo,
    data: &Dataset,
    params: &MiningParams,
    mg: MaxGrowthOptions,
    limits: OracleLimits,
) -> Result<MiningOutput> {
    match algo {
        Algo::Maxgrowth => mine_maxgrowth(data, params, mg),
        Algo::Frb => mine_frb(
            data,
            params,
            FrbOptions {
                parallel: mg.parallel,
                ..FrbOptions::default()
            },
        ),
        Algo::Oracle => mine_bruteforce(data, params, limits),
    }
}

fn mine(a: MineArgs) -> Result<()> {
    let data = load_dataset(&a.input)?;
    let p = a.params;
    let params = params_for(p.m, p.k, p.d, p.eps, data.unit())?;
    let opts = MaxGrowthOptions {
        root_prune: !a.no_root_prune,
        dep_prune: !a.no_dep_prune,
        parallel: a.parallel,
        keep_candidates: false,
    };
    let limits = OracleLimits {
        max_objects: a.oracle_max_objects,
        max_route_len: a.oracle_max_path_len,
    };
    let out = run_algo(a.algo, &data, &params, opts, limits)?;
    info!(
        "{}: {} maximal patterns from {} candidates",
        a.algo.name(),
        out.stats.maximal,
        out.stats.candidates
    );
    save_patterns(
        &a.output,
        &Provenance::new(a.algo.name(), &params, &data),
        &out.patterns,
        &data,
    )?;
    if let Some(path) = &a.stats {
        let mut text = String::new();
        for s in &out.stats.stages {
            text.push_str(&serde_json::to_string(s).expect("stage record serializes"));
            text.push('\n');
        }
        write_file(path, text)?;
    }
    Ok(())
}

fn gen(a: GenArgs) -> Result<()> {
    let defaults = GenConfig::default();
    let params = match (a.m, a.k, a.d, a.eps) {
        (Some(m), Some(k), Some(d), Some(eps)) => params_for(m, k, d, eps, TimeUnit::Seconds)?,
        _ => defaults.params,
    };
    let cfg = GenConfig {
        num_cameras: a.cameras,
        grid_degree: a.degree,
        num_objects: a.objects,
        num_planted_groups: a.groups,
        group_size: a.group_size,
        route_length: a.route_len,
        entrance_jitter: a.jitter,
        background_path_length: a.background_len,
        travel_time: a.travel,
        dwell_time: a.dwell,
        horizon: a.horizon,
        seed: a.seed,
        params,
    };
    let (data, golden) = gen_synthetic(&cfg)?;
    save_dataset(&a.output, &data)?;
    if let Some(path) = &a.golden {
        save_patterns(path, &Provenance::new("golden", &params, &data), &golden, &data)?;
    }
    Ok(())
}

fn perturb(a: PerturbArgs) -> Result<()> {
    let data = load_dataset(&a.input)?;
    let spec = NoiseSpec {
        shift_rate: a.shift_rate,
        shift_max: seconds_to_ticks(a.shift_max, data.unit())?,
        delete_rate: a.delete_rate,
        idswitch_rate: a.idswitch_rate,
        seed: a.seed,
    };
    save_dataset(&a.output, &inject_noise(&data, &spec)?)
}

#[derive(Serialize)]
struct EvalSummary<'a> {
    precision: f64,
    recall: f64,
    f1: f64,
    num_found: usize,
    num_golden: usize,
    matched: usize,
    threshold: f64,
    many_to_one: bool,
    found_params: &'a MiningParams,
    golden_params: &'a MiningParams,
}

fn eval(a: EvalArgs) -> Result<()> {
    if !(0.0..=1.0).contains(&a.iou) {
        return Err(Error::input(format!("iou threshold {} is not in [0, 1]", a.iou)));
    }
    let (fprov, frecs) = load_patterns(&a.found)?;
    let (gprov, grecs) = load_patterns(&a.golden)?;
    if fprov.unit != gprov.unit {
        return Err(Error::input(format!(
            "time units differ: {} vs {}",
            fprov.unit, gprov.unit
        )));
    }
    if fprov.params != gprov.params && !a.allow_param_mismatch {
        return Err(Error::input(format!(
            "found patterns were mined with {:?} but golden with {:?}; pass --allow-param-mismatch to compare anyway",
            fprov.params, gprov.params
        )));
    }
    let (found, golden) = records_to_patterns(&frecs, &grecs);
    let report = match_patterns(&found, &golden, a.iou, a.many_to_one)?;

    let mut text = serde_json::to_string(&EvalSummary {
        precision: report.precision,
        recall: report.recall,
        f1: report.f1,
        num_found: report.num_found,
        num_golden: report.num_golden,
        matched: report.matches.len(),
        threshold: a.iou,
        many_to_one: a.many_to_one,
        found_params: &fprov.params,
        golden_params: &gprov.params,
    })
    .expect("summary serializes");
    text.push('\n');
    for m in &report.matches {
        text.push_str(&serde_json::to_string(m).expect("match serializes"));
        text.push('\n');
    }
    write_file(&a.report, text)?;
    write_file(&sibling(&a.report, ".summary.txt"), report.summary())?;
    write_file(&sibling(&a.report, ".hist.csv"), report.histogram_csv())?;
    Ok(())
}

#[derive(Debug, Deserialize)]
struct GridRow {
    m: usize,
    k: usize,
    d: usize,
    eps: f64,
}

fn read_grid(path: &Path, unit: TimeUnit) -> Result<Vec<MiningParams>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, row) in reader.deserialize::<GridRow>().enumerate() {
        let row = row.map_err(|e| Error::parse(i + 2, e.to_string()))?;
        out.push(params_for(row.m, row.k, row.d, row.eps, unit)?);
    }
    if out.is_empty() {
        return Err(Error::input(format!("{}: parameter grid is empty", path.display())));
    }
    Ok(out)
}

#[derive(Serialize)]
struct StageRow<'a> {
    table: &'static str,
    algorithm: &'static str,
    params: &'a MiningParams,
    stage: &'static str,
    wall_ms: f64,
    candidates: u64,
    non_maximal_removed: u64,
}

#[derive(Serialize)]
struct RuleRow<'a> {
    table: &'static str,
    params: &'a MiningParams,
    rules: &'static str,
    candidates: u64,
    non_maximal: u64,
    maximal: u64,
    wall_ms: f64,
}

const RULE_CONFIGS: [(&str, bool, bool); 4] = [
    ("none", false, false),
    ("root", true, false),
    ("dep", false, true),
    ("both", true, true),
];

fn bench(a: BenchArgs) -> Result<()> {
    let data = load_dataset(&a.input)?;
    let grid = read_grid(&a.params_grid, data.unit())?;
    let mut report = String::new();
    let mut summary = String::new();
    for params in &grid {
        let _ = writeln!(
            summary,
            "params m={} k={} d={} eps={}",
            params.m, params.k, params.d, params.eps
        );
        for &algo in &a.algos {
            let opts = MaxGrowthOptions {
                parallel: a.parallel,
                ..MaxGrowthOptions::default()
            };
            let out = run_algo(algo, &data, params, opts, OracleLimits::default())?;
            for s in &out.stats.stages {
                let row = StageRow {
                    table: "stages",
                    algorithm: algo.name(),
                    params,
                    stage: s.stage,
                    wall_ms: s.wall_ms,
                    candidates: s.candidates,
                    non_maximal_removed: s.non_maximal_removed,
                };
                report.push_str(&serde_json::to_string(&row).expect("row serializes"));
                report.push('\n');
            }
            let _ = writeln!(
                summary,
                "  {:<10} total {:>10.3} ms  maximal {:>6}  candidates {:>8}",
                algo.name(),
                out.stats.total_ms(),
                out.stats.maximal,
                out.stats.candidates
            );
        }
        if a.algos.contains(&Algo::Maxgrowth) {
            for (rules, root_prune, dep_prune) in RULE_CONFIGS {
                let opts = MaxGrowthOptions {
                    root_prune,
                    dep_prune,
                    parallel: a.parallel,
                    keep_candidates: false,
                };
                let out = mine_maxgrowth(&data, params, opts)?;
                let row = RuleRow {
                    table: "non_maximal",
                    params,
                    rules,
                    candidates: out.stats.candidates,
                    non_maximal: out.stats.non_maximal,
                    maximal: out.stats.maximal,
                    wall_ms: out.stats.total_ms(),
                };
                report.push_str(&serde_json::to_string(&row).expect("row serializes"));
                report.push('\n');
                let _ = writeln!(summary, "  rules {:<5} non-maximal {:>8}", rules, out.stats.non_maximal);
            }
        }
    }
    write_file(&a.report, report)?;
    write_file(&sibling(&a.report, ".summary.txt"), summary)?;
    Ok(())
}
