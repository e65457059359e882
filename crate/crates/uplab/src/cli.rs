//! Config-driven command line front end.
//!
//! Three subcommands share one JSON config format: `check-params` prints
//! every hypothesis inequality of the configured experiment with a verdict,
//! `run` executes the experiment and persists a JSON record plus a CSV
//! series, and `sweep` repeats `run` across one parameter axis while a
//! manifest collects per-member outcomes.
//!
//! Exit codes: 0 success/pass, 1 hypothesis violation, 2 open endpoint,
//! 3 numerical failure (including a record whose `ok` is false),
//! 4 usage/config error.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::experiments::{
    geometric_grid, heat_observability, lemma1_check, lemma2_check, moment_growth_fit,
    moment_growth_fit_analytic, product_minimizer, schrodinger_observability, thickness_check,
    up_product, up_product_unchecked, ExperimentRecord, MomentKind, PacketFamily,
};
use crate::field::{set_measure, GridSpec, IndicatorSet};
use crate::oracles::GaussianPacket;
use crate::params::{
    conjugate_cap, heisenberg_lp_verdict, ratio_serde, rational_to_f64, Index, RangeVerdict,
    Rational, SideParams,
};

/// One experiment run, file-addressed: everything a run needs, and
/// everything its record must be reproducible from, lives in a single JSON
/// document. Only the plumbing fields can be overridden from outside: the
/// `--out`, `--threads`, `--seed` flags and the `UPLAB_OUT` /
/// `UPLAB_THREADS` environment variables.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Experiment tag dispatched by `run`; see [`execute`] for the list.
    pub experiment: String,
    pub grid: GridSpec,
    /// Seed for corpus generation and minimizer restarts.
    #[serde(default)]
    pub seed: u64,
    /// Directory records and CSV series are written into.
    #[serde(default = "default_out")]
    pub out: PathBuf,
    /// Per-quantity tolerance overrides, keyed like the record's
    /// `tolerances` map.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    /// Experiment-specific parameter block.
    #[serde(default)]
    pub params: Value,
}

fn default_out() -> PathBuf {
    PathBuf::from("records")
}

impl RunConfig {
    /// Reads and structurally validates a config file. Malformed input is a
    /// usage error; admissibility is checked later, per experiment.
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        let config: RunConfig = serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("config {}: {e}", path.display())))?;
        GridSpec::new(
            config.grid.dim,
            config.grid.points_per_axis,
            config.grid.half_width,
        )?;
        Ok(config)
    }

    fn tolerance(&self, key: &str, default: f64) -> f64 {
        self.tolerances.get(key).copied().unwrap_or(default)
    }
}

#[derive(Parser, Debug)]
#[command(name = "uplab", about = "Localization-product laboratory", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print each hypothesis inequality of the configured experiment with
    /// its verdict.
    CheckParams(ConfigArgs),
    /// Execute one experiment; write its JSON record and CSV series.
    Run(RunArgs),
    /// Re-run one experiment across a parameter axis, one record per value.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
pub struct ConfigArgs {
    /// Path to the JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
}

#[derive(Args, Debug)]
pub struct RunArgs {
    /// Path to the JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory; overrides UPLAB_OUT and the config's `out`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker thread cap; overrides UPLAB_THREADS.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Seed override for corpus generation and minimizer restarts.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// JSON pointer into the params block, e.g. `/lambda` or `/side1/a`.
    #[arg(long)]
    pub axis: String,
    /// Comma-separated member values; each token is parsed as JSON, or
    /// taken as a string when it is not valid JSON (so `1/2` works).
    #[arg(long, default_value = "")]
    pub values: String,
}

/// Binary entry point: parses arguments, dispatches, maps errors to the
/// documented exit codes.
pub fn main() -> i32 {
    let _ = env_logger::try_init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::CheckParams(args) => {
            let config = RunConfig::load(&args.config)?;
            let (code, report) = check_params_report(&config)?;
            print!("{report}");
            Ok(code)
        }
        Command::Run(args) => {
            cap_threads(args.threads)?;
            let config = effective_config(&args)?;
            let (record, _) = run_and_persist(&config, None)?;
            Ok(if record.ok { 0 } else { 3 })
        }
        Command::Sweep(args) => {
            cap_threads(args.run.threads)?;
            let config = effective_config(&args.run)?;
            let values = parse_values(&args.values)?;
            cmd_sweep(&config, &args.axis, &values)
        }
    }
}

fn effective_config(args: &RunArgs) -> Result<RunConfig> {
    let mut config = RunConfig::load(&args.config)?;
    if let Ok(dir) = std::env::var("UPLAB_OUT") {
        if !dir.is_empty() {
            config.out = PathBuf::from(dir);
        }
    }
    if let Some(out) = &args.out {
        config.out = out.clone();
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    Ok(config)
}

/// Caps the global worker pool. Experiments parallelize internally; the
/// CLI itself stays single-process.
fn cap_threads(flag: Option<usize>) -> Result<()> {
    let threads = match flag {
        Some(k) => Some(k),
        None => match std::env::var("UPLAB_THREADS") {
            Ok(s) if !s.is_empty() => Some(s.parse::<usize>().map_err(|_| {
                Error::Config(format!("UPLAB_THREADS must be a positive integer, got {s:?}"))
            })?),
            _ => None,
        },
    };
    if let Some(k) = threads {
        if k == 0 {
            return Err(Error::Config("thread cap must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    Ok(())
}

/// Runs one experiment and writes `<tag>.json` / `<tag>.csv` (suffixed with
/// the member index inside sweeps) under the config's output directory.
/// Returns the record path; this is the `run` subcommand minus process exit.
pub fn cmd_run(config: &RunConfig) -> Result<PathBuf> {
    let (_, path) = run_and_persist(config, None)?;
    Ok(path)
}

fn run_and_persist(
    config: &RunConfig,
    member: Option<usize>,
) -> Result<(ExperimentRecord, PathBuf)> {
    let outcome = execute(config)?;
    fs::create_dir_all(&config.out)?;
    let stem = match member {
        Some(i) => format!("{}-{i:03}", outcome.record.tag),
        None => outcome.record.tag.clone(),
    };
    let record_path = config.out.join(format!("{stem}.json"));
    outcome.record.save(&record_path)?;
    write_csv(
        &config.out.join(format!("{stem}.csv")),
        &outcome.csv_header,
        &outcome.csv_rows,
    )?;
    println!("{}", summary_line(&outcome.record, &record_path));
    Ok((outcome.record, record_path))
}

/// Runs `cmd_run` once per value with the axis patched into the params
/// block. Member failures are recorded in `sweep-summary.json` and the
/// sweep continues; the exit code is 0 when every member passed, otherwise
/// the first failure's code.
pub fn cmd_sweep(config: &RunConfig, axis: &str, values: &[Value]) -> Result<i32> {
    if values.is_empty() {
        println!("sweep: no values given, nothing to do");
        return Ok(0);
    }
    fs::create_dir_all(&config.out)?;
    let mut entries = Vec::new();
    let mut first_failure: Option<i32> = None;
    for (i, value) in values.iter().enumerate() {
        let member = patched(config, axis, value)?;
        match run_and_persist(&member, Some(i)) {
            Ok((record, path)) => {
                if !record.ok && first_failure.is_none() {
                    first_failure = Some(3);
                }
                entries.push(json!({
                    "member": i,
                    "value": value,
                    "record": path.file_name().map(|n| n.to_string_lossy().into_owned()),
                    "ok": record.ok,
                }));
            }
            Err(e) => {
                eprintln!("member {i} ({axis} = {value}): {e}");
                if first_failure.is_none() {
                    first_failure = Some(e.exit_code());
                }
                entries.push(json!({
                    "member": i,
                    "value": value,
                    "error": e.to_string(),
                }));
            }
        }
    }
    let manifest = json!({ "axis": axis, "members": entries });
    let mut bytes = serde_json::to_vec_pretty(&manifest)?;
    bytes.push(b'\n');
    fs::write(config.out.join("sweep-summary.json"), bytes)?;
    Ok(first_failure.unwrap_or(0))
}

/// Splits a comma-separated value list; each token is parsed as JSON and
/// falls back to a plain string (so rationals like `1/2` pass through).
pub fn parse_values(raw: &str) -> Result<Vec<Value>> {
    let trimmed = raw.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    trimmed
        .split(',')
        .map(|token| {
            let token = token.trim();
            if token.is_empty() {
                return Err(Error::Config("empty value in --values list".into()));
            }
            Ok(serde_json::from_str::<Value>(token)
                .unwrap_or_else(|_| Value::String(token.to_string())))
        })
        .collect()
}

/// Returns a copy of `config` with `value` written at the JSON-pointer
/// `axis` inside the params block. The pointer's parent must exist; the
/// final key may be new on an object, or an index up to the length of an
/// array.
pub fn patched(config: &RunConfig, axis: &str, value: &Value) -> Result<RunConfig> {
    if !axis.starts_with('/') {
        return Err(Error::Config(format!(
            "axis must be a JSON pointer starting with '/', got {axis:?}"
        )));
    }
    let mut member = config.clone();
    let (parent_path, key) = axis.rsplit_once('/').expect("starts with '/'");
    let parent = if parent_path.is_empty() {
        Some(&mut member.params)
    } else {
        member.params.pointer_mut(parent_path)
    };
    match parent {
        Some(Value::Object(map)) => {
            map.insert(key.to_string(), value.clone());
        }
        Some(Value::Array(items)) => {
            let idx: usize = key.parse().map_err(|_| {
                Error::Config(format!("axis {axis:?} indexes an array with {key:?}"))
            })?;
            if idx < items.len() {
                items[idx] = value.clone();
            } else if idx == items.len() {
                items.push(value.clone());
            } else {
                return Err(Error::Config(format!(
                    "axis {axis:?} is out of bounds for an array of {}",
                    items.len()
                )));
            }
        }
        _ => {
            return Err(Error::Config(format!(
                "axis {axis:?} has no object or array at its parent in params"
            )));
        }
    }
    Ok(member)
}

fn write_csv(path: &Path, header: &str, rows: &[(f64, f64)]) -> Result<()> {
    let mut text = String::with_capacity(16 * rows.len() + header.len() + 1);
    text.push_str(header);
    text.push('\n');
    for (x, y) in rows {
        let _ = writeln!(text, "{x},{y}");
    }
    fs::write(path, text)?;
    Ok(())
}

/// Six significant digits for human-readable summaries; records keep the
/// full shortest-round-trip form.
fn sig6(x: f64) -> String {
    format!("{x:.5e}")
}

fn summary_line(record: &ExperimentRecord, path: &Path) -> String {
    let mut line = format!(
        "{}: {}",
        record.tag,
        if record.ok { "PASS" } else { "FAIL" }
    );
    for (key, value) in &record.measured {
        let _ = write!(line, " {key}={}", sig6(*value));
        if let Some(p) = record.predicted.get(key) {
            let _ = write!(line, " (predicted {})", sig6(p.value));
        }
    }
    let _ = write!(line, " -> {}", path.display());
    line
}

fn relative_gap(measured: f64, predicted: f64) -> f64 {
    if predicted == 0.0 {
        (measured - predicted).abs()
    } else {
        (measured - predicted).abs() / predicted.abs()
    }
}

/// The outcome of one experiment run before persistence: the record plus
/// the `(x, y)` series destined for the CSV file.
#[derive(Debug)]
pub struct RunOutcome {
    pub record: ExperimentRecord,
    pub csv_header: String,
    pub csv_rows: Vec<(f64, f64)>,
}

fn parse_params<T: serde::de::DeserializeOwned>(config: &RunConfig) -> Result<T> {
    serde_json::from_value(config.params.clone()).map_err(|e| {
        Error::Config(format!("params for {:?}: {e}", config.experiment))
    })
}

/// One side of a product in config form; the dimension comes from the grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SideSpec {
    pub a: Index,
    #[serde(with = "ratio_serde")]
    pub b: Rational,
    pub k: Index,
}

impl SideSpec {
    fn build(&self, n: u32) -> Result<SideParams> {
        SideParams::new(n, self.a, self.b, self.k)
    }
}

fn default_width() -> f64 {
    1.0
}

fn default_lambda() -> f64 {
    1.0
}

fn default_set() -> IndicatorSet {
    IndicatorSet::FullSpace
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct UpProductParams {
    side1: SideSpec,
    side2: SideSpec,
    /// Sharpness of the isotropic Gaussian data `e^{-width |x|^2}`.
    #[serde(default = "default_width")]
    width: f64,
    /// Dilation `f(λx)`; the product is invariant in `λ`.
    #[serde(default = "default_lambda")]
    lambda: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LpRangeParams {
    p: Index,
    #[serde(default = "default_width")]
    width: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MomentGrowthParams {
    kind: MomentKind,
    a: Index,
    b: f64,
    #[serde(default = "default_width")]
    width: f64,
    /// Evolve on the grid instead of using the closed-form trace.
    #[serde(default)]
    numeric: bool,
    t_lo: f64,
    t_hi: f64,
    points: usize,
    /// Moment center; defaults to the origin.
    x0: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObservabilityParams {
    #[serde(default = "default_width")]
    width: f64,
    /// Data center; defaults to the origin.
    center: Option<Vec<f64>>,
    #[serde(default = "default_set")]
    set: IndicatorSet,
    t_horizon: f64,
    dt: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct HeatFloorParams {
    #[serde(default = "default_width")]
    width: f64,
    radius: f64,
    #[serde(default = "default_set")]
    set: IndicatorSet,
    t_horizon: f64,
    dt: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MinimizerParams {
    family: PacketFamily,
    side1: SideSpec,
    side2: SideSpec,
    budget: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Lemma1Spec {
    a: Index,
    #[serde(with = "ratio_serde")]
    b: Rational,
    #[serde(with = "ratio_serde")]
    p: Rational,
    #[serde(with = "ratio_serde")]
    s: Rational,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Lemma2Spec {
    k: Index,
    p: Index,
    q: Index,
    m: Index,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LemmaCorpusParams {
    size: u32,
    lemma1: Lemma1Spec,
    lemma2: Lemma2Spec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ThicknessParams {
    set: IndicatorSet,
    side: f64,
    gamma: f64,
}

/// Dispatches the config's experiment tag. Known tags: `up-product`,
/// `lp-range`, `moment-growth`, `observability`, `heat-floor`,
/// `product-minimizer`, `lemma-corpus`, `thickness`. Every branch validates
/// its parameters before any compute, so invalid configs never produce
/// record files.
pub fn execute(config: &RunConfig) -> Result<RunOutcome> {
    match config.experiment.as_str() {
        "up-product" => run_up_product(config),
        "lp-range" => run_lp_range(config),
        "moment-growth" => run_moment_growth(config),
        "observability" => run_observability(config),
        "heat-floor" => run_heat_floor(config),
        "product-minimizer" => run_minimizer(config),
        "lemma-corpus" => run_lemma_corpus(config),
        "thickness" => run_thickness(config),
        other => Err(Error::Config(format!(
            "unknown experiment tag {other:?}; known tags: up-product, lp-range, \
             moment-growth, observability, heat-floor, product-minimizer, \
             lemma-corpus, thickness"
        ))),
    }
}

/// Closed-form value of the product on an origin-centered isotropic packet,
/// used as the reference for grid evaluations.
fn packet_product(
    packet: &GaussianPacket,
    side1: &SideParams,
    side2: &SideParams,
) -> Result<f64> {
    let factor1 = packet.moment(side1.a, rational_to_f64(side1.b))? / packet.lp_norm(side1.k);
    let hat = packet.fourier();
    let factor2 = hat.moment(side2.a, rational_to_f64(side2.b))? / hat.lp_norm(side2.k);
    let e1 = rational_to_f64(side1.localization_exponent());
    let e2 = rational_to_f64(side2.localization_exponent());
    Ok(factor1.powf(e2) * factor2.powf(e1))
}

fn run_up_product(config: &RunConfig) -> Result<RunOutcome> {
    let p: UpProductParams = parse_params(config)?;
    let n = config.grid.dim as u32;
    let side1 = p.side1.build(n)?;
    let side2 = p.side2.build(n)?;
    if !(p.width > 0.0 && p.width.is_finite() && p.lambda > 0.0 && p.lambda.is_finite()) {
        return Err(Error::Config(format!(
            "width and lambda must be positive and finite, got {} and {}",
            p.width, p.lambda
        )));
    }
    let packet = GaussianPacket::isotropic(config.grid.dim, p.width * p.lambda * p.lambda)?;
    let origin = vec![0.0; config.grid.dim];
    let f = packet.sample(&config.grid)?;
    let measured = up_product(&f, &side1, &side2, &origin, &origin)?;
    let predicted = packet_product(&packet, &side1, &side2)?;
    let tol = config.tolerance("product", 5e-3);

    let mut record = ExperimentRecord::new("up-product");
    record.set_param("side1", &p.side1)?;
    record.set_param("side2", &p.side2)?;
    record.set_param("width", p.width)?;
    record.set_param("lambda", p.lambda)?;
    record.set_measured("product", measured.product);
    record.set_measured("factor1", measured.factor1);
    record.set_measured("factor2", measured.factor2);
    record.set_predicted(
        "product",
        predicted,
        "closed-form Gaussian moments, factor1^E2 * factor2^E1",
    );
    record.set_tolerance("product", tol);
    record.ok = relative_gap(measured.product, predicted) <= tol;
    record.provenance.grid = Some(config.grid);
    Ok(RunOutcome {
        record,
        csv_header: "lambda,product".into(),
        csv_rows: vec![(p.lambda, measured.product)],
    })
}

fn run_lp_range(config: &RunConfig) -> Result<RunOutcome> {
    let p: LpRangeParams = parse_params(config)?;
    let n = config.grid.dim as u32;
    let verdict = heisenberg_lp_verdict(n, p.p)?;
    if verdict == RangeVerdict::Inadmissible {
        return Err(Error::Inadmissible(vec![format!(
            "p = {} lies beyond the sharp product range (0, 2n/(n-1))",
            p.p
        )]));
    }
    let side = SideParams::new(n, p.p, Rational::from_integer(1), p.p)?;
    let packet = GaussianPacket::isotropic(config.grid.dim, p.width)?;
    let f = packet.sample(&config.grid)?;
    let origin = vec![0.0; config.grid.dim];
    let measured = up_product_unchecked(&f, &side, &side, &origin, &origin)?;

    let mut record = ExperimentRecord::new("lp-range");
    record.set_param("p", p.p)?;
    record.set_param("width", p.width)?;
    record.set_param("verdict", verdict)?;
    record.set_measured("product", measured.product);
    record.set_measured("factor1", measured.factor1);
    record.set_measured("factor2", measured.factor2);
    record.ok = measured.product.is_finite() && measured.product > 0.0;
    record.provenance.grid = Some(config.grid);
    Ok(RunOutcome {
        record,
        csv_header: "p,product".into(),
        csv_rows: vec![(p.p.as_f64(), measured.product)],
    })
}

fn run_moment_growth(config: &RunConfig) -> Result<RunOutcome> {
    let p: MomentGrowthParams = parse_params(config)?;
    let dim = config.grid.dim;
    let ts = geometric_grid(p.t_lo, p.t_hi, p.points)?;
    let packet = GaussianPacket::isotropic(dim, p.width)?;
    let x0 = p.x0.clone().unwrap_or_else(|| vec![0.0; dim]);
    if x0.len() != dim {
        return Err(Error::Config(format!(
            "x0 has {} coordinates on a {dim}-dimensional grid",
            x0.len()
        )));
    }
    let fit = if p.numeric {
        let u0 = packet.sample(&config.grid)?;
        moment_growth_fit(p.kind, &u0, p.a, p.b, &x0, &ts)?
    } else {
        if x0.iter().any(|&c| c != 0.0) {
            return Err(Error::Config(
                "analytic traces take the moment about the packet center; \
                 use numeric = true for an off-center x0"
                    .into(),
            ));
        }
        moment_growth_fit_analytic(p.kind, &packet, p.a, p.b, &ts)?
    };
    let tol = config.tolerance("slope", 0.01);
    let formula = match p.kind {
        MomentKind::Schrodinger => "dim*(1/a + b/dim - 1/2)",
        MomentKind::Heat => "(dim/2)*(1/a + b/dim - 1)",
    };

    let mut record = ExperimentRecord::new("moment-growth");
    record.set_param("kind", p.kind)?;
    record.set_param("a", p.a)?;
    record.set_param("b", p.b)?;
    record.set_param("width", p.width)?;
    record.set_param("numeric", p.numeric)?;
    record.set_param("t_lo", p.t_lo)?;
    record.set_param("t_hi", p.t_hi)?;
    record.set_param("points", p.points)?;
    record.set_measured("slope", fit.slope);
    record.set_measured("rel_err", fit.rel_err);
    record.set_predicted("slope", fit.predicted, formula);
    record.set_tolerance("slope", tol);
    record.ok = fit.rel_err <= tol;
    if p.numeric {
        record.provenance.grid = Some(config.grid);
        if !fit.excluded.is_empty() {
            record
                .provenance
                .detail
                .insert("excluded".into(), serde_json::to_value(&fit.excluded)?);
        }
    }
    Ok(RunOutcome {
        record,
        csv_header: "t,moment".into(),
        csv_rows: fit.series,
    })
}

fn run_observability(config: &RunConfig) -> Result<RunOutcome> {
    let p: ObservabilityParams = parse_params(config)?;
    let dim = config.grid.dim;
    p.set.validate(&config.grid)?;
    let center = p.center.clone().unwrap_or_else(|| vec![0.0; dim]);
    let packet = GaussianPacket::new(
        dim,
        num_complex::Complex64::new(1.0, 0.0),
        num_complex::Complex64::new(p.width, 0.0),
        center.clone(),
        vec![0.0; dim],
    )?;
    let u0 = packet.sample(&config.grid)?;
    let ratio = schrodinger_observability(&u0, &p.set, p.t_horizon, p.dt)?;

    let mut record = ExperimentRecord::new("observability");
    record.set_param("width", p.width)?;
    record.set_param("center", &center)?;
    record.set_param("set", &p.set)?;
    record.set_param("t_horizon", p.t_horizon)?;
    record.set_param("dt", p.dt)?;
    record.set_measured("ratio", ratio);
    if matches!(p.set, IndicatorSet::FullSpace) {
        let tol = config.tolerance("ratio", 1e-6);
        record.set_predicted("ratio", p.t_horizon.sqrt(), "sqrt(T)");
        record.set_tolerance("ratio", tol);
        record.ok = relative_gap(ratio, p.t_horizon.sqrt()) <= tol;
    } else {
        // Restricted sets have no closed-form ratio; the value is data.
        record.ok = ratio.is_finite() && ratio >= 0.0;
        record.provenance.detail.insert(
            "set_measure".into(),
            serde_json::to_value(set_measure(&p.set, &config.grid)?)?,
        );
    }
    record.provenance.grid = Some(config.grid);
    Ok(RunOutcome {
        record,
        csv_header: "t_horizon,ratio".into(),
        csv_rows: vec![(p.t_horizon, ratio)],
    })
}

fn run_heat_floor(config: &RunConfig) -> Result<RunOutcome> {
    let p: HeatFloorParams = parse_params(config)?;
    p.set.validate(&config.grid)?;
    if !(p.radius > 0.0 && p.radius <= config.grid.freq_max()) {
        return Err(Error::UnresolvableBand(format!(
            "band radius {} outside the grid range (0, {}]",
            p.radius,
            config.grid.freq_max()
        )));
    }
    let packet = GaussianPacket::isotropic(config.grid.dim, p.width)?;
    let u0 = packet.sample(&config.grid)?;
    let out = heat_observability(&u0, p.radius, &p.set, p.t_horizon, p.dt)?;

    let mut record = ExperimentRecord::new("heat-floor");
    record.set_param("width", p.width)?;
    record.set_param("radius", p.radius)?;
    record.set_param("set", &p.set)?;
    record.set_param("t_horizon", p.t_horizon)?;
    record.set_param("dt", p.dt)?;
    record.set_measured("ratio", out.ratio);
    record.set_measured("floor", out.floor);
    record.set_measured("ratio_over_floor", out.ratio / out.floor);
    record.set_measured("end_mass_ratio", out.end_mass_ratio);
    record.set_predicted("floor", out.floor, "exp(-T*R^2)");
    record.ok = out.intermediate_ok;
    record.provenance.grid = Some(config.grid);
    Ok(RunOutcome {
        record,
        csv_header: "radius,ratio_over_floor".into(),
        csv_rows: vec![(p.radius, out.ratio / out.floor)],
    })
}

fn run_minimizer(config: &RunConfig) -> Result<RunOutcome> {
    let p: MinimizerParams = parse_params(config)?;
    let n = config.grid.dim as u32;
    // A sharpness probe may sit outside the proved range on purpose, so
    // only well-formedness is required here, not product admissibility.
    let side1 = p.side1.build(n)?;
    let side2 = p.side2.build(n)?;
    let report = product_minimizer(&p.family, &config.grid, &side1, &side2, p.budget, config.seed)?;

    let mut record = ExperimentRecord::new("product-minimizer");
    record.set_param("family", &p.family)?;
    record.set_param("side1", &p.side1)?;
    record.set_param("side2", &p.side2)?;
    record.set_param("budget", p.budget)?;
    record.set_measured("best_value", report.best_value);
    record.set_measured("evaluations", report.evaluations as f64);
    record.ok = report.best_value.is_finite();
    record.provenance.grid = Some(config.grid);
    record.provenance.seed = Some(config.seed);
    record
        .provenance
        .detail
        .insert("best_point".into(), serde_json::to_value(&report.best_point)?);
    record.provenance.detail.insert(
        "budget_exhausted".into(),
        Value::Bool(report.budget_exhausted),
    );
    let csv_rows = report
        .trajectory
        .iter()
        .enumerate()
        .map(|(i, &v)| (i as f64, v))
        .collect();
    Ok(RunOutcome {
        record,
        csv_header: "evaluation,best_value".into(),
        csv_rows,
    })
}

fn run_lemma_corpus(config: &RunConfig) -> Result<RunOutcome> {
    let p: LemmaCorpusParams = parse_params(config)?;
    let n = config.grid.dim as u32;
    crate::experiments::validate_moment_params(n, p.lemma1.a, p.lemma1.b, p.lemma1.p, p.lemma1.s)?;
    if p.size == 0 {
        return Err(Error::Config("corpus size must be >= 1".into()));
    }
    let family = PacketFamily::RandomSmoothCorpus {
        seed: config.seed,
        size: p.size,
    };
    let members = family.members(&config.grid)?;
    let origin = vec![0.0; config.grid.dim];
    let mut violations = 0usize;
    let mut min_margin1 = f64::INFINITY;
    let mut min_margin2 = f64::INFINITY;
    let mut csv_rows = Vec::with_capacity(members.len());
    for (i, f) in members.iter().enumerate() {
        let one = lemma1_check(f, p.lemma1.a, p.lemma1.b, p.lemma1.p, p.lemma1.s, &origin)?;
        let two = lemma2_check(f, p.lemma2.k, p.lemma2.p, p.lemma2.q, p.lemma2.m)?;
        violations += usize::from(!one.ok) + usize::from(!two.ok);
        min_margin1 = min_margin1.min(one.lhs / one.rhs);
        min_margin2 = min_margin2.min(two.lhs / two.rhs);
        csv_rows.push((i as f64, one.lhs / one.rhs));
    }

    let mut record = ExperimentRecord::new("lemma-corpus");
    record.set_param("size", p.size)?;
    record.set_param("lemma1", &p.lemma1)?;
    record.set_param("lemma2", &p.lemma2)?;
    record.set_measured("violations", violations as f64);
    record.set_measured("min_margin1", min_margin1);
    record.set_measured("min_margin2", min_margin2);
    record.ok = violations == 0;
    record.provenance.grid = Some(config.grid);
    record.provenance.seed = Some(config.seed);
    Ok(RunOutcome {
        record,
        csv_header: "member,margin1".into(),
        csv_rows,
    })
}

fn run_thickness(config: &RunConfig) -> Result<RunOutcome> {
    let p: ThicknessParams = parse_params(config)?;
    let thick = thickness_check(&p.set, &config.grid, p.side, p.gamma)?;

    let mut record = ExperimentRecord::new("thickness");
    record.set_param("set", &p.set)?;
    record.set_param("side", p.side)?;
    record.set_param("gamma", p.gamma)?;
    record.set_measured("thick", f64::from(u8::from(thick)));
    record.ok = thick;
    record.provenance.grid = Some(config.grid);
    Ok(RunOutcome {
        record,
        csv_header: "gamma,thick".into(),
        csv_rows: vec![(p.gamma, f64::from(u8::from(thick)))],
    })
}

#[derive(Clone, Copy, PartialEq)]
enum RowVerdict {
    Ok,
    Violated,
    Open,
}

impl RowVerdict {
    fn word(self) -> &'static str {
        match self {
            RowVerdict::Ok => "ok",
            RowVerdict::Violated => "VIOLATED",
            RowVerdict::Open => "open",
        }
    }

    fn from_bool(ok: bool) -> RowVerdict {
        if ok {
            RowVerdict::Ok
        } else {
            RowVerdict::Violated
        }
    }
}

fn push_rows(report: &mut String, rows: &[(String, RowVerdict)]) {
    for (text, verdict) in rows {
        let _ = writeln!(report, "  {text} ... {}", verdict.word());
    }
}

fn sides_rows(side1: &SideParams, side2: &SideParams) -> Vec<(String, RowVerdict)> {
    let mut rows = Vec::new();
    let crits = [side1.critical(), side2.critical()];
    for (i, side) in [side1, side2].into_iter().enumerate() {
        let crit = crits[i];
        let other = crits[1 - i];
        let j = i + 1;
        rows.push((
            format!("side {j}: critical index n/(n/a + b) = {crit} < 2"),
            RowVerdict::from_bool(crit < Rational::from_integer(2)),
        ));
        rows.push((
            format!("side {j}: critical index {crit} < k_{j} = {}", side.k),
            RowVerdict::from_bool(Index::Finite(crit) < side.k),
        ));
        match conjugate_cap(other) {
            Some(cap) => rows.push((
                format!(
                    "side {j}: k_{j} = {} < conjugate of the other critical index = {cap}",
                    side.k
                ),
                RowVerdict::from_bool(side.k < cap),
            )),
            None => rows.push((
                format!(
                    "side {j}: no conjugate cap (other critical index {other} < 1)"
                ),
                RowVerdict::Ok,
            )),
        }
    }
    rows
}

/// Builds the `check-params` listing for the configured experiment:
/// each hypothesis inequality with a verdict, then a closing line
/// `ADMISSIBLE` (exit 0), `INADMISSIBLE` (exit 1), or
/// `UNKNOWN (open endpoint)` (exit 2).
pub fn check_params_report(config: &RunConfig) -> Result<(i32, String)> {
    let n = config.grid.dim as u32;
    let mut report = format!(
        "{} on a dim-{} grid (N = {}, L = {}):\n",
        config.experiment, config.grid.dim, config.grid.points_per_axis, config.grid.half_width
    );
    let mut rows: Vec<(String, RowVerdict)> = Vec::new();
    match config.experiment.as_str() {
        "up-product" => {
            let p: UpProductParams = parse_params(config)?;
            rows = sides_rows(&p.side1.build(n)?, &p.side2.build(n)?);
        }
        "product-minimizer" => {
            let p: MinimizerParams = parse_params(config)?;
            rows = sides_rows(&p.side1.build(n)?, &p.side2.build(n)?);
            report.push_str(
                "  (probe: inadmissible tuples are allowed at run time and \
                 explore the unproved range)\n",
            );
        }
        "lp-range" => {
            let p: LpRangeParams = parse_params(config)?;
            let verdict = heisenberg_lp_verdict(n, p.p)?;
            let threshold = if n == 1 {
                "inf".to_string()
            } else {
                format!(
                    "2n/(n-1) = {}",
                    Rational::new(2 * i64::from(n), i64::from(n) - 1)
                )
            };
            rows.push((
                format!("p = {} inside the proved range (0, {threshold})", p.p),
                match verdict {
                    RangeVerdict::Admissible => RowVerdict::Ok,
                    RangeVerdict::Unknown => RowVerdict::Open,
                    RangeVerdict::Inadmissible => RowVerdict::Violated,
                },
            ));
        }
        "moment-growth" => {
            let p: MomentGrowthParams = parse_params(config)?;
            let crit = config.grid.dim as f64
                / (config.grid.dim as f64 * rational_to_f64(p.a.recip()) + p.b);
            rows.push((
                format!("critical index n/(n/a + b) = {crit:.6} < 2"),
                RowVerdict::from_bool(crit < 2.0),
            ));
            rows.push((
                format!(
                    "fit window [{}, {}] spans a decade with {} >= 12 points",
                    p.t_lo, p.t_hi, p.points
                ),
                RowVerdict::from_bool(
                    p.t_lo > 0.0 && p.t_hi / p.t_lo >= 10.0 - 1e-9 && p.points >= 12,
                ),
            ));
        }
        "observability" => {
            let p: ObservabilityParams = parse_params(config)?;
            rows.push((
                "indicator set is valid on the grid".into(),
                RowVerdict::from_bool(p.set.validate(&config.grid).is_ok()),
            ));
            rows.push((
                format!("time step 0 < dt = {} <= T = {}", p.dt, p.t_horizon),
                RowVerdict::from_bool(p.dt > 0.0 && p.dt <= p.t_horizon),
            ));
        }
        "heat-floor" => {
            let p: HeatFloorParams = parse_params(config)?;
            rows.push((
                "indicator set is valid on the grid".into(),
                RowVerdict::from_bool(p.set.validate(&config.grid).is_ok()),
            ));
            rows.push((
                format!(
                    "band radius R = {} within the grid range (0, {:.6}]",
                    p.radius,
                    config.grid.freq_max()
                ),
                RowVerdict::from_bool(p.radius > 0.0 && p.radius <= config.grid.freq_max()),
            ));
            rows.push((
                format!("time step 0 < dt = {} <= T = {}", p.dt, p.t_horizon),
                RowVerdict::from_bool(p.dt > 0.0 && p.dt <= p.t_horizon),
            ));
        }
        "lemma-corpus" => {
            let p: LemmaCorpusParams = parse_params(config)?;
            match crate::experiments::validate_moment_params(
                n, p.lemma1.a, p.lemma1.b, p.lemma1.p, p.lemma1.s,
            ) {
                Ok(()) => rows.push((
                    "lemma 1 moment parameters admissible".into(),
                    RowVerdict::Ok,
                )),
                Err(Error::Inadmissible(v)) => {
                    for item in v {
                        rows.push((format!("lemma 1: {item}"), RowVerdict::Violated));
                    }
                }
                Err(e) => return Err(e),
            }
            let (k, q, pp, m) = (p.lemma2.k, p.lemma2.q, p.lemma2.p, p.lemma2.m);
            let chain_up = m <= k && k <= pp && m < q && q <= pp;
            let chain_down = pp <= k && k <= m && pp <= q && q < m;
            rows.push((
                format!(
                    "lemma 2 indices (k, p, q, m) = ({k}, {pp}, {q}, {m}) satisfy an \
                     interpolation chain"
                ),
                RowVerdict::from_bool(chain_up || chain_down),
            ));
        }
        "thickness" => {
            let p: ThicknessParams = parse_params(config)?;
            rows.push((
                "indicator set is valid on the grid".into(),
                RowVerdict::from_bool(p.set.validate(&config.grid).is_ok()),
            ));
            rows.push((
                format!("density fraction gamma = {} in (0, 1]", p.gamma),
                RowVerdict::from_bool(p.gamma > 0.0 && p.gamma <= 1.0),
            ));
            let h = 2.0 * config.grid.half_width / config.grid.points_per_axis as f64;
            let cells = p.side / h;
            rows.push((
                format!("cube side {} is a whole number of grid cells", p.side),
                RowVerdict::from_bool(
                    p.side > 0.0 && (cells - cells.round()).abs() <= 1e-9 * cells.max(1.0),
                ),
            ));
        }
        other => {
            return Err(Error::Config(format!(
                "unknown experiment tag {other:?}"
            )));
        }
    }
    push_rows(&mut report, &rows);
    let violated = rows.iter().any(|(_, v)| *v == RowVerdict::Violated);
    let open = rows.iter().any(|(_, v)| *v == RowVerdict::Open);
    let (code, line) = if violated {
        (1, "INADMISSIBLE")
    } else if open {
        (2, "UNKNOWN (open endpoint)")
    } else {
        (0, "ADMISSIBLE")
    };
    report.push_str(line);
    report.push('\n');
    Ok((code, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_config(experiment: &str, params: Value) -> RunConfig {
        RunConfig {
            experiment: experiment.into(),
            grid: GridSpec::new(1, 256, 12.0).unwrap(),
            seed: 7,
            out: PathBuf::from("records"),
            tolerances: BTreeMap::new(),
            params,
        }
    }

    fn side_json(a: &str, b: &str, k: &str) -> Value {
        json!({ "a": a, "b": b, "k": k })
    }

    #[test]
    fn config_files_round_trip_and_reject_garbage() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        let config = base_config(
            "up-product",
            json!({ "side1": side_json("2", "1", "2"), "side2": side_json("2", "1", "2") }),
        );
        fs::write(&path, serde_json::to_vec_pretty(&config).unwrap()).unwrap();
        let loaded = RunConfig::load(&path).unwrap();
        assert_eq!(loaded.experiment, "up-product");
        assert_eq!(loaded.grid, config.grid);

        fs::write(&path, b"{ not json").unwrap();
        assert!(matches!(RunConfig::load(&path), Err(Error::Config(_))));

        // A malformed grid must be caught at load, not at first use.
        fs::write(
            &path,
            serde_json::to_vec(&json!({
                "experiment": "up-product",
                "grid": { "dim": 1, "points_per_axis": 100, "half_width": 12.0 },
            }))
            .unwrap(),
        )
        .unwrap();
        assert!(RunConfig::load(&path).is_err());
    }

    #[test]
    fn product_run_matches_the_closed_form_and_is_deterministic() {
        let config = base_config(
            "up-product",
            json!({
                "side1": side_json("2", "1", "2"),
                "side2": side_json("2", "1", "2"),
                "lambda": 2.0,
            }),
        );
        let first = execute(&config).unwrap();
        assert!(first.record.ok, "{:?}", first.record.measured);
        let product = first.record.measured["product"];
        assert!((product - 0.5).abs() < 0.5 * 5e-3, "product {product}");
        assert_eq!(first.csv_rows.len(), 1);

        let second = execute(&config).unwrap();
        assert_eq!(
            first.record.to_bytes().unwrap(),
            second.record.to_bytes().unwrap()
        );
    }

    #[test]
    fn inadmissible_products_are_refused_before_compute() {
        // k = 1/2 sits below the critical index 2/3, a named hypothesis
        // violation rather than a config error.
        let config = base_config(
            "up-product",
            json!({
                "side1": side_json("2", "1", "1/2"),
                "side2": side_json("2", "1", "2"),
            }),
        );
        match execute(&config) {
            Err(Error::Inadmissible(v)) => {
                assert!(v.iter().any(|s| s.contains("k_1")), "{v:?}");
            }
            other => panic!("expected a hypothesis violation, got {other:?}"),
        }
    }

    #[test]
    fn check_params_reports_the_three_verdicts() {
        let good = base_config(
            "up-product",
            json!({
                "side1": side_json("2", "1", "2"),
                "side2": side_json("2", "1", "2"),
            }),
        );
        let (code, report) = check_params_report(&good).unwrap();
        assert_eq!(code, 0);
        assert!(report.ends_with("ADMISSIBLE\n"), "{report}");

        let bad = base_config(
            "up-product",
            json!({
                "side1": side_json("2", "1", "1/2"),
                "side2": side_json("2", "1", "2"),
            }),
        );
        let (code, report) = check_params_report(&bad).unwrap();
        assert_eq!(code, 1);
        assert!(report.contains("VIOLATED"), "{report}");
        assert!(report.ends_with("INADMISSIBLE\n"), "{report}");

        // dim 2 puts the sharp threshold at 2n/(n-1) = 4; p = 4 is open.
        let mut endpoint = base_config("lp-range", json!({ "p": 4 }));
        endpoint.grid = GridSpec::new(2, 64, 12.0).unwrap();
        let (code, report) = check_params_report(&endpoint).unwrap();
        assert_eq!(code, 2);
        assert!(report.ends_with("UNKNOWN (open endpoint)\n"), "{report}");
    }

    #[test]
    fn sweep_values_parse_as_json_with_string_fallback() {
        let values = parse_values(" 1, 1/2 ,2.5,\"z\"").unwrap();
        assert_eq!(values[0], json!(1));
        assert_eq!(values[1], json!("1/2"));
        assert_eq!(values[2], json!(2.5));
        assert_eq!(values[3], json!("z"));
        assert!(parse_values("  ").unwrap().is_empty());
        assert!(parse_values("1,,2").is_err());
    }

    #[test]
    fn axis_patching_reaches_nested_keys() {
        let config = base_config(
            "up-product",
            json!({
                "side1": side_json("2", "1", "2"),
                "side2": side_json("2", "1", "2"),
            }),
        );
        let patched_config = patched(&config, "/side1/a", &json!("4")).unwrap();
        assert_eq!(patched_config.params["side1"]["a"], json!("4"));
        // New top-level keys may be introduced by the sweep axis.
        let with_lambda = patched(&config, "/lambda", &json!(0.5)).unwrap();
        assert_eq!(with_lambda.params["lambda"], json!(0.5));
        assert!(patched(&config, "lambda", &json!(1)).is_err());
        assert!(patched(&config, "/side1/a/deep", &json!(1)).is_err());
    }

    #[test]
    fn unknown_tags_are_usage_errors() {
        let config = base_config("no-such-experiment", json!({}));
        match execute(&config) {
            Err(e @ Error::Config(_)) => assert_eq!(e.exit_code(), 4),
            other => panic!("expected a usage error, got {other:?}"),
        }
    }

    #[test]
    fn thickness_run_records_the_verdict() {
        let config = base_config(
            "thickness",
            json!({
                "set": { "kind": "full-space" },
                "side": 1.5,
                "gamma": 0.9,
            }),
        );
        let outcome = execute(&config).unwrap();
        assert!(outcome.record.ok);
        assert_eq!(outcome.record.measured["thick"], 1.0);
    }
}
