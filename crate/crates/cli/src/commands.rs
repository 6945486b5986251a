//! Subcommand bodies. Each writes its primary output to `out` and returns the
//! process exit code.

use std::io::Write;
use std::path::Path;

use catlab_core::experiments::{replicate_values, standardize_zagreb, ExperimentConfig, Sampler};
use catlab_core::indices::{IndexKind, IndexValue};
use catlab_core::oracle::{choose_mode, enumerate_with, EnumerationMode};
use catlab_core::stats::{self, RunningMoments, TestResult};
use catlab_core::theory::Formula;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::json;

use crate::args::{CltArgs, OracleArgs, SimulateArgs, TheoryArgs, VerifyArgs};
use crate::config::Settings;
use crate::error::{EXIT_FAILURE, EXIT_PASS};
use crate::format::{float17, index_value, rational};
use crate::manifest::{RunManifest, Verdict};
use crate::verify::{self, Suite, ToleranceProfile, VerifyOptions, DEFAULT_SEED};
use crate::{svg, CliError};

pub const ALL_INDICES: &str = "gini_degree,hoover,zagreb,randic,wiener,hyper_wiener";

fn required<T>(value: Option<T>, flag: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("missing --{flag}")))
}

pub fn parse_indices(list: &str) -> Result<Vec<IndexKind>, CliError> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<IndexKind>().map_err(CliError::from))
        .collect()
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(path) => std::fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn json_line(value: &impl Serialize) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

// ---- simulate --------------------------------------------------------------

#[derive(Serialize)]
#[serde(untagged)]
enum Number {
    Int(u128),
    Float(f64),
}

impl From<&IndexValue> for Number {
    fn from(v: &IndexValue) -> Self {
        match v.exact {
            Some(exact) => Number::Int(exact),
            None => Number::Float(v.value),
        }
    }
}

#[derive(Serialize)]
struct JsonRow {
    replicate_id: usize,
    values: Vec<Number>,
}

#[derive(Serialize)]
struct JsonTable {
    columns: Vec<String>,
    rows: Vec<JsonRow>,
}

pub fn simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let settings = Settings::new(args.common.config.as_deref())?;
    let m = required(settings.resolve_opt(args.m, "m")?, "m")?;
    let n = required(settings.resolve_opt(args.n, "n")?, "n")?;
    let seed = settings.seed(args.seed, DEFAULT_SEED)?;
    let replications = settings.resolve(args.replications, "replications", 1)?;
    let list: String = settings.resolve(args.indices.clone(), "indices", ALL_INDICES.to_string())?;
    let kinds = parse_indices(&list)?;
    let sampler: Sampler = settings
        .resolve(args.sampler.clone(), "sampler", "sequential".to_string())?
        .parse()?;
    let format = settings.resolve(args.format.clone(), "format", "csv".to_string())?;
    let threads = settings.resolve_opt(args.common.threads, "threads")?;
    let path = settings.resolve_opt(args.out.clone(), "out")?;
    if format != "csv" && format != "json" {
        return Err(CliError::Usage(format!("--format must be csv or json, got '{format}'")));
    }

    let mut cfg = ExperimentConfig::new(m, n, replications, seed, kinds.clone());
    cfg.sampler = sampler;
    cfg.threads = threads;
    cfg.retain_samples = false;
    let rows = replicate_values(&cfg)?;

    let columns: Vec<String> = kinds.iter().map(ToString::to_string).collect();
    let text = if format == "csv" {
        let mut text = format!("replicate_id,{}\n", columns.join(","));
        for (r, row) in rows.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(index_value).collect();
            text.push_str(&format!("{r},{}\n", cells.join(",")));
        }
        text
    } else {
        let table = JsonTable {
            columns: columns.clone(),
            rows: rows
                .iter()
                .enumerate()
                .map(|(r, row)| JsonRow {
                    replicate_id: r,
                    values: row.iter().map(Number::from).collect(),
                })
                .collect(),
        };
        json_line(&table)?
    };
    emit(&text, path.as_deref(), out)?;

    if let Some(path) = &path {
        let alphas: Vec<f64> = kinds
            .iter()
            .filter_map(|k| match k {
                IndexKind::Randic(alpha) => Some(*alpha),
                _ => None,
            })
            .collect();
        let config = json!({
            "m": m,
            "n": n,
            "replications": replications,
            "seed": seed,
            "sampler": sampler.to_string(),
            "indices": columns,
            "alpha": alphas,
            "format": format,
        });
        RunManifest::new("simulate", config).write_beside(path)?;
    }
    Ok(EXIT_PASS)
}

// ---- theory ----------------------------------------------------------------

#[derive(Serialize)]
struct TheoryOutput {
    formula: &'static str,
    m: u64,
    n: u64,
    scaled: String,
    value: f64,
    numerator: String,
    denominator: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<String>,
    validity: String,
    erratum: bool,
    source: &'static str,
}

fn scale_power(scaled: &str) -> Result<u32, CliError> {
    match scaled {
        "none" => Ok(0),
        "n1" => Ok(1),
        "n2" => Ok(2),
        other => Err(CliError::Usage(format!("--scaled must be none, n1 or n2, got '{other}'"))),
    }
}

pub fn theory(args: &TheoryArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let settings = Settings::new(args.common.config.as_deref())?;
    let name: String = required(settings.resolve_opt(args.index.clone(), "index")?, "index")?;
    let formula = Formula::from_name(&name).ok_or_else(|| {
        let names: Vec<&str> = Formula::ALL.iter().map(|f| f.name()).collect();
        CliError::Usage(format!("unknown formula '{name}'; one of {}", names.join(", ")))
    })?;
    let m = required(settings.resolve_opt(args.m, "m")?, "m")?;
    let n = settings.resolve(args.n, "n", 0)?;
    let scaled = settings.resolve(args.scaled.clone(), "scaled", "none".to_string())?;
    let power = scale_power(&scaled)?;
    if power > 0 && n == 0 {
        return Err(CliError::Usage("--scaled needs n >= 1".into()));
    }

    let mut value = formula.evaluate(m, n)?;
    if power > 0 {
        value = value.scaled(n, power);
    }
    let output = TheoryOutput {
        formula: formula.name(),
        m,
        n,
        scaled,
        value: value.to_f64(),
        numerator: value.numer().to_string(),
        denominator: value.denom().to_string(),
        exact: args.exact.then(|| rational(value.numer(), value.denom())),
        validity: value.validity.to_string(),
        erratum: value.validity == catlab_core::theory::Validity::ErratumPaperForm,
        source: value.source,
    };
    out.write_all(json_line(&output)?.as_bytes())?;
    Ok(EXIT_PASS)
}

// ---- oracle ----------------------------------------------------------------

#[derive(Serialize)]
struct OracleOutput {
    m: usize,
    n: u64,
    index: String,
    mode: &'static str,
    mean: String,
    mean_f64: f64,
    second_moment: String,
    variance: String,
    variance_f64: f64,
    support_size: usize,
    history_count: String,
}

fn ratio(r: &BigRational) -> String {
    rational(r.numer(), r.denom())
}

pub fn oracle(args: &OracleArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let settings = Settings::new(args.common.config.as_deref())?;
    let m = required(settings.resolve_opt(args.m, "m")?, "m")?;
    let n = required(settings.resolve_opt(args.n, "n")?, "n")?;
    let name: String = required(settings.resolve_opt(args.index.clone(), "index")?, "index")?;
    let kind: IndexKind = name.parse()?;
    let mode = choose_mode(m, n)?;
    let moments = enumerate_with(m, n, kind, mode)?;
    let output = OracleOutput {
        m,
        n,
        index: kind.to_string(),
        mode: match mode {
            EnumerationMode::Histories => "histories",
            EnumerationMode::Compositions => "compositions",
        },
        mean: ratio(&moments.mean),
        mean_f64: moments.mean.to_f64().unwrap_or(f64::NAN),
        second_moment: ratio(&moments.second_moment),
        variance: ratio(&moments.variance),
        variance_f64: moments.variance.to_f64().unwrap_or(f64::NAN),
        support_size: moments.support_size,
        history_count: moments.history_count.to_string(),
    };
    out.write_all(json_line(&output)?.as_bytes())?;
    Ok(EXIT_PASS)
}

// ---- clt -------------------------------------------------------------------

#[derive(Serialize)]
struct HistogramOutput {
    lo: f64,
    hi: f64,
    bin_width: f64,
    counts: Vec<u64>,
    densities: Vec<f64>,
}

#[derive(Serialize)]
struct CltOutput {
    m: usize,
    n: u64,
    replications: usize,
    seed: u64,
    bins: usize,
    mean: f64,
    variance: f64,
    ks: TestResult,
    jarque_bera: TestResult,
    kde_bandwidth: f64,
    histogram: HistogramOutput,
}

pub fn clt(args: &CltArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let settings = Settings::new(args.common.config.as_deref())?;
    let m = settings.resolve(args.m, "m", verify::LARGE_M)?;
    let n = settings.resolve(args.n, "n", verify::LARGE_N)?;
    let replications = settings.resolve(args.replications, "replications", verify::PAPER7_REPLICATIONS)?;
    let seed = settings.seed(args.seed, DEFAULT_SEED)?;
    let bins = settings.resolve(args.bins, "bins", 20)?;
    let threads = settings.resolve_opt(args.common.threads, "threads")?;
    let csv_path = settings.resolve_opt(args.out.clone(), "out")?;
    let plot_path = settings.resolve_opt(args.plot.clone(), "plot")?;
    if bins == 0 {
        return Err(CliError::Usage("--bins must be at least 1".into()));
    }

    let mut cfg = ExperimentConfig::new(m, n, replications, seed, vec![IndexKind::Zagreb]);
    cfg.threads = threads;
    cfg.retain_samples = false;
    let rows = replicate_values(&cfg)?;
    let zagreb: Vec<&IndexValue> = rows.iter().map(|row| &row[0]).collect();
    let raw: Vec<f64> = zagreb.iter().map(|v| v.value).collect();
    let z = standardize_zagreb(&raw, m, n)?;
    let ks = stats::ks_normality(&z)?;
    let jb = stats::jarque_bera(&z)?;
    let hist = stats::histogram(&z, bins)?;
    let curve = stats::kde(&z)?;
    let moments: RunningMoments = z.iter().copied().collect();

    if let Some(path) = &csv_path {
        let mut text = String::from("replicate_id,zagreb,standardized\n");
        for (r, (v, s)) in zagreb.iter().zip(&z).enumerate() {
            text.push_str(&format!("{r},{},{}\n", index_value(v), float17(*s)));
        }
        std::fs::write(path, text)?;
    }
    if let Some(path) = &plot_path {
        let title = format!("Standardized Zagreb index, m = {m}, n = {n}, R = {replications}");
        std::fs::write(path, svg::histogram_with_kde(&hist, &curve, &title))?;
    }

    let output = CltOutput {
        m,
        n,
        replications,
        seed,
        bins,
        mean: moments.mean(),
        variance: moments.variance().unwrap_or(f64::NAN),
        ks,
        jarque_bera: jb,
        kde_bandwidth: curve.bandwidth,
        histogram: HistogramOutput {
            lo: hist.lo,
            hi: hist.hi,
            bin_width: hist.bin_width(),
            densities: hist.densities(),
            counts: hist.counts.clone(),
        },
    };
    out.write_all(json_line(&output)?.as_bytes())?;

    if let Some(path) = csv_path.as_ref().or(plot_path.as_ref()) {
        let config = json!({
            "m": m,
            "n": n,
            "replications": replications,
            "seed": seed,
            "sampler": Sampler::Sequential.to_string(),
            "indices": ["zagreb"],
            "bins": bins,
        });
        let verdicts = vec![
            Verdict {
                id: "ks_not_rejected".into(),
                pass: !ks.reject,
            },
            Verdict {
                id: "jarque_bera_not_rejected".into(),
                pass: !jb.reject,
            },
        ];
        RunManifest::new("clt", config).with_verdicts(verdicts).write_beside(path)?;
    }
    Ok(EXIT_PASS)
}

// ---- verify ----------------------------------------------------------------

pub fn verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let settings = Settings::new(args.common.config.as_deref())?;
    let suite: Suite = settings.resolve(args.suite.clone(), "suite", "all".to_string())?.parse()?;
    let profile: ToleranceProfile = settings
        .resolve(args.tolerance_profile.clone(), "tolerance_profile", "default".to_string())?
        .parse()?;
    let seed = settings.seed(args.seed, DEFAULT_SEED)?;
    let threads = settings.resolve_opt(args.common.threads, "threads")?;
    let json_path = settings.resolve_opt(args.json.clone(), "json")?;

    let report = verify::run(VerifyOptions {
        suite,
        seed,
        profile,
        threads,
    })?;
    out.write_all(report.table().as_bytes())?;
    if let Some(path) = &json_path {
        std::fs::write(path, report.to_json()?)?;
        let config = json!({
            "suite": suite.to_string(),
            "seed": seed,
            "tolerance_profile": profile.to_string(),
        });
        let verdicts = report
            .checks
            .iter()
            .map(|c| Verdict {
                id: c.id.clone(),
                pass: c.pass,
            })
            .collect();
        RunManifest::new("verify", config).with_verdicts(verdicts).write_beside(path)?;
    }

    report_exit(&report, err)
}

/// 0 when every check passed, otherwise 1 after naming the failures on `err`.
pub fn report_exit(report: &verify::Report, err: &mut dyn Write) -> Result<i32, CliError> {
    if report.all_passed() {
        return Ok(EXIT_PASS);
    }
    for check in report.failures() {
        writeln!(err, "failed: {} ({})", check.id, check.quantity)?;
    }
    Ok(EXIT_FAILURE)
}
