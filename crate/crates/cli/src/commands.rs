//! The four subcommands. Each writes a bundle of files into one directory.

use std::path::{Path, PathBuf};

use hawkcast::benchmarks::{run_comparison, Zdt, TRUE_FRONT_POINTS};
use hawkcast::decomposition::{EnsembleConfig, Method};
use hawkcast::evaluation::{variance_ratio, EvaluationReport, ForecastPair, Loss, MetricTable};
use hawkcast::hho::{Bounds, HhoConfig};
use hawkcast::mohho::{mohho_optimize, MohhoConfig};
use hawkcast::pipeline::{run_forecast, Decomposer, ForecastRun, PipelineConfig, Tuning};
use serde::Serialize;

use crate::config::{resolve_seed, BenchmarkSettings, Settings};
use crate::error::{CliError, CliResult};
use crate::ingest::{ingest_csv, parse_numeric, read_columns, ColumnSelector, DescriptiveStats, Ingested};
use crate::manifest::RunManifest;
use crate::svg::{plot, Layer, Mark};

fn create_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn write_text(path: PathBuf, text: &str) -> CliResult<()> {
    std::fs::write(&path, text).map_err(|e| CliError::io(path, e))
}

/// Writes `rows` under `header`; floats use the shortest exact representation.
pub fn write_csv(path: PathBuf, header: &[String], rows: &[Vec<String>]) -> CliResult<()> {
    let io = |e: csv::Error| CliError::Internal(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(&path).map_err(io)?;
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::io(&path, e))
}

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn num(v: f64) -> String {
    v.to_string()
}

fn load_settings(config: Option<&Path>) -> CliResult<Settings> {
    config.map(Settings::from_path).transpose().map(Option::unwrap_or_default)
}

fn metric_header(first: &str, prefix: &str) -> Vec<String> {
    std::iter::once(first.to_string())
        .chain(MetricTable::<f64>::COLUMNS.iter().map(|c| format!("{prefix}{c}")))
        .collect()
}

fn metric_row(label: &str, m: &MetricTable<f64>) -> Vec<String> {
    std::iter::once(label.to_string()).chain(m.values().iter().map(|&v| num(v))).collect()
}

pub fn write_statistics(path: PathBuf, column: &str, s: &DescriptiveStats) -> CliResult<()> {
    let header = strings(&["series", "max", "median", "mean", "min", "std"]);
    let row = vec![column.to_string(), num(s.max), num(s.median), num(s.mean), num(s.min), num(s.std)];
    write_csv(path, &header, &[row])
}

pub struct ForecastArgs {
    pub config: Option<PathBuf>,
    pub input: PathBuf,
    pub selector: ColumnSelector,
    pub output: PathBuf,
    pub seed: Option<u64>,
    pub compare: bool,
}

#[derive(Serialize)]
struct ForecastManifestConfig<'a> {
    pipeline: &'a PipelineConfig,
    compare: bool,
    value_column: &'a str,
    date_column: Option<&'a str>,
}

/// Baselines run in comparison mode, in report order.
pub fn comparison_configs(proposed: &PipelineConfig) -> Vec<PipelineConfig> {
    let mut out = Vec::new();
    let plain = PipelineConfig { decomposer: Decomposer::None, tuning: Tuning::Random, ..proposed.clone() };
    out.push(plain);
    for m in [Method::Emd, Method::Ceemd, Method::Iceemdan] {
        out.push(PipelineConfig { decomposer: Decomposer::Method(m), ..proposed.clone() });
    }
    out.retain(|c| c.model_name() != proposed.model_name());
    out
}

pub fn forecast(args: &ForecastArgs) -> CliResult<Vec<ForecastRun>> {
    let settings = load_settings(args.config.as_deref())?;
    let mut config = settings.pipeline.clone();
    config.seed = resolve_seed(args.seed, settings.seed)?;
    config.ensemble.seed = config.seed;
    config.validate()?;
    let data: Ingested = ingest_csv(&args.input, &args.selector)?;
    let manifest = RunManifest::begin(
        "forecast",
        &ForecastManifestConfig {
            pipeline: &config,
            compare: args.compare,
            value_column: &data.column,
            date_column: args.selector.date_column.as_deref(),
        },
        Some(&args.input),
        config.seed,
    )?;

    let mut configs = if args.compare { comparison_configs(&config) } else { Vec::new() };
    configs.push(config);
    let runs: Vec<ForecastRun> =
        configs.iter().map(|c| run_forecast(data.series.values(), c)).collect::<hawkcast::Result<_>>()?;
    let proposed = runs.last().expect("at least the proposed run");

    create_dir(&args.output)?;
    let labels = data.labels();
    let test_labels = &labels[proposed.segments.test.clone()];

    let mut header = strings(&["timestamp", "actual", "predicted"]);
    header.extend(proposed.components.iter().map(|c| c.name.clone()));
    header.extend(runs[..runs.len() - 1].iter().map(|r| r.model_name.clone()));
    let rows: Vec<Vec<String>> = (0..proposed.actual.len())
        .map(|t| {
            let mut row = vec![test_labels[t].clone(), num(proposed.actual[t]), num(proposed.prediction[t])];
            row.extend(proposed.component_predictions.iter().map(|c| num(c[t])));
            row.extend(runs[..runs.len() - 1].iter().map(|r| num(r.prediction[t])));
            row
        })
        .collect();
    write_csv(args.output.join("predictions.csv"), &header, &rows)?;

    let rows: Vec<Vec<String>> = runs.iter().map(|r| metric_row(&r.model_name, &r.metrics)).collect();
    write_csv(args.output.join("metrics.csv"), &metric_header("model", ""), &rows)?;

    let models: Vec<(String, Vec<f64>)> = runs.iter().map(|r| (r.model_name.clone(), r.prediction.clone())).collect();
    let report = EvaluationReport::build(&proposed.actual, &models, &proposed.model_name, Loss::Squared)?;
    let rows: Vec<Vec<String>> = report
        .comparisons
        .iter()
        .map(|c| metric_row(&format!("Proposed model vs. {}", c.baseline), &c.improvement))
        .collect();
    write_csv(args.output.join("improvements.csv"), &metric_header("comparison", "P_"), &rows)?;

    let rows: Vec<Vec<String>> = report
        .models
        .iter()
        .map(|m| {
            let dm = report.comparisons.iter().find(|c| c.baseline == m.name).and_then(|c| c.dm);
            vec![
                m.name.clone(),
                dm.map(|d| num(d.statistic)).unwrap_or_default(),
                dm.map(|d| num(d.p_value)).unwrap_or_default(),
                dm.map(|d| significance_label(d.significance)).unwrap_or_default(),
                num(m.variance_ratio),
            ]
        })
        .collect();
    write_csv(args.output.join("dm_vr.csv"), &strings(&["model", "DM", "p_value", "significance", "VR"]), &rows)?;

    write_statistics(args.output.join("statistics.csv"), &data.column, &data.stats)?;

    let svg = plot(
        &format!("{} one-step forecast", proposed.model_name),
        "test step",
        &data.column,
        &[Layer::indexed("actual", &proposed.actual), Layer::indexed("predicted", &proposed.prediction)],
        &[Mark::Line, Mark::Line],
    );
    write_text(args.output.join("forecast.svg"), &svg)?;
    manifest.finish(&args.output)?;
    Ok(runs)
}

fn significance_label(s: hawkcast::evaluation::Significance) -> String {
    use hawkcast::evaluation::Significance::*;
    match s {
        OnePercent => "1%",
        FivePercent => "5%",
        TenPercent => "10%",
        NotSignificant => "",
    }
    .to_string()
}

pub struct BenchmarkArgs {
    pub config: Option<PathBuf>,
    pub output: PathBuf,
    pub seed: Option<u64>,
    pub runs: Option<usize>,
    pub iterations: Option<usize>,
    pub population: Option<usize>,
    pub archive: Option<usize>,
}

pub fn mohho_front(problem: Zdt, b: &BenchmarkSettings, seed: u64) -> hawkcast::Result<Vec<Vec<f64>>> {
    let base = HhoConfig::new(b.population, b.iterations, Bounds::uniform(b.dimension, 0.0, 1.0)?, seed)?;
    let cfg = MohhoConfig {
        base,
        archive_capacity: b.archive_capacity,
        grid_divisions: b.grid_divisions,
        crowding: b.crowding,
    };
    let result = mohho_optimize(|x: &[f64]| problem.evaluate(x).map(|f| f.to_vec()).unwrap_or_else(|_| vec![f64::NAN; 2]), &cfg)?;
    Ok(result.archive.objectives())
}

#[derive(Serialize)]
struct BenchmarkManifestConfig<'a> {
    benchmark: &'a BenchmarkSettings,
    problems: Vec<&'static str>,
}

pub fn benchmark(args: &BenchmarkArgs) -> CliResult<Vec<hawkcast::benchmarks::Comparison>> {
    let settings = load_settings(args.config.as_deref())?;
    let mut b = settings.benchmark.clone();
    b.runs = args.runs.unwrap_or(b.runs);
    b.iterations = args.iterations.unwrap_or(b.iterations);
    b.population = args.population.unwrap_or(b.population);
    b.archive_capacity = args.archive.unwrap_or(b.archive_capacity);
    let seed = resolve_seed(args.seed, settings.seed)?;
    let manifest = RunManifest::begin(
        "benchmark",
        &BenchmarkManifestConfig { benchmark: &b, problems: Zdt::ALL.iter().map(|p| p.name()).collect() },
        None,
        seed,
    )?;
    let results: Vec<_> = Zdt::ALL
        .iter()
        .map(|&p| run_comparison(p, b.runs, seed, |p, s| mohho_front(p, &b, s)))
        .collect::<hawkcast::Result<_>>()?;

    create_dir(&args.output)?;
    let rows: Vec<Vec<String>> = results
        .iter()
        .map(|c| {
            let s = &c.stats;
            vec![c.problem.name().to_string(), num(s.mean), num(s.std), num(s.median), num(s.best), num(s.worst)]
        })
        .collect();
    write_csv(args.output.join("igd_stats.csv"), &strings(&["problem", "Ave.", "Std.", "Median", "Best", "Worst"]), &rows)?;

    let rows: Vec<Vec<String>> = results
        .iter()
        .flat_map(|c| c.igd.iter().enumerate().map(|(r, v)| vec![c.problem.name().to_string(), r.to_string(), num(*v)]))
        .collect();
    write_csv(args.output.join("igd_runs.csv"), &strings(&["problem", "run", "igd"]), &rows)?;

    let rows: Vec<Vec<String>> = results
        .iter()
        .flat_map(|c| {
            c.fronts.iter().enumerate().flat_map(move |(r, front)| {
                front.iter().map(move |f| vec![c.problem.name().to_string(), r.to_string(), num(f[0]), num(f[1])])
            })
        })
        .collect();
    write_csv(args.output.join("fronts.csv"), &strings(&["problem", "run", "f1", "f2"]), &rows)?;

    for c in &results {
        let truth: Vec<Vec<f64>> = c.problem.true_front(TRUE_FRONT_POINTS);
        let layers = [
            Layer { label: "true front", points: truth.iter().map(|f| (f[0], f[1])).collect() },
            Layer { label: "MOHHO run 0", points: c.fronts[0].iter().map(|f| (f[0], f[1])).collect() },
        ];
        let true_mark = if c.problem == Zdt::Zdt3 { Mark::Dots } else { Mark::Line };
        let svg = plot(&format!("{} achieved front", c.problem.name()), "f1", "f2", &layers, &[true_mark, Mark::Dots]);
        write_text(args.output.join(format!("{}_front.svg", c.problem.name().to_lowercase())), &svg)?;
    }
    manifest.finish(&args.output)?;
    Ok(results)
}

pub struct DecomposeArgs {
    pub config: Option<PathBuf>,
    pub input: PathBuf,
    pub selector: ColumnSelector,
    pub output: PathBuf,
    pub seed: Option<u64>,
    pub method: Option<Method>,
}

#[derive(Serialize)]
struct DecomposeManifestConfig<'a> {
    method: Method,
    ensemble: &'a EnsembleConfig,
    value_column: &'a str,
}

pub fn decompose(args: &DecomposeArgs) -> CliResult<()> {
    let settings = load_settings(args.config.as_deref())?;
    let method = match (args.method, settings.pipeline.decomposer) {
        (Some(m), _) | (None, Decomposer::Method(m)) => m,
        (None, Decomposer::None) => return Err(CliError::Usage("decompose needs a decomposition method".into())),
    };
    let mut ensemble = settings.pipeline.ensemble.clone();
    ensemble.seed = resolve_seed(args.seed, settings.seed)?;
    ensemble.validate()?;
    let data = ingest_csv(&args.input, &args.selector)?;
    let manifest = RunManifest::begin(
        "decompose",
        &DecomposeManifestConfig { method, ensemble: &ensemble, value_column: &data.column },
        Some(&args.input),
        ensemble.seed,
    )?;
    let modes = method.decompose(data.series.values(), &ensemble)?;

    create_dir(&args.output)?;
    let mut header = strings(&["timestamp", &data.column]);
    header.extend((1..=modes.mode_count()).map(|k| format!("mode{k}")));
    header.push("residual".into());
    let labels = data.labels();
    let rows: Vec<Vec<String>> = (0..data.series.len())
        .map(|t| {
            let mut row = vec![labels[t].clone(), num(data.series.values()[t])];
            row.extend(modes.components().map(|c| num(c[t])));
            row
        })
        .collect();
    write_csv(args.output.join("modes.csv"), &header, &rows)?;
    write_statistics(args.output.join("statistics.csv"), &data.column, &data.stats)?;
    manifest.finish(&args.output)
}

pub struct EvaluateArgs {
    pub input: PathBuf,
    pub actual_column: String,
    pub predicted_column: String,
    pub delimiter: u8,
    pub output: PathBuf,
}

#[derive(Serialize)]
struct EvaluateManifestConfig<'a> {
    actual_column: &'a str,
    predicted_column: &'a str,
}

pub fn evaluate(args: &EvaluateArgs) -> CliResult<(MetricTable<f64>, f64)> {
    let manifest = RunManifest::begin(
        "evaluate",
        &EvaluateManifestConfig { actual_column: &args.actual_column, predicted_column: &args.predicted_column },
        Some(&args.input),
        0,
    )?;
    let cols = read_columns(&args.input, &[&args.actual_column, &args.predicted_column], args.delimiter)?;
    let (actual, _) = parse_numeric(&args.input, &args.actual_column, &cols[0])?;
    let (predicted, _) = parse_numeric(&args.input, &args.predicted_column, &cols[1])?;
    let pair = ForecastPair::new(&actual, &predicted)?;
    let metrics = MetricTable::compute(&pair)?;
    let vr = variance_ratio(&pair)?;

    create_dir(&args.output)?;
    let mut header = metric_header("model", "");
    header.push("VR".into());
    let mut row = metric_row(&args.predicted_column, &metrics);
    row.push(num(vr));
    write_csv(args.output.join("metrics.csv"), &header, &[row])?;
    manifest.finish(&args.output)?;
    Ok((metrics, vr))
}

/// Plain-text rendering of a metrics.csv-like table for the terminal.
pub fn render_metrics(rows: &[(String, MetricTable<f64>)]) -> String {
    let mut out = format!("{:<24}", "model");
    for c in MetricTable::<f64>::COLUMNS {
        out.push_str(&format!("{c:>10}"));
    }
    out.push('\n');
    for (name, m) in rows {
        out.push_str(&format!("{name:<24}"));
        for v in m.values() {
            out.push_str(&format!("{v:>10.4}"));
        }
        out.push('\n');
    }
    out
}
