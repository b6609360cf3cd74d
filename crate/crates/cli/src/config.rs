//! Flat `key = value` configuration with dotted section names.
//!
//! Lines may also sit under a `[section]` header, in which case `key` is read
//! as `section.key`. `#` starts a comment. Unknown keys are rejected.

use std::path::Path;
use std::str::FromStr;

use hawkcast::pipeline::PipelineConfig;
use serde::Serialize;

use crate::error::{CliError, CliResult};

/// Environment variable that supplies the seed when neither the command line
/// nor the config file sets one.
pub const SEED_ENV: &str = "HAWKCAST_SEED";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkSettings {
    pub runs: usize,
    pub iterations: usize,
    pub population: usize,
    pub archive_capacity: usize,
    pub grid_divisions: usize,
    pub crowding: f64,
    pub dimension: usize,
}

impl Default for BenchmarkSettings {
    fn default() -> Self {
        Self {
            runs: 50,
            iterations: 100,
            population: 40,
            archive_capacity: 100,
            grid_divisions: 10,
            crowding: 2.0,
            dimension: hawkcast::benchmarks::DEFAULT_DIMENSION,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Settings {
    pub pipeline: PipelineConfig,
    pub benchmark: BenchmarkSettings,
    /// Seed given in the file, if any.
    pub seed: Option<u64>,
}

/// Every accepted key with its default, as written in a config file.
pub const KEYS: &[(&str, &str)] = &[
    ("seed", "0"),
    ("decomposer", "iceemdan"),
    ("tuning", "mohho"),
    ("lag_order", "6"),
    ("train_fraction", "0.8"),
    ("validation_fraction", "0.2"),
    ("archive_pick", "min_f1"),
    ("boundary", "full_series"),
    ("elm.hidden", "20"),
    ("elm.activation", "sigmoid"),
    ("mohho.population", "40"),
    ("mohho.iterations", "100"),
    ("mohho.archive", "100"),
    ("mohho.grid_divisions", "10"),
    ("mohho.crowding", "2"),
    ("mohho.search_radius", "1"),
    ("ensemble.realizations", "100"),
    ("ensemble.noise_amplitude", "0.2"),
    ("ensemble.max_sift_iterations", "100"),
    ("ensemble.sift_stop_threshold", "0.2"),
    ("ensemble.max_modes", "none"),
    ("benchmark.runs", "50"),
    ("benchmark.iterations", "100"),
    ("benchmark.population", "40"),
    ("benchmark.archive", "100"),
    ("benchmark.grid_divisions", "10"),
    ("benchmark.crowding", "2"),
    ("benchmark.dimension", "30"),
];

fn parse<T: FromStr>(line: usize, key: &str, value: &str) -> CliResult<T>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e: T::Err| CliError::Config { line, message: format!("`{key}`: {e}") })
}

impl Settings {
    pub fn from_path(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let mut settings = Settings::default();
        let mut section = String::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = name.trim().to_string();
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config { line: i + 1, message: format!("expected `key = value`, got `{line}`") })?;
            let key = match (section.as_str(), key.trim()) {
                ("", k) => k.to_string(),
                (s, k) => format!("{s}.{k}"),
            };
            settings.set(i + 1, &key, value.trim())?;
        }
        Ok(settings)
    }

    pub fn set(&mut self, line: usize, key: &str, value: &str) -> CliResult<()> {
        let p = &mut self.pipeline;
        let b = &mut self.benchmark;
        match key {
            "seed" => self.seed = Some(parse(line, key, value)?),
            "decomposer" => p.decomposer = parse(line, key, value)?,
            "tuning" => p.tuning = parse(line, key, value)?,
            "lag_order" => p.lag_order = parse(line, key, value)?,
            "train_fraction" => p.train_fraction = parse(line, key, value)?,
            "validation_fraction" => p.validation_fraction = parse(line, key, value)?,
            "archive_pick" => p.archive_pick = parse(line, key, value)?,
            "boundary" => p.boundary = parse(line, key, value)?,
            "elm.hidden" => p.elm_hidden = parse(line, key, value)?,
            "elm.activation" => p.activation = parse(line, key, value)?,
            "mohho.population" => p.optimizer.population = parse(line, key, value)?,
            "mohho.iterations" => p.optimizer.iterations = parse(line, key, value)?,
            "mohho.archive" => p.optimizer.archive_capacity = parse(line, key, value)?,
            "mohho.grid_divisions" => p.optimizer.grid_divisions = parse(line, key, value)?,
            "mohho.crowding" => p.optimizer.crowding = parse(line, key, value)?,
            "mohho.search_radius" => p.optimizer.search_radius = parse(line, key, value)?,
            "ensemble.realizations" => p.ensemble.realizations = parse(line, key, value)?,
            "ensemble.noise_amplitude" => p.ensemble.noise_amplitude = parse(line, key, value)?,
            "ensemble.max_sift_iterations" => p.ensemble.max_sift_iterations = parse(line, key, value)?,
            "ensemble.sift_stop_threshold" => p.ensemble.sift_stop_threshold = parse(line, key, value)?,
            "ensemble.max_modes" => {
                p.ensemble.max_modes = if value == "none" { None } else { Some(parse(line, key, value)?) }
            }
            "benchmark.runs" => b.runs = parse(line, key, value)?,
            "benchmark.iterations" => b.iterations = parse(line, key, value)?,
            "benchmark.population" => b.population = parse(line, key, value)?,
            "benchmark.archive" => b.archive_capacity = parse(line, key, value)?,
            "benchmark.grid_divisions" => b.grid_divisions = parse(line, key, value)?,
            "benchmark.crowding" => b.crowding = parse(line, key, value)?,
            "benchmark.dimension" => b.dimension = parse(line, key, value)?,
            _ => return Err(CliError::Config { line, message: format!("unknown key `{key}`") }),
        }
        Ok(())
    }
}

/// Command line, then config file, then the environment, then 0.
pub fn resolve_seed(flag: Option<u64>, file: Option<u64>) -> CliResult<u64> {
    if let Some(s) = flag.or(file) {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Usage(format!("{SEED_ENV}=`{v}` is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}
