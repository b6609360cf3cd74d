//! Decompose, tune one ELM per component with MOHHO, forecast one step ahead
//! and sum the component forecasts.
//!
//! The series is split chronologically into a fitting part, a validation part
//! (the tail of the training portion) and a test part. Candidate ELM
//! parameters are scored on two objectives, validation RMSE and the standard
//! deviation of the absolute validation errors. The chosen archive member is
//! retrained on the whole training portion before forecasting the test span
//! from actual lagged values.

use std::collections::BTreeSet;
use std::ops::Range;
use std::str::FromStr;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::decomposition::{EnsembleConfig, Method, ModeSet};
use crate::elm::{parameter_count, Activation, ElmModel, SupervisedSet};
use crate::evaluation::MetricTable;
use crate::hho::{Bounds, Hawk, HhoConfig};
use crate::linalg::Matrix;
use crate::mohho::{mohho_optimize, MohhoConfig};
use crate::rng::{derive_seed, seeded};
use crate::{Error, Result, Scalar};

/// Lagged design matrix: row `t` is `(y[t−p], …, y[t−1])`, target `y[t]`.
pub fn embed_lags<T: Scalar>(series: &[T], p: usize) -> Result<SupervisedSet<T>> {
    if p == 0 {
        return Err(Error::InvalidConfig("lag order must be positive".into()));
    }
    if series.len() <= p {
        return Err(Error::TooShort { len: series.len(), min: p + 1 });
    }
    embed_targets(series, p, p..series.len(), None)
}

/// Rows whose targets are the indices in `targets` (each at least `p`).
fn embed_targets<T: Scalar>(
    series: &[T],
    p: usize,
    targets: Range<usize>,
    tracker: Option<&IndexTracker>,
) -> Result<SupervisedSet<T>> {
    debug_assert!(targets.start >= p && targets.end <= series.len());
    if let Some(tr) = tracker {
        tr.record(targets.start - p..targets.end);
    }
    let rows: Vec<&[T]> = targets.clone().map(|t| &series[t - p..t]).collect();
    let inputs = if rows.is_empty() { Matrix::zeros(0, p) } else { Matrix::from_rows(&rows)? };
    SupervisedSet::new(inputs, Matrix::column(&series[targets]))
}

/// Chronological split at `round(len·train_fraction)`.
pub fn split<T: Clone>(series: &[T], train_fraction: f64) -> Result<(Vec<T>, Vec<T>)> {
    let cut = split_point(series.len(), train_fraction)?;
    Ok((series[..cut].to_vec(), series[cut..].to_vec()))
}

fn split_point(len: usize, fraction: f64) -> Result<usize> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidConfig("split fraction must lie in (0, 1)".into()));
    }
    let cut = (len as f64 * fraction).round() as usize;
    if cut == 0 || cut >= len {
        return Err(Error::TooShort { len, min: 2 });
    }
    Ok(cut)
}

/// Accuracy and stability of an ELM with hidden layer `params`:
/// `[RMSE, std(|e|)]` on `validation` after fitting `β` on `fit`.
pub fn objective_pair<T: Scalar>(
    params: &[T],
    hidden: usize,
    activation: Activation,
    fit: &SupervisedSet<T>,
    validation: &SupervisedSet<T>,
) -> Result<[T; 2]> {
    let lags = fit.inputs().cols();
    let mut model = ElmModel::from_parameters(params, hidden, lags, activation)?;
    model.fit(fit)?;
    let predicted = model.predict_column(validation.inputs())?;
    let actual = validation.targets().col_to_vec(0);
    Ok(accuracy_stability(&actual, &predicted))
}

/// `[RMSE, population std of |errors|]`.
pub fn accuracy_stability<T: Scalar>(actual: &[T], predicted: &[T]) -> [T; 2] {
    let abs: Vec<T> = actual.iter().zip(predicted).map(|(&a, &p)| (p - a).abs()).collect();
    let n = T::from_usize_lossy(abs.len().max(1));
    let rmse = (abs.iter().map(|&e| e * e).sum::<T>() / n).sqrt();
    let mean = abs.iter().copied().sum::<T>() / n;
    let std = (abs.iter().map(|&e| (e - mean) * (e - mean)).sum::<T>() / n).sqrt();
    [rmse, std]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PickRule {
    #[default]
    MinF1,
    Knee,
}

impl FromStr for PickRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min_f1" => Ok(PickRule::MinF1),
            "knee" => Ok(PickRule::Knee),
            _ => Err(Error::InvalidConfig(format!("unknown archive pick rule `{s}`"))),
        }
    }
}

/// Chooses the final model from a two-objective archive.
///
/// `Knee` takes the member farthest from the chord between the two extreme
/// members; with fewer than three members it falls back to `MinF1`.
pub fn pick_from_archive<T: Scalar>(entries: &[Hawk<T>], rule: PickRule) -> Result<&Hawk<T>> {
    let by = |k: usize| {
        move |a: &&Hawk<T>, b: &&Hawk<T>| {
            a.objectives[k]
                .partial_cmp(&b.objectives[k])
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| a.objectives[1 - k].partial_cmp(&b.objectives[1 - k]).unwrap_or(std::cmp::Ordering::Equal))
        }
    };
    let min_f1 = entries.iter().min_by(by(0)).ok_or(Error::EmptyArchive)?;
    if rule == PickRule::MinF1 || entries.len() < 3 {
        return Ok(min_f1);
    }
    let min_f2 = entries.iter().min_by(by(1)).expect("nonempty");
    let (a, b) = (&min_f1.objectives, &min_f2.objectives);
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let norm = (dx * dx + dy * dy).sqrt();
    if norm == T::zero() {
        return Ok(min_f1);
    }
    let distance = |h: &Hawk<T>| ((h.objectives[0] - a[0]) * dy - (h.objectives[1] - a[1]) * dx).abs() / norm;
    let mut best = min_f1;
    let mut best_d = T::neg_infinity();
    for h in entries {
        let d = distance(h);
        if d > best_d {
            best = h;
            best_d = d;
        }
    }
    Ok(best)
}

/// Which decomposition, if any, feeds the per-component models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decomposer {
    None,
    #[serde(untagged)]
    Method(Method),
}

impl Decomposer {
    pub fn name(self) -> &'static str {
        match self {
            Decomposer::None => "none",
            Decomposer::Method(m) => m.name(),
        }
    }
}

impl FromStr for Decomposer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("none") {
            Ok(Decomposer::None)
        } else {
            s.parse().map(Decomposer::Method)
        }
    }
}

/// How the hidden layer is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tuning {
    #[default]
    Mohho,
    /// A single random hidden layer, as in a plain ELM.
    Random,
}

impl FromStr for Tuning {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mohho" => Ok(Tuning::Mohho),
            "random" => Ok(Tuning::Random),
            _ => Err(Error::InvalidConfig(format!("unknown tuning `{s}`"))),
        }
    }
}

/// Where the decomposition may look.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// Decompose the whole series once, then split the components. Test-span
    /// inputs then depend on later observations through the sifting.
    #[default]
    FullSeries,
    /// Decompose the training portion for fitting, and for each test step
    /// decompose only the observations before it.
    ExpandingWindow,
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full_series" => Ok(Boundary::FullSeries),
            "expanding_window" => Ok(Boundary::ExpandingWindow),
            _ => Err(Error::InvalidConfig(format!("unknown decomposition boundary `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerSettings {
    pub population: usize,
    pub iterations: usize,
    pub archive_capacity: usize,
    pub grid_divisions: usize,
    pub crowding: f64,
    /// Half-width of the search box for every weight and bias.
    pub search_radius: f64,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self { population: 40, iterations: 100, archive_capacity: 100, grid_divisions: 10, crowding: 2.0, search_radius: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub decomposer: Decomposer,
    pub tuning: Tuning,
    pub lag_order: usize,
    pub train_fraction: f64,
    /// Share of the training portion held out for the objectives.
    pub validation_fraction: f64,
    pub elm_hidden: usize,
    pub activation: Activation,
    pub optimizer: OptimizerSettings,
    pub archive_pick: PickRule,
    pub boundary: Boundary,
    pub ensemble: EnsembleConfig,
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            decomposer: Decomposer::Method(Method::Iceemdan),
            tuning: Tuning::Mohho,
            lag_order: 6,
            train_fraction: 0.8,
            validation_fraction: 0.2,
            elm_hidden: 20,
            activation: Activation::Sigmoid,
            optimizer: OptimizerSettings::default(),
            archive_pick: PickRule::MinF1,
            boundary: Boundary::FullSeries,
            ensemble: EnsembleConfig::default(),
            seed: 0,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.into()));
        if self.lag_order == 0 {
            return bad("lag_order must be positive");
        }
        if self.elm_hidden == 0 {
            return bad("elm_hidden must be positive");
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return bad("train_fraction must lie in (0, 1)");
        }
        if !(self.validation_fraction > 0.0 && self.validation_fraction < self.train_fraction) {
            return bad("validation_fraction must lie in (0, train_fraction)");
        }
        if !(self.optimizer.search_radius > 0.0) {
            return bad("search_radius must be positive");
        }
        if self.tuning == Tuning::Mohho {
            self.mohho_config(0)?.validate()?;
        }
        if self.decomposer != Decomposer::None {
            self.ensemble.validate()?;
        }
        Ok(())
    }

    /// Display name in the `ICEEMDAN-MOHHO-ELM` style.
    pub fn model_name(&self) -> String {
        let mut parts = Vec::new();
        if let Decomposer::Method(m) = self.decomposer {
            parts.push(m.label());
        }
        if self.tuning == Tuning::Mohho {
            parts.push("MOHHO");
        }
        parts.push("ELM");
        parts.join("-")
    }

    fn mohho_config(&self, seed: u64) -> Result<MohhoConfig<f64>> {
        let dim = parameter_count(self.elm_hidden, self.lag_order);
        let r = self.optimizer.search_radius;
        let base = HhoConfig::new(self.optimizer.population, self.optimizer.iterations, Bounds::uniform(dim, -r, r)?, seed)?;
        Ok(MohhoConfig {
            base,
            archive_capacity: self.optimizer.archive_capacity,
            grid_divisions: self.optimizer.grid_divisions,
            crowding: self.optimizer.crowding,
        })
    }
}

/// Records which series indices the fitting stages read.
#[derive(Debug, Default)]
pub struct IndexTracker {
    reads: Mutex<BTreeSet<usize>>,
}

impl IndexTracker {
    fn record(&self, range: Range<usize>) {
        self.reads.lock().expect("tracker lock").extend(range);
    }

    pub fn indices(&self) -> BTreeSet<usize> {
        self.reads.lock().expect("tracker lock").clone()
    }
}

/// Boundaries of the three chronological segments (target indices).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Segments {
    pub fit: Range<usize>,
    pub validation: Range<usize>,
    pub test: Range<usize>,
}

impl Segments {
    fn new(len: usize, cfg: &PipelineConfig) -> Result<Self> {
        let p = cfg.lag_order;
        let train_end = split_point(len, cfg.train_fraction)?;
        let held_out = ((train_end as f64) * cfg.validation_fraction).round() as usize;
        let fit_end = train_end.saturating_sub(held_out);
        if fit_end < p + 2 || held_out < 2 || len - train_end < 2 {
            return Err(Error::InvalidConfig(format!(
                "series of {len} points is too short for lag order {p} with this split"
            )));
        }
        Ok(Self { fit: p..fit_end, validation: fit_end..train_end, test: train_end..len })
    }
}

/// Min-max scaling fitted on one range of a component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
struct Scaler {
    offset: f64,
    scale: f64,
}

impl Scaler {
    fn fit(values: &[f64]) -> Self {
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let scale = if hi > lo { hi - lo } else { 1.0 };
        Self { offset: lo, scale }
    }

    fn forward(&self, v: f64) -> f64 {
        (v - self.offset) / self.scale
    }

    fn inverse(&self, v: f64) -> f64 {
        v * self.scale + self.offset
    }
}

/// What was chosen for one component.
#[derive(Debug, Clone, Serialize)]
pub struct ComponentReport {
    pub name: String,
    /// `[validation RMSE, std |error|]` of the chosen parameters (normalized units).
    pub objectives: [f64; 2],
    /// Archive objective vectors after each iteration (empty for random tuning).
    pub snapshots: Vec<Vec<Vec<f64>>>,
    #[serde(skip)]
    pub model: ElmModel<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ForecastRun {
    pub model_name: String,
    pub segments: Segments,
    pub actual: Vec<f64>,
    /// Test-span forecasts per component (modes then residual).
    pub component_predictions: Vec<Vec<f64>>,
    pub prediction: Vec<f64>,
    pub metrics: MetricTable<f64>,
    pub components: Vec<ComponentReport>,
    /// Every series index read while tuning and fitting.
    #[serde(skip)]
    pub fit_reads: BTreeSet<usize>,
}

impl ForecastRun {
    pub fn errors(&self) -> Vec<f64> {
        self.prediction.iter().zip(&self.actual).map(|(p, a)| p - a).collect()
    }
}

fn component_names(count: usize) -> Vec<String> {
    (0..count).map(|i| if i + 1 == count { "residual".to_string() } else { format!("mode{}", i + 1) }).collect()
}

fn decompose(signal: &[f64], method: Method, ensemble: &EnsembleConfig) -> Result<Vec<Vec<f64>>> {
    let set: ModeSet<f64> = method.decompose(signal, ensemble)?;
    let mut parts = set.modes;
    parts.push(set.residual);
    Ok(parts)
}

/// Forces `parts` to exactly `count` components: missing ones are zero,
/// surplus ones are folded into the last.
fn conform(mut parts: Vec<Vec<f64>>, count: usize, len: usize) -> Vec<Vec<f64>> {
    while parts.len() > count {
        let extra = parts.pop().expect("nonempty");
        for (a, b) in parts.last_mut().expect("count >= 1").iter_mut().zip(extra) {
            *a += b;
        }
    }
    while parts.len() < count {
        parts.insert(parts.len() - 1, vec![0.0; len]);
    }
    parts
}

/// Runs the full forecasting pipeline on `series`.
pub fn run_forecast(series: &[f64], config: &PipelineConfig) -> Result<ForecastRun> {
    config.validate()?;
    if let Some(index) = series.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    let segments = Segments::new(series.len(), config)?;
    let train_end = segments.test.start;
    let p = config.lag_order;

    // Components whose training part (and, for the full-series boundary, test
    // part) is known before any optimization starts.
    let components: Vec<Vec<f64>> = match (config.decomposer, config.boundary) {
        (Decomposer::None, _) => vec![series.to_vec()],
        (Decomposer::Method(m), Boundary::FullSeries) => decompose(series, m, &config.ensemble)?,
        (Decomposer::Method(m), Boundary::ExpandingWindow) => decompose(&series[..train_end], m, &config.ensemble)?,
    };
    let names = if config.decomposer == Decomposer::None { vec!["series".to_string()] } else { component_names(components.len()) };

    let tracker = IndexTracker::default();
    let mut reports = Vec::with_capacity(components.len());
    let mut scalers = Vec::with_capacity(components.len());
    for (k, component) in components.iter().enumerate() {
        let scaler = Scaler::fit(&component[..train_end]);
        let normalized: Vec<f64> = component[..train_end].iter().map(|&v| scaler.forward(v)).collect();
        tracker.record(0..train_end);
        let fit = embed_targets(&normalized, p, segments.fit.clone(), Some(&tracker))?;
        let validation = embed_targets(&normalized, p, segments.validation.clone(), Some(&tracker))?;
        let seed = derive_seed(config.seed, k as u64);
        let (params, objectives, snapshots) = tune(config, &fit, &validation, seed)?;
        let all = embed_targets(&normalized, p, segments.fit.start..train_end, Some(&tracker))?;
        let mut model = ElmModel::from_parameters(&params, config.elm_hidden, p, config.activation)?;
        model.fit(&all)?;
        reports.push(ComponentReport { name: names[k].clone(), objectives, snapshots, model });
        scalers.push(scaler);
    }

    // Lag inputs for each test step, per component, in original units.
    let count = components.len();
    let test_inputs: Vec<Vec<Vec<f64>>> = match (config.decomposer, config.boundary) {
        (Decomposer::Method(m), Boundary::ExpandingWindow) => {
            let mut per_component = vec![Vec::with_capacity(segments.test.len()); count];
            for t in segments.test.clone() {
                let window = conform(decompose(&series[..t], m, &config.ensemble)?, count, t);
                for (slot, part) in per_component.iter_mut().zip(window) {
                    slot.push(part[t - p..t].to_vec());
                }
            }
            per_component
        }
        _ => components.iter().map(|c| segments.test.clone().map(|t| c[t - p..t].to_vec()).collect()).collect(),
    };

    let mut component_predictions = Vec::with_capacity(count);
    for ((report, scaler), rows) in reports.iter().zip(&scalers).zip(&test_inputs) {
        let scaled: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|&v| scaler.forward(v)).collect()).collect();
        let out = report.model.predict_column(&Matrix::from_rows(&scaled)?)?;
        component_predictions.push(out.into_iter().map(|v| scaler.inverse(v)).collect::<Vec<f64>>());
    }
    let mut prediction = vec![0.0; segments.test.len()];
    for part in &component_predictions {
        for (acc, v) in prediction.iter_mut().zip(part) {
            *acc += v;
        }
    }
    let actual = series[segments.test.clone()].to_vec();
    let metrics = MetricTable::from_slices(&actual, &prediction)?;
    Ok(ForecastRun {
        model_name: config.model_name(),
        segments,
        actual,
        component_predictions,
        prediction,
        metrics,
        components: reports,
        fit_reads: tracker.indices(),
    })
}

type Tuned = (Vec<f64>, [f64; 2], Vec<Vec<Vec<f64>>>);

fn tune(config: &PipelineConfig, fit: &SupervisedSet<f64>, validation: &SupervisedSet<f64>, seed: u64) -> Result<Tuned> {
    let hidden = config.elm_hidden;
    let activation = config.activation;
    let score = |params: &[f64]| {
        objective_pair(params, hidden, activation, fit, validation).unwrap_or([f64::INFINITY, f64::INFINITY])
    };
    match config.tuning {
        Tuning::Random => {
            let model = ElmModel::<f64>::random(hidden, config.lag_order, activation, &mut seeded(seed))?;
            let params = model.encode_parameters();
            let objectives = score(&params);
            Ok((params, objectives, Vec::new()))
        }
        Tuning::Mohho => {
            let result = mohho_optimize(|x: &[f64]| score(x).to_vec(), &config.mohho_config(seed)?)?;
            let chosen = pick_from_archive(result.archive.entries(), config.archive_pick)?;
            let objectives = [chosen.objectives[0], chosen.objectives[1]];
            Ok((chosen.position.clone(), objectives, result.snapshots))
        }
    }
}
