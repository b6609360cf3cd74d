//! Forecast accuracy criteria, improvement percentages, the Diebold-Mariano
//! test and a variance-ratio stability score.

use serde::Serialize;

use crate::{Error, Result, Scalar};

/// Actual and predicted values of equal length (at least two, all finite).
#[derive(Debug, Clone, PartialEq)]
pub struct ForecastPair<'a, T> {
    actual: &'a [T],
    predicted: &'a [T],
}

impl<'a, T: Scalar> ForecastPair<'a, T> {
    pub fn new(actual: &'a [T], predicted: &'a [T]) -> Result<Self> {
        if actual.len() != predicted.len() {
            return Err(Error::LengthMismatch { expected: actual.len(), found: predicted.len() });
        }
        if actual.len() < 2 {
            return Err(Error::TooShort { len: actual.len(), min: 2 });
        }
        if let Some(index) = actual.iter().chain(predicted).position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index: index % actual.len() });
        }
        Ok(Self { actual, predicted })
    }

    pub fn actual(&self) -> &[T] {
        self.actual
    }

    pub fn predicted(&self) -> &[T] {
        self.predicted
    }

    pub fn len(&self) -> usize {
        self.actual.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actual.is_empty()
    }

    fn n(&self) -> T {
        T::from_usize_lossy(self.len())
    }

    fn errors(&self) -> impl Iterator<Item = T> + '_ {
        self.predicted.iter().zip(self.actual).map(|(&p, &a)| p - a)
    }
}

fn mean<T: Scalar>(x: &[T]) -> T {
    x.iter().copied().sum::<T>() / T::from_usize_lossy(x.len())
}

fn check_nonzero<T: Scalar>(actual: &[T]) -> Result<()> {
    match actual.iter().position(|&a| a == T::zero()) {
        Some(index) => Err(Error::ZeroActual { index }),
        None => Ok(()),
    }
}

pub fn mae<T: Scalar>(pair: &ForecastPair<T>) -> T {
    pair.errors().map(|e| e.abs()).sum::<T>() / pair.n()
}

pub fn rmse<T: Scalar>(pair: &ForecastPair<T>) -> T {
    (pair.errors().map(|e| e * e).sum::<T>() / pair.n()).sqrt()
}

/// Mean absolute percentage error, in percent.
pub fn mape<T: Scalar>(pair: &ForecastPair<T>) -> Result<T> {
    check_nonzero(pair.actual)?;
    let sum: T = pair.errors().zip(pair.actual).map(|(e, &a)| (e / a).abs()).sum();
    Ok(T::lit(100.0) * sum / pair.n())
}

/// Willmott's index of agreement.
pub fn ia<T: Scalar>(pair: &ForecastPair<T>) -> Result<T> {
    let a_bar = mean(pair.actual);
    let num: T = pair.errors().map(|e| e * e).sum();
    let den: T = pair
        .predicted
        .iter()
        .zip(pair.actual)
        .map(|(&p, &a)| {
            let s = (p - a_bar).abs() + (a - a_bar).abs();
            s * s
        })
        .sum();
    if den == T::zero() {
        return Err(Error::DegenerateDenominator("index of agreement"));
    }
    Ok(T::one() - num / den)
}

/// Theil's U1: `RMSE / (√mean(A²) + √mean(P²))`.
pub fn u1<T: Scalar>(pair: &ForecastPair<T>) -> Result<T> {
    let n = pair.n();
    let ra = (pair.actual.iter().map(|&a| a * a).sum::<T>() / n).sqrt();
    let rp = (pair.predicted.iter().map(|&p| p * p).sum::<T>() / n).sqrt();
    if ra + rp == T::zero() {
        return Err(Error::DegenerateDenominator("U1"));
    }
    Ok(rmse(pair) / (ra + rp))
}

/// Theil's U2: relative forecast errors against those of the no-change forecast.
pub fn u2<T: Scalar>(pair: &ForecastPair<T>) -> Result<T> {
    let (a, p) = (pair.actual, pair.predicted);
    check_nonzero(&a[..a.len() - 1])?;
    let mut num = T::zero();
    let mut den = T::zero();
    for l in 0..a.len() - 1 {
        let f = (p[l + 1] - a[l + 1]) / a[l];
        let naive = (a[l + 1] - a[l]) / a[l];
        num += f * f;
        den += naive * naive;
    }
    if den == T::zero() {
        return Err(Error::DegenerateDenominator("U2"));
    }
    Ok(num.sqrt() / den.sqrt())
}

/// Pearson correlation between predicted and actual.
pub fn pearson_r<T: Scalar>(pair: &ForecastPair<T>) -> Result<T> {
    let (ma, mp) = (mean(pair.actual), mean(pair.predicted));
    let mut cov = T::zero();
    let mut va = T::zero();
    let mut vp = T::zero();
    for (&a, &p) in pair.actual.iter().zip(pair.predicted) {
        cov += (a - ma) * (p - mp);
        va += (a - ma) * (a - ma);
        vp += (p - mp) * (p - mp);
    }
    if va == T::zero() || vp == T::zero() {
        return Err(Error::DegenerateVariance);
    }
    Ok(cov / (va * vp).sqrt())
}

/// The seven criteria, in report column order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricTable<T = f64> {
    #[serde(rename = "MAE")]
    pub mae: T,
    #[serde(rename = "RMSE")]
    pub rmse: T,
    #[serde(rename = "MAPE")]
    pub mape: T,
    #[serde(rename = "IA")]
    pub ia: T,
    #[serde(rename = "U1")]
    pub u1: T,
    #[serde(rename = "U2")]
    pub u2: T,
    pub r: T,
}

impl<T: Scalar> MetricTable<T> {
    pub const COLUMNS: [&'static str; 7] = ["MAE", "RMSE", "MAPE", "IA", "U1", "U2", "r"];

    pub fn compute(pair: &ForecastPair<T>) -> Result<Self> {
        Ok(Self {
            mae: mae(pair),
            rmse: rmse(pair),
            mape: mape(pair)?,
            ia: ia(pair)?,
            u1: u1(pair)?,
            u2: u2(pair)?,
            r: pearson_r(pair)?,
        })
    }

    pub fn from_slices(actual: &[T], predicted: &[T]) -> Result<Self> {
        Self::compute(&ForecastPair::new(actual, predicted)?)
    }

    pub fn values(&self) -> [T; 7] {
        [self.mae, self.rmse, self.mape, self.ia, self.u1, self.u2, self.r]
    }

    pub fn from_values(v: [T; 7]) -> Self {
        Self { mae: v[0], rmse: v[1], mape: v[2], ia: v[3], u1: v[4], u2: v[5], r: v[6] }
    }
}

/// `|(baseline − improved) / baseline|·100`.
pub fn improvement_percentage<T: Scalar>(baseline: T, improved: T) -> Option<T> {
    (baseline != T::zero()).then(|| ((baseline - improved) / baseline).abs() * T::lit(100.0))
}

/// Per-metric improvement of `improved` over `baseline`, in percent.
pub fn improvement_percentages<T: Scalar>(baseline: &MetricTable<T>, improved: &MetricTable<T>) -> Result<MetricTable<T>> {
    let b = baseline.values();
    let i = improved.values();
    let mut out = [T::zero(); 7];
    for k in 0..7 {
        out[k] = improvement_percentage(b[k], i[k]).ok_or(Error::ZeroBaseline(MetricTable::<T>::COLUMNS[k]))?;
    }
    Ok(MetricTable::from_values(out))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Loss {
    Absolute,
    #[default]
    Squared,
}

impl Loss {
    fn apply<T: Scalar>(self, e: T) -> T {
        match self {
            Loss::Absolute => e.abs(),
            Loss::Squared => e * e,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Significance {
    NotSignificant,
    TenPercent,
    FivePercent,
    OnePercent,
}

impl Significance {
    /// Two-sided critical values at 1%, 5% and 10%.
    pub const Z_001: f64 = 2.58;
    pub const Z_005: f64 = 1.96;
    pub const Z_010: f64 = 1.64;

    pub fn of(statistic: f64) -> Self {
        let z = statistic.abs();
        if z > Self::Z_001 {
            Significance::OnePercent
        } else if z > Self::Z_005 {
            Significance::FivePercent
        } else if z > Self::Z_010 {
            Significance::TenPercent
        } else {
            Significance::NotSignificant
        }
    }

    /// True when significant at the 10% level or better.
    pub fn at_ten_percent(self) -> bool {
        self >= Significance::TenPercent
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DmResult {
    pub statistic: f64,
    pub p_value: f64,
    pub significance: Significance,
}

/// Diebold-Mariano test on one-step-ahead errors.
///
/// `d = loss(a) − loss(b)`; the statistic is `mean(d) / √(γ0 / L)` with
/// `γ0 = (1/L)·Σ(d − d̄)²`. Positive values mean `a` has the larger loss.
pub fn dm_test<T: Scalar>(errors_a: &[T], errors_b: &[T], loss: Loss) -> Result<DmResult> {
    if errors_a.len() != errors_b.len() {
        return Err(Error::LengthMismatch { expected: errors_a.len(), found: errors_b.len() });
    }
    if errors_a.len() < 2 {
        return Err(Error::TooShort { len: errors_a.len(), min: 2 });
    }
    let d: Vec<f64> =
        errors_a.iter().zip(errors_b).map(|(&a, &b)| (loss.apply(a) - loss.apply(b)).to_f64_lossy()).collect();
    let n = d.len() as f64;
    let d_bar = d.iter().sum::<f64>() / n;
    let gamma0 = d.iter().map(|v| (v - d_bar).powi(2)).sum::<f64>() / n;
    if !(gamma0 > 0.0) {
        return Err(Error::ZeroVariance);
    }
    let statistic = d_bar / (gamma0 / n).sqrt();
    let p_value = libm::erfc(statistic.abs() / std::f64::consts::SQRT_2);
    Ok(DmResult { statistic, p_value, significance: Significance::of(statistic) })
}

/// `min(Var P, Var A) / max(Var P, Var A)`.
pub fn variance_ratio<T: Scalar>(pair: &ForecastPair<T>) -> Result<T> {
    let var = |x: &[T]| {
        let m = mean(x);
        x.iter().map(|&v| (v - m) * (v - m)).sum::<T>() / T::from_usize_lossy(x.len())
    };
    let (va, vp) = (var(pair.actual), var(pair.predicted));
    if va == T::zero() {
        return Err(Error::DegenerateVariance);
    }
    Ok(va.min(vp) / va.max(vp))
}

/// One model's forecast to be compared against the proposed model.
#[derive(Debug, Clone, Serialize)]
pub struct ModelReport {
    pub name: String,
    pub metrics: MetricTable<f64>,
    pub variance_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRow {
    pub baseline: String,
    pub improvement: MetricTable<f64>,
    pub dm: Option<DmResult>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvaluationReport {
    pub proposed: String,
    pub models: Vec<ModelReport>,
    pub comparisons: Vec<ComparisonRow>,
}

impl EvaluationReport {
    /// Scores every forecast in `models` against `actual` and compares the
    /// one named `proposed` with each of the others.
    pub fn build(actual: &[f64], models: &[(String, Vec<f64>)], proposed: &str, loss: Loss) -> Result<Self> {
        let mut reports = Vec::with_capacity(models.len());
        for (name, predicted) in models {
            let pair = ForecastPair::new(actual, predicted)?;
            reports.push(ModelReport {
                name: name.clone(),
                metrics: MetricTable::compute(&pair)?,
                variance_ratio: variance_ratio(&pair)?,
            });
        }
        let idx = models
            .iter()
            .position(|(n, _)| n == proposed)
            .ok_or_else(|| Error::InvalidConfig(format!("no model named `{proposed}`")))?;
        let errors = |p: &[f64]| -> Vec<f64> { p.iter().zip(actual).map(|(p, a)| p - a).collect() };
        let proposed_errors = errors(&models[idx].1);
        let mut comparisons = Vec::new();
        for (k, (name, predicted)) in models.iter().enumerate() {
            if k == idx {
                continue;
            }
            comparisons.push(ComparisonRow {
                baseline: name.clone(),
                improvement: improvement_percentages(&reports[k].metrics, &reports[idx].metrics)?,
                // Loss of the baseline minus loss of the proposed model.
                dm: dm_test(&errors(predicted), &proposed_errors, loss).ok(),
            });
        }
        Ok(Self { proposed: proposed.to_string(), models: reports, comparisons })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair<'a>(a: &'a [f64], p: &'a [f64]) -> ForecastPair<'a, f64> {
        ForecastPair::new(a, p).unwrap()
    }

    #[test]
    fn hand_case() {
        let p = pair(&[100.0, 200.0], &[110.0, 180.0]);
        assert_eq!(mae(&p), 15.0);
        assert!((rmse(&p) - 250f64.sqrt()).abs() < 1e-12);
        assert!((mape(&p).unwrap() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn perfect_forecast() {
        let a = [1.0, 3.0, 2.0, 5.0];
        let p = pair(&a, &a);
        let m = MetricTable::compute(&p).unwrap();
        assert_eq!((m.mae, m.rmse, m.mape, m.ia, m.u1, m.u2), (0.0, 0.0, 0.0, 1.0, 0.0, 0.0));
        assert!((m.r - 1.0).abs() < 1e-12);
        assert_eq!(variance_ratio(&p).unwrap(), 1.0);
    }

    #[test]
    fn naive_forecast_has_unit_u2() {
        let a = [3.0, 5.0, 4.0, 8.0, 7.0];
        let naive = [3.0, 3.0, 5.0, 4.0, 8.0];
        assert!((u2(&pair(&a, &naive)).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pearson_cases() {
        assert!((pearson_r(&pair(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0])).unwrap() - 1.0).abs() < 1e-15);
        assert!((pearson_r(&pair(&[1.0, 2.0, 3.0], &[-1.0, -2.0, -3.0])).unwrap() + 1.0).abs() < 1e-15);
        assert_eq!(pearson_r(&pair(&[1.0, 2.0], &[1.0, 1.0])), Err(Error::DegenerateVariance));
    }

    #[test]
    fn errors() {
        assert_eq!(mape(&pair(&[0.0, 1.0], &[1.0, 1.0])), Err(Error::ZeroActual { index: 0 }));
        assert_eq!(ia(&pair(&[2.0, 2.0], &[2.0, 2.0])), Err(Error::DegenerateDenominator("index of agreement")));
        assert!(ForecastPair::new(&[1.0, 2.0], &[1.0]).is_err());
        assert_eq!(dm_test(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0], Loss::Squared), Err(Error::ZeroVariance));
        assert_eq!(variance_ratio(&pair(&[1.0, 1.0], &[0.0, 2.0])), Err(Error::DegenerateVariance));
    }

    #[test]
    fn variance_ratio_cases() {
        assert_eq!(variance_ratio(&pair(&[0.0, 2.0], &[1.0, 1.0])).unwrap(), 0.0);
        assert_eq!(variance_ratio(&pair(&[0.0, 4.0], &[0.0, 2.0])).unwrap(), 0.25);
    }

    #[test]
    fn significance_levels() {
        assert_eq!(Significance::of(-3.0), Significance::OnePercent);
        assert_eq!(Significance::of(2.0), Significance::FivePercent);
        assert_eq!(Significance::of(1.7), Significance::TenPercent);
        assert_eq!(Significance::of(1.0), Significance::NotSignificant);
    }

    #[test]
    fn identical_tables_improve_by_zero() {
        let t = MetricTable::from_values([1.0, 2.0, 3.0, 0.5, 0.1, 0.9, 0.8]);
        assert!(improvement_percentages(&t, &t).unwrap().values().iter().all(|&v| v == 0.0));
        let z = MetricTable::from_values([0.0, 2.0, 3.0, 0.5, 0.1, 0.9, 0.8]);
        assert_eq!(improvement_percentages(&z, &t), Err(Error::ZeroBaseline("MAE")));
    }
}
