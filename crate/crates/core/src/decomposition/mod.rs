//! Empirical mode decomposition and its noise-assisted descendants.
//!
//! Every decomposer turns a series into a [`ModeSet`]: intrinsic mode
//! functions ordered from highest to lowest frequency plus a final residual.
//! The modes and residual always sum back to the input; for the complete
//! ensemble variants this holds to rounding error, for EEMD up to the
//! un-cancelled average of the added noise.
//!
//! Envelopes are natural cubic splines through the local extrema, extended by
//! mirroring the two nearest extrema across each boundary. Sifting uses a
//! Cauchy-type stop rule.

mod emd;
mod ensemble;
mod spline;

pub use emd::{emd, local_mean, sift_imf};
pub use ensemble::{ceemd, ceemdan, eemd, iceemdan};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, Scalar};

/// Shortest series the sifting machinery accepts.
pub const MIN_SIGNAL_LEN: usize = 8;

/// Ordered real observations with optional calendar dates.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries<T> {
    values: Vec<T>,
    timestamps: Option<Vec<NaiveDate>>,
}

impl<T: Scalar> TimeSeries<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        check_finite(&values)?;
        Ok(Self { values, timestamps: None })
    }

    pub fn with_timestamps(values: Vec<T>, timestamps: Vec<NaiveDate>) -> Result<Self> {
        check_finite(&values)?;
        if timestamps.len() != values.len() {
            return Err(Error::LengthMismatch { expected: values.len(), found: timestamps.len() });
        }
        if timestamps.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig("timestamps must be strictly increasing".into()));
        }
        Ok(Self { values, timestamps: Some(timestamps) })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn timestamps(&self) -> Option<&[NaiveDate]> {
        self.timestamps.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn check_finite<T: Scalar>(values: &[T]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

pub(crate) fn validate_signal<T: Scalar>(signal: &[T]) -> Result<()> {
    if signal.len() < MIN_SIGNAL_LEN {
        return Err(Error::TooShort { len: signal.len(), min: MIN_SIGNAL_LEN });
    }
    check_finite(signal)
}

/// Modes (highest frequency first) plus residual.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeSet<T> {
    pub modes: Vec<Vec<T>>,
    pub residual: Vec<T>,
    pub source_length: usize,
}

impl<T: Scalar> ModeSet<T> {
    /// Number of modes, excluding the residual.
    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    /// Modes followed by the residual.
    pub fn components(&self) -> impl Iterator<Item = &[T]> {
        self.modes.iter().map(Vec::as_slice).chain(std::iter::once(self.residual.as_slice()))
    }

    /// Elementwise sum of all modes and the residual.
    pub fn reconstruct(&self) -> Result<Vec<T>> {
        let len = self.source_length;
        let mut out = vec![T::zero(); len];
        for component in self.components() {
            if component.len() != len {
                return Err(Error::LengthMismatch { expected: len, found: component.len() });
            }
            for (o, &v) in out.iter_mut().zip(component) {
                *o += v;
            }
        }
        Ok(out)
    }
}

/// Free-function form of [`ModeSet::reconstruct`].
pub fn reconstruct<T: Scalar>(modes: &ModeSet<T>) -> Result<Vec<T>> {
    modes.reconstruct()
}

/// Sifting and ensemble parameters shared by all decomposers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    /// Number of noise realizations (pairs, for CEEMD).
    pub realizations: usize,
    /// Noise standard deviation as a fraction of the signal's.
    pub noise_amplitude: f64,
    pub max_sift_iterations: usize,
    pub sift_stop_threshold: f64,
    pub max_modes: Option<usize>,
    pub seed: u64,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self {
            realizations: 100,
            noise_amplitude: 0.2,
            max_sift_iterations: 100,
            sift_stop_threshold: 0.2,
            max_modes: None,
            seed: 0,
        }
    }
}

impl EnsembleConfig {
    /// Default sifting parameters with the given ensemble size and noise level.
    pub fn new(realizations: usize, noise_amplitude: f64, seed: u64) -> Result<Self> {
        let cfg = Self { realizations, noise_amplitude, seed, ..Self::default() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.realizations == 0 {
            return Err(Error::InvalidConfig("realizations must be at least 1".into()));
        }
        if !(self.noise_amplitude > 0.0 && self.noise_amplitude < 1.0) {
            return Err(Error::InvalidConfig("noise_amplitude must lie in (0, 1)".into()));
        }
        if self.max_sift_iterations == 0 {
            return Err(Error::InvalidConfig("max_sift_iterations must be at least 1".into()));
        }
        if !(self.sift_stop_threshold > 0.0) {
            return Err(Error::InvalidConfig("sift_stop_threshold must be positive".into()));
        }
        if self.max_modes == Some(0) {
            return Err(Error::InvalidConfig("max_modes must be positive".into()));
        }
        Ok(())
    }

    pub(crate) fn without_mode_limit(&self) -> Self {
        Self { max_modes: None, ..self.clone() }
    }
}

/// Selector over the available decomposition methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Emd,
    Eemd,
    Ceemd,
    Ceemdan,
    Iceemdan,
}

impl Method {
    pub const ALL: [Method; 5] =
        [Method::Emd, Method::Eemd, Method::Ceemd, Method::Ceemdan, Method::Iceemdan];

    pub fn decompose<T: Scalar>(self, signal: &[T], config: &EnsembleConfig) -> Result<ModeSet<T>> {
        match self {
            Method::Emd => emd(signal, config),
            Method::Eemd => eemd(signal, config),
            Method::Ceemd => ceemd(signal, config),
            Method::Ceemdan => ceemdan(signal, config),
            Method::Iceemdan => iceemdan(signal, config),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Emd => "emd",
            Method::Eemd => "eemd",
            Method::Ceemd => "ceemd",
            Method::Ceemdan => "ceemdan",
            Method::Iceemdan => "iceemdan",
        }
    }

    /// Upper-case label used in model names, e.g. `ICEEMDAN`.
    pub fn label(self) -> &'static str {
        match self {
            Method::Emd => "EMD",
            Method::Eemd => "EEMD",
            Method::Ceemd => "CEEMD",
            Method::Ceemdan => "CEEMDAN",
            Method::Iceemdan => "ICEEMDAN",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown decomposition method `{s}`")))
    }
}
