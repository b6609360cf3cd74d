//! Decomposition-ensemble forecasting with a multi-objective Harris hawks
//! tuned extreme learning machine.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases at the
//! crate root fix it to `f64`.

pub mod benchmarks;
pub mod decomposition;
pub mod elm;
pub mod error;
pub mod evaluation;
pub mod hho;
pub mod linalg;
pub mod mohho;
pub mod pipeline;
pub mod rng;
pub mod scalar;
pub mod synthetic;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type TimeSeries = decomposition::TimeSeries<f64>;
pub type ModeSet = decomposition::ModeSet<f64>;
pub type Matrix = linalg::Matrix<f64>;
pub type ElmModel = elm::ElmModel<f64>;
pub type SupervisedSet = elm::SupervisedSet<f64>;
pub type Bounds = hho::Bounds<f64>;
pub type Hawk = hho::Hawk<f64>;
pub type HhoConfig = hho::HhoConfig<f64>;
pub type MohhoConfig = mohho::MohhoConfig<f64>;
pub type ParetoArchive = mohho::ParetoArchive<f64>;
pub type MetricTable = evaluation::MetricTable<f64>;
