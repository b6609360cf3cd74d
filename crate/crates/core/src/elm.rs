//! Extreme learning machine regression.
//!
//! A single hidden layer with fixed input weights and biases; only the output
//! weights are fitted, as the minimum-norm least-squares solution `β = H⁺T`.
//! Input weights and biases can be flattened into a parameter vector so an
//! optimizer can search over them.

use std::fmt::Write as _;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::{Svd, Matrix, DEFAULT_RCOND};
use crate::rng::uniform;
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    #[default]
    Sigmoid,
    Tanh,
}

impl Activation {
    pub fn apply<T: Scalar>(self, z: T) -> T {
        match self {
            Activation::Sigmoid => T::one() / (T::one() + (-z).exp()),
            Activation::Tanh => z.tanh(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Activation::Sigmoid => "sigmoid",
            Activation::Tanh => "tanh",
        }
    }
}

impl FromStr for Activation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sigmoid" => Ok(Activation::Sigmoid),
            "tanh" => Ok(Activation::Tanh),
            _ => Err(Error::InvalidConfig(format!("unknown activation `{s}`"))),
        }
    }
}

/// Paired input rows and target rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SupervisedSet<T> {
    inputs: Matrix<T>,
    targets: Matrix<T>,
}

impl<T: Scalar> SupervisedSet<T> {
    pub fn new(inputs: Matrix<T>, targets: Matrix<T>) -> Result<Self> {
        if inputs.rows() != targets.rows() {
            return Err(Error::LengthMismatch { expected: inputs.rows(), found: targets.rows() });
        }
        if let Some(index) = inputs.as_slice().iter().chain(targets.as_slice()).position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { inputs, targets })
    }

    /// Single-output set from input rows and scalar targets.
    pub fn from_rows<R: AsRef<[T]>>(inputs: &[R], targets: &[T]) -> Result<Self> {
        if inputs.is_empty() {
            return Err(Error::DegenerateData);
        }
        Self::new(Matrix::from_rows(inputs)?, Matrix::column(targets))
    }

    pub fn inputs(&self) -> &Matrix<T> {
        &self.inputs
    }

    pub fn targets(&self) -> &Matrix<T> {
        &self.targets
    }

    pub fn len(&self) -> usize {
        self.inputs.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElmModel<T> {
    input_weights: Matrix<T>,
    biases: Vec<T>,
    output_weights: Option<Matrix<T>>,
    activation: Activation,
}

/// Length of the parameter vector for `hidden` neurons and `inputs` features.
pub fn parameter_count(hidden: usize, inputs: usize) -> usize {
    hidden * inputs + hidden
}

/// Flattens input weights (row-major) followed by biases.
pub fn encode_parameters<T: Scalar>(input_weights: &Matrix<T>, biases: &[T]) -> Vec<T> {
    input_weights.as_slice().iter().chain(biases).copied().collect()
}

/// Inverse of [`encode_parameters`].
pub fn decode_parameters<T: Scalar>(params: &[T], hidden: usize, inputs: usize) -> Result<(Matrix<T>, Vec<T>)> {
    let expected = parameter_count(hidden, inputs);
    if params.len() != expected {
        return Err(Error::LengthMismatch { expected, found: params.len() });
    }
    let split = hidden * inputs;
    Ok((Matrix::from_vec(hidden, inputs, params[..split].to_vec())?, params[split..].to_vec()))
}

impl<T: Scalar> ElmModel<T> {
    /// Untrained model with the given `L×n` input weights and `L` biases.
    pub fn new(input_weights: Matrix<T>, biases: Vec<T>, activation: Activation) -> Result<Self> {
        if input_weights.rows() == 0 {
            return Err(Error::InvalidConfig("need at least one hidden neuron".into()));
        }
        if biases.len() != input_weights.rows() {
            return Err(Error::LengthMismatch { expected: input_weights.rows(), found: biases.len() });
        }
        if let Some(index) = input_weights.as_slice().iter().chain(&biases).position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { input_weights, biases, output_weights: None, activation })
    }

    /// Weights and biases drawn uniformly from `[-1, 1)`.
    pub fn random<R: Rng + ?Sized>(hidden: usize, inputs: usize, activation: Activation, rng: &mut R) -> Result<Self> {
        let params: Vec<T> = (0..parameter_count(hidden, inputs))
            .map(|_| T::lit(2.0) * uniform::<T, _>(rng) - T::one())
            .collect();
        Self::from_parameters(&params, hidden, inputs, activation)
    }

    pub fn from_parameters(params: &[T], hidden: usize, inputs: usize, activation: Activation) -> Result<Self> {
        let (w, b) = decode_parameters(params, hidden, inputs)?;
        Self::new(w, b, activation)
    }

    pub fn encode_parameters(&self) -> Vec<T> {
        encode_parameters(&self.input_weights, &self.biases)
    }

    pub fn hidden_count(&self) -> usize {
        self.input_weights.rows()
    }

    pub fn input_count(&self) -> usize {
        self.input_weights.cols()
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn input_weights(&self) -> &Matrix<T> {
        &self.input_weights
    }

    pub fn biases(&self) -> &[T] {
        &self.biases
    }

    pub fn output_weights(&self) -> Option<&Matrix<T>> {
        self.output_weights.as_ref()
    }

    pub fn is_trained(&self) -> bool {
        self.output_weights.is_some()
    }

    /// Replaces `β` directly (`L×m`).
    pub fn with_output_weights(mut self, beta: Matrix<T>) -> Result<Self> {
        if beta.rows() != self.hidden_count() {
            return Err(Error::DimensionMismatch { expected: self.hidden_count(), found: beta.rows() });
        }
        self.output_weights = Some(beta);
        Ok(self)
    }

    /// `H[t][j] = f(w_j · x_t + b_j)`.
    pub fn hidden_matrix(&self, inputs: &Matrix<T>) -> Result<Matrix<T>> {
        let n = self.input_count();
        if inputs.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: inputs.cols() });
        }
        let l = self.hidden_count();
        let mut h = Matrix::zeros(inputs.rows(), l);
        for t in 0..inputs.rows() {
            let x = inputs.row(t);
            for j in 0..l {
                let z = self.input_weights.row(j).iter().zip(x).map(|(&w, &v)| w * v).sum::<T>() + self.biases[j];
                h[(t, j)] = self.activation.apply(z);
            }
        }
        Ok(h)
    }

    /// Fits `β = H⁺T` and returns the residual norm `‖Hβ − T‖`.
    pub fn fit(&mut self, data: &SupervisedSet<T>) -> Result<T> {
        if data.is_empty() {
            return Err(Error::DegenerateData);
        }
        let h = self.hidden_matrix(data.inputs())?;
        let beta = Svd::new(&h).solve(data.targets(), T::lit(DEFAULT_RCOND))?;
        let residual = h.matmul(&beta)?.sub(data.targets())?.frobenius_norm();
        self.output_weights = Some(beta);
        Ok(residual)
    }

    /// `H·β`.
    pub fn predict(&self, inputs: &Matrix<T>) -> Result<Matrix<T>> {
        let beta = self.output_weights.as_ref().ok_or(Error::Untrained)?;
        self.hidden_matrix(inputs)?.matmul(beta)
    }

    /// Prediction for single-output models as a flat vector.
    pub fn predict_column(&self, inputs: &Matrix<T>) -> Result<Vec<T>> {
        Ok(self.predict(inputs)?.col_to_vec(0))
    }

    /// Text form: `ELM L n m activation`, then the `L` weight rows, the bias
    /// row and the `L` rows of `β`.
    pub fn to_text(&self) -> Result<String> {
        let beta = self.output_weights.as_ref().ok_or(Error::Untrained)?;
        let mut out = String::new();
        let join = |row: &[T]| row.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
        let _ = writeln!(
            out,
            "ELM {} {} {} {}",
            self.hidden_count(),
            self.input_count(),
            beta.cols(),
            self.activation.name()
        );
        for j in 0..self.hidden_count() {
            let _ = writeln!(out, "{}", join(self.input_weights.row(j)));
        }
        let _ = writeln!(out, "{}", join(&self.biases));
        for j in 0..beta.rows() {
            let _ = writeln!(out, "{}", join(beta.row(j)));
        }
        Ok(out)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::ModelFormat(msg.to_string());
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<&str> = lines.next().ok_or_else(|| bad("empty input"))?.split_whitespace().collect();
        if header.len() != 5 || header[0] != "ELM" {
            return Err(bad("header must be `ELM L n m activation`"));
        }
        let dim = |s: &str| s.parse::<usize>().map_err(|_| bad("bad dimension in header"));
        let (l, n, m) = (dim(header[1])?, dim(header[2])?, dim(header[3])?);
        let activation: Activation = header[4].parse()?;
        let mut row = |width: usize| -> Result<Vec<T>> {
            let line = lines.next().ok_or_else(|| bad("truncated model"))?;
            let values = line
                .split_whitespace()
                .map(|tok| tok.parse::<f64>().map(T::lit).map_err(|_| bad("bad number")))
                .collect::<Result<Vec<T>>>()?;
            if values.len() != width {
                return Err(bad("row has wrong length"));
            }
            Ok(values)
        };
        let mut weights = Vec::with_capacity(l * n);
        for _ in 0..l {
            weights.extend(row(n)?);
        }
        let biases = row(l)?;
        let mut beta = Vec::with_capacity(l * m);
        for _ in 0..l {
            beta.extend(row(m)?);
        }
        Self::new(Matrix::from_vec(l, n, weights)?, biases, activation)?.with_output_weights(Matrix::from_vec(l, m, beta)?)
    }
}

/// Fits a copy of `model`; returns it with the training residual norm.
pub fn train<T: Scalar>(model: &ElmModel<T>, data: &SupervisedSet<T>) -> Result<(ElmModel<T>, T)> {
    let mut trained = model.clone();
    let residual = trained.fit(data)?;
    Ok((trained, residual))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_weights_give_half() {
        let m = ElmModel::new(Matrix::<f64>::zeros(3, 2), vec![0.0; 3], Activation::Sigmoid).unwrap();
        let h = m.hidden_matrix(&Matrix::from_rows(&[[1.0, 2.0], [3.0, -4.0]]).unwrap()).unwrap();
        assert!(h.as_slice().iter().all(|&v| v == 0.5));
    }

    #[test]
    fn sigmoid_of_ln3() {
        let m = ElmModel::new(Matrix::<f64>::identity(2), vec![0.0; 2], Activation::Sigmoid).unwrap();
        let h = m.hidden_matrix(&Matrix::from_rows(&[[3f64.ln(), 0.0]]).unwrap()).unwrap();
        assert!((h[(0, 0)] - 0.75).abs() < 1e-15);
        assert_eq!(h[(0, 1)], 0.5);
    }

    #[test]
    fn untrained_predict_fails() {
        let m = ElmModel::new(Matrix::<f64>::zeros(1, 1), vec![0.0], Activation::Sigmoid).unwrap();
        assert_eq!(m.predict(&Matrix::zeros(1, 1)), Err(Error::Untrained));
    }

    #[test]
    fn codec_layout() {
        assert_eq!(parameter_count(2, 3), 8);
        let v = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0];
        let (w, b) = decode_parameters(&v, 2, 3).unwrap();
        assert_eq!(w.row(1), &[4.0, 5.0, 6.0]);
        assert_eq!(b, vec![7.0, 8.0]);
        assert_eq!(encode_parameters(&w, &b), v);
        assert_eq!(decode_parameters(&v[..7], 2, 3), Err(Error::LengthMismatch { expected: 8, found: 7 }));
    }

    #[test]
    fn empty_data_rejected() {
        let mut m = ElmModel::new(Matrix::<f64>::zeros(1, 1), vec![0.0], Activation::Sigmoid).unwrap();
        let data = SupervisedSet::new(Matrix::zeros(0, 1), Matrix::zeros(0, 1)).unwrap();
        assert_eq!(m.fit(&data), Err(Error::DegenerateData));
    }
}
