//! Regularized least-squares training of the receiver network.
//!
//! The loss is mean squared error over the 2N observation entries plus
//! lambda * sigma_s^2; minimization runs full-batch gradient descent with
//! a from-scratch ADAM update. Three method variants are supported: the
//! full network with the soft-threshold activation, the same network
//! without it, and projected-gradient baselines that periodically overwrite
//! the data estimates with their hard decisions.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::augmented::AugmentedVector;
use crate::chain::TrialData;
use crate::constellation::{symbol_error_rate, Constellation};
use crate::error::{Error, Result};
use crate::layers::Network;
use crate::params::NetworkParams;

/// ADAM moment decay and stability constants (canonical defaults).
pub const ADAM_BETA1: f64 = 0.9;
pub const ADAM_BETA2: f64 = 0.999;
pub const ADAM_EPSILON: f64 = 1e-8;

/// Lower clamp applied to sigma_s^2 after each update; keeps the trainable
/// scalar interpretable as a variance without reparametrizing it.
pub const SIGMA_S_SQ_FLOOR: f64 = 1e-6;

/// Training method variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    /// No activation layer, no projection.
    Simple,
    /// No activation layer; every `period` iterations the data estimates
    /// are overwritten with their nearest alphabet points.
    ProjectedGradient { period: usize },
    /// Soft-threshold activation with the lambda * sigma_s^2 regularizer.
    Proposed,
}

impl Method {
    /// True when the network keeps the soft-threshold layer (and trains
    /// sigma_s^2).
    pub fn uses_activation(self) -> bool {
        matches!(self, Method::Proposed)
    }

    /// All variants in canonical column order.
    pub fn all() -> Vec<Method> {
        vec![
            Method::Simple,
            Method::ProjectedGradient { period: 500 },
            Method::ProjectedGradient { period: 1000 },
            Method::ProjectedGradient { period: 2000 },
            Method::Proposed,
        ]
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Simple => write!(f, "simple"),
            Method::ProjectedGradient { period } => write!(f, "pg_{period}"),
            Method::Proposed => write!(f, "proposed"),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "simple" => Ok(Method::Simple),
            "proposed" => Ok(Method::Proposed),
            other => {
                if let Some(period) = other.strip_prefix("pg_") {
                    let period: usize = period.parse().map_err(|_| {
                        Error::InvalidParameter(format!("bad projection period in method '{s}'"))
                    })?;
                    if period == 0 {
                        return Err(Error::InvalidParameter(
                            "projection period must be positive".into(),
                        ));
                    }
                    Ok(Method::ProjectedGradient { period })
                } else {
                    Err(Error::InvalidParameter(format!(
                        "unknown method '{s}' (expected simple, pg_<n>, or proposed)"
                    )))
                }
            }
        }
    }
}

/// Training hyperparameters.
#[derive(Debug, Clone)]
pub struct TrainConfig {
    pub learning_rate: f64,
    /// Weight of the sigma_s^2 regularizer.
    pub lambda: f64,
    pub iterations: usize,
    pub method: Method,
    /// Trace cadence; the final iteration is always traced.
    pub trace_every: usize,
    /// Reserved; training draws no randomness (the data estimates are
    /// initialized from the observation, everything else is fixed).
    pub seed: u64,
    /// FIR taps modeled by the network.
    pub fir_len: usize,
    /// Piecewise-constant phase blocks modeled by the network.
    pub phase_blocks: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 1e-3,
            lambda: 1e-3,
            iterations: 10_000,
            method: Method::Proposed,
            trace_every: 100,
            seed: 0,
            fir_len: 5,
            phase_blocks: 20,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.learning_rate.is_finite() || self.learning_rate <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "learning_rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if self.lambda.is_nan() || self.lambda < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "lambda must be >= 0, got {}",
                self.lambda
            )));
        }
        if self.iterations == 0 {
            return Err(Error::InvalidParameter("iterations must be >= 1".into()));
        }
        if self.trace_every == 0 {
            return Err(Error::InvalidParameter("trace_every must be >= 1".into()));
        }
        if self.fir_len == 0 {
            return Err(Error::InvalidParameter("fir_len must be >= 1".into()));
        }
        if self.phase_blocks == 0 {
            return Err(Error::InvalidParameter("phase_blocks must be >= 1".into()));
        }
        Ok(())
    }
}

/// First and second moment estimates for one flat parameter vector.
#[derive(Debug, Clone)]
pub struct AdamState {
    m: Vec<f64>,
    v: Vec<f64>,
    step: u64,
}

impl AdamState {
    pub fn new(len: usize) -> Self {
        Self {
            m: vec![0.0; len],
            v: vec![0.0; len],
            step: 0,
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }
}

/// One bias-corrected adaptive-moment update, in place.
pub fn adam_step(
    params: &mut [f64],
    grads: &[f64],
    state: &mut AdamState,
    learning_rate: f64,
) -> Result<()> {
    if params.len() != grads.len() || params.len() != state.m.len() {
        return Err(Error::InvalidLength(format!(
            "adam shapes disagree: {} params, {} grads, {} moments",
            params.len(),
            grads.len(),
            state.m.len()
        )));
    }
    state.step += 1;
    let t = state.step as i32;
    let m_corr = 1.0 - ADAM_BETA1.powi(t);
    let v_corr = 1.0 - ADAM_BETA2.powi(t);
    for i in 0..params.len() {
        let g = grads[i];
        state.m[i] = ADAM_BETA1 * state.m[i] + (1.0 - ADAM_BETA1) * g;
        state.v[i] = ADAM_BETA2 * state.v[i] + (1.0 - ADAM_BETA2) * g * g;
        let m_hat = state.m[i] / m_corr;
        let v_hat = state.v[i] / v_corr;
        params[i] -= learning_rate * m_hat / (v_hat.sqrt() + ADAM_EPSILON);
    }
    Ok(())
}

/// One trace record: state after `iteration` updates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub iteration: usize,
    pub sigma_s_sq: f64,
    pub mse: f64,
    pub ser: f64,
}

/// Per-iteration training record with CSV serialization
/// (`iteration,sigma_s_sq,mse,ser`).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainTrace {
    pub rows: Vec<TraceRow>,
}

impl TrainTrace {
    pub const CSV_HEADER: &'static str = "iteration,sigma_s_sq,mse,ser";

    pub fn push(&mut self, row: TraceRow) {
        self.rows.push(row);
    }

    pub fn last(&self) -> Option<&TraceRow> {
        self.rows.last()
    }

    /// Render as CSV. `status` appends a fifth column marking each row
    /// ("ok", with "diverged" on the last row) for traces cut short by a
    /// non-finite loss.
    pub fn to_csv(&self, status: Option<&str>) -> String {
        let mut out = String::new();
        match status {
            None => {
                out.push_str(Self::CSV_HEADER);
                out.push('\n');
                for r in &self.rows {
                    out.push_str(&format!(
                        "{},{},{},{}\n",
                        r.iteration, r.sigma_s_sq, r.mse, r.ser
                    ));
                }
            }
            Some(terminal) => {
                out.push_str(Self::CSV_HEADER);
                out.push_str(",status\n");
                for (i, r) in self.rows.iter().enumerate() {
                    let s = if i + 1 == self.rows.len() { terminal } else { "ok" };
                    out.push_str(&format!(
                        "{},{},{},{},{}\n",
                        r.iteration, r.sigma_s_sq, r.mse, r.ser, s
                    ));
                }
            }
        }
        out
    }
}

/// Mean squared error (1 / 2N) * ||y - y_hat||^2 over the 2N real entries.
pub fn mse(y: &AugmentedVector, y_hat: &AugmentedVector) -> Result<f64> {
    if y.len() != y_hat.len() {
        return Err(Error::InvalidLength(format!(
            "observation length {} does not match prediction length {}",
            y.len(),
            y_hat.len()
        )));
    }
    let sum: f64 = y
        .as_slice()
        .iter()
        .zip(y_hat.as_slice())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(sum / y.len() as f64)
}

/// Regularized loss: mse + lambda * sigma_s^2.
pub fn loss(
    y: &AugmentedVector,
    y_hat: &AugmentedVector,
    sigma_s_sq: f64,
    lambda: f64,
) -> Result<f64> {
    Ok(mse(y, y_hat)? + lambda * sigma_s_sq)
}

/// Pair the halves of the data estimates into complex symbols and hard
/// project each axis.
pub fn detect_symbols(params: &NetworkParams, m: &Constellation) -> Vec<Complex64> {
    let n_u = params.n_data();
    (0..n_u)
        .map(|k| Complex64::new(m.nearest(params.u[k]), m.nearest(params.u[k + n_u])))
        .collect()
}

/// Trained parameters plus the collected trace.
#[derive(Debug, Clone)]
pub struct TrainResult {
    pub params: NetworkParams,
    pub trace: TrainTrace,
}

impl TrainResult {
    pub fn final_ser(&self) -> f64 {
        self.trace.last().map(|r| r.ser).unwrap_or(1.0)
    }
}

/// Run the configured method on one trial.
///
/// The network starts at the identity-like state (sigma_s^2 = 1, identity
/// IQ stages, unit-impulse FIR, zero phases) with the data estimates
/// initialized from the observed samples at their data positions. Starting
/// u at the observation instead of zero matters twice over: the estimates
/// begin within one noise-ball of a feasible solution instead of a full
/// alphabet-width away (ADAM moves each coordinate by at most about one
/// learning rate per step), and for the soft-threshold variant a zero u
/// with a symmetric alphabet contributes exactly nothing to the sigma_s^2
/// gradient, so the regularizer faces no counter-pressure and collapses
/// the denoiser into a dead staircase before the estimates can move.
///
/// Each iteration runs forward -> residual -> backward -> ADAM; sigma_s^2
/// is clamped to its floor after every update, and trace rows record the
/// post-update state. A non-finite loss aborts with the trace collected so
/// far.
pub fn train(trial: &TrialData, config: &TrainConfig, m: &Constellation) -> Result<TrainResult> {
    config.validate()?;
    let pattern = &trial.pattern;
    let n = pattern.n_complex();
    if trial.y.len() != 2 * n {
        return Err(Error::InvalidLength(format!(
            "observation length {} does not match pattern ({} symbols)",
            trial.y.len(),
            n
        )));
    }

    let activation = config.method.uses_activation();
    let mut params = NetworkParams::initial(pattern.n_data(), config.fir_len, config.phase_blocks);
    let n_u = pattern.n_data();
    for (k, &j) in pattern.data_indices().iter().enumerate() {
        params.u[k] = trial.y.re(j);
        params.u[k + n_u] = trial.y.im(j);
    }
    let network = Network {
        pattern,
        constellation: m,
        activation,
    };
    let lambda = if activation { config.lambda } else { 0.0 };
    let mut adam = AdamState::new(params.count(activation));
    let pilots = trial.pilots();

    let mut trace = TrainTrace::default();
    let mut flat = params.flatten(activation);

    for step in 1..=config.iterations {
        let (y_hat, cache) = network.forward(&pilots, &params)?;
        let current_loss = loss(&trial.y, &y_hat, params.sigma_s_sq, lambda)?;
        if !current_loss.is_finite() {
            return Err(Error::Divergence {
                iteration: step,
                trace: Box::new(trace),
            });
        }

        // d/d y_hat of (1/2N)||y - y_hat||^2 is (y_hat - y) / N.
        let mut residual = AugmentedVector::zeros(n);
        for (r, (p, o)) in residual
            .as_mut_slice()
            .iter_mut()
            .zip(y_hat.as_slice().iter().zip(trial.y.as_slice()))
        {
            *r = (p - o) / n as f64;
        }

        let mut grads = network.backward(&cache, &residual, &params)?;
        if activation {
            grads.sigma_s_sq += lambda;
        }

        let flat_grads = grads.flatten(activation);
        params.flatten_into(activation, &mut flat);
        adam_step(&mut flat, &flat_grads, &mut adam, config.learning_rate)?;
        params.assign_from_flat(&flat, activation)?;
        if activation {
            params.sigma_s_sq = params.sigma_s_sq.max(SIGMA_S_SQ_FLOOR);
        }

        if let Method::ProjectedGradient { period } = config.method {
            if step % period == 0 {
                params.u = m.project(&params.u);
            }
        }

        if step % config.trace_every == 0 || step == config.iterations {
            let (y_hat, _) = network.forward(&pilots, &params)?;
            let detected = detect_symbols(&params, m);
            trace.push(TraceRow {
                iteration: step,
                sigma_s_sq: params.sigma_s_sq,
                mse: mse(&trial.y, &y_hat)?,
                ser: symbol_error_rate(&detected, &trial.data_truth, m)?,
            });
        }
    }

    Ok(TrainResult { params, trace })
}
