//! Experiment runners: single-trial traces and Monte Carlo sweeps.
//!
//! Every output is a pure function of the resolved spec: per-trial seeds
//! derive from (master seed, SNR index, trial index), sweep cells run in a
//! rayon pool and are gathered by index, and CSV bytes use the plain float
//! Display form, so repeated runs are byte-identical.

use std::fs;
use std::path::PathBuf;

use anyhow::Context;
use rayon::prelude::*;

use paramrx::rng::derive_seed;
use paramrx::{simulate_trial, train, Error, Method, TrainConfig, TrainTrace};

use crate::config::ExperimentSpec;
use crate::AppError;

/// Result of one single-trial training run.
#[derive(Debug, Clone)]
pub struct SingleOutcome {
    pub method: Method,
    pub final_ser: f64,
    pub diverged: bool,
    pub csv_path: PathBuf,
}

/// Mean-SER grid of a sweep.
#[derive(Debug, Clone)]
pub struct SweepSummary {
    pub snr_db: Vec<f64>,
    pub methods: Vec<Method>,
    /// `mean_ser[snr_index][method_index]`.
    pub mean_ser: Vec<Vec<f64>>,
    /// Number of (snr, trial, method) cells that diverged and were scored
    /// as SER 1.
    pub divergent_runs: usize,
    pub csv_path: PathBuf,
}

fn train_config(spec: &ExperimentSpec, method: Method) -> TrainConfig {
    TrainConfig {
        method,
        ..spec.train.clone()
    }
}

/// Train every selected method on one shared trial and write a
/// `single_<method>.csv` trace per method.
pub fn run_single_trial(spec: &ExperimentSpec) -> Result<Vec<SingleOutcome>, AppError> {
    fs::create_dir_all(&spec.output_dir)
        .with_context(|| format!("creating {}", spec.output_dir.display()))?;

    let trial = simulate_trial(&spec.chain, spec.snr_db, spec.chain.seed)
        .map_err(|e| AppError::Runtime(e.into()))?;

    let mut outcomes = Vec::with_capacity(spec.methods.len());
    for &method in &spec.methods {
        let cfg = train_config(spec, method);
        let (trace, final_ser, diverged): (TrainTrace, f64, bool) =
            match train(&trial, &cfg, &spec.chain.constellation) {
                Ok(result) => {
                    let ser = result.final_ser();
                    (result.trace, ser, false)
                }
                Err(Error::Divergence { iteration, trace }) => {
                    eprintln!("warning: {method} diverged at iteration {iteration}; keeping partial trace");
                    (*trace, 1.0, true)
                }
                Err(e) => return Err(AppError::Runtime(e.into())),
            };
        let csv_path = spec.output_dir.join(format!("single_{method}.csv"));
        let status = diverged.then_some("diverged");
        fs::write(&csv_path, trace.to_csv(status))
            .with_context(|| format!("writing {}", csv_path.display()))?;
        outcomes.push(SingleOutcome {
            method,
            final_ser,
            diverged,
            csv_path,
        });
    }
    Ok(outcomes)
}

/// Monte Carlo sweep over the SNR grid; all methods inside a cell share the
/// trial's noise realization, and divergent runs score SER 1.
pub fn run_monte_carlo(spec: &ExperimentSpec) -> Result<SweepSummary, AppError> {
    fs::create_dir_all(&spec.output_dir)
        .with_context(|| format!("creating {}", spec.output_dir.display()))?;

    let cells: Vec<(usize, usize)> = (0..spec.snr_list.len())
        .flat_map(|si| (0..spec.trials_per_snr).map(move |ti| (si, ti)))
        .collect();

    // (snr index, trial index) -> per-method (ser, diverged_at).
    type CellResult = Vec<(f64, Option<usize>)>;
    let results: Vec<Result<CellResult, Error>> = cells
        .par_iter()
        .map(|&(si, ti)| {
            let seed = derive_seed(spec.chain.seed, si as u64, ti as u64);
            let trial = simulate_trial(&spec.chain, spec.snr_list[si], seed)?;
            spec.methods
                .iter()
                .map(|&method| {
                    let cfg = train_config(spec, method);
                    match train(&trial, &cfg, &spec.chain.constellation) {
                        Ok(result) => Ok((result.final_ser(), None)),
                        Err(Error::Divergence { iteration, .. }) => Ok((1.0, Some(iteration))),
                        Err(e) => Err(e),
                    }
                })
                .collect()
        })
        .collect();

    let mut sums = vec![vec![0.0; spec.methods.len()]; spec.snr_list.len()];
    let mut divergent_runs = 0;
    for (&(si, ti), cell) in cells.iter().zip(results) {
        let cell = cell.map_err(|e| AppError::Runtime(e.into()))?;
        for (mi, (ser, diverged_at)) in cell.into_iter().enumerate() {
            if let Some(iteration) = diverged_at {
                divergent_runs += 1;
                eprintln!(
                    "warning: {} diverged at iteration {iteration} (snr {} dB, trial {ti}); scoring SER 1",
                    spec.methods[mi], spec.snr_list[si]
                );
            }
            sums[si][mi] += ser;
        }
    }
    let mean_ser: Vec<Vec<f64>> = sums
        .into_iter()
        .map(|row| row.into_iter().map(|s| s / spec.trials_per_snr as f64).collect())
        .collect();

    let mut csv = String::from("snr_db");
    for method in &spec.methods {
        csv.push(',');
        csv.push_str(&method.to_string());
    }
    csv.push('\n');
    for (si, snr) in spec.snr_list.iter().enumerate() {
        csv.push_str(&format!("{snr}"));
        for ser in &mean_ser[si] {
            csv.push_str(&format!(",{ser}"));
        }
        csv.push('\n');
    }
    let csv_path = spec.output_dir.join("ser_vs_snr.csv");
    fs::write(&csv_path, csv).with_context(|| format!("writing {}", csv_path.display()))?;

    Ok(SweepSummary {
        snr_db: spec.snr_list.clone(),
        methods: spec.methods.clone(),
        mean_ser,
        divergent_runs,
        csv_path,
    })
}
