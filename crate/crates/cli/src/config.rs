//! Experiment specification: built-in defaults, flat TOML config files, and
//! command-line overrides, merged in that order.
//!
//! The config file is one flat key-value table; chain keys and experiment
//! keys live side by side and every key is optional. Complex values are
//! `[re, im]` pairs. See `docs/experiment.example.toml` for the full schema.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use paramrx::{ChainConfig, Method, TrainConfig};

use crate::AppError;

/// Which experiment is being resolved; sets the iteration-count default
/// (20000 for the single trial, 10000 per sweep cell).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Single,
    Sweep,
}

/// Fully resolved experiment description.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub chain: ChainConfig,
    pub train: TrainConfig,
    /// SNR of the single-trial experiment (dB).
    pub snr_db: f64,
    /// SNR grid of the sweep (dB).
    pub snr_list: Vec<f64>,
    pub trials_per_snr: usize,
    /// Methods in canonical column order, deduplicated.
    pub methods: Vec<Method>,
    pub output_dir: PathBuf,
}

impl ExperimentSpec {
    pub fn validate(&self, mode: Mode) -> Result<(), AppError> {
        self.chain.validate().map_err(usage)?;
        self.train.validate().map_err(usage)?;
        if self.methods.is_empty() {
            return Err(AppError::Usage("no methods selected".into()));
        }
        if mode == Mode::Sweep {
            if self.snr_list.is_empty() {
                return Err(AppError::Usage("sweep needs a nonempty SNR list".into()));
            }
            if self.trials_per_snr == 0 {
                return Err(AppError::Usage("sweep needs at least one trial per SNR".into()));
            }
        }
        Ok(())
    }
}

/// Command-line overrides; every field beats the config file when present.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub config: Option<PathBuf>,
    pub snr: Option<f64>,
    pub snr_list: Option<String>,
    pub iterations: Option<usize>,
    pub trials: Option<usize>,
    pub methods: Option<String>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub trace_every: Option<usize>,
}

/// File-level experiment keys (chain keys are parsed separately from the
/// same text by [`ChainConfig`]).
#[derive(Debug, Deserialize)]
#[serde(default)]
struct FileKeys {
    learning_rate: f64,
    lambda: f64,
    iterations: Option<usize>,
    trace_every: usize,
    fir_len: usize,
    phase_blocks: usize,
    snr_db: f64,
    snr_list: Vec<f64>,
    trials_per_snr: usize,
    methods: Vec<String>,
    output_dir: String,
}

impl Default for FileKeys {
    fn default() -> Self {
        let train = TrainConfig::default();
        Self {
            learning_rate: train.learning_rate,
            lambda: train.lambda,
            iterations: None,
            trace_every: train.trace_every,
            fir_len: train.fir_len,
            phase_blocks: train.phase_blocks,
            snr_db: 20.0,
            snr_list: vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0],
            trials_per_snr: 100,
            methods: Method::all().iter().map(|m| m.to_string()).collect(),
            output_dir: "out".into(),
        }
    }
}

fn usage(err: impl std::fmt::Display) -> AppError {
    AppError::Usage(err.to_string())
}

/// Parse a comma-separated method list into canonical order.
pub fn parse_methods(text: &str) -> Result<Vec<Method>, AppError> {
    let mut set = BTreeSet::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        set.insert(part.parse::<Method>().map_err(usage)?);
    }
    if set.is_empty() {
        return Err(AppError::Usage("empty method list".into()));
    }
    Ok(set.into_iter().collect())
}

/// Parse an SNR grid: either `start:stop:step` (inclusive) or a comma list
/// of dB values.
pub fn parse_snr_list(text: &str) -> Result<Vec<f64>, AppError> {
    let text = text.trim();
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(AppError::Usage(format!(
                "bad SNR range '{text}' (expected start:stop:step)"
            )));
        }
        let nums: Vec<f64> = parts
            .iter()
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| AppError::Usage(format!("bad number '{p}' in SNR range")))
            })
            .collect::<Result<_, _>>()?;
        let (start, stop, step) = (nums[0], nums[1], nums[2]);
        if !step.is_finite() || step <= 0.0 {
            return Err(AppError::Usage("SNR range step must be positive".into()));
        }
        if stop < start {
            return Err(AppError::Usage("SNR range stop is below start".into()));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize;
        Ok((0..=count).map(|k| start + k as f64 * step).collect())
    } else {
        let list: Vec<f64> = text
            .split(',')
            .filter(|p| !p.trim().is_empty())
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| AppError::Usage(format!("bad SNR value '{p}'")))
            })
            .collect::<Result<_, _>>()?;
        if list.is_empty() {
            return Err(AppError::Usage("empty SNR list".into()));
        }
        Ok(list)
    }
}

/// Merge defaults, the optional config file, and command-line overrides.
pub fn build_spec(mode: Mode, ov: &Overrides) -> Result<ExperimentSpec, AppError> {
    let (mut chain, keys) = match &ov.config {
        Some(path) => load_file(path)?,
        None => (ChainConfig::default(), FileKeys::default()),
    };

    if let Some(seed) = ov.seed {
        chain.seed = seed;
    }

    let methods = match &ov.methods {
        Some(text) => parse_methods(text)?,
        None => {
            let mut set = BTreeSet::new();
            for name in &keys.methods {
                set.insert(name.parse::<Method>().map_err(usage)?);
            }
            set.into_iter().collect()
        }
    };

    let snr_list = match &ov.snr_list {
        Some(text) => parse_snr_list(text)?,
        None => keys.snr_list.clone(),
    };

    let iterations = ov
        .iterations
        .or(keys.iterations)
        .unwrap_or(match mode {
            Mode::Single => 20_000,
            Mode::Sweep => 10_000,
        });

    let train = TrainConfig {
        learning_rate: keys.learning_rate,
        lambda: keys.lambda,
        iterations,
        method: Method::Proposed, // placeholder; the runner sets it per method
        trace_every: ov.trace_every.unwrap_or(keys.trace_every),
        seed: chain.seed,
        fir_len: keys.fir_len,
        phase_blocks: keys.phase_blocks,
    };

    let spec = ExperimentSpec {
        chain,
        train,
        snr_db: ov.snr.unwrap_or(keys.snr_db),
        snr_list,
        trials_per_snr: ov.trials.unwrap_or(keys.trials_per_snr),
        methods,
        output_dir: ov.out.clone().unwrap_or_else(|| PathBuf::from(keys.output_dir.clone())),
    };
    spec.validate(mode)?;
    Ok(spec)
}

fn load_file(path: &Path) -> Result<(ChainConfig, FileKeys), AppError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        AppError::Usage(format!("cannot read config {}: {e}", path.display()))
    })?;
    let chain = ChainConfig::from_toml_str(&text)
        .map_err(|e| AppError::Usage(format!("{}: {e}", path.display())))?;
    let keys: FileKeys = toml::from_str(&text)
        .map_err(|e| AppError::Usage(format!("{}: {e}", path.display())))?;
    Ok((chain, keys))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_reference_experiment() {
        let spec = build_spec(Mode::Single, &Overrides::default()).unwrap();
        assert_eq!(spec.chain.n_symbols, 200);
        assert_eq!(spec.chain.pilot_period, 10);
        assert_eq!(spec.train.iterations, 20_000);
        assert_eq!(spec.train.learning_rate, 1e-3);
        assert_eq!(spec.train.lambda, 1e-3);
        assert_eq!(spec.snr_db, 20.0);
        assert_eq!(spec.methods.len(), 5);
        let sweep = build_spec(Mode::Sweep, &Overrides::default()).unwrap();
        assert_eq!(sweep.train.iterations, 10_000);
        assert_eq!(sweep.snr_list, vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0]);
        assert_eq!(sweep.trials_per_snr, 100);
    }

    #[test]
    fn overrides_beat_defaults() {
        let ov = Overrides {
            snr: Some(12.5),
            iterations: Some(123),
            trials: Some(7),
            methods: Some("proposed,simple".into()),
            seed: Some(99),
            trace_every: Some(5),
            ..Default::default()
        };
        let spec = build_spec(Mode::Sweep, &ov).unwrap();
        assert_eq!(spec.snr_db, 12.5);
        assert_eq!(spec.train.iterations, 123);
        assert_eq!(spec.trials_per_snr, 7);
        assert_eq!(spec.methods, vec![Method::Simple, Method::Proposed]);
        assert_eq!(spec.chain.seed, 99);
        assert_eq!(spec.train.trace_every, 5);
    }

    #[test]
    fn method_list_is_canonicalized_and_checked() {
        let methods = parse_methods("proposed, pg_2000,simple,pg_500,proposed").unwrap();
        assert_eq!(
            methods,
            vec![
                Method::Simple,
                Method::ProjectedGradient { period: 500 },
                Method::ProjectedGradient { period: 2000 },
                Method::Proposed
            ]
        );
        assert!(matches!(parse_methods("fancy"), Err(AppError::Usage(_))));
        assert!(matches!(parse_methods(""), Err(AppError::Usage(_))));
    }

    #[test]
    fn snr_range_and_list_forms() {
        assert_eq!(parse_snr_list("0:25:5").unwrap(), vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0]);
        assert_eq!(parse_snr_list("5:6:0.5").unwrap(), vec![5.0, 5.5, 6.0]);
        assert_eq!(parse_snr_list("10, 20").unwrap(), vec![10.0, 20.0]);
        assert!(parse_snr_list("5:1:1").is_err());
        assert!(parse_snr_list("5:10:0").is_err());
        assert!(parse_snr_list("a:b:c").is_err());
        assert!(parse_snr_list("").is_err());
    }

    #[test]
    fn config_file_merges_under_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("exp.toml");
        std::fs::write(
            &path,
            r#"
                n_symbols = 40
                pilot_period = 10
                seed = 5
                iterations = 333
                trials_per_snr = 3
                methods = ["simple"]
                snr_list = [1.0, 2.0]
                output_dir = "results"
            "#,
        )
        .unwrap();
        let ov = Overrides { config: Some(path.clone()), ..Default::default() };
        let spec = build_spec(Mode::Sweep, &ov).unwrap();
        assert_eq!(spec.chain.n_symbols, 40);
        assert_eq!(spec.chain.seed, 5);
        assert_eq!(spec.train.iterations, 333);
        assert_eq!(spec.methods, vec![Method::Simple]);
        assert_eq!(spec.output_dir, PathBuf::from("results"));

        let ov = Overrides {
            config: Some(path),
            iterations: Some(11),
            seed: Some(100),
            ..Default::default()
        };
        let spec = build_spec(Mode::Sweep, &ov).unwrap();
        assert_eq!(spec.train.iterations, 11);
        assert_eq!(spec.chain.seed, 100);
        assert_eq!(spec.train.seed, 100);
    }

    #[test]
    fn malformed_config_reports_line_diagnostics() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.toml");
        std::fs::write(&path, "n_symbols = 40\npilot_period = \"ten\"\n").unwrap();
        let err = build_spec(Mode::Single, &Overrides { config: Some(path), ..Default::default() })
            .unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, AppError::Usage(_)));
        assert!(msg.contains("line 2"), "missing line diagnostics: {msg}");
    }

    #[test]
    fn invalid_combinations_rejected() {
        let ov = Overrides { trials: Some(0), ..Default::default() };
        assert!(build_spec(Mode::Sweep, &ov).is_err());
        let ov = Overrides { snr_list: Some("".into()), ..Default::default() };
        assert!(build_spec(Mode::Sweep, &ov).is_err());
    }
}
