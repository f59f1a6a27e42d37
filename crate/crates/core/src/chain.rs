//! Ground-truth communication chain: 16QAM source, transmitter IQ
//! imbalance, FIR channel, receiver IQ imbalance, per-sample Wiener phase
//! noise, and additive Gaussian noise.
//!
//! The simulator reuses the augmented-domain layer forwards; the Wiener
//! phase is applied per sample (a real random walk), deliberately finer
//! grained than the receiver's piecewise-constant phase model.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::Deserialize;

use crate::augmented::AugmentedVector;
use crate::constellation::{random_symbols, Constellation};
use crate::error::{Error, Result};
use crate::layers::{fir_forward, iq_forward, phase_forward, PilotPattern};
use crate::rng::{stream, substream};

/// Number of probe symbols used to measure the received power when
/// converting an SNR target into a noise variance.
pub const SNR_PROBE_SYMBOLS: usize = 10_000;

mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer};

    pub fn deserialize<'de, D>(d: D) -> Result<Complex64, D::Error>
    where
        D: Deserializer<'de>,
    {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

mod complex_pair_vec {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer};

    pub fn deserialize<'de, D>(d: D) -> Result<Vec<Complex64>, D::Error>
    where
        D: Deserializer<'de>,
    {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(pairs
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect())
    }
}

fn constellation_points<'de, D>(d: D) -> std::result::Result<Constellation, D::Error>
where
    D: serde::Deserializer<'de>,
{
    let points = Vec::<f64>::deserialize(d)?;
    Constellation::new(points).map_err(serde::de::Error::custom)
}

/// Ground-truth impairment parameters plus pilot layout and alphabet.
///
/// Loadable from a flat key-value TOML file; complex values are written as
/// `[re, im]` pairs. Every key is optional and defaults to the reference
/// chain below.
#[derive(Debug, Clone, Deserialize)]
#[serde(default)]
pub struct ChainConfig {
    /// Number of complex symbols per frame (N).
    pub n_symbols: usize,
    /// Pilot spacing in complex symbols (one pilot, then period-1 data).
    pub pilot_period: usize,
    #[serde(with = "complex_pair")]
    pub iq_tx_mu: Complex64,
    #[serde(with = "complex_pair")]
    pub iq_tx_nu: Complex64,
    #[serde(with = "complex_pair_vec")]
    pub fir_taps: Vec<Complex64>,
    #[serde(with = "complex_pair")]
    pub iq_rx_mu: Complex64,
    #[serde(with = "complex_pair")]
    pub iq_rx_nu: Complex64,
    /// Wiener phase increment variance sigma_p^2 (rad^2 per sample).
    pub phase_noise_var: f64,
    /// Per-axis alphabet.
    #[serde(deserialize_with = "constellation_points")]
    pub constellation: Constellation,
    /// Master seed for all stochastic draws.
    pub seed: u64,
}

impl Default for ChainConfig {
    /// Reference chain: 200-symbol 16QAM frames, one pilot in ten,
    /// (0.9-0.4j, 0.4+0.1j) transmitter imbalance, a 5-tap FIR channel,
    /// (1.8+0.13j, 0.1+0.2j) receiver imbalance, and Wiener phase noise
    /// with sigma_p^2 = 1.25e-4.
    fn default() -> Self {
        Self {
            n_symbols: 200,
            pilot_period: 10,
            iq_tx_mu: Complex64::new(0.9, -0.4),
            iq_tx_nu: Complex64::new(0.4, 0.1),
            fir_taps: vec![
                Complex64::new(0.9, 0.1),
                Complex64::new(0.1, 0.1),
                Complex64::new(0.01, 0.05),
                Complex64::new(0.02, -0.003),
                Complex64::new(0.004, 0.012),
            ],
            iq_rx_mu: Complex64::new(1.8, 0.13),
            iq_rx_nu: Complex64::new(0.1, 0.2),
            phase_noise_var: 0.000125,
            constellation: Constellation::qam16(),
            seed: 0,
        }
    }
}

impl ChainConfig {
    /// Identity chain (no impairments, no phase noise) over the given
    /// alphabet; useful as a calibration baseline.
    pub fn transparent(n_symbols: usize, pilot_period: usize, constellation: Constellation) -> Self {
        Self {
            n_symbols,
            pilot_period,
            iq_tx_mu: Complex64::new(1.0, 0.0),
            iq_tx_nu: Complex64::new(0.0, 0.0),
            fir_taps: vec![Complex64::new(1.0, 0.0)],
            iq_rx_mu: Complex64::new(1.0, 0.0),
            iq_rx_nu: Complex64::new(0.0, 0.0),
            phase_noise_var: 0.0,
            constellation,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_symbols == 0 {
            return Err(Error::InvalidParameter("n_symbols must be positive".into()));
        }
        if self.pilot_period == 0 || !self.n_symbols.is_multiple_of(self.pilot_period) {
            return Err(Error::InvalidParameter(format!(
                "n_symbols {} must be divisible by pilot_period {}",
                self.n_symbols, self.pilot_period
            )));
        }
        if self.fir_taps.is_empty() {
            return Err(Error::InvalidParameter("fir_taps must be nonempty".into()));
        }
        if self.phase_noise_var.is_nan() || self.phase_noise_var < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "phase_noise_var must be >= 0, got {}",
                self.phase_noise_var
            )));
        }
        Ok(())
    }

    /// Parse from flat TOML; unknown keys are ignored so a chain config can
    /// be embedded in a larger experiment file.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)
            .map_err(|e| Error::InvalidParameter(format!("chain config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Noiseless, phase-free pass through the impairment chain.
    fn apply_impairments(&self, s: &AugmentedVector) -> Result<AugmentedVector> {
        let x = iq_forward(s, self.iq_tx_mu, self.iq_tx_nu);
        let x = fir_forward(&x, &self.fir_taps)?;
        Ok(iq_forward(&x, self.iq_rx_mu, self.iq_rx_nu))
    }
}

/// One simulated transmission: the observation, the full transmitted frame,
/// the pilot layout, the unknown symbols, and the realized noise variance.
#[derive(Debug, Clone)]
pub struct TrialData {
    /// Observed augmented samples (length 2N).
    pub y: AugmentedVector,
    /// All N transmitted symbols.
    pub s_true: Vec<Complex64>,
    /// Pilot/data index partition.
    pub pattern: PilotPattern,
    /// The N_u unknown symbols in data-index order.
    pub data_truth: Vec<Complex64>,
    /// Complex noise variance sigma_b^2 used for this trial.
    pub sigma_b_sq: f64,
}

impl TrialData {
    /// Pilot symbols in augmented form (the receiver-side known input).
    pub fn pilots(&self) -> AugmentedVector {
        let syms: Vec<Complex64> = self
            .pattern
            .pilot_indices()
            .iter()
            .map(|&i| self.s_true[i])
            .collect();
        AugmentedVector::from_complex(&syms)
    }
}

/// Wiener phase trajectory: cumulative sum of n i.i.d. N(0, sigma_p^2)
/// increments, with phi[0] = psi[0].
pub fn wiener_phase(n: usize, sigma_p_sq: f64, rng: &mut impl Rng) -> Result<Vec<f64>> {
    if sigma_p_sq.is_nan() || sigma_p_sq < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "phase increment variance must be >= 0, got {sigma_p_sq}"
        )));
    }
    if sigma_p_sq == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let normal = Normal::new(0.0, sigma_p_sq.sqrt()).expect("finite std");
    let mut phi = Vec::with_capacity(n);
    let mut acc = 0.0;
    for _ in 0..n {
        acc += normal.sample(rng);
        phi.push(acc);
    }
    Ok(phi)
}

/// Convert an SNR target into the complex noise variance
/// sigma_b^2 = P_s / 10^(snr_db / 10).
///
/// P_s is the empirical mean complex-symbol power of a noiseless probe
/// frame measured at the transmit reference plane, i.e. the constellation
/// power itself (close to 10 for the unnormalized 16QAM alphabet). The
/// probe draws its own fixed substream of `probe_symbols` symbols, so the
/// calibration depends only on the config and the SNR.
pub fn snr_to_noise_var(config: &ChainConfig, snr_db: f64, probe_symbols: usize) -> Result<f64> {
    config.validate()?;
    if probe_symbols < 1000 {
        return Err(Error::InvalidParameter(format!(
            "probe needs at least 1000 symbols, got {probe_symbols}"
        )));
    }
    let mut rng = substream(config.seed, stream::PROBE);
    let syms = random_symbols(probe_symbols, &config.constellation, &mut rng);
    let power: f64 = syms.iter().map(|c| c.norm_sqr()).sum::<f64>() / probe_symbols as f64;
    Ok(power / 10f64.powf(snr_db / 10.0))
}

/// Draw one frame, push it through the impairment chain, rotate by a fresh
/// Wiener phase realization, and add Gaussian noise with variance
/// sigma_b^2 / 2 per real component.
pub fn simulate_trial(config: &ChainConfig, snr_db: f64, seed: u64) -> Result<TrialData> {
    config.validate()?;
    let n = config.n_symbols;
    let sigma_b_sq = snr_to_noise_var(config, snr_db, SNR_PROBE_SYMBOLS)?;

    let s_true = random_symbols(n, &config.constellation, &mut substream(seed, stream::SYMBOLS));
    let clean = config.apply_impairments(&AugmentedVector::from_complex(&s_true))?;

    let phi = wiener_phase(n, config.phase_noise_var, &mut substream(seed, stream::PHASE))?;
    let rotated = phase_forward(&clean, &phi, 1)?;

    let mut y = rotated;
    if sigma_b_sq > 0.0 {
        let normal = Normal::new(0.0, (sigma_b_sq / 2.0).sqrt()).expect("finite std");
        let mut noise_rng = substream(seed, stream::NOISE);
        for v in y.as_mut_slice() {
            *v += normal.sample(&mut noise_rng);
        }
    }

    let pattern = PilotPattern::periodic(n, config.pilot_period)?;
    let data_truth = pattern.data_indices().iter().map(|&i| s_true[i]).collect();
    Ok(TrialData {
        y,
        s_true,
        pattern,
        data_truth,
        sigma_b_sq,
    })
}
