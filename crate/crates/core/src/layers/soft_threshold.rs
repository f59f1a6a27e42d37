//! Soft projection onto the constellation: the posterior-mean denoiser for
//! a uniform alphabet observed in Gaussian noise of variance sigma_s^2 / 2.
//!
//! Each entry is mapped to a Gibbs-weighted average of the alphabet points,
//! S(x) = sum_s s * w_s / sum_s w_s with w_s = exp(-(x - s)^2 / sigma_s^2).
//! Large sigma_s^2 makes the map nearly linear across the alphabet span,
//! small sigma_s^2 approaches the hard nearest-point detector.

use crate::constellation::Constellation;
use crate::error::{Error, Result};

fn check_sigma(sigma_s_sq: f64) -> Result<()> {
    if !sigma_s_sq.is_finite() || sigma_s_sq <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "sigma_s_sq must be positive and finite, got {sigma_s_sq}"
        )));
    }
    Ok(())
}

/// Gibbs weights and posterior moments for one input entry.
///
/// Exponents are shifted by their maximum before exponentiation; sigma_s_sq
/// shrinks well below 0.01 during training and the raw exponentials
/// underflow to 0/0 otherwise.
struct Moments {
    mean: f64,        // E[s]
    mean_sq: f64,     // E[s^2]
    cov_s_d: f64,     // E[s*d] - E[s]E[d],  d = (x - s)^2
}

fn moments(x: f64, sigma_s_sq: f64, points: &[f64]) -> Moments {
    let max_exp = points
        .iter()
        .map(|&s| -(x - s) * (x - s) / sigma_s_sq)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut z = 0.0;
    let mut sum_s = 0.0;
    let mut sum_ss = 0.0;
    let mut sum_d = 0.0;
    let mut sum_sd = 0.0;
    for &s in points {
        let d = (x - s) * (x - s);
        let w = (-d / sigma_s_sq - max_exp).exp();
        z += w;
        sum_s += s * w;
        sum_ss += s * s * w;
        sum_d += d * w;
        sum_sd += s * d * w;
    }
    let mean = sum_s / z;
    Moments {
        mean,
        mean_sq: sum_ss / z,
        cov_s_d: sum_sd / z - mean * (sum_d / z),
    }
}

/// Elementwise soft projection of `x` onto the alphabet.
pub fn soft_threshold_forward(
    x: &[f64],
    sigma_s_sq: f64,
    m: &Constellation,
) -> Result<Vec<f64>> {
    check_sigma(sigma_s_sq)?;
    Ok(x.iter()
        .map(|&v| moments(v, sigma_s_sq, m.points()).mean)
        .collect())
}

/// Gradients of `sum_n g[n] * S(x[n])` with respect to `x` and sigma_s_sq.
///
/// dS/dx = (2 / sigma_s_sq) * Var(s) and
/// dS/dsigma_s_sq = Cov(s, (x - s)^2) / sigma_s_sq^2, both under the
/// per-entry Gibbs weights.
pub fn soft_threshold_vjp(
    x: &[f64],
    g: &[f64],
    sigma_s_sq: f64,
    m: &Constellation,
) -> Result<(Vec<f64>, f64)> {
    check_sigma(sigma_s_sq)?;
    if x.len() != g.len() {
        return Err(Error::InvalidLength(format!(
            "input length {} does not match gradient length {}",
            x.len(),
            g.len()
        )));
    }
    let mut grad_x = vec![0.0; x.len()];
    let mut grad_sigma = 0.0;
    for (i, (&v, &gi)) in x.iter().zip(g).enumerate() {
        let mo = moments(v, sigma_s_sq, m.points());
        let var = mo.mean_sq - mo.mean * mo.mean;
        grad_x[i] = gi * 2.0 / sigma_s_sq * var;
        grad_sigma += gi * mo.cov_s_d / (sigma_s_sq * sigma_s_sq);
    }
    Ok((grad_x, grad_sigma))
}
