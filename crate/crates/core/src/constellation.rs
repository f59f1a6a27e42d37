//! Real per-axis constellation alphabet, hard decisions, and symbol error
//! rate accounting.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

/// Ordered real alphabet; a square QAM constellation uses the same alphabet
/// on both axes.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    points: Vec<f64>,
}

impl Constellation {
    /// Build from strictly increasing, finite points (at least two).
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "constellation needs at least 2 points, got {}",
                points.len()
            )));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidParameter(
                "constellation points must be finite".into(),
            ));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "constellation points must be strictly increasing".into(),
            ));
        }
        Ok(Self { points })
    }

    /// Per-axis alphabet of unnormalized 16QAM: {-3, -1, 1, 3}.
    pub fn qam16() -> Self {
        Self {
            points: vec![-3.0, -1.0, 1.0, 3.0],
        }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn min_point(&self) -> f64 {
        self.points[0]
    }

    pub fn max_point(&self) -> f64 {
        *self.points.last().unwrap()
    }

    /// Closest alphabet point; ties break toward the smaller point.
    pub fn nearest(&self, x: f64) -> f64 {
        let mut best = self.points[0];
        let mut best_dist = (x - best).abs();
        for &p in &self.points[1..] {
            let d = (x - p).abs();
            if d < best_dist {
                best = p;
                best_dist = d;
            }
        }
        best
    }

    /// Elementwise hard projection onto the alphabet.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        x.iter().map(|&v| self.nearest(v)).collect()
    }
}

impl TryFrom<Vec<f64>> for Constellation {
    type Error = Error;

    fn try_from(points: Vec<f64>) -> Result<Self> {
        Self::new(points)
    }
}

/// Fraction of complex symbols whose hard decision differs from the truth in
/// the real or the imaginary axis.
pub fn symbol_error_rate(
    estimate: &[Complex64],
    truth: &[Complex64],
    m: &Constellation,
) -> Result<f64> {
    if estimate.len() != truth.len() {
        return Err(Error::InvalidLength(format!(
            "estimate has {} symbols, truth has {}",
            estimate.len(),
            truth.len()
        )));
    }
    if estimate.is_empty() {
        return Ok(0.0);
    }
    let errors = estimate
        .iter()
        .zip(truth)
        .filter(|(e, t)| m.nearest(e.re) != t.re || m.nearest(e.im) != t.im)
        .count();
    Ok(errors as f64 / estimate.len() as f64)
}

/// Draw `n` complex symbols with each axis uniform over the alphabet.
pub fn random_symbols(n: usize, m: &Constellation, rng: &mut impl Rng) -> Vec<Complex64> {
    let points = m.points();
    (0..n)
        .map(|_| {
            let re = points[rng.gen_range(0..points.len())];
            let im = points[rng.gen_range(0..points.len())];
            Complex64::new(re, im)
        })
        .collect()
}
