//! Data-augmented layer: scatters known pilot samples and trainable data
//! estimates into their time positions.
//!
//! The layer is the pair of binary allocation matrices that place the
//! pilot vector and the unknown vector `u`; [`PilotPattern`] is their
//! sparse encoding (one source index per output entry).

use crate::augmented::AugmentedVector;
use crate::error::{Error, Result};

/// Partition of the N complex sample positions into pilot and data slots.
#[derive(Debug, Clone, PartialEq)]
pub struct PilotPattern {
    n_complex: usize,
    pilot_indices: Vec<usize>,
    data_indices: Vec<usize>,
}

impl PilotPattern {
    /// Build from the pilot index set; data indices are the complement.
    pub fn new(n_complex: usize, mut pilot_indices: Vec<usize>) -> Result<Self> {
        pilot_indices.sort_unstable();
        pilot_indices.dedup();
        if pilot_indices.iter().any(|&i| i >= n_complex) {
            return Err(Error::InvalidParameter(format!(
                "pilot index out of range for {n_complex} symbols"
            )));
        }
        let mut is_pilot = vec![false; n_complex];
        for &i in &pilot_indices {
            is_pilot[i] = true;
        }
        let data_indices = (0..n_complex).filter(|&i| !is_pilot[i]).collect();
        Ok(Self {
            n_complex,
            pilot_indices,
            data_indices,
        })
    }

    /// One pilot every `period` symbols, starting at index 0.
    pub fn periodic(n_complex: usize, period: usize) -> Result<Self> {
        if period == 0 {
            return Err(Error::InvalidParameter("pilot period must be positive".into()));
        }
        Self::new(n_complex, (0..n_complex).step_by(period).collect())
    }

    pub fn n_complex(&self) -> usize {
        self.n_complex
    }

    pub fn n_pilots(&self) -> usize {
        self.pilot_indices.len()
    }

    pub fn n_data(&self) -> usize {
        self.data_indices.len()
    }

    pub fn pilot_indices(&self) -> &[usize] {
        &self.pilot_indices
    }

    pub fn data_indices(&self) -> &[usize] {
        &self.data_indices
    }
}

/// Scatter pilots (length 2N_x) and `u` (length 2N_u) into a full augmented
/// vector of length 2N.
pub fn data_augmented_forward(
    pilots: &AugmentedVector,
    u: &[f64],
    pattern: &PilotPattern,
) -> Result<AugmentedVector> {
    let n = pattern.n_complex();
    if pilots.len() != 2 * pattern.n_pilots() {
        return Err(Error::InvalidLength(format!(
            "pilots length {} does not match 2*{} pilot slots",
            pilots.len(),
            pattern.n_pilots()
        )));
    }
    if u.len() != 2 * pattern.n_data() {
        return Err(Error::InvalidLength(format!(
            "u length {} does not match 2*{} data slots",
            u.len(),
            pattern.n_data()
        )));
    }
    let mut out = AugmentedVector::zeros(n);
    let (n_x, n_u) = (pattern.n_pilots(), pattern.n_data());
    let v = out.as_mut_slice();
    for (k, &j) in pattern.pilot_indices().iter().enumerate() {
        v[j] = pilots.as_slice()[k];
        v[j + n] = pilots.as_slice()[k + n_x];
    }
    for (k, &j) in pattern.data_indices().iter().enumerate() {
        v[j] = u[k];
        v[j + n] = u[k + n_u];
    }
    Ok(out)
}

/// Gather an upstream gradient at the data positions: the transpose of the
/// data allocation matrix.
pub fn data_augmented_vjp(g: &AugmentedVector, pattern: &PilotPattern) -> Result<Vec<f64>> {
    let n = pattern.n_complex();
    if g.len() != 2 * n {
        return Err(Error::InvalidLength(format!(
            "gradient length {} does not match 2*{}",
            g.len(),
            n
        )));
    }
    let n_u = pattern.n_data();
    let mut grad_u = vec![0.0; 2 * n_u];
    for (k, &j) in pattern.data_indices().iter().enumerate() {
        grad_u[k] = g.as_slice()[j];
        grad_u[k + n_u] = g.as_slice()[j + n];
    }
    Ok(grad_u)
}
