//! Augmented real-valued representation of complex baseband signals.
//!
//! A length-N complex vector is stored as a length-2N real vector holding
//! all real parts first, then all imaginary parts. Complex-linear and
//! conjugate-linear maps become plain real-linear maps in this layout,
//! which is what the layer implementations operate on.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Real vector of length 2N; complex sample `n` lives at `(values[n], values[n + N])`.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedVector {
    values: Vec<f64>,
}

impl AugmentedVector {
    /// Wrap a raw real vector. The length must be even.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if !values.len().is_multiple_of(2) {
            return Err(Error::InvalidLength(format!(
                "augmented vector length must be even, got {}",
                values.len()
            )));
        }
        Ok(Self { values })
    }

    /// All-zero vector for `n_complex` complex samples.
    pub fn zeros(n_complex: usize) -> Self {
        Self {
            values: vec![0.0; 2 * n_complex],
        }
    }

    /// Stack `[Re(x); Im(x)]` into one real vector.
    pub fn from_complex(x: &[Complex64]) -> Self {
        let n = x.len();
        let mut values = vec![0.0; 2 * n];
        for (i, c) in x.iter().enumerate() {
            values[i] = c.re;
            values[i + n] = c.im;
        }
        Self { values }
    }

    /// Rebuild the complex samples. Exact inverse of [`AugmentedVector::from_complex`].
    pub fn to_complex(&self) -> Vec<Complex64> {
        let n = self.n_complex();
        (0..n)
            .map(|i| Complex64::new(self.values[i], self.values[i + n]))
            .collect()
    }

    /// Number of complex samples represented.
    pub fn n_complex(&self) -> usize {
        self.values.len() / 2
    }

    /// Total real length (2N).
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }

    /// Real part of complex sample `n`.
    pub fn re(&self, n: usize) -> f64 {
        self.values[n]
    }

    /// Imaginary part of complex sample `n`.
    pub fn im(&self, n: usize) -> f64 {
        self.values[n + self.n_complex()]
    }

    /// True when every entry is finite.
    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}
