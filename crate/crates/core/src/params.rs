//! Trainable parameter container for the receiver network.
//!
//! Holds every trainable scalar: the data estimates `u`, the denoiser
//! spread sigma_s^2, both IQ imbalance parameter quadruples, the FIR taps
//! (real halves then imaginary halves), and the per-block phases. The same
//! struct doubles as the gradient container returned by the backward pass.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// IQ parameter quadruple layout: [Re(mu), Re(nu), Im(mu), Im(nu)].
pub const IQ_IDENTITY: [f64; 4] = [1.0, 0.0, 0.0, 0.0];

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkParams {
    /// Data estimates, real halves then imaginary halves (length 2 N_u).
    pub u: Vec<f64>,
    /// Denoiser spread sigma_s^2 (dimensionless, positive).
    pub sigma_s_sq: f64,
    /// Transmitter IQ imbalance [Re(mu), Re(nu), Im(mu), Im(nu)].
    pub iq_tx: [f64; 4],
    /// FIR taps, [Re(h); Im(h)] (length 2 D).
    pub fir: Vec<f64>,
    /// Receiver IQ imbalance [Re(mu), Re(nu), Im(mu), Im(nu)].
    pub iq_rx: [f64; 4],
    /// Per-block phases in radians (length N / N_s).
    pub phases: Vec<f64>,
}

impl NetworkParams {
    /// Standard starting point: u = 0, sigma_s^2 = 1, identity IQ stages,
    /// unit-impulse FIR, zero phases.
    pub fn initial(n_data: usize, fir_len: usize, phase_blocks: usize) -> Self {
        let mut fir = vec![0.0; 2 * fir_len];
        if fir_len > 0 {
            fir[0] = 1.0;
        }
        Self {
            u: vec![0.0; 2 * n_data],
            sigma_s_sq: 1.0,
            iq_tx: IQ_IDENTITY,
            fir,
            iq_rx: IQ_IDENTITY,
            phases: vec![0.0; phase_blocks],
        }
    }

    /// All-zero container with the same shape, used for gradients.
    pub fn zeros_like(&self) -> Self {
        Self {
            u: vec![0.0; self.u.len()],
            sigma_s_sq: 0.0,
            iq_tx: [0.0; 4],
            fir: vec![0.0; self.fir.len()],
            iq_rx: [0.0; 4],
            phases: vec![0.0; self.phases.len()],
        }
    }

    pub fn n_data(&self) -> usize {
        self.u.len() / 2
    }

    pub fn fir_len(&self) -> usize {
        self.fir.len() / 2
    }

    pub fn phase_blocks(&self) -> usize {
        self.phases.len()
    }

    /// Number of trainable scalars; sigma_s^2 is excluded for the variants
    /// that drop the denoiser layer.
    pub fn count(&self, include_sigma: bool) -> usize {
        self.u.len() + usize::from(include_sigma) + 4 + self.fir.len() + 4 + self.phases.len()
    }

    pub fn iq_tx_mu(&self) -> Complex64 {
        Complex64::new(self.iq_tx[0], self.iq_tx[2])
    }

    pub fn iq_tx_nu(&self) -> Complex64 {
        Complex64::new(self.iq_tx[1], self.iq_tx[3])
    }

    pub fn iq_rx_mu(&self) -> Complex64 {
        Complex64::new(self.iq_rx[0], self.iq_rx[2])
    }

    pub fn iq_rx_nu(&self) -> Complex64 {
        Complex64::new(self.iq_rx[1], self.iq_rx[3])
    }

    /// FIR taps as complex values.
    pub fn fir_taps(&self) -> Vec<Complex64> {
        let d = self.fir_len();
        (0..d)
            .map(|k| Complex64::new(self.fir[k], self.fir[k + d]))
            .collect()
    }

    /// Concatenate all trainable scalars in a fixed order:
    /// u, [sigma_s^2], iq_tx, fir, iq_rx, phases.
    pub fn flatten(&self, include_sigma: bool) -> Vec<f64> {
        let mut flat = Vec::with_capacity(self.count(include_sigma));
        self.flatten_into(include_sigma, &mut flat);
        flat
    }

    /// [`NetworkParams::flatten`] into a reused buffer.
    pub fn flatten_into(&self, include_sigma: bool, flat: &mut Vec<f64>) {
        flat.clear();
        flat.extend_from_slice(&self.u);
        if include_sigma {
            flat.push(self.sigma_s_sq);
        }
        flat.extend_from_slice(&self.iq_tx);
        flat.extend_from_slice(&self.fir);
        flat.extend_from_slice(&self.iq_rx);
        flat.extend_from_slice(&self.phases);
    }

    /// Inverse of [`NetworkParams::flatten`] with the same shape and flag.
    pub fn assign_from_flat(&mut self, flat: &[f64], include_sigma: bool) -> Result<()> {
        if flat.len() != self.count(include_sigma) {
            return Err(Error::InvalidLength(format!(
                "flat vector has {} entries, expected {}",
                flat.len(),
                self.count(include_sigma)
            )));
        }
        let n_u = self.u.len();
        let mut pos = 0;
        self.u.copy_from_slice(&flat[..n_u]);
        pos += n_u;
        if include_sigma {
            self.sigma_s_sq = flat[pos];
            pos += 1;
        }
        self.iq_tx.copy_from_slice(&flat[pos..pos + 4]);
        pos += 4;
        let d2 = self.fir.len();
        self.fir.copy_from_slice(&flat[pos..pos + d2]);
        pos += d2;
        self.iq_rx.copy_from_slice(&flat[pos..pos + 4]);
        pos += 4;
        self.phases.copy_from_slice(&flat[pos..]);
        Ok(())
    }
}
