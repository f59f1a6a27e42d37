//! Composition of the receiver layers and the reverse-mode sweep through
//! them.
//!
//! Layer order: data-augmented -> soft threshold -> IQ (tx) -> FIR ->
//! IQ (rx) -> piecewise-constant phase. The `activation` flag drops the
//! soft-threshold layer, which is how the no-activation baselines are
//! built; sigma_s^2 then receives no gradient.

use crate::augmented::AugmentedVector;
use crate::constellation::Constellation;
use crate::error::{Error, Result};
use crate::params::NetworkParams;

use super::{
    data_augmented_forward, data_augmented_vjp, fir_forward, fir_vjp, iq_forward, iq_vjp,
    phase_forward, phase_vjp, soft_threshold_forward, soft_threshold_vjp, PilotPattern,
};

/// Per-layer input snapshots from a forward pass; the sufficient statistic
/// for every layer's VJP.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    activation: bool,
    inputs: Vec<AugmentedVector>,
}

impl ForwardCache {
    /// Inputs in layer application order (the first entry is the pilot
    /// vector fed to the data-augmented layer).
    pub fn inputs(&self) -> &[AugmentedVector] {
        &self.inputs
    }
}

/// The receiver network: a pilot pattern, a constellation, and the layer
/// stack, with or without the soft-threshold activation.
#[derive(Debug, Clone, Copy)]
pub struct Network<'a> {
    pub pattern: &'a PilotPattern,
    pub constellation: &'a Constellation,
    pub activation: bool,
}

impl<'a> Network<'a> {
    pub fn new(pattern: &'a PilotPattern, constellation: &'a Constellation) -> Self {
        Self {
            pattern,
            constellation,
            activation: true,
        }
    }

    pub fn without_activation(pattern: &'a PilotPattern, constellation: &'a Constellation) -> Self {
        Self {
            pattern,
            constellation,
            activation: false,
        }
    }

    fn block_len(&self, params: &NetworkParams) -> Result<usize> {
        let n = self.pattern.n_complex();
        let blocks = params.phase_blocks();
        if blocks == 0 || !n.is_multiple_of(blocks) {
            return Err(Error::InvalidParameter(format!(
                "{blocks} phase blocks do not divide {n} samples"
            )));
        }
        Ok(n / blocks)
    }

    /// Run the layer stack on the pilot vector, recording each layer input.
    pub fn forward(
        &self,
        pilots: &AugmentedVector,
        params: &NetworkParams,
    ) -> Result<(AugmentedVector, ForwardCache)> {
        if params.n_data() != self.pattern.n_data() {
            return Err(Error::InvalidLength(format!(
                "params hold {} data symbols, pattern has {}",
                params.n_data(),
                self.pattern.n_data()
            )));
        }
        let block_len = self.block_len(params)?;
        let mut inputs = Vec::with_capacity(if self.activation { 6 } else { 5 });

        inputs.push(pilots.clone());
        let mut x = data_augmented_forward(pilots, &params.u, self.pattern)?;

        if self.activation {
            inputs.push(x.clone());
            x = AugmentedVector::new(soft_threshold_forward(
                x.as_slice(),
                params.sigma_s_sq,
                self.constellation,
            )?)?;
        }

        inputs.push(x.clone());
        x = iq_forward(&x, params.iq_tx_mu(), params.iq_tx_nu());

        inputs.push(x.clone());
        x = fir_forward(&x, &params.fir_taps())?;

        inputs.push(x.clone());
        x = iq_forward(&x, params.iq_rx_mu(), params.iq_rx_nu());

        inputs.push(x.clone());
        x = phase_forward(&x, &params.phases, block_len)?;

        let cache = ForwardCache {
            activation: self.activation,
            inputs,
        };
        Ok((x, cache))
    }

    /// Reverse-mode sweep: push an output gradient through every layer and
    /// collect the gradient of each trainable scalar.
    pub fn backward(
        &self,
        cache: &ForwardCache,
        g: &AugmentedVector,
        params: &NetworkParams,
    ) -> Result<NetworkParams> {
        if cache.activation != self.activation {
            return Err(Error::InvalidState(
                "cache was recorded with a different activation setting".into(),
            ));
        }
        let expected = if self.activation { 6 } else { 5 };
        if cache.inputs.len() != expected {
            return Err(Error::InvalidState(format!(
                "cache holds {} layer inputs, expected {expected}",
                cache.inputs.len()
            )));
        }
        let n = self.pattern.n_complex();
        if g.len() != 2 * n
            || cache.inputs[1].len() != 2 * n
            || cache.inputs[0].len() != 2 * self.pattern.n_pilots()
        {
            return Err(Error::InvalidState(
                "cache shapes do not match the pilot pattern".into(),
            ));
        }
        let block_len = self.block_len(params)?;
        let mut grads = params.zeros_like();
        let mut idx = cache.inputs.len();

        let mut g = g.clone();

        idx -= 1;
        let (gx, grad_phases) = phase_vjp(&cache.inputs[idx], &g, &params.phases, block_len)?;
        grads.phases = grad_phases;
        g = gx;

        idx -= 1;
        let (gx, grad_rx) = iq_vjp(&cache.inputs[idx], &g, params.iq_rx_mu(), params.iq_rx_nu())?;
        grads.iq_rx = grad_rx;
        g = gx;

        idx -= 1;
        let (gx, grad_fir) = fir_vjp(&cache.inputs[idx], &g, &params.fir_taps())?;
        grads.fir = grad_fir;
        g = gx;

        idx -= 1;
        let (gx, grad_tx) = iq_vjp(&cache.inputs[idx], &g, params.iq_tx_mu(), params.iq_tx_nu())?;
        grads.iq_tx = grad_tx;
        g = gx;

        if self.activation {
            idx -= 1;
            let (gx, grad_sigma) = soft_threshold_vjp(
                cache.inputs[idx].as_slice(),
                g.as_slice(),
                params.sigma_s_sq,
                self.constellation,
            )?;
            grads.sigma_s_sq = grad_sigma;
            g = AugmentedVector::new(gx)?;
        }

        grads.u = data_augmented_vjp(&g, self.pattern)?;
        Ok(grads)
    }
}
