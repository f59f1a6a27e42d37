//! Piecewise-constant phase layer: sample n is rotated by the phase of its
//! block, x_o[n] = exp(j * phi[floor(n / block_len)]) * x_i[n].
//!
//! One trainable phase per block of `block_len` consecutive samples; the
//! block count times the block length must equal the signal length.

use crate::augmented::AugmentedVector;
use crate::error::{Error, Result};

fn check_blocks(n: usize, phases: &[f64], block_len: usize) -> Result<()> {
    if block_len == 0 {
        return Err(Error::InvalidParameter("block length must be positive".into()));
    }
    if !n.is_multiple_of(block_len) {
        return Err(Error::InvalidParameter(format!(
            "signal length {n} is not divisible by block length {block_len}"
        )));
    }
    if phases.len() != n / block_len {
        return Err(Error::InvalidParameter(format!(
            "expected {} phases for {} samples in blocks of {}, got {}",
            n / block_len,
            n,
            block_len,
            phases.len()
        )));
    }
    Ok(())
}

/// Rotate each block by its phase.
pub fn phase_forward(
    x: &AugmentedVector,
    phases: &[f64],
    block_len: usize,
) -> Result<AugmentedVector> {
    let n = x.n_complex();
    check_blocks(n, phases, block_len)?;
    let v = x.as_slice();
    let mut out = AugmentedVector::zeros(n);
    let o = out.as_mut_slice();
    for (m, &phi) in phases.iter().enumerate() {
        let (c, s) = (phi.cos(), phi.sin());
        for i in m * block_len..(m + 1) * block_len {
            let (a, b) = (v[i], v[i + n]);
            o[i] = c * a - s * b;
            o[i + n] = s * a + c * b;
        }
    }
    Ok(out)
}

/// Gradients of `<g, phase_forward(x)>`.
///
/// The input gradient rotates `g` back by each block's phase; the phase
/// gradient of block m accumulates Im(conj(x[n]) * (e^{-j phi} g[n])) over
/// the block.
pub fn phase_vjp(
    x: &AugmentedVector,
    g: &AugmentedVector,
    phases: &[f64],
    block_len: usize,
) -> Result<(AugmentedVector, Vec<f64>)> {
    let n = x.n_complex();
    check_blocks(n, phases, block_len)?;
    if g.len() != x.len() {
        return Err(Error::InvalidLength(format!(
            "input length {} does not match gradient length {}",
            x.len(),
            g.len()
        )));
    }
    let xv = x.as_slice();
    let gv = g.as_slice();
    let mut grad_x = AugmentedVector::zeros(n);
    let gx = grad_x.as_mut_slice();
    let mut grad_phases = vec![0.0; phases.len()];
    for (m, &phi) in phases.iter().enumerate() {
        let (c, s) = (phi.cos(), phi.sin());
        let mut acc = 0.0;
        for i in m * block_len..(m + 1) * block_len {
            let (gr, gi) = (gv[i], gv[i + n]);
            let br = c * gr + s * gi;
            let bi = c * gi - s * gr;
            gx[i] = br;
            gx[i + n] = bi;
            // Im(conj(x) * back-rotated g)
            acc += xv[i] * bi - xv[i + n] * br;
        }
        grad_phases[m] = acc;
    }
    Ok((grad_x, grad_phases))
}
