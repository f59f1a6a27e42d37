//! IQ imbalance layer: x_o[n] = mu * x_i[n] + nu * conj(x_i[n]).
//!
//! The conjugate term makes the map conjugate-linear in complex arithmetic
//! but plain linear on the augmented representation, which is the whole
//! point of the stacked layout. Trainable parameters are the four reals
//! [Re(mu), Re(nu), Im(mu), Im(nu)].

use num_complex::Complex64;

use crate::augmented::AugmentedVector;
use crate::error::{Error, Result};

/// Apply the imbalance map elementwise.
pub fn iq_forward(x: &AugmentedVector, mu: Complex64, nu: Complex64) -> AugmentedVector {
    let n = x.n_complex();
    let v = x.as_slice();
    let mut out = AugmentedVector::zeros(n);
    let o = out.as_mut_slice();
    for i in 0..n {
        let (a, b) = (v[i], v[i + n]);
        o[i] = (mu.re + nu.re) * a + (nu.im - mu.im) * b;
        o[i + n] = (mu.im + nu.im) * a + (mu.re - nu.re) * b;
    }
    out
}

/// Gradients of `<g, iq_forward(x)>` with respect to the input and the four
/// imbalance parameters (ordered [Re(mu), Re(nu), Im(mu), Im(nu)]).
///
/// The input gradient is conj(mu) * g + nu * conj(g) in complex form.
pub fn iq_vjp(
    x: &AugmentedVector,
    g: &AugmentedVector,
    mu: Complex64,
    nu: Complex64,
) -> Result<(AugmentedVector, [f64; 4])> {
    if x.len() != g.len() {
        return Err(Error::InvalidLength(format!(
            "input length {} does not match gradient length {}",
            x.len(),
            g.len()
        )));
    }
    let n = x.n_complex();
    let xv = x.as_slice();
    let gv = g.as_slice();
    let mut grad_x = AugmentedVector::zeros(n);
    let gx = grad_x.as_mut_slice();
    let mut theta = [0.0; 4];
    for i in 0..n {
        let (a, b) = (xv[i], xv[i + n]);
        let (gr, gi) = (gv[i], gv[i + n]);
        gx[i] = (mu.re + nu.re) * gr + (mu.im + nu.im) * gi;
        gx[i + n] = (nu.im - mu.im) * gr + (mu.re - nu.re) * gi;
        theta[0] += a * gr + b * gi; // d/d Re(mu)
        theta[1] += a * gr - b * gi; // d/d Re(nu)
        theta[2] += a * gi - b * gr; // d/d Im(mu)
        theta[3] += b * gr + a * gi; // d/d Im(nu)
    }
    Ok((grad_x, theta))
}
