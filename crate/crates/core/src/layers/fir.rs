//! Causal FIR channel layer: x_o[n] = sum_k h[k] * x_i[n - k], with zero
//! padding for n - k < 0. Output length equals input length; trainable
//! parameters are the 2D reals [Re(h); Im(h)].

use num_complex::Complex64;

use crate::augmented::AugmentedVector;
use crate::error::{Error, Result};

fn check_taps(taps: &[Complex64]) -> Result<()> {
    if taps.is_empty() {
        return Err(Error::InvalidParameter("FIR taps must be nonempty".into()));
    }
    Ok(())
}

/// Causal complex convolution on the augmented representation.
pub fn fir_forward(x: &AugmentedVector, taps: &[Complex64]) -> Result<AugmentedVector> {
    check_taps(taps)?;
    let n = x.n_complex();
    let v = x.as_slice();
    let mut out = AugmentedVector::zeros(n);
    let o = out.as_mut_slice();
    for i in 0..n {
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, h) in taps.iter().enumerate().take(i + 1) {
            let (a, b) = (v[i - k], v[i - k + n]);
            re += h.re * a - h.im * b;
            im += h.re * b + h.im * a;
        }
        o[i] = re;
        o[i + n] = im;
    }
    Ok(out)
}

/// Gradients of `<g, fir_forward(x)>`.
///
/// The input gradient is the anticausal correlation of `g` with the
/// conjugated taps; the tap gradient accumulates conj(x[n-k]) * g[n] and is
/// returned as the 2D reals [Re; Im] matching the parameter layout.
pub fn fir_vjp(
    x: &AugmentedVector,
    g: &AugmentedVector,
    taps: &[Complex64],
) -> Result<(AugmentedVector, Vec<f64>)> {
    check_taps(taps)?;
    if x.len() != g.len() {
        return Err(Error::InvalidLength(format!(
            "input length {} does not match gradient length {}",
            x.len(),
            g.len()
        )));
    }
    let n = x.n_complex();
    let d = taps.len();
    let xv = x.as_slice();
    let gv = g.as_slice();

    let mut grad_x = AugmentedVector::zeros(n);
    let gx = grad_x.as_mut_slice();
    for m in 0..n {
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, h) in taps.iter().enumerate() {
            let i = m + k;
            if i >= n {
                break;
            }
            let (gr, gi) = (gv[i], gv[i + n]);
            re += h.re * gr + h.im * gi;
            im += h.re * gi - h.im * gr;
        }
        gx[m] = re;
        gx[m + n] = im;
    }

    let mut grad_h = vec![0.0; 2 * d];
    for k in 0..d {
        let mut re = 0.0;
        let mut im = 0.0;
        for i in k..n {
            let (a, b) = (xv[i - k], xv[i - k + n]);
            let (gr, gi) = (gv[i], gv[i + n]);
            re += a * gr + b * gi;
            im += a * gi - b * gr;
        }
        grad_h[k] = re;
        grad_h[k + d] = im;
    }
    Ok((grad_x, grad_h))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn unit_impulse_is_identity() {
        let x = AugmentedVector::from_complex(&[cx(1.0, 2.0), cx(-0.5, 0.25), cx(3.0, -3.0)]);
        let taps = vec![cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0)];
        assert_eq!(fir_forward(&x, &taps).unwrap(), x);
    }

    #[test]
    fn delayed_impulse_shifts_by_one() {
        let x = AugmentedVector::from_complex(&[cx(1.0, 1.0), cx(2.0, -2.0), cx(3.0, 0.0)]);
        let out = fir_forward(&x, &[cx(0.0, 0.0), cx(1.0, 0.0)]).unwrap();
        let c = out.to_complex();
        assert_eq!(c[0], cx(0.0, 0.0));
        assert_eq!(c[1], cx(1.0, 1.0));
        assert_eq!(c[2], cx(2.0, -2.0));
    }

    #[test]
    fn empty_taps_rejected() {
        let x = AugmentedVector::zeros(4);
        assert!(fir_forward(&x, &[]).is_err());
        assert!(fir_vjp(&x, &x, &[]).is_err());
    }

    #[test]
    fn single_tap_vjp_back_maps_conjugate() {
        // h = [1]: grad_x == g; h = [j]: grad_x == -j * g.
        let x = AugmentedVector::zeros(2);
        let g = AugmentedVector::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let (gx, _) = fir_vjp(&x, &g, &[cx(1.0, 0.0)]).unwrap();
        assert_eq!(gx, g);
        let (gx, _) = fir_vjp(&x, &g, &[cx(0.0, 1.0)]).unwrap();
        assert_eq!(gx.as_slice(), &[3.0, 4.0, -1.0, -2.0]);
    }

    #[test]
    fn zero_gradient_gives_zeros() {
        let x = AugmentedVector::from_complex(&[cx(1.0, -1.0), cx(2.0, 0.5)]);
        let g = AugmentedVector::zeros(2);
        let (gx, gh) = fir_vjp(&x, &g, &[cx(0.3, 0.1), cx(-0.2, 0.4)]).unwrap();
        assert!(gx.as_slice().iter().all(|&v| v == 0.0));
        assert!(gh.iter().all(|&v| v == 0.0));
    }
}
