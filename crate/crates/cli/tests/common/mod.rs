//! Oracles for the acceptance suite, independent of the library internals:
//! complex-arithmetic chain evaluation against the augmented-real
//! implementation, and finite-difference gradient checks.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;

use paramrx::layers::PilotPattern;
use paramrx::{Constellation, NetworkParams};

/// Unshifted direct evaluation of the Gibbs-weighted average.
pub fn soft_scalar_oracle(x: f64, sigma_s_sq: f64, points: &[f64]) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for &s in points {
        let w = (-(x - s) * (x - s) / sigma_s_sq).exp();
        num += s * w;
        den += w;
    }
    num / den
}

/// Complex-arithmetic evaluation of the full receiver network.
pub fn network_oracle(
    pilots: &[Complex64],
    params: &NetworkParams,
    pattern: &PilotPattern,
    m: &Constellation,
    activation: bool,
) -> Vec<Complex64> {
    let n = pattern.n_complex();
    let n_u = pattern.n_data();

    let mut s = vec![Complex64::new(0.0, 0.0); n];
    for (k, &j) in pattern.pilot_indices().iter().enumerate() {
        s[j] = pilots[k];
    }
    for (k, &j) in pattern.data_indices().iter().enumerate() {
        s[j] = Complex64::new(params.u[k], params.u[k + n_u]);
    }

    if activation {
        for c in &mut s {
            *c = Complex64::new(
                soft_scalar_oracle(c.re, params.sigma_s_sq, m.points()),
                soft_scalar_oracle(c.im, params.sigma_s_sq, m.points()),
            );
        }
    }

    let iq = |x: &[Complex64], mu: Complex64, nu: Complex64| -> Vec<Complex64> {
        x.iter().map(|&c| mu * c + nu * c.conj()).collect()
    };

    let s = iq(&s, params.iq_tx_mu(), params.iq_tx_nu());

    let taps = params.fir_taps();
    let mut conv = vec![Complex64::new(0.0, 0.0); n];
    for (i, out) in conv.iter_mut().enumerate() {
        for (k, h) in taps.iter().enumerate() {
            if k > i {
                break;
            }
            *out += h * s[i - k];
        }
    }

    let s = iq(&conv, params.iq_rx_mu(), params.iq_rx_nu());

    let block_len = n / params.phase_blocks();
    s.iter()
        .enumerate()
        .map(|(i, &c)| Complex64::from_polar(1.0, params.phases[i / block_len]) * c)
        .collect()
}

/// Central finite difference with step scaled to the operating point.
pub fn central_diff(mut f: impl FnMut(f64) -> f64, x: f64) -> f64 {
    let h = 1e-6 * x.abs().max(1.0);
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Mixed relative/absolute agreement: relative above magnitude 1, absolute
/// below (finite differences of an O(1) loss carry ~1e-9 absolute noise).
pub fn grad_close(analytic: f64, numeric: f64, tol: f64) -> bool {
    (analytic - numeric).abs() <= tol * analytic.abs().max(numeric.abs()).max(1.0)
}

pub fn random_params(
    n_data: usize,
    fir_len: usize,
    phase_blocks: usize,
    rng: &mut impl Rng,
) -> NetworkParams {
    let mut p = NetworkParams::initial(n_data, fir_len, phase_blocks);
    for v in &mut p.u {
        *v = rng.gen_range(-3.0..3.0);
    }
    p.sigma_s_sq = rng.gen_range(0.3..2.0);
    p.iq_tx = [
        rng.gen_range(0.7..1.3),
        rng.gen_range(-0.4..0.4),
        rng.gen_range(-0.4..0.4),
        rng.gen_range(-0.4..0.4),
    ];
    for v in &mut p.fir {
        *v = rng.gen_range(-0.5..0.5);
    }
    p.fir[0] = rng.gen_range(0.7..1.2);
    p.iq_rx = [
        rng.gen_range(0.7..1.6),
        rng.gen_range(-0.4..0.4),
        rng.gen_range(-0.4..0.4),
        rng.gen_range(-0.4..0.4),
    ];
    for v in &mut p.phases {
        *v = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    }
    p
}
