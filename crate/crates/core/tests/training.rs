//! End-to-end training behavior on simulated trials.

use num_complex::Complex64;
use paramrx::layers::PilotPattern;
use paramrx::{
    simulate_trial, train, AugmentedVector, ChainConfig, Constellation, Error, Method,
    TrainConfig, TrialData,
};

#[test]
fn transparent_noiseless_chain_detects_perfectly() {
    let m = Constellation::qam16();
    let config = ChainConfig::transparent(200, 10, m.clone());
    for seed in [1u64, 5, 9] {
        let trial = simulate_trial(&config, f64::INFINITY, seed).unwrap();
        let cfg = TrainConfig {
            iterations: 2000,
            ..Default::default()
        };
        let result = train(&trial, &cfg, &m).unwrap();
        assert_eq!(result.final_ser(), 0.0, "seed {seed}");
    }
}

#[test]
fn reference_chain_proposed_beats_simple() {
    // Shortened version of the single-trial experiment; the full-length
    // reproduction lives in the acceptance suite.
    let m = Constellation::qam16();
    let config = ChainConfig::default();
    let trial = simulate_trial(&config, 20.0, 0).unwrap();
    let mut sers = Vec::new();
    for method in [Method::Proposed, Method::Simple] {
        let cfg = TrainConfig {
            iterations: 6000,
            method,
            ..Default::default()
        };
        sers.push(train(&trial, &cfg, &m).unwrap().final_ser());
    }
    assert!(sers[0] < 0.05, "proposed SER {}", sers[0]);
    assert!(sers[1] > sers[0], "simple {} should trail proposed {}", sers[1], sers[0]);
}

#[test]
fn non_finite_observation_aborts_with_divergence() {
    let m = Constellation::qam16();
    let pattern = PilotPattern::periodic(20, 10).unwrap();
    let mut y = AugmentedVector::zeros(20);
    y.as_mut_slice()[3] = f64::INFINITY;
    let trial = TrialData {
        y,
        s_true: vec![Complex64::new(1.0, 1.0); 20],
        pattern: pattern.clone(),
        data_truth: vec![Complex64::new(1.0, 1.0); pattern.n_data()],
        sigma_b_sq: 0.0,
    };
    let cfg = TrainConfig {
        iterations: 100,
        phase_blocks: 4,
        ..Default::default()
    };
    match train(&trial, &cfg, &m) {
        Err(Error::Divergence { iteration, trace }) => {
            assert_eq!(iteration, 1);
            assert!(trace.rows.is_empty());
        }
        other => panic!("expected divergence, got {other:?}"),
    }
}

#[test]
fn trace_cadence_and_final_row() {
    let m = Constellation::qam16();
    let config = ChainConfig::transparent(20, 10, m.clone());
    let trial = simulate_trial(&config, 25.0, 2).unwrap();
    let cfg = TrainConfig {
        iterations: 250,
        trace_every: 100,
        phase_blocks: 4,
        ..Default::default()
    };
    let result = train(&trial, &cfg, &m).unwrap();
    let iterations: Vec<usize> = result.trace.rows.iter().map(|r| r.iteration).collect();
    assert_eq!(iterations, vec![100, 200, 250]);
    for row in &result.trace.rows {
        assert!(row.mse >= 0.0 && (0.0..=1.0).contains(&row.ser));
    }
}

#[test]
fn method_variants_share_the_trial_but_differ_in_behavior() {
    let m = Constellation::qam16();
    let config = ChainConfig::default();
    let trial = simulate_trial(&config, 15.0, 4).unwrap();
    let run = |method| {
        let cfg = TrainConfig {
            iterations: 500,
            trace_every: 100,
            method,
            ..Default::default()
        };
        train(&trial, &cfg, &m).unwrap()
    };
    let proposed = run(Method::Proposed);
    let simple = run(Method::Simple);
    let pg = run(Method::ProjectedGradient { period: 250 });

    // Only the proposed variant trains sigma_s^2.
    assert!(proposed.trace.rows.iter().any(|r| r.sigma_s_sq != 1.0));
    assert!(simple.trace.rows.iter().all(|r| r.sigma_s_sq == 1.0));
    assert!(pg.trace.rows.iter().all(|r| r.sigma_s_sq == 1.0));

    // The projection at iteration 500 leaves u grid-valued; the others not.
    let on_grid = |u: &[f64]| u.iter().all(|&v| m.nearest(v) == v);
    assert!(on_grid(&pg.params.u));
    assert!(!on_grid(&simple.params.u));
}
