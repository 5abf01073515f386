#![allow(dead_code)]

use proptest::prelude::*;
use qubobs::RealState;
use rand::Rng;

/// Random signed-real state whose nonzero probabilities stay well above the
/// measurement cutoff. About one component in six is exactly zero.
pub fn random_state(rng: &mut impl Rng, n_qubits: usize) -> RealState {
    loop {
        let amps: Vec<f64> = (0..1usize << n_qubits)
            .map(|_| if rng.random_bool(1.0 / 6.0) { 0.0 } else { rng.random_range(-1.0..1.0) })
            .collect();
        let norm = amps.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm < 0.2 {
            continue;
        }
        let state = RealState::normalized(amps).unwrap();
        if state.probabilities().iter().all(|&p| p == 0.0 || p > 1e-6) {
            return state;
        }
    }
}

/// Proptest strategy for the same distribution, widths 1 to `max_qubits`.
pub fn state_strategy(max_qubits: usize) -> impl Strategy<Value = RealState> {
    (1..=max_qubits)
        .prop_flat_map(|n| prop::collection::vec(prop_oneof![1 => Just(0.0), 5 => -1.0f64..1.0], 1usize << n))
        .prop_filter("norm bounded away from zero", |v| v.iter().map(|a| a * a).sum::<f64>() > 0.04)
        .prop_map(|v| RealState::normalized(v).unwrap())
        .prop_filter("no vanishing branch", |s| s.probabilities().iter().all(|&p| p == 0.0 || p > 1e-6))
}

/// Equal up to a global sign, within `tol` per amplitude.
pub fn same_ray(a: &RealState, b: &RealState, tol: f64) -> bool {
    a.distance(b) <= tol || {
        let neg = RealState::new(b.amplitudes().iter().map(|x| -x).collect()).unwrap();
        a.distance(&neg) <= tol
    }
}
