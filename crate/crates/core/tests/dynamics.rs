mod common;

use common::{random_state, state_strategy};
use proptest::prelude::*;
use qubobs::{Color, DiskSystem, Gate, Lockstep, RealState, Region, Sign, Step};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_step(rng: &mut impl Rng, n: usize) -> Step {
    let target = rng.random_range(0..n);
    match rng.random_range(0..if n > 1 { 4 } else { 3 }) {
        0 => Step::Gate { gate: Gate::X, target },
        1 => Step::Gate { gate: Gate::Z, target },
        2 => Step::Gate { gate: Gate::H, target },
        _ => {
            let control = (target + rng.random_range(1..n)) % n;
            Step::Controlled { gate: Gate::X, control, target }
        }
    }
}

#[test]
fn gate_track_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..1000 {
        let n = rng.random_range(1..=3);
        let mut track = Lockstep::from_state(random_state(&mut rng, n));
        for _ in 0..rng.random_range(1..=6) {
            let step = random_step(&mut rng, n);
            track.apply(&step).unwrap();
            let decoded = track.disk().unwrap().decode().unwrap();
            assert!(decoded.distance(track.exact().unwrap()) <= 1e-9, "{step}");
        }
    }
}

proptest! {
    #[test]
    fn z_flips_exactly_the_orange_signs(state in state_strategy(3), t in 0usize..3, h in 0usize..3) {
        let n = state.n_qubits();
        let (t, h) = (t % n, h % n);
        let disk = DiskSystem::encode(&state).apply_gate(&Gate::H, h).unwrap();
        let flipped = disk.apply_gate(&Gate::Z, t).unwrap();
        prop_assert_eq!(disk.regions().len(), flipped.regions().len());
        for (a, b) in disk.regions().iter().zip(flipped.regions()) {
            prop_assert_eq!(&a.colors, &b.colors);
            prop_assert_eq!(a.fraction, b.fraction);
            let want = if a.colors[t] == Color::Orange { a.sign.flipped() } else { a.sign };
            prop_assert_eq!(b.sign, want);
        }
    }

    #[test]
    fn sampling_matches_naive_reading(state in state_strategy(3)) {
        const GRID: usize = 2000;
        let disk = DiskSystem::encode(&state);
        let all: Vec<usize> = (0..state.n_qubits()).collect();
        let mut counts = vec![0usize; 1 << state.n_qubits()];
        for k in 0..GRID {
            let r = disk.spin_window(&all, (k as f64 + 0.5) / GRID as f64).unwrap();
            let idx = r.outcomes.iter().fold(0, |acc, o| (acc << 1) | usize::from(o.color.bit()));
            counts[idx] += 1;
        }
        for (c, p) in counts.iter().zip(disk.naive_probabilities()) {
            prop_assert!((*c as f64 / GRID as f64 - p).abs() <= 1.0 / GRID as f64);
        }
    }

    #[test]
    fn exact_cancellation_is_sound(state in state_strategy(2), t in 0usize..2) {
        // A single H then cancel leaves at most one term per outcome exactly
        // when the pre-H magnitudes on each pair are equal or one vanishes.
        let t = t % state.n_qubits();
        let disk = DiskSystem::encode(&state).apply_gate(&Gate::H, t).unwrap();
        let (out, report) = disk.cancel().unwrap();
        let mut terms = vec![0usize; 1 << state.n_qubits()];
        for r in out.regions() {
            terms[r.outcome_index()] += 1;
        }
        if terms.iter().all(|&k| k <= 1) {
            prop_assert!(report.sound, "{disk}");
        }
    }
}

#[test]
fn double_hadamard_on_basis_states() {
    for bit in 0..2 {
        let start = DiskSystem::encode(&RealState::basis(1, bit).unwrap());
        let twice = start.apply_gate(&Gate::H, 0).unwrap().apply_gate(&Gate::H, 0).unwrap();
        assert_eq!(twice.regions().len(), 4);
        let (out, report) = twice.cancel().unwrap();
        assert!(report.sound);
        assert_eq!(report.cancelled_pairs, 1);
        assert_eq!(out.regions().len(), 1);
        assert_eq!(out.regions()[0].colors, start.regions()[0].colors);
        assert_eq!(out.regions()[0].sign, Sign::Plus);
        assert!((out.regions()[0].fraction - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn cancel_pairs_non_adjacent_regions() {
    let disk = DiskSystem::new(
        1,
        vec![
            Region::new(0.25, vec![Color::Blue], Sign::Plus),
            Region::new(0.25, vec![Color::Orange], Sign::Plus),
            Region::new(0.25, vec![Color::Blue], Sign::Plus),
            Region::new(0.25, vec![Color::Orange], Sign::Minus),
        ],
    )
    .unwrap();
    let (out, report) = disk.cancel().unwrap();
    assert_eq!(report.cancelled_pairs, 1);
    assert!((report.removed_fraction - 0.5).abs() <= 1e-12);
    assert!((report.renormalization_factor - 2.0).abs() <= 1e-12);
    assert_eq!(out.regions().len(), 1);
}

#[test]
fn partial_measurement_of_the_outer_ring() {
    use Color::{Blue as B, Orange as O};
    let disk = DiskSystem::new(
        2,
        [(0.1, [B, B]), (0.3, [B, O]), (0.2, [O, O]), (0.4, [O, B])]
            .into_iter()
            .map(|(f, c)| Region::new(f, c.to_vec(), Sign::Plus))
            .collect(),
    )
    .unwrap();
    let exact = disk.decode().unwrap();
    for (color, p, residual) in [(B, 0.4, [0.25, 0.75]), (O, 0.6, [1.0 / 3.0, 2.0 / 3.0])] {
        let (prob, rest) = disk.postselect(&[0], &[color]).unwrap();
        assert!((prob - p).abs() <= 1e-12);
        let fr: Vec<f64> = rest.regions().iter().map(|r| r.fraction).collect();
        assert_eq!(fr.len(), 2);
        assert!((fr[0] - residual[0]).abs() <= 1e-12 && (fr[1] - residual[1]).abs() <= 1e-12);
        let (ep, eres) = exact.project(0, color.bit()).unwrap();
        assert!((ep - p).abs() <= 1e-12);
        assert!(rest.decode().unwrap().distance(&eres) <= 1e-12);
    }
}
