//! Two-stage teleportation.
//!
//! Qubit 0 is Alice's inner disk (the message), qubit 1 her outer disk
//! (half of the shared pair), qubit 2 Bob's half. The classical stage only
//! uses a CNOT and one measurement and moves a biased coin; the full stage
//! adds a Hadamard on the inner disk so the sign travels too.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::{self, Write as _};
use std::sync::OnceLock;

use crate::disk::{Color, DiskSystem};
use crate::error::Result;
use crate::exact::{bit_of, Gate, RealState};
use crate::verifier::{Lockstep, Step, StepEffect, StepReport};

const INNER: usize = 0;
const OUTER: usize = 1;
const BOB: usize = 2;

/// Shared correlated pair `(|00⟩ + |11⟩)/√2` in Gray order.
const EPR_GRAY: [f64; 4] = [FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2, 0.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Classical,
    Full,
}

/// A fix-up Bob applies after hearing Alice's outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Correction {
    /// Swap the colors.
    X,
    /// Flip the sign of the orange part.
    Z,
}

impl Correction {
    pub fn gate(self) -> Gate {
        match self {
            Correction::X => Gate::X,
            Correction::Z => Gate::Z,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Correction::X => "X",
            Correction::Z => "Z",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TeleportTranscript {
    pub input_qubit: (f64, f64),
    pub stage: Stage,
    /// Alice's inner outcome; the classical stage never measures it.
    pub m_inner: Option<u8>,
    pub m_outer: u8,
    /// Probability of the observed outcome(s).
    pub outcome_probability: f64,
    pub corrections_applied: Vec<Correction>,
    pub bob_final_disk: DiskSystem,
    pub bob_final_exact: RealState,
    pub steps: Vec<StepReport>,
    /// Disk after every step, in order.
    pub history: Vec<DiskSystem>,
}

struct Run {
    track: Lockstep,
    history: Vec<DiskSystem>,
}

impl Run {
    fn new() -> Self {
        Run { track: Lockstep::new(), history: Vec::new() }
    }

    fn apply(&mut self, step: Step) -> Result<StepEffect> {
        let (_, effect) = self.track.apply(&step)?;
        self.history.push(self.track.disk().expect("tracks exist after a step").clone());
        Ok(effect)
    }

    fn setup(&mut self, alpha: f64, beta: f64) -> Result<()> {
        self.apply(Step::Prepare { alpha, beta })?;
        self.apply(Step::PreparePair { gray: EPR_GRAY })?;
        self.apply(Step::Controlled { gate: Gate::X, control: INNER, target: OUTER })?;
        Ok(())
    }

    fn measure(&mut self, qubit: usize, draw: f64) -> Result<(u8, f64)> {
        match self.apply(Step::Measure { qubits: vec![qubit], draw })? {
            StepEffect::Measured(r) => Ok((r.outcomes[0].color.bit(), r.probability)),
            _ => unreachable!("measure step always yields a reading"),
        }
    }

    fn correct(&mut self, corrections: &[Correction]) -> Result<()> {
        for c in corrections {
            self.apply(Step::Gate { gate: c.gate(), target: BOB })?;
        }
        Ok(())
    }

    fn bob_disk(&self) -> Result<DiskSystem> {
        self.track.disk().expect("tracks exist").project(BOB)
    }
}

/// Teleports a phase-free coin with blue share `alpha_sq` (clamped to [0, 1]).
///
/// Bob's qubit stays classically correlated with Alice's inner disk, so
/// `bob_final_exact` is the phase-free state with Bob's exact marginals.
pub fn teleport_classical(alpha_sq: f64, random_draw: f64) -> Result<TeleportTranscript> {
    let alpha_sq = alpha_sq.clamp(0.0, 1.0);
    let (alpha, beta) = (alpha_sq.sqrt(), (1.0 - alpha_sq).sqrt());
    let mut run = Run::new();
    run.setup(alpha, beta)?;
    let (m_outer, outcome_probability) = run.measure(OUTER, random_draw)?;
    let corrections = if m_outer == 1 { vec![Correction::X] } else { vec![] };
    run.correct(&corrections)?;

    let exact = run.track.exact().expect("tracks exist");
    let p0 = exact.probability_of(BOB, 0)?;
    let bob_final_exact = RealState::normalized(vec![p0.sqrt(), (1.0 - p0).max(0.0).sqrt()])?;
    Ok(TeleportTranscript {
        input_qubit: (alpha, beta),
        stage: Stage::Classical,
        m_inner: None,
        m_outer,
        outcome_probability,
        corrections_applied: corrections,
        bob_final_disk: run.bob_disk()?,
        bob_final_exact,
        steps: run.track.reports().to_vec(),
        history: run.history,
    })
}

/// Full teleportation of `α|0⟩ + β|1⟩`. `random_draws[0]` spins the window
/// for the inner disk, `random_draws[1]` for the outer one.
pub fn teleport_full(alpha: f64, beta: f64, random_draws: [f64; 2]) -> Result<TeleportTranscript> {
    full(alpha, beta, Outcomes::Sampled(random_draws))
}

/// Full teleportation with Alice's outcomes forced to `(m_inner, m_outer)`.
pub fn teleport_full_branch(alpha: f64, beta: f64, m_inner: u8, m_outer: u8) -> Result<TeleportTranscript> {
    full(alpha, beta, Outcomes::Forced(m_inner, m_outer))
}

enum Outcomes {
    Sampled([f64; 2]),
    Forced(u8, u8),
}

fn full(alpha: f64, beta: f64, outcomes: Outcomes) -> Result<TeleportTranscript> {
    let mut run = Run::new();
    run.setup(alpha, beta)?;
    run.apply(Step::Gate { gate: Gate::H, target: INNER })?;
    let (m_inner, m_outer, outcome_probability) = match outcomes {
        Outcomes::Sampled([d0, d1]) => {
            let (m0, p0) = run.measure(INNER, d0)?;
            let (m1, p1) = run.measure(OUTER, d1)?;
            (m0, m1, p0 * p1)
        }
        Outcomes::Forced(m0, m1) => {
            let colors = vec![Color::from_bit(m0), Color::from_bit(m1)];
            match run.apply(Step::Postselect { qubits: vec![INNER, OUTER], colors })? {
                StepEffect::Postselected { probability } => (m0, m1, probability),
                _ => unreachable!("postselect step reports its probability"),
            }
        }
    };
    let corrections = correction_table()[m_inner as usize][m_outer as usize].clone();
    run.correct(&corrections)?;

    let exact = run.track.exact().expect("tracks exist");
    let bob_final_exact = bob_factor(exact, m_inner, m_outer)?;
    Ok(TeleportTranscript {
        input_qubit: (alpha, beta),
        stage: Stage::Full,
        m_inner: Some(m_inner),
        m_outer,
        outcome_probability,
        corrections_applied: corrections,
        bob_final_disk: run.bob_disk()?,
        bob_final_exact,
        steps: run.track.reports().to_vec(),
        history: run.history,
    })
}

/// Bob's factor of a state whose first two qubits are fixed.
fn bob_factor(state: &RealState, m_inner: u8, m_outer: u8) -> Result<RealState> {
    let n = state.n_qubits();
    let amps: Vec<f64> = (0..2u8)
        .map(|b| {
            let index = (0..state.amplitudes().len())
                .find(|&i| {
                    bit_of(i, INNER, n) == m_inner && bit_of(i, OUTER, n) == m_outer && bit_of(i, BOB, n) == b
                })
                .expect("index exists");
            state.amplitudes()[index]
        })
        .collect();
    RealState::normalized(amps)
}

const CANDIDATES: [&[Correction]; 4] =
    [&[], &[Correction::X], &[Correction::Z], &[Correction::X, Correction::Z]];

/// Outcome → correction table for the full stage, indexed `[m_inner][m_outer]`.
///
/// Derived once from the exact track: for each branch, the first candidate
/// that returns a probe state to itself (sign included) is chosen.
pub fn correction_table() -> &'static [[Vec<Correction>; 2]; 2] {
    static TABLE: OnceLock<[[Vec<Correction>; 2]; 2]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let (alpha, beta) = (0.8, -0.6);
        let input = RealState::qubit(alpha, beta).expect("probe is normalized");
        let prepared = input
            .tensor(&RealState::new(vec![FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2]).expect("pair"))
            .and_then(|s| s.apply_gate(&Gate::X, OUTER, Some(INNER)))
            .and_then(|s| s.apply_gate(&Gate::H, INNER, None))
            .expect("probe circuit is valid");
        let derive = |m_inner: u8, m_outer: u8| -> Vec<Correction> {
            let branch = prepared
                .project(INNER, m_inner)
                .and_then(|(_, s)| s.project(OUTER, m_outer))
                .and_then(|(_, s)| bob_factor(&s, m_inner, m_outer))
                .expect("every branch has probability 1/4");
            CANDIDATES
                .iter()
                .find(|cands| {
                    let fixed = cands
                        .iter()
                        .try_fold(branch.clone(), |s, c| s.apply_gate(&c.gate(), 0, None))
                        .expect("single-qubit gate");
                    fixed.overlap(&input).is_ok_and(|o| (o - 1.0).abs() < 1e-9)
                })
                .expect("one candidate restores the input")
                .to_vec()
        };
        [[derive(0, 0), derive(0, 1)], [derive(1, 0), derive(1, 1)]]
    })
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Classical => "classical",
            Stage::Full => "full",
        })
    }
}

impl TeleportTranscript {
    /// Line-oriented export: one step per line, summary last.
    pub fn transcript(&self) -> String {
        let mut out = format!(
            "# teleport {} input ({:.9}, {:.9})\n",
            self.stage, self.input_qubit.0, self.input_qubit.1
        );
        for (report, disk) in self.steps.iter().zip(&self.history) {
            let _ = writeln!(
                out,
                "{} {} gap={:.9} {} | {}",
                report.step_index,
                report.note,
                report.max_abs_gap,
                report.classification,
                crate::render::render_text(disk)
            );
        }
        let m_inner = self.m_inner.map_or_else(|| "-".to_string(), |m| m.to_string());
        let corrections: Vec<&str> = self.corrections_applied.iter().map(|c| c.name()).collect();
        let corrections = if corrections.is_empty() { "none".to_string() } else { corrections.join(",") };
        let amps = self.bob_final_exact.amplitudes();
        let _ = writeln!(
            out,
            "outcome inner={m_inner} outer={} p={:.9} corrections={corrections} bob={} exact=({:.9}, {:.9})",
            self.m_outer,
            self.outcome_probability,
            crate::render::render_text(&self.bob_final_disk),
            amps[0],
            amps[1]
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk::Sign;

    fn assert_bob(t: &TeleportTranscript, blue: f64) {
        let (b, o) = t.bob_final_disk.marginals(0).unwrap();
        assert!((b - blue).abs() < 1e-12, "{}", t.bob_final_disk);
        assert!((o - (1.0 - blue)).abs() < 1e-12);
    }

    #[test]
    fn correction_table_is_frozen() {
        use Correction::{X, Z};
        let t = correction_table();
        assert_eq!(t[0][0], vec![]);
        assert_eq!(t[0][1], vec![X]);
        assert_eq!(t[1][0], vec![Z]);
        assert_eq!(t[1][1], vec![X, Z]);
    }

    #[test]
    fn classical_seventy_thirty_both_branches() {
        let blue = teleport_classical(0.7, 0.1).unwrap();
        let orange = teleport_classical(0.7, 0.5).unwrap();
        assert_eq!(blue.m_outer, 0);
        assert_eq!(orange.m_outer, 1);
        assert!(blue.corrections_applied.is_empty());
        assert_eq!(orange.corrections_applied, vec![Correction::X]);
        for t in [&blue, &orange] {
            assert_bob(t, 0.7);
            assert_eq!(t.bob_final_disk.regions().len(), 2);
            assert!((t.outcome_probability - 0.5).abs() < 1e-12);
            let p = t.bob_final_exact.probabilities();
            assert!((p[0] - 0.7).abs() < 1e-12);
            assert!(t.steps.iter().all(|s| s.is_sound()));
            assert!(t.history.iter().all(|d| d.regions().iter().all(|r| r.sign == Sign::Plus)));
        }
    }

    #[test]
    fn classical_certain_coin() {
        let t = teleport_classical(1.0, 0.3).unwrap();
        assert_eq!(t.bob_final_disk.regions().len(), 1);
        assert_bob(&t, 1.0);
        let clamped = teleport_classical(1.7, 0.3).unwrap();
        assert_eq!(clamped.input_qubit, (1.0, 0.0));
    }

    #[test]
    fn full_72_28_all_branches() {
        let (a, b) = (0.72f64.sqrt(), 0.28f64.sqrt());
        for m0 in 0..2 {
            for m1 in 0..2 {
                let t = teleport_full_branch(a, b, m0, m1).unwrap();
                assert!((t.outcome_probability - 0.25).abs() < 1e-12);
                let r = t.bob_final_disk.regions();
                assert_eq!(r.len(), 2);
                assert!((r[0].fraction - 0.72).abs() < 1e-12 && r[0].colors == vec![Color::Blue]);
                assert!((r[1].fraction - 0.28).abs() < 1e-12 && r[1].colors == vec![Color::Orange]);
                assert!(r.iter().all(|x| x.sign == Sign::Plus));
                assert!(t.steps.iter().all(|s| s.is_sound()), "{}", t.transcript());
            }
        }
    }

    #[test]
    fn full_from_draws_matches_forced_branch() {
        let (a, b) = (0.6, -0.8);
        let t = teleport_full(a, b, [0.7, 0.2]).unwrap();
        let forced = teleport_full_branch(a, b, t.m_inner.unwrap(), t.m_outer).unwrap();
        let (got, want) = (t.bob_final_disk.regions(), forced.bob_final_disk.regions());
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(want) {
            assert!(g.same_kind(w) && (g.fraction - w.fraction).abs() < 1e-12);
        }
        assert!(t.bob_final_exact.distance(&forced.bob_final_exact) < 1e-12);
        assert!((t.outcome_probability - 0.25).abs() < 1e-12);
    }

    #[test]
    fn full_basis_input() {
        for m0 in 0..2 {
            for m1 in 0..2 {
                let t = teleport_full_branch(1.0, 0.0, m0, m1).unwrap();
                assert_eq!(t.bob_final_exact.amplitudes(), &[1.0, 0.0]);
                assert_bob(&t, 1.0);
            }
        }
    }

    #[test]
    fn two_branches_flip_colors_two_flip_signs() {
        let t = correction_table();
        let flat: Vec<&Vec<Correction>> = t.iter().flatten().collect();
        assert_eq!(flat.iter().filter(|c| c.contains(&Correction::X)).count(), 2);
        assert_eq!(flat.iter().filter(|c| c.contains(&Correction::Z)).count(), 2);
    }

    #[test]
    fn non_normalized_input_fails() {
        assert!(teleport_full(1.0, 1.0, [0.1, 0.1]).is_err());
    }

    #[test]
    fn transcript_ends_with_outcome_line() {
        let t = teleport_full(0.6, 0.8, [0.1, 0.6]).unwrap();
        let text = t.transcript();
        assert!(text.starts_with("# teleport full"));
        assert!(text.lines().last().unwrap().starts_with("outcome inner="));
        assert_eq!(text.lines().count(), t.steps.len() + 2);
    }
}
