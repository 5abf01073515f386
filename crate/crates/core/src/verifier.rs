//! Lockstep comparison of the disk track against the exact track.
//!
//! A [`Lockstep`] carries one [`DiskSystem`] and one [`RealState`] through
//! the same operations. After every step it compares the sign-blind disk
//! reading with the Born probabilities and classifies the step. Measurements
//! are sampled on the disk and the exact track follows the same branch, so
//! the two histories stay pathwise comparable.

use std::fmt;

use crate::disk::{Color, DiskSystem, FRACTION_TOL};
use crate::dynamics::{CancelReport, WindowReading};
use crate::error::{Error, Result};
use crate::exact::{Gate, RealState};

/// Largest gap still classified as sound.
pub const SOUND_TOL: f64 = FRACTION_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Sound,
    Breakdown,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Classification::Sound => "Sound",
            Classification::Breakdown => "Breakdown",
        })
    }
}

/// Comparison of both tracks after one step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    pub step_index: usize,
    pub disk_probs: Vec<f64>,
    pub exact_probs: Vec<f64>,
    pub max_abs_gap: f64,
    pub classification: Classification,
    pub note: String,
}

impl StepReport {
    pub fn is_sound(&self) -> bool {
        self.classification == Classification::Sound
    }
}

/// Compares a disk with an exact state of the same width.
pub fn compare(disk: &DiskSystem, exact: &RealState) -> Result<StepReport> {
    if disk.n_qubits() != exact.n_qubits() {
        return Err(Error::DimensionMismatch { left: disk.n_qubits(), right: exact.n_qubits() });
    }
    let disk_probs = disk.naive_probabilities();
    let exact_probs = exact.probabilities();
    let max_abs_gap = disk_probs.iter().zip(&exact_probs).map(|(d, e)| (d - e).abs()).fold(0.0, f64::max);
    let classification =
        if max_abs_gap <= SOUND_TOL { Classification::Sound } else { Classification::Breakdown };
    Ok(StepReport {
        step_index: 0,
        disk_probs,
        exact_probs,
        max_abs_gap,
        classification,
        note: String::new(),
    })
}

/// One operation of an audited script.
#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    /// Appends a qubit `α|0⟩ + β|1⟩` to the register.
    Prepare {
        alpha: f64,
        beta: f64,
    },
    /// Appends two qubits from amplitudes in Gray order `00, 01, 11, 10`.
    PreparePair {
        gray: [f64; 4],
    },
    Gate {
        gate: Gate,
        target: usize,
    },
    Controlled {
        gate: Gate,
        control: usize,
        target: usize,
    },
    /// Hadamard immediately followed by cancellation, as one step.
    Flip {
        target: usize,
    },
    /// Spins the window and reads `qubits`.
    Measure {
        qubits: Vec<usize>,
        draw: f64,
    },
    /// Forces the listed colors, as if the window had shown them.
    Postselect {
        qubits: Vec<usize>,
        colors: Vec<Color>,
    },
    Cancel,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Prepare { alpha, beta } => write!(f, "prepare ({alpha:.6}, {beta:.6})"),
            Step::PreparePair { gray } => {
                write!(f, "prepare pair ({:.6}, {:.6}, {:.6}, {:.6})", gray[0], gray[1], gray[2], gray[3])
            }
            Step::Gate { gate, target } => write!(f, "{} q{target}", gate.name()),
            Step::Controlled { gate, control, target } => {
                write!(f, "C{} q{control}->q{target}", gate.name())
            }
            Step::Flip { target } => write!(f, "flip q{target}"),
            Step::Measure { qubits, draw } => {
                write!(f, "measure {} @ {draw:.6}", qubit_list(qubits))
            }
            Step::Postselect { qubits, colors } => {
                let c: String = colors.iter().map(|c| c.letter()).collect();
                write!(f, "postselect {} = {c}", qubit_list(qubits))
            }
            Step::Cancel => f.write_str("cancel"),
        }
    }
}

fn qubit_list(qubits: &[usize]) -> String {
    qubits.iter().map(|q| format!("q{q}")).collect::<Vec<_>>().join(",")
}

/// What a step did beyond moving both tracks forward.
#[derive(Debug, Clone, PartialEq)]
pub enum StepEffect {
    None,
    Measured(WindowReading),
    Postselected { probability: f64 },
    Cancelled(CancelReport),
}

/// Both tracks, advanced together.
#[derive(Debug, Clone, Default)]
pub struct Lockstep {
    tracks: Option<(DiskSystem, RealState)>,
    reports: Vec<StepReport>,
}

impl Lockstep {
    pub fn new() -> Self {
        Self::default()
    }

    /// Starts from an exact state, encoded onto the disk.
    pub fn from_state(state: RealState) -> Self {
        Lockstep { tracks: Some((DiskSystem::encode(&state), state)), reports: Vec::new() }
    }

    pub fn disk(&self) -> Option<&DiskSystem> {
        self.tracks.as_ref().map(|(d, _)| d)
    }

    pub fn exact(&self) -> Option<&RealState> {
        self.tracks.as_ref().map(|(_, e)| e)
    }

    pub fn reports(&self) -> &[StepReport] {
        &self.reports
    }

    pub fn into_reports(self) -> Vec<StepReport> {
        self.reports
    }

    fn current(&self) -> Result<&(DiskSystem, RealState)> {
        self.tracks.as_ref().ok_or_else(|| Error::InvalidParameter("no qubits prepared yet".into()))
    }

    fn append(&self, disk: DiskSystem, exact: RealState) -> Result<(DiskSystem, RealState)> {
        match &self.tracks {
            None => Ok((disk, exact)),
            Some((d, e)) => Ok((d.tensor(&disk), e.tensor(&exact)?)),
        }
    }

    /// Applies one step to both tracks and records the comparison.
    pub fn apply(&mut self, step: &Step) -> Result<(StepReport, StepEffect)> {
        let (next, effect) = self.advance(step)?;
        let mut report = compare(&next.0, &next.1)?;
        report.step_index = self.reports.len();
        report.note = match &effect {
            StepEffect::Measured(reading) => {
                let colors: String = reading.outcomes.iter().map(|o| o.color.letter()).collect();
                format!("{step} -> {colors}")
            }
            StepEffect::Cancelled(c) => format!(
                "{step}: {} pair(s), removed {:.9}, sound={}",
                c.cancelled_pairs, c.removed_fraction, c.sound
            ),
            _ => step.to_string(),
        };
        self.tracks = Some(next);
        self.reports.push(report.clone());
        Ok((report, effect))
    }

    fn advance(&self, step: &Step) -> Result<((DiskSystem, RealState), StepEffect)> {
        let plain = |tracks| Ok((tracks, StepEffect::None));
        match step {
            Step::Prepare { alpha, beta } => {
                let exact = RealState::qubit(*alpha, *beta)?;
                plain(self.append(DiskSystem::encode(&exact), exact)?)
            }
            Step::PreparePair { gray } => {
                let (disk, _) = DiskSystem::encode_pair(*gray)?;
                let [a00, a01, a11, a10] = *gray;
                let exact = RealState::new(vec![a00, a01, a10, a11])?;
                plain(self.append(disk, exact)?)
            }
            Step::Gate { gate, target } => {
                let (d, e) = self.current()?;
                plain((d.apply_gate(gate, *target)?, e.apply_gate(gate, *target, None)?))
            }
            Step::Controlled { gate, control, target } => {
                let (d, e) = self.current()?;
                plain((
                    d.apply_controlled(gate, *control, *target)?,
                    e.apply_gate(gate, *target, Some(*control))?,
                ))
            }
            Step::Flip { target } => {
                let (d, e) = self.current()?;
                let (disk, report) = d.apply_gate(&Gate::H, *target)?.cancel()?;
                Ok(((disk, e.apply_gate(&Gate::H, *target, None)?), StepEffect::Cancelled(report)))
            }
            Step::Measure { qubits, draw } => {
                let (d, e) = self.current()?;
                let reading = d.spin_window(qubits, *draw)?;
                let colors: Vec<Color> = reading.outcomes.iter().map(|o| o.color).collect();
                let exact = project_all(e, qubits, &colors)?;
                Ok(((reading.residual.clone(), exact), StepEffect::Measured(reading)))
            }
            Step::Postselect { qubits, colors } => {
                let (d, e) = self.current()?;
                let (probability, disk) = d.postselect(qubits, colors)?;
                let exact = project_all(e, qubits, colors)?;
                Ok(((disk, exact), StepEffect::Postselected { probability }))
            }
            Step::Cancel => {
                let (d, e) = self.current()?;
                let (disk, report) = d.cancel()?;
                Ok(((disk, e.clone()), StepEffect::Cancelled(report)))
            }
        }
    }

    /// Compares the current tracks without changing them.
    pub fn checkpoint(&self) -> Result<StepReport> {
        let (d, e) = self.current()?;
        let mut report = compare(d, e)?;
        report.step_index = self.reports.len();
        report.note = "checkpoint".into();
        Ok(report)
    }
}

fn project_all(state: &RealState, qubits: &[usize], colors: &[Color]) -> Result<RealState> {
    qubits.iter().zip(colors).try_fold(state.clone(), |s, (&q, c)| Ok(s.project(q, c.bit())?.1))
}

/// A failed step, tagged with its position in the script.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("step {step_index}: {source}")]
pub struct AuditError {
    pub step_index: usize,
    #[source]
    pub source: Error,
}

/// Replays `script` on both tracks, one report per step.
pub fn audit_run(script: &[Step]) -> Result<Vec<StepReport>, AuditError> {
    audit_from(Lockstep::new(), script)
}

/// Like [`audit_run`], starting from an already prepared state.
pub fn audit_run_from(initial: &RealState, script: &[Step]) -> Result<Vec<StepReport>, AuditError> {
    audit_from(Lockstep::from_state(initial.clone()), script)
}

fn audit_from(mut lockstep: Lockstep, script: &[Step]) -> Result<Vec<StepReport>, AuditError> {
    for (step_index, step) in script.iter().enumerate() {
        lockstep.apply(step).map_err(|source| AuditError { step_index, source })?;
    }
    Ok(lockstep.into_reports())
}

/// Renders reports as the `step gap classification` table.
pub fn audit_table(reports: &[StepReport]) -> String {
    let mut out = String::from("step  max_gap       class      note\n");
    for r in reports {
        out.push_str(&format!(
            "{:<5} {:<13.9} {:<10} {}\n",
            r.step_index, r.max_abs_gap, r.classification, r.note
        ));
    }
    out
}
