use std::fmt::{self, Write as _};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::Gate;
use crate::verifier::{Classification, Lockstep, Step, StepEffect, StepReport};

/// Preparation / measurement basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Standard,
    Hadamard,
}

impl Basis {
    fn from_bool(h: bool) -> Basis {
        if h {
            Basis::Hadamard
        } else {
            Basis::Standard
        }
    }

    pub fn letter(self) -> char {
        match self {
            Basis::Standard => 'S',
            Basis::Hadamard => 'H',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bb84Params {
    pub rounds: usize,
    pub eve_present: bool,
    pub seed: u64,
    /// Share of the sifted rounds disclosed to estimate the error rate.
    pub sample_fraction: f64,
}

impl Default for Bb84Params {
    /// The classroom kit: eight envelopes, nobody listening.
    fn default() -> Self {
        Bb84Params { rounds: 8, eve_present: false, seed: 0, sample_fraction: 0.5 }
    }
}

impl Bb84Params {
    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(Error::InvalidParameter("rounds must be at least 1".into()));
        }
        if !(self.sample_fraction > 0.0 && self.sample_fraction < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "sample_fraction {} outside (0, 1)",
                self.sample_fraction
            )));
        }
        Ok(())
    }
}

/// One row of the results grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Bb84Round {
    pub alice_bit: u8,
    pub alice_basis: Basis,
    pub eve_basis: Option<Basis>,
    pub eve_outcome: Option<u8>,
    pub bob_basis: Basis,
    pub bob_outcome: u8,
    pub sifted: bool,
}

/// Aggregate of the per-step track comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AuditSummary {
    pub steps: usize,
    pub breakdowns: usize,
    pub max_gap: f64,
}

impl AuditSummary {
    pub fn record(&mut self, reports: &[StepReport]) {
        for r in reports {
            self.steps += 1;
            self.max_gap = self.max_gap.max(r.max_abs_gap);
            if r.classification == Classification::Breakdown {
                self.breakdowns += 1;
            }
        }
    }

    pub fn all_sound(&self) -> bool {
        self.breakdowns == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bb84Run {
    pub rounds: Vec<Bb84Round>,
    pub sifted_key_alice: Vec<u8>,
    pub sifted_key_bob: Vec<u8>,
    /// Positions in the sifted keys disclosed for error estimation, ascending.
    pub sample: Vec<usize>,
    /// Error rate on the disclosed sample; `None` when nothing was sifted.
    pub qber: Option<f64>,
    pub audit: AuditSummary,
}

fn measure(track: &mut Lockstep, basis: Basis, draw: f64) -> Result<u8> {
    if basis == Basis::Hadamard {
        track.apply(&Step::Flip { target: 0 })?;
    }
    match track.apply(&Step::Measure { qubits: vec![0], draw })?.1 {
        StepEffect::Measured(reading) => Ok(reading.outcomes[0].color.bit()),
        _ => unreachable!("measure step always yields a reading"),
    }
}

fn prepare(track: &mut Lockstep, bit: u8, basis: Basis) -> Result<()> {
    let (alpha, beta) = if bit == 0 { (1.0, 0.0) } else { (0.0, 1.0) };
    track.apply(&Step::Prepare { alpha, beta })?;
    if basis == Basis::Hadamard {
        track.apply(&Step::Gate { gate: Gate::H, target: 0 })?;
    }
    Ok(())
}

/// Runs BB84 with an optional intercept-resend eavesdropper.
///
/// Draws per round, in order: Alice's bit, Alice's basis, Eve's basis (if
/// present), Bob's basis, Eve's window draw (if present), Bob's window draw.
/// The estimation sample is drawn from the same stream after the last round.
pub fn bb84_run(params: &Bb84Params) -> Result<Bb84Run> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut rounds = Vec::with_capacity(params.rounds);
    let mut audit = AuditSummary::default();

    for _ in 0..params.rounds {
        let alice_bit = u8::from(rng.random::<bool>());
        let alice_basis = Basis::from_bool(rng.random());
        let eve_basis = params.eve_present.then(|| Basis::from_bool(rng.random()));
        let bob_basis = Basis::from_bool(rng.random());
        let eve_draw = params.eve_present.then(|| rng.random::<f64>());
        let bob_draw: f64 = rng.random();

        let mut track = Lockstep::new();
        prepare(&mut track, alice_bit, alice_basis)?;
        let eve_outcome = match (eve_basis, eve_draw) {
            (Some(basis), Some(draw)) => {
                let seen = measure(&mut track, basis, draw)?;
                if basis == Basis::Hadamard {
                    track.apply(&Step::Gate { gate: Gate::H, target: 0 })?;
                }
                Some(seen)
            }
            _ => None,
        };
        let bob_outcome = measure(&mut track, bob_basis, bob_draw)?;
        audit.record(track.reports());

        rounds.push(Bb84Round {
            alice_bit,
            alice_basis,
            eve_basis,
            eve_outcome,
            bob_basis,
            bob_outcome,
            sifted: alice_basis == bob_basis,
        });
    }

    let (sifted_key_alice, sifted_key_bob): (Vec<u8>, Vec<u8>) =
        rounds.iter().filter(|r| r.sifted).map(|r| (r.alice_bit, r.bob_outcome)).unzip();
    let n_sifted = sifted_key_alice.len();
    let sample_size = ((n_sifted as f64) * params.sample_fraction).ceil() as usize;
    let mut sample = index::sample(&mut rng, n_sifted, sample_size.min(n_sifted)).into_vec();
    sample.sort_unstable();
    let qber = (!sample.is_empty()).then(|| {
        let errors = sample.iter().filter(|&&i| sifted_key_alice[i] != sifted_key_bob[i]).count();
        errors as f64 / sample.len() as f64
    });

    Ok(Bb84Run { rounds, sifted_key_alice, sifted_key_bob, sample, qber, audit })
}

fn bit_or_dash(x: Option<impl fmt::Display>) -> String {
    x.map_or_else(|| "-".to_string(), |v| v.to_string())
}

impl Bb84Run {
    pub fn sifted_count(&self) -> usize {
        self.sifted_key_alice.len()
    }

    /// Disagreements between the full sifted keys.
    pub fn key_mismatches(&self) -> usize {
        self.sifted_key_alice.iter().zip(&self.sifted_key_bob).filter(|(a, b)| a != b).count()
    }

    /// The results grid, one round per line, summary line last.
    pub fn transcript(&self) -> String {
        let mut out = String::from(
            "# round alice_bit alice_basis eve_basis eve_outcome bob_basis bob_outcome sifted\n",
        );
        for (i, r) in self.rounds.iter().enumerate() {
            let _ = writeln!(
                out,
                "{} {} {} {} {} {} {} {}",
                i + 1,
                r.alice_bit,
                r.alice_basis.letter(),
                bit_or_dash(r.eve_basis.map(Basis::letter)),
                bit_or_dash(r.eve_outcome),
                r.bob_basis.letter(),
                r.bob_outcome,
                if r.sifted { 'y' } else { 'n' }
            );
        }
        let errors =
            self.sample.iter().filter(|&&i| self.sifted_key_alice[i] != self.sifted_key_bob[i]).count();
        let qber = self.qber.map_or_else(|| "undefined".to_string(), |q| format!("{q:.6}"));
        let _ = writeln!(
            out,
            "qber {qber} sifted {} sample {} errors {} breakdowns {}",
            self.sifted_count(),
            self.sample.len(),
            errors,
            self.audit.breakdowns
        );
        out
    }
}
