//! Exact signed-real state vectors.
//!
//! This is the ground-truth track. Every disk computation is checked against
//! it, so it stays deliberately plain: dense amplitude vectors, explicit
//! random draws, no hidden state.
//!
//! Qubit `k` of an `n`-qubit state is bit `n - 1 - k` of the basis index, so
//! qubit 0 is the leftmost symbol of a ket such as `|01⟩`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use crate::error::{Error, Result};

/// Largest register the oracle accepts.
pub const MAX_QUBITS: usize = 10;

/// Tolerance for oracle arithmetic.
pub const ORACLE_TOL: f64 = 1e-12;

/// Tolerance on the norm when a caller hands in amplitudes.
pub const INPUT_NORM_TOL: f64 = 1e-9;

/// A real 2×2 unitary. `G|0⟩ = a|0⟩ + b|1⟩`, `G|1⟩ = c|0⟩ + d|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Gate {
    pub const I: Gate = Gate { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };
    pub const X: Gate = Gate { a: 0.0, b: 1.0, c: 1.0, d: 0.0 };
    pub const Z: Gate = Gate { a: 1.0, b: 0.0, c: 0.0, d: -1.0 };
    pub const H: Gate = Gate { a: FRAC_1_SQRT_2, b: FRAC_1_SQRT_2, c: FRAC_1_SQRT_2, d: -FRAC_1_SQRT_2 };

    /// Builds a gate, rejecting entries whose rows are not orthonormal.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let row0 = a * a + b * b;
        let row1 = c * c + d * d;
        let cross = a * c + b * d;
        if (row0 - 1.0).abs() > ORACLE_TOL || (row1 - 1.0).abs() > ORACLE_TOL || cross.abs() > ORACLE_TOL {
            return Err(Error::NotUnitary);
        }
        Ok(Gate { a, b, c, d })
    }

    /// Looks up one of the named presets.
    pub fn by_name(name: &str) -> Option<Gate> {
        match name {
            "I" => Some(Gate::I),
            "X" => Some(Gate::X),
            "Z" => Some(Gate::Z),
            "H" => Some(Gate::H),
            _ => None,
        }
    }

    /// Preset name, or `"U"` for anything else.
    pub fn name(&self) -> &'static str {
        [("I", Gate::I), ("X", Gate::X), ("Z", Gate::Z), ("H", Gate::H)]
            .iter()
            .find(|(_, g)| g == self)
            .map_or("U", |(n, _)| n)
    }

    /// Image of `|bit⟩` as `(amplitude on |0⟩, amplitude on |1⟩)`.
    pub fn image(&self, bit: u8) -> (f64, f64) {
        if bit == 0 {
            (self.a, self.b)
        } else {
            (self.c, self.d)
        }
    }
}

/// Value of `qubit` in basis index `index` of an `n_qubits` register.
pub fn bit_of(index: usize, qubit: usize, n_qubits: usize) -> u8 {
    ((index >> (n_qubits - 1 - qubit)) & 1) as u8
}

/// Result of measuring one qubit of a [`RealState`].
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub outcome: u8,
    pub probability: f64,
    pub residual: RealState,
}

/// Signed-real amplitude vector over `n_qubits` qubits, in binary order.
#[derive(Debug, Clone, PartialEq)]
pub struct RealState {
    n_qubits: usize,
    amplitudes: Vec<f64>,
}

fn qubit_count(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    let n = len.trailing_zeros() as usize;
    if n > MAX_QUBITS {
        return Err(Error::TooManyQubits { n_qubits: n, max: MAX_QUBITS });
    }
    Ok(n)
}

impl RealState {
    /// Builds a state from caller-supplied amplitudes. The norm must already
    /// be within 1e-9 of 1; the vector is then renormalized exactly.
    pub fn new(amplitudes: Vec<f64>) -> Result<Self> {
        let n_qubits = qubit_count(amplitudes.len())?;
        let norm = norm(&amplitudes);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        if (norm - 1.0).abs() > INPUT_NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self::scaled(n_qubits, amplitudes, norm))
    }

    /// Builds a state from any nonzero vector by dividing out its norm.
    pub fn normalized(amplitudes: Vec<f64>) -> Result<Self> {
        let n_qubits = qubit_count(amplitudes.len())?;
        let norm = norm(&amplitudes);
        if norm < INPUT_NORM_TOL || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(Self::scaled(n_qubits, amplitudes, norm))
    }

    fn scaled(n_qubits: usize, mut amplitudes: Vec<f64>, norm: f64) -> Self {
        for a in &mut amplitudes {
            *a /= norm;
        }
        RealState { n_qubits, amplitudes }
    }

    /// `α|0⟩ + β|1⟩`.
    pub fn qubit(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(vec![alpha, beta])
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits { n_qubits, max: MAX_QUBITS });
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amplitudes = vec![0.0; dim];
        amplitudes[index] = 1.0;
        Ok(RealState { n_qubits, amplitudes })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    fn check_qubit(&self, index: usize) -> Result<()> {
        if index >= self.n_qubits {
            return Err(Error::QubitOutOfRange { index, n_qubits: self.n_qubits });
        }
        Ok(())
    }

    /// Kronecker product; `self` supplies the leading qubits.
    pub fn tensor(&self, other: &RealState) -> Result<Self> {
        let n_qubits = self.n_qubits + other.n_qubits;
        if n_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits { n_qubits, max: MAX_QUBITS });
        }
        let amplitudes =
            self.amplitudes.iter().flat_map(|&x| other.amplitudes.iter().map(move |&y| x * y)).collect();
        Ok(RealState { n_qubits, amplitudes })
    }

    /// Applies `gate` to `target`, optionally conditioned on `control` being 1.
    pub fn apply_gate(&self, gate: &Gate, target: usize, control: Option<usize>) -> Result<Self> {
        self.check_qubit(target)?;
        if let Some(c) = control {
            self.check_qubit(c)?;
            if c == target {
                return Err(Error::ControlEqualsTarget(c));
            }
        }
        let n = self.n_qubits;
        let mask = 1usize << (n - 1 - target);
        let mut out = self.amplitudes.clone();
        for i0 in (0..self.amplitudes.len()).filter(|i| i & mask == 0) {
            if let Some(c) = control {
                if bit_of(i0, c, n) == 0 {
                    continue;
                }
            }
            let i1 = i0 | mask;
            let (x0, x1) = (self.amplitudes[i0], self.amplitudes[i1]);
            out[i0] = gate.a * x0 + gate.c * x1;
            out[i1] = gate.b * x0 + gate.d * x1;
        }
        Ok(RealState { n_qubits: n, amplitudes: out })
    }

    /// Born probabilities in binary order.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a * a).collect()
    }

    /// Probability that `qubit` reads `outcome`.
    pub fn probability_of(&self, qubit: usize, outcome: u8) -> Result<f64> {
        self.check_qubit(qubit)?;
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| bit_of(*i, qubit, self.n_qubits) == outcome)
            .map(|(_, a)| a * a)
            .sum())
    }

    /// Projects `target` onto `outcome` and renormalizes. Returns the branch
    /// probability alongside the residual.
    pub fn project(&self, target: usize, outcome: u8) -> Result<(f64, RealState)> {
        let probability = self.probability_of(target, outcome)?;
        if probability < ORACLE_TOL {
            return Err(Error::ImpossibleOutcome { probability });
        }
        let scale = probability.sqrt();
        let n = self.n_qubits;
        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| if bit_of(i, target, n) == outcome { a / scale } else { 0.0 })
            .collect();
        Ok((probability, RealState { n_qubits: n, amplitudes }))
    }

    /// Measures `target`: outcome 0 iff `random_draw` is below P(0).
    pub fn measure(&self, target: usize, random_draw: f64) -> Result<Measurement> {
        if !(0.0..1.0).contains(&random_draw) {
            return Err(Error::InvalidDraw(random_draw));
        }
        let p0 = self.probability_of(target, 0)?;
        let outcome = if random_draw < p0 { 0 } else { 1 };
        let (probability, residual) = self.project(target, outcome)?;
        Ok(Measurement { outcome, probability, residual })
    }

    /// Inner product `⟨self|other⟩`.
    pub fn overlap(&self, other: &RealState) -> Result<f64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch { left: self.n_qubits, right: other.n_qubits });
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(x, y)| x * y).sum())
    }

    /// Euclidean distance between amplitude vectors (infinite on mismatch).
    pub fn distance(&self, other: &RealState) -> f64 {
        if self.n_qubits != other.n_qubits {
            return f64::INFINITY;
        }
        self.amplitudes.iter().zip(&other.amplitudes).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

impl fmt::Display for RealState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.amplitudes.iter().enumerate() {
            if *a == 0.0 {
                continue;
            }
            let ket: String =
                (0..self.n_qubits).map(|q| char::from(b'0' + bit_of(i, q, self.n_qubits))).collect();
            if first {
                write!(f, "{a:+.9}|{ket}⟩")?;
            } else {
                write!(f, " {a:+.9}|{ket}⟩")?;
            }
            first = false;
        }
        Ok(())
    }
}
