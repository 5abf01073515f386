//! Signed colored regions on synchronized disks.
//!
//! A [`DiskSystem`] is one angular coordinate shared by every qubit. Each
//! [`Region`] is a slice of that turn carrying one color per qubit and a
//! sign; a per-qubit disk is the projection of the regions onto that qubit.
//! Regions are listed from 12 o'clock going clockwise.

use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{bit_of, RealState, INPUT_NORM_TOL};

/// Tolerance on fraction sums and normalization checks.
pub const FRACTION_TOL: f64 = 1e-9;

/// Children thinner than this are not stored.
pub(crate) const ZERO_FRACTION: f64 = 1e-15;

/// Blue is `|0⟩`, orange is `|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Blue,
    Orange,
}

impl Color {
    pub fn from_bit(bit: u8) -> Color {
        if bit == 0 {
            Color::Blue
        } else {
            Color::Orange
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Color::Blue => 0,
            Color::Orange => 1,
        }
    }

    pub fn flipped(self) -> Color {
        match self {
            Color::Blue => Color::Orange,
            Color::Orange => Color::Blue,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Color::Blue => 'B',
            Color::Orange => 'O',
        }
    }

    pub fn from_letter(c: char) -> Option<Color> {
        match c {
            'B' | 'b' => Some(Color::Blue),
            'O' | 'o' => Some(Color::Orange),
            _ => None,
        }
    }
}

/// A ±1 phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// Sign of `x`; zero counts as positive.
    pub fn of(x: f64) -> Sign {
        if x < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// One angular slice: an area, one color per qubit, and a sign.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub fraction: f64,
    pub colors: Vec<Color>,
    pub sign: Sign,
}

impl Region {
    pub fn new(fraction: f64, colors: Vec<Color>, sign: Sign) -> Self {
        Region { fraction, colors, sign }
    }

    /// Same colors and same sign.
    pub fn same_kind(&self, other: &Region) -> bool {
        self.sign == other.sign && self.colors == other.colors
    }

    /// Binary-order index of the outcome tuple this region stands for.
    pub fn outcome_index(&self) -> usize {
        self.colors.iter().fold(0, |acc, c| (acc << 1) | c.bit() as usize)
    }

    pub fn color_string(&self) -> String {
        self.colors.iter().map(|c| c.letter()).collect()
    }
}

/// Merges identical neighbours (linear scan, never across 12 o'clock).
pub(crate) fn merge_adjacent(regions: Vec<Region>) -> Vec<Region> {
    let mut out: Vec<Region> = Vec::with_capacity(regions.len());
    for r in regions {
        match out.last_mut() {
            Some(last) if last.same_kind(&r) => last.fraction += r.fraction,
            _ => out.push(r),
        }
    }
    out
}

/// Reflected binary Gray code over `n_qubits` bits, as basis indices.
pub fn gray_order(n_qubits: usize) -> Vec<usize> {
    (0..1usize << n_qubits).map(|i| i ^ (i >> 1)).collect()
}

/// The synchronized disk system: a cyclic list of regions sharing one angle.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskSystem {
    n_qubits: usize,
    regions: Vec<Region>,
}

impl DiskSystem {
    /// Validates a region list and merges identical neighbours.
    pub fn new(n_qubits: usize, regions: Vec<Region>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidParameter("a disk system needs at least one qubit".into()));
        }
        if regions.is_empty() {
            return Err(Error::EmptyDisk);
        }
        for r in &regions {
            if !(r.fraction > 0.0 && r.fraction <= 1.0 + FRACTION_TOL) {
                return Err(Error::InvalidFraction(r.fraction));
            }
            if r.colors.len() != n_qubits {
                return Err(Error::ColorArity { expected: n_qubits, found: r.colors.len() });
            }
        }
        let total: f64 = regions.iter().map(|r| r.fraction).sum();
        if (total - 1.0).abs() > FRACTION_TOL {
            return Err(Error::FractionSum(total));
        }
        Ok(DiskSystem { n_qubits, regions: merge_adjacent(regions) })
    }

    /// Internal constructor for operations whose output is valid by construction.
    pub(crate) fn from_parts(n_qubits: usize, regions: Vec<Region>) -> Self {
        debug_assert!(!regions.is_empty());
        debug_assert!(regions.iter().all(|r| r.colors.len() == n_qubits));
        DiskSystem { n_qubits, regions }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn total_fraction(&self) -> f64 {
        self.regions.iter().map(|r| r.fraction).sum()
    }

    pub(crate) fn check_qubit(&self, index: usize) -> Result<()> {
        if index >= self.n_qubits {
            return Err(Error::QubitOutOfRange { index, n_qubits: self.n_qubits });
        }
        Ok(())
    }

    /// One-qubit disk for `α|0⟩ + β|1⟩`: blue from the top, then orange.
    pub fn encode_qubit(alpha: f64, beta: f64) -> Result<Self> {
        let norm_sq = alpha * alpha + beta * beta;
        if (norm_sq - 1.0).abs() > INPUT_NORM_TOL {
            return Err(Error::NotNormalized { norm: norm_sq.sqrt() });
        }
        Ok(Self::encode(&RealState::normalized(vec![alpha, beta])?))
    }

    /// Encodes any exact state, one region per nonzero amplitude, in Gray
    /// order from the top.
    pub fn encode(state: &RealState) -> Self {
        let n = state.n_qubits();
        let amps = state.amplitudes();
        let regions = gray_order(n)
            .into_iter()
            .filter_map(|i| {
                let fraction = amps[i] * amps[i];
                (fraction > ZERO_FRACTION).then(|| {
                    let colors = (0..n).map(|q| Color::from_bit(bit_of(i, q, n))).collect();
                    Region::new(fraction, colors, Sign::of(amps[i]))
                })
            })
            .collect();
        DiskSystem::from_parts(n, regions)
    }

    /// Two-qubit encoding from amplitudes in Gray order `00, 01, 11, 10`,
    /// together with the aligned-disk view of the magnitudes.
    pub fn encode_pair(gray: [f64; 4]) -> Result<(Self, AlignedPair)> {
        let [a00, a01, a11, a10] = gray;
        let state = RealState::new(vec![a00, a01, a10, a11])?;
        let amps = state.amplitudes();
        let (alpha, beta, delta) = (amps[0], amps[1], amps[2]);
        let pair =
            AlignedPair::new(alpha * alpha + beta * beta, alpha * alpha + delta * delta, alpha * alpha)?;
        Ok((Self::encode(&state), pair))
    }

    /// Reads the state back: each outcome's amplitude is the sum of
    /// `sign·√fraction` over its regions, renormalized.
    pub fn decode(&self) -> Result<RealState> {
        let mut amps = vec![0.0; 1usize << self.n_qubits];
        for r in &self.regions {
            amps[r.outcome_index()] += r.sign.value() * r.fraction.sqrt();
        }
        RealState::normalized(amps).map_err(|e| match e {
            Error::ZeroVector => Error::FullyCancelled,
            other => other,
        })
    }

    /// Product disk: every region of `other` nested inside each region of `self`.
    pub fn tensor(&self, other: &DiskSystem) -> Self {
        let regions = self
            .regions
            .iter()
            .flat_map(|r| {
                other.regions.iter().map(move |s| {
                    let mut colors = r.colors.clone();
                    colors.extend_from_slice(&s.colors);
                    Region::new(r.fraction * s.fraction, colors, r.sign * s.sign)
                })
            })
            .collect();
        DiskSystem::from_parts(self.n_qubits + other.n_qubits, regions)
    }

    /// Unsigned blue and orange area of one qubit's disk.
    pub fn marginals(&self, qubit: usize) -> Result<(f64, f64)> {
        self.check_qubit(qubit)?;
        Ok(self.regions.iter().fold((0.0, 0.0), |(b, o), r| match r.colors[qubit] {
            Color::Blue => (b + r.fraction, o),
            Color::Orange => (b, o + r.fraction),
        }))
    }

    /// The single-qubit disk seen through one qubit's window. Boundaries
    /// between regions of the same color and sign disappear.
    pub fn project(&self, qubit: usize) -> Result<DiskSystem> {
        self.check_qubit(qubit)?;
        let regions =
            self.regions.iter().map(|r| Region::new(r.fraction, vec![r.colors[qubit]], r.sign)).collect();
        Ok(DiskSystem::from_parts(1, merge_adjacent(regions)))
    }

    /// Start of each region as a fraction of a full turn.
    pub fn boundaries(&self) -> Vec<f64> {
        self.regions
            .iter()
            .scan(0.0, |acc, r| {
                let start = *acc;
                *acc += r.fraction;
                Some(start)
            })
            .collect()
    }
}

/// Canonical text form: one region per line, `fraction colors sign`.
impl fmt::Display for DiskSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.regions {
            writeln!(f, "{:.9} {} {}", r.fraction, r.color_string(), r.sign.symbol())?;
        }
        Ok(())
    }
}

/// Two single-qubit disks lined up at offset `theta`: qubit 1 is blue for
/// `p` of the turn from the top, qubit 2 is orange from `theta` for `1 - pp`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlignedPair {
    pub p: f64,
    pub q: f64,
    pub pp: f64,
    pub qp: f64,
    pub theta: f64,
}

impl AlignedPair {
    pub fn new(p: f64, pp: f64, theta: f64) -> Result<Self> {
        let within = |x: f64| (-FRACTION_TOL..=1.0 + FRACTION_TOL).contains(&x);
        if !within(p) || !within(pp) {
            return Err(Error::InvalidAlignment(format!("shares {p}, {pp} outside [0, 1]")));
        }
        let lo = (p + pp - 1.0).max(0.0);
        let hi = p.min(pp);
        if theta < lo - FRACTION_TOL || theta > hi + FRACTION_TOL || theta >= 1.0 {
            return Err(Error::InvalidAlignment(format!("theta {theta} outside [{lo}, {hi}]")));
        }
        let p = p.clamp(0.0, 1.0);
        let pp = pp.clamp(0.0, 1.0);
        Ok(AlignedPair { p, q: 1.0 - p, pp, qp: 1.0 - pp, theta: theta.clamp(lo, hi) })
    }

    /// Joint areas in Gray order `00, 01, 11, 10`.
    pub fn areas(&self) -> [f64; 4] {
        let AlignedPair { p, pp, theta, .. } = *self;
        [theta, p - theta, 1.0 - p - pp + theta, pp - theta].map(|a| a.max(0.0))
    }

    /// The phase-free state the alignment stands for, in binary order.
    pub fn state(&self) -> Result<RealState> {
        let [a00, a01, a11, a10] = self.areas().map(f64::sqrt);
        RealState::normalized(vec![a00, a01, a10, a11])
    }

    /// Stacked disk with the four areas in Gray order (zero areas omitted).
    pub fn to_disk(&self) -> DiskSystem {
        use Color::{Blue as B, Orange as O};
        let tuples = [[B, B], [B, O], [O, O], [O, B]];
        let regions = self
            .areas()
            .into_iter()
            .zip(tuples)
            .filter(|(a, _)| *a > ZERO_FRACTION)
            .map(|(a, t)| Region::new(a, t.to_vec(), Sign::Plus))
            .collect();
        DiskSystem::from_parts(2, regions)
    }
}
