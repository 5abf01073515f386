//! Gates, the spinning measurement window, and the cancellation shortcut on
//! disk systems.
//!
//! Gate application splits every region termwise and never rearranges
//! slices, so the implied amplitudes stay exact. Reading probabilities off
//! the areas (`naive_probabilities`) ignores interference; `cancel` is the
//! only step that lets opposite slices annihilate, and it reports whether
//! doing so happened to be faithful.

use crate::disk::{merge_adjacent, Color, DiskSystem, Region, Sign, FRACTION_TOL, ZERO_FRACTION};
use crate::error::{Error, Result};
use crate::exact::Gate;

/// Outcome of one `cancel` pass.
#[derive(Debug, Clone, PartialEq)]
pub struct CancelReport {
    pub cancelled_pairs: usize,
    pub removed_fraction: f64,
    pub renormalization_factor: f64,
    /// Naive probabilities after cancelling agree with the exact reading of
    /// the input within 1e-9.
    pub sound: bool,
}

/// The color under the window for one measured qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOutcome {
    pub qubit: usize,
    pub color: Color,
    /// Unsigned area of `color` on this qubit's disk before the measurement.
    pub probability: f64,
    pub window_angle: f64,
}

/// Everything a spin of the window produces.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowReading {
    pub outcomes: Vec<MeasurementOutcome>,
    /// Area of the regions consistent with every observed color.
    pub probability: f64,
    pub residual: DiskSystem,
}

fn split_region<'a>(r: &'a Region, gate: &Gate, target: usize) -> impl Iterator<Item = Region> + 'a {
    let (zero, one) = gate.image(r.colors[target].bit());
    [(Color::Blue, zero), (Color::Orange, one)].into_iter().filter_map(move |(color, amp)| {
        let fraction = r.fraction * amp * amp;
        (fraction > ZERO_FRACTION).then(|| {
            let mut colors = r.colors.clone();
            colors[target] = color;
            Region::new(fraction, colors, r.sign * Sign::of(amp))
        })
    })
}

fn check_distinct(disk: &DiskSystem, qubits: &[usize]) -> Result<()> {
    if qubits.is_empty() {
        return Err(Error::EmptyQubitList);
    }
    for (i, &q) in qubits.iter().enumerate() {
        disk.check_qubit(q)?;
        if qubits[..i].contains(&q) {
            return Err(Error::DuplicateQubit(q));
        }
    }
    Ok(())
}

impl DiskSystem {
    /// Applies a single-qubit gate. Each region splits in place into its
    /// `|0⟩`-image child then its `|1⟩`-image child.
    pub fn apply_gate(&self, gate: &Gate, target: usize) -> Result<DiskSystem> {
        self.check_qubit(target)?;
        let regions = self.regions().iter().flat_map(|r| split_region(r, gate, target)).collect();
        Ok(DiskSystem::from_parts(self.n_qubits(), regions))
    }

    /// Applies `gate` to `target` only inside regions where `control` is orange.
    pub fn apply_controlled(&self, gate: &Gate, control: usize, target: usize) -> Result<DiskSystem> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::ControlEqualsTarget(control));
        }
        let mut regions = Vec::with_capacity(self.regions().len());
        for r in self.regions() {
            match r.colors[control] {
                Color::Blue => regions.push(r.clone()),
                Color::Orange => regions.extend(split_region(r, gate, target)),
            }
        }
        Ok(DiskSystem::from_parts(self.n_qubits(), regions))
    }

    /// Index of the region under the window at `angle` (fraction of a turn).
    /// Arcs are half-open: a boundary belongs to the region starting there.
    pub fn region_at(&self, angle: f64) -> usize {
        let target = angle * self.total_fraction();
        let mut end = 0.0;
        for (i, r) in self.regions().iter().enumerate() {
            end += r.fraction;
            if target < end {
                return i;
            }
        }
        self.regions().len() - 1
    }

    /// Spins the window to `random_draw` and reads `qubits` there. The
    /// residual keeps the regions matching every observed color, rescaled.
    pub fn spin_window(&self, qubits: &[usize], random_draw: f64) -> Result<WindowReading> {
        check_distinct(self, qubits)?;
        if !(0.0..1.0).contains(&random_draw) {
            return Err(Error::InvalidDraw(random_draw));
        }
        let hit = &self.regions()[self.region_at(random_draw)];
        let colors: Vec<Color> = qubits.iter().map(|&q| hit.colors[q]).collect();
        let outcomes = qubits
            .iter()
            .zip(&colors)
            .map(|(&qubit, &color)| {
                let (blue, orange) = self.marginals(qubit)?;
                let probability = if color == Color::Blue { blue } else { orange };
                Ok(MeasurementOutcome { qubit, color, probability, window_angle: random_draw })
            })
            .collect::<Result<Vec<_>>>()?;
        let (probability, residual) = self.postselect(qubits, &colors)?;
        Ok(WindowReading { outcomes, probability, residual })
    }

    /// Keeps only regions showing `colors` at `qubits`, rescaled to a full
    /// turn. Returns the kept area and the residual.
    pub fn postselect(&self, qubits: &[usize], colors: &[Color]) -> Result<(f64, DiskSystem)> {
        check_distinct(self, qubits)?;
        if qubits.len() != colors.len() {
            return Err(Error::InvalidParameter(format!(
                "{} qubits but {} colors",
                qubits.len(),
                colors.len()
            )));
        }
        let matches = |r: &Region| qubits.iter().zip(colors).all(|(&q, &c)| r.colors[q] == c);
        let kept: f64 = self.regions().iter().filter(|r| matches(r)).map(|r| r.fraction).sum();
        let probability = kept / self.total_fraction();
        if probability < 1e-12 {
            return Err(Error::ImpossibleOutcome { probability });
        }
        let regions = self
            .regions()
            .iter()
            .filter(|r| matches(r))
            .map(|r| Region::new(r.fraction / kept, r.colors.clone(), r.sign))
            .collect();
        Ok((probability, DiskSystem::from_parts(self.n_qubits(), regions)))
    }

    /// Sign-blind reading: area per outcome tuple, binary order.
    pub fn naive_probabilities(&self) -> Vec<f64> {
        let total = self.total_fraction();
        let mut out = vec![0.0; 1usize << self.n_qubits()];
        for r in self.regions() {
            out[r.outcome_index()] += r.fraction / total;
        }
        out
    }

    /// Removes pairs of same-color, equal-area, opposite-sign regions
    /// (anywhere on the disk, first pair in a clockwise scan each time),
    /// rescales what is left, then merges identical neighbours.
    pub fn cancel(&self) -> Result<(DiskSystem, CancelReport)> {
        let exact = self.decode()?.probabilities();
        let mut regions = self.regions().to_vec();
        let mut cancelled_pairs = 0;
        let mut removed_fraction = 0.0;
        while let Some((i, j)) = find_opposing_pair(&regions) {
            removed_fraction += regions[i].fraction + regions[j].fraction;
            regions.remove(j);
            regions.remove(i);
            cancelled_pairs += 1;
        }
        let kept: f64 = regions.iter().map(|r| r.fraction).sum();
        if regions.is_empty() || kept <= FRACTION_TOL {
            return Err(Error::FullyCancelled);
        }
        let renormalization_factor = 1.0 / (1.0 - removed_fraction);
        // Rescale by the actual kept area so the sum stays at one even when
        // the input had drifted slightly.
        for r in &mut regions {
            r.fraction /= kept;
        }
        let result = DiskSystem::from_parts(self.n_qubits(), merge_adjacent(regions));
        let sound =
            result.naive_probabilities().iter().zip(&exact).all(|(n, e)| (n - e).abs() <= FRACTION_TOL);
        Ok((result, CancelReport { cancelled_pairs, removed_fraction, renormalization_factor, sound }))
    }
}

fn find_opposing_pair(regions: &[Region]) -> Option<(usize, usize)> {
    regions.iter().enumerate().find_map(|(i, a)| {
        regions[i + 1..]
            .iter()
            .position(|b| {
                a.colors == b.colors && a.sign != b.sign && (a.fraction - b.fraction).abs() <= FRACTION_TOL
            })
            .map(|k| (i, i + 1 + k))
    })
}
