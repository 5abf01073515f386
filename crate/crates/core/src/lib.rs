//! Slice-disk simulator for small registers of real-amplitude qubits.
//!
//! A qubit is a disk cut into blue and orange slices whose areas are the
//! squared amplitudes, with a sign on each slice. Several qubits share one
//! disk whose regions carry one color per qubit. Gates split and recolor
//! regions, measurement spins a window over the disk, and cancellation
//! removes pairs of opposite-signed regions.
//!
//! Everything runs next to an exact state-vector track ([`exact::RealState`])
//! and the [`verifier`] reports, step by step, whether the sign-blind disk
//! reading still matches the Born probabilities.
//!
//! ```
//! use qubobs::{DiskSystem, Gate, RealState};
//!
//! let s = std::f64::consts::FRAC_1_SQRT_2;
//! let plus = RealState::qubit(s, s)?;
//! let disk = DiskSystem::encode(&plus).apply_gate(&Gate::H, 0)?;
//! let (cleaned, report) = disk.cancel()?;
//! assert_eq!(report.cancelled_pairs, 1);
//! assert_eq!(cleaned.regions().len(), 1);
//! # Ok::<(), qubobs::Error>(())
//! ```

pub mod disk;
pub mod dynamics;
pub mod error;
pub mod exact;
pub mod protocols;
pub mod render;
pub mod scenario;
pub mod service;
pub mod verifier;

pub use disk::{AlignedPair, Color, DiskSystem, Region, Sign};
pub use dynamics::{CancelReport, MeasurementOutcome, WindowReading};
pub use error::{Error, Result};
pub use exact::{Gate, RealState};
pub use render::{render_svg, render_text, Layout, RenderSpec};
pub use scenario::{run_scenario, ScenarioError, Session};
pub use verifier::{audit_run, Classification, Lockstep, Step, StepReport};
