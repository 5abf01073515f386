//! Multi-party protocols run on both tracks at once.

mod bb84;
mod teleport;

pub use bb84::{bb84_run, AuditSummary, Basis, Bb84Params, Bb84Round, Bb84Run};
pub use teleport::{
    correction_table, teleport_classical, teleport_full, teleport_full_branch, Correction, Stage,
    TeleportTranscript,
};
