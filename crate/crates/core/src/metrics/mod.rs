//! Stack scores, Top-S / Top-1 sweeps, EER and DET curves.

pub mod det;
pub mod eer;
pub mod stack;
pub mod sweep;
pub mod types;

pub use det::{det_points, save_det_csv, write_det_csv};
pub use eer::eer_from_points;
pub use stack::{check_labels, resolve_labels, stack_reduce};
pub use sweep::{sweep, sweep_both, sweep_top_1, sweep_top_s};
pub use types::{DetectorReport, Mode, OperatingPoint, StackScore, ThresholdPolicy, TrialCounts, TrialLabel, Truth};
