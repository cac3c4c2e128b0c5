//! Non-preemptive strictly periodic scheduling of jobs with harmonic periods
//! on a single machine, solved through its equivalent height-divisible 2D
//! packing problem.
//!
//! A schedule assigns every job a start offset `s_i` inside its period. Writing
//! `s_i = u_i + v_i * w` with `w` the shortest period turns the time axis into
//! rows of width `w`; reordering those rows by a mixed-radix digit reversal
//! ([`domain::radix::flip`]) merges the occurrences of each job into one
//! rectangle whose vertical position is a multiple of its height. The crate
//! provides both directions of that mapping, collision checkers for each view,
//! constructive heuristics and an exact search over the packing view, plus
//! benchmark generators and experiment drivers.
//!
//! Time and size quantities are `u64`; utilizations are exact rationals.

pub mod domain;
pub mod exact;
pub mod feasibility;
pub mod heuristics;
pub mod lab;
pub mod transform;

use num_rational::Ratio;

/// Time units, columns and rows.
pub type Time = u64;
pub type JobId = u32;
/// Exact utilization `sum c_i / T_i`.
pub type Utilization = Ratio<Time>;
pub type Digits = domain::radix::MixedRadixDigits<Time>;

pub use domain::{HarmonicPeriodSet, Instance, Job};
pub use exact::{solve_exact, ExactOutcome, ExactStatus, SearchBudget};
pub use feasibility::{Packing, Schedule, ValidationReport};
pub use heuristics::{HeuristicOutcome, Method};
pub use transform::{packing_to_schedule, schedule_to_packing, SubBinTree};
