//! Circular and spiral multi-agent sweep processes for confining and
//! detecting smart evaders inside a disk.
//!
//! The analytic side computes critical velocities, cycle recursions and
//! cleaning schedules; [`sim`] provides an independent occupancy-grid
//! simulation of the same processes, and [`experiments`] turns both into
//! CSV tables.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circular;
pub mod critical;
pub mod error;
pub mod experiments;
pub mod recursion;
pub mod report;
pub mod scenario;
pub mod sim;
pub mod spiral;

pub use error::{Error, Result};
pub use report::{ClosedFormTotals, CycleTrace, EndgameDecision, SweepReport};
pub use scenario::{ScenarioParams, SweepKind, SweeperPose};

/// Schedule of either process.
pub fn schedule(params: &ScenarioParams, kind: SweepKind) -> Result<SweepReport> {
    match kind {
        SweepKind::Circular => circular::circ_schedule(params),
        SweepKind::Spiral => spiral::spiral_schedule(params),
    }
}
