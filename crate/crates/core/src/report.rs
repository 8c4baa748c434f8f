//! Per-cycle traces and schedule totals shared by both processes.

use crate::scenario::SweepKind;

/// One sweep cycle: a sector traversal followed by an inward advance.
///
/// For the circular process `radius_before` is `R_i`; for the spiral
/// process it is also `R_i` (the region radius), while the recursion runs
/// on the shifted radius `R_i − r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleTrace {
    pub index: usize,
    pub radius_before: f64,
    pub cycle_time: f64,
    /// Slack `δ_i` between sensor reach and evader spread after the sweep.
    pub slack: f64,
    /// Effective advance `δ_i·Vs/(Vs + VT)`.
    pub advance_distance: f64,
    /// `advance_distance / Vs`. The last cycle's value is not spent: the
    /// schedule replaces it with the final advance to the center.
    pub advance_time: f64,
}

/// Closed-form totals carried next to the iterative ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormTotals {
    pub n_cycles: usize,
    pub t_in: f64,
    pub t_motion: f64,
    pub final_radius: f64,
}

/// End-game of the spiral process once the region fits within `2r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndgameDecision {
    pub final_radius: f64,
    /// `(2r − R_N)/r`.
    pub epsilon: f64,
    /// Smallest `epsilon` that allows the final circular sweep directly.
    pub epsilon_c: f64,
    /// Speed needed to skip the extra spiral cycle.
    pub threshold_speed: f64,
    /// 1 when an extra spiral cycle is needed before the final sweep.
    pub eta: u8,
    pub t_last: f64,
    /// Duration of the extra spiral cycle (spent only when `eta = 1`).
    pub t_l: f64,
    /// Advance back to the center after the extra cycle (only when `eta = 1`).
    pub t_in_f: f64,
}

impl EndgameDecision {
    /// Extra spiral time actually spent, `eta·T_l`.
    pub fn extra_spiral_time(&self) -> f64 {
        f64::from(self.eta) * self.t_l
    }

    /// Extra advance time actually spent, `eta·T_in_f`.
    pub fn extra_advance_time(&self) -> f64 {
        f64::from(self.eta) * self.t_in_f
    }
}

/// Full cleaning schedule of one process.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub kind: SweepKind,
    pub vs: f64,
    /// Cycles before the end-game; equals `trace.len()`.
    pub n_cycles: usize,
    pub eta: u8,
    pub trace: Vec<CycleTrace>,
    /// Radius bounding the region when the end-game starts.
    pub final_radius: f64,
    /// Advance that puts the inner sensor tips at the center, `R_N/Vs`.
    pub last_advance_time: f64,
    /// Final circular sweep around radius `r`, `2πr/(n·Vs)`.
    pub last_sweep_time: f64,
    pub endgame: Option<EndgameDecision>,
    pub t_in: f64,
    /// Total sector-traversal time (circular or spiral).
    pub t_motion: f64,
    pub t_total: f64,
    pub closed_form: Option<ClosedFormTotals>,
}

impl SweepReport {
    /// Sum of the regular inward advances (all but the last cycle's).
    pub fn regular_advance_time(&self) -> f64 {
        let spent = self.trace.len().saturating_sub(1);
        self.trace[..spent].iter().map(|c| c.advance_time).sum()
    }

    /// Sum of the regular sector traversals.
    pub fn regular_sweep_time(&self) -> f64 {
        self.trace.iter().map(|c| c.cycle_time).sum()
    }

    /// Ratio of traversal time to advance time.
    pub fn motion_to_advance_ratio(&self) -> f64 {
        self.t_motion / self.t_in
    }
}

/// Relative difference `|a − b| / max(|b|, tiny)`.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
