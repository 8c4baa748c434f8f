//! The circular sweep process: sensor centers travel on circles of radius
//! `R_i`, half of each sensor inside the region, followed by an inward
//! advance after every sector traversal.

use std::f64::consts::PI;

use crate::critical::circular_critical_velocity;
use crate::error::{Error, Result};
use crate::recursion::LinearRecursion;
use crate::report::{ClosedFormTotals, CycleTrace, SweepReport};
use crate::scenario::{validate_dimensions, ScenarioParams, SweepKind};

/// Slack below this fraction of `r` counts as zero (critical speed).
const SLACK_EPS: f64 = 1e-12;

/// Radius recursion `R_{i+1} = c3·R_i + c1` with `T_i = gamma·R_i`.
pub fn circular_recursion(params: &ScenarioParams) -> LinearRecursion {
    let (vs, vt) = (params.vs, params.vt);
    let c3 = 1.0 + 2.0 * PI * vt / (params.nf() * (vs + vt));
    let c1 = -params.r * vs / (vs + vt);
    LinearRecursion::new(c3, c1, 2.0 * PI / (params.nf() * vs))
}

/// Time to traverse one sector on a circle of radius `radius`.
pub fn circ_cycle_time(radius: f64, params: &ScenarioParams) -> f64 {
    2.0 * PI * radius / (params.nf() * params.vs)
}

fn subcritical(params: &ScenarioParams) -> Error {
    Error::SubcriticalSpeed {
        process: "circular",
        vs: params.vs,
        critical: circular_critical_velocity(params),
    }
}

/// One cycle starting at radius `radius`: returns the next radius and the
/// trace entry (with index 0).
pub fn circ_next_radius(radius: f64, params: &ScenarioParams) -> Result<(f64, CycleTrace)> {
    let (vs, vt) = (params.vs, params.vt);
    let cycle_time = circ_cycle_time(radius, params);
    let slack = params.r - vt * cycle_time;
    if slack <= SLACK_EPS * params.r {
        return Err(subcritical(params));
    }
    let advance_distance = slack * vs / (vs + vt);
    let trace = CycleTrace {
        index: 0,
        radius_before: radius,
        cycle_time,
        slack,
        advance_distance,
        advance_time: advance_distance / vs,
    };
    Ok((radius - advance_distance, trace))
}

fn require_supercritical(params: &ScenarioParams) -> Result<()> {
    validate_dimensions(*params)?;
    if params.vs <= circular_critical_velocity(params) {
        return Err(subcritical(params));
    }
    Ok(())
}

fn circ_trace(params: &ScenarioParams) -> Result<(Vec<CycleTrace>, f64)> {
    require_supercritical(params)?;
    let mut trace = Vec::new();
    let mut radius = params.r0;
    while radius > params.r {
        let (next, mut cycle) = circ_next_radius(radius, params)?;
        cycle.index = trace.len();
        trace.push(cycle);
        radius = next;
    }
    Ok((trace, radius))
}

/// Number of cycles until the region fits inside radius `r`, by iteration.
pub fn circ_iteration_count(params: &ScenarioParams) -> Result<usize> {
    circ_trace(params).map(|(trace, _)| trace.len())
}

/// Ceiling formula for the cycle count; `None` when the logarithms are
/// undefined (static evaders or a speed at or below critical).
pub fn circ_iteration_count_closed_form(params: &ScenarioParams) -> Option<usize> {
    let (r0, r, vt, vs, n) = (params.r0, params.r, params.vt, params.vs, params.nf());
    if r0 <= r {
        return Some(0);
    }
    let num = 2.0 * PI * r * vt - n * r * vs;
    let den = 2.0 * PI * r0 * vt - n * r * vs;
    let steps = (num / den).ln() / (1.0 + 2.0 * PI * vt / (n * (vs + vt))).ln();
    (steps.is_finite() && steps >= 0.0).then(|| steps.ceil() as usize)
}

/// Closed-form totals with the closed-form cycle count. Defined for
/// `VT > 0` and at least one regular cycle.
pub fn circ_closed_form(params: &ScenarioParams) -> Option<ClosedFormTotals> {
    let n_cycles = circ_iteration_count_closed_form(params)?;
    if params.vt <= 0.0 || n_cycles == 0 {
        return None;
    }
    let (r0, r, vt, vs, n) = (params.r0, params.r, params.vt, params.vs, params.nf());
    let rec = circular_recursion(params);
    let big_n = n_cycles as f64;
    let spread = 2.0 * PI * r0 * vt - n * r * vs;
    let t_in = r0 / vs + spread / (n * vs * (vs + vt)) * rec.c3.powi(n_cycles as i32 - 1);
    let t_motion = -r0 * (vs + vt) / (vt * vs)
        + (n * r * (vs + vt) + 2.0 * PI * r * vt) / (2.0 * PI * vt * vt)
        + rec.c3.powi(n_cycles as i32) * ((vs + vt) * spread / (2.0 * PI * vs * vt * vt))
        + r * (big_n - 1.0) / vt
        + 2.0 * PI * r / (n * vs);
    Some(ClosedFormTotals {
        n_cycles,
        t_in,
        t_motion,
        final_radius: rec.term(r0, n_cycles),
    })
}

/// Totals from the summed recursion series (radius sum for the sweeps,
/// slack sum for the advances) for a given cycle count. Valid for any
/// `VT ≥ 0`.
pub fn circ_series_totals(params: &ScenarioParams, n_cycles: usize) -> (f64, f64) {
    let rec = circular_recursion(params);
    let (r, vt, vs) = (params.r, params.vt, params.vs);
    let regular = n_cycles.saturating_sub(1);
    // T_in_i = (r − VT·gamma·R_i)/(Vs + VT)
    let advances =
        (regular as f64 * r - vt * rec.time_sum(params.r0, regular)) / (vs + vt);
    let final_radius = rec.term(params.r0, n_cycles);
    let t_in = advances + final_radius / vs;
    let t_motion = rec.time_sum(params.r0, n_cycles) + circ_cycle_time(r, params);
    (t_in, t_motion)
}

/// Full circular schedule: `N` sector traversals, `N − 1` regular
/// advances, the advance to the center and the final sweep around `r`.
pub fn circ_schedule(params: &ScenarioParams) -> Result<SweepReport> {
    let (trace, final_radius) = circ_trace(params)?;
    let n_cycles = trace.len();
    let last_advance_time = final_radius / params.vs;
    let last_sweep_time = circ_cycle_time(params.r, params);
    let mut report = SweepReport {
        kind: SweepKind::Circular,
        vs: params.vs,
        n_cycles,
        eta: 0,
        trace,
        final_radius,
        last_advance_time,
        last_sweep_time,
        endgame: None,
        t_in: 0.0,
        t_motion: 0.0,
        t_total: 0.0,
        closed_form: circ_closed_form(params),
    };
    report.t_in = report.regular_advance_time() + last_advance_time;
    report.t_motion = report.regular_sweep_time() + last_sweep_time;
    report.t_total = report.t_in + report.t_motion;
    Ok(report)
}
