//! Invariant suite over a parameter grid: velocity ordering, root
//! residuals, closed forms against the iterated schedules, and the
//! circular-against-spiral ordering.

use crate::critical::{
    circular_critical_velocity, lower_bound_velocity, spiral_critical_sides, spiral_critical_velocity, DEFAULT_REL_TOL,
};
use crate::report::rel_diff;
use crate::scenario::{ScenarioParams, SweepKind};

/// Outcome of one named invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, failures: Vec<String>, checked: usize) -> Self {
        let detail = match failures.first() {
            None => format!("{checked} cases"),
            Some(first) => format!("{} of {checked} cases failed; first: {first}", failures.len()),
        };
        Self {
            name: name.to_string(),
            passed: failures.is_empty(),
            detail,
        }
    }
}

/// Relative tolerance for closed forms against iterated sums.
pub const CLOSED_FORM_TOL: f64 = 1e-9;

fn velocity_checks(base: &ScenarioParams, n_values: &[u32]) -> Vec<CheckResult> {
    let mut ordering = Vec::new();
    let mut residual = Vec::new();
    let mut doubling = Vec::new();
    for &n in n_values {
        let p = base.with_n(n);
        let lb = lower_bound_velocity(&p);
        let vc = circular_critical_velocity(&p);
        if vc != 2.0 * lb {
            doubling.push(format!("n={n}: {vc} vs 2×{lb}"));
        }
        match spiral_critical_velocity(&p, DEFAULT_REL_TOL) {
            Ok(v) => {
                if !(lb < v && v < vc) {
                    ordering.push(format!("n={n}: {lb} < {v} < {vc} violated"));
                }
                let (lhs, rhs) = spiral_critical_sides(&p, v);
                if rel_diff(lhs, rhs) > 1e-10 {
                    residual.push(format!("n={n}: lhs {lhs} rhs {rhs}"));
                }
            }
            Err(e) => ordering.push(format!("n={n}: {e}")),
        }
    }
    vec![
        CheckResult::new("circular critical is twice the lower bound", doubling, n_values.len()),
        CheckResult::new("lower bound < spiral critical < circular critical", ordering, n_values.len()),
        CheckResult::new("spiral critical root residual", residual, n_values.len()),
    ]
}

fn schedule_checks(base: &ScenarioParams, n_values: &[u32], delta_v_values: &[f64]) -> Vec<CheckResult> {
    let mut closed = Vec::new();
    let mut ordering = Vec::new();
    let mut monotone = Vec::new();
    let mut cases = 0;
    for &n in n_values {
        for &dv in delta_v_values {
            cases += 1;
            let p = base.with_n(n).with_vs(circular_critical_velocity(&base.with_n(n)) + dv);
            let mut totals = [0.0; 2];
            for (slot, kind) in SweepKind::ALL.into_iter().enumerate() {
                let report = match crate::schedule(&p, kind) {
                    Ok(r) => r,
                    Err(e) => {
                        closed.push(format!("{kind} n={n} dv={dv}: {e}"));
                        continue;
                    }
                };
                totals[slot] = report.t_total;
                if let Some(cf) = report.closed_form {
                    let bad = cf.n_cycles != report.n_cycles
                        || rel_diff(cf.t_in, report.t_in) > CLOSED_FORM_TOL
                        || rel_diff(cf.t_motion, report.t_motion) > CLOSED_FORM_TOL;
                    if bad {
                        closed.push(format!(
                            "{kind} n={n} dv={dv}: N {}/{} t_in {}/{} t_motion {}/{}",
                            cf.n_cycles, report.n_cycles, cf.t_in, report.t_in, cf.t_motion, report.t_motion
                        ));
                    }
                }
                if let Ok(faster) = crate::schedule(&p.with_vs(p.vs + 1.0), kind) {
                    if faster.t_total >= report.t_total {
                        monotone.push(format!("{kind} n={n} dv={dv}: {} then {}", report.t_total, faster.t_total));
                    }
                }
            }
            if !(totals[1] < totals[0]) {
                ordering.push(format!("n={n} dv={dv}: spiral {} circular {}", totals[1], totals[0]));
            }
        }
    }
    vec![
        CheckResult::new("closed forms match iterated schedules", closed, cases * 2),
        CheckResult::new("spiral total below circular total", ordering, cases),
        CheckResult::new("total time decreases with sweeper speed", monotone, cases * 2),
    ]
}

/// Runs every invariant over `n_values × delta_v_values` with speeds
/// offset above the circular critical velocity.
pub fn run_checks(base: &ScenarioParams, n_values: &[u32], delta_v_values: &[f64]) -> Vec<CheckResult> {
    let mut out = velocity_checks(base, n_values);
    out.extend(schedule_checks(base, n_values, delta_v_values));
    out
}
