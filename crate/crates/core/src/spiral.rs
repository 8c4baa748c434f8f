//! The spiral sweep process: sensors start fully inside the region and
//! their centers drift outward at `VT` while sweeping, so the outer tip
//! rides the wavefront. Once the region fits within `2r` an end-game of
//! one or two more sweeps finishes the job.

use std::f64::consts::PI;

use crate::critical::{spiral_critical_sides, spiral_critical_velocity, spiral_exponent, DEFAULT_REL_TOL};
use crate::error::{Error, Result};
use crate::recursion::LinearRecursion;
use crate::report::{ClosedFormTotals, CycleTrace, EndgameDecision, SweepReport};
use crate::scenario::{validate_dimensions, ScenarioParams, SweepKind};

const SLACK_EPS: f64 = 1e-12;

/// Trajectory constants of a spiral sector traversal at speed `Vs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpiralLaw {
    /// `2πVT / (n √(Vs² − VT²))`.
    pub k: f64,
    /// Angle between the velocity and the tangent, `sin(phi) = VT/Vs`.
    pub phi: f64,
    /// Cycle time per unit of shifted radius, `(e^k − 1)/VT`.
    pub gamma: f64,
    vs: f64,
    vt: f64,
}

impl SpiralLaw {
    pub fn new(params: &ScenarioParams) -> Result<Self> {
        let (vs, vt) = (params.vs, params.vt);
        if !(vs > vt) {
            return Err(Error::SlowerThanEvader { vs, vt });
        }
        let k = spiral_exponent(params, vs);
        let gamma = if vt > 0.0 {
            k.exp_m1() / vt
        } else {
            2.0 * PI / (params.nf() * vs)
        };
        Ok(Self {
            k,
            phi: (vt / vs).asin(),
            gamma,
            vs,
            vt,
        })
    }

    /// Tangential component of the sweeper velocity.
    pub fn tangential_speed(&self) -> f64 {
        (self.vs * self.vs - self.vt * self.vt).sqrt()
    }

    /// Time to cover one sector starting from sensor-center radius `shifted`.
    pub fn cycle_time(&self, shifted: f64) -> f64 {
        self.gamma * shifted
    }

    /// Angle swept after time `t` from sensor-center radius `shifted`.
    pub fn angle(&self, t: f64, shifted: f64) -> f64 {
        if self.vt > 0.0 {
            self.tangential_speed() / self.vt * (self.vt * t / shifted).ln_1p()
        } else {
            self.vs * t / shifted
        }
    }

    /// Sensor-center radius after time `t` from `shifted`.
    pub fn center_radius(&self, t: f64, shifted: f64) -> f64 {
        shifted + self.vt * t
    }
}

/// Angle travelled after time `t` in a cycle that starts with region
/// radius `radius` (sensor center at `radius − r`).
pub fn spiral_angle(t: f64, radius: f64, params: &ScenarioParams) -> Result<f64> {
    Ok(SpiralLaw::new(params)?.angle(t, radius - params.r))
}

/// Time of one spiral sector traversal starting at region radius `radius`.
pub fn spiral_cycle_time(radius: f64, params: &ScenarioParams) -> Result<f64> {
    Ok(SpiralLaw::new(params)?.cycle_time(radius - params.r))
}

/// Shifted-radius recursion `R̃_{i+1} = c3·R̃_i + c1` with `T_i = gamma·R̃_i`.
pub fn spiral_recursion(params: &ScenarioParams) -> Result<LinearRecursion> {
    let law = SpiralLaw::new(params)?;
    let (vs, vt) = (params.vs, params.vt);
    let c3 = (vt + vs * law.k.exp()) / (vs + vt);
    let c1 = -2.0 * params.r * vs / (vs + vt);
    Ok(LinearRecursion::new(c3, c1, law.gamma))
}

fn subcritical(params: &ScenarioParams) -> Error {
    Error::SubcriticalSpeed {
        process: "spiral",
        vs: params.vs,
        critical: spiral_critical_velocity(params, DEFAULT_REL_TOL).unwrap_or(0.0),
    }
}

/// One spiral cycle from region radius `radius`: returns `R_{i+1}` and the
/// trace entry (with index 0).
pub fn spiral_next_radius(radius: f64, params: &ScenarioParams) -> Result<(f64, CycleTrace)> {
    let law = SpiralLaw::new(params)?;
    let (vs, vt) = (params.vs, params.vt);
    let shifted = radius - params.r;
    let cycle_time = law.cycle_time(shifted);
    let slack = 2.0 * params.r - vt * cycle_time;
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
    SpiralLaw::new(params)?;
    if params.vt > 0.0 && params.r0 > params.r {
        let (lhs, rhs) = spiral_critical_sides(params, params.vs);
        if lhs >= rhs {
            return Err(subcritical(params));
        }
    }
    Ok(())
}

fn spiral_trace(params: &ScenarioParams) -> Result<(Vec<CycleTrace>, f64)> {
    require_supercritical(params)?;
    let mut trace = Vec::new();
    let mut radius = params.r0;
    while radius > 2.0 * params.r {
        let (next, mut cycle) = spiral_next_radius(radius, params)?;
        cycle.index = trace.len();
        trace.push(cycle);
        radius = next;
    }
    Ok((trace, radius))
}

/// Cycles until the region fits within `2r`, by iteration.
pub fn spiral_iteration_count(params: &ScenarioParams) -> Result<usize> {
    spiral_trace(params).map(|(trace, _)| trace.len())
}

/// Ceiling formula for the spiral cycle count; `None` where undefined.
pub fn spiral_iteration_count_closed_form(params: &ScenarioParams) -> Option<usize> {
    let (r0, r, vt, vs) = (params.r0, params.r, params.vt, params.vs);
    if r0 <= 2.0 * r {
        return Some(0);
    }
    if !(vs > vt) {
        return None;
    }
    let e = spiral_exponent(params, vs).exp();
    let ratio = r * (3.0 - e) / (r0 * (1.0 - e) + r * (1.0 + e));
    let steps = ratio.ln() / ((vt + vs * e) / (vs + vt)).ln();
    (steps.is_finite() && steps >= 0.0).then(|| steps.ceil() as usize)
}

/// End-game once the region has radius `final_radius ≤ 2r`.
pub fn endgame(params: &ScenarioParams, final_radius: f64) -> Result<EndgameDecision> {
    let (r, vt, vs, n) = (params.r, params.vt, params.vs, params.nf());
    if !(final_radius > 0.0 && final_radius <= 2.0 * r) {
        return Err(Error::InvalidEndgameRadius {
            radius: final_radius,
            limit: 2.0 * r,
        });
    }
    let law = SpiralLaw::new(params)?;
    let threshold_speed = if vt == 0.0 {
        0.0
    } else if final_radius == 2.0 * r {
        f64::INFINITY
    } else {
        (2.0 * PI * r * vt + n * vt * final_radius) / (n * (2.0 * r - final_radius))
    };
    let eta = u8::from(!(vs >= threshold_speed));
    let t_l = law.cycle_time(r);
    Ok(EndgameDecision {
        final_radius,
        epsilon: (2.0 * r - final_radius) / r,
        epsilon_c: 2.0 * vt * (PI + n) / (n * (vs + vt)),
        threshold_speed,
        eta,
        t_last: 2.0 * PI * r / (n * vs),
        t_l,
        t_in_f: t_l * vt / vs,
    })
}

/// Closed-form totals with the closed-form cycle count. Defined for
/// `VT > 0` and at least one regular cycle.
pub fn spiral_closed_form(params: &ScenarioParams) -> Option<ClosedFormTotals> {
    let n_cycles = spiral_iteration_count_closed_form(params)?;
    if params.vt <= 0.0 || n_cycles == 0 {
        return None;
    }
    let (r0, r, vt, vs, n) = (params.r0, params.r, params.vt, params.vs, params.nf());
    let e = spiral_exponent(params, vs).exp();
    let c3 = (vt + vs * e) / (vs + vt);
    let big_n = n_cycles as f64;
    let spread = r0 * (1.0 - e) + r * (1.0 + e);
    let final_radius = -2.0 * r / (1.0 - e) + c3.powi(n_cycles as i32) * spread / (1.0 - e) + r;
    let decision = endgame(params, final_radius).ok()?;
    let eta = f64::from(decision.eta);
    let advances = 2.0 * r / (vs + vt)
        + (r0 - r) / vs
        + 2.0 * r * (vt + vs * e) / (vs * (vs + vt) * (1.0 - e))
        - c3.powi(n_cycles as i32 - 1) * spread / (vs * (1.0 - e));
    let t_in = advances + final_radius / vs + eta * r * (e - 1.0) / vs;
    let sweeps = (r - r0) * (vs + vt) / (vt * vs)
        - 2.0 * r * (vt + vs * e) / (vt * vs * (1.0 - e))
        - c3.powi(n_cycles as i32) * ((vs + vt) * (r0 * (e - 1.0) - r * (e + 1.0)) / (vt * vs * (1.0 - e)))
        + 2.0 * r * (big_n - 1.0) / vt;
    let t_motion = sweeps + 2.0 * PI * r / (n * vs) + eta * r * (e - 1.0) / vt;
    Some(ClosedFormTotals {
        n_cycles,
        t_in,
        t_motion,
        final_radius,
    })
}

/// Sum of the regular advance times through the closed-form sum of shifted
/// radii `R̃_0 + … + R̃_{N−2}` (the route using the constant `c5`).
pub fn spiral_advance_time_via_radius_sum(params: &ScenarioParams, n_cycles: usize) -> Option<f64> {
    let (r0, r, vt, vs) = (params.r0, params.r, params.vt, params.vs);
    if vt <= 0.0 || n_cycles == 0 || !(vs > vt) {
        return None;
    }
    let e = spiral_exponent(params, vs).exp();
    let c3 = (vt + vs * e) / (vs + vt);
    let big_n = n_cycles as f64;
    let c5 = (vs + vt) / (vs * (1.0 - e)) * c3.powi(n_cycles as i32 - 1);
    let spread = r0 * (1.0 - e) + r * (1.0 + e);
    let radius_sum = (r0 - r) * (vs + vt) / (vs * (1.0 - e))
        + 2.0 * r * (vt + vs * e) / (vs * (1.0 - e).powi(2))
        - c5 * spread / (1.0 - e)
        - 2.0 * r * (big_n - 2.0) / (1.0 - e);
    Some(((big_n - 1.0) * 2.0 * r + (1.0 - e) * radius_sum) / (vs + vt))
}

/// Regular sweep and advance sums from the generic recursion series, for
/// any `VT ≥ 0`: `(Σ_{i<N−1} T_in_i, Σ_{i<N} T_i)`.
pub fn spiral_series_sums(params: &ScenarioParams, n_cycles: usize) -> Result<(f64, f64)> {
    let rec = spiral_recursion(params)?;
    let (r, vt, vs) = (params.r, params.vt, params.vs);
    let shifted0 = params.r0 - params.r;
    let regular = n_cycles.saturating_sub(1);
    let advances = (regular as f64 * 2.0 * r - vt * rec.time_sum(shifted0, regular)) / (vs + vt);
    Ok((advances, rec.time_sum(shifted0, n_cycles)))
}

/// Full spiral schedule: `N` spiral traversals with `N − 1` regular
/// advances, the advance to the center, an optional extra spiral cycle
/// with its advance back, and the final circular sweep around `r`.
pub fn spiral_schedule(params: &ScenarioParams) -> Result<SweepReport> {
    let (trace, final_radius) = spiral_trace(params)?;
    if final_radius < params.r {
        log::debug!(
            "spiral recursion overshoot: shifted final radius {} is negative",
            final_radius - params.r
        );
    }
    let decision = endgame(params, final_radius)?;
    let mut report = SweepReport {
        kind: SweepKind::Spiral,
        vs: params.vs,
        n_cycles: trace.len(),
        eta: decision.eta,
        trace,
        final_radius,
        last_advance_time: final_radius / params.vs,
        last_sweep_time: decision.t_last,
        endgame: Some(decision),
        t_in: 0.0,
        t_motion: 0.0,
        t_total: 0.0,
        closed_form: spiral_closed_form(params),
    };
    report.t_in =
        report.regular_advance_time() + report.last_advance_time + decision.extra_advance_time();
    report.t_motion = report.regular_sweep_time() + decision.extra_spiral_time() + decision.t_last;
    report.t_total = report.t_in + report.t_motion;
    Ok(report)
}
