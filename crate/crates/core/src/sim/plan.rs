//! Piecewise motion plan of the sweepers, derived from an analytic
//! schedule (or from the bare recursion for confinement runs).
//!
//! Sweepers work in the sector-exchange arrangement: they never reverse.
//! During sweep number `s` the anchor of pair `j` is `j·4π/n + s·2π/n`;
//! the counter-clockwise member travels from the anchor to `anchor + 2π/n`
//! and the clockwise member to `anchor − 2π/n`, where it meets the
//! neighbouring pair. Advances happen at the next sweep's anchor.

use std::f64::consts::PI;

use crate::report::SweepReport;
use crate::scenario::{polar, ScenarioParams, SweepKind};
use crate::spiral::SpiralLaw;

use super::geometry::Point;

/// How the sensor centers move during a phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Motion {
    /// Constant-radius sector traversal.
    Circle { radius: f64 },
    /// Spiral traversal starting at sensor-center radius `shifted`.
    Spiral { shifted: f64, law: SpiralLaw },
    /// Straight radial move at the anchor angle.
    Radial { from: f64, to: f64 },
    /// Standing still at the anchor angle.
    Hold { radius: f64 },
}

/// What a phase represents in the schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseRole {
    Sweep { cycle: usize },
    Advance { cycle: usize },
    /// Advance that puts the inner sensor tips at the center.
    FinalAdvance,
    ExtraSpiral,
    ReturnAdvance,
    FinalSweep,
    Idle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phase {
    pub role: PhaseRole,
    pub motion: Motion,
    pub start: f64,
    pub duration: f64,
    /// Number of sweeps completed before this phase (selects the anchors).
    pub anchor_step: usize,
    /// Bounding radius the region must stay within (plus tolerance).
    pub guard: f64,
    /// If set, the guard grows at `VT` from the phase start.
    pub guard_grows: bool,
}

impl Phase {
    pub fn end(&self) -> f64 {
        self.start + self.duration
    }

    fn is_sweep(&self) -> bool {
        matches!(self.motion, Motion::Circle { .. } | Motion::Spiral { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    phases: Vec<Phase>,
    n: u32,
    r: f64,
    vt: f64,
}

struct Builder {
    phases: Vec<Phase>,
    clock: f64,
    sweeps: usize,
}

impl Builder {
    fn new() -> Self {
        Self {
            phases: Vec::new(),
            clock: 0.0,
            sweeps: 0,
        }
    }

    fn push(&mut self, role: PhaseRole, motion: Motion, duration: f64, guard: f64, guard_grows: bool) {
        let is_sweep = matches!(motion, Motion::Circle { .. } | Motion::Spiral { .. });
        self.phases.push(Phase {
            role,
            motion,
            start: self.clock,
            duration,
            anchor_step: self.sweeps,
            guard,
            guard_grows,
        });
        self.clock += duration;
        if is_sweep {
            self.sweeps += 1;
        }
    }

    fn finish(mut self, params: &ScenarioParams, rest_radius: f64, guard: f64) -> Plan {
        self.push(PhaseRole::Idle, Motion::Hold { radius: rest_radius }, f64::INFINITY, guard, false);
        Plan {
            phases: self.phases,
            n: params.n,
            r: params.r,
            vt: params.vt,
        }
    }
}

impl Plan {
    /// Plan following an analytic schedule phase by phase.
    pub fn from_report(params: &ScenarioParams, report: &SweepReport) -> Plan {
        match report.kind {
            SweepKind::Circular => Self::circular(params, report),
            SweepKind::Spiral => Self::spiral(params, report),
        }
    }

    fn circular(params: &ScenarioParams, report: &SweepReport) -> Plan {
        let r = params.r;
        let mut b = Builder::new();
        let trace = &report.trace;
        for (i, cycle) in trace.iter().enumerate() {
            let radius = cycle.radius_before;
            b.push(PhaseRole::Sweep { cycle: i }, Motion::Circle { radius }, cycle.cycle_time, radius + r, false);
            if i + 1 < trace.len() {
                let to = trace[i + 1].radius_before;
                b.push(PhaseRole::Advance { cycle: i }, Motion::Radial { from: radius, to }, cycle.advance_time, radius + r, false);
            }
        }
        let from = trace.last().map_or(params.r0, |c| c.radius_before);
        let guard = (from + r).max(2.0 * r);
        b.push(PhaseRole::FinalAdvance, Motion::Radial { from, to: r }, report.last_advance_time, guard, false);
        b.push(PhaseRole::FinalSweep, Motion::Circle { radius: r }, report.last_sweep_time, 2.0 * r, false);
        b.finish(params, r, 2.0 * r)
    }

    fn spiral(params: &ScenarioParams, report: &SweepReport) -> Plan {
        let (r, vt) = (params.r, params.vt);
        let law = SpiralLaw::new(params).expect("spiral schedule implies Vs > VT");
        let mut b = Builder::new();
        let trace = &report.trace;
        for (i, cycle) in trace.iter().enumerate() {
            let radius = cycle.radius_before;
            let shifted = radius - r;
            b.push(PhaseRole::Sweep { cycle: i }, Motion::Spiral { shifted, law }, cycle.cycle_time, radius, true);
            if i + 1 < trace.len() {
                let from = shifted + vt * cycle.cycle_time;
                let to = trace[i + 1].radius_before - r;
                b.push(PhaseRole::Advance { cycle: i }, Motion::Radial { from, to }, cycle.advance_time, radius, false);
            }
        }
        let (from, guard) = match trace.last() {
            Some(c) => (c.radius_before - r + vt * c.cycle_time, c.radius_before),
            None => (params.r0 - r, params.r0),
        };
        b.push(PhaseRole::FinalAdvance, Motion::Radial { from, to: r }, report.last_advance_time, guard.max(2.0 * r), false);
        if let Some(d) = report.endgame.filter(|d| d.eta == 1) {
            b.push(PhaseRole::ExtraSpiral, Motion::Spiral { shifted: r, law }, d.t_l, 2.0 * r, true);
            let from = r + vt * d.t_l;
            b.push(PhaseRole::ReturnAdvance, Motion::Radial { from, to: r }, d.t_in_f, 2.0 * r, false);
        }
        b.push(PhaseRole::FinalSweep, Motion::Circle { radius: r }, report.last_sweep_time, 2.0 * r, false);
        b.finish(params, r, 2.0 * r)
    }

    /// Up to `cycles` cycles of the bare recursion at `params.vs`, without
    /// requiring the speed to be supercritical. A cycle whose slack is not
    /// positive ends with the sweepers holding at the meeting points for
    /// one more cycle time, and the plan stops there.
    pub fn confinement(params: &ScenarioParams, kind: SweepKind, cycles: usize) -> Plan {
        let (r, vt, vs) = (params.r, params.vt, params.vs);
        let mut b = Builder::new();
        let mut radius = params.r0;
        let end_radius = match kind {
            SweepKind::Circular => r,
            SweepKind::Spiral => 2.0 * r,
        };
        for i in 0..cycles {
            let (motion, cycle_time, guard, grows, reach, after) = match kind {
                SweepKind::Circular => {
                    let t = 2.0 * PI * radius / (params.nf() * vs);
                    (Motion::Circle { radius }, t, radius + r, false, r, radius)
                }
                SweepKind::Spiral => {
                    let law = match SpiralLaw::new(params) {
                        Ok(law) => law,
                        Err(_) => break,
                    };
                    let shifted = radius - r;
                    let t = law.cycle_time(shifted);
                    (Motion::Spiral { shifted, law }, t, radius, true, 2.0 * r, shifted + vt * t)
                }
            };
            b.push(PhaseRole::Sweep { cycle: i }, motion, cycle_time, guard, grows);
            let slack = reach - vt * cycle_time;
            if slack <= 0.0 {
                b.push(PhaseRole::Advance { cycle: i }, Motion::Hold { radius: after }, cycle_time, radius, false);
                break;
            }
            let advance = slack * vs / (vs + vt);
            let to = match kind {
                SweepKind::Circular => radius - advance,
                SweepKind::Spiral => radius - advance - r,
            };
            let adv_guard = match kind {
                SweepKind::Circular => radius + r,
                SweepKind::Spiral => radius,
            };
            b.push(PhaseRole::Advance { cycle: i }, Motion::Radial { from: after, to }, advance / vs, adv_guard, false);
            radius -= advance;
            if radius <= end_radius {
                break;
            }
        }
        let guard = b.phases.last().map_or(params.r0, |p| p.guard);
        let rest = match b.phases.last().map(|p| p.motion) {
            Some(Motion::Radial { to, .. }) => to,
            Some(Motion::Hold { radius }) => radius,
            _ => params.r0,
        };
        b.finish(params, rest, guard)
    }

    /// Sweepers standing still at their initial anchors forever.
    pub fn idle(params: &ScenarioParams, center_radius: f64) -> Plan {
        Builder::new().finish(params, center_radius, f64::INFINITY)
    }

    /// Plan from explicit phases (start times are recomputed).
    pub fn from_phases(params: &ScenarioParams, phases: &[(PhaseRole, Motion, f64)], guard: f64) -> Plan {
        let mut b = Builder::new();
        let mut rest = params.r0;
        for &(role, motion, duration) in phases {
            b.push(role, motion, duration, guard, false);
            rest = match motion {
                Motion::Radial { to, .. } => to,
                Motion::Hold { radius } | Motion::Circle { radius } => radius,
                Motion::Spiral { shifted, law } => law.center_radius(duration, shifted),
            };
        }
        b.finish(params, rest, guard)
    }

    pub fn phases(&self) -> &[Phase] {
        &self.phases
    }

    pub fn sweeper_count(&self) -> usize {
        self.n as usize
    }

    /// Time at which the last finite phase ends.
    pub fn end_time(&self) -> f64 {
        self.phases.last().map_or(0.0, |p| p.start)
    }

    /// Index of the phase active at `t` (phases are half-open `[start, end)`).
    pub fn phase_index(&self, t: f64) -> usize {
        let idx = self.phases.partition_point(|p| p.start <= t);
        idx.saturating_sub(1)
    }

    /// Guard radius of phase `idx` at absolute time `t`.
    pub fn guard(&self, idx: usize, t: f64) -> f64 {
        let p = &self.phases[idx];
        if p.guard_grows {
            p.guard + self.vt * (t - p.start).max(0.0)
        } else {
            p.guard
        }
    }

    /// Sensor-center radius and angular offset from the anchor in phase
    /// `idx` at absolute time `t` (clamped to the phase).
    fn center_and_offset(&self, idx: usize, t: f64) -> (f64, f64) {
        let p = &self.phases[idx];
        let tau = (t - p.start).clamp(0.0, p.duration);
        let width = 2.0 * PI / f64::from(self.n);
        match p.motion {
            Motion::Circle { radius } => {
                let frac = if p.duration > 0.0 { tau / p.duration } else { 1.0 };
                (radius, width * frac)
            }
            Motion::Spiral { shifted, law } => {
                let angle = if tau >= p.duration { width } else { law.angle(tau, shifted).min(width) };
                (law.center_radius(tau, shifted), angle)
            }
            Motion::Radial { from, to } => {
                let frac = if p.duration > 0.0 { tau / p.duration } else { 1.0 };
                (from + (to - from) * frac, 0.0)
            }
            Motion::Hold { radius } => (radius, 0.0),
        }
    }

    /// Inner and outer sensor tips of sweeper `s` in phase `idx` at time `t`.
    pub fn sensor(&self, s: usize, idx: usize, t: f64) -> (Point, Point) {
        let p = &self.phases[idx];
        let width = 2.0 * PI / f64::from(self.n);
        let pair = (s / 2) as f64;
        let sign = if s.is_multiple_of(2) { 1.0 } else { -1.0 };
        let anchor = pair * 2.0 * width + p.anchor_step as f64 * width;
        let (center, offset) = self.center_and_offset(idx, t);
        let angle = anchor + sign * offset;
        (polar(center - self.r, angle), polar(center + self.r, angle))
    }

    /// Whether phase `idx` is a sector traversal.
    pub fn is_sweep(&self, idx: usize) -> bool {
        self.phases[idx].is_sweep()
    }
}
