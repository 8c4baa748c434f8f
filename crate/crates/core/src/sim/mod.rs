//! Discrete-time geometric simulation of both sweep processes on an
//! occupancy grid, used as an oracle independent of the closed forms.
//!
//! Each step grows the possible-evader set by `VT·dt`, then clears every
//! occupied cell within `VT·dt` of the area swept by each sensor segment
//! during the step. Sweepers follow the analytic schedule phase by phase.

pub mod geometry;
pub mod grid;
pub mod plan;

use std::fmt::Write as _;

use crate::critical::{circular_critical_velocity, spiral_critical_velocity, DEFAULT_REL_TOL};
use crate::error::{Error, Result};
use crate::scenario::{validate_params, ScenarioParams, SweepKind};

use geometry::ConvexPolygon;
use grid::Grid;
use plan::{Plan, PhaseRole};

/// Escape tolerance in cells beyond the guard radius.
pub const GUARD_TOLERANCE_CELLS: f64 = 1.5;

/// Resolution and extent of a simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub cell_size: f64,
    pub dt: f64,
    /// The grid covers `[−W, W]²`.
    pub domain_halfwidth: f64,
    pub max_time: f64,
}

impl SimConfig {
    /// Config with room for `R0 + 3r` and no explicit time limit beyond
    /// the schedule (see [`run_cleaning`]).
    pub fn new(params: &ScenarioParams, cell_size: f64, dt: f64) -> Self {
        Self {
            cell_size,
            dt,
            domain_halfwidth: params.r0 + 3.0 * params.r,
            max_time: f64::INFINITY,
        }
    }

    /// Checks resolution limits against the parameters.
    pub fn validate(&self, params: &ScenarioParams) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.cell_size > 0.0) || !(self.dt > 0.0) {
            return fail(format!("cell_size {} and dt {} must be positive", self.cell_size, self.dt));
        }
        if params.vt * self.dt > self.cell_size {
            return fail(format!("VT·dt = {} exceeds cell_size {}", params.vt * self.dt, self.cell_size));
        }
        if params.vs * self.dt > params.r / 4.0 {
            return fail(format!("Vs·dt = {} exceeds r/4 = {}", params.vs * self.dt, params.r / 4.0));
        }
        if self.domain_halfwidth < params.r0 + 2.0 * params.r {
            return fail(format!(
                "domain half-width {} is below R0 + 2r = {}",
                self.domain_halfwidth,
                params.r0 + 2.0 * params.r
            ));
        }
        Ok(())
    }
}

/// An occupied cell seen beyond the guard radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EscapeEvent {
    pub time: f64,
    pub cell: (usize, usize),
    pub radius: f64,
    pub guard: f64,
}

/// Grid summary at the end of a sector traversal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleSnapshot {
    pub sweep: usize,
    pub time: f64,
    pub occupied_cells: usize,
    pub max_radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimOutcome {
    pub cleaned: bool,
    pub clean_time: Option<f64>,
    pub escape_event: Option<EscapeEvent>,
    /// Largest occupied radius when each regular cycle's advance ends.
    pub per_cycle_max_radius: Vec<f64>,
    /// Spiral runs: boundary-radius deviation from the predicted circle
    /// after each regular spiral traversal.
    pub circularity_residuals: Vec<f64>,
    pub snapshots: Vec<CycleSnapshot>,
    /// Smallest observed `guard + tolerance − max radius`.
    pub min_guard_margin: f64,
    pub steps: usize,
    pub final_time: f64,
}

/// Grid, sweepers and clock of one run.
#[derive(Debug, Clone)]
pub struct SimWorld {
    grid: Grid,
    plan: Plan,
    params: ScenarioParams,
    cfg: SimConfig,
    clock: f64,
    steps: usize,
    phase: usize,
    outcome: SimOutcome,
}

impl SimWorld {
    pub fn new(params: &ScenarioParams, plan: Plan, cfg: &SimConfig) -> Result<Self> {
        cfg.validate(params)?;
        let grid = Grid::disk(cfg.cell_size, cfg.domain_halfwidth, params.r0);
        let mut world = Self {
            grid,
            plan,
            params: *params,
            cfg: *cfg,
            clock: 0.0,
            steps: 0,
            phase: 0,
            outcome: SimOutcome {
                cleaned: false,
                clean_time: None,
                escape_event: None,
                per_cycle_max_radius: Vec::new(),
                circularity_residuals: Vec::new(),
                snapshots: Vec::new(),
                min_guard_margin: f64::INFINITY,
                steps: 0,
                final_time: 0.0,
            },
        };
        // Sensors are in place at time zero.
        world.sweep_interval(0.0, 0.0);
        Ok(world)
    }

    pub fn clock(&self) -> f64 {
        self.clock
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn plan(&self) -> &Plan {
        &self.plan
    }

    /// Number of sector traversals completed so far.
    pub fn cycle_index(&self) -> usize {
        self.plan.phases()[self.phase].anchor_step
    }

    pub fn occupied_area(&self) -> f64 {
        self.grid.occupied_count() as f64 * self.grid.cell_area()
    }

    pub fn outcome(&self) -> &SimOutcome {
        &self.outcome
    }

    fn eps(&self) -> f64 {
        self.params.vt * self.cfg.dt + 1e-9 * self.cfg.cell_size
    }

    /// Clears what the sensors sweep over `[a, b]`, splitting at phase
    /// boundaries so every piece follows a single motion law.
    fn sweep_interval(&mut self, a: f64, b: f64) {
        let eps = self.eps();
        let band = 2.0 * self.cfg.cell_size + eps;
        let mut from = a;
        let mut idx = self.plan.phase_index(a);
        loop {
            let end = self.plan.phases()[idx].end();
            let to = end.min(b);
            for s in 0..self.plan.sweeper_count() {
                let (i0, o0) = self.plan.sensor(s, idx, from);
                let (i1, o1) = self.plan.sensor(s, idx, to);
                let swath = ConvexPolygon::hull(&[i0, o0, o1, i1]);
                self.grid.clear_swath(&swath, eps, band, self.params.vt, b);
            }
            if end >= b {
                break;
            }
            from = end;
            idx += 1;
        }
    }

    /// Advances the world by one `dt`: dilation, clearing, bookkeeping.
    pub fn step(&mut self) {
        let (a, b) = (self.clock, self.clock + self.cfg.dt);
        self.grid.dilate(self.params.vt, b);
        self.sweep_interval(a, b);
        self.clock = b;
        self.steps += 1;
        let extent = self.grid.extent();
        let new_phase = self.plan.phase_index(b);
        for ended in self.phase..new_phase {
            self.record_phase_end(ended, extent.map(|e| (e.max_radius, e.min_radius)));
        }
        self.phase = new_phase;
        if self.grid.occupied_count() == 0 && !self.outcome.cleaned {
            self.outcome.cleaned = self.outcome.escape_event.is_none();
            self.outcome.clean_time = Some(b);
        }
        if let Some(e) = extent {
            let guard = self.plan.guard(new_phase, b);
            let margin = guard + GUARD_TOLERANCE_CELLS * self.cfg.cell_size - e.max_radius;
            self.outcome.min_guard_margin = self.outcome.min_guard_margin.min(margin);
            if margin < 0.0 && self.outcome.escape_event.is_none() {
                self.outcome.escape_event = Some(EscapeEvent {
                    time: b,
                    cell: self.grid.coords(e.farthest),
                    radius: e.max_radius,
                    guard,
                });
            }
        }
        self.outcome.steps = self.steps;
        self.outcome.final_time = b;
    }

    fn record_phase_end(&mut self, idx: usize, extent: Option<(f64, f64)>) {
        let phase = self.plan.phases()[idx];
        let (max_r, min_r) = extent.unwrap_or((0.0, 0.0));
        if self.plan.is_sweep(idx) {
            self.outcome.snapshots.push(CycleSnapshot {
                sweep: phase.anchor_step,
                time: self.clock,
                occupied_cells: self.grid.occupied_count(),
                max_radius: max_r,
            });
        }
        match phase.role {
            PhaseRole::Sweep { .. } if matches!(phase.motion, plan::Motion::Spiral { .. }) => {
                // The region left behind a spiral traversal is a disk whose
                // radius is the inner tip's: R_i − 2r + VT·(elapsed).
                if let plan::Motion::Spiral { shifted, .. } = phase.motion {
                    let predicted = shifted - self.params.r + self.params.vt * (self.clock - phase.start);
                    let residual = if extent.is_some() {
                        (max_r - predicted).abs().max(predicted - min_r)
                    } else {
                        predicted.max(0.0)
                    };
                    log::debug!("spiral sweep {idx}: predicted {predicted}, boundary [{min_r}, {max_r}]");
                    self.outcome.circularity_residuals.push(residual);
                }
            }
            PhaseRole::Advance { .. } | PhaseRole::FinalAdvance => {
                self.outcome.per_cycle_max_radius.push(max_r);
            }
            _ => {}
        }
    }
}

/// Runs the analytic schedule of `kind` on the grid until the region is
/// empty, an escape is seen, or time runs out.
///
/// Without an explicit `max_time` the run is allowed 5% (and at least ten
/// steps) beyond the schedule's end.
pub fn run_cleaning(params: &ScenarioParams, kind: SweepKind, cfg: &SimConfig) -> Result<SimOutcome> {
    validate_params(*params)?;
    let report = crate::schedule(params, kind)?;
    let plan = Plan::from_report(params, &report);
    let horizon = plan.end_time() * 1.05 + 10.0 * cfg.dt;
    let max_time = cfg.max_time.min(horizon);
    let mut world = SimWorld::new(params, plan, cfg)?;
    loop {
        world.step();
        let out = world.outcome();
        if out.escape_event.is_some() || out.clean_time.is_some() {
            return Ok(world.outcome.clone());
        }
        if world.clock() >= max_time {
            return Err(Error::Timeout {
                time: world.clock(),
                occupied: world.grid().occupied_count(),
            });
        }
    }
}

/// Critical velocity of `kind`, or `None` where it vanishes (static
/// evaders have no spiral root).
pub fn process_critical_velocity(params: &ScenarioParams, kind: SweepKind) -> Option<f64> {
    let v = match kind {
        SweepKind::Circular => circular_critical_velocity(params),
        SweepKind::Spiral => spiral_critical_velocity(params, DEFAULT_REL_TOL).ok()?,
    };
    (v > 0.0).then_some(v)
}

/// Runs up to `cycles` cycles with `Vs = vs_scale × critical velocity` and
/// reports whether the region ever leaves its guard circle. Where the
/// critical velocity is zero the scale applies to `params.vs` instead.
pub fn run_confinement_check(
    params: &ScenarioParams,
    kind: SweepKind,
    vs_scale: f64,
    cycles: usize,
    cfg: &SimConfig,
) -> Result<SimOutcome> {
    validate_params(*params)?;
    let base = process_critical_velocity(params, kind).unwrap_or(params.vs);
    let run_params = params.with_vs(vs_scale * base);
    let plan = Plan::confinement(&run_params, kind, cycles);
    let end = plan.end_time().min(cfg.max_time);
    let mut world = SimWorld::new(&run_params, plan, cfg)?;
    while world.clock() < end {
        world.step();
        if world.outcome().escape_event.is_some() || world.outcome().clean_time.is_some() {
            break;
        }
    }
    Ok(world.outcome.clone())
}

/// Boundary-circle residuals after each regular spiral traversal of a full
/// spiral cleaning run.
pub fn circularity_check(params: &ScenarioParams, cfg: &SimConfig) -> Result<Vec<f64>> {
    Ok(run_cleaning(params, SweepKind::Spiral, cfg)?.circularity_residuals)
}

/// Snapshot table as CSV text.
pub fn snapshots_csv(outcome: &SimOutcome) -> String {
    let mut out = String::from("sweep,time,occupied_cells,max_radius\n");
    for s in &outcome.snapshots {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            s.sweep,
            crate::experiments::csv::format_number(s.time),
            s.occupied_cells,
            crate::experiments::csv::format_number(s.max_radius)
        );
    }
    out
}
