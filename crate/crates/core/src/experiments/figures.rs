//! Data behind every figure of the study, one CSV row per swarm size.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;

use crate::critical::{
    circular_critical_velocity, lower_bound_velocity, spiral_critical_velocity, spiral_no_escape_velocity,
    DEFAULT_REL_TOL,
};
use crate::error::{Error, Result};
use crate::report::SweepReport;
use crate::scenario::{ScenarioParams, SweepKind};

use super::csv::{format_number, Cell, Table};

/// Swarm sizes 2, 4, …, 32.
pub fn default_n_values() -> Vec<u32> {
    (1..=16).map(|k| 2 * k).collect()
}

/// Speed offsets above the critical velocity used for multi-curve figures.
pub const DEFAULT_DELTA_V: [f64; 4] = [1.0, 2.0, 5.0, 10.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    Fig1,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig10,
    Fig11,
    Fig12,
    Fig13,
    Fig14,
    Fig15,
    Fig16,
    Fig17a,
    Fig17b,
    Fig17c,
    Fig17d,
    Fig18,
    Fig19,
}

impl FigureId {
    pub const ALL: [FigureId; 20] = [
        FigureId::Fig1,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig6,
        FigureId::Fig7,
        FigureId::Fig8,
        FigureId::Fig10,
        FigureId::Fig11,
        FigureId::Fig12,
        FigureId::Fig13,
        FigureId::Fig14,
        FigureId::Fig15,
        FigureId::Fig16,
        FigureId::Fig17a,
        FigureId::Fig17b,
        FigureId::Fig17c,
        FigureId::Fig17d,
        FigureId::Fig18,
        FigureId::Fig19,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6 => "fig6",
            FigureId::Fig7 => "fig7",
            FigureId::Fig8 => "fig8",
            FigureId::Fig10 => "fig10",
            FigureId::Fig11 => "fig11",
            FigureId::Fig12 => "fig12",
            FigureId::Fig13 => "fig13",
            FigureId::Fig14 => "fig14",
            FigureId::Fig15 => "fig15",
            FigureId::Fig16 => "fig16",
            FigureId::Fig17a => "fig17a",
            FigureId::Fig17b => "fig17b",
            FigureId::Fig17c => "fig17c",
            FigureId::Fig17d => "fig17d",
            FigureId::Fig18 => "fig18",
            FigureId::Fig19 => "fig19",
        }
    }

    /// How the figure is built.
    pub fn kind(self) -> FigureKind {
        use FigureKind::*;
        use Quantity::*;
        use SweepKind::{Circular, Spiral};
        match self {
            FigureId::Fig1 => Velocities(&[VelocityColumn::LowerBound]),
            FigureId::Fig3 => Velocities(&[VelocityColumn::LowerBound, VelocityColumn::Circular, VelocityColumn::CircularRatio]),
            FigureId::Fig10 => Velocities(&[VelocityColumn::LowerBound, VelocityColumn::Spiral, VelocityColumn::SpiralNaive]),
            FigureId::Fig11 => Velocities(&[VelocityColumn::SpiralRatio]),
            FigureId::Fig4 => Timing { process: Circular, offset_from: Circular, quantity: Total },
            FigureId::Fig5 => Timing { process: Circular, offset_from: Circular, quantity: Motion },
            FigureId::Fig6 => Timing { process: Circular, offset_from: Circular, quantity: Advance },
            FigureId::Fig7 => Timing { process: Circular, offset_from: Circular, quantity: Ratio },
            FigureId::Fig8 => Timing { process: Circular, offset_from: Circular, quantity: Gain },
            FigureId::Fig12 => Timing { process: Spiral, offset_from: Spiral, quantity: Total },
            FigureId::Fig13 => Timing { process: Spiral, offset_from: Spiral, quantity: Motion },
            FigureId::Fig14 => Timing { process: Spiral, offset_from: Spiral, quantity: Advance },
            FigureId::Fig15 => Timing { process: Spiral, offset_from: Spiral, quantity: Ratio },
            FigureId::Fig16 => Timing { process: Spiral, offset_from: Spiral, quantity: Gain },
            FigureId::Fig17a => Timing { process: Spiral, offset_from: Circular, quantity: Total },
            FigureId::Fig17b => Timing { process: Spiral, offset_from: Circular, quantity: Ratio },
            FigureId::Fig17c => Timing { process: Spiral, offset_from: Circular, quantity: Motion },
            FigureId::Fig17d => Timing { process: Spiral, offset_from: Circular, quantity: Advance },
            FigureId::Fig18 => Timing { process: Spiral, offset_from: Circular, quantity: Gain },
            FigureId::Fig19 => Comparison,
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase();
        FigureId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| format!("unknown figure `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VelocityColumn {
    LowerBound,
    Circular,
    CircularRatio,
    Spiral,
    SpiralNaive,
    SpiralRatio,
}

impl VelocityColumn {
    fn header(self) -> &'static str {
        match self {
            VelocityColumn::LowerBound => "v_lower_bound",
            VelocityColumn::Circular => "v_circular",
            VelocityColumn::CircularRatio => "ratio_circular",
            VelocityColumn::Spiral => "v_spiral",
            VelocityColumn::SpiralNaive => "v_spiral_naive",
            VelocityColumn::SpiralRatio => "ratio_spiral",
        }
    }

    fn value(self, params: &ScenarioParams) -> Cell {
        let lb = lower_bound_velocity(params);
        let spiral = || spiral_critical_velocity(params, DEFAULT_REL_TOL);
        match self {
            VelocityColumn::LowerBound => Cell::Num(lb),
            VelocityColumn::Circular => Cell::Num(circular_critical_velocity(params)),
            VelocityColumn::CircularRatio => Cell::Num(circular_critical_velocity(params) / lb),
            VelocityColumn::Spiral => spiral().into(),
            VelocityColumn::SpiralNaive => Cell::Num(spiral_no_escape_velocity(params)),
            VelocityColumn::SpiralRatio => spiral().map(|v| v / lb).into(),
        }
    }
}

/// Schedule quantity plotted by a timing figure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Total,
    Motion,
    Advance,
    /// Traversal time over advance time.
    Ratio,
    /// `T(2)/T(n)`, the speed-up over a two-sweeper swarm.
    Gain,
}

impl Quantity {
    fn prefix(self) -> &'static str {
        match self {
            Quantity::Total => "t_total",
            Quantity::Motion => "t_motion",
            Quantity::Advance => "t_in",
            Quantity::Ratio => "motion_to_advance",
            Quantity::Gain => "gain",
        }
    }

    fn of(self, report: &SweepReport) -> f64 {
        match self {
            Quantity::Total | Quantity::Gain => report.t_total,
            Quantity::Motion => report.t_motion,
            Quantity::Advance => report.t_in,
            Quantity::Ratio => report.motion_to_advance_ratio(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureKind {
    Velocities(&'static [VelocityColumn]),
    /// Schedule of `process` at `Vs = critical(offset_from) + ΔV`.
    Timing {
        process: SweepKind,
        offset_from: SweepKind,
        quantity: Quantity,
    },
    /// Circular and spiral totals at `Vs = circular critical + ΔV`.
    Comparison,
}

/// One figure to reproduce.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub figure: FigureId,
    /// Base constants; the speed is set per cell.
    pub params: ScenarioParams,
    pub n_values: Vec<u32>,
    pub delta_v_values: Vec<f64>,
    pub output_path: Option<PathBuf>,
}

impl ExperimentSpec {
    pub fn with_defaults(figure: FigureId, params: ScenarioParams) -> Self {
        Self {
            figure,
            params,
            n_values: default_n_values(),
            delta_v_values: DEFAULT_DELTA_V.to_vec(),
            output_path: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() {
            return Err(Error::Parse {
                key: "n_values".into(),
                message: "at least one swarm size is required".into(),
            });
        }
        if let Some(&n) = self.n_values.iter().find(|&&n| n < 2 || !n.is_multiple_of(2)) {
            return Err(Error::OddSwarmSize(n));
        }
        if self.n_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse {
                key: "n_values".into(),
                message: "swarm sizes must be strictly ascending".into(),
            });
        }
        if let Some(&dv) = self.delta_v_values.iter().find(|&&dv| !(dv > 0.0)) {
            return Err(Error::Parse {
                key: "delta_v".into(),
                message: format!("speed offsets must be positive, got {dv}"),
            });
        }
        Ok(())
    }
}

/// Critical velocity of `kind`, used as the offset base for `ΔV`.
pub fn critical_for(params: &ScenarioParams, kind: SweepKind) -> Result<f64> {
    match kind {
        SweepKind::Circular => Ok(circular_critical_velocity(params)),
        SweepKind::Spiral => spiral_critical_velocity(params, DEFAULT_REL_TOL),
    }
}

/// Schedule of `process` with `Vs = critical(offset_from) + dv`.
pub fn offset_schedule(
    base: &ScenarioParams,
    n: u32,
    process: SweepKind,
    offset_from: SweepKind,
    dv: f64,
) -> Result<SweepReport> {
    let params = base.with_n(n);
    let vs = critical_for(&params, offset_from)? + dv;
    crate::schedule(&params.with_vs(vs), process)
}

fn dv_header(prefix: &str, dv: f64) -> String {
    format!("{prefix}_dv_{}", format_number(dv))
}

/// Table of the quantity plotted in `spec.figure`.
pub fn figure_data(spec: &ExperimentSpec) -> Result<Table> {
    spec.validate()?;
    let base = spec.params;
    match spec.figure.kind() {
        FigureKind::Velocities(columns) => {
            let mut headers = vec!["n".to_string()];
            headers.extend(columns.iter().map(|c| c.header().to_string()));
            let mut table = Table::new(headers);
            let rows: Vec<Vec<Cell>> = spec
                .n_values
                .par_iter()
                .map(|&n| {
                    let p = base.with_n(n);
                    let mut row = vec![Cell::Int(i64::from(n))];
                    row.extend(columns.iter().map(|c| c.value(&p)));
                    row
                })
                .collect();
            rows.into_iter().for_each(|row| table.push(row));
            Ok(table)
        }
        FigureKind::Timing {
            process,
            offset_from,
            quantity,
        } => {
            let mut headers = vec!["n".to_string()];
            headers.extend(spec.delta_v_values.iter().map(|&dv| dv_header(quantity.prefix(), dv)));
            let mut table = Table::new(headers);
            let reference: Vec<Result<f64>> = spec
                .delta_v_values
                .iter()
                .map(|&dv| offset_schedule(&base, 2, process, offset_from, dv).map(|r| r.t_total))
                .collect();
            let rows: Vec<Vec<Cell>> = spec
                .n_values
                .par_iter()
                .map(|&n| {
                    let mut row = vec![Cell::Int(i64::from(n))];
                    for (j, &dv) in spec.delta_v_values.iter().enumerate() {
                        let value = offset_schedule(&base, n, process, offset_from, dv).and_then(|report| {
                            let v = quantity.of(&report);
                            match quantity {
                                Quantity::Gain => reference[j].clone().map(|t2| t2 / v),
                                _ => Ok(v),
                            }
                        });
                        row.push(value.into());
                    }
                    row
                })
                .collect();
            rows.into_iter().for_each(|row| table.push(row));
            Ok(table)
        }
        FigureKind::Comparison => {
            let cells = super::compare::compare_cells(&base, &spec.n_values, &spec.delta_v_values);
            Ok(super::compare::wide_table(&spec.n_values, &spec.delta_v_values, &cells))
        }
    }
}
