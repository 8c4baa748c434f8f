//! Executes parsed experiment jobs and writes their CSV outputs.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scenario::{ScenarioParams, SweepKind};
use crate::sim::{process_critical_velocity, run_cleaning, run_confinement_check, snapshots_csv, SimConfig, SimOutcome};

use super::compare::{compare_cells, rows_table};
use super::config::{load_config, Job, SpeedChoice};
use super::csv::{error_code, Cell, Table};
use super::figures::figure_data;

/// Files written by a config run and any cells that failed along the way.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunSummary {
    pub written: Vec<PathBuf>,
    pub failed_cells: Vec<String>,
}

impl RunSummary {
    pub fn success(&self) -> bool {
        self.failed_cells.is_empty()
    }
}

/// Writes `text`, creating parent directories as needed.
pub fn write_output(path: &Path, text: &str) -> Result<()> {
    let io = |e: std::io::Error| Error::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    std::fs::write(path, text).map_err(io)
}

fn record(summary: &mut RunSummary, label: &str, table: &Table, path: &Path) -> Result<()> {
    summary
        .failed_cells
        .extend(table.failed_cells().into_iter().map(|c| format!("{label}: {c}")));
    write_output(path, &table.to_csv())?;
    summary.written.push(path.to_path_buf());
    Ok(())
}

/// Escape outcome of one confinement run per `(process, vs_scale)`.
pub fn confinement_table(
    base: &ScenarioParams,
    kinds: &[SweepKind],
    vs_scales: &[f64],
    cycles: usize,
    cell_size: f64,
    dt: f64,
) -> Table {
    let headers = [
        "process",
        "vs_scale",
        "vs_used",
        "escaped",
        "escape_time",
        "escape_radius",
        "guard_radius",
        "min_guard_margin",
    ];
    let cells: Vec<(SweepKind, f64)> = kinds
        .iter()
        .flat_map(|&k| vs_scales.iter().map(move |&s| (k, s)))
        .collect();
    let results: Vec<Result<SimOutcome>> = cells
        .par_iter()
        .map(|&(kind, scale)| {
            let cfg = SimConfig::new(base, cell_size, dt);
            run_confinement_check(base, kind, scale, cycles, &cfg)
        })
        .collect();
    let mut table = Table::new(headers.iter().map(|h| h.to_string()).collect());
    for (&(kind, scale), result) in cells.iter().zip(results) {
        let vs_used = scale * process_critical_velocity(base, kind).unwrap_or(base.vs);
        let mut row = vec![Cell::Text(kind.name().into()), Cell::Num(scale), Cell::Num(vs_used)];
        match result {
            Ok(out) => {
                let escape = out.escape_event.as_ref();
                row.push(Cell::Int(i64::from(escape.is_some())));
                row.push(Cell::Num(escape.map_or(f64::NAN, |e| e.time)));
                row.push(Cell::Num(escape.map_or(f64::NAN, |e| e.radius)));
                row.push(Cell::Num(escape.map_or(f64::NAN, |e| e.guard)));
                row.push(Cell::Num(out.min_guard_margin));
            }
            Err(e) => row.extend(std::iter::repeat_n(Cell::Failed(error_code(&e).into()), 5)),
        }
        table.push(row);
    }
    table
}

/// Simulated against analytic cleaning time for each process. Returns the
/// table and each run's outcome.
pub fn cleaning_table(
    params: &ScenarioParams,
    kinds: &[SweepKind],
    cell_size: f64,
    dt: f64,
) -> (Table, Vec<Result<SimOutcome>>) {
    let headers = ["process", "n", "vs", "t_analytic", "t_simulated", "rel_error", "escaped"];
    let cfg = SimConfig::new(params, cell_size, dt);
    let results: Vec<Result<SimOutcome>> = kinds.par_iter().map(|&k| run_cleaning(params, k, &cfg)).collect();
    let mut table = Table::new(headers.iter().map(|h| h.to_string()).collect());
    for (&kind, result) in kinds.iter().zip(&results) {
        let mut row = vec![
            Cell::Text(kind.name().into()),
            Cell::Int(i64::from(params.n)),
            Cell::Num(params.vs),
        ];
        let analytic = crate::schedule(params, kind).map(|r| r.t_total);
        row.push(analytic.clone().into());
        match (result, &analytic) {
            (Ok(out), Ok(t)) => {
                let t = *t;
                let sim = out.clean_time.unwrap_or(f64::NAN);
                row.push(Cell::Num(sim));
                row.push(Cell::Num((sim - t).abs() / t));
                row.push(Cell::Int(i64::from(out.escape_event.is_some())));
            }
            (Err(e), _) | (_, Err(e)) => {
                row.extend(std::iter::repeat_n(Cell::Failed(error_code(e).into()), 3));
            }
        }
        table.push(row);
    }
    (table, results)
}

/// Resolves a speed choice against the critical velocity of `kind`.
pub fn resolve_speed(params: &ScenarioParams, kind: SweepKind, speed: SpeedChoice) -> f64 {
    match speed {
        SpeedChoice::Absolute(v) => v,
        SpeedChoice::AboveCritical(dv) => process_critical_velocity(params, kind).unwrap_or(0.0) + dv,
    }
}

/// Runs one job, appending its outputs to `summary`.
pub fn run_job(base: &ScenarioParams, job: &Job, summary: &mut RunSummary) -> Result<()> {
    match job {
        Job::Figure(spec) => {
            let table = figure_data(spec)?;
            let path = spec.output_path.clone().ok_or_else(|| Error::InvalidConfig("figure job without output".into()))?;
            record(summary, spec.figure.name(), &table, &path)
        }
        Job::Compare {
            n_values,
            delta_v_values,
            out,
        } => {
            let cells = compare_cells(base, n_values, delta_v_values);
            for (i, cell) in cells.iter().enumerate() {
                if let Err(e) = cell {
                    let n = n_values[i / delta_v_values.len()];
                    let dv = delta_v_values[i % delta_v_values.len()];
                    summary.failed_cells.push(format!("compare: n={n}/dv={dv}: {}", error_code(e)));
                }
            }
            let rows: Vec<_> = cells.into_iter().filter_map(|c| c.ok()).collect();
            write_output(out, &rows_table(&rows).to_csv())?;
            summary.written.push(out.clone());
            Ok(())
        }
        Job::Confinement {
            processes,
            n,
            vs_scales,
            cycles,
            cell_size,
            dt,
            out,
        } => {
            let params = base.with_n(*n);
            let table = confinement_table(&params, &processes.kinds(), vs_scales, *cycles, *cell_size, *dt);
            record(summary, "confinement", &table, out)
        }
        Job::Cleaning {
            processes,
            n,
            speed,
            cell_size,
            dt,
            out,
            snapshots,
        } => {
            let mut combined: Option<Table> = None;
            let mut snaps = String::new();
            for kind in processes.kinds() {
                let params = base.with_n(*n).with_vs(resolve_speed(&base.with_n(*n), kind, *speed));
                let (table, outcomes) = cleaning_table(&params, &[kind], *cell_size, *dt);
                if let Some(Ok(o)) = outcomes.first() {
                    for line in snapshots_csv(o).lines().skip(1) {
                        snaps.push_str(&format!("{},{line}\n", kind.name()));
                    }
                }
                match combined.as_mut() {
                    None => combined = Some(table),
                    Some(c) => c.rows.extend(table.rows),
                }
            }
            let table = combined.unwrap_or_default();
            record(summary, "cleaning", &table, out)?;
            if let Some(path) = snapshots {
                write_output(path, &format!("process,sweep,time,occupied_cells,max_radius\n{snaps}"))?;
                summary.written.push(path.clone());
            }
            Ok(())
        }
    }
}

/// Loads a config file and runs every job in order.
pub fn run_config(path: &Path) -> Result<RunSummary> {
    let config = load_config(path)?;
    let mut summary = RunSummary::default();
    for job in &config.jobs {
        run_job(&config.scenario, job, &mut summary)?;
    }
    Ok(summary)
}
