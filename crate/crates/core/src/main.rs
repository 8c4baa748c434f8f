use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use sweepers::critical::velocity_report;
use sweepers::experiments::check::run_checks;
use sweepers::experiments::compare::{compare_cells, rows_table};
use sweepers::experiments::config::SpeedChoice;
use sweepers::experiments::csv::{format_number, Cell, Table};
use sweepers::experiments::figures::{default_n_values, figure_data, ExperimentSpec, FigureId, DEFAULT_DELTA_V};
use sweepers::experiments::run::{cleaning_table, resolve_speed, run_config, write_output};
use sweepers::scenario::validate_params;
use sweepers::{ScenarioParams, SweepKind, SweepReport};

/// Circular and spiral sweep processes: critical velocities, schedules,
/// grid simulation and figure data.
#[derive(Parser)]
#[command(name = "sweepers", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Scenario {
    /// Initial evader region radius.
    #[arg(long = "R0", default_value_t = 100.0)]
    r0: f64,
    /// Sensor half-length.
    #[arg(long = "r", default_value_t = 10.0)]
    r: f64,
    /// Maximal evader speed.
    #[arg(long = "VT", default_value_t = 1.0)]
    vt: f64,
    /// Number of sweepers (even).
    #[arg(long, default_value_t = 2)]
    n: u32,
}

#[derive(Args, Clone, Copy)]
#[group(required = true, multiple = false)]
struct Speed {
    /// Sweeper speed.
    #[arg(long)]
    vs: Option<f64>,
    /// Sweeper speed above the process's critical velocity.
    #[arg(long)]
    dv: Option<f64>,
}

impl Speed {
    fn choice(self) -> SpeedChoice {
        match (self.vs, self.dv) {
            (Some(v), _) => SpeedChoice::Absolute(v),
            (None, Some(d)) => SpeedChoice::AboveCritical(d),
            (None, None) => unreachable!("clap requires one of --vs and --dv"),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Velocity thresholds for one swarm size.
    Critical {
        #[command(flatten)]
        scenario: Scenario,
    },
    /// Per-cycle schedule of one process as CSV.
    Schedule {
        #[command(flatten)]
        scenario: Scenario,
        #[command(flatten)]
        speed: Speed,
        #[arg(long, default_value = "circular")]
        process: SweepKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cleans the region on an occupancy grid and compares with the schedule.
    Simulate {
        #[command(flatten)]
        scenario: Scenario,
        #[command(flatten)]
        speed: Speed,
        #[arg(long, default_value = "circular")]
        process: SweepKind,
        #[arg(long, default_value_t = 0.25)]
        cell_size: f64,
        #[arg(long, default_value_t = 0.01)]
        dt: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Data behind one figure as CSV.
    Figure {
        #[command(flatten)]
        scenario: Scenario,
        #[arg(long)]
        figure: FigureId,
        /// Comma-separated swarm sizes (default 2, 4, ..., 32).
        #[arg(long, value_delimiter = ',')]
        n_values: Option<Vec<u32>>,
        /// Comma-separated speed offsets (default 1, 2, 5, 10).
        #[arg(long, value_delimiter = ',')]
        dv_values: Option<Vec<f64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Circular against spiral totals on an (n, ΔV) grid.
    Compare {
        #[command(flatten)]
        scenario: Scenario,
        #[arg(long, value_delimiter = ',')]
        n_values: Option<Vec<u32>>,
        #[arg(long, value_delimiter = ',')]
        dv_values: Option<Vec<f64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Invariant suite on the default parameter grid.
    Check {
        #[command(flatten)]
        scenario: Scenario,
    },
    /// Runs every experiment listed in a config file.
    Run { config: PathBuf },
}

fn base(s: &Scenario) -> ScenarioParams {
    ScenarioParams::new(s.r0, s.r, s.vt, s.n, 1.0)
}

fn emit(table: &Table, out: Option<&PathBuf>) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            write_output(path, &table.to_csv())?;
            log::info!("wrote {}", path.display());
        }
        None => print!("{}", table.to_csv()),
    }
    Ok(())
}

fn trace_table(report: &SweepReport) -> Table {
    let headers = ["cycle", "radius", "cycle_time", "slack", "advance_distance", "advance_time"];
    let mut table = Table::new(headers.iter().map(|h| h.to_string()).collect());
    for c in &report.trace {
        table.push(vec![
            Cell::Int(c.index as i64),
            Cell::Num(c.radius_before),
            Cell::Num(c.cycle_time),
            Cell::Num(c.slack),
            Cell::Num(c.advance_distance),
            Cell::Num(c.advance_time),
        ]);
    }
    table
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Critical { scenario } => {
            let p = validate_params(base(&scenario))?;
            let v = velocity_report(&p);
            let opt = |x: Option<f64>| x.map_or("none".to_string(), format_number);
            println!("v_lower_bound = {}", format_number(v.v_lower_bound));
            println!("v_circular = {}", format_number(v.v_circular));
            println!("v_spiral_naive = {}", format_number(v.v_spiral_naive));
            println!("v_spiral = {}", opt(v.v_spiral));
            println!("ratio_circular = {}", format_number(v.ratio_circular));
            println!("ratio_spiral_naive = {}", format_number(v.ratio_spiral_naive));
            println!("ratio_spiral = {}", opt(v.ratio_spiral));
        }
        Command::Schedule {
            scenario,
            speed,
            process,
            out,
        } => {
            let b = base(&scenario);
            let p = validate_params(b.with_vs(resolve_speed(&b, process, speed.choice())))?;
            let report = sweepers::schedule(&p, process)?;
            emit(&trace_table(&report), out.as_ref())?;
            eprintln!(
                "{process}: vs = {}, N = {}, eta = {}, t_in = {}, t_motion = {}, t_total = {}",
                format_number(p.vs),
                report.n_cycles,
                report.eta,
                format_number(report.t_in),
                format_number(report.t_motion),
                format_number(report.t_total)
            );
        }
        Command::Simulate {
            scenario,
            speed,
            process,
            cell_size,
            dt,
            out,
        } => {
            let b = base(&scenario);
            let p = validate_params(b.with_vs(resolve_speed(&b, process, speed.choice())))?;
            let (table, outcomes) = cleaning_table(&p, &[process], cell_size, dt);
            if let Some(Err(e)) = outcomes.first() {
                bail!("simulation failed: {e}");
            }
            emit(&table, out.as_ref())?;
            return Ok(table.failed_cells().is_empty());
        }
        Command::Figure {
            scenario,
            figure,
            n_values,
            dv_values,
            out,
        } => {
            let spec = ExperimentSpec {
                figure,
                params: base(&scenario),
                n_values: n_values.unwrap_or_else(default_n_values),
                delta_v_values: dv_values.unwrap_or_else(|| DEFAULT_DELTA_V.to_vec()),
                output_path: out.clone(),
            };
            let table = figure_data(&spec)?;
            emit(&table, out.as_ref())?;
            let failed = table.failed_cells();
            for f in &failed {
                eprintln!("failed cell {f}");
            }
            return Ok(failed.is_empty());
        }
        Command::Compare {
            scenario,
            n_values,
            dv_values,
            out,
        } => {
            let n_values = n_values.unwrap_or_else(default_n_values);
            let dv_values = dv_values.unwrap_or_else(|| DEFAULT_DELTA_V.to_vec());
            let mut rows = Vec::new();
            let mut ok = true;
            for cell in compare_cells(&base(&scenario), &n_values, &dv_values) {
                match cell {
                    Ok(row) => rows.push(row),
                    Err(e) => {
                        eprintln!("failed cell: {e}");
                        ok = false;
                    }
                }
            }
            emit(&rows_table(&rows), out.as_ref())?;
            return Ok(ok);
        }
        Command::Check { scenario } => {
            let results = run_checks(&base(&scenario), &default_n_values(), &DEFAULT_DELTA_V);
            for r in &results {
                println!("{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
            }
            return Ok(results.iter().all(|r| r.passed));
        }
        Command::Run { config } => {
            let summary = run_config(&config).with_context(|| format!("running {}", config.display()))?;
            for path in &summary.written {
                println!("wrote {}", path.display());
            }
            for f in &summary.failed_cells {
                eprintln!("failed cell {f}");
            }
            return Ok(summary.success());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
