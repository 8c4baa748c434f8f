//! Circular versus spiral cleaning times at equal swarm size and speed.

use rayon::prelude::*;

use crate::circular::circ_schedule;
use crate::critical::circular_critical_velocity;
use crate::error::Result;
use crate::scenario::ScenarioParams;
use crate::spiral::spiral_schedule;

use super::csv::{format_number, Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRow {
    pub n: u32,
    pub delta_v: f64,
    pub vs_used: f64,
    pub t_circular: f64,
    pub t_spiral: f64,
    /// `t_circular / t_spiral`.
    pub speedup: f64,
}

/// Both schedules at `Vs = circular critical + delta_v`.
pub fn compare_one(base: &ScenarioParams, n: u32, delta_v: f64) -> Result<ComparisonRow> {
    let params = base.with_n(n);
    let vs_used = circular_critical_velocity(&params) + delta_v;
    let params = params.with_vs(vs_used);
    let t_circular = circ_schedule(&params)?.t_total;
    let t_spiral = spiral_schedule(&params)?.t_total;
    Ok(ComparisonRow {
        n,
        delta_v,
        vs_used,
        t_circular,
        t_spiral,
        speedup: t_circular / t_spiral,
    })
}

/// Every `(n, ΔV)` cell in row-major order (n outer), each with its own
/// result. Cells are evaluated in parallel; the order is fixed.
pub fn compare_cells(base: &ScenarioParams, n_values: &[u32], delta_v_values: &[f64]) -> Vec<Result<ComparisonRow>> {
    let cells: Vec<(u32, f64)> = n_values
        .iter()
        .flat_map(|&n| delta_v_values.iter().map(move |&dv| (n, dv)))
        .collect();
    cells.par_iter().map(|&(n, dv)| compare_one(base, n, dv)).collect()
}

/// All rows, failing on the first cell that cannot be scheduled.
pub fn compare(base: &ScenarioParams, n_values: &[u32], delta_v_values: &[f64]) -> Result<Vec<ComparisonRow>> {
    compare_cells(base, n_values, delta_v_values).into_iter().collect()
}

/// Long format: one row per cell.
pub fn rows_table(rows: &[ComparisonRow]) -> Table {
    let headers = ["n", "delta_v", "vs_used", "t_circular", "t_spiral", "speedup"];
    let mut table = Table::new(headers.iter().map(|h| h.to_string()).collect());
    for row in rows {
        table.push(vec![
            Cell::Int(i64::from(row.n)),
            Cell::Num(row.delta_v),
            Cell::Num(row.vs_used),
            Cell::Num(row.t_circular),
            Cell::Num(row.t_spiral),
            Cell::Num(row.speedup),
        ]);
    }
    table
}

/// Wide format: first column `n`, then circular and spiral totals per ΔV.
pub fn wide_table(n_values: &[u32], delta_v_values: &[f64], cells: &[Result<ComparisonRow>]) -> Table {
    let mut headers = vec!["n".to_string()];
    for &dv in delta_v_values {
        let dv = format_number(dv);
        headers.push(format!("t_circular_dv_{dv}"));
        headers.push(format!("t_spiral_dv_{dv}"));
    }
    let mut table = Table::new(headers);
    for (i, &n) in n_values.iter().enumerate() {
        let mut row = vec![Cell::Int(i64::from(n))];
        for cell in &cells[i * delta_v_values.len()..(i + 1) * delta_v_values.len()] {
            row.push(cell.clone().map(|c| c.t_circular).into());
            row.push(cell.clone().map(|c| c.t_spiral).into());
        }
        table.push(row);
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_speed_comparison() {
        let base = ScenarioParams::reference();
        let dv = 40.0 - circular_critical_velocity(&base);
        let row = compare_one(&base, 2, dv).unwrap();
        assert!((row.vs_used - 40.0).abs() < 1e-12);
        assert!((row.t_circular - 108.462_725_050_280_65).abs() < 1e-9);
        assert!(row.t_spiral < row.t_circular);
        assert!(row.speedup > 1.0);
    }

    #[test]
    fn static_evaders_still_favour_spiral() {
        let base = ScenarioParams { vt: 0.0, ..ScenarioParams::reference() };
        for row in compare(&base, &[2, 4, 8], &[10.0, 40.0]).unwrap() {
            assert!(row.t_spiral <= row.t_circular, "{row:?}");
        }
    }
}
