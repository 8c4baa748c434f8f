//! Golden structure and spot values for every figure table.

use sweepers::critical::{
    circular_critical_velocity, lower_bound_velocity, spiral_critical_velocity, spiral_no_escape_velocity,
    DEFAULT_REL_TOL,
};
use sweepers::experiments::csv::{format_number, Table};
use sweepers::experiments::figures::{figure_data, offset_schedule, ExperimentSpec, FigureId};
use sweepers::{ScenarioParams, SweepKind};

const SPOT_N: u32 = 4;
const SPOT_DV: f64 = 5.0;

fn table(id: FigureId) -> Table {
    figure_data(&ExperimentSpec::with_defaults(id, ScenarioParams::reference())).unwrap()
}

fn spot(table: &Table, column: &str) -> f64 {
    let col = table.column(column).unwrap_or_else(|| panic!("missing column {column} in {:?}", table.headers));
    let row = table
        .rows
        .iter()
        .find(|r| r[0].as_f64() == Some(f64::from(SPOT_N)))
        .expect("spot row");
    row[col].as_f64().expect("numeric cell")
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * b.abs().max(1.0)
}

fn dv_headers(prefix: &str) -> Vec<String> {
    let mut h = vec!["n".to_string()];
    h.extend([1.0, 2.0, 5.0, 10.0].iter().map(|dv| format!("{prefix}_dv_{}", format_number(*dv))));
    h
}

fn spot_params() -> ScenarioParams {
    ScenarioParams::reference().with_n(SPOT_N)
}

#[test]
fn velocity_figures() {
    let p = spot_params();
    let t = table(FigureId::Fig1);
    assert_eq!(t.headers, ["n", "v_lower_bound"]);
    assert_eq!(t.rows.len(), 16);
    assert!(close(spot(&t, "v_lower_bound"), lower_bound_velocity(&p)));

    let t = table(FigureId::Fig3);
    assert_eq!(t.headers, ["n", "v_lower_bound", "v_circular", "ratio_circular"]);
    assert_eq!(t.rows.len(), 16);
    assert!(close(spot(&t, "v_circular"), circular_critical_velocity(&p)));
    for row in &t.rows {
        assert_eq!(row[3].as_f64(), Some(2.0));
    }

    let t = table(FigureId::Fig10);
    assert_eq!(t.headers, ["n", "v_lower_bound", "v_spiral", "v_spiral_naive"]);
    assert!(close(spot(&t, "v_spiral"), spiral_critical_velocity(&p, DEFAULT_REL_TOL).unwrap()));
    assert!(close(spot(&t, "v_spiral_naive"), spiral_no_escape_velocity(&p)));

    let t = table(FigureId::Fig11);
    assert_eq!(t.headers, ["n", "ratio_spiral"]);
    let expected = spiral_critical_velocity(&p, DEFAULT_REL_TOL).unwrap() / lower_bound_velocity(&p);
    assert!(close(spot(&t, "ratio_spiral"), expected));
}

#[test]
fn timing_figures() {
    use SweepKind::{Circular, Spiral};
    let cases = [
        (FigureId::Fig4, "t_total", Circular, Circular),
        (FigureId::Fig5, "t_motion", Circular, Circular),
        (FigureId::Fig6, "t_in", Circular, Circular),
        (FigureId::Fig7, "motion_to_advance", Circular, Circular),
        (FigureId::Fig8, "gain", Circular, Circular),
        (FigureId::Fig12, "t_total", Spiral, Spiral),
        (FigureId::Fig13, "t_motion", Spiral, Spiral),
        (FigureId::Fig14, "t_in", Spiral, Spiral),
        (FigureId::Fig15, "motion_to_advance", Spiral, Spiral),
        (FigureId::Fig16, "gain", Spiral, Spiral),
        (FigureId::Fig17a, "t_total", Spiral, Circular),
        (FigureId::Fig17b, "motion_to_advance", Spiral, Circular),
        (FigureId::Fig17c, "t_motion", Spiral, Circular),
        (FigureId::Fig17d, "t_in", Spiral, Circular),
        (FigureId::Fig18, "gain", Spiral, Circular),
    ];
    let base = ScenarioParams::reference();
    for (id, prefix, process, offset_from) in cases {
        let t = table(id);
        assert_eq!(t.headers, dv_headers(prefix), "{id}");
        assert_eq!(t.rows.len(), 16, "{id}");
        assert!(t.failed_cells().is_empty(), "{id}: {:?}", t.failed_cells());
        let report = offset_schedule(&base, SPOT_N, process, offset_from, SPOT_DV).unwrap();
        let expected = match prefix {
            "t_total" => report.t_total,
            "t_motion" => report.t_motion,
            "t_in" => report.t_in,
            "motion_to_advance" => report.motion_to_advance_ratio(),
            _ => offset_schedule(&base, 2, process, offset_from, SPOT_DV).unwrap().t_total / report.t_total,
        };
        assert!(close(spot(&t, &format!("{prefix}_dv_5")), expected), "{id}");
    }
}

#[test]
fn gain_is_one_for_two_sweepers() {
    for id in [FigureId::Fig8, FigureId::Fig16, FigureId::Fig18] {
        let t = table(id);
        for cell in &t.rows[0][1..] {
            assert_eq!(cell.as_f64(), Some(1.0), "{id}");
        }
    }
}

#[test]
fn comparison_figure() {
    let t = table(FigureId::Fig19);
    let mut headers = vec!["n".to_string()];
    for dv in ["1", "2", "5", "10"] {
        headers.push(format!("t_circular_dv_{dv}"));
        headers.push(format!("t_spiral_dv_{dv}"));
    }
    assert_eq!(t.headers, headers);
    assert_eq!(t.rows.len(), 16);
    for row in &t.rows {
        for pair in row[1..].chunks(2) {
            assert!(pair[1].as_f64().unwrap() < pair[0].as_f64().unwrap());
        }
    }
    let base = ScenarioParams::reference();
    let circ = offset_schedule(&base, SPOT_N, SweepKind::Circular, SweepKind::Circular, SPOT_DV).unwrap();
    let spiral = offset_schedule(&base, SPOT_N, SweepKind::Spiral, SweepKind::Circular, SPOT_DV).unwrap();
    assert!(close(spot(&t, "t_circular_dv_5"), circ.t_total));
    assert!(close(spot(&t, "t_spiral_dv_5"), spiral.t_total));
}

#[test]
fn every_figure_renders_deterministic_csv() {
    for id in FigureId::ALL {
        let a = table(id).to_csv();
        let b = table(id).to_csv();
        assert_eq!(a, b, "{id}");
        assert!(a.ends_with('\n'));
        assert!(!a.contains('\r'));
        assert_eq!(a.lines().count(), 17, "{id}");
    }
}
