//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Tolerances and time budgets are pinned
//! below.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sweepers::circular::circ_cycle_time;
use sweepers::critical::{
    circular_critical_velocity, lower_bound_velocity, spiral_critical_sides, spiral_critical_velocity,
    DEFAULT_REL_TOL,
};
use sweepers::experiments::compare::{compare, rows_table};
use sweepers::experiments::csv::format_number;
use sweepers::experiments::figures::{default_n_values, DEFAULT_DELTA_V};
use sweepers::report::rel_diff;
use sweepers::sim::{circularity_check, run_cleaning, run_confinement_check, SimConfig};
use sweepers::spiral::spiral_cycle_time;
use sweepers::{schedule, ScenarioParams, SweepKind};

const VELOCITY_TOL: f64 = 1e-12;
const ROOT_RESIDUAL_TOL: f64 = 1e-10;
const CLOSED_FORM_TOL: f64 = 1e-9;
const RANDOM_SETS: usize = 120;
const RANDOM_SEED: u64 = 0x5eed_2024;
const SIM_CELL: f64 = 0.25;
const SIM_DT: f64 = 0.01;
const SIM_REL_TOL: f64 = 0.02;
const SLOW_SCALE: f64 = 0.90;
const FAST_SCALE: f64 = 1.05;
const CONFINEMENT_CYCLES: usize = 3;
const CIRCULARITY_CELLS: f64 = 2.0;

struct Outcome {
    passed: bool,
    detail: String,
    artifact: String,
}

fn n_grid() -> Vec<u32> {
    default_n_values()
}

fn num(x: f64) -> String {
    format_number(x)
}

fn velocity_exactness() -> Outcome {
    let base = ScenarioParams::reference();
    let mut csv = String::from("n,v_lower_bound,expected,v_circular\n");
    let mut worst: f64 = 0.0;
    let mut doubled = true;
    for n in n_grid() {
        let p = base.with_n(n);
        let lb = lower_bound_velocity(&p);
        let expected = PI * p.r0 * p.vt / (f64::from(n) * p.r);
        let vc = circular_critical_velocity(&p);
        worst = worst.max(rel_diff(lb, expected));
        doubled &= vc == 2.0 * lb;
        let _ = writeln!(csv, "{n},{},{},{}", num(lb), num(expected), num(vc));
    }
    Outcome {
        passed: worst <= VELOCITY_TOL && doubled,
        detail: format!("max rel error {worst:.2e} (tol {VELOCITY_TOL:.0e}), circular exactly twice: {doubled}"),
        artifact: csv,
    }
}

fn spiral_root() -> Outcome {
    let base = ScenarioParams::reference();
    let mut csv = String::from("n,v_spiral,lhs,rhs,ratio\n");
    let mut worst: f64 = 0.0;
    let mut ordered = true;
    let mut ratios = Vec::new();
    for n in n_grid() {
        let p = base.with_n(n);
        let v = match spiral_critical_velocity(&p, DEFAULT_REL_TOL) {
            Ok(v) => v,
            Err(e) => {
                return Outcome {
                    passed: false,
                    detail: format!("n={n}: {e}"),
                    artifact: csv,
                }
            }
        };
        let (lhs, rhs) = spiral_critical_sides(&p, v);
        worst = worst.max(rel_diff(lhs, rhs));
        let lb = lower_bound_velocity(&p);
        ordered &= lb < v && v < circular_critical_velocity(&p);
        ratios.push(v / lb);
        let _ = writeln!(csv, "{n},{},{},{},{}", num(v), num(lhs), num(rhs), num(v / lb));
    }
    let decreasing = ratios.windows(2).all(|w| w[1] < w[0]);
    let increasing = ratios.windows(2).all(|w| w[1] > w[0]);
    let trend = if decreasing {
        "strictly decreasing"
    } else if increasing {
        "strictly increasing"
    } else {
        "not monotone"
    };
    Outcome {
        passed: worst <= ROOT_RESIDUAL_TOL && ordered && decreasing,
        detail: format!(
            "max residual {worst:.2e} (tol {ROOT_RESIDUAL_TOL:.0e}), lower < spiral < circular: {ordered}, \
             ratio {trend} in n ({} at n=2, {} at n=32; required strictly decreasing)",
            num(ratios[0]),
            num(ratios[ratios.len() - 1])
        ),
        artifact: csv,
    }
}

fn random_params(rng: &mut ChaCha8Rng) -> ScenarioParams {
    let r = rng.gen_range(2.0..20.0);
    let r0 = r * rng.gen_range(3.0..20.0);
    let vt = rng.gen_range(0.2..3.0);
    let n = 2 * rng.gen_range(1..=16u32);
    let p = ScenarioParams::new(r0, r, vt, n, 1.0);
    // Small regions with many sweepers put the spiral threshold above the
    // circular one, so draw above both.
    let spiral = spiral_critical_velocity(&p, DEFAULT_REL_TOL).expect("spiral root");
    p.with_vs(circular_critical_velocity(&p).max(spiral) * rng.gen_range(1.02..3.0))
}

fn closed_forms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
    let mut csv = String::from("set,process,n_iter,n_closed,t_in_iter,t_in_closed,t_motion_iter,t_motion_closed\n");
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for set in 0..RANDOM_SETS {
        let p = random_params(&mut rng);
        for kind in SweepKind::ALL {
            let report = match schedule(&p, kind) {
                Ok(r) => r,
                Err(e) => {
                    failures.push(format!("set {set} {kind}: {e}"));
                    continue;
                }
            };
            let Some(cf) = report.closed_form else {
                failures.push(format!("set {set} {kind}: no closed form"));
                continue;
            };
            let err = rel_diff(cf.t_in, report.t_in).max(rel_diff(cf.t_motion, report.t_motion));
            worst = worst.max(err);
            if cf.n_cycles != report.n_cycles || err > CLOSED_FORM_TOL {
                failures.push(format!("set {set} {kind}: N {}/{} err {err:.2e}", cf.n_cycles, report.n_cycles));
            }
            let _ = writeln!(
                csv,
                "{set},{kind},{},{},{},{},{},{}",
                report.n_cycles,
                cf.n_cycles,
                num(report.t_in),
                num(cf.t_in),
                num(report.t_motion),
                num(cf.t_motion)
            );
        }
    }
    Outcome {
        passed: failures.is_empty(),
        detail: format!(
            "{RANDOM_SETS} sets x 2 processes, max rel error {worst:.2e} (tol {CLOSED_FORM_TOL:.0e}), {} mismatches{}",
            failures.len(),
            failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
        ),
        artifact: csv,
    }
}

fn comparative_claim() -> Outcome {
    let n_values = n_grid();
    match compare(&ScenarioParams::reference(), &n_values, &DEFAULT_DELTA_V) {
        Ok(rows) => {
            let losing: Vec<_> = rows.iter().filter(|r| !(r.t_spiral < r.t_circular)).collect();
            let min_speedup = rows.iter().map(|r| r.speedup).fold(f64::INFINITY, f64::min);
            Outcome {
                passed: losing.is_empty() && rows.len() == n_values.len() * DEFAULT_DELTA_V.len(),
                detail: format!(
                    "{} cells, spiral faster in {}, min speedup {}",
                    rows.len(),
                    rows.len() - losing.len(),
                    num(min_speedup)
                ),
                artifact: rows_table(&rows).to_csv(),
            }
        }
        Err(e) => Outcome {
            passed: false,
            detail: e.to_string(),
            artifact: String::new(),
        },
    }
}

fn sim_cases() -> Vec<ScenarioParams> {
    let base = ScenarioParams::reference();
    let four = base.with_n(4);
    vec![base.with_vs(40.0), four.with_vs(circular_critical_velocity(&four) + 5.0)]
}

fn simulation_vs_analytics() -> Outcome {
    let mut csv = String::from("process,n,vs,t_analytic,t_simulated,rel_error,escaped\n");
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for p in sim_cases() {
        let cfg = SimConfig::new(&p, SIM_CELL, SIM_DT);
        for kind in SweepKind::ALL {
            let analytic = schedule(&p, kind).map(|r| r.t_total);
            let sim = run_cleaning(&p, kind, &cfg);
            match (analytic, sim) {
                (Ok(t), Ok(out)) => {
                    let sim_t = out.clean_time.unwrap_or(f64::NAN);
                    let rel = (sim_t - t).abs() / t;
                    let escaped = out.escape_event.is_some();
                    ok &= rel <= SIM_REL_TOL && !escaped;
                    worst = worst.max(rel);
                    let _ = writeln!(
                        csv,
                        "{kind},{},{},{},{},{},{}",
                        p.n,
                        num(p.vs),
                        num(t),
                        num(sim_t),
                        num(rel),
                        u8::from(escaped)
                    );
                }
                (a, s) => {
                    ok = false;
                    let _ = writeln!(csv, "{kind},{},{},error,{:?},{:?}", p.n, num(p.vs), a.err(), s.err());
                }
            }
        }
    }
    Outcome {
        passed: ok,
        detail: format!("4 runs, max rel error {worst:.2e} (tol {SIM_REL_TOL}), no escapes: {ok}"),
        artifact: csv,
    }
}

fn confinement_boundary() -> Outcome {
    let base = ScenarioParams::reference();
    let cfg = SimConfig::new(&base, SIM_CELL, SIM_DT);
    let mut csv = String::from("process,vs_scale,vs,first_cycle_time,escaped,escape_time,min_guard_margin\n");
    let mut ok = true;
    let mut notes = Vec::new();
    for kind in SweepKind::ALL {
        let critical = match kind {
            SweepKind::Circular => circular_critical_velocity(&base),
            SweepKind::Spiral => spiral_critical_velocity(&base, DEFAULT_REL_TOL).expect("spiral root"),
        };
        for scale in [SLOW_SCALE, FAST_SCALE] {
            let p = base.with_vs(scale * critical);
            let first_cycle = match kind {
                SweepKind::Circular => circ_cycle_time(p.r0, &p),
                SweepKind::Spiral => spiral_cycle_time(p.r0, &p).expect("faster than evaders"),
            };
            let out = match run_confinement_check(&base, kind, scale, CONFINEMENT_CYCLES, &cfg) {
                Ok(out) => out,
                Err(e) => {
                    ok = false;
                    notes.push(format!("{kind} x{scale}: {e}"));
                    continue;
                }
            };
            let escape_time = out.escape_event.as_ref().map(|e| e.time);
            let good = if scale < 1.0 {
                escape_time.is_some_and(|t| t <= first_cycle + SIM_DT)
            } else {
                escape_time.is_none()
            };
            ok &= good;
            notes.push(format!(
                "{kind} x{}: {}",
                num(scale),
                escape_time.map_or("no escape".to_string(), |t| format!("escape at {}", num(t)))
            ));
            let _ = writeln!(
                csv,
                "{kind},{},{},{},{},{},{}",
                num(scale),
                num(p.vs),
                num(first_cycle),
                u8::from(escape_time.is_some()),
                num(escape_time.unwrap_or(f64::NAN)),
                num(out.min_guard_margin)
            );
        }
    }
    Outcome {
        passed: ok,
        detail: notes.join(", "),
        artifact: csv,
    }
}

fn circularity() -> Outcome {
    let p = ScenarioParams::reference().with_vs(40.0);
    let cfg = SimConfig::new(&p, SIM_CELL, SIM_DT);
    let limit = CIRCULARITY_CELLS * SIM_CELL;
    match circularity_check(&p, &cfg) {
        Ok(residuals) => {
            let worst = residuals.iter().copied().fold(0.0, f64::max);
            let mut csv = String::from("cycle,residual\n");
            for (i, r) in residuals.iter().enumerate() {
                let _ = writeln!(csv, "{i},{}", num(*r));
            }
            Outcome {
                passed: !residuals.is_empty() && worst <= limit,
                detail: format!("{} cycles, max residual {} (limit {})", residuals.len(), num(worst), num(limit)),
                artifact: csv,
            }
        }
        Err(e) => Outcome {
            passed: false,
            detail: e.to_string(),
            artifact: String::new(),
        },
    }
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn criteria() -> Vec<Criterion> {
    vec![
        ("velocity exactness", Duration::from_secs(1), velocity_exactness),
        ("spiral critical root", Duration::from_secs(1), spiral_root),
        ("closed forms against iteration", Duration::from_secs(10), closed_forms),
        ("spiral faster than circular", Duration::from_secs(5), comparative_claim),
        ("simulation against analytics", Duration::from_secs(300), simulation_vs_analytics),
        ("confinement boundary", Duration::from_secs(120), confinement_boundary),
        ("post-sweep circularity", Duration::from_secs(120), circularity),
    ]
}

fn main() {
    let out_dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    std::fs::create_dir_all(&out_dir).expect("artifact directory");
    let mut all_passed = true;
    let mut artifacts = Vec::new();
    for (i, (name, budget, run)) in criteria().into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let passed = outcome.passed && in_time;
        all_passed &= passed;
        println!(
            "{} criterion {}: {name}: {}; {:.2}s (budget {}s)",
            if passed { "PASS" } else { "FAIL" },
            i + 1,
            outcome.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
        let path = out_dir.join(format!("criterion_{}.csv", i + 1));
        std::fs::write(&path, &outcome.artifact).expect("write artifact");
        artifacts.push((path, outcome.artifact));
    }

    // Determinism: regenerate every artifact and compare the bytes on disk.
    let start = Instant::now();
    let mut differing = Vec::new();
    for ((_, _, run), (path, _)) in criteria().into_iter().zip(&artifacts) {
        let again = run().artifact;
        let on_disk = std::fs::read(path).expect("read artifact");
        if on_disk != again.as_bytes() {
            differing.push(path.file_name().unwrap().to_string_lossy().into_owned());
        }
    }
    let passed = differing.is_empty();
    all_passed &= passed;
    println!(
        "{} criterion 8: determinism: {} of {} artifacts byte-identical on rerun{}; {:.2}s",
        if passed { "PASS" } else { "FAIL" },
        artifacts.len() - differing.len(),
        artifacts.len(),
        if passed { String::new() } else { format!(" (differ: {})", differing.join(", ")) },
        start.elapsed().as_secs_f64()
    );

    if !all_passed {
        std::process::exit(1);
    }
}
