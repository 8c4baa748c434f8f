//! Velocity thresholds: the process-independent lower bound, the circular
//! critical velocity, the naive spiral no-escape velocity and the spiral
//! critical velocity obtained by root finding.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::scenario::ScenarioParams;

/// Default relative tolerance of [`spiral_critical_velocity`].
pub const DEFAULT_REL_TOL: f64 = 1e-10;

/// Maximum number of times the upper end of the bisection bracket is doubled.
const MAX_BRACKET_DOUBLINGS: u32 = 60;

/// All thresholds for one parameter set, with ratios to the lower bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityReport {
    pub v_lower_bound: f64,
    pub v_circular: f64,
    pub v_spiral_naive: f64,
    /// `None` when the spiral root does not exist (static evaders).
    pub v_spiral: Option<f64>,
    pub ratio_circular: f64,
    pub ratio_spiral_naive: f64,
    pub ratio_spiral: Option<f64>,
}

/// No sweep process with `n` sweepers confines the region below `πR0VT/(nr)`.
pub fn lower_bound_velocity(params: &ScenarioParams) -> f64 {
    PI * params.r0 * params.vt / (params.nf() * params.r)
}

/// `2πR0VT/(nr)`, exactly twice the lower bound.
pub fn circular_critical_velocity(params: &ScenarioParams) -> f64 {
    2.0 * lower_bound_velocity(params)
}

/// Spiral speed at which the outer tip completes a sector before the
/// wavefront passes the inner tip, ignoring inward-advance time.
pub fn spiral_no_escape_velocity(params: &ScenarioParams) -> f64 {
    let log = ((params.r0 + params.r) / (params.r0 - params.r)).ln();
    let a = 2.0 * PI / (params.nf() * log);
    params.vt * (a * a + 1.0).sqrt()
}

/// Exponent `k = 2πVT / (n √(Vs² − VT²))` of the spiral trajectory.
pub fn spiral_exponent(params: &ScenarioParams, vs: f64) -> f64 {
    2.0 * PI * params.vt / (params.nf() * (vs * vs - params.vt * params.vt).sqrt())
}

/// Both sides of the spiral critical-velocity equation at speed `vs`:
/// `(R0 − r)(e^k − 1)` and `2r·vs/(vs + VT)`.
pub fn spiral_critical_sides(params: &ScenarioParams, vs: f64) -> (f64, f64) {
    let lhs = (params.r0 - params.r) * spiral_exponent(params, vs).exp_m1();
    let rhs = 2.0 * params.r * vs / (vs + params.vt);
    (lhs, rhs)
}

/// Smallest spiral sweeper speed that confines the region, by bisection.
///
/// The left side of the defining equation decreases and the right side
/// increases on `(VT, ∞)`, so the root is unique whenever it exists.
pub fn spiral_critical_velocity(params: &ScenarioParams, rel_tol: f64) -> Result<f64> {
    let residual = |v: f64| {
        let (lhs, rhs) = spiral_critical_sides(params, v);
        lhs - rhs
    };
    let vt = params.vt;
    let mut lo = vt * (1.0 + 1e-9);
    let mut hi = (10.0 * circular_critical_velocity(params)).max(2.0 * vt);
    if !(vt > 0.0) || !(params.r0 > params.r) {
        return Err(Error::NoBracket { lo, hi });
    }
    if !(residual(lo) > 0.0) {
        return Err(Error::NoBracket { lo, hi });
    }
    let mut doublings = 0;
    while residual(hi) >= 0.0 {
        if doublings == MAX_BRACKET_DOUBLINGS {
            return Err(Error::NoBracket { lo, hi });
        }
        hi *= 2.0;
        doublings += 1;
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let (lhs, rhs) = spiral_critical_sides(params, mid);
        let f = lhs - rhs;
        if f.abs() <= 0.5 * rel_tol * rhs && hi - lo <= rel_tol * mid {
            return Ok(mid);
        }
        if f > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

pub fn velocity_report(params: &ScenarioParams) -> VelocityReport {
    let v_lower_bound = lower_bound_velocity(params);
    let v_circular = circular_critical_velocity(params);
    let v_spiral_naive = spiral_no_escape_velocity(params);
    let v_spiral = spiral_critical_velocity(params, DEFAULT_REL_TOL).ok();
    VelocityReport {
        v_lower_bound,
        v_circular,
        v_spiral_naive,
        v_spiral,
        ratio_circular: v_circular / v_lower_bound,
        ratio_spiral_naive: v_spiral_naive / v_lower_bound,
        ratio_spiral: v_spiral.map(|v| v / v_lower_bound),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn reference() -> ScenarioParams {
        ScenarioParams::reference()
    }

    #[test]
    fn lower_bound_reference_value() {
        assert!((lower_bound_velocity(&reference()) - 5.0 * PI).abs() < 1e-12);
        let p = reference().with_n(4);
        assert!((lower_bound_velocity(&p) - 2.5 * PI).abs() < 1e-12);
    }

    #[test]
    fn static_evaders_need_no_speed() {
        let p = ScenarioParams { vt: 0.0, ..reference() };
        assert_eq!(lower_bound_velocity(&p), 0.0);
        assert_eq!(circular_critical_velocity(&p), 0.0);
        assert_eq!(spiral_no_escape_velocity(&p), 0.0);
        assert!(matches!(
            spiral_critical_velocity(&p, DEFAULT_REL_TOL),
            Err(Error::NoBracket { .. })
        ));
    }

    #[test]
    fn circular_critical_reference_value() {
        assert!((circular_critical_velocity(&reference()) - 10.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn naive_spiral_velocity_sits_below_lower_bound_at_n2() {
        let v = spiral_no_escape_velocity(&reference());
        assert!((v - 15.687_368_250_213_419).abs() < 1e-9, "{v}");
        assert!(v < lower_bound_velocity(&reference()));
    }

    #[test]
    fn spiral_critical_reference_value() {
        let v = spiral_critical_velocity(&reference(), DEFAULT_REL_TOL).unwrap();
        assert!((v - 16.543_007_751_151_745).abs() < 1e-8, "{v}");
        let (lhs, rhs) = spiral_critical_sides(&reference(), v);
        assert!((lhs - rhs).abs() <= 1e-10 * rhs);
        assert!(v > lower_bound_velocity(&reference()));
    }

    #[test]
    fn spiral_critical_approaches_zero_with_evader_speed() {
        let mut last = f64::INFINITY;
        for vt in [1.0, 0.1, 0.01, 0.001] {
            let p = ScenarioParams { vt, ..reference() };
            let v = spiral_critical_velocity(&p, DEFAULT_REL_TOL).unwrap();
            assert!(v < last);
            last = v;
        }
        assert!(last < 0.02);
    }

    #[test]
    fn ordering_and_ratio_on_reference_grid() {
        let mut previous_ratio = 0.0;
        for n in (2..=32).step_by(2) {
            let report = velocity_report(&reference().with_n(n));
            let v = report.v_spiral.unwrap();
            assert!(report.v_lower_bound < v && v < report.v_circular, "n = {n}");
            assert_eq!(report.ratio_circular, 2.0);
            let ratio = report.ratio_spiral.unwrap();
            assert!(ratio > 1.0);
            // The spiral threshold can never drop below VT while the lower
            // bound shrinks like 1/n, so the ratio grows with n.
            assert!(ratio > previous_ratio, "n = {n}");
            previous_ratio = ratio;
        }
    }

    proptest! {
        #[test]
        fn circular_is_exactly_twice_lower_bound(
            r0 in 11.0f64..500.0, r in 0.5f64..10.0, vt in 0.01f64..5.0, half_n in 1u32..20,
        ) {
            let p = ScenarioParams::new(r0, r, vt, 2 * half_n, 1.0);
            let lb = lower_bound_velocity(&p);
            prop_assert_eq!(circular_critical_velocity(&p) / lb, 2.0);
        }

        #[test]
        fn spiral_root_has_small_residual(
            r0 in 11.0f64..500.0, r in 0.5f64..10.0, vt in 0.01f64..5.0, half_n in 1u32..20,
        ) {
            let p = ScenarioParams::new(r0, r, vt, 2 * half_n, 1.0);
            let v = spiral_critical_velocity(&p, DEFAULT_REL_TOL).unwrap();
            let (lhs, rhs) = spiral_critical_sides(&p, v);
            prop_assert!((lhs - rhs).abs() <= DEFAULT_REL_TOL * rhs);
            prop_assert!(v > vt);
            prop_assert!(v > lower_bound_velocity(&p));
        }
    }
}
