//! Problem constants, parameter validation and initial sweeper placement.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Constants of one sweep problem.
///
/// `r0` is the initial evader-region radius, `r` the sensor half-length
/// (the sensor is a segment of length `2r`), `vt` the maximal evader
/// speed, `n` the number of sweepers and `vs` the sweeper speed measured
/// at the sensor center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioParams {
    pub r0: f64,
    pub r: f64,
    pub vt: f64,
    pub n: u32,
    pub vs: f64,
}

impl ScenarioParams {
    pub fn new(r0: f64, r: f64, vt: f64, n: u32, vs: f64) -> Self {
        Self { r0, r, vt, n, vs }
    }

    /// `R0 = 100, r = 10, VT = 1` with two sweepers at `Vs = 40`.
    pub fn reference() -> Self {
        Self::new(100.0, 10.0, 1.0, 2, 40.0)
    }

    pub fn with_vs(self, vs: f64) -> Self {
        Self { vs, ..self }
    }

    pub fn with_n(self, n: u32) -> Self {
        Self { n, ..self }
    }

    /// `n` as a float, for use in formulas.
    pub fn nf(&self) -> f64 {
        f64::from(self.n)
    }

    /// Angular width of one sweeper's sector.
    pub fn sector_width(&self) -> f64 {
        TAU / self.nf()
    }
}

/// Which sweep process is being run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepKind {
    Circular,
    Spiral,
}

impl SweepKind {
    pub const ALL: [SweepKind; 2] = [SweepKind::Circular, SweepKind::Spiral];

    pub fn name(self) -> &'static str {
        match self {
            SweepKind::Circular => "circular",
            SweepKind::Spiral => "spiral",
        }
    }
}

impl fmt::Display for SweepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "circular" => Ok(SweepKind::Circular),
            "spiral" => Ok(SweepKind::Spiral),
            other => Err(format!("unknown process `{other}` (expected circular or spiral)")),
        }
    }
}

/// Angular sense of travel around the region center.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Turn {
    CounterClockwise,
    Clockwise,
}

impl Turn {
    pub fn sign(self) -> f64 {
        match self {
            Turn::CounterClockwise => 1.0,
            Turn::Clockwise => -1.0,
        }
    }
}

/// Placement of one sweeper. Angles are measured counter-clockwise from
/// the +y axis, so angle 0 is the point `(0, R0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweeperPose {
    pub sector_index: u32,
    pub angle: f64,
    pub center_radius: f64,
    pub turn: Turn,
    /// Unit vector of the initial velocity.
    pub heading: [f64; 2],
    /// Radial interval `[inner, outer]` covered by the sensor.
    pub sensor_span: (f64, f64),
}

impl SweeperPose {
    pub fn center(&self) -> [f64; 2] {
        polar(self.center_radius, self.angle)
    }
}

/// Cartesian point at distance `radius` and angle `angle` (CCW from +y).
pub fn polar(radius: f64, angle: f64) -> [f64; 2] {
    [-radius * angle.sin(), radius * angle.cos()]
}

/// Checks every parameter invariant and returns the parameters unchanged.
pub fn validate_params(raw: ScenarioParams) -> Result<ScenarioParams> {
    validate_dimensions(raw)?;
    if raw.r0 <= raw.r {
        return Err(Error::RegionTooSmall { r0: raw.r0, r: raw.r });
    }
    Ok(raw)
}

/// Like [`validate_params`] but accepts regions no larger than the sensor,
/// which the analytic schedules handle as pure end-games.
pub fn validate_dimensions(raw: ScenarioParams) -> Result<ScenarioParams> {
    if raw.n < 2 || !raw.n.is_multiple_of(2) {
        return Err(Error::OddSwarmSize(raw.n));
    }
    for (name, value) in [("R0", raw.r0), ("r", raw.r), ("Vs", raw.vs)] {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::NonPositiveDimension { name, value });
        }
    }
    if !(raw.vt >= 0.0) || !raw.vt.is_finite() {
        return Err(Error::NegativeEvaderSpeed(raw.vt));
    }
    Ok(raw)
}

/// Initial poses: pair `k` sits back to back at angle `2πk/(n/2)`, one
/// member turning counter-clockwise into sector `2k`, the other clockwise
/// into sector `2k - 1 (mod n)`.
pub fn initial_poses(params: &ScenarioParams, kind: SweepKind) -> Vec<SweeperPose> {
    let pairs = params.n / 2;
    let center_radius = match kind {
        SweepKind::Circular => params.r0,
        SweepKind::Spiral => params.r0 - params.r,
    };
    let sin_phi = match kind {
        SweepKind::Circular => 0.0,
        SweepKind::Spiral if params.vs > 0.0 => (params.vt / params.vs).min(1.0),
        SweepKind::Spiral => 0.0,
    };
    let cos_phi = (1.0 - sin_phi * sin_phi).sqrt();
    let mut poses = Vec::with_capacity(params.n as usize);
    for k in 0..pairs {
        let angle = 2.0 * PI * f64::from(k) / f64::from(pairs);
        let outward = polar(1.0, angle);
        let ccw_tangent = [-angle.cos(), -angle.sin()];
        for turn in [Turn::CounterClockwise, Turn::Clockwise] {
            let s = turn.sign();
            let heading = [
                cos_phi * s * ccw_tangent[0] + sin_phi * outward[0],
                cos_phi * s * ccw_tangent[1] + sin_phi * outward[1],
            ];
            let sector_index = match turn {
                Turn::CounterClockwise => 2 * k,
                Turn::Clockwise => (2 * k + params.n - 1) % params.n,
            };
            poses.push(SweeperPose {
                sector_index,
                angle,
                center_radius,
                turn,
                heading,
                sensor_span: (center_radius - params.r, center_radius + params.r),
            });
        }
    }
    poses
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_params_are_accepted() {
        let p = ScenarioParams::reference();
        assert_eq!(validate_params(p), Ok(p));
    }

    #[test]
    fn odd_swarm_is_rejected() {
        let p = ScenarioParams::reference().with_n(3);
        assert_eq!(validate_params(p), Err(Error::OddSwarmSize(3)));
    }

    #[test]
    fn small_region_is_rejected() {
        let p = ScenarioParams::new(5.0, 10.0, 1.0, 2, 40.0);
        assert!(matches!(validate_params(p), Err(Error::RegionTooSmall { .. })));
    }

    #[test]
    fn non_positive_dimensions_are_rejected() {
        let p = ScenarioParams::new(100.0, 0.0, 1.0, 2, 40.0);
        assert!(matches!(
            validate_params(p),
            Err(Error::NonPositiveDimension { name: "r", .. })
        ));
        let p = ScenarioParams::reference().with_vs(-1.0);
        assert!(matches!(
            validate_params(p),
            Err(Error::NonPositiveDimension { name: "Vs", .. })
        ));
    }

    #[test]
    fn two_circular_sweepers_start_back_to_back_at_p() {
        let poses = initial_poses(&ScenarioParams::reference(), SweepKind::Circular);
        assert_eq!(poses.len(), 2);
        for pose in &poses {
            let [x, y] = pose.center();
            assert!(x.abs() < 1e-12 && (y - 100.0).abs() < 1e-12);
            assert_eq!(pose.sensor_span, (90.0, 110.0));
        }
        assert_eq!(poses[0].heading, [-1.0, -0.0]);
        assert!((poses[0].heading[0] + poses[1].heading[0]).abs() < 1e-15);
    }

    #[test]
    fn spiral_sensor_starts_fully_inside() {
        let poses = initial_poses(&ScenarioParams::reference(), SweepKind::Spiral);
        for pose in &poses {
            assert_eq!(pose.sensor_span, (80.0, 100.0));
            // Outward heading component equals sin(phi) = VT/Vs.
            let out = polar(1.0, pose.angle);
            let radial = pose.heading[0] * out[0] + pose.heading[1] * out[1];
            assert!((radial - 1.0 / 40.0).abs() < 1e-12);
        }
    }

    #[test]
    fn four_sweepers_partition_the_circle() {
        let p = ScenarioParams::reference().with_n(4);
        let poses = initial_poses(&p, SweepKind::Circular);
        assert_eq!(poses.len(), 4);
        let mut sectors: Vec<u32> = poses.iter().map(|q| q.sector_index).collect();
        sectors.sort_unstable();
        assert_eq!(sectors, vec![0, 1, 2, 3]);
        assert!((p.sector_width() - PI / 2.0).abs() < 1e-15);
        let turns: Vec<Turn> = poses.iter().map(|q| q.turn).collect();
        assert_eq!(
            turns,
            vec![
                Turn::CounterClockwise,
                Turn::Clockwise,
                Turn::CounterClockwise,
                Turn::Clockwise
            ]
        );
        assert!((poses[2].angle - PI).abs() < 1e-15);
    }

    #[test]
    fn kind_round_trips_through_strings() {
        for kind in SweepKind::ALL {
            assert_eq!(kind.to_string().parse::<SweepKind>(), Ok(kind));
        }
        assert!("square".parse::<SweepKind>().is_err());
    }
}
