use std::path::PathBuf;

use thiserror::Error;

/// Everything that can go wrong when validating parameters, building a
/// schedule, running the simulator or driving experiments.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("number of sweepers must be even and at least 2, got {0}")]
    OddSwarmSize(u32),
    #[error("{name} must be positive, got {value}")]
    NonPositiveDimension { name: &'static str, value: f64 },
    #[error("region radius R0 = {r0} must exceed the sensor half-length r = {r}")]
    RegionTooSmall { r0: f64, r: f64 },
    #[error("evader speed VT must be non-negative, got {0}")]
    NegativeEvaderSpeed(f64),
    #[error("sweeper speed {vs} is not above the critical velocity {critical} of the {process} process")]
    SubcriticalSpeed {
        process: &'static str,
        vs: f64,
        critical: f64,
    },
    #[error("sweeper speed {vs} does not exceed the evader speed {vt}")]
    SlowerThanEvader { vs: f64, vt: f64 },
    #[error("critical velocity residual does not change sign on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },
    #[error("end-game radius {radius} outside (0, 2r = {limit}]")]
    InvalidEndgameRadius { radius: f64, limit: f64 },
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("simulation reached max_time {time} with {occupied} occupied cells")]
    Timeout { time: f64, occupied: usize },
    #[error("parse error at `{key}`: {message}")]
    Parse { key: String, message: String },
    #[error("i/o error on {path}: {message}")]
    Io { path: PathBuf, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
