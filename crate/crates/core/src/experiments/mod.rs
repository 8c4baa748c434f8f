//! Figure data, the circular-against-spiral study, config-driven runs and
//! the invariant suite.

pub mod check;
pub mod compare;
pub mod config;
pub mod csv;
pub mod figures;
pub mod run;

pub use compare::{compare, ComparisonRow};
pub use config::{load_config, parse_config, Config, Job};
pub use figures::{figure_data, ExperimentSpec, FigureId};
pub use run::{run_config, RunSummary};
