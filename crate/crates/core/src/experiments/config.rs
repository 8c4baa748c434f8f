//! Experiment configuration files: `[section]` headers followed by
//! `key = value` lines. `#` starts a comment. Output paths are relative to
//! the config file's directory.
//!
//! ```text
//! [scenario]
//! R0 = 100
//! r = 10
//! VT = 1
//!
//! [figure]
//! id = fig4
//! n_values = 2, 4, 8
//! delta_v = 1, 5
//! out = fig4.csv
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::scenario::{ScenarioParams, SweepKind};

use super::figures::{default_n_values, ExperimentSpec, FigureId, DEFAULT_DELTA_V};

/// Which processes a simulation job covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Processes {
    One(SweepKind),
    Both,
}

impl Processes {
    pub fn kinds(self) -> Vec<SweepKind> {
        match self {
            Processes::One(k) => vec![k],
            Processes::Both => SweepKind::ALL.to_vec(),
        }
    }
}

/// Sweeper speed as an absolute value or an offset above the process's
/// critical velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpeedChoice {
    Absolute(f64),
    AboveCritical(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Job {
    Figure(ExperimentSpec),
    Compare {
        n_values: Vec<u32>,
        delta_v_values: Vec<f64>,
        out: PathBuf,
    },
    Confinement {
        processes: Processes,
        n: u32,
        vs_scales: Vec<f64>,
        cycles: usize,
        cell_size: f64,
        dt: f64,
        out: PathBuf,
    },
    Cleaning {
        processes: Processes,
        n: u32,
        speed: SpeedChoice,
        cell_size: f64,
        dt: f64,
        out: PathBuf,
        snapshots: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    /// Base constants; `n` and `Vs` are set per job.
    pub scenario: ScenarioParams,
    pub jobs: Vec<Job>,
}

type Section = (String, usize, BTreeMap<String, (usize, String)>);

fn parse_error(key: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        key: key.into(),
        message: message.into(),
    }
}

fn split_sections(text: &str) -> Result<Vec<Section>> {
    let mut sections: Vec<Section> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| parse_error(format!("line {lineno}"), "unterminated section header"))?;
            sections.push((name.trim().to_ascii_lowercase(), lineno, BTreeMap::new()));
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| parse_error(format!("line {lineno}"), format!("expected `key = value`, got `{line}`")))?;
        let (section, _, entries) = sections
            .last_mut()
            .ok_or_else(|| parse_error(key.trim(), format!("line {lineno}: key outside of any section")))?;
        let key = key.trim().to_string();
        if entries.contains_key(&key) {
            return Err(parse_error(format!("{section}.{key}"), format!("line {lineno}: duplicate key")));
        }
        entries.insert(key, (lineno, value.trim().to_string()));
    }
    Ok(sections)
}

struct Entries<'a> {
    section: &'a str,
    map: BTreeMap<String, (usize, String)>,
}

impl Entries<'_> {
    fn qualified(&self, key: &str) -> String {
        format!("{}.{key}", self.section)
    }

    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.map.remove(key)
    }

    fn number(&mut self, key: &str) -> Result<Option<f64>> {
        match self.take(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse::<f64>()
                .map(Some)
                .map_err(|_| parse_error(self.qualified(key), format!("line {line}: `{v}` is not a number"))),
        }
    }

    fn count(&mut self, key: &str) -> Result<Option<u32>> {
        match self.take(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse::<u32>()
                .map(Some)
                .map_err(|_| parse_error(self.qualified(key), format!("line {line}: `{v}` is not a count"))),
        }
    }

    fn swarm_size(&mut self, key: &str) -> Result<Option<u32>> {
        let q = self.qualified(key);
        match self.count(key)? {
            Some(n) if n < 2 || !n.is_multiple_of(2) => Err(parse_error(q, format!("swarm size must be even and at least 2, got {n}"))),
            other => Ok(other),
        }
    }

    fn numbers(&mut self, key: &str) -> Result<Option<Vec<f64>>> {
        let q = self.qualified(key);
        match self.take(key) {
            None => Ok(None),
            Some((line, v)) => v
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| parse_error(q.clone(), format!("line {line}: `{}` is not a number", s.trim())))
                })
                .collect::<Result<Vec<_>>>()
                .map(Some),
        }
    }

    fn swarm_sizes(&mut self, key: &str) -> Result<Option<Vec<u32>>> {
        let q = self.qualified(key);
        let Some((line, v)) = self.take(key) else {
            return Ok(None);
        };
        let mut out = Vec::new();
        for s in v.split(',') {
            let n: u32 = s
                .trim()
                .parse()
                .map_err(|_| parse_error(q.clone(), format!("line {line}: `{}` is not a count", s.trim())))?;
            if n < 2 || !n.is_multiple_of(2) {
                return Err(parse_error(q, format!("line {line}: swarm size must be even and at least 2, got {n}")));
            }
            out.push(n);
        }
        if out.windows(2).any(|w| w[0] >= w[1]) {
            return Err(parse_error(q, format!("line {line}: swarm sizes must be strictly ascending")));
        }
        Ok(Some(out))
    }

    fn positive_list(&mut self, key: &str) -> Result<Option<Vec<f64>>> {
        let q = self.qualified(key);
        let values = self.numbers(key)?;
        if let Some(bad) = values.iter().flatten().find(|v| !(**v > 0.0)) {
            return Err(parse_error(q, format!("values must be positive, got {bad}")));
        }
        Ok(values)
    }

    fn processes(&mut self, key: &str) -> Result<Processes> {
        let q = self.qualified(key);
        match self.take(key) {
            None => Ok(Processes::Both),
            Some((_, v)) if v.eq_ignore_ascii_case("both") => Ok(Processes::Both),
            Some((line, v)) => v
                .parse::<SweepKind>()
                .map(Processes::One)
                .map_err(|e| parse_error(q, format!("line {line}: {e}"))),
        }
    }

    fn path(&mut self, key: &str, base: &Path) -> Option<PathBuf> {
        self.take(key).map(|(_, v)| base.join(v))
    }

    fn required_path(&mut self, key: &str, base: &Path) -> Result<PathBuf> {
        let q = self.qualified(key);
        self.path(key, base).ok_or_else(|| parse_error(q, "missing output path"))
    }

    fn finish(self) -> Result<()> {
        match self.map.into_iter().next() {
            None => Ok(()),
            Some((key, (line, _))) => Err(parse_error(format!("{}.{key}", self.section), format!("line {line}: unknown key"))),
        }
    }
}

/// Parses config text; relative paths resolve against `base_dir`.
pub fn parse_config(text: &str, base_dir: &Path) -> Result<Config> {
    let mut scenario = ScenarioParams::reference();
    let mut jobs = Vec::new();
    for (section, line, map) in split_sections(text)? {
        let mut e = Entries { section: &section, map };
        match section.as_str() {
            "scenario" => {
                if let Some(v) = e.number("R0")? {
                    scenario.r0 = v;
                }
                if let Some(v) = e.number("r")? {
                    scenario.r = v;
                }
                if let Some(v) = e.number("VT")? {
                    scenario.vt = v;
                }
            }
            "figure" => {
                let (id_line, id) = e.take("id").ok_or_else(|| parse_error("figure.id", format!("line {line}: missing figure id")))?;
                let figure = id
                    .parse::<FigureId>()
                    .map_err(|m| parse_error("figure.id", format!("line {id_line}: {m}")))?;
                jobs.push(Job::Figure(ExperimentSpec {
                    figure,
                    params: scenario,
                    n_values: e.swarm_sizes("n_values")?.unwrap_or_else(default_n_values),
                    delta_v_values: e.positive_list("delta_v")?.unwrap_or_else(|| DEFAULT_DELTA_V.to_vec()),
                    output_path: Some(e.required_path("out", base_dir)?),
                }));
            }
            "compare" => jobs.push(Job::Compare {
                n_values: e.swarm_sizes("n_values")?.unwrap_or_else(default_n_values),
                delta_v_values: e.positive_list("delta_v")?.unwrap_or_else(|| DEFAULT_DELTA_V.to_vec()),
                out: e.required_path("out", base_dir)?,
            }),
            "confinement" => jobs.push(Job::Confinement {
                processes: e.processes("process")?,
                n: e.swarm_size("n")?.unwrap_or(2),
                vs_scales: e.positive_list("vs_scale")?.unwrap_or_else(|| vec![0.9, 1.05]),
                cycles: e.count("cycles")?.unwrap_or(3) as usize,
                cell_size: e.number("cell_size")?.unwrap_or(0.25),
                dt: e.number("dt")?.unwrap_or(0.01),
                out: e.required_path("out", base_dir)?,
            }),
            "cleaning" => {
                let vs = e.number("vs")?;
                let dv = e.number("dv")?;
                let speed = match (vs, dv) {
                    (Some(_), Some(_)) => return Err(parse_error("cleaning.vs", "give either vs or dv, not both")),
                    (Some(v), None) => SpeedChoice::Absolute(v),
                    (None, Some(d)) => SpeedChoice::AboveCritical(d),
                    (None, None) => return Err(parse_error("cleaning.vs", format!("line {line}: missing vs or dv"))),
                };
                jobs.push(Job::Cleaning {
                    processes: e.processes("process")?,
                    n: e.swarm_size("n")?.unwrap_or(2),
                    speed,
                    cell_size: e.number("cell_size")?.unwrap_or(0.25),
                    dt: e.number("dt")?.unwrap_or(0.01),
                    out: e.required_path("out", base_dir)?,
                    snapshots: e.path("snapshots", base_dir),
                });
            }
            other => return Err(parse_error(other, format!("line {line}: unknown section"))),
        }
        e.finish()?;
    }
    Ok(Config { scenario, jobs })
}

/// Reads and parses a config file.
pub fn load_config(path: &Path) -> Result<Config> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    parse_config(&text, base)
}
