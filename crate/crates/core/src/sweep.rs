//! One-parameter sweeps over the scattering and experiment routines, and
//! byte-stable CSV emission of the resulting tables.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cavity::{cavity_coefficients, CavityCoeffs, CavityParams, RmaxPoint};
use crate::error::{Error, Result};
use crate::experiments::ctc::{deutsch_ctc, D1_DEUTSCH};
use crate::experiments::double_cavity::{double_cavity, ELECTRON_PAIR, REFLECTED, TRANSMITTED};
use crate::experiments::gyni::gyni_gain;
use crate::experiments::interferometer::{interferometer, visibility, D1_D2_D3, D1_ONLY, D3_ONLY};
use crate::optimize::linspace;

/// Swept quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Variable {
    #[serde(rename = "kOverM")]
    KOverM,
    #[serde(rename = "eAOverM")]
    EaOverM,
    #[serde(rename = "mTau")]
    MTau,
    #[serde(rename = "theta")]
    Theta,
    #[serde(rename = "xi")]
    Xi,
    #[serde(rename = "R")]
    Reflectivity,
    #[serde(rename = "alpha")]
    Alpha,
}

impl Variable {
    pub const ALL: [Variable; 7] = [
        Variable::KOverM,
        Variable::EaOverM,
        Variable::MTau,
        Variable::Theta,
        Variable::Xi,
        Variable::Reflectivity,
        Variable::Alpha,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variable::KOverM => "kOverM",
            Variable::EaOverM => "eAOverM",
            Variable::MTau => "mTau",
            Variable::Theta => "theta",
            Variable::Xi => "xi",
            Variable::Reflectivity => "R",
            Variable::Alpha => "alpha",
        }
    }
}

impl FromStr for Variable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variable::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::invalid("variable", format!("unknown sweep variable `{s}`")))
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Routine evaluated at each grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepExperiment {
    Cavity,
    DoubleCavity,
    Interferometer,
    Gyni,
    Deutsch,
}

impl SweepExperiment {
    pub const ALL: [SweepExperiment; 5] = [
        SweepExperiment::Cavity,
        SweepExperiment::DoubleCavity,
        SweepExperiment::Interferometer,
        SweepExperiment::Gyni,
        SweepExperiment::Deutsch,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepExperiment::Cavity => "cavity",
            SweepExperiment::DoubleCavity => "double-cavity",
            SweepExperiment::Interferometer => "interferometer",
            SweepExperiment::Gyni => "gyni",
            SweepExperiment::Deutsch => "deutsch",
        }
    }

    /// Parameters the routine reads, in column order.
    pub fn parameters(self) -> &'static [Variable] {
        match self {
            SweepExperiment::Cavity => &[Variable::KOverM, Variable::EaOverM, Variable::MTau],
            SweepExperiment::DoubleCavity | SweepExperiment::Gyni => &[Variable::Reflectivity],
            SweepExperiment::Interferometer => &[Variable::Reflectivity, Variable::Theta],
            SweepExperiment::Deutsch => &[Variable::Alpha, Variable::Reflectivity, Variable::Xi],
        }
    }

    fn outputs(self) -> &'static [&'static str] {
        match self {
            SweepExperiment::Cavity => &["Rtot", "Ttot", "phaseR", "phaseT", "denomMag", "schwingerFlag"],
            SweepExperiment::DoubleCavity => &[REFLECTED, TRANSMITTED, ELECTRON_PAIR, "vacuumProbability", "sumCheck"],
            SweepExperiment::Interferometer => &[
                D1_ONLY,
                D1_D2_D3,
                D3_ONLY,
                "visibility",
                "vacuumProbability",
                "sumCheck",
            ],
            SweepExperiment::Gyni => &["gain"],
            SweepExperiment::Deutsch => &[D1_DEUTSCH, "vacuumProbability", "suppressedAmplitude"],
        }
    }
}

impl FromStr for SweepExperiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepExperiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::invalid("experiment", format!("`{s}` cannot be swept")))
    }
}

/// Inclusive uniform range with at least two points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Range {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self> {
        let range = Range { start, stop, count };
        range.validate()?;
        Ok(range)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::invalid("range", "bounds must be finite"));
        }
        if self.start >= self.stop {
            return Err(Error::invalid(
                "range",
                format!("start {} must be below stop {}", self.start, self.stop),
            ));
        }
        if self.count < 2 {
            return Err(Error::invalid(
                "range",
                format!("count must be at least 2, got {}", self.count),
            ));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.count)
    }
}

impl FromStr for Range {
    type Err = Error;

    /// Parses `start:stop:count`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid("range", format!("expected start:stop:count, got `{s}`"));
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(bad());
        };
        let start = a.trim().parse().map_err(|_| bad())?;
        let stop = b.trim().parse().map_err(|_| bad())?;
        let count = n.trim().parse().map_err(|_| bad())?;
        Range::new(start, stop, count)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub variable: Variable,
    pub range: Range,
    pub fixed: BTreeMap<Variable, f64>,
    pub experiment: SweepExperiment,
}

impl SweepSpec {
    /// Checks that the swept and fixed parameters cover exactly what the
    /// experiment reads.
    pub fn validate(&self) -> Result<()> {
        self.range.validate()?;
        let needed = self.experiment.parameters();
        if !needed.contains(&self.variable) {
            return Err(Error::invalid(
                "variable",
                format!("{} does not depend on {}", self.experiment.name(), self.variable),
            ));
        }
        if self.fixed.contains_key(&self.variable) {
            return Err(Error::invalid(
                "fixed",
                format!("{} is both swept and fixed", self.variable),
            ));
        }
        for v in self.fixed.keys() {
            if !needed.contains(v) {
                return Err(Error::invalid(
                    "fixed",
                    format!("{} does not depend on {v}", self.experiment.name()),
                ));
            }
        }
        for v in needed {
            if *v != self.variable && !self.fixed.contains_key(v) && default_value(self.experiment, *v).is_none() {
                return Err(Error::invalid("fixed", format!("missing value for {v}")));
            }
        }
        for (v, x) in &self.fixed {
            if !x.is_finite() {
                return Err(Error::invalid("fixed", format!("{v} must be finite, got {x}")));
            }
        }
        Ok(())
    }

    fn value(&self, v: Variable, x: f64) -> f64 {
        if v == self.variable {
            x
        } else {
            self.fixed
                .get(&v)
                .copied()
                .or_else(|| default_value(self.experiment, v))
                .expect("validated")
        }
    }
}

fn default_value(experiment: SweepExperiment, v: Variable) -> Option<f64> {
    match (experiment, v) {
        (SweepExperiment::Deutsch, Variable::Reflectivity) => Some(1.0),
        (SweepExperiment::Deutsch, Variable::Xi) => Some(0.0),
        (SweepExperiment::Deutsch, Variable::Alpha) => Some(1.0),
        _ => None,
    }
}

/// Table entry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Float(f64),
}

impl fmt::Display for Cell {
    /// Floats use 17 significant digits in scientific notation so that
    /// values round-trip and the output is independent of locale.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(i) => write!(f, "{i}"),
            Cell::Float(x) => write!(f, "{x:.16e}"),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Int(b as i64)
    }
}

/// Rows in a fixed column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<Cell>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Header line then one line per row, comma separated, LF terminated.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::to_string).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }
}

fn evaluate(spec: &SweepSpec, x: f64) -> Result<Vec<Cell>> {
    let params = spec.experiment.parameters();
    let val = |v| spec.value(v, x);
    let mut row: Vec<Cell> = params.iter().map(|v| Cell::Float(val(*v))).collect();
    match spec.experiment {
        SweepExperiment::Cavity => {
            let cp = CavityParams::new(val(Variable::EaOverM), val(Variable::MTau), val(Variable::KOverM))?;
            let c = cavity_coefficients(&cp)?;
            row.extend(Vec::<Cell>::from([
                c.reflectivity().into(),
                c.transmissivity().into(),
                c.phase_r().into(),
                c.phase_t().into(),
                c.denom_magnitude.into(),
                cp.beyond_schwinger_limit().into(),
            ]));
        }
        SweepExperiment::DoubleCavity => {
            let rep = double_cavity(val(Variable::Reflectivity))?;
            row.extend(Vec::<Cell>::from([
                rep.get(REFLECTED).into(),
                rep.get(TRANSMITTED).into(),
                rep.get(ELECTRON_PAIR).into(),
                rep.vacuum_probability.into(),
                rep.sum_check.into(),
            ]));
        }
        SweepExperiment::Interferometer => {
            let r = val(Variable::Reflectivity);
            let rep = interferometer(&CavityCoeffs::from_reflectivity(r)?, val(Variable::Theta))?;
            row.extend(Vec::<Cell>::from([
                rep.get(D1_ONLY).into(),
                rep.get(D1_D2_D3).into(),
                rep.get(D3_ONLY).into(),
                visibility(r).into(),
                rep.vacuum_probability.into(),
                rep.sum_check.into(),
            ]));
        }
        SweepExperiment::Gyni => row.push(gyni_gain(val(Variable::Reflectivity))?.into()),
        SweepExperiment::Deutsch => {
            let rep = deutsch_ctc(
                val(Variable::Alpha),
                val(Variable::Reflectivity),
                val(Variable::Xi),
                false,
            )?;
            row.extend(Vec::<Cell>::from([
                rep.detections.get(D1_DEUTSCH).into(),
                rep.detections.vacuum_probability.into(),
                rep.suppressed_amplitude.into(),
            ]));
        }
    }
    Ok(row)
}

/// Evaluate the sweep in parallel. Rows come back in grid order, so the
/// result does not depend on the number of workers.
pub fn run_sweep(spec: &SweepSpec) -> Result<Table> {
    spec.validate()?;
    let mut columns: Vec<&str> = spec.experiment.parameters().iter().map(|v| v.name()).collect();
    columns.extend(spec.experiment.outputs());
    let mut table = Table::new(&columns);
    table.rows = spec
        .range
        .points()
        .into_par_iter()
        .map(|x| evaluate(spec, x))
        .collect::<Result<Vec<_>>>()?;
    Ok(table)
}

/// Columns of a resonance scan.
pub const RMAX_COLUMNS: [&str; 7] = ["mTau", "eAOverM", "kStar", "Rmax", "eta", "denomMag", "schwingerFlag"];

pub fn rmax_table(m_tau: f64, rows: &[RmaxPoint]) -> Table {
    let mut table = Table::new(&RMAX_COLUMNS);
    table.rows = rows
        .iter()
        .map(|p| {
            vec![
                m_tau.into(),
                p.ea_over_m.into(),
                p.k_star.into(),
                p.r_max.into(),
                p.eta.into(),
                p.denom_magnitude.into(),
                p.schwinger_flag.into(),
            ]
        })
        .collect();
    table
}
