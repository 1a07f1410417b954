//! Typed experiment configuration, produced only by [`super::validate`].

use std::fmt;
use std::path::PathBuf;

use serde_json::Value;

use crate::greens::Recursion;
use crate::lattice::Supermode;
use crate::params::{PhysicalParams, TightBindingParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Bands,
    Spectrum,
    Greens,
    Transmission,
    Circulator,
    Sweep,
}

impl Mode {
    pub const ALL: [Mode; 6] = [
        Mode::Bands,
        Mode::Spectrum,
        Mode::Greens,
        Mode::Transmission,
        Mode::Circulator,
        Mode::Sweep,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Bands => "bands",
            Mode::Spectrum => "spectrum",
            Mode::Greens => "greens",
            Mode::Transmission => "transmission",
            Mode::Circulator => "circulator",
            Mode::Sweep => "sweep",
        }
    }

    pub fn parse(s: &str) -> Option<Mode> {
        Mode::ALL.into_iter().find(|m| m.as_str() == s)
    }

    /// Modes that need waveguide couplers and an FSR.
    pub fn needs_device(self) -> bool {
        matches!(self, Mode::Transmission | Mode::Circulator)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Units of every frequency and rate in the document.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Units {
    /// Ordinary frequencies in Hz; converted with a factor 2π.
    Hz,
    /// Normalized by Ω, so Ω = 1.
    Dimensionless,
}

impl Units {
    pub fn as_str(self) -> &'static str {
        match self {
            Units::Hz => "hz",
            Units::Dimensionless => "dimensionless",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParamSet {
    Physical(PhysicalParams),
    TightBinding(TightBindingParams),
}

impl ParamSet {
    pub fn tight_binding(&self) -> crate::Result<TightBindingParams> {
        match self {
            ParamSet::Physical(p) => p.derive_tight_binding(),
            ParamSet::TightBinding(t) => Ok(*t),
        }
    }
}

/// Detuning grids are measured from Ω.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Grid {
    Omega { min: f64, max: f64, points: usize },
    K { points: usize },
}

#[derive(Debug, Clone)]
pub struct Sweep {
    pub parameter: String,
    pub values: Vec<f64>,
    pub mode: Mode,
    /// One validated configuration per value, in order.
    pub points: Vec<ExperimentConfig>,
}

#[derive(Debug, Clone)]
pub struct Output {
    pub directory: PathBuf,
    pub formats: Vec<Format>,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub supermode: Supermode,
    pub recursion: Recursion,
    pub threshold: f64,
    pub units: Units,
    /// Normalized by Ω.
    pub params: ParamSet,
    /// Normalized by Ω.
    pub grid: Option<Grid>,
    pub sweep: Option<Sweep>,
    pub output: Output,
    /// Ω in rad/s for `hz` documents, 1 otherwise.
    pub omega0: f64,
    /// Validated document without the `output` section; hashed for file names.
    pub document: Value,
}

impl ExperimentConfig {
    /// Internal (Ω = 1) frequency to the document's output unit.
    pub fn to_output(&self, x: f64) -> f64 {
        match self.units {
            Units::Hz => x * self.omega0 / (2.0 * std::f64::consts::PI),
            Units::Dimensionless => x,
        }
    }

    pub fn wants(&self, f: Format) -> bool {
        self.output.formats.contains(&f)
    }
}
