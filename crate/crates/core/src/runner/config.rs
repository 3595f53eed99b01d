//! JSON schema of scenario files. Every section rejects unknown keys.

use serde::{Deserialize, Serialize};

use crate::body::BodySpec;
use crate::flow::{Amplitude, ObservableSpec};
use crate::orthospectrum::{OneForm, Orientation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Spectrum,
    Count,
    Zeta,
    Residues,
    Scan,
    Guinand,
    Correlation,
    Laplace,
    Mellin,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::Spectrum,
        Command::Count,
        Command::Zeta,
        Command::Residues,
        Command::Scan,
        Command::Guinand,
        Command::Correlation,
        Command::Laplace,
        Command::Mellin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Count => "count",
            Command::Zeta => "zeta",
            Command::Residues => "residues",
            Command::Scan => "scan",
            Command::Guinand => "guinand",
            Command::Correlation => "correlation",
            Command::Laplace => "laplace",
            Command::Mellin => "mellin",
        }
    }

    pub fn parse(name: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == name)
    }

    pub(crate) fn needs_bodies(self) -> bool {
        !matches!(
            self,
            Command::Correlation | Command::Laplace | Command::Mellin
        )
    }
}

/// A real grid: an explicit list or an arithmetic range with inclusive end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    List(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    #[serde(default)]
    pub command: Option<Command>,
    #[serde(default)]
    pub dimension: Option<usize>,
    #[serde(default)]
    pub bodies: Option<[BodySpec; 2]>,
    #[serde(rename = "T", default)]
    pub t: Option<f64>,
    #[serde(default = "default_orientation")]
    pub orientation: Orientation,
    #[serde(default)]
    pub one_form: Option<OneForm>,
    /// Worker threads; defaults to the number of logical CPUs.
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default)]
    pub count: Option<CountSection>,
    #[serde(default)]
    pub zeta: Option<ZetaSection>,
    #[serde(default)]
    pub residues: Option<ResiduesSection>,
    #[serde(default)]
    pub scan: Option<ScanSection>,
    #[serde(default)]
    pub guinand: Option<GuinandSection>,
    #[serde(default)]
    pub correlation: Option<CorrelationSection>,
    #[serde(default)]
    pub laplace: Option<TransformSection>,
    #[serde(default)]
    pub mellin: Option<TransformSection>,
}

fn default_orientation() -> Orientation {
    Orientation::K1ToK2
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountSection {
    /// Evaluation points; default 20 equally spaced points in `(T0, T]`.
    #[serde(rename = "T", default)]
    pub t: Option<Grid>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZetaMethod {
    Direct,
    #[default]
    Continued,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZetaSection {
    pub s: Vec<Amplitude>,
    #[serde(default)]
    pub method: ZetaMethod,
    #[serde(default)]
    pub t1: Option<f64>,
    #[serde(default)]
    pub t_max: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResiduesSection {
    #[serde(default)]
    pub t1: Option<f64>,
    #[serde(default)]
    pub t_max: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSection {
    #[serde(default = "default_taus")]
    pub taus: Grid,
    /// Window scales; default `T * (0.22, 0.247, 0.279, 0.314, 0.358)`.
    #[serde(default)]
    pub scales: Option<Vec<f64>>,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    #[serde(default = "default_max_residual")]
    pub max_residual: f64,
}

impl Default for ScanSection {
    fn default() -> Self {
        ScanSection {
            taus: default_taus(),
            scales: None,
            threshold: default_threshold(),
            max_residual: default_max_residual(),
        }
    }
}

fn default_taus() -> Grid {
    Grid::Range {
        start: 0.05,
        stop: 3.0,
        step: 0.01,
    }
}

fn default_threshold() -> f64 {
    0.25
}

fn default_max_residual() -> f64 {
    0.5
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GuinandSection {
    /// Fejér window half-width; default `T`.
    #[serde(default)]
    pub sigma: Option<f64>,
    /// Largest `|xi + beta|` probed; default 3.
    #[serde(default)]
    pub lambda_max: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrelationSection {
    pub phi: ObservableSpec,
    /// Defaults to `phi`.
    #[serde(default)]
    pub psi: Option<ObservableSpec>,
    #[serde(default = "default_times")]
    pub t: Grid,
}

fn default_times() -> Grid {
    Grid::Range {
        start: 0.0,
        stop: 50.0,
        step: 0.5,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformSection {
    pub phi: ObservableSpec,
    #[serde(default)]
    pub psi: Option<ObservableSpec>,
    pub s: Vec<Amplitude>,
    #[serde(default)]
    pub t_split: Option<f64>,
    #[serde(default)]
    pub chi_cutoff: Option<f64>,
}
