//! Run configuration: a single JSON document; every CLI flag mirrors a
//! config key and flags win.

use std::path::PathBuf;

use potlab_core::Nonlinearity;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    pub space: SpaceSpec,
    pub kernel: KernelSpec,
    /// Multiply every kernel entry by this factor.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    /// Rescale the kernel so the largest weighted row sum equals this.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale_to_row_sum: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nonlinearity: Option<NonlinSpec>,
    #[serde(default)]
    pub h: HSpec,
    #[serde(default)]
    pub b: BPolicy,
    #[serde(default)]
    pub solve: SolveSpec,
    #[serde(default)]
    pub lemmas: LemmaSpec,
    /// Trial budget for randomized principle searches.
    #[serde(default = "default_wmp_trials")]
    pub wmp_trials: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
}

fn default_wmp_trials() -> usize {
    1000
}

impl RunConfig {
    pub fn from_path(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("cannot parse {}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SpaceSpec {
    /// Uniform 1-D grid on `[a, b]` with trapezoid weights.
    Grid { n: usize, a: f64, b: f64 },
    /// Tensor grid on `[a, b]^2` with tensor trapezoid weights.
    Grid2d { nx: usize, ny: usize, a: f64, b: f64 },
    /// Seeded uniform cloud in the unit cube with equal weights.
    Random { n: usize, dim: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum KernelSpec {
    Riesz {
        alpha: f64,
        #[serde(default)]
        diagonal: DiagSpec,
    },
    RadialExp {
        rate: f64,
    },
    RadialTable {
        r: Vec<f64>,
        k: Vec<f64>,
    },
    Volterra,
    /// Load space and kernel from an instance document (see `io`).
    Custom {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(tag = "policy", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DiagSpec {
    /// Singular diagonal, skipped by quadrature sums.
    #[default]
    Exclude,
    /// Finite ceiling.
    Cap { value: f64 },
    /// Ceiling at the largest off-diagonal entry.
    CapAtMax,
    /// Caller-supplied cell value.
    Value { value: f64 },
}

/// Nonlinearity schema: `{"kind": "power", "q": 2.0}` or
/// `{"kind": "general_increasing", "t": [...], "g": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NonlinSpec {
    Power { q: f64 },
    GeneralIncreasing { t: Vec<f64>, g: Vec<f64> },
    GeneralDecreasing { t: Vec<f64>, g: Vec<f64> },
}

impl NonlinSpec {
    pub fn build(&self) -> Result<Nonlinearity, CliError> {
        Ok(match self {
            NonlinSpec::Power { q } => Nonlinearity::power(*q)?,
            NonlinSpec::GeneralIncreasing { t, g } => {
                Nonlinearity::general_increasing(t.clone(), g.clone())?
            }
            NonlinSpec::GeneralDecreasing { t, g } => {
                Nonlinearity::general_decreasing(t.clone(), g.clone())?
            }
        })
    }

    pub fn from_core(g: &Nonlinearity) -> Self {
        match g {
            Nonlinearity::PowerIncreasing { q } | Nonlinearity::PowerDecreasing { q } => {
                NonlinSpec::Power { q: *q }
            }
            Nonlinearity::GeneralIncreasing(t) => NonlinSpec::GeneralIncreasing {
                t: t.nodes().to_vec(),
                g: t.values().to_vec(),
            },
            Nonlinearity::GeneralDecreasing(t) => NonlinSpec::GeneralDecreasing {
                t: t.nodes().to_vec(),
                g: t.values().to_vec(),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum HSpec {
    #[default]
    One,
    Constant {
        value: f64,
    },
    /// Seeded uniform values in `[lo, hi]`.
    Random {
        lo: f64,
        hi: f64,
    },
    Values {
        values: Vec<f64>,
    },
    /// The homogeneous problem `u = G(u^q sigma)`.
    Zero,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(tag = "policy", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BPolicy {
    /// `b = 2 kappa` from exhaustive triple enumeration.
    #[default]
    CertifiedFromKappa,
    /// Exact minimal constant from the exhaustive support search.
    ExhaustiveLp,
    User {
        value: f64,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolveSpec {
    pub tol: f64,
    pub max_iter: usize,
    pub ceiling: f64,
    pub damping: f64,
}

impl Default for SolveSpec {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 100_000,
            ceiling: 1e100,
            damping: 1.0,
        }
    }
}

impl SolveSpec {
    pub fn to_options(&self) -> potlab_core::SolveOptions {
        potlab_core::SolveOptions {
            tol: self.tol,
            max_iter: self.max_iter,
            ceiling: self.ceiling,
            damping: self.damping,
            sigma: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LemmaSpec {
    /// Random layer-cake trials.
    pub trials: usize,
    /// Ladder depth for the iterate comparison.
    pub levels: usize,
    /// Ladder grid size.
    pub grid: usize,
    /// Powers `r` for the iterate inequalities.
    pub powers: Vec<f64>,
}

impl Default for LemmaSpec {
    fn default() -> Self {
        Self {
            trials: 200,
            levels: 4,
            grid: 8192,
            powers: vec![0.5, 2.0, 3.0],
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, Default, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Both,
}
