//! Experiment configuration files.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use entspec_core::stats::Binning;
use entspec_core::{BrickworkKind, Conjugation, InputSpec};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{HarnessError, Result};

/// Default ceiling on the number of qubits a config may request.
pub const DEFAULT_MAX_QUBITS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExperimentKind {
    SwapInjection,
    InputStates,
    Conjugation,
    KlAnalysis,
    EntropyScan,
    Calibration,
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LayerRule {
    #[serde(rename = "N^2")]
    NSquared,
}

/// Number of brickwork layers before the SWAP injection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PreLayers {
    Fixed(usize),
    Rule(LayerRule),
}

impl Default for PreLayers {
    fn default() -> Self {
        Self::Rule(LayerRule::NSquared)
    }
}

impl PreLayers {
    pub fn for_size(&self, n: usize) -> usize {
        match self {
            Self::Fixed(l) => *l,
            Self::Rule(LayerRule::NSquared) => n * n,
        }
    }
}

/// Number of brickwork layers after the injection; the default is `10 N - 20`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PostLayers {
    #[default]
    #[serde(skip)]
    Default,
    Fixed(usize),
    /// Keys are decimal qubit counts.
    Table(BTreeMap<String, usize>),
}

impl PostLayers {
    pub fn for_size(&self, n: usize) -> Result<usize> {
        match self {
            Self::Default => Ok((10 * n).saturating_sub(20)),
            Self::Fixed(l) => Ok(*l),
            Self::Table(t) => t
                .get(&n.to_string())
                .copied()
                .ok_or_else(|| HarnessError::Config(format!("post_layers table has no entry for N = {n}"))),
        }
    }

    fn is_default(&self) -> bool {
        *self == Self::Default
    }
}

/// Optional Clifford circuit applied to the input state.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConjugationSetting {
    #[default]
    None,
    C1,
    C2,
    C3,
    C4,
}

impl ConjugationSetting {
    pub fn circuit(self) -> Option<Conjugation> {
        match self {
            Self::None => None,
            Self::C1 => Some(Conjugation::C1),
            Self::C2 => Some(Conjugation::C2),
            Self::C3 => Some(Conjugation::C3),
            Self::C4 => Some(Conjugation::C4),
        }
    }
}

impl fmt::Display for ConjugationSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

fn default_circuits() -> usize {
    100
}
fn default_swaps() -> Vec<usize> {
    vec![1]
}
fn default_tail() -> usize {
    40
}
fn default_alphas() -> Vec<f64> {
    vec![2.0]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub num_qubits: Vec<usize>,
    #[serde(default = "default_circuits")]
    pub num_circuits: usize,
    #[serde(default)]
    pub pre_layers: PreLayers,
    #[serde(default, skip_serializing_if = "PostLayers::is_default")]
    pub post_layers: PostLayers,
    #[serde(default = "default_swaps")]
    pub num_swaps: Vec<usize>,
    #[serde(default)]
    pub input: InputSpec,
    /// Block sizes `k` for Haar-block inputs.
    #[serde(default)]
    pub block_sizes: Vec<usize>,
    #[serde(default)]
    pub family: BrickworkKind,
    #[serde(default)]
    pub conjugation: ConjugationSetting,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_tail")]
    pub tail_window: usize,
    #[serde(default)]
    pub bins: Binning,
    #[serde(default)]
    pub floor: f64,
    /// Bipartition cut; defaults to `N / 2`.
    #[serde(default)]
    pub cut: Option<usize>,
    #[serde(default = "default_alphas")]
    pub alphas: Vec<f64>,
    /// Number of pooled ratios per histogram in the KL analysis; all tail
    /// ratios when absent.
    #[serde(default)]
    pub kl_ratios: Option<usize>,
    /// Circuits per size for the Haar brickwork baseline; `num_circuits` when absent.
    #[serde(default)]
    pub haar_circuits: Option<usize>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_json(&text)
    }

    /// Hex SHA-256 of the canonical JSON form (defaults filled in).
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        Sha256::digest(canonical.as_bytes()).iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    pub fn cut_for(&self, n: usize) -> usize {
        self.cut.unwrap_or(n / 2)
    }

    pub fn validate(&self, max_qubits: usize) -> Result<()> {
        let err = |m: String| Err(HarnessError::Config(m));
        if self.experiment == ExperimentKind::Calibration {
            return Ok(());
        }
        if self.num_circuits == 0 {
            return err("num_circuits must be >= 1".into());
        }
        if self.num_qubits.is_empty() {
            return err("num_qubits is empty".into());
        }
        if self.tail_window == 0 {
            return err("tail_window must be >= 1".into());
        }
        if !(self.floor >= 0.0) {
            return err(format!("floor must be >= 0, got {}", self.floor));
        }
        if let Some(&a) = self.alphas.iter().find(|a| !(**a > 0.0)) {
            return err(format!("alpha must be > 0, got {a}"));
        }
        self.bins.validate()?;
        for &n in &self.num_qubits {
            if n > max_qubits {
                return err(format!("N = {n} exceeds the limit of {max_qubits} qubits (raise it with --max-qubits)"));
            }
            if n < 4 || n % 2 != 0 {
                return err(format!("N must be even and >= 4, got {n}"));
            }
            let post = self.post_layers.for_size(n)?;
            if self.tail_window > post {
                return err(format!("tail_window {} exceeds the {post} post-injection layers at N = {n}", self.tail_window));
            }
            let cut = self.cut_for(n);
            if cut == 0 || cut >= n {
                return err(format!("cut {cut} out of range for N = {n}"));
            }
            if let Some(&s) = self.num_swaps.iter().find(|&&s| s >= n) {
                return err(format!("num_swaps {s} must be below N = {n}"));
            }
            self.input.validate(n)?;
            for &k in &self.block_sizes {
                InputSpec::HaarBlocks { k }.validate(n)?;
            }
            if let Some(c) = self.conjugation.circuit() {
                if n < c.min_qubits() {
                    return err(format!("{c} needs at least {} qubits", c.min_qubits()));
                }
            }
        }
        match self.experiment {
            ExperimentKind::InputStates if self.block_sizes.is_empty() => err("InputStates needs block_sizes".into()),
            ExperimentKind::Conjugation if self.conjugation == ConjugationSetting::None => {
                err("Conjugation needs a conjugation circuit C1..C4".into())
            }
            _ => Ok(()),
        }
    }
}
