//! The experiment registry: each experiment expands a config into circuit
//! groups and turns the resulting records into its report tables.

use std::collections::BTreeMap;

use entspec_core::fermion::fermionic_weight;
use entspec_core::stats::{kl_divergence, kl_to_reference, mean_std, page_entropy_qubits, BinnedDistribution, ReferenceDistribution};
use entspec_core::{conjugation_circuit, BrickworkKind, InputSpec};
use serde::{Deserialize, Serialize};

use crate::config::{ConjugationSetting, ExperimentConfig, ExperimentKind};
use crate::error::{HarnessError, Result};
use crate::records::{GroupKey, RunRecord, SummaryRow};
use crate::simulate::GroupSpec;

/// KL divergences of one group's pooled ratio histogram.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KlRow {
    pub n: usize,
    pub family: String,
    pub num_swaps: usize,
    pub input: String,
    pub n_ratios: usize,
    pub kl_wigner_dyson: f64,
    pub kl_poisson: f64,
    /// Against the Haar brickwork histogram at the same `N`.
    pub kl_haar: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightRow {
    pub n: usize,
    pub conjugation: String,
    pub fermionic_weight: usize,
}

/// Entropy and trace-power averages of one group for one `α`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyRow {
    pub n: usize,
    pub family: String,
    pub input: String,
    pub num_swaps: usize,
    pub swap_density: f64,
    pub mean_entropy: f64,
    pub sem_entropy: f64,
    pub page_deviation: f64,
    pub alpha: f64,
    pub mean_trace_power: f64,
}

/// Labelled ratio histogram.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    pub key: GroupKey,
    pub distribution: BinnedDistribution,
}

impl Histogram {
    pub fn file_stem(&self) -> String {
        let k = &self.key;
        format!("hist_n{}_{}_s{}_{}", k.n, k.family, k.num_swaps, k.input.replace(':', ""))
    }
}

/// Everything an experiment produces besides the records and summary.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub kl: Vec<KlRow>,
    pub weights: Vec<WeightRow>,
    pub entropy: Vec<EntropyRow>,
    pub histograms: Vec<Histogram>,
    pub warnings: Vec<String>,
}

pub trait Experiment: Send + Sync {
    fn kind(&self) -> ExperimentKind;

    /// Circuit groups to simulate, in output order.
    fn groups(&self, cfg: &ExperimentConfig) -> Result<Vec<GroupSpec>>;

    fn report(&self, _cfg: &ExperimentConfig, _records: &[RunRecord], _summary: &[SummaryRow]) -> Result<Report> {
        Ok(Report::default())
    }
}

fn base_group(cfg: &ExperimentConfig, n: usize) -> Result<GroupSpec> {
    Ok(GroupSpec {
        n,
        family: cfg.family,
        input: cfg.input.clone(),
        conjugation: cfg.conjugation,
        swaps: cfg.num_swaps.clone(),
        pre_layers: cfg.pre_layers.for_size(n),
        post_layers: cfg.post_layers.for_size(n)?,
        num_circuits: cfg.num_circuits,
        keep_ratios: false,
    })
}

fn haar_group(cfg: &ExperimentConfig, n: usize, keep_ratios: bool) -> Result<GroupSpec> {
    Ok(GroupSpec {
        family: BrickworkKind::Haar,
        input: InputSpec::RandomRealProduct,
        conjugation: ConjugationSetting::None,
        swaps: vec![0],
        num_circuits: cfg.haar_circuits.unwrap_or(cfg.num_circuits),
        keep_ratios,
        ..base_group(cfg, n)?
    })
}

struct SwapInjection;
struct InputStates;
struct Conjugation;
struct KlAnalysis;
struct EntropyScan;
struct Calibration;

impl Experiment for SwapInjection {
    fn kind(&self) -> ExperimentKind {
        ExperimentKind::SwapInjection
    }
    fn groups(&self, cfg: &ExperimentConfig) -> Result<Vec<GroupSpec>> {
        cfg.num_qubits.iter().map(|&n| base_group(cfg, n)).collect()
    }
}

impl Experiment for InputStates {
    fn kind(&self) -> ExperimentKind {
        ExperimentKind::InputStates
    }
    fn groups(&self, cfg: &ExperimentConfig) -> Result<Vec<GroupSpec>> {
        let mut out = Vec::new();
        for &n in &cfg.num_qubits {
            for &k in &cfg.block_sizes {
                out.push(GroupSpec { input: InputSpec::HaarBlocks { k }, swaps: vec![0], ..base_group(cfg, n)? });
            }
        }
        Ok(out)
    }
}

impl Experiment for Conjugation {
    fn kind(&self) -> ExperimentKind {
        ExperimentKind::Conjugation
    }
    fn groups(&self, cfg: &ExperimentConfig) -> Result<Vec<GroupSpec>> {
        let mut out = Vec::new();
        for &n in &cfg.num_qubits {
            let g = GroupSpec { swaps: vec![0], ..base_group(cfg, n)? };
            out.push(GroupSpec { conjugation: ConjugationSetting::None, ..g.clone() });
            out.push(g);
        }
        Ok(out)
    }
    fn report(&self, cfg: &ExperimentConfig, _: &[RunRecord], _: &[SummaryRow]) -> Result<Report> {
        let c = cfg.conjugation.circuit().ok_or_else(|| HarnessError::Config("no conjugation circuit".into()))?;
        let weights = cfg
            .num_qubits
            .iter()
            .map(|&n| {
                Ok(WeightRow { n, conjugation: c.to_string(), fermionic_weight: fermionic_weight(&conjugation_circuit(c, n)?)? })
            })
            .collect::<Result<_>>()?;
        Ok(Report { weights, ..Report::default() })
    }
}

/// Pools the tail ratios of every group, truncated to `limit` per group.
fn pooled_ratios(records: &[RunRecord], limit: Option<usize>) -> BTreeMap<GroupKey, Vec<f64>> {
    let mut pools: BTreeMap<GroupKey, Vec<f64>> = BTreeMap::new();
    for r in records {
        pools.entry(r.group_key()).or_default().extend_from_slice(&r.tail_ratios);
    }
    if let Some(limit) = limit {
        pools.values_mut().for_each(|v| v.truncate(limit));
    }
    pools
}

impl Experiment for KlAnalysis {
    fn kind(&self) -> ExperimentKind {
        ExperimentKind::KlAnalysis
    }
    fn groups(&self, cfg: &ExperimentConfig) -> Result<Vec<GroupSpec>> {
        let mut out = Vec::new();
        for &n in &cfg.num_qubits {
            if !cfg.num_swaps.is_empty() {
                out.push(GroupSpec { keep_ratios: true, ..base_group(cfg, n)? });
            }
            out.push(haar_group(cfg, n, true)?);
        }
        Ok(out)
    }
    fn report(&self, cfg: &ExperimentConfig, records: &[RunRecord], _: &[SummaryRow]) -> Result<Report> {
        let mut report = Report::default();
        let haar = BrickworkKind::Haar.to_string();
        let mut hists: Vec<Histogram> = Vec::new();
        for (key, ratios) in pooled_ratios(records, cfg.kl_ratios) {
            if ratios.is_empty() {
                report.warnings.push(format!("{key:?}: no ratios"));
                continue;
            }
            if let Some(limit) = cfg.kl_ratios {
                if ratios.len() < limit {
                    report.warnings.push(format!("{key:?}: only {} of {limit} requested ratios", ratios.len()));
                }
            }
            if ratios.len() < 10 * (cfg.bins.bins + 1) {
                report.warnings.push(format!("{key:?}: {} ratios is under 10 per bin", ratios.len()));
            }
            let distribution = BinnedDistribution::from_samples(&ratios, cfg.bins)?;
            hists.push(Histogram { key, distribution });
        }
        for h in &hists {
            let reference = hists.iter().find(|o| o.key.n == h.key.n && o.key.family == haar);
            let kl_haar = reference.map(|o| kl_divergence(&h.distribution, &o.distribution)).transpose()?;
            report.kl.push(KlRow {
                n: h.key.n,
                family: h.key.family.clone(),
                num_swaps: h.key.num_swaps,
                input: h.key.input.clone(),
                n_ratios: h.distribution.samples,
                kl_wigner_dyson: kl_to_reference(&h.distribution, ReferenceDistribution::WignerDysonGue)?,
                kl_poisson: kl_to_reference(&h.distribution, ReferenceDistribution::Poisson)?,
                kl_haar,
            });
        }
        report.histograms = hists;
        Ok(report)
    }
}

impl Experiment for EntropyScan {
    fn kind(&self) -> ExperimentKind {
        ExperimentKind::EntropyScan
    }
    fn groups(&self, cfg: &ExperimentConfig) -> Result<Vec<GroupSpec>> {
        let mut out = Vec::new();
        for &n in &cfg.num_qubits {
            if !cfg.num_swaps.is_empty() {
                out.push(base_group(cfg, n)?);
            }
            for &k in &cfg.block_sizes {
                out.push(GroupSpec { input: InputSpec::HaarBlocks { k }, swaps: vec![0], ..base_group(cfg, n)? });
            }
            out.push(haar_group(cfg, n, false)?);
        }
        Ok(out)
    }
    fn report(&self, cfg: &ExperimentConfig, records: &[RunRecord], _: &[SummaryRow]) -> Result<Report> {
        let mut groups: Vec<(GroupKey, Vec<&RunRecord>)> = Vec::new();
        for r in records {
            let key = r.group_key();
            match groups.iter_mut().find(|(k, _)| *k == key) {
                Some((_, v)) => v.push(r),
                None => groups.push((key, vec![r])),
            }
        }
        let mut rows = Vec::new();
        for (key, rs) in groups {
            let s: Vec<f64> = rs.iter().map(|r| r.entropy).collect();
            let (mean_s, sd_s) = mean_std(&s).expect("groups are nonempty");
            let page = page_entropy_qubits(key.n, rs[0].cut)?;
            for &alpha in &cfg.alphas {
                let label = format!("{alpha}");
                let t: Vec<f64> = rs.iter().filter_map(|r| r.trace_powers.get(&label).copied()).collect();
                rows.push(EntropyRow {
                    n: key.n,
                    family: key.family.clone(),
                    input: key.input.clone(),
                    num_swaps: key.num_swaps,
                    swap_density: key.num_swaps as f64 / (key.n - 1) as f64,
                    mean_entropy: mean_s,
                    sem_entropy: sd_s / (s.len() as f64).sqrt(),
                    page_deviation: page - mean_s,
                    alpha,
                    mean_trace_power: mean_std(&t).map_or(f64::NAN, |m| m.0),
                });
            }
        }
        Ok(Report { entropy: rows, ..Report::default() })
    }
}

impl Experiment for Calibration {
    fn kind(&self) -> ExperimentKind {
        ExperimentKind::Calibration
    }
    fn groups(&self, _: &ExperimentConfig) -> Result<Vec<GroupSpec>> {
        Ok(Vec::new())
    }
}

static REGISTRY: [&dyn Experiment; 6] = [&SwapInjection, &InputStates, &Conjugation, &KlAnalysis, &EntropyScan, &Calibration];

pub fn experiments() -> &'static [&'static dyn Experiment] {
    &REGISTRY
}

pub fn experiment(kind: ExperimentKind) -> &'static dyn Experiment {
    *REGISTRY.iter().find(|e| e.kind() == kind).expect("every kind is registered")
}
