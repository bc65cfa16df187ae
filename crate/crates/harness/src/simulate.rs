//! Simulation of one circuit realization and its SWAP-count branches.

use std::collections::BTreeMap;
use std::time::Instant;

use entspec_core::circuit::brickwork_layer;
use entspec_core::stats::{renyi_entropy, trace_power, von_neumann_entropy};
use entspec_core::{conjugation_circuit, gap_ratios, prepare, swap_injection, BrickworkKind, InputSpec, Statevector};
use rand_chacha::ChaCha8Rng;

use crate::config::ConjugationSetting;
use crate::error::Result;
use crate::records::RunRecord;
use crate::seed::{child_seed, label_tag, rng_from_seed};

/// A family of circuits sharing everything except the SWAP count. All SWAP
/// branches of a realization share the input, the pre-injection layers and
/// the post-injection gates.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupSpec {
    pub n: usize,
    pub family: BrickworkKind,
    pub input: InputSpec,
    pub conjugation: ConjugationSetting,
    pub swaps: Vec<usize>,
    pub pre_layers: usize,
    pub post_layers: usize,
    pub num_circuits: usize,
    pub keep_ratios: bool,
}

impl GroupSpec {
    pub fn label(&self) -> String {
        format!("{}|{}|{}|{}|{}", self.family, self.input.label(), self.conjugation, self.pre_layers, self.post_layers)
    }

    pub fn seed(&self, master: u64, circuit_index: usize) -> u64 {
        child_seed(master, &[self.n as u64, circuit_index as u64, label_tag(&self.label())])
    }
}

/// Measurement settings shared by every group of a run.
#[derive(Clone, Debug, PartialEq)]
pub struct Measurement {
    pub tail_window: usize,
    pub floor: f64,
    pub cut: usize,
    pub alphas: Vec<f64>,
    pub config_hash: String,
}

fn branch(
    group: &GroupSpec,
    meas: &Measurement,
    circuit_index: usize,
    seed: u64,
    swaps: usize,
    mut state: Statevector,
    mut rng: ChaCha8Rng,
) -> Result<RunRecord> {
    let start = Instant::now();
    let n = group.n;
    if swaps > 0 {
        swap_injection(n, swaps)?.apply(&mut state)?;
    }
    let family = group.family.family();
    let mut trace = Vec::with_capacity(group.post_layers);
    let mut tail_ratios = Vec::new();
    let tail_start = group.post_layers.saturating_sub(meas.tail_window);
    let mut spectrum = None;
    for l in 0..group.post_layers {
        let layer = brickwork_layer(n, group.pre_layers + l, family, &mut rng);
        let crosses_cut = layer.iter().any(|g| g.site() == meas.cut);
        for g in &layer {
            state.apply(g)?;
        }
        let spec = state.schmidt_spectrum(meas.cut)?;
        let series = gap_ratios(&spec, meas.floor)?;
        trace.push(series.mean_r_tilde());
        // layers that miss the cut repeat the previous spectrum
        if group.keep_ratios && l >= tail_start && crosses_cut {
            tail_ratios.extend_from_slice(&series.ratios);
        }
        spectrum = Some(spec);
    }
    let spectrum = match spectrum {
        Some(s) => s,
        None => state.schmidt_spectrum(meas.cut)?,
    };
    let tail: Vec<f64> = trace[tail_start..].iter().flatten().copied().collect();
    let r_tilde_inf = (!tail.is_empty()).then(|| tail.iter().sum::<f64>() / tail.len() as f64);
    let trace_powers = meas
        .alphas
        .iter()
        .map(|&a| Ok((format!("{a}"), trace_power(&spectrum, a)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(RunRecord {
        config_hash: meas.config_hash.clone(),
        circuit_index,
        seed,
        n,
        family: group.family.to_string(),
        num_swaps: swaps,
        input: group.input.label(),
        conjugation: group.conjugation.to_string(),
        cut: meas.cut,
        r_tilde_trace: trace,
        r_tilde_inf,
        entropy: von_neumann_entropy(&spectrum),
        renyi2: renyi_entropy(&spectrum, 2.0)?,
        trace_powers,
        spectrum: spectrum.values().to_vec(),
        tail_ratios,
        wall_time: start.elapsed(),
    })
}

/// Runs realization `circuit_index` of `group`, one record per SWAP count.
pub fn simulate(group: &GroupSpec, meas: &Measurement, master_seed: u64, circuit_index: usize) -> Result<Vec<RunRecord>> {
    let start = Instant::now();
    let seed = group.seed(master_seed, circuit_index);
    let mut rng = rng_from_seed(seed);
    let n = group.n;
    let mut state = prepare(&group.input, n, &mut rng)?;
    if let Some(c) = group.conjugation.circuit() {
        conjugation_circuit(c, n)?.apply(&mut state)?;
    }
    let family = group.family.family();
    for l in 0..group.pre_layers {
        for g in brickwork_layer(n, l, family, &mut rng) {
            state.apply(&g)?;
        }
    }
    let shared = start.elapsed();
    let mut out = Vec::with_capacity(group.swaps.len());
    for &s in &group.swaps {
        let mut rec = branch(group, meas, circuit_index, seed, s, state.clone(), rng.clone())?;
        rec.wall_time += shared;
        out.push(rec);
    }
    Ok(out)
}
