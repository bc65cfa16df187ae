//! Reference calibration: Poisson levels, GUE matrices and Haar-random states
//! must reproduce their known ratio and entropy statistics.

use std::fmt::Write as _;
use std::path::Path;

use entspec_core::random_matrix::{gue_ratio_series, poisson_levels};
use entspec_core::stats::{page_entropy_qubits, von_neumann_entropy, BinnedDistribution, Binning};
use entspec_core::{gap_ratios, haar_state, mean_r_tilde, EntanglementSpectrum, GapRatioSeries, Statevector};

use crate::error::{HarnessError, Result};
use crate::seed::{child_seed, label_tag, rng_from_seed};

pub const POISSON_SPECTRA: usize = 100_000;
pub const POISSON_GAPS: usize = 20;
pub const GUE_MATRICES: usize = 1000;
pub const GUE_DIM: usize = 64;
pub const HAAR_STATES: usize = 200;
pub const HAAR_QUBITS: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub target: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        (self.value - self.target).abs() <= self.tolerance
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Calibration {
    pub checks: Vec<Check>,
    /// `(name, histogram of r)` per reference ensemble.
    pub histograms: Vec<(&'static str, BinnedDistribution)>,
}

impl Calibration {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,value,target,tolerance,pass\n");
        for c in &self.checks {
            writeln!(out, "{},{},{},{},{}", c.name, c.value, c.target, c.tolerance, c.passed()).unwrap();
        }
        out
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
        let put = |name: String, text: String| {
            let path = dir.join(name);
            std::fs::write(&path, text).map_err(|e| HarnessError::io(&path, e))
        };
        put("calibration.csv".into(), self.to_csv())?;
        for (name, h) in &self.histograms {
            put(format!("hist_{name}.csv"), h.to_csv())?;
        }
        Ok(())
    }
}

fn pooled_ratios(series: &[GapRatioSeries]) -> Vec<f64> {
    series.iter().flat_map(|s| s.ratios.iter().copied()).collect()
}

/// Poisson levels as a normalized spectrum, so the same floor and ratio code
/// path as the circuit spectra is exercised.
pub fn poisson_series(seed: u64, spectra: usize, gaps: usize) -> Result<Vec<GapRatioSeries>> {
    let mut rng = rng_from_seed(seed);
    (0..spectra)
        .map(|_| {
            let levels = poisson_levels(gaps, &mut rng);
            let min = *levels.last().expect("at least one level");
            let spec = EntanglementSpectrum::from_weights(levels.iter().map(|l| l - min).collect())?;
            Ok(gap_ratios(&spec, 0.0)?)
        })
        .collect()
}

pub fn gue_series(seed: u64, matrices: usize, dim: usize) -> Vec<GapRatioSeries> {
    let mut rng = rng_from_seed(seed);
    (0..matrices).map(|_| gue_ratio_series(dim, &mut rng)).collect()
}

/// Half-cut spectra of Haar-random `n`-qubit states.
pub fn haar_spectra(seed: u64, states: usize, n: usize) -> Result<Vec<EntanglementSpectrum>> {
    let mut rng = rng_from_seed(seed);
    (0..states)
        .map(|_| {
            let psi = Statevector::from_amplitudes(haar_state(1 << n, &mut rng))?;
            Ok(psi.schmidt_spectrum(n / 2)?)
        })
        .collect()
}

/// Runs the full suite; the output depends only on `seed`.
pub fn calibrate(seed: u64) -> Result<Calibration> {
    let sub = |tag: &str| child_seed(seed, &[label_tag(tag)]);
    let binning = Binning::default();

    let poisson = poisson_series(sub("poisson"), POISSON_SPECTRA, POISSON_GAPS)?;
    let gue = gue_series(sub("gue"), GUE_MATRICES, GUE_DIM);
    let haar = haar_spectra(sub("haar"), HAAR_STATES, HAAR_QUBITS)?;
    let haar_series = haar.iter().map(|s| gap_ratios(s, 0.0)).collect::<std::result::Result<Vec<_>, _>>()?;
    let haar_entropy = haar.iter().map(von_neumann_entropy).sum::<f64>() / haar.len() as f64;

    let checks = vec![
        Check {
            name: "poisson_mean_r_tilde",
            value: mean_r_tilde(&poisson)?,
            target: 0.386,
            tolerance: 0.005,
        },
        Check { name: "gue_mean_r_tilde", value: mean_r_tilde(&gue)?, target: 0.60, tolerance: 0.015 },
        Check { name: "haar_state_mean_r_tilde", value: mean_r_tilde(&haar_series)?, target: 0.60, tolerance: 0.015 },
        Check {
            name: "haar_state_mean_entropy",
            value: haar_entropy,
            target: page_entropy_qubits(HAAR_QUBITS, HAAR_QUBITS / 2)?,
            tolerance: 0.01,
        },
    ];
    let histograms = vec![
        ("poisson", BinnedDistribution::from_samples(&pooled_ratios(&poisson), binning)?),
        ("gue", BinnedDistribution::from_samples(&pooled_ratios(&gue), binning)?),
        ("haar_state", BinnedDistribution::from_samples(&pooled_ratios(&haar_series), binning)?),
    ];
    Ok(Calibration { checks, histograms })
}
