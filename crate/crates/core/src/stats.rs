//! Reference gap-ratio densities, binned distributions, KL divergence,
//! entanglement entropies, the Page formula and the exponential fit.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::EntanglementSpectrum;

/// Floor applied to reference probabilities inside the KL sum.
pub const KL_EPSILON: f64 = 1e-12;
/// Allowed deviation of a binned distribution's total mass from one.
pub const NORMALIZATION_TOL: f64 = 1e-6;

/// Analytic densities of the adjacent-gap ratio `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReferenceDistribution {
    Poisson,
    WignerDysonGue,
}

/// Normalization constant of the β = 2 Wigner-like surmise.
pub fn gue_normalization() -> f64 {
    4.0 * PI / (81.0 * 3f64.sqrt())
}

impl ReferenceDistribution {
    /// Unchecked density; callers guarantee `r >= 0`.
    fn density(self, r: f64) -> f64 {
        match self {
            Self::Poisson => 1.0 / ((1.0 + r) * (1.0 + r)),
            Self::WignerDysonGue => {
                let num = (r + r * r).powi(2);
                num / (gue_normalization() * (1.0 + r + r * r).powi(4))
            }
        }
    }

    pub fn pdf(self, r: f64) -> Result<f64> {
        if !(r >= 0.0) {
            return Err(Error::InvalidArgument(format!("gap ratio must be >= 0, got {r}")));
        }
        Ok(self.density(r))
    }

    /// Mean of `r̃ = min(r, 1/r)` for this density.
    pub fn expected_r_tilde(self) -> f64 {
        match self {
            Self::Poisson => 2.0 * 2f64.ln() - 1.0,
            Self::WignerDysonGue => 2.0 * 3f64.sqrt() / PI - 0.5,
        }
    }
}

/// Free-function form of [`ReferenceDistribution::pdf`].
pub fn reference_pdf(dist: ReferenceDistribution, r: f64) -> Result<f64> {
    dist.pdf(r)
}

/// Uniform bins on `[lo, hi)` plus one overflow bin for values `>= hi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Binning {
    pub lo: f64,
    pub hi: f64,
    pub bins: usize,
}

impl Default for Binning {
    fn default() -> Self {
        Self { lo: 0.0, hi: 3.0, bins: 50 }
    }
}

impl Binning {
    pub fn validate(&self) -> Result<()> {
        if self.bins == 0 || !(self.hi > self.lo) || !self.lo.is_finite() || !self.hi.is_finite() {
            return Err(Error::Config(format!("invalid binning {self:?}")));
        }
        Ok(())
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.bins as f64
    }

    pub fn left(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.width()
    }

    /// Index of the bin holding `x`; `bins` is the overflow bin. Values below
    /// `lo` return `None`.
    pub fn index(&self, x: f64) -> Option<usize> {
        if x < self.lo || x.is_nan() {
            return None;
        }
        if x >= self.hi {
            return Some(self.bins);
        }
        Some((((x - self.lo) / self.width()) as usize).min(self.bins - 1))
    }
}

/// Probability mass per bin; the last entry is the overflow bin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinnedDistribution {
    pub binning: Binning,
    pub mass: Vec<f64>,
    /// Number of samples the masses were estimated from (0 for analytic).
    pub samples: usize,
}

impl BinnedDistribution {
    /// Normalized histogram of `samples`; values below `lo` are an error.
    pub fn from_samples(samples: &[f64], binning: Binning) -> Result<Self> {
        binning.validate()?;
        if samples.is_empty() {
            return Err(Error::Empty("no samples to bin".into()));
        }
        let mut counts = vec![0usize; binning.bins + 1];
        for &x in samples {
            let i = binning
                .index(x)
                .ok_or_else(|| Error::InvalidArgument(format!("sample {x} below binning range")))?;
            counts[i] += 1;
        }
        let n = samples.len() as f64;
        Ok(Self { binning, mass: counts.iter().map(|&c| c as f64 / n).collect(), samples: samples.len() })
    }

    /// Bin masses of an analytic density by composite midpoint quadrature
    /// with `subsamples` points per bin; the overflow bin takes the remainder.
    pub fn from_reference(dist: ReferenceDistribution, binning: Binning, subsamples: usize) -> Result<Self> {
        binning.validate()?;
        if subsamples < 16 {
            return Err(Error::InvalidArgument(format!("need at least 16 subsamples per bin, got {subsamples}")));
        }
        if binning.lo < 0.0 {
            return Err(Error::InvalidArgument("reference densities live on r >= 0".into()));
        }
        let h = binning.width() / subsamples as f64;
        let mut mass: Vec<f64> = (0..binning.bins)
            .map(|i| {
                let left = binning.left(i);
                (0..subsamples).map(|j| dist.density(left + (j as f64 + 0.5) * h)).sum::<f64>() * h
            })
            .collect();
        let below: f64 = if binning.lo > 0.0 { integrate(|r| dist.density(r), 0.0, binning.lo, 4096) } else { 0.0 };
        let inside: f64 = mass.iter().sum();
        mass.push((1.0 - below - inside).max(0.0));
        Ok(Self { binning, mass, samples: 0 })
    }

    pub fn total(&self) -> f64 {
        self.mass.iter().sum()
    }

    /// Density (mass / width) of each finite bin.
    pub fn densities(&self) -> Vec<f64> {
        let w = self.binning.width();
        self.mass[..self.binning.bins].iter().map(|m| m / w).collect()
    }

    /// CSV with header `bin_left,bin_right,density`. The final row is the
    /// overflow bin with `bin_right = inf` and its probability mass as density.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_left,bin_right,density\n");
        let b = &self.binning;
        for (i, d) in self.densities().iter().enumerate() {
            writeln!(out, "{},{},{}", b.left(i), b.left(i + 1), d).unwrap();
        }
        writeln!(out, "{},inf,{}", b.hi, self.mass[b.bins]).unwrap();
        out
    }
}

/// Composite Simpson rule on `[a, b]` with an even number of panels.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let n = panels + panels % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// `Σ_i P_i ln(P_i / max(Q_i, ε))` over bins with `P_i > 0`.
pub fn kl_divergence(p: &BinnedDistribution, q: &BinnedDistribution) -> Result<f64> {
    if p.binning != q.binning || p.mass.len() != q.mass.len() {
        return Err(Error::BinMismatch);
    }
    for d in [p, q] {
        let t = d.total();
        if (t - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Unnormalized(t));
        }
    }
    Ok(p.mass
        .iter()
        .zip(&q.mass)
        .filter(|(&pi, _)| pi > 0.0)
        .map(|(&pi, &qi)| pi * (pi / qi.max(KL_EPSILON)).ln())
        .sum())
}

/// KL divergence of `p` from an analytic reference binned with 64 subsamples.
pub fn kl_to_reference(p: &BinnedDistribution, dist: ReferenceDistribution) -> Result<f64> {
    kl_divergence(p, &BinnedDistribution::from_reference(dist, p.binning, 64)?)
}

/// `S = -Σ p ln p` with `0 ln 0 = 0`.
pub fn von_neumann_entropy(spec: &EntanglementSpectrum) -> f64 {
    -spec.values().iter().filter(|&&p| p > 0.0).map(|&p| p * p.ln()).sum::<f64>()
}

/// `T_α = Σ p^α`.
pub fn trace_power(spec: &EntanglementSpectrum, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!("alpha must be > 0, got {alpha}")));
    }
    Ok(spec.values().iter().filter(|&&p| p > 0.0).map(|&p| p.powf(alpha)).sum())
}

/// `R_α = ln(T_α) / (1 - α)`; `α = 1` returns the von Neumann entropy.
pub fn renyi_entropy(spec: &EntanglementSpectrum, alpha: f64) -> Result<f64> {
    let t = trace_power(spec, alpha)?;
    if alpha == 1.0 {
        return Ok(von_neumann_entropy(spec));
    }
    Ok(t.ln() / (1.0 - alpha))
}

/// Average entanglement entropy of a Haar state on `C^m ⊗ C^n`, `m <= n`.
pub fn page_entropy(m: u64, n: u64) -> Result<f64> {
    if m == 0 || m > n {
        return Err(Error::InvalidArgument(format!("page_entropy needs 1 <= m <= n, got ({m}, {n})")));
    }
    // smallest terms first
    let sum: f64 = (n + 1..=m * n).rev().map(|k| 1.0 / k as f64).sum();
    Ok(sum - (m - 1) as f64 / (2 * n) as f64)
}

/// Page entropy of an equal bipartition of `num_qubits` (floor on the left).
pub fn page_entropy_qubits(num_qubits: usize, cut: usize) -> Result<f64> {
    if cut == 0 || cut >= num_qubits || num_qubits > 62 {
        return Err(Error::CutOutOfRange { cut, num_qubits });
    }
    let (a, b) = (1u64 << cut, 1u64 << (num_qubits - cut));
    page_entropy(a.min(b), a.max(b))
}

/// Least-squares fit of `δr = r0 e^{-γ N}` on `(N, ln δr)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub r0: f64,
    pub gamma: f64,
    /// Sum of squared residuals in log space.
    pub residual: f64,
}

pub fn fit_exponential(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument("need at least two points".into()));
    }
    if let Some(&(x, y)) = points.iter().find(|(_, y)| !(*y > 0.0)) {
        return Err(Error::InvalidArgument(format!("nonpositive deviation {y} at N = {x}")));
    }
    let (slope, intercept) = linear_fit(&points.iter().map(|&(x, y)| (x, y.ln())).collect::<Vec<_>>())?;
    let residual = points
        .iter()
        .map(|&(x, y)| {
            let e = y.ln() - (intercept + slope * x);
            e * e
        })
        .sum();
    Ok(FitResult { r0: intercept.exp(), gamma: -slope, residual })
}

/// Ordinary least squares `y = a x + b`; returns `(a, b)`.
pub fn linear_fit(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::InvalidArgument("fit needs at least two distinct abscissae".into()));
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Mean and sample standard deviation (`n - 1` denominator; 0 for one value).
pub fn mean_std(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 { values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    Some((mean, var.sqrt()))
}
