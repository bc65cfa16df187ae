//! Entanglement spectra and their gap-ratio statistics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gaps smaller than this are treated as exact degeneracies.
pub const TIE_TOL: f64 = 1e-15;

/// Descending eigenvalues of a reduced density matrix, summing to one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct EntanglementSpectrum(Vec<f64>);

impl EntanglementSpectrum {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSpectrum("empty spectrum".into()));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidSpectrum("values must be finite and nonnegative".into()));
        }
        if values.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidSpectrum("values must be sorted in descending order".into()));
        }
        let total: f64 = values.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidSpectrum(format!("values sum to {total}, not 1")));
        }
        Ok(Self(values))
    }

    /// Sorts, clamps at zero and normalizes arbitrary nonnegative weights.
    pub fn from_weights(mut weights: Vec<f64>) -> Result<Self> {
        weights.iter_mut().for_each(|w| *w = w.max(0.0));
        weights.sort_by(|a, b| b.total_cmp(a));
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::InvalidSpectrum("weights have no positive mass".into()));
        }
        weights.iter_mut().for_each(|w| *w /= total);
        Self::new(weights)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Values strictly above `relative_floor * p_max`.
    pub fn above_relative_floor(&self, relative_floor: f64) -> Vec<f64> {
        let cutoff = relative_floor * self.0[0];
        self.0.iter().copied().filter(|&p| p > cutoff).collect()
    }
}

impl TryFrom<Vec<f64>> for EntanglementSpectrum {
    type Error = Error;
    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<EntanglementSpectrum> for Vec<f64> {
    fn from(s: EntanglementSpectrum) -> Self {
        s.0
    }
}

/// Gaps and adjacent-gap ratios of one descending level sequence.
///
/// With levels `p_1 >= p_2 >= ...`, gaps are `δ_k = p_k - p_{k+1}`, ratios
/// `r_k = δ_{k-1} / δ_k` and modified ratios
/// `r̃_k = min(δ_k, δ_{k+1}) / max(δ_k, δ_{k+1})`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GapRatioSeries {
    pub gaps: Vec<f64>,
    pub ratios: Vec<f64>,
    pub modified_ratios: Vec<f64>,
    /// Ratio entries skipped because a gap was an exact tie.
    pub excluded: usize,
    /// Fewer than three levels survived the floor; no ratios exist.
    pub insufficient: bool,
}

impl GapRatioSeries {
    /// Computes the series for levels sorted in descending order.
    pub fn from_levels(levels: &[f64]) -> Self {
        if levels.len() < 3 {
            return Self { insufficient: true, ..Self::default() };
        }
        Self::from_gaps(levels.windows(2).map(|w| w[0] - w[1]).collect())
    }

    /// Computes ratios directly from a gap sequence `δ_1, δ_2, ...`.
    pub fn from_gaps(gaps: Vec<f64>) -> Self {
        if gaps.len() < 2 {
            return Self { gaps, insufficient: true, ..Self::default() };
        }
        let tie = |g: f64| g.abs() <= TIE_TOL;
        let mut ratios = Vec::with_capacity(gaps.len());
        let mut modified = Vec::with_capacity(gaps.len());
        let mut excluded = 0;
        for w in gaps.windows(2) {
            let (a, b) = (w[0], w[1]);
            if tie(a) || tie(b) {
                excluded += 1;
                continue;
            }
            ratios.push(a / b);
            modified.push(if a < b { a / b } else { b / a });
        }
        Self { gaps, ratios, modified_ratios: modified, excluded, insufficient: false }
    }

    pub fn is_empty(&self) -> bool {
        self.modified_ratios.is_empty()
    }

    /// Mean of the modified ratios in this series.
    pub fn mean_r_tilde(&self) -> Option<f64> {
        (!self.modified_ratios.is_empty())
            .then(|| self.modified_ratios.iter().sum::<f64>() / self.modified_ratios.len() as f64)
    }
}

/// Gap ratios of `spectrum`, keeping only values strictly above `floor`
/// (absolute). A floor of zero drops only exact zeros.
pub fn gap_ratios(spectrum: &EntanglementSpectrum, floor: f64) -> Result<GapRatioSeries> {
    if !(floor >= 0.0) {
        return Err(Error::InvalidArgument(format!("floor must be >= 0, got {floor}")));
    }
    let kept: Vec<f64> = spectrum.values().iter().copied().filter(|&p| p > floor).collect();
    Ok(GapRatioSeries::from_levels(&kept))
}

/// Pooled mean of every `r̃_k` across all series.
pub fn mean_r_tilde<'a, I>(series: I) -> Result<f64>
where
    I: IntoIterator<Item = &'a GapRatioSeries>,
{
    let (sum, count) = series
        .into_iter()
        .flat_map(|s| s.modified_ratios.iter())
        .fold((0.0, 0usize), |(s, n), &r| (s + r, n + 1));
    if count == 0 {
        return Err(Error::Empty("no defined modified ratios".into()));
    }
    Ok(sum / count as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn equal_gaps_give_unit_ratios() {
        let s = EntanglementSpectrum::new(vec![0.4, 0.3, 0.2, 0.1]).unwrap();
        let g = gap_ratios(&s, 0.0).unwrap();
        assert_eq!(g.gaps.len(), 3);
        for gap in &g.gaps {
            assert!((gap - 0.1).abs() < 1e-15);
        }
        for r in &g.modified_ratios {
            assert!((r - 1.0).abs() < 1e-12);
        }
        assert!((mean_r_tilde([&g]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hand_computed_series() {
        // gaps (0.2, 0.15, 0.1): r̃ = (0.15/0.2, 0.1/0.15) = (0.75, 2/3)
        let s = EntanglementSpectrum::new(vec![0.5, 0.3, 0.15, 0.05]).unwrap();
        let g = gap_ratios(&s, 0.0).unwrap();
        let expect_gaps = [0.2, 0.15, 0.1];
        for (a, b) in g.gaps.iter().zip(expect_gaps) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!((g.modified_ratios[0] - 0.75).abs() < 1e-12);
        assert!((g.modified_ratios[1] - 2.0 / 3.0).abs() < 1e-12);
        assert!((g.ratios[0] - 0.2 / 0.15).abs() < 1e-12);
        let mean = mean_r_tilde([&g]).unwrap();
        assert!((mean - 0.708_333_333_333_333_3).abs() < 1e-12);
    }

    #[test]
    fn product_state_spectrum_is_flagged() {
        let s = EntanglementSpectrum::new(vec![1.0]).unwrap();
        let g = gap_ratios(&s, 0.0).unwrap();
        assert!(g.insufficient);
        assert!(g.is_empty());
        assert!(matches!(mean_r_tilde([&g]), Err(Error::Empty(_))));
    }

    #[test]
    fn ties_are_skipped_and_counted() {
        // levels 0.4, 0.2, 0.2, 0.1, 0.1 -> gaps 0.2, 0, 0.1, 0
        let s = EntanglementSpectrum::new(vec![0.4, 0.2, 0.2, 0.1, 0.1]).unwrap();
        let g = gap_ratios(&s, 0.0).unwrap();
        assert_eq!(g.excluded, 3);
        assert!(g.modified_ratios.is_empty());
    }

    #[test]
    fn floor_drops_small_values() {
        let s = EntanglementSpectrum::new(vec![0.5, 0.3, 0.15, 0.05, 0.0]).unwrap();
        assert_eq!(gap_ratios(&s, 0.0).unwrap().gaps.len(), 3);
        assert_eq!(gap_ratios(&s, 0.1).unwrap().gaps.len(), 2);
        assert!(gap_ratios(&s, -1.0).is_err());
    }

    #[test]
    fn spectrum_validation() {
        assert!(EntanglementSpectrum::new(vec![0.3, 0.7]).is_err());
        assert!(EntanglementSpectrum::new(vec![0.7, 0.2]).is_err());
        assert!(EntanglementSpectrum::new(vec![1.1, -0.1]).is_err());
        assert!(EntanglementSpectrum::new(vec![]).is_err());
        let s = EntanglementSpectrum::from_weights(vec![1.0, 3.0, 0.0]).unwrap();
        assert_eq!(s.values(), &[0.75, 0.25, 0.0]);
    }

    proptest! {
        #[test]
        fn modified_ratios_in_unit_interval_and_match_r(gaps in prop::collection::vec(1e-6f64..1.0, 2..40)) {
            let mut levels = vec![0.0];
            for g in gaps.iter().rev() {
                levels.push(levels.last().unwrap() + g);
            }
            levels.reverse();
            let s = GapRatioSeries::from_levels(&levels);
            prop_assert_eq!(s.modified_ratios.len(), gaps.len() - 1);
            for (rt, r) in s.modified_ratios.iter().zip(&s.ratios) {
                prop_assert!((0.0..=1.0).contains(rt));
                prop_assert!((rt - r.min(1.0 / r)).abs() <= 1e-15);
            }
        }

        #[test]
        fn ratios_are_scale_invariant(gaps in prop::collection::vec(1e-3f64..1.0, 2..30), c in 1e-3f64..1e3) {
            let a = GapRatioSeries::from_gaps(gaps.clone());
            let b = GapRatioSeries::from_gaps(gaps.iter().map(|g| g * c).collect());
            for (x, y) in a.modified_ratios.iter().zip(&b.modified_ratios) {
                prop_assert!((x - y).abs() <= 1e-15);
            }
            for (x, y) in a.ratios.iter().zip(&b.ratios) {
                prop_assert!((x - y).abs() <= 1e-15 * x.max(1.0));
            }
        }
    }
}
