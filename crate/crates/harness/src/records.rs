//! Per-circuit records and the summaries recomputed from them.

use std::collections::BTreeMap;
use std::time::Duration;

use entspec_core::stats::{mean_std, page_entropy_qubits};
use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Outcome of one circuit realization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub config_hash: String,
    pub circuit_index: usize,
    pub seed: u64,
    pub n: usize,
    pub family: String,
    pub num_swaps: usize,
    pub input: String,
    pub conjugation: String,
    pub cut: usize,
    /// Mean `r̃` of the spectrum after each post-injection layer; `null` when
    /// the spectrum has no defined ratio.
    pub r_tilde_trace: Vec<Option<f64>>,
    /// Mean of the defined entries in the final `tail_window` trace entries.
    pub r_tilde_inf: Option<f64>,
    pub spectrum: Vec<f64>,
    pub entropy: f64,
    pub renyi2: f64,
    pub trace_powers: BTreeMap<String, f64>,
    /// Ratios `r_k` pooled over the tail window; kept only when requested.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tail_ratios: Vec<f64>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl RunRecord {
    pub fn group_key(&self) -> GroupKey {
        GroupKey {
            n: self.n,
            family: self.family.clone(),
            num_swaps: self.num_swaps,
            input: self.input.clone(),
            conjugation: self.conjugation.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupKey {
    pub n: usize,
    pub family: String,
    pub num_swaps: usize,
    pub input: String,
    pub conjugation: String,
}

/// One row of the summary CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub n: usize,
    pub family: String,
    pub num_swaps: usize,
    pub input: String,
    pub conjugation: String,
    pub mean_r_tilde_inf: f64,
    pub std_r_tilde_inf: f64,
    pub mean_entropy: f64,
    pub page_deviation: f64,
    pub n_samples: usize,
}

impl SummaryRow {
    /// Standard error of the mean of `r̃_∞`.
    pub fn sem(&self) -> f64 {
        self.std_r_tilde_inf / (self.n_samples.max(1) as f64).sqrt()
    }
}

/// Groups records by their key, in order of first appearance.
pub fn summarize(records: &[RunRecord]) -> Result<Vec<SummaryRow>> {
    let mut order: Vec<GroupKey> = Vec::new();
    let mut groups: BTreeMap<GroupKey, Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        let key = r.group_key();
        if !groups.contains_key(&key) {
            order.push(key.clone());
        }
        groups.entry(key).or_default().push(r);
    }
    let mut rows = Vec::with_capacity(order.len());
    for key in order {
        let rs = &groups[&key];
        let r_inf: Vec<f64> = rs.iter().filter_map(|r| r.r_tilde_inf).collect();
        let (mean_r, std_r) = mean_std(&r_inf).unwrap_or((f64::NAN, f64::NAN));
        let entropies: Vec<f64> = rs.iter().map(|r| r.entropy).collect();
        let (mean_s, _) = mean_std(&entropies).expect("groups are nonempty");
        let page = page_entropy_qubits(key.n, rs[0].cut)?;
        rows.push(SummaryRow {
            n: key.n,
            family: key.family,
            num_swaps: key.num_swaps,
            input: key.input,
            conjugation: key.conjugation,
            mean_r_tilde_inf: mean_r,
            std_r_tilde_inf: std_r,
            mean_entropy: mean_s,
            page_deviation: page - mean_s,
            n_samples: r_inf.len(),
        });
    }
    Ok(rows)
}

pub fn write_summary_csv<W: std::io::Write>(rows: &[SummaryRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| crate::error::HarnessError::io("summary", e))?;
    Ok(())
}

pub fn read_summary_csv<R: std::io::Read>(input: R) -> Result<Vec<SummaryRow>> {
    csv::Reader::from_reader(input).deserialize().map(|r| r.map_err(Into::into)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(n: usize, swaps: usize, r: Option<f64>, s: f64) -> RunRecord {
        RunRecord {
            config_hash: "h".into(),
            circuit_index: 0,
            seed: 0,
            n,
            family: "matchgate".into(),
            num_swaps: swaps,
            input: "product".into(),
            conjugation: "None".into(),
            cut: n / 2,
            r_tilde_trace: vec![r],
            r_tilde_inf: r,
            spectrum: vec![1.0],
            entropy: s,
            renyi2: 0.0,
            trace_powers: BTreeMap::new(),
            tail_ratios: vec![],
            wall_time: Duration::ZERO,
        }
    }

    #[test]
    fn summary_groups_and_statistics() {
        let recs = vec![record(4, 1, Some(0.4), 1.0), record(4, 0, Some(0.5), 0.5), record(4, 1, Some(0.6), 1.2)];
        let rows = summarize(&recs).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].num_swaps, 1);
        assert!((rows[0].mean_r_tilde_inf - 0.5).abs() < 1e-12);
        assert!((rows[0].std_r_tilde_inf - 0.02f64.sqrt()).abs() < 1e-12);
        assert!((rows[0].mean_entropy - 1.1).abs() < 1e-12);
        let page = page_entropy_qubits(4, 2).unwrap();
        assert!((rows[0].page_deviation - (page - 1.1)).abs() < 1e-12);
        assert_eq!(rows[1].n_samples, 1);
    }

    #[test]
    fn csv_round_trip() {
        let rows = summarize(&[record(6, 1, Some(0.42), 1.0)]).unwrap();
        let mut buf = Vec::new();
        write_summary_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("n,family,num_swaps,input,conjugation,mean_r_tilde_inf,std_r_tilde_inf,mean_entropy,page_deviation,n_samples\n"));
        assert_eq!(read_summary_csv(&buf[..]).unwrap(), rows);
    }

    #[test]
    fn jsonl_shape() {
        let mut r = record(4, 1, Some(0.25), 0.5);
        r.wall_time = Duration::from_secs(3);
        let text = serde_json::to_string(&r).unwrap();
        assert!(!text.contains("wall_time"));
        assert!(!text.contains("tail_ratios"));
        let back: RunRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back.r_tilde_inf, Some(0.25));
    }
}
