//! Parallel execution of an experiment with ordered, streamed output.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::config::{ExperimentConfig, DEFAULT_MAX_QUBITS};
use crate::error::{HarnessError, Result};
use crate::experiments::{experiment, Report};
use crate::records::{summarize, write_summary_csv, RunRecord, SummaryRow};
use crate::simulate::{simulate, GroupSpec, Measurement};

#[derive(Clone, Debug)]
pub struct RunOptions {
    /// Worker threads; `None` uses rayon's default.
    pub threads: Option<usize>,
    /// Output directory; `None` keeps everything in memory.
    pub out_dir: Option<PathBuf>,
    pub max_qubits: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { threads: None, out_dir: None, max_qubits: DEFAULT_MAX_QUBITS }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentOutput {
    pub records: Vec<RunRecord>,
    pub summary: Vec<SummaryRow>,
    pub report: Report,
}

/// Jobs per ordered write batch.
const CHUNK: usize = 64;

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| HarnessError::io(path, e))
}

fn csv_text<T: serde::Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| HarnessError::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Runs every group of `cfg` and writes records, summary and report tables.
///
/// Each job derives its seed from the master seed and its own coordinates, so
/// the output does not depend on the thread count.
pub fn run_experiment(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<ExperimentOutput> {
    cfg.validate(opts.max_qubits)?;
    let exp = experiment(cfg.experiment);
    let groups = exp.groups(cfg)?;
    let hash = cfg.hash();
    let jobs: Vec<(&GroupSpec, Measurement, usize)> = groups
        .iter()
        .flat_map(|g| {
            let meas = Measurement {
                tail_window: cfg.tail_window,
                floor: cfg.floor,
                cut: cfg.cut_for(g.n),
                alphas: cfg.alphas.clone(),
                config_hash: hash.clone(),
            };
            (0..g.num_circuits).map(move |i| (g, meas.clone(), i))
        })
        .collect();

    let mut sink = match &opts.out_dir {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
            let canonical = serde_json::to_string_pretty(cfg)?;
            write_file(&dir.join("config.json"), &canonical)?;
            let path = dir.join("records.jsonl");
            Some((BufWriter::new(File::create(&path).map_err(|e| HarnessError::io(&path, e))?), path))
        }
        None => None,
    };

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = opts.threads {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| HarnessError::Config(e.to_string()))?;

    let mut records = Vec::new();
    for chunk in jobs.chunks(CHUNK) {
        let batch: Vec<Vec<RunRecord>> = pool.install(|| {
            chunk.par_iter().map(|(g, meas, i)| simulate(g, meas, cfg.master_seed, *i)).collect::<Result<_>>()
        })?;
        for rec in batch.into_iter().flatten() {
            if let Some((w, path)) = sink.as_mut() {
                serde_json::to_writer(&mut *w, &rec)?;
                w.write_all(b"\n").map_err(|e| HarnessError::io(&*path, e))?;
            }
            records.push(rec);
        }
    }
    if let Some((mut w, path)) = sink {
        w.flush().map_err(|e| HarnessError::io(&path, e))?;
    }

    let summary = summarize(&records)?;
    let report = exp.report(cfg, &records, &summary)?;
    if let Some(dir) = &opts.out_dir {
        write_outputs(dir, &summary, &report)?;
    }
    Ok(ExperimentOutput { records, summary, report })
}

fn write_outputs(dir: &Path, summary: &[SummaryRow], report: &Report) -> Result<()> {
    let path = dir.join("summary.csv");
    write_summary_csv(summary, File::create(&path).map_err(|e| HarnessError::io(&path, e))?)?;
    if !report.kl.is_empty() {
        write_file(&dir.join("kl.csv"), &csv_text(&report.kl)?)?;
    }
    if !report.weights.is_empty() {
        write_file(&dir.join("weights.csv"), &csv_text(&report.weights)?)?;
    }
    if !report.entropy.is_empty() {
        write_file(&dir.join("entropy.csv"), &csv_text(&report.entropy)?)?;
    }
    for h in &report.histograms {
        write_file(&dir.join(format!("{}.csv", h.file_stem())), &h.distribution.to_csv())?;
    }
    Ok(())
}

/// Reads a `records.jsonl` file back.
pub fn read_records(path: &Path) -> Result<Vec<RunRecord>> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    text.lines().filter(|l| !l.trim().is_empty()).map(|l| serde_json::from_str(l).map_err(Into::into)).collect()
}
