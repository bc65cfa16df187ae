//! Command-line interface. Exit codes: 0 success, 1 usage or configuration
//! error, 2 failed acceptance check.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use entspec_core::fermion::fermionic_weight;
use entspec_core::stats::fit_exponential;
use entspec_core::{conjugation_circuit, Conjugation};

use crate::calibrate::calibrate;
use crate::config::{ExperimentConfig, ExperimentKind, DEFAULT_MAX_QUBITS};
use crate::error::{HarnessError, Result};
use crate::oracle::run_oracle;
use crate::plot::plot_csv;
use crate::records::read_summary_csv;
use crate::runner::{run_experiment, RunOptions};

/// Wigner-Dyson reference the deviation fit is measured from.
pub const WD_TARGET: f64 = 0.603;

#[derive(Debug, Parser)]
#[command(name = "entspec", version, about = "Entanglement-spectrum statistics of brickwork circuits")]
pub struct Cli {
    /// Master seed; overrides the config's `master_seed`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, default_value = "out")]
    pub out_dir: PathBuf,
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_QUBITS)]
    pub max_qubits: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the experiment described by a JSON config.
    Run { config: PathBuf },
    /// Poisson, GUE and Haar-state reference suite.
    Calibrate,
    /// Fit δr = r0·exp(−γN) to each series of a summary CSV.
    Fit {
        summary: PathBuf,
        #[arg(long, default_value_t = WD_TARGET)]
        target: f64,
    },
    /// Render a summary or histogram CSV as SVG.
    Plot { csv: PathBuf },
    /// Covariance-matrix versus statevector cross-check.
    Oracle {
        #[arg(long, default_value_t = 100)]
        circuits: usize,
        #[arg(long, default_value_t = 10)]
        max_n: usize,
    },
    /// Fermionic weight of a conjugation circuit.
    Weight { circuit: Conjugation, n: usize },
}

enum Outcome {
    Ok,
    CheckFailed,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<Outcome> {
    let io = |e| HarnessError::io("<stdout>", e);
    match &cli.command {
        Command::Run { config } => {
            let mut cfg = ExperimentConfig::load(config)?;
            if let Some(s) = cli.seed {
                cfg.master_seed = s;
            }
            if cfg.experiment == ExperimentKind::Calibration {
                return calibration(cfg.master_seed, &cli.out_dir, out);
            }
            let opts = RunOptions { threads: cli.threads, out_dir: Some(cli.out_dir.clone()), max_qubits: cli.max_qubits };
            let result = run_experiment(&cfg, &opts)?;
            for w in &result.report.warnings {
                writeln!(err, "warning: {w}").map_err(io)?;
            }
            writeln!(out, "n,family,num_swaps,input,conjugation,mean_r_tilde_inf,std_r_tilde_inf,page_deviation,n_samples").map_err(io)?;
            for r in &result.summary {
                writeln!(
                    out,
                    "{},{},{},{},{},{:.4},{:.4},{:.4},{}",
                    r.n, r.family, r.num_swaps, r.input, r.conjugation, r.mean_r_tilde_inf, r.std_r_tilde_inf, r.page_deviation, r.n_samples
                )
                .map_err(io)?;
            }
            for k in &result.report.kl {
                writeln!(out, "kl n={} {} s={}: wd={:.5} haar={:?}", k.n, k.family, k.num_swaps, k.kl_wigner_dyson, k.kl_haar).map_err(io)?;
            }
            for w in &result.report.weights {
                writeln!(out, "fermionic weight {} at N={}: {}", w.conjugation, w.n, w.fermionic_weight).map_err(io)?;
            }
            writeln!(out, "wrote {} records to {}", result.records.len(), cli.out_dir.display()).map_err(io)?;
            Ok(Outcome::Ok)
        }
        Command::Calibrate => calibration(cli.seed.unwrap_or(0), &cli.out_dir, out),
        Command::Fit { summary, target } => {
            let rows = read_summary_csv(read(summary)?.as_bytes())?;
            let mut series: BTreeMap<(String, usize, String, String), Vec<(f64, f64)>> = BTreeMap::new();
            for r in rows.iter().filter(|r| r.mean_r_tilde_inf.is_finite()) {
                series
                    .entry((r.family.clone(), r.num_swaps, r.input.clone(), r.conjugation.clone()))
                    .or_default()
                    .push((r.n as f64, target - r.mean_r_tilde_inf));
            }
            writeln!(out, "family,num_swaps,input,conjugation,r0,gamma,residual").map_err(io)?;
            for ((family, swaps, input, conj), pts) in series.into_iter().filter(|(_, p)| p.len() >= 2) {
                match fit_exponential(&pts) {
                    Ok(f) => writeln!(out, "{family},{swaps},{input},{conj},{},{},{}", f.r0, f.gamma, f.residual),
                    Err(e) => writeln!(err, "warning: {family} s={swaps} {input} {conj}: {e}"),
                }
                .map_err(io)?;
            }
            Ok(Outcome::Ok)
        }
        Command::Plot { csv } => {
            let svg = plot_csv(&read(csv)?)?;
            std::fs::create_dir_all(&cli.out_dir).map_err(|e| HarnessError::io(&cli.out_dir, e))?;
            let stem = csv.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "plot".into());
            let path = cli.out_dir.join(format!("{stem}.svg"));
            std::fs::write(&path, svg).map_err(|e| HarnessError::io(&path, e))?;
            writeln!(out, "wrote {}", path.display()).map_err(io)?;
            Ok(Outcome::Ok)
        }
        Command::Oracle { circuits, max_n } => {
            if *max_n < 2 || *max_n > cli.max_qubits {
                return Err(HarnessError::Config(format!("--max-n must lie in 2..={}", cli.max_qubits)));
            }
            let report = run_oracle(cli.seed.unwrap_or(0), *circuits, *max_n)?;
            let ok = report.passed(1e-10);
            writeln!(
                out,
                "{} circuits, max |ΔZ| = {:.3e}, SWAP rejected: {}: {}",
                report.circuits,
                report.max_deviation,
                report.swap_rejected,
                if ok { "PASS" } else { "FAIL" }
            )
            .map_err(io)?;
            Ok(if ok { Outcome::Ok } else { Outcome::CheckFailed })
        }
        Command::Weight { circuit, n } => {
            writeln!(out, "{}", weight(*circuit, *n)?).map_err(io)?;
            Ok(Outcome::Ok)
        }
    }
}

pub fn weight(circuit: Conjugation, n: usize) -> Result<usize> {
    Ok(fermionic_weight(&conjugation_circuit(circuit, n)?)?)
}

fn calibration(seed: u64, dir: &Path, out: &mut dyn Write) -> Result<Outcome> {
    let io = |e| HarnessError::io("<stdout>", e);
    let cal = calibrate(seed)?;
    cal.write(dir)?;
    for c in &cal.checks {
        writeln!(
            out,
            "{}: {:.5} (target {} ± {}): {}",
            c.name,
            c.value,
            c.target,
            c.tolerance,
            if c.passed() { "PASS" } else { "FAIL" }
        )
        .map_err(io)?;
    }
    Ok(if cal.passed() { Outcome::Ok } else { Outcome::CheckFailed })
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    match execute(&cli, out, err) {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::CheckFailed) => 2,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = main_with_args(std::iter::once("entspec").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(&["frobnicate"]).0, 1);
        assert_eq!(run(&["weight", "C4", "8", "--bogus"]).0, 1);
        assert_eq!(run(&["weight", "C9", "8"]).0, 1);
        let (code, _, err) = run(&[]);
        assert_eq!(code, 1);
        assert!(err.contains("Usage"));
    }

    #[test]
    fn missing_config_reports_the_path() {
        let (code, _, err) = run(&["run", "definitely-missing.json"]);
        assert_eq!(code, 1);
        assert!(err.contains("definitely-missing.json"), "{err}");
    }

    #[test]
    fn weight_prints_an_integer() {
        let (code, out, _) = run(&["weight", "C3", "8"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "2");
        assert_eq!(run(&["weight", "C4", "2"]).0, 1);
    }
}
