//! Cross-validation of the statevector simulator against the free-fermion
//! covariance evolution.

use entspec_core::fermion::{matchgate_rotation, CovarianceMatrix};
use entspec_core::{brickwork, swap_injection, BrickworkKind, Error, Statevector};
use rand::Rng;

use crate::error::Result;
use crate::seed::rng_from_seed;

#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    pub circuits: usize,
    /// Largest `|⟨Z_k⟩_cov − ⟨Z_k⟩_sv|` over all circuits and sites.
    pub max_deviation: f64,
    /// Whether the injected SWAP was rejected as non-Gaussian.
    pub swap_rejected: bool,
}

impl OracleReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.max_deviation <= tol && self.swap_rejected
    }
}

/// Random matchgate brickworks on random basis inputs, `N` cycling through
/// 2, 4, ..., `max_qubits`.
pub fn run_oracle(seed: u64, circuits: usize, max_qubits: usize) -> Result<OracleReport> {
    let mut rng = rng_from_seed(seed);
    let sizes: Vec<usize> = (2..=max_qubits).step_by(2).collect();
    let mut max_deviation = 0.0f64;
    for i in 0..circuits {
        let n = sizes[i % sizes.len()];
        let layers = rng.random_range(1..=3 * n);
        let circuit = brickwork(n, layers, BrickworkKind::Matchgate, &mut rng)?;
        let bits: Vec<bool> = (0..n).map(|_| rng.random()).collect();
        let label: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        let mut psi = Statevector::basis_state(n, &label)?;
        circuit.apply(&mut psi)?;
        let mut cov = CovarianceMatrix::from_bits(&bits);
        cov.evolve(&circuit)?;
        for k in 1..=n {
            max_deviation = max_deviation.max((cov.z_expectation(k)? - psi.expectation_z(k)?).abs());
        }
    }
    let n = *sizes.last().unwrap_or(&2);
    let swap = swap_injection(n, 1)?;
    let gate = swap.gates().next().expect("one SWAP gate");
    let swap_rejected = matches!(matchgate_rotation(gate.matrix(), gate.site(), n), Err(Error::NonGaussian { .. }));
    Ok(OracleReport { circuits, max_deviation, swap_rejected })
}
