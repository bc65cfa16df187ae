//! Input state families.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::haar_state;
use crate::statevector::{parse_bits, Statevector};

/// Which input state a circuit starts from.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum InputSpec {
    ComputationalBasis { bits: String },
    /// `R_y(θ_i)|0>` on every qubit with independent `θ_i ~ U[0, 2π)`.
    RandomRealProduct,
    /// Consecutive blocks of `k` qubits, each an independent Haar state.
    HaarBlocks { k: usize },
}

impl Default for InputSpec {
    fn default() -> Self {
        Self::RandomRealProduct
    }
}

impl InputSpec {
    /// Short label used in summaries.
    pub fn label(&self) -> String {
        match self {
            Self::ComputationalBasis { bits } => format!("basis:{bits}"),
            Self::RandomRealProduct => "product".into(),
            Self::HaarBlocks { k } => format!("haar_blocks:{k}"),
        }
    }

    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        match self {
            Self::ComputationalBasis { bits } => {
                if parse_bits(bits)?.len() != num_qubits {
                    return Err(Error::Config(format!("bit string {bits:?} does not have {num_qubits} bits")));
                }
            }
            Self::RandomRealProduct => {}
            Self::HaarBlocks { k } => {
                if !(1..=4).contains(k) {
                    return Err(Error::Config(format!("block size must be in 1..=4, got {k}")));
                }
                if num_qubits % k != 0 {
                    return Err(Error::Config(format!("block size {k} does not divide {num_qubits}")));
                }
            }
        }
        if num_qubits == 0 || num_qubits > 30 {
            return Err(Error::Config(format!("unsupported num_qubits {num_qubits}")));
        }
        Ok(())
    }
}

/// Tensor product of the given factors, first factor on the most significant qubits.
fn tensor(factors: &[Vec<C64>]) -> Vec<C64> {
    factors.iter().fold(vec![C64::new(1.0, 0.0)], |acc, f| {
        let mut out = Vec::with_capacity(acc.len() * f.len());
        for a in &acc {
            out.extend(f.iter().map(|b| a * b));
        }
        out
    })
}

/// Prepares the input state described by `spec`.
pub fn prepare<R: Rng + ?Sized>(spec: &InputSpec, num_qubits: usize, rng: &mut R) -> Result<Statevector> {
    spec.validate(num_qubits)?;
    match spec {
        InputSpec::ComputationalBasis { bits } => Statevector::basis_state(num_qubits, bits),
        InputSpec::RandomRealProduct => {
            let factors: Vec<Vec<C64>> = (0..num_qubits)
                .map(|_| {
                    let theta = rng.random::<f64>() * TAU;
                    let (s, c) = (theta / 2.0).sin_cos();
                    vec![C64::new(c, 0.0), C64::new(s, 0.0)]
                })
                .collect();
            Statevector::from_amplitudes(tensor(&factors))
        }
        InputSpec::HaarBlocks { k } => {
            let factors: Vec<Vec<C64>> = (0..num_qubits / k).map(|_| haar_state(1 << k, rng)).collect();
            Statevector::from_amplitudes(tensor(&factors))
        }
    }
}
