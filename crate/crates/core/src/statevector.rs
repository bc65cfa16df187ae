//! Dense statevector with exact one- and two-qubit gate application.
//!
//! Qubits are numbered from 1. Amplitude indices are big-endian bit strings:
//! qubit 1 is the most significant bit, qubit N the least significant.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, ONE, ZERO};
use crate::spectrum::EntanglementSpectrum;

/// Tolerance for the unitarity check on gate matrices.
pub const UNITARITY_TOL: f64 = 1e-12;

/// A 2x2 or 4x4 unitary placed on one qubit or an adjacent pair.
///
/// For arity 2 the gate acts on `(site, site + 1)` with `site` as the more
/// significant qubit of the local basis `|00>, |01>, |10>, |11>`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalUnitary {
    site: usize,
    matrix: CMatrix,
}

impl LocalUnitary {
    /// Wraps `matrix` at `site`, checking it is unitary to [`UNITARITY_TOL`].
    pub fn new(site: usize, matrix: CMatrix) -> Result<Self> {
        Self::with_tolerance(site, matrix, UNITARITY_TOL)
    }

    pub fn with_tolerance(site: usize, matrix: CMatrix, tol: f64) -> Result<Self> {
        if matrix.dim() != 2 && matrix.dim() != 4 {
            return Err(Error::Config(format!("gate matrix must be 2x2 or 4x4, got {}x{}", matrix.dim(), matrix.dim())));
        }
        if site == 0 {
            return Err(Error::SiteOutOfRange { site, arity: matrix.dim() / 2, num_qubits: 0 });
        }
        let deviation = matrix.unitarity_deviation();
        if !(deviation <= tol) {
            return Err(Error::NonUnitary { deviation });
        }
        Ok(Self { site, matrix })
    }

    /// Number of qubits acted on (1 or 2).
    pub fn arity(&self) -> usize {
        if self.matrix.dim() == 2 {
            1
        } else {
            2
        }
    }

    pub fn site(&self) -> usize {
        self.site
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Qubits touched by the gate.
    pub fn qubits(&self) -> std::ops::Range<usize> {
        self.site..self.site + self.arity()
    }

    pub fn adjoint(&self) -> Self {
        Self { site: self.site, matrix: self.matrix.adjoint() }
    }

    /// Same matrix moved to another site.
    pub fn at(&self, site: usize) -> Self {
        Self { site, matrix: self.matrix.clone() }
    }
}

/// Pure state of `num_qubits` qubits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Statevector {
    num_qubits: usize,
    amplitudes: Vec<C64>,
}

/// Parses a string of `0`/`1` characters.
pub fn parse_bits(bits: &str) -> Result<Vec<bool>> {
    bits.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Config(format!("invalid bit character {other:?}"))),
        })
        .collect()
}

impl Statevector {
    /// Computational basis state `|bits>`.
    pub fn basis_state(num_qubits: usize, bits: &str) -> Result<Self> {
        let parsed = parse_bits(bits)?;
        if parsed.len() != num_qubits {
            return Err(Error::Config(format!(
                "bit string has length {} but num_qubits = {num_qubits}",
                parsed.len()
            )));
        }
        if num_qubits == 0 || num_qubits >= usize::BITS as usize {
            return Err(Error::Config(format!("unsupported num_qubits {num_qubits}")));
        }
        let index = parsed.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        let mut amplitudes = vec![ZERO; 1 << num_qubits];
        amplitudes[index] = ONE;
        Ok(Self { num_qubits, amplitudes })
    }

    /// `|0...0>`.
    pub fn zero_state(num_qubits: usize) -> Self {
        let mut amplitudes = vec![ZERO; 1 << num_qubits];
        amplitudes[0] = ONE;
        Self { num_qubits, amplitudes }
    }

    /// Wraps raw amplitudes; the length must be a power of two and the vector
    /// must be normalized to 1e-10.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Config(format!("amplitude count {len} is not a power of two >= 2")));
        }
        let state = Self { num_qubits: len.trailing_zeros() as usize, amplitudes };
        let norm = state.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Config(format!("state norm {norm} is not 1")));
        }
        Ok(state)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Applies `gate` in place.
    pub fn apply(&mut self, gate: &LocalUnitary) -> Result<()> {
        let n = self.num_qubits;
        let arity = gate.arity();
        if gate.site == 0 || gate.site + arity - 1 > n {
            return Err(Error::SiteOutOfRange { site: gate.site, arity, num_qubits: n });
        }
        let m = gate.matrix.as_slice();
        let amps = &mut self.amplitudes;
        let dim = amps.len();
        if arity == 1 {
            let stride = 1usize << (n - gate.site);
            let (m00, m01, m10, m11) = (m[0], m[1], m[2], m[3]);
            for block in (0..dim).step_by(2 * stride) {
                for i0 in block..block + stride {
                    let i1 = i0 + stride;
                    let (a0, a1) = (amps[i0], amps[i1]);
                    amps[i0] = m00 * a0 + m01 * a1;
                    amps[i1] = m10 * a0 + m11 * a1;
                }
            }
        } else {
            // stride of the less significant qubit (site + 1)
            let stride = 1usize << (n - gate.site - 1);
            for block in (0..dim).step_by(4 * stride) {
                for i00 in block..block + stride {
                    let idx = [i00, i00 + stride, i00 + 2 * stride, i00 + 3 * stride];
                    let a = [amps[idx[0]], amps[idx[1]], amps[idx[2]], amps[idx[3]]];
                    for (r, &i) in idx.iter().enumerate() {
                        let row = &m[4 * r..4 * r + 4];
                        amps[i] = row[0] * a[0] + row[1] * a[1] + row[2] * a[2] + row[3] * a[3];
                    }
                }
            }
        }
        Ok(())
    }

    /// Returns `(I ⊗ U ⊗ I) |self>`.
    pub fn apply_local(&self, gate: &LocalUnitary) -> Result<Self> {
        let mut out = self.clone();
        out.apply(gate)?;
        Ok(out)
    }

    /// `<Z_k>` for qubit `k` (1-based).
    pub fn expectation_z(&self, k: usize) -> Result<f64> {
        if k == 0 || k > self.num_qubits {
            return Err(Error::SiteOutOfRange { site: k, arity: 1, num_qubits: self.num_qubits });
        }
        let bit = self.num_qubits - k;
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, z)| if (i >> bit) & 1 == 0 { z.norm_sqr() } else { -z.norm_sqr() })
            .sum())
    }

    /// The equal bipartition cut `N / 2`.
    pub fn half_cut(&self) -> usize {
        self.num_qubits / 2
    }

    /// Eigenvalues of the reduced density matrix of qubits `1..=cut`,
    /// obtained as squared singular values of the `2^cut x 2^(N-cut)`
    /// reshaped amplitude matrix.
    pub fn schmidt_spectrum(&self, cut: usize) -> Result<EntanglementSpectrum> {
        let n = self.num_qubits;
        if cut == 0 || cut >= n {
            return Err(Error::CutOutOfRange { cut, num_qubits: n });
        }
        let rows = 1usize << cut;
        let cols = 1usize << (n - cut);
        let view = faer::MatRef::from_row_major_slice(&self.amplitudes, rows, cols);
        let singular = view
            .singular_values()
            .map_err(|e| Error::InvalidSpectrum(format!("SVD failed to converge: {e:?}")))?;
        let mut values: Vec<f64> = singular.iter().map(|s| (s * s).max(0.0)).collect();
        values.sort_by(|a, b| b.total_cmp(a));
        EntanglementSpectrum::new(values)
    }
}

/// Functional form of [`Statevector::basis_state`].
pub fn basis_state(num_qubits: usize, bits: &str) -> Result<Statevector> {
    Statevector::basis_state(num_qubits, bits)
}

/// Functional form of [`Statevector::apply_local`].
pub fn apply_local(state: &Statevector, gate: &LocalUnitary) -> Result<Statevector> {
    state.apply_local(gate)
}

/// Functional form of [`Statevector::schmidt_spectrum`].
pub fn schmidt_spectrum(state: &Statevector, cut: usize) -> Result<EntanglementSpectrum> {
    state.schmidt_spectrum(cut)
}
