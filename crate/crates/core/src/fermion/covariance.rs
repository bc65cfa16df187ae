//! Majorana covariance matrices of fermionic Gaussian states.
//!
//! Convention: `M_{jk} = -i <c_j c_k>` for `j != k`, `M_{jj} = 0`. The vacuum
//! `|0>` has blocks `[[0, 1], [-1, 0]]` and `<Z_k> = M_{2k-1, 2k}`.

use faer::Mat;

use super::pauli::{pauli_decompose, Pauli, PauliString};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Threshold on `max |M M^T - I|` above which the matrix is re-orthogonalized.
pub const DRIFT_TOL: f64 = 1e-8;
/// Largest admissible weight outside the single-Majorana span.
pub const LEAKAGE_TOL: f64 = 1e-10;

/// `U^dag c_j U = Σ_k R_{jk} c_k`, stored as a 4x4 block on the Majoranas of
/// the pair `(site, site + 1)`; identity elsewhere.
#[derive(Clone, Debug, PartialEq)]
pub struct MajoranaRotation {
    num_qubits: usize,
    site: usize,
    block: [[f64; 4]; 4],
}

impl MajoranaRotation {
    pub fn site(&self) -> usize {
        self.site
    }

    pub fn block(&self) -> &[[f64; 4]; 4] {
        &self.block
    }

    /// Zero-based index of the first Majorana the block acts on.
    fn offset(&self) -> usize {
        2 * (self.site - 1)
    }

    /// The full `2N x 2N` matrix.
    pub fn dense(&self) -> Mat<f64> {
        let o = self.offset();
        let mut r = Mat::<f64>::identity(2 * self.num_qubits, 2 * self.num_qubits);
        for a in 0..4 {
            for b in 0..4 {
                r[(o + a, o + b)] = self.block[a][b];
            }
        }
        r
    }
}

/// Local images of the four Majoranas on a pair: `XI, YI, ZX, ZY`. The
/// Jordan-Wigner string on earlier qubits is common to all four and commutes
/// with the gate.
const LOCAL_MAJORANAS: [[Pauli; 2]; 4] =
    [[Pauli::X, Pauli::I], [Pauli::Y, Pauli::I], [Pauli::Z, Pauli::X], [Pauli::Z, Pauli::Y]];

/// Majorana rotation of a two-qubit gate `u` on `(site, site + 1)`.
pub fn matchgate_rotation(u: &CMatrix, site: usize, num_qubits: usize) -> Result<MajoranaRotation> {
    if u.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: u.dim() });
    }
    if site == 0 || site + 1 > num_qubits {
        return Err(Error::SiteOutOfRange { site, arity: 2, num_qubits });
    }
    let mut block = [[0.0; 4]; 4];
    for (j, local) in LOCAL_MAJORANAS.iter().enumerate() {
        let c = PauliString::new(0, local.to_vec()).to_matrix();
        let conj = &(&u.adjoint() * &c) * u;
        let mut leakage = 0.0;
        for (letters, coeff) in pauli_decompose(&conj, 0.0) {
            match LOCAL_MAJORANAS.iter().position(|m| m[..] == letters[..]) {
                Some(k) => {
                    block[j][k] = coeff.re;
                    leakage += coeff.im * coeff.im;
                }
                None => leakage += coeff.norm_sqr(),
            }
        }
        if leakage > LEAKAGE_TOL {
            return Err(Error::NonGaussian { index: 2 * (site - 1) + j + 1, leakage });
        }
    }
    Ok(MajoranaRotation { num_qubits, site, block })
}

/// Nearest orthogonal matrix (polar factor) of a square real matrix.
pub fn orthogonal_polar(m: &Mat<f64>) -> Mat<f64> {
    let svd = m.svd().expect("SVD of a finite matrix converges");
    svd.U() * svd.V().transpose()
}

/// Covariance matrix of a pure fermionic Gaussian state on `N` modes.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceMatrix {
    num_qubits: usize,
    m: Mat<f64>,
}

impl CovarianceMatrix {
    pub fn vacuum(num_qubits: usize) -> Self {
        Self::from_bits(&vec![false; num_qubits])
    }

    /// Computational basis state; qubit `k` set to `bits[k - 1]`.
    pub fn from_bits(bits: &[bool]) -> Self {
        let n = bits.len();
        let mut m = Mat::<f64>::zeros(2 * n, 2 * n);
        for (k, &b) in bits.iter().enumerate() {
            let s = if b { -1.0 } else { 1.0 };
            m[(2 * k, 2 * k + 1)] = s;
            m[(2 * k + 1, 2 * k)] = -s;
        }
        Self { num_qubits: n, m }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn matrix(&self) -> &Mat<f64> {
        &self.m
    }

    /// `M <- R M R^T`, touching only the four affected rows and columns.
    pub fn apply(&mut self, r: &MajoranaRotation) -> Result<()> {
        if r.num_qubits != self.num_qubits {
            return Err(Error::DimensionMismatch { expected: self.num_qubits, got: r.num_qubits });
        }
        let dim = 2 * self.num_qubits;
        let o = r.offset();
        let b = &r.block;
        // rows
        for col in 0..dim {
            let v: [f64; 4] = std::array::from_fn(|a| self.m[(o + a, col)]);
            for a in 0..4 {
                self.m[(o + a, col)] = (0..4).map(|k| b[a][k] * v[k]).sum();
            }
        }
        // columns
        for row in 0..dim {
            let v: [f64; 4] = std::array::from_fn(|a| self.m[(row, o + a)]);
            for a in 0..4 {
                self.m[(row, o + a)] = (0..4).map(|k| b[a][k] * v[k]).sum();
            }
        }
        Ok(())
    }

    /// Applies every gate of a matchgate circuit, re-orthogonalizing whenever
    /// the drift exceeds [`DRIFT_TOL`].
    pub fn evolve(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch { expected: self.num_qubits, got: circuit.num_qubits() });
        }
        for (i, gate) in circuit.gates().enumerate() {
            if gate.arity() != 2 {
                return Err(Error::Config("covariance evolution needs two-qubit gates".into()));
            }
            self.apply(&matchgate_rotation(gate.matrix(), gate.site(), self.num_qubits)?)?;
            if i % 64 == 63 {
                self.stabilize();
            }
        }
        self.stabilize();
        Ok(())
    }

    /// `max |M M^T - I|`.
    pub fn drift(&self) -> f64 {
        let p = &self.m * self.m.transpose();
        let mut worst = 0.0f64;
        for i in 0..p.nrows() {
            for j in 0..p.ncols() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((p[(i, j)] - target).abs());
            }
        }
        worst
    }

    /// `max |M + M^T|`.
    pub fn antisymmetry_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.m.nrows() {
            for j in 0..self.m.ncols() {
                worst = worst.max((self.m[(i, j)] + self.m[(j, i)]).abs());
            }
        }
        worst
    }

    /// Replaces `M` by its antisymmetrized polar factor when drift exceeds
    /// [`DRIFT_TOL`]. Returns whether a correction was applied.
    pub fn stabilize(&mut self) -> bool {
        if self.drift() <= DRIFT_TOL {
            return false;
        }
        let q = orthogonal_polar(&self.m);
        let dim = q.nrows();
        self.m = Mat::from_fn(dim, dim, |i, j| 0.5 * (q[(i, j)] - q[(j, i)]));
        true
    }

    /// `<Z_k>` for qubit `k` (1-based).
    pub fn z_expectation(&self, k: usize) -> Result<f64> {
        if k == 0 || k > self.num_qubits {
            return Err(Error::SiteOutOfRange { site: k, arity: 1, num_qubits: self.num_qubits });
        }
        Ok(self.m[(2 * k - 2, 2 * k - 1)])
    }

    /// Overwrites the matrix; used to inject perturbations in tests.
    pub fn from_matrix(num_qubits: usize, m: Mat<f64>) -> Result<Self> {
        if m.nrows() != 2 * num_qubits || m.ncols() != 2 * num_qubits {
            return Err(Error::DimensionMismatch { expected: 2 * num_qubits, got: m.nrows() });
        }
        Ok(Self { num_qubits, m })
    }
}

