//! Pauli strings with exact phase tracking.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::gates::standard::{x_matrix, y_matrix, z_matrix};
use crate::linalg::CMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    /// `(x, z)` bits: `X = (1, 0)`, `Z = (0, 1)`, `Y = (1, 1)`.
    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    /// `self · other = i^k · result`, returned as `(k, result)`.
    pub fn mul(self, other: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        let (x1, z1) = self.bits();
        let (x2, z2) = other.bits();
        let result = Pauli::from_bits(x1 ^ x2, z1 ^ z2);
        let k = match (self, other) {
            (X, Y) | (Y, Z) | (Z, X) => 1,
            (Y, X) | (Z, Y) | (X, Z) => 3,
            _ => 0,
        };
        (k, result)
    }

    pub fn matrix(self) -> CMatrix {
        match self {
            Pauli::I => CMatrix::identity(2),
            Pauli::X => x_matrix(),
            Pauli::Y => y_matrix(),
            Pauli::Z => z_matrix(),
        }
    }

    fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// `i^phase · P_1 ⊗ P_2 ⊗ ... ⊗ P_N`, qubit 1 leftmost.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    phase: u8,
    letters: Vec<Pauli>,
}

impl PauliString {
    pub fn new(phase: u8, letters: Vec<Pauli>) -> Self {
        Self { phase: phase % 4, letters }
    }

    pub fn identity(num_qubits: usize) -> Self {
        Self::new(0, vec![Pauli::I; num_qubits])
    }

    /// A single letter on qubit `k` (1-based).
    pub fn single(num_qubits: usize, k: usize, p: Pauli) -> Result<Self> {
        if k == 0 || k > num_qubits {
            return Err(Error::SiteOutOfRange { site: k, arity: 1, num_qubits });
        }
        let mut s = Self::identity(num_qubits);
        s.letters[k - 1] = p;
        Ok(s)
    }

    /// Exponent `p` of the phase `i^p`.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn phase_value(&self) -> C64 {
        [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)][self.phase as usize]
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn num_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase % 4;
        self
    }

    /// Number of non-identity letters.
    pub fn support(&self) -> usize {
        self.letters.iter().filter(|&&p| p != Pauli::I).count()
    }

    pub fn set_letter(&mut self, k: usize, p: Pauli) {
        self.letters[k - 1] = p;
    }

    /// Dense `2^N x 2^N` matrix, for small `N` only.
    pub fn to_matrix(&self) -> CMatrix {
        let m = self
            .letters
            .iter()
            .fold(CMatrix::identity(1), |acc, p| acc.kron(&p.matrix()));
        m.scale(self.phase_value())
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.num_qubits() != rhs.num_qubits() {
            return Err(Error::DimensionMismatch { expected: self.num_qubits(), got: rhs.num_qubits() });
        }
        let mut phase = self.phase + rhs.phase;
        let letters = self
            .letters
            .iter()
            .zip(&rhs.letters)
            .map(|(&a, &b)| {
                let (k, p) = a.mul(b);
                phase += k;
                p
            })
            .collect();
        Ok(Self::new(phase, letters))
    }
}

impl Mul for &PauliString {
    type Output = PauliString;
    /// # Panics
    /// On strings of different length.
    fn mul(self, rhs: &PauliString) -> PauliString {
        self.try_mul(rhs).expect("Pauli strings of equal length")
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["+", "+i", "-", "-i"][self.phase as usize])?;
        self.letters.iter().try_for_each(|p| write!(f, "{}", p.letter()))
    }
}

impl FromStr for PauliString {
    type Err = Error;
    /// Parses an optional phase prefix (`+`, `-`, `+i`, `-i`, `i`) followed by
    /// letters, e.g. `-iXZY`.
    fn from_str(s: &str) -> Result<Self> {
        let (phase, rest) = if let Some(r) = s.strip_prefix("+i").or_else(|| s.strip_prefix('i')) {
            (1, r)
        } else if let Some(r) = s.strip_prefix("-i") {
            (3, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (2, r)
        } else {
            (0, s.strip_prefix('+').unwrap_or(s))
        };
        let letters = rest
            .chars()
            .map(|c| match c {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::InvalidArgument(format!("invalid Pauli letter {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(phase, letters))
    }
}

/// Expands `m` (dimension `2^n`) in the Pauli basis: `m = Σ c_P P`.
/// Returns only coefficients with modulus above `tol`.
pub fn pauli_decompose(m: &CMatrix, tol: f64) -> Vec<(Vec<Pauli>, C64)> {
    let dim = m.dim();
    let n = dim.trailing_zeros() as usize;
    let mut out = Vec::new();
    for code in 0..(1usize << (2 * n)) {
        let letters: Vec<Pauli> = (0..n).map(|q| Pauli::ALL[(code >> (2 * (n - 1 - q))) & 3]).collect();
        let p = PauliString::new(0, letters.clone()).to_matrix();
        // Tr(P m) / dim, P Hermitian
        let mut c = C64::new(0.0, 0.0);
        for r in 0..dim {
            for k in 0..dim {
                c += p[(r, k)] * m[(k, r)];
            }
        }
        c /= dim as f64;
        if c.norm() > tol {
            out.push((letters, c));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_letter_products() {
        assert_eq!(Pauli::X.mul(Pauli::Y), (1, Pauli::Z));
        assert_eq!(Pauli::Y.mul(Pauli::X), (3, Pauli::Z));
        assert_eq!(Pauli::Z.mul(Pauli::Z), (0, Pauli::I));
        for a in Pauli::ALL {
            for b in Pauli::ALL {
                let (k, c) = a.mul(b);
                let lhs = &a.matrix() * &b.matrix();
                let rhs = c.matrix().scale(C64::new(0.0, 1.0).powu(k as u32));
                assert!(lhs.max_abs_diff(&rhs) < 1e-15, "{a:?}{b:?}");
            }
        }
    }

    #[test]
    fn parse_and_display() {
        for s in ["+XYZ", "-IZ", "+iY", "-iXX"] {
            assert_eq!(s.parse::<PauliString>().unwrap().to_string(), s);
        }
        assert_eq!("XZ".parse::<PauliString>().unwrap().to_string(), "+XZ");
        assert!("XQ".parse::<PauliString>().is_err());
    }

    #[test]
    fn decomposition_recovers_strings() {
        let p: PauliString = "-iXZ".parse().unwrap();
        let d = pauli_decompose(&p.to_matrix(), 1e-12);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].0, vec![Pauli::X, Pauli::Z]);
        assert!((d[0].1 - C64::new(0.0, -1.0)).norm() < 1e-15);
    }
}
