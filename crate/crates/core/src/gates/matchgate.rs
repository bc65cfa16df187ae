//! Matchgates `G(A, B)`: `A` acts on the even-parity pair `{|00>, |11>}`,
//! `B` on the odd-parity pair `{|01>, |10>}`, with `det A = det B`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{haar_unitary, CMatrix, ZERO};
use crate::statevector::{LocalUnitary, UNITARITY_TOL};

/// Tolerance on `|det A - det B|`.
pub const DET_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct MatchgateParams {
    a: CMatrix,
    b: CMatrix,
}

impl MatchgateParams {
    pub fn new(a: CMatrix, b: CMatrix) -> Result<Self> {
        if a.dim() != 2 || b.dim() != 2 {
            return Err(Error::Config("matchgate blocks must be 2x2".into()));
        }
        for m in [&a, &b] {
            let deviation = m.unitarity_deviation();
            if !(deviation <= UNITARITY_TOL) {
                return Err(Error::NonUnitary { deviation });
            }
        }
        let (da, db) = (a.det(), b.det());
        if (da - db).norm() > DET_TOL {
            return Err(Error::InvalidMatchgate {
                det_a: format!("{da}"),
                det_b: format!("{db}"),
            });
        }
        Ok(Self { a, b })
    }

    /// Reads `A` and `B` back out of a 4x4 matrix with matchgate sparsity.
    /// Entries outside the two blocks must vanish to `tol`.
    pub fn from_matrix(m: &CMatrix, tol: f64) -> Result<Self> {
        if m.dim() != 4 {
            return Err(Error::DimensionMismatch { expected: 4, got: m.dim() });
        }
        let outside = [(0, 1), (0, 2), (1, 0), (1, 3), (2, 0), (2, 3), (3, 1), (3, 2)];
        if outside.iter().any(|&rc| m[rc].norm() > tol) {
            return Err(Error::InvalidMatchgate {
                det_a: "n/a".into(),
                det_b: "gate mixes parity sectors".into(),
            });
        }
        let a = CMatrix::from_rows([[m[(0, 0)], m[(0, 3)]], [m[(3, 0)], m[(3, 3)]]]);
        let b = CMatrix::from_rows([[m[(1, 1)], m[(1, 2)]], [m[(2, 1)], m[(2, 2)]]]);
        Self::new(a, b)
    }

    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    pub fn b(&self) -> &CMatrix {
        &self.b
    }

    /// The 4x4 matrix `G(A, B)`.
    pub fn matrix(&self) -> CMatrix {
        let (a, b) = (&self.a, &self.b);
        CMatrix::from_rows([
            [a[(0, 0)], ZERO, ZERO, a[(0, 1)]],
            [ZERO, b[(0, 0)], b[(0, 1)], ZERO],
            [ZERO, b[(1, 0)], b[(1, 1)], ZERO],
            [a[(1, 0)], ZERO, ZERO, a[(1, 1)]],
        ])
    }
}

/// Places `G(A, B)` on the pair `(site, site + 1)`.
pub fn matchgate(params: &MatchgateParams, site: usize) -> Result<LocalUnitary> {
    LocalUnitary::new(site, params.matrix())
}

/// Haar-random `U(2)` element rescaled to unit determinant.
pub fn random_su2<R: Rng + ?Sized>(rng: &mut R) -> CMatrix {
    let u = haar_unitary(2, rng);
    let root = u.det().sqrt();
    u.scale(root.inv())
}

/// Matchgate with independent random `SU(2)` blocks.
pub fn random_matchgate<R: Rng + ?Sized>(rng: &mut R, site: usize) -> LocalUnitary {
    let a = random_su2(rng);
    let b = random_su2(rng);
    let params = MatchgateParams::new(a, b).expect("SU(2) blocks always satisfy the determinant condition");
    matchgate(&params, site).expect("matchgates of unitary blocks are unitary")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::standard::{swap_matrix, x_matrix, z_matrix};
    use crate::linalg::ONE;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_blocks_give_identity() {
        let p = MatchgateParams::new(CMatrix::identity(2), CMatrix::identity(2)).unwrap();
        assert_eq!(p.matrix(), CMatrix::identity(4));
    }

    #[test]
    fn x_blocks_give_x_tensor_x() {
        let p = MatchgateParams::new(x_matrix(), x_matrix()).unwrap();
        let xx = x_matrix().kron(&x_matrix());
        assert_eq!(p.matrix(), xx);
    }

    #[test]
    fn swap_is_not_a_matchgate() {
        let err = MatchgateParams::new(CMatrix::identity(2), x_matrix()).unwrap_err();
        assert!(matches!(err, Error::InvalidMatchgate { .. }));
        assert!(MatchgateParams::from_matrix(&swap_matrix(), 1e-12).is_err());
    }

    #[test]
    fn su2_samples_are_special_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let u = random_su2(&mut rng);
            assert!(u.unitarity_deviation() <= 1e-12);
            assert!((u.det() - ONE).norm() <= 1e-12);
        }
    }

    #[test]
    fn su2_first_entry_is_uniform_on_average() {
        // Haar on U(2): |u11|^2 ~ Uniform[0, 1], mean 1/2.
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let n = 100_000;
        let mean = (0..n).map(|_| random_su2(&mut rng)[(0, 0)].norm_sqr()).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn random_matchgates_preserve_parity() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let zz = z_matrix().kron(&z_matrix());
        for _ in 0..500 {
            let g = random_matchgate(&mut rng, 1);
            let m = g.matrix();
            let conj = &(&m.adjoint() * &zz) * m;
            assert!(conj.max_abs_diff(&zz) <= 1e-12);
            let p = MatchgateParams::from_matrix(m, 0.0).unwrap();
            assert!((p.a().det() - p.b().det()).norm() <= 1e-10);
            // |00> stays in the even sector
            assert_eq!(m[(1, 0)], ZERO);
            assert_eq!(m[(2, 0)], ZERO);
        }
    }

    #[test]
    fn same_seed_same_matchgate() {
        let g1 = random_matchgate(&mut ChaCha8Rng::seed_from_u64(5), 2);
        let g2 = random_matchgate(&mut ChaCha8Rng::seed_from_u64(5), 2);
        assert_eq!(g1, g2);
    }
}
