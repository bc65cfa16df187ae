//! Reference level sequences: GUE eigenvalues and uncorrelated (Poisson) levels.

use faer::{Mat, Side};
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::spectrum::GapRatioSeries;

/// `n x n` GUE matrix `(A + A^dag) / 2` with `A` complex Ginibre.
pub fn gue_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Mat<C64> {
    let mut h = Mat::<C64>::zeros(n, n);
    for i in 0..n {
        let d: f64 = StandardNormal.sample(rng);
        h[(i, i)] = C64::new(d, 0.0);
        for j in i + 1..n {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            let z = C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2;
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    h
}

/// Eigenvalues of a fresh GUE sample in descending order.
pub fn gue_eigenvalues<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let h = gue_matrix(n, rng);
    let mut ev = h.self_adjoint_eigenvalues(Side::Lower).expect("Hermitian eigensolver converges");
    ev.reverse();
    ev
}

/// Descending levels whose `num_gaps` gaps are i.i.d. unit exponentials.
pub fn poisson_levels<R: Rng + ?Sized>(num_gaps: usize, rng: &mut R) -> Vec<f64> {
    let mut levels = Vec::with_capacity(num_gaps + 1);
    let mut x = 0.0;
    levels.push(x);
    for _ in 0..num_gaps {
        let g: f64 = Exp1.sample(rng);
        x -= g;
        levels.push(x);
    }
    levels
}

/// Gap-ratio series of a GUE sample.
pub fn gue_ratio_series<R: Rng + ?Sized>(n: usize, rng: &mut R) -> GapRatioSeries {
    GapRatioSeries::from_levels(&gue_eigenvalues(n, rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gue_is_hermitian_and_eigenvalues_descend() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = gue_matrix(8, &mut rng);
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(h[(i, j)], h[(j, i)].conj());
            }
        }
        let ev = gue_eigenvalues(16, &mut rng);
        assert!(ev.windows(2).all(|w| w[0] >= w[1]));
        // trace is preserved
        let h = gue_matrix(16, &mut ChaCha8Rng::seed_from_u64(9));
        let tr: f64 = (0..16).map(|i| h[(i, i)].re).sum();
        let ev = gue_eigenvalues(16, &mut ChaCha8Rng::seed_from_u64(9));
        assert!((tr - ev.iter().sum::<f64>()).abs() < 1e-10);
    }

    #[test]
    fn poisson_levels_descend() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let l = poisson_levels(100, &mut rng);
        assert_eq!(l.len(), 101);
        assert!(l.windows(2).all(|w| w[0] > w[1]));
    }
}
