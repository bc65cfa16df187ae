//! Cross-checks against dense linear algebra done independently with nalgebra.

use entspec_core::gates::standard::swap;
use entspec_core::{brickwork, prepare, BrickworkKind, Circuit, InputSpec, Statevector};
use nalgebra::{Complex, DMatrix, DVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Z = Complex<f64>;

fn to_na(state: &Statevector) -> DVector<Z> {
    DVector::from_iterator(state.amplitudes().len(), state.amplitudes().iter().map(|z| Z::new(z.re, z.im)))
}

/// `I_{2^(s-1)} ⊗ G ⊗ I_{2^(N-s-a+1)}` built from Kronecker products.
fn embed(n: usize, site: usize, gate: &entspec_core::CMatrix) -> DMatrix<Z> {
    let d = gate.dim();
    let g = DMatrix::from_fn(d, d, |r, c| {
        let z = gate[(r, c)];
        Z::new(z.re, z.im)
    });
    let arity = d.trailing_zeros() as usize;
    let left = DMatrix::<Z>::identity(1 << (site - 1), 1 << (site - 1));
    let right_q = n - site + 1 - arity;
    let right = DMatrix::<Z>::identity(1 << right_q, 1 << right_q);
    left.kronecker(&g).kronecker(&right)
}

fn max_norm(v: &DVector<Z>) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn dense(c: &Circuit) -> DMatrix<Z> {
    let dim = 1 << c.num_qubits();
    c.gates().fold(DMatrix::identity(dim, dim), |acc, g| embed(c.num_qubits(), g.site(), g.matrix()) * acc)
}

/// Eigenvalues of `Tr_B |ψ><ψ|` for subsystem A = qubits `1..=cut`.
fn partial_trace_spectrum(psi: &DVector<Z>, n: usize, cut: usize) -> Vec<f64> {
    let (da, db) = (1usize << cut, 1usize << (n - cut));
    let rho = DMatrix::from_fn(da, da, |i, j| (0..db).map(|b| psi[i * db + b] * psi[j * db + b].conj()).sum::<Z>());
    let mut ev: Vec<f64> = rho.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

#[test]
fn brickwork_matches_dense_matrix_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for n in [2, 4, 6] {
        for kind in [BrickworkKind::Matchgate, BrickworkKind::Clifford, BrickworkKind::Haar] {
            let c = brickwork(n, 7, kind, &mut rng).unwrap();
            for bits in ["0", "1"].iter().cycle().take(3) {
                let s0 = Statevector::basis_state(n, &bits.repeat(n)).unwrap();
                let mut s = s0.clone();
                c.apply(&mut s).unwrap();
                let expect = dense(&c) * to_na(&s0);
                let got = to_na(&s);
                assert!(max_norm(&(expect - got)) < 1e-10, "N={n} {kind}");
            }
        }
    }
}

#[test]
fn swap_and_cnot_layers_match_dense() {
    let c = Circuit::from_layers(4, vec![vec![swap(1), swap(3)], vec![swap(2)]]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let s0 = prepare(&InputSpec::HaarBlocks { k: 4 }, 4, &mut rng).unwrap();
    let mut s = s0.clone();
    c.apply(&mut s).unwrap();
    assert!(max_norm(&(dense(&c) * to_na(&s0) - to_na(&s))) < 1e-14);
}

#[test]
fn schmidt_spectrum_matches_partial_trace() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for n in [3, 4, 5, 6] {
        let s = if n % 2 == 0 {
            let mut s = prepare(&InputSpec::RandomRealProduct, n, &mut rng).unwrap();
            brickwork(n, 6, BrickworkKind::Haar, &mut rng).unwrap().apply(&mut s).unwrap();
            s
        } else {
            Statevector::from_amplitudes(entspec_core::haar_state(1 << n, &mut rng)).unwrap()
        };
        for cut in 1..n {
            let ours = s.schmidt_spectrum(cut).unwrap();
            let oracle = partial_trace_spectrum(&to_na(&s), n, cut);
            for (a, b) in ours.values().iter().zip(&oracle) {
                assert!((a - b).abs() < 1e-12, "N={n} cut={cut}");
            }
        }
    }
}

#[test]
fn haar_block_inputs_are_products_at_block_boundaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for (k, n) in [(1, 4), (2, 4), (2, 6), (3, 6), (4, 8)] {
        let s = prepare(&InputSpec::HaarBlocks { k }, n, &mut rng).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-12);
        for cut in (k..n).step_by(k) {
            let ev = partial_trace_spectrum(&to_na(&s), n, cut);
            let entropy: f64 = -ev.iter().filter(|&&p| p > 1e-300).map(|p| p * p.ln()).sum::<f64>();
            assert!(entropy.abs() <= 1e-12, "k={k} cut={cut} S={entropy}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn schmidt_spectra_are_normalized(seed in any::<u64>(), n in 2usize..=8, layers in 0usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = n + n % 2;
        let mut s = prepare(&InputSpec::RandomRealProduct, n, &mut rng).unwrap();
        brickwork(n, layers, BrickworkKind::Matchgate, &mut rng).unwrap().apply(&mut s).unwrap();
        for cut in 1..n {
            let spec = s.schmidt_spectrum(cut).unwrap();
            prop_assert!((spec.values().iter().sum::<f64>() - 1.0).abs() <= 1e-9);
            prop_assert!(spec.values().windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn circuits_are_reproducible(seed in any::<u64>()) {
        let a = brickwork(6, 4, BrickworkKind::Clifford, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let b = brickwork(6, 4, BrickworkKind::Clifford, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(a, b);
    }
}
