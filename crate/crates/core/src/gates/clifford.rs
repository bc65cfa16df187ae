//! Uniform sampling of the two-qubit Clifford group.
//!
//! Every element is written in the canonical form
//! `P · F(Γ, Δ) · H^h · S · F(Γ', Δ')` (right factor acts first), where `F` is
//! Hadamard-free (a CNOT layer followed by phases), `H^h` is a layer of
//! optional Hadamards, `S` a qubit permutation and `P` a Pauli. The pair
//! `(h, S)` is drawn from the quantum Mallows distribution and only the bits of
//! `(Γ, Δ)` that keep the form canonical are randomized, which makes the
//! induced distribution exactly uniform.

use rand::Rng;

use crate::gates::standard::{cnot_matrix, cz_matrix, h_matrix, s_matrix, swap_matrix, x_matrix, y_matrix, z_matrix};
use crate::linalg::CMatrix;
use crate::statevector::LocalUnitary;

/// Number of two-qubit Cliffords modulo global phase.
pub const TWO_QUBIT_CLIFFORD_COUNT: usize = 11520;

/// Hadamard-free layer on two qubits: an optional CNOT (control 0, target 1)
/// followed by optional `S` gates and an optional CZ.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct HadamardFree {
    pub cnot: bool,
    pub phase: [bool; 2],
    pub cz: bool,
}

/// Canonical-form parameters of a two-qubit Clifford. Qubit 0 is the more
/// significant qubit of the pair.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct CliffordParams {
    pub first: HadamardFree,
    pub swap: bool,
    pub hadamards: [bool; 2],
    pub last: HadamardFree,
    /// Pauli on each qubit: 0 = I, 1 = X, 2 = Y, 3 = Z.
    pub pauli: [u8; 2],
}

/// Which bits of the final Hadamard-free layer are free given `(h, S)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct FreeBits {
    phase: [bool; 2],
    cz: bool,
    cnot: bool,
}

fn free_bits(had: [bool; 2], perm: [usize; 2]) -> FreeBits {
    // only the pair (i, j) = (1, 0) exists below the diagonal
    let (hi, hj) = (had[1], had[0]);
    let (si, sj) = (perm[1], perm[0]);
    let cz = (hi && hj) || (hi && !hj && si < sj) || (!hi && hj && si > sj);
    let cnot = (!hi && hj) || (hi && hj && si > sj) || (!hi && !hj && si < sj);
    FreeBits { phase: had, cz, cnot }
}

/// One draw from the quantum Mallows distribution on two qubits.
fn sample_mallows<R: Rng + ?Sized>(rng: &mut R) -> ([bool; 2], [usize; 2]) {
    let mut inds = vec![0usize, 1];
    let mut had = [false; 2];
    let mut perm = [0usize; 2];
    for i in 0..2 {
        let m = 2 - i;
        let r: f64 = rng.random();
        let x = r + (1.0 - r) * 4f64.powi(-(m as i32));
        let t = ((-x.log2().ceil()) as usize).min(2 * m - 1);
        had[i] = t < m;
        let k = if had[i] { t } else { 2 * m - t - 1 };
        perm[i] = inds.remove(k);
    }
    (had, perm)
}

/// Every Mallows outcome with its exact probability.
fn mallows_outcomes() -> Vec<([bool; 2], [usize; 2], f64)> {
    let mut out = Vec::new();
    let weights = |m: usize, t: usize| 0.5f64.powi(t as i32 + 1) / (1.0 - 4f64.powi(-(m as i32)));
    for t0 in 0..4 {
        for t1 in 0..2 {
            let mut inds = vec![0usize, 1];
            let mut had = [false; 2];
            let mut perm = [0usize; 2];
            for (i, t) in [t0, t1].into_iter().enumerate() {
                let m = 2 - i;
                had[i] = t < m;
                let k = if had[i] { t } else { 2 * m - t - 1 };
                perm[i] = inds.remove(k);
            }
            out.push((had, perm, weights(2, t0) * weights(1, t1)));
        }
    }
    out
}

fn params_from(had: [bool; 2], perm: [usize; 2], first: HadamardFree, last_bits: u8, pauli: [u8; 2], free: FreeBits) -> CliffordParams {
    let mut bits = last_bits;
    let mut take = |is_free: bool| {
        if !is_free {
            return false;
        }
        let b = bits & 1 == 1;
        bits >>= 1;
        b
    };
    let last = HadamardFree {
        phase: [take(free.phase[0]), take(free.phase[1])],
        cz: take(free.cz),
        cnot: take(free.cnot),
    };
    CliffordParams { first, swap: perm == [1, 0], hadamards: had, last, pauli }
}

fn free_count(free: FreeBits) -> u32 {
    free.phase[0] as u32 + free.phase[1] as u32 + free.cz as u32 + free.cnot as u32
}

impl CliffordParams {
    /// Draws canonical-form parameters of a uniformly random Clifford.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let (had, perm) = sample_mallows(rng);
        let first = HadamardFree {
            cnot: rng.random(),
            phase: [rng.random(), rng.random()],
            cz: rng.random(),
        };
        let free = free_bits(had, perm);
        let last_bits = rng.random::<u8>() & ((1u8 << free_count(free)) - 1);
        let pauli = [rng.random_range(0..4u8), rng.random_range(0..4u8)];
        params_from(had, perm, first, last_bits, pauli, free)
    }

    /// Every reachable parameter set with the probability [`Self::sample`]
    /// assigns to it.
    pub fn enumerate() -> Vec<(Self, f64)> {
        let mut out = Vec::new();
        for (had, perm, p) in mallows_outcomes() {
            let free = free_bits(had, perm);
            let n_free = free_count(free);
            let p_each = p / (16.0 * 2f64.powi(n_free as i32) * 16.0);
            for first_bits in 0..16u8 {
                let first = HadamardFree {
                    cnot: first_bits & 1 == 1,
                    phase: [first_bits & 2 != 0, first_bits & 4 != 0],
                    cz: first_bits & 8 != 0,
                };
                for last_bits in 0..(1u8 << n_free) {
                    for pauli_bits in 0..16u8 {
                        let pauli = [pauli_bits & 3, pauli_bits >> 2];
                        out.push((params_from(had, perm, first, last_bits, pauli, free), p_each));
                    }
                }
            }
        }
        out
    }

    /// The 4x4 unitary in the local basis `|q0 q1>`.
    pub fn unitary(&self) -> CMatrix {
        let id = CMatrix::identity(2);
        let on0 = |g: &CMatrix| g.kron(&id);
        let on1 = |g: &CMatrix| id.kron(g);
        let mut gates: Vec<CMatrix> = Vec::new();
        let hadamard_free = |f: &HadamardFree, gates: &mut Vec<CMatrix>| {
            if f.cnot {
                gates.push(cnot_matrix());
            }
            if f.phase[0] {
                gates.push(on0(&s_matrix()));
            }
            if f.phase[1] {
                gates.push(on1(&s_matrix()));
            }
            if f.cz {
                gates.push(cz_matrix());
            }
        };
        hadamard_free(&self.first, &mut gates);
        if self.swap {
            gates.push(swap_matrix());
        }
        if self.hadamards[0] {
            gates.push(on0(&h_matrix()));
        }
        if self.hadamards[1] {
            gates.push(on1(&h_matrix()));
        }
        hadamard_free(&self.last, &mut gates);
        let paulis = [CMatrix::identity(2), x_matrix(), y_matrix(), z_matrix()];
        gates.push(paulis[self.pauli[0] as usize].kron(&paulis[self.pauli[1] as usize]));
        gates.iter().fold(CMatrix::identity(4), |acc, g| g * &acc)
    }
}

/// Uniformly random two-qubit Clifford on `(site, site + 1)`.
pub fn random_two_qubit_clifford<R: Rng + ?Sized>(rng: &mut R, site: usize) -> LocalUnitary {
    LocalUnitary::new(site, CliffordParams::sample(rng).unitary()).expect("Clifford matrices are unitary")
}
