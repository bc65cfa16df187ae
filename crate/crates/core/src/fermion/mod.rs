//! Free-fermion tools: Jordan-Wigner Majoranas, Gaussian covariance-matrix
//! evolution under matchgates, and Majorana weights of Clifford-conjugated
//! operators.

mod covariance;
mod pauli;

pub use covariance::{matchgate_rotation, orthogonal_polar, CovarianceMatrix, MajoranaRotation};
pub use pauli::{pauli_decompose, Pauli, PauliString};

use num_complex::Complex64 as C64;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Majorana `c_index` (1-based, `1..=2N`) under Jordan-Wigner:
/// `c_{2k-1} = Z_1...Z_{k-1} X_k`, `c_{2k} = Z_1...Z_{k-1} Y_k`.
pub fn jordan_wigner(index: usize, num_qubits: usize) -> Result<PauliString> {
    if index == 0 || index > 2 * num_qubits {
        return Err(Error::InvalidArgument(format!("Majorana index {index} outside 1..={}", 2 * num_qubits)));
    }
    let k = (index + 1) / 2;
    let mut letters = vec![Pauli::I; num_qubits];
    letters[..k - 1].fill(Pauli::Z);
    letters[k - 1] = if index % 2 == 1 { Pauli::X } else { Pauli::Y };
    Ok(PauliString::new(0, letters))
}

/// Writes `p = phase · c_{j_1} c_{j_2} ... c_{j_d}` with `j_1 < ... < j_d`.
/// Returns the phase exponent (of `i`) and the indices.
pub fn majorana_decomposition(p: &PauliString) -> (u8, Vec<usize>) {
    let n = p.num_qubits();
    let mut per_qubit = vec![(false, false); n];
    // parity of Majoranas on qubits to the right, whose strings put Z here
    let mut parity = false;
    for k in (0..n).rev() {
        let own = if parity { p.letters()[k].mul(Pauli::Z).1 } else { p.letters()[k] };
        let (a, b) = match own {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (false, true),
            Pauli::Z => (true, true),
        };
        per_qubit[k] = (a, b);
        parity ^= a ^ b;
    }
    let indices: Vec<usize> = per_qubit
        .iter()
        .enumerate()
        .flat_map(|(k, &(a, b))| {
            let mut v = Vec::new();
            if a {
                v.push(2 * k + 1);
            }
            if b {
                v.push(2 * k + 2);
            }
            v
        })
        .collect();
    let product = indices.iter().fold(PauliString::identity(n), |acc, &j| {
        &acc * &jordan_wigner(j, n).expect("index in range")
    });
    debug_assert_eq!(product.letters(), p.letters());
    ((p.phase() + 4 - product.phase()) % 4, indices)
}

/// Number of Majorana operators whose product is `p` up to phase.
pub fn majorana_weight(p: &PauliString) -> usize {
    majorana_decomposition(p).1.len()
}

fn snap_phase(c: C64, tol: f64) -> Option<u8> {
    [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)]
        .iter()
        .position(|&u| (c - u).norm() <= tol)
        .map(|k| k as u8)
}

/// `U^dag p U` for the circuit unitary `U` (first layer acts first).
pub fn conjugate_pauli_by_clifford(p: &PauliString, circuit: &Circuit) -> Result<PauliString> {
    if p.num_qubits() != circuit.num_qubits() {
        return Err(Error::DimensionMismatch { expected: circuit.num_qubits(), got: p.num_qubits() });
    }
    let mut out = p.clone();
    for (layer_index, layer) in circuit.layers().iter().enumerate().rev() {
        for gate in layer.iter().rev() {
            let qubits: Vec<usize> = gate.qubits().collect();
            let local: Vec<Pauli> = qubits.iter().map(|&q| out.letters()[q - 1]).collect();
            let local_m = PauliString::new(0, local).to_matrix();
            let g = gate.matrix();
            let conj = &(&g.adjoint() * &local_m) * g;
            let terms = pauli_decompose(&conj, 1e-9);
            let [(letters, coeff)] = terms.as_slice() else {
                return Err(Error::NonClifford { layer: layer_index });
            };
            let phase = snap_phase(*coeff, 1e-9).ok_or(Error::NonClifford { layer: layer_index })?;
            for (&q, &l) in qubits.iter().zip(letters) {
                out.set_letter(q, l);
            }
            let total = out.phase() + phase;
            out = out.with_phase(total);
        }
    }
    Ok(out)
}

/// Majorana weight of `U^dag Z_k U` for every qubit `k`.
pub fn fermionic_weights(circuit: &Circuit) -> Result<Vec<usize>> {
    let n = circuit.num_qubits();
    (1..=n)
        .map(|k| {
            let z = PauliString::single(n, k, Pauli::Z)?;
            Ok(majorana_weight(&conjugate_pauli_by_clifford(&z, circuit)?))
        })
        .collect()
}

/// Largest Majorana weight of a conjugated `Z_k`.
pub fn fermionic_weight(circuit: &Circuit) -> Result<usize> {
    Ok(fermionic_weights(circuit)?.into_iter().max().unwrap_or(0))
}

/// Dense unitary of a circuit, for small `N` only.
pub fn circuit_unitary(circuit: &Circuit) -> CMatrix {
    let n = circuit.num_qubits();
    let dim = 1usize << n;
    let mut u = CMatrix::zeros(dim);
    for col in 0..dim {
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[col] = C64::new(1.0, 0.0);
        let mut s = crate::statevector::Statevector::from_amplitudes(amps).expect("basis vector");
        circuit.apply(&mut s).expect("circuit matches its own width");
        for (row, &z) in s.amplitudes().iter().enumerate() {
            u[(row, col)] = z;
        }
    }
    u
}
