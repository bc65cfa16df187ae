//! Fixed one- and two-qubit gates.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C64;

use crate::linalg::{CMatrix, I, ONE, ZERO};
use crate::statevector::LocalUnitary;

pub fn x_matrix() -> CMatrix {
    CMatrix::from_real_rows([[0., 1.], [1., 0.]])
}

pub fn y_matrix() -> CMatrix {
    CMatrix::from_rows([[ZERO, -I], [I, ZERO]])
}

pub fn z_matrix() -> CMatrix {
    CMatrix::from_real_rows([[1., 0.], [0., -1.]])
}

pub fn h_matrix() -> CMatrix {
    let h = FRAC_1_SQRT_2;
    CMatrix::from_real_rows([[h, h], [h, -h]])
}

pub fn s_matrix() -> CMatrix {
    CMatrix::from_rows([[ONE, ZERO], [ZERO, I]])
}

/// CNOT with the first (more significant) qubit as control.
pub fn cnot_matrix() -> CMatrix {
    CMatrix::from_real_rows([
        [1., 0., 0., 0.],
        [0., 1., 0., 0.],
        [0., 0., 0., 1.],
        [0., 0., 1., 0.],
    ])
}

/// CNOT with the second qubit as control.
pub fn cnot_reversed_matrix() -> CMatrix {
    CMatrix::from_real_rows([
        [1., 0., 0., 0.],
        [0., 0., 0., 1.],
        [0., 0., 1., 0.],
        [0., 1., 0., 0.],
    ])
}

pub fn cz_matrix() -> CMatrix {
    CMatrix::from_real_rows([
        [1., 0., 0., 0.],
        [0., 1., 0., 0.],
        [0., 0., 1., 0.],
        [0., 0., 0., -1.],
    ])
}

pub fn swap_matrix() -> CMatrix {
    CMatrix::from_real_rows([
        [1., 0., 0., 0.],
        [0., 0., 1., 0.],
        [0., 1., 0., 0.],
        [0., 0., 0., 1.],
    ])
}

/// `R_y(θ) = [[cos θ/2, -sin θ/2], [sin θ/2, cos θ/2]]`.
pub fn ry_matrix(theta: f64) -> CMatrix {
    let (s, c) = (theta / 2.0).sin_cos();
    CMatrix::from_real_rows([[c, -s], [s, c]])
}

fn fixed(site: usize, m: CMatrix) -> LocalUnitary {
    LocalUnitary::new(site, m).expect("fixed gates are unitary")
}

pub fn pauli_x(site: usize) -> LocalUnitary {
    fixed(site, x_matrix())
}

pub fn pauli_z(site: usize) -> LocalUnitary {
    fixed(site, z_matrix())
}

pub fn hadamard(site: usize) -> LocalUnitary {
    fixed(site, h_matrix())
}

pub fn swap(site: usize) -> LocalUnitary {
    fixed(site, swap_matrix())
}

/// CNOT between adjacent qubits `control` and `target` (either order).
///
/// # Panics
/// If the qubits are not adjacent.
pub fn cnot(control: usize, target: usize) -> LocalUnitary {
    if target == control + 1 {
        fixed(control, cnot_matrix())
    } else if control == target + 1 {
        fixed(target, cnot_reversed_matrix())
    } else {
        panic!("CNOT({control},{target}) is not nearest-neighbour")
    }
}

/// Scalar multiple of the identity on one qubit, `e^{iφ} I`.
pub fn global_phase(phi: f64) -> CMatrix {
    CMatrix::identity(2).scale(C64::from_polar(1.0, phi))
}
