//! Statevector simulation of random two-qubit circuits and the spectral
//! statistics of their entanglement spectra.
//!
//! The crate covers exact dense simulation ([`statevector`]), gate families and
//! circuit schedules ([`gates`], [`circuit`]), input states ([`input`]),
//! gap-ratio and entropy statistics ([`spectrum`], [`stats`],
//! [`random_matrix`]) and an independent free-fermion oracle ([`fermion`]).

pub mod circuit;
pub mod error;
pub mod fermion;
pub mod gates;
pub mod input;
mod linalg;
pub mod random_matrix;
pub mod spectrum;
pub mod statevector;
pub mod stats;

pub use circuit::{brickwork, conjugation_circuit, swap_injection, Circuit, Conjugation, Layer};
pub use error::{Error, Result};
pub use gates::{BrickworkKind, GateFamily, MatchgateParams};
pub use input::{prepare, InputSpec};
pub use linalg::{haar_state, haar_unitary, CMatrix};
pub use spectrum::{gap_ratios, mean_r_tilde, EntanglementSpectrum, GapRatioSeries};
pub use statevector::{apply_local, basis_state, schmidt_spectrum, LocalUnitary, Statevector};
