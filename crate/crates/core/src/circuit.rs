//! Layered circuits of local unitaries and the fixed schedules built from them.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::standard::{cnot, hadamard, swap};
use crate::gates::{BrickworkKind, GateFamily};
use crate::linalg::CMatrix;
use crate::statevector::{LocalUnitary, Statevector, UNITARITY_TOL};

/// Gates acting on pairwise disjoint qubits.
pub type Layer = Vec<LocalUnitary>;

/// A sequence of layers applied first to last.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    layers: Vec<Layer>,
}

fn check_layer(num_qubits: usize, layer: &Layer) -> Result<()> {
    let mut used = vec![false; num_qubits + 1];
    for g in layer {
        if g.site() == 0 || g.qubits().end - 1 > num_qubits {
            return Err(Error::SiteOutOfRange { site: g.site(), arity: g.arity(), num_qubits });
        }
        for q in g.qubits() {
            if std::mem::replace(&mut used[q], true) {
                return Err(Error::Config(format!("qubit {q} is acted on twice within one layer")));
            }
        }
    }
    Ok(())
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self { num_qubits, layers: Vec::new() }
    }

    pub fn from_layers(num_qubits: usize, layers: Vec<Layer>) -> Result<Self> {
        let mut c = Self::new(num_qubits);
        for layer in layers {
            c.push_layer(layer)?;
        }
        Ok(c)
    }

    pub fn push_layer(&mut self, layer: Layer) -> Result<()> {
        check_layer(self.num_qubits, &layer)?;
        self.layers.push(layer);
        Ok(())
    }

    /// Appends the layers of `other`.
    pub fn extend(&mut self, other: Circuit) -> Result<()> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::DimensionMismatch { expected: self.num_qubits, got: other.num_qubits });
        }
        self.layers.extend(other.layers);
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// All gates in temporal order.
    pub fn gates(&self) -> impl DoubleEndedIterator<Item = &LocalUnitary> {
        self.layers.iter().flatten()
    }

    pub fn apply(&self, state: &mut Statevector) -> Result<()> {
        if state.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch { expected: self.num_qubits, got: state.num_qubits() });
        }
        for g in self.gates() {
            state.apply(g)?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&CircuitDoc::from(self)).expect("circuit serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: CircuitDoc = serde_json::from_str(text).map_err(|e| Error::Config(format!("circuit JSON: {e}")))?;
        doc.try_into()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GateDoc {
    site: usize,
    matrix: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CircuitDoc {
    num_qubits: usize,
    layers: Vec<Vec<GateDoc>>,
}

impl From<&Circuit> for CircuitDoc {
    fn from(c: &Circuit) -> Self {
        let layers = c
            .layers
            .iter()
            .map(|layer| {
                layer
                    .iter()
                    .map(|g| GateDoc {
                        site: g.site(),
                        matrix: g.matrix().as_slice().iter().map(|z| [z.re, z.im]).collect(),
                    })
                    .collect()
            })
            .collect();
        Self { num_qubits: c.num_qubits, layers }
    }
}

impl TryFrom<CircuitDoc> for Circuit {
    type Error = Error;
    fn try_from(doc: CircuitDoc) -> Result<Self> {
        let mut c = Circuit::new(doc.num_qubits);
        for layer in doc.layers {
            let gates = layer
                .into_iter()
                .map(|g| {
                    let data = g.matrix.iter().map(|&[re, im]| C64::new(re, im)).collect();
                    let m = CMatrix::from_row_major(data)
                        .ok_or_else(|| Error::Config("gate matrix is not square".into()))?;
                    LocalUnitary::with_tolerance(g.site, m, UNITARITY_TOL * 10.0)
                })
                .collect::<Result<Layer>>()?;
            c.push_layer(gates)?;
        }
        Ok(c)
    }
}

/// Left sites of the brickwork pairs in layer `index`: `1, 3, 5, ...` for even
/// layers and `2, 4, ...` (up to `N - 2`) for odd layers.
pub fn brickwork_sites(num_qubits: usize, index: usize) -> impl Iterator<Item = usize> {
    let start = if index % 2 == 0 { 1 } else { 2 };
    (start..num_qubits).step_by(2)
}

/// One brickwork layer with gates drawn from `family`.
pub fn brickwork_layer(num_qubits: usize, index: usize, family: &dyn GateFamily, rng: &mut dyn RngCore) -> Layer {
    brickwork_sites(num_qubits, index).map(|s| family.sample(rng, s)).collect()
}

/// Brickwork circuit of `num_layers` layers, starting with the even pairs.
pub fn brickwork(num_qubits: usize, num_layers: usize, kind: BrickworkKind, rng: &mut dyn RngCore) -> Result<Circuit> {
    if num_qubits < 2 || num_qubits % 2 != 0 {
        return Err(Error::Config(format!("brickwork needs an even number of qubits >= 2, got {num_qubits}")));
    }
    let family = kind.family();
    let layers = (0..num_layers).map(|i| brickwork_layer(num_qubits, i, family, rng)).collect();
    Ok(Circuit { num_qubits, layers })
}

/// SWAPs filling the even pairs left to right, then the odd pairs.
pub fn swap_injection(num_qubits: usize, num_swaps: usize) -> Result<Circuit> {
    if num_swaps == 0 || num_swaps >= num_qubits {
        return Err(Error::Config(format!("num_swaps must be in 1..={} for {num_qubits} qubits, got {num_swaps}", num_qubits.saturating_sub(1))));
    }
    let even: Vec<usize> = brickwork_sites(num_qubits, 0).collect();
    let odd: Vec<usize> = brickwork_sites(num_qubits, 1).collect();
    let n_even = num_swaps.min(even.len());
    let mut c = Circuit::new(num_qubits);
    c.push_layer(even[..n_even].iter().map(|&s| swap(s)).collect())?;
    if num_swaps > n_even {
        c.push_layer(odd[..num_swaps - n_even].iter().map(|&s| swap(s)).collect())?;
    }
    Ok(c)
}

/// The fixed Clifford circuits applied before a matchgate brickwork.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Conjugation {
    C1,
    C2,
    C3,
    C4,
}

impl Conjugation {
    pub const ALL: [Conjugation; 4] = [Self::C1, Self::C2, Self::C3, Self::C4];

    pub fn min_qubits(self) -> usize {
        match self {
            Self::C1 | Self::C2 | Self::C3 => 2,
            Self::C4 => 3,
        }
    }
}

impl fmt::Display for Conjugation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Conjugation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "C1" => Ok(Self::C1),
            "C2" => Ok(Self::C2),
            "C3" => Ok(Self::C3),
            "C4" => Ok(Self::C4),
            _ => Err(Error::Config(format!("unknown conjugation circuit {s:?}"))),
        }
    }
}

/// Builds a conjugation circuit; `CNOT_{a,b}` has control `a` and target `b`,
/// and gates act in the listed order.
///
/// - C1: `CNOT_{1,2} CNOT_{2,3} ... CNOT_{N-1,N}`, then `H` on every qubit.
/// - C2: `CNOT_{1,2} CNOT_{3,4} ...`, then `CNOT_{3,2} CNOT_{5,4} ...`; pairs
///   with an index above `N` are dropped.
/// - C3: `H_1 H_2 CNOT_{1,2}`.
/// - C4: `H_1 H_2 H_3 CNOT_{1,2} CNOT_{2,3}`.
pub fn conjugation_circuit(kind: Conjugation, num_qubits: usize) -> Result<Circuit> {
    let n = num_qubits;
    if n < kind.min_qubits() {
        return Err(Error::Config(format!("{kind} needs at least {} qubits, got {n}", kind.min_qubits())));
    }
    let mut c = Circuit::new(n);
    match kind {
        Conjugation::C1 => {
            for a in 1..n {
                c.push_layer(vec![cnot(a, a + 1)])?;
            }
            c.push_layer((1..=n).map(hadamard).collect())?;
        }
        Conjugation::C2 => {
            c.push_layer((1..n).step_by(2).map(|a| cnot(a, a + 1)).collect())?;
            let second: Layer = (3..=n).step_by(2).map(|a| cnot(a, a - 1)).collect();
            if !second.is_empty() {
                c.push_layer(second)?;
            }
        }
        Conjugation::C3 => {
            c.push_layer(vec![hadamard(1), hadamard(2)])?;
            c.push_layer(vec![cnot(1, 2)])?;
        }
        Conjugation::C4 => {
            c.push_layer(vec![hadamard(1), hadamard(2), hadamard(3)])?;
            c.push_layer(vec![cnot(1, 2)])?;
            c.push_layer(vec![cnot(2, 3)])?;
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevector::basis_state;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sites(layer: &Layer) -> Vec<usize> {
        layer.iter().map(|g| g.site()).collect()
    }

    #[test]
    fn brickwork_pair_schedule() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = brickwork(4, 2, BrickworkKind::Matchgate, &mut rng).unwrap();
        assert_eq!(sites(&c.layers()[0]), vec![1, 3]);
        assert_eq!(sites(&c.layers()[1]), vec![2]);
        let c = brickwork(8, 3, BrickworkKind::Haar, &mut rng).unwrap();
        assert_eq!(sites(&c.layers()[1]), vec![2, 4, 6]);
        assert_eq!(sites(&c.layers()[2]), vec![1, 3, 5, 7]);
    }

    #[test]
    fn empty_brickwork_leaves_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = brickwork(6, 0, BrickworkKind::Clifford, &mut rng).unwrap();
        let mut s = basis_state(6, "010011").unwrap();
        let before = s.clone();
        c.apply(&mut s).unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn odd_brickwork_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(brickwork(5, 1, BrickworkKind::Matchgate, &mut rng).is_err());
    }

    #[test]
    fn swap_injection_fill_order() {
        let c = swap_injection(6, 1).unwrap();
        assert_eq!(c.depth(), 1);
        assert_eq!(sites(&c.layers()[0]), vec![1]);
        let c = swap_injection(6, 3).unwrap();
        assert_eq!(c.depth(), 1);
        assert_eq!(sites(&c.layers()[0]), vec![1, 3, 5]);
        let c = swap_injection(6, 4).unwrap();
        assert_eq!(sites(&c.layers()[0]), vec![1, 3, 5]);
        assert_eq!(sites(&c.layers()[1]), vec![2]);
        let c = swap_injection(6, 5).unwrap();
        assert_eq!(sites(&c.layers()[1]), vec![2, 4]);
        assert!(swap_injection(6, 0).is_err());
        assert!(swap_injection(6, 6).is_err());
    }

    #[test]
    fn overlapping_layer_rejected() {
        let err = Circuit::from_layers(3, vec![vec![swap(1), swap(2)]]).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
        assert!(Circuit::from_layers(3, vec![vec![swap(3)]]).is_err());
    }

    #[test]
    fn c1_and_c3_prepare_plus_plus() {
        for kind in [Conjugation::C1, Conjugation::C3] {
            let mut s = basis_state(2, "00").unwrap();
            conjugation_circuit(kind, 2).unwrap().apply(&mut s).unwrap();
            for z in s.amplitudes() {
                assert!((z.re - 0.5).abs() < 1e-15 && z.im.abs() < 1e-15, "{kind}");
            }
        }
    }

    #[test]
    fn conjugation_gate_lists() {
        let c = conjugation_circuit(Conjugation::C2, 6).unwrap();
        assert_eq!(c.depth(), 2);
        assert_eq!(sites(&c.layers()[0]), vec![1, 3, 5]);
        assert_eq!(sites(&c.layers()[1]), vec![2, 4]);
        let c = conjugation_circuit(Conjugation::C2, 5).unwrap();
        assert_eq!(sites(&c.layers()[0]), vec![1, 3]);
        assert_eq!(sites(&c.layers()[1]), vec![2, 4]);
        assert_eq!(conjugation_circuit(Conjugation::C1, 5).unwrap().depth(), 5);
        assert!(conjugation_circuit(Conjugation::C4, 2).is_err());
        assert!(conjugation_circuit(Conjugation::C3, 1).is_err());
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let c = brickwork(6, 5, BrickworkKind::Haar, &mut rng).unwrap();
        let text = c.to_json();
        let back = Circuit::from_json(&text).unwrap();
        assert_eq!(c, back);
        assert_eq!(back.to_json(), text);
        assert!(text.starts_with("{\"num_qubits\":6,\"layers\":[[{\"site\":1,\"matrix\":[["));
    }

    #[test]
    fn json_rejects_garbage() {
        assert!(Circuit::from_json("{\"num_qubits\":2}").is_err());
        assert!(Circuit::from_json("{\"num_qubits\":2,\"layers\":[[{\"site\":1,\"matrix\":[[2,0],[0,0],[0,0],[1,0]]}]]}").is_err());
    }
}
