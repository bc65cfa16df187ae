//! Gate constructors and the runtime registry of random gate families.

pub mod clifford;
pub mod matchgate;
pub mod standard;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::haar_unitary;
use crate::statevector::LocalUnitary;

pub use clifford::{random_two_qubit_clifford, CliffordParams, TWO_QUBIT_CLIFFORD_COUNT};
pub use matchgate::{matchgate, random_matchgate, random_su2, MatchgateParams};

/// Haar-random two-qubit unitary on `(site, site + 1)`.
pub fn random_haar_two_qubit<R: Rng + ?Sized>(rng: &mut R, site: usize) -> LocalUnitary {
    LocalUnitary::with_tolerance(site, haar_unitary(4, rng), 1e-11).expect("Haar samples are unitary")
}

/// A distribution over two-qubit gates used to fill brickwork layers.
pub trait GateFamily: Send + Sync {
    fn name(&self) -> &'static str;
    fn sample(&self, rng: &mut dyn RngCore, site: usize) -> LocalUnitary;
}

struct MatchgateFamily;
struct CliffordFamily;
struct HaarFamily;

impl GateFamily for MatchgateFamily {
    fn name(&self) -> &'static str {
        "matchgate"
    }
    fn sample(&self, rng: &mut dyn RngCore, site: usize) -> LocalUnitary {
        random_matchgate(rng, site)
    }
}

impl GateFamily for CliffordFamily {
    fn name(&self) -> &'static str {
        "clifford"
    }
    fn sample(&self, rng: &mut dyn RngCore, site: usize) -> LocalUnitary {
        random_two_qubit_clifford(rng, site)
    }
}

impl GateFamily for HaarFamily {
    fn name(&self) -> &'static str {
        "haar"
    }
    fn sample(&self, rng: &mut dyn RngCore, site: usize) -> LocalUnitary {
        random_haar_two_qubit(rng, site)
    }
}

static FAMILIES: [&dyn GateFamily; 3] = [&MatchgateFamily, &CliffordFamily, &HaarFamily];

/// All registered gate families.
pub fn families() -> &'static [&'static dyn GateFamily] {
    &FAMILIES
}

/// Looks up a registered family by name.
pub fn family(name: &str) -> Result<&'static dyn GateFamily> {
    FAMILIES
        .iter()
        .copied()
        .find(|f| f.name() == name)
        .ok_or_else(|| Error::Config(format!("unknown gate family {name:?}")))
}

/// Gate family of a brickwork circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum BrickworkKind {
    #[default]
    Matchgate,
    Clifford,
    Haar,
}

impl BrickworkKind {
    pub fn family(self) -> &'static dyn GateFamily {
        match self {
            Self::Matchgate => FAMILIES[0],
            Self::Clifford => FAMILIES[1],
            Self::Haar => FAMILIES[2],
        }
    }
}

impl fmt::Display for BrickworkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.family().name())
    }
}

impl FromStr for BrickworkKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "matchgate" => Ok(Self::Matchgate),
            "clifford" => Ok(Self::Clifford),
            "haar" => Ok(Self::Haar),
            _ => Err(Error::Config(format!("unknown brickwork kind {s:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn registry_round_trips_names() {
        for kind in [BrickworkKind::Matchgate, BrickworkKind::Clifford, BrickworkKind::Haar] {
            let name = kind.to_string();
            assert_eq!(name.parse::<BrickworkKind>().unwrap(), kind);
            assert_eq!(family(&name).unwrap().name(), name);
        }
        assert!(family("toffoli").is_err());
        assert_eq!(families().len(), 3);
    }

    #[test]
    fn haar_gates_are_unitary_and_reproducible() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..1000 {
            assert!(random_haar_two_qubit(&mut rng, 1).matrix().unitarity_deviation() <= 1e-11);
        }
        let a = random_haar_two_qubit(&mut ChaCha8Rng::seed_from_u64(4), 1);
        let b = random_haar_two_qubit(&mut ChaCha8Rng::seed_from_u64(4), 1);
        assert_eq!(a, b);
    }

    #[test]
    fn haar_first_entry_mean() {
        // first column uniform on the unit sphere of C^4: E|u11|^2 = 1/4
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let n = 100_000;
        let mean = (0..n).map(|_| random_haar_two_qubit(&mut rng, 1).matrix()[(0, 0)].norm_sqr()).sum::<f64>() / n as f64;
        assert!((mean - 0.25).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn dyn_family_sampling_matches_direct_call() {
        let f = family("matchgate").unwrap();
        let mut r1 = ChaCha8Rng::seed_from_u64(8);
        let mut r2 = ChaCha8Rng::seed_from_u64(8);
        assert_eq!(f.sample(&mut r1, 3), random_matchgate(&mut r2, 3));
    }
}
