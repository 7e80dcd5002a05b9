//! Single-layer hardware-efficient circuits: one `R_y` per qubit followed by
//! a fixed CNOT pattern.

use std::fmt;
use std::str::FromStr;

use crate::statevec::Statevector;
use crate::{Error, Result};

/// CNOT pattern of an ansatz.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Connectivity {
    /// No entangling gates.
    None,
    /// Nearest-neighbour chain.
    Linear,
    /// Chain closed by a CNOT from the last qubit to the first.
    Ring,
    /// Qubit 0 controls every other qubit.
    OneToAll,
    /// Every pair, control below target.
    AllToAll,
}

impl Connectivity {
    pub const ALL: [Connectivity; 5] = [
        Connectivity::None,
        Connectivity::Linear,
        Connectivity::Ring,
        Connectivity::OneToAll,
        Connectivity::AllToAll,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Connectivity::None => "nc",
            Connectivity::Linear => "lin",
            Connectivity::Ring => "ring",
            Connectivity::OneToAll => "ota",
            Connectivity::AllToAll => "ata",
        }
    }

    /// Number of CNOTs on `n` qubits.
    pub fn edge_count(self, n: usize) -> usize {
        match self {
            Connectivity::None => 0,
            Connectivity::Linear | Connectivity::OneToAll => n.saturating_sub(1),
            Connectivity::Ring => n,
            Connectivity::AllToAll => n * n.saturating_sub(1) / 2,
        }
    }

    /// Ordered `(control, target)` list for `n` qubits.
    pub fn edges(self, n: usize) -> Vec<(usize, usize)> {
        match self {
            Connectivity::None => Vec::new(),
            Connectivity::Linear => (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
            Connectivity::Ring => {
                let mut e = Connectivity::Linear.edges(n);
                e.push((n - 1, 0));
                e
            }
            Connectivity::OneToAll => (1..n).map(|j| (0, j)).collect(),
            Connectivity::AllToAll => (0..n)
                .flat_map(|k| ((k + 1)..n).map(move |j| (k, j)))
                .collect(),
        }
    }
}

impl fmt::Display for Connectivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Connectivity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Connectivity::ALL
            .into_iter()
            .find(|c| c.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::Argument(format!(
                    "unknown ansatz '{s}' (expected one of nc, lin, ring, ota, ata)"
                ))
            })
    }
}

/// A concrete circuit on `n` qubits with one angle per qubit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ansatz {
    n: usize,
    connectivity: Connectivity,
    edges: Vec<(usize, usize)>,
}

impl Ansatz {
    pub fn new(connectivity: Connectivity, n: usize) -> Result<Self> {
        let min = if connectivity == Connectivity::None { 1 } else { 2 };
        if n < min || n > Statevector::MAX_QUBITS {
            return Err(Error::Argument(format!(
                "{connectivity} ansatz needs between {min} and {} qubits, got {n}",
                Statevector::MAX_QUBITS
            )));
        }
        Ok(Ansatz {
            n,
            connectivity,
            edges: connectivity.edges(n),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn num_params(&self) -> usize {
        self.n
    }

    pub fn connectivity(&self) -> Connectivity {
        self.connectivity
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    fn check_params(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.num_params() {
            return Err(Error::Argument(format!(
                "{} ansatz on {} qubits takes {} angles, got {}",
                self.connectivity,
                self.n,
                self.num_params(),
                theta.len()
            )));
        }
        Ok(())
    }

    /// Rotations on every qubit, then the CNOTs in edge order.
    pub fn apply(&self, state: &mut Statevector, theta: &[f64]) -> Result<()> {
        self.check_params(theta)?;
        if state.num_qubits() != self.n {
            return Err(Error::Argument(format!(
                "ansatz acts on {} qubits but the state has {}",
                self.n,
                state.num_qubits()
            )));
        }
        for (m, &t) in theta.iter().enumerate() {
            state.apply_ry(m, t)?;
        }
        for &(k, j) in &self.edges {
            state.apply_cnot(k, j)?;
        }
        Ok(())
    }

    /// Basis permutation implemented by the CNOT layer: basis state `x` is
    /// mapped to `perm[x]`.
    pub fn cnot_permutation(&self) -> Vec<usize> {
        (0..1usize << self.n)
            .map(|mut x| {
                for &(k, j) in &self.edges {
                    if x >> k & 1 == 0 {
                        x ^= 1 << j;
                    }
                }
                x
            })
            .collect()
    }
}
