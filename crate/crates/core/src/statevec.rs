//! Dense pure states of a few qubits and the two gates the circuits need.

use num_complex::Complex64;

use crate::hamiltonian::HamiltonianMatrix;
use crate::{Error, Result};

/// Imaginary parts of expectation values larger than this are reported as
/// numerical errors instead of being silently dropped.
const IMAGINARY_TOLERANCE: f64 = 1e-10;

/// Local spin orientation of one site.
///
/// `Down` is basis bit 0 (σ_z eigenvalue +1) and `Up` is basis bit 1
/// (σ_z eigenvalue −1). With this assignment and a positive field the
/// all-up product state is an excited state, as in the XX reference spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    #[inline]
    pub fn bit(self) -> usize {
        match self {
            Spin::Down => 0,
            Spin::Up => 1,
        }
    }

    /// Eigenvalue of σ_z on this spin.
    #[inline]
    pub fn sigma_z(self) -> f64 {
        match self {
            Spin::Down => 1.0,
            Spin::Up => -1.0,
        }
    }
}

/// Pure state of `n` qubits as 2^n complex amplitudes, qubit `m` ↔ bit `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    n: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    pub const MAX_QUBITS: usize = 12;

    fn check_qubits(n: usize) -> Result<()> {
        if n == 0 || n > Self::MAX_QUBITS {
            return Err(Error::Config(format!(
                "qubit count {n} outside supported range 1..={}",
                Self::MAX_QUBITS
            )));
        }
        Ok(())
    }

    /// Product state with qubit `m` set to `spins[m]`.
    pub fn basis(spins: &[Spin]) -> Result<Self> {
        let n = spins.len();
        Self::check_qubits(n)?;
        let index = spins
            .iter()
            .enumerate()
            .fold(0usize, |acc, (m, s)| acc | (s.bit() << m));
        Self::basis_index(n, index)
    }

    /// Computational basis state with the given index.
    pub fn basis_index(n: usize, index: usize) -> Result<Self> {
        Self::check_qubits(n)?;
        let dim = 1usize << n;
        if index >= dim {
            return Err(Error::Argument(format!(
                "basis index {index} out of range for {n} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Statevector { n, amps })
    }

    /// `|↑…↑⟩`, the battery input used by every experiment.
    pub fn all_up(n: usize) -> Result<Self> {
        Self::basis(&vec![Spin::Up; n])
    }

    /// Wraps raw amplitudes. The vector must have power-of-two length and
    /// unit norm within 1e-10.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if !dim.is_power_of_two() {
            return Err(Error::Argument(format!(
                "amplitude vector length {dim} is not a power of two"
            )));
        }
        let n = dim.trailing_zeros() as usize;
        Self::check_qubits(n)?;
        let state = Statevector { n, amps };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Argument(format!("state is not normalized (|ψ|² = {norm})")));
        }
        Ok(state)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Index of the single occupied basis state, if this is one (up to a
    /// global phase).
    pub fn as_basis_index(&self) -> Option<usize> {
        let mut found = None;
        for (i, a) in self.amps.iter().enumerate() {
            if *a != Complex64::new(0.0, 0.0) {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found.filter(|&i| (self.amps[i].norm_sqr() - 1.0).abs() < 1e-14)
    }

    fn check_qubit(&self, m: usize) -> Result<()> {
        if m >= self.n {
            return Err(Error::Argument(format!(
                "qubit index {m} out of range for {} qubits",
                self.n
            )));
        }
        Ok(())
    }

    /// Applies `exp(−iθσ_y)` to qubit `m`:
    /// `|↓⟩ → cosθ|↓⟩ + sinθ|↑⟩`, `|↑⟩ → −sinθ|↓⟩ + cosθ|↑⟩`.
    pub fn apply_ry(&mut self, m: usize, theta: f64) -> Result<()> {
        self.check_qubit(m)?;
        let (s, c) = theta.sin_cos();
        let stride = 1usize << m;
        for block in self.amps.chunks_exact_mut(2 * stride) {
            let (down, up) = block.split_at_mut(stride);
            for (a0, a1) in down.iter_mut().zip(up.iter_mut()) {
                let x0 = *a0;
                let x1 = *a1;
                *a0 = x0 * c - x1 * s;
                *a1 = x0 * s + x1 * c;
            }
        }
        Ok(())
    }

    /// Applies the CNOT `|↑⟩⟨↑|_k ⊗ 1 + |↓⟩⟨↓|_k ⊗ σ_x^(j)`: the target is
    /// flipped where the control is spin down.
    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::Argument(format!(
                "CNOT control and target are both qubit {control}"
            )));
        }
        let cmask = 1usize << control;
        let tmask = 1usize << target;
        for i in 0..self.amps.len() {
            if i & cmask == 0 && i & tmask == 0 {
                self.amps.swap(i, i | tmask);
            }
        }
        Ok(())
    }

    /// ⟨ψ|H|ψ⟩.
    pub fn expectation(&self, h: &HamiltonianMatrix) -> Result<f64> {
        if h.dim() != self.dim() {
            return Err(Error::Argument(format!(
                "Hamiltonian dimension {} does not match state dimension {}",
                h.dim(),
                self.dim()
            )));
        }
        let value = h.sparse().hermitian_form(&self.amps);
        if value.im.abs() > IMAGINARY_TOLERANCE {
            return Err(Error::Numerical(format!(
                "expectation value has imaginary part {:e}",
                value.im
            )));
        }
        Ok(value.re)
    }

    /// ⟨σ_z⟩ on qubit `m`.
    pub fn sigma_z(&self, m: usize) -> Result<f64> {
        self.check_qubit(m)?;
        let mask = 1usize << m;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .map(|(i, a)| if i & mask == 0 { a.norm_sqr() } else { -a.norm_sqr() })
            .sum())
    }

    /// Overlap ⟨self|other⟩.
    pub fn inner(&self, other: &Statevector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}
