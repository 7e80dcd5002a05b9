//! Mean energy, passive states, ergotropy and the circuit work cost.

use num_complex::Complex64;

use crate::ansatz::Ansatz;
use crate::hamiltonian::{HamiltonianMatrix, Spectrum};
use crate::linalg::{hermitian_eigenvalues, SparseMatrix};
use crate::statevec::Statevector;
use crate::{Error, Result};

const EFFICIENCY_OVERSHOOT: f64 = 1e-9;

/// Density operator stored as a dense row-major complex matrix.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<Complex64>,
    /// Eigenvalues in descending order, cached when known by construction.
    populations: Option<Vec<f64>>,
}

impl DensityMatrix {
    /// `|ψ⟩⟨ψ|`.
    pub fn from_pure(state: &Statevector) -> Self {
        let a = state.amplitudes();
        let dim = a.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for ai in a {
            for aj in a {
                entries.push(ai * aj.conj());
            }
        }
        let mut populations = vec![0.0; dim];
        populations[0] = 1.0;
        DensityMatrix {
            dim,
            entries,
            populations: Some(populations),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        DensityMatrix {
            dim,
            entries,
            populations: Some(vec![1.0 / dim as f64; dim]),
        }
    }

    /// Checked constructor: Hermitian within 1e-12, unit trace within 1e-10 and
    /// no eigenvalue below −1e-10.
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::Argument(format!(
                "expected {} entries for a {dim}x{dim} density matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        for i in 0..dim {
            for j in i..dim {
                let d = (entries[i * dim + j] - entries[j * dim + i].conj()).norm();
                if d > 1e-12 {
                    return Err(Error::Argument(format!(
                        "density matrix is not Hermitian at ({i}, {j}): deviation {d:e}"
                    )));
                }
            }
        }
        let mut rho = DensityMatrix {
            dim,
            entries,
            populations: None,
        };
        let trace = rho.trace();
        if (trace - 1.0).abs() > 1e-10 {
            return Err(Error::Argument(format!("density matrix trace is {trace}, not 1")));
        }
        let pops = rho.compute_populations()?;
        if let Some(&min) = pops.last() {
            if min < -1e-10 {
                return Err(Error::Argument(format!(
                    "density matrix has negative eigenvalue {min:e}"
                )));
            }
        }
        rho.populations = Some(pops);
        Ok(rho)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i).re).sum()
    }

    fn compute_populations(&self) -> Result<Vec<f64>> {
        let mut vals = hermitian_eigenvalues(self.dim, &self.entries)?;
        vals.reverse();
        Ok(vals)
    }

    /// Eigenvalues of ρ in descending order.
    pub fn populations(&self) -> Result<Vec<f64>> {
        match &self.populations {
            Some(p) => Ok(p.clone()),
            None => self.compute_populations(),
        }
    }

    /// Tr{Hρ}.
    pub fn energy(&self, h: &HamiltonianMatrix) -> Result<f64> {
        self.check_dim(h.dim())?;
        let hd = h.dense();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.dim {
            for (j, &hij) in hd.row(i).iter().enumerate() {
                if hij != 0.0 {
                    acc += self.get(j, i) * hij;
                }
            }
        }
        Ok(acc.re)
    }

    fn check_dim(&self, other: usize) -> Result<()> {
        if other != self.dim {
            return Err(Error::Argument(format!(
                "dimension mismatch: density matrix {} vs operator {other}",
                self.dim
            )));
        }
        Ok(())
    }
}

/// Energy bookkeeping of one state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WorkReport {
    /// E_ρ = Tr{Hρ}
    pub mean_energy: f64,
    /// Tr{Hπ_ρ}
    pub passive_energy: f64,
    /// E_ρ − Tr{Hπ_ρ}
    pub ergotropy: f64,
}

/// Passive state of `rho`: its eigenvalues in descending order placed on the
/// Hamiltonian eigenvectors in ascending energy order.
pub fn passive_state(rho: &DensityMatrix, spec: &Spectrum) -> Result<DensityMatrix> {
    rho.check_dim(spec.dim())?;
    let pops = rho.populations()?;
    let dim = rho.dim();
    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    for (k, &p) in pops.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let v = spec.eigenvector(k);
        for i in 0..dim {
            for j in 0..dim {
                entries[i * dim + j] += Complex64::new(p * v[i] * v[j], 0.0);
            }
        }
    }
    Ok(DensityMatrix {
        dim,
        entries,
        populations: Some(pops),
    })
}

/// Mean energy, passive energy and ergotropy of `rho`.
pub fn ergotropy(rho: &DensityMatrix, h: &HamiltonianMatrix, spec: &Spectrum) -> Result<WorkReport> {
    rho.check_dim(spec.dim())?;
    let mean_energy = rho.energy(h)?;
    let passive_energy: f64 = rho
        .populations()?
        .iter()
        .zip(&spec.eigenvalues)
        .map(|(p, e)| p * e)
        .sum();
    Ok(WorkReport {
        mean_energy,
        passive_energy,
        ergotropy: mean_energy - passive_energy,
    })
}

/// Ergotropy of a pure state, `⟨ψ|H|ψ⟩ − E_0`.
pub fn pure_ergotropy(state: &Statevector, h: &HamiltonianMatrix, spec: &Spectrum) -> Result<WorkReport> {
    let mean_energy = state.expectation(h)?;
    let passive_energy = spec.ground_energy();
    Ok(WorkReport {
        mean_energy,
        passive_energy,
        ergotropy: mean_energy - passive_energy,
    })
}

/// η = ⟨W⟩ / ℰ. Values within 1e-9 above one are clipped to one.
pub fn efficiency(mean_work: f64, ergotropy: f64) -> Result<f64> {
    if ergotropy <= 0.0 || !ergotropy.is_finite() {
        return Err(Error::DegenerateBattery(ergotropy));
    }
    let eta = mean_work / ergotropy;
    if eta > 1.0 {
        if eta - 1.0 < EFFICIENCY_OVERSHOOT {
            return Ok(1.0);
        }
        return Err(Error::Numerical(format!(
            "mean work {mean_work} exceeds ergotropy {ergotropy}"
        )));
    }
    Ok(eta)
}

/// `W(θ) = E_ρ − ⟨ψ(θ)|H|ψ(θ)⟩` for a fixed ansatz, input state and Hamiltonian.
///
/// For computational-basis inputs the rotation layer produces a real product
/// state and the CNOT layer is a basis permutation, so the energy reduces to
/// a real quadratic form with the Hamiltonian permuted once up front. Other
/// inputs go through the full statevector circuit.
#[derive(Clone, Debug)]
pub struct WorkCost {
    ansatz: Ansatz,
    input: Statevector,
    hamiltonian: HamiltonianMatrix,
    mean_energy: f64,
    kernel: Kernel,
}

#[derive(Clone, Debug)]
enum Kernel {
    Product { input_bits: usize, permuted: SparseMatrix },
    Statevector,
}

impl WorkCost {
    pub fn new(ansatz: Ansatz, input: Statevector, hamiltonian: HamiltonianMatrix) -> Result<Self> {
        if ansatz.num_qubits() != input.num_qubits() || hamiltonian.dim() != input.dim() {
            return Err(Error::Argument(format!(
                "size mismatch: ansatz {} qubits, input {} qubits, Hamiltonian dimension {}",
                ansatz.num_qubits(),
                input.num_qubits(),
                hamiltonian.dim()
            )));
        }
        let mean_energy = input.expectation(&hamiltonian)?;
        let kernel = match input.as_basis_index() {
            Some(input_bits) => Kernel::Product {
                input_bits,
                permuted: hamiltonian.sparse().permuted(&ansatz.cnot_permutation()),
            },
            None => Kernel::Statevector,
        };
        Ok(WorkCost {
            ansatz,
            input,
            hamiltonian,
            mean_energy,
            kernel,
        })
    }

    pub fn ansatz(&self) -> &Ansatz {
        &self.ansatz
    }

    pub fn input(&self) -> &Statevector {
        &self.input
    }

    pub fn hamiltonian(&self) -> &HamiltonianMatrix {
        &self.hamiltonian
    }

    pub fn num_params(&self) -> usize {
        self.ansatz.num_params()
    }

    /// E_ρ of the input state.
    pub fn mean_energy(&self) -> f64 {
        self.mean_energy
    }

    /// Circuit output `U(θ)|ψ_in⟩`.
    pub fn output_state(&self, theta: &[f64]) -> Result<Statevector> {
        let mut s = self.input.clone();
        self.ansatz.apply(&mut s, theta)?;
        Ok(s)
    }

    pub fn work(&self, theta: &[f64]) -> Result<f64> {
        match &self.kernel {
            Kernel::Product {
                input_bits,
                permuted,
            } => {
                if theta.len() != self.num_params() {
                    // reuse the ansatz diagnostics
                    return self.work_statevector(theta);
                }
                let phi = rotated_product(*input_bits, theta);
                Ok(self.mean_energy - permuted.quadratic_form(&phi))
            }
            Kernel::Statevector => self.work_statevector(theta),
        }
    }

    /// Same value as [`WorkCost::work`], always through the statevector.
    pub fn work_statevector(&self, theta: &[f64]) -> Result<f64> {
        let out = self.output_state(theta)?;
        Ok(self.mean_energy - out.expectation(&self.hamiltonian)?)
    }
}

/// Amplitudes of `⊗_m R_y(θ_m)|b⟩` for the basis state with bits `input_bits`.
fn rotated_product(input_bits: usize, theta: &[f64]) -> Vec<f64> {
    let dim = 1usize << theta.len();
    let mut amps = Vec::with_capacity(dim);
    amps.push(1.0);
    for (m, &t) in theta.iter().enumerate() {
        let (s, c) = t.sin_cos();
        // (amplitude on |↓⟩, amplitude on |↑⟩)
        let (down, up) = if input_bits >> m & 1 == 0 { (c, s) } else { (-s, c) };
        let half = amps.len();
        amps.extend_from_within(..);
        for a in &mut amps[..half] {
            *a *= down;
        }
        for a in &mut amps[half..] {
            *a *= up;
        }
    }
    amps
}

/// One-shot evaluation of `W(θ)`.
pub fn cost_work(
    theta: &[f64],
    ansatz: &Ansatz,
    input: &Statevector,
    h: &HamiltonianMatrix,
) -> Result<f64> {
    WorkCost::new(ansatz.clone(), input.clone(), h.clone())?.work(theta)
}
