//! Open nearest-neighbour spin chains
//!
//! `H = −h Σ_j σ_z^(j) − J Σ_{j<n−1} [(1+γ) σ_xσ_x + (1−γ) σ_yσ_y + Δ σ_zσ_z]`
//!
//! built as a dense real symmetric matrix together with a sparse copy used for
//! fast expectation values.

use std::fmt;
use std::str::FromStr;

use crate::linalg::{symmetric_eigen, SparseMatrix, SquareMatrix};
use crate::statevec::Statevector;
use crate::{Error, Result, DEFAULT_COUPLING, DEFAULT_FIELD};

const PARAM_TOL: f64 = 1e-12;

/// Named members of the Hamiltonian family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    Xxx,
    Xxz,
    Xyz,
    Xx,
    Xy,
    Tfi,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::Xxx,
        Preset::Xxz,
        Preset::Xyz,
        Preset::Xx,
        Preset::Xy,
        Preset::Tfi,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Preset::Xxx => "xxx",
            Preset::Xxz => "xxz",
            Preset::Xyz => "xyz",
            Preset::Xx => "xx",
            Preset::Xy => "xy",
            Preset::Tfi => "tfi",
        }
    }

    /// Parameter constraint of this model, as printed in diagnostics.
    pub fn rule(self) -> &'static str {
        match self {
            Preset::Xxx => "XXX requires delta = 1, gamma = 0",
            Preset::Xxz => "XXZ requires gamma = 0 (delta free)",
            Preset::Xyz => "XYZ requires -1 <= gamma <= 1 (delta free)",
            Preset::Xx => "XX requires delta = 0, gamma = 0",
            Preset::Xy => "XY requires delta = 0, -1 <= gamma <= 1",
            Preset::Tfi => "TFI requires delta = 0, gamma = +1 or -1",
        }
    }

    /// Checks `(gamma, delta)` against this model's constraint.
    pub fn admits(self, gamma: f64, delta: f64) -> bool {
        let eq = |a: f64, b: f64| (a - b).abs() <= PARAM_TOL;
        let in_band = |g: f64| (-1.0 - PARAM_TOL..=1.0 + PARAM_TOL).contains(&g);
        match self {
            Preset::Xxx => eq(delta, 1.0) && eq(gamma, 0.0),
            Preset::Xxz => eq(gamma, 0.0),
            Preset::Xyz => in_band(gamma),
            Preset::Xx => eq(delta, 0.0) && eq(gamma, 0.0),
            Preset::Xy => eq(delta, 0.0) && in_band(gamma),
            Preset::Tfi => eq(delta, 0.0) && eq(gamma.abs(), 1.0),
        }
    }

    /// γ used when none is given: the forced value, or +1 for TFI.
    fn default_gamma(self) -> Option<f64> {
        match self {
            Preset::Xxx | Preset::Xxz | Preset::Xx => Some(0.0),
            Preset::Tfi => Some(1.0),
            Preset::Xyz | Preset::Xy => None,
        }
    }

    /// Δ used when none is given: the forced value, or 1 for XYZ.
    fn default_delta(self) -> Option<f64> {
        match self {
            Preset::Xxx | Preset::Xyz => Some(1.0),
            Preset::Xx | Preset::Xy | Preset::Tfi => Some(0.0),
            Preset::Xxz => None,
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::Argument(format!(
                    "unknown model '{s}' (expected one of xxx, xxz, xyz, xx, xy, tfi)"
                ))
            })
    }
}

/// Parameters of one chain.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinModel {
    pub n: usize,
    /// J
    pub coupling: f64,
    /// h
    pub field: f64,
    pub gamma: f64,
    pub delta: f64,
    pub preset: Option<Preset>,
}

impl SpinModel {
    /// Unnamed member of the family.
    pub fn new(n: usize, coupling: f64, field: f64, gamma: f64, delta: f64) -> Result<Self> {
        let model = SpinModel {
            n,
            coupling,
            field,
            gamma,
            delta,
            preset: None,
        };
        model.validate()?;
        Ok(model)
    }

    /// Named model. Anisotropies left as `None` are filled with the values the
    /// preset forces (TFI defaults to γ = +1, XYZ to Δ = 1); a preset with a
    /// free parameter that is not supplied is rejected.
    pub fn from_preset(
        preset: Preset,
        n: usize,
        coupling: f64,
        field: f64,
        gamma: Option<f64>,
        delta: Option<f64>,
    ) -> Result<Self> {
        let gamma = gamma.or(preset.default_gamma()).ok_or_else(|| {
            Error::Validation(format!("{} needs an explicit gamma ({})", preset, preset.rule()))
        })?;
        let delta = delta.or(preset.default_delta()).ok_or_else(|| {
            Error::Validation(format!("{} needs an explicit delta ({})", preset, preset.rule()))
        })?;
        let model = SpinModel {
            n,
            coupling,
            field,
            gamma,
            delta,
            preset: Some(preset),
        };
        model.validate()?;
        Ok(model)
    }

    /// Preset with the default couplings J = −1, h = 1/2.
    pub fn standard(preset: Preset, n: usize) -> Result<Self> {
        Self::from_preset(preset, n, DEFAULT_COUPLING, DEFAULT_FIELD, None, None)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || self.n > Statevector::MAX_QUBITS {
            return Err(Error::Config(format!(
                "chain length {} outside supported range 2..={}",
                self.n,
                Statevector::MAX_QUBITS
            )));
        }
        for (name, v) in [
            ("J", self.coupling),
            ("h", self.field),
            ("gamma", self.gamma),
            ("delta", self.delta),
        ] {
            if !v.is_finite() {
                return Err(Error::Config(format!("{name} must be finite, got {v}")));
            }
        }
        if let Some(p) = self.preset {
            if !p.admits(self.gamma, self.delta) {
                return Err(Error::Validation(format!(
                    "gamma = {}, delta = {} rejected: {}",
                    self.gamma,
                    self.delta,
                    p.rule()
                )));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }
}

/// Dense Hamiltonian plus its sparse twin.
#[derive(Clone, Debug)]
pub struct HamiltonianMatrix {
    n: usize,
    dense: SquareMatrix,
    sparse: SparseMatrix,
}

impl HamiltonianMatrix {
    /// Wraps an arbitrary symmetric matrix acting on `n` qubits.
    pub fn from_dense(n: usize, dense: SquareMatrix) -> Result<Self> {
        if dense.dim() != 1 << n {
            return Err(Error::Argument(format!(
                "matrix of dimension {} cannot act on {n} qubits",
                dense.dim()
            )));
        }
        let asym = dense.asymmetry();
        if asym != 0.0 {
            return Err(Error::Argument(format!("matrix is not symmetric (max |H - Hᵀ| = {asym:e})")));
        }
        let sparse = SparseMatrix::from_dense(&dense);
        Ok(HamiltonianMatrix { n, dense, sparse })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dense.dim()
    }

    pub fn dense(&self) -> &SquareMatrix {
        &self.dense
    }

    pub fn sparse(&self) -> &SparseMatrix {
        &self.sparse
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        spectrum(self)
    }
}

/// Builds the chain Hamiltonian bond by bond, one basis row at a time.
pub fn build_hamiltonian(model: &SpinModel) -> Result<HamiltonianMatrix> {
    model.validate()?;
    let n = model.n;
    let dim = model.dim();
    let SpinModel {
        coupling: j,
        field: h,
        gamma,
        delta,
        ..
    } = *model;

    // σ_xσ_x and σ_yσ_y both flip the two bond spins; σ_yσ_y contributes −1 on
    // aligned pairs and +1 on anti-aligned pairs.
    let flip_aligned = -j * ((1.0 + gamma) - (1.0 - gamma));
    let flip_opposed = -j * ((1.0 + gamma) + (1.0 - gamma));

    let mut m = SquareMatrix::zeros(dim);
    for x in 0..dim {
        let z = |q: usize| if x >> q & 1 == 0 { 1.0 } else { -1.0 };
        let mut diag = 0.0;
        for q in 0..n {
            diag -= h * z(q);
        }
        for q in 0..n - 1 {
            let zz = z(q) * z(q + 1);
            diag -= j * delta * zz;
            let y = x ^ (0b11 << q);
            let amp = if zz > 0.0 { flip_aligned } else { flip_opposed };
            m[(y, x)] += amp;
        }
        m[(x, x)] += diag;
    }
    HamiltonianMatrix::from_dense(n, m)
}

/// Ascending eigenvalues and matching orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Eigenvector `i` is column `i`.
    pub eigenvectors: SquareMatrix,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn eigenvector(&self, i: usize) -> Vec<f64> {
        self.eigenvectors.column(i)
    }

    /// max_i ‖H v_i − E_i v_i‖.
    pub fn max_residual(&self, h: &HamiltonianMatrix) -> f64 {
        (0..self.dim())
            .map(|i| {
                let v = self.eigenvector(i);
                let hv = h.dense().mul_vec(&v);
                hv.iter()
                    .zip(&v)
                    .map(|(a, b)| (a - self.eigenvalues[i] * b).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// max |VᵀV − 1|.
    pub fn orthonormality_error(&self) -> f64 {
        let d = self.dim();
        let v = &self.eigenvectors;
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in i..d {
                let dot: f64 = (0..d).map(|k| v[(k, i)] * v[(k, j)]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

pub fn spectrum(h: &HamiltonianMatrix) -> Result<Spectrum> {
    let eig = symmetric_eigen(h.dense())?;
    Ok(Spectrum {
        eigenvalues: eig.values,
        eigenvectors: eig.vectors,
    })
}
