//! Python bindings for `spinwork`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use spinwork::ergotropy::pure_ergotropy;
use spinwork::experiment::{self, SweepTemplate};
use spinwork::hamiltonian::build_hamiltonian;
use spinwork::optimizer;
use spinwork::{
    Ansatz, Connectivity, GradientMethod, OptimizerConfig, Preset, SpinModel, Statevector, SweepAxis,
};

fn py_err(e: spinwork::Error) -> PyErr {
    if e.is_usage() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for spinwork::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn config(step_size: f64, max_iters: usize, tol: f64, window: usize, gradient: &str) -> PyResult<OptimizerConfig> {
    let cfg = OptimizerConfig {
        step_size,
        max_iters,
        convergence_tol: tol,
        convergence_window: window,
        gradient_method: gradient.parse::<GradientMethod>().py()?,
        ..OptimizerConfig::default()
    };
    cfg.validate().py()?;
    Ok(cfg)
}

/// Spin chain with one of the named coupling presets.
#[pyclass(name = "SpinModel", module = "spinwork", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySpinModel {
    inner: SpinModel,
}

#[pymethods]
impl PySpinModel {
    #[new]
    #[pyo3(signature = (preset, n, coupling = spinwork::DEFAULT_COUPLING, field = spinwork::DEFAULT_FIELD, gamma = None, delta = None))]
    fn new(preset: &str, n: usize, coupling: f64, field: f64, gamma: Option<f64>, delta: Option<f64>) -> PyResult<Self> {
        let preset: Preset = preset.parse().py()?;
        Ok(Self {
            inner: SpinModel::from_preset(preset, n, coupling, field, gamma, delta).py()?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }
    #[getter]
    fn coupling(&self) -> f64 {
        self.inner.coupling
    }
    #[getter]
    fn field(&self) -> f64 {
        self.inner.field
    }
    #[getter]
    fn gamma(&self) -> f64 {
        self.inner.gamma
    }
    #[getter]
    fn delta(&self) -> f64 {
        self.inner.delta
    }
    #[getter]
    fn preset(&self) -> Option<&'static str> {
        self.inner.preset.map(|p| p.as_str())
    }

    /// Dense Hamiltonian as a list of rows.
    fn hamiltonian(&self) -> PyResult<Vec<Vec<f64>>> {
        let h = build_hamiltonian(&self.inner).py()?;
        let d = h.dim();
        Ok((0..d).map(|i| h.dense().row(i).to_vec()).collect())
    }

    /// Ascending eigenvalues.
    fn spectrum(&self) -> PyResult<Vec<f64>> {
        let h = build_hamiltonian(&self.inner).py()?;
        Ok(h.spectrum().py()?.eigenvalues)
    }

    /// Mean energy, passive energy and ergotropy of the all-up state.
    fn ergotropy<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let h = build_hamiltonian(&self.inner).py()?;
        let spec = h.spectrum().py()?;
        let up = Statevector::all_up(self.inner.n).py()?;
        let r = pure_ergotropy(&up, &h, &spec).py()?;
        let d = PyDict::new(py);
        d.set_item("mean_energy", r.mean_energy)?;
        d.set_item("passive_energy", r.passive_energy)?;
        d.set_item("ergotropy", r.ergotropy)?;
        d.set_item("ground_energy", spec.ground_energy())?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        let m = &self.inner;
        format!(
            "SpinModel({:?}, n={}, coupling={}, field={}, gamma={}, delta={})",
            m.preset.map(|p| p.as_str()).unwrap_or("custom"),
            m.n,
            m.coupling,
            m.field,
            m.gamma,
            m.delta
        )
    }
}

/// Work extracted from the all-up state by a given ansatz.
#[pyclass(name = "WorkCost", module = "spinwork", frozen)]
struct PyWorkCost {
    cost: spinwork::WorkCost,
    ergotropy: f64,
}

#[pymethods]
impl PyWorkCost {
    #[new]
    fn new(model: &PySpinModel, ansatz: &str) -> PyResult<Self> {
        let c: Connectivity = ansatz.parse().py()?;
        let n = model.inner.n;
        let h = build_hamiltonian(&model.inner).py()?;
        let spec = h.spectrum().py()?;
        let up = Statevector::all_up(n).py()?;
        let ergotropy = pure_ergotropy(&up, &h, &spec).py()?.ergotropy;
        let cost = spinwork::WorkCost::new(Ansatz::new(c, n).py()?, up, h).py()?;
        Ok(Self { cost, ergotropy })
    }

    #[getter]
    fn ergotropy(&self) -> f64 {
        self.ergotropy
    }

    #[getter]
    fn num_params(&self) -> usize {
        self.cost.num_params()
    }

    fn work(&self, theta: Vec<f64>) -> PyResult<f64> {
        self.cost.work(&theta).py()
    }

    #[pyo3(signature = (theta, method = "parameter-shift", epsilon = 1e-5))]
    fn gradient(&self, theta: Vec<f64>, method: &str, epsilon: f64) -> PyResult<Vec<f64>> {
        let m: GradientMethod = method.parse().py()?;
        optimizer::gradient(&self.cost, &theta, m, epsilon).py()
    }

    /// Gradient ascent from `theta0`.
    #[pyo3(signature = (theta0, step_size = 0.1, max_iters = 500, tol = 1e-6, window = 10, gradient = "parameter-shift"))]
    #[allow(clippy::too_many_arguments)]
    fn ascend<'py>(
        &self,
        py: Python<'py>,
        theta0: Vec<f64>,
        step_size: f64,
        max_iters: usize,
        tol: f64,
        window: usize,
        gradient: &str,
    ) -> PyResult<Bound<'py, PyDict>> {
        let cfg = config(step_size, max_iters, tol, window, gradient)?;
        let r = py.detach(|| optimizer::ascend(&self.cost, &theta0, &cfg)).py()?;
        let d = PyDict::new(py);
        d.set_item("theta", r.theta_opt.clone())?;
        d.set_item("work", r.w_opt)?;
        d.set_item("converged", r.converged)?;
        d.set_item("iterations", r.iterations)?;
        d.set_item("work_history", r.work_history())?;
        Ok(d)
    }
}

/// Ensemble of ascents from uniformly random starting angles.
#[pyfunction]
#[pyo3(signature = (model, ansatz, trials = experiment::DEFAULT_TRIALS, seed = 1, step_size = 0.1, max_iters = 500, tol = 1e-6, window = 10, gradient = "parameter-shift"))]
#[allow(clippy::too_many_arguments)]
fn run_trials<'py>(
    py: Python<'py>,
    model: &PySpinModel,
    ansatz: &str,
    trials: usize,
    seed: u64,
    step_size: f64,
    max_iters: usize,
    tol: f64,
    window: usize,
    gradient: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let c: Connectivity = ansatz.parse().py()?;
    let cfg = config(step_size, max_iters, tol, window, gradient)?;
    let m = model.inner.clone();
    let e = py.detach(|| experiment::run_trials(&m, c, trials, seed, &cfg)).py()?;
    let d = PyDict::new(py);
    d.set_item("ergotropy", e.ergotropy)?;
    d.set_item("final_mean", e.final_mean)?;
    d.set_item("final_std", e.final_std)?;
    d.set_item("efficiency", e.efficiency().ok())?;
    d.set_item("final_values", e.final_values.clone())?;
    d.set_item("per_iteration_mean", e.per_iteration_mean.clone())?;
    d.set_item("per_iteration_std", e.per_iteration_std.clone())?;
    d.set_item("converged", e.converged)?;
    Ok(d)
}

/// Efficiency over a range of n, gamma or delta; one dict per (value, ansatz).
#[pyfunction]
#[pyo3(signature = (preset, ansatze, axis, values, n = 2, coupling = spinwork::DEFAULT_COUPLING, field = spinwork::DEFAULT_FIELD, gamma = None, delta = None, trials = experiment::DEFAULT_TRIALS, seed = 1))]
#[allow(clippy::too_many_arguments)]
fn sweep<'py>(
    py: Python<'py>,
    preset: &str,
    ansatze: Vec<String>,
    axis: &str,
    values: Vec<f64>,
    n: usize,
    coupling: f64,
    field: f64,
    gamma: Option<f64>,
    delta: Option<f64>,
    trials: usize,
    seed: u64,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let template = SweepTemplate {
        preset: Some(preset.parse::<Preset>().py()?),
        n,
        coupling,
        field,
        gamma,
        delta,
    };
    let conns = ansatze
        .iter()
        .map(|a| a.parse::<Connectivity>())
        .collect::<spinwork::Result<Vec<_>>>()
        .py()?;
    let axis: SweepAxis = axis.parse().py()?;
    let cfg = OptimizerConfig::default();
    let records = py
        .detach(|| experiment::sweep(&template, &conns, axis, &values, trials, seed, &cfg))
        .py()?;
    records
        .iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("n", r.n)?;
            d.set_item("gamma", r.gamma)?;
            d.set_item("delta", r.delta)?;
            d.set_item("ansatz", r.connectivity.tag())?;
            d.set_item("ergotropy", r.ergotropy)?;
            d.set_item("mean_work", r.mean_work)?;
            d.set_item("std_work", r.std_work)?;
            d.set_item("eta", r.eta)?;
            Ok(d)
        })
        .collect()
}

/// Two-qubit work grid over [0, pi]^2; `work[i][j]` sits at `(axis[i], axis[j])`.
#[pyfunction]
#[pyo3(signature = (model, ansatz = "nc", resolution = 101))]
fn landscape<'py>(py: Python<'py>, model: &PySpinModel, ansatz: &str, resolution: usize) -> PyResult<Bound<'py, PyDict>> {
    let c: Connectivity = ansatz.parse().py()?;
    let m = model.inner.clone();
    let g = py
        .detach(|| experiment::landscape_grid(&m, c, resolution, 0, 1, &OptimizerConfig::default()))
        .py()?;
    let rows: Vec<Vec<f64>> = g.work.chunks(g.resolution).map(<[f64]>::to_vec).collect();
    let d = PyDict::new(py);
    d.set_item("axis", g.axis.clone())?;
    d.set_item("work", rows)?;
    d.set_item("ergotropy", g.ergotropy)?;
    Ok(d)
}

#[pymodule]
#[pyo3(name = "spinwork")]
fn spinwork_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySpinModel>()?;
    m.add_class::<PyWorkCost>()?;
    m.add_function(wrap_pyfunction!(run_trials, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(landscape, m)?)?;
    m.add("PRESETS", Preset::ALL.iter().map(|p| p.as_str()).collect::<Vec<_>>())?;
    m.add("ANSATZE", Connectivity::ALL.iter().map(|c| c.tag()).collect::<Vec<_>>())?;
    Ok(())
}
