//! Ensembles of randomly initialised optimizations, parameter sweeps and
//! two-angle landscapes.
//!
//! Every trial owns a ChaCha8 generator keyed by `(seed, point)` and streamed
//! by the trial index, so results do not depend on how trials are scheduled
//! across rayon workers. Aggregation always happens in trial-index order.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::ansatz::{Ansatz, Connectivity};
use crate::ergotropy::{efficiency, pure_ergotropy, WorkCost};
use crate::hamiltonian::{build_hamiltonian, Preset, SpinModel};
use crate::optimizer::{ascend, gradient, OptimizerConfig, TrajectoryPoint};
use crate::statevec::Statevector;
use crate::{Error, Result};

/// Trial count used when none is given.
pub const DEFAULT_TRIALS: usize = 2000;

/// Stream offset for landscape trajectories so they never share a generator
/// with ensemble trials.
const LANDSCAPE_POINT: u64 = u64::MAX;

/// Generator for trial `trial` of sweep point `point`.
pub fn trial_rng(seed: u64, point: u64, trial: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&point.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial);
    rng
}

/// Initial angles of a trial, uniform on `[0, π]`.
pub fn initial_angles(seed: u64, point: u64, trial: u64, n: usize) -> Vec<f64> {
    let mut rng = trial_rng(seed, point, trial);
    (0..n).map(|_| rng.random_range(0.0..=PI)).collect()
}

/// Statistics of `trials` independent ascents.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialEnsemble {
    pub trials: usize,
    pub seed: u64,
    pub point: u64,
    pub ergotropy: f64,
    /// ⟨W⟩ at each iteration; finished trials contribute their final value.
    pub per_iteration_mean: Vec<f64>,
    pub per_iteration_std: Vec<f64>,
    pub final_mean: f64,
    pub final_std: f64,
    pub final_values: Vec<f64>,
    pub iterations: Vec<usize>,
    pub converged: usize,
}

impl TrialEnsemble {
    pub fn efficiency(&self) -> Result<f64> {
        efficiency(self.final_mean, self.ergotropy)
    }
}

/// Population mean and standard deviation.
fn mean_std(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let (count, sum) = xs.clone().fold((0usize, 0.0), |(c, s), x| (c + 1, s + x));
    let mean = sum / count as f64;
    let var = xs.map(|x| (x - mean).powi(2)).sum::<f64>() / count as f64;
    (mean, var.sqrt())
}

fn cost_for(model: &SpinModel, connectivity: Connectivity) -> Result<(WorkCost, f64)> {
    let h = build_hamiltonian(model)?;
    let spec = h.spectrum()?;
    let input = Statevector::all_up(model.n)?;
    let report = pure_ergotropy(&input, &h, &spec)?;
    let cost = WorkCost::new(Ansatz::new(connectivity, model.n)?, input, h)?;
    Ok((cost, report.ergotropy))
}

/// Runs `trials` ascents on the all-up input.
pub fn run_trials(
    model: &SpinModel,
    connectivity: Connectivity,
    trials: usize,
    seed: u64,
    config: &OptimizerConfig,
) -> Result<TrialEnsemble> {
    let (cost, erg) = cost_for(model, connectivity)?;
    run_ensemble(&cost, erg, trials, seed, 0, config)
}

/// Runs an ensemble for an already assembled cost at sweep point `point`.
pub fn run_ensemble(
    cost: &WorkCost,
    ergotropy: f64,
    trials: usize,
    seed: u64,
    point: u64,
    config: &OptimizerConfig,
) -> Result<TrialEnsemble> {
    if trials == 0 {
        return Err(Error::Config("trial count must be at least 1".into()));
    }
    config.validate()?;
    let n = cost.num_params();
    let outcomes: Vec<Result<(Vec<f64>, usize, bool)>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let theta0 = initial_angles(seed, point, t as u64, n);
            let r = ascend(cost, &theta0, config).map_err(|e| Error::Trial {
                index: t,
                seed,
                point,
                source: Box::new(e),
            })?;
            Ok((r.work_history(), r.iterations, r.converged))
        })
        .collect();

    let mut histories = Vec::with_capacity(trials);
    let mut iterations = Vec::with_capacity(trials);
    let mut converged = 0;
    for o in outcomes {
        let (h, it, conv) = o?;
        histories.push(h);
        iterations.push(it);
        converged += conv as usize;
    }

    let len = histories.iter().map(Vec::len).max().unwrap_or(0);
    let at = |h: &Vec<f64>, i: usize| *h.get(i).unwrap_or_else(|| h.last().unwrap());
    let mut per_iteration_mean = Vec::with_capacity(len);
    let mut per_iteration_std = Vec::with_capacity(len);
    for i in 0..len {
        let (m, s) = mean_std(histories.iter().map(|h| at(h, i)));
        per_iteration_mean.push(m);
        per_iteration_std.push(s);
    }
    let final_values: Vec<f64> = histories.iter().map(|h| *h.last().unwrap()).collect();
    let (final_mean, final_std) = mean_std(final_values.iter().copied());

    Ok(TrialEnsemble {
        trials,
        seed,
        point,
        ergotropy,
        per_iteration_mean,
        per_iteration_std,
        final_mean,
        final_std,
        final_values,
        iterations,
        converged,
    })
}

/// Model parameter varied by a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepAxis {
    N,
    Gamma,
    Delta,
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepAxis::N => "n",
            SweepAxis::Gamma => "gamma",
            SweepAxis::Delta => "delta",
        })
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "n" => Ok(SweepAxis::N),
            "gamma" => Ok(SweepAxis::Gamma),
            "delta" => Ok(SweepAxis::Delta),
            _ => Err(Error::Argument(format!(
                "unknown sweep axis '{s}' (expected n, gamma or delta)"
            ))),
        }
    }
}

/// Fixed part of a sweep; the swept field is overridden per point.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepTemplate {
    pub preset: Option<Preset>,
    pub n: usize,
    pub coupling: f64,
    pub field: f64,
    pub gamma: Option<f64>,
    pub delta: Option<f64>,
}

impl SweepTemplate {
    pub fn model(&self) -> Result<SpinModel> {
        match self.preset {
            Some(p) => SpinModel::from_preset(p, self.n, self.coupling, self.field, self.gamma, self.delta),
            None => SpinModel::new(
                self.n,
                self.coupling,
                self.field,
                self.gamma.unwrap_or(0.0),
                self.delta.unwrap_or(0.0),
            ),
        }
    }

    /// Model at one sweep value.
    pub fn model_at(&self, axis: SweepAxis, value: f64) -> Result<SpinModel> {
        let mut t = self.clone();
        match axis {
            SweepAxis::N => {
                if value.fract() != 0.0 || value < 0.0 {
                    return Err(Error::Argument(format!("chain length {value} is not a whole number")));
                }
                t.n = value as usize;
            }
            SweepAxis::Gamma => t.gamma = Some(value),
            SweepAxis::Delta => t.delta = Some(value),
        }
        t.model()
    }
}

/// One (connectivity, sweep value) outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub preset: Option<Preset>,
    pub n: usize,
    pub coupling: f64,
    pub field: f64,
    pub gamma: f64,
    pub delta: f64,
    pub connectivity: Connectivity,
    pub trials: usize,
    pub seed: u64,
    pub ergotropy: f64,
    pub mean_work: f64,
    pub std_work: f64,
    pub eta: f64,
}

/// Ensembles for every `(value, connectivity)` pair, values outermost.
///
/// All points are validated before any optimization starts. Point `p` (in
/// output order) draws its initial angles from generator key `(seed, p)`.
pub fn sweep(
    template: &SweepTemplate,
    connectivities: &[Connectivity],
    axis: SweepAxis,
    values: &[f64],
    trials: usize,
    seed: u64,
    config: &OptimizerConfig,
) -> Result<Vec<SweepRecord>> {
    if connectivities.is_empty() || values.is_empty() {
        return Err(Error::Argument("sweep needs at least one ansatz and one value".into()));
    }
    config.validate()?;
    let models = values
        .iter()
        .map(|&v| template.model_at(axis, v))
        .collect::<Result<Vec<_>>>()?;
    for m in &models {
        for &c in connectivities {
            Ansatz::new(c, m.n)?;
        }
    }

    let mut records = Vec::with_capacity(models.len() * connectivities.len());
    for (vi, model) in models.iter().enumerate() {
        let h = build_hamiltonian(model)?;
        let spec = h.spectrum()?;
        let input = Statevector::all_up(model.n)?;
        let erg = pure_ergotropy(&input, &h, &spec)?.ergotropy;
        for (ci, &c) in connectivities.iter().enumerate() {
            let point = (vi * connectivities.len() + ci) as u64;
            let cost = WorkCost::new(Ansatz::new(c, model.n)?, input.clone(), h.clone())?;
            let ens = run_ensemble(&cost, erg, trials, seed, point, config)?;
            records.push(SweepRecord {
                preset: model.preset,
                n: model.n,
                coupling: model.coupling,
                field: model.field,
                gamma: model.gamma,
                delta: model.delta,
                connectivity: c,
                trials,
                seed,
                ergotropy: erg,
                mean_work: ens.final_mean,
                std_work: ens.final_std,
                eta: ens.efficiency()?,
            });
        }
    }
    Ok(records)
}

/// `values` from `from` to `to` inclusive in steps of `step`, snapped to the
/// step lattice so that e.g. −1 → 1 by 0.25 gives exactly nine points.
pub fn axis_values(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 || !from.is_finite() || !to.is_finite() || to < from {
        return Err(Error::Argument(format!(
            "invalid range {from}..={to} with step {step}"
        )));
    }
    let count = ((to - from) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| from + step * i as f64).collect())
}

/// Work and gradient on a uniform grid over `[0, π]²` for a two-qubit chain.
#[derive(Clone, Debug, PartialEq)]
pub struct LandscapeGrid {
    pub resolution: usize,
    pub connectivity: Connectivity,
    pub ergotropy: f64,
    /// Grid coordinates shared by both angles, endpoints included.
    pub axis: Vec<f64>,
    /// `work[i * resolution + j]` is W at `(axis[i], axis[j])`.
    pub work: Vec<f64>,
    pub gradient: Vec<[f64; 2]>,
    pub trajectories: Vec<Vec<TrajectoryPoint>>,
}

impl LandscapeGrid {
    pub fn work_at(&self, i: usize, j: usize) -> f64 {
        self.work[i * self.resolution + j]
    }

    /// Largest grid value and its indices.
    pub fn max(&self) -> (f64, usize, usize) {
        let (k, w) = self
            .work
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (k, &w)| if w > best.1 { (k, w) } else { best });
        (w, k / self.resolution, k % self.resolution)
    }
}

pub fn landscape_grid(
    model: &SpinModel,
    connectivity: Connectivity,
    resolution: usize,
    trajectories: usize,
    seed: u64,
    config: &OptimizerConfig,
) -> Result<LandscapeGrid> {
    if model.n != 2 {
        return Err(Error::Argument(format!(
            "landscapes need exactly two qubits, got {}",
            model.n
        )));
    }
    if resolution < 2 {
        return Err(Error::Argument(format!("grid resolution must be at least 2, got {resolution}")));
    }
    let (cost, erg) = cost_for(model, connectivity)?;
    let axis: Vec<f64> = (0..resolution)
        .map(|i| PI * i as f64 / (resolution - 1) as f64)
        .collect();
    let cells: Vec<Result<(f64, [f64; 2])>> = (0..resolution * resolution)
        .into_par_iter()
        .map(|k| {
            let theta = [axis[k / resolution], axis[k % resolution]];
            let w = cost.work(&theta)?;
            let g = gradient(&cost, &theta, config.gradient_method, config.fd_epsilon)?;
            Ok((w, [g[0], g[1]]))
        })
        .collect();
    let mut work = Vec::with_capacity(cells.len());
    let mut grad = Vec::with_capacity(cells.len());
    for c in cells {
        let (w, g) = c?;
        work.push(w);
        grad.push(g);
    }
    let paths = (0..trajectories)
        .map(|t| {
            let theta0 = initial_angles(seed, LANDSCAPE_POINT, t as u64, 2);
            ascend(&cost, &theta0, config).map(|r| r.trajectory)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LandscapeGrid {
        resolution,
        connectivity,
        ergotropy: erg,
        axis,
        work,
        gradient: grad,
        trajectories: paths,
    })
}
