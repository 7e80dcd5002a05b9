//! Fixed-step gradient ascent on the extracted work.

use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::str::FromStr;

use crate::ergotropy::WorkCost;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GradientMethod {
    /// `∂W/∂θ_j = W(θ + π/4 e_j) − W(θ − π/4 e_j)`, exact for `exp(−iθσ_y)`.
    ParameterShift,
    /// Central differences with step `fd_epsilon`.
    FiniteDifference,
}

impl fmt::Display for GradientMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GradientMethod::ParameterShift => "parameter-shift",
            GradientMethod::FiniteDifference => "finite-difference",
        })
    }
}

impl FromStr for GradientMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "parameter-shift" | "ps" => Ok(GradientMethod::ParameterShift),
            "finite-difference" | "fd" => Ok(GradientMethod::FiniteDifference),
            _ => Err(Error::Argument(format!("unknown gradient method '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerConfig {
    /// k in `θ ← θ + k ∇W`.
    pub step_size: f64,
    pub max_iters: usize,
    /// Converged once every |ΔW| in the last `convergence_window` steps is
    /// below this.
    pub convergence_tol: f64,
    pub convergence_window: usize,
    pub gradient_method: GradientMethod,
    pub fd_epsilon: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            step_size: 0.1,
            max_iters: 500,
            convergence_tol: 1e-6,
            convergence_window: 10,
            gradient_method: GradientMethod::ParameterShift,
            fd_epsilon: 1e-5,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step_size > 0.0 && self.step_size.is_finite()) {
            return Err(Error::Config(format!("step size must be positive, got {}", self.step_size)));
        }
        if self.max_iters == 0 {
            return Err(Error::Config("max_iters must be at least 1".into()));
        }
        if self.convergence_tol.is_nan() || self.convergence_tol <= 0.0 {
            return Err(Error::Config(format!(
                "convergence tolerance must be positive, got {}",
                self.convergence_tol
            )));
        }
        if self.convergence_window == 0 {
            return Err(Error::Config("convergence window must be at least 1".into()));
        }
        if self.fd_epsilon.is_nan() || self.fd_epsilon <= 0.0 {
            return Err(Error::Config(format!(
                "finite-difference step must be positive, got {}",
                self.fd_epsilon
            )));
        }
        Ok(())
    }
}

/// One recorded optimizer state.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryPoint {
    pub theta: Vec<f64>,
    pub work: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizeResult {
    pub theta_opt: Vec<f64>,
    pub w_opt: f64,
    /// Starting point followed by one entry per update.
    pub trajectory: Vec<TrajectoryPoint>,
    pub converged: bool,
    pub iterations: usize,
}

impl OptimizeResult {
    pub fn work_history(&self) -> Vec<f64> {
        self.trajectory.iter().map(|p| p.work).collect()
    }
}

pub fn gradient(cost: &WorkCost, theta: &[f64], method: GradientMethod, fd_epsilon: f64) -> Result<Vec<f64>> {
    let shift = match method {
        GradientMethod::ParameterShift => FRAC_PI_4,
        GradientMethod::FiniteDifference => fd_epsilon,
    };
    let mut probe = theta.to_vec();
    let mut grad = Vec::with_capacity(theta.len());
    for j in 0..theta.len() {
        probe[j] = theta[j] + shift;
        let plus = cost.work(&probe)?;
        probe[j] = theta[j] - shift;
        let minus = cost.work(&probe)?;
        probe[j] = theta[j];
        grad.push(match method {
            GradientMethod::ParameterShift => plus - minus,
            GradientMethod::FiniteDifference => (plus - minus) / (2.0 * shift),
        });
    }
    Ok(grad)
}

/// Gradient ascent from `theta0` until the work plateaus or `max_iters`
/// updates have been made. Angles are not wrapped.
pub fn ascend(cost: &WorkCost, theta0: &[f64], config: &OptimizerConfig) -> Result<OptimizeResult> {
    config.validate()?;
    if theta0.len() != cost.num_params() {
        return Err(Error::Argument(format!(
            "expected {} initial angles, got {}",
            cost.num_params(),
            theta0.len()
        )));
    }

    let mut theta = theta0.to_vec();
    let mut work = cost.work(&theta)?;
    let mut trajectory = vec![TrajectoryPoint {
        theta: theta.clone(),
        work,
    }];
    let non_finite = |iteration: usize, theta: &[f64], trajectory: &[TrajectoryPoint]| Error::NonFinite {
        iteration,
        theta: theta.to_vec(),
        work_history: trajectory.iter().map(|p| p.work).collect(),
    };
    if !work.is_finite() {
        return Err(non_finite(0, &theta, &trajectory));
    }

    let mut quiet_steps = 0;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < config.max_iters {
        let grad = gradient(cost, &theta, config.gradient_method, config.fd_epsilon)?;
        if grad.iter().any(|g| !g.is_finite()) {
            return Err(non_finite(iterations, &theta, &trajectory));
        }
        for (t, g) in theta.iter_mut().zip(&grad) {
            *t += config.step_size * g;
        }
        iterations += 1;
        let next = cost.work(&theta)?;
        trajectory.push(TrajectoryPoint {
            theta: theta.clone(),
            work: next,
        });
        if !next.is_finite() {
            return Err(non_finite(iterations, &theta, &trajectory));
        }
        if (next - work).abs() < config.convergence_tol {
            quiet_steps += 1;
        } else {
            quiet_steps = 0;
        }
        work = next;
        if quiet_steps >= config.convergence_window {
            converged = true;
            break;
        }
    }

    Ok(OptimizeResult {
        theta_opt: theta,
        w_opt: work,
        trajectory,
        converged,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::{Ansatz, Connectivity};
    use crate::hamiltonian::{build_hamiltonian, Preset, SpinModel};
    use crate::statevec::Statevector;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn cost(preset: Preset, c: Connectivity, n: usize) -> WorkCost {
        let h = build_hamiltonian(&SpinModel::standard(preset, n).unwrap()).unwrap();
        WorkCost::new(Ansatz::new(c, n).unwrap(), Statevector::all_up(n).unwrap(), h).unwrap()
    }

    /// Maximiser of the two-qubit XX product-circuit work: θ₁ = −θ₂ with
    /// cos 2θ = −1/2, i.e. θ₁ = π/3, θ₂ = 2π/3 (mod π).
    const NC_ARGMAX: [f64; 2] = [PI / 3.0, 2.0 * PI / 3.0];

    #[test]
    fn gradient_vanishes_at_nc_optimum() {
        let c = cost(Preset::Xx, Connectivity::None, 2);
        assert!((c.work(&NC_ARGMAX).unwrap() - 2.25).abs() < 1e-12);
        let g = gradient(&c, &NC_ARGMAX, GradientMethod::ParameterShift, 0.0).unwrap();
        assert!(g.iter().all(|x| x.abs() < 1e-6), "{g:?}");
    }

    #[test]
    fn gradient_at_origin_is_the_unrolled_shift() {
        let c = cost(Preset::Xxx, Connectivity::Ring, 3);
        let g = gradient(&c, &[0.0; 3], GradientMethod::ParameterShift, 0.0).unwrap();
        for j in 0..3 {
            let mut p = [0.0; 3];
            p[j] = FRAC_PI_4;
            let mut m = [0.0; 3];
            m[j] = -FRAC_PI_4;
            assert_eq!(g[j], c.work(&p).unwrap() - c.work(&m).unwrap());
        }
    }

    #[test]
    fn parameter_shift_matches_finite_differences_xxz_ring() {
        let h = build_hamiltonian(
            &SpinModel::from_preset(Preset::Xxz, 3, -1.0, 0.5, None, Some(0.6)).unwrap(),
        )
        .unwrap();
        let c = WorkCost::new(
            Ansatz::new(Connectivity::Ring, 3).unwrap(),
            Statevector::all_up(3).unwrap(),
            h,
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let theta: Vec<f64> = (0..3).map(|_| rng.random_range(0.0..PI)).collect();
            let ps = gradient(&c, &theta, GradientMethod::ParameterShift, 0.0).unwrap();
            let fd = gradient(&c, &theta, GradientMethod::FiniteDifference, 1e-5).unwrap();
            for (a, b) in ps.iter().zip(&fd) {
                assert!((a - b).abs() < 1e-6, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn nc_dimer_ascends_to_global_maximum() {
        let c = cost(Preset::Xx, Connectivity::None, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let theta0 = [rng.random_range(0.0..PI), rng.random_range(0.0..PI)];
            let r = ascend(&c, &theta0, &OptimizerConfig::default()).unwrap();
            assert!(r.converged);
            assert!((r.w_opt - 2.25).abs() < 1e-4, "{theta0:?} -> {}", r.w_opt);
        }
    }

    #[test]
    fn start_at_maximum_stays_put() {
        let c = cost(Preset::Xx, Connectivity::None, 2);
        let cfg = OptimizerConfig::default();
        let r = ascend(&c, &NC_ARGMAX, &cfg).unwrap();
        assert!(r.converged);
        assert!(r.iterations <= cfg.convergence_window);
        for (a, b) in r.theta_opt.iter().zip(&NC_ARGMAX) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn trajectory_bookkeeping() {
        let c = cost(Preset::Xxx, Connectivity::Linear, 3);
        let r = ascend(&c, &[0.3, 1.0, 2.0], &OptimizerConfig::default()).unwrap();
        assert_eq!(r.trajectory.len(), r.iterations + 1);
        assert_eq!(r.trajectory.last().unwrap().work, r.w_opt);
        assert_eq!(r.trajectory.last().unwrap().theta, r.theta_opt);
    }

    #[test]
    fn max_iters_caps_updates() {
        let c = cost(Preset::Xxx, Connectivity::Linear, 3);
        let cfg = OptimizerConfig {
            max_iters: 3,
            ..OptimizerConfig::default()
        };
        let r = ascend(&c, &[0.3, 1.0, 2.0], &cfg).unwrap();
        assert_eq!(r.iterations, 3);
        assert!(!r.converged);
    }

    #[test]
    fn repeated_runs_are_bit_identical() {
        let c = cost(Preset::Tfi, Connectivity::AllToAll, 4);
        let cfg = OptimizerConfig::default();
        let a = ascend(&c, &[0.1, 0.7, 1.9, 2.5], &cfg).unwrap();
        let b = ascend(&c, &[0.1, 0.7, 1.9, 2.5], &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bad_configs_are_rejected() {
        let c = cost(Preset::Xx, Connectivity::None, 2);
        for cfg in [
            OptimizerConfig { step_size: 0.0, ..Default::default() },
            OptimizerConfig { max_iters: 0, ..Default::default() },
            OptimizerConfig { convergence_tol: 0.0, ..Default::default() },
        ] {
            assert!(matches!(ascend(&c, &[0.1, 0.2], &cfg), Err(Error::Config(_))));
        }
        assert!(matches!(
            ascend(&c, &[0.1], &OptimizerConfig::default()),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn gradient_method_names() {
        assert_eq!("ps".parse::<GradientMethod>().unwrap(), GradientMethod::ParameterShift);
        assert_eq!(
            GradientMethod::FiniteDifference.to_string().parse::<GradientMethod>().unwrap(),
            GradientMethod::FiniteDifference
        );
    }
}
