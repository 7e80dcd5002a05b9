use std::f64::consts::PI;

use proptest::prelude::*;
use spinwork::ergotropy::pure_ergotropy;
use spinwork::hamiltonian::build_hamiltonian;
use spinwork::optimizer::{ascend, gradient};
use spinwork::{
    efficiency, Ansatz, Connectivity, GradientMethod, OptimizerConfig, SpinModel, Statevector, WorkCost,
};

fn model_strategy(max_n: usize) -> impl Strategy<Value = SpinModel> {
    (2..=max_n, -2.0..2.0f64, -2.0..2.0f64, -1.0..=1.0f64, -1.5..1.5f64)
        .prop_map(|(n, j, h, g, d)| SpinModel::new(n, j, h, g, d).unwrap())
}

fn conn_strategy() -> impl Strategy<Value = Connectivity> {
    prop::sample::select(Connectivity::ALL.to_vec())
}

fn setup(m: &SpinModel, c: Connectivity) -> (WorkCost, f64, f64) {
    let h = build_hamiltonian(m).unwrap();
    let spec = h.spectrum().unwrap();
    let up = Statevector::all_up(m.n).unwrap();
    let r = pure_ergotropy(&up, &h, &spec).unwrap();
    (
        WorkCost::new(Ansatz::new(c, m.n).unwrap(), up, h).unwrap(),
        r.ergotropy,
        r.mean_energy - spec.ground_energy(),
    )
}

fn angles(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..PI, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hamiltonian_is_symmetric_with_real_expectations(m in model_strategy(6), seed in any::<u64>()) {
        let h = build_hamiltonian(&m).unwrap();
        prop_assert_eq!(h.dense().asymmetry(), 0.0);
        let spec = h.spectrum().unwrap();
        prop_assert!(spec.max_residual(&h) < 1e-9);
        prop_assert!(spec.orthonormality_error() < 1e-10);
        let mut psi = Statevector::all_up(m.n).unwrap();
        for q in 0..m.n {
            psi.apply_ry(q, (seed.rotate_left(q as u32 * 7) % 1000) as f64 / 300.0).unwrap();
        }
        let e = psi.expectation(&h).unwrap();
        prop_assert!(e >= spec.ground_energy() - 1e-9);
        prop_assert!(e <= spec.eigenvalues[spec.dim() - 1] + 1e-9);
    }

    #[test]
    fn ergotropy_bounds(m in model_strategy(6)) {
        let (_, erg, gap) = setup(&m, Connectivity::None);
        prop_assert!(erg >= -1e-12);
        prop_assert!((erg - gap).abs() < 1e-9);
    }

    #[test]
    fn work_never_exceeds_ergotropy(m in model_strategy(6), c in conn_strategy(), seed in any::<u64>()) {
        let (cost, erg, _) = setup(&m, c);
        let theta: Vec<f64> = (0..m.n).map(|q| ((seed >> (q * 5)) % 997) as f64 / 997.0 * PI).collect();
        prop_assert!(cost.work(&theta).unwrap() <= erg + 1e-9);
    }

    #[test]
    fn fast_and_statevector_kernels_agree(m in model_strategy(5), c in conn_strategy(), t in angles(5)) {
        let (cost, _, _) = setup(&m, c);
        let theta = &t[..m.n];
        let a = cost.work(theta).unwrap();
        let b = cost.work_statevector(theta).unwrap();
        prop_assert!((a - b).abs() < 1e-10, "{} vs {}", a, b);
    }

    #[test]
    fn work_is_pi_periodic(m in model_strategy(5), c in conn_strategy(), t in angles(5), k in 0usize..5) {
        let (cost, _, _) = setup(&m, c);
        let theta = t[..m.n].to_vec();
        let mut shifted = theta.clone();
        shifted[k % m.n] += PI;
        prop_assert!((cost.work(&theta).unwrap() - cost.work(&shifted).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn parameter_shift_is_exact(m in model_strategy(5), c in conn_strategy(), t in angles(5)) {
        let (cost, _, _) = setup(&m, c);
        let theta = &t[..m.n];
        let ps = gradient(&cost, theta, GradientMethod::ParameterShift, 0.0).unwrap();
        let fd = gradient(&cost, theta, GradientMethod::FiniteDifference, 1e-5).unwrap();
        for (a, b) in ps.iter().zip(&fd) {
            prop_assert!((a - b).abs() < 1e-6, "{} vs {}", a, b);
        }
    }

    #[test]
    fn ascent_bookkeeping(m in model_strategy(4), c in conn_strategy(), t in angles(4)) {
        let (cost, erg, _) = setup(&m, c);
        let theta0 = &t[..m.n];
        let cfg = OptimizerConfig { max_iters: 50, ..OptimizerConfig::default() };
        let r = ascend(&cost, theta0, &cfg).unwrap();
        prop_assert_eq!(r.trajectory.len(), r.iterations + 1);
        prop_assert_eq!(&r.trajectory[0].theta[..], theta0);
        let last = r.trajectory.last().unwrap();
        prop_assert_eq!(&last.theta, &r.theta_opt);
        prop_assert_eq!(last.work, r.w_opt);
        prop_assert!(r.trajectory.iter().all(|p| p.work <= erg + 1e-9));
        prop_assert!(r.converged || r.iterations == cfg.max_iters);
    }

    #[test]
    fn efficiency_is_a_fraction(w in -1.0..10.0f64, erg in 0.01..10.0f64) {
        let w = w.min(erg);
        let e = efficiency(w, erg).unwrap();
        prop_assert!(e <= 1.0);
        prop_assert!((e - w / erg).abs() < 1e-12);
    }

    #[test]
    fn cnot_layer_is_a_permutation(n in 2usize..=8, c in conn_strategy()) {
        let perm = Ansatz::new(c, n).unwrap().cnot_permutation();
        let mut seen = vec![false; 1 << n];
        for &p in &perm {
            prop_assert!(!seen[p]);
            seen[p] = true;
        }
    }
}
