//! Fast self checks behind `spinwork validate`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinwork::ergotropy::pure_ergotropy;
use spinwork::hamiltonian::build_hamiltonian;
use spinwork::optimizer::gradient;
use spinwork::{
    Ansatz, Connectivity, GradientMethod, HamiltonianMatrix, Preset, SpinModel, Statevector, WorkCost,
};

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub measured: String,
    pub expected: &'static str,
    pub passed: bool,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<4}  {:<22} {:<44} expected {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.expected
        )
    }
}

fn check(name: &'static str, expected: &'static str, measured: String, passed: bool) -> Check {
    Check {
        name,
        measured,
        expected,
        passed,
    }
}

fn xx_dimer(field: f64) -> HamiltonianMatrix {
    let m = SpinModel::from_preset(Preset::Xx, 2, -1.0, field, None, None).expect("valid preset");
    build_hamiltonian(&m).expect("valid model")
}

fn grid_max(cost: &WorkCost, resolution: usize) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for i in 0..resolution {
        for j in 0..resolution {
            let t = [
                PI * i as f64 / (resolution - 1) as f64,
                PI * j as f64 / (resolution - 1) as f64,
            ];
            best = best.max(cost.work(&t).unwrap_or(f64::NAN));
        }
    }
    best
}

/// Runs every check. `flip_field` builds the reference dimer with −h, which
/// must make the spectrum check fail.
pub fn run_checks(flip_field: bool) -> Vec<Check> {
    let field = if flip_field { -0.5 } else { 0.5 };
    let h = xx_dimer(field);
    let up = Statevector::all_up(2).expect("two qubits");
    let mut out = Vec::new();

    match h.spectrum() {
        Ok(spec) => {
            let dev = spec
                .eigenvalues
                .iter()
                .zip([-2.0, -1.0, 1.0, 2.0])
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            let e_up = up.expectation(&h).unwrap_or(f64::NAN);
            out.push(check(
                "xx dimer spectrum",
                "{-2,-1,1,2}, all-up on +1",
                format!("{:.9?}, all-up at {e_up:+.9}", spec.eigenvalues),
                dev < 1e-9 && (e_up - 1.0).abs() < 1e-9,
            ));
            let g = spec.eigenvector(0);
            let overlap = (g[0b10] - g[0b01]) * FRAC_1_SQRT_2;
            out.push(check(
                "singlet ground state",
                "overlap^2 > 1 - 1e-9",
                format!("{:.12}", overlap * overlap),
                overlap * overlap > 1.0 - 1e-9,
            ));
            match pure_ergotropy(&up, &h, &spec) {
                Ok(r) => out.push(check(
                    "all-up ergotropy",
                    "E = 1, ergotropy = 3",
                    format!("E = {:.12}, ergotropy = {:.12}", r.mean_energy, r.ergotropy),
                    (r.mean_energy - 1.0).abs() < 1e-9 && (r.ergotropy - 3.0).abs() < 1e-9,
                )),
                Err(e) => out.push(check("all-up ergotropy", "E = 1, ergotropy = 3", e.to_string(), false)),
            }
            out.push(check(
                "eigen residual",
                "< 1e-9",
                format!("{:.3e}", spec.max_residual(&h)),
                spec.max_residual(&h) < 1e-9,
            ));
        }
        Err(e) => out.push(check("xx dimer spectrum", "{-2,-1,1,2}", e.to_string(), false)),
    }

    for (c, name, target) in [
        (Connectivity::None, "nc grid optimum", 2.25),
        (Connectivity::Linear, "lin grid optimum", 3.0),
    ] {
        let cost = WorkCost::new(Ansatz::new(c, 2).expect("two qubits"), up.clone(), h.clone())
            .expect("consistent sizes");
        let best = grid_max(&cost, 401);
        out.push(check(
            name,
            if c == Connectivity::None { "2.25 +- 1e-3" } else { "3.0 +- 1e-3" },
            format!("{best:.9}"),
            (best - target).abs() < 1e-3,
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst_grad = 0.0_f64;
    let mut worst_bound = f64::NEG_INFINITY;
    let mut worst_norm = 0.0_f64;
    for case in 0..100 {
        let preset = Preset::ALL[case % Preset::ALL.len()];
        let conn = Connectivity::ALL[(case / Preset::ALL.len()) % Connectivity::ALL.len()];
        let n = rng.random_range(2..=4);
        let gamma = match preset {
            Preset::Tfi => Some(if rng.random_bool(0.5) { 1.0 } else { -1.0 }),
            Preset::Xy | Preset::Xyz => Some(rng.random_range(-1.0..=1.0)),
            _ => None,
        };
        let delta = match preset {
            Preset::Xxz | Preset::Xyz => Some(rng.random_range(-1.0..=1.0)),
            _ => None,
        };
        let model = SpinModel::from_preset(preset, n, -1.0, 0.5, gamma, delta).expect("sampled inside the preset");
        let hm = build_hamiltonian(&model).expect("valid model");
        let spec = hm.spectrum().expect("small matrix");
        let input = Statevector::all_up(n).expect("valid size");
        let erg = pure_ergotropy(&input, &hm, &spec).expect("sizes match").ergotropy;
        let cost = WorkCost::new(Ansatz::new(conn, n).expect("valid size"), input, hm).expect("sizes match");
        for _ in 0..10 {
            let theta: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..PI)).collect();
            let w = cost.work(&theta).unwrap_or(f64::NAN);
            worst_bound = worst_bound.max(w - erg);
            let out_state = cost.output_state(&theta).expect("sizes match");
            worst_norm = worst_norm.max((out_state.norm_sqr() - 1.0).abs());
        }
        let theta: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..PI)).collect();
        let ps = gradient(&cost, &theta, GradientMethod::ParameterShift, 0.0).expect("sizes match");
        let fd = gradient(&cost, &theta, GradientMethod::FiniteDifference, 1e-5).expect("sizes match");
        for (a, b) in ps.iter().zip(&fd) {
            worst_grad = worst_grad.max((a - b).abs());
        }
    }
    out.push(check(
        "gradient cross-check",
        "max |ps - fd| < 1e-6",
        format!("{worst_grad:.3e}"),
        worst_grad < 1e-6,
    ));
    out.push(check(
        "work bound",
        "max W - ergotropy <= 1e-9",
        format!("{worst_bound:.3e}"),
        worst_bound <= 1e-9,
    ));
    out.push(check(
        "norm preservation",
        "max |1 - |psi|^2| < 1e-10",
        format!("{worst_norm:.3e}"),
        worst_norm < 1e-10,
    ));
    out
}
