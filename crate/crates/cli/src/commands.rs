use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;
use spinwork::ergotropy::pure_ergotropy;
use spinwork::experiment::{self, axis_values, LandscapeGrid, SweepRecord, SweepTemplate, TrialEnsemble};
use spinwork::hamiltonian::build_hamiltonian;
use spinwork::{Connectivity, SpinModel, Statevector};

use crate::args::{parse_connectivities, ErgotropyArgs, Format, LandscapeArgs, OptimizeArgs, SweepArgs};
use crate::output::{num, write_atomic, write_json, write_preamble, write_table};
use crate::CliError;

const RNG_NOTE: &str =
    "initial angles uniform on [0, pi]; ChaCha8 keyed by (seed, point index), stream = trial index";

fn small_ensemble_note(trials: usize) -> Option<String> {
    (trials < experiment::DEFAULT_TRIALS).then(|| {
        format!(
            "{trials} trials per point (reference ensembles use {})",
            experiment::DEFAULT_TRIALS
        )
    })
}

fn model_json(m: &SpinModel) -> serde_json::Value {
    json!({
        "preset": m.preset.map(|p| p.as_str()),
        "n": m.n,
        "J": m.coupling,
        "h": m.field,
        "gamma": m.gamma,
        "delta": m.delta,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ErgotropyReport {
    pub command: String,
    pub preset: String,
    pub n: usize,
    #[serde(rename = "J")]
    pub coupling: f64,
    pub h: f64,
    pub gamma: f64,
    pub delta: f64,
    pub mean_energy: f64,
    pub ground_energy: f64,
    pub ergotropy: f64,
    pub spectrum: Vec<f64>,
}

impl ErgotropyReport {
    pub fn to_text(&self) -> String {
        let spectrum: Vec<String> = self.spectrum.iter().map(|e| format!("{e:.12}")).collect();
        format!(
            "model {} n={} J={} h={} gamma={} delta={}\nmean energy   {:.12}\nground energy {:.12}\nergotropy     {:.12}\nspectrum      {}\n",
            self.preset,
            self.n,
            self.coupling,
            self.h,
            self.gamma,
            self.delta,
            self.mean_energy,
            self.ground_energy,
            self.ergotropy,
            spectrum.join(" ")
        )
    }
}

pub fn cmd_ergotropy(args: &ErgotropyArgs) -> Result<ErgotropyReport, CliError> {
    let model = args.model.build()?;
    let h = build_hamiltonian(&model)?;
    let spec = h.spectrum()?;
    let input = Statevector::all_up(model.n)?;
    let report = pure_ergotropy(&input, &h, &spec)?;
    let out = ErgotropyReport {
        command: format!("spinwork ergotropy {}", args.model.echo()),
        preset: args.model.preset()?.to_string(),
        n: model.n,
        coupling: model.coupling,
        h: model.field,
        gamma: model.gamma,
        delta: model.delta,
        mean_energy: report.mean_energy,
        ground_energy: spec.ground_energy(),
        ergotropy: report.ergotropy,
        spectrum: spec.eigenvalues.clone(),
    };
    if let Some(path) = &args.out {
        match args.format {
            Format::Json => write_atomic(path, |w| {
                write_json(w, &serde_json::to_value(&out).expect("report serializes"))
            })?,
            Format::Csv => write_atomic(path, |w| {
                write_preamble(w, &[format!("command: {}", out.command)])?;
                let spectrum: Vec<String> = out.spectrum.iter().map(|&e| num(e)).collect();
                write_table(
                    w,
                    &[
                        "preset", "n", "J", "h", "gamma", "delta", "mean_energy", "ground_energy",
                        "ergotropy", "spectrum",
                    ],
                    &[vec![
                        out.preset.clone(),
                        out.n.to_string(),
                        num(out.coupling),
                        num(out.h),
                        num(out.gamma),
                        num(out.delta),
                        num(out.mean_energy),
                        num(out.ground_energy),
                        num(out.ergotropy),
                        spectrum.join(";"),
                    ]],
                )
            })?,
        }
    }
    Ok(out)
}

/// Files written for one ansatz by `optimize`.
#[derive(Clone, Debug)]
pub struct OptimizeOutput {
    pub connectivity: Connectivity,
    pub ensemble: TrialEnsemble,
    pub convergence_path: PathBuf,
    pub summary_path: PathBuf,
}

pub fn cmd_optimize(args: &OptimizeArgs) -> Result<Vec<OptimizeOutput>, CliError> {
    let model = args.model.build()?;
    let conns = parse_connectivities(&args.ansatz)?;
    let cfg = args.optimizer.config()?;
    let trials = args.ensemble.trials;
    let seed = args.ensemble.seed;

    // run everything before touching the filesystem
    let ensembles = conns
        .iter()
        .map(|&c| experiment::run_trials(&model, c, trials, seed, &cfg).map(|e| (c, e)))
        .collect::<Result<Vec<_>, _>>()?;

    fs::create_dir_all(&args.out).map_err(|e| CliError::Io {
        path: args.out.clone(),
        source: e,
    })?;
    let mut outputs = Vec::with_capacity(ensembles.len());
    for (c, ens) in ensembles {
        let command = format!(
            "spinwork optimize {} --ansatz {} --trials {} --seed {} {}",
            args.model.echo(),
            c,
            trials,
            seed,
            args.optimizer.echo()
        );
        let convergence_path = args.out.join(format!("convergence_{c}.csv"));
        let summary_path = args.out.join(format!("summary_{c}.json"));
        let mut preamble = vec![format!("command: {command}"), format!("rng: {RNG_NOTE}")];
        preamble.extend(small_ensemble_note(trials).map(|n| format!("note: {n}")));
        let rows: Vec<Vec<String>> = ens
            .per_iteration_mean
            .iter()
            .zip(&ens.per_iteration_std)
            .enumerate()
            .map(|(i, (m, s))| vec![i.to_string(), num(*m), num(*s)])
            .collect();
        let written = write_atomic(&convergence_path, |w| {
            write_preamble(w, &preamble)?;
            write_table(w, &["iteration", "mean_W", "std_W"], &rows)
        })
        .and_then(|_| {
            let efficiency = ens.efficiency().ok();
            let summary = json!({
                "command": command,
                "model": model_json(&model),
                "ansatz": c.tag(),
                "trials": trials,
                "seed": seed,
                "optimizer": {
                    "step_size": cfg.step_size,
                    "max_iters": cfg.max_iters,
                    "tol": cfg.convergence_tol,
                    "window": cfg.convergence_window,
                    "gradient": cfg.gradient_method.to_string(),
                },
                "rng": RNG_NOTE,
                "note": small_ensemble_note(trials),
                "ergotropy": ens.ergotropy,
                "final_mean": ens.final_mean,
                "final_std": ens.final_std,
                "efficiency": efficiency,
                "converged": ens.converged,
            });
            write_atomic(&summary_path, |w| write_json(w, &summary))
        });
        if let Err(e) = written {
            remove_outputs(&outputs);
            let _ = fs::remove_file(&convergence_path);
            return Err(e);
        }
        outputs.push(OptimizeOutput {
            connectivity: c,
            ensemble: ens,
            convergence_path,
            summary_path,
        });
    }
    Ok(outputs)
}

fn remove_outputs(outputs: &[OptimizeOutput]) {
    for o in outputs {
        let _ = fs::remove_file(&o.convergence_path);
        let _ = fs::remove_file(&o.summary_path);
    }
}

pub const SWEEP_HEADER: [&str; 13] = [
    "preset",
    "n",
    "J",
    "h",
    "gamma",
    "delta",
    "connectivity",
    "M",
    "seed",
    "ergotropy",
    "mean_work",
    "std_work",
    "eta",
];

fn sweep_row(r: &SweepRecord) -> Vec<String> {
    vec![
        r.preset.map(|p| p.to_string()).unwrap_or_default(),
        r.n.to_string(),
        num(r.coupling),
        num(r.field),
        num(r.gamma),
        num(r.delta),
        r.connectivity.to_string(),
        r.trials.to_string(),
        r.seed.to_string(),
        num(r.ergotropy),
        num(r.mean_work),
        num(r.std_work),
        num(r.eta),
    ]
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<Vec<SweepRecord>, CliError> {
    let axis = args.axis()?;
    let conns = parse_connectivities(&args.ansatz)?;
    let values = axis_values(args.from, args.to, args.step)?;
    let cfg = args.optimizer.config()?;
    let template = SweepTemplate {
        preset: Some(args.model.preset()?),
        n: args.model.n,
        coupling: args.model.coupling,
        field: args.model.field,
        gamma: args.model.gamma,
        delta: args.model.delta,
    };
    let records = experiment::sweep(
        &template,
        &conns,
        axis,
        &values,
        args.ensemble.trials,
        args.ensemble.seed,
        &cfg,
    )?;

    let ansatz_flags: String = conns.iter().map(|c| format!(" --ansatz {c}")).collect();
    let command = format!(
        "spinwork sweep {}{} --axis {} --from {} --to {} --step {} --trials {} --seed {} {}",
        args.model.echo(),
        ansatz_flags,
        axis,
        args.from,
        args.to,
        args.step,
        args.ensemble.trials,
        args.ensemble.seed,
        args.optimizer.echo()
    );
    let body = |w: &mut dyn Write| -> std::io::Result<()> {
        match args.format {
            Format::Csv => {
                let mut preamble = vec![
                    format!("command: {command}"),
                    format!("rng: {RNG_NOTE}; points numbered in row order"),
                ];
                preamble.extend(small_ensemble_note(args.ensemble.trials).map(|n| format!("note: {n}")));
                write_preamble(w, &preamble)?;
                let rows: Vec<Vec<String>> = records.iter().map(sweep_row).collect();
                write_table(w, &SWEEP_HEADER, &rows)
            }
            Format::Json => {
                let recs: Vec<serde_json::Value> = records
                    .iter()
                    .map(|r| {
                        json!({
                            "preset": r.preset.map(|p| p.as_str()),
                            "n": r.n, "J": r.coupling, "h": r.field,
                            "gamma": r.gamma, "delta": r.delta,
                            "connectivity": r.connectivity.tag(),
                            "M": r.trials, "seed": r.seed,
                            "ergotropy": r.ergotropy, "mean_work": r.mean_work,
                            "std_work": r.std_work, "eta": r.eta,
                        })
                    })
                    .collect();
                write_json(
                    w,
                    &json!({
                        "command": command,
                        "rng": RNG_NOTE,
                        "note": small_ensemble_note(args.ensemble.trials),
                        "records": recs,
                    }),
                )
            }
        }
    };
    match &args.out {
        Some(path) => write_atomic(path, body)?,
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            body(&mut lock).map_err(|e| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source: e,
            })?;
        }
    }
    Ok(records)
}

pub fn trajectories_path(grid: &Path) -> PathBuf {
    let stem = grid.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    grid.with_file_name(format!("{stem}.trajectories.csv"))
}

pub fn cmd_landscape(args: &LandscapeArgs) -> Result<LandscapeGrid, CliError> {
    let model = args.model.build()?;
    if model.n != 2 {
        return Err(CliError::Usage(format!(
            "landscape needs --n 2, got --n {}",
            model.n
        )));
    }
    let c: Connectivity = args.ansatz.parse()?;
    let cfg = args.optimizer.config()?;
    let grid = experiment::landscape_grid(&model, c, args.grid, args.trajectories, args.seed, &cfg)?;
    let command = format!(
        "spinwork landscape {} --ansatz {} --grid {} --trajectories {} --seed {} {}",
        args.model.echo(),
        c,
        args.grid,
        args.trajectories,
        args.seed,
        args.optimizer.echo()
    );
    let preamble = [format!("command: {command}"), format!("ergotropy: {}", num(grid.ergotropy))];
    let r = grid.resolution;
    let rows: Vec<Vec<String>> = (0..r * r)
        .map(|k| {
            let g = grid.gradient[k];
            vec![
                num(grid.axis[k / r]),
                num(grid.axis[k % r]),
                num(grid.work[k]),
                num(g[0]),
                num(g[1]),
            ]
        })
        .collect();
    write_atomic(&args.out, |w| {
        write_preamble(w, &preamble)?;
        write_table(w, &["theta1", "theta2", "W", "grad1", "grad2"], &rows)
    })?;
    if args.trajectories > 0 {
        let rows: Vec<Vec<String>> = grid
            .trajectories
            .iter()
            .enumerate()
            .flat_map(|(id, path)| {
                path.iter().enumerate().map(move |(step, p)| {
                    vec![
                        id.to_string(),
                        step.to_string(),
                        num(p.theta[0]),
                        num(p.theta[1]),
                        num(p.work),
                    ]
                })
            })
            .collect();
        let tpath = trajectories_path(&args.out);
        if let Err(e) = write_atomic(&tpath, |w| {
            write_preamble(w, &preamble)?;
            write_table(w, &["trajectory_id", "step", "theta1", "theta2", "W"], &rows)
        }) {
            let _ = fs::remove_file(&args.out);
            return Err(e);
        }
    }
    Ok(grid)
}
