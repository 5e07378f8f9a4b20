//! Identification front end: reference run, optimization, overlay.

use std::path::Path;

use alignest_analysis::{accuracy_indices, WavelengthBand};
use alignest_dynamics::{assemble_sm_with, simulate_sm};
use alignest_ident::{default_bounds, identify, opt_values, IdentProblem, IdentResult, IrregularityInput};
use alignest_truthsim::{simulate_truth, NoiseSpec, TruthOptions};
use alignest_track::Variable;
use serde::Serialize;

use crate::config::ScenarioConfig;
use crate::error::{CliError, Result};
use crate::scenario::{build_profile, write_json};

/// Agreement between the reference and the identified model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentFit {
    pub twin: bool,
    /// Whole-band relative rms error of the wheelset lateral displacement.
    pub j_rel_y: Option<f64>,
    /// Same for the wheelset yaw.
    pub j_rel_psi: Option<f64>,
}

/// Outcome of an identification run.
#[derive(Debug, Clone)]
pub struct IdentOutcome {
    pub problem: IdentProblem,
    pub result: IdentResult,
    pub fit: IdentFit,
    pub y_model: Vec<f64>,
    pub psi_model: Vec<f64>,
    pub t: Vec<f64>,
    pub s: Vec<f64>,
}

/// Builds the identification problem: lateral irregularity only, clean
/// reference from the truth model (or from the simplified model itself in
/// twin mode).
pub fn ident_problem(cfg: &ScenarioConfig, twin: bool) -> Result<(IdentProblem, Vec<f64>, Vec<f64>)> {
    let mut cfg = cfg.clone();
    cfg.vertical = false;
    if let Some(d) = cfg.ident.duration {
        cfg.duration = d;
    }
    cfg.validate()?;
    let profile = build_profile(&cfg)?;
    let nominal = cfg.estimator_params();
    let ds = profile.ds();
    let mut input = IrregularityInput {
        s0: profile.s_grid[0],
        ds,
        values: profile.variable(Variable::Alignment).to_vec(),
        start: profile.s_grid[0] + 2.0 * cfg.truth.a,
    };
    let n_steps = (cfg.duration / cfg.dt).round() as usize;
    let t: Vec<f64> = (0..=n_steps).map(|k| k as f64 * cfg.dt).collect();
    let (y_ref, psi_ref) = if twin {
        let model = assemble_sm_with(&nominal, cfg.v, &cfg.sm_options)?;
        let traj = simulate_sm(&model, cfg.dt, n_steps, |t| input.at(cfg.v, t))?;
        (
            traj.states.iter().map(|x| x[0]).collect(),
            traj.states.iter().map(|x| x[1]).collect(),
        )
    } else {
        let opts = TruthOptions {
            v: cfg.v,
            duration: cfg.duration,
            dt: cfg.dt,
            cross_level_contamination: false,
        };
        let run = simulate_truth(&cfg.truth_params(), &profile, &opts, &NoiseSpec::zero())?;
        input.start = run.s[0];
        (
            run.states.iter().map(|x| x[0]).collect(),
            run.states.iter().map(|x| x[1]).collect(),
        )
    };
    let s: Vec<f64> = t.iter().map(|t| input.start + cfg.v * t).collect();
    let center = opt_values(&nominal);
    let problem = IdentProblem {
        params: nominal,
        options: cfg.sm_options,
        initial: center.map(|v| v * cfg.ident.initial_factor),
        bounds: default_bounds(&center),
        v: cfg.v,
        dt: cfg.dt,
        input,
        y_ref,
        psi_ref,
    };
    Ok((problem, t, s))
}

/// Runs the identification without writing anything.
pub fn execute_ident(cfg: &ScenarioConfig, twin: bool) -> Result<IdentOutcome> {
    let (problem, t, s) = ident_problem(cfg, twin)?;
    let result = identify(&problem, &cfg.ident.optimizer)?;
    let (y_model, psi_model) = problem
        .simulate(&result.p_opt())
        .ok_or_else(|| CliError::Numeric("identified model cannot be simulated".into()))?;
    let whole = WavelengthBand::whole();
    let ds = cfg.ds();
    // Fit indices are diagnostics; a horizon too short for the band-pass
    // trims leaves them unset instead of failing the identification.
    let rel = |model: &[f64], reference: &[f64]| match accuracy_indices(model, reference, ds, &whole) {
        Ok(acc) => acc.j_rel,
        Err(e) => {
            log::warn!("fit index unavailable: {e}");
            None
        }
    };
    let j_rel_y = rel(&y_model, &problem.y_ref);
    let j_rel_psi = rel(&psi_model, &problem.psi_ref);
    log::info!(
        "identification: J_ls {:.3e} -> {:.3e} in {} iterations (converged: {})",
        result.initial_j_ls,
        result.j_ls,
        result.iterations,
        result.converged
    );
    Ok(IdentOutcome {
        problem,
        result,
        fit: IdentFit {
            twin,
            j_rel_y,
            j_rel_psi,
        },
        y_model,
        psi_model,
        t,
        s,
    })
}

/// Runs the identification and writes `ident.json`, `ident_fit.json` and
/// `ident_overlay.csv`; non-convergence is reported after writing.
pub fn run_ident(cfg: &ScenarioConfig, twin: bool, out: &Path) -> Result<IdentOutcome> {
    let outcome = execute_ident(cfg, twin)?;
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let json = out.join("ident.json");
    outcome.result.write_json(&json)?;
    write_json(&out.join("ident_fit.json"), &outcome.fit)?;
    write_overlay(&outcome, &out.join("ident_overlay.csv"))?;
    if !outcome.result.converged {
        return Err(CliError::NotConverged(json));
    }
    Ok(outcome)
}

fn write_overlay(o: &IdentOutcome, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::io(path, e))?;
    w.write_record(["t_s", "s_m", "y_truth_m", "y_model_m", "psi_truth_rad", "psi_model_rad"])
        .map_err(|e| CliError::io(path, e))?;
    for k in 0..o.t.len() {
        let row = [o.t[k], o.s[k], o.problem.y_ref[k], o.y_model[k], o.problem.psi_ref[k], o.psi_model[k]];
        w.write_record(row.iter().map(|v| format!("{v:e}")))
            .map_err(|e| CliError::io(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}
