//! Modal summary and track generation.

use std::path::Path;

use alignest_dynamics::{assemble_sm_with, klingel_wavelength, modal_analysis, Mode, ModalSummary};
use alignest_truthsim::truth_modal_analysis;
use serde::Serialize;

use crate::config::ScenarioConfig;
use crate::error::Result;
use crate::scenario::{build_profile, write_json};

/// Eigenvalue as `[re, im]`.
#[derive(Debug, Clone, Serialize)]
pub struct ModelModes {
    pub eigenvalues: Vec<[f64; 2]>,
    pub modes: Vec<Mode>,
    pub least_damped: Option<Mode>,
    pub max_real_part: f64,
}

impl From<&ModalSummary> for ModelModes {
    fn from(m: &ModalSummary) -> Self {
        Self {
            eigenvalues: m.eigenvalues.iter().map(|e| [e.re, e.im]).collect(),
            modes: m.modes.clone(),
            least_damped: m.least_damped().cloned(),
            max_real_part: m.max_real_part(),
        }
    }
}

/// Modal summaries of the estimator's model and the truth model.
#[derive(Debug, Clone, Serialize)]
pub struct ModesReport {
    pub v: f64,
    pub klingel_wavelength_m: f64,
    pub simplified: ModelModes,
    pub truth: ModelModes,
}

/// Computes both modal summaries at the configured speed.
pub fn modes(cfg: &ScenarioConfig) -> Result<ModesReport> {
    cfg.validate()?;
    let p = cfg.estimator_params();
    let sm = modal_analysis(&assemble_sm_with(&p, cfg.v, &cfg.sm_options)?)?;
    let truth = truth_modal_analysis(&cfg.truth_params(), cfg.v)?;
    Ok(ModesReport {
        v: cfg.v,
        klingel_wavelength_m: klingel_wavelength(&p),
        simplified: (&sm).into(),
        truth: (&truth).into(),
    })
}

/// Writes `modes.json` and returns the report.
pub fn run_modes(cfg: &ScenarioConfig, out: &Path) -> Result<ModesReport> {
    let report = modes(cfg)?;
    std::fs::create_dir_all(out).map_err(|e| crate::error::CliError::io(out, e))?;
    write_json(&out.join("modes.json"), &report)?;
    Ok(report)
}

/// Writes the scenario's track profile to `profile.csv`.
pub fn run_gen_track(cfg: &ScenarioConfig, out: &Path) -> Result<()> {
    cfg.validate()?;
    let profile = build_profile(cfg)?;
    std::fs::create_dir_all(out).map_err(|e| crate::error::CliError::io(out, e))?;
    alignest_track::io::write_profile_csv(&profile, &out.join("profile.csv"))?;
    Ok(())
}
