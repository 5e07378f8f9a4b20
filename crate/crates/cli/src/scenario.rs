//! Single-scenario pipeline: track → truth → filter → analysis.

use std::path::Path;
use std::time::Instant;

use alignest_analysis::{standard_bands, AccuracyReport};
use alignest_dynamics::assemble_sm_with;
use alignest_estimator::{
    bundle_for_model, covariance_source, default_p0, kf_run, observability_rank, CovarianceInputs, CovarianceJson,
    FilterBundle, KfOutput, NX, XI,
};
use alignest_track::{source_from_value, PsdSpec, PsdVariable, TrackContext, TrackIrregularityProfile};
use alignest_truthsim::{sensor_noise_autoscale, simulate_truth, NoiseSpec, TruthOptions, TruthRun};
use nalgebra::DVector;

use crate::config::{NoiseConfig, ScenarioConfig};
use crate::error::{CliError, Result};

/// Extra profile length beyond the distance covered by the leading
/// wheelset (m).
pub const PROFILE_MARGIN: f64 = 1.0;

/// Everything a scenario produced.
#[derive(Debug, Clone)]
pub struct ScenarioRun {
    pub config: ScenarioConfig,
    pub profile: TrackIrregularityProfile,
    pub truth: TruthRun,
    /// Noise levels used by the filter (and injected unless disabled).
    pub noise: NoiseSpec,
    pub bundle: FilterBundle,
    pub estimate: KfOutput,
    pub observability_rank: usize,
    pub report: AccuracyReport,
    /// Non-fatal diagnostics.
    pub warnings: Vec<String>,
    /// Wall-clock time of the computation, excluding file output (s).
    pub elapsed_s: f64,
}

impl ScenarioRun {
    /// Estimated irregularity.
    pub fn xi_est(&self) -> Vec<f64> {
        self.estimate.component(XI)
    }
}

/// Track profile (lateral plus optional vertical rails) long enough for
/// the run.
pub fn build_profile(cfg: &ScenarioConfig) -> Result<TrackIrregularityProfile> {
    let truth = cfg.truth_params();
    let length = cfg.v * cfg.duration + 2.0 * truth.a + PROFILE_MARGIN;
    let ctx = TrackContext {
        length,
        ds: cfg.ds(),
        seed: cfg.seeds.track,
        stream: alignest_track::STREAM_ALIGNMENT,
    };
    let lateral = source_from_value(&cfg.track)?.generate(&ctx)?;
    if cfg.vertical && cfg.vertical_rail_rms > 0.0 {
        let spec = PsdSpec::with_rms(PsdVariable::VerticalProfile, cfg.vertical_rail_rms, None);
        Ok(alignest_track::with_vertical(&lateral, &spec, cfg.seeds.track)?)
    } else {
        Ok(lateral)
    }
}

/// Truth run with the configured sensor noise; returns the run and the
/// noise levels the filter should assume.
pub fn run_truth(cfg: &ScenarioConfig, profile: &TrackIrregularityProfile) -> Result<(TruthRun, NoiseSpec)> {
    let opts = TruthOptions {
        v: cfg.v,
        duration: cfg.duration,
        dt: cfg.dt,
        cross_level_contamination: cfg.vertical,
    };
    let clean = simulate_truth(&cfg.truth_params(), profile, &opts, &NoiseSpec::zero())?;
    let noise = match &cfg.noise {
        NoiseConfig::Keyword(_) => sensor_noise_autoscale(&clean.clean, cfg.sigma_xi_virtual, cfg.seeds.noise)?,
        NoiseConfig::Explicit(s) => NoiseSpec {
            sigma_acc_w: s.sigma_acc_w,
            sigma_gyro: s.sigma_gyro,
            sigma_acc_f: s.sigma_acc_f,
            sigma_xi_virtual: cfg.sigma_xi_virtual,
            seed: cfg.seeds.noise,
        },
    };
    let run = if cfg.inject_noise {
        clean.with_noise(noise.clone())?
    } else {
        clean
    };
    Ok((run, noise))
}

/// Measurement vectors `[acc_w, gyro, acc_f, 0]` from the sensor channels.
pub fn measurements(run: &TruthRun) -> Vec<DVector<f64>> {
    run.noisy
        .iter()
        .map(|c| DVector::from_row_slice(&[c[0], c[1], c[2], 0.0]))
        .collect()
}

/// Runs the full pipeline without writing anything.
pub fn execute_scenario(cfg: &ScenarioConfig) -> Result<ScenarioRun> {
    let started = Instant::now();
    cfg.validate()?;
    let run_id = cfg.run_id.as_str();
    let mut warnings = Vec::new();

    let profile = build_profile(cfg).map_err(|e| e.in_run(run_id))?;
    let (truth, noise) = run_truth(cfg, &profile).map_err(|e| e.in_run(run_id))?;

    let model = assemble_sm_with(&cfg.estimator_params(), cfg.v, &cfg.sm_options)?;
    let mut bundle = bundle_for_model(&model, cfg.dt, &cfg.discretizer)?;
    let rank = observability_rank(&bundle.f, &bundle.h);
    log::info!("[{run_id}] observability rank {rank} of {NX}");
    if rank < NX {
        return Err(CliError::Config(format!(
            "[{run_id}] system is unobservable: observability rank {rank} < {NX}"
        )));
    }

    let z = measurements(&truth);
    let states: Vec<DVector<f64>> = truth
        .reduced_states()
        .iter()
        .map(|x| DVector::from_column_slice(x.as_slice()))
        .collect();
    let source = covariance_source(&cfg.covariance.source, &cfg.covariance.tuning)?;
    let cov = source.covariances(&CovarianceInputs {
        truth_states: &states,
        truth_meas: &z,
        f: &bundle.f,
        h: &bundle.h,
        sensor_sigmas: noise.channel_sigmas(),
        sigma_xi_virtual: cfg.sigma_xi_virtual,
    })?;
    if let Some(w) = cov.warning {
        log::warn!("[{run_id}] {w}");
        warnings.push(w);
    }
    bundle.q = cov.q;
    bundle.r = cov.r;

    let estimate = kf_run(&bundle, &z, &DVector::zeros(NX), &default_p0()).map_err(|e| CliError::from(e).in_run(run_id))?;
    let xi_est = estimate.component(XI);
    let report = AccuracyReport::compute(run_id, &xi_est, &truth.xi, cfg.ds(), &standard_bands())?;
    if let Some(whole) = report.band("whole") {
        log::info!(
            "[{run_id}] whole-range J = {:.3} mm, J_rel = {}",
            whole.j_mm,
            whole.j_rel.map_or("n/a".to_string(), |r| format!("{r:.3}"))
        );
    }
    Ok(ScenarioRun {
        config: cfg.clone(),
        profile,
        truth,
        noise,
        bundle,
        estimate,
        observability_rank: rank,
        report,
        warnings,
        elapsed_s: started.elapsed().as_secs_f64(),
    })
}

/// Writes every artifact of a run into `dir`.
pub fn write_scenario_outputs(run: &ScenarioRun, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    alignest_track::io::write_profile_csv(&run.profile, &dir.join("profile.csv"))?;
    alignest_truthsim::io::write_sensor_csvs(&run.truth, dir, "sensors")?;
    alignest_truthsim::io::write_state_csv(&run.truth, &dir.join("truth_states.csv"))?;
    let (t, s) = (&run.truth.t, &run.truth.s);
    alignest_estimator::io::write_estimate_csv(&run.estimate, t, s, &dir.join("estimate.csv"))?;
    alignest_estimator::io::write_innovation_csv(&run.estimate, t, s, &dir.join("innovations.csv"))?;
    alignest_estimator::io::write_covariance_json(
        &CovarianceJson::new(&run.bundle.q, &run.bundle.r),
        &dir.join("covariance.json"),
    )?;
    alignest_analysis::io::write_report_json(&run.report, &dir.join("report.json"))?;
    let ds = run.config.ds();
    alignest_analysis::io::write_spectrum_csv(
        &alignest_analysis::spectrum(&run.xi_est(), ds)?,
        &dir.join("spectrum_estimate.csv"),
    )?;
    alignest_analysis::io::write_spectrum_csv(
        &alignest_analysis::spectrum(&run.truth.xi, ds)?,
        &dir.join("spectrum_truth.csv"),
    )?;
    write_json(&dir.join("config.json"), &run.config)?;
    write_metadata(dir, run)
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::io(path, e))?;
    std::fs::write(path, text + "\n").map_err(|e| CliError::io(path, e))
}

/// The only artifact that varies between identical reruns.
fn write_metadata(dir: &Path, run: &ScenarioRun) -> Result<()> {
    let unix = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let meta = serde_json::json!({
        "run_id": run.config.run_id,
        "timestamp_unix_s": unix,
        "elapsed_s": run.elapsed_s,
        "observability_rank": run.observability_rank,
        "warnings": run.warnings,
        "version": env!("CARGO_PKG_VERSION"),
    });
    write_json(&dir.join("metadata.json"), &meta)
}

/// Runs a scenario and writes its artifacts into `dir`.
pub fn run_scenario(cfg: &ScenarioConfig, dir: &Path) -> Result<ScenarioRun> {
    let run = execute_scenario(cfg)?;
    write_scenario_outputs(&run, dir)?;
    Ok(run)
}
