//! Declarative scenario and sweep configuration.
//!
//! A scenario file is a JSON object whose fields override the defaults of
//! [`ScenarioConfig`] by deep merge, so a file only needs to state what
//! differs from the standard case. Sweep variants are override maps merged
//! onto the base scenario the same way.

use std::path::{Path, PathBuf};

use alignest_dynamics::{SmOptions, SmParams};
use alignest_estimator::CovarianceTuning;
use alignest_truthsim::{TruthParams, DEFAULT_SIGMA_XI_VIRTUAL};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{CliError, Result};

/// Explicit sensor noise levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensorSigmas {
    /// Wheelset accelerometer (m/s²).
    pub sigma_acc_w: f64,
    /// Wheelset gyroscope (rad/s).
    pub sigma_gyro: f64,
    /// Frame accelerometer (m/s²).
    pub sigma_acc_f: f64,
}

/// Keyword form of the noise setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseKeyword {
    /// 10 % of each clean channel's peak absolute value.
    Autoscale,
}

/// Sensor noise: `"autoscale"` or explicit standard deviations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NoiseConfig {
    Keyword(NoiseKeyword),
    Explicit(SensorSigmas),
}

/// Independent seeds of the three random ingredients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Seeds {
    /// Track irregularity synthesis.
    pub track: u64,
    /// Sensor noise.
    pub noise: u64,
    /// Identification (reserved for randomized starts).
    pub ident: u64,
}

impl Seeds {
    /// Seeds derived from a single command-line seed.
    pub fn from_base(seed: u64) -> Self {
        Self {
            track: seed,
            noise: seed.wrapping_add(1),
            ident: seed.wrapping_add(2),
        }
    }
}

/// Covariance source selection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CovarianceConfig {
    /// Registered source name: `configured`, `estimated` or `hybrid`.
    pub source: String,
    pub tuning: CovarianceTuning,
}

/// Identification settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentConfig {
    /// Generate the reference with the simplified model itself.
    pub twin: bool,
    /// Factor applied to the nominal suspension values for the start.
    pub initial_factor: f64,
    /// Reference horizon (s); defaults to the scenario duration.
    pub duration: Option<f64>,
    pub optimizer: alignest_ident::NelderMeadOptions,
}

/// One scenario of the pipeline track → truth → filter → analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub run_id: String,
    /// Forward speed (m/s).
    pub v: f64,
    /// Simulated time (s).
    pub duration: f64,
    /// Time step of simulation and filter (s).
    pub dt: f64,
    /// Lateral track source, e.g. `{"kind": "psd"}`.
    pub track: Value,
    /// Adds vertical rail irregularities and their sensor contamination.
    pub vertical: bool,
    /// Rms of each vertical rail deviation (m).
    pub vertical_rail_rms: f64,
    pub noise: NoiseConfig,
    /// When false the sensors stay clean but the filter keeps the noise
    /// levels in `R`.
    pub inject_noise: bool,
    /// Standard deviation of the zero virtual irregularity measurement (m).
    pub sigma_xi_virtual: f64,
    /// Simplified-model parameters used by the estimator.
    pub sm: SmParams,
    pub sm_options: SmOptions,
    /// Truth-model parameters.
    pub truth: TruthParams,
    /// Multiplier on the estimator's conicity (truth unchanged).
    pub conicity_multiplier: f64,
    /// Multiplier on the truth's creep coefficients (estimator unchanged).
    pub kalker_multiplier: f64,
    pub covariance: CovarianceConfig,
    /// Registered discretizer name: `taylor2` (default) or `expm`.
    pub discretizer: String,
    pub seeds: Seeds,
    /// Output directory; the command line takes precedence.
    pub output_dir: Option<PathBuf>,
    pub ident: IdentConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            run_id: "standard".into(),
            v: 20.0,
            duration: 20.0,
            dt: 1e-3,
            track: json!({"kind": "psd"}),
            vertical: true,
            vertical_rail_rms: alignest_track::psd::DEFAULT_VERTICAL_RAIL_RMS,
            noise: NoiseConfig::Keyword(NoiseKeyword::Autoscale),
            inject_noise: true,
            sigma_xi_virtual: DEFAULT_SIGMA_XI_VIRTUAL,
            sm: SmParams::reference_vehicle(),
            sm_options: SmOptions::default(),
            truth: TruthParams::default(),
            conicity_multiplier: 1.0,
            kalker_multiplier: 1.0,
            covariance: CovarianceConfig {
                source: "configured".into(),
                tuning: CovarianceTuning::default(),
            },
            discretizer: "taylor2".into(),
            seeds: Seeds::from_base(1),
            output_dir: None,
            ident: IdentConfig {
                twin: false,
                initial_factor: 1.0,
                duration: None,
                optimizer: alignest_ident::NelderMeadOptions::default(),
            },
        }
    }
}

/// Recursively merges `patch` into `base`. Objects merge key by key, except
/// objects carrying a `kind` field (strategy descriptions), which replace
/// the base value wholesale; all other values replace.
pub fn merge(base: &mut Value, patch: &Value) {
    match (base, patch) {
        (Value::Object(b), Value::Object(p)) if !p.contains_key("kind") => {
            for (k, v) in p {
                match b.get_mut(k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k.clone(), v.clone());
                    }
                }
            }
        }
        (b, p) => *b = p.clone(),
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Rewrites relative `path` fields of file track sources against `dir`.
fn resolve_paths(track: &mut Value, dir: &Path) {
    match track {
        Value::Object(obj) => {
            if obj.get("kind").and_then(Value::as_str) == Some("file") {
                if let Some(Value::String(p)) = obj.get_mut("path") {
                    let pb = PathBuf::from(&*p);
                    if pb.is_relative() {
                        *p = dir.join(pb).to_string_lossy().into_owned();
                    }
                }
            }
            for v in obj.values_mut() {
                resolve_paths(v, dir);
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|v| resolve_paths(v, dir)),
        _ => {}
    }
}

impl ScenarioConfig {
    /// Builds a configuration from defaults plus an override document.
    pub fn from_value(overrides: &Value) -> Result<Self> {
        let mut base = serde_json::to_value(Self::default()).expect("default config serializes");
        merge(&mut base, overrides);
        let cfg: Self = serde_json::from_value(base).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Loads a scenario file; relative file-source paths are resolved
    /// against the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let mut v = read_json(path)?;
        if let Some(track) = v.get_mut("track") {
            resolve_paths(track, path.parent().unwrap_or(Path::new(".")));
        }
        Self::from_value(&v).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Spatial sampling interval `V·dt` (m).
    pub fn ds(&self) -> f64 {
        self.v * self.dt
    }

    /// Checks ranges and the Nyquist condition of the analysis bands.
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("v", self.v),
            ("duration", self.duration),
            ("dt", self.dt),
            ("conicity_multiplier", self.conicity_multiplier),
            ("kalker_multiplier", self.kalker_multiplier),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.vertical_rail_rms >= 0.0) || !(self.sigma_xi_virtual > 0.0) {
            return Err(CliError::Config(
                "vertical_rail_rms must be non-negative and sigma_xi_virtual positive".into(),
            ));
        }
        if let NoiseConfig::Explicit(s) = &self.noise {
            if [s.sigma_acc_w, s.sigma_gyro, s.sigma_acc_f].iter().any(|v| !(*v >= 0.0)) {
                return Err(CliError::Config("sensor sigmas must be non-negative".into()));
            }
        }
        if self.run_id.is_empty() || self.run_id.contains(['/', '\\']) {
            return Err(CliError::Config(format!("invalid run_id '{}'", self.run_id)));
        }
        for band in alignest_analysis::standard_bands() {
            band.check_nyquist(self.ds())?;
        }
        if self.ident.initial_factor <= 0.0 || self.ident.duration.is_some_and(|d| !(d > 0.0)) {
            return Err(CliError::Config("ident initial_factor and duration must be positive".into()));
        }
        self.sm.validate()?;
        self.truth.validate()?;
        Ok(())
    }

    /// Estimator parameters: nominal values with the conicity multiplier.
    pub fn estimator_params(&self) -> SmParams {
        let mut p = self.sm.clone();
        p.alpha *= self.conicity_multiplier;
        p
    }

    /// Truth parameters with the creep multiplier applied.
    pub fn truth_params(&self) -> TruthParams {
        let mut t = self.truth.clone();
        let k = self.kalker_multiplier;
        t.sm.f11 *= k;
        t.sm.f22 *= k;
        t.sm.f23 *= k;
        t.sm.f33 *= k;
        t
    }
}

/// A named set of overrides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Variant {
    pub name: String,
    #[serde(default)]
    pub overrides: Value,
}

/// Base scenario given by path or inline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BaseScenario {
    Path(PathBuf),
    Inline(Value),
}

/// A base scenario plus named variants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Identifier of the sweep (file stem of the table).
    #[serde(default = "default_sweep_id")]
    pub sweep_id: String,
    pub base: BaseScenario,
    #[serde(default)]
    pub variants: Vec<Variant>,
}

fn default_sweep_id() -> String {
    "sweep".into()
}

/// A sweep with every scenario resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedSweep {
    pub sweep_id: String,
    /// Base scenario first, then the variants in file order.
    pub scenarios: Vec<ScenarioConfig>,
}

impl SweepConfig {
    /// Loads a sweep file; a relative base path is resolved against the
    /// sweep file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let mut cfg: Self = serde_json::from_value(read_json(path)?)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        if let BaseScenario::Path(p) = &mut cfg.base {
            if p.is_relative() {
                *p = path.parent().unwrap_or(Path::new(".")).join(&*p);
            }
        }
        Ok(cfg)
    }

    /// Merges each variant onto the base; variant names must be unique and
    /// become the run identifiers.
    pub fn resolve(&self, seed: Option<u64>) -> Result<ResolvedSweep> {
        let mut base = match &self.base {
            BaseScenario::Path(p) => {
                let mut v = read_json(p)?;
                if let Some(track) = v.get_mut("track") {
                    resolve_paths(track, p.parent().unwrap_or(Path::new(".")));
                }
                v
            }
            BaseScenario::Inline(v) => v.clone(),
        };
        if let Some(s) = seed {
            merge(&mut base, &json!({"seeds": Seeds::from_base(s)}));
        }
        let mut scenarios = vec![ScenarioConfig::from_value(&base)?];
        let mut names = std::collections::BTreeSet::new();
        names.insert(scenarios[0].run_id.clone());
        for variant in &self.variants {
            if !names.insert(variant.name.clone()) {
                return Err(CliError::Config(format!("duplicate variant name '{}'", variant.name)));
            }
            let mut v = base.clone();
            merge(&mut v, &variant.overrides);
            merge(&mut v, &json!({"run_id": variant.name}));
            scenarios.push(ScenarioConfig::from_value(&v).map_err(|e| e.in_run(&variant.name))?);
        }
        Ok(ResolvedSweep {
            sweep_id: self.sweep_id.clone(),
            scenarios,
        })
    }
}
