//! Runtime-selectable lateral track sources.
//!
//! Every source implements [`TrackSource`] and is registered by name in
//! [`source_registry`]; scenario files select one with a `kind` field, e.g.
//! `{"kind": "harmonic", "amplitude": 0.001, "wavelength": 15.66}`.

use std::path::PathBuf;

use alignest_registry::Registry;
use serde::Deserialize;
use serde_json::Value;

use crate::error::{Result, TrackError};
use crate::profile::{interp_uniform, uniform_grid, TrackIrregularityProfile};
use crate::psd::{generate_harmonic_profile, generate_psd_profile, PsdSpec};

/// Grid and seeding context handed to a source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackContext {
    /// Required profile length (m); the grid covers `[0, length]`.
    pub length: f64,
    /// Grid spacing (m).
    pub ds: f64,
    /// Track seed used by stochastic sources without an explicit seed.
    pub seed: u64,
    /// Random stream offset, so that summed sources stay independent.
    pub stream: u64,
}

/// A generator of track irregularity profiles.
pub trait TrackSource: Send + Sync {
    /// Registered name of the source kind.
    fn kind(&self) -> &'static str;
    /// Produces a profile on the grid described by `ctx`.
    fn generate(&self, ctx: &TrackContext) -> Result<TrackIrregularityProfile>;
}

/// Registry type: factories take the JSON description of the source.
pub type SourceRegistry = Registry<dyn TrackSource, Value>;

/// Builds the registry of built-in sources: `psd`, `harmonic`, `file`, `sum`.
pub fn source_registry() -> SourceRegistry {
    Registry::new("track source")
        .with("psd", |v| parse::<PsdSource>(v).map(|s| Box::new(s) as _))
        .with("harmonic", |v| {
            parse::<HarmonicSource>(v).and_then(|s| {
                if s.wavelength > 0.0 {
                    Ok(Box::new(s) as _)
                } else {
                    Err(format!("wavelength must be positive, got {}", s.wavelength))
                }
            })
        })
        .with("file", |v| parse::<FileSource>(v).map(|s| Box::new(s) as _))
        .with("sum", |v| SumSource::from_value(v).map(|s| Box::new(s) as _))
}

/// Builds a source from a JSON description carrying a `kind` field.
pub fn source_from_value(value: &Value) -> Result<Box<dyn TrackSource>> {
    let kind = value
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| TrackError::Config("track source needs a string 'kind' field".into()))?;
    source_registry()
        .create(kind, value)
        .map_err(|e| TrackError::Config(e.to_string()))
}

fn parse<T: for<'de> Deserialize<'de>>(v: &Value) -> std::result::Result<T, String> {
    let mut v = v.clone();
    if let Some(obj) = v.as_object_mut() {
        obj.remove("kind");
    }
    serde_json::from_value(v).map_err(|e| e.to_string())
}

/// Stochastic alignment drawn from a rational PSD.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsdSource {
    /// PSD parameters; defaults to the 1.5 mm-rms alignment spec.
    #[serde(default = "PsdSpec::default_alignment")]
    pub spec: PsdSpec,
}

impl TrackSource for PsdSource {
    fn kind(&self) -> &'static str {
        "psd"
    }
    fn generate(&self, ctx: &TrackContext) -> Result<TrackIrregularityProfile> {
        let xi = generate_psd_profile(&self.spec, ctx.length, ctx.ds, ctx.seed, ctx.stream)?;
        TrackIrregularityProfile::from_alignment(uniform_grid(ctx.length, ctx.ds), xi)
    }
}

/// Deterministic sinusoidal alignment.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarmonicSource {
    /// Amplitude (m).
    pub amplitude: f64,
    /// Wavelength (m).
    pub wavelength: f64,
}

impl TrackSource for HarmonicSource {
    fn kind(&self) -> &'static str {
        "harmonic"
    }
    fn generate(&self, ctx: &TrackContext) -> Result<TrackIrregularityProfile> {
        let xi = generate_harmonic_profile(self.amplitude, self.wavelength, ctx.length, ctx.ds)?;
        TrackIrregularityProfile::from_alignment(uniform_grid(ctx.length, ctx.ds), xi)
    }
}

/// Profile read from a CSV file and resampled onto the requested grid.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileSource {
    pub path: PathBuf,
}

impl TrackSource for FileSource {
    fn kind(&self) -> &'static str {
        "file"
    }
    fn generate(&self, ctx: &TrackContext) -> Result<TrackIrregularityProfile> {
        let src = crate::io::read_profile_csv(&self.path)?;
        let (s0, s_end) = (src.s_grid[0], src.s_max());
        if s0 > 0.0 || s_end + 1e-9 < ctx.length {
            return Err(TrackError::Config(format!(
                "{}: profile covers [{s0}, {s_end}] m but [0, {}] m is required",
                self.path.display(),
                ctx.length
            )));
        }
        let grid = uniform_grid(ctx.length, ctx.ds);
        let ds = src.ds();
        let resample = |v: &[f64]| grid.iter().map(|&s| interp_uniform(s0, ds, v, s)).collect();
        Ok(TrackIrregularityProfile {
            xi_g: resample(&src.xi_g),
            xi_a: resample(&src.xi_a),
            xi_cl: resample(&src.xi_cl),
            xi_vp: resample(&src.xi_vp),
            s_grid: grid,
        })
    }
}

/// Pointwise sum of several sources (e.g. PSD plus harmonic).
pub struct SumSource {
    pub sources: Vec<Box<dyn TrackSource>>,
}

impl SumSource {
    /// Random-stream spacing between summed members.
    const STREAM_STRIDE: u64 = 16;

    fn from_value(v: &Value) -> std::result::Result<Self, String> {
        let list = v
            .get("sources")
            .and_then(Value::as_array)
            .ok_or("sum source needs a 'sources' array")?;
        if list.is_empty() {
            return Err("sum source needs at least one member".into());
        }
        let sources = list
            .iter()
            .map(|m| source_from_value(m).map_err(|e| e.to_string()))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Self { sources })
    }
}

impl TrackSource for SumSource {
    fn kind(&self) -> &'static str {
        "sum"
    }
    fn generate(&self, ctx: &TrackContext) -> Result<TrackIrregularityProfile> {
        let mut total: Option<TrackIrregularityProfile> = None;
        for (i, src) in self.sources.iter().enumerate() {
            let sub = TrackContext {
                stream: ctx.stream + (i as u64 + 1) * Self::STREAM_STRIDE,
                ..*ctx
            };
            let p = src.generate(&sub)?;
            total = Some(match total {
                None => p,
                Some(t) => t.add(&p)?,
            });
        }
        total.ok_or_else(|| TrackError::Config("empty sum source".into()))
    }
}
