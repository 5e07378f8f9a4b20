//! Post-processing of irregularity estimates.
//!
//! * [`bands`] — the whole 3–200 m range and the D1/D2/D3 sub-bands.
//! * [`filter`] — Butterworth band-pass design and zero-phase filtering.
//! * [`metrics`] — band-limited accuracy indices `J` and `J_rel`.
//! * [`spectrum`] — single-sided FFT amplitude spectrum.
//! * [`io`] — JSON/CSV artifacts.

pub mod bands;
pub mod error;
pub mod filter;
pub mod io;
pub mod metrics;
pub mod spectrum;

pub use bands::{standard_bands, WavelengthBand};
pub use error::{AnalysisError, Result};
pub use filter::{band_filter, bandpass, butter_bandpass, Section, Sos, BUTTERWORTH_ORDER};
pub use metrics::{accuracy_indices, AccuracyReport, BandAccuracy, TRIM_LENGTH};
pub use spectrum::{spectrum, Spectrum};
