//! Track irregularity variables and profile synthesis.
//!
//! * [`profile`] — rail deviations and the gauge / alignment / cross-level /
//!   vertical-profile variables derived from them, with exact inverse.
//! * [`psd`] — rational PSD, closed-form band variance, seeded
//!   spectral-representation synthesis, harmonic profiles.
//! * [`source`] — registry of runtime-selectable track sources.
//! * [`io`] — profile CSV format.

pub mod error;
pub mod io;
pub mod profile;
pub mod psd;
pub mod source;

pub use error::{Result, TrackError};
pub use profile::{
    compose, decompose, grid_spacing, interp_uniform, uniform_grid, RailDeviations,
    TrackIrregularityProfile, Variable,
};
pub use psd::{generate_harmonic_profile, generate_psd_profile, PsdSpec, PsdVariable};
pub use source::{source_from_value, source_registry, TrackContext, TrackSource};

/// Random stream used for the lateral alignment signal.
pub const STREAM_ALIGNMENT: u64 = 0;
/// Random stream used for the left-rail vertical deviation.
pub const STREAM_VERTICAL_LEFT: u64 = 1;
/// Random stream used for the right-rail vertical deviation.
pub const STREAM_VERTICAL_RIGHT: u64 = 2;

/// Adds independent left/right vertical rail deviations drawn from `spec`
/// to a lateral profile, returning the combined irregularity profile.
///
/// The lateral variables of `lateral` are kept; cross-level and vertical
/// profile are recomputed from the two synthesised rails.
pub fn with_vertical(
    lateral: &TrackIrregularityProfile,
    spec: &PsdSpec,
    seed: u64,
) -> Result<TrackIrregularityProfile> {
    lateral.validate()?;
    let length = lateral.s_max() - lateral.s_grid[0];
    let ds = lateral.ds();
    let zl = generate_psd_profile(spec, length, ds, seed, STREAM_VERTICAL_LEFT)?;
    let zr = generate_psd_profile(spec, length, ds, seed, STREAM_VERTICAL_RIGHT)?;
    if zl.len() != lateral.len() {
        return Err(TrackError::Structural(format!(
            "vertical grid has {} samples, lateral grid {}",
            zl.len(),
            lateral.len()
        )));
    }
    let mut rails = compose(lateral)?;
    for k in 0..rails.s_grid.len() {
        rails.u_z_lr[k] += zl[k];
        rails.u_z_rr[k] += zr[k];
    }
    decompose(&rails)
}
