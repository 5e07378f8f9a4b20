//! Identification of the simplified model's suspension parameters
//! `[k_x, c_x, k_y, c_y]` by minimizing the time-domain misfit between
//! reference and model wheelset responses to the same lateral irregularity.

pub mod error;
pub mod optimize;
pub mod problem;

pub use error::{IdentError, Result};
pub use optimize::{identify, IdentResult, NelderMeadOptions};
pub use problem::{default_bounds, misfit, IdentProblem, IrregularityInput, Misfit, N_OPT, PENALTY};

use alignest_dynamics::{OptParam, SmParams};

/// Current values of the identified subset of `p`, in canonical order.
pub fn opt_values(p: &SmParams) -> [f64; N_OPT] {
    OptParam::ALL.map(|o| o.get(p))
}
