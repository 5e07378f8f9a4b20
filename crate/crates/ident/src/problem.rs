//! Identification problem and the least-squares misfit.

use alignest_dynamics::{assemble_sm_with, simulate_sm, OptParam, SmOptions, SmParams};
use alignest_track::interp_uniform;

use crate::error::{IdentError, Result};

/// Cost assigned to candidates whose model cannot be simulated.
pub const PENALTY: f64 = 1e6;

/// Number of identified parameters.
pub const N_OPT: usize = 4;

/// Irregularity input shared by the reference and the model: samples
/// `values[i]` at arc length `s0 + i·ds`; the wheelset sits at
/// `start + V·t`.
#[derive(Debug, Clone, PartialEq)]
pub struct IrregularityInput {
    pub s0: f64,
    pub ds: f64,
    pub values: Vec<f64>,
    /// Wheelset position at `t = 0` (m).
    pub start: f64,
}

impl IrregularityInput {
    /// Irregularity under the wheelset at time `t` for speed `v`.
    pub fn at(&self, v: f64, t: f64) -> f64 {
        interp_uniform(self.s0, self.ds, &self.values, self.start + v * t)
    }
}

/// Suspension-parameter identification problem.
///
/// The fixed parameters are the entries of `params` outside
/// [`OptParam::ALL`]; the identified ones start from `initial`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentProblem {
    /// Fixed parameters (the identified entries are overwritten).
    pub params: SmParams,
    pub options: SmOptions,
    /// Initial guess `[k_x, c_x, k_y, c_y]`.
    pub initial: [f64; N_OPT],
    /// Bounds `[lo, hi]` per identified parameter.
    pub bounds: [[f64; 2]; N_OPT],
    /// Forward speed (m/s).
    pub v: f64,
    /// Sampling step of the reference (s).
    pub dt: f64,
    pub input: IrregularityInput,
    /// Reference wheelset lateral displacement at `t_k = k·dt` (m).
    pub y_ref: Vec<f64>,
    /// Reference wheelset yaw at the same instants (rad).
    pub psi_ref: Vec<f64>,
}

/// Default bounds: a factor of 20 either side of `center`.
pub fn default_bounds(center: &[f64; N_OPT]) -> [[f64; 2]; N_OPT] {
    center.map(|c| [c / 20.0, c * 20.0])
}

/// Misfit of one candidate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Misfit {
    /// Cost value, [`PENALTY`] for unstable candidates.
    pub cost: f64,
    /// Set when the candidate could not be simulated.
    pub penalized: bool,
}

fn std_dev(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    (x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt()
}

impl IdentProblem {
    /// Checks lengths, bounds and the initial guess.
    pub fn validate(&self) -> Result<()> {
        if self.y_ref.is_empty() || self.psi_ref.is_empty() {
            return Err(IdentError::Config("empty reference".into()));
        }
        if self.y_ref.len() != self.psi_ref.len() {
            return Err(IdentError::Config(format!(
                "reference channels differ in length ({} vs {})",
                self.y_ref.len(),
                self.psi_ref.len()
            )));
        }
        if !(self.dt > 0.0 && self.v > 0.0) {
            return Err(IdentError::Config("dt and V must be positive".into()));
        }
        if self.input.values.len() < 2 || !(self.input.ds > 0.0) {
            return Err(IdentError::Config("irregularity input needs at least two samples".into()));
        }
        let end = self.input.start + self.v * self.dt * (self.y_ref.len() - 1) as f64;
        let available = self.input.s0 + self.input.ds * (self.input.values.len() - 1) as f64;
        if self.input.start < self.input.s0 || end > available + 1e-9 {
            return Err(IdentError::Config(format!(
                "irregularity input covers [{}, {available}] m but the reference needs [{}, {end}] m",
                self.input.s0, self.input.start
            )));
        }
        for (i, p) in OptParam::ALL.iter().enumerate() {
            let [lo, hi] = self.bounds[i];
            if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo < hi) {
                return Err(IdentError::Config(format!(
                    "bounds of {} must be finite with 0 < lo < hi, got [{lo}, {hi}]",
                    p.name()
                )));
            }
            let x = self.initial[i];
            if !(x >= lo && x <= hi) {
                return Err(IdentError::Config(format!(
                    "initial {} = {x} lies outside [{lo}, {hi}]",
                    p.name()
                )));
            }
        }
        for (name, ch) in [("y", &self.y_ref), ("psi", &self.psi_ref)] {
            if !ch.iter().all(|v| v.is_finite()) {
                return Err(IdentError::Config(format!("reference {name} contains non-finite values")));
            }
            if !(std_dev(ch) > 0.0) {
                return Err(IdentError::Config(format!("reference {name} has zero variance")));
            }
        }
        Ok(())
    }

    /// Model parameters with the identified subset set to `p_opt`.
    pub fn params_with(&self, p_opt: &[f64; N_OPT]) -> SmParams {
        let mut p = self.params.clone();
        for (param, &v) in OptParam::ALL.iter().zip(p_opt) {
            param.set(&mut p, v);
        }
        p
    }

    /// Simulated `(y, ψ)` of the model with `p_opt`, or `None` if the
    /// model cannot be assembled or diverges.
    pub fn simulate(&self, p_opt: &[f64; N_OPT]) -> Option<(Vec<f64>, Vec<f64>)> {
        let model = assemble_sm_with(&self.params_with(p_opt), self.v, &self.options).ok()?;
        let n_steps = self.y_ref.len() - 1;
        let traj = simulate_sm(&model, self.dt, n_steps, |t| self.input.at(self.v, t)).ok()?;
        let y: Vec<f64> = traj.states.iter().map(|x| x[0]).collect();
        let psi: Vec<f64> = traj.states.iter().map(|x| x[1]).collect();
        (y.iter().chain(&psi).all(|v| v.is_finite())).then_some((y, psi))
    }

    /// Mean squared error over both channels, each divided by the standard
    /// deviation of the reference channel.
    pub fn cost_of(&self, y: &[f64], psi: &[f64]) -> f64 {
        let (sy, sp) = (std_dev(&self.y_ref), std_dev(&self.psi_ref));
        let n = self.y_ref.len() as f64;
        let sum: f64 = (0..self.y_ref.len())
            .map(|k| ((self.y_ref[k] - y[k]) / sy).powi(2) + ((self.psi_ref[k] - psi[k]) / sp).powi(2))
            .sum();
        sum / n
    }
}

/// Least-squares misfit `J_ls` of the candidate `p_opt`.
pub fn misfit(p_opt: &[f64; N_OPT], problem: &IdentProblem) -> Result<Misfit> {
    problem.validate()?;
    Ok(misfit_unchecked(p_opt, problem))
}

pub(crate) fn misfit_unchecked(p_opt: &[f64; N_OPT], problem: &IdentProblem) -> Misfit {
    match problem.simulate(p_opt) {
        Some((y, psi)) => Misfit {
            cost: problem.cost_of(&y, &psi),
            penalized: false,
        },
        None => Misfit {
            cost: PENALTY,
            penalized: true,
        },
    }
}
