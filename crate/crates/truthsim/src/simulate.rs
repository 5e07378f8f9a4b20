//! Fixed-step RK4 integration of the truth model and sensor synthesis.

use alignest_track::{TrackIrregularityProfile, Variable};
use nalgebra::{SVector, Vector2};

use crate::error::{Result, TruthError};
use crate::model::{assemble_truth, State, NDOF, NSTATE, STATE_NAMES};
use crate::noise::NoiseSpec;
use crate::params::TruthParams;

/// Divergence guard: any state entry beyond this magnitude aborts the run.
pub const DIVERGENCE_LIMIT: f64 = 1.0;

/// Options of one truth simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct TruthOptions {
    /// Forward speed (m/s).
    pub v: f64,
    /// Simulated time (s).
    pub duration: f64,
    /// Integration and sampling step (s).
    pub dt: f64,
    /// Adds the cross-level contamination `g·ξ_cl/(2l)` to the
    /// accelerometers.
    pub cross_level_contamination: bool,
}

/// Result of one truth simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct TruthRun {
    /// Time of each sample (s).
    pub t: Vec<f64>,
    /// Arc-length position of the leading wheelset (m).
    pub s: Vec<f64>,
    /// First-order states `[q, q̇]` of the truth model.
    pub states: Vec<State>,
    /// Clean sensor channels `[acc_w, gyro_w, acc_f]`.
    pub clean: Vec<[f64; 3]>,
    /// Noisy sensor channels.
    pub noisy: Vec<[f64; 3]>,
    /// Lateral alignment under the leading wheelset (m).
    pub xi: Vec<f64>,
    /// Input irregularity profile.
    pub profile: TrackIrregularityProfile,
    /// Forward speed (m/s).
    pub v: f64,
    /// Sampling step (s).
    pub dt: f64,
    /// Noise that was injected.
    pub noise: NoiseSpec,
    /// Half wheelbase used (m); the frame sensor sits at `y_f + a·ψ_f`.
    pub a: f64,
}

impl TruthRun {
    /// Number of samples.
    pub fn len(&self) -> usize {
        self.t.len()
    }

    /// True when the run holds no samples.
    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Projection of the truth state onto the simplified model's augmented
    /// state `[y, ψ, y_f, ẏ, ψ̇, ẏ_f, ξ]` as seen by the sensors: leading
    /// wheelset, frame point above it, alignment under it.
    pub fn reduced_state(&self, k: usize) -> SVector<f64, 7> {
        let x = &self.states[k];
        let a = self.a;
        SVector::from([
            x[0],
            x[1],
            x[4] + a * x[5],
            x[NDOF],
            x[NDOF + 1],
            x[NDOF + 4] + a * x[NDOF + 5],
            self.xi[k],
        ])
    }

    /// All reduced states.
    pub fn reduced_states(&self) -> Vec<SVector<f64, 7>> {
        (0..self.len()).map(|k| self.reduced_state(k)).collect()
    }

    /// Re-applies a different noise specification to the clean channels.
    pub fn with_noise(mut self, noise: NoiseSpec) -> Result<Self> {
        self.noisy = noise.apply(&self.clean)?;
        self.noise = noise;
        Ok(self)
    }
}

/// Integrates the truth model over `profile` and synthesises the sensors.
///
/// The leading wheelset starts at `s_0 + 2a` (so the trailing one starts at
/// the first profile sample) and moves at constant speed.
pub fn simulate_truth(
    tp: &TruthParams,
    profile: &TrackIrregularityProfile,
    opts: &TruthOptions,
    noise: &NoiseSpec,
) -> Result<TruthRun> {
    profile.validate()?;
    noise.validate()?;
    let TruthOptions { v, duration, dt, .. } = *opts;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(TruthError::Config(format!("time step must be positive, got {dt}")));
    }
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(TruthError::Config(format!("duration must be positive, got {duration}")));
    }
    let model = assemble_truth(tp, v)?;
    let a = tp.a;
    let n_steps = (duration / dt).round() as usize;
    let s_start = profile.s_grid[0] + 2.0 * a;
    let s_end = s_start + v * n_steps as f64 * dt;
    if s_end > profile.s_max() + 1e-9 {
        return Err(TruthError::Config(format!(
            "profile too short: run needs arc length up to {s_end:.3} m, profile ends at {:.3} m",
            profile.s_max()
        )));
    }

    let lead = |t: f64| s_start + v * t;
    let input = |t: f64| {
        let s = lead(t);
        Vector2::new(
            profile.sample(Variable::Alignment, s),
            profile.sample(Variable::Alignment, s - 2.0 * a),
        )
    };
    let f = |t: f64, x: &State| model.a_mat * x + model.b_mat * input(t);

    let mut x = State::zeros();
    let mut t_grid = Vec::with_capacity(n_steps + 1);
    let mut s_grid = Vec::with_capacity(n_steps + 1);
    let mut states = Vec::with_capacity(n_steps + 1);
    let mut clean = Vec::with_capacity(n_steps + 1);
    let mut xi = Vec::with_capacity(n_steps + 1);

    let g = tp.sm.g;
    let l = tp.sm.l;
    let lag = (-dt / tp.roll_lag_tau).exp();
    let mut roll_frame = 0.0;

    for k in 0..=n_steps {
        let t = k as f64 * dt;
        let dx = f(t, &x);
        let s = lead(t);
        let mut acc_w = dx[NDOF];
        let gyro = x[NDOF + 1];
        let mut acc_f = dx[NDOF + 4] + a * dx[NDOF + 5];
        if opts.cross_level_contamination {
            let roll = g * profile.sample(Variable::CrossLevel, s) / (2.0 * l);
            acc_w += roll;
            if k > 0 {
                roll_frame = lag * roll_frame + (1.0 - lag) * roll;
            }
            acc_f += roll_frame;
        }
        t_grid.push(t);
        s_grid.push(s);
        states.push(x);
        clean.push([acc_w, gyro, acc_f]);
        xi.push(profile.sample(Variable::Alignment, s));
        if k == n_steps {
            break;
        }
        let k1 = dx;
        let k2 = f(t + 0.5 * dt, &(x + 0.5 * dt * k1));
        let k3 = f(t + 0.5 * dt, &(x + 0.5 * dt * k2));
        let k4 = f(t + dt, &(x + dt * k3));
        x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if let Some(i) = (0..NSTATE).find(|&i| !(x[i].abs() <= DIVERGENCE_LIMIT)) {
            return Err(TruthError::Numeric(format!(
                "truth model diverged at step {} (t = {:.3} s): state {} = {:e}",
                k + 1,
                (k + 1) as f64 * dt,
                STATE_NAMES[i],
                x[i]
            )));
        }
    }

    let noisy = noise.apply(&clean)?;
    Ok(TruthRun {
        t: t_grid,
        s: s_grid,
        states,
        clean,
        noisy,
        xi,
        profile: profile.clone(),
        v,
        dt,
        noise: noise.clone(),
        a,
    })
}
