//! Bounded Nelder–Mead descent in log-parameter space.

use std::collections::BTreeMap;
use std::path::Path;

use alignest_dynamics::OptParam;
use serde::{Deserialize, Serialize};

use crate::error::{IdentError, Result};
use crate::problem::{misfit_unchecked, IdentProblem, N_OPT};

/// Optimizer settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NelderMeadOptions {
    /// Stop when every vertex lies within this log-space distance
    /// (max-norm) of the best one.
    pub size_tolerance: f64,
    /// Iteration cap.
    pub max_iterations: usize,
    /// Log-space offset of the initial simplex vertices.
    pub initial_step: f64,
    /// Maximum number of times the simplex is rebuilt around the best
    /// vertex after collapsing; guards against premature collapse in flat
    /// valleys. Restarts stop as soon as one fails to improve the cost.
    pub restarts: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            size_tolerance: 1e-4,
            max_iterations: 500,
            initial_step: 0.25,
            restarts: 3,
        }
    }
}

/// Outcome of an identification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentResult {
    /// Identified values by parameter name.
    pub parameters: BTreeMap<String, f64>,
    /// Final cost.
    pub j_ls: f64,
    /// Cost of the initial guess.
    pub initial_j_ls: f64,
    pub iterations: usize,
    pub evaluations: usize,
    /// True when the simplex shrank below tolerance after improving on the
    /// initial guess.
    pub converged: bool,
    /// Best cost after each iteration.
    pub cost_trace: Vec<f64>,
}

impl IdentResult {
    /// Identified values in canonical order `[k_x, c_x, k_y, c_y]`.
    pub fn p_opt(&self) -> [f64; N_OPT] {
        OptParam::ALL.map(|p| self.parameters[p.name()])
    }

    /// Writes the result as pretty JSON.
    pub fn write_json(&self, path: &Path) -> Result<()> {
        let io = |e: &dyn std::fmt::Display| IdentError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        };
        let text = serde_json::to_string_pretty(self).map_err(|e| io(&e))?;
        std::fs::write(path, text + "\n").map_err(|e| io(&e))
    }
}

struct Objective<'a> {
    problem: &'a IdentProblem,
    lo: [f64; N_OPT],
    hi: [f64; N_OPT],
    evaluations: usize,
}

impl Objective<'_> {
    fn clamp(&self, mut u: [f64; N_OPT]) -> [f64; N_OPT] {
        for i in 0..N_OPT {
            u[i] = u[i].clamp(self.lo[i], self.hi[i]);
        }
        u
    }

    fn eval(&mut self, u: &[f64; N_OPT]) -> f64 {
        self.evaluations += 1;
        misfit_unchecked(&u.map(f64::exp), self.problem).cost
    }
}

fn combine(a: &[f64; N_OPT], b: &[f64; N_OPT], t: f64) -> [f64; N_OPT] {
    // a + t·(b − a)
    std::array::from_fn(|i| a[i] + t * (b[i] - a[i]))
}

/// Minimizes the misfit from the problem's initial guess.
pub fn identify(problem: &IdentProblem, opts: &NelderMeadOptions) -> Result<IdentResult> {
    problem.validate()?;
    if !(opts.size_tolerance > 0.0 && opts.initial_step > 0.0) {
        return Err(IdentError::Config("optimizer tolerances must be positive".into()));
    }
    let mut obj = Objective {
        problem,
        lo: problem.bounds.map(|b| b[0].ln()),
        hi: problem.bounds.map(|b| b[1].ln()),
        evaluations: 0,
    };
    let u0 = problem.initial.map(f64::ln);
    let f0 = obj.eval(&u0);

    let mut trace = Vec::new();
    let mut iterations = 0;
    let mut size_reached = false;
    let mut start = (u0, f0);
    let mut simplex = Vec::new();
    for restart in 0..=opts.restarts {
        simplex = initial_simplex(&mut obj, start, opts.initial_step);
        size_reached = false;
        while iterations < opts.max_iterations {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            if simplex_size(&simplex) < opts.size_tolerance {
                size_reached = true;
                break;
            }
            iterations += 1;
            nelder_mead_step(&mut obj, &mut simplex);
            trace.push(simplex.iter().map(|v| v.1).fold(f64::INFINITY, f64::min));
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let improved = simplex[0].1 < start.1;
        if !size_reached || (restart > 0 && !improved) {
            break;
        }
        start = simplex[0];
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    // Never report anything worse than the initial guess.
    let (u_best, f_best) = if simplex[0].1 <= f0 { simplex[0] } else { (u0, f0) };
    let improved = f_best < f0;
    let p = u_best.map(f64::exp);
    let parameters = OptParam::ALL
        .iter()
        .zip(p)
        .map(|(param, v)| (param.name().to_string(), v))
        .collect();
    Ok(IdentResult {
        parameters,
        j_ls: f_best,
        initial_j_ls: f0,
        iterations,
        evaluations: obj.evaluations,
        converged: size_reached && (improved || f0 == 0.0),
        cost_trace: trace,
    })
}

fn initial_simplex(
    obj: &mut Objective<'_>,
    (u0, f0): ([f64; N_OPT], f64),
    step: f64,
) -> Vec<([f64; N_OPT], f64)> {
    let mut simplex = vec![(u0, f0)];
    for i in 0..N_OPT {
        let mut u = u0;
        // Step inward when the vertex sits on the upper bound.
        u[i] += if u0[i] + step <= obj.hi[i] { step } else { -step };
        let u = obj.clamp(u);
        let f = obj.eval(&u);
        simplex.push((u, f));
    }
    simplex
}

/// Largest max-norm distance of a vertex from the best (first) one.
fn simplex_size(simplex: &[([f64; N_OPT], f64)]) -> f64 {
    simplex[1..]
        .iter()
        .map(|(u, _)| u.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
        .fold(0.0, f64::max)
}

/// One reflect/expand/contract/shrink step on a simplex sorted by cost.
fn nelder_mead_step(obj: &mut Objective<'_>, simplex: &mut [([f64; N_OPT], f64)]) {
    let worst = simplex[N_OPT];
    let centroid: [f64; N_OPT] =
        std::array::from_fn(|i| simplex[..N_OPT].iter().map(|(u, _)| u[i]).sum::<f64>() / N_OPT as f64);
    let reflect = obj.clamp(combine(&centroid, &worst.0, -1.0));
    let fr = obj.eval(&reflect);
    if fr < simplex[0].1 {
        let expand = obj.clamp(combine(&centroid, &worst.0, -2.0));
        let fe = obj.eval(&expand);
        simplex[N_OPT] = if fe < fr { (expand, fe) } else { (reflect, fr) };
    } else if fr < simplex[N_OPT - 1].1 {
        simplex[N_OPT] = (reflect, fr);
    } else {
        let (target, ft) = if fr < worst.1 { (reflect, fr) } else { (worst.0, worst.1) };
        let contract = obj.clamp(combine(&centroid, &target, 0.5));
        let fc = obj.eval(&contract);
        if fc < ft {
            simplex[N_OPT] = (contract, fc);
        } else {
            let best = simplex[0].0;
            for vertex in simplex.iter_mut().skip(1) {
                let u = combine(&best, &vertex.0, 0.5);
                *vertex = (u, obj.eval(&u));
            }
        }
    }
}
