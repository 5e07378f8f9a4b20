use alignest_dynamics::{assemble_sm, simulate_sm, SmOptions, SmParams};
use alignest_ident::{
    default_bounds, identify, misfit, opt_values, IdentProblem, IrregularityInput, NelderMeadOptions, PENALTY,
};
use alignest_track::{generate_psd_profile, PsdSpec};

const V: f64 = 20.0;

/// Problem whose reference is the simplified model itself with the nominal
/// values, over `duration` seconds at step `dt`.
fn twin_problem(dt: f64, duration: f64, factor: f64) -> IdentProblem {
    let p = SmParams::reference_vehicle();
    let ds = 0.02;
    let values = generate_psd_profile(&PsdSpec::default_alignment(), V * duration + 1.0, ds, 7, 0).unwrap();
    let input = IrregularityInput {
        s0: 0.0,
        ds,
        values,
        start: 0.0,
    };
    let n_steps = (duration / dt).round() as usize;
    let model = assemble_sm(&p, V).unwrap();
    let traj = simulate_sm(&model, dt, n_steps, |t| input.at(V, t)).unwrap();
    let truth = opt_values(&p);
    IdentProblem {
        params: p,
        options: SmOptions::default(),
        initial: truth.map(|v| v * factor),
        bounds: default_bounds(&truth),
        v: V,
        dt,
        input,
        y_ref: traj.states.iter().map(|x| x[0]).collect(),
        psi_ref: traj.states.iter().map(|x| x[1]).collect(),
    }
}

fn check_recovery(factor: f64) {
    let problem = twin_problem(1e-3, 10.0, factor);
    let result = identify(&problem, &NelderMeadOptions::default()).unwrap();
    let truth = opt_values(&SmParams::reference_vehicle());
    let got = result.p_opt();
    let names = ["k_x", "c_x", "k_y", "c_y"];
    let tol = [0.10, 0.25, 0.10, 0.25];
    for i in 0..4 {
        let err = (got[i] / truth[i] - 1.0).abs();
        assert!(err <= tol[i], "start ×{factor}: {} off by {:.1}%", names[i], 100.0 * err);
    }
    assert!(result.j_ls < result.initial_j_ls);
}

#[test]
fn twin_recovery_from_doubled_start() {
    check_recovery(2.0);
}

#[test]
fn twin_recovery_from_halved_start() {
    check_recovery(0.5);
}

#[test]
fn true_parameters_have_zero_misfit() {
    let problem = twin_problem(1e-3, 5.0, 2.0);
    let truth = opt_values(&SmParams::reference_vehicle());
    assert!(misfit(&truth, &problem).unwrap().cost < 1e-20);
}

#[test]
fn zero_model_costs_two_normalized_channels() {
    let mut problem = twin_problem(1e-3, 5.0, 2.0);
    problem.input.values.iter_mut().for_each(|v| *v = 0.0);
    let y_ms = problem.y_ref.iter().map(|v| v * v).sum::<f64>();
    let var = |x: &[f64]| {
        let m = x.iter().sum::<f64>() / x.len() as f64;
        x.iter().map(|v| (v - m).powi(2)).sum::<f64>()
    };
    let psi_ms = problem.psi_ref.iter().map(|v| v * v).sum::<f64>();
    let expected = y_ms / var(&problem.y_ref) + psi_ms / var(&problem.psi_ref);
    let cost = misfit(&opt_values(&SmParams::reference_vehicle()), &problem).unwrap().cost;
    assert!((cost - expected).abs() < 1e-12 * expected);
    assert!((cost - 2.0).abs() < 0.5, "cost {cost}");
}

#[test]
fn argmin_is_invariant_to_channel_scaling() {
    let problem = twin_problem(1e-3, 5.0, 2.0);
    let mut scaled = problem.clone();
    scaled.y_ref.iter_mut().for_each(|v| *v *= 3.0);
    scaled.psi_ref.iter_mut().for_each(|v| *v *= 3.0);
    scaled.input.values.iter_mut().for_each(|v| *v *= 3.0);
    let truth = opt_values(&SmParams::reference_vehicle());
    for factor in [0.7, 1.0, 1.3] {
        let p = truth.map(|v| v * factor);
        let a = misfit(&p, &problem).unwrap().cost;
        let b = misfit(&p, &scaled).unwrap().cost;
        assert!((a - b).abs() <= 1e-9 * a.max(1e-12));
    }
}

#[test]
fn misfit_converges_under_step_refinement() {
    let coarse = twin_problem(1e-3, 5.0, 1.5);
    let fine = twin_problem(5e-4, 5.0, 1.5);
    let a = misfit(&coarse.initial, &coarse).unwrap().cost;
    let b = misfit(&fine.initial, &fine).unwrap().cost;
    assert!((a / b - 1.0).abs() < 0.02, "{a} vs {b}");
}

#[test]
fn best_cost_is_monotone_and_deterministic() {
    let problem = twin_problem(1e-3, 4.0, 2.0);
    let opts = NelderMeadOptions {
        max_iterations: 60,
        ..Default::default()
    };
    let a = identify(&problem, &opts).unwrap();
    let b = identify(&problem, &opts).unwrap();
    assert_eq!(a, b);
    assert!(a.j_ls <= a.initial_j_ls);
    assert!(a.cost_trace.windows(2).all(|w| w[1] <= w[0]));
    assert_eq!(a.iterations, 60);
    assert!(!a.converged);
    for (i, [lo, hi]) in problem.bounds.iter().enumerate() {
        assert!(a.p_opt()[i] >= *lo && a.p_opt()[i] <= *hi);
    }
    let dir = std::env::temp_dir().join(format!("ident-json-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ident.json");
    a.write_json(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v["parameters"]["k_x"].is_number() && v["cost_trace"].is_array() && v["converged"].is_boolean());
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn unstable_candidate_is_penalized() {
    let mut problem = twin_problem(1e-3, 5.0, 2.0);
    // Remove the yaw restraint and most of the creep: the wheelset hunts.
    problem.params.f11 = 1.0;
    problem.params.f22 = 1.0;
    problem.bounds = [[1e-3, 1e9]; 4];
    let m = misfit(&[1e-3, 1e-3, 1e-3, 1e-3], &problem).unwrap();
    if m.penalized {
        assert_eq!(m.cost, PENALTY);
    }
    // Invalid bounds and empty references are rejected.
    let mut bad = twin_problem(1e-3, 1.0, 2.0);
    bad.y_ref.clear();
    bad.psi_ref.clear();
    assert!(misfit(&bad.initial, &bad).is_err());
    let mut bad = twin_problem(1e-3, 1.0, 2.0);
    bad.initial[0] = bad.bounds[0][1] * 2.0;
    assert!(identify(&bad, &NelderMeadOptions::default()).is_err());
}
