use alignest_dynamics::{assemble_sm, SmParams};
use alignest_estimator::{
    bundle_for_model, default_p0, kf_run, CovarianceJson, CovarianceTuning, EstimatorError, FilterBundle, NX,
};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn scalar(q: f64, r: f64) -> FilterBundle {
    let one = DMatrix::from_element(1, 1, 1.0);
    FilterBundle::from_discrete(one.clone(), one, DMatrix::from_element(1, 1, q), DMatrix::from_element(1, 1, r), 1.0)
}

fn sm_bundle(r_scale: f64) -> FilterBundle {
    let model = assemble_sm(&SmParams::reference_vehicle(), 20.0).unwrap();
    let mut b = bundle_for_model(&model, 1e-3, "expm").unwrap();
    b.q = CovarianceTuning::default().q();
    b.r = DMatrix::from_diagonal(&DVector::from_row_slice(&[1e-4, 1e-8, 1e-4, 0.09])) * r_scale;
    b
}

fn random_meas(n: usize, m: usize, seed: u64, scale: [f64; 4]) -> Vec<DVector<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 1.0).unwrap();
    (0..n)
        .map(|_| DVector::from_fn(m, |i, _| scale[i % 4] * normal.sample(&mut rng)))
        .collect()
}

#[test]
fn scalar_riccati_steady_state() {
    let b = scalar(1.0, 1.0);
    let z: Vec<_> = (0..200).map(|_| DVector::from_element(1, 0.0)).collect();
    let out = kf_run(&b, &z, &DVector::zeros(1), &DMatrix::from_element(1, 1, 1.0)).unwrap();
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let p_prior = out.last_prior_covariance(&b).unwrap()[(0, 0)];
    assert!((p_prior - golden).abs() < 1e-9, "P⁻ = {p_prior}");
    let gain = p_prior / (p_prior + 1.0);
    assert!((gain - 0.618_033_988_749_895).abs() < 1e-9);
    // Posterior equals the Riccati fixed point P⁺ = P⁻ − K·P⁻.
    assert!((out.p_post.last().unwrap()[(0, 0)] - (p_prior - gain * p_prior)).abs() < 1e-9);
}

#[test]
fn infinite_measurement_noise_is_pure_prediction() {
    let mut b = sm_bundle(1.0);
    b.r = DMatrix::identity(4, 4) * 1e30;
    let x0 = DVector::from_row_slice(&[1e-3, 1e-4, 0.0, 0.0, 0.0, 0.0, 1e-3]);
    let z = random_meas(300, 4, 1, [1.0, 1e-2, 1.0, 1.0]);
    let out = kf_run(&b, &z, &x0, &default_p0()).unwrap();
    let mut x = x0.clone();
    for post in &out.x_post {
        x = &b.f * &x;
        assert!((post - &x).amax() < 1e-12);
    }
}

#[test]
fn filter_is_linear_in_measurements_and_initial_state() {
    let b = sm_bundle(1.0);
    let p0 = default_p0();
    let z1 = random_meas(400, 4, 2, [0.1, 1e-3, 0.1, 0.0]);
    let z2 = random_meas(400, 4, 3, [0.1, 1e-3, 0.1, 0.0]);
    let x1 = DVector::from_row_slice(&[1e-3, 0.0, 2e-3, 0.0, 0.0, 0.0, 0.0]);
    let x2 = DVector::from_row_slice(&[0.0, 1e-4, 0.0, 1e-3, 0.0, 0.0, 1e-3]);
    let sum: Vec<_> = z1.iter().zip(&z2).map(|(a, b)| a + b).collect();
    let a = kf_run(&b, &z1, &x1, &p0).unwrap();
    let c = kf_run(&b, &z2, &x2, &p0).unwrap();
    let s = kf_run(&b, &sum, &(&x1 + &x2), &p0).unwrap();
    for k in 0..sum.len() {
        let diff = &s.x_post[k] - (&a.x_post[k] + &c.x_post[k]);
        let scale = s.x_post[k].amax().max(1e-9);
        assert!(diff.amax() <= 1e-9 * scale, "step {k}");
    }
}

#[test]
fn covariance_stays_psd_and_grows_with_measurement_noise() {
    let p0 = default_p0();
    let z = random_meas(3000, 4, 4, [0.1, 1e-3, 0.1, 0.0]);
    let small = kf_run(&sm_bundle(1.0), &z, &DVector::zeros(NX), &p0).unwrap();
    let big = kf_run(&sm_bundle(100.0), &z, &DVector::zeros(NX), &p0).unwrap();
    // Compare in the scaled coordinates the filter runs in.
    let d = DMatrix::from_diagonal(&p0.diagonal().map(|v| 1.0 / v.sqrt()));
    for p in &small.p_post {
        assert_eq!(p, &p.transpose());
        let min = (&d * p * &d).symmetric_eigenvalues().min();
        assert!(min >= -1e-12, "min eigenvalue {min}");
    }
    let diff = &d * (big.p_post.last().unwrap() - small.p_post.last().unwrap()) * &d;
    let eig = diff.symmetric_eigenvalues();
    assert!(eig.min() >= -1e-9 * eig.amax(), "difference not PSD: {}", eig.min());
    assert!(eig.max() > 0.0);
}

#[test]
fn innovations_of_matched_model_are_white() {
    // Stochastic two-state model simulated with exactly the filter's Q and R.
    let f = DMatrix::from_row_slice(2, 2, &[0.95, 0.1, -0.1, 0.9]);
    let h = DMatrix::from_row_slice(1, 2, &[1.0, 0.0]);
    let q = DMatrix::from_diagonal(&DVector::from_row_slice(&[0.01, 0.04]));
    let r = DMatrix::from_element(1, 1, 0.25);
    let b = FilterBundle::from_discrete(f.clone(), h.clone(), q, r, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let n = Normal::new(0.0, 1.0).unwrap();
    let mut x = DVector::zeros(2);
    let mut z = Vec::new();
    for _ in 0..20_000 {
        x = &f * &x + DVector::from_row_slice(&[0.1 * n.sample(&mut rng), 0.2 * n.sample(&mut rng)]);
        z.push(&h * &x + DVector::from_element(1, 0.5 * n.sample(&mut rng)));
    }
    let out = kf_run(&b, &z, &DVector::zeros(2), &DMatrix::identity(2, 2)).unwrap();
    let nu: Vec<f64> = out.innovations[100..].iter().map(|v| v[0]).collect();
    let mean = nu.iter().sum::<f64>() / nu.len() as f64;
    let var = nu.iter().map(|v| (v - mean).powi(2)).sum::<f64>();
    let lag1 = nu.windows(2).map(|w| (w[0] - mean) * (w[1] - mean)).sum::<f64>();
    let rho = lag1 / var;
    assert!(rho.abs() < 0.2, "lag-1 autocorrelation {rho}");
}

#[test]
fn singular_innovation_covariance_reports_step() {
    let zero = DMatrix::zeros(1, 1);
    let b = FilterBundle::from_discrete(DMatrix::identity(1, 1), zero.clone(), zero.clone(), zero.clone(), 1.0);
    let z = vec![DVector::zeros(1); 3];
    match kf_run(&b, &z, &DVector::zeros(1), &DMatrix::identity(1, 1)) {
        Err(EstimatorError::Numeric { step, .. }) => assert_eq!(step, Some(0)),
        other => panic!("expected numeric error, got {other:?}"),
    }
}

#[test]
fn non_finite_measurement_reports_step() {
    let b = sm_bundle(1.0);
    let mut z = random_meas(10, 4, 5, [0.1, 1e-3, 0.1, 0.0]);
    z[7][1] = f64::NAN;
    let err = kf_run(&b, &z, &DVector::zeros(NX), &default_p0()).unwrap_err();
    assert!(matches!(err, EstimatorError::Numeric { step: Some(7), .. }));
    assert!(err.to_string().contains("step 7"));
}

#[test]
fn dimension_errors() {
    let b = sm_bundle(1.0);
    let z = random_meas(5, 3, 1, [1.0; 4]);
    assert!(matches!(
        kf_run(&b, &z, &DVector::zeros(NX), &default_p0()),
        Err(EstimatorError::Config(_))
    ));
    assert!(kf_run(&b, &[], &DVector::zeros(NX), &default_p0()).is_err());
    let mut bad = sm_bundle(1.0);
    bad.q[(0, 1)] = 1.0;
    assert!(kf_run(&bad, &random_meas(5, 4, 1, [1.0; 4]), &DVector::zeros(NX), &default_p0()).is_err());
}

#[test]
fn covariance_json_round_trip() {
    let b = sm_bundle(1.0);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cov.json");
    alignest_estimator::io::write_covariance_json(&CovarianceJson::new(&b.q, &b.r), &path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["q"].as_array().unwrap().len(), 7);
    assert_eq!(v["r"][0].as_array().unwrap().len(), 4);
    let (q, r) = alignest_estimator::io::read_covariance_json(&path).unwrap().matrices().unwrap();
    assert_eq!((q, r), (b.q, b.r));
}

#[test]
fn estimate_and_innovation_csv_headers() {
    let b = sm_bundle(1.0);
    let z = random_meas(5, 4, 1, [0.1, 1e-3, 0.1, 0.0]);
    let out = kf_run(&b, &z, &DVector::zeros(NX), &default_p0()).unwrap();
    let t: Vec<f64> = (0..5).map(|k| k as f64 * 1e-3).collect();
    let s: Vec<f64> = t.iter().map(|t| 20.0 * t).collect();
    let dir = tempfile::tempdir().unwrap();
    let est = dir.path().join("est.csv");
    let inn = dir.path().join("inn.csv");
    alignest_estimator::io::write_estimate_csv(&out, &t, &s, &est).unwrap();
    alignest_estimator::io::write_innovation_csv(&out, &t, &s, &inn).unwrap();
    let est = std::fs::read_to_string(est).unwrap();
    assert!(est.starts_with("t_s,s_m,xi_est_m,y_est_m,psi_est_rad,yf_est_m\n"));
    assert_eq!(est.lines().count(), 6);
    let inn = std::fs::read_to_string(inn).unwrap();
    assert!(inn.starts_with("t_s,s_m,nu_acc_w_ms2,nu_gyro_w_rads,nu_acc_f_ms2,nu_xi_m\n"));
    assert!(alignest_estimator::io::write_estimate_csv(&out, &t[..4], &s, dir.path().join("x.csv").as_path()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn scalar_filter_scales_with_measurements(k in -5.0f64..5.0, seed in 0u64..100) {
        let b = scalar(0.3, 2.0);
        let z = random_meas(50, 1, seed, [1.0; 4]);
        let zk: Vec<_> = z.iter().map(|v| v * k).collect();
        let p0 = DMatrix::from_element(1, 1, 1.0);
        let a = kf_run(&b, &z, &DVector::zeros(1), &p0).unwrap();
        let c = kf_run(&b, &zk, &DVector::zeros(1), &p0).unwrap();
        for (x, y) in a.x_post.iter().zip(&c.x_post) {
            prop_assert!((x[0] * k - y[0]).abs() <= 1e-12 * (1.0 + y[0].abs()));
        }
    }
}
