use alignest_track::{compose, decompose, RailDeviations, TrackError, TrackIrregularityProfile};
use proptest::prelude::*;

const MM: f64 = 1e-3;

fn rails(n: usize, uy_l: f64, uy_r: f64, uz_l: f64, uz_r: f64) -> RailDeviations {
    RailDeviations {
        s_grid: (0..n).map(|k| k as f64 * 0.5).collect(),
        u_y_lr: vec![uy_l; n],
        u_y_rr: vec![uy_r; n],
        u_z_lr: vec![uz_l; n],
        u_z_rr: vec![uz_r; n],
    }
}

#[test]
fn symmetric_lateral_shift_is_pure_alignment() {
    let p = decompose(&rails(4, MM, MM, 0.0, 0.0)).unwrap();
    assert!(p.xi_g.iter().all(|&v| v == 0.0));
    assert!(p.xi_a.iter().all(|&v| v == MM));
}

#[test]
fn one_sided_lateral_offset() {
    let p = decompose(&rails(4, 2.0 * MM, 0.0, 0.0, 0.0)).unwrap();
    assert!(p.xi_g.iter().all(|&v| (v - 2.0 * MM).abs() < 1e-18));
    assert!(p.xi_a.iter().all(|&v| (v - MM).abs() < 1e-18));
}

#[test]
fn equal_vertical_rails_are_pure_profile() {
    let p = decompose(&rails(4, 0.0, 0.0, 3.0 * MM, 3.0 * MM)).unwrap();
    assert!(p.xi_cl.iter().all(|&v| v == 0.0));
    assert!(p.xi_vp.iter().all(|&v| (v - 3.0 * MM).abs() < 1e-18));
}

#[test]
fn mismatched_lengths_are_structural_errors() {
    let mut r = rails(4, 0.0, 0.0, 0.0, 0.0);
    r.u_z_rr.pop();
    assert!(matches!(decompose(&r), Err(TrackError::Structural(_))));
}

#[test]
fn non_uniform_grid_is_rejected() {
    let mut r = rails(4, 0.0, 0.0, 0.0, 0.0);
    r.s_grid[2] += 0.1;
    assert!(matches!(decompose(&r), Err(TrackError::Structural(_))));
}

fn profile(xi_g: f64, xi_a: f64) -> TrackIrregularityProfile {
    let n = 3;
    TrackIrregularityProfile {
        s_grid: vec![0.0, 1.0, 2.0],
        xi_g: vec![xi_g; n],
        xi_a: vec![xi_a; n],
        xi_cl: vec![0.0; n],
        xi_vp: vec![0.0; n],
    }
}

#[test]
fn compose_alignment_only() {
    let r = compose(&profile(0.0, MM)).unwrap();
    assert!(r.u_y_lr.iter().all(|&v| v == MM));
    assert!(r.u_y_rr.iter().all(|&v| v == MM));
}

#[test]
fn compose_gauge_only() {
    let r = compose(&profile(2.0 * MM, 0.0)).unwrap();
    assert!(r.u_y_lr.iter().all(|&v| (v - MM).abs() < 1e-18));
    assert!(r.u_y_rr.iter().all(|&v| (v + MM).abs() < 1e-18));
}

#[test]
fn zero_gauge_means_alignment_equals_each_rail() {
    let r = RailDeviations::from_alignment(vec![0.0, 1.0, 2.0], &[1e-3, -2e-3, 5e-4], None).unwrap();
    let p = decompose(&r).unwrap();
    for k in 0..3 {
        assert_eq!(p.xi_a[k], r.u_y_lr[k]);
        assert_eq!(p.xi_a[k], r.u_y_rr[k]);
    }
}

#[test]
fn interpolation_is_linear_and_clamped() {
    let p = TrackIrregularityProfile::from_alignment(vec![0.0, 1.0, 2.0], vec![0.0, 2.0, 4.0]).unwrap();
    let a = alignest_track::Variable::Alignment;
    assert_eq!(p.sample(a, 0.25), 0.5);
    assert_eq!(p.sample(a, 1.5), 3.0);
    assert_eq!(p.sample(a, -1.0), 0.0);
    assert_eq!(p.sample(a, 9.0), 4.0);
}

proptest! {
    // Both directions of the mapping are exact inverses up to rounding of
    // one addition and one halving.
    #[test]
    fn round_trip_is_identity(seed_vals in proptest::collection::vec(-5e-3f64..5e-3, 4 * 16)) {
        let n = 16;
        let s: Vec<f64> = (0..n).map(|k| k as f64 * 0.02).collect();
        let p = TrackIrregularityProfile {
            s_grid: s.clone(),
            xi_g: seed_vals[0..n].to_vec(),
            xi_a: seed_vals[n..2 * n].to_vec(),
            xi_cl: seed_vals[2 * n..3 * n].to_vec(),
            xi_vp: seed_vals[3 * n..4 * n].to_vec(),
        };
        let back = decompose(&compose(&p).unwrap()).unwrap();
        let tol = 1e-18;
        for k in 0..n {
            prop_assert!((back.xi_g[k] - p.xi_g[k]).abs() <= tol);
            prop_assert!((back.xi_a[k] - p.xi_a[k]).abs() <= tol);
            prop_assert!((back.xi_cl[k] - p.xi_cl[k]).abs() <= tol);
            prop_assert!((back.xi_vp[k] - p.xi_vp[k]).abs() <= tol);
        }
        let r = compose(&p).unwrap();
        let r2 = compose(&decompose(&r).unwrap()).unwrap();
        for k in 0..n {
            prop_assert!((r2.u_y_lr[k] - r.u_y_lr[k]).abs() <= tol);
            prop_assert!((r2.u_z_rr[k] - r.u_z_rr[k]).abs() <= tol);
        }
    }
}
