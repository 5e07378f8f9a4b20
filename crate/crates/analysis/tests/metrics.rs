use std::f64::consts::PI;

use alignest_analysis::{
    accuracy_indices, spectrum, standard_bands, AccuracyReport, WavelengthBand, TRIM_LENGTH,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

const DS: f64 = 0.02;

fn profile(seed: u64) -> Vec<f64> {
    alignest_track::generate_psd_profile(&alignest_track::PsdSpec::default_alignment(), 400.0, DS, seed, 0).unwrap()
}

#[test]
fn identical_signals_have_zero_error() {
    let x = profile(1);
    for band in standard_bands() {
        let acc = accuracy_indices(&x, &x, DS, &band).unwrap();
        assert_eq!(acc.j_mm, 0.0);
        assert_eq!(acc.j_rel, Some(0.0));
    }
}

#[test]
fn constant_offset_is_removed() {
    let x = profile(2);
    let shifted: Vec<f64> = x.iter().map(|v| v + 1e-3).collect();
    let acc = accuracy_indices(&shifted, &x, DS, &WavelengthBand::whole()).unwrap();
    assert!(acc.j_mm < 1e-3, "J = {} mm", acc.j_mm);
}

#[test]
fn relative_index_is_consistent() {
    let x = profile(3);
    let y = profile(4);
    let est: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + 0.2 * b).collect();
    let band = WavelengthBand::whole();
    let acc = accuracy_indices(&est, &x, DS, &band).unwrap();
    let r = alignest_analysis::bandpass(&x, DS, &band).unwrap();
    let trim = (TRIM_LENGTH / DS).round() as usize;
    let r = &r[trim..r.len() - trim];
    let rms = (r.iter().map(|v| v * v).sum::<f64>() / r.len() as f64).sqrt();
    assert!((acc.j_rel.unwrap() * rms * 1e3 - acc.j_mm).abs() < 1e-12 * acc.j_mm.max(1.0));
}

#[test]
fn zero_reference_gives_absent_relative_index() {
    let x = profile(5);
    let zero = vec![0.0; x.len()];
    let acc = accuracy_indices(&x, &zero, DS, &WavelengthBand::d1()).unwrap();
    assert!(acc.j_mm > 0.0);
    assert_eq!(acc.j_rel, None);
}

#[test]
fn mismatched_lengths_are_rejected() {
    let x = profile(1);
    assert!(accuracy_indices(&x[..x.len() - 1], &x, DS, &WavelengthBand::whole()).is_err());
}

#[test]
fn report_json_layout() {
    let x = profile(6);
    let y = profile(7);
    let report = AccuracyReport::compute("standard", &x, &y, DS, &standard_bands()).unwrap();
    let v: serde_json::Value = serde_json::to_value(&report).unwrap();
    assert_eq!(v["run_id"], "standard");
    let names: Vec<&str> = v["bands"].as_array().unwrap().iter().map(|b| b["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["whole", "D1", "D2", "D3"]);
    assert!(v["bands"][0]["J_mm"].is_number() && v["bands"][0]["J_rel"].is_number());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    alignest_analysis::io::write_report_json(&report, &path).unwrap();
    let back: AccuracyReport = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(back, report);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]
    #[test]
    fn swapping_estimate_and_reference_keeps_j(a in 0u64..1000, b in 0u64..1000) {
        let x = profile(a);
        let y = profile(b + 1000);
        let band = WavelengthBand::whole();
        let xy = accuracy_indices(&x, &y, DS, &band).unwrap();
        let yx = accuracy_indices(&y, &x, DS, &band).unwrap();
        prop_assert!((xy.j_mm - yx.j_mm).abs() <= 1e-12 * xy.j_mm.max(1e-12));
    }
}

#[test]
fn sinusoid_spectrum_peak() {
    let n = 20_000; // 400 m
    let x: Vec<f64> = (0..n).map(|k| 1e-3 * (2.0 * PI * k as f64 * DS / 15.66).sin()).collect();
    let spec = spectrum(&x, DS).unwrap();
    let df = spec.freq[1];
    let k = spec.peak_bin();
    assert!((spec.freq[k] - 1.0 / 15.66).abs() <= df, "peak at {}", spec.freq[k]);
    assert!((spec.freq[k] - 0.0639).abs() <= df + 1e-4);
}

#[test]
fn spectrum_parseval_and_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let normal = Normal::new(0.0, 1.0).unwrap();
    for n in [1000usize, 1001] {
        let x: Vec<f64> = (0..n).map(|_| normal.sample(&mut rng)).collect();
        let ms = x.iter().map(|v| v * v).sum::<f64>() / n as f64;
        let spec = spectrum(&x, DS).unwrap();
        assert!((spec.mean_square() / ms - 1.0).abs() < 0.01);
    }
    let spec = spectrum(&vec![0.0; 64], DS).unwrap();
    assert!(spec.magnitude.iter().all(|&m| m == 0.0));
    assert!(spectrum(&[1.0; 8], DS).is_err());
}

#[test]
fn white_noise_spectrum_is_flat() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let normal = Normal::new(0.0, 1.0).unwrap();
    let n = 1024;
    let mut avg = vec![0.0; n / 2 + 1];
    for _ in 0..10 {
        let x: Vec<f64> = (0..n).map(|_| normal.sample(&mut rng)).collect();
        let spec = spectrum(&x, DS).unwrap();
        for (a, m) in avg.iter_mut().zip(&spec.magnitude) {
            *a += m * m / 10.0;
        }
    }
    let interior = &avg[1..n / 2];
    let mut sorted = interior.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    assert!(interior.iter().all(|&p| p <= 5.0 * median));
}

#[test]
fn spectrum_csv_header() {
    let x: Vec<f64> = (0..64).map(|k| (k as f64).sin()).collect();
    let spec = spectrum(&x, DS).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    alignest_analysis::io::write_spectrum_csv(&spec, &path).unwrap();
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.starts_with("freq_cyc_per_m,magnitude_m\n"));
    assert_eq!(text.lines().count(), 34);
}
