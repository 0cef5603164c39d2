use rap_core::analysis::{add_noise, adiabaticity_profile, Noise, ADIABATIC_THRESHOLD};
use rap_core::{
    evolve_amplitudes, fit_rabi, simulate_rabi_scan, sweep_chirp_span, sweep_peak_rabi,
    AmplitudeState, FitOptions, Pulse64, SweepOptions,
};

fn base() -> Pulse64 {
    Pulse64::new(150e-6, 512e3, 400e3).unwrap()
}

fn span_grid(from_khz: u32, to_khz: u32, step_khz: u32) -> Vec<f64> {
    (from_khz..=to_khz)
        .step_by(step_khz as usize)
        .map(|k| k as f64 * 1e3)
        .collect()
}

#[test]
fn plateau_is_flat_and_high() {
    let r = sweep_chirp_span(&base(), &span_grid(200, 500, 50), &SweepOptions::default()).unwrap();
    assert!(r.all_ok());
    assert!(r.min_efficiency().unwrap() >= 0.99);
    assert!(r.max_efficiency().unwrap() - r.min_efficiency().unwrap() < 0.01);
}

#[test]
fn low_metric_points_transfer_well() {
    let spans = span_grid(50, 1500, 50);
    let r = sweep_chirp_span(&base(), &spans, &SweepOptions::default()).unwrap();
    for ((span, eta), eff) in spans.iter().zip(&r.peak_metric).zip(&r.efficiencies) {
        if *eta < ADIABATIC_THRESHOLD {
            assert!(eff.unwrap() > 0.99, "span {span} eta {eta}");
        }
    }
}

#[test]
fn unchirped_point_matches_amplitude_oracle() {
    let r = sweep_chirp_span(&base(), &[0.0], &SweepOptions::default()).unwrap();
    let p = base().with_chirp_span(0.0);
    let oracle = evolve_amplitudes(&p, AmplitudeState::ground(), 100.0)
        .unwrap()
        .last()
        .unwrap()
        .excited_population();
    assert!((r.efficiencies[0].unwrap() - oracle).abs() < 1e-6);
}

#[test]
fn peak_rabi_sweep_examples() {
    let opts = SweepOptions::default();
    let r = sweep_peak_rabi(&base(), &[0.0, 512e3], &opts).unwrap();
    assert_eq!(r.efficiencies[0], Some(0.0));
    assert!(r.efficiencies[1].unwrap() > 0.999);

    let peaks = [32e3, 64e3, 128e3, 256e3, 512e3];
    let r = sweep_peak_rabi(&base(), &peaks, &opts).unwrap();
    let effs: Vec<f64> = r.efficiencies.iter().map(|e| e.unwrap()).collect();
    assert!(effs.windows(2).all(|w| w[1] >= w[0]), "{effs:?}");
}

#[test]
fn adiabaticity_at_the_two_trajectory_settings() {
    let at_400 = adiabaticity_profile(&base(), 2001).unwrap().peak();
    let at_1400 = adiabaticity_profile(&base().with_chirp_span(1400e3), 2001)
        .unwrap()
        .peak();
    assert!(at_400 < 1.0);
    // With Omega/2pi = 512 kHz the wing term |dOmega_R/dt| / delta^2 dominates
    // and a faster sweep lowers it.
    assert!(at_1400 < at_400, "{at_1400} vs {at_400}");
    assert!((at_400 - 0.0994).abs() < 1e-3);
    assert!((at_1400 - 0.0316).abs() < 1e-3);
}

#[test]
fn rabi_scan_round_trip() {
    let rabi = 512e3;
    let durations: Vec<f64> = (0..41).map(|i| 8e-6 * i as f64 / 40.0).collect();
    let scan = simulate_rabi_scan(rabi, &durations, 100.0).unwrap();
    for &(t, p) in &scan {
        let exact = (std::f64::consts::PI * rabi * t).sin().powi(2);
        assert!((p - exact).abs() < 1e-6);
    }
    let fit = fit_rabi(&scan, 500e3, &FitOptions::default()).unwrap();
    assert!(((fit.fitted_rabi - rabi) / rabi).abs() < 1e-6, "{fit:?}");
}

#[test]
fn projection_noise_fit_over_many_seeds() {
    let rabi = 512e3;
    let durations: Vec<f64> = (0..41).map(|i| 8e-6 * i as f64 / 40.0).collect();
    let scan = simulate_rabi_scan(rabi, &durations, 100.0).unwrap();
    for seed in 0..20u64 {
        let noisy = add_noise(&scan, Noise::Projection { shots: 100 }, seed).unwrap();
        let fit = fit_rabi(&noisy, 500e3, &FitOptions::default()).unwrap();
        assert!(
            ((fit.fitted_rabi - rabi) / rabi).abs() < 5e-3,
            "seed {seed}: {fit:?}"
        );
        assert!(fit.residual_rms > 0.0);
    }
}
