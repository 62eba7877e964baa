use qplane_core::verify::{calibration_sweep, Thresholds, CALIBRATION_SEED, THRESHOLD_MARGIN};

#[test]
fn sweep_reproduces_frozen_thresholds() {
    let cal = calibration_sweep(CALIBRATION_SEED, 1000).unwrap();
    assert_eq!(cal.thresholds, Thresholds::FROZEN);
    assert_eq!(cal.seed, CALIBRATION_SEED);
    assert_eq!(cal.sets_per_q[&3], 511);
    assert_eq!(cal.sets_per_q[&5], 2625);
    for q in [7, 11, 13] {
        assert_eq!(cal.sets_per_q[&q], 1000);
    }
    assert_eq!(cal.maxima.c_dir, 11.0 / 9.0);
    assert_eq!(cal.maxima.c_scale, 0.5);
    assert!((cal.thresholds.c_n0 - THRESHOLD_MARGIN * 25.0 / 26.0).abs() < 1e-12);
}
