use std::f64::consts::PI;

use mhk_wasm::{collision_curve_impl, kernel_curve_impl, smoother_map_impl};

#[test]
fn kernel_curve_matches_closed_form() {
    let c = kernel_curve_impl(-2.0, 0.9, PI / 4.0, 4, 40_000, 1).unwrap();
    assert_eq!(c.angles().len(), 4);
    assert_eq!(*c.angles().last().unwrap(), PI);
    for i in 0..4 {
        let closed = c.closed()[i];
        assert!((closed - c.angles()[i].powi(-2)).abs() < 1e-12);
        assert!((c.series()[i] - closed).abs() <= 1e-8 * closed.max(1.0));
        assert!((c.mc_mean()[i] - closed).abs() <= 5.0 * c.mc_stderr()[i]);
    }
}

#[test]
fn kernel_curve_skips_infinite_variance() {
    let c = kernel_curve_impl(-2.0, 0.5, 0.1, 3, 1000, 1).unwrap();
    assert!(c.mc_mean()[0].is_nan());
    assert!(c.mc_mean()[2].is_finite());
    assert!(kernel_curve_impl(1.0, 0.9, 0.1, 3, 1000, 1).is_err());
    assert!(kernel_curve_impl(-1.0, 0.9, 0.0, 3, 1000, 1).is_err());
}

#[test]
fn collision_curve_endpoints() {
    let c = collision_curve_impl(2, 5, 5000, 3).unwrap();
    assert_eq!((c.empirical()[0], c.theoretical()[0]), (1.0, 1.0));
    assert_eq!(c.theoretical()[4], 0.0);
    assert!((c.theoretical()[2] - 0.25).abs() < 1e-15);
    assert!((c.empirical()[2] - 0.25).abs() < 5.0 * (0.25f64 * 0.75 / 5000.0).sqrt());
}

#[test]
fn smoother_map_shape_and_range() {
    let m = smoother_map_impl(50, -2.0, "threshold", 24, 12, 4).unwrap();
    assert_eq!(m.values().len(), 24 * 12);
    assert_eq!(m.train_lon().len(), 50);
    assert!(m.values().iter().all(|v| (-1.0..=1.0).contains(v)));
    // Northern rows lean positive under the threshold model.
    let north: f64 = m.values()[..24].iter().sum();
    let south: f64 = m.values()[24 * 11..].iter().sum();
    assert!(north > 0.0 && south < 0.0);
    assert!(smoother_map_impl(10, -2.0, "bogus", 4, 4, 0).is_err());
}

#[test]
fn deterministic() {
    assert_eq!(
        smoother_map_impl(20, -1.5, "noise", 8, 4, 9).unwrap(),
        smoother_map_impl(20, -1.5, "noise", 8, 4, 9).unwrap()
    );
    assert_eq!(
        kernel_curve_impl(-2.0, 0.9, 0.5, 3, 2000, 2).unwrap(),
        kernel_curve_impl(-2.0, 0.9, 0.5, 3, 2000, 2).unwrap()
    );
}
