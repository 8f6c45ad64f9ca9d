use std::f64::consts::SQRT_2;

use pillowfold::{assemble_box, enclosed_volume, quarter_parametrization, FundamentalData, Tolerances};

fn zeta(s: f64) -> f64 {
    SQRT_2 - ((s - 1.0).powi(2) + 1.0).sqrt()
}

fn sigma(s: f64) -> f64 {
    let zp2 = (s - 1.0).powi(2) / ((s - 1.0).powi(2) + 1.0);
    (1.0 - 2.0 * zp2).max(0.0).sqrt()
}

/// `∫₀ᴸ 4 ζ (b − ζ) σ ds`. `σ` has a square-root zero at both ends, so each
/// half is integrated in `u` with `s = u²` (or `L − u²`) by Simpson's rule.
fn analytic_volume() -> f64 {
    let f = |s: f64| 4.0 * zeta(s) * (1.0 - zeta(s)) * sigma(s);
    let n = 4000;
    let h = 1.0 / n as f64;
    let g = |u: f64| 2.0 * u * (f(u * u) + f(2.0 - u * u));
    let inner: f64 = (1..n).map(|i| g(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 }).sum();
    (g(0.0) + g(1.0) + inner) * h / 3.0
}

fn mesh_volume(n_s: usize, n_v: usize) -> f64 {
    let q = quarter_parametrization(&FundamentalData::example()).unwrap();
    enclosed_volume(&assemble_box(&q, n_s, n_v, &Tolerances::default()).unwrap()).unwrap()
}

#[test]
fn oracle_volume() {
    assert!((analytic_volume() - 1.159_747_150_948_481).abs() < 1e-10, "{}", analytic_volume());
}

#[test]
fn volume_converges_at_second_order() {
    let exact = analytic_volume();
    let e1 = (exact - mesh_volume(32, 16)).abs();
    let e2 = (exact - mesh_volume(64, 32)).abs();
    let e3 = (exact - mesh_volume(128, 64)).abs();
    for ratio in [e1 / e2, e2 / e3] {
        assert!((3.5..4.5).contains(&ratio), "error ratio {ratio}");
    }
    assert!(e3 / exact < 1e-4, "relative error {}", e3 / exact);
}

#[test]
#[ignore = "unattainable: piecewise-linear volume error is O(h^2) and the 64x32 to 128x64 change is 2.4e-4"]
fn volume_is_grid_stable() {
    let coarse = mesh_volume(64, 32);
    let fine = mesh_volume(128, 64);
    let rel = (fine - coarse).abs() / fine.abs();
    assert!(rel < 1e-4, "relative change {rel:.3e}");
}
