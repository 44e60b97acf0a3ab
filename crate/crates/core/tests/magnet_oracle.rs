//! Closed-form prism field against a brute-force sum of point dipoles.

use siqc_core::magnet::PrismMagnet;
use siqc_core::DeviceConfig;

/// Bz from `counts` equal cells, each a point dipole at its centre.
fn dipole_sum(magnet: &PrismMagnet, point: [f64; 3], counts: [usize; 3]) -> f64 {
    let d = magnet.dimensions;
    let cell = [d[0] / counts[0] as f64, d[1] / counts[1] as f64, d[2] / counts[2] as f64];
    let volume = cell[0] * cell[1] * cell[2];
    let mut sum = 0.0;
    for i in 0..counts[0] {
        let x = point[0] - (magnet.center[0] - d[0] / 2.0 + (i as f64 + 0.5) * cell[0]);
        for j in 0..counts[1] {
            let y = point[1] - (magnet.center[1] - d[1] / 2.0 + (j as f64 + 0.5) * cell[1]);
            for k in 0..counts[2] {
                let z = point[2] - (magnet.center[2] - d[2] / 2.0 + (k as f64 + 0.5) * cell[2]);
                let r2 = x * x + y * y + z * z;
                sum += (3.0 * z * z - r2) / (r2 * r2 * r2.sqrt());
            }
        }
    }
    magnet.polarization / (4.0 * std::f64::consts::PI) * volume * sum
}

#[test]
fn bridge_field_matches_million_dipoles() {
    let magnet = PrismMagnet::from_config(&DeviceConfig::default()).unwrap();
    let counts = [1000, 50, 20];
    assert!(counts.iter().product::<usize>() >= 1_000_000);
    let analytic = magnet.field_at([0.0, 0.0, 0.0]).unwrap();
    let brute = dipole_sum(&magnet, [0.0, 0.0, 0.0], counts);
    let rel = (analytic - brute).abs() / brute.abs();
    assert!(rel < 1e-3, "analytic {analytic} vs dipoles {brute} (rel {rel:e})");
}

#[test]
fn off_axis_points_match_dipoles() {
    let magnet = PrismMagnet::new([20e-6, 10e-6, 4e-6], 1.5, [0.0, 0.0, 0.0]).unwrap();
    for p in [[3e-6, 1e-6, 6e-6], [12e-6, -4e-6, 3e-6], [0.0, 9e-6, -5e-6]] {
        let analytic = magnet.field_at(p).unwrap();
        let brute = dipole_sum(&magnet, p, [200, 100, 40]);
        assert!((analytic - brute).abs() < 1e-3 * analytic.abs().max(1e-3), "{p:?}: {analytic} vs {brute}");
    }
}
