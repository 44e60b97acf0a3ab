use proptest::prelude::*;
use siqc_core::budget::{ChainLattice, GateBudget, GateErrorTable};
use siqc_core::feasibility::{log_spaced_counts, scalability_report, FeasibilityOptions, Measurability};
use siqc_core::DeviceConfig;

fn reference_threshold() -> Measurability {
    let opts = FeasibilityOptions { force_noise_override: Some(1.2e-17), ..Default::default() };
    Measurability::new(&DeviceConfig::default(), &opts).unwrap()
}

#[test]
fn minimum_polarization_rises_with_n() {
    let m = reference_threshold();
    let p: Vec<f64> = (1..=300).map(|n| m.min_polarization(n).unwrap()).collect();
    assert!((p[0] - p[1]).abs() < 1e-8);
    assert!(p[1..].windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn inverse_round_trip() {
    let m = reference_threshold();
    for n in 1..=100 {
        let p = m.min_polarization(n).unwrap();
        assert!(m.max_qubits(p).unwrap().n >= n);
    }
}

#[test]
fn high_polarization_scaling() {
    let m = reference_threshold();
    let ratios: Vec<f64> = [0.8, 0.9, 0.95, 0.99]
        .iter()
        .map(|&p| m.max_qubits(p).unwrap().n as f64 * (1.0 - p) / (1.0 + p))
        .collect();
    let (lo, hi) = ratios.iter().fold((f64::MAX, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
    assert!(hi / lo < 1.1, "{ratios:?}");
    // Dominant-term asymptote: ln(F(p = 1)/threshold)·(1+p)/(1−p).
    let p = 0.95;
    let asym = (m.plane_force / m.threshold).ln() * (1.0 + p) / (1.0 - p);
    let n = m.max_qubits(p).unwrap().n as f64;
    assert!((n / asym - 1.0).abs() < 0.15, "{n} vs {asym}");
}

#[test]
fn report_is_sorted_and_monotone() {
    let config = DeviceConfig::default();
    let m = reference_threshold();
    let lat = ChainLattice::from_config(&config).unwrap();
    let mut budget = GateBudget::new(2.0 * std::f64::consts::PI * 2251.7, 2367.0, GateErrorTable::new(lat)).unwrap();
    let counts = log_spaced_counts(1, 10_000, 50).unwrap();
    let report = scalability_report(&m, &mut budget, &counts, &[25.0, 100.0, 1e4]).unwrap();
    assert!(report.windows(2).all(|w| w[0].n < w[1].n));
    for k in 0..3 {
        assert!(report.windows(2).all(|w| w[1].gates_times_l[k] <= w[0].gates_times_l[k] * (1.0 + 1e-12)));
    }
    let last = report.last().unwrap();
    assert!(last.l_star.windows(2).all(|w| w[0] <= w[1]));
}

proptest! {
    #[test]
    fn p_one_always_measurable(n in 1usize..100_000) {
        prop_assert!(reference_threshold().is_measurable(1.0, n));
    }

    #[test]
    fn bisection_brackets_threshold(n in 1usize..2000) {
        let m = reference_threshold();
        let p = m.min_polarization(n).unwrap();
        prop_assert!(m.is_measurable(p, n));
        prop_assert!(!m.is_measurable((p - 2e-9).max(0.0), n));
    }
}
