use timebin_qkd::channel::{
    expected_bin_intensities, simulate_counts, single_photon_reference_counts, BasisSplit, ChannelParams,
    SimulationMode, SourceConfig, SourceMode,
};
use timebin_qkd::counts::{IntensityCounts, ObservedCounts, Symbol};
use timebin_qkd::decoy::IntensitySettings;

fn decoy_source(rounds: u64) -> SourceConfig {
    let s = IntensitySettings::new(0.6, 0.15, 0.7).unwrap();
    SourceConfig::new(SourceMode::WcpDecoy(s), 0.7, rounds).unwrap()
}

/// Every event class of every intensity, flattened.
fn classes(c: &ObservedCounts) -> Vec<(String, f64)> {
    let mut out = Vec::new();
    for (i, ic) in c.per_intensity.iter().enumerate() {
        let IntensityCounts {
            sent,
            z_detections,
            z_errors,
            late,
            early,
        } = ic;
        out.push((format!("{i}/sent"), *sent));
        out.push((format!("{i}/z"), *z_detections));
        out.push((format!("{i}/z_err"), *z_errors));
        for (s, v) in late.iter().enumerate() {
            out.push((format!("{i}/late{s}"), *v));
        }
        for (p, row) in early.iter().enumerate() {
            for (q, v) in row.iter().enumerate() {
                out.push((format!("{i}/early{p}{q}"), *v));
            }
        }
    }
    out
}

#[test]
fn monte_carlo_matches_expectation_within_five_sigma() {
    let ch = ChannelParams::new(6.0, 1e-4, 0.02, 0.8).unwrap();
    for source in [
        decoy_source(10_000_000).with_seed(3),
        SourceConfig::new(SourceMode::SinglePhoton, 0.6, 10_000_000)
            .unwrap()
            .with_seed(4),
    ] {
        let exp = simulate_counts(&ch, &source, SimulationMode::Expected).counts;
        let mc = simulate_counts(&ch, &source, SimulationMode::MonteCarlo).counts;
        for ((name, e), (_, m)) in classes(&exp).into_iter().zip(classes(&mc)) {
            // binomial sigma with success probability e / N
            let p = e / source.rounds as f64;
            let sigma = (e * (1.0 - p)).sqrt().max(1.0);
            assert!((m - e).abs() <= 5.0 * sigma, "{name}: expected {e}, sampled {m}");
        }
    }
}

#[test]
fn truth_ledger_conserves_counts() {
    let ch = ChannelParams::new(3.0, 1e-3, 0.01, 1.0).unwrap();
    let sim = simulate_counts(&ch, &decoy_source(200_000).with_seed(8), SimulationMode::MonteCarlo);
    let t = sim.truth.unwrap();
    let c = &sim.counts;
    let sum = |x: [u64; 3]| x.iter().sum::<u64>() as f64;
    assert_eq!(sum(t.z_detections), c.z_detections());
    assert_eq!(sum(t.z_errors), c.z_errors());
    for s in 0..3 {
        assert_eq!(sum(t.late[s]), c.total(|i| i.late[s]));
        for q in 0..3 {
            assert_eq!(sum(t.early[s][q]), c.total(|i| i.early[s][q]));
        }
    }
}

#[test]
fn seeds_are_deterministic() {
    let ch = ChannelParams::new(5.0, 1e-5, 0.01, 1.0).unwrap();
    let a = simulate_counts(&ch, &decoy_source(50_000).with_seed(1), SimulationMode::MonteCarlo);
    let b = simulate_counts(&ch, &decoy_source(50_000).with_seed(1), SimulationMode::MonteCarlo);
    let c = simulate_counts(&ch, &decoy_source(50_000).with_seed(2), SimulationMode::MonteCarlo);
    assert_eq!(a, b);
    assert_ne!(a.counts, c.counts);
}

#[test]
fn noiseless_fixed_points() {
    let ch = ChannelParams::new(0.0, 0.0, 0.0, 1.0).unwrap();
    let sp = SourceConfig::new(SourceMode::SinglePhoton, 0.5, 1000).unwrap();
    let c = simulate_counts(&ch, &sp, SimulationMode::Expected).counts;
    assert_eq!(c.qber_z(), 0.0);
    assert_eq!(c.total(|i| i.late[Symbol::Plus as usize]), 0.0);

    let lost = ChannelParams::new(3000.0, 0.0, 0.01, 1.0).unwrap();
    let c = simulate_counts(&lost, &decoy_source(1000), SimulationMode::Expected).counts;
    assert!(classes(&c)
        .iter()
        .filter(|(n, _)| !n.ends_with("sent"))
        .all(|(_, v)| *v == 0.0));

    // lossless link: each sifted round clicks with probability det_eff
    let ch = ChannelParams::new(0.0, 0.0, 0.0, 0.8).unwrap();
    let r = single_photon_reference_counts(&ch, &sp.with_basis_split(BasisSplit::Balanced)).unwrap();
    assert!((r.bb84.z_detections - 1000.0 * 0.5 * 0.5 * 0.8).abs() < 1e-9);
    assert!((r.bb84.x_detections - 1000.0 * 0.5 * 0.5 * 0.8).abs() < 1e-9);
}

#[test]
fn dark_regime_randomizes_both_protocols() {
    let ch = ChannelParams::new(400.0, 1e-6, 0.01, 1.0).unwrap();
    let sp = SourceConfig::new(SourceMode::SinglePhoton, 0.5, 1_000_000).unwrap();
    let r = single_photon_reference_counts(&ch, &sp).unwrap();
    assert!((r.three_state.qber_z() - 0.5).abs() < 1e-6);
    assert!((r.bb84.qber_z() - 0.5).abs() < 1e-6);
    assert!((r.bb84.qber_x() - 0.5).abs() < 1e-6);
}

/// The monitoring line spreads a pulse over three windows at a quarter of
/// the light each, so at any loss a larger share of its clicks are dark
/// counts than on a two-detector BB84 X line with the same split.
#[test]
fn three_windows_collect_more_dark_counts() {
    let (p_zb, e_mis, p_dc) = (0.5, 0.01, 1e-7);
    for att in [10.0, 30.0, 50.0] {
        let eta = ChannelParams::new(att, p_dc, e_mis, 1.0).unwrap().transmittance();
        let b = expected_bin_intensities(Symbol::Plus, 1.0, eta, p_zb, e_mis);
        let three = 3.0 * p_dc / (b.t0 + b.t1 + b.t2 + 3.0 * p_dc);
        let bb84 = 2.0 * p_dc / (eta * (1.0 - p_zb) + 2.0 * p_dc);
        assert!(three > bb84, "{att} dB: {three} vs {bb84}");
    }
}
