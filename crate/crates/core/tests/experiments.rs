use lsq_stability::experiments::{
    cohen_sufficiency_experiment, convergence_csv, convergence_experiment, spectral_success_rate, stability_csv,
    stability_map, witness_oracle_csv, witness_vs_oracle, ExperimentConfig, SampleCounts, Sampling,
    CONVERGENCE_HEADER, STABILITY_HEADER, WITNESS_ORACLE_HEADER,
};
use lsq_stability::{JacobiParams, OrthonormalBasis};

fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

/// Splits a CSV document and checks it against the column list a downstream
/// reader expects: exact header, uniform width, parseable fields.
fn parse_csv(text: &str, header: &str) -> Vec<Vec<String>> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(header));
    let width = header.split(',').count();
    lines
        .map(|l| {
            let row: Vec<String> = l.split(',').map(str::to_owned).collect();
            assert_eq!(row.len(), width, "{l}");
            row
        })
        .collect()
}

#[test]
fn output_is_independent_of_thread_count() {
    let cfg = ExperimentConfig::new(JacobiParams::new(0.5, -0.25).unwrap(), (1..=6).collect(), SampleCounts::List(vec![4, 9, 20]))
        .trials(7)
        .seed(42);
    let one = with_threads(1, || stability_csv(&stability_map(&cfg).unwrap()));
    let three = with_threads(3, || stability_csv(&stability_map(&cfg).unwrap()));
    assert_eq!(one, three);

    let w1 = with_threads(1, || witness_oracle_csv(&witness_vs_oracle(&cfg, 1e-3, 128).unwrap()));
    let w3 = with_threads(3, || witness_oracle_csv(&witness_vs_oracle(&cfg, 1e-3, 128).unwrap()));
    assert_eq!(w1, w3);
}

#[test]
fn stability_schema_for_heatmaps() {
    let cfg = ExperimentConfig::new(JacobiParams::uniform(), vec![0, 2, 5], SampleCounts::List(vec![3, 6, 30])).trials(4);
    let rows = parse_csv(&stability_csv(&stability_map(&cfg).unwrap()), STABILITY_HEADER);
    assert_eq!(rows.len(), 3 + 3 + 2);
    for r in &rows {
        let m: usize = r[2].parse().unwrap();
        let n: usize = r[3].parse().unwrap();
        assert!(m < n);
        let mean_kappa: f64 = r[5].parse().unwrap();
        let log_mean: f64 = r[6].parse().unwrap();
        let clamped: f64 = r[7].parse().unwrap();
        assert!(mean_kappa >= 1.0 - 1e-12);
        // Jensen: mean of logs never exceeds log of the mean.
        assert!(log_mean <= mean_kappa.log10() + 1e-12);
        assert!((0.0..=1.0).contains(&clamped));
        if m == 0 {
            assert_eq!(mean_kappa, 1.0);
        }
    }
    assert_eq!(stability_csv(&[]), format!("{STABILITY_HEADER}\n"));
}

#[test]
fn convergence_schema_and_polynomial_targets() {
    let cfg = ExperimentConfig::new(JacobiParams::uniform(), (3..=8).collect(), SampleCounts::List(vec![])).trials(5);
    // 4x³ - 3x is the degree-3 Chebyshev polynomial.
    let rows = convergence_experiment(&cfg, |x| 4.0 * x * x * x - 3.0 * x, 0.5, 2.0).unwrap();
    for r in &rows {
        assert!(r.median_sup_error < 1e-8, "m={}: {}", r.m, r.median_sup_error);
        assert_eq!(r.n, ((r.m * r.m) as f64 * 2.0).round() as usize);
    }
    let parsed = parse_csv(&convergence_csv(&rows), CONVERGENCE_HEADER);
    assert_eq!(parsed.len(), rows.len());
    assert_eq!(parsed[0][2], "0.5");
}

#[test]
fn nonsmooth_target_converges_algebraically() {
    let cfg = ExperimentConfig::new(JacobiParams::uniform(), vec![6, 12, 24, 48], SampleCounts::List(vec![])).trials(5);
    // Even degrees only: odd terms cannot help an even target.
    let rows = convergence_experiment(&cfg, f64::abs, 0.5, 1.0).unwrap();
    let err: Vec<f64> = rows.iter().map(|r| r.median_sup_error).collect();
    assert!(err.windows(2).all(|w| w[1] < w[0]), "{err:?}");
    // Each doubling of m gains roughly a constant factor (≈ 2 for |x|),
    // far from the squaring an exponential rate would give.
    for w in err.windows(2) {
        let gain = w[0] / w[1];
        assert!((1.3..4.0).contains(&gain), "{err:?}");
    }
}

#[test]
fn sufficiency_probability_meets_target() {
    for (m, r) in [(1usize, 1.0), (3, 1.0), (2, 0.5)] {
        let rec = cohen_sufficiency_experiment(&JacobiParams::uniform(), m, r, 200, 5).unwrap();
        let se = (rec.target_prob * (1.0 - rec.target_prob) / 200.0).sqrt();
        assert!(rec.empirical_prob >= rec.target_prob - 3.0 * se, "m={m}: {rec:?}");
    }
}

#[test]
fn more_samples_do_not_lower_success_rate() {
    let basis = OrthonormalBasis::new(JacobiParams::uniform(), 3);
    let rates: Vec<f64> = [20usize, 40, 80, 160]
        .iter()
        .map(|&n| {
            let mut per_seed: Vec<f64> = (0..20).map(|s| spectral_success_rate(&basis, n, 25, s).unwrap()).collect();
            per_seed.sort_by(f64::total_cmp);
            0.5 * (per_seed[9] + per_seed[10])
        })
        .collect();
    assert!(rates.windows(2).all(|w| w[1] >= w[0]), "{rates:?}");
}

#[test]
fn stable_regression_anchor() {
    let cfg = ExperimentConfig::new(JacobiParams::uniform(), vec![10], SampleCounts::List(vec![500])).trials(100);
    let row = &stability_map(&cfg).unwrap()[0];
    assert!(row.mean_log10_kappa < 0.5, "{row:?}");
    assert_eq!(row.clamped_fraction, 0.0);
}

#[test]
fn equispaced_oracle_column_matches_interpolation_case() {
    let cfg = ExperimentConfig::new(JacobiParams::uniform(), vec![2], SampleCounts::List(vec![3]))
        .trials(1)
        .sampling(Sampling::Equispaced);
    let rows = witness_vs_oracle(&cfg, 1.0, 64).unwrap();
    assert!((rows[0].b_exact.unwrap() - 1.25).abs() < 1e-6);
    let parsed = parse_csv(&witness_oracle_csv(&rows), WITNESS_ORACLE_HEADER);
    assert_eq!(parsed[0][3], "II");
    assert_eq!(parsed[0][5], "1");
}
