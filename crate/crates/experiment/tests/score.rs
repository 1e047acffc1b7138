use idionet_core::{SelectionMode, Strategy};
use idionet_experiment::score::{grade, Grade};
use idionet_experiment::{compute_phi, score, RunMetrics, RunRecord};
use proptest::prelude::*;

fn record(t: f64, n_s: u64) -> RunRecord {
    RunRecord {
        system: SelectionMode::S1,
        strategy: Strategy::Strong,
        k1: 0.625,
        b: 80.0,
        k2: 0.05,
        world: "synthetic".into(),
        paratope: "P1".into(),
        seed: 0,
        t,
        n_s,
        s: 0.0,
        completed: true,
        doors_passed: 5,
        metrics: RunMetrics::default(),
    }
}

proptest! {
    /// With phi fitted to a record set, its mean score equals its mean time.
    #[test]
    fn fitted_phi_makes_mean_score_mean_time(
        runs in prop::collection::vec((1.0..1200.0f64, 0u64..400), 1..60),
    ) {
        prop_assume!(runs.iter().any(|r| r.1 > 0));
        let phi = compute_phi(&runs).unwrap();
        let mut records: Vec<RunRecord> = runs.iter().map(|&(t, n)| record(t, n)).collect();
        for r in &mut records {
            r.rescore(phi);
        }
        let n = records.len() as f64;
        let mean_s = records.iter().map(|r| r.s).sum::<f64>() / n;
        let mean_t = records.iter().map(|r| r.t).sum::<f64>() / n;
        prop_assert!((mean_s - mean_t).abs() < 1e-9 * mean_t.max(1.0));
    }
}

#[test]
fn score_arithmetic() {
    assert_eq!(score(300.0, 10, 9.08), (90.8 + 300.0) / 2.0);
    assert_eq!(score(120.0, 0, 9.08), 60.0);
    assert!(compute_phi(&[(10.0, 0)]).is_none());
    assert!(compute_phi(&[]).is_none());
    assert_eq!(compute_phi(&[(100.0, 4), (200.0, 6)]), Some(30.0));
    assert_eq!(grade(199.9), Grade::Good);
    assert_eq!(grade(200.0), Grade::Middling);
    assert_eq!(grade(400.1), Grade::Bad);
}
