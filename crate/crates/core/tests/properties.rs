use idionet_core::network::strength_of_match;
use idionet_core::{
    apply_reinforcement, init_paratope, ConcentrationVector, Matrix, ParatopeMatrix, Priority,
    Stimulus,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn paratope(n: usize, l: usize) -> impl Strategy<Value = ParatopeMatrix<f64>> {
    prop::collection::vec(prop::collection::vec(0.0..=1.0f64, l), n)
        .prop_map(|rows| ParatopeMatrix::from_rows(&rows).unwrap())
}

fn stimulus(l: usize) -> impl Strategy<Value = Stimulus> {
    prop::collection::btree_set(0..l, 1..=l).prop_flat_map(move |set| {
        let presenting: Vec<usize> = set.into_iter().collect();
        let k = presenting.len();
        (Just(presenting), 0..k).prop_map(move |(p, d)| {
            Stimulus::with_dominant(l, &p, p[d]).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn fresh_rows_average_target(seed in any::<u64>(), n in 1usize..20, l in 1usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p: ParatopeMatrix<f64> = init_paratope(n, l, &mut rng);
        for i in 0..n {
            let mean = p.row(i).iter().sum::<f64>() / l as f64;
            prop_assert!((mean - 0.625).abs() < 1e-9);
            prop_assert!(p.row(i).iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }

    #[test]
    fn reinforcement_touches_one_cell(
        p in paratope(6, 5),
        w in 0usize..6,
        d in 0usize..5,
        rf in -2.0..2.0f64,
    ) {
        let mut q = p.clone();
        apply_reinforcement(&mut q, w, d, rf).unwrap();
        for i in 0..6 {
            for j in 0..5 {
                if (i, j) == (w, d) {
                    prop_assert_eq!(q.get(i, j), (p.get(i, j) + rf).clamp(0.0, 1.0));
                } else {
                    prop_assert_eq!(q.get(i, j), p.get(i, j));
                }
            }
        }
    }

    #[test]
    fn entries_stay_in_unit_range(
        p in paratope(4, 3),
        updates in prop::collection::vec((0usize..4, 0usize..3, -1.0..1.0f64), 0..50),
    ) {
        let mut q = p;
        for (w, d, rf) in updates {
            apply_reinforcement(&mut q, w, d, rf).unwrap();
        }
        prop_assert!(q.as_matrix().iter().all(|v| (0.0..=1.0).contains(&v)));
    }

    /// The weak array only adds weight: every antibody matches at least as
    /// strongly, and exactly as strongly when its dominant entry is positive.
    #[test]
    fn weak_match_contains_strong((p, s) in (1usize..6).prop_flat_map(|l| (paratope(5, l), stimulus(l)))) {
        let strong = strength_of_match(&p, &s, false);
        let weak = strength_of_match(&p, &s, true);
        for i in 0..5 {
            prop_assert!(weak[i] >= strong[i]);
            if p.get(i, s.dominant()) > 0.0 {
                prop_assert_eq!(weak[i], strong[i]);
            }
        }
    }

    #[test]
    fn dominant_follows_priority(presenting in prop::collection::btree_set(0usize..8, 1..=8)) {
        let presenting: Vec<usize> = presenting.into_iter().collect();
        let priority = Priority::standard();
        let s = Stimulus::new(&presenting, &priority).unwrap();
        let rank = |a: usize| priority.order().iter().position(|&x| x == a).unwrap();
        prop_assert!(presenting.iter().all(|&a| rank(s.dominant()) <= rank(a)));
        let g = s.antigen_array::<f64>(true, false);
        for a in 0..8 {
            let want = if a == s.dominant() { 2.0 } else if presenting.contains(&a) { 0.25 } else { 0.0 };
            prop_assert_eq!(g.weights()[a], want);
        }
    }

    #[test]
    fn concentrations_normalize_to_count(
        c in prop::collection::vec(0.0..5.0f64, 1..16),
        tg in prop::collection::vec(-1.0..3.0f64, 16),
        b in 0.0..200.0f64,
        k2 in 0.0..1.0f64,
    ) {
        let n = c.len();
        let next = ConcentrationVector::from_values(c).update(&tg[..n], b, k2).normalized();
        prop_assert!(next.values().iter().all(|&v| v >= 0.0));
        prop_assert!((next.sum() - n as f64).abs() < 1e-9);
    }

    #[test]
    fn rollback_restores_penalized_share(
        prev in prop::collection::vec(0.1..5.0f64, 2..10),
        scale in prop::collection::vec(0.1..3.0f64, 10),
        k in 0usize..10,
    ) {
        let n = prev.len();
        let k = k % n;
        let previous = ConcentrationVector::from_values(prev.clone());
        let now = ConcentrationVector::from_values(
            prev.iter().zip(&scale).map(|(a, s)| a * s).collect(),
        );
        let r = now.rollback(&previous, k);
        prop_assert!((r.sum() - n as f64).abs() < 1e-9);
        // the others keep their ratios to each other
        let others: Vec<usize> = (0..n).filter(|&i| i != k).collect();
        for w in others.windows(2) {
            let (i, j) = (w[0], w[1]);
            prop_assert!((r.get(i) / r.get(j) - now.get(i) / now.get(j)).abs() < 1e-9);
        }
        // and the penalized value relates to them as it did before the tick
        let i = others[0];
        prop_assert!((r.get(k) / r.get(i) - previous.get(k) / now.get(i)).abs() < 1e-9);
    }

    #[test]
    fn matrix_text_round_trips(rows in prop::collection::vec(prop::collection::vec(0.0..=1.0f64, 3), 1..5)) {
        let m = Matrix::from_rows(&rows).unwrap();
        let back: Matrix<f64> = Matrix::parse_text(&m.to_text(Some("note"))).unwrap();
        for (a, b) in m.iter().zip(back.iter()) {
            prop_assert!((a - b).abs() <= 5e-7);
        }
    }
}
