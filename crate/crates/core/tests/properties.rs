use std::sync::Arc;

use proptest::prelude::*;
use symdyn_core::empirical::{m_upper_at_horizon, m_upper_naive, SftOracle};
use symdyn_core::gamma;
use symdyn_core::sft::{parse_sft, Direction, EdgeSft, PairKind};
use symdyn_core::shiftspace::{Alphabet, DistanceValue, FiniteConfiguration, SelfSimilarShiftMetric, Symbol};

fn graph() -> impl Strategy<Value = EdgeSft> {
    (1usize..=3)
        .prop_flat_map(|n| (Just(n), prop::collection::vec((0..n, 0..n), 1..=6)))
        .prop_map(|(n, edges)| {
            EdgeSft::edge_shift(
                (0..n).map(|v| format!("v{v}")).collect(),
                edges.into_iter().enumerate().map(|(i, (a, b))| (format!("e{i}"), a, b)).collect(),
            )
            .unwrap()
        })
}

fn infinite_graph() -> impl Strategy<Value = EdgeSft> {
    graph().prop_filter("needs infinitely many points", |s| s.is_infinite())
}

fn config(cells: &[u32], half: i64) -> FiniteConfiguration {
    let alphabet = Arc::new(Alphabet::numeric(3).unwrap());
    FiniteConfiguration::new(alphabet, -half, cells.iter().map(|&c| Symbol(c)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn essential_form_is_a_fixed_point(s in graph()) {
        prop_assume!(!s.is_empty());
        let again = parse_sft(&s.to_json().to_string()).unwrap();
        prop_assert_eq!(again.to_json(), s.to_json());
        for e in s.edges() {
            prop_assert!(!s.out_edges(e.to).is_empty());
            prop_assert!(!s.in_edges(e.from).is_empty());
        }
    }

    #[test]
    fn feasibility_is_monotone_and_bisection_agrees(s in infinite_graph(), n in 1usize..=9) {
        let m = gamma::m_of(&s, n).unwrap();
        prop_assert!(m <= n / 2);
        prop_assert_eq!(gamma::m_of_bisect(&s, n).unwrap(), m);
        for r in 0..=n / 2 {
            let found = gamma::constrained_pair_exists(&s, n, r).unwrap();
            prop_assert_eq!(found.is_some(), r <= m, "r = {}", r);
        }
    }

    #[test]
    fn witnesses_certify_the_separation(s in infinite_graph(), n in 1usize..=9) {
        let (m, pair) = gamma::m_with_witness(&s, n).unwrap();
        pair.x.validate(&s).unwrap();
        pair.y.validate(&s).unwrap();
        prop_assert_eq!(pair.disagreements(&s).min_distance_to_multiples(n), Some(m as u64));
        let metric = SelfSimilarShiftMetric::new(3.0).unwrap();
        prop_assert_eq!(gamma::replay_separation(&s, &metric, n, &pair).unwrap(), Some(m as u64));
    }

    #[test]
    fn homoclinic_width_bounds_m(s in infinite_graph()) {
        let w = s.find_homoclinic_pair().expect("infinite edge shifts have homoclinic pairs");
        prop_assert_eq!(w.kind, PairKind::Homoclinic);
        w.validate(&s).unwrap();
        let width = w.width() as usize;
        for n in width..=width + 8 {
            prop_assert!(gamma::m_of(&s, n).unwrap() >= (n + 1 - width) / 2);
        }
    }

    #[test]
    fn asymptotic_pairs_in_both_directions(s in infinite_graph()) {
        for dir in [Direction::Forward, Direction::Backward] {
            let w = s.find_asymptotic_pair(dir).unwrap();
            w.validate(&s).unwrap();
        }
    }

    #[test]
    fn window_brackets_contain_the_exact_value(s in infinite_graph(), n in 1usize..=4, extra in 0usize..3) {
        let o = SftOracle::new(s.clone()).unwrap();
        let k = n + extra;
        let upper = m_upper_at_horizon(&o, n, k).unwrap();
        prop_assert!(gamma::m_of(&s, n).unwrap() <= upper);
        if s.edge_count() <= 3 {
            prop_assert_eq!(m_upper_naive(&o, n, k).unwrap(), upper);
        }
    }

    #[test]
    fn distance_is_an_ultrametric(
        x in prop::collection::vec(0u32..3, 21),
        y in prop::collection::vec(0u32..3, 21),
        z in prop::collection::vec(0u32..3, 21),
    ) {
        let metric = SelfSimilarShiftMetric::new(2.5).unwrap();
        let (x, y, z) = (config(&x, 10), config(&y, 10), config(&z, 10));
        let d = |a: &FiniteConfiguration, b: &FiniteConfiguration| metric.distance(a, b).unwrap();
        prop_assert_eq!(d(&x, &y), d(&y, &x));
        let exact = [d(&x, &y), d(&y, &z), d(&x, &z)].iter().all(|v| v.is_exact());
        if exact {
            prop_assert!(d(&x, &z).exponent() >= d(&x, &y).exponent().min(d(&y, &z).exponent()));
        }
        prop_assert!(matches!(d(&x, &x), DistanceValue::BoundedAbove(_)));
    }
}
