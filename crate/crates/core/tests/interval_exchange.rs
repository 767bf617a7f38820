use proptest::prelude::*;
use symdyn_core::empirical::{decay_report, m_upper_at_horizon, FileOracle, IetOracle, LanguageOracle};
use symdyn_core::iet::{word_text, IetSystem, QuadraticFieldElement};
use symdyn_core::shiftspace::SelfSimilarShiftMetric;

fn point() -> impl Strategy<Value = QuadraticFieldElement> {
    (0i64..997, 1i64..17, -8i64..8).prop_filter_map("outside [0, 1)", |(num, den, q)| {
        let text = format!("{num}/997{}{}/{den}*sqrt6", if q < 0 { '-' } else { '+' }, q.abs());
        let x: QuadraticFieldElement = text.parse().ok()?;
        let one = QuadraticFieldElement::one();
        (x.signum().is_ge() && (&x - &one).signum().is_lt()).then_some(x)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn coding_intertwines_map_and_shift(x in point()) {
        let t = IetSystem::default_instance();
        let tx = t.apply(&x).unwrap();
        prop_assert_eq!(t.itinerary(&tx, -20, 40).unwrap().symbols, t.itinerary(&x, -19, 41).unwrap().symbols);
        prop_assert_eq!(t.inverse(&tx).unwrap(), x);
    }
}

#[test]
fn file_route_matches_exact_route() {
    let t = IetSystem::default_instance();
    let k = 12;
    let text: String = t
        .language(2 * k + 1)
        .unwrap()
        .iter()
        .map(|w| format!("{}\n", word_text(w)))
        .collect();
    let file = FileOracle::parse(&text).unwrap();
    let exact = IetOracle::new(t);
    assert_eq!(file.words(2 * k + 1).unwrap().len(), exact.words(2 * k + 1).unwrap().len());
    for n in 1..=6 {
        assert_eq!(
            m_upper_at_horizon(&file, n, k).unwrap(),
            m_upper_at_horizon(&exact, n, k).unwrap(),
            "N = {n}"
        );
    }
}

#[test]
fn default_instance_brackets() {
    let o = IetOracle::new(IetSystem::default_instance());
    let metric = SelfSimilarShiftMetric::default();
    let report = decay_report(&o, &metric, 4, 60, false).unwrap();
    let upper: Vec<usize> = report.rows.iter().map(|r| r.m_upper).collect();
    assert_eq!(upper, vec![0, 0, 1, 1]);
    for r in &report.rows {
        assert_eq!(r.m_lower, 0);
        assert!(r.gamma_lower <= r.gamma_upper);
        assert_eq!(r.product_upper_log_lambda.twice, r.n as i64);
    }
}

#[test]
fn upper_bounds_shrink_along_horizons_spaced_by_n() {
    let o = IetOracle::new(IetSystem::default_instance());
    for n in 1..=4 {
        let values: Vec<usize> = (1..=8).map(|j| m_upper_at_horizon(&o, n, n * j + 2).unwrap()).collect();
        assert!(values.windows(2).all(|w| w[1] <= w[0]), "N = {n}: {values:?}");
    }
}
