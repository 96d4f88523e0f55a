//! The gender ratio equals the birth odds: numerically, exactly, and across
//! the two computations.

use famplan_core::series::{expected_boys, expected_girls, gender_ratio};
use famplan_core::symbolic::{expected_boys_exact, expected_girls_exact, verify_grid};
use famplan_core::{BirthProbability, Rule};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;

#[test]
fn exact_identity_holds_on_full_grid() {
    let certs = verify_grid(8, 8).unwrap();
    assert_eq!(certs.len(), 80);
    for c in &certs {
        assert!(c.holds, "({},{})", c.boys_required, c.girls_required);
    }
}

#[test]
fn exact_matches_series() {
    for n in 0..=6u32 {
        for k in 0..=6u32 {
            if n + k == 0 {
                continue;
            }
            let boys = expected_boys_exact(n, k).unwrap();
            let girls = expected_girls_exact(n, k).unwrap();
            for i in 1..=9 {
                let exact_p = BigRational::new(i.into(), 10.into());
                let p = BirthProbability::new(f64::from(i) / 10.0).unwrap();
                let rule = Rule::new(n, k);
                let b_exact = boys.evaluate_exact(&exact_p).unwrap().to_f64().unwrap();
                let b_series = expected_boys(rule, p, 1e-12).unwrap().value;
                assert!((b_exact - b_series).abs() <= 1e-9, "B({n},{k},{p})");
                let g_exact = girls.evaluate_exact(&exact_p).unwrap().to_f64().unwrap();
                let g_series = expected_girls(rule, p, 1e-12).unwrap().value;
                assert!((g_exact - g_series).abs() <= 1e-9, "G({n},{k},{p})");
            }
        }
    }
}

#[test]
fn exact_value_at_one_third() {
    let b = expected_boys_exact(3, 2).unwrap();
    let v = b.evaluate_exact(&BigRational::new(1.into(), 3.into())).unwrap();
    let s = expected_boys(Rule::new(3, 2), BirthProbability::new(1.0 / 3.0).unwrap(), 1e-13).unwrap();
    assert!((v.to_f64().unwrap() - s.value).abs() <= s.tail_bound + 1e-12);
    let bh = expected_boys_exact(1, 1).unwrap();
    assert_eq!(
        bh.evaluate_exact(&BigRational::new(1.into(), 2.into())).unwrap(),
        BigRational::new(3.into(), 2.into())
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ratio_is_birth_odds(n in 0u32..10, k in 0u32..10, p in 0.02f64..0.98) {
        prop_assume!(n + k > 0);
        let p = BirthProbability::new(p).unwrap();
        let r = gender_ratio(Rule::new(n, k), p, 1e-12).unwrap();
        prop_assert!((r / p.odds() - 1.0).abs() <= 1e-8);
    }
}
