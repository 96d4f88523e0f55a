use famplan_core::symbolic::{Polynomial, RationalFunction};
use num_rational::BigRational;
use proptest::prelude::*;

fn poly_strategy() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(-9i64..=9, 0..=7).prop_map(|c| Polynomial::from_integers(&c))
}

fn nonzero_poly() -> impl Strategy<Value = Polynomial> {
    poly_strategy().prop_filter("nonzero", |p| !p.is_zero())
}

fn rf_strategy() -> impl Strategy<Value = RationalFunction> {
    (poly_strategy(), nonzero_poly()).prop_map(|(n, d)| RationalFunction::new(n, d))
}

proptest! {
    #[test]
    fn canonicalization_is_idempotent_and_coprime(f in rf_strategy()) {
        prop_assert_eq!(f.canonicalize(), f.clone());
        let g = f.numerator().gcd(f.denominator());
        prop_assert!(f.is_zero() || g == Polynomial::one());
        let lc = f.denominator().leading().unwrap().clone();
        prop_assert_eq!(lc, BigRational::from_integer(1.into()));
    }

    #[test]
    fn derivative_is_linear(f in poly_strategy(), g in poly_strategy(), c in -9i64..=9) {
        let c = BigRational::from_integer(c.into());
        let lhs = (&f.scale(&c) + &g).derivative();
        let rhs = &f.derivative().scale(&c) + &g.derivative();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn product_rule(f in poly_strategy(), g in poly_strategy()) {
        let lhs = (&f * &g).derivative();
        let rhs = &(&f.derivative() * &g) + &(&f * &g.derivative());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rational_product_rule(f in rf_strategy(), g in rf_strategy()) {
        let lhs = (&f * &g).derivative();
        let rhs = &(&f.derivative() * &g) + &(&f * &g.derivative());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn mirror_is_an_involution(f in rf_strategy()) {
        prop_assert_eq!(f.mirror().mirror(), f);
    }

    #[test]
    fn division_reconstructs(f in poly_strategy(), g in nonzero_poly()) {
        let (q, r) = f.div_rem(&g);
        prop_assert_eq!(&(&q * &g) + &r, f);
        prop_assert!(r.degree() < g.degree() || r.is_zero());
    }
}
