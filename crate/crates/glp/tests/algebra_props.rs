use std::collections::BTreeMap;

use glp::algebra::{det_fraction_free, Int, LaurentPoly, Monomial, RationalFn, Var};
use proptest::prelude::*;

const VARS: [Var; 3] = [Var::A(1), Var::X(1), Var::X(2)];
const Y1: Var = Var::Y(0b10);
const Y12: Var = Var::Y(0b110);

fn poly_in(vars: [Var; 3], lo: i32) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(((lo..=2, lo..=2, lo..=2), -3i64..=3), 0..4).prop_map(move |terms| {
        LaurentPoly::from_terms(terms.into_iter().map(|((p, q, r), c)| {
            (Monomial::from_factors([(vars[0], p), (vars[1], q), (vars[2], r)]), Int::from(c))
        }))
    })
}

fn poly() -> impl Strategy<Value = LaurentPoly> {
    poly_in(VARS, -1)
}

fn nonzero_poly() -> impl Strategy<Value = LaurentPoly> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn rational() -> impl Strategy<Value = RationalFn> {
    (poly(), nonzero_poly()).prop_map(|(n, d)| RationalFn::new(n, d).unwrap())
}

fn monomial() -> impl Strategy<Value = (Monomial, Int)> {
    ((-2i32..=2, -2i32..=2, -2i32..=2), prop_oneof![-5i64..=-1, 1i64..=5]).prop_map(|((p, q, r), c)| {
        (Monomial::from_factors([(VARS[0], p), (VARS[1], q), (VARS[2], r)]), Int::from(c))
    })
}

fn matrix(max: usize) -> impl Strategy<Value = Vec<Vec<RationalFn>>> {
    (0..=max).prop_flat_map(|k| prop::collection::vec(prop::collection::vec(poly().prop_map(RationalFn::from), k), k))
}

/// Cofactor expansion along the first row.
fn cofactor_det(m: &[Vec<RationalFn>]) -> RationalFn {
    if m.is_empty() {
        return RationalFn::one();
    }
    let mut total = RationalFn::zero();
    for col in 0..m.len() {
        let minor: Vec<Vec<RationalFn>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != col).map(|(_, e)| e.clone()).collect())
            .collect();
        let term = m[0][col].mul(&cofactor_det(&minor));
        total = if col % 2 == 0 { total.add(&term) } else { total.sub(&term) };
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bareiss_matches_cofactor_expansion(m in matrix(4)) {
        prop_assert!(det_fraction_free(&m).equals(&cofactor_det(&m)));
    }

    #[test]
    fn multiply_then_divide_roundtrips(f in rational(), g in rational()) {
        prop_assume!(!g.is_zero());
        prop_assert_eq!(f.mul(&g).div(&g).unwrap(), f);
    }

    #[test]
    fn laurent_values_roundtrip_to_the_same_string(f in poly(), g in rational()) {
        prop_assume!(!g.is_zero());
        let f = RationalFn::from(f);
        let back = f.mul(&g).div(&g).unwrap();
        prop_assert_eq!(back.canonical_string(), f.canonical_string());
    }

    #[test]
    fn canonical_string_ignores_presentation(f in rational(), (m, c) in monomial()) {
        let scaled = RationalFn::new(f.num().mul_term(&m, &c), f.den().mul_term(&m, &c)).unwrap();
        prop_assert_eq!(scaled.canonical_string(), f.canonical_string());
    }

    #[test]
    fn polynomial_strings_are_unique(f in poly(), g in poly()) {
        let shuffled = LaurentPoly::from_terms(f.terms().iter().rev().cloned());
        prop_assert_eq!(shuffled.canonical_string(), f.canonical_string());
        prop_assert_eq!(f == g, f.canonical_string() == g.canonical_string());
        prop_assert_eq!(f.add(&g).canonical_string(), g.add(&f).canonical_string());
    }

    #[test]
    fn substitution_is_a_homomorphism(
        f in poly_in([VARS[1], Y1, Y12], -1),
        g in poly_in([VARS[1], Y1, Y12], -1),
        b1 in poly_in(VARS, 0),
        b2 in poly_in(VARS, 0),
        d in nonzero_poly(),
    ) {
        prop_assume!(!b1.is_zero() && !b2.is_zero());
        let bind: BTreeMap<Var, RationalFn> =
            [(Y1, RationalFn::new(b1, d.clone()).unwrap()), (Y12, RationalFn::from(b2))].into_iter().collect();
        let (f, g) = (RationalFn::from(f), RationalFn::from(g));
        let sub = |r: &RationalFn| r.substitute(&bind).unwrap();
        prop_assert_eq!(sub(&f.mul(&g)), sub(&f).mul(&sub(&g)));
        prop_assert_eq!(sub(&f.add(&g)), sub(&f).add(&sub(&g)));
    }
}
