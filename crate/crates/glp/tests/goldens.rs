use glp::algebra::{LaurentPoly, Monomial, RationalFn, Var};
use glp::graphcore::{bit, set_of};
use glp::lpcalc::{
    exchange_verify, p_poly, x_rooted, y_det, y_general, y_singleton, XMode,
};
use glp::verify::{
    cycle_with_pendant, exchange_records_for, eight_vertex_tree, five_vertex_tree, grid_graph, seven_vertex_tree, Limits,
};

fn a(v: u32) -> Monomial {
    Monomial::var(Var::A(v))
}

fn x(v: u32) -> Monomial {
    Monomial::var(Var::X(v))
}

fn y(vs: &[u32]) -> Monomial {
    Monomial::var(Var::Y(set_of(vs)))
}

fn prod(ms: &[Monomial]) -> Monomial {
    ms.iter().fold(Monomial::one(), |acc, m| acc.mul(m))
}

fn sum(ms: &[Monomial]) -> LaurentPoly {
    ms.iter().fold(LaurentPoly::zero(), |acc, m| acc.add(&LaurentPoly::monomial(m.clone())))
}

fn ratio(num: &[Monomial], den: Monomial) -> RationalFn {
    RationalFn::new(sum(num), LaurentPoly::monomial(den)).unwrap()
}

#[test]
fn y35_on_five_vertex_tree() {
    let t = five_vertex_tree();
    let expected = ratio(
        &[
            prod(&[a(3), a(5)]),
            prod(&[a(5), x(2)]),
            prod(&[a(5), x(4)]),
            prod(&[a(5), x(5)]),
            prod(&[a(3), x(3)]),
            prod(&[x(2), x(3)]),
            prod(&[x(3), x(4)]),
        ],
        prod(&[x(3), x(5)]),
    );
    let got = y_det(t.graph(), set_of(&[3, 5]));
    assert_eq!(got.canonical_string(), expected.canonical_string());
}

#[test]
fn grid_path_polynomial() {
    let g = grid_graph();
    let p = p_poly(&g, set_of(&[1, 2, 3, 4]), 6, 3);
    assert_eq!(p.symbolic, sum(&[y(&[1, 2]), Monomial::one()]));
    assert_eq!(p.symbolic.canonical_string(), "Y{1,2} + 1");
    let expected = y_det(&g, set_of(&[1, 2])).add(&RationalFn::one());
    assert!(p.value.equals(&expected));
}

#[test]
fn eight_vertex_singleton_expansion() {
    let t = eight_vertex_tree();
    let i2 = [2, 3, 4, 5, 6, 7, 8];
    let expected = ratio(
        &[
            y(&i2),
            prod(&[y(&[4, 6, 7]), y(&[5, 8])]),
            prod(&[y(&[3]), y(&[6]), y(&[7]), y(&[5, 8])]),
            prod(&[y(&[3]), y(&[4, 6, 7]), y(&[8])]),
        ],
        prod(&[y(&[3]), y(&[4, 6, 7]), y(&[5, 8])]),
    );
    let r = y_singleton(&t, 2);
    assert_eq!(r.term_count, 4);
    assert_eq!(r.expression.canonical_string(), expected.canonical_string());
}

#[test]
fn seven_vertex_general_expansion() {
    let t = seven_vertex_tree();
    let all = [1, 2, 3, 4, 5, 6, 7];
    let expected = ratio(
        &[
            prod(&[y(&[3, 6, 7]), y(&[4]), y(&[5]), y(&[7])]),
            prod(&[y(&[2, 4, 5]), y(&[6, 7]), y(&[7])]),
            prod(&[y(&all), y(&[7])]),
            prod(&[y(&[3, 6, 7]), y(&[3, 6, 7]), y(&[4]), y(&[5])]),
            prod(&[y(&all), y(&[3, 6, 7])]),
        ],
        prod(&[y(&[2, 4, 5]), y(&[3, 6, 7]), y(&[6, 7])]),
    );
    let r = y_general(&t, set_of(&[1, 3])).unwrap();
    assert_eq!(r.term_count, 5);
    assert!(r.positive);
    assert_eq!(r.expression.canonical_string(), expected.canonical_string());
}

#[test]
fn x_expansions_are_positive() {
    let t = eight_vertex_tree();
    for i in 1..=8 {
        let r = x_rooted(&t, i, XMode::Closed);
        assert!(r.positive, "X{i}");
        assert!(r.terms.iter().all(|p| p.is_positive()));
    }
}

#[test]
fn exchange_on_non_trees() {
    let limits = Limits::default();
    for g in [grid_graph(), cycle_with_pendant()] {
        let records = exchange_records_for(&g, 0, &limits);
        assert!(!records.is_empty());
        let bad: Vec<_> = records.iter().filter(|r| !r.pass).collect();
        assert!(bad.is_empty(), "{:?}", bad.first().map(|r| &r.detail));
    }
}

#[test]
fn exchange_around_the_grid_example() {
    let g = grid_graph();
    let s = set_of(&[1, 2, 3, 4]);
    assert!(exchange_verify(&g, s, 6, None).unwrap());
    assert!(exchange_verify(&g, s, 5, Some(6)).unwrap());
    assert!(exchange_verify(&g, s, 6, Some(6)).is_err());
    assert!(exchange_verify(&g, bit(6), 6, None).is_err());
}
