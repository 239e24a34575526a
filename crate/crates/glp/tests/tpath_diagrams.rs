mod common;

use glp::algebra::{LaurentPoly, RationalFn};
use glp::graphcore::{bit, set_of, RootedTree};
use glp::lpcalc::{y_general, y_singleton};
use glp::tpaths::{
    enumerate, exhaustive_search, hypergraph_of, paste, singleton_path, singleton_paths, sum_weights, RuleId,
    SingletonChoice, TPathError,
};
use glp::verify::{eight_vertex_tree, forked_tree, path_tree, seven_vertex_tree};

use common::diagrams::*;

#[test]
fn four_example_diagrams_are_valid() {
    let h = forked();
    for (k, p) in [first_diagram(&h), second_diagram(&h), third_diagram(&h), fourth_diagram(&h)].iter().enumerate() {
        let v = p.validate();
        assert!(v.is_valid(), "diagram {}: {:?}", k + 1, v);
    }
}

#[test]
fn first_diagram_weight() {
    let w = first_diagram(&forked()).weight().unwrap();
    assert_eq!(w.value.to_string(), "Y{1}^-1*Y{4}^-1");
}

#[test]
fn enumeration_contains_the_example_diagrams() {
    let h = forked();
    let listed: Vec<_> = enumerate(&forked_tree(), set_of(&[2, 3])).unwrap().iter().map(|p| p.canonical_form()).collect();
    assert_eq!(listed.len(), 8);
    for p in [first_diagram(&h), second_diagram(&h), third_diagram(&h), fourth_diagram(&h)] {
        assert!(listed.contains(&p.canonical_form()));
    }
}

#[test]
fn pasting_reproduces_first_diagram() {
    let h = forked();
    let ta = singleton_path(&h, 2, SingletonChoice::Child(1)).unwrap();
    let tb = singleton_path(&h, 3, SingletonChoice::Child(4)).unwrap();
    let pasted = paste(&ta, &tb, (2, 3)).unwrap();
    assert_eq!(pasted.canonical_form(), first_diagram(&h).canonical_form());
    assert!(pasted.validate().is_valid());
}

#[test]
fn plus_with_child_two_is_not_pasteable() {
    let h = forked();
    let ta = singleton_path(&h, 2, SingletonChoice::Plus).unwrap();
    let tb = singleton_path(&h, 3, SingletonChoice::Child(2)).unwrap();
    assert_eq!(paste(&ta, &tb, (2, 3)).unwrap_err(), TPathError::NotPasteable(2, 3));
}

#[test]
fn two_path_pieces_paste_to_a_valid_path() {
    let h = hypergraph_of(&path_tree(2, 1)).unwrap();
    let t2 = singleton_path(&h, 2, SingletonChoice::Plus).unwrap();
    let t1 = singleton_path(&h, 1, SingletonChoice::Plus).unwrap();
    let p = paste(&t2, &t1, (2, 1)).unwrap();
    assert!(p.validate().is_valid(), "{:?}", p.validate());
    assert_eq!(p.weight().unwrap().value.to_string(), "Y{1,2}");
}

#[test]
fn rule7_near_miss_rejected() {
    let v = rule7_near_miss(&forked()).validate();
    assert!(!v.is_valid());
    assert_eq!(v.rules(), vec![RuleId::Rule(7)]);
}

#[test]
fn rule8_examples_rejected() {
    let clean = rule8_clean().validate();
    assert_eq!(clean.rules(), vec![RuleId::Rule(8)]);
    let literal = rule8_literal().validate();
    assert!(literal.violates(8));
}

#[test]
fn eight_vertex_singletons() {
    let t = eight_vertex_tree();
    let six = singleton_paths(&t, 6).unwrap();
    assert_eq!(six.len(), 1);
    assert_eq!(six[0].weight().unwrap().value.to_string(), "Y{6}");
    let four = singleton_paths(&t, 4).unwrap();
    assert_eq!(four.len(), 3);
    let two = enumerate(&t, bit(2)).unwrap();
    assert!(sum_weights(&two).equals(&RationalFn::from_poly(y_singleton(&t, 2).laurent())));
}

#[test]
fn seven_vertex_pair_has_five_paths() {
    let t = seven_vertex_tree();
    let s = set_of(&[1, 3]);
    let paths = enumerate(&t, s).unwrap();
    let terms = y_general(&t, s).unwrap().terms;
    assert_eq!(paths.len(), 5);
    for (p, term) in paths.iter().zip(&terms) {
        assert!(p.validate().is_valid());
        assert_eq!(&LaurentPoly::monomial(p.weight().unwrap().value), term);
    }
}

#[test]
fn exhaustive_agrees_on_forked_pair() {
    let t: RootedTree = forked_tree();
    let s = set_of(&[2, 3]);
    let mut listed: Vec<_> = enumerate(&t, s).unwrap().iter().map(|p| p.canonical_form()).collect();
    listed.sort();
    let found: Vec<_> = exhaustive_search(&t, s, 16).unwrap().iter().map(|p| p.canonical_form()).collect();
    assert_eq!(listed, found);
}
