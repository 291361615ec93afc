mod common;

use common::fixture;
use zg_core::constructions::presentation::G64_PRESENTATION;
use zg_core::constructions::*;
use zg_core::group::{conjugacy, is_class_preserving, is_inner};
use zg_core::{Error, GroupTable};

fn class_sizes(g: &GroupTable) -> Vec<usize> {
    let c = conjugacy(g);
    let mut v: Vec<usize> = (0..c.num_classes()).map(|i| c.class_size(i)).collect();
    v.sort_unstable();
    v
}

#[test]
fn coset_enumeration_matches_permutation_closure() {
    for (text, name) in [
        ("a, b | a^2, b^3, (a b)^2", "s3"),
        ("a, b | a^2, b^4, (a b)^3", "s4"),
        ("r, s | r^4, s^2, (r s)^2", "d4"),
        ("a, b | a^2, b^2, [a, b]", "klein4"),
    ] {
        let g = todd_coxeter(&parse_presentation(text).unwrap()).unwrap();
        let h = fixture(name);
        assert_eq!(g.order(), h.order(), "{text}");
        assert_eq!(class_sizes(&g), class_sizes(&h), "{text}");
    }
}

#[test]
fn order_64_group_under_both_conventions() {
    for conv in [Convention::LeftInverse, Convention::RightInverse] {
        let g = todd_coxeter(&parse_presentation_with(G64_PRESENTATION, conv).unwrap()).unwrap();
        assert_eq!(g.order(), 64);
        assert_eq!(g.nilpotency_class(), Some(3));
    }
}

#[test]
fn coset_budget_is_enforced() {
    let p = parse_presentation(G64_PRESENTATION).unwrap();
    assert!(matches!(todd_coxeter_with_budget(&p, 16), Err(Error::Budget { .. })));
}

#[test]
fn sz_small_cases() {
    // |G(E)| = |E| q^(2n), dim E over the prime field
    for (q, n, e, dim_e) in [(2u64, 1usize, ESubgroup::Full, 1usize), (2, 2, ESubgroup::Traceless, 3), (3, 1, ESubgroup::Full, 1), (2, 2, ESubgroup::Full, 4), (4, 1, ESubgroup::Full, 2)] {
        let sz = sz_group(&SzGroupSpec { q, n, e }).unwrap();
        assert_eq!(sz.e_basis().len(), dim_e);
        let p = sz.field().characteristic();
        assert_eq!(sz.table().order() as u64, p.pow(dim_e as u32) * q.pow(2 * n as u32), "q={q} n={n}");
    }
    let sz = sz_group(&SzGroupSpec { q: 2, n: 2, e: ESubgroup::Traceless }).unwrap();
    let phi = conj_by_ambient(&sz, &sz.ambient_from_matrix(vec![1, 0, 0, 0])).unwrap();
    assert!(is_inner(sz.table(), &phi).is_none());
    assert!(is_class_preserving(sz.table(), &conjugacy(sz.table()), &phi));
    assert!(phi.compose(&phi).is_identity());
}

#[test]
fn bilinear_commutators() {
    let spec = BilinearExtSpec { p: 3, r: 2, s: 1, beta: vec![vec![vec![0], vec![1]], vec![vec![0], vec![0]]] };
    let g = bilinear_ext(&spec).unwrap();
    let (x, y, w) = (g.generators()[0], g.generators()[1], g.generators()[2]);
    // [x, y] = (0, beta(x, y) - beta(y, x)) = w
    assert_eq!(g.commutator(x, y), w);
    assert_eq!(g.commutator(y, x), g.inv(w));
}

#[test]
fn jm_families() {
    let (g, rep) = jm_group(3, JmPattern::Second).unwrap();
    assert_eq!(g.order(), 2187);
    assert!(rep.relations_hold && rep.order_matches_statement);
    assert_eq!((rep.nilpotency_class, rep.exponent), (Some(2), 3));
    let (_, first) = jm_group(3, JmPattern::First).unwrap();
    assert!(first.relations_hold);
    assert_eq!(first.computed_order, 6561);
    assert!(!first.order_matches_statement);
}
