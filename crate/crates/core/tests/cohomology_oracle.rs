//! Second cohomology against an unreduced cocycle system (every normalized
//! entry a variable, every triple an equation) and against exhaustive
//! enumeration for the smallest cases.

mod common;
mod oracles;

use std::collections::BTreeSet;

use common::{fixture, ABELIAN, NONABELIAN};
use zg_core::cohomology::{
    bogomolov, h2_mod_n, is_cocycle, restriction_check, schur_multiplier, two_generated_abelian_subgroups,
};
use zg_core::group::commuting_pair_classes;

#[test]
fn reduced_system_matches_full_system() {
    for name in ["z2", "z3", "z4", "klein4", "s3", "q8", "d4", "z2xz4", "z3xz3"] {
        let g = fixture(name);
        for n in [2u64, 3, g.order() as u64] {
            assert_eq!(h2_mod_n(&g, n).unwrap().invariant_factors(), oracles::dense_h2(&g, n).as_slice(), "{name} mod {n}");
        }
    }
}

#[test]
fn h2_orders_by_enumeration() {
    for (name, n) in [("z2", 2u64), ("z3", 3), ("z2", 4), ("klein4", 2), ("z4", 2), ("z4", 4)] {
        let g = fixture(name);
        assert_eq!(h2_mod_n(&g, n).unwrap().order(), oracles::brute_h2_order(&g, n), "{name} mod {n}");
    }
}

#[test]
fn representatives_are_cocycles_with_standard_coordinates() {
    for name in ["klein4", "s3", "q8", "d4", "heis3"] {
        let g = fixture(name);
        let h = h2_mod_n(&g, g.order() as u64).unwrap();
        for (i, r) in h.representatives.iter().enumerate() {
            assert!(is_cocycle(&g, r));
            let coords = h.class_of(&g, r).unwrap();
            let expect: Vec<u64> = (0..coords.len()).map(|j| u64::from(i == j)).collect();
            assert_eq!(coords, expect, "{name} generator {i}");
        }
    }
}

#[test]
fn schur_multipliers_of_small_groups() {
    let known: [(&str, &[u64]); 13] = [
        ("z2", &[]),
        ("z3", &[]),
        ("z4", &[]),
        ("z6", &[]),
        ("q8", &[]),
        ("s3", &[]),
        ("klein4", &[2]),
        ("z2xz4", &[2]),
        ("z3xz3", &[3]),
        ("d4", &[2]),
        ("s4", &[2]),
        ("heis3", &[3, 3]),
        ("g64", &[2, 4]),
    ];
    for (name, m) in known {
        let g = fixture(name);
        let n = g.order() as u64;
        assert_eq!(schur_multiplier(&g, n).unwrap().invariant_factors(), m, "{name}");
        if g.order() <= 9 {
            assert_eq!(oracles::dense_schur(&g, n), m, "{name}");
        }
    }
}

#[test]
fn bogomolov_trivial_on_small_fixtures() {
    for name in ABELIAN.iter().chain(&["s3", "s4", "d4", "q8", "heis3"]) {
        let g = fixture(name);
        assert!(bogomolov(&g, g.order() as u64).unwrap().invariant_factors().is_empty(), "{name}");
    }
}

fn all_coords(factors: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for &d in factors {
        out = out.into_iter().flat_map(|v| (0..d).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

/// Schur classes vanishing on every abelian subgroup are exactly the span of
/// the Bogomolov representatives.
#[test]
fn restriction_path_agrees_with_symmetric_representatives() {
    for name in ABELIAN.iter().chain(&NONABELIAN) {
        let g = fixture(name);
        let n = g.order() as u64;
        let schur = schur_multiplier(&g, n).unwrap();
        let bog = bogomolov(&g, n).unwrap();
        let pairs = commuting_pair_classes(&g);
        let subgroups = two_generated_abelian_subgroups(&g, &pairs);
        let bog_coords: Vec<Vec<u64>> = bog.representatives.iter().map(|r| schur.class_of(&g, r).unwrap()).collect();
        let mut from_bog = BTreeSet::new();
        for c in all_coords(bog.invariant_factors()) {
            let v: Vec<u64> = (0..schur.invariant_factors().len())
                .map(|j| {
                    let d = schur.invariant_factors()[j];
                    c.iter().zip(&bog_coords).map(|(k, b)| k * b[j]).sum::<u64>() % d
                })
                .collect();
            from_bog.insert(v);
        }
        let mut by_restriction = BTreeSet::new();
        for c in all_coords(schur.invariant_factors()) {
            if restriction_check(&g, &schur.cocycle(&c), &subgroups).unwrap() {
                by_restriction.insert(c);
            }
        }
        assert_eq!(by_restriction, from_bog, "{name}");
        assert_eq!(by_restriction.len() as u128, bog.order(), "{name}");
    }
}
