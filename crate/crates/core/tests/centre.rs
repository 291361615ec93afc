//! Double characters of the Drinfeld centre and the action of pairs
//! `(phi, gamma)` on them.

mod common;

use common::fixture;
use zg_core::centre::{Centre, DoubleCharacter};
use zg_core::characters::character_table;
use zg_core::cohomology::{coboundary, schur_multiplier, Cochain2};
use zg_core::cyclotomic::Cyclotomic;
use zg_core::group::{commuting_pair_classes, conjugacy, ConjData};
use zg_core::{GroupMap, GroupTable};

fn map_by_labels(g: &GroupTable, images: &[&str]) -> GroupMap {
    let imgs: Vec<usize> = images.iter().map(|l| g.index_of_label(l).unwrap()).collect();
    GroupMap::complete_hom(g, g, &imgs).unwrap()
}

fn d4_outer(g: &GroupTable) -> GroupMap {
    map_by_labels(g, &["[1,2,3,0]", "[1,0,3,2]"])
}

#[test]
fn s3_simples_and_orthonormality() {
    let g = fixture("s3");
    let z = Centre::new(&g).unwrap();
    let conj = z.pairs().conj();
    let per_class: Vec<usize> = (0..conj.num_classes()).map(|c| z.simples().iter().filter(|s| s.class == c).count()).collect();
    assert_eq!(per_class, vec![3, 2, 3]);
    assert_eq!(z.simples().iter().map(|s| s.qdim * s.qdim).sum::<u64>(), 36);
    for s in 0..z.num_simples() {
        for t in 0..z.num_simples() {
            assert_eq!(z.double_inner_product(z.character(s), z.character(t)), Cyclotomic::integer(i64::from(s == t)));
        }
        assert_eq!(z.dimension(z.character(s)), Cyclotomic::integer(z.simples()[s].qdim as i64));
    }
}

#[test]
fn s3_values_from_definition() {
    let g = fixture("s3");
    let z = Centre::new(&g).unwrap();
    let conj = z.pairs().conj().clone();
    // trivial class, trivial character
    for h in 0..g.order() {
        assert_eq!(z.eval(z.character(0), 0, h).unwrap(), Cyclotomic::one());
    }
    // transposition class, sign of the centralizer Z/2
    let t = conj.class_reps[1];
    assert_eq!(g.element_order(t), 2);
    let sign = (0..z.num_simples()).find(|&s| z.simples()[s].class == 1 && z.eval(z.character(s), t, t).unwrap() != Cyclotomic::one()).unwrap();
    assert_eq!(z.eval(z.character(sign), t, t).unwrap(), Cyclotomic::integer(-1));
    // every witness gives the same value
    for s in 0..z.num_simples() {
        for f in 0..g.order() {
            for h in g.centralizer(f) {
                let want = z.eval(z.character(s), f, h).unwrap();
                for w in 0..g.order() {
                    if conj.class_of(f) == z.simples()[s].class && g.conj(w, f) == conj.class_reps[z.simples()[s].class] {
                        assert_eq!(z.eval_with_witness(s, f, h, w).unwrap(), want);
                    }
                }
                if conj.class_of(f) != z.simples()[s].class {
                    assert!(want.is_zero());
                }
            }
        }
    }
}

fn check_tensor_products(z: &Centre) {
    for a in 0..z.num_simples() {
        for b in 0..z.num_simples() {
            let t = z.tensor_character(z.character(a), z.character(b));
            let mult = z.decompose(&t).unwrap();
            let dim: u64 = mult.iter().zip(z.simples()).map(|(m, s)| m * s.qdim).sum();
            assert_eq!(dim, z.simples()[a].qdim * z.simples()[b].qdim);
            assert_eq!(z.dimension(&t), Cyclotomic::integer(dim as i64));
        }
    }
}

#[test]
fn s3_tensor_products_decompose() {
    let z = Centre::new(&fixture("s3")).unwrap();
    check_tensor_products(&z);
    let unit = z.character(z.unit());
    for s in 0..z.num_simples() {
        assert_eq!(&z.tensor_character(unit, z.character(s)), z.character(s));
    }
}

#[test]
fn pointed_cyclic_cases() {
    for name in ["z2", "z3"] {
        let g = fixture(name);
        let z = Centre::new(&g).unwrap();
        assert_eq!(z.num_simples(), g.order() * g.order());
        assert!(z.simples().iter().all(|s| s.qdim == 1));
        for a in 0..z.num_simples() {
            for b in 0..z.num_simples() {
                let m = z.decompose(&z.tensor_character(z.character(a), z.character(b))).unwrap();
                assert_eq!(m.iter().sum::<u64>(), 1, "{name}: {a} x {b}");
            }
        }
    }
}

#[test]
fn small_fixtures_satisfy_dimension_identity() {
    for name in ["z2", "klein4", "s3", "q8", "d4", "s4", "heis3", "g64"] {
        let g = fixture(name);
        let z = Centre::new(&g).unwrap();
        assert_eq!(z.num_simples(), commuting_pair_classes(&g).num_orbits());
        let n = g.order() as u64;
        assert_eq!(z.simples().iter().map(|s| s.qdim * s.qdim).sum::<u64>(), n * n, "{name}");
    }
}

#[test]
fn trivial_pairs_are_soft() {
    for name in ["s3", "d4", "q8"] {
        let g = fixture(name);
        let z = Centre::new(&g).unwrap();
        let n = g.order() as u64;
        let zero = Cochain2::zero(g.order(), n);
        for h in 0..g.order() {
            let inner = GroupMap::inner(&g, h);
            assert!(z.is_soft(&inner, &zero).unwrap());
        }
        // coboundaries are symmetric on commuting pairs
        let c: Vec<u64> = (0..g.order() as u64).map(|x| (x * x + 3 * x) % n).collect();
        let b = coboundary(&g, &c, n).unwrap();
        assert!(z.is_soft(&GroupMap::identity(&g), &b).unwrap());
        assert!(z.modular_invariant(&GroupMap::identity(&g), &b).unwrap().is_identity());
    }
}

#[test]
fn outer_automorphism_of_d4_moves_simples() {
    let g = fixture("d4");
    let z = Centre::new(&g).unwrap();
    let phi = d4_outer(&g);
    let zero = Cochain2::zero(g.order(), 8);
    assert!(!z.is_soft(&phi, &zero).unwrap());
    let m = z.modular_invariant(&phi, &zero).unwrap();
    assert!(m.is_permutation());
    assert!(!m.is_identity());
}

fn same(a: &DoubleCharacter, b: &DoubleCharacter) -> bool {
    a == b
}

#[test]
fn action_respects_tensor_products_and_composition() {
    let g = fixture("d4");
    let z = Centre::new(&g).unwrap();
    let n = 8;
    let schur = schur_multiplier(&g, n).unwrap();
    let gamma = schur.representatives[0].clone();
    let gamma2 = gamma.scale(3).add(&coboundary(&g, &(0..8).collect::<Vec<u64>>(), n).unwrap());
    let phi = d4_outer(&g);
    let psi = GroupMap::inner(&g, 3);
    for a in 0..z.num_simples() {
        for b in 0..z.num_simples() {
            let t = z.tensor_character(z.character(a), z.character(b));
            let lhs = z.act(&phi, &gamma, &t).unwrap();
            let rhs = z.tensor_character(&z.act(&phi, &gamma, z.character(a)).unwrap(), &z.act(&phi, &gamma, z.character(b)).unwrap());
            assert!(same(&lhs, &rhs));
        }
    }
    // act(phi, g) act(psi, g') = act(psi o phi, g + phi^* g')
    let combined_map = psi.compose(&phi);
    let combined_cocycle = gamma.add(&gamma2.pullback(&phi));
    for s in 0..z.num_simples() {
        let two_steps = z.act(&phi, &gamma, &z.act(&psi, &gamma2, z.character(s)).unwrap()).unwrap();
        assert_eq!(two_steps, z.act(&combined_map, &combined_cocycle, z.character(s)).unwrap());
    }
    let p1 = z.permutation_on_simples(&phi, &gamma).unwrap();
    let p2 = z.permutation_on_simples(&psi, &gamma2).unwrap();
    let p12 = z.permutation_on_simples(&combined_map, &combined_cocycle).unwrap();
    // act(phi, gamma) sends simple s to p1[s]; composing the actions composes the permutations
    for s in 0..z.num_simples() {
        assert_eq!(p12[s], p1[p2[s]]);
    }
}

#[test]
fn non_cocycles_are_reported() {
    let g = fixture("s3");
    let z = Centre::new(&g).unwrap();
    let c = (0..6).find(|&x| g.element_order(x) == 3).unwrap();
    let mut bad = Cochain2::zero(6, 6);
    bad.set(c, g.mul(c, c), 1);
    assert!(z.permutation_on_simples(&GroupMap::identity(&g), &bad).is_err());
}

#[test]
fn centralizer_tables_match_local_classes() {
    let g = fixture("q8");
    let z = Centre::new(&g).unwrap();
    let conj: &ConjData = z.pairs().conj();
    for c in 0..conj.num_classes() {
        let (sub, _) = g.subgroup(&conj.centralizers[c]).unwrap();
        let t = character_table(&sub, &conjugacy(&sub)).unwrap();
        assert_eq!(z.centralizer_table(c).degrees, t.degrees);
    }
}
