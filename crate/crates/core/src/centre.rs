//! Character-level data of the Drinfeld centre `Z(G)`.
//!
//! A simple object is a pair (conjugacy class of `x`, irreducible character
//! `rho` of `C(x)`). Its double character is the function on commuting pairs
//! `chi(f, g) = rho(t g t^-1)` for `f = t^-1 x t` in the class, zero
//! elsewhere; it is stored by one value per simultaneous-conjugation orbit.
//!
//! A pair `(phi, gamma)` of an automorphism and a 2-cocycle acts by
//!
//! ```text
//! act(phi, gamma) chi (f, g) = zeta_n^(gamma(f, g) - gamma(g, f)) chi(phi f, phi g)
//! ```
//!
//! with `zeta_n = exp(2 pi i / n)`, `n` the cocycle modulus. The pair is soft
//! when this fixes every simple double character. Composition reads
//! `act(phi, gamma) act(phi', gamma') = act(phi' phi, gamma + phi^* gamma')`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::characters::{character_table, CharTable};
use crate::cohomology::Cochain2;
use crate::cyclotomic::{as_nonnegative_integer, Cyclotomic, CyclotomicJson};
use crate::error::{Error, Result};
use crate::group::{commuting_pair_classes, ConjData, GroupMap, GroupTable, PairClassData};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CentreSimple {
    pub class: usize,
    /// Row of the centralizer character table.
    pub irrep: usize,
    pub class_size: usize,
    pub degree: u64,
    /// `|class| * degree`.
    pub qdim: u64,
}

/// One value per commuting-pair orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleCharacter {
    pub values: Vec<Cyclotomic>,
}

impl DoubleCharacter {
    pub fn to_json(&self) -> Vec<CyclotomicJson> {
        self.values.iter().map(Cyclotomic::to_json).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModularInvariantMatrix {
    pub entries: Vec<Vec<u64>>,
}

impl ModularInvariantMatrix {
    pub fn from_permutation(perm: &[usize]) -> ModularInvariantMatrix {
        let n = perm.len();
        let mut entries = vec![vec![0; n]; n];
        for (s, &t) in perm.iter().enumerate() {
            entries[s][t] = 1;
        }
        ModularInvariantMatrix { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, &v)| v == u64::from(i == j)))
    }

    pub fn is_permutation(&self) -> bool {
        let n = self.dim();
        let rows_ok = self.entries.iter().all(|r| r.iter().filter(|&&v| v == 1).count() == 1 && r.iter().all(|&v| v <= 1));
        let cols_ok = (0..n).all(|j| self.entries.iter().filter(|r| r[j] == 1).count() == 1);
        rows_ok && cols_ok
    }

    /// Rows of space-separated entries.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in &self.entries {
            let row: Vec<String> = r.iter().map(|v| v.to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }
}

#[derive(Clone, Debug)]
struct Local {
    /// Sorted centralizer of the class representative (global indices).
    elements: Vec<usize>,
    conj: ConjData,
    table: CharTable,
}

#[derive(Clone, Debug)]
pub struct Centre {
    g: GroupTable,
    pairs: PairClassData,
    local: Vec<Local>,
    simples: Vec<CentreSimple>,
    characters: Vec<DoubleCharacter>,
}

impl Centre {
    pub fn new(g: &GroupTable) -> Result<Centre> {
        let pairs = commuting_pair_classes(g);
        let conj = pairs.conj().clone();
        let k = pairs.num_orbits();
        let mut local = Vec::new();
        let mut simples = Vec::new();
        let mut characters = Vec::new();
        for c in 0..conj.num_classes() {
            let elements = conj.centralizers[c].clone();
            let (sub, emb) = g.subgroup(&elements)?;
            debug_assert_eq!(emb, elements);
            let lconj = ConjData::new(&sub);
            let table = character_table(&sub, &lconj)?;
            let orbits = pairs.orbits_of_class(c);
            if table.rows.len() != orbits.len() {
                return Err(Error::Math("centralizer classes disagree with pair orbits".into()));
            }
            for (ri, row) in table.rows.iter().enumerate() {
                let mut values = vec![Cyclotomic::zero(); k];
                for o in orbits.clone() {
                    let y = pairs.pair_reps[o].1;
                    let li = elements.binary_search(&y).expect("pair rep lies in the centralizer");
                    values[o] = row[lconj.class_of(li)].clone();
                }
                simples.push(CentreSimple {
                    class: c,
                    irrep: ri,
                    class_size: conj.class_size(c),
                    degree: table.degrees[ri],
                    qdim: conj.class_size(c) as u64 * table.degrees[ri],
                });
                characters.push(DoubleCharacter { values });
            }
            local.push(Local { elements, conj: lconj, table });
        }
        Ok(Centre { g: g.clone(), pairs, local, simples, characters })
    }

    pub fn group(&self) -> &GroupTable {
        &self.g
    }

    pub fn pairs(&self) -> &PairClassData {
        &self.pairs
    }

    pub fn simples(&self) -> &[CentreSimple] {
        &self.simples
    }

    pub fn num_simples(&self) -> usize {
        self.simples.len()
    }

    pub fn character(&self, s: usize) -> &DoubleCharacter {
        &self.characters[s]
    }

    pub fn centralizer_table(&self, class: usize) -> &CharTable {
        &self.local[class].table
    }

    /// Value at an arbitrary commuting pair.
    pub fn eval(&self, chi: &DoubleCharacter, f: usize, h: usize) -> Result<Cyclotomic> {
        let o = self
            .pairs
            .orbit_of(&self.g, f, h)
            .ok_or_else(|| Error::Math(format!("{} and {} do not commute", self.g.label(f), self.g.label(h))))?;
        Ok(chi.values[o].clone())
    }

    /// `rho(t h t^-1)` for a chosen `t` with `t f t^-1` the class
    /// representative; used to confirm independence of the witness.
    pub fn eval_with_witness(&self, s: usize, f: usize, h: usize, t: usize) -> Result<Cyclotomic> {
        let g = &self.g;
        let simple = &self.simples[s];
        let conj = self.pairs.conj();
        if conj.class_of(f) != simple.class {
            return Ok(Cyclotomic::zero());
        }
        if g.conj(t, f) != conj.class_reps[simple.class] {
            return Err(Error::Math("witness does not conjugate onto the representative".into()));
        }
        let loc = &self.local[simple.class];
        let y = g.conj(t, h);
        let li = loc.elements.binary_search(&y).map_err(|_| Error::Math("pair does not commute".into()))?;
        Ok(loc.table.rows[simple.irrep][loc.conj.class_of(li)].clone())
    }

    /// Total dimension `sum_f chi(f, e)`.
    pub fn dimension(&self, chi: &DoubleCharacter) -> Cyclotomic {
        let conj = self.pairs.conj();
        let mut out = Cyclotomic::zero();
        for c in 0..conj.num_classes() {
            let o = self.pairs.orbit_of(&self.g, conj.class_reps[c], 0).unwrap();
            out = &out + &(&chi.values[o] * &Cyclotomic::integer(conj.class_size(c) as i64));
        }
        out
    }

    /// `(1/N) sum_{commuting (f, g)} a(f, g) conj(b(f, g))`.
    pub fn double_inner_product(&self, a: &DoubleCharacter, b: &DoubleCharacter) -> Cyclotomic {
        let mut s = Cyclotomic::zero();
        for (o, &size) in self.pairs.orbit_sizes.iter().enumerate() {
            let (x, y) = (&a.values[o], &b.values[o]);
            if x.is_zero() || y.is_zero() {
                continue;
            }
            s = &s + &(&(x * &y.conj()) * &Cyclotomic::integer(size as i64));
        }
        s.scale(&BigRational::new(BigInt::one(), BigInt::from(self.g.order())))
    }

    /// `(a b)(f, g) = sum_{f1 f2 = f, f1, f2 in C(g)} a(f1, g) b(f2, g)`.
    pub fn tensor_character(&self, a: &DoubleCharacter, b: &DoubleCharacter) -> DoubleCharacter {
        let g = &self.g;
        let values = self
            .pairs
            .pair_reps
            .iter()
            .map(|&(f, h)| {
                let mut s = Cyclotomic::zero();
                for f1 in g.centralizer(h) {
                    let f2 = g.mul(g.inv(f1), f);
                    let o1 = self.pairs.orbit_of(g, f1, h).unwrap();
                    let o2 = self.pairs.orbit_of(g, f2, h).unwrap();
                    let (x, y) = (&a.values[o1], &b.values[o2]);
                    if !x.is_zero() && !y.is_zero() {
                        s = &s + &(x * y);
                    }
                }
                s
            })
            .collect();
        DoubleCharacter { values }
    }

    /// Multiplicities of the simples; fails unless all are non-negative
    /// integers.
    pub fn decompose(&self, chi: &DoubleCharacter) -> Result<Vec<u64>> {
        self.characters
            .iter()
            .map(|s| {
                let ip = self.double_inner_product(chi, s);
                as_nonnegative_integer(&ip).ok_or_else(|| Error::Math(format!("multiplicity {ip} is not a non-negative integer")))
            })
            .collect()
    }

    fn check_pair(&self, phi: &GroupMap, gamma: &Cochain2) -> Result<()> {
        let n = self.g.order();
        if phi.image().len() != n || !phi.is_bijective() {
            return Err(Error::Math("map is not an automorphism of this group".into()));
        }
        if gamma.order() != n {
            return Err(Error::Math("cochain belongs to a different group".into()));
        }
        Ok(())
    }

    pub fn act(&self, phi: &GroupMap, gamma: &Cochain2, chi: &DoubleCharacter) -> Result<DoubleCharacter> {
        self.check_pair(phi, gamma)?;
        let g = &self.g;
        let n = gamma.modulus();
        let values = self
            .pairs
            .pair_reps
            .iter()
            .map(|&(f, h)| {
                let o = self.pairs.orbit_of(g, phi.apply(f), phi.apply(h)).expect("automorphisms preserve commuting pairs");
                let v = &chi.values[o];
                let k = (gamma.get(f, h) + n - gamma.get(h, f)) % n;
                v.mul_root(n as u32, k as i64)
            })
            .collect();
        Ok(DoubleCharacter { values })
    }

    /// Image index of every simple under `act(phi, gamma)`. Fails if some
    /// image is not a simple character.
    pub fn permutation_on_simples(&self, phi: &GroupMap, gamma: &Cochain2) -> Result<Vec<usize>> {
        self.check_pair(phi, gamma)?;
        let conj = self.pairs.conj();
        let phi_inv = phi.inverse().unwrap();
        let mut perm = Vec::with_capacity(self.num_simples());
        let mut hit = vec![false; self.num_simples()];
        for (s, simple) in self.simples.iter().enumerate() {
            let psi = self.act(phi, gamma, &self.characters[s])?;
            let target = conj.class_of(phi_inv.apply(conj.class_reps[simple.class]));
            let mut found = None;
            for (t, ts) in self.simples.iter().enumerate() {
                if ts.class != target {
                    continue;
                }
                let ip = self.double_inner_product(&psi, &self.characters[t]);
                if ip == Cyclotomic::one() {
                    if found.is_some() {
                        return Err(Error::Math(format!("image of simple {s} is not simple")));
                    }
                    found = Some(t);
                } else if !ip.is_zero() {
                    return Err(Error::Math(format!("image of simple {s} is not simple")));
                }
            }
            let t = found.ok_or_else(|| Error::Math(format!("image of simple {s} is not simple")))?;
            if std::mem::replace(&mut hit[t], true) {
                return Err(Error::Math("action is not injective on simples".into()));
            }
            perm.push(t);
        }
        Ok(perm)
    }

    /// Direct test of `chi(phi f, phi g) = zeta_n^(gamma(f,g) - gamma(g,f)) chi(f, g)`
    /// on every simple and every orbit. Both this and fixedness under `act`
    /// force `phi` to fix every orbit and the ratio to be trivial, so the two
    /// tests agree.
    pub fn fixes_all_characters(&self, phi: &GroupMap, gamma: &Cochain2) -> Result<bool> {
        self.check_pair(phi, gamma)?;
        let g = &self.g;
        let n = gamma.modulus();
        for chi in &self.characters {
            for (o, &(f, h)) in self.pairs.pair_reps.iter().enumerate() {
                let moved = self.pairs.orbit_of(g, phi.apply(f), phi.apply(h)).expect("automorphisms preserve commuting pairs");
                let k = (gamma.get(f, h) + n - gamma.get(h, f)) % n;
                if chi.values[moved] != chi.values[o].mul_root(n as u32, k as i64) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Softness of `(phi, gamma)`; the permutation test and the direct
    /// character test must agree.
    pub fn is_soft(&self, phi: &GroupMap, gamma: &Cochain2) -> Result<bool> {
        let perm = self.permutation_on_simples(phi, gamma)?;
        let by_perm = perm.iter().enumerate().all(|(i, &j)| i == j);
        let direct = self.fixes_all_characters(phi, gamma)?;
        if by_perm != direct {
            return Err(Error::Math("permutation and character tests disagree".into()));
        }
        Ok(by_perm)
    }

    pub fn modular_invariant(&self, phi: &GroupMap, gamma: &Cochain2) -> Result<ModularInvariantMatrix> {
        Ok(ModularInvariantMatrix::from_permutation(&self.permutation_on_simples(phi, gamma)?))
    }

    /// Index of the unit object (trivial class, trivial character).
    pub fn unit(&self) -> usize {
        0
    }
}
