//! Second cohomology with `Z/n` coefficients, the Bockstein quotient that
//! models `H^2(G, k^*)`, and the Bogomolov multiplier.
//!
//! A normalized 2-cocycle is determined by its values `gamma(f, s)` with `s`
//! running over the generators: writing `w = p s` along the Schreier tree,
//! the cocycle identity forces
//!
//! ```text
//! gamma(f, w) = gamma(f p, s) + gamma(f, p) - gamma(p, s)
//! ```
//!
//! so every entry is a fixed linear form in those free values. The identity
//! then only has to be imposed on triples `(f, g, s)`; associativity on all
//! triples follows by induction on the word length of the third argument.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupTable, PairClassData};
use crate::linalg::{kernel_of_rows, subquotient, AbelianStructure, HowellForm, ZMod, MAX_MODULUS};

/// Largest group order accepted by the cocycle solvers.
pub const COHOMOLOGY_ORDER_LIMIT: usize = 128;

/// Normalized 2-cochain with values in `Z/n`; entries with `f` or `g` the
/// identity are implicitly zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain2 {
    order: usize,
    modulus: u64,
    values: Vec<u64>,
}

impl Cochain2 {
    pub fn zero(order: usize, modulus: u64) -> Cochain2 {
        let m = order.saturating_sub(1);
        Cochain2 { order, modulus, values: vec![0; m * m] }
    }

    /// Builds a cochain from a function on non-identity pairs.
    pub fn from_fn(order: usize, modulus: u64, mut f: impl FnMut(usize, usize) -> u64) -> Cochain2 {
        let mut c = Cochain2::zero(order, modulus);
        for a in 1..order {
            for b in 1..order {
                let v = f(a, b) % modulus;
                c.set(a, b, v);
            }
        }
        c
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    pub fn get(&self, f: usize, g: usize) -> u64 {
        if f == 0 || g == 0 {
            0
        } else {
            self.values[(f - 1) * (self.order - 1) + (g - 1)]
        }
    }

    /// Panics when `f` or `g` is the identity and `v != 0`.
    pub fn set(&mut self, f: usize, g: usize, v: u64) {
        if f == 0 || g == 0 {
            assert_eq!(v % self.modulus, 0, "normalized cochains vanish on the identity");
            return;
        }
        let m = self.order - 1;
        self.values[(f - 1) * m + (g - 1)] = v % self.modulus;
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn add(&self, other: &Cochain2) -> Cochain2 {
        assert_eq!((self.order, self.modulus), (other.order, other.modulus));
        let z = ZMod::new(self.modulus);
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| z.add(a, b)).collect();
        Cochain2 { order: self.order, modulus: self.modulus, values }
    }

    pub fn scale(&self, k: u64) -> Cochain2 {
        let z = ZMod::new(self.modulus);
        let k = k % self.modulus;
        let values = self.values.iter().map(|&a| z.mul(a, k)).collect();
        Cochain2 { order: self.order, modulus: self.modulus, values }
    }

    /// `(phi^* gamma)(f, g) = gamma(phi f, phi g)`.
    pub fn pullback(&self, phi: &crate::group::GroupMap) -> Cochain2 {
        Cochain2::from_fn(self.order, self.modulus, |f, g| self.get(phi.apply(f), phi.apply(g)))
    }

    /// Non-zero entries as `[f_label, g_label, value]` triples.
    pub fn to_triples(&self, g: &GroupTable) -> Vec<CocycleEntry> {
        let mut out = Vec::new();
        for a in 1..self.order {
            for b in 1..self.order {
                let v = self.get(a, b);
                if v != 0 {
                    out.push(CocycleEntry(g.label(a).to_string(), g.label(b).to_string(), v));
                }
            }
        }
        out
    }

    /// Inverse of [`Cochain2::to_triples`]; missing entries are zero.
    pub fn from_triples(g: &GroupTable, modulus: u64, entries: &[CocycleEntry]) -> Result<Cochain2> {
        let mut c = Cochain2::zero(g.order(), modulus);
        for CocycleEntry(a, b, v) in entries {
            let ia = g.index_of_label(a).ok_or_else(|| Error::Spec(format!("unknown element label {a:?}")))?;
            let ib = g.index_of_label(b).ok_or_else(|| Error::Spec(format!("unknown element label {b:?}")))?;
            if (ia == 0 || ib == 0) && v % modulus != 0 {
                return Err(Error::Spec("cochain is not normalized".into()));
            }
            c.set(ia, ib, *v);
        }
        Ok(c)
    }
}

/// One serialized cochain value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleEntry(pub String, pub String, pub u64);

/// `delta c (f, g) = c(f) + c(g) - c(fg)`; requires `c(e) = 0`.
pub fn coboundary(g: &GroupTable, c: &[u64], modulus: u64) -> Result<Cochain2> {
    if c.len() != g.order() {
        return Err(Error::Math("cochain length does not match group order".into()));
    }
    if c[0] % modulus != 0 {
        return Err(Error::Math("1-cochain must vanish on the identity".into()));
    }
    let z = ZMod::new(modulus);
    Ok(Cochain2::from_fn(g.order(), modulus, |f, h| {
        z.sub(z.add(c[f] % modulus, c[h] % modulus), c[g.mul(f, h)] % modulus)
    }))
}

/// Exhaustive check of `gamma(f,gh) + gamma(g,h) = gamma(fg,h) + gamma(f,g)`.
pub fn is_cocycle(g: &GroupTable, gamma: &Cochain2) -> bool {
    first_violation(g, gamma).is_none()
}

/// A triple on which the cocycle identity fails, if any.
pub fn first_violation(g: &GroupTable, gamma: &Cochain2) -> Option<(usize, usize, usize)> {
    let n = g.order();
    if gamma.order() != n {
        return Some((0, 0, 0));
    }
    let z = ZMod::new(gamma.modulus());
    for f in 1..n {
        for a in 1..n {
            let fa = g.mul(f, a);
            let faf = gamma.get(f, a);
            for b in 1..n {
                let lhs = z.add(gamma.get(f, g.mul(a, b)), gamma.get(a, b));
                let rhs = z.add(gamma.get(fa, b), faf);
                if lhs != rhs {
                    return Some((f, a, b));
                }
            }
        }
    }
    None
}

/// The generator-reduced cocycle system of a group.
#[derive(Clone, Debug)]
pub struct CocycleSystem {
    order: usize,
    modulus: u64,
    gens: Vec<usize>,
    /// Free coordinate of `(f, gens[k])` is `(f - 1) * gens.len() + k`.
    dim: usize,
    /// `expr[(f * order + w) * dim ..]`: `gamma(f, w)` as a linear form.
    expr: Vec<u64>,
}

impl CocycleSystem {
    pub fn new(g: &GroupTable, modulus: u64) -> Result<CocycleSystem> {
        let n = g.order();
        if n > COHOMOLOGY_ORDER_LIMIT {
            return Err(Error::Budget { what: "cohomology group order", limit: COHOMOLOGY_ORDER_LIMIT });
        }
        if !(2..MAX_MODULUS).contains(&modulus) {
            return Err(Error::Math(format!("modulus {modulus} out of range")));
        }
        let mut gens = Vec::new();
        for &s in g.generators() {
            if s != 0 && !gens.contains(&s) {
                gens.push(s);
            }
        }
        let gpos = |s: usize| gens.iter().position(|&t| t == s).unwrap();
        let k = gens.len();
        let dim = (n - 1) * k;
        let z = ZMod::new(modulus);
        let mut expr = vec![0u64; n * n * dim];
        let bfs: Vec<usize> = g.bfs_order().collect();
        for f in 1..n {
            for &w in &bfs {
                let Some((p, kk)) = g.tree_parent(w) else { continue };
                let si = gpos(g.generators()[kk]);
                let mut row = vec![0u64; dim];
                let base = (f * n + p) * dim;
                row.copy_from_slice(&expr[base..base + dim]);
                let fp = g.mul(f, p);
                if fp != 0 {
                    let c = (fp - 1) * k + si;
                    row[c] = z.add(row[c], 1);
                }
                if p != 0 {
                    let c = (p - 1) * k + si;
                    row[c] = z.sub(row[c], 1);
                }
                let dst = (f * n + w) * dim;
                expr[dst..dst + dim].copy_from_slice(&row);
            }
        }
        Ok(CocycleSystem { order: n, modulus, gens, dim, expr })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of free coordinates.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    fn expr(&self, f: usize, w: usize) -> &[u64] {
        let b = (f * self.order + w) * self.dim;
        &self.expr[b..b + self.dim]
    }

    fn free(&self, f: usize, k: usize) -> Option<usize> {
        (f != 0).then(|| (f - 1) * self.gens.len() + k)
    }

    /// Rows whose common kernel is the cocycle space in free coordinates.
    pub fn cocycle_equations(&self, g: &GroupTable) -> Vec<Vec<u64>> {
        let n = self.order;
        let z = ZMod::new(self.modulus);
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        let mut rows = Vec::new();
        for f in 1..n {
            for a in 1..n {
                let fa = g.mul(f, a);
                for (k, &s) in self.gens.iter().enumerate() {
                    let mut row = self.expr(f, g.mul(a, s)).to_vec();
                    for (r, &e) in row.iter_mut().zip(self.expr(f, a)) {
                        *r = z.sub(*r, e);
                    }
                    if let Some(c) = self.free(a, k) {
                        row[c] = z.add(row[c], 1);
                    }
                    if let Some(c) = self.free(fa, k) {
                        row[c] = z.sub(row[c], 1);
                    }
                    if row.iter().any(|&x| x != 0) && seen.insert(row.clone()) {
                        rows.push(row);
                    }
                }
            }
        }
        rows
    }

    /// `gamma(f, g) - gamma(g, f)` for every commuting pair with `f < g`.
    pub fn antisymmetry_equations(&self, g: &GroupTable) -> Vec<Vec<u64>> {
        let n = self.order;
        let z = ZMod::new(self.modulus);
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        let mut rows = Vec::new();
        for f in 1..n {
            for h in f + 1..n {
                if !g.commutes(f, h) {
                    continue;
                }
                let row: Vec<u64> = self.expr(f, h).iter().zip(self.expr(h, f)).map(|(&a, &b)| z.sub(a, b)).collect();
                if row.iter().any(|&x| x != 0) && seen.insert(row.clone()) {
                    rows.push(row);
                }
            }
        }
        rows
    }

    /// Full cochain determined by free coordinates.
    pub fn expand(&self, v: &[u64]) -> Cochain2 {
        let z = ZMod::new(self.modulus);
        Cochain2::from_fn(self.order, self.modulus, |f, w| {
            self.expr(f, w).iter().zip(v).fold(0, |acc, (&e, &x)| if e == 0 { acc } else { z.add(acc, z.mul(e, x)) })
        })
    }

    /// Free coordinates of a cochain.
    pub fn restrict(&self, gamma: &Cochain2) -> Vec<u64> {
        let mut v = vec![0; self.dim];
        for f in 1..self.order {
            for (k, &s) in self.gens.iter().enumerate() {
                v[(f - 1) * self.gens.len() + k] = gamma.get(f, s);
            }
        }
        v
    }

    /// Free coordinates of `delta e_x` for every `x != e`.
    pub fn coboundary_generators(&self, g: &GroupTable) -> Vec<Vec<u64>> {
        let z = ZMod::new(self.modulus);
        let k = self.gens.len();
        (1..self.order)
            .map(|x| {
                let mut v = vec![0; self.dim];
                for f in 1..self.order {
                    for (si, &s) in self.gens.iter().enumerate() {
                        let mut val = u64::from(f == x) + u64::from(s == x);
                        if g.mul(f, s) == x {
                            val = z.sub(val, 1);
                        }
                        v[(f - 1) * k + si] = z.reduce(val);
                    }
                }
                v
            })
            .collect()
    }
}

/// A cohomology group presented as a subquotient of the free coordinate
/// space, with cocycle representatives for its standard generators.
#[derive(Clone, Debug)]
pub struct CohomologyPresentation {
    pub structure: AbelianStructure,
    pub representatives: Vec<Cochain2>,
    system: CocycleSystem,
}

impl CohomologyPresentation {
    fn build(g: &GroupTable, system: CocycleSystem, zgens: Vec<Vec<u64>>, bgens: Vec<Vec<u64>>) -> Result<CohomologyPresentation> {
        let structure = subquotient(&zgens, &bgens, system.modulus(), system.dim())?;
        let representatives: Vec<Cochain2> = structure.lifts.iter().map(|l| system.expand(l)).collect();
        for r in &representatives {
            if let Some(t) = first_violation(g, r) {
                return Err(Error::Math(format!("representative fails the cocycle identity at {t:?}")));
            }
        }
        Ok(CohomologyPresentation { structure, representatives, system })
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.structure.factors
    }

    pub fn order(&self) -> u128 {
        self.structure.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.structure.is_trivial()
    }

    pub fn modulus(&self) -> u64 {
        self.system.modulus()
    }

    /// Coordinates of the class of `gamma`. Fails for non-cocycles and for
    /// cocycles outside the numerator of this presentation.
    pub fn class_of(&self, g: &GroupTable, gamma: &Cochain2) -> Result<Vec<u64>> {
        if gamma.modulus() != self.modulus() {
            return Err(Error::Math("modulus mismatch".into()));
        }
        if !is_cocycle(g, gamma) {
            return Err(Error::Math("not a cocycle".into()));
        }
        self.structure
            .project(&self.system.restrict(gamma))
            .ok_or_else(|| Error::Math("cocycle lies outside the presented subgroup".into()))
    }

    /// Cocycle representing the class with the given coordinates.
    pub fn cocycle(&self, coords: &[u64]) -> Cochain2 {
        self.system.expand(&self.structure.element(coords))
    }
}

/// Default coefficient modulus: the group order (at least 2).
pub fn default_modulus(g: &GroupTable) -> u64 {
    (g.order() as u64).max(2)
}

fn cocycle_generators(g: &GroupTable, sys: &CocycleSystem, extra: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    let mut rows = sys.cocycle_equations(g);
    rows.extend(extra);
    kernel_of_rows(sys.modulus(), sys.dim(), rows)
}

/// `H^2(G, Z/n) = Z^2 / B^2`.
pub fn h2_mod_n(g: &GroupTable, modulus: u64) -> Result<CohomologyPresentation> {
    let sys = CocycleSystem::new(g, modulus)?;
    let z = cocycle_generators(g, &sys, Vec::new());
    let b = sys.coboundary_generators(g);
    CohomologyPresentation::build(g, sys, z, b)
}

/// Generators `a(s)` of `Hom(G, Z/n)`, one vector of generator images each.
pub fn hom_to_cyclic(g: &GroupTable, modulus: u64) -> Vec<Vec<u64>> {
    let gens: Vec<usize> = {
        let mut v = Vec::new();
        for &s in g.generators() {
            if s != 0 && !v.contains(&s) {
                v.push(s);
            }
        }
        v
    };
    let k = gens.len();
    if k == 0 {
        return Vec::new();
    }
    // letter counts of each tree word
    let n = g.order();
    let mut count = vec![vec![0i64; k]; n];
    for w in g.bfs_order() {
        if let Some((p, kk)) = g.tree_parent(w) {
            let mut c = count[p].clone();
            c[gens.iter().position(|&t| t == g.generators()[kk]).unwrap()] += 1;
            count[w] = c;
        }
    }
    let z = ZMod::new(modulus);
    let mut rows = HashSet::new();
    for x in 0..n {
        for (si, &s) in gens.iter().enumerate() {
            let xs = g.mul(x, s);
            let row: Vec<u64> = (0..k)
                .map(|j| z.from_i64(count[xs][j] - count[x][j] - i64::from(j == si)))
                .collect();
            if row.iter().any(|&v| v != 0) {
                rows.insert(row);
            }
        }
    }
    let mut rows: Vec<Vec<u64>> = rows.into_iter().collect();
    rows.sort();
    let h = HowellForm::new(modulus, k, kernel_of_rows(modulus, k, rows), false);
    let homs: Vec<Vec<u64>> = h.rows().to_vec();
    // images of all elements
    homs.into_iter()
        .map(|a| {
            (0..n)
                .map(|x| count[x].iter().zip(&a).fold(0, |acc, (&c, &ai)| z.add(acc, z.mul(z.from_i64(c), ai))))
                .collect()
        })
        .collect()
}

/// `beta(a)(f, g) = (a(f) + a(g) - a(fg)) / n` for generators `a` of
/// `Hom(G, Z/n)`, using representatives in `[0, n)`.
pub fn bockstein_classes(g: &GroupTable, modulus: u64) -> Vec<Cochain2> {
    hom_to_cyclic(g, modulus)
        .into_iter()
        .map(|a| {
            Cochain2::from_fn(g.order(), modulus, |f, h| {
                let num = a[f] + a[h] - a[g.mul(f, h)];
                debug_assert_eq!(num % modulus, 0);
                num / modulus
            })
        })
        .collect()
}

fn denominators(g: &GroupTable, sys: &CocycleSystem) -> Vec<Vec<u64>> {
    let mut b = sys.coboundary_generators(g);
    b.extend(bockstein_classes(g, sys.modulus()).iter().map(|c| sys.restrict(c)));
    b
}

/// `H^2(G, Z/n)` modulo coboundaries and Bockstein classes; for `n = |G|`
/// this is the Schur multiplier.
pub fn schur_multiplier(g: &GroupTable, modulus: u64) -> Result<CohomologyPresentation> {
    let sys = CocycleSystem::new(g, modulus)?;
    let z = cocycle_generators(g, &sys, Vec::new());
    let b = denominators(g, &sys);
    CohomologyPresentation::build(g, sys, z, b)
}

/// Classes of the Schur multiplier with a representative satisfying
/// `gamma(f, g) = gamma(g, f)` on all commuting pairs. Representatives are
/// symmetric on commuting pairs at cochain level.
pub fn bogomolov(g: &GroupTable, modulus: u64) -> Result<CohomologyPresentation> {
    let sys = CocycleSystem::new(g, modulus)?;
    let anti = sys.antisymmetry_equations(g);
    let z = cocycle_generators(g, &sys, anti);
    let b = denominators(g, &sys);
    CohomologyPresentation::build(g, sys, z, b)
}

/// `gamma(x, y) - gamma(y, x)` at each commuting-pair orbit representative.
pub fn antisym_on_commuting(g: &GroupTable, pairs: &PairClassData, gamma: &Cochain2) -> Result<Vec<u64>> {
    if !is_cocycle(g, gamma) {
        return Err(Error::Math("not a cocycle".into()));
    }
    let z = ZMod::new(gamma.modulus());
    Ok(pairs.pair_reps.iter().map(|&(x, y)| z.sub(gamma.get(x, y), gamma.get(y, x))).collect())
}

/// Element sets of the subgroups `<x, y>` for commuting-pair orbit
/// representatives, deduplicated, sorted.
pub fn two_generated_abelian_subgroups(g: &GroupTable, pairs: &PairClassData) -> Vec<Vec<usize>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for &(x, y) in &pairs.pair_reps {
        let a = g.closure(&[x, y]);
        if seen.insert(a.clone()) {
            out.push(a);
        }
    }
    out.sort();
    out
}

/// Whether `gamma` restricted to each listed abelian subgroup `A` is trivial
/// in `H^2(A, k^*)`, i.e. whether `n gamma|_A` is a coboundary over `Z/n^2`.
pub fn restriction_check(g: &GroupTable, gamma: &Cochain2, subgroups: &[Vec<usize>]) -> Result<bool> {
    let n = gamma.modulus();
    let nn = n.checked_mul(n).filter(|&m| m < MAX_MODULUS).ok_or_else(|| Error::Math("modulus too large for restriction check".into()))?;
    let z = ZMod::new(nn);
    for a in subgroups {
        let mut elems = a.clone();
        elems.sort_unstable();
        elems.dedup();
        if elems.first() != Some(&0) {
            return Err(Error::Math("subgroup must contain the identity".into()));
        }
        for &x in &elems {
            for &y in &elems {
                if !g.commutes(x, y) {
                    return Err(Error::Math("listed subgroup is not abelian".into()));
                }
                if elems.binary_search(&g.mul(x, y)).is_err() {
                    return Err(Error::Math("listed set is not a subgroup".into()));
                }
            }
        }
        let m = elems.len();
        if m <= 2 {
            continue;
        }
        let pos = |x: usize| elems.binary_search(&x).unwrap();
        let dim = (m - 1) * (m - 1);
        let idx = |i: usize, j: usize| (i - 1) * (m - 1) + (j - 1);
        let cobs = (1..m).map(|x| {
            let mut v = vec![0u64; dim];
            for i in 1..m {
                for j in 1..m {
                    let mut val = u64::from(i == x) + u64::from(j == x);
                    if pos(g.mul(elems[i], elems[j])) == x {
                        val = z.sub(val, 1);
                    }
                    v[idx(i, j)] = z.reduce(val);
                }
            }
            v
        });
        let h = HowellForm::new(nn, dim, cobs, false);
        let mut target = vec![0u64; dim];
        for i in 1..m {
            for j in 1..m {
                target[idx(i, j)] = z.mul(n, gamma.get(elems[i], elems[j]));
            }
        }
        if !h.contains(&target) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(m: usize) -> GroupTable {
        let t = (0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect();
        GroupTable::from_table(t, None, None).unwrap()
    }

    fn klein() -> GroupTable {
        let t = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
        GroupTable::from_table(t, None, None).unwrap()
    }

    #[test]
    fn coboundary_arithmetic_on_z2() {
        let g = cyclic(2);
        let d = coboundary(&g, &[0, 1], 2).unwrap();
        assert_eq!(d.get(1, 1), 0);
        assert!(is_cocycle(&g, &d));
    }

    #[test]
    fn bockstein_on_z2() {
        let g = cyclic(2);
        let b = bockstein_classes(&g, 2);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].get(1, 1), 1);
    }

    #[test]
    fn raw_h2_of_cyclic() {
        for m in [2usize, 3, 4, 6] {
            let g = cyclic(m);
            let h = h2_mod_n(&g, m as u64).unwrap();
            assert_eq!(h.invariant_factors(), &[m as u64]);
            assert!(schur_multiplier(&g, m as u64).unwrap().invariant_factors().is_empty());
        }
    }

    #[test]
    fn klein_four() {
        let g = klein();
        assert_eq!(schur_multiplier(&g, 4).unwrap().invariant_factors(), &[2]);
        assert!(bogomolov(&g, 4).unwrap().invariant_factors().is_empty());
    }

    #[test]
    fn trivial_group() {
        let g = GroupTable::from_table(vec![vec![0]], None, None).unwrap();
        assert!(h2_mod_n(&g, 2).unwrap().invariant_factors().is_empty());
        assert!(bockstein_classes(&g, 2).is_empty());
    }

    #[test]
    fn representatives_project_to_basis() {
        let g = klein();
        let h = h2_mod_n(&g, 4).unwrap();
        for (i, r) in h.representatives.iter().enumerate() {
            let mut e = vec![0; h.representatives.len()];
            e[i] = 1;
            assert_eq!(h.class_of(&g, r).unwrap(), e);
        }
        let d = coboundary(&g, &[0, 1, 3, 2], 4).unwrap();
        assert!(h.class_of(&g, &d).unwrap().iter().all(|&c| c == 0));
    }
}
