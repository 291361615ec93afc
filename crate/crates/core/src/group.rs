//! Finite groups as explicit tables, conjugacy data, commuting-pair orbits
//! and automorphism predicates.
//!
//! Every [`GroupTable`] has its identity at index 0. Small groups carry a dense
//! multiplication table; larger ones (up to [`ORDER_CAP`]) multiply through a
//! rule closure so that groups such as `sl_3(F_2) x| (M + M)` of order `2^14`
//! stay in memory.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};

/// Largest group order accepted by any constructor.
pub const ORDER_CAP: usize = 65536;
/// Groups up to this order get a dense multiplication table.
pub const DENSE_LIMIT: usize = 4096;
/// Up to this order associativity is checked on every triple.
const EXHAUSTIVE_ASSOC_LIMIT: usize = 512;
const RANDOM_ASSOC_TRIPLES: usize = 1_000_000;
const NO_GEN: u32 = u32::MAX;

pub type MulRule = Arc<dyn Fn(usize, usize) -> usize + Send + Sync>;

#[derive(Clone)]
enum Mult {
    Dense(Arc<Vec<u32>>),
    Rule(MulRule),
}

/// A finite group on the index set `0..order`, identity at 0.
#[derive(Clone)]
pub struct GroupTable {
    order: usize,
    mult: Mult,
    inv: Vec<u32>,
    generators: Vec<usize>,
    labels: Vec<String>,
    /// Schreier tree: `x = parent[x].0 * generators[parent[x].1]`.
    parent: Vec<(u32, u32)>,
    bfs: Vec<u32>,
}

impl fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupTable")
            .field("order", &self.order)
            .field("generators", &self.generators)
            .field("dense", &matches!(self.mult, Mult::Dense(_)))
            .finish()
    }
}

impl GroupTable {
    /// Builds a group from a full Cayley table. The identity is moved to index
    /// 0 if necessary; when `generators` is `None` a generating set is chosen
    /// greedily in index order.
    pub fn from_table(
        table: Vec<Vec<usize>>,
        labels: Option<Vec<String>>,
        generators: Option<Vec<usize>>,
    ) -> Result<GroupTable> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if n > ORDER_CAP {
            return Err(Error::Budget { what: "group order", limit: ORDER_CAP });
        }
        if n > DENSE_LIMIT {
            return Err(Error::Budget { what: "dense Cayley table", limit: DENSE_LIMIT });
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!("row {i} has length {}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidGroup(format!("entry {bad} out of range in row {i}")));
            }
        }
        let e = (0..n)
            .find(|&x| (0..n).all(|y| table[x][y] == y && table[y][x] == y))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        // swap e <-> 0
        let sw = |x: usize| if x == e { 0 } else if x == 0 { e } else { x };
        let mut flat = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                flat[sw(a) * n + sw(b)] = sw(table[a][b]) as u32;
            }
        }
        let mut labels = labels.unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect());
        if labels.len() != n {
            return Err(Error::InvalidGroup("label count differs from order".into()));
        }
        labels.swap(0, e);
        let mut inv = vec![NO_GEN; n];
        for a in 0..n {
            for b in 0..n {
                if flat[a * n + b] == 0 {
                    inv[a] = b as u32;
                    break;
                }
            }
            if inv[a] == NO_GEN {
                return Err(Error::InvalidGroup(format!("element {a} has no inverse")));
            }
        }
        let mut g = GroupTable {
            order: n,
            mult: Mult::Dense(Arc::new(flat)),
            inv,
            generators: Vec::new(),
            labels,
            parent: Vec::new(),
            bfs: Vec::new(),
        };
        g.check_latin()?;
        let gens = match generators {
            Some(gs) => gs.into_iter().map(sw).collect(),
            None => g.greedy_generators(),
        };
        g.set_generators(gens)?;
        g.validate()?;
        Ok(g)
    }

    /// Builds a group whose product is computed by `mul`. The identity must be
    /// index 0 and `inv` must be the inverse map. Groups up to
    /// [`DENSE_LIMIT`] are materialized into a dense table.
    pub fn from_rule(
        order: usize,
        mul: MulRule,
        inv: Vec<usize>,
        generators: Vec<usize>,
        labels: Vec<String>,
    ) -> Result<GroupTable> {
        if order == 0 {
            return Err(Error::InvalidGroup("empty group".into()));
        }
        if order > ORDER_CAP {
            return Err(Error::Budget { what: "group order", limit: ORDER_CAP });
        }
        if inv.len() != order || labels.len() != order {
            return Err(Error::InvalidGroup("inverse/label arrays do not match order".into()));
        }
        let mult = if order <= DENSE_LIMIT {
            let mut flat = vec![0u32; order * order];
            for a in 0..order {
                for b in 0..order {
                    let c = mul(a, b);
                    if c >= order {
                        return Err(Error::InvalidGroup(format!("product {a}*{b} out of range")));
                    }
                    flat[a * order + b] = c as u32;
                }
            }
            Mult::Dense(Arc::new(flat))
        } else {
            Mult::Rule(mul)
        };
        let mut g = GroupTable {
            order,
            mult,
            inv: inv.into_iter().map(|x| x as u32).collect(),
            generators: Vec::new(),
            labels,
            parent: Vec::new(),
            bfs: Vec::new(),
        };
        if matches!(g.mult, Mult::Dense(_)) {
            g.check_latin()?;
        }
        g.set_generators(generators)?;
        g.validate()?;
        Ok(g)
    }

    /// Closes `gens` under `mul`, enumerating elements breadth-first (shortlex
    /// in the generator order). Returns the group and the enumerated elements.
    pub fn from_generators<T, M, L>(
        gens: &[T],
        identity: T,
        mul: M,
        label: L,
        cap: usize,
    ) -> Result<(GroupTable, Vec<T>)>
    where
        T: Clone + Eq + Hash + Send + Sync + 'static,
        M: Fn(&T, &T) -> T + Send + Sync + 'static,
        L: Fn(&T) -> String,
    {
        let cap = cap.min(ORDER_CAP);
        let mut elems = vec![identity.clone()];
        let mut index: HashMap<T, usize> = HashMap::new();
        index.insert(identity, 0);
        let mut head = 0;
        while head < elems.len() {
            for s in gens {
                let p = mul(&elems[head], s);
                if !index.contains_key(&p) {
                    if elems.len() >= cap {
                        return Err(Error::Budget { what: "group order", limit: cap });
                    }
                    index.insert(p.clone(), elems.len());
                    elems.push(p);
                }
            }
            head += 1;
        }
        let n = elems.len();
        let gen_idx: Vec<usize> = gens.iter().map(|s| index[s]).collect();
        let labels: Vec<String> = elems.iter().map(&label).collect();
        let elems = Arc::new(elems);
        let index = Arc::new(index);
        let rule: MulRule = {
            let elems = Arc::clone(&elems);
            let index = Arc::clone(&index);
            Arc::new(move |a, b| index[&mul(&elems[a], &elems[b])])
        };
        // inverses through the BFS tree: (y s)^-1 = s^-1 y^-1
        let mut inv = vec![usize::MAX; n];
        inv[0] = 0;
        let gen_inv: Vec<usize> = gen_idx
            .iter()
            .map(|&s| {
                let mut prev = 0;
                let mut cur = s;
                while cur != 0 {
                    prev = cur;
                    cur = rule(cur, s);
                }
                // s^(o-1): last non-identity power
                if s == 0 {
                    0
                } else {
                    prev
                }
            })
            .collect();
        // BFS again to fill inverse through parent links.
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (k, &s) in gen_idx.iter().enumerate() {
                let y = rule(x, s);
                if !seen[y] {
                    seen[y] = true;
                    inv[y] = rule(gen_inv[k], inv[x]);
                    queue.push_back(y);
                }
            }
        }
        let g = GroupTable::from_rule(n, rule, inv, gen_idx, labels)?;
        let elems = Arc::try_unwrap(elems).unwrap_or_else(|a| (*a).clone());
        Ok((g, elems))
    }

    fn check_latin(&self) -> Result<()> {
        let n = self.order;
        let mut seen = vec![0usize; n];
        for a in 0..n {
            for b in 0..n {
                let c = self.mul(a, b);
                if seen[c] == a + 1 {
                    return Err(Error::InvalidGroup(format!("row {a} repeats entry {c}")));
                }
                seen[c] = a + 1;
            }
        }
        Ok(())
    }

    fn set_generators(&mut self, gens: Vec<usize>) -> Result<()> {
        let n = self.order;
        if let Some(&bad) = gens.iter().find(|&&s| s >= n) {
            return Err(Error::InvalidGroup(format!("generator {bad} out of range")));
        }
        self.generators = gens;
        let mut parent = vec![(u32::MAX, NO_GEN); n];
        parent[0] = (0, NO_GEN);
        let mut bfs = Vec::with_capacity(n);
        bfs.push(0u32);
        let mut head = 0;
        while head < bfs.len() {
            let x = bfs[head] as usize;
            for (k, &s) in self.generators.iter().enumerate() {
                let y = self.mul(x, s);
                if y != 0 && parent[y].0 == u32::MAX {
                    parent[y] = (x as u32, k as u32);
                    bfs.push(y as u32);
                }
            }
            head += 1;
        }
        if bfs.len() != n {
            return Err(Error::InvalidGroup(format!(
                "generators span only {} of {} elements",
                bfs.len(),
                n
            )));
        }
        self.parent = parent;
        self.bfs = bfs;
        Ok(())
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut member = vec![false; self.order];
        member[0] = true;
        let mut elems = vec![0usize];
        for x in 0..self.order {
            if member[x] {
                continue;
            }
            gens.push(x);
            self.extend_closure(&mut member, &mut elems, &gens);
        }
        gens
    }

    /// Checks the group axioms: identity, inverses, associativity.
    pub fn validate(&self) -> Result<()> {
        let n = self.order;
        for x in 0..n {
            if self.mul(0, x) != x || self.mul(x, 0) != x {
                return Err(Error::InvalidGroup(format!("index 0 is not an identity at {x}")));
            }
            let i = self.inv[x] as usize;
            if i >= n || self.mul(x, i) != 0 || self.mul(i, x) != 0 {
                return Err(Error::InvalidGroup(format!("bad inverse for element {x}")));
            }
        }
        let bad = |x: usize, y: usize, z: usize| {
            Error::InvalidGroup(format!("not associative at ({x},{y},{z})"))
        };
        if n <= EXHAUSTIVE_ASSOC_LIMIT {
            for x in 0..n {
                for y in 0..n {
                    let xy = self.mul(x, y);
                    for z in 0..n {
                        if self.mul(xy, z) != self.mul(x, self.mul(y, z)) {
                            return Err(bad(x, y, z));
                        }
                    }
                }
            }
        } else {
            let mut rng = StdRng::seed_from_u64(0x5eed_0f_a550c);
            for _ in 0..RANDOM_ASSOC_TRIPLES {
                let (x, y, z) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)) {
                    return Err(bad(x, y, z));
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.mult {
            Mult::Dense(t) => t[a * self.order + b] as usize,
            Mult::Rule(f) => f(a, b),
        }
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.mult, Mult::Dense(_))
    }

    /// `h x h^-1`.
    #[inline]
    pub fn conj(&self, h: usize, x: usize) -> usize {
        self.mul(self.mul(h, x), self.inv(h))
    }

    /// `[x, y] = x^-1 y^-1 x y`.
    pub fn commutator(&self, x: usize, y: usize) -> usize {
        let yx = self.mul(y, x);
        let xy = self.mul(x, y);
        self.mul(self.inv(yx), xy)
    }

    pub fn commutes(&self, x: usize, y: usize) -> bool {
        self.mul(x, y) == self.mul(y, x)
    }

    pub fn pow(&self, x: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(x) } else { x };
        let mut e = k.unsigned_abs();
        let mut acc = 0;
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        (0..self.order).fold(1, |acc, x| num_integer::lcm(acc, self.element_order(x)))
    }

    /// Elements in breadth-first (shortlex) order of the Schreier tree.
    pub fn bfs_order(&self) -> impl Iterator<Item = usize> + '_ {
        self.bfs.iter().map(|&x| x as usize)
    }

    /// Tree parent and generator position: `x = parent * generators[k]`.
    /// `None` for the identity.
    pub fn tree_parent(&self, x: usize) -> Option<(usize, usize)> {
        let (p, k) = self.parent[x];
        (k != NO_GEN).then_some((p as usize, k as usize))
    }

    /// Shortlex word of `x` as a list of generator positions.
    pub fn word(&self, mut x: usize) -> Vec<usize> {
        let mut w = Vec::new();
        while let Some((p, k)) = self.tree_parent(x) {
            w.push(k);
            x = p;
        }
        w.reverse();
        w
    }

    pub fn is_abelian(&self) -> bool {
        let gs = &self.generators;
        gs.iter().all(|&a| gs.iter().all(|&b| self.commutes(a, b)))
    }

    pub fn centralizer(&self, x: usize) -> Vec<usize> {
        (0..self.order).filter(|&y| self.commutes(x, y)).collect()
    }

    pub fn centre(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&z| self.generators.iter().all(|&s| self.commutes(z, s)))
            .collect()
    }

    fn extend_closure(&self, member: &mut [bool], elems: &mut Vec<usize>, gens: &[usize]) {
        // Re-run BFS from all current elements; adds everything reachable.
        let mut head = 0;
        while head < elems.len() {
            let x = elems[head];
            for &s in gens {
                let y = self.mul(x, s);
                if !member[y] {
                    member[y] = true;
                    elems.push(y);
                }
            }
            head += 1;
        }
    }

    /// Sorted element list of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.order];
        member[0] = true;
        let mut elems = vec![0];
        self.extend_closure(&mut member, &mut elems, gens);
        elems.sort_unstable();
        elems
    }

    /// Sorted element list of the normal closure of `gens`.
    pub fn normal_closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut hgens: Vec<usize> = gens.to_vec();
        let mut member = vec![false; self.order];
        member[0] = true;
        let mut elems = vec![0];
        self.extend_closure(&mut member, &mut elems, &hgens);
        let mut i = 0;
        while i < hgens.len() {
            let h = hgens[i];
            for &s in &self.generators {
                let c = self.conj(s, h);
                if !member[c] {
                    hgens.push(c);
                    self.extend_closure(&mut member, &mut elems, &hgens);
                }
            }
            i += 1;
        }
        elems.sort_unstable();
        elems
    }

    /// `[H, G]` for a subgroup `H` given by its elements.
    pub fn commutator_with_group(&self, h: &[usize]) -> Vec<usize> {
        let mut comms: Vec<usize> = Vec::new();
        let mut seen = vec![false; self.order];
        for &x in h {
            for &s in &self.generators {
                let c = self.commutator(x, s);
                if !seen[c] {
                    seen[c] = true;
                    comms.push(c);
                }
            }
        }
        self.normal_closure(&comms)
    }

    pub fn derived_subgroup(&self) -> Vec<usize> {
        let all: Vec<usize> = (0..self.order).collect();
        self.commutator_with_group(&all)
    }

    /// `G = gamma_1 > gamma_2 > ...` until it stabilizes.
    pub fn lower_central_series(&self) -> Vec<Vec<usize>> {
        let mut series = vec![(0..self.order).collect::<Vec<_>>()];
        loop {
            let next = self.commutator_with_group(series.last().unwrap());
            if next.len() == series.last().unwrap().len() {
                break;
            }
            let done = next.len() == 1;
            series.push(next);
            if done {
                break;
            }
        }
        series
    }

    /// Nilpotency class, or `None` if the group is not nilpotent.
    pub fn nilpotency_class(&self) -> Option<usize> {
        let s = self.lower_central_series();
        (s.last().unwrap().len() == 1).then(|| s.len() - 1)
    }

    /// The subgroup on `elements` (any order; must be closed) as its own
    /// table, with the embedding `sub index -> self index`. Elements are kept
    /// in ascending order of their index in `self`.
    pub fn subgroup(&self, elements: &[usize]) -> Result<(GroupTable, Vec<usize>)> {
        let mut elems = elements.to_vec();
        elems.sort_unstable();
        elems.dedup();
        if elems.first() != Some(&0) {
            return Err(Error::InvalidGroup("subgroup must contain the identity".into()));
        }
        let m = elems.len();
        let pos: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let lookup = |x: usize| {
            pos.get(&x)
                .copied()
                .ok_or_else(|| Error::InvalidGroup("element list is not closed".into()))
        };
        let mut table = vec![vec![0usize; m]; m];
        for i in 0..m {
            for j in 0..m {
                table[i][j] = lookup(self.mul(elems[i], elems[j]))?;
            }
        }
        let labels = elems.iter().map(|&x| self.labels[x].clone()).collect();
        let g = GroupTable::from_table(table, Some(labels), None)?;
        Ok((g, elems))
    }

    /// Relabels elements by a permutation: new index of old `x` is `perm[x]`
    /// (with `perm[0] == 0`). Used to test isomorphism invariance.
    pub fn relabel(&self, perm: &[usize]) -> Result<GroupTable> {
        let n = self.order;
        if perm.len() != n || perm[0] != 0 {
            return Err(Error::InvalidGroup("relabeling must fix the identity".into()));
        }
        let mut back = vec![0; n];
        for (x, &p) in perm.iter().enumerate() {
            back[p] = x;
        }
        let mut table = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                table[a][b] = perm[self.mul(back[a], back[b])];
            }
        }
        let labels = (0..n).map(|i| self.labels[back[i]].clone()).collect();
        let gens = self.generators.iter().map(|&s| perm[s]).collect();
        GroupTable::from_table(table, Some(labels), Some(gens))
    }
}

/// Conjugacy classes, class witnesses and centralizers of class
/// representatives. Classes are ordered by minimal member, and each
/// representative is that minimal member (so the identity class comes first).
#[derive(Clone, Debug)]
pub struct ConjData {
    pub class_of: Vec<u32>,
    pub class_reps: Vec<usize>,
    pub class_members: Vec<Vec<usize>>,
    /// Sorted centralizer of each class representative.
    pub centralizers: Vec<Vec<usize>>,
    witness: Vec<u32>,
}

impl ConjData {
    pub fn new(g: &GroupTable) -> ConjData {
        let n = g.order();
        let mut class_of = vec![u32::MAX; n];
        let mut witness = vec![0u32; n];
        let mut class_reps = Vec::new();
        let mut class_members = Vec::new();
        for x in 0..n {
            if class_of[x] != u32::MAX {
                continue;
            }
            let c = class_reps.len() as u32;
            class_of[x] = c;
            witness[x] = 0;
            let mut members = vec![x];
            let mut head = 0;
            while head < members.len() {
                let z = members[head];
                for &s in g.generators() {
                    let z2 = g.conj(s, z);
                    if class_of[z2] == u32::MAX {
                        class_of[z2] = c;
                        witness[z2] = g.mul(s, witness[z] as usize) as u32;
                        members.push(z2);
                    }
                }
                head += 1;
            }
            members.sort_unstable();
            class_reps.push(x);
            class_members.push(members);
        }
        let centralizers = class_reps.iter().map(|&x| g.centralizer(x)).collect();
        ConjData { class_of, class_reps, class_members, centralizers, witness }
    }

    pub fn num_classes(&self) -> usize {
        self.class_reps.len()
    }

    pub fn class_size(&self, i: usize) -> usize {
        self.class_members[i].len()
    }

    /// `h` with `h * rep * h^-1 = x`, where `rep` is the representative of the
    /// class of `x`.
    pub fn witness(&self, x: usize) -> usize {
        self.witness[x] as usize
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x] as usize
    }
}

#[derive(Clone, Debug)]
struct LocalClasses {
    /// Sorted centralizer `C(x)` of the class representative `x`.
    elements: Vec<u32>,
    /// `C(x)`-conjugacy class of each element (local orbit index).
    label: Vec<u32>,
    /// `u in C(x)` with `u * y_rep * u^-1 = y`.
    witness: Vec<u32>,
    sizes: Vec<usize>,
}

/// Orbits of simultaneous conjugation on commuting pairs.
///
/// Orbits are grouped by the class of the first coordinate: the pairs with
/// first coordinate the class representative `x` are cut into `C(x)`-classes.
/// The representative of each orbit is its lexicographically minimal pair.
#[derive(Clone, Debug)]
pub struct PairClassData {
    pub pair_reps: Vec<(usize, usize)>,
    pub orbit_sizes: Vec<usize>,
    class_offset: Vec<usize>,
    local: Vec<LocalClasses>,
    conj: ConjData,
}

impl PairClassData {
    pub fn new(g: &GroupTable, conj: ConjData) -> PairClassData {
        let mut pair_reps = Vec::new();
        let mut orbit_sizes = Vec::new();
        let mut class_offset = Vec::new();
        let mut local = Vec::new();
        let n = g.order();
        let mut pos = vec![u32::MAX; n];
        for (ci, &x) in conj.class_reps.iter().enumerate() {
            let cent = &conj.centralizers[ci];
            for (i, &y) in cent.iter().enumerate() {
                pos[y] = i as u32;
            }
            let gens = centralizer_generators(g, cent, &mut pos);
            let m = cent.len();
            let mut label = vec![u32::MAX; m];
            let mut witness = vec![0u32; m];
            let mut sizes = Vec::new();
            class_offset.push(pair_reps.len());
            for start in 0..m {
                if label[start] != u32::MAX {
                    continue;
                }
                let id = sizes.len() as u32;
                label[start] = id;
                let mut orbit = vec![cent[start]];
                let mut head = 0;
                while head < orbit.len() {
                    let z = orbit[head];
                    let wz = witness[pos[z] as usize] as usize;
                    for &s in &gens {
                        let z2 = g.conj(s, z);
                        let p2 = pos[z2] as usize;
                        if label[p2] == u32::MAX {
                            label[p2] = id;
                            witness[p2] = g.mul(s, wz) as u32;
                            orbit.push(z2);
                        }
                    }
                    head += 1;
                }
                sizes.push(orbit.len());
                pair_reps.push((x, cent[start]));
                orbit_sizes.push(conj.class_size(ci) * orbit.len());
            }
            for &y in cent {
                pos[y] = u32::MAX;
            }
            local.push(LocalClasses {
                elements: cent.iter().map(|&y| y as u32).collect(),
                label,
                witness,
                sizes,
            });
        }
        PairClassData { pair_reps, orbit_sizes, class_offset, local, conj }
    }

    pub fn num_orbits(&self) -> usize {
        self.pair_reps.len()
    }

    pub fn conj(&self) -> &ConjData {
        &self.conj
    }

    /// Orbit indices belonging to conjugacy class `c` (first coordinate).
    pub fn orbits_of_class(&self, c: usize) -> std::ops::Range<usize> {
        let end = self.class_offset.get(c + 1).copied().unwrap_or(self.pair_reps.len());
        self.class_offset[c]..end
    }

    /// Orbit index of a commuting pair; `None` if `f` and `y` do not commute.
    pub fn orbit_of(&self, g: &GroupTable, f: usize, y: usize) -> Option<usize> {
        let c = self.conj.class_of(f);
        let w = self.conj.witness(f);
        let y2 = g.conj(g.inv(w), y);
        let loc = &self.local[c];
        let p = loc.elements.binary_search(&(y2 as u32)).ok()?;
        Some(self.class_offset[c] + loc.label[p] as usize)
    }

    /// `h` with `h f h^-1 = x` and `h y h^-1 = y'` for the orbit representative `(x, y')`.
    pub fn pair_witness(&self, g: &GroupTable, f: usize, y: usize) -> Option<usize> {
        let c = self.conj.class_of(f);
        let w = self.conj.witness(f);
        let winv = g.inv(w);
        let y2 = g.conj(winv, y);
        let loc = &self.local[c];
        let p = loc.elements.binary_search(&(y2 as u32)).ok()?;
        let u = loc.witness[p] as usize;
        Some(g.mul(g.inv(u), winv))
    }

    /// Whether `a` and `b`, both in the centralizer of the representative of
    /// class `c`, are conjugate under that centralizer.
    fn same_local_class(&self, c: usize, a: usize, b: usize) -> Option<bool> {
        let loc = &self.local[c];
        let pa = loc.elements.binary_search(&(a as u32)).ok()?;
        let pb = loc.elements.binary_search(&(b as u32)).ok()?;
        Some(loc.label[pa] == loc.label[pb])
    }

    /// Sizes of the local `C(x)`-classes of class `c`, in orbit order.
    pub fn local_class_sizes(&self, c: usize) -> &[usize] {
        &self.local[c].sizes
    }
}

/// Small generating set of a subgroup given by a sorted element list. `pos`
/// must map members to their position and everything else to `u32::MAX`.
fn centralizer_generators(g: &GroupTable, elems: &[usize], pos: &mut [u32]) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut member = vec![false; elems.len()];
    member[0] = true;
    let mut span = vec![0usize];
    for (i, &x) in elems.iter().enumerate() {
        if member[i] {
            continue;
        }
        gens.push(x);
        let mut head = 0;
        while head < span.len() {
            let a = span[head];
            for &s in &gens {
                let b = g.mul(a, s);
                let pb = pos[b] as usize;
                if !member[pb] {
                    member[pb] = true;
                    span.push(b);
                }
            }
            head += 1;
        }
    }
    gens
}

pub fn conjugacy(g: &GroupTable) -> ConjData {
    ConjData::new(g)
}

pub fn commuting_pair_classes(g: &GroupTable) -> PairClassData {
    PairClassData::new(g, ConjData::new(g))
}

/// A homomorphism between two tables, stored as its full image array.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupMap {
    domain_order: usize,
    codomain_order: usize,
    image: Vec<usize>,
}

impl GroupMap {
    /// Validates that `image` is multiplicative.
    pub fn new(domain: &GroupTable, codomain: &GroupTable, image: Vec<usize>) -> Result<GroupMap> {
        if image.len() != domain.order() {
            return Err(Error::NotHomomorphism("image array has wrong length".into()));
        }
        if let Some(&bad) = image.iter().find(|&&y| y >= codomain.order()) {
            return Err(Error::NotHomomorphism(format!("image {bad} out of range")));
        }
        let map = GroupMap {
            domain_order: domain.order(),
            codomain_order: codomain.order(),
            image,
        };
        map.check_multiplicative(domain, codomain)?;
        Ok(map)
    }

    /// Validated automorphism of `g`.
    pub fn automorphism(g: &GroupTable, image: Vec<usize>) -> Result<GroupMap> {
        let m = GroupMap::new(g, g, image)?;
        if !m.is_bijective() {
            return Err(Error::NotHomomorphism("map is not bijective".into()));
        }
        Ok(m)
    }

    pub fn identity(g: &GroupTable) -> GroupMap {
        GroupMap { domain_order: g.order(), codomain_order: g.order(), image: (0..g.order()).collect() }
    }

    /// Inner automorphism `x -> h x h^-1`.
    pub fn inner(g: &GroupTable, h: usize) -> GroupMap {
        let image = (0..g.order()).map(|x| g.conj(h, x)).collect();
        GroupMap { domain_order: g.order(), codomain_order: g.order(), image }
    }

    /// Extends images of the generators of `g` along their shortlex words
    /// and checks the result is a homomorphism.
    pub fn complete_hom(g: &GroupTable, h: &GroupTable, gen_images: &[usize]) -> Result<GroupMap> {
        if gen_images.len() != g.generators().len() {
            return Err(Error::NotHomomorphism(format!(
                "{} generator images given for {} generators",
                gen_images.len(),
                g.generators().len()
            )));
        }
        for (k, (&s, &t)) in g.generators().iter().zip(gen_images).enumerate() {
            if t >= h.order() {
                return Err(Error::NotHomomorphism(format!("image {t} out of range")));
            }
            let (os, ot) = (g.element_order(s), h.element_order(t));
            if os % ot != 0 {
                return Err(Error::NotHomomorphism(format!(
                    "generator {k} has order {os} but its image has order {ot}"
                )));
            }
        }
        let mut image = vec![0usize; g.order()];
        for x in g.bfs_order().skip(1) {
            let (p, k) = g.tree_parent(x).expect("non-identity has a parent");
            image[x] = h.mul(image[p], gen_images[k]);
        }
        let map = GroupMap { domain_order: g.order(), codomain_order: h.order(), image };
        map.check_multiplicative(g, h)?;
        Ok(map)
    }

    fn check_multiplicative(&self, g: &GroupTable, h: &GroupTable) -> Result<()> {
        let n = g.order();
        if self.image[0] != 0 {
            return Err(Error::NotHomomorphism("identity not mapped to identity".into()));
        }
        let fail = |x: usize, y: usize| {
            Error::NotHomomorphism(format!(
                "phi({}*{}) != phi({})*phi({})",
                g.label(x),
                g.label(y),
                g.label(x),
                g.label(y)
            ))
        };
        if n <= 1024 {
            for x in 0..n {
                for y in 0..n {
                    if self.image[g.mul(x, y)] != h.mul(self.image[x], self.image[y]) {
                        return Err(fail(x, y));
                    }
                }
            }
        } else {
            // phi(x s) = phi(x) phi(s) for all x and generators s is equivalent.
            for x in 0..n {
                for &s in g.generators() {
                    if self.image[g.mul(x, s)] != h.mul(self.image[x], self.image[s]) {
                        return Err(fail(x, s));
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn is_bijective(&self) -> bool {
        if self.domain_order != self.codomain_order {
            return false;
        }
        let mut seen = vec![false; self.codomain_order];
        self.image.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(x, &y)| x == y)
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &GroupMap) -> GroupMap {
        assert_eq!(other.codomain_order, self.domain_order);
        GroupMap {
            domain_order: other.domain_order,
            codomain_order: self.codomain_order,
            image: other.image.iter().map(|&y| self.image[y]).collect(),
        }
    }

    pub fn inverse(&self) -> Option<GroupMap> {
        if !self.is_bijective() {
            return None;
        }
        let mut image = vec![0; self.image.len()];
        for (x, &y) in self.image.iter().enumerate() {
            image[y] = x;
        }
        Some(GroupMap { domain_order: self.codomain_order, codomain_order: self.domain_order, image })
    }
}

/// `Some(h)` with `phi(x) = h x h^-1` for all `x`, if one exists.
pub fn is_inner(g: &GroupTable, phi: &GroupMap) -> Option<usize> {
    (0..g.order()).find(|&h| g.generators().iter().all(|&s| g.conj(h, s) == phi.apply(s)))
}

pub fn is_class_preserving(g: &GroupTable, conj: &ConjData, phi: &GroupMap) -> bool {
    let _ = g;
    conj.class_reps
        .iter()
        .enumerate()
        .all(|(c, &x)| conj.class_of(phi.apply(x)) == c)
}

/// Whether `phi` maps every commuting pair `(x, y)` to a simultaneous
/// conjugate `(h x h^-1, h y h^-1)`. Only orbit representatives are tested:
/// with `h0 x h0^-1 = phi(x)`, the admissible `h` form the coset `h0 C(x)`,
/// so the test reduces to `C(x)`-conjugacy of `y` and `h0^-1 phi(y) h0`.
pub fn is_doubly_class_preserving(g: &GroupTable, pairs: &PairClassData, phi: &GroupMap) -> bool {
    let conj = pairs.conj();
    for &(x, y) in &pairs.pair_reps {
        let c = conj.class_of(x);
        let fx = phi.apply(x);
        if conj.class_of(fx) != c {
            return false;
        }
        let h0 = conj.witness(fx);
        let target = g.conj(g.inv(h0), phi.apply(y));
        match pairs.same_local_class(c, y, target) {
            Some(true) => {}
            _ => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn perm_group(gens: &[Vec<usize>]) -> GroupTable {
        let deg = gens[0].len();
        let id: Vec<usize> = (0..deg).collect();
        let (g, _) = GroupTable::from_generators(
            gens,
            id,
            |a: &Vec<usize>, b: &Vec<usize>| (0..a.len()).map(|i| b[a[i]]).collect(),
            |p| format!("{p:?}"),
            ORDER_CAP,
        )
        .unwrap();
        g
    }

    fn cyclic(m: usize) -> GroupTable {
        let table = (0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect();
        GroupTable::from_table(table, None, None).unwrap()
    }

    fn s3() -> GroupTable {
        perm_group(&[vec![1, 0, 2], vec![1, 2, 0]])
    }

    #[test]
    fn cyclic_five_from_permutation() {
        let g = perm_group(&[vec![1, 2, 3, 4, 0]]);
        assert_eq!(g.order(), 5);
        assert!(g.is_abelian());
    }

    #[test]
    fn s3_closure_and_classes() {
        let g = s3();
        assert_eq!(g.order(), 6);
        let c = conjugacy(&g);
        let mut sizes: Vec<usize> = (0..c.num_classes()).map(|i| c.class_size(i)).collect();
        assert_eq!(sizes[0], 1);
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
        for i in 0..c.num_classes() {
            assert_eq!(c.class_size(i) * c.centralizers[i].len(), 6);
            for &m in &c.class_members[i] {
                assert_eq!(g.conj(c.witness(m), c.class_reps[i]), m);
            }
        }
    }

    #[test]
    fn identity_relocated_to_zero() {
        // Z/3 with identity stored at index 2.
        let t = vec![vec![1, 2, 0], vec![2, 0, 1], vec![0, 1, 2]];
        let g = GroupTable::from_table(t, Some(vec!["a".into(), "b".into(), "e".into()]), None).unwrap();
        assert_eq!(g.label(0), "e");
        assert_eq!(g.order(), 3);
    }

    #[test]
    fn rejects_non_associative() {
        // Latin square with identity that is not a group (order 5 loop).
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(GroupTable::from_table(t, None, None), Err(Error::InvalidGroup(_))));
    }

    #[test]
    fn generator_cap_enforced() {
        let gens = vec![vec![1, 2, 3, 4, 5, 0]];
        let r = GroupTable::from_generators(
            &gens,
            (0..6).collect::<Vec<usize>>(),
            |a: &Vec<usize>, b: &Vec<usize>| (0..a.len()).map(|i| b[a[i]]).collect(),
            |p| format!("{p:?}"),
            4,
        );
        assert!(matches!(r, Err(Error::Budget { .. })));
    }

    #[test]
    fn pair_orbits_small() {
        let z2 = cyclic(2);
        assert_eq!(commuting_pair_classes(&z2).num_orbits(), 4);
        let z5 = cyclic(5);
        assert_eq!(commuting_pair_classes(&z5).num_orbits(), 25);
        let g = s3();
        let p = commuting_pair_classes(&g);
        assert_eq!(p.num_orbits(), 8);
        assert_eq!(p.orbit_sizes.iter().sum::<usize>(), 18);
        // every commuting pair maps to an orbit whose rep is reached by the witness
        for f in 0..6 {
            for y in 0..6 {
                if g.commutes(f, y) {
                    let o = p.orbit_of(&g, f, y).unwrap();
                    let h = p.pair_witness(&g, f, y).unwrap();
                    assert_eq!((g.conj(h, f), g.conj(h, y)), p.pair_reps[o]);
                } else {
                    assert!(p.orbit_of(&g, f, y).is_none() || !g.commutes(f, y));
                }
            }
        }
    }

    #[test]
    fn s3_automorphisms() {
        let g = s3();
        let t = g.generators()[0];
        let r = g.generators()[1];
        // (12) -> (13), (123) -> (132)
        let t2 = g.conj(r, t);
        let r2 = g.inv(r);
        let phi = GroupMap::complete_hom(&g, &g, &[t2, r2]).unwrap();
        assert!(phi.is_bijective());
        assert!(is_inner(&g, &phi).is_some());
        assert!(matches!(
            GroupMap::complete_hom(&g, &g, &[r, r]),
            Err(Error::NotHomomorphism(_))
        ));
        let id = GroupMap::complete_hom(&g, &g, g.generators()).unwrap();
        assert!(id.is_identity());
        assert_eq!(is_inner(&g, &id), Some(0));
    }

    #[test]
    fn squaring_on_z3_is_not_class_preserving() {
        let g = cyclic(3);
        let phi = GroupMap::automorphism(&g, (0..3).map(|x| g.pow(x, 2)).collect()).unwrap();
        let conj = conjugacy(&g);
        assert!(!is_class_preserving(&g, &conj, &phi));
        let pairs = commuting_pair_classes(&g);
        assert!(!is_doubly_class_preserving(&g, &pairs, &phi));
        assert!(is_inner(&g, &phi).is_none());
    }

    #[test]
    fn lower_central_series_of_s3() {
        let g = s3();
        assert_eq!(g.derived_subgroup().len(), 3);
        assert_eq!(g.nilpotency_class(), None);
        let z = cyclic(4);
        assert_eq!(z.nilpotency_class(), Some(1));
    }
}
