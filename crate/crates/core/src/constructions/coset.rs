//! Todd–Coxeter coset enumeration over the trivial subgroup (HLT strategy
//! with a lookahead pass when the coset budget is reached).

use crate::constructions::presentation::Presentation;
use crate::error::{Error, Result};
use crate::group::{GroupTable, DENSE_LIMIT};

pub const DEFAULT_COSET_BUDGET: usize = 1_000_000;

const NONE: u32 = u32::MAX;

struct CosetTable {
    cols: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    live: usize,
    budget: usize,
    queue: Vec<u32>,
}

/// Raised inside `define` when the table is full.
struct Full;

impl CosetTable {
    fn new(ngens: usize, budget: usize) -> CosetTable {
        let cols = 2 * ngens;
        CosetTable { cols, table: vec![NONE; cols], parent: vec![0], live: 1, budget, queue: Vec::new() }
    }

    fn len(&self) -> usize {
        self.parent.len()
    }

    #[inline]
    fn get(&self, c: usize, x: usize) -> u32 {
        self.table[c * self.cols + x]
    }

    #[inline]
    fn set(&mut self, c: usize, x: usize, d: u32) {
        self.table[c * self.cols + x] = d;
    }

    #[inline]
    fn is_live(&self, c: usize) -> bool {
        self.parent[c] as usize == c
    }

    fn define(&mut self, c: usize, x: usize) -> std::result::Result<(), Full> {
        if self.len() >= self.budget {
            return Err(Full);
        }
        let d = self.len() as u32;
        self.parent.push(d);
        self.table.extend(std::iter::repeat(NONE).take(self.cols));
        self.live += 1;
        self.set(c, x, d);
        self.set(d as usize, x ^ 1, c as u32);
        Ok(())
    }

    fn rep(&mut self, k: usize) -> usize {
        let mut r = k;
        while self.parent[r] as usize != r {
            r = self.parent[r] as usize;
        }
        let mut k = k;
        while self.parent[k] as usize != r {
            let next = self.parent[k] as usize;
            self.parent[k] = r as u32;
            k = next;
        }
        r
    }

    fn merge(&mut self, k: usize, l: usize) {
        let (a, b) = (self.rep(k), self.rep(l));
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.parent[hi] = lo as u32;
        self.queue.push(hi as u32);
        self.live -= 1;
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let g = self.queue[i] as usize;
            i += 1;
            for x in 0..self.cols {
                let d = self.get(g, x);
                if d == NONE {
                    continue;
                }
                let d = d as usize;
                self.set(d, x ^ 1, NONE);
                let mu = self.rep(g);
                let nu = self.rep(d);
                let mx = self.get(mu, x);
                if mx != NONE {
                    self.merge(nu, mx as usize);
                } else {
                    let nx = self.get(nu, x ^ 1);
                    if nx != NONE {
                        self.merge(mu, nx as usize);
                    } else {
                        self.set(mu, x, nu as u32);
                        self.set(nu, x ^ 1, mu as u32);
                    }
                }
            }
        }
    }

    /// Traces `rel` from `a` forwards and backwards; defines new cosets to
    /// close a gap when `fill` is set, otherwise only deduces.
    fn scan(&mut self, a: usize, rel: &[usize], fill: bool) -> std::result::Result<(), Full> {
        let mut f = a;
        let mut b = a;
        let mut i: isize = 0;
        let mut j: isize = rel.len() as isize - 1;
        loop {
            while i <= j {
                let nx = self.get(f, rel[i as usize]);
                if nx == NONE {
                    break;
                }
                f = nx as usize;
                i += 1;
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i {
                let nx = self.get(b, rel[j as usize] ^ 1);
                if nx == NONE {
                    break;
                }
                b = nx as usize;
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            } else if i == j {
                let x = rel[i as usize];
                self.set(f, x, b as u32);
                self.set(b, x ^ 1, f as u32);
                return Ok(());
            } else if fill {
                self.define(f, rel[i as usize])?;
            } else {
                return Ok(());
            }
        }
    }

    fn lookahead(&mut self, rels: &[Vec<usize>]) {
        let mut c = 0;
        while c < self.len() {
            for r in rels {
                if !self.is_live(c) {
                    break;
                }
                // fill = false never defines
                let _ = self.scan(c, r, false);
            }
            c += 1;
        }
    }

    /// Removes dead cosets, renumbering live ones in order. Returns the map
    /// from old to new indices (`NONE` for dead cosets).
    fn compact(&mut self) -> Vec<u32> {
        let n = self.len();
        let mut map = vec![NONE; n];
        let mut next = 0u32;
        for c in 0..n {
            if self.is_live(c) {
                map[c] = next;
                next += 1;
            }
        }
        let mut table = Vec::with_capacity(next as usize * self.cols);
        for c in 0..n {
            if map[c] == NONE {
                continue;
            }
            for x in 0..self.cols {
                let d = self.get(c, x);
                table.push(if d == NONE { NONE } else { map[self.rep(d as usize)] });
            }
        }
        self.table = table;
        self.parent = (0..next).collect();
        self.live = next as usize;
        map
    }
}

pub fn todd_coxeter(pres: &Presentation) -> Result<GroupTable> {
    todd_coxeter_with_budget(pres, DEFAULT_COSET_BUDGET)
}

/// Enumerates the cosets of the trivial subgroup. `budget` bounds the number
/// of cosets held in the table at any time.
pub fn todd_coxeter_with_budget(pres: &Presentation, budget: usize) -> Result<GroupTable> {
    let ngens = pres.generators.len();
    if ngens == 0 {
        return Err(Error::Math("presentation has no generators".into()));
    }
    let col = |l: i32| 2 * (l.unsigned_abs() as usize - 1) + usize::from(l < 0);
    let rels: Vec<Vec<usize>> = pres
        .relators
        .iter()
        .filter(|r| !r.is_empty())
        .map(|r| r.0.iter().map(|&l| col(l)).collect())
        .collect();
    let mut ct = CosetTable::new(ngens, budget.max(2));
    let mut a = 0usize;
    'outer: while a < ct.len() {
        if ct.is_live(a) {
            let step = (|| -> std::result::Result<(), Full> {
                for r in &rels {
                    if !ct.is_live(a) {
                        return Ok(());
                    }
                    ct.scan(a, r, true)?;
                }
                for x in 0..ct.cols {
                    if ct.is_live(a) && ct.get(a, x) == NONE {
                        ct.define(a, x)?;
                    }
                }
                Ok(())
            })();
            if step.is_err() {
                let before = ct.len();
                ct.lookahead(&rels);
                let map = ct.compact();
                if ct.len() >= before || ct.len() >= ct.budget {
                    return Err(Error::Budget { what: "coset", limit: budget });
                }
                // resume at the first live coset not before `a`
                a = (a..map.len()).find(|&c| map[c] != NONE).map_or(ct.len(), |c| map[c] as usize);
                continue 'outer;
            }
        }
        a += 1;
    }
    ct.compact();
    let n = ct.len();
    if n > DENSE_LIMIT {
        return Err(Error::Budget { what: "enumerated group order", limit: DENSE_LIMIT });
    }
    // Renumber breadth-first along positive generators (shortlex order).
    let mut order = vec![0usize];
    let mut newidx = vec![usize::MAX; n];
    newidx[0] = 0;
    let mut head = 0;
    while head < order.len() {
        let c = order[head];
        for g in 0..ngens {
            let d = ct.get(c, 2 * g) as usize;
            if newidx[d] == usize::MAX {
                newidx[d] = order.len();
                order.push(d);
            }
        }
        head += 1;
    }
    debug_assert_eq!(order.len(), n);
    let act = |c: usize, g: usize| newidx[ct.get(order[c], 2 * g) as usize];
    // tree for shortlex words (new indices)
    let mut tree = vec![(0usize, usize::MAX); n];
    let mut seen = vec![false; n];
    seen[0] = true;
    for c in 0..n {
        for g in 0..ngens {
            let d = act(c, g);
            if !seen[d] {
                seen[d] = true;
                tree[d] = (c, g);
            }
        }
    }
    let single = pres.generators.iter().all(|s| s.chars().count() == 1);
    let mut labels = vec![String::from("1"); n];
    for c in 1..n {
        let (p, g) = tree[c];
        let name = &pres.generators[g];
        labels[c] = if p == 0 {
            name.clone()
        } else if single {
            format!("{}{}", labels[p], name)
        } else {
            format!("{}*{}", labels[p], name)
        };
    }
    // mult[a][b]: trace the word of b from coset a
    let mut table = vec![vec![0usize; n]; n];
    for (x, row) in table.iter_mut().enumerate() {
        row[0] = x;
    }
    for b in 1..n {
        let (p, g) = tree[b];
        for x in 0..n {
            table[x][b] = act(table[x][p], g);
        }
    }
    let gens: Vec<usize> = (0..ngens).map(|g| act(0, g)).collect();
    GroupTable::from_table(table, Some(labels), Some(gens))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::presentation::parse_presentation;

    #[test]
    fn cyclic_five() {
        let g = todd_coxeter(&parse_presentation("a | a^5").unwrap()).unwrap();
        assert_eq!(g.order(), 5);
        assert_eq!(g.label(1), "a");
    }

    #[test]
    fn s3_by_presentation() {
        let g = todd_coxeter(&parse_presentation("a,b | a^2, b^2, (a b)^3").unwrap()).unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
    }

    #[test]
    fn quaternion_and_dihedral() {
        let q8 = todd_coxeter(&parse_presentation("i,j | i^4, i^2 = j^2, j^-1 i j = i^-1").unwrap()).unwrap();
        assert_eq!(q8.order(), 8);
        let d4 = todd_coxeter(&parse_presentation("r,s | r^4, s^2, (s r)^2").unwrap()).unwrap();
        assert_eq!(d4.order(), 8);
        let a5 = todd_coxeter(&parse_presentation("a,b | a^2, b^3, (a b)^5").unwrap()).unwrap();
        assert_eq!(a5.order(), 60);
    }

    #[test]
    fn trivial_and_collapsing() {
        let g = todd_coxeter(&parse_presentation("a,b | a, b").unwrap()).unwrap();
        assert_eq!(g.order(), 1);
        let h = todd_coxeter(&parse_presentation("a,b | a^3, b^3, a b a^-1 b^-1, a = b").unwrap()).unwrap();
        assert_eq!(h.order(), 3);
    }

    #[test]
    fn budget_exceeded_for_infinite() {
        let p = parse_presentation("a,b | [a,b]").unwrap();
        assert!(matches!(todd_coxeter_with_budget(&p, 5000), Err(Error::Budget { .. })));
    }
}
