//! Central extensions of `V = F_p^r` by `C = F_p^s` through a bilinear
//! cocycle `beta : V x V -> C`.
//!
//! Elements are pairs `(v, w)` with `(v, w)(v', w') = (v + v', w + w' + beta(v, v'))`,
//! encoded as `code(v) * p^s + code(w)` with base-`p` digit codes. Then
//! `[(v, 0), (v', 0)] = (0, beta(v, v') - beta(v', v))`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::presentation::{parse_presentation, Presentation};
use crate::error::{Error, Result};
use crate::group::{GroupTable, MulRule, ORDER_CAP};
use crate::linalg::kernel_of_rows;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BilinearExtSpec {
    pub p: u64,
    pub r: usize,
    pub s: usize,
    /// `beta[i][j]` is `beta(e_i, e_j)`, a vector of length `s`.
    pub beta: Vec<Vec<Vec<u64>>>,
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn digits(mut x: usize, p: usize, len: usize) -> Vec<usize> {
    (0..len)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn code(v: &[usize], p: usize) -> usize {
    v.iter().rev().fold(0, |acc, &d| acc * p + d)
}

pub fn bilinear_ext(spec: &BilinearExtSpec) -> Result<GroupTable> {
    let BilinearExtSpec { p, r, s, beta } = spec;
    let (p64, r, s) = (*p, *r, *s);
    if !is_prime(p64) {
        return Err(Error::Spec(format!("{p64} is not prime")));
    }
    if beta.len() != r || beta.iter().any(|row| row.len() != r || row.iter().any(|b| b.len() != s)) {
        return Err(Error::Spec(format!("beta must be {r}x{r} vectors of length {s}")));
    }
    let order = (p64 as u128).checked_pow((r + s) as u32).filter(|&o| o <= ORDER_CAP as u128);
    let Some(order) = order else {
        return Err(Error::Budget { what: "group order", limit: ORDER_CAP });
    };
    let order = order as usize;
    let p = p64 as usize;
    let pv = p.pow(r as u32);
    let pw = p.pow(s as u32);
    // beta(v, v') for all pairs of V, coded
    let mut btab = vec![0u32; pv * pv];
    let vs: Vec<Vec<usize>> = (0..pv).map(|c| digits(c, p, r)).collect();
    for a in 0..pv {
        for b in 0..pv {
            let mut w = vec![0usize; s];
            for i in 0..r {
                if vs[a][i] == 0 {
                    continue;
                }
                for j in 0..r {
                    let c = vs[a][i] * vs[b][j] % p;
                    if c == 0 {
                        continue;
                    }
                    for (k, wk) in w.iter_mut().enumerate() {
                        *wk = (*wk + c * (beta[i][j][k] as usize % p)) % p;
                    }
                }
            }
            btab[a * pv + b] = code(&w, p) as u32;
        }
    }
    let add = move |a: usize, b: usize, len: usize| -> usize {
        if p == 2 {
            return a ^ b;
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        for _ in 0..len {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    };
    let neg = move |a: usize, len: usize| -> usize {
        let (mut a, mut out, mut place) = (a, 0, 1);
        for _ in 0..len {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    };
    let btab = Arc::new(btab);
    let bt = btab.clone();
    let mul: MulRule = Arc::new(move |x, y| {
        let (v, w) = (x / pw, x % pw);
        let (v2, w2) = (y / pw, y % pw);
        let cw = add(add(w, w2, s), bt[v * pv + v2] as usize, s);
        add(v, v2, r) * pw + cw
    });
    // (v, w)^-1 = (-v, beta(v, v) - w)
    let inv: Vec<usize> = (0..order)
        .map(|x| {
            let (v, w) = (x / pw, x % pw);
            neg(v, r) * pw + add(btab[v * pv + v] as usize, neg(w, s), s)
        })
        .collect();
    let mut gens: Vec<usize> = (0..r).map(|i| p.pow(i as u32) * pw).collect();
    gens.extend((0..s).map(|j| p.pow(j as u32)));
    let labels = (0..order)
        .map(|x| {
            let v: Vec<String> = digits(x / pw, p, r).iter().map(|d| d.to_string()).collect();
            let w: Vec<String> = digits(x % pw, p, s).iter().map(|d| d.to_string()).collect();
            format!("({}|{})", v.join(","), w.join(","))
        })
        .collect();
    GroupTable::from_rule(order, mul, inv, gens, labels)
}

/// The two four-generator class-2 families realized as quotients of the
/// free class-2 group by commutator relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JmPattern {
    /// `[a,b] = [c,d]`, `[b,d] = [a,b]^eps [a,c]^omega`.
    First,
    /// `[a,b] = [c,d]`, `[a,c] = [a,d] = 1`.
    Second,
}

/// Pairs `(i, j)`, `i < j`, indexing the basis `e_i ^ e_j` of `L^2 V`.
fn wedge_basis(r: usize) -> Vec<(usize, usize)> {
    (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).collect()
}

fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    (2..p)
        .find(|&g| {
            let mut x = 1;
            let mut ord = 0;
            loop {
                x = x * g % p;
                ord += 1;
                if x == 1 {
                    break;
                }
            }
            ord == p - 1
        })
        .unwrap()
}

/// Relation vectors in `L^2 V` (coordinates over [`wedge_basis`]).
fn jm_relations(p: u64, pattern: JmPattern) -> Vec<Vec<u64>> {
    let basis = wedge_basis(4);
    let idx = |i: usize, j: usize| basis.iter().position(|&b| b == (i, j)).unwrap();
    let (a, b, c, d) = (0, 1, 2, 3);
    let mut rels = Vec::new();
    let mut v = vec![0u64; 6];
    v[idx(a, b)] = 1;
    v[idx(c, d)] = p - 1;
    rels.push(v);
    match pattern {
        JmPattern::First => {
            let eps = u64::from(p == 2);
            let omega = primitive_root(p);
            let mut v = vec![0u64; 6];
            v[idx(b, d)] = 1;
            v[idx(a, b)] = (p - eps) % p;
            v[idx(a, c)] = (p - omega % p) % p;
            rels.push(v);
        }
        JmPattern::Second => {
            let mut v = vec![0u64; 6];
            v[idx(a, c)] = 1;
            rels.push(v);
            let mut v = vec![0u64; 6];
            v[idx(a, d)] = 1;
            rels.push(v);
        }
    }
    rels
}

/// Spec whose commutator map is `L^2 V -> L^2 V / relations`, with `beta`
/// upper triangular and zero on the diagonal.
pub fn jm_spec(p: u64, pattern: JmPattern) -> Result<BilinearExtSpec> {
    if !is_prime(p) {
        return Err(Error::Spec(format!("{p} is not prime")));
    }
    let basis = wedge_basis(4);
    // functionals vanishing on the relations give coordinates on the quotient
    let functionals = kernel_of_rows(p, 6, jm_relations(p, pattern));
    let s = functionals.len();
    let mut beta = vec![vec![vec![0u64; s]; 4]; 4];
    for (k, &(i, j)) in basis.iter().enumerate() {
        beta[i][j] = functionals.iter().map(|u| u[k] % p).collect();
    }
    Ok(BilinearExtSpec { p, r: 4, s, beta })
}

/// Presentation text of the family (with `class(2)`).
pub fn jm_presentation_text(p: u64, pattern: JmPattern) -> String {
    let powers = format!("a^{p}, b^{p}, c^{p}, d^{p}");
    match pattern {
        JmPattern::First => {
            let eps = u64::from(p == 2);
            let omega = primitive_root(p);
            format!("a,b,c,d | {powers}, [a,b] = [c,d], [b,d] = [a,b]^{eps} [a,c]^{omega}, class(2)")
        }
        JmPattern::Second => format!("a,b,c,d | {powers}, [a,b] = [c,d], [a,c] = [a,d] = 1, class(2)"),
    }
}

/// Outcome of building one of the families.
#[derive(Clone, Debug, Serialize)]
pub struct JmReport {
    pub p: u64,
    pub pattern: JmPattern,
    pub stated_order: u64,
    pub computed_order: usize,
    pub order_matches_statement: bool,
    pub relations_hold: bool,
    pub nilpotency_class: Option<usize>,
    pub exponent: usize,
}

/// Builds the group and checks the presented relations on `a, b, c, d`.
pub fn jm_group(p: u64, pattern: JmPattern) -> Result<(GroupTable, JmReport)> {
    let spec = jm_spec(p, pattern)?;
    let g = bilinear_ext(&spec)?;
    let pres: Presentation = parse_presentation(&jm_presentation_text(p, pattern))?;
    let images: Vec<usize> = g.generators()[..4].to_vec();
    let relations_hold = pres.holds_in(&g, &images) && g.closure(&images).len() == g.order();
    let stated = p.pow(7);
    let report = JmReport {
        p,
        pattern,
        stated_order: stated,
        computed_order: g.order(),
        order_matches_statement: g.order() as u64 == stated,
        relations_hold,
        nilpotency_class: g.nilpotency_class(),
        exponent: g.exponent(),
    };
    Ok((g, report))
}
