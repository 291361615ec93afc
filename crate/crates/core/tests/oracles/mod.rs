//! Independent reference computations: brute-force enumeration of subgroups
//! of `(Z/n)^c`, the unreduced cocycle system, and characters of explicitly
//! constructed representations. Each check returns `Err` with a description
//! of the first disagreement.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::Rng;
use zg_core::characters::character_table;
use zg_core::cohomology::is_cocycle;
use zg_core::cyclotomic::Cyclotomic;
use zg_core::group::{conjugacy, ORDER_CAP};
use zg_core::linalg::{kernel_of_rows, smith_form, subquotient, HowellForm};
use zg_core::GroupTable;

pub type V = Vec<u64>;
pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        if !$cond {
            return Err(format!($($fmt)*));
        }
    };
}

pub const MODULI: [u64; 8] = [2, 4, 6, 8, 9, 12, 7, 10];

fn add(a: &[u64], b: &[u64], n: u64) -> V {
    a.iter().zip(b).map(|(x, y)| (x + y) % n).collect()
}

fn sub(a: &[u64], b: &[u64], n: u64) -> V {
    a.iter().zip(b).map(|(x, y)| (x + n - y) % n).collect()
}

fn scale(a: &[u64], c: u64, n: u64) -> V {
    a.iter().map(|x| x * c % n).collect()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Additive closure of the rows.
pub fn span(rows: &[V], n: u64, cols: usize) -> BTreeSet<V> {
    let mut seen = BTreeSet::from([vec![0; cols]]);
    let mut frontier = vec![vec![0; cols]];
    while let Some(v) = frontier.pop() {
        for r in rows {
            let w = add(&v, r, n);
            if seen.insert(w.clone()) {
                frontier.push(w);
            }
        }
    }
    seen
}

pub fn all_vectors(n: u64, cols: usize) -> Vec<V> {
    let mut out = vec![vec![]];
    for _ in 0..cols {
        out = out.into_iter().flat_map(|v| (0..n).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

/// Random rows over `Z/n`, biased towards zero divisors.
pub fn random_rows(rng: &mut StdRng, n: u64, cols: usize) -> Vec<V> {
    let k = rng.gen_range(0..=cols + 1);
    (0..k)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    if rng.gen_bool(0.3) {
                        0
                    } else {
                        let d = [1, 2, 3, 4, 6][rng.gen_range(0..5)];
                        d * rng.gen_range(0..n) % n
                    }
                })
                .collect()
        })
        .collect()
}

fn instance(rng: &mut StdRng, i: usize) -> (u64, usize, Vec<V>) {
    let n = MODULI[i % MODULI.len()];
    let cols = rng.gen_range(1..=3);
    let rows = random_rows(rng, n, cols);
    (n, cols, rows)
}

/// Span size, membership, expression and canonicity of the Howell form.
pub fn howell_instance(rng: &mut StdRng, i: usize) -> Check {
    let (n, cols, rows) = instance(rng, i);
    let h = HowellForm::new(n, cols, rows.clone(), true);
    let s = span(&rows, n, cols);
    ensure!(h.span_size() == s.len() as u128, "span size n={n} rows={rows:?}");
    for v in all_vectors(n, cols) {
        ensure!(h.contains(&v) == s.contains(&v), "membership of {v:?} n={n} rows={rows:?}");
        if let Some(c) = h.express(&v) {
            let acc = c.iter().zip(&rows).fold(vec![0; cols], |acc, (ci, r)| add(&acc, &scale(r, *ci, n), n));
            ensure!(acc == v, "expression of {v:?} n={n} rows={rows:?}");
        }
    }
    let mut other: Vec<V> = s.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
    other.extend(rows.iter().cloned());
    other.reverse();
    ensure!(HowellForm::new(n, cols, other, false).rows() == h.rows(), "form not canonical n={n} rows={rows:?}");
    Ok(())
}

fn mat_mul(a: &[V], b: &[V], n: u64) -> Vec<V> {
    a.iter()
        .map(|r| (0..b[0].len()).map(|j| r.iter().zip(b).map(|(x, bj)| x * bj[j] % n).sum::<u64>() % n).collect())
        .collect()
}

/// Smith diagonal against the torsion counts of the enumerated span.
pub fn smith_instance(rng: &mut StdRng, i: usize) -> Check {
    let (n, cols, rows) = instance(rng, i);
    let sf = smith_form(n, cols, &rows);
    let id: Vec<V> = (0..cols).map(|i| (0..cols).map(|j| u64::from(i == j)).collect()).collect();
    ensure!(mat_mul(&sf.v, &sf.v_inv, n) == id, "V V^-1 != I n={n} rows={rows:?}");
    // the row span is the sum of Z/(n / gcd(d, n))
    let orders: Vec<u64> = sf.diag.iter().map(|&d| n / gcd(d % n, n)).collect();
    let s = span(&rows, n, cols);
    for k in (1..=n).filter(|k| n % k == 0) {
        let killed = s.iter().filter(|v| v.iter().all(|x| x * k % n == 0)).count() as u64;
        let predicted: u64 = orders.iter().map(|&o| gcd(k, o)).product();
        ensure!(killed == predicted, "{k}-torsion n={n} rows={rows:?} diag={:?}", sf.diag);
    }
    Ok(())
}

pub fn kernel_instance(rng: &mut StdRng, i: usize) -> Check {
    let (n, cols, rows) = instance(rng, i);
    let ker = kernel_of_rows(n, cols, rows.clone());
    let brute: BTreeSet<V> = all_vectors(n, cols)
        .into_iter()
        .filter(|x| rows.iter().all(|r| r.iter().zip(x).map(|(a, b)| a * b).sum::<u64>() % n == 0))
        .collect();
    ensure!(span(&ker, n, cols) == brute, "kernel n={n} rows={rows:?}");
    Ok(())
}

pub fn subquotient_instance(rng: &mut StdRng, i: usize) -> Check {
    let (n, cols, z) = instance(rng, i);
    let b: Vec<V> = (0..rng.gen_range(0..3))
        .map(|_| z.iter().fold(vec![0; cols], |acc, r| add(&acc, &scale(r, rng.gen_range(0..n), n), n)))
        .collect();
    let q = subquotient(&z, &b, n, cols).map_err(|e| e.to_string())?;
    let zs = span(&z, n, cols);
    let bs = span(&b, n, cols);
    ensure!(q.order() == (zs.len() / bs.len()) as u128, "order n={n} z={z:?} b={b:?}");
    let elems: Vec<&V> = zs.iter().collect();
    for _ in 0..20 {
        let x = elems[rng.gen_range(0..elems.len())];
        let y = elems[rng.gen_range(0..elems.len())];
        ensure!((q.project(x) == q.project(y)) == bs.contains(&sub(x, y, n)), "projection n={n} z={z:?} b={b:?}");
        let back = q.element(&q.project(x).unwrap());
        ensure!(bs.contains(&sub(x, &back, n)), "lift n={n} z={z:?} b={b:?}");
    }
    if let Some(v) = all_vectors(n, cols).into_iter().find(|v| !zs.contains(v)) {
        ensure!(q.project(&v).is_none(), "projection outside Z n={n} z={z:?}");
    }
    Ok(())
}

/// Every normalized entry a variable, one equation per triple; returns
/// cocycle generators and coboundary generators.
pub fn full_cocycle_system(g: &GroupTable, n: u64) -> (Vec<V>, Vec<V>) {
    let m = g.order() - 1;
    let idx = |a: usize, b: usize| (a - 1) * m + (b - 1);
    let mut eqs = Vec::new();
    for f in 1..=m {
        for x in 1..=m {
            for y in 1..=m {
                // gamma(x,y) - gamma(fx,y) + gamma(f,xy) - gamma(f,x) = 0
                let mut row = vec![0u64; m * m];
                let mut put = |a: usize, b: usize, s: u64| {
                    if a != 0 && b != 0 {
                        row[idx(a, b)] = (row[idx(a, b)] + s) % n;
                    }
                };
                put(x, y, 1);
                put(g.mul(f, x), y, n - 1);
                put(f, g.mul(x, y), 1);
                put(f, x, n - 1);
                eqs.push(row);
            }
        }
    }
    let z = kernel_of_rows(n, m * m, eqs);
    let b = (1..=m)
        .map(|c| {
            let mut v = vec![0u64; m * m];
            for a in 1..=m {
                for b in 1..=m {
                    v[idx(a, b)] = (u64::from(a == c) + u64::from(b == c) + if g.mul(a, b) == c { n - 1 } else { 0 }) % n;
                }
            }
            v
        })
        .collect();
    (z, b)
}

pub fn dense_h2(g: &GroupTable, n: u64) -> Vec<u64> {
    let (z, b) = full_cocycle_system(g, n);
    subquotient(&z, &b, n, (g.order() - 1).pow(2)).unwrap().factors
}

/// All homomorphisms to `Z/n`, by trying every assignment on the generators.
pub fn homs_to_cyclic(g: &GroupTable, n: u64) -> Vec<V> {
    let gens = g.generators();
    let mut out = Vec::new();
    for code in 0..n.pow(gens.len() as u32) {
        let mut c = code;
        let imgs: Vec<u64> = gens.iter().map(|_| {
            let d = c % n;
            c /= n;
            d
        }).collect();
        let mut chi = vec![None; g.order()];
        chi[0] = Some(0u64);
        let mut stack = vec![0usize];
        while let Some(x) = stack.pop() {
            for (k, &s) in gens.iter().enumerate() {
                let y = g.mul(x, s);
                if chi[y].is_none() {
                    chi[y] = Some((chi[x].unwrap() + imgs[k]) % n);
                    stack.push(y);
                }
            }
        }
        let chi: Vec<u64> = chi.into_iter().map(Option::unwrap).collect();
        if (0..g.order()).all(|x| (0..g.order()).all(|y| chi[g.mul(x, y)] == (chi[x] + chi[y]) % n)) {
            out.push(chi);
        }
    }
    out
}

/// Schur multiplier from the unreduced system, with Bockstein classes
/// `(f, g) -> floor((chi f + chi g) / n)` of all homomorphisms.
pub fn dense_schur(g: &GroupTable, n: u64) -> Vec<u64> {
    let (z, mut b) = full_cocycle_system(g, n);
    let m = g.order() - 1;
    for chi in homs_to_cyclic(g, n) {
        let v: V = (0..m * m).map(|k| (chi[k / m + 1] + chi[k % m + 1]) / n).collect();
        b.push(v);
    }
    subquotient(&z, &b, n, m * m).unwrap().factors
}

/// Cocycle counts by enumerating every normalized cochain.
pub fn brute_h2_order(g: &GroupTable, n: u64) -> u128 {
    let m = g.order() - 1;
    let cocycles = all_vectors(n, m * m)
        .into_iter()
        .filter(|v| is_cocycle(g, &zg_core::cohomology::Cochain2::from_fn(g.order(), n, |a, b| v[(a - 1) * m + (b - 1)])))
        .count();
    let coboundaries: BTreeSet<V> = all_vectors(n, m)
        .into_iter()
        .map(|c| {
            let cc = |x: usize| if x == 0 { 0 } else { c[x - 1] };
            (0..m * m).map(|k| (cc(k / m + 1) + cc(k % m + 1) + n - cc(g.mul(k / m + 1, k % m + 1))) % n).collect()
        })
        .collect();
    (cocycles / coboundaries.len()) as u128
}

fn sorted(mut rows: Vec<Vec<Cyclotomic>>) -> Vec<Vec<Cyclotomic>> {
    rows.sort();
    rows
}

/// The character table of `g` equals the given characters up to row order.
pub fn table_matches(g: &GroupTable, chars: &[Box<dyn Fn(usize) -> Cyclotomic>]) -> Check {
    let conj = conjugacy(g);
    let t = character_table(g, &conj).map_err(|e| e.to_string())?;
    t.verify().map_err(|e| e.to_string())?;
    let oracle = sorted(chars.iter().map(|chi| conj.class_reps.iter().map(|&x| chi(x)).collect()).collect());
    ensure!(sorted(t.rows) == oracle, "character table disagrees with explicit characters (order {})", g.order());
    Ok(())
}

fn perm_closure(gens: &[Vec<usize>]) -> (GroupTable, Vec<Vec<usize>>) {
    GroupTable::from_generators(
        gens,
        (0..gens[0].len()).collect::<Vec<_>>(),
        |a: &Vec<usize>, b: &Vec<usize>| a.iter().map(|&i| b[i]).collect(),
        |p| format!("{p:?}"),
        ORDER_CAP,
    )
    .unwrap()
}

/// `Z/m` as the rotation group of `m` points; characters `x^j -> zeta^(jk)`.
pub fn cyclic_characters(m: usize) -> Check {
    let (g, elems) = perm_closure(&[(0..m).map(|i| (i + 1) % m).collect()]);
    let power: Vec<i64> = elems.iter().map(|p| p[0] as i64).collect();
    let chars: Vec<Box<dyn Fn(usize) -> Cyclotomic>> = (0..m as i64)
        .map(|k| {
            let power = power.clone();
            Box::new(move |x: usize| Cyclotomic::root(m as u32, k * power[x])) as Box<dyn Fn(usize) -> Cyclotomic>
        })
        .collect();
    table_matches(&g, &chars)
}

/// Trivial, sign and (permutation - trivial) on `S_3`.
pub fn s3_characters() -> Check {
    let (g, elems) = perm_closure(&[vec![1, 0, 2], vec![1, 2, 0]]);
    let sign = |p: &[usize]| {
        let inv = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        if inv % 2 == 0 { 1 } else { -1 }
    };
    let (e1, e2) = (elems.clone(), elems);
    let chars: Vec<Box<dyn Fn(usize) -> Cyclotomic>> = vec![
        Box::new(|_| Cyclotomic::one()),
        Box::new(move |x| Cyclotomic::integer(sign(&e1[x]))),
        Box::new(move |x| Cyclotomic::integer((0..3).filter(|&i| e2[x][i] == i).count() as i64 - 1)),
    ];
    table_matches(&g, &chars)
}

type M2 = [[Cyclotomic; 2]; 2];

fn m2_mul(a: &M2, b: &M2) -> M2 {
    let e = |i: usize, j: usize| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// `Q_8` given by generators `i, j`: four sign characters and the trace of
/// `i -> diag(i, -i)`, `j -> [[0, -1], [1, 0]]`.
pub fn q8_characters(g: &GroupTable) -> Check {
    let (z, int) = (Cyclotomic::zero, Cyclotomic::integer);
    let iota = Cyclotomic::root(4, 1);
    let gens: [M2; 2] = [[[iota.clone(), z()], [z(), -iota]], [[z(), int(-1)], [int(1), z()]]];
    let rho: Vec<M2> = (0..g.order()).map(|x| g.word(x).iter().fold([[int(1), z()], [z(), int(1)]], |acc, &k| m2_mul(&acc, &gens[k]))).collect();
    for x in 0..g.order() {
        for y in 0..g.order() {
            ensure!(rho[g.mul(x, y)] == m2_mul(&rho[x], &rho[y]), "matrices do not form a representation");
        }
    }
    let letters: Vec<[i64; 2]> = (0..g.order())
        .map(|x| {
            let w = g.word(x);
            [w.iter().filter(|&&k| k == 0).count() as i64, w.iter().filter(|&&k| k == 1).count() as i64]
        })
        .collect();
    let mut chars: Vec<Box<dyn Fn(usize) -> Cyclotomic>> = Vec::new();
    for (a, b) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
        let l = letters.clone();
        chars.push(Box::new(move |x| int(if (a * l[x][0] + b * l[x][1]) % 2 == 0 { 1 } else { -1 })));
    }
    chars.push(Box::new(move |x| &rho[x][0][0] + &rho[x][1][1]));
    table_matches(g, &chars)
}
