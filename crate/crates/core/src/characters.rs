//! Irreducible character tables by Dixon's modular method.
//!
//! Central characters `omega(C_i) = |C_i| chi(g_i) / chi(1)` are common
//! eigenvectors of the class-multiplication matrices. These are split
//! modulo a prime `p = 1 mod exp(G)`, `p > 2 sqrt|G|`, then each value
//! `chi(g)` is recovered as `sum_k m_k zeta^k` from the eigenvalue
//! multiplicities `m_k`, which are read off the power maps.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cyclotomic::{Cyclotomic, CyclotomicJson};
use crate::error::{Error, Result};
use crate::group::{ConjData, GroupTable, DENSE_LIMIT};

#[derive(Clone, Debug)]
pub struct CharTable {
    pub order: usize,
    pub exponent: u32,
    pub class_sizes: Vec<usize>,
    /// Class of the inverse of each class representative.
    pub inverse_class: Vec<usize>,
    pub degrees: Vec<u64>,
    /// `rows[i][j]` is `chi_i` at the representative of class `j`.
    pub rows: Vec<Vec<Cyclotomic>>,
}

impl CharTable {
    pub fn num_classes(&self) -> usize {
        self.class_sizes.len()
    }

    /// `(1/N) sum_j |C_j| a_j conj(b_j)`.
    pub fn inner_product(&self, a: &[Cyclotomic], b: &[Cyclotomic]) -> Result<Cyclotomic> {
        inner_product(self.order, &self.class_sizes, a, b)
    }

    /// Exact check of row orthogonality and the degree equation.
    pub fn verify(&self) -> Result<()> {
        let k = self.num_classes();
        if self.rows.len() != k {
            return Err(Error::Math(format!("{} characters for {k} classes", self.rows.len())));
        }
        let sq: u64 = self.degrees.iter().map(|d| d * d).sum();
        if sq != self.order as u64 {
            return Err(Error::Math("sum of squared degrees differs from the order".into()));
        }
        for i in 0..k {
            if self.order as u64 % self.degrees[i] != 0 {
                return Err(Error::Math("a degree does not divide the order".into()));
            }
            for j in 0..k {
                let ip = self.inner_product(&self.rows[i], &self.rows[j])?;
                let want = Cyclotomic::integer(i64::from(i == j));
                if ip != want {
                    return Err(Error::Math(format!("rows {i} and {j} are not orthonormal")));
                }
            }
        }
        Ok(())
    }

    /// Column orthogonality: `sum_chi chi(g_i) conj(chi(g_j)) = delta_ij |C(g_i)|`.
    pub fn verify_columns(&self) -> Result<()> {
        let k = self.num_classes();
        for i in 0..k {
            for j in 0..k {
                let s: Cyclotomic = self.rows.iter().map(|r| &r[i] * &r[j].conj()).sum();
                let want = if i == j { (self.order / self.class_sizes[i]) as i64 } else { 0 };
                if s != Cyclotomic::integer(want) {
                    return Err(Error::Math(format!("columns {i} and {j} fail orthogonality")));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> CharTableJson {
        CharTableJson {
            order: self.order,
            class_sizes: self.class_sizes.clone(),
            degrees: self.degrees.clone(),
            rows: self.rows.iter().map(|r| r.iter().map(Cyclotomic::to_json).collect()).collect(),
        }
    }
}

#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct CharTableJson {
    pub order: usize,
    pub class_sizes: Vec<usize>,
    pub degrees: Vec<u64>,
    pub rows: Vec<Vec<CyclotomicJson>>,
}

/// Hermitian pairing of class functions given by their class values.
pub fn inner_product(order: usize, class_sizes: &[usize], a: &[Cyclotomic], b: &[Cyclotomic]) -> Result<Cyclotomic> {
    if a.len() != class_sizes.len() || b.len() != class_sizes.len() {
        return Err(Error::Math("class functions of different groups".into()));
    }
    let mut s = Cyclotomic::zero();
    for ((x, y), &c) in a.iter().zip(b).zip(class_sizes) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        s = &s + &(&(x * &y.conj()) * &Cyclotomic::integer(c as i64));
    }
    Ok(s.scale(&BigRational::new(BigInt::one(), BigInt::from(order))))
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn primitive_root(p: u64) -> u64 {
    let mut fs = Vec::new();
    let mut m = p - 1;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            fs.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        fs.push(m);
    }
    (2..p).find(|&g| fs.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1)).unwrap_or(1)
}

/// Smallest prime `p = 1 mod e` with `p > 2 sqrt(n)`.
fn dixon_prime(e: u64, n: u64) -> Result<u64> {
    let mut p = e + 1;
    while (p as f64) <= 2.0 * (n as f64).sqrt() || !is_prime(p) {
        p += e;
        if p >= 1 << 31 {
            return Err(Error::Math("no suitable prime below 2^31".into()));
        }
    }
    Ok(p)
}

/// Characteristic polynomial over `F_p` via Hessenberg reduction, lowest
/// degree first.
fn char_poly(m: &[Vec<u64>], p: u64) -> Vec<u64> {
    let n = m.len();
    let mut h: Vec<Vec<u64>> = m.to_vec();
    for c in 1..n.saturating_sub(1) {
        let Some(i) = (c..n).find(|&i| h[i][c - 1] != 0) else { continue };
        if i != c {
            h.swap(i, c);
            for row in h.iter_mut() {
                row.swap(i, c);
            }
        }
        let t = inv_mod(h[c][c - 1], p);
        for i in c + 1..n {
            let u = h[i][c - 1] * t % p;
            if u == 0 {
                continue;
            }
            for j in 0..n {
                h[i][j] = (h[i][j] + p - u * h[c][j] % p) % p;
            }
            for row in h.iter_mut() {
                row[c] = (row[c] + u * row[i]) % p;
            }
        }
    }
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for k in 1..=n {
        // (x - h[k-1][k-1]) * P_{k-1}
        let prev = &polys[k - 1];
        let mut q = vec![0u64; k + 1];
        for (i, &c) in prev.iter().enumerate() {
            q[i + 1] = (q[i + 1] + c) % p;
            q[i] = (q[i] + p - c * h[k - 1][k - 1] % p) % p;
        }
        let mut t = 1u64;
        for i in 1..k {
            t = t * h[k - i][k - i - 1] % p;
            let coef = t * h[k - i - 1][k - 1] % p;
            if coef != 0 {
                for (j, &c) in polys[k - i - 1].iter().enumerate() {
                    q[j] = (q[j] + p - coef * c % p) % p;
                }
            }
        }
        polys.push(q);
    }
    polys.pop().unwrap()
}

/// Null space of an `r x c` matrix over `F_p`, as row vectors.
fn nullspace(a: &[Vec<u64>], c: usize, p: u64) -> Vec<Vec<u64>> {
    let mut m: Vec<Vec<u64>> = a.to_vec();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..c {
        let Some(piv) = (row..m.len()).find(|&i| m[i][col] != 0) else { continue };
        m.swap(row, piv);
        let inv = inv_mod(m[row][col], p);
        for x in m[row].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..m.len() {
            if i != row && m[i][col] != 0 {
                let f = m[i][col];
                let (r, s) = if i < row {
                    let (lo, hi) = m.split_at_mut(row);
                    (&mut lo[i], &hi[0])
                } else {
                    let (lo, hi) = m.split_at_mut(i);
                    (&mut hi[0], &lo[row])
                };
                for (x, &y) in r.iter_mut().zip(s.iter()) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..c).filter(|j| !pivots.contains(j)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; c];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - m[r][fc]) % p;
            }
            v
        })
        .collect()
}

/// Reduced row echelon basis of the span of `vs`, with pivot columns.
fn echelon(vs: Vec<Vec<u64>>, p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let c = vs.first().map_or(0, |v| v.len());
    let mut m = vs;
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..c {
        let Some(piv) = (row..m.len()).find(|&i| m[i][col] != 0) else { continue };
        m.swap(row, piv);
        let inv = inv_mod(m[row][col], p);
        for x in m[row].iter_mut() {
            *x = *x * inv % p;
        }
        let pr = m[row].clone();
        for (i, r) in m.iter_mut().enumerate() {
            if i != row && r[col] != 0 {
                let f = r[col];
                for (x, &y) in r.iter_mut().zip(&pr) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    m.truncate(row);
    (m, pivots)
}

/// Complete irreducible character table. Rows: the trivial character first,
/// then by degree, then by values in a fixed lexicographic order.
pub fn character_table(g: &GroupTable, conj: &ConjData) -> Result<CharTable> {
    let n = g.order();
    if n > DENSE_LIMIT {
        return Err(Error::Budget { what: "character table order", limit: DENSE_LIMIT });
    }
    let k = conj.num_classes();
    let exponent = g.exponent() as u64;
    let p = dixon_prime(exponent, n as u64)?;
    let class_sizes: Vec<usize> = (0..k).map(|c| conj.class_size(c)).collect();
    let inverse_class: Vec<usize> = conj.class_reps.iter().map(|&x| conj.class_of(g.inv(x))).collect();

    // a[i][j][l] = #{ x in C_i : x^-1 z_l in C_j }
    let mut a = vec![vec![vec![0u64; k]; k]; k];
    for (l, &zl) in conj.class_reps.iter().enumerate() {
        for x in 0..n {
            let i = conj.class_of(x);
            let j = conj.class_of(g.mul(g.inv(x), zl));
            a[i][j][l] += 1;
        }
    }

    // split F_p^k into common eigenspaces of the A_i (acting on columns)
    let ident: Vec<Vec<u64>> = (0..k).map(|i| (0..k).map(|j| u64::from(i == j)).collect()).collect();
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![ident];
    for ai in a.iter().skip(1) {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for w in spaces {
            if w.len() == 1 {
                next.push(w);
                continue;
            }
            let (basis, pivots) = echelon(w, p);
            let m = basis.len();
            // R[s][r]: coordinate s of A_i w_r
            let mut r = vec![vec![0u64; m]; m];
            for (ri, wr) in basis.iter().enumerate() {
                let u: Vec<u64> = (0..k).map(|j| (0..k).fold(0, |acc, l| (acc + ai[j][l] % p * wr[l]) % p)).collect();
                for (s, &pc) in pivots.iter().enumerate() {
                    r[s][ri] = u[pc];
                }
            }
            let cp = char_poly(&r, p);
            let eval = |x: u64| cp.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % p);
            for lam in (0..p).filter(|&x| eval(x) == 0) {
                let shifted: Vec<Vec<u64>> = (0..m)
                    .map(|s| (0..m).map(|t| if s == t { (r[s][t] + p - lam) % p } else { r[s][t] }).collect())
                    .collect();
                let ker = nullspace(&shifted, m, p);
                if ker.is_empty() {
                    continue;
                }
                let sub: Vec<Vec<u64>> = ker
                    .iter()
                    .map(|c| (0..k).map(|j| basis.iter().zip(c).fold(0, |acc, (b, &cr)| (acc + b[j] * cr) % p)).collect())
                    .collect();
                next.push(sub);
            }
        }
        spaces = next;
    }
    if spaces.len() != k || spaces.iter().any(|s| s.len() != 1) {
        return Err(Error::Math("class-algebra eigenspaces did not split into lines".into()));
    }

    // power maps: class of rep^s
    let e = exponent as usize;
    let powmap: Vec<Vec<usize>> = conj
        .class_reps
        .iter()
        .map(|&x| {
            let mut y = 0;
            (0..e)
                .map(|_| {
                    let c = conj.class_of(y);
                    y = g.mul(y, x);
                    c
                })
                .collect()
        })
        .collect();
    let zroot = pow_mod(primitive_root(p), (p - 1) / exponent, p);
    let e_inv = inv_mod(exponent % p, p);
    let nmod = n as u64 % p;

    let mut chars: Vec<(u64, Vec<Cyclotomic>)> = Vec::new();
    for sp in spaces {
        let v = &sp[0];
        if v[0] == 0 {
            return Err(Error::Math("eigenvector vanishes at the identity class".into()));
        }
        let s = inv_mod(v[0], p);
        let omega: Vec<u64> = v.iter().map(|&x| x * s % p).collect();
        let mut sum = 0u64;
        for j in 0..k {
            let t = omega[j] * omega[inverse_class[j]] % p * inv_mod(class_sizes[j] as u64 % p, p) % p;
            sum = (sum + t) % p;
        }
        let d2 = nmod * inv_mod(sum, p) % p;
        let d = (1..=n as u64)
            .take_while(|d| d * d <= n as u64)
            .find(|&d| d * d % p == d2 && n as u64 % d == 0)
            .ok_or_else(|| Error::Math("no admissible degree for a character".into()))?;
        let chi_mod: Vec<u64> = (0..k)
            .map(|j| omega[j] * (d % p) % p * inv_mod(class_sizes[j] as u64 % p, p) % p)
            .collect();
        let mut row = Vec::with_capacity(k);
        for j in 0..k {
            let mut m = vec![0i64; e];
            for (kk, mk) in m.iter_mut().enumerate() {
                let mut acc = 0u64;
                for (sexp, &cl) in powmap[j].iter().enumerate() {
                    let zpow = pow_mod(zroot, ((e - (sexp * kk) % e) % e) as u64, p);
                    acc = (acc + chi_mod[cl] * zpow) % p;
                }
                let val = acc * e_inv % p;
                if val > d {
                    return Err(Error::Math("eigenvalue multiplicity out of range".into()));
                }
                *mk = val as i64;
            }
            if m.iter().sum::<i64>() != d as i64 {
                return Err(Error::Math("eigenvalue multiplicities do not sum to the degree".into()));
            }
            row.push(Cyclotomic::from_exponent_counts(exponent as u32, &m));
        }
        chars.push((d, row));
    }
    let trivial = |r: &Vec<Cyclotomic>| r.iter().all(|x| *x == Cyclotomic::one());
    chars.sort_by(|x, y| {
        trivial(&y.1).cmp(&trivial(&x.1)).then(x.0.cmp(&y.0)).then_with(|| y.1.cmp(&x.1))
    });
    let table = CharTable {
        order: n,
        exponent: exponent as u32,
        class_sizes,
        inverse_class,
        degrees: chars.iter().map(|c| c.0).collect(),
        rows: chars.into_iter().map(|c| c.1).collect(),
    };
    table.verify()?;
    Ok(table)
}

/// Trivial character value vector.
pub fn trivial_character(k: usize) -> Vec<Cyclotomic> {
    vec![Cyclotomic::one(); k]
}

/// Character of the regular representation.
pub fn regular_character(order: usize, k: usize) -> Vec<Cyclotomic> {
    let mut v = vec![Cyclotomic::zero(); k];
    v[0] = Cyclotomic::integer(order as i64);
    v
}

/// Multiplicities of the irreducibles in a class function; fails unless all
/// are non-negative integers.
pub fn decompose(table: &CharTable, f: &[Cyclotomic]) -> Result<Vec<u64>> {
    table
        .rows
        .iter()
        .map(|r| {
            let ip = table.inner_product(f, r)?;
            let q = ip.to_rational().filter(|q| q.is_integer() && *q >= BigRational::zero());
            q.map(|q| u64::try_from(q.to_integer()).unwrap_or(0))
                .ok_or_else(|| Error::Math(format!("multiplicity {ip} is not a non-negative integer")))
        })
        .collect()
}
