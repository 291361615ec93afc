//! Exact linear algebra over `Z/n` for composite `n`.
//!
//! Row spans are put in Howell form, which is canonical over `Z/n` even when
//! `n` is not prime: two matrices have the same row span exactly when their
//! Howell forms coincide. Invariant factors of quotients come from a Smith
//! form computed over `Z/n` itself.
//!
//! Moduli must be below `2^32` so products fit in a `u64`.

use num_integer::Integer;

use crate::error::{Error, Result};

pub const MAX_MODULUS: u64 = 1 << 32;

/// Arithmetic in `Z/n`.
#[derive(Clone, Copy, Debug)]
pub struct ZMod {
    n: u64,
    mask: u64,
}

impl ZMod {
    pub fn new(n: u64) -> ZMod {
        assert!((2..MAX_MODULUS).contains(&n), "modulus {n} out of range");
        let mask = if n.is_power_of_two() { n - 1 } else { 0 };
        ZMod { n, mask }
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        if self.mask != 0 {
            x & self.mask
        } else {
            x % self.n
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        self.reduce(a + b)
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.reduce(a + self.n - b)
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a * b)
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        self.reduce(self.n - a)
    }

    pub fn from_i64(&self, a: i64) -> u64 {
        a.rem_euclid(self.n as i64) as u64
    }

    /// A unit `u` with `u * a = gcd(a, n)`. For `a = 0` returns `(1, n)`.
    pub fn normalizer(&self, a: u64) -> (u64, u64) {
        let n = self.n;
        if a == 0 {
            return (1, n);
        }
        let g = a.gcd(&n);
        if g == 1 {
            return (self.inverse(a).unwrap(), 1);
        }
        let m = n / g;
        // u0 * (a/g) = 1 mod m, then shift by multiples of m until a unit mod n
        let u0 = if m == 1 { 1 } else { inv_mod((a / g) % m, m).unwrap() };
        let mut u = u0 % n;
        while u.gcd(&n) != 1 {
            u = (u + m) % n;
        }
        (u, g)
    }

    pub fn inverse(&self, a: u64) -> Option<u64> {
        inv_mod(a, self.n)
    }

    /// `dst[k] += c * src[k]` for `k >= from`.
    #[inline]
    fn axpy(&self, dst: &mut [u64], c: u64, src: &[u64], from: usize) {
        if c == 0 {
            return;
        }
        for (d, &s) in dst[from..].iter_mut().zip(&src[from..]) {
            if s != 0 {
                *d = self.reduce(*d + c * s);
            }
        }
    }

    #[inline]
    fn scale(&self, v: &mut [u64], c: u64) {
        for x in v.iter_mut() {
            *x = self.reduce(*x * c);
        }
    }
}

fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = ext_gcd(a as i64, m as i64);
    (g == 1).then(|| x.rem_euclid(m as i64) as u64)
}

/// `(g, s, t)` with `s a + t b = g = gcd(a, b)`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Sparse matrix over `Z/n`, entries sorted by `(row, col)` without zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatModN {
    modulus: u64,
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, u64)>,
}

impl SparseMatModN {
    /// Entries may repeat a cell (values add) and may be negative.
    pub fn from_entries<I>(modulus: u64, rows: usize, cols: usize, entries: I) -> Result<SparseMatModN>
    where
        I: IntoIterator<Item = (usize, usize, i64)>,
    {
        if !(2..MAX_MODULUS).contains(&modulus) {
            return Err(Error::Math(format!("modulus {modulus} out of range")));
        }
        let z = ZMod::new(modulus);
        let mut es: Vec<(usize, usize, u64)> = Vec::new();
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(Error::Math(format!("entry ({r},{c}) outside {rows}x{cols}")));
            }
            es.push((r, c, z.from_i64(v)));
        }
        es.sort_unstable_by_key(|e| (e.0, e.1));
        let mut merged: Vec<(usize, usize, u64)> = Vec::with_capacity(es.len());
        for (r, c, v) in es {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 = z.add(last.2, v),
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|e| e.2 != 0);
        Ok(SparseMatModN { modulus, rows, cols, entries: merged })
    }

    pub fn from_dense(modulus: u64, cols: usize, rows: &[Vec<u64>]) -> Result<SparseMatModN> {
        let entries = rows.iter().enumerate().flat_map(|(r, row)| {
            row.iter().enumerate().filter(|e| *e.1 != 0).map(move |(c, &v)| (r, c, v as i64))
        });
        SparseMatModN::from_entries(modulus, rows.len(), cols, entries)
    }

    pub fn identity(modulus: u64, n: usize) -> SparseMatModN {
        SparseMatModN::from_entries(modulus, n, n, (0..n).map(|i| (i, i, 1))).unwrap()
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[(usize, usize, u64)] {
        &self.entries
    }

    pub fn to_dense_rows(&self) -> Vec<Vec<u64>> {
        let mut out = vec![vec![0; self.cols]; self.rows];
        for &(r, c, v) in &self.entries {
            out[r][c] = v;
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        let z = ZMod::new(self.modulus);
        let mut out = vec![0; self.rows];
        for &(r, c, x) in &self.entries {
            out[r] = z.add(out[r], z.mul(x, v[c] % self.modulus));
        }
        out
    }
}

/// Howell form of a row span, optionally with the transform expressing
/// every output row in the input rows.
#[derive(Clone, Debug)]
pub struct HowellForm {
    z: ZMod,
    cols: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    transform: Option<Vec<Vec<u64>>>,
}

struct Builder {
    z: ZMod,
    cols: usize,
    slot: Vec<Option<(Vec<u64>, Vec<u64>)>>,
    track: bool,
}

impl Builder {
    fn insert(&mut self, v: Vec<u64>, t: Vec<u64>) {
        let z = self.z;
        let n = z.modulus();
        let mut stack = vec![(v, t, 0usize)];
        'next: while let Some((mut v, mut t, mut j)) = stack.pop() {
            while j < self.cols {
                let a = v[j];
                if a == 0 {
                    j += 1;
                    continue;
                }
                match self.slot[j].take() {
                    None => {
                        let (u, g) = z.normalizer(a);
                        z.scale(&mut v[j..], u);
                        if self.track {
                            z.scale(&mut t, u);
                        }
                        if g != 1 {
                            let k = n / g;
                            let mut av = v.clone();
                            z.scale(&mut av[j..], k);
                            let mut at = t.clone();
                            if self.track {
                                z.scale(&mut at, k);
                            }
                            stack.push((av, at, j + 1));
                        }
                        self.slot[j] = Some((v, t));
                        continue 'next;
                    }
                    Some((r, rt)) => {
                        let p = r[j];
                        if a % p == 0 {
                            let q = z.neg(a / p);
                            z.axpy(&mut v, q, &r, j);
                            if self.track {
                                z.axpy(&mut t, q, &rt, 0);
                            }
                            self.slot[j] = Some((r, rt));
                            j += 1;
                            continue;
                        }
                        let (g, s, u) = ext_gcd(p as i64, a as i64);
                        let (g, s, u) = (g as u64, z.from_i64(s), z.from_i64(u));
                        // new pivot row s r + u v, remainder (a/g) r - (p/g) v
                        let mut nr = vec![0; self.cols];
                        z.axpy(&mut nr, s, &r, j);
                        z.axpy(&mut nr, u, &v, j);
                        let mut rem = vec![0; self.cols];
                        z.axpy(&mut rem, a / g, &r, j);
                        z.axpy(&mut rem, z.neg(p / g), &v, j);
                        let (mut nt, mut remt) = (Vec::new(), Vec::new());
                        if self.track {
                            nt = vec![0; t.len()];
                            z.axpy(&mut nt, s, &rt, 0);
                            z.axpy(&mut nt, u, &t, 0);
                            remt = vec![0; t.len()];
                            z.axpy(&mut remt, a / g, &rt, 0);
                            z.axpy(&mut remt, z.neg(p / g), &t, 0);
                        }
                        debug_assert_eq!(nr[j], g);
                        if g != 1 {
                            let k = n / g;
                            let mut av = nr.clone();
                            z.scale(&mut av[j..], k);
                            let mut at = nt.clone();
                            if self.track {
                                z.scale(&mut at, k);
                            }
                            stack.push((av, at, j + 1));
                        }
                        self.slot[j] = Some((nr, nt));
                        v = rem;
                        t = remt;
                        j += 1;
                    }
                }
            }
        }
    }

    fn finish(self) -> HowellForm {
        let z = self.z;
        let mut rows = Vec::new();
        let mut pivots = Vec::new();
        let mut trans = Vec::new();
        for (j, s) in self.slot.into_iter().enumerate() {
            if let Some((r, t)) = s {
                pivots.push(j);
                rows.push(r);
                trans.push(t);
            }
        }
        // reduce entries above each pivot into [0, pivot)
        let m = rows.len();
        for k in 1..m {
            let (upper, lower) = rows.split_at_mut(k);
            let rk = &lower[0];
            let (tu, tl) = trans.split_at_mut(k);
            let pk = pivots[k];
            let p = rk[pk];
            for (i, ri) in upper.iter_mut().enumerate() {
                let q = ri[pk] / p;
                if q > 0 {
                    let c = z.neg(q % z.modulus());
                    z.axpy(ri, c, rk, pk);
                    if self.track {
                        z.axpy(&mut tu[i], c, &tl[0], 0);
                    }
                }
            }
        }
        HowellForm { z, cols: self.cols, rows, pivots, transform: self.track.then_some(trans) }
    }
}

impl HowellForm {
    /// Howell form of the span of `rows`; with `track` the transform record
    /// is kept (one coefficient vector over the input rows per output row).
    pub fn new<I>(modulus: u64, cols: usize, rows: I, track: bool) -> HowellForm
    where
        I: IntoIterator<Item = Vec<u64>>,
    {
        let z = ZMod::new(modulus);
        let rows: Vec<Vec<u64>> = rows.into_iter().collect();
        let ninputs = rows.len();
        let mut b = Builder { z, cols, slot: vec![None; cols], track };
        for (i, mut r) in rows.into_iter().enumerate() {
            assert_eq!(r.len(), cols, "row length mismatch");
            for x in r.iter_mut() {
                *x %= modulus;
            }
            let t = if track {
                let mut t = vec![0; ninputs];
                t[i] = 1;
                t
            } else {
                Vec::new()
            };
            b.insert(r, t);
        }
        b.finish()
    }

    pub fn modulus(&self) -> u64 {
        self.z.modulus()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn transform(&self) -> Option<&[Vec<u64>]> {
        self.transform.as_deref()
    }

    /// Size of the row span, the product over rows of `n / pivot`.
    pub fn span_size(&self) -> u128 {
        let n = self.z.modulus() as u128;
        self.rows.iter().zip(&self.pivots).map(|(r, &j)| n / r[j] as u128).product()
    }

    /// Coefficients `q` with `v = sum q_k rows_k`, or `None` if `v` is not in
    /// the span.
    pub fn solve(&self, v: &[u64]) -> Option<Vec<u64>> {
        let z = self.z;
        let mut v: Vec<u64> = v.iter().map(|&x| x % z.modulus()).collect();
        let mut q = vec![0; self.rows.len()];
        let mut k = 0;
        for j in 0..self.cols {
            if v[j] == 0 {
                continue;
            }
            while k < self.pivots.len() && self.pivots[k] < j {
                k += 1;
            }
            if k == self.pivots.len() || self.pivots[k] != j {
                return None;
            }
            let p = self.rows[k][j];
            if v[j] % p != 0 {
                return None;
            }
            q[k] = v[j] / p;
            z.axpy(&mut v, z.neg(q[k]), &self.rows[k], j);
        }
        Some(q)
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.solve(v).is_some()
    }

    /// Coefficients over the input rows reproducing `v`; requires the
    /// transform record.
    pub fn express(&self, v: &[u64]) -> Option<Vec<u64>> {
        let tr = self.transform.as_ref().expect("Howell form built without transform");
        let q = self.solve(v)?;
        let width = tr.first().map_or(0, |t| t.len());
        let mut out = vec![0; width];
        for (qk, tk) in q.iter().zip(tr) {
            self.z.axpy(&mut out, *qk, tk, 0);
        }
        Some(out)
    }
}

/// Canonical row-span form of `m` with transform record.
pub fn normal_form(m: &SparseMatModN) -> HowellForm {
    HowellForm::new(m.modulus(), m.cols(), m.to_dense_rows(), true)
}

/// Generators of `{v : m v = 0}`.
pub fn kernel(m: &SparseMatModN) -> Vec<Vec<u64>> {
    kernel_of_rows(m.modulus(), m.cols(), m.to_dense_rows())
}

/// Right kernel of the matrix with the given rows.
pub fn kernel_of_rows<I>(modulus: u64, cols: usize, rows: I) -> Vec<Vec<u64>>
where
    I: IntoIterator<Item = Vec<u64>>,
{
    let h = HowellForm::new(modulus, cols, rows, false);
    let r = h.rows.len();
    let width = r + cols;
    let aug = (0..cols).map(|i| {
        let mut v = vec![0; width];
        for (k, row) in h.rows.iter().enumerate() {
            v[k] = row[i];
        }
        v[r + i] = 1;
        v
    });
    let ha = HowellForm::new(modulus, width, aug, false);
    ha.rows
        .iter()
        .zip(&ha.pivots)
        .filter(|(_, &p)| p >= r)
        .map(|(row, _)| row[r..].to_vec())
        .collect()
}

/// Smith form over `Z/n`: `U A V = diag(d)` with `V`, `V^-1` recorded.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// One entry per column; zero where the diagonal vanishes.
    pub diag: Vec<u64>,
    pub v: Vec<Vec<u64>>,
    pub v_inv: Vec<Vec<u64>>,
}

pub fn smith_form(modulus: u64, cols: usize, rows: &[Vec<u64>]) -> SmithForm {
    let z = ZMod::new(modulus);
    let mut a: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| x % modulus).collect()).collect();
    let r = a.len();
    let c = cols;
    let ident = |k: usize| -> Vec<Vec<u64>> {
        (0..k).map(|i| (0..k).map(|j| u64::from(i == j)).collect()).collect()
    };
    let mut v = ident(c);
    let mut vi = ident(c);
    let mut diag = vec![0u64; c];

    // column operation helpers; they act on a, v (columns) and vi (rows)
    fn col_axpy(z: ZMod, a: &mut [Vec<u64>], v: &mut [Vec<u64>], vi: &mut [Vec<u64>], dst: usize, q: u64, src: usize) {
        // col_dst += q col_src
        for row in a.iter_mut().chain(v.iter_mut()) {
            row[dst] = z.add(row[dst], z.mul(q, row[src]));
        }
        // inverse: row_src -= q row_dst
        let (d, s) = (vi[dst].clone(), &mut vi[src]);
        z.axpy(s, z.neg(q), &d, 0);
    }
    fn col_swap(a: &mut [Vec<u64>], v: &mut [Vec<u64>], vi: &mut [Vec<u64>], i: usize, j: usize) {
        for row in a.iter_mut().chain(v.iter_mut()) {
            row.swap(i, j);
        }
        vi.swap(i, j);
    }
    fn col_bezout(z: ZMod, a: &mut [Vec<u64>], v: &mut [Vec<u64>], vi: &mut [Vec<u64>], t: usize, j: usize) {
        let p = a[t][t];
        let x = a[t][j];
        let (g, s, u) = ext_gcd(p as i64, x as i64);
        let g = g as u64;
        let (s, u) = (z.from_i64(s), z.from_i64(u));
        let (xg, pg) = (x / g, p / g);
        for row in a.iter_mut().chain(v.iter_mut()) {
            let (ct, cj) = (row[t], row[j]);
            row[t] = z.add(z.mul(s, ct), z.mul(u, cj));
            row[j] = z.sub(z.mul(xg, ct), z.mul(pg, cj));
        }
        // E^-1 = [[p/g, x/g], [u, -s]] on rows (t, j)
        let (rt, rj) = (vi[t].clone(), vi[j].clone());
        for k in 0..rt.len() {
            vi[t][k] = z.add(z.mul(pg, rt[k]), z.mul(xg, rj[k]));
            vi[j][k] = z.sub(z.mul(u, rt[k]), z.mul(s, rj[k]));
        }
    }

    let mut t = 0;
    while t < r.min(c) {
        let mut best: Option<(u64, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 {
                    let g = x.gcd(&modulus);
                    if best.map_or(true, |b| g < b.0) {
                        best = Some((g, i, j));
                    }
                }
            }
        }
        let Some((_, bi, bj)) = best else { break };
        a.swap(t, bi);
        if bj != t {
            col_swap(&mut a, &mut v, &mut vi, t, bj);
        }
        loop {
            let (u, g) = z.normalizer(a[t][t]);
            z.scale(&mut a[t], u);
            let mut changed = false;
            for i in t + 1..r {
                let x = a[i][t];
                if x == 0 {
                    continue;
                }
                if x % g == 0 {
                    let rt = a[t].clone();
                    z.axpy(&mut a[i], z.neg(x / g), &rt, t);
                } else {
                    let (gg, s, uu) = ext_gcd(g as i64, x as i64);
                    let gg = gg as u64;
                    let (s, uu) = (z.from_i64(s), z.from_i64(uu));
                    let (rt, ri) = (a[t].clone(), a[i].clone());
                    for k in 0..c {
                        a[t][k] = z.add(z.mul(s, rt[k]), z.mul(uu, ri[k]));
                        a[i][k] = z.sub(z.mul(x / gg, rt[k]), z.mul(g / gg, ri[k]));
                    }
                    changed = true;
                    break;
                }
            }
            if changed {
                continue;
            }
            for j in t + 1..c {
                let x = a[t][j];
                if x == 0 {
                    continue;
                }
                if x % g == 0 {
                    col_axpy(z, &mut a, &mut v, &mut vi, j, z.neg(x / g), t);
                } else {
                    col_bezout(z, &mut a, &mut v, &mut vi, t, j);
                    changed = true;
                    break;
                }
            }
            if changed {
                continue;
            }
            let bad = (t + 1..r).find(|&i| a[i][t + 1..].iter().any(|&x| x % g != 0));
            if let Some(i) = bad {
                let ri = a[i].clone();
                z.axpy(&mut a[t], 1, &ri, 0);
                continue;
            }
            break;
        }
        diag[t] = a[t][t];
        t += 1;
    }
    SmithForm { diag, v, v_inv: vi }
}

/// A finite abelian group `span(Z) / span(B)` inside `(Z/n)^dim`, presented
/// by invariant factors `d_1 | d_2 | ...` and lifts of the standard
/// generators.
#[derive(Clone, Debug)]
pub struct AbelianStructure {
    modulus: u64,
    dim: usize,
    pub factors: Vec<u64>,
    pub lifts: Vec<Vec<u64>>,
    zspan: HowellForm,
    v: Vec<Vec<u64>>,
    keep: Vec<usize>,
}

impl AbelianStructure {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u128 {
        self.factors.iter().map(|&d| d as u128).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Coordinates of the class of `v` in `(+) Z/d_i`; `None` if `v` is not in
    /// `span(Z)`.
    pub fn project(&self, v: &[u64]) -> Option<Vec<u64>> {
        let z = ZMod::new(self.modulus);
        let x = self.zspan.express(v)?;
        Some(
            self.keep
                .iter()
                .zip(&self.factors)
                .map(|(&i, &d)| {
                    let y = x.iter().zip(&self.v).fold(0, |acc, (&xj, vrow)| z.add(acc, z.mul(xj, vrow[i])));
                    y % d
                })
                .collect(),
        )
    }

    /// Ambient vector representing the class with the given coordinates.
    pub fn element(&self, coords: &[u64]) -> Vec<u64> {
        let z = ZMod::new(self.modulus);
        let mut out = vec![0; self.dim];
        for (c, l) in coords.iter().zip(&self.lifts) {
            z.axpy(&mut out, *c % self.modulus, l, 0);
        }
        out
    }
}

/// `span(zgens) / span(bgens)` in `(Z/n)^dim`.
pub fn subquotient(zgens: &[Vec<u64>], bgens: &[Vec<u64>], modulus: u64, dim: usize) -> Result<AbelianStructure> {
    let z = ZMod::new(modulus);
    let zspan = HowellForm::new(modulus, dim, zgens.iter().cloned(), true);
    if let Some(i) = bgens.iter().position(|b| !zspan.contains(b)) {
        return Err(Error::Math(format!("generator {i} of the denominator is not in the numerator span")));
    }
    let k = zgens.len();
    let m = bgens.len();
    // x with x.Z in span(B): left kernel of [Z; B]
    let transposed = (0..dim).map(|c| zgens.iter().chain(bgens).map(|row| row[c] % modulus).collect::<Vec<u64>>());
    let rel: Vec<Vec<u64>> = kernel_of_rows(modulus, k + m, transposed)
        .into_iter()
        .map(|mut v| {
            v.truncate(k);
            v
        })
        .filter(|v| v.iter().any(|&x| x != 0))
        .collect();
    let smith = smith_form(modulus, k, &rel);
    let mut factors = Vec::new();
    let mut keep = Vec::new();
    let mut lifts = Vec::new();
    for i in 0..k {
        let d = if smith.diag[i] == 0 { modulus } else { smith.diag[i].gcd(&modulus) };
        if d > 1 {
            factors.push(d);
            keep.push(i);
            let mut lift = vec![0; dim];
            for (j, zj) in zgens.iter().enumerate() {
                z.axpy(&mut lift, smith.v_inv[i][j], zj, 0);
            }
            lifts.push(lift);
        }
    }
    Ok(AbelianStructure { modulus, dim, factors, lifts, zspan, v: smith.v, keep })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn normalizer_gives_gcd() {
        for n in [4u64, 6, 12, 64, 30] {
            let z = ZMod::new(n);
            for a in 0..n {
                let (u, g) = z.normalizer(a);
                assert_eq!(u.gcd(&n), 1, "n={n} a={a}");
                assert_eq!(z.mul(u, a), g % n);
            }
        }
    }

    #[test]
    fn identity_is_canonical() {
        let id = SparseMatModN::identity(6, 4);
        let h = normal_form(&id);
        assert_eq!(h.rows(), id.to_dense_rows().as_slice());
    }

    #[test]
    fn single_two_over_z4() {
        let m = SparseMatModN::from_entries(4, 1, 1, [(0, 0, 2)]).unwrap();
        let h = normal_form(&m);
        assert_eq!(h.rows(), &[vec![2]]);
        assert_eq!(kernel(&m), vec![vec![2]]);
    }

    #[test]
    fn kernel_of_zero_matrix() {
        let m = SparseMatModN::from_entries(5, 2, 3, std::iter::empty()).unwrap();
        let k = kernel(&m);
        assert_eq!(k, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn howell_property_on_z12() {
        // (2 0) and (0 3) combos; span contains (6, 0)... classic Howell example
        let rows = vec![vec![4, 1], vec![0, 0]];
        let h = HowellForm::new(12, 2, rows, false);
        // (3*(4,1)) = (0,3) must be present as its own row
        assert!(h.contains(&[0, 3]));
        assert_eq!(h.rows().len(), 2);
        assert_eq!(h.span_size(), 12);
    }

    #[test]
    fn simple_subquotients() {
        let s = subquotient(&[vec![1, 0], vec![0, 1]], &[], 4, 2).unwrap();
        assert_eq!(s.factors, vec![4, 4]);
        let s = subquotient(&[vec![1]], &[vec![2]], 4, 1).unwrap();
        assert_eq!(s.factors, vec![2]);
        assert!(subquotient(&[vec![2]], &[vec![1]], 4, 1).is_err());
    }

    #[test]
    fn projector_inverts_lifts() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let n = [4u64, 6, 8, 12][rng.gen_range(0..4)];
            let dim = rng.gen_range(1..5);
            let zg: Vec<Vec<u64>> = (0..rng.gen_range(1..5)).map(|_| (0..dim).map(|_| rng.gen_range(0..n)).collect()).collect();
            // B = random combinations of Z
            let bg: Vec<Vec<u64>> = (0..rng.gen_range(0..3))
                .map(|_| {
                    let z = ZMod::new(n);
                    let mut v = vec![0; dim];
                    for r in &zg {
                        z.axpy(&mut v, rng.gen_range(0..n), r, 0);
                    }
                    v
                })
                .collect();
            let s = subquotient(&zg, &bg, n, dim).unwrap();
            for w in s.factors.windows(2) {
                assert_eq!(w[1] % w[0], 0);
            }
            for (i, l) in s.lifts.iter().enumerate() {
                let mut e = vec![0; s.factors.len()];
                e[i] = 1;
                assert_eq!(s.project(l).unwrap(), e);
            }
            for b in &bg {
                assert!(s.project(b).unwrap().iter().all(|&c| c == 0));
            }
        }
    }

    #[test]
    fn smith_inverse_pair() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..30 {
            let n = [6u64, 8, 12, 64][rng.gen_range(0..4)];
            let c = rng.gen_range(1..6);
            let rows: Vec<Vec<u64>> = (0..rng.gen_range(0..6)).map(|_| (0..c).map(|_| rng.gen_range(0..n)).collect()).collect();
            let s = smith_form(n, c, &rows);
            let z = ZMod::new(n);
            for i in 0..c {
                for j in 0..c {
                    let x = (0..c).fold(0, |acc, k| z.add(acc, z.mul(s.v[i][k], s.v_inv[k][j])));
                    assert_eq!(x, u64::from(i == j));
                }
            }
            let nz: Vec<u64> = s.diag.iter().copied().filter(|&d| d != 0).collect();
            for w in nz.windows(2) {
                assert_eq!(w[1] % w[0], 0, "{:?}", s.diag);
            }
        }
    }
}
