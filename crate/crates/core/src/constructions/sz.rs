//! The groups `G(E) = E x| (M + M)` for an additive subgroup `E` of
//! `End(M)`, `M = F_q^n`, with `f` acting by `f(x, y) = (x, f(x) + y)`.
//!
//! Elements are triples `(f, x, y)` multiplied as
//! `(f, x, y)(f', x', y') = (f + f', x + x', y + y' + f'(x))`. The ambient
//! group `End(M) x| (M + M)` uses the same rule and is never tabulated; it
//! only serves to conjugate `G(E)`.
//!
//! Index encoding: `((f_index * q^n) + x) * q^n + y`, with vectors coded in
//! base `q` (coordinate `i` is digit `i`) and `f_index` the base-`p` digits
//! of `f` over the stored `F_p`-basis of `E`.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::field::FiniteField;
use crate::error::{Error, Result};
use crate::group::{GroupMap, GroupTable, MulRule, ORDER_CAP};
use crate::linalg::HowellForm;

/// Row-major `n x n` matrix over `F_q`.
pub type Matrix = Vec<u32>;

/// Bound on `q^(n^2)` for the search over `End(M)` in [`tilde_e`].
pub const TILDE_E_ENDOMORPHISM_LIMIT: u64 = 1 << 20;
/// Bound on `q^n` for the pair iteration in [`tilde_e`].
pub const TILDE_E_MODULE_LIMIT: u64 = 1 << 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ESubgroup {
    Full,
    Traceless,
    Scalars,
    /// Additive span of the listed matrices (rows of entries in `0..q`).
    Basis(Vec<Vec<Vec<u32>>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SzGroupSpec {
    pub q: u64,
    pub n: usize,
    pub e: ESubgroup,
}

/// A triple `(f, x, y)` of the ambient group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AmbientElement {
    pub f: Matrix,
    pub x: u32,
    pub y: u32,
}

struct Data {
    p: u64,
    qn: usize,
    e_dim: usize,
    e_count: usize,
    /// `eval[f_index * qn + x] = f(x)`.
    eval: Vec<u32>,
    vadd: Vec<u32>,
    vneg: Vec<u32>,
}

impl Data {
    #[inline]
    fn e_add(&self, a: usize, b: usize) -> usize {
        if self.p == 2 {
            return a ^ b;
        }
        let p = self.p as usize;
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        for _ in 0..self.e_dim {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    #[inline]
    fn e_neg(&self, a: usize) -> usize {
        if self.p == 2 {
            return a;
        }
        let p = self.p as usize;
        let (mut a, mut out, mut place) = (a, 0, 1);
        for _ in 0..self.e_dim {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    #[inline]
    fn va(&self, a: u32, b: u32) -> u32 {
        self.vadd[a as usize * self.qn + b as usize]
    }

    #[inline]
    fn decode(&self, i: usize) -> (usize, u32, u32) {
        let y = (i % self.qn) as u32;
        let x = ((i / self.qn) % self.qn) as u32;
        (i / (self.qn * self.qn), x, y)
    }

    #[inline]
    fn encode(&self, f: usize, x: u32, y: u32) -> usize {
        (f * self.qn + x as usize) * self.qn + y as usize
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        let (f, x, y) = self.decode(a);
        let (f2, x2, y2) = self.decode(b);
        let fx = self.eval[f2 * self.qn + x as usize];
        self.encode(self.e_add(f, f2), self.va(x, x2), self.va(self.va(y, y2), fx))
    }

    fn inv(&self, a: usize) -> usize {
        let (f, x, y) = self.decode(a);
        let fx = self.eval[f * self.qn + x as usize];
        self.encode(self.e_neg(f), self.vneg[x as usize], self.va(fx, self.vneg[y as usize]))
    }
}

/// `G(E)` with its table and the data needed to conjugate by ambient
/// elements.
#[derive(Clone)]
pub struct SzGroup {
    spec: SzGroupSpec,
    field: FiniteField,
    e_basis: Vec<Matrix>,
    e_elements: Vec<Matrix>,
    e_index: HashMap<Matrix, usize>,
    data: Arc<Data>,
    table: GroupTable,
}

impl std::fmt::Debug for SzGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SzGroup").field("spec", &self.spec).field("order", &self.table.order()).finish()
    }
}

fn vec_digits(x: u32, q: u64, n: usize) -> Vec<u32> {
    let mut v = Vec::with_capacity(n);
    let mut x = x as u64;
    for _ in 0..n {
        v.push((x % q) as u32);
        x /= q;
    }
    v
}

fn vec_code(v: &[u32], q: u64) -> u32 {
    v.iter().rev().fold(0u64, |acc, &d| acc * q + d as u64) as u32
}

/// `f(x)` for a matrix and a vector code.
pub fn apply_matrix(field: &FiniteField, n: usize, f: &[u32], x: u32) -> u32 {
    let xs = vec_digits(x, field.size(), n);
    let out: Vec<u32> = (0..n)
        .map(|i| (0..n).fold(0, |acc, j| field.add(acc, field.mul(f[i * n + j], xs[j]))))
        .collect();
    vec_code(&out, field.size())
}

fn mat_add(field: &FiniteField, a: &[u32], b: &[u32]) -> Matrix {
    a.iter().zip(b).map(|(&x, &y)| field.add(x, y)).collect()
}

pub fn trace(field: &FiniteField, n: usize, f: &[u32]) -> u32 {
    (0..n).fold(0, |acc, i| field.add(acc, f[i * n + i]))
}

fn prime_coords(field: &FiniteField, m: &[u32]) -> Vec<u64> {
    m.iter().flat_map(|&a| field.prime_coordinates(a)).collect()
}

fn from_prime_coords(field: &FiniteField, v: &[u64]) -> Matrix {
    let k = field.degree() as usize;
    let p = field.characteristic();
    v.chunks(k).map(|c| c.iter().rev().fold(0u64, |acc, &d| acc * p + d) as u32).collect()
}

/// Generators over `F_p` of the requested subgroup of `End(M)`.
fn e_generators(field: &FiniteField, n: usize, e: &ESubgroup) -> Result<Vec<Matrix>> {
    let unit = |i: usize, j: usize, c: u32| {
        let mut m = vec![0u32; n * n];
        m[i * n + j] = c;
        m
    };
    let pb = field.prime_basis();
    let mut out = Vec::new();
    match e {
        ESubgroup::Full => {
            for i in 0..n {
                for j in 0..n {
                    for &c in &pb {
                        out.push(unit(i, j, c));
                    }
                }
            }
        }
        ESubgroup::Traceless => {
            for i in 0..n {
                for j in 0..n {
                    for &c in &pb {
                        if i != j {
                            out.push(unit(i, j, c));
                        } else if i + 1 < n {
                            let mut m = unit(i, i, c);
                            m[(n - 1) * n + (n - 1)] = field.neg(c);
                            out.push(m);
                        }
                    }
                }
            }
        }
        ESubgroup::Scalars => {
            for &c in &pb {
                let mut m = vec![0u32; n * n];
                for i in 0..n {
                    m[i * n + i] = c;
                }
                out.push(m);
            }
        }
        ESubgroup::Basis(ms) => {
            for m in ms {
                if m.len() != n || m.iter().any(|r| r.len() != n) {
                    return Err(Error::Spec(format!("basis matrices must be {n}x{n}")));
                }
                let flat: Matrix = m.iter().flatten().copied().collect();
                if flat.iter().any(|&a| a as u64 >= field.size()) {
                    return Err(Error::Spec("matrix entry outside the field".into()));
                }
                out.push(flat);
            }
        }
    }
    Ok(out)
}

impl SzGroup {
    pub fn spec(&self) -> &SzGroupSpec {
        &self.spec
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn dimension(&self) -> usize {
        self.spec.n
    }

    pub fn table(&self) -> &GroupTable {
        &self.table
    }

    /// `F_p`-basis of `E`.
    pub fn e_basis(&self) -> &[Matrix] {
        &self.e_basis
    }

    pub fn e_elements(&self) -> &[Matrix] {
        &self.e_elements
    }

    pub fn contains_matrix(&self, m: &[u32]) -> bool {
        self.e_index.contains_key(m)
    }

    /// Size of `M`.
    pub fn module_size(&self) -> usize {
        self.data.qn
    }

    pub fn element(&self, i: usize) -> AmbientElement {
        let (f, x, y) = self.data.decode(i);
        AmbientElement { f: self.e_elements[f].clone(), x, y }
    }

    /// Index of an ambient element lying in `G(E)`.
    pub fn index_of(&self, a: &AmbientElement) -> Option<usize> {
        let f = *self.e_index.get(&a.f)?;
        Some(self.data.encode(f, a.x, a.y))
    }

    pub fn ambient_mul(&self, a: &AmbientElement, b: &AmbientElement) -> AmbientElement {
        let d = &self.data;
        let fx = apply_matrix(&self.field, self.spec.n, &b.f, a.x);
        AmbientElement { f: mat_add(&self.field, &a.f, &b.f), x: d.va(a.x, b.x), y: d.va(d.va(a.y, b.y), fx) }
    }

    pub fn ambient_inv(&self, a: &AmbientElement) -> AmbientElement {
        let d = &self.data;
        let fx = apply_matrix(&self.field, self.spec.n, &a.f, a.x);
        AmbientElement {
            f: a.f.iter().map(|&c| self.field.neg(c)).collect(),
            x: d.vneg[a.x as usize],
            y: d.va(fx, d.vneg[a.y as usize]),
        }
    }

    /// `(g, 0, 0)`.
    pub fn ambient_from_matrix(&self, g: Matrix) -> AmbientElement {
        AmbientElement { f: g, x: 0, y: 0 }
    }

    /// Indices of `0 x| (0 + M)`.
    pub fn central_part(&self) -> Vec<usize> {
        (0..self.data.qn as u32).map(|y| self.data.encode(0, 0, y)).collect()
    }
}

pub fn sz_group(spec: &SzGroupSpec) -> Result<SzGroup> {
    if spec.n == 0 {
        return Err(Error::Spec("dimension must be at least 1".into()));
    }
    let field = FiniteField::new(spec.q)?;
    let n = spec.n;
    let q = field.size();
    let p = field.characteristic();
    let qn64 = q.checked_pow(n as u32).filter(|&v| v <= ORDER_CAP as u64).ok_or(Error::Budget { what: "group order", limit: ORDER_CAP })?;
    let qn = qn64 as usize;

    // canonical F_p-basis of E
    let gens = e_generators(&field, n, &spec.e)?;
    let width = n * n * field.degree() as usize;
    let h = HowellForm::new(p, width, gens.iter().map(|m| prime_coords(&field, m)), false);
    let e_basis: Vec<Matrix> = h.rows().iter().map(|r| from_prime_coords(&field, r)).collect();
    let e_dim = e_basis.len();
    let order = (p as u128).pow(e_dim as u32) * (qn as u128) * (qn as u128);
    if order > ORDER_CAP as u128 {
        return Err(Error::Budget { what: "group order", limit: ORDER_CAP });
    }
    let e_count = p.pow(e_dim as u32) as usize;
    let mut e_elements = Vec::with_capacity(e_count);
    for idx in 0..e_count {
        let mut m = vec![0u32; n * n];
        let mut r = idx;
        for b in &e_basis {
            let c = (r % p as usize) as u32;
            r /= p as usize;
            for _ in 0..c {
                m = mat_add(&field, &m, b);
            }
        }
        e_elements.push(m);
    }
    let e_index: HashMap<Matrix, usize> = e_elements.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();

    let mut vadd = vec![0u32; qn * qn];
    for a in 0..qn as u32 {
        let da = vec_digits(a, q, n);
        for b in 0..qn as u32 {
            let db = vec_digits(b, q, n);
            let s: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| field.add(x, y)).collect();
            vadd[a as usize * qn + b as usize] = vec_code(&s, q);
        }
    }
    let vneg: Vec<u32> = (0..qn as u32)
        .map(|a| vec_code(&vec_digits(a, q, n).iter().map(|&x| field.neg(x)).collect::<Vec<_>>(), q))
        .collect();
    let mut eval = vec![0u32; e_count * qn];
    for (fi, f) in e_elements.iter().enumerate() {
        for x in 0..qn as u32 {
            eval[fi * qn + x as usize] = apply_matrix(&field, n, f, x);
        }
    }
    let data = Arc::new(Data { p, qn, e_dim, e_count, eval, vadd, vneg });
    let order = order as usize;

    // generators: E-basis, then F_p-bases of the two copies of M
    let mut generators: Vec<usize> = (0..e_dim).map(|i| data.encode(p.pow(i as u32) as usize, 0, 0)).collect();
    let mut module_basis = Vec::new();
    for i in 0..n {
        for &c in &field.prime_basis() {
            let mut v = vec![0u32; n];
            v[i] = c;
            module_basis.push(vec_code(&v, q));
        }
    }
    generators.extend(module_basis.iter().map(|&x| data.encode(0, x, 0)));
    generators.extend(module_basis.iter().map(|&y| data.encode(0, 0, y)));

    let d2 = data.clone();
    let mul: MulRule = Arc::new(move |a, b| d2.mul(a, b));
    let inv: Vec<usize> = (0..order).map(|a| data.inv(a)).collect();
    let labels: Vec<String> = (0..order)
        .map(|i| {
            let (f, x, y) = data.decode(i);
            format!("{f}.{x}.{y}")
        })
        .collect();
    let table = GroupTable::from_rule(order, mul, inv, generators, labels)?;
    debug_assert_eq!(data.e_count, e_elements.len());
    Ok(SzGroup { spec: spec.clone(), field, e_basis, e_elements, e_index, data, table })
}

/// The automorphism `x -> a x a^-1` of `G(E)`; fails unless `a` normalizes it.
pub fn conj_by_ambient(sz: &SzGroup, a: &AmbientElement) -> Result<GroupMap> {
    let ainv = sz.ambient_inv(a);
    let n = sz.table().order();
    let mut image = Vec::with_capacity(n);
    for i in 0..n {
        let c = sz.ambient_mul(&sz.ambient_mul(a, &sz.element(i)), &ainv);
        image.push(sz.index_of(&c).ok_or_else(|| Error::Math("ambient element does not normalize G(E)".into()))?);
    }
    GroupMap::automorphism(sz.table(), image)
}

/// `{g in End(M) : every pair (x, y) is matched by some f in E}`, in order of
/// the base-`q` code of the row-major entries.
pub fn tilde_e(sz: &SzGroup) -> Result<Vec<Matrix>> {
    let field = sz.field();
    let n = sz.dimension();
    let q = field.size();
    let qn = sz.module_size();
    let ends = q.checked_pow((n * n) as u32).filter(|&v| v <= TILDE_E_ENDOMORPHISM_LIMIT);
    let Some(ends) = ends else {
        return Err(Error::Budget { what: "endomorphism iteration", limit: TILDE_E_ENDOMORPHISM_LIMIT as usize });
    };
    if qn as u64 > TILDE_E_MODULE_LIMIT {
        return Err(Error::Budget { what: "pair iteration", limit: TILDE_E_MODULE_LIMIT as usize });
    }
    let pairs: Vec<(u32, u32)> = (0..qn as u32).flat_map(|x| (0..qn as u32).map(move |y| (x, y))).collect();
    let enumerate = field.characteristic() == 2 && sz.e_basis().len() <= 9;
    // per pair: the set of (f(x), f(y)) over f in E, or its F_p-span
    let matcher: Box<dyn Fn(usize, u32, u32) -> bool + '_> = if enumerate {
        let sets: Vec<Vec<u32>> = pairs
            .iter()
            .map(|&(x, y)| {
                let mut s: Vec<u32> = sz
                    .e_elements()
                    .iter()
                    .map(|f| apply_matrix(field, n, f, x) * qn as u32 + apply_matrix(field, n, f, y))
                    .collect();
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        Box::new(move |k, gx, gy| sets[k].binary_search(&(gx * qn as u32 + gy)).is_ok())
    } else {
        let coords = move |a: u32, b: u32| -> Vec<u64> {
            [a, b].iter().flat_map(|&v| vec_digits(v, q, n)).flat_map(|c| field.prime_coordinates(c)).collect()
        };
        let width = 2 * n * field.degree() as usize;
        let spans: Vec<HowellForm> = pairs
            .iter()
            .map(|&(x, y)| {
                let rows = sz.e_basis().iter().map(|f| coords(apply_matrix(field, n, f, x), apply_matrix(field, n, f, y)));
                HowellForm::new(field.characteristic(), width, rows, false)
            })
            .collect();
        Box::new(move |k, gx, gy| spans[k].contains(&coords(gx, gy)))
    };
    let mut out = Vec::new();
    for code in 0..ends {
        let g: Matrix = {
            let mut c = code;
            (0..n * n)
                .map(|_| {
                    let d = (c % q) as u32;
                    c /= q;
                    d
                })
                .collect()
        };
        let images: Vec<u32> = (0..qn as u32).map(|x| apply_matrix(field, n, &g, x)).collect();
        if pairs.iter().enumerate().all(|(k, &(x, y))| matcher(k, images[x as usize], images[y as usize])) {
            out.push(g);
        }
    }
    Ok(out)
}
