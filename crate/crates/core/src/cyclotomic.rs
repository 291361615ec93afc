//! Exact elements of cyclotomic fields `Q(zeta_e)`.
//!
//! An element with conductor `e` is stored as its coordinates in the power
//! basis `1, zeta, ..., zeta^(phi(e)-1)`, i.e. reduced modulo the cyclotomic
//! polynomial `Phi_e`. That form is unique, so equality at a common conductor
//! is coefficient equality. Mixed conductors are promoted to their lcm.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// `x^i mod Phi_e` for `i in 0..e`, as integer coordinate vectors.
struct Basis {
    phi: usize,
    powers: Vec<Vec<i64>>,
}

fn cyclotomic_poly(e: u32, cache: &mut HashMap<u32, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = cache.get(&e) {
        return p.clone();
    }
    // x^e - 1 divided by Phi_d for every proper divisor d
    let mut num = vec![0i64; e as usize + 1];
    num[0] = -1;
    num[e as usize] = 1;
    for d in 1..e {
        if e % d == 0 {
            let den = cyclotomic_poly(d, cache);
            num = poly_div_exact(&num, &den);
        }
    }
    cache.insert(e, num.clone());
    num
}

/// Quotient of integer polynomials (lowest degree first); `den` monic.
fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let nd = r.len() - 1;
    let mut q = vec![0i64; nd - dd + 1];
    for i in (0..=nd - dd).rev() {
        let c = r[i + dd];
        q[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                r[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

fn basis(e: u32) -> Arc<Basis> {
    static CACHE: OnceLock<Mutex<(HashMap<u32, Arc<Basis>>, HashMap<u32, Vec<i64>>)>> = OnceLock::new();
    let mut guard = CACHE.get_or_init(|| Mutex::new((HashMap::new(), HashMap::new()))).lock().unwrap();
    if let Some(b) = guard.0.get(&e) {
        return b.clone();
    }
    let phi_poly = cyclotomic_poly(e, &mut guard.1);
    let phi = phi_poly.len() - 1;
    let mut powers = Vec::with_capacity(e as usize);
    let mut v = vec![0i64; phi];
    if phi > 0 {
        v[0] = 1;
    }
    for _ in 0..e {
        powers.push(v.clone());
        // multiply by x, then eliminate x^phi
        let top = v[phi - 1];
        for j in (1..phi).rev() {
            v[j] = v[j - 1];
        }
        v[0] = 0;
        if top != 0 {
            for j in 0..phi {
                v[j] = v[j].checked_sub(top.checked_mul(phi_poly[j]).expect("cyclotomic overflow")).expect("cyclotomic overflow");
            }
        }
    }
    let b = Arc::new(Basis { phi, powers });
    guard.0.insert(e, b.clone());
    b
}

#[derive(Clone, Debug)]
pub struct Cyclotomic {
    e: u32,
    c: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn zero() -> Cyclotomic {
        Cyclotomic { e: 1, c: vec![BigRational::zero()] }
    }

    pub fn one() -> Cyclotomic {
        Cyclotomic::integer(1)
    }

    pub fn integer(k: i64) -> Cyclotomic {
        Cyclotomic { e: 1, c: vec![BigRational::from_integer(BigInt::from(k))] }
    }

    pub fn rational(q: BigRational) -> Cyclotomic {
        Cyclotomic { e: 1, c: vec![q] }
    }

    /// `zeta_e^k` with `zeta_e = exp(2 pi i / e)`.
    pub fn root(e: u32, k: i64) -> Cyclotomic {
        assert!(e >= 1);
        let b = basis(e);
        let k = k.rem_euclid(e as i64) as usize;
        let c = b.powers[k].iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
        Cyclotomic { e, c }
    }

    /// `sum_k m[k] zeta_e^k`.
    pub fn from_exponent_counts(e: u32, m: &[i64]) -> Cyclotomic {
        let b = basis(e);
        let mut acc = vec![0i64; b.phi];
        for (k, &mk) in m.iter().enumerate() {
            if mk != 0 {
                for (a, &p) in acc.iter_mut().zip(&b.powers[k % e as usize]) {
                    *a += mk * p;
                }
            }
        }
        Cyclotomic { e, c: acc.into_iter().map(|x| BigRational::from_integer(BigInt::from(x))).collect() }
    }

    pub fn conductor(&self) -> u32 {
        self.e
    }

    /// Power-basis coordinates at the stored conductor.
    pub fn coefficients(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    /// The rational value, if the element lies in `Q`.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.c.iter().skip(1).all(|x| x.is_zero()) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.to_rational().filter(|q| q.is_integer()).map(|q| q.to_integer())
    }

    /// Same element written at conductor `m`, a multiple of the current one.
    pub fn promote(&self, m: u32) -> Cyclotomic {
        if m == self.e {
            return self.clone();
        }
        assert_eq!(m % self.e, 0, "conductor {m} is not a multiple of {}", self.e);
        let step = (m / self.e) as usize;
        let b = basis(m);
        let mut out = vec![BigRational::zero(); b.phi];
        for (i, ci) in self.c.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (o, &p) in out.iter_mut().zip(&b.powers[(i * step) % m as usize]) {
                if p != 0 {
                    *o += ci * BigRational::from_integer(BigInt::from(p));
                }
            }
        }
        Cyclotomic { e: m, c: out }
    }

    fn common(a: &Cyclotomic, b: &Cyclotomic) -> (Cyclotomic, Cyclotomic) {
        let m = a.e.lcm(&b.e);
        (a.promote(m), b.promote(m))
    }

    /// Complex conjugate: `zeta^i -> zeta^-i`.
    pub fn conj(&self) -> Cyclotomic {
        self.map_exponents(|i| (self.e as usize - i) % self.e as usize)
    }

    /// Galois image `zeta -> zeta^k` with `gcd(k, e) = 1`.
    pub fn galois(&self, k: i64) -> Cyclotomic {
        let e = self.e as i64;
        assert_eq!(k.gcd(&e), 1);
        let k = k.rem_euclid(e) as usize;
        self.map_exponents(|i| (i * k) % self.e as usize)
    }

    fn map_exponents(&self, f: impl Fn(usize) -> usize) -> Cyclotomic {
        let b = basis(self.e);
        let mut out = vec![BigRational::zero(); b.phi];
        for (i, ci) in self.c.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (o, &p) in out.iter_mut().zip(&b.powers[f(i)]) {
                if p != 0 {
                    *o += ci * BigRational::from_integer(BigInt::from(p));
                }
            }
        }
        Cyclotomic { e: self.e, c: out }
    }

    /// Multiplication by `zeta_m^k`.
    pub fn mul_root(&self, m: u32, k: i64) -> Cyclotomic {
        let k = k.rem_euclid(m as i64);
        if k == 0 || self.is_zero() {
            return self.clone();
        }
        let l = self.e.lcm(&m);
        let a = self.promote(l);
        let shift = k as usize * (l / m) as usize;
        a.map_exponents(|i| (i + shift) % l as usize)
    }

    pub fn scale(&self, q: &BigRational) -> Cyclotomic {
        Cyclotomic { e: self.e, c: self.c.iter().map(|x| x * q).collect() }
    }

    /// Smallest conductor at which the element can be written.
    pub fn minimal_conductor(&self) -> u32 {
        let mut e = self.e;
        loop {
            let mut reduced = false;
            for d in (1..e).filter(|d| e % d == 0) {
                if Cyclotomic::fits(self, d) {
                    e = d;
                    reduced = true;
                    break;
                }
            }
            if !reduced {
                return e;
            }
        }
    }

    fn fits(&self, d: u32) -> bool {
        // self lies in Q(zeta_d) iff it is fixed by every zeta -> zeta^k, k = 1 mod d
        let e = self.e;
        (1..e as i64)
            .filter(|k| k.gcd(&(e as i64)) == 1 && (k - 1) % d as i64 == 0)
            .all(|k| self.galois(k) == *self)
    }

    /// Exponent-sum form `sum c_i zeta_e^i` with the stored conductor.
    pub fn to_json(&self) -> CyclotomicJson {
        CyclotomicJson { conductor: self.e, coeffs: self.c.iter().map(|q| q.to_string()).collect() }
    }
}

/// Serialized cyclotomic number: power-basis coefficients as rational strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclotomicJson {
    pub conductor: u32,
    pub coeffs: Vec<String>,
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Cyclotomic) -> bool {
        if self.e == other.e {
            return self.c == other.c;
        }
        let (a, b) = Cyclotomic::common(self, other);
        a.c == b.c
    }
}

impl Eq for Cyclotomic {}

impl PartialOrd for Cyclotomic {
    fn partial_cmp(&self, other: &Cyclotomic) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic order on coordinates at the common conductor; an arbitrary
/// but fixed total order used for sorting.
impl Ord for Cyclotomic {
    fn cmp(&self, other: &Cyclotomic) -> Ordering {
        let (a, b) = Cyclotomic::common(self, other);
        a.c.cmp(&b.c)
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, other: &Cyclotomic) -> Cyclotomic {
        let (a, b) = if self.e == other.e { (self.clone(), other.clone()) } else { Cyclotomic::common(self, other) };
        Cyclotomic { e: a.e, c: a.c.iter().zip(&b.c).map(|(x, y)| x + y).collect() }
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, other: &Cyclotomic) -> Cyclotomic {
        self + &(-other)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { e: self.e, c: self.c.iter().map(|x| -x).collect() }
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, other: &Cyclotomic) -> Cyclotomic {
        if let Some(q) = self.to_rational() {
            return other.scale(&q);
        }
        if let Some(q) = other.to_rational() {
            return self.scale(&q);
        }
        let (a, b) = if self.e == other.e { (self.clone(), other.clone()) } else { Cyclotomic::common(self, other) };
        let e = a.e as usize;
        let mut acc = vec![BigRational::zero(); e];
        for (i, x) in a.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.c.iter().enumerate() {
                if !y.is_zero() {
                    acc[(i + j) % e] += x * y;
                }
            }
        }
        let bs = basis(a.e);
        let mut out = vec![BigRational::zero(); bs.phi];
        for (k, ak) in acc.iter().enumerate() {
            if ak.is_zero() {
                continue;
            }
            for (o, &p) in out.iter_mut().zip(&bs.powers[k]) {
                if p != 0 {
                    *o += ak * BigRational::from_integer(BigInt::from(p));
                }
            }
        }
        Cyclotomic { e: a.e, c: out }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, other: Cyclotomic) -> Cyclotomic {
                (&self).$m(&other)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl std::iter::Sum for Cyclotomic {
    fn sum<I: Iterator<Item = Cyclotomic>>(iter: I) -> Cyclotomic {
        iter.fold(Cyclotomic::zero(), |a, b| &a + &b)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => format!("z{}", self.e),
                _ => format!("z{}^{}", self.e, i),
            };
            let coef = if mono.is_empty() {
                c.to_string()
            } else if c.is_one() {
                String::new()
            } else if (-c).is_one() {
                "-".to_string()
            } else {
                format!("{c}*")
            };
            terms.push(format!("{coef}{mono}"));
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        let mut s = terms[0].clone();
        for t in &terms[1..] {
            if let Some(rest) = t.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(rest);
            } else {
                s.push_str(" + ");
                s.push_str(t);
            }
        }
        write!(f, "{s}")
    }
}

/// Whether every coordinate is an integer (the element is in `Z[zeta_e]`).
pub fn is_algebraic_integer_form(x: &Cyclotomic) -> bool {
    x.c.iter().all(|q| q.is_integer())
}

/// Non-negative integer value, if `x` is one.
pub fn as_nonnegative_integer(x: &Cyclotomic) -> Option<u64> {
    let k = x.to_integer()?;
    if k.is_negative() {
        return None;
    }
    u64::try_from(k).ok()
}
