//! Small finite fields `F_q`, `q = p^k`.
//!
//! Elements are integers in `0..q` read as base-`p` digit vectors, i.e.
//! polynomials modulo the lexicographically smallest monic irreducible of
//! degree `k`. Digit `i` is the coefficient of `t^i`.

use crate::error::{Error, Result};

/// Largest field size supported; products are tabulated.
pub const MAX_FIELD_SIZE: u64 = 1024;

#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u64,
    k: u32,
    q: u64,
    modulus: Vec<u64>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// `(p, k)` with `q = p^k`, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let p = (2..=q).find(|&d| q % d == 0)?;
    let mut k = 0;
    let mut m = q;
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1 && is_prime(p)).then_some((p, k))
}

fn digits(x: u64, p: u64, k: u32) -> Vec<u64> {
    let mut v = Vec::with_capacity(k as usize);
    let mut x = x;
    for _ in 0..k {
        v.push(x % p);
        x /= p;
    }
    v
}

fn undigits(v: &[u64], p: u64) -> u64 {
    v.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Product of digit polynomials reduced modulo the monic `m` (degree k).
fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let k = m.len() - 1;
    let mut prod = vec![0u64; 2 * k.max(1)];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for d in (k..prod.len()).rev() {
        let c = prod[d];
        if c != 0 {
            for (j, &mj) in m.iter().enumerate() {
                let idx = d - k + j;
                prod[idx] = (prod[idx] + p * p - c * mj % p) % p;
            }
        }
    }
    prod.truncate(k);
    prod
}

fn is_irreducible(m: &[u64], p: u64) -> bool {
    // no monic factor of degree 1..=deg/2
    let k = m.len() - 1;
    for d in 1..=k / 2 {
        for code in 0..p.pow(d as u32) {
            let mut f = digits(code, p, d as u32);
            f.push(1);
            if poly_rem(m, &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv = (1..p).find(|&x| x * b[db] % p == 1).unwrap();
    while r.len() > db {
        let c = r[r.len() - 1] * inv % p;
        let shift = r.len() - 1 - db;
        for (j, &bj) in b.iter().enumerate() {
            r[shift + j] = (r[shift + j] + p * p - c * bj % p) % p;
        }
        r.pop();
    }
    r
}

impl FiniteField {
    pub fn new(q: u64) -> Result<FiniteField> {
        let (p, k) = prime_power(q).ok_or_else(|| Error::Spec(format!("{q} is not a prime power")))?;
        if q > MAX_FIELD_SIZE {
            return Err(Error::Budget { what: "field size", limit: MAX_FIELD_SIZE as usize });
        }
        let modulus = (0..q)
            .map(|code| {
                let mut m = digits(code, p, k);
                m.push(1);
                m
            })
            .find(|m| k == 1 || is_irreducible(m, p))
            .unwrap();
        let qs = q as usize;
        let mut add = vec![0u32; qs * qs];
        let mut mul = vec![0u32; qs * qs];
        let mut neg = vec![0u32; qs];
        for a in 0..q {
            let da = digits(a, p, k);
            neg[a as usize] = undigits(&da.iter().map(|&x| (p - x) % p).collect::<Vec<_>>(), p) as u32;
            for b in 0..q {
                let db = digits(b, p, k);
                let s: Vec<u64> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
                add[a as usize * qs + b as usize] = undigits(&s, p) as u32;
                mul[a as usize * qs + b as usize] = undigits(&poly_mulmod(&da, &db, &modulus, p), p) as u32;
            }
        }
        Ok(FiniteField { p, k, q, modulus, add, mul, neg })
    }

    pub fn size(&self) -> u64 {
        self.q
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    /// Coefficients of the defining polynomial, lowest first.
    pub fn defining_polynomial(&self) -> &[u64] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    /// Additive basis `1, t, ..., t^(k-1)` over `F_p`.
    pub fn prime_basis(&self) -> Vec<u32> {
        (0..self.k).map(|i| self.p.pow(i) as u32).collect()
    }

    /// Coordinates over `F_p` (the base-`p` digits).
    pub fn prime_coordinates(&self, a: u32) -> Vec<u64> {
        digits(a as u64, self.p, self.k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_small() {
        for q in [2u64, 3, 4, 8, 9] {
            let f = FiniteField::new(q).unwrap();
            for a in 0..q as u32 {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert!((1..q as u32).any(|b| f.mul(a, b) == 1), "q={q} a={a} has no inverse");
                }
                for b in 0..q as u32 {
                    for c in 0..q as u32 {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    }
                }
            }
        }
        assert!(FiniteField::new(6).is_err());
    }

    #[test]
    fn f4_polynomial() {
        assert_eq!(FiniteField::new(4).unwrap().defining_polynomial(), &[1, 1, 1]);
    }
}
