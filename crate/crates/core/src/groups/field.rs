//! Arithmetic in GF(p^k).
//!
//! Elements are encoded as integers `0..q` whose base-`p` digits are the
//! coefficients of the residue polynomial, constant term first. Products go
//! through discrete log tables built from a primitive element.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::{is_prime, prime_factors};

const MAX_FIELD_SIZE: u64 = 1 << 20;

/// Parameters of a finite field: characteristic, degree and modulus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteFieldSpec {
    pub p: u64,
    pub k: u32,
    /// Monic modulus, constant term first, length `k + 1`.
    pub modulus: Vec<u64>,
}

impl FiniteFieldSpec {
    pub fn size(&self) -> u64 {
        self.p.pow(self.k)
    }
}

/// Builds GF(p^k) with the first irreducible monic modulus in the order of
/// the integer code of its lower coefficients.
pub fn ff_make(p: u64, k: u32) -> Result<FiniteFieldSpec> {
    if !is_prime(p) {
        return Err(Error::NonPrimeCharacteristic(p));
    }
    if k == 0 {
        return Err(Error::UnsupportedParameters(
            "extension degree must be >= 1".into(),
        ));
    }
    match p.checked_pow(k) {
        Some(q) if q <= MAX_FIELD_SIZE => {}
        _ => return Err(Error::FieldTooLarge { p, k }),
    }
    if k == 1 {
        return Ok(FiniteFieldSpec {
            p,
            k,
            modulus: vec![0, 1],
        });
    }
    let q = p.pow(k);
    for code in 0..q {
        let mut f = digits(code, p, k as usize);
        f.push(1);
        if is_irreducible(&f, p) {
            return Ok(FiniteFieldSpec { p, k, modulus: f });
        }
    }
    Err(Error::NoIrreducibleFound { p, k })
}

fn digits(mut code: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len + 1);
    for _ in 0..len {
        out.push(code % p);
        code /= p;
    }
    out
}

// Polynomials over GF(p), constant term first, no trailing zeros except for 0.

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    if a.is_empty() {
        a.push(0);
    }
    a
}

fn is_zero(a: &[u64]) -> bool {
    a.iter().all(|&c| c == 0)
}

fn poly_rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let f = trim(f.to_vec());
    let df = f.len() - 1;
    let lead_inv = crate::numtheory::inv_mod(f[df], p);
    let mut r = trim(a.to_vec());
    while r.len() > df && !is_zero(&r) {
        let dr = r.len() - 1;
        let c = r[dr] * lead_inv % p;
        let shift = dr - df;
        for (i, &fc) in f.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * fc % p) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    poly_rem(&poly_mul(a, b, p), f, p)
}

fn poly_powmod(base: &[u64], mut exp: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, f, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_mulmod(&acc, &b, f, p);
        }
        b = poly_mulmod(&b, &b, f, p);
        exp >>= 1;
    }
    acc
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !is_zero(&b) {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Rabin's test: `f` of degree `k` is irreducible iff `x^(p^k) = x mod f`
/// and `gcd(x^(p^(k/r)) - x, f) = 1` for every prime `r | k`.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let f = trim(f.to_vec());
    let k = f.len() - 1;
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    let frob = |times: usize| {
        let mut acc = x.clone();
        for _ in 0..times {
            acc = poly_powmod(&acc, p, &f, p);
        }
        acc
    };
    if !is_zero(&poly_sub(&frob(k), &x, p)) {
        return false;
    }
    for r in prime_factors(k as u64) {
        let h = poly_sub(&frob(k / r as usize), &x, p);
        let g = poly_gcd(&f, &h, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// A finite field with precomputed log/exp tables.
#[derive(Clone, Debug)]
pub struct GaloisField {
    spec: FiniteFieldSpec,
    q: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl GaloisField {
    pub fn new(spec: FiniteFieldSpec) -> Result<Self> {
        let p = spec.p;
        let k = spec.k as usize;
        let q = spec.size();
        if k > 1 && !is_irreducible(&spec.modulus, p) {
            return Err(Error::UnsupportedParameters(format!(
                "modulus {:?} is reducible over GF({p})",
                spec.modulus
            )));
        }
        let order = q - 1;
        let order_factors = prime_factors(order);
        // Find a primitive element by walking codes upward.
        for g in 1..q {
            let gp = digits(g, p, k);
            let is_primitive = order_factors.iter().all(|&r| {
                let pw = if k == 1 {
                    vec![crate::numtheory::pow_mod(g, order / r, p)]
                } else {
                    poly_powmod(&gp, order / r, &spec.modulus, p)
                };
                trim(pw) != vec![1]
            });
            if !is_primitive && order > 1 {
                continue;
            }
            let mut exp = Vec::with_capacity(order as usize);
            let mut log = vec![u32::MAX; q as usize];
            let mut cur = 1u64;
            for i in 0..order {
                exp.push(cur as u32);
                log[cur as usize] = i as u32;
                cur = if k == 1 {
                    cur * g % p
                } else {
                    let prod = poly_mulmod(&digits(cur, p, k), &gp, &spec.modulus, p);
                    encode(&prod, p)
                };
            }
            return Ok(GaloisField {
                spec,
                q: q as u32,
                exp,
                log,
            });
        }
        unreachable!("the multiplicative group of a finite field is cyclic")
    }

    pub fn from_order(q: u64) -> Result<Self> {
        let (p, k) = crate::numtheory::prime_power(q)
            .ok_or_else(|| Error::UnsupportedParameters(format!("{q} is not a prime power")))?;
        Self::new(ff_make(p, k)?)
    }

    pub fn spec(&self) -> &FiniteFieldSpec {
        &self.spec
    }

    pub fn size(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.spec.p as u32
    }

    /// A fixed generator of the multiplicative group.
    pub fn primitive(&self) -> u32 {
        if self.q == 2 {
            1
        } else {
            self.exp[1]
        }
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.spec.p as u32;
        if self.spec.k == 1 {
            return (a + b) % p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        let p = self.spec.p as u32;
        if self.spec.k == 1 {
            return (p - a % p) % p;
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        while a > 0 {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        let l = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % n as u64;
        self.exp[l as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let n = self.q - 1;
        let l = self.log[a as usize];
        Some(self.exp[((n - l) % n) as usize])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.q - 1) as u64;
        let l = self.log[a as usize] as u64 * (e % n) % n;
        self.exp[l as usize]
    }
}

fn encode(poly: &[u64], p: u64) -> u64 {
    poly.iter().rev().fold(0, |acc, &c| acc * p + c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_spec() {
        let f = ff_make(7, 1).unwrap();
        assert_eq!(f.size(), 7);
        assert_eq!(f.modulus, vec![0, 1]);
    }

    #[test]
    fn gf4_modulus() {
        let f = ff_make(2, 2).unwrap();
        assert_eq!(f.modulus, vec![1, 1, 1]);
        assert_eq!(f.size(), 4);
    }

    #[test]
    fn composite_characteristic_rejected() {
        assert!(matches!(
            ff_make(4, 1),
            Err(Error::NonPrimeCharacteristic(4))
        ));
    }

    #[test]
    fn oversized_field_rejected() {
        assert!(matches!(ff_make(2, 21), Err(Error::FieldTooLarge { .. })));
    }

    #[test]
    fn small_irreducibles_have_no_roots() {
        for (p, k) in [(2, 3), (3, 2), (3, 3), (5, 2), (7, 3), (2, 8)] {
            let f = ff_make(p, k).unwrap();
            assert_eq!(f.modulus.len(), k as usize + 1);
            if k <= 3 {
                for x in 0..p {
                    let v = f.modulus.iter().rev().fold(0, |acc, &c| (acc * x + c) % p);
                    assert_ne!(v, 0, "root {x} of {:?}", f.modulus);
                }
            }
        }
        // x^4 + 1 = (x^2+x+2)(x^2-x+2) over GF(3)
        assert!(!is_irreducible(&[1, 0, 0, 0, 1], 3));
        assert!(is_irreducible(&[1, 1, 0, 0, 1], 2));
    }

    #[test]
    fn inverses_by_enumeration() {
        for q in [2u64, 4, 8, 9, 25, 27, 49, 64, 121, 243, 256, 512] {
            let f = GaloisField::from_order(q).unwrap();
            for x in 1..q as u32 {
                let y = f.inv(x).unwrap();
                assert_eq!(f.mul(x, y), 1, "q={q} x={x}");
            }
            assert_eq!(f.inv(0), None);
        }
    }

    #[test]
    fn distributive_law_gf9() {
        let f = GaloisField::from_order(9).unwrap();
        for a in 0..9 {
            for b in 0..9 {
                for c in 0..9 {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
                assert_eq!(f.add(a, f.neg(a)), 0);
            }
        }
    }
}
