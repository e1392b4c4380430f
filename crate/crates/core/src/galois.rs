//! Exact arithmetic in GF(p) and GF(p^k).
//!
//! Elements are handled in two layers. Hot loops work on raw integer
//! encodings (`u64`) through the methods of [`Field`]; the encoding of
//! `c_0 + c_1 a + ... + c_{k-1} a^{k-1}` is `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`
//! where `a` is a root of the defining modulus. [`FieldElement`] pairs an
//! encoding with its field and checks that operands agree.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Above this size no log/exp tables are built and multiplication falls back
/// to polynomial arithmetic modulo the defining polynomial.
const TABLE_LIMIT: u64 = 1 << 20;
const ADD_TABLE_LIMIT: u64 = 256;

struct Inner {
    p: u64,
    k: u32,
    q: u64,
    /// Monic defining polynomial, constant term first, length `k + 1`.
    modulus: Vec<u64>,
    /// Smallest-encoding multiplicative generator (1 when q = 2).
    generator: u64,
    exp: Vec<u64>,
    log: Vec<u32>,
    add: Vec<u32>,
}

/// A finite field GF(p^k) with a fixed defining modulus. Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.k == other.0.k && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.modulus.hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}; modulus {:?})", self.0.p, self.0.k, self.0.modulus)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.q)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

/// Minimal dense polynomial helpers over GF(p), used before any [`Field`]
/// exists (modulus validation and selection).
mod fp {
    use super::{mulmod, powmod};

    pub fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let inv_lead = powmod(m[dm], p - 2, p);
        while r.len() > dm {
            let c = mulmod(*r.last().unwrap(), inv_lead, p);
            let shift = r.len() - 1 - dm;
            for (i, &mi) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - mulmod(c, mi, p)) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
            }
        }
        rem(&out, m, p)
    }

    pub fn pow_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut r = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                r = mul_mod(&r, &b, m, p);
            }
            b = mul_mod(&b, &b, m, p);
            e >>= 1;
        }
        r
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out: Vec<u64> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    /// Rabin's irreducibility test for a monic polynomial.
    pub fn is_irreducible(m: &[u64], p: u64) -> bool {
        let k = (m.len() - 1) as u64;
        if k == 0 {
            return false;
        }
        if k == 1 {
            return true;
        }
        let x = vec![0u64, 1];
        let frob = |v: &[u64], times: u64| {
            let mut r = v.to_vec();
            for _ in 0..times {
                r = pow_mod(&r, p, m, p);
            }
            r
        };
        let full = frob(&x, k);
        if !sub(&full, &rem(&x, m, p), p).is_empty() {
            return false;
        }
        for r in super::prime_factors(k) {
            let h = frob(&x, k / r);
            let g = gcd(m, &sub(&h, &x, p), p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

impl Field {
    /// Builds GF(p^k). Without a modulus, the monic irreducible with the
    /// smallest encoding of its non-leading coefficients is chosen.
    pub fn new(p: u64, k: u32, modulus: Option<&[u64]>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::ZeroDegree);
        }
        let q = p.checked_pow(k).ok_or(Error::FieldTooLarge { p, k })?;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != k as usize + 1 || m[k as usize] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(Error::BadModulus(k));
                }
                if !fp::is_irreducible(m, p) {
                    return Err(Error::ReducibleModulus(p));
                }
                m.to_vec()
            }
            None => Self::smallest_irreducible(p, k),
        };
        let mut inner = Inner {
            p,
            k,
            q,
            modulus,
            generator: 1,
            exp: Vec::new(),
            log: Vec::new(),
            add: Vec::new(),
        };
        inner.generator = Self::find_generator(&inner);
        if q <= TABLE_LIMIT {
            let n = (q - 1) as usize;
            let mut exp = vec![0u64; n.max(1)];
            let mut log = vec![0u32; q as usize];
            let mut cur = 1u64;
            for (i, slot) in exp.iter_mut().enumerate().take(n) {
                *slot = cur;
                log[cur as usize] = i as u32;
                cur = slow_mul(&inner, cur, inner.generator);
            }
            inner.exp = exp;
            inner.log = log;
        }
        if q <= ADD_TABLE_LIMIT && p != 2 {
            let mut add = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    add[(a * q + b) as usize] = slow_add(&inner, a, b) as u32;
                }
            }
            inner.add = add;
        }
        Ok(Field(Arc::new(inner)))
    }

    /// Shorthand for the prime field GF(p).
    pub fn prime(p: u64) -> Result<Field> {
        Field::new(p, 1, None)
    }

    fn smallest_irreducible(p: u64, k: u32) -> Vec<u64> {
        if k == 1 {
            return vec![0, 1];
        }
        let mut code = 0u64;
        loop {
            let mut m = Vec::with_capacity(k as usize + 1);
            let mut c = code;
            for _ in 0..k {
                m.push(c % p);
                c /= p;
            }
            m.push(1);
            if m[0] != 0 && fp::is_irreducible(&m, p) {
                return m;
            }
            code += 1;
        }
    }

    fn find_generator(inner: &Inner) -> u64 {
        let q = inner.q;
        if q == 2 {
            return 1;
        }
        let factors = prime_factors(q - 1);
        (2..q)
            .chain(std::iter::once(1))
            .find(|&g| factors.iter().all(|&r| slow_pow(inner, g, (q - 1) / r) != 1))
            .expect("multiplicative group is cyclic")
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.k
    }

    pub fn order(&self) -> u64 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    /// Multiplicative generator with the smallest encoding. For GF(2) this is
    /// 1, the generator of the trivial group.
    pub fn primitive(&self) -> u64 {
        self.0.generator
    }

    pub fn contains(&self, a: u64) -> bool {
        a < self.0.q
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.0.q
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> u64 {
        n.rem_euclid(self.0.p as i64) as u64
    }

    pub fn digits(&self, a: u64) -> Vec<u64> {
        let mut a = a;
        (0..self.0.k)
            .map(|_| {
                let d = a % self.0.p;
                a /= self.0.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, d: &[u64]) -> u64 {
        d.iter().rev().fold(0u64, |acc, &c| acc * self.0.p + c % self.0.p)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let f = &self.0;
        if f.p == 2 {
            a ^ b
        } else if f.k == 1 {
            let s = a + b;
            if s >= f.p {
                s - f.p
            } else {
                s
            }
        } else if !f.add.is_empty() {
            f.add[(a * f.q + b) as usize] as u64
        } else {
            slow_add(f, a, b)
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        let f = &self.0;
        if f.p == 2 || a == 0 {
            a
        } else if f.k == 1 {
            f.p - a
        } else {
            let d: Vec<u64> = self.digits(a).into_iter().map(|c| (f.p - c) % f.p).collect();
            self.from_digits(&d)
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        let f = &self.0;
        if !f.log.is_empty() {
            let s = f.log[a as usize] as u64 + f.log[b as usize] as u64;
            let n = f.q - 1;
            f.exp[(if s >= n { s - n } else { s }) as usize]
        } else if f.k == 1 {
            mulmod(a, b, f.p)
        } else {
            slow_mul(f, a, b)
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        let f = &self.0;
        if !f.log.is_empty() {
            let n = f.q - 1;
            Some(f.exp[((n - f.log[a as usize] as u64) % n) as usize])
        } else {
            Some(self.pow(a, f.q - 2))
        }
    }

    pub fn div(&self, a: u64, b: u64) -> Result<u64> {
        self.inv(b).map(|bi| self.mul(a, bi)).ok_or(Error::DivisionByZero)
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let f = &self.0;
        if !f.log.is_empty() {
            let n = (f.q - 1) as u128;
            let idx = (f.log[a as usize] as u128 * (e as u128 % n)) % n;
            f.exp[idx as usize]
        } else {
            slow_pow(f, a, e)
        }
    }

    /// Power with a signed exponent; zero to a negative power is an error.
    pub fn pow_signed(&self, a: u64, e: i64) -> Result<u64> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            let ai = self.inv(a).ok_or(Error::DivisionByZero)?;
            Ok(self.pow(ai, e.unsigned_abs()))
        }
    }

    /// Inverse of the `p^r`-power Frobenius.
    pub fn frobenius_root(&self, a: u64, r: u32) -> u64 {
        let k = self.0.k;
        let back = (k - r % k) % k;
        let mut out = a;
        for _ in 0..back {
            out = self.pow(out, self.0.p);
        }
        out
    }

    pub fn element(&self, enc: u64) -> Result<FieldElement> {
        if enc >= self.0.q {
            return Err(Error::BadElement(enc));
        }
        Ok(FieldElement { field: self.clone(), value: enc })
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        let mut n = self.0.q - 1;
        for r in prime_factors(n) {
            while n.is_multiple_of(r) && self.pow(a, n / r) == 1 {
                n /= r;
            }
        }
        Some(n)
    }

    /// Embedding of `sub` into `self`, sending the generator of `sub`'s
    /// power basis to the smallest-encoding root of its modulus.
    pub fn embedding(&self, sub: &Field) -> Result<Embedding> {
        if sub.characteristic() != self.characteristic() || !self.degree().is_multiple_of(sub.degree()) {
            return Err(Error::NotSubfield(format!("{sub} in {self}")));
        }
        if self.order() > TABLE_LIMIT {
            return Err(Error::Unsupported(format!("subfield embedding into {self}")));
        }
        let m = sub.modulus();
        let eval = |r: u64| {
            m.iter()
                .rev()
                .fold(0u64, |acc, &c| self.add(self.mul(acc, r), self.from_int(c as i64)))
        };
        let root = self
            .elements()
            .find(|&r| eval(r) == 0)
            .ok_or_else(|| Error::NotSubfield(format!("{sub} in {self}")))?;
        let to_big: Vec<u64> = sub
            .elements()
            .map(|a| {
                sub.digits(a)
                    .iter()
                    .rev()
                    .fold(0u64, |acc, &c| self.add(self.mul(acc, root), self.from_int(c as i64)))
            })
            .collect();
        let from_big = to_big.iter().enumerate().map(|(i, &b)| (b, i as u64)).collect();
        Ok(Embedding { big: self.clone(), sub: sub.clone(), to_big, from_big })
    }
}

fn slow_add(f: &Inner, a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    let mut out = 0u64;
    let mut scale = 1u64;
    for _ in 0..f.k {
        let d = (a % f.p + b % f.p) % f.p;
        out += d * scale;
        scale = scale.wrapping_mul(f.p);
        a /= f.p;
        b /= f.p;
    }
    out
}

fn slow_mul(f: &Inner, a: u64, b: u64) -> u64 {
    if f.k == 1 {
        return mulmod(a, b, f.p);
    }
    let da: Vec<u64> = digits_of(f, a);
    let db: Vec<u64> = digits_of(f, b);
    let r = fp::mul_mod(&da, &db, &f.modulus, f.p);
    r.iter().rev().fold(0u64, |acc, &c| acc * f.p + c)
}

fn slow_pow(f: &Inner, a: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a;
    while e > 0 {
        if e & 1 == 1 {
            r = slow_mul(f, r, b);
        }
        b = slow_mul(f, b, b);
        e >>= 1;
    }
    r
}

fn digits_of(f: &Inner, mut a: u64) -> Vec<u64> {
    let mut d = Vec::with_capacity(f.k as usize);
    for _ in 0..f.k {
        d.push(a % f.p);
        a /= f.p;
    }
    fp::trim(&mut d);
    d
}

/// A fixed embedding of a subfield.
#[derive(Clone, Debug)]
pub struct Embedding {
    big: Field,
    sub: Field,
    to_big: Vec<u64>,
    from_big: HashMap<u64, u64>,
}

impl Embedding {
    pub fn big(&self) -> &Field {
        &self.big
    }

    pub fn sub(&self) -> &Field {
        &self.sub
    }

    pub fn embed(&self, a: u64) -> u64 {
        self.to_big[a as usize]
    }

    /// Preimage of a big-field element lying in the image of the subfield.
    pub fn restrict(&self, a: u64) -> Option<u64> {
        self.from_big.get(&a).copied()
    }

    /// Trace and norm of `a` down to the subfield, as Frobenius-orbit sum and
    /// product.
    pub fn trace_norm(&self, a: u64) -> (u64, u64) {
        let big = &self.big;
        let qs = self.sub.order();
        let steps = self.big.degree() / self.sub.degree();
        let mut tr = 0u64;
        let mut nm = 1u64;
        let mut cur = a;
        for _ in 0..steps {
            tr = big.add(tr, cur);
            nm = big.mul(nm, cur);
            cur = big.pow(cur, qs);
        }
        let tr = self.restrict(tr).expect("trace lies in the subfield");
        let nm = self.restrict(nm).expect("norm lies in the subfield");
        (tr, nm)
    }
}

/// A field element carrying its field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: u64,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.value, self.field)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// The four field operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn arith(&self, other: &FieldElement, op: Op) -> Result<FieldElement> {
        if self.field != other.field {
            return Err(Error::MixedFields);
        }
        let f = &self.field;
        let (a, b) = (self.value, other.value);
        let value = match op {
            Op::Add => f.add(a, b),
            Op::Sub => f.sub(a, b),
            Op::Mul => f.mul(a, b),
            Op::Div => f.div(a, b)?,
        };
        Ok(FieldElement { field: f.clone(), value })
    }

    /// Trace and norm to a subfield, returned as elements of `sub`.
    pub fn trace_norm_to_subfield(&self, sub: &Field) -> Result<(FieldElement, FieldElement)> {
        let emb = self.field.embedding(sub)?;
        let (t, n) = emb.trace_norm(self.value);
        Ok((sub.element(t)?, sub.element(n)?))
    }
}

/// Smallest-encoding generator of the multiplicative group, with a flag that
/// is `false` for the degenerate case q = 2.
pub fn primitive_element(field: &Field) -> (FieldElement, bool) {
    let g = field.primitive();
    (FieldElement { field: field.clone(), value: g }, field.order() > 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf4_default_modulus() {
        let f = Field::new(2, 2, None).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        // alpha * alpha = alpha + 1
        assert_eq!(f.mul(2, 2), 3);
        assert_eq!(f.add(2, 2), 0);
    }

    #[test]
    fn prime_field_and_errors() {
        let f = Field::new(5, 1, None).unwrap();
        assert_eq!(f.order(), 5);
        assert_eq!(Field::new(2, 2, Some(&[0, 1, 1])).unwrap_err(), Error::ReducibleModulus(2));
        assert_eq!(Field::new(6, 1, None).unwrap_err(), Error::NotPrime(6));
        assert!(matches!(Field::new(2, 70, None), Err(Error::FieldTooLarge { .. })));
        assert!(matches!(Field::new(3, 2, Some(&[1, 0, 2])), Err(Error::BadModulus(2))));
    }

    #[test]
    fn gf7_division() {
        let f = Field::prime(7).unwrap();
        assert_eq!(f.div(3, 5).unwrap(), 2);
        assert_eq!(f.div(3, 0), Err(Error::DivisionByZero));
        let a = f.element(3).unwrap();
        let g = Field::prime(5).unwrap().element(1).unwrap();
        assert_eq!(a.arith(&g, Op::Add), Err(Error::MixedFields));
    }

    #[test]
    fn traces_and_norms() {
        let f4 = Field::new(2, 2, None).unwrap();
        let f2 = Field::prime(2).unwrap();
        let (t, n) = f4.element(2).unwrap().trace_norm_to_subfield(&f2).unwrap();
        assert_eq!((t.value(), n.value()), (1, 1));
        let f9 = Field::new(3, 2, None).unwrap();
        let f3 = Field::prime(3).unwrap();
        let (t, _) = f9.element(1).unwrap().trace_norm_to_subfield(&f3).unwrap();
        assert_eq!(t.value(), 2);
        let f8 = Field::new(2, 3, None).unwrap();
        assert!(f8.element(1).unwrap().trace_norm_to_subfield(&f4).is_err());
    }

    #[test]
    fn primitive_elements() {
        assert_eq!(Field::prime(5).unwrap().primitive(), 2);
        assert_eq!(Field::prime(7).unwrap().primitive(), 3);
        assert_eq!(Field::new(2, 2, None).unwrap().primitive(), 2);
        let (one, nondegenerate) = primitive_element(&Field::prime(2).unwrap());
        assert_eq!(one.value(), 1);
        assert!(!nondegenerate);
    }

    #[test]
    fn slow_path_agrees_with_tables() {
        let f = Field::new(3, 3, None).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.mul(a, b), slow_mul(&f.0, a, b));
                assert_eq!(f.add(a, b), slow_add(&f.0, a, b));
            }
        }
    }

    #[test]
    fn trace_matches_frobenius_iteration() {
        let big = Field::new(2, 6, None).unwrap();
        for sub_k in [1u32, 2, 3] {
            let sub = Field::new(2, sub_k, None).unwrap();
            let emb = big.embedding(&sub).unwrap();
            let qs = sub.order();
            for a in big.elements() {
                let (t, n) = emb.trace_norm(a);
                let mut tr = 0;
                let mut nm = 1;
                let mut c = a;
                for _ in 0..(6 / sub_k) {
                    tr = big.add(tr, c);
                    nm = big.mul(nm, c);
                    c = big.pow(c, qs);
                }
                assert_eq!(emb.embed(t), tr);
                assert_eq!(emb.embed(n), nm);
            }
        }
    }

    #[test]
    fn encode_decode_round_trip() {
        for (p, k) in [(2u64, 4u32), (3, 2), (5, 2), (7, 1)] {
            let f = Field::new(p, k, None).unwrap();
            for a in f.elements() {
                assert_eq!(f.from_digits(&f.digits(a)), a);
            }
        }
    }
}
