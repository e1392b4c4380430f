//! Univariate polynomials and rational functions over GF(q).

mod factor;
pub mod parse;
mod ratfunc;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::galois::Field;

pub use factor::{factorize, roots_in_field, squarefree_decomposition};
pub use parse::{parse_expr, parse_poly, ExprAlgebra};
pub use ratfunc::RatFunc;

/// Dense polynomial, constant term first, never with trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    c: Vec<u64>,
}

impl Poly {
    pub fn new(field: &Field, mut c: Vec<u64>) -> Poly {
        while c.last() == Some(&0) {
            c.pop();
        }
        debug_assert!(c.iter().all(|&a| field.contains(a)));
        Poly { field: field.clone(), c }
    }

    pub fn zero(field: &Field) -> Poly {
        Poly { field: field.clone(), c: Vec::new() }
    }

    pub fn constant(field: &Field, a: u64) -> Poly {
        Poly::new(field, vec![a])
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, 1)
    }

    pub fn x(field: &Field) -> Poly {
        Poly::new(field, vec![0, 1])
    }

    /// `a * x^n`.
    pub fn monomial(field: &Field, a: u64, n: usize) -> Poly {
        let mut c = vec![0; n + 1];
        c[n] = a;
        Poly::new(field, c)
    }

    /// The monic linear polynomial `x - a`.
    pub fn linear(field: &Field, a: u64) -> Poly {
        Poly::new(field, vec![field.neg(a), 1])
    }

    /// Decodes `sum c_i q^i`, the inverse of [`Poly::encoding`].
    pub fn from_encoding(field: &Field, mut e: u128) -> Poly {
        let q = field.order() as u128;
        let mut c = Vec::new();
        while e > 0 {
            c.push((e % q) as u64);
            e /= q;
        }
        Poly::new(field, c)
    }

    /// `sum c_i q^i`, saturating for very large polynomials.
    pub fn encoding(&self) -> u128 {
        let q = self.field.order() as u128;
        self.c
            .iter()
            .rev()
            .fold(0u128, |acc, &a| acc.saturating_mul(q).saturating_add(a as u128))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0, for bound arithmetic.
    pub fn deg0(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lead(&self) -> u64 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn scale(&self, a: u64) -> Poly {
        let f = &self.field;
        Poly::new(f, self.c.iter().map(|&x| f.mul(x, a)).collect())
    }

    /// Monic associate; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.field.inv(self.lead()) {
            Some(i) if self.lead() != 1 => self.scale(i),
            _ => self.clone(),
        }
    }

    pub fn shift(&self, n: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0; n];
        c.extend_from_slice(&self.c);
        Poly::new(&self.field, c)
    }

    pub fn eval(&self, a: u64) -> u64 {
        let f = &self.field;
        self.c.iter().rev().fold(0, |acc, &x| f.add(f.mul(acc, a), x))
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| f.mul(a, f.from_int((i as u64 % f.characteristic()) as i64)))
            .collect();
        Poly::new(f, c)
    }

    /// Quotient and remainder; errors on a zero divisor.
    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let f = &self.field;
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let inv = f.inv(d.lead()).expect("nonzero leading coefficient");
        let mut r = self.c.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut q = vec![0u64; r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = f.mul(r[i + dd], inv);
            q[i] = c;
            if c != 0 {
                for (j, &dj) in d.c.iter().enumerate() {
                    r[i + j] = f.sub(r[i + j], f.mul(c, dj));
                }
            }
        }
        r.truncate(dd);
        Ok((Poly::new(f, q), Poly::new(f, r)))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).expect("nonzero divisor").1
    }

    /// Exact division; panics if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.divrem(d).expect("nonzero divisor");
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn divides(&self, other: &Poly) -> bool {
        !self.is_zero() && other.rem(self).is_zero()
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s*self + t*other = g` and `g` monic.
    pub fn ext_gcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero");
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        match f.inv(r0.lead()) {
            Some(i) => (r0.scale(i), s0.scale(i), t0.scale(i)),
            None => (r0, s0, t0),
        }
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut r = Poly::one(&self.field);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = &r * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        r
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, e: u64, m: &Poly) -> Poly {
        let mut r = Poly::one(&self.field).rem(m);
        let mut b = self.rem(m);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = (&r * &b).rem(m);
            }
            e >>= 1;
            if e > 0 {
                b = (&b * &b).rem(m);
            }
        }
        r
    }

    /// `self(g(x))`.
    pub fn compose(&self, g: &Poly) -> Poly {
        let f = &self.field;
        self.c
            .iter()
            .rev()
            .fold(Poly::zero(f), |acc, &a| &(&acc * g) + &Poly::constant(f, a))
    }

    /// Multiplicity of `p` as a factor of `self` (`self` nonzero).
    pub fn multiplicity(&self, p: &Poly) -> u32 {
        let mut n = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.divrem(p).expect("nonzero");
            if !r.is_zero() || cur.is_zero() {
                return n;
            }
            cur = q;
            n += 1;
        }
    }
}

impl Ord for Poly {
    /// Degree first (zero smallest), then coefficients from the top.
    fn cmp(&self, other: &Self) -> Ordering {
        self.c
            .len()
            .cmp(&other.c.len())
            .then_with(|| self.c.iter().rev().cmp(other.c.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let f = &self.field;
        let n = self.c.len().max(o.c.len());
        Poly::new(f, (0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect())
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let f = &self.field;
        let n = self.c.len().max(o.c.len());
        Poly::new(f, (0..n).map(|i| f.sub(self.coeff(i), o.coeff(i))).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = &self.field;
        Poly::new(f, self.c.iter().map(|&a| f.neg(a)).collect())
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let f = &self.field;
        if self.is_zero() || o.is_zero() {
            return Poly::zero(f);
        }
        let mut c = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, c)
    }
}

/// Writes a field element: plain integers in prime fields, `#e` otherwise.
pub fn fmt_elem(field: &Field, a: u64) -> String {
    if field.degree() == 1 {
        a.to_string()
    } else {
        format!("#{a}")
    }
}

impl Poly {
    /// Formats with a chosen variable name.
    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, &a) in self.c.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let t = if mono.is_empty() {
                fmt_elem(&self.field, a)
            } else if a == 1 {
                mono
            } else {
                format!("{}*{mono}", fmt_elem(&self.field, a))
            };
            terms.push(t);
        }
        terms.join(" + ")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.field.order(), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64, k: u32) -> Field {
        Field::new(p, k, None).unwrap()
    }

    #[test]
    fn division_and_gcd() {
        let f = gf(7, 1);
        let a = Poly::new(&f, vec![6, 0, 1]); // x^2 - 1
        let b = Poly::new(&f, vec![6, 1]); // x - 1
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(q, Poly::new(&f, vec![1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&Poly::new(&f, vec![2, 2])), Poly::new(&f, vec![1, 1]));
        assert_eq!(a.divrem(&Poly::zero(&f)).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn ext_gcd_identity() {
        let f = gf(2, 2);
        let a = Poly::new(&f, vec![1, 2, 3, 1]);
        let b = Poly::new(&f, vec![3, 0, 1]);
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(&(&s * &a) + &(&t * &b), g);
        assert!(g.is_monic());
    }

    #[test]
    fn ordering_and_display() {
        let f = gf(5, 1);
        let a = Poly::new(&f, vec![1, 1]);
        let b = Poly::new(&f, vec![0, 2]);
        let c = Poly::new(&f, vec![0, 0, 1]);
        assert!(a < b && b < c);
        assert_eq!(Poly::new(&f, vec![1, 3, 1]).to_string(), "x^2 + 3*x + 1");
        assert_eq!(Poly::new(&gf(2, 2), vec![2, 1]).to_string(), "x + #2");
        let e = Poly::new(&f, vec![4, 0, 3]);
        assert_eq!(Poly::from_encoding(&f, e.encoding()), e);
    }

    #[test]
    fn derivative_in_char_p() {
        let f = gf(3, 1);
        let a = Poly::new(&f, vec![1, 1, 1, 1]); // x^3 + x^2 + x + 1
        assert_eq!(a.derivative(), Poly::new(&f, vec![1, 2]));
        let cube = Poly::new(&f, vec![1, 0, 0, 1]);
        assert!(cube.derivative().is_zero());
        assert_eq!(cube.multiplicity(&Poly::new(&f, vec![1, 1])), 3);
    }
}
