//! Element arithmetic in a tower.
//!
//! An element of level `i > 0` is `sum_t a_t y_i^t` with coefficients of
//! level `i - 1`, stored densely with exactly `[F_i : F_(i-1)]` entries.

use std::collections::BTreeMap;

use super::{StepKind, Tower};
use crate::error::{Error, Result};
use crate::upoly::parse::{parse_with, ExprAlgebra};
use crate::upoly::{Poly, RatFunc};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Elem {
    Base(RatFunc),
    Ext(Vec<Elem>),
}

impl Elem {
    pub fn is_zero(&self) -> bool {
        match self {
            Elem::Base(r) => r.is_zero(),
            Elem::Ext(v) => v.iter().all(Elem::is_zero),
        }
    }

    /// Coefficients in the top variable; panics on a base element.
    pub fn coeffs(&self) -> &[Elem] {
        match self {
            Elem::Ext(v) => v,
            Elem::Base(_) => panic!("base element has no y-coefficients"),
        }
    }

    pub fn as_base(&self) -> Option<&RatFunc> {
        match self {
            Elem::Base(r) => Some(r),
            Elem::Ext(_) => None,
        }
    }

    /// Structural level (0 for base elements).
    pub fn level(&self) -> usize {
        match self {
            Elem::Base(_) => 0,
            Elem::Ext(v) => 1 + v[0].level(),
        }
    }
}

pub(crate) fn binomial_table(n: usize, p: u64) -> Vec<Vec<u64>> {
    let mut t = vec![vec![0u64; n + 1]; n + 1];
    for i in 0..=n {
        t[i][0] = 1;
        for j in 1..=i {
            t[i][j] = (t[i - 1][j - 1] + if j < i { t[i - 1][j] } else { 0 }) % p;
        }
    }
    t
}

impl Tower {
    pub fn zero(&self, level: usize) -> Elem {
        self.from_ratfunc(level, RatFunc::zero(self.field()))
    }

    pub fn one(&self, level: usize) -> Elem {
        self.constant(level, 1)
    }

    pub fn constant(&self, level: usize, a: u64) -> Elem {
        self.from_ratfunc(level, RatFunc::constant(self.field(), a))
    }

    /// A rational function viewed at `level`.
    pub fn from_ratfunc(&self, level: usize, r: RatFunc) -> Elem {
        self.lift_elem(&Elem::Base(r), 0, level)
    }

    /// Embeds an element of level `from` into level `to >= from`.
    pub fn lift_elem(&self, a: &Elem, from: usize, to: usize) -> Elem {
        let mut cur = a.clone();
        for i in from + 1..=to {
            let m = self.step(i).degree() as usize;
            let mut v = Vec::with_capacity(m);
            v.push(cur);
            let z = self.zero_at(i - 1);
            v.resize(m, z);
            cur = Elem::Ext(v);
        }
        cur
    }

    fn zero_at(&self, level: usize) -> Elem {
        let mut cur = Elem::Base(RatFunc::zero(self.field()));
        for i in 1..=level {
            cur = Elem::Ext(vec![cur; self.step(i).degree() as usize]);
        }
        cur
    }

    /// The generator of level `j` (`x` for `j = 0`) viewed at `level`.
    pub fn var(&self, level: usize, j: usize) -> Elem {
        if j == 0 {
            return self.from_ratfunc(level, RatFunc::x(self.field()));
        }
        let mut v = vec![self.zero_at(j - 1); self.step(j).degree() as usize];
        v[1] = self.one(j - 1);
        self.lift_elem(&Elem::Ext(v), j, level)
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Base(x), Elem::Base(y)) => Elem::Base(x.add(y)),
            (Elem::Ext(x), Elem::Ext(y)) => {
                Elem::Ext(x.iter().zip(y).map(|(p, q)| self.add(p, q)).collect())
            }
            _ => panic!("adding elements of different levels"),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match a {
            Elem::Base(x) => Elem::Base(x.neg()),
            Elem::Ext(x) => Elem::Ext(x.iter().map(|p| self.neg(p)).collect()),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    /// Multiplication by a constant.
    pub fn scale(&self, a: &Elem, c: u64) -> Elem {
        match a {
            Elem::Base(x) => Elem::Base(x.scale(c)),
            Elem::Ext(x) => Elem::Ext(x.iter().map(|p| self.scale(p, c)).collect()),
        }
    }

    /// Multiplication by an element of the level directly below.
    fn scale_below(&self, level: usize, a: &Elem, c: &Elem) -> Elem {
        Elem::Ext(a.coeffs().iter().map(|p| self.mul(level - 1, p, c)).collect())
    }

    pub fn mul(&self, level: usize, a: &Elem, b: &Elem) -> Elem {
        if level == 0 {
            return match (a, b) {
                (Elem::Base(x), Elem::Base(y)) => Elem::Base(x.mul(y)),
                _ => panic!("level mismatch"),
            };
        }
        let (ac, bc) = (a.coeffs(), b.coeffs());
        let step = self.step(level);
        let m = ac.len();
        let mut prod: Vec<Option<Elem>> = vec![None; 2 * m - 1];
        for (i, x) in ac.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in bc.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let t = self.mul(level - 1, x, y);
                prod[i + j] = Some(match prod[i + j].take() {
                    Some(s) => self.add(&s, &t),
                    None => t,
                });
            }
        }
        let accumulate = |prod: &mut Vec<Option<Elem>>, k: usize, t: Elem| {
            prod[k] = Some(match prod[k].take() {
                Some(s) => self.add(&s, &t),
                None => t,
            });
        };
        for k in (m..2 * m - 1).rev() {
            let Some(c) = prod[k].take() else { continue };
            if c.is_zero() {
                continue;
            }
            let cf = self.mul(level - 1, &c, &step.f_elem);
            match step.kind() {
                StepKind::Kummer { .. } => accumulate(&mut prod, k - m, cf),
                StepKind::ArtinSchreier { mu, .. } => {
                    accumulate(&mut prod, k - m, cf);
                    let f = self.field();
                    accumulate(&mut prod, k - m + 1, self.scale(&c, f.neg(mu)));
                }
            }
        }
        let z = self.zero_at(level - 1);
        Elem::Ext(prod.into_iter().take(m).map(|c| c.unwrap_or_else(|| z.clone())).collect())
    }

    pub fn pow(&self, level: usize, a: &Elem, e: i64) -> Result<Elem> {
        let base = if e < 0 { self.inv(level, a)? } else { a.clone() };
        let mut n = e.unsigned_abs();
        let mut r = self.one(level);
        let mut b = base;
        while n > 0 {
            if n & 1 == 1 {
                r = self.mul(level, &r, &b);
            }
            n >>= 1;
            if n > 0 {
                b = self.mul(level, &b, &b);
            }
        }
        Ok(r)
    }

    /// Image of `a` under the `k`-th automorphism of the top step of `level`:
    /// `y -> zeta_k * y` (Kummer) or `y -> y + c_k` (Artin-Schreier).
    pub fn conjugate(&self, level: usize, a: &Elem, k: usize) -> Elem {
        let step = self.step(level);
        let f = self.field();
        let c = step.automorphisms[k];
        let ac = a.coeffs();
        match step.kind() {
            StepKind::Kummer { .. } => Elem::Ext(
                ac.iter()
                    .enumerate()
                    .map(|(t, x)| self.scale(x, f.pow(c, t as u64)))
                    .collect(),
            ),
            StepKind::ArtinSchreier { .. } => {
                let m = ac.len();
                let binom = binomial_table(m, f.characteristic());
                let out = (0..m)
                    .map(|j| {
                        (j..m).fold(self.zero_at(level - 1), |acc, t| {
                            let coef = f.mul(f.from_int(binom[t][j] as i64), f.pow(c, (t - j) as u64));
                            self.add(&acc, &self.scale(&ac[t], coef))
                        })
                    })
                    .collect();
                Elem::Ext(out)
            }
        }
    }

    fn conjugate_product(&self, level: usize, a: &Elem) -> Elem {
        let n = self.step(level).automorphisms.len();
        (1..n).fold(self.one(level), |acc, k| self.mul(level, &acc, &self.conjugate(level, a, k)))
    }

    /// Norm to the level below.
    pub fn norm_down(&self, level: usize, a: &Elem) -> Elem {
        let prod = self.mul(level, a, &self.conjugate_product(level, a));
        let c = prod.coeffs();
        debug_assert!(c[1..].iter().all(Elem::is_zero), "norm left the subfield");
        c[0].clone()
    }

    /// Trace to the level below.
    pub fn trace_down(&self, level: usize, a: &Elem) -> Elem {
        let n = self.step(level).automorphisms.len();
        let sum = (0..n).fold(self.zero_at(level), |acc, k| self.add(&acc, &self.conjugate(level, a, k)));
        let c = sum.coeffs();
        debug_assert!(c[1..].iter().all(Elem::is_zero), "trace left the subfield");
        c[0].clone()
    }

    pub fn norm_to(&self, level: usize, a: &Elem, target: usize) -> Elem {
        (target + 1..=level).rev().fold(a.clone(), |acc, l| self.norm_down(l, &acc))
    }

    pub fn trace_to(&self, level: usize, a: &Elem, target: usize) -> Elem {
        (target + 1..=level).rev().fold(a.clone(), |acc, l| self.trace_down(l, &acc))
    }

    pub fn inv(&self, level: usize, a: &Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if level == 0 {
            return Ok(Elem::Base(a.as_base().expect("base").inv()?));
        }
        let conj = self.conjugate_product(level, a);
        let n = self.mul(level, a, &conj).coeffs()[0].clone();
        let ninv = self.inv(level - 1, &n)?;
        Ok(self.scale_below(level, &conj, &ninv))
    }

    pub fn div(&self, level: usize, a: &Elem, b: &Elem) -> Result<Elem> {
        Ok(self.mul(level, a, &self.inv(level, b)?))
    }

    /// Monomial expansion: exponent vector `(t_1, ..., t_level)` to
    /// rational-function coefficient, zero terms omitted.
    pub fn monomials(&self, a: &Elem) -> BTreeMap<Vec<usize>, RatFunc> {
        let mut out = BTreeMap::new();
        fn walk(a: &Elem, suffix: &mut Vec<usize>, out: &mut BTreeMap<Vec<usize>, RatFunc>) {
            match a {
                Elem::Base(r) => {
                    if !r.is_zero() {
                        let mut key = suffix.clone();
                        key.reverse();
                        out.insert(key, r.clone());
                    }
                }
                Elem::Ext(v) => {
                    for (t, c) in v.iter().enumerate() {
                        suffix.push(t);
                        walk(c, suffix, out);
                        suffix.pop();
                    }
                }
            }
        }
        walk(a, &mut Vec::new(), &mut out);
        out
    }

    /// Human-readable form using `x, y1, ..., yk` (or `y` for a single step).
    pub fn display(&self, a: &Elem) -> String {
        let terms = self.monomials(a);
        if terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = terms
            .iter()
            .map(|(exps, r)| {
                let mono: Vec<String> = exps
                    .iter()
                    .enumerate()
                    .filter(|(_, &t)| t > 0)
                    .map(|(i, &t)| {
                        let v = self.var_name(i + 1);
                        if t == 1 {
                            v
                        } else {
                            format!("{v}^{t}")
                        }
                    })
                    .collect();
                if mono.is_empty() {
                    return r.to_string();
                }
                let coef = r.to_string();
                let mono = mono.join("*");
                if r.is_one() {
                    mono
                } else if r.is_poly() && r.num().coeffs().iter().filter(|&&c| c != 0).count() == 1 {
                    format!("{coef}*{mono}")
                } else {
                    format!("({coef})*{mono}")
                }
            })
            .collect();
        parts.join(" + ")
    }

    /// Parses an element of `level`. Variables: `x` (or `x0`), `y1..yk`
    /// (or `x1..xk`), and `y` for the top generator.
    pub fn parse(&self, level: usize, text: &str) -> Result<Elem> {
        parse_with(text, &LevelAlgebra { tower: self, level })
    }

    /// Flattens elements into F_q-vectors over a common denominator so that
    /// F_q-linear independence can be decided by rank.
    pub fn flatten(&self, elems: &[Elem]) -> Vec<Vec<u64>> {
        let f = self.field();
        let expanded: Vec<_> = elems.iter().map(|e| self.monomials(e)).collect();
        let mut den = Poly::one(f);
        for m in &expanded {
            for r in m.values() {
                let g = den.gcd(r.den());
                den = (&den * r.den()).div_exact(&g);
            }
        }
        let mut keys: Vec<Vec<usize>> = expanded.iter().flat_map(|m| m.keys().cloned()).collect();
        keys.sort();
        keys.dedup();
        let nums: Vec<BTreeMap<Vec<usize>, Poly>> = expanded
            .iter()
            .map(|m| {
                m.iter()
                    .map(|(k, r)| (k.clone(), &r.num().clone() * &den.div_exact(r.den())))
                    .collect()
            })
            .collect();
        let width: usize = keys
            .iter()
            .map(|k| nums.iter().filter_map(|m| m.get(k)).map(|p| p.deg0() + 1).max().unwrap_or(1))
            .sum();
        nums.iter()
            .map(|m| {
                let mut row = Vec::with_capacity(width);
                for k in &keys {
                    let w = nums.iter().filter_map(|n| n.get(k)).map(|p| p.deg0() + 1).max().unwrap_or(1);
                    let p = m.get(k);
                    row.extend((0..w).map(|i| p.map_or(0, |p| p.coeff(i))));
                }
                row
            })
            .collect()
    }
}

struct LevelAlgebra<'a> {
    tower: &'a Tower,
    level: usize,
}

impl ExprAlgebra for LevelAlgebra<'_> {
    type Value = Elem;

    fn field(&self) -> &crate::galois::Field {
        self.tower.field()
    }
    fn constant(&self, a: u64) -> Elem {
        self.tower.constant(self.level, a)
    }
    fn variable(&self, name: &str) -> Option<Elem> {
        let j = match name {
            "x" => 0,
            "y" if self.level >= 1 => self.level,
            _ => {
                let rest = name.strip_prefix('y').or_else(|| name.strip_prefix('x'))?;
                let j: usize = rest.parse().ok()?;
                if name.starts_with('y') && j == 0 {
                    return None;
                }
                j
            }
        };
        (j <= self.level).then(|| self.tower.var(self.level, j))
    }
    fn add(&self, a: &Elem, b: &Elem) -> Elem {
        self.tower.add(a, b)
    }
    fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.tower.sub(a, b)
    }
    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        self.tower.mul(self.level, a, b)
    }
    fn div(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        self.tower.div(self.level, a, b)
    }
    fn pow(&self, a: &Elem, e: i64) -> Result<Elem> {
        self.tower.pow(self.level, a, e)
    }
}
