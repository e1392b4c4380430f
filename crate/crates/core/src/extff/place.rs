//! Places of tower levels, lifting, and conorms.

use std::fmt;
use std::sync::Arc;

use super::local::AsReduced;
use super::{Elem, StepKind, StepSpec, Tower, MAX_PREC, START_PREC};
use crate::error::{Error, Result};
use crate::galois::Field;
use crate::ratff::{self, Degree, Divisor, Place};
use crate::upoly::{fmt_elem, roots_in_field, Poly};

/// How a place sits over the place below it in one step.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Record {
    /// Unramified of residue degree one; the value of the step generator.
    Split(u64),
    /// All places above with ramification index `e`, lumped together; their
    /// degrees sum to `f` times the degree below. `f = 1` is a single
    /// (totally ramified) place.
    Fiber { e: u64, f: u64 },
}

/// A place of some tower level, described by its base place and the record
/// of each step. Fibers with `f > 1` stand for all places above.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtPlace {
    base: Place,
    chain: Vec<Record>,
}

pub type ExtDivisor = Divisor<ExtPlace>;

impl ExtPlace {
    pub fn base(p: Place) -> ExtPlace {
        ExtPlace { base: p, chain: Vec::new() }
    }

    pub fn base_place(&self) -> &Place {
        &self.base
    }

    pub fn chain(&self) -> &[Record] {
        &self.chain
    }

    pub fn level(&self) -> usize {
        self.chain.len()
    }

    pub fn child(&self, r: Record) -> ExtPlace {
        let mut chain = self.chain.clone();
        chain.push(r);
        ExtPlace { base: self.base.clone(), chain }
    }

    /// The place below, one level down.
    pub fn projection(&self) -> ExtPlace {
        self.project_to(self.level() - 1)
    }

    pub fn project_to(&self, level: usize) -> ExtPlace {
        ExtPlace { base: self.base.clone(), chain: self.chain[..level].to_vec() }
    }

    pub fn last(&self) -> Option<&Record> {
        self.chain.last()
    }

    pub fn last_e(&self) -> u64 {
        match self.chain.last() {
            Some(Record::Fiber { e, .. }) => *e,
            _ => 1,
        }
    }

    pub fn last_f(&self) -> u64 {
        match self.chain.last() {
            Some(Record::Fiber { f, .. }) => *f,
            _ => 1,
        }
    }

    /// Ramification index over the place `levels` steps below.
    pub fn ramification_over(&self, below: usize) -> u64 {
        self.chain[below..]
            .iter()
            .map(|r| match r {
                Record::Fiber { e, .. } => *e,
                Record::Split(_) => 1,
            })
            .product()
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }
}

impl Degree for ExtPlace {
    fn degree(&self) -> u64 {
        self.base.degree()
            * self
                .chain
                .iter()
                .map(|r| match r {
                    Record::Fiber { f, .. } => *f,
                    Record::Split(_) => 1,
                })
                .product::<u64>()
    }
}

impl ExtPlace {
    /// Label with field elements formatted for `field`.
    pub fn label(&self, field: &Field) -> String {
        let mut s = self.base.to_string();
        for r in &self.chain {
            match r {
                Record::Split(a) => s.push_str(&format!("/{}", fmt_elem(field, *a))),
                Record::Fiber { e, f: 1 } => s.push_str(&format!("/e{e}")),
                Record::Fiber { e: 1, f } => s.push_str(&format!("/f{f}")),
                Record::Fiber { e, f } => s.push_str(&format!("/e{e}f{f}")),
            }
        }
        s
    }
}

impl fmt::Display for ExtPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)?;
        for r in &self.chain {
            match r {
                Record::Split(a) => write!(f, "/{a}")?,
                Record::Fiber { e, f: 1 } => write!(f, "/e{e}")?,
                Record::Fiber { e: 1, f: d } => write!(f, "/f{d}")?,
                Record::Fiber { e, f: d } => write!(f, "/e{e}f{d}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ExtPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn is_precision(e: &Error) -> bool {
    matches!(e, Error::Precision(_))
}

impl Tower {
    /// Places of `level` above `p` (a place of `level - 1`), in canonical
    /// order.
    pub fn lift(&self, level: usize, p: &ExtPlace) -> Result<Vec<ExtPlace>> {
        let step = self.step(level);
        if let Some(s) = step.support.iter().find(|s| &s.place == p) {
            return Ok(s.above.clone());
        }
        Ok(self.classify(level, &step.spec, &step.f_elem, p)?.0)
    }

    /// Places of level `to` above `p`, with ramification indices over `p`.
    pub fn lift_to(&self, p: &ExtPlace, to: usize) -> Result<Vec<ExtPlace>> {
        let mut cur = vec![p.clone()];
        for level in p.level() + 1..=to {
            let mut next = Vec::new();
            for q in &cur {
                next.extend(self.lift(level, q)?);
            }
            cur = next;
        }
        Ok(cur)
    }

    /// Decides how `p` behaves in the step `spec` from `level - 1` to
    /// `level`; also returns the reduced pole order for Artin-Schreier
    /// ramification.
    pub(crate) fn classify(
        &self,
        level: usize,
        spec: &StepSpec,
        f_elem: &Elem,
        p: &ExtPlace,
    ) -> Result<(Vec<ExtPlace>, Option<i64>)> {
        let field = self.field();
        let m = spec.degree();
        if !p.is_rational() {
            if level >= 2 {
                return Ok((vec![p.child(Record::Fiber { e: 1, f: m })], None));
            }
            let v = ratff::valuation(&spec.f, &p.base)?;
            return match spec.kind {
                StepKind::Kummer { n } => {
                    let g = gcd(v.unsigned_abs(), n);
                    Ok((vec![p.child(Record::Fiber { e: n / g, f: g })], None))
                }
                StepKind::ArtinSchreier { q, .. } => {
                    if v >= 0 {
                        Ok((vec![p.child(Record::Fiber { e: 1, f: q })], None))
                    } else if v % field.characteristic() as i64 != 0 {
                        Ok((vec![p.child(Record::Fiber { e: q, f: 1 })], Some(-v)))
                    } else {
                        Err(Error::Unsupported(format!(
                            "Artin-Schreier reduction at the non-rational place {p}"
                        )))
                    }
                }
            };
        }
        let mut rel = START_PREC;
        loop {
            match self.classify_rational(spec, f_elem, p, rel) {
                Err(e) if is_precision(&e) && rel < MAX_PREC => rel *= 2,
                other => return other,
            }
        }
    }

    fn classify_rational(
        &self,
        spec: &StepSpec,
        f_elem: &Elem,
        p: &ExtPlace,
        rel: i64,
    ) -> Result<(Vec<ExtPlace>, Option<i64>)> {
        let field = self.field();
        let loc = self.local(p, rel)?;
        let fs = loc.series(self, p.level(), f_elem)?;
        let v = fs
            .val()
            .ok_or_else(|| Error::Precision(format!("defining function at {p}")))?;
        let c = fs.lead().unwrap();
        match spec.kind {
            StepKind::Kummer { n } => {
                let g = gcd(v.unsigned_abs(), n);
                if g == 1 {
                    return Ok((vec![p.child(Record::Fiber { e: n, f: 1 })], None));
                }
                if g < n {
                    return Ok((vec![p.child(Record::Fiber { e: n / g, f: g })], None));
                }
                let t = &Poly::monomial(field, 1, n as usize) - &Poly::constant(field, c);
                let roots = roots_in_field(&t)?;
                if roots.is_empty() {
                    Ok((vec![p.child(Record::Fiber { e: 1, f: n })], None))
                } else {
                    Ok((roots.into_iter().map(|r| p.child(Record::Split(r))).collect(), None))
                }
            }
            StepKind::ArtinSchreier { q, mu } => match super::local::as_reduce(field, &fs, q, mu, rel)? {
                AsReduced::Ramified { m, .. } => {
                    Ok((vec![p.child(Record::Fiber { e: q, f: 1 })], Some(m)))
                }
                AsReduced::Regular { g, .. } => {
                    let c0 = g
                        .coeff(0)
                        .ok_or_else(|| Error::Precision(format!("residue at {p}")))?;
                    let t = &(&Poly::monomial(field, 1, q as usize) + &Poly::monomial(field, mu, 1))
                        - &Poly::constant(field, c0);
                    let roots = roots_in_field(&t)?;
                    if roots.is_empty() {
                        Ok((vec![p.child(Record::Fiber { e: 1, f: q })], None))
                    } else {
                        Ok((roots.into_iter().map(|r| p.child(Record::Split(r))).collect(), None))
                    }
                }
            },
        }
        .map(|(mut v, m)| {
            let _ = c;
            v.sort();
            (v, m)
        })
    }

    /// All rational places of `level`, in canonical order.
    pub fn rational_places(&self, level: usize) -> Result<Arc<Vec<ExtPlace>>> {
        if let Some(v) = self.0.rational.lock().unwrap().get(&level) {
            return Ok(v.clone());
        }
        let places = if level == 0 {
            ratff::rational_places(self.field()).into_iter().map(ExtPlace::base).collect()
        } else {
            let mut out = Vec::new();
            for p in self.rational_places(level - 1)?.iter() {
                out.extend(self.lift(level, p)?.into_iter().filter(ExtPlace::is_rational));
            }
            out
        };
        let places = Arc::new(places);
        self.0.rational.lock().unwrap().insert(level, places.clone());
        Ok(places)
    }

    /// Rational places of `level` lying above the base place `p`.
    pub fn places_above_base(&self, p: &Place, level: usize) -> Result<Vec<ExtPlace>> {
        self.lift_to(&ExtPlace::base(p.clone()), level)
    }

    /// `Con(A)` from level `from` to level `to`.
    pub fn conorm(&self, a: &ExtDivisor, from: usize, to: usize) -> Result<ExtDivisor> {
        let mut out = ExtDivisor::zero();
        for (p, n) in a.terms() {
            if p.level() != from {
                return Err(Error::InvalidDivisor(format!("{p} is not a place of level {from}")));
            }
            for q in self.lift_to(p, to)? {
                let e = q.ramification_over(from) as i64;
                out.add_term(q, n * e);
            }
        }
        Ok(out)
    }

    /// `Con(A)` of a divisor of the rational function field.
    pub fn conorm_base(&self, a: &Divisor, to: usize) -> Result<ExtDivisor> {
        self.conorm(&a.map_places(|p| ExtPlace::base(p.clone())), 0, to)
    }

    /// `(y_level)` for a Kummer step: `(1/n) Con((f))`.
    pub fn y_divisor(&self, level: usize) -> Result<ExtDivisor> {
        let step = self.step(level);
        let StepKind::Kummer { n } = step.kind() else {
            return Err(Error::Unsupported("divisor of an Artin-Schreier generator".into()));
        };
        let mut out = ExtDivisor::zero();
        for s in &step.support {
            for q in &s.above {
                out.add_term(q.clone(), s.valuation * q.last_e() as i64 / n as i64);
            }
        }
        Ok(out)
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
