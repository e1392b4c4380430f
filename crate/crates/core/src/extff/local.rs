//! Local expansions of tower elements at rational places.
//!
//! At a rational place every generator is expanded as a Laurent series in
//! a uniformizer. The one exception is a place that is wildly ramified in
//! the top Artin-Schreier step: there `y = w + z` with `z^q + mu*z = g`
//! and `v(g) = -m` prime to the characteristic, and valuations are read off
//! from the expansion `sum_j b_j z^j` without expanding `z`.

use std::sync::Arc;

use super::elem::binomial_table;
use super::place::is_precision;
use super::{Elem, ExtPlace, Record, StepKind, Tower, MAX_PREC, START_PREC};
use crate::error::{Error, Result};
use crate::galois::Field;
use crate::ratff::{self, Place};
use crate::series::{Laurent, NeedPrecision, INF};

impl From<NeedPrecision> for Error {
    fn from(_: NeedPrecision) -> Error {
        Error::Precision("series inverse".into())
    }
}

/// Tail data at a wildly ramified place of the top step.
#[derive(Clone, Debug)]
pub struct AsTail {
    pub w: Laurent,
    pub m: i64,
    pub q: u64,
}

/// Expansions of `x, y_1, ...` at one place, truncated at a relative
/// precision `rel`.
#[derive(Clone, Debug)]
pub struct Local {
    pub vars: Vec<Laurent>,
    pub tail: Option<AsTail>,
    pub rel: i64,
}

pub(crate) enum AsReduced {
    /// `f = w^q + mu*w + g` with `v(g) = -m < 0`, `m` prime to `p`.
    Ramified { w: Laurent, m: i64 },
    /// `f = w^q + mu*w + g` with `v(g) >= 0`.
    Regular { w: Laurent, g: Laurent },
}

fn log_p(q: u64, p: u64) -> u32 {
    let mut r = 0;
    let mut t = q;
    while t > 1 {
        t /= p;
        r += 1;
    }
    r
}

/// Removes poles of `f` of order divisible by `q` by subtracting
/// `a^q + mu*a` for monomials `a`.
pub(crate) fn as_reduce(field: &Field, f: &Laurent, q: u64, mu: u64, _rel: i64) -> Result<AsReduced> {
    let p = field.characteristic();
    let r = log_p(q, p);
    let mut w = Laurent::zero_exact();
    let mut g = f.clone();
    loop {
        match g.val() {
            Some(v) if v < 0 => {
                if v % q as i64 == 0 {
                    let a = field.frobenius_root(g.lead().unwrap(), r);
                    let term = Laurent::monomial(a, v / q as i64);
                    w = w.add(&term, field);
                    g = g.sub(&term.pow(q, field), field).sub(&term.scale(mu, field), field);
                    continue;
                }
                if v % p as i64 != 0 {
                    return Ok(AsReduced::Ramified { w, m: -v });
                }
                return Err(Error::Unsupported(
                    "partially ramified Artin-Schreier place".into(),
                ));
            }
            Some(_) => return Ok(AsReduced::Regular { w, g }),
            None => {
                if g.prec() <= 0 {
                    return Err(Error::Precision("Artin-Schreier reduction".into()));
                }
                return Ok(AsReduced::Regular { w, g });
            }
        }
    }
}

impl Local {
    /// Expansion of an element of `level`; needs `level < vars.len()`.
    pub fn series(&self, tower: &Tower, level: usize, z: &Elem) -> Result<Laurent> {
        let f = tower.field();
        match z {
            Elem::Base(r) => {
                let x = &self.vars[0];
                let num = x.eval_poly(r.num().coeffs(), f);
                if r.den().is_one() {
                    return Ok(num);
                }
                let den = x.eval_poly(r.den().coeffs(), f);
                Ok(num.mul(&den.inv(f, self.rel)?, f))
            }
            Elem::Ext(v) => {
                if level >= self.vars.len() {
                    return Err(Error::Unsupported("expansion above a wildly ramified place".into()));
                }
                let y = &self.vars[level];
                let mut acc = Laurent::zero_exact();
                for a in v.iter().rev() {
                    acc = acc.mul(y, f);
                    if !a.is_zero() {
                        acc = acc.add(&self.series(tower, level - 1, a)?, f);
                    }
                }
                Ok(acc)
            }
        }
    }

    /// The parts `b_j` with `z = sum_j b_j (y - w)^j` at a tail place.
    fn tail_parts(&self, tower: &Tower, level: usize, z: &Elem) -> Result<Vec<Laurent>> {
        let f = tower.field();
        let tail = self.tail.as_ref().expect("tail place");
        let a = z.coeffs();
        let series: Vec<Laurent> = a
            .iter()
            .map(|c| if c.is_zero() { Ok(Laurent::zero_exact()) } else { self.series(tower, level - 1, c) })
            .collect::<Result<_>>()?;
        let q = tail.q as usize;
        let binom = binomial_table(q, f.characteristic());
        let wp: Vec<Laurent> = (0..q).scan(Laurent::constant(1), |acc, _| {
            let cur = acc.clone();
            *acc = acc.mul(&tail.w, f);
            Some(cur)
        }).collect();
        Ok((0..q)
            .map(|j| {
                (j..q).fold(Laurent::zero_exact(), |acc, t| {
                    let c = binom[t][j];
                    if c == 0 || series[t].is_exact_zero() {
                        acc
                    } else {
                        acc.add(&series[t].mul(&wp[t - j], f).scale(f.from_int(c as i64), f), f)
                    }
                })
            })
            .collect())
    }

    /// Exact valuation of a nonzero element of `level` at this place.
    pub fn valuation(&self, tower: &Tower, level: usize, z: &Elem) -> Result<i64> {
        if z.is_zero() {
            return Err(Error::ZeroFunction);
        }
        match &self.tail {
            Some(tail) if level == self.vars.len() => {
                let parts = self.tail_parts(tower, level, z)?;
                let q = tail.q as i64;
                let mut best: Option<i64> = None;
                for (j, b) in parts.iter().enumerate() {
                    if let Some(v) = b.val() {
                        let c = q * v - j as i64 * tail.m;
                        best = Some(best.map_or(c, |x: i64| x.min(c)));
                    }
                }
                let best = best.ok_or_else(|| Error::Precision("tail valuation".into()))?;
                for (j, b) in parts.iter().enumerate() {
                    if b.val().is_none() && !b.is_exact_zero() && q * b.lb() - j as i64 * tail.m < best {
                        return Err(Error::Precision("tail valuation".into()));
                    }
                }
                Ok(best)
            }
            _ => {
                let s = self.series(tower, level, z)?;
                s.val().ok_or_else(|| Error::Precision("valuation".into()))
            }
        }
    }

    /// Residue of an element regular at this place.
    pub fn evaluate(&self, tower: &Tower, level: usize, z: &Elem) -> Result<u64> {
        if z.is_zero() {
            return Ok(0);
        }
        let v = self.valuation(tower, level, z)?;
        if v < 0 {
            return Err(Error::Pole(format!("valuation {v}")));
        }
        if v > 0 {
            return Ok(0);
        }
        match &self.tail {
            Some(_) if level == self.vars.len() => Ok(self.tail_parts(tower, level, z)?[0].lead().unwrap()),
            _ => Ok(self.series(tower, level, z)?.lead().unwrap()),
        }
    }

    /// Linear conditions expressing `v(z) >= bound`: each returned series
    /// must have vanishing coefficients at the listed exponents.
    pub(crate) fn conditions(
        &self,
        tower: &Tower,
        level: usize,
        z: &Elem,
        bound: i64,
    ) -> Result<Vec<(Laurent, std::ops::Range<i64>)>> {
        match &self.tail {
            Some(tail) if level == self.vars.len() => {
                let parts = self.tail_parts(tower, level, z)?;
                let q = tail.q as i64;
                Ok(parts
                    .into_iter()
                    .enumerate()
                    .map(|(j, b)| {
                        // q*v(b) - j*m >= bound
                        let need = (bound + j as i64 * tail.m).div_euclid(q)
                            + i64::from((bound + j as i64 * tail.m).rem_euclid(q) != 0);
                        let lo = b.lb().min(need);
                        (b, lo..need)
                    })
                    .collect())
            }
            _ => {
                let s = self.series(tower, level, z)?;
                let lo = s.lb().min(bound);
                Ok(vec![(s, lo..bound)])
            }
        }
    }
}

/// Runs `f` with doubling relative precision until it stops running out.
pub(crate) fn with_precision<T>(mut f: impl FnMut(i64) -> Result<T>) -> Result<T> {
    let mut rel = START_PREC;
    loop {
        match f(rel) {
            Err(e) if is_precision(&e) && rel < MAX_PREC => rel *= 2,
            other => return other,
        }
    }
}

impl Tower {
    /// Local expansions at a rational place, cached per precision.
    pub fn local(&self, p: &ExtPlace, rel: i64) -> Result<Arc<Local>> {
        let key = (p.clone(), rel);
        if let Some(l) = self.0.locals.lock().unwrap().get(&key) {
            return Ok(l.clone());
        }
        let l = Arc::new(self.build_local(p, rel)?);
        self.0.locals.lock().unwrap().insert(key, l.clone());
        Ok(l)
    }

    fn build_local(&self, p: &ExtPlace, rel: i64) -> Result<Local> {
        let f = self.field();
        if !p.is_rational() {
            return Err(Error::NotRational(p.label(f)));
        }
        let level = p.level();
        if level == 0 {
            let x = match p.base_place() {
                Place::Infinite => Laurent::monomial(1, -1),
                b => Laurent::exact(0, vec![b.point().unwrap(), 1]),
            };
            return Ok(Local { vars: vec![x], tail: None, rel });
        }
        let below = self.local(&p.projection(), rel)?;
        if below.tail.is_some() {
            return Err(Error::Unsupported(
                "places above a wildly ramified Artin-Schreier place".into(),
            ));
        }
        let step = self.step(level);
        let fs = below.series(self, level - 1, &step.f_elem)?;
        let mut vars = below.vars.clone();
        match (step.kind(), p.last().unwrap()) {
            (StepKind::Kummer { n }, Record::Split(rho)) => {
                let v = fs.val().ok_or_else(|| Error::Precision("Kummer split".into()))?;
                let c = fs.lead().unwrap();
                let u = fs.shift(-v).scale(f.inv(c).unwrap(), f);
                let h = u.nth_root_unit(n, f, rel)?;
                vars.push(h.shift(v / n as i64).scale(*rho, f));
            }
            (StepKind::Kummer { n }, Record::Fiber { e, f: 1 }) if *e == n => {
                let v = fs.val().ok_or_else(|| Error::Precision("Kummer ramified".into()))?;
                let c = fs.lead().unwrap();
                let ni = n as i64;
                // a*v = -1 mod n makes c * lambda^v an n-th power.
                let a = (0..ni).find(|a| (1 + a * v).rem_euclid(ni) == 0).unwrap();
                let lambda = f.pow(c, a as u64);
                let rho = f.pow_signed(c, (1 + a * v) / ni)?;
                vars = vars.iter().map(|s| s.subst(lambda, ni, f)).collect();
                let fs2 = fs.subst(lambda, ni, f);
                let rn = f.inv(f.pow(rho, n)).unwrap();
                let h = fs2.shift(-ni * v).scale(rn, f).nth_root_unit(n, f, rel)?;
                vars.push(h.shift(v).scale(rho, f));
            }
            (StepKind::ArtinSchreier { q, mu }, Record::Split(rho)) => {
                let AsReduced::Regular { w, g } = as_reduce(f, &fs, q, mu, rel)? else {
                    return Err(Error::InvalidPlace(p.label(f)));
                };
                let g0 = g.coeff(0).ok_or_else(|| Error::Precision("residue".into()))?;
                let rest = g.sub(&Laurent::constant(g0), f).truncate(rel);
                let muinv = f.inv(mu).unwrap();
                let mut delta = Laurent::zero_exact();
                for _ in 0..rel + 8 {
                    let next = rest.sub(&delta.pow(q, f), f).scale(muinv, f).truncate(rel);
                    if next == delta {
                        break;
                    }
                    delta = next;
                }
                vars.push(w.add(&Laurent::constant(*rho), f).add(&delta, f));
            }
            (StepKind::ArtinSchreier { q, mu }, Record::Fiber { e, f: 1 }) if *e == q => {
                let AsReduced::Ramified { w, m, .. } = as_reduce(f, &fs, q, mu, rel)? else {
                    return Err(Error::InvalidPlace(p.label(f)));
                };
                if level != self.height() {
                    return Err(Error::Unsupported(
                        "wild ramification below the top of the tower".into(),
                    ));
                }
                return Ok(Local { vars, tail: Some(AsTail { w, m, q }), rel });
            }
            _ => return Err(Error::InvalidPlace(p.label(f))),
        }
        Ok(Local { vars, tail: None, rel })
    }

    /// Exact valuation at a rational place of `level` (or any base place).
    pub fn valuation_ext(&self, level: usize, z: &Elem, p: &ExtPlace) -> Result<i64> {
        if z.is_zero() {
            return Err(Error::ZeroFunction);
        }
        if p.level() != level {
            return Err(Error::InvalidPlace(format!("{p} is not a place of level {level}")));
        }
        if level == 0 {
            return ratff::valuation(z.as_base().unwrap(), p.base_place());
        }
        if !p.is_rational() {
            return Err(Error::NotRational(p.label(self.field())));
        }
        with_precision(|rel| self.local(p, rel)?.valuation(self, level, z))
    }

    /// Value of `z` at a rational place of `level`.
    pub fn evaluate_ext(&self, level: usize, z: &Elem, p: &ExtPlace) -> Result<u64> {
        if level == 0 {
            return ratff::evaluate(z.as_base().unwrap(), p.base_place());
        }
        with_precision(|rel| self.local(p, rel)?.evaluate(self, level, z))
            .map_err(|e| match e {
                Error::Pole(_) => Error::Pole(p.label(self.field())),
                e => e,
            })
    }

    /// Lower bound for `v_P(z)`, exact at rational places. Returns `INF` for
    /// zero.
    pub fn valuation_lower_bound(&self, level: usize, z: &Elem, p: &ExtPlace) -> Result<i64> {
        if z.is_zero() {
            return Ok(INF);
        }
        if level == 0 || p.is_rational() {
            return self.valuation_ext(level, z, p);
        }
        let below = p.projection();
        let e = p.last_e() as i64;
        let vy = self.y_valuation_bound(level, p);
        let mut best = INF;
        for (t, a) in z.coeffs().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let lb = self.valuation_lower_bound(level - 1, a, &below)?;
            best = best.min(e * lb + t as i64 * vy);
        }
        Ok(best)
    }

    /// Lower bound for `v_P(y_level)` (exact for Kummer steps).
    pub(crate) fn y_valuation_bound(&self, level: usize, p: &ExtPlace) -> i64 {
        let step = self.step(level);
        let e = p.last_e() as i64;
        let vf = step.f_valuation(&p.projection());
        match step.kind() {
            StepKind::Kummer { n } => e * vf / n as i64,
            StepKind::ArtinSchreier { q, .. } => {
                if vf < 0 {
                    (e * vf).div_euclid(q as i64)
                } else {
                    0
                }
            }
        }
    }
}
