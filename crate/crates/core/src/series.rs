//! Truncated Laurent series over GF(q) with absolute precision tracking.
//!
//! A series stores the coefficients of `s^start, ..., s^(prec-1)`; everything
//! from `s^prec` on is unknown. Exact series (finite Laurent polynomials)
//! carry `prec = INF`. Operations whose exact result would be infinite are
//! truncated at a working relative precision supplied by the caller.

use crate::galois::Field;

pub const INF: i64 = i64::MAX / 4;

fn add_prec(a: i64, b: i64) -> i64 {
    if a >= INF || b >= INF {
        INF
    } else {
        (a + b).min(INF)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laurent {
    start: i64,
    coef: Vec<u64>,
    prec: i64,
}

/// Raised when no nonzero coefficient is known where one is required.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NeedPrecision;

impl Laurent {
    fn normalized(mut start: i64, mut coef: Vec<u64>, prec: i64) -> Laurent {
        if prec < INF {
            let known = (prec - start).max(0) as usize;
            coef.truncate(known);
        }
        let lead = coef.iter().position(|&c| c != 0).unwrap_or(coef.len());
        start += lead as i64;
        coef.drain(..lead);
        while coef.last() == Some(&0) {
            coef.pop();
        }
        if coef.is_empty() {
            start = prec;
        }
        Laurent { start, coef, prec }
    }

    pub fn zero_exact() -> Laurent {
        Laurent { start: INF, coef: Vec::new(), prec: INF }
    }

    /// Zero known up to (excluding) `s^prec`.
    pub fn zero_to(prec: i64) -> Laurent {
        Laurent { start: prec, coef: Vec::new(), prec }
    }

    pub fn constant(a: u64) -> Laurent {
        Laurent::monomial(a, 0)
    }

    /// Exact `a * s^e`.
    pub fn monomial(a: u64, e: i64) -> Laurent {
        Laurent::normalized(e, vec![a], INF)
    }

    /// Exact Laurent polynomial with coefficients from `s^start`.
    pub fn exact(start: i64, coef: Vec<u64>) -> Laurent {
        Laurent::normalized(start, coef, INF)
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec >= INF
    }

    pub fn is_exact_zero(&self) -> bool {
        self.is_exact() && self.coef.is_empty()
    }

    /// Valuation if a nonzero coefficient is known.
    pub fn val(&self) -> Option<i64> {
        (!self.coef.is_empty()).then_some(self.start)
    }

    /// Lower bound for the valuation.
    pub fn lb(&self) -> i64 {
        self.start
    }

    pub fn lead(&self) -> Option<u64> {
        self.coef.first().copied()
    }

    /// Coefficient of `s^e`, or `None` if beyond the known precision.
    pub fn coeff(&self, e: i64) -> Option<u64> {
        if e >= self.prec {
            return None;
        }
        if e < self.start {
            return Some(0);
        }
        Some(self.coef.get((e - self.start) as usize).copied().unwrap_or(0))
    }

    /// Drops knowledge beyond `s^p`.
    pub fn truncate(&self, p: i64) -> Laurent {
        if p >= self.prec {
            return self.clone();
        }
        Laurent::normalized(self.start.min(p), self.coef.clone(), p)
    }

    pub fn add(&self, o: &Laurent, f: &Field) -> Laurent {
        let prec = self.prec.min(o.prec);
        if self.coef.is_empty() {
            return o.truncate(prec);
        }
        if o.coef.is_empty() {
            return self.truncate(prec);
        }
        let start = self.start.min(o.start);
        let end = (self.start + self.coef.len() as i64)
            .max(o.start + o.coef.len() as i64)
            .min(prec);
        let mut coef = vec![0u64; (end - start).max(0) as usize];
        for (i, &c) in self.coef.iter().enumerate() {
            let e = self.start + i as i64;
            if e < end {
                coef[(e - start) as usize] = c;
            }
        }
        for (i, &c) in o.coef.iter().enumerate() {
            let e = o.start + i as i64;
            if e < end {
                let slot = &mut coef[(e - start) as usize];
                *slot = f.add(*slot, c);
            }
        }
        Laurent::normalized(start, coef, prec)
    }

    pub fn neg(&self, f: &Field) -> Laurent {
        Laurent {
            start: self.start,
            coef: self.coef.iter().map(|&c| f.neg(c)).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, o: &Laurent, f: &Field) -> Laurent {
        self.add(&o.neg(f), f)
    }

    pub fn scale(&self, a: u64, f: &Field) -> Laurent {
        if a == 0 {
            return Laurent::zero_exact();
        }
        Laurent {
            start: self.start,
            coef: self.coef.iter().map(|&c| f.mul(c, a)).collect(),
            prec: self.prec,
        }
    }

    /// Multiplies by `s^e`.
    pub fn shift(&self, e: i64) -> Laurent {
        if self.coef.is_empty() && self.is_exact() {
            return self.clone();
        }
        Laurent {
            start: self.start + e,
            coef: self.coef.clone(),
            prec: add_prec(self.prec, e),
        }
    }

    pub fn mul(&self, o: &Laurent, f: &Field) -> Laurent {
        if self.is_exact_zero() || o.is_exact_zero() {
            return Laurent::zero_exact();
        }
        let prec = add_prec(self.prec, o.lb()).min(add_prec(o.prec, self.lb()));
        if self.coef.is_empty() || o.coef.is_empty() {
            return Laurent::zero_to(prec);
        }
        let start = self.start + o.start;
        let full = self.coef.len() + o.coef.len() - 1;
        let len = if prec >= INF { full } else { ((prec - start).max(0) as usize).min(full) };
        let mut coef = vec![0u64; len];
        for (i, &a) in self.coef.iter().enumerate() {
            if a == 0 || i >= len {
                continue;
            }
            for (j, &b) in o.coef.iter().enumerate().take(len - i) {
                if b != 0 {
                    coef[i + j] = f.add(coef[i + j], f.mul(a, b));
                }
            }
        }
        Laurent::normalized(start, coef, prec)
    }

    /// Inverse with at most `rel` known coefficients.
    pub fn inv(&self, f: &Field, rel: i64) -> Result<Laurent, NeedPrecision> {
        let v = self.val().ok_or(NeedPrecision)?;
        let r = (self.prec.saturating_sub(v)).min(rel).max(1) as usize;
        let a: Vec<u64> = (0..r).map(|i| self.coef.get(i).copied().unwrap_or(0)).collect();
        let inv0 = f.inv(a[0]).expect("nonzero lead");
        let mut b = vec![0u64; r];
        b[0] = inv0;
        for k in 1..r {
            let mut s = 0u64;
            for j in 1..=k {
                if a[j] != 0 {
                    s = f.add(s, f.mul(a[j], b[k - j]));
                }
            }
            b[k] = f.neg(f.mul(s, inv0));
        }
        Ok(Laurent::normalized(-v, b, -v + r as i64))
    }

    pub fn pow(&self, mut e: u64, f: &Field) -> Laurent {
        let mut r = Laurent::constant(1);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b, f);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b, f);
            }
        }
        r
    }

    pub fn pow_signed(&self, e: i64, f: &Field, rel: i64) -> Result<Laurent, NeedPrecision> {
        if e >= 0 {
            Ok(self.pow(e as u64, f))
        } else {
            Ok(self.inv(f, rel)?.pow(e.unsigned_abs(), f))
        }
    }

    /// Substitutes `s = lambda * t^e` (e >= 1).
    pub fn subst(&self, lambda: u64, e: i64, f: &Field) -> Laurent {
        if self.coef.is_empty() {
            return Laurent { start: self.start.saturating_mul(e).min(INF), coef: Vec::new(), prec: self.prec.saturating_mul(e).min(INF) };
        }
        let start = self.start * e;
        let mut coef = vec![0u64; (self.coef.len() - 1) * e as usize + 1];
        for (i, &c) in self.coef.iter().enumerate() {
            let k = self.start + i as i64;
            let lk = f.pow_signed(lambda, k).expect("nonzero lambda");
            coef[i * e as usize] = f.mul(c, lk);
        }
        let prec = if self.is_exact() { INF } else { self.prec * e };
        Laurent::normalized(start, coef, prec)
    }

    /// `h` with `h^n = self` and `h(0) = 1`, for `self` of valuation 0 and
    /// leading coefficient 1, `n` invertible in the field.
    pub fn nth_root_unit(&self, n: u64, f: &Field, rel: i64) -> Result<Laurent, NeedPrecision> {
        if self.val() != Some(0) || self.lead() != Some(1) {
            return Err(NeedPrecision);
        }
        let r = self.prec.min(rel).max(1);
        let target = self.truncate(r);
        let nn = f.from_int((n % f.characteristic()) as i64);
        let ninv = f.inv(nn).expect("n invertible");
        let mut h = Laurent::constant(1).truncate(r);
        let mut known = 1;
        while known < r {
            // Newton step h <- h - (h^n - u) / (n h^(n-1))
            let hn1 = h.pow(n - 1, f).truncate(r);
            let num = hn1.mul(&h, f).truncate(r).sub(&target, f);
            let corr = num.mul(&hn1.inv(f, r)?, f).scale(ninv, f).truncate(r);
            h = h.sub(&corr, f).truncate(r);
            known *= 2;
        }
        Ok(h)
    }

    /// Evaluates a polynomial (constant term first) at this series.
    pub fn eval_poly(&self, coeffs: &[u64], f: &Field) -> Laurent {
        coeffs
            .iter()
            .rev()
            .fold(Laurent::zero_exact(), |acc, &c| acc.mul(self, f).add(&Laurent::constant(c), f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_product() {
        let f = Field::prime(7).unwrap();
        let a = Laurent::exact(-1, vec![3, 1, 4]);
        let b = a.inv(&f, 10).unwrap();
        assert_eq!(b.val(), Some(1));
        let one = a.mul(&b, &f);
        assert_eq!(one.coeff(0), Some(1));
        for e in 1..10 {
            assert_eq!(one.coeff(e), Some(0));
        }
        assert_eq!(one.coeff(10), None);
    }

    #[test]
    fn roots_of_units() {
        let f = Field::new(2, 6, None).unwrap();
        let u = Laurent::exact(0, vec![1, 5, 0, 7]);
        let h = u.nth_root_unit(3, &f, 20).unwrap();
        let back = h.pow(3, &f);
        assert_eq!(back.prec(), 20);
        for e in 0..20 {
            assert_eq!(back.coeff(e), u.coeff(e));
        }
    }

    #[test]
    fn substitution_and_cancellation() {
        let f = Field::prime(5).unwrap();
        let a = Laurent::exact(1, vec![2, 3]);
        let b = a.subst(2, 3, &f);
        assert_eq!(b.val(), Some(3));
        assert_eq!(b.coeff(3), Some(4));
        assert_eq!(b.coeff(6), Some(2));
        let t = a.truncate(5);
        let d = t.sub(&a, &f);
        assert_eq!(d.val(), None);
        assert_eq!(d.prec(), 5);
        assert!(d.inv(&f, 4).is_err());
    }
}
