//! Riemann-Roch spaces on tower levels.
//!
//! `L(A)` on level `i` is found inside `sum_t y^t L(B_t)` with divisors
//! `B_t` of level `i - 1` bounding the coefficients, and then cut out by
//! linear conditions on local expansions at the places where the bound is
//! not already sharp. Kummer steps use the eigenspace decomposition of the
//! invariant hull of `A`; Artin-Schreier steps use the trace dual basis.

use std::collections::{BTreeMap, BTreeSet};

use super::local::with_precision;
use super::{Elem, ExtDivisor, ExtPlace, StepKind, Tower};
use crate::error::{Error, Result};
use crate::linalg;
use crate::ratff::{self, Divisor, Place, RRBasis};

fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

impl Tower {
    /// A basis of `L(A)` on `level`.
    pub fn riemann_roch_ext(&self, level: usize, a: &ExtDivisor) -> Result<RRBasis<ExtDivisor, Elem>> {
        for p in a.support() {
            if p.level() != level {
                return Err(Error::InvalidDivisor(format!("{p} is not a place of level {level}")));
            }
        }
        if level == 0 {
            let g: Divisor = a.map_places(|p| p.base_place().clone());
            let b = ratff::riemann_roch_basis(self.field(), &g);
            return Ok(RRBasis {
                divisor: a.clone(),
                elements: b.elements.into_iter().map(Elem::Base).collect(),
            });
        }
        let step = self.step(level);
        let m = step.degree() as usize;
        // Invariant hull: constant over the places above each place below.
        let mut below: BTreeSet<ExtPlace> = a.support().map(ExtPlace::projection).collect();
        below.extend(step.support.iter().map(|s| s.place.clone()));
        let mut top: BTreeMap<ExtPlace, (i64, Vec<ExtPlace>)> = BTreeMap::new();
        for p in &below {
            let above = self.lift(level, p)?;
            let h = above.iter().map(|q| a.coeff(q)).max().unwrap_or(0);
            top.insert(p.clone(), (h, above));
        }
        let mut bounds = vec![ExtDivisor::zero(); m];
        for (p, (h, above)) in &top {
            let q = &above[0];
            let e = q.last_e() as i64;
            let vy = self.y_valuation_bound(level, q);
            for (t, b) in bounds.iter_mut().enumerate() {
                let t = t as i64;
                let c = match step.kind() {
                    StepKind::Kummer { .. } => floor_div(h + t * vy, e),
                    StepKind::ArtinSchreier { .. } => {
                        let d = step
                            .support
                            .iter()
                            .find(|s| &s.place == p)
                            .map_or(0, |s| s.different);
                        let beta = (m as i64 - 1 - t) * vy.min(0);
                        -floor_div(-h + beta + d, e)
                    }
                };
                b.add_term(p.clone(), c);
            }
        }
        let mut candidates = Vec::new();
        for (t, b) in bounds.iter().enumerate() {
            let basis = self.riemann_roch_ext(level - 1, b)?;
            for c in basis.elements {
                let mut v = vec![self.zero(level - 1); m];
                v[t] = c;
                candidates.push(Elem::Ext(v));
            }
        }
        if candidates.is_empty() {
            return Ok(RRBasis { divisor: a.clone(), elements: Vec::new() });
        }
        let mut places = Vec::new();
        for (h, above) in top.values() {
            for q in above {
                let needed = match step.kind() {
                    StepKind::Kummer { .. } => a.coeff(q) < *h,
                    StepKind::ArtinSchreier { .. } => q.last_e() > 1 || q.is_rational(),
                };
                if !needed {
                    continue;
                }
                if !q.is_rational() {
                    return Err(Error::Unsupported(format!(
                        "Riemann-Roch condition at the place {} of degree > 1",
                        q.label(self.field())
                    )));
                }
                places.push(q.clone());
            }
        }
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for q in &places {
            let bound = -a.coeff(q);
            rows.extend(with_precision(|rel| self.condition_rows(level, q, &candidates, bound, rel))?);
        }
        let f = self.field();
        let kernel = linalg::kernel(f, &rows, candidates.len());
        let elements = kernel
            .into_iter()
            .map(|v| {
                v.iter().zip(&candidates).fold(self.zero(level), |acc, (&c, z)| {
                    if c == 0 {
                        acc
                    } else {
                        self.add(&acc, &self.scale(z, c))
                    }
                })
            })
            .collect();
        Ok(RRBasis { divisor: a.clone(), elements })
    }

    fn condition_rows(
        &self,
        level: usize,
        q: &ExtPlace,
        candidates: &[Elem],
        bound: i64,
        rel: i64,
    ) -> Result<Vec<Vec<u64>>> {
        let local = self.local(q, rel)?;
        let conds: Vec<_> = candidates
            .iter()
            .map(|z| local.conditions(self, level, z, bound))
            .collect::<Result<_>>()?;
        let parts = conds[0].len();
        let mut rows = Vec::new();
        for j in 0..parts {
            let lo = conds.iter().map(|c| c[j].1.start).min().unwrap();
            let hi = conds[0][j].1.end;
            for e in lo..hi {
                let row = conds
                    .iter()
                    .map(|c| {
                        c[j].0
                            .coeff(e)
                            .ok_or_else(|| Error::Precision(format!("condition at {q}")))
                    })
                    .collect::<Result<Vec<u64>>>()?;
                if row.iter().any(|&x| x != 0) {
                    rows.push(row);
                }
            }
        }
        Ok(rows)
    }

    /// Base places where some element of `elems` or some step may have a
    /// pole or zero.
    fn critical_base_places(&self, elems: &[Elem]) -> Result<BTreeSet<Place>> {
        let mut out = BTreeSet::new();
        out.insert(Place::Infinite);
        for i in 1..=self.height() {
            for s in &self.step(i).support {
                out.insert(s.place.base_place().clone());
            }
        }
        for z in elems {
            for r in self.monomials(z).values() {
                for poly in [r.num(), r.den()] {
                    if !poly.is_constant() {
                        for (g, _) in crate::upoly::factorize(poly)? {
                            out.insert(Place::Finite(g));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// `z in L(A)`, decided by exact valuations at rational places and lower
    /// bounds elsewhere. `Ok(false)` means a violation or an undecidable
    /// place.
    pub fn in_riemann_roch(&self, level: usize, a: &ExtDivisor, z: &Elem) -> Result<bool> {
        if z.is_zero() {
            return Ok(true);
        }
        let mut places: BTreeSet<ExtPlace> = a.support().cloned().collect();
        for b in self.critical_base_places(std::slice::from_ref(z))? {
            places.extend(self.places_above_base(&b, level)?);
        }
        for p in places {
            if self.valuation_lower_bound(level, z, &p)? < -a.coeff(&p) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Checks that `elems` is a basis of `L(A)`: membership of every element,
    /// F_q-independence, and the dimension against the computed space.
    pub fn verified_basis(&self, level: usize, a: &ExtDivisor, elems: &[Elem]) -> Result<()> {
        for (i, z) in elems.iter().enumerate() {
            if !self.in_riemann_roch(level, a, z)? {
                return Err(Error::Certification(format!(
                    "element {i} ({}) is not in L({})",
                    self.display(z),
                    a
                )));
            }
        }
        let rank = linalg::rank(self.field(), &self.flatten(elems));
        if rank != elems.len() {
            return Err(Error::Certification(format!(
                "elements are dependent: rank {rank} of {}",
                elems.len()
            )));
        }
        let dim = self.riemann_roch_ext(level, a)?.dimension();
        if dim != rank {
            return Err(Error::Certification(format!("{rank} elements but l(A) = {dim}")));
        }
        Ok(())
    }
}
