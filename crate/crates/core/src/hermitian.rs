//! The Hermitian function field `y^q + y = x^(q+1)` over GF(q^2) and its
//! one-point codes.

use crate::agcode::{self, LinearCode, Provenance};
use crate::error::{Error, Result};
use crate::extff::{Elem, ExtDivisor, ExtPlace, StepSpec, Tower};
use crate::galois::Field;
use crate::ratff::{Place, RRBasis};
use crate::upoly::{Poly, RatFunc};

#[derive(Clone, Debug)]
pub struct Hermitian {
    q: u64,
    field: Field,
    tower: Tower,
    /// Finite rational places `(alpha, beta)`, sorted by encodings.
    points: Vec<(u64, u64)>,
}

impl Hermitian {
    pub fn new(q: u64) -> Result<Hermitian> {
        let p = crate::galois::prime_factors(q);
        if q < 2 || p.len() != 1 {
            return Err(Error::Parameter(format!("{q} is not a prime power")));
        }
        let p = p[0];
        let mut r = 0;
        let mut t = q;
        while t > 1 {
            t /= p;
            r += 1;
        }
        if q * q > 1 << 16 {
            return Err(Error::Parameter(format!("q^2 = {} exceeds 2^16", q * q)));
        }
        let field = Field::new(p, 2 * r, None)?;
        let f = RatFunc::from_poly(Poly::monomial(&field, 1, q as usize + 1));
        let tower = Tower::build(&field, &[StepSpec::additive(q, 1, f)])?;
        let mut points = Vec::new();
        for a in field.elements() {
            let rhs = field.pow(a, q + 1);
            for b in field.elements() {
                if field.add(field.pow(b, q), b) == rhs {
                    points.push((a, b));
                }
            }
        }
        Ok(Hermitian { q, field, tower, points })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn genus(&self) -> i64 {
        (self.q * (self.q - 1) / 2) as i64
    }

    pub fn points(&self) -> &[(u64, u64)] {
        &self.points
    }

    /// Number of rational places, `q^3 + 1`.
    pub fn rational_place_count(&self) -> usize {
        self.points.len() + 1
    }

    pub fn place_at_infinity(&self) -> Result<ExtPlace> {
        Ok(self.tower.lift(1, &ExtPlace::base(Place::Infinite))?.remove(0))
    }

    /// The finite rational places as tower places, in the same order as
    /// `points`.
    pub fn finite_places(&self) -> Result<Vec<ExtPlace>> {
        let mut out = Vec::with_capacity(self.points.len());
        for a in self.field.elements() {
            out.extend(self.tower.lift(1, &ExtPlace::base(Place::rational(&self.field, a)))?);
        }
        Ok(out)
    }

    /// Exponents `(i, j)` with `j < q` and `q i + (q+1) j <= a`, ordered by
    /// pole order.
    pub fn one_point_exponents(&self, a: i64) -> Vec<(u64, u64)> {
        let q = self.q as i64;
        let mut e: Vec<(u64, u64)> = (0..q)
            .flat_map(|j| {
                let rest = a - (q + 1) * j;
                (0..=if rest < 0 { -1 } else { rest / q }).map(move |i| (i as u64, j as u64))
            })
            .collect();
        e.sort_by_key(|&(i, j)| (self.q * i + (self.q + 1) * j, j));
        e
    }

    /// Monomial basis of `L(a Q_inf)`.
    pub fn one_point_basis(&self, a: i64) -> Result<RRBasis<ExtDivisor, Elem>> {
        let t = &self.tower;
        let elements = self
            .one_point_exponents(a)
            .into_iter()
            .map(|(i, j)| {
                let x = t.pow(1, &t.var(1, 0), i as i64)?;
                let y = t.pow(1, &t.var(1, 1), j as i64)?;
                Ok(t.mul(1, &x, &y))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RRBasis { divisor: ExtDivisor::single(self.place_at_infinity()?, a), elements })
    }

    /// `H_a = C_L(D, a Q_inf)` with `D` all finite rational places; the
    /// dimension is the rank of the evaluation matrix.
    pub fn code(&self, a: i64) -> Result<LinearCode> {
        let f = &self.field;
        let exps = self.one_point_exponents(a);
        let rows = exps
            .iter()
            .map(|&(i, j)| self.points.iter().map(|&(x, y)| f.mul(f.pow(x, i), f.pow(y, j))).collect())
            .collect();
        let n = self.points.len();
        let prov = Provenance {
            places: self
                .points
                .iter()
                .map(|&(x, y)| format!("P({},{})", crate::upoly::fmt_elem(f, x), crate::upoly::fmt_elem(f, y)))
                .collect(),
            divisor: format!("{a}*Q(inf)"),
            deg_g: a,
            genus: self.genus(),
            basis: exps.iter().map(|&(i, j)| format!("x^{i}*y^{j}")).collect(),
        };
        let code = LinearCode::new(f, n, rows)?;
        let lo = if a < n as i64 { (n as i64 - a).max(1) as usize } else { 1 };
        Ok(code.with_design_bound(lo).with_provenance(prov))
    }

    /// Largest index with a dual: `q^3 + q^2 - q - 2`.
    pub fn max_index(&self) -> i64 {
        let q = self.q as i64;
        q * q * q + q * q - q - 2
    }

    /// Index `b` with `H_a^perp = H_b`.
    pub fn dual_index(&self, a: i64) -> Result<i64> {
        if a < 0 || a > self.max_index() {
            return Err(Error::Parameter(format!("index {a} outside 0..={}", self.max_index())));
        }
        Ok(self.max_index() - a)
    }
}

/// `H_a` built through the generic tower evaluation instead of direct
/// substitution; used to cross-check coordinates.
pub fn code_via_tower(h: &Hermitian, a: i64) -> Result<LinearCode> {
    let basis = h.one_point_basis(a)?;
    let places = h.finite_places()?;
    agcode::evaluation_code_ext(h.tower(), 1, &places, &basis.divisor, &basis.elements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agcode::codes_equal;

    #[test]
    fn place_counts_and_genus() {
        for (q, n, g) in [(2, 9, 1), (3, 28, 3), (4, 65, 6)] {
            let h = Hermitian::new(q).unwrap();
            assert_eq!(h.rational_place_count(), n);
            assert_eq!(h.genus(), g);
            assert_eq!(h.tower().genus(1), g);
            assert_eq!(h.tower().rational_places(1).unwrap().len(), n);
        }
        assert!(Hermitian::new(6).is_err());
    }

    #[test]
    fn one_point_spaces() {
        let h = Hermitian::new(3).unwrap();
        assert_eq!(h.one_point_exponents(4), vec![(0, 0), (1, 0), (0, 1)]);
        assert_eq!(h.one_point_exponents(12).len(), 10);
        assert_eq!(h.one_point_exponents(0).len(), 1);
        let b = h.one_point_basis(12).unwrap();
        h.tower().verified_basis(1, &b.divisor, &b.elements).unwrap();
    }

    #[test]
    fn codes_and_duals() {
        let h = Hermitian::new(3).unwrap();
        let rep = h.code(0).unwrap();
        assert_eq!((rep.length(), rep.dimension()), (27, 1));
        assert_eq!(h.code(27).unwrap().dimension(), 24);
        assert_eq!(h.dual_index(27).unwrap(), 4);
        for a in [0, 4, 10, 20, 27, 31] {
            let c = h.code(a).unwrap();
            let d = h.code(h.dual_index(a).unwrap()).unwrap();
            assert!(codes_equal(&c.dual(), &d).unwrap(), "a = {a}");
        }
        assert!(codes_equal(&h.code(10).unwrap(), &code_via_tower(&h, 10).unwrap()).unwrap());
        let h4 = Hermitian::new(4).unwrap();
        assert_eq!(h4.code(4).unwrap().dimension(), 2);
        assert_eq!(h4.dual_index(48).unwrap(), 26);
    }
}
