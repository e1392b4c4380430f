//! The rational function field GF(q)(x): places, divisors, valuations and
//! Riemann-Roch spaces.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::galois::Field;
use crate::linalg;
use crate::upoly::{factorize, fmt_elem, Poly, RatFunc};

/// A place of GF(q)(x): a monic irreducible polynomial or infinity.
///
/// Places are ordered by degree, rational finite places by the encoding of
/// their point, and infinity comes last.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Place {
    Finite(Poly),
    Infinite,
}

impl Ord for Place {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (Place::Infinite, Place::Infinite) => std::cmp::Ordering::Equal,
            (Place::Infinite, _) => std::cmp::Ordering::Greater,
            (_, Place::Infinite) => std::cmp::Ordering::Less,
            (Place::Finite(a), Place::Finite(b)) => match (self.point(), other.point()) {
                (Some(x), Some(y)) => x.cmp(&y),
                _ => a.cmp(b),
            },
        }
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Anything with a degree over the constant field.
pub trait Degree {
    fn degree(&self) -> u64;
}

impl Degree for Place {
    fn degree(&self) -> u64 {
        match self {
            Place::Finite(p) => p.deg0() as u64,
            Place::Infinite => 1,
        }
    }
}

impl Place {
    /// The zero of `x - a`.
    pub fn rational(field: &Field, a: u64) -> Place {
        Place::Finite(Poly::linear(field, a))
    }

    /// Checked constructor from a polynomial.
    pub fn finite(p: Poly) -> Result<Place> {
        if !p.is_monic() || p.is_constant() {
            return Err(Error::InvalidPlace(format!("{p} is not monic of positive degree")));
        }
        let f = factorize(&p)?;
        if f.len() != 1 || f[0].1 != 1 {
            return Err(Error::InvalidPlace(format!("{p} is reducible")));
        }
        Ok(Place::Finite(p))
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Place::Infinite)
    }

    /// The point `a` of a finite rational place.
    pub fn point(&self) -> Option<u64> {
        match self {
            Place::Finite(p) if p.deg0() == 1 => Some(p.field().neg(p.coeff(0))),
            _ => None,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinite => f.write_str("P(inf)"),
            Place::Finite(p) => match self.point() {
                Some(a) => write!(f, "P({})", fmt_elem(p.field(), a)),
                None => write!(f, "P({p})"),
            },
        }
    }
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All rational places: finite ones by point encoding, then infinity.
pub fn rational_places(field: &Field) -> Vec<Place> {
    field
        .elements()
        .map(|a| Place::rational(field, a))
        .chain(std::iter::once(Place::Infinite))
        .collect()
}

/// A formal sum of places with integer coefficients; zero coefficients are
/// never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Divisor<P: Ord = Place> {
    terms: BTreeMap<P, i64>,
}

impl<P: Ord + Clone> Default for Divisor<P> {
    fn default() -> Self {
        Divisor { terms: BTreeMap::new() }
    }
}

impl<P: Ord + Clone> Divisor<P> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(p: P, n: i64) -> Self {
        let mut d = Self::zero();
        d.add_term(p, n);
        d
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (P, i64)>) -> Self {
        let mut d = Self::zero();
        for (p, n) in terms {
            d.add_term(p, n);
        }
        d
    }

    /// Sum of places with coefficient one each.
    pub fn sum_of(places: impl IntoIterator<Item = P>) -> Self {
        Self::from_terms(places.into_iter().map(|p| (p, 1)))
    }

    pub fn add_term(&mut self, p: P, n: i64) {
        if n == 0 {
            return;
        }
        let e = self.terms.entry(p.clone()).or_insert(0);
        *e += n;
        if *e == 0 {
            self.terms.remove(&p);
        }
    }

    pub fn coeff(&self, p: &P) -> i64 {
        self.terms.get(p).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&P, i64)> {
        self.terms.iter().map(|(p, &n)| (p, n))
    }

    pub fn support(&self) -> impl Iterator<Item = &P> {
        self.terms.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut d = self.clone();
        for (p, n) in o.terms() {
            d.add_term(p.clone(), n);
        }
        d
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(self.terms().map(|(p, n)| (p.clone(), n * k)))
    }

    /// Coefficient-wise `self >= o`.
    pub fn ge(&self, o: &Self) -> bool {
        self.sub(o).terms().all(|(_, n)| n >= 0)
    }

    pub fn is_effective(&self) -> bool {
        self.terms().all(|(_, n)| n >= 0)
    }

    pub fn disjoint(&self, o: &Self) -> bool {
        self.support().all(|p| o.coeff(p) == 0)
    }

    pub fn positive_part(&self) -> Self {
        Self::from_terms(self.terms().filter(|(_, n)| *n > 0).map(|(p, n)| (p.clone(), n)))
    }

    pub fn negative_part(&self) -> Self {
        Self::from_terms(self.terms().filter(|(_, n)| *n < 0).map(|(p, n)| (p.clone(), -n)))
    }

    pub fn map_places<Q: Ord + Clone>(&self, f: impl Fn(&P) -> Q) -> Divisor<Q> {
        Divisor::from_terms(self.terms().map(|(p, n)| (f(p), n)))
    }
}

impl<P: Ord + Clone + Degree> Divisor<P> {
    pub fn degree(&self) -> i64 {
        self.terms().map(|(p, n)| n * p.degree() as i64).sum()
    }
}

impl<P: Ord + fmt::Display> fmt::Display for Divisor<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (p, &n)) in self.terms.iter().enumerate() {
            let sign = match (i, n < 0) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            match n.abs() {
                1 => write!(f, "{sign}{p}")?,
                a => write!(f, "{sign}{a}*{p}")?,
            }
        }
        Ok(())
    }
}

impl<P: Ord + fmt::Display> fmt::Debug for Divisor<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A basis of a Riemann-Roch space together with its divisor.
#[derive(Clone, Debug)]
pub struct RRBasis<D, E> {
    pub divisor: D,
    pub elements: Vec<E>,
}

impl<D, E> RRBasis<D, E> {
    pub fn dimension(&self) -> usize {
        self.elements.len()
    }
}

/// `v_P(z)`; the zero function is an error.
pub fn valuation(z: &RatFunc, p: &Place) -> Result<i64> {
    if z.is_zero() {
        return Err(Error::ZeroFunction);
    }
    match p {
        Place::Infinite => z.order_at_infinity(),
        Place::Finite(m) => Ok(z.num().multiplicity(m) as i64 - z.den().multiplicity(m) as i64),
    }
}

pub fn principal_divisor(z: &RatFunc) -> Result<Divisor> {
    if z.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let mut d = Divisor::single(Place::Infinite, z.order_at_infinity()?);
    if !z.num().is_constant() {
        for (g, m) in factorize(z.num())? {
            d.add_term(Place::Finite(g), m as i64);
        }
    }
    if !z.den().is_constant() {
        for (g, m) in factorize(z.den())? {
            d.add_term(Place::Finite(g), -(m as i64));
        }
    }
    Ok(d)
}

/// Basis of `L(G) = {z : (z) + G >= 0}`, obtained as the kernel of the
/// linear conditions on the numerator over a fixed denominator.
pub fn riemann_roch_basis(field: &Field, g: &Divisor) -> RRBasis<Divisor, RatFunc> {
    let empty = RRBasis { divisor: g.clone(), elements: Vec::new() };
    let mut den = Poly::one(field);
    let mut zeros = Vec::new();
    for (p, n) in g.terms() {
        if let Place::Finite(m) = p {
            if n > 0 {
                den = &den * &m.pow(n as u64);
            } else {
                zeros.push(m.pow((-n) as u64));
            }
        }
    }
    let bound = den.deg0() as i64 + g.coeff(&Place::Infinite);
    if bound < 0 {
        return empty;
    }
    let cols = bound as usize + 1;
    // Row j of the system: coefficient of x^j in (sum c_i x^i) mod m.
    let mut rows = Vec::new();
    for m in &zeros {
        let reps: Vec<Poly> = (0..cols).map(|i| Poly::monomial(field, 1, i).rem(m)).collect();
        for j in 0..m.deg0() {
            rows.push(reps.iter().map(|r| r.coeff(j)).collect());
        }
    }
    let elements = linalg::kernel(field, &rows, cols)
        .into_iter()
        .map(|v| RatFunc::new(Poly::new(field, v), den.clone()).expect("nonzero denominator"))
        .collect();
    RRBasis { divisor: g.clone(), elements }
}

/// `z(P)` at a rational place.
pub fn evaluate(z: &RatFunc, p: &Place) -> Result<u64> {
    if !p.is_rational() {
        return Err(Error::NotRational(p.to_string()));
    }
    match p {
        Place::Finite(_) => z.eval(p.point().unwrap()).map_err(|_| Error::Pole(p.to_string())),
        Place::Infinite => {
            if z.is_zero() {
                return Ok(0);
            }
            let v = z.order_at_infinity()?;
            match v {
                v if v < 0 => Err(Error::Pole(p.to_string())),
                v if v > 0 => Ok(0),
                _ => Ok(z.field().div(z.num().lead(), z.den().lead())?),
            }
        }
    }
}

/// For `D = P_1 + ... + P_n` at finite rational places, returns the divisor
/// of `eta = dh/h` with `h = prod (x - a_i)`, and `h`. Each `P_i` is a simple
/// pole of `eta` with residue 1.
pub fn eta_divisor(field: &Field, d: &Divisor) -> Result<(Divisor, Poly)> {
    if d.is_zero() {
        return Err(Error::InvalidDivisor("empty evaluation divisor".into()));
    }
    let mut h = Poly::one(field);
    for (p, n) in d.terms() {
        if n != 1 {
            return Err(Error::InvalidDivisor(format!("{p} has coefficient {n}, expected 1")));
        }
        let a = p
            .point()
            .ok_or_else(|| Error::InvalidDivisor(format!("{p} is not a finite rational place")))?;
        h = &h * &Poly::linear(field, a);
    }
    let hr = RatFunc::from_poly(h.clone());
    let eta = principal_divisor(&hr.derivative())?
        .sub(&principal_divisor(&hr)?)
        .add(&Divisor::single(Place::Infinite, -2));
    Ok((eta, h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::upoly::parse::parse_expr;

    fn gf(p: u64, k: u32) -> Field {
        Field::new(p, k, None).unwrap()
    }

    #[test]
    fn valuations() {
        let f4 = gf(2, 2);
        let z = parse_expr("x^2/(x+1)", &f4).unwrap();
        assert_eq!(valuation(&z, &Place::Infinite).unwrap(), -1);
        assert_eq!(valuation(&z, &Place::rational(&f4, 1)).unwrap(), -1);
        assert_eq!(valuation(&RatFunc::x(&f4), &Place::rational(&f4, 0)).unwrap(), 1);
        assert_eq!(valuation(&RatFunc::zero(&f4), &Place::Infinite), Err(Error::ZeroFunction));
    }

    #[test]
    fn principal_divisors() {
        let f4 = gf(2, 2);
        let z = parse_expr("(x-#2)*(x-#3)", &f4).unwrap();
        let d = principal_divisor(&z).unwrap();
        let expect = Divisor::from_terms([
            (Place::rational(&f4, 2), 1),
            (Place::rational(&f4, 3), 1),
            (Place::Infinite, -2),
        ]);
        assert_eq!(d, expect);
        let f9 = gf(3, 2);
        let h = parse_expr("x^9 - x", &f9).unwrap();
        let d = principal_divisor(&h).unwrap();
        assert_eq!(d.coeff(&Place::Infinite), -9);
        assert!(f9.elements().all(|a| d.coeff(&Place::rational(&f9, a)) == 1));
        assert_eq!(d.degree(), 0);
    }

    #[test]
    fn riemann_roch_spaces() {
        let f4 = gf(2, 2);
        let b = riemann_roch_basis(&f4, &Divisor::single(Place::Infinite, 2));
        let expect: Vec<RatFunc> = ["1", "x", "x^2"].iter().map(|s| parse_expr(s, &f4).unwrap()).collect();
        assert_eq!(b.elements, expect);
        assert_eq!(riemann_roch_basis(&f4, &Divisor::single(Place::rational(&f4, 0), -1)).dimension(), 0);
        let g = Divisor::from_terms([
            (Place::rational(&f4, 2), 1),
            (Place::rational(&f4, 3), 1),
            (Place::Infinite, -2),
        ]);
        let b = riemann_roch_basis(&f4, &g);
        assert_eq!(b.elements, vec![parse_expr("1/((x-#2)*(x-#3))", &f4).unwrap()]);
        let irr = Place::finite(Poly::new(&f4, vec![2, 1, 1])).unwrap();
        let g = Divisor::from_terms([(irr.clone(), -1), (Place::Infinite, 3)]);
        let b = riemann_roch_basis(&f4, &g);
        assert_eq!(b.dimension(), 2);
        for z in &b.elements {
            assert!(valuation(z, &irr).unwrap() >= 1);
            assert!(valuation(z, &Place::Infinite).unwrap() >= -3);
        }
    }

    #[test]
    fn evaluation() {
        let f4 = gf(2, 2);
        let z = parse_expr("x^2/(x+1)", &f4).unwrap();
        assert_eq!(evaluate(&z, &Place::rational(&f4, 2)).unwrap(), 1);
        assert_eq!(evaluate(&RatFunc::one(&f4), &Place::Infinite).unwrap(), 1);
        assert!(matches!(evaluate(&RatFunc::x(&f4), &Place::Infinite), Err(Error::Pole(_))));
        let w = parse_expr("(2*x + 1)/(x + 1)", &gf(5, 1)).unwrap();
        assert_eq!(evaluate(&w, &Place::Infinite).unwrap(), 2);
    }

    #[test]
    fn eta_divisors() {
        let f9 = gf(3, 2);
        let d = Divisor::sum_of(f9.elements().map(|a| Place::rational(&f9, a)));
        let (eta, h) = eta_divisor(&f9, &d).unwrap();
        assert_eq!(h, &Poly::monomial(&f9, 1, 9) - &Poly::x(&f9));
        assert_eq!(eta, Divisor::single(Place::Infinite, 7).sub(&d));
        let f5 = gf(5, 1);
        let (eta, _) = eta_divisor(&f5, &Divisor::single(Place::rational(&f5, 0), 1)).unwrap();
        assert_eq!(eta, Divisor::from_terms([(Place::rational(&f5, 0), -1), (Place::Infinite, -1)]));
        assert!(eta_divisor(&f5, &Divisor::single(Place::rational(&f5, 0), 2)).is_err());
        assert!(eta_divisor(&f5, &Divisor::single(Place::Infinite, 1)).is_err());
    }
}
