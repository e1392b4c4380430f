use std::fmt;

use super::Poly;
use crate::error::{Error, Result};
use crate::galois::Field;

/// A reduced quotient of polynomials with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let field = num.field().clone();
        if num.is_zero() {
            return Ok(RatFunc::zero(&field));
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num.div_exact(&g), den.div_exact(&g));
        let inv = field.inv(d.lead()).expect("nonzero");
        if inv != 1 {
            n = n.scale(inv);
            d = d.scale(inv);
        }
        Ok(RatFunc { num: n, den: d })
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        let den = Poly::one(p.field());
        RatFunc { num: p, den }
    }

    pub fn zero(field: &Field) -> RatFunc {
        RatFunc::from_poly(Poly::zero(field))
    }

    pub fn one(field: &Field) -> RatFunc {
        RatFunc::constant(field, 1)
    }

    pub fn constant(field: &Field, a: u64) -> RatFunc {
        RatFunc::from_poly(Poly::constant(field, a))
    }

    pub fn x(field: &Field) -> RatFunc {
        RatFunc::from_poly(Poly::x(field))
    }

    pub fn field(&self) -> &Field {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    /// The constant value if this is a constant.
    pub fn as_constant(&self) -> Option<u64> {
        (self.den.is_one() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    /// `deg(den) - deg(num)`, the order at infinity.
    pub fn order_at_infinity(&self) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::ZeroFunction);
        }
        Ok(self.den.deg0() as i64 - self.num.deg0() as i64)
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc::new(&self.num + &o.num, self.den.clone()).expect("nonzero");
        }
        let num = &(&self.num * &o.den) + &(&o.num * &self.den);
        RatFunc::new(num, &self.den * &o.den).expect("nonzero")
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &o.num, &self.den * &o.den).expect("nonzero")
    }

    pub fn scale(&self, a: u64) -> RatFunc {
        if a == 0 {
            return RatFunc::zero(self.field());
        }
        RatFunc { num: self.num.scale(a), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<RatFunc> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<RatFunc> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let n = e.unsigned_abs();
        Ok(RatFunc { num: base.num.pow(n), den: base.den.pow(n) })
    }

    /// Value at `a`; errors if `a` is a pole.
    pub fn eval(&self, a: u64) -> Result<u64> {
        let d = self.den.eval(a);
        let f = self.field();
        f.div(self.num.eval(a), d)
            .map_err(|_| Error::Pole(format!("x = {}", super::fmt_elem(f, a))))
    }

    /// Substitutes `x -> g`.
    pub fn compose(&self, g: &RatFunc) -> Result<RatFunc> {
        let f = self.field();
        let horner = |p: &Poly| {
            p.coeffs()
                .iter()
                .rev()
                .fold(RatFunc::zero(f), |acc, &c| acc.mul(g).add(&RatFunc::constant(f, c)))
        };
        horner(&self.num).div(&horner(&self.den))
    }

    /// Formal derivative.
    pub fn derivative(&self) -> RatFunc {
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFunc::new(num, &self.den * &self.den).expect("nonzero")
    }

    pub fn display_with(&self, var: &str) -> String {
        let wrap = |p: &Poly| {
            let s = p.display_with(var);
            if p.coeffs().iter().filter(|&&c| c != 0).count() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        if self.den.is_one() {
            self.num.display_with(var)
        } else {
            format!("{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc[{}]({})", self.field().order(), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_arithmetic() {
        let f = Field::prime(7).unwrap();
        let x = RatFunc::x(&f);
        let one = RatFunc::one(&f);
        let a = x.mul(&x).sub(&one).div(&x.sub(&one).scale(3)).unwrap();
        // (x^2 - 1) / (3x - 3) = (x + 1)/3 = 5x + 5
        assert_eq!(a, RatFunc::from_poly(Poly::new(&f, vec![5, 5])));
        let b = one.div(&x.add(&one)).unwrap();
        assert_eq!(b.den(), &Poly::new(&f, vec![1, 1]));
        assert_eq!(b.order_at_infinity().unwrap(), 1);
        assert_eq!(b.eval(6), Err(Error::Pole("x = 6".into())));
        assert_eq!(b.inv().unwrap().mul(&b), one);
        assert!(RatFunc::zero(&f).inv().is_err());
        let c = x.compose(&b).unwrap();
        assert_eq!(c, b);
    }
}
