use super::*;
use crate::ratff::Divisor;
use crate::upoly::parse_expr;

fn gs() -> Tower {
    let f = Field::new(2, 2, None).unwrap();
    let g = parse_expr("x^2/(x+1)", &f).unwrap();
    Tower::build(&f, &[StepSpec::artin_schreier(g)]).unwrap()
}

fn wulftange(steps: usize) -> Tower {
    let f = Field::new(2, 6, None).unwrap();
    let g = parse_expr("1 + x^3/(x-1)^3", &f).unwrap();
    Tower::build(&f, &vec![StepSpec::kummer(3, g); steps]).unwrap()
}

fn base(t: &Tower, a: u64) -> ExtPlace {
    ExtPlace::base(Place::rational(t.field(), a))
}

fn inf() -> ExtPlace {
    ExtPlace::base(Place::Infinite)
}

#[test]
fn gs_step_ramification() {
    let t = gs();
    assert_eq!(t.genus(1), 1);
    let ram: Vec<_> = t.step(1).support.iter().filter(|s| s.e == 2).map(|s| s.place.clone()).collect();
    assert_eq!(ram, vec![base(&t, 1), inf()]);
    for a in [2, 3, 0] {
        let above = t.lift(1, &base(&t, a)).unwrap();
        assert_eq!(above.len(), 2);
        assert!(above.iter().all(ExtPlace::is_rational));
    }
    assert_eq!(t.rational_places(1).unwrap().len(), 8);
}

#[test]
fn gs_valuations_and_conorm() {
    let t = gs();
    let q_inf = t.lift(1, &inf()).unwrap()[0].clone();
    let q1 = t.lift(1, &base(&t, 1)).unwrap()[0].clone();
    let y = t.var(1, 1);
    assert_eq!(t.valuation_ext(1, &y, &q_inf).unwrap(), -1);
    let z = t.parse(1, "(x+1)*y").unwrap();
    assert_eq!(t.valuation_ext(1, &z, &q1).unwrap(), 1);
    let x = t.var(1, 0);
    assert_eq!(t.valuation_ext(1, &x, &q_inf).unwrap(), -2);
    let g = Divisor::single(Place::Infinite, 2);
    let con = t.conorm_base(&g, 1).unwrap();
    assert_eq!(con, ExtDivisor::single(q_inf, 4));
}

#[test]
fn gs_riemann_roch_and_certification() {
    let t = gs();
    let q_inf = t.lift(1, &inf()).unwrap()[0].clone();
    let d = ExtDivisor::single(q_inf, 4);
    assert_eq!(t.riemann_roch_ext(1, &d).unwrap().dimension(), 4);
    let good: Vec<Elem> = ["1", "x", "(x+1)*y", "x^2"].iter().map(|s| t.parse(1, s).unwrap()).collect();
    t.verified_basis(1, &d, &good).unwrap();
    let bad: Vec<Elem> = ["1", "y"].iter().map(|s| t.parse(1, s).unwrap()).collect();
    assert!(matches!(t.verified_basis(1, &d, &bad), Err(Error::Certification(_))));
    let zero = ExtDivisor::zero();
    t.verified_basis(1, &zero, &[t.one(1)]).unwrap();
}

#[test]
fn gs_trace() {
    let t = gs();
    let y = t.var(1, 1);
    assert_eq!(t.trace_down(1, &y), Elem::Base(RatFunc::one(t.field())));
}

#[test]
fn kummer_trace_norm_and_genus() {
    let f = Field::prime(7).unwrap();
    let g = parse_expr("(x-2)*(x-4)", &f).unwrap();
    let t = Tower::build(&f, &[StepSpec::kummer(3, g.clone())]).unwrap();
    assert_eq!(t.genus(1), 1);
    let y = t.var(1, 1);
    assert!(t.trace_down(1, &y).is_zero());
    assert_eq!(t.trace_down(1, &t.one(1)), Elem::Base(RatFunc::constant(&f, 3)));
    assert_eq!(t.norm_down(1, &y), Elem::Base(g));
    let p0 = t.lift(1, &base(&t, 0)).unwrap();
    assert_eq!(p0.len(), 3);
}

#[test]
fn wulftange_tower() {
    let t = wulftange(3);
    assert_eq!((t.genus(1), t.genus(2), t.genus(3)), (1, 4, 10));
    assert_eq!(t.step(3).different_degree, 0);
    let p0 = base(&t, 0);
    assert_eq!(t.lift_to(&p0, 2).unwrap().len(), 9);
    assert_eq!(t.lift_to(&p0, 3).unwrap().len(), 27);
    let p1 = base(&t, 1);
    assert_eq!(t.lift_to(&p1, 1).unwrap().len(), 3);
    let f2 = t.lift_to(&p1, 2).unwrap();
    assert_eq!(f2.len(), 3);
    assert!(f2.iter().all(|q| q.last_e() == 3));
    assert_eq!(t.lift_to(&p1, 3).unwrap().len(), 9);
    let con = t.conorm_base(&Divisor::single(Place::Infinite, 1), 2).unwrap();
    assert_eq!(con.degree(), 9);
    assert!(con.terms().all(|(_, n)| n == 3));
    assert_eq!(t.riemann_roch_ext(2, &con).unwrap().dimension(), 6);
}

#[test]
fn elliptic_riemann_roch() {
    let f = Field::prime(5).unwrap();
    let g = parse_expr("x^3 + x", &f).unwrap();
    let t = Tower::build(&f, &[StepSpec::kummer(2, g)]).unwrap();
    assert_eq!(t.genus(1), 1);
    let con = t.conorm_base(&Divisor::single(Place::Infinite, 1), 1).unwrap();
    assert_eq!(con.degree(), 2);
    let b = t.riemann_roch_ext(1, &con).unwrap();
    assert_eq!(b.dimension(), 2);
    t.verified_basis(1, &con, &b.elements).unwrap();
    assert_eq!(t.riemann_roch_ext(1, &ExtDivisor::zero()).unwrap().dimension(), 1);
}

#[test]
fn hermitian_as_additive_step() {
    for (p, k, q) in [(3, 2, 3u64), (2, 4, 4)] {
        let f = Field::new(p, k, None).unwrap();
        let g = parse_expr(&format!("x^{}", q + 1), &f).unwrap();
        let t = Tower::build(&f, &[StepSpec::additive(q, 1, g)]).unwrap();
        let genus = (q * (q - 1) / 2) as i64;
        assert_eq!(t.genus(1), genus);
        assert_eq!(t.rational_places(1).unwrap().len() as u64, q * q * q + 1);
        let q_inf = t.lift(1, &inf()).unwrap()[0].clone();
        for s in 1..=q as i64 {
            let d = ExtDivisor::single(q_inf.clone(), q as i64 * s);
            let b = t.riemann_roch_ext(1, &d).unwrap();
            // one-point space: monomials x^i y^j with q*i + (q+1)*j <= q*s, j < q
            let expect = (0..q as i64)
                .map(|j| {
                    let r = q as i64 * s - (q as i64 + 1) * j;
                    if r < 0 { 0 } else { r / q as i64 + 1 }
                })
                .sum::<i64>();
            assert_eq!(b.dimension() as i64, expect, "q={q} s={s}");
            t.verified_basis(1, &d, &b.elements).unwrap();
        }
    }
}
