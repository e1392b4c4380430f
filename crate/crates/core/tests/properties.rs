use agconorm::agcode::{self, LinearCode};
use agconorm::conorm::{self, ConormJob, Status, Verify};
use agconorm::extff::{StepSpec, Tower};
use agconorm::hermitian::Hermitian;
use agconorm::ratff::{self, Divisor, Place};
use agconorm::upoly::{factorize, Poly, RatFunc};
use agconorm::Field;
use proptest::prelude::*;

const FIELDS: [(u64, u32); 6] = [(2, 1), (5, 1), (7, 1), (2, 3), (3, 2), (2, 4)];

fn field(i: usize) -> Field {
    let (p, k) = FIELDS[i % FIELDS.len()];
    Field::new(p, k, None).unwrap()
}

fn poly(f: &Field, coeffs: &[u64]) -> Poly {
    Poly::new(f, coeffs.iter().map(|c| c % f.order()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(i in 0usize..6, a in 0u64..16, b in 0u64..16, c in 0u64..16) {
        let f = field(i);
        let (a, b, c) = (a % f.order(), b % f.order(), c % f.order());
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        prop_assert_eq!(f.pow(a, f.order()), a);
    }

    #[test]
    fn division_with_remainder(i in 0usize..6, a in prop::collection::vec(0u64..16, 0..8), d in prop::collection::vec(0u64..16, 1..5)) {
        let f = field(i);
        let (a, d) = (poly(&f, &a), poly(&f, &d));
        prop_assume!(!d.is_zero());
        let (q, r) = a.divrem(&d).unwrap();
        prop_assert_eq!(&(&q * &d) + &r, a);
        prop_assert!(r.is_zero() || r.degree() < d.degree());
    }

    #[test]
    fn factorization_multiplies_back(i in 0usize..6, a in prop::collection::vec(0u64..16, 2..7)) {
        let f = field(i);
        let a = poly(&f, &a);
        prop_assume!(!a.is_constant());
        let mut prod = Poly::constant(&f, a.lead());
        for (g, e) in factorize(&a).unwrap() {
            prop_assert!(g.is_monic());
            prod = &prod * &g.pow(e as u64);
        }
        prop_assert_eq!(prod, a);
    }

    #[test]
    fn principal_divisors_have_degree_zero(i in 0usize..6, a in prop::collection::vec(0u64..16, 1..6), b in prop::collection::vec(0u64..16, 1..6)) {
        let f = field(i);
        let (a, b) = (poly(&f, &a), poly(&f, &b));
        prop_assume!(!a.is_zero() && !b.is_zero());
        let z = RatFunc::new(a, b).unwrap();
        prop_assert_eq!(ratff::principal_divisor(&z).unwrap().degree(), 0);
    }

    #[test]
    fn rational_riemann_roch(i in 0usize..6, coeffs in prop::collection::vec(-3i64..4, 1..4)) {
        let f = field(i);
        let places = ratff::rational_places(&f);
        let g = Divisor::from_terms(places.iter().cloned().zip(coeffs));
        let basis = ratff::riemann_roch_basis(&f, &g);
        prop_assert_eq!(basis.dimension() as i64, (g.degree() + 1).max(0));
        for z in &basis.elements {
            let div = ratff::principal_divisor(z).unwrap().add(&g);
            prop_assert!(div.is_effective());
        }
    }

    #[test]
    fn double_dual_and_dimensions(i in 0usize..3, rows in prop::collection::vec(prop::collection::vec(0u64..7, 6), 1..4)) {
        let f = field(i);
        let rows: Vec<Vec<u64>> = rows.into_iter().map(|r| r.into_iter().map(|c| c % f.order()).collect()).collect();
        let c = LinearCode::new(&f, 6, rows).unwrap();
        let dual = c.dual();
        prop_assert_eq!(c.dimension() + dual.dimension(), 6);
        prop_assert!(agcode::codes_equal(&dual.dual(), &c).unwrap());
        let c = c.min_distance(u64::MAX);
        if c.dimension() > 0 {
            let d = c.distance().exact().unwrap();
            prop_assert!(d + c.dimension() <= 7);
        }
    }

    #[test]
    fn genus_zero_codes_are_mds(i in 1usize..5, n in 2usize..6, deg in 0i64..5) {
        let f = field(i);
        let mut places = ratff::rational_places(&f);
        places.retain(|p| !p.is_infinite());
        prop_assume!(n <= places.len() && (deg as usize) < n);
        let d: Vec<Place> = places[..n].to_vec();
        let c = agcode::evaluation_code(&f, &d, &Divisor::single(Place::Infinite, deg)).unwrap();
        let c = c.min_distance(u64::MAX);
        prop_assert_eq!(c.dimension(), deg as usize + 1);
        prop_assert_eq!(c.distance().exact(), Some(n - deg as usize));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn kummer_conorm_contains_base(roots in prop::collection::btree_set(0u64..5, 1..3), deg in 0i64..4, at in 0u64..5) {
        let f = Field::prime(5).unwrap();
        let mut num = Poly::one(&f);
        for r in &roots {
            num = &num * &Poly::linear(&f, *r);
        }
        let t = Tower::build(&f, &[StepSpec::kummer(2, RatFunc::from_poly(num))]).unwrap();
        let g = Divisor::single(Place::Infinite, deg);
        let d: Vec<Place> = (0..5)
            .filter(|&a| a != at)
            .map(|a| Place::rational(&f, a))
            .filter(|p| t.places_above_base(p, 1).unwrap().iter().all(|q| q.is_rational()))
            .collect();
        prop_assume!(!d.is_empty());
        let job = ConormJob::rational(&t, 1, &d, &g).mode(conorm::Mode::Generalized).budget(0);
        let c = conorm::run(&job, &[Verify::Bounds]).unwrap();
        prop_assert_eq!(c.report.conorm.deg_g, 2 * deg);
        for name in ["L(G) in L(G')", "conorm degree", "length"] {
            let check = c.report.checks.iter().find(|x| x.name == name).unwrap();
            prop_assert_eq!(check.status, Status::Pass, "{}: {}", name, check.detail);
        }
    }
}

#[test]
fn hermitian_duals_are_hermitian() {
    for q in [2, 3] {
        let h = Hermitian::new(q).unwrap();
        for a in 0..=h.max_index() {
            let b = h.dual_index(a).unwrap();
            let dual = h.code(a).unwrap().dual();
            assert!(agcode::codes_equal(&dual, &h.code(b).unwrap()).unwrap(), "q={q} a={a}");
        }
    }
}
