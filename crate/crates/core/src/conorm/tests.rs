use super::*;
use crate::extff::StepSpec;
use crate::upoly::parse_expr;

fn places(f: &Field, a: &[u64]) -> Vec<Place> {
    a.iter().map(|&x| Place::rational(f, x)).collect()
}

fn status(c: &Conorm, name: &str) -> Status {
    c.report.checks.iter().find(|x| x.name == name).unwrap_or_else(|| panic!("no check {name}")).status
}

#[test]
fn gs_quadratic() {
    let f = Field::new(2, 2, None).unwrap();
    let t = Tower::build(&f, &[StepSpec::artin_schreier(parse_expr("x^2/(x+1)", &f).unwrap())]).unwrap();
    let job = ConormJob::rational(&t, 1, &places(&f, &[1, 2, 3]), &Divisor::single(Place::Infinite, 2))
        .witness(t.parse(1, "(x-#2)*(x-#3)").unwrap());
    let c = run(&job, &Verify::ALL).unwrap();
    let r = &c.report;
    assert_eq!((r.base.n, r.base.k, r.base.d.exact()), (3, 3, Some(1)));
    assert_eq!((r.conorm.n, r.conorm.k, r.conorm.d.exact()), (5, 4, Some(1)));
    assert_eq!((r.s, r.r, r.m), (2, 1, 2));
    assert_eq!(r.lift[0].e, 2);
    assert_eq!((r.base.level, r.conorm.level), (Level::Sag, Level::Sag));
    assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    assert_eq!(status(&c, "split and ramified counts"), Status::Pass);
    assert_eq!(status(&c, "trace"), Status::Skipped);
}

#[test]
fn reed_solomon_is_its_conorm() {
    let f = Field::prime(5).unwrap();
    let t = Tower::build(&f, &[StepSpec::kummer(4, parse_expr("x^4-1", &f).unwrap())]).unwrap();
    for k in 1..=4 {
        let job = ConormJob::rational(&t, 1, &places(&f, &[2, 4, 3, 1]), &Divisor::single(Place::Infinite, k - 1));
        let c = run(&job, &Verify::ALL).unwrap();
        assert_eq!((c.report.r, c.report.conorm.n), (4, 4));
        assert!(agcode::codes_equal(&c.base, &c.lifted).unwrap());
        assert_eq!(status(&c, "cyclic code is its conorm"), Status::Pass);
        assert_eq!(status(&c, "trace"), Status::Pass);
        assert!(c.report.passed(), "{:?}", c.report.failures().collect::<Vec<_>>());
        let rs = agcode::reed_solomon(&f, k as usize, 2).unwrap();
        assert!(agcode::codes_equal(&rs, &c.lifted).unwrap());
    }
}

#[test]
fn repetition_lifts_to_constants() {
    let f = Field::prime(7).unwrap();
    let t = Tower::build(&f, &[StepSpec::kummer(3, parse_expr("(x-2)*(x-4)", &f).unwrap())]).unwrap();
    let job = ConormJob::rational(&t, 1, &places(&f, &[0, 2, 4]), &Divisor::zero());
    let c = run(&job, &Verify::ALL).unwrap();
    assert_eq!((c.lifted.length(), c.lifted.dimension()), (5, 1));
    assert!(c.lifted.contains(&[1; 5]));
    assert_eq!(c.report.lift[0].m_p, 3);
    assert_eq!(status(&c, "cyclicity"), Status::Skipped);
    assert!(c.report.passed());
    // P_0 alone gives R_7(3)
    let job = ConormJob::rational(&t, 1, &places(&f, &[0]), &Divisor::zero());
    let c = conorm_code(&job).unwrap();
    assert!(agcode::codes_equal(&c.lifted, &agcode::repetition_code(&f, 3).unwrap()).unwrap());
}

#[test]
fn inert_place_is_rejected() {
    let f = Field::prime(7).unwrap();
    let t = Tower::build(&f, &[StepSpec::kummer(3, parse_expr("(x-2)*(x-4)", &f).unwrap())]).unwrap();
    let job = ConormJob::rational(&t, 1, &places(&f, &[1]), &Divisor::zero());
    assert!(matches!(conorm_code(&job), Err(Error::NotRational(_))));
}

#[test]
fn wulftange_unramified_step() {
    let f = Field::new(2, 6, None).unwrap();
    let g = parse_expr("1 + x^3/(x-1)^3", &f).unwrap();
    let t = Tower::build(&f, &vec![StepSpec::kummer(3, g); 3]).unwrap();
    let mut d = t.places_above_base(&Place::rational(&f, 0), 2).unwrap();
    d.extend(t.places_above_base(&Place::rational(&f, 1), 2).unwrap());
    let gg = t.conorm_base(&Divisor::single(Place::Infinite, 1), 2).unwrap();
    let job = ConormJob::new(&t, 2, 3, d, gg).base_witness(t.var(2, 0)).budget(0);
    let c = run(&job, &Verify::ALL).unwrap();
    let r = &c.report;
    assert_eq!((r.base.n, r.base.k, r.base.d.lo, r.base.d.hi), (12, 6, 3, 3));
    assert_eq!((r.conorm.n, r.conorm.k, r.conorm.d.lo, r.conorm.d.hi), (36, 18, 9, 9));
    assert_eq!((r.different_degree, r.s, r.r), (0, 12, 0));
    assert_eq!(status(&c, "dimension and rate"), Status::Pass);
    assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());

    let job = ConormJob::rational(&t, 3, &places(&f, &[0]), &Divisor::single(Place::Infinite, 1)).budget(0);
    let c = run(&job, &[Verify::Composition]).unwrap();
    assert_eq!(c.lifted.length(), 27);
    assert_eq!(status(&c, "composition"), Status::Pass);
}
