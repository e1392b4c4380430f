//! Worked examples with their expected values. Each entry recomputes
//! everything and reports one check per expected fact.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::agcode::{self, DistanceSource};
use crate::conorm::{self, Check, Conorm, ConormJob, Status, Verify};
use crate::error::{Error, Result};
use crate::extff::{ExtPlace, Record, StepSpec, Tower};
use crate::galois::Field;
use crate::hermitian::Hermitian;
use crate::job;
use crate::ratff::{self, Divisor, Place};
use crate::upoly::parse_expr;

pub const NAMES: [&str; 7] =
    ["gs-quadratic", "wulftange-tower", "elliptic-odd-char", "hermitian-q3", "hermitian-q4", "repetition", "reed-solomon"];

/// Job files shipped with the library, by name.
pub const JOBS: [(&str, &str); 4] = [
    ("gs-quadratic", include_str!("../jobs/gs-quadratic.json")),
    ("wulftange-tower", include_str!("../jobs/wulftange-tower.json")),
    ("wulftange-composition", include_str!("../jobs/wulftange-composition.json")),
    ("elliptic-q7", include_str!("../jobs/elliptic-q7.json")),
];

#[derive(Clone, Debug, Serialize)]
pub struct ExampleReport {
    pub name: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub elapsed_ms: u128,
}

pub fn run_example(name: &str) -> Result<ExampleReport> {
    let start = Instant::now();
    let checks = match name {
        "gs-quadratic" => gs_quadratic()?,
        "wulftange-tower" => wulftange()?,
        "elliptic-odd-char" => elliptic()?,
        "hermitian-q3" => hermitian_counterexample(3)?,
        "hermitian-q4" => hermitian_counterexample(4)?,
        "repetition" => repetition()?,
        "reed-solomon" => reed_solomon()?,
        _ => return Err(Error::Parameter(format!("unknown example {name:?}; known: {}", NAMES.join(", ")))),
    };
    Ok(ExampleReport {
        name: name.into(),
        passed: checks.iter().all(|c| c.status != Status::Fail),
        checks,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// Runs entries concurrently; results keep the order of `names`.
pub fn run_examples(names: &[&str]) -> Vec<Result<ExampleReport>> {
    names.par_iter().map(|n| run_example(n)).collect()
}

fn shipped(name: &str) -> &'static str {
    JOBS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t).expect("shipped job")
}

fn tagged(tag: &str, checks: impl IntoIterator<Item = Check>) -> Vec<Check> {
    checks.into_iter().map(|mut c| {
        c.name = format!("{tag}: {}", c.name);
        c
    }).collect()
}

fn eq<T: PartialEq + std::fmt::Debug>(name: &str, computed: T, expected: T) -> Check {
    let ok = computed == expected;
    Check::assert(name, ok, format!("expected {expected:?}, computed {computed:?}"))
}

fn run_shipped(name: &str) -> Result<Conorm> {
    let spec = job::parse_job(shipped(name))?;
    Ok(job::run_job(&spec)?.0)
}

fn weight_of(c: &Conorm, level: usize, z: &crate::extff::Elem) -> Result<usize> {
    let t = &c.job.tower;
    let places = if level == c.job.from { &c.job.d } else { &c.lifted_d };
    let w: Vec<u64> = places.iter().map(|p| t.evaluate_ext(level, z, p)).collect::<Result<_>>()?;
    Ok(agcode::weight(&w))
}

fn gs_quadratic() -> Result<Vec<Check>> {
    let c = run_shipped("gs-quadratic")?;
    let t = &c.job.tower;
    let f = t.field();
    let mut out = c.report.checks.clone();
    let ramified: Vec<String> =
        t.step(1).support.iter().filter(|s| s.e == 2).map(|s| s.place.label(f)).collect();
    out.push(eq("ramified places", ramified, vec!["P(#1)".to_string(), "P(inf)".into()]));
    let split: Vec<&str> = c.report.lift.iter().filter(|l| l.m_p == 2).map(|l| l.place.as_str()).collect();
    out.push(eq("split places of D", split, vec!["P(#2)", "P(#3)"]));
    out.push(eq("base distance is exhaustive", c.report.base.d.source, DistanceSource::Exhaustive));
    out.push(eq("conorm distance is exhaustive", c.report.conorm.d.source, DistanceSource::Exhaustive));
    out.push(eq("words scanned", f.order().pow(c.report.conorm.k as u32), 256));
    out.push(eq("witness weight", weight_of(&c, 1, &c.job.witnesses[0])?, 1));
    Ok(out)
}

/// `(number of places, e over the previous level)` above `p` on levels 1..=3.
fn decomposition(t: &Tower, p: &Place) -> Result<Vec<(usize, u64)>> {
    let mut out = Vec::new();
    for level in 1..=t.height() {
        let above = t.places_above_base(p, level)?;
        let e = above[0].last_e();
        if above.iter().any(|q| q.last_e() != e) {
            return Err(Error::Degenerate(format!("mixed ramification above {p}")));
        }
        out.push((above.len(), e));
    }
    Ok(out)
}

fn wulftange() -> Result<Vec<Check>> {
    let c = run_shipped("wulftange-tower")?;
    let t = c.job.tower.clone();
    let f = t.field().clone();
    let mut out = tagged("F3/F2", c.report.checks.clone());
    // the cube roots of unity lie in GF(4) inside GF(64)
    let omega: Vec<u64> = f.elements().filter(|&a| f.add(f.add(f.mul(a, a), a), 1) == 0).collect();
    let split_all = vec![(3, 1), (9, 1), (27, 1)];
    out.push(eq("P0 splits completely", decomposition(&t, &Place::rational(&f, 0))?, split_all));
    out.push(eq("P1 splits, ramifies, splits", decomposition(&t, &Place::rational(&f, 1))?, vec![(3, 1), (3, 3), (9, 1)]));
    let ram_then_split = vec![(1, 3), (3, 1), (9, 1)];
    for (i, &w) in omega.iter().enumerate() {
        out.push(eq(&format!("P(omega^{}) ramifies then splits", i + 1), decomposition(&t, &Place::rational(&f, w))?, ram_then_split.clone()));
    }
    out.push(eq("P(inf) ramifies then splits", decomposition(&t, &Place::Infinite)?, ram_then_split));
    out.push(eq("g(F2)", t.genus(2), 4));
    out.push(eq("deg Diff(F3/F2)", t.step(3).different_degree, 0));
    out.push(eq("deg Diff(F2/F1) > 0", t.step(2).different_degree > 0, true));
    let x = t.var(2, 0);
    out.push(eq("x0 weight in C", weight_of(&c, 2, &x)?, 3));
    out.push(eq("x0 weight in C'", weight_of(&c, 3, &t.lift_elem(&x, 2, 3))?, 9));
    out.push(eq("k' = m k", c.report.conorm.k as u64, c.report.m * c.report.base.k as u64));
    let comp = run_shipped("wulftange-composition")?;
    out.extend(tagged("F3/F0", comp.report.checks));
    Ok(out)
}

/// Finite rational places whose places above are all rational.
fn places_with_rational_lifts(t: &Tower, to: usize) -> Result<Vec<Place>> {
    let mut out = Vec::new();
    for a in t.field().elements() {
        let p = Place::rational(t.field(), a);
        if t.places_above_base(&p, to)?.iter().all(ExtPlace::is_rational) {
            out.push(p);
        }
    }
    Ok(out)
}

fn elliptic() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for p in [5, 7] {
        let f = Field::prime(p)?;
        let t = Tower::build(&f, &[StepSpec::kummer(2, parse_expr("x^3 + x", &f)?)])?;
        out.push(eq(&format!("q={p}: genus"), t.genus(1), 1));
        let d = places_with_rational_lifts(&t, 1)?;
        for l in 1..=3 {
            let job = ConormJob::rational(&t, 1, &d, &Divisor::single(Place::Infinite, l));
            let c = conorm::run(&job, &[Verify::Bounds, Verify::Levels, Verify::Trace])?;
            let r = &c.report;
            let tag = format!("q={p} l={l}");
            out.extend(tagged(&tag, c.report.checks.clone()));
            out.push(eq(&format!("{tag}: exhaustive"), r.conorm.d.source, DistanceSource::Exhaustive));
            let (n1, s) = (r.conorm.n, r.conorm.k + r.conorm.d.lo);
            out.push(Check::assert(
                &format!("{tag}: almost MDS"),
                n1 <= s && s <= n1 + 1,
                format!("[{}, {}, {}]: n' <= d' + k' = {s} <= n' + 1", n1, r.conorm.k, r.conorm.d.lo),
            ));
        }
    }
    let q7 = run_shipped("elliptic-q7")?;
    out.extend(tagged("job file", q7.report.checks));
    Ok(out)
}

fn hermitian_job(h: &Hermitian, t: i64) -> ConormJob {
    let f = h.field();
    let d: Vec<Place> = f.elements().map(|a| Place::rational(f, a)).collect();
    ConormJob::rational(h.tower(), 1, &d, &Divisor::single(Place::Infinite, t)).budget(0)
}

/// `Con(C_t) = H_{qt}` for `t = 1..=q`.
pub fn hermitian_conorm_identity(q: u64) -> Result<Vec<Check>> {
    let h = Hermitian::new(q)?;
    let mut out = Vec::new();
    for t in 1..=q as i64 {
        let c = conorm::conorm_code(&hermitian_job(&h, t))?;
        let ha = h.code(q as i64 * t)?;
        out.push(Check::assert(
            &format!("H_{} = Con(C_{t}) over GF({})", q as i64 * t, q * q),
            agcode::codes_equal(&ha, &c.lifted)?,
            format!("dimensions {} and {}", ha.dimension(), c.lifted.dimension()),
        ));
    }
    Ok(out)
}

/// The duals of `Con(C_q)` and `Con(C_q^perp)` differ. Reported both with
/// the index `3q^2` used for the first code in the original example and
/// with `Con(C_q) = H_{q^2}`.
fn hermitian_counterexample(q: u64) -> Result<Vec<Check>> {
    let h = Hermitian::new(q)?;
    let qi = q as i64;
    let n = h.points().len();
    let mut out = hermitian_conorm_identity(q)?;

    let big = conorm::run(&hermitian_job(&h, 3 * qi), &[Verify::Duality])?;
    let h3 = h.code(3 * qi * qi)?;
    out.push(eq(&format!("H_{} = Con(C_{})", 3 * qi * qi, 3 * qi), agcode::codes_equal(&h3, &big.lifted)?, true));
    let small = conorm::run(&hermitian_job(&h, qi), &[Verify::Duality])?;
    let dual_big = big.lifted.dual();
    // C_q^perp = C_L(D, (q^2 - 2 - q) P_inf), so Con(C_q^perp) = H_{q(q^2 - q - 2)}
    let perp_index = qi * (qi * qi - qi - 2);
    let con_perp = conorm_of_dual(&h, qi)?;
    out.push(eq(
        &format!("Con(C_{q}^perp) = H_{perp_index}"),
        agcode::codes_equal(&con_perp, &h.code(perp_index)?)?,
        true,
    ));
    let (expect_big, expect_dual, expect_perp) = match q {
        4 => (Some(43), Some(21), Some(35)),
        3 => (Some(24), Some(3), Some(10)),
        _ => (None, None, None),
    };
    let dims = (big.lifted.dimension(), dual_big.dimension(), con_perp.dimension());
    if let (Some(a), Some(b), Some(c)) = (expect_big, expect_dual, expect_perp) {
        out.push(eq(&format!("dim H_{}", 3 * qi * qi), dims.0, a));
        out.push(eq(&format!("dim H_{}^perp", 3 * qi * qi), dims.1, b));
        out.push(eq(&format!("dim Con(C_{q}^perp)"), dims.2, c));
    }
    out.push(eq(&format!("H_{}^perp = H_{}", 3 * qi * qi, h.dual_index(3 * qi * qi)?), agcode::codes_equal(&dual_big, &h.code(h.dual_index(3 * qi * qi)?)?)?, true));
    out.push(Check::assert(
        &format!("H_{}^perp differs from Con(C_{q}^perp)", 3 * qi * qi),
        dims.1 != dims.2 && !agcode::codes_equal(&dual_big, &con_perp)?,
        format!("[{n}, {}] and [{n}, {}]", dims.1, dims.2),
    ));
    for (c, t) in [(&small, qi), (&big, 3 * qi)] {
        let d = c.report.duality.as_ref().expect("duality was requested");
        out.push(Check::assert(
            &format!("Con(C_{t})^perp differs from Con(C_{t}^perp)"),
            !d.equal,
            format!("dimensions {} and {}", d.dual_of_conorm, d.conorm_of_dual),
        ));
    }
    Ok(out)
}

fn conorm_of_dual(h: &Hermitian, t: i64) -> Result<agcode::LinearCode> {
    let f = h.field();
    let d: Vec<Place> = f.elements().map(|a| Place::rational(f, a)).collect();
    let g = conorm::dual_divisor(f, &d, &Divisor::single(Place::Infinite, t))?;
    let job = ConormJob::rational(h.tower(), 1, &d, &g).budget(0);
    Ok(conorm::conorm_code(&job)?.lifted)
}

/// `y^n = (x - a)(x - 1/a)` over GF(q).
fn repetition_tower(f: &Field, n: u64, a: u64) -> Result<Tower> {
    let b = f.inv(a).ok_or(Error::DivisionByZero)?;
    let g = parse_expr(&format!("(x - {})*(x - {})", a, b), f)?;
    Tower::build(f, &[StepSpec::kummer(n, g)])
}

fn repetition() -> Result<Vec<Check>> {
    let f = Field::prime(7)?;
    let mut out = Vec::new();
    let z = parse_expr("(x-1)/(x-3)", &f)?;
    let gz = ratff::principal_divisor(&z)?;
    for (n, a) in [(3, 2), (2, 2), (6, 3)] {
        let t = repetition_tower(&f, n, a)?;
        let tag = format!("n={n}");
        let c = conorm::conorm_code(&ConormJob::rational(&t, 1, &[Place::rational(&f, 0)], &gz))?;
        out.push(eq(&format!("{tag}: Con(C_L(P0, (z))) = R_7({n})"), agcode::codes_equal(&c.lifted, &agcode::repetition_code(&f, n as usize)?)?, true));
        let mut roots: Vec<u64> = c
            .lifted_d
            .iter()
            .filter_map(|p| match p.last() {
                Some(Record::Split(r)) => Some(*r),
                _ => None,
            })
            .collect();
        roots.sort();
        let mut expect: Vec<u64> = f.elements().filter(|&r| r != 0 && f.pow(r, n) == 1).collect();
        expect.sort();
        out.push(eq(&format!("{tag}: P0 splits into the roots of T^{n} - 1"), roots, expect));
    }
    out.extend(repetition_constants()?);
    Ok(out)
}

/// The repetition code `C_L(D, 0)` lifts to constant words.
fn repetition_constants() -> Result<Vec<Check>> {
    let f = Field::prime(7)?;
    let t = Tower::build(&f, &[StepSpec::kummer(3, parse_expr("(x-2)*(x-4)", &f)?)])?;
    let d = places_with_rational_lifts(&t, 1)?;
    let c = conorm::run(&ConormJob::rational(&t, 1, &d, &Divisor::zero()), &Verify::ALL)?;
    let n1 = c.lifted.length();
    let mut out = tagged("R_7 over y^3 = (x-2)(x-4)", c.report.checks.clone());
    out.push(Check::assert(
        "R_7 lifts to a repetition code",
        c.base.dimension() == 1 && c.lifted.dimension() == 1 && c.lifted.contains(&vec![1; n1]),
        format!("[{}, 1] -> [{n1}, {}]", c.base.length(), c.lifted.dimension()),
    ));
    Ok(out)
}

fn reed_solomon_for(q: u64, beta: u64, exhaustive_up_to: usize) -> Result<Vec<Check>> {
    let f = Field::prime(q)?;
    let m = q - 1;
    let t = Tower::build(&f, &[StepSpec::kummer(m, parse_expr(&format!("x^{m} - 1"), &f)?)])?;
    let d: Vec<Place> = (1..q).map(|i| Place::rational(&f, f.pow(beta, i))).collect();
    let mut out = Vec::new();
    for k in 1..q as usize {
        let tag = format!("q={q} k={k}");
        let job = ConormJob::rational(&t, 1, &d, &Divisor::single(Place::Infinite, k as i64 - 1));
        let c = conorm::run(&job, &[Verify::Bounds, Verify::Cyclicity, Verify::Trace])?;
        let rs = agcode::reed_solomon(&f, k, beta)?.min_distance(agcode::DEFAULT_BUDGET);
        out.extend(tagged(&tag, c.report.checks.clone()));
        out.push(eq(&format!("{tag}: RS cyclic"), rs.is_cyclic(), true));
        out.push(eq(&format!("{tag}: all places totally ramified"), c.report.r, d.len()));
        out.push(eq(&format!("{tag}: Con(RS) cyclic"), c.lifted.is_cyclic(), true));
        out.push(eq(&format!("{tag}: Con(RS) = RS"), agcode::codes_equal(&rs, &c.lifted)?, true));
        if k <= exhaustive_up_to {
            out.push(eq(&format!("{tag}: exhaustive distance"), (c.lifted.distance().source, c.lifted.distance().lo), (DistanceSource::Exhaustive, d.len() - k + 1)));
        }
    }
    Ok(out)
}

fn reed_solomon() -> Result<Vec<Check>> {
    let mut out = reed_solomon_for(5, 2, 3)?;
    out.extend(reed_solomon_for(7, 3, 3)?);
    Ok(out)
}

/// The identities relating repetition, Hermitian and Reed-Solomon codes to
/// conorm codes.
pub fn classic_identities() -> Result<Vec<Check>> {
    let mut out = repetition()?;
    for q in [2, 3, 4] {
        out.extend(hermitian_conorm_identity(q)?);
    }
    out.extend(reed_solomon_for(5, 2, 0)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_example() {
        assert!(run_example("nope").is_err());
    }
}
