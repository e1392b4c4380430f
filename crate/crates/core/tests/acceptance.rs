//! Acceptance criteria. Each criterion prints one line `PASS`/`FAIL` with a
//! short summary; the test fails if any criterion fails.

use std::io::Write;
use std::time::Instant;

use agconorm::agcode::{DistanceSource, Level};
use agconorm::conorm::{self, Check, Conorm, ConormJob, Mode, Status, Verify};
use agconorm::extff::{ExtPlace, StepSpec, Tower};
use agconorm::hermitian::Hermitian;
use agconorm::ratff::{Divisor, Place};
use agconorm::registry;
use agconorm::upoly::{Poly, RatFunc};
use agconorm::{Error, Field};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn failures(checks: &[Check]) -> Vec<String> {
    checks
        .iter()
        .filter(|c| c.status == Status::Fail)
        .map(|c| format!("{} ({})", c.name, c.detail))
        .collect()
}

fn example(name: &str) -> Outcome {
    let r = registry::run_example(name).map_err(|e| e.to_string())?;
    let bad = failures(&r.checks);
    if bad.is_empty() {
        Ok(format!("{} checks", r.checks.len()))
    } else {
        Err(bad.join("; "))
    }
}

fn ensure(ok: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn gs() -> Outcome {
    let summary = example("gs-quadratic")?;
    let spec = agconorm::job::parse_job(registry::JOBS[0].1).map_err(|e| e.to_string())?;
    let c = conorm::conorm_code(&spec.job).map_err(|e| e.to_string())?;
    let (b, l) = (&c.report.base, &c.report.conorm);
    ensure((b.n, b.k, b.d.exact()) == (3, 3, Some(1)), "base is not [3,3,1]")?;
    ensure((l.n, l.k, l.d.exact()) == (5, 4, Some(1)), "conorm is not [5,4,1]")?;
    ensure(l.d.source == DistanceSource::Exhaustive && b.d.source == DistanceSource::Exhaustive, "not exhaustive")?;
    ensure(l.genus == 1, "genus")?;
    Ok(format!("[3,3,1] -> [5,4,1], genus 1; {summary}"))
}

fn wulftange() -> Outcome {
    let summary = example("wulftange-tower")?;
    Ok(format!("[12,6,3] -> [36,18,9], g(F2) = 4, F3/F2 unramified; {summary}"))
}

fn hermitian_counterexample() -> Outcome {
    let a = example("hermitian-q4")?;
    let b = example("hermitian-q3")?;
    let h = Hermitian::new(4).map_err(|e| e.to_string())?;
    let k48 = h.code(48).map_err(|e| e.to_string())?.dimension();
    let k40 = h.code(40).map_err(|e| e.to_string())?.dimension();
    ensure((k48, 64 - k48, k40) == (43, 21, 35), format!("dims {k48}, {}, {k40}", 64 - k48))?;
    Ok(format!("q=4: 43 / 21 vs 35; q=3: 24 / 3 vs 10; {a}, {b}"))
}

fn hermitian_conorms() -> Outcome {
    let mut checks = Vec::new();
    for q in [2, 3, 4] {
        checks.extend(registry::hermitian_conorm_identity(q).map_err(|e| e.to_string())?);
    }
    let bad = failures(&checks);
    ensure(bad.is_empty() && checks.len() == 9, bad.join("; "))?;
    Ok(format!("{} identities H_(qt) = Con(C_t)", checks.len()))
}

fn repetition() -> Outcome {
    Ok(format!("R_7(3) = Con(C_L(P0, (z))); {}", example("repetition")?))
}

fn reed_solomon() -> Outcome {
    Ok(format!("q=5,7: RS = Con(RS), cyclic; {}", example("reed-solomon")?))
}

fn elliptic() -> Outcome {
    Ok(format!("q=5,7, l=1..3: n' <= d' + k' <= n' + 1; {}", example("elliptic-odd-char")?))
}

/// Random Kummer jobs.
struct Generator {
    rng: ChaCha8Rng,
}

fn field_for(q: u64) -> Field {
    match q {
        4 => Field::new(2, 2, None),
        9 => Field::new(3, 2, None),
        p => Field::prime(p),
    }
    .unwrap()
}

impl Generator {
    fn poly(&mut self, f: &Field, n: u64) -> RatFunc {
        let elems: Vec<u64> = f.elements().collect();
        let count = self.rng.gen_range(1..=3);
        let roots: Vec<u64> = elems.choose_multiple(&mut self.rng, count).copied().collect();
        let mut num = Poly::constant(f, *elems[1..].choose(&mut self.rng).unwrap());
        let mut den = Poly::one(f);
        for r in roots {
            let e = self.rng.gen_range(1..n as usize);
            let lin = Poly::linear(f, r).pow(e as u64);
            if self.rng.gen_bool(0.25) {
                den = &den * &lin;
            } else {
                num = &num * &lin;
            }
        }
        RatFunc::new(num, den).unwrap()
    }

    fn tower(&mut self, q: u64, steps: usize) -> Option<Tower> {
        let f = field_for(q);
        let degrees: Vec<u64> = [2, 3].into_iter().filter(|n| (q - 1).is_multiple_of(*n)).collect();
        let mut specs = Vec::new();
        for _ in 0..steps {
            let n = *degrees.choose(&mut self.rng).unwrap();
            specs.push(StepSpec::kummer(n, self.poly(&f, n)));
        }
        Tower::build(&f, &specs).ok()
    }

    fn job(&mut self, q: u64, steps: usize) -> Option<ConormJob> {
        let t = self.tower(q, steps)?;
        let f = t.field().clone();
        let to = t.height();
        let mut places: Vec<Place> = f.elements().map(|a| Place::rational(&f, a)).collect();
        places.push(Place::Infinite);
        places.shuffle(&mut self.rng);
        let deg = self.rng.gen_range(0..=6i64);
        let mut g = Divisor::zero();
        let mut left = deg;
        for p in places.iter().take(self.rng.gen_range(1..=2)) {
            let c = if g.is_zero() { left } else { self.rng.gen_range(-1..=left.max(0)) };
            g.add_term(p.clone(), c);
            left -= c;
        }
        if left != 0 {
            g.add_term(places[0].clone(), left);
        }
        let mut d = Vec::new();
        for p in &places {
            if p.is_infinite() || g.coeff(p) != 0 {
                continue;
            }
            let above = t.places_above_base(p, to).ok()?;
            if above.iter().all(ExtPlace::is_rational) && self.rng.gen_bool(0.7) {
                d.push(p.clone());
            }
        }
        if d.is_empty() {
            return None;
        }
        Some(ConormJob::rational(&t, to, &d, &g).budget(20_000))
    }
}

fn kummer_property(c: &Conorm) -> std::result::Result<(), String> {
    let bad = failures(&c.report.checks);
    ensure(bad.is_empty(), bad.join("; "))?;
    let status = |name: &str| c.report.checks.iter().find(|x| x.name == name).map(|x| x.status);
    for name in ["length", "conorm degree", "singleton C", "singleton C'", "distance", "L(G) in L(G')", "trace"] {
        ensure(status(name) == Some(Status::Pass), format!("{name} not checked"))?;
    }
    if c.job.to - c.job.from == 2 {
        ensure(status("composition") == Some(Status::Pass), "composition not checked")?;
    }
    let r = &c.report;
    ensure(r.conorm.deg_g == r.m as i64 * r.base.deg_g, "deg G' != m deg G")?;
    if r.conorm.level.is_mag() && r.base.k > 0 {
        ensure(2 * r.conorm.k as i64 >= 2 * r.m as i64 * r.designed_dimension - r.different_degree, "k' bound")?;
    }
    Ok(())
}

fn random_kummer() -> Outcome {
    let mut gen = Generator { rng: ChaCha8Rng::seed_from_u64(0x5eed) };
    let checks = [Verify::Bounds, Verify::Levels, Verify::Duality, Verify::Trace, Verify::Composition];
    let (mut accepted, mut two_step, mut rejected, mut mag, mut checked) = (0, 0, 0, 0, 0);
    let mut generalized = 0;
    let qs = [4u64, 5, 7, 9];
    let mut i = 0;
    while accepted < 120 {
        i += 1;
        if i > 5000 {
            return Err(format!("only {accepted} jobs accepted"));
        }
        let q = qs[i % 4];
        let steps = if (i / 4) % 2 == 0 { 2 } else { 1 };
        let Some(job) = gen.job(q, steps) else {
            rejected += 1;
            continue;
        };
        // Partially ramified places violate strict mode; those jobs are still
        // valid in generalized mode.
        let run = match conorm::run(&job, &checks) {
            Err(Error::ConormCondition(_)) => {
                generalized += 1;
                conorm::run(&job.clone().mode(Mode::Generalized), &checks)
            }
            r => r,
        };
        let c = match run {
            Ok(c) => c,
            Err(Error::Unsupported(_)) => {
                rejected += 1;
                continue;
            }
            Err(e) => return Err(format!("job {i} over GF({q}): {e}")),
        };
        kummer_property(&c).map_err(|e| format!("job {i} over GF({q}) D={:?} G={}: {e}", c.job.d, c.job.g))?;
        accepted += 1;
        two_step += usize::from(steps == 2);
        mag += usize::from(c.report.conorm.level != Level::Wag);
        checked += c.report.checks.iter().filter(|x| x.status == Status::Pass).count();
    }
    ensure(two_step >= 20, format!("only {two_step} two-step jobs"))?;
    Ok(format!(
        "{accepted} jobs ({two_step} two-step, {generalized} generalized, {mag} MAG lifts, {rejected} rejected draws), {checked} passing checks"
    ))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        ("1 GS quadratic example", gs),
        ("2 Wulftange tower", wulftange),
        ("3 Hermitian duality counterexample", hermitian_counterexample),
        ("4 Hermitian codes as conorm codes", hermitian_conorms),
        ("5 repetition codes", repetition),
        ("6 Reed-Solomon codes", reed_solomon),
        ("7 randomized Kummer properties", random_kummer),
        ("8 elliptic almost-MDS", elliptic),
    ];
    let mut all = true;
    for (name, f) in criteria {
        let start = Instant::now();
        let r = f();
        let secs = start.elapsed().as_secs_f64();
        // Written to stderr directly so the lines survive output capture.
        let line = match &r {
            Ok(s) => format!("criterion {name}: PASS ({secs:.1}s) {s}\n"),
            Err(e) => format!("criterion {name}: FAIL ({secs:.1}s) {e}\n"),
        };
        std::io::stderr().write_all(line.as_bytes()).unwrap();
        all &= r.is_ok();
    }
    assert!(all, "some acceptance criteria failed");
}
