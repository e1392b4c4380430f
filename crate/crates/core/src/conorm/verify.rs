//! Recomputed checks on a conorm code. Each check compares computed values;
//! a theorem whose hypotheses fail is reported as skipped with the reason.

use super::*;

pub fn verify_all(c: &mut Conorm, checks: &[Verify]) -> Result<()> {
    let mut out = Vec::new();
    for v in checks {
        match v {
            Verify::Bounds => out.extend(bounds(c)?),
            Verify::Levels => out.extend(levels(c)),
            Verify::Duality => out.extend(duality(c)?),
            Verify::Cyclicity => out.extend(cyclicity(c)?),
            Verify::Trace => out.extend(trace(c)?),
            Verify::Composition => out.extend(composition(c)?),
        }
    }
    c.report.checks.extend(out);
    Ok(())
}

fn singleton(name: &str, p: &CodeParams) -> Check {
    let ok = p.k == 0 || (p.d.lo <= p.d.hi && p.k + p.d.lo <= p.n + 1);
    Check::assert(name, ok, format!("k + d = {} + {} <= n + 1 = {}", p.k, p.d.lo, p.n + 1))
}

pub fn bounds(c: &Conorm) -> Result<Vec<Check>> {
    let r = &c.report;
    let (n, n1, m) = (r.base.n as i64, r.conorm.n as i64, r.m as i64);
    let deg_g = r.base.deg_g;
    let mut out = vec![
        Check::assert("length", n <= n1 && n1 <= m * n, format!("{n} <= {n1} <= {}", m * n)),
        Check::assert(
            "conorm degree",
            r.conorm.deg_g == m * deg_g,
            format!("deg G' = {} and m deg G = {}", r.conorm.deg_g, m * deg_g),
        ),
        singleton("singleton C", &r.base),
        singleton("singleton C'", &r.conorm),
    ];
    let bound = n1 - m * deg_g;
    out.push(if r.conorm.k == 0 {
        Check::skipped("distance", "C' is the zero code")
    } else {
        let d = r.conorm.d;
        Check::assert(
            "distance",
            d.hi as i64 >= bound && d.lo as i64 >= bound.min(d.lo as i64),
            format!("d' in [{}, {}], n' - m deg G = {bound}", d.lo, d.hi),
        )
    });
    out.push(if r.conorm.level.is_mag() {
        let rhs2 = 2 * m * r.designed_dimension - r.different_degree;
        Check::assert(
            "dimension",
            2 * r.conorm.k as i64 >= rhs2,
            format!("k' = {}, m k* - deg Diff / 2 = {}/2", r.conorm.k, rhs2),
        )
    } else {
        Check::skipped("dimension", "C' is not MAG")
    });
    let (s, rr) = (r.s as i64, r.r as i64);
    if m < 2 {
        out.push(Check::skipped("split and ramified counts", "m = 1"));
    } else if s + rr != n {
        out.push(Check::skipped("split and ramified counts", format!("r + s = {} < n = {n}", s + rr)));
    } else {
        out.push(Check::assert(
            "split and ramified counts",
            n + s <= n1 && n1 == m * s + rr && n1 <= m * n - rr,
            format!("{} <= n' = {n1} = m s + r = {} <= {}", n + s, m * s + rr, m * n - rr),
        ));
        out.push(Check::assert(
            "full length",
            (n1 == m * n) == (s == n),
            format!("n' = {n1}, mn = {}, s = {s}", m * n),
        ));
        if rr == 0 && r.conorm.k > 0 {
            let lo = m * (n - deg_g);
            out.push(Check::assert(
                "distance without ramification",
                r.conorm.d.lo as i64 >= lo,
                format!("d' >= {} and m (n - deg G) = {lo}", r.conorm.d.lo),
            ));
        }
        out.push(Check::assert(
            "length preserved",
            (n1 == n) == (s == 0),
            format!("n' = {n1}, n = {n}, s = {s}"),
        ));
    }
    let t = &c.job.tower;
    let mut bad = Vec::new();
    for z in &c.base_basis {
        let up = t.lift_elem(z, c.job.from, c.job.to);
        if !t.in_riemann_roch(c.job.to, &c.lifted_g, &up)? {
            bad.push(t.display(z));
        }
    }
    out.push(Check::assert(
        "L(G) in L(G')",
        bad.is_empty(),
        if bad.is_empty() { format!("{} basis elements", c.base_basis.len()) } else { bad.join(", ") },
    ));
    Ok(out)
}

pub fn levels(c: &Conorm) -> Vec<Check> {
    let r = &c.report;
    let (n, m) = (r.base.n as i64, r.m as i64);
    let mut out = Vec::new();
    if m < 2 || (r.s + r.r) as i64 != n {
        out.push(Check::skipped("level transfer", "needs m > 1 and r + s = n"));
    } else {
        let (c0, c1) = (r.base.level, r.conorm.level);
        out.push(Check::assert(
            "MAG descends",
            !c1.is_mag() || c0.is_mag(),
            format!("C is {c0}, C' is {c1}"),
        ));
        if r.r == 0 {
            out.push(Check::assert(
                "MAG lifts without ramification",
                c0.is_mag() == c1.is_mag(),
                format!("C is {c0}, C' is {c1}"),
            ));
            if c1.is_mag() && r.conorm.k > 0 {
                out.push(Check::assert("distance at least 2", r.conorm.d.lo >= 2, format!("d' >= {}", r.conorm.d.lo)));
            }
            if let Some(d) = r.base.d.exact().filter(|&d| d as i64 == r.designed_distance && r.base.k > 0) {
                let d1 = r.conorm.d.lo as i64;
                out.push(Check::assert(
                    "distance scales",
                    d1 >= m * d as i64 && d1 * n >= d as i64 * r.conorm.n as i64,
                    format!("d' >= {d1}, m d = {}", m * d as i64),
                ));
            }
        }
        let sag_base = 2 * r.base.genus - 2 < r.base.deg_g;
        if (c1.is_mag() && sag_base) || (c0 == Level::Sag && r.r == 0) {
            let rhs2 = 2 * m * r.base.k as i64 - r.different_degree;
            out.push(Check::assert(
                "dimension from C",
                2 * r.conorm.k as i64 >= rhs2,
                format!("k' = {}, m k - deg Diff / 2 = {rhs2}/2", r.conorm.k),
            ));
        }
    }
    if r.different_degree != 0 {
        out.push(Check::skipped("unramified laws", format!("deg Diff = {}", r.different_degree)));
        return out;
    }
    let (g0, g1) = (r.base.genus, r.conorm.genus);
    out.push(Check::assert("genus", g1 - 1 == m * (g0 - 1), format!("g' - 1 = {}, m (g - 1) = {}", g1 - 1, m * (g0 - 1))));
    out.push(Check::assert(
        "levels agree",
        r.base.level == r.conorm.level,
        format!("C is {}, C' is {}", r.base.level, r.conorm.level),
    ));
    if r.base.level == Level::Sag {
        let (k, k1) = (r.base.k as i64, r.conorm.k as i64);
        out.push(Check::assert(
            "dimension and rate",
            k1 == m * k && k1 * n == k * r.conorm.n as i64,
            format!("k' = {k1}, m k = {}", m * k),
        ));
    }
    out
}

pub fn duality(c: &mut Conorm) -> Result<Vec<Check>> {
    let name = "duality";
    let job = &c.job;
    if job.from != 0 {
        let (n1, k1) = (c.lifted.length(), c.lifted.dimension());
        let kd = c.lifted.dual().dimension();
        return Ok(vec![
            Check::skipped(
                name,
                "base is not the rational function field; no differential with simple poles of residue 1 is available",
            ),
            Check::assert("dual dimension", kd == n1 - k1, format!("dim Con(C)^perp = {kd}, n' - k' = {}", n1 - k1)),
        ]);
    }
    let t = &job.tower;
    let f = t.field();
    let d: Vec<Place> = job.d.iter().map(|p| p.base_place().clone()).collect();
    let g: Divisor = job.g.map_places(|p| p.base_place().clone());
    let g_perp = dual_divisor(f, &d, &g)?;
    let lifted_g = t.conorm_base(&g_perp, job.to)?;
    let basis = t.riemann_roch_ext(job.to, &lifted_g)?.elements;
    let con_dual = agcode::evaluation_code_ext(t, job.to, &c.lifted_d, &lifted_g, &basis)?;
    let dual_con = c.lifted.dual();
    let equal = agcode::codes_equal(&dual_con, &con_dual)?;
    let finding = DualityFinding { dual_of_conorm: dual_con.dimension(), conorm_of_dual: con_dual.dimension(), equal };
    let detail = format!(
        "dim Con(C)^perp = {}, dim Con(C^perp) = {}, {}",
        finding.dual_of_conorm,
        finding.conorm_of_dual,
        if equal { "equal" } else { "not equal" }
    );
    c.report.duality = Some(finding);
    let p = f.characteristic();
    let applies = c.report.different_degree == 0 && !c.report.m.is_multiple_of(p);
    Ok(vec![if applies {
        Check::assert(name, equal, detail)
    } else {
        Check::skipped(name, format!("extension is ramified or p divides m; {detail}"))
    }])
}

pub fn cyclicity(c: &Conorm) -> Result<Vec<Check>> {
    let name = "cyclicity";
    let r = &c.report;
    let job = &c.job;
    let q = job.tower.field().order();
    if r.r != r.base.n {
        return Ok(vec![Check::skipped(name, format!("only {} of {} places are totally ramified", r.r, r.base.n))]);
    }
    if job.to != job.from + 1 {
        return Ok(vec![Check::skipped(name, "extension is a tower of several steps, not known to be Galois")]);
    }
    if crate::extff::gcd(r.m, q) != 1 && !r.m.is_multiple_of(q) {
        return Ok(vec![Check::skipped(name, format!("m = {} is neither prime to q = {q} nor divisible by it", r.m))]);
    }
    let sub = c.base.is_subcode_of(&c.lifted);
    let (cy0, cy1) = (c.base.is_cyclic(), c.lifted.is_cyclic());
    let mut out = vec![
        Check::assert("C in C'", sub, ""),
        Check::assert("cyclic iff", cy0 == cy1, format!("C cyclic: {cy0}, C' cyclic: {cy1}")),
    ];
    if cy0 {
        out.push(Check::assert("cyclic code is its conorm", agcode::codes_equal(&c.base, &c.lifted)?, ""));
    }
    Ok(out)
}

pub fn trace(c: &Conorm) -> Result<Vec<Check>> {
    let name = "trace";
    let job = &c.job;
    let t = &job.tower;
    if !kummer_between(t, job.from, job.to) {
        return Ok(vec![Check::skipped(name, "extension has an Artin-Schreier step")]);
    }
    if c.report.m.is_multiple_of(t.field().characteristic()) {
        return Ok(vec![Check::skipped(name, "p divides m")]);
    }
    let traces: Vec<Elem> = c.lifted_basis.iter().map(|z| t.trace_to(job.to, z, job.from)).collect();
    let (ra, rb, rall) = same_span(t, &traces, &c.base_basis);
    Ok(vec![Check::assert(
        name,
        ra == rb && rb == rall && rb == c.base_basis.len(),
        format!("rank Tr L(G') = {ra}, l(G) = {rb}, joint rank {rall}"),
    )])
}

pub fn composition(c: &Conorm) -> Result<Vec<Check>> {
    let name = "composition";
    let job = &c.job;
    if job.to < job.from + 2 {
        return Ok(vec![Check::skipped(name, "single step")]);
    }
    let mid = job.from + 1;
    let mut first = job.clone();
    first.to = mid;
    first.base_witnesses.clear();
    first.witnesses.clear();
    first.budget = 0;
    let a = conorm_code(&first)?;
    let second = ConormJob::new(&job.tower, mid, job.to, a.lifted_d.clone(), a.lifted_g.clone())
        .mode(Mode::Generalized)
        .budget(0);
    let b = conorm_code(&second)?;
    let same_places = b.lifted_d == c.lifted_d;
    let equal = agcode::codes_equal(&b.lifted, &c.lifted)?;
    Ok(vec![Check::assert(
        name,
        same_places && equal,
        format!("levels {} -> {mid} -> {}: coordinates agree {same_places}, codes equal {equal}", job.from, job.to),
    )])
}
