//! JSON job files: a base code on some level of an explicit tower, the level
//! to lift to, and the checks to run. Schema errors carry JSON pointers.
//!
//! ```json
//! {
//!   "name": "gs-quadratic",
//!   "field": {"p": 2, "k": 2},
//!   "extension": [{"kind": "artin_schreier", "f": "x^2/(x+1)"}],
//!   "base_code": {"D": ["1", "#2", "#3"], "G": {"inf": 2}},
//!   "witnesses": ["(x-#2)*(x-#3)"],
//!   "mode": "strict",
//!   "verify": ["bounds", "levels"],
//!   "expect": {"conorm": {"n": 5, "k": 4, "d": 1}}
//! }
//! ```
//!
//! Places of the rational function field are written `inf`, a field
//! constant (the zero of `x - a`), or a monic irreducible polynomial in `x`.
//! `G` is given on the rational function field and conormed to the base
//! level. `D` is a list of places (base level 0), `"all-finite-rational"`,
//! or `{"above": [...]}` listing the places of the base level above the
//! given places.

use std::time::Instant;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::conorm::{self, Check, Conorm, ConormJob, ConormReport, Mode, Verify};
use crate::error::{Error, Result};
use crate::extff::{ExtPlace, StepSpec, Tower};
use crate::galois::Field;
use crate::ratff::{Divisor, Place};
use crate::upoly::{parse_expr, parse_poly};

fn err(pointer: &str, msg: impl Into<String>) -> Error {
    Error::Job { pointer: pointer.into(), msg: msg.into() }
}

fn wrap(pointer: &str, e: Error) -> Error {
    match e {
        Error::Job { .. } => e,
        e => err(pointer, e.to_string()),
    }
}

fn object<'a>(v: &'a Value, ptr: &str, allowed: &[&str]) -> Result<&'a Map<String, Value>> {
    let m = v.as_object().ok_or_else(|| err(ptr, "expected an object"))?;
    if let Some(k) = m.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(err(&format!("{ptr}/{k}"), "unknown key"));
    }
    Ok(m)
}

fn uint(m: &Map<String, Value>, ptr: &str, key: &str) -> Result<Option<u64>> {
    match m.get(key) {
        None => Ok(None),
        Some(v) => v.as_u64().map(Some).ok_or_else(|| err(&format!("{ptr}/{key}"), "expected a nonnegative integer")),
    }
}

fn req_uint(m: &Map<String, Value>, ptr: &str, key: &str) -> Result<u64> {
    uint(m, ptr, key)?.ok_or_else(|| err(&format!("{ptr}/{key}"), "missing"))
}

fn string<'a>(v: &'a Value, ptr: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| err(ptr, "expected a string"))
}

fn array<'a>(v: &'a Value, ptr: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| err(ptr, "expected an array"))
}

/// A place of the rational function field from its job-file label.
pub fn parse_place(field: &Field, text: &str) -> Result<Place> {
    let t = text.trim();
    if t == "inf" || t == "P(inf)" {
        return Ok(Place::Infinite);
    }
    let p = parse_poly(t, field)?;
    if p.is_zero() || p.deg0() == 0 {
        return Ok(Place::rational(field, p.coeff(0)));
    }
    Place::finite(p.monic())
}

fn parse_field(v: &Value) -> Result<Field> {
    let ptr = "/field";
    let m = object(v, ptr, &["p", "k", "modulus"])?;
    let p = req_uint(m, ptr, "p")?;
    let k = uint(m, ptr, "k")?.unwrap_or(1);
    let modulus = match m.get("modulus") {
        None => None,
        Some(v) => Some(
            array(v, "/field/modulus")?
                .iter()
                .enumerate()
                .map(|(i, c)| c.as_u64().ok_or_else(|| err(&format!("/field/modulus/{i}"), "expected an integer")))
                .collect::<Result<Vec<u64>>>()?,
        ),
    };
    let k = u32::try_from(k).map_err(|_| err("/field/k", "too large"))?;
    Field::new(p, k, modulus.as_deref()).map_err(|e| wrap(ptr, e))
}

fn parse_step(field: &Field, v: &Value, ptr: &str) -> Result<StepSpec> {
    let m = object(v, ptr, &["kind", "n", "q", "mu", "f"])?;
    let kind = string(m.get("kind").ok_or_else(|| err(&format!("{ptr}/kind"), "missing"))?, &format!("{ptr}/kind"))?;
    let fp = format!("{ptr}/f");
    let f = parse_expr(string(m.get("f").ok_or_else(|| err(&fp, "missing"))?, &fp)?, field).map_err(|e| wrap(&fp, e))?;
    Ok(match kind {
        "kummer" => StepSpec::kummer(req_uint(m, ptr, "n")?, f),
        "artin_schreier" => StepSpec::artin_schreier(f),
        "additive" => {
            let mu = match m.get("mu") {
                None => 1,
                Some(v) => {
                    let mp = format!("{ptr}/mu");
                    let r = parse_expr(string(v, &mp)?, field).map_err(|e| wrap(&mp, e))?;
                    r.as_constant().ok_or_else(|| err(&mp, "expected a constant"))?
                }
            };
            StepSpec::additive(req_uint(m, ptr, "q")?, mu, f)
        }
        _ => return Err(err(&format!("{ptr}/kind"), format!("unknown step kind {kind:?}"))),
    })
}

/// Comparison of a computed report with expected values.
#[derive(Clone, Debug, Default)]
pub struct Expect(pub Map<String, Value>);

#[derive(Clone, Debug)]
pub struct JobSpec {
    pub name: Option<String>,
    pub job: ConormJob,
    pub verify: Vec<Verify>,
    pub classic: bool,
    pub expect: Expect,
    pub source: Value,
}

const TOP_KEYS: &[&str] = &[
    "name",
    "field",
    "extension",
    "base_level",
    "target_level",
    "base_code",
    "witnesses",
    "mode",
    "verify",
    "expect",
    "distance_budget",
];

pub fn parse_job(text: &str) -> Result<JobSpec> {
    let v: Value = serde_json::from_str(text).map_err(|e| err("", format!("invalid JSON: {e}")))?;
    job_from_value(&v)
}

pub fn job_from_value(v: &Value) -> Result<JobSpec> {
    let top = object(v, "", TOP_KEYS)?;
    let name = top.get("name").map(|n| string(n, "/name").map(str::to_string)).transpose()?;
    let field = parse_field(top.get("field").ok_or_else(|| err("/field", "missing"))?)?;
    let steps = array(top.get("extension").ok_or_else(|| err("/extension", "missing"))?, "/extension")?
        .iter()
        .enumerate()
        .map(|(i, s)| parse_step(&field, s, &format!("/extension/{i}")))
        .collect::<Result<Vec<_>>>()?;
    if steps.is_empty() {
        return Err(err("/extension", "at least one step is required"));
    }
    let tower = Tower::build(&field, &steps).map_err(|e| wrap("/extension", e))?;
    let from = uint(top, "", "base_level")?.unwrap_or(0) as usize;
    let to = uint(top, "", "target_level")?.map_or(tower.height(), |t| t as usize);
    if from >= to || to > tower.height() {
        return Err(err("/target_level", format!("need base_level < target_level <= {}", tower.height())));
    }

    let bp = "/base_code";
    let bc = object(top.get("base_code").ok_or_else(|| err(bp, "missing"))?, bp, &["D", "G", "basis", "witnesses"])?;
    let gp = "/base_code/G";
    let mut g = Divisor::zero();
    if let Some(gv) = bc.get("G") {
        for (label, n) in gv.as_object().ok_or_else(|| err(gp, "expected an object"))? {
            let ptr = format!("{gp}/{label}");
            let p = parse_place(&field, label).map_err(|e| wrap(&ptr, e))?;
            g.add_term(p, n.as_i64().ok_or_else(|| err(&ptr, "expected an integer"))?);
        }
    }
    let g = tower.conorm_base(&g, from).map_err(|e| wrap(gp, e))?;

    let dp = "/base_code/D";
    let dv = bc.get("D").ok_or_else(|| err(dp, "missing"))?;
    let d: Vec<ExtPlace> = match dv {
        Value::String(s) if s == "all-finite-rational" => tower
            .rational_places(from)
            .map_err(|e| wrap(dp, e))?
            .iter()
            .filter(|p| !p.base_place().is_infinite() && g.coeff(p) == 0)
            .cloned()
            .collect(),
        Value::Array(items) if from == 0 => items
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let ptr = format!("{dp}/{i}");
                parse_place(&field, string(s, &ptr)?).map(ExtPlace::base).map_err(|e| wrap(&ptr, e))
            })
            .collect::<Result<_>>()?,
        Value::Array(_) => return Err(err(dp, "a place list needs base_level 0; use {\"above\": [...]}")),
        Value::Object(_) => {
            let m = object(dv, dp, &["above"])?;
            let ap = format!("{dp}/above");
            let mut out = Vec::new();
            for (i, s) in array(m.get("above").ok_or_else(|| err(&ap, "missing"))?, &ap)?.iter().enumerate() {
                let ptr = format!("{ap}/{i}");
                let p = parse_place(&field, string(s, &ptr)?).map_err(|e| wrap(&ptr, e))?;
                out.extend(tower.places_above_base(&p, from).map_err(|e| wrap(&ptr, e))?);
            }
            out
        }
        _ => return Err(err(dp, "expected a list of places, \"all-finite-rational\" or {\"above\": [...]}")),
    };

    let elems = |v: Option<&Value>, ptr: &str, level: usize| -> Result<Vec<_>> {
        match v {
            None => Ok(Vec::new()),
            Some(v) => array(v, ptr)?
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let p = format!("{ptr}/{i}");
                    tower.parse(level, string(s, &p)?).map_err(|e| wrap(&p, e))
                })
                .collect(),
        }
    };
    let mut job = ConormJob::new(&tower, from, to, d, g);
    if bc.contains_key("basis") {
        job.basis = Some(elems(bc.get("basis"), "/base_code/basis", from)?);
    }
    job.base_witnesses = elems(bc.get("witnesses"), "/base_code/witnesses", from)?;
    job.witnesses = elems(top.get("witnesses"), "/witnesses", to)?;
    if let Some(b) = uint(top, "", "distance_budget")? {
        job.budget = b;
    }
    job.mode = match top.get("mode").map(|m| string(m, "/mode")).transpose()? {
        None | Some("strict") => Mode::Strict,
        Some("generalized") => Mode::Generalized,
        Some(other) => return Err(err("/mode", format!("unknown mode {other:?}"))),
    };
    let mut verify = Vec::new();
    let mut classic = false;
    if let Some(vs) = top.get("verify") {
        for (i, s) in array(vs, "/verify")?.iter().enumerate() {
            let ptr = format!("/verify/{i}");
            match string(s, &ptr)? {
                "classic" => classic = true,
                "all" => verify.extend(Verify::ALL),
                name => verify.push(Verify::parse(name).ok_or_else(|| err(&ptr, format!("unknown check {name:?}")))?),
            }
        }
    }
    verify.sort();
    verify.dedup();
    let expect = match top.get("expect") {
        None => Expect::default(),
        Some(e) => Expect(e.as_object().ok_or_else(|| err("/expect", "expected an object"))?.clone()),
    };
    Ok(JobSpec { name, job, verify, classic, expect, source: v.clone() })
}

/// Values that `expect` may refer to.
pub fn computed_values(r: &ConormReport) -> Value {
    let code = |c: &conorm::CodeParams| {
        let mut m = serde_json::json!({
            "n": c.n, "k": c.k, "d_lo": c.d.lo, "d_hi": c.d.hi,
            "deg_g": c.deg_g, "genus": c.genus, "level": c.level.to_string(),
        });
        if let Some(d) = c.d.exact() {
            m["d"] = d.into();
        }
        m
    };
    let mut v = serde_json::json!({
        "base": code(&r.base),
        "conorm": code(&r.conorm),
        "m": r.m, "s": r.s, "r": r.r,
        "different_degree": r.different_degree,
        "designed_dimension": r.designed_dimension,
        "designed_distance": r.designed_distance,
    });
    if let Some(d) = &r.duality {
        v["dual_of_conorm"] = d.dual_of_conorm.into();
        v["conorm_of_dual"] = d.conorm_of_dual.into();
        v["duality_equal"] = d.equal.into();
    }
    v
}

fn compare(path: &str, expected: &Value, computed: Option<&Value>, out: &mut Vec<Check>) {
    if let Value::Object(m) = expected {
        for (k, v) in m {
            compare(&format!("{path}/{k}"), v, computed.and_then(|c| c.get(k)), out);
        }
        return;
    }
    let name = format!("expect {path}");
    out.push(match computed {
        None => Check::assert(&name, false, format!("expected {expected}, not computed")),
        Some(c) => Check::assert(&name, c == expected, format!("expected {expected}, computed {c}")),
    });
}

impl Expect {
    pub fn checks(&self, r: &ConormReport) -> Vec<Check> {
        let computed = computed_values(r);
        let mut out = Vec::new();
        compare("", &Value::Object(self.0.clone()), Some(&computed), &mut out);
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct JobReport {
    pub name: Option<String>,
    pub job: Value,
    pub report: ConormReport,
    pub passed: bool,
    pub elapsed_ms: u128,
}

/// Runs a parsed job: construction, requested checks, the classic
/// identities when asked, and the expected-value comparison.
pub fn run_job(spec: &JobSpec) -> Result<(Conorm, JobReport)> {
    let start = Instant::now();
    let mut c = conorm::run(&spec.job, &spec.verify)?;
    if spec.classic {
        c.report.checks.extend(crate::registry::classic_identities()?);
    }
    let extra = spec.expect.checks(&c.report);
    c.report.checks.extend(extra);
    let report = JobReport {
        name: spec.name.clone(),
        job: spec.source.clone(),
        passed: c.report.passed(),
        report: c.report.clone(),
        elapsed_ms: start.elapsed().as_millis(),
    };
    Ok((c, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    const GS: &str = r##"{
        "field": {"p": 2, "k": 2},
        "extension": [{"kind": "artin_schreier", "f": "x^2/(x+1)"}],
        "base_code": {"D": ["1", "#2", "#3"], "G": {"inf": 2}},
        "witnesses": ["(x-#2)*(x-#3)"],
        "verify": ["bounds", "levels"],
        "expect": {"base": {"n": 3, "k": 3, "d": 1}, "conorm": {"n": 5, "k": 4, "d": 1}, "s": 2, "r": 1}
    }"##;

    #[test]
    fn gs_job_runs() {
        let spec = parse_job(GS).unwrap();
        let (_, rep) = run_job(&spec).unwrap();
        assert!(rep.passed, "{:?}", rep.report.failures().collect::<Vec<_>>());
        assert!(rep.report.checks.iter().any(|c| c.name == "expect /conorm/d"));
    }

    #[test]
    fn expectation_mismatch_fails() {
        let text = GS.replace("\"s\": 2", "\"s\": 3");
        let (_, rep) = run_job(&parse_job(&text).unwrap()).unwrap();
        assert!(!rep.passed);
    }

    #[test]
    fn schema_errors_have_pointers() {
        let bad = GS.replace("\"kind\": \"artin_schreier\"", "\"kind\": \"cubic\"");
        assert!(matches!(parse_job(&bad), Err(Error::Job { pointer, .. }) if pointer == "/extension/0/kind"));
        let bad = GS.replace("\"#2\"", "\"x^2+1\"");
        assert!(matches!(parse_job(&bad), Err(Error::Job { pointer, .. }) if pointer == "/base_code/D/1"));
        let bad = GS.replace("\"verify\"", "\"verfy\"");
        assert!(matches!(parse_job(&bad), Err(Error::Job { pointer, .. }) if pointer == "/verfy"));
        assert!(matches!(parse_job("{"), Err(Error::Job { .. })));
    }
}
