//! Conorm codes `Con_{F'/F}(C) = C_L(D', Con(G))` and checks of their
//! parameters against the bounds relating `C` and `C'`.
//!
//! Coordinates of `D'` are grouped by the base place they lie over, in the
//! order of `D`, and within a group in the canonical lift order. With
//! totally ramified supports the coordinates of `C` and `C'` coincide.

use serde::Serialize;

use crate::agcode::{self, Distance, Level, LinearCode};
use crate::error::{Error, Result};
use crate::extff::{Elem, ExtDivisor, ExtPlace, StepKind, Tower};
use crate::galois::Field;
use crate::linalg;
use crate::ratff::{self, Degree, Divisor, Place};

mod verify;

pub use verify::verify_all;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Every place above `P` in `Supp(D)` is rational with `e * m_P = m`.
    Strict,
    /// Every place above `P` in `Supp(D)` is rational.
    Generalized,
}

/// Checks that can be requested for a job.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verify {
    Bounds,
    Levels,
    Duality,
    Cyclicity,
    Trace,
    Composition,
}

impl Verify {
    pub const ALL: [Verify; 6] =
        [Verify::Bounds, Verify::Levels, Verify::Duality, Verify::Cyclicity, Verify::Trace, Verify::Composition];

    pub fn parse(s: &str) -> Option<Verify> {
        Some(match s {
            "bounds" => Verify::Bounds,
            "levels" => Verify::Levels,
            "duality" => Verify::Duality,
            "cyclicity" => Verify::Cyclicity,
            "trace" => Verify::Trace,
            "composition" => Verify::Composition,
            _ => return None,
        })
    }
}

/// A base code `C_L(D, G)` on level `from` of `tower`, to be lifted to level
/// `to`.
#[derive(Clone, Debug)]
pub struct ConormJob {
    pub tower: Tower,
    pub from: usize,
    pub to: usize,
    pub d: Vec<ExtPlace>,
    pub g: ExtDivisor,
    /// Basis of `L(G)`; computed when absent, certified when given.
    pub basis: Option<Vec<Elem>>,
    pub mode: Mode,
    /// Elements of level `from` whose evaluations bound `d(C)` from above.
    pub base_witnesses: Vec<Elem>,
    /// Elements of level `to` whose evaluations bound `d(C')` from above.
    pub witnesses: Vec<Elem>,
    pub budget: u64,
}

impl ConormJob {
    pub fn new(tower: &Tower, from: usize, to: usize, d: Vec<ExtPlace>, g: ExtDivisor) -> ConormJob {
        ConormJob {
            tower: tower.clone(),
            from,
            to,
            d,
            g,
            basis: None,
            mode: Mode::Strict,
            base_witnesses: Vec::new(),
            witnesses: Vec::new(),
            budget: agcode::DEFAULT_BUDGET,
        }
    }

    pub fn mode(mut self, mode: Mode) -> ConormJob {
        self.mode = mode;
        self
    }

    pub fn budget(mut self, budget: u64) -> ConormJob {
        self.budget = budget;
        self
    }

    pub fn witness(mut self, z: Elem) -> ConormJob {
        self.witnesses.push(z);
        self
    }

    pub fn base_witness(mut self, z: Elem) -> ConormJob {
        self.base_witnesses.push(z);
        self
    }

    pub fn basis(mut self, b: Vec<Elem>) -> ConormJob {
        self.basis = Some(b);
        self
    }

    /// A job on the rational function field (level 0).
    pub fn rational(tower: &Tower, to: usize, d: &[Place], g: &Divisor) -> ConormJob {
        let d = d.iter().cloned().map(ExtPlace::base).collect();
        ConormJob::new(tower, 0, to, d, g.map_places(|p| ExtPlace::base(p.clone())))
    }
}

/// Behavior of one place of `Supp(D)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftRow {
    pub place: String,
    pub m_p: usize,
    pub e: u64,
    pub above: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    pub d: Distance,
    pub deg_g: i64,
    pub genus: i64,
    pub level: Level,
}

impl CodeParams {
    fn of(code: &LinearCode, deg_g: i64, genus: i64) -> CodeParams {
        CodeParams {
            n: code.length(),
            k: code.dimension(),
            d: code.distance(),
            deg_g,
            genus,
            level: Level::classify(deg_g, code.length(), genus),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    pub fn assert(name: &str, ok: bool, detail: impl Into<String>) -> Check {
        Check { name: name.into(), status: if ok { Status::Pass } else { Status::Fail }, detail: detail.into() }
    }

    pub fn skipped(name: &str, reason: impl Into<String>) -> Check {
        Check { name: name.into(), status: Status::Skipped, detail: reason.into() }
    }
}

/// Outcome of comparing `Con(C)^perp` with `Con(C^perp)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityFinding {
    pub dual_of_conorm: usize,
    pub conorm_of_dual: usize,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConormReport {
    pub field: String,
    pub mode: Mode,
    pub m: u64,
    pub lift: Vec<LiftRow>,
    /// Places of `D` that split completely.
    pub s: usize,
    /// Places of `D` that are totally ramified.
    pub r: usize,
    pub base: CodeParams,
    pub conorm: CodeParams,
    /// `k* = deg G + 1 - g`.
    pub designed_dimension: i64,
    /// `d* = n - deg G`.
    pub designed_distance: i64,
    /// `deg Diff(F'/F)` from the Hurwitz formula.
    pub different_degree: i64,
    pub duality: Option<DualityFinding>,
    pub checks: Vec<Check>,
}

impl ConormReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }
}

/// A computed conorm code with everything the checks need.
#[derive(Clone, Debug)]
pub struct Conorm {
    pub job: ConormJob,
    pub base: LinearCode,
    pub lifted: LinearCode,
    pub base_basis: Vec<Elem>,
    pub lifted_d: Vec<ExtPlace>,
    pub lifted_g: ExtDivisor,
    pub lifted_basis: Vec<Elem>,
    pub report: ConormReport,
}

fn deg(a: &ExtDivisor) -> i64 {
    a.terms().map(|(p, n)| n * p.degree() as i64).sum()
}

fn witness_word(tower: &Tower, level: usize, places: &[ExtPlace], z: &Elem) -> Result<Vec<u64>> {
    places.iter().map(|p| tower.evaluate_ext(level, z, p)).collect()
}

/// Builds `C` and `Con(C)` and fills in the report (without checks).
pub fn conorm_code(job: &ConormJob) -> Result<Conorm> {
    let t = &job.tower;
    let f = t.field();
    if job.from > job.to || job.to > t.height() {
        return Err(Error::Parameter(format!("levels {} -> {} in a tower of height {}", job.from, job.to, t.height())));
    }
    if job.d.is_empty() {
        return Err(Error::InvalidDivisor("empty evaluation divisor".into()));
    }
    let m = t.degree_between(job.from, job.to);
    let mut lift = Vec::with_capacity(job.d.len());
    let mut lifted_d = Vec::new();
    let (mut s, mut r) = (0, 0);
    for p in &job.d {
        if p.level() != job.from {
            return Err(Error::InvalidDivisor(format!("{} is not a place of level {}", p.label(f), job.from)));
        }
        let above = t.lift_to(p, job.to)?;
        if let Some(q) = above.iter().find(|q| !q.is_rational()) {
            return Err(Error::NotRational(format!("{} above {}", q.label(f), p.label(f))));
        }
        let e = above[0].ramification_over(job.from);
        if job.mode == Mode::Strict {
            if let Some(q) = above.iter().find(|q| q.ramification_over(job.from) * above.len() as u64 != m) {
                return Err(Error::ConormCondition(format!(
                    "{}: e = {}, m_P = {}, m = {m}",
                    q.label(f),
                    q.ramification_over(job.from),
                    above.len()
                )));
            }
        }
        if above.len() as u64 == m {
            s += 1;
        }
        if e == m {
            r += 1;
        }
        lift.push(LiftRow {
            place: p.label(f),
            m_p: above.len(),
            e,
            above: above.iter().map(|q| q.label(f)).collect(),
        });
        lifted_d.extend(above);
    }

    let base_basis = match &job.basis {
        Some(b) => {
            t.verified_basis(job.from, &job.g, b)?;
            b.clone()
        }
        None => t.riemann_roch_ext(job.from, &job.g)?.elements,
    };
    let mut base = agcode::evaluation_code_ext(t, job.from, &job.d, &job.g, &base_basis)?.min_distance(job.budget);
    let lifted_g = t.conorm(&job.g, job.from, job.to)?;
    let lifted_basis = t.riemann_roch_ext(job.to, &lifted_g)?.elements;
    let mut lifted =
        agcode::evaluation_code_ext(t, job.to, &lifted_d, &lifted_g, &lifted_basis)?.min_distance(job.budget);
    for z in &job.base_witnesses {
        base = base.with_witness(&witness_word(t, job.from, &job.d, z)?)?;
        let up = t.lift_elem(z, job.from, job.to);
        lifted = lifted.with_witness(&witness_word(t, job.to, &lifted_d, &up)?)?;
    }
    for z in &job.witnesses {
        lifted = lifted.with_witness(&witness_word(t, job.to, &lifted_d, z)?)?;
    }

    let (g0, g1) = (t.genus(job.from), t.genus(job.to));
    let deg_g = deg(&job.g);
    let report = ConormReport {
        field: format!("GF({})", f.order()),
        mode: job.mode,
        m,
        lift,
        s,
        r,
        base: CodeParams::of(&base, deg_g, g0),
        conorm: CodeParams::of(&lifted, deg(&lifted_g), g1),
        designed_dimension: deg_g + 1 - g0,
        designed_distance: job.d.len() as i64 - deg_g,
        different_degree: 2 * g1 - 2 - m as i64 * (2 * g0 - 2),
        duality: None,
        checks: Vec::new(),
    };
    Ok(Conorm { job: job.clone(), base, lifted, base_basis, lifted_d, lifted_g, lifted_basis, report })
}

/// Builds the conorm code and runs the requested checks.
pub fn run(job: &ConormJob, checks: &[Verify]) -> Result<Conorm> {
    let mut c = conorm_code(job)?;
    verify_all(&mut c, checks)?;
    Ok(c)
}

/// `C^perp = C_L(D, D - G + (eta))` on the rational function field.
pub fn dual_divisor(field: &Field, d: &[Place], g: &Divisor) -> Result<Divisor> {
    let dd = Divisor::from_terms(d.iter().map(|p| (p.clone(), 1)));
    let (eta, _) = ratff::eta_divisor(field, &dd)?;
    Ok(dd.sub(g).add(&eta))
}

/// Whether every step between the two levels is Kummer.
fn kummer_between(t: &Tower, from: usize, to: usize) -> bool {
    (from + 1..=to).all(|i| matches!(t.step(i).kind(), StepKind::Kummer { .. }))
}

/// The spans of two element lists coincide (ranks of the flattened lists).
fn same_span(t: &Tower, a: &[Elem], b: &[Elem]) -> (usize, usize, usize) {
    let f = t.field();
    let mut all = a.to_vec();
    all.extend_from_slice(b);
    let flat = t.flatten(&all);
    let (fa, fb) = flat.split_at(a.len());
    (linalg::rank(f, &fa.to_vec()), linalg::rank(f, &fb.to_vec()), linalg::rank(f, &flat))
}


#[cfg(test)]
mod tests;
