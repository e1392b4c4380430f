//! Towers of Kummer and Artin-Schreier extensions over GF(q)(x).
//!
//! Level 0 is the rational function field. Step `i` adjoins `y_i` with
//! either `y_i^n = f_i` (Kummer, `n | q - 1`) or `y_i^Q + mu*y_i = f_i`
//! (Artin-Schreier type, `Q` a power of the characteristic and all roots of
//! `T^Q + mu*T` in GF(q)); `f_i` is a rational function in the top variable
//! of level `i - 1`.

mod elem;
mod local;
mod place;
mod rr;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::galois::{prime_factors, Field};
use crate::ratff::{Degree, Place};
use crate::upoly::{roots_in_field, Poly, RatFunc};

pub use elem::Elem;
pub use local::Local;
pub use place::{ExtDivisor, ExtPlace, Record};
pub(crate) use place::gcd;

/// Smallest and largest working precisions (relative, in coefficients) used
/// by local expansions.
pub(crate) const START_PREC: i64 = 16;
pub(crate) const MAX_PREC: i64 = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepKind {
    /// `y^n = f`.
    Kummer { n: u64 },
    /// `y^q + mu*y = f` with `q` a power of the characteristic.
    ArtinSchreier { q: u64, mu: u64 },
}

/// A step as given by the user.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepSpec {
    pub kind: StepKind,
    /// Rational function in the previous top variable.
    pub f: RatFunc,
}

impl StepSpec {
    pub fn kummer(n: u64, f: RatFunc) -> StepSpec {
        StepSpec { kind: StepKind::Kummer { n }, f }
    }

    /// The classical `y^p - y = f`.
    pub fn artin_schreier(f: RatFunc) -> StepSpec {
        let field = f.field().clone();
        StepSpec {
            kind: StepKind::ArtinSchreier { q: field.characteristic(), mu: field.neg(1) },
            f,
        }
    }

    /// `y^q + mu*y = f`.
    pub fn additive(q: u64, mu: u64, f: RatFunc) -> StepSpec {
        StepSpec { kind: StepKind::ArtinSchreier { q, mu }, f }
    }

    pub fn degree(&self) -> u64 {
        match self.kind {
            StepKind::Kummer { n } => n,
            StepKind::ArtinSchreier { q, .. } => q,
        }
    }
}

/// Behaviour of one place of the level below in a step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportEntry {
    pub place: ExtPlace,
    /// `v_P(f)`.
    pub valuation: i64,
    /// Ramification index of every place above.
    pub e: u64,
    /// Different exponent of every place above.
    pub different: i64,
    /// Places above, in canonical order.
    pub above: Vec<ExtPlace>,
}

#[derive(Debug)]
pub struct Step {
    pub spec: StepSpec,
    /// The defining function as an element of the level below.
    pub f_elem: Elem,
    /// Kummer: the n-th roots of unity; Artin-Schreier: the roots of
    /// `T^q + mu*T`. Both sorted, identity action first.
    pub automorphisms: Vec<u64>,
    /// Places of the level below where `f` has a zero or pole (and, for the
    /// first step, the infinite place).
    pub support: Vec<SupportEntry>,
    pub different_degree: i64,
    pub genus: i64,
    /// Degree of `y` as a function on this level, i.e. of `f` on the level
    /// below.
    pub f_degree: u64,
}

impl Step {
    pub fn degree(&self) -> u64 {
        self.spec.degree()
    }

    pub fn kind(&self) -> StepKind {
        self.spec.kind
    }

    pub fn is_kummer(&self) -> bool {
        matches!(self.spec.kind, StepKind::Kummer { .. })
    }

    /// `v_P(f)` for a place of the level below, zero outside the support.
    pub fn f_valuation(&self, p: &ExtPlace) -> i64 {
        self.support.iter().find(|s| &s.place == p).map_or(0, |s| s.valuation)
    }
}

pub(crate) struct TowerData {
    field: Field,
    steps: Vec<Arc<Step>>,
    locals: Mutex<HashMap<(ExtPlace, i64), Arc<Local>>>,
    rational: Mutex<HashMap<usize, Arc<Vec<ExtPlace>>>>,
}

/// An immutable tower of function fields. Cheap to clone.
#[derive(Clone)]
pub struct Tower(Arc<TowerData>);

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tower({}, {} steps)", self.0.field, self.0.steps.len())
    }
}

impl Tower {
    /// The rational function field alone.
    pub fn rational(field: &Field) -> Tower {
        Tower::from_steps(field, Vec::new())
    }

    fn from_steps(field: &Field, steps: Vec<Arc<Step>>) -> Tower {
        Tower(Arc::new(TowerData {
            field: field.clone(),
            steps,
            locals: Mutex::new(HashMap::new()),
            rational: Mutex::new(HashMap::new()),
        }))
    }

    /// Builds a tower step by step.
    pub fn build(field: &Field, specs: &[StepSpec]) -> Result<Tower> {
        specs
            .iter()
            .try_fold(Tower::rational(field), |t, s| t.extend(s.clone()))
    }

    pub fn field(&self) -> &Field {
        &self.0.field
    }

    /// Number of steps; the top level.
    pub fn height(&self) -> usize {
        self.0.steps.len()
    }

    /// Step `i` (1-based), the extension of level `i - 1` to level `i`.
    pub fn step(&self, i: usize) -> &Step {
        &self.0.steps[i - 1]
    }

    pub fn genus(&self, level: usize) -> i64 {
        if level == 0 {
            0
        } else {
            self.step(level).genus
        }
    }

    /// `[F_level : F_0]`.
    pub fn degree_over_base(&self, level: usize) -> u64 {
        (1..=level).map(|i| self.step(i).degree()).product()
    }

    /// `[F_to : F_from]`.
    pub fn degree_between(&self, from: usize, to: usize) -> u64 {
        (from + 1..=to).map(|i| self.step(i).degree()).product()
    }

    /// The tower truncated at `level`.
    pub fn truncate(&self, level: usize) -> Tower {
        if level == self.height() {
            return self.clone();
        }
        Tower::from_steps(&self.0.field, self.0.steps[..level].to_vec())
    }

    /// Name of the generator of `level` (`x` for level 0).
    pub fn var_name(&self, level: usize) -> String {
        match (level, self.height()) {
            (0, _) => "x".into(),
            (1, 1) => "y".into(),
            (j, _) => format!("y{j}"),
        }
    }

    /// Adds a step on top.
    pub fn extend(&self, spec: StepSpec) -> Result<Tower> {
        let field = self.field().clone();
        if spec.f.field() != &field {
            return Err(Error::MixedFields);
        }
        let level = self.height() + 1;
        let automorphisms = match spec.kind {
            StepKind::Kummer { n } => {
                if n < 2 || !(field.order() - 1).is_multiple_of(n) {
                    return Err(Error::InvalidExtension(format!(
                        "Kummer degree {n} must be at least 2 and divide q - 1 = {}",
                        field.order() - 1
                    )));
                }
                let tn = &Poly::monomial(&field, 1, n as usize) - &Poly::one(&field);
                roots_in_field(&tn)?
            }
            StepKind::ArtinSchreier { q, mu } => {
                let p = field.characteristic();
                let mut r = q;
                while r > 1 && r % p == 0 {
                    r /= p;
                }
                if q < p || r != 1 || q > field.order() || mu == 0 || !field.contains(mu) {
                    return Err(Error::InvalidExtension(format!(
                        "y^{q} + {mu}*y needs a power of {p} not exceeding {} and mu != 0",
                        field.order()
                    )));
                }
                let add = &Poly::monomial(&field, 1, q as usize) + &Poly::monomial(&field, mu, 1);
                let roots = roots_in_field(&add)?;
                if roots.len() as u64 != q {
                    return Err(Error::InvalidExtension(format!(
                        "T^{q} + {mu}*T does not split over {field}"
                    )));
                }
                roots
            }
        };
        if spec.f.is_zero() || spec.f.as_constant().is_some() {
            return Err(Error::Degenerate("defining function is constant".into()));
        }
        let f_elem = self.substitute_top(&spec.f)?;
        let d = spec.f.num().deg0().max(spec.f.den().deg0()) as u64;
        let f_degree = d * self.y_degree(level - 1);
        let support = self.analyze_support(level, &spec, &f_elem, f_degree)?;
        let m = spec.degree();
        let different_degree: i64 = support
            .iter()
            .map(|s| s.different * s.above.iter().map(|p| p.degree() as i64).sum::<i64>())
            .sum();
        let twice = m as i64 * (2 * self.genus(level - 1) - 2) + different_degree;
        if twice % 2 != 0 {
            return Err(Error::Degenerate(format!("odd Hurwitz sum {twice}")));
        }
        let genus = twice / 2 + 1;
        let step = Step { spec, f_elem, automorphisms, support, different_degree, genus, f_degree };
        let mut steps = self.0.steps.clone();
        steps.push(Arc::new(step));
        let tower = Tower::from_steps(&field, steps);
        tower.check_step(level)?;
        Ok(tower)
    }

    /// Degree of the top variable of `level` as a function on that level.
    fn y_degree(&self, level: usize) -> u64 {
        if level == 0 {
            1
        } else {
            self.step(level).f_degree
        }
    }

    /// Evaluates a rational function at the top variable of the current top
    /// level.
    fn substitute_top(&self, f: &RatFunc) -> Result<Elem> {
        let level = self.height();
        if level == 0 {
            return Ok(Elem::Base(f.clone()));
        }
        let y = self.var(level, level);
        let horner = |p: &Poly| {
            p.coeffs().iter().rev().fold(self.zero(level), |acc, &c| {
                self.add(&self.mul(level, &acc, &y), &self.constant(level, c))
            })
        };
        let num = horner(f.num());
        let den = horner(f.den());
        Ok(self.mul(level, &num, &self.inv(level, &den)?))
    }

    fn analyze_support(
        &self,
        level: usize,
        spec: &StepSpec,
        f_elem: &Elem,
        f_degree: u64,
    ) -> Result<Vec<SupportEntry>> {
        let below = level - 1;
        let mut entries = Vec::new();
        if below == 0 {
            let mut places = vec![Place::Infinite];
            for poly in [spec.f.num(), spec.f.den()] {
                if !poly.is_constant() {
                    for (g, _) in crate::upoly::factorize(poly)? {
                        places.push(Place::Finite(g));
                    }
                }
            }
            places.sort();
            for p in places {
                let v = crate::ratff::valuation(&spec.f, &p)?;
                let ep = ExtPlace::base(p);
                entries.push(self.support_entry(level, spec, f_elem, ep, v)?);
            }
        } else {
            let mut zeros = 0i64;
            let mut poles = 0i64;
            for p in self.rational_places(below)?.iter() {
                let v = self.valuation_ext(below, f_elem, p)?;
                if v != 0 {
                    if v > 0 {
                        zeros += v;
                    } else {
                        poles -= v;
                    }
                    entries.push(self.support_entry(level, spec, f_elem, p.clone(), v)?);
                }
            }
            if zeros != f_degree as i64 || poles != f_degree as i64 {
                return Err(Error::Unsupported(format!(
                    "step {level}: the defining function has zeros or poles at places of degree > 1"
                )));
            }
        }
        Ok(entries)
    }

    fn support_entry(
        &self,
        level: usize,
        spec: &StepSpec,
        f_elem: &Elem,
        place: ExtPlace,
        v: i64,
    ) -> Result<SupportEntry> {
        let (above, reduced_pole) = self.classify(level, spec, f_elem, &place)?;
        let e = above.first().map_or(1, |p| p.last_e());
        let different = match spec.kind {
            StepKind::Kummer { .. } => e as i64 - 1,
            StepKind::ArtinSchreier { q, .. } => {
                if e == 1 {
                    0
                } else {
                    let m = reduced_pole.ok_or(Error::Degenerate("missing reduced pole".into()))?;
                    (q as i64 - 1) * (m + 1)
                }
            }
        };
        Ok(SupportEntry { place, valuation: v, e, different, above })
    }

    /// Checks irreducibility and that the constant field does not grow.
    fn check_step(&self, level: usize) -> Result<()> {
        let step = self.step(level);
        let below = level - 1;
        let totally_ramified = step.support.iter().any(|s| s.e == step.degree());
        let has_rational = || -> Result<bool> {
            for p in self.rational_places(below)?.iter() {
                if self.lift(level, p)?.iter().any(|q| q.is_rational()) {
                    return Ok(true);
                }
            }
            Ok(false)
        };
        if !totally_ramified {
            match step.kind() {
                StepKind::Kummer { n } => {
                    let f = self.field();
                    let q1 = f.order() - 1;
                    let mut primes = prime_factors(n);
                    if n % 4 == 0 {
                        primes.push(4);
                    }
                    for d in primes {
                        if step.support.iter().any(|s| s.valuation % d as i64 != 0) {
                            continue;
                        }
                        // A unit residue outside the relevant subgroup rules
                        // out f = g^d (or f = -4 g^4).
                        let mut found = false;
                        for p in self.rational_places(below)?.iter() {
                            if step.support.iter().any(|s| &s.place == p) {
                                continue;
                            }
                            let r = self.evaluate_ext(below, &step.f_elem, p)?;
                            let ok = if d == 4 {
                                let t = f.div(r, f.neg(4 % f.characteristic()))?;
                                f.pow(t, q1 / 4) != 1
                            } else {
                                f.pow(r, q1 / d) != 1
                            };
                            if ok {
                                found = true;
                                break;
                            }
                        }
                        if !found {
                            return Err(Error::Degenerate(format!(
                                "step {level}: could not certify that f is not a {d}-th power"
                            )));
                        }
                    }
                }
                StepKind::ArtinSchreier { q, .. } => {
                    let p = self.field().characteristic();
                    let inert = if q == p {
                        let mut found = false;
                        for pl in self.rational_places(below)?.iter() {
                            if self.lift(level, pl)?.iter().any(|x| x.last_f() > 1) {
                                found = true;
                                break;
                            }
                        }
                        found
                    } else {
                        false
                    };
                    if !inert {
                        return Err(Error::Degenerate(format!(
                            "step {level}: no totally ramified place certifies the degree"
                        )));
                    }
                }
            }
        }
        if !totally_ramified && !has_rational()? {
            return Err(Error::ConstantFieldGrowth(format!(
                "step {level} has no totally ramified place and no rational place"
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
