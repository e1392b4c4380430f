//! Linear codes over GF(q) and algebraic-geometry codes built by evaluation.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extff::{Elem, ExtDivisor, ExtPlace, Tower};
use crate::galois::Field;
use crate::linalg::{self, Matrix};
use crate::ratff::{self, Degree, Divisor, Place};
use crate::upoly::RatFunc;

/// Default limit on the number of codewords scanned for the distance.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// How the current distance interval was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceSource {
    Design,
    Witness,
    Exhaustive,
}

/// Certified interval `lo <= d <= hi`. The zero code reports `lo = hi = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Distance {
    pub lo: usize,
    pub hi: usize,
    pub source: DistanceSource,
}

impl Distance {
    pub fn exact(&self) -> Option<usize> {
        (self.lo == self.hi).then_some(self.lo)
    }
}

/// AG-code level of `C_L(D, G)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Level {
    /// `2g - 2 < deg G < n`.
    #[serde(rename = "SAG")]
    Sag,
    /// `deg G < n`.
    #[serde(rename = "MAG")]
    Mag,
    /// `deg G >= n`.
    #[serde(rename = "WAG")]
    Wag,
}

impl Level {
    pub fn classify(deg_g: i64, n: usize, genus: i64) -> Level {
        if deg_g >= n as i64 {
            Level::Wag
        } else if 2 * genus - 2 < deg_g {
            Level::Sag
        } else {
            Level::Mag
        }
    }

    pub fn is_mag(self) -> bool {
        self != Level::Wag
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Sag => "SAG",
            Level::Mag => "MAG",
            Level::Wag => "WAG",
        })
    }
}

/// Where an AG-code came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub places: Vec<String>,
    pub divisor: String,
    pub deg_g: i64,
    pub genus: i64,
    pub basis: Vec<String>,
}

impl Provenance {
    pub fn level(&self) -> Level {
        Level::classify(self.deg_g, self.places.len(), self.genus)
    }
}

#[derive(Clone, Debug)]
pub struct LinearCode {
    field: Field,
    n: usize,
    generator: Matrix,
    canonical: Matrix,
    pivots: Vec<usize>,
    distance: Distance,
    provenance: Option<Provenance>,
}

impl LinearCode {
    /// Code spanned by `rows` (possibly dependent) of length `n`.
    pub fn new(field: &Field, n: usize, rows: Matrix) -> Result<LinearCode> {
        for r in &rows {
            if r.len() != n {
                return Err(Error::InvalidCode(format!("row of length {} in a code of length {n}", r.len())));
            }
            if let Some(&a) = r.iter().find(|&&a| !field.contains(a)) {
                return Err(Error::BadElement(a));
            }
        }
        let mut canonical = rows.clone();
        let pivots = linalg::rref(field, &mut canonical);
        let k = pivots.len();
        let distance = if k == 0 {
            Distance { lo: 0, hi: 0, source: DistanceSource::Exhaustive }
        } else {
            Distance { lo: 1, hi: n - k + 1, source: DistanceSource::Design }
        };
        Ok(LinearCode { field: field.clone(), n, generator: rows, canonical, pivots, distance, provenance: None })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn length(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> usize {
        self.pivots.len()
    }

    /// Rows as constructed.
    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    /// Reduced row echelon basis.
    pub fn canonical(&self) -> &Matrix {
        &self.canonical
    }

    pub fn distance(&self) -> Distance {
        self.distance
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    pub fn with_provenance(mut self, p: Provenance) -> LinearCode {
        self.provenance = Some(p);
        self
    }

    /// Raises the lower distance bound (e.g. to the designed distance).
    pub fn with_design_bound(mut self, lo: usize) -> LinearCode {
        if self.dimension() > 0 && lo > self.distance.lo {
            self.distance.lo = lo.min(self.distance.hi);
            if self.distance.lo == self.distance.hi {
                self.distance.source = DistanceSource::Witness;
            }
        }
        self
    }

    /// Tightens the upper bound with a nonzero codeword.
    pub fn with_witness(mut self, word: &[u64]) -> Result<LinearCode> {
        if !self.contains(word) {
            return Err(Error::InvalidCode("witness is not a codeword".into()));
        }
        let w = weight(word);
        if w == 0 {
            return Err(Error::InvalidCode("witness is the zero word".into()));
        }
        if w < self.distance.hi {
            self.distance.hi = w;
            if self.distance.source == DistanceSource::Design {
                self.distance.source = DistanceSource::Witness;
            }
        }
        Ok(self)
    }

    /// Whether `v` lies in the row space.
    pub fn contains(&self, v: &[u64]) -> bool {
        if v.len() != self.n {
            return false;
        }
        let f = &self.field;
        let mut r = v.to_vec();
        for (row, &pc) in self.canonical.iter().zip(&self.pivots) {
            let c = r[pc];
            if c != 0 {
                for (x, &y) in r.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        r.iter().all(|&x| x == 0)
    }

    /// Every codeword of `self` lies in `other`.
    pub fn is_subcode_of(&self, other: &LinearCode) -> bool {
        self.field == other.field && self.n == other.n && self.canonical.iter().all(|r| other.contains(r))
    }

    pub fn dual(&self) -> LinearCode {
        let rows = linalg::kernel(&self.field, &self.canonical, self.n);
        LinearCode::new(&self.field, self.n, rows).expect("kernel vectors are valid")
    }

    /// Right cyclic shift of every basis row stays in the code.
    pub fn is_cyclic(&self) -> bool {
        self.canonical.iter().all(|r| {
            let mut s = r.clone();
            s.rotate_right(1);
            self.contains(&s)
        })
    }

    /// Exhaustive minimum distance when `q^k <= budget`; otherwise the
    /// current interval is kept.
    pub fn min_distance(mut self, budget: u64) -> LinearCode {
        if self.distance.source == DistanceSource::Exhaustive {
            return self;
        }
        let q = self.field.order();
        let k = self.dimension() as u32;
        if q.checked_pow(k).is_none_or(|c| c > budget) {
            return self;
        }
        let d = min_weight(&self.field, &self.canonical, self.n);
        self.distance = Distance { lo: d, hi: d, source: DistanceSource::Exhaustive };
        self
    }

    /// Row vector times basis.
    pub fn encode(&self, msg: &[u64]) -> Vec<u64> {
        linalg::vec_mul(&self.field, msg, &self.canonical, self.n)
    }

    /// All codewords, for small codes.
    pub fn codewords(&self) -> Vec<Vec<u64>> {
        let k = self.dimension();
        let q = self.field.order();
        let total = q.pow(k as u32);
        (0..total)
            .map(|mut i| {
                let msg: Vec<u64> = (0..k)
                    .map(|_| {
                        let d = i % q;
                        i /= q;
                        d
                    })
                    .collect();
                self.encode(&msg)
            })
            .collect()
    }

    /// Matrix dump: one row per line, space-separated encodings.
    pub fn matrix_text(&self) -> String {
        self.canonical
            .iter()
            .map(|r| r.iter().map(u64::to_string).collect::<Vec<_>>().join(" "))
            .map(|l| l + "\n")
            .collect()
    }
}

/// Reduced echelon forms agree (same field and length required).
pub fn codes_equal(a: &LinearCode, b: &LinearCode) -> Result<bool> {
    if a.field != b.field {
        return Err(Error::MixedFields);
    }
    if a.n != b.n {
        return Err(Error::InvalidCode(format!("lengths {} and {} differ", a.n, b.n)));
    }
    Ok(a.canonical == b.canonical)
}

pub fn weight(v: &[u64]) -> usize {
    v.iter().filter(|&&x| x != 0).count()
}

/// Minimum weight of a nonzero word in the span of `k >= 1` independent
/// rows.
fn min_weight(field: &Field, rows: &Matrix, n: usize) -> usize {
    let q = field.order();
    let k = rows.len();
    // multiples[i][c] = c * rows[i]
    let multiples: Vec<Vec<Vec<u64>>> = rows
        .iter()
        .map(|r| (0..q).map(|c| r.iter().map(|&a| field.mul(a, c)).collect()).collect())
        .collect();
    fn dfs(field: &Field, mult: &[Vec<Vec<u64>>], i: usize, acc: &[u64], nonzero: bool, best: &mut usize) {
        if i == mult.len() {
            if nonzero {
                *best = (*best).min(weight(acc));
            }
            return;
        }
        let mut next = vec![0u64; acc.len()];
        for (c, m) in mult[i].iter().enumerate() {
            for ((o, &a), &b) in next.iter_mut().zip(acc).zip(m) {
                *o = field.add(a, b);
            }
            dfs(field, mult, i + 1, &next, nonzero || c != 0, best);
            if *best == 1 {
                return;
            }
        }
    }
    (0..q as usize)
        .into_par_iter()
        .map(|c| {
            let mut best = n;
            let start = multiples[k - 1][c].clone();
            dfs(field, &multiples[..k - 1], 0, &start, c != 0, &mut best);
            best
        })
        .min()
        .unwrap_or(n)
}

fn check_support(labels: &[String], rational: &[bool], disjoint: &[bool]) -> Result<()> {
    for (i, l) in labels.iter().enumerate() {
        if !rational[i] {
            return Err(Error::NotRational(l.clone()));
        }
        if !disjoint[i] {
            return Err(Error::InvalidDivisor(format!("{l} lies in the support of G")));
        }
        if labels[..i].contains(l) {
            return Err(Error::InvalidDivisor(format!("{l} repeated in D")));
        }
    }
    Ok(())
}

fn finish(field: &Field, rows: Matrix, n: usize, prov: Provenance) -> Result<LinearCode> {
    let deg = prov.deg_g;
    let code = LinearCode::new(field, n, rows)?;
    let lo = if deg < n as i64 { (n as i64 - deg).max(1) as usize } else { 1 };
    Ok(code.with_design_bound(lo).with_provenance(prov))
}

/// `C_L(D, G)` on the rational function field, with `L(G)` computed.
pub fn evaluation_code(field: &Field, places: &[Place], g: &Divisor) -> Result<LinearCode> {
    let basis = ratff::riemann_roch_basis(field, g);
    evaluation_code_with_basis(field, places, g, &basis.elements)
}

pub fn evaluation_code_with_basis(
    field: &Field,
    places: &[Place],
    g: &Divisor,
    basis: &[RatFunc],
) -> Result<LinearCode> {
    let labels: Vec<String> = places.iter().map(Place::to_string).collect();
    let rational: Vec<bool> = places.iter().map(Place::is_rational).collect();
    let disjoint: Vec<bool> = places.iter().map(|p| g.coeff(p) == 0).collect();
    check_support(&labels, &rational, &disjoint)?;
    let rows = basis
        .iter()
        .map(|z| places.iter().map(|p| ratff::evaluate(z, p)).collect::<Result<Vec<u64>>>())
        .collect::<Result<Matrix>>()?;
    let prov = Provenance {
        places: labels,
        divisor: g.to_string(),
        deg_g: g.degree(),
        genus: 0,
        basis: basis.iter().map(|z| z.to_string()).collect(),
    };
    finish(field, rows, places.len(), prov)
}

/// `C_L(D, G)` on a tower level with the given basis of `L(G)`.
pub fn evaluation_code_ext(
    tower: &Tower,
    level: usize,
    places: &[ExtPlace],
    g: &ExtDivisor,
    basis: &[Elem],
) -> Result<LinearCode> {
    let field = tower.field();
    let labels: Vec<String> = places.iter().map(|p| p.label(field)).collect();
    let rational: Vec<bool> = places.iter().map(|p| p.is_rational() && p.level() == level).collect();
    let disjoint: Vec<bool> = places.iter().map(|p| g.coeff(p) == 0).collect();
    check_support(&labels, &rational, &disjoint)?;
    let rows = basis
        .par_iter()
        .map(|z| places.iter().map(|p| tower.evaluate_ext(level, z, p)).collect::<Result<Vec<u64>>>())
        .collect::<Result<Matrix>>()?;
    let deg_g = g.terms().map(|(p, n)| n * p.degree() as i64).sum();
    let prov = Provenance {
        places: labels,
        divisor: g.to_string(),
        deg_g,
        genus: tower.genus(level),
        basis: basis.iter().map(|z| tower.display(z)).collect(),
    };
    finish(field, rows, places.len(), prov)
}

/// `R_q(n)`: evaluations of `L(0) = GF(q)` at the first `n` rational places.
pub fn repetition_code(field: &Field, n: usize) -> Result<LinearCode> {
    let places = ratff::rational_places(field);
    if n == 0 || n > places.len() {
        return Err(Error::Parameter(format!("repetition length {n} must be in 1..={}", places.len())));
    }
    evaluation_code(field, &places[..n], &Divisor::zero())
}

/// Reed-Solomon code `C_L(P_b + P_b^2 + ... + P_b^(q-1), (k-1) P_inf)` for
/// a primitive `b`.
pub fn reed_solomon(field: &Field, k: usize, beta: u64) -> Result<LinearCode> {
    let q = field.order();
    if k == 0 || k as u64 > q - 1 {
        return Err(Error::Parameter(format!("Reed-Solomon dimension {k} must be in 1..={}", q - 1)));
    }
    if !field.contains(beta) || field.element_order(beta) != Some(q - 1) {
        return Err(Error::Parameter(format!("{beta} is not a primitive element")));
    }
    let places: Vec<Place> = (1..q).map(|i| Place::rational(field, field.pow(beta, i))).collect();
    evaluation_code(field, &places, &Divisor::single(Place::Infinite, k as i64 - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf4() -> Field {
        Field::new(2, 2, None).unwrap()
    }

    #[test]
    fn gs_base_code_is_mds() {
        let f = gf4();
        let places: Vec<Place> = [1, 2, 3].iter().map(|&a| Place::rational(&f, a)).collect();
        let c = evaluation_code(&f, &places, &Divisor::single(Place::Infinite, 2))
            .unwrap()
            .min_distance(DEFAULT_BUDGET);
        assert_eq!((c.length(), c.dimension(), c.distance().exact()), (3, 3, Some(1)));
        let d = c.dual();
        assert_eq!(d.dimension(), 0);
        assert!(!codes_equal(&c, &d).unwrap());
        assert!(c.is_cyclic());
        assert_eq!(c.provenance().unwrap().level(), Level::Sag);
    }

    #[test]
    fn repetition_and_dual() {
        let f = Field::prime(7).unwrap();
        let r = repetition_code(&f, 3).unwrap().min_distance(DEFAULT_BUDGET);
        assert_eq!((r.dimension(), r.distance().exact()), (1, Some(3)));
        assert!(r.codewords().iter().all(|w| w.iter().all(|&a| a == w[0])));
        assert!(r.is_cyclic());
        let d = r.dual();
        assert_eq!(d.dimension(), 2);
        for a in r.canonical() {
            for b in d.canonical() {
                let s = a.iter().zip(b).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)));
                assert_eq!(s, 0);
            }
        }
        assert!(codes_equal(&d.dual(), &r).unwrap());
    }

    #[test]
    fn reed_solomon_parameters() {
        let f = Field::prime(5).unwrap();
        let rs = reed_solomon(&f, 2, 2).unwrap().min_distance(DEFAULT_BUDGET);
        assert_eq!((rs.length(), rs.dimension(), rs.distance().exact()), (4, 2, Some(3)));
        assert!(rs.is_cyclic());
        let full = reed_solomon(&f, 4, 2).unwrap().min_distance(DEFAULT_BUDGET);
        assert_eq!(full.distance().exact(), Some(1));
        assert!(reed_solomon(&f, 2, 4).is_err());
    }

    #[test]
    fn negative_degree_gives_zero_code() {
        let f = Field::prime(5).unwrap();
        let places = vec![Place::rational(&f, 0)];
        let c = evaluation_code(&f, &places, &Divisor::single(Place::Infinite, -1)).unwrap();
        assert_eq!(c.dimension(), 0);
        assert!(evaluation_code(&f, &places, &Divisor::single(places[0].clone(), 1)).is_err());
    }

    #[test]
    fn witness_tightens_interval() {
        let f = Field::prime(5).unwrap();
        let c = LinearCode::new(&f, 4, vec![vec![1, 1, 1, 1], vec![0, 1, 2, 3]]).unwrap();
        assert_eq!(c.distance().hi, 3);
        let c = c.with_witness(&[1, 0, 4, 3]).unwrap();
        assert_eq!(c.distance().hi, 3);
        assert!(c.clone().with_witness(&[1, 0, 0, 0]).is_err());
    }
}
