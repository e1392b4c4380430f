//! Squarefree, distinct-degree and equal-degree factorization.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Poly;
use crate::error::{Error, Result};
use crate::galois::Field;

/// Squarefree parts `(g_i, i)` with `f = lc * prod g_i^i`, each `g_i` monic.
pub fn squarefree_decomposition(f: &Poly) -> Result<Vec<(Poly, u32)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("factorization"));
    }
    let mut out = Vec::new();
    sqf(&f.monic(), 1, &mut out);
    Ok(out)
}

fn sqf(f: &Poly, scale: u32, out: &mut Vec<(Poly, u32)>) {
    if f.is_constant() {
        return;
    }
    let field = f.field().clone();
    let mut c = f.gcd(&f.derivative());
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.div_exact(&y);
        if !z.is_one() {
            out.push((z, i * scale));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w);
    }
    if !c.is_one() {
        let root = pth_root(&field, &c);
        sqf(&root, scale * field.characteristic() as u32, out);
    }
}

/// `g` with `g(x)^p = c(x)`, for `c` with zero derivative.
fn pth_root(field: &Field, c: &Poly) -> Poly {
    let p = field.characteristic() as usize;
    let coeffs = c
        .coeffs()
        .iter()
        .step_by(p)
        .map(|&a| field.frobenius_root(a, 1))
        .collect();
    Poly::new(field, coeffs)
}

/// Splits a squarefree monic polynomial into `(product of all degree-d
/// factors, d)`.
fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field();
    let q = field.order();
    let x = Poly::x(field);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.rem(&rest);
    let mut d = 0;
    while rest.deg0() >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod(q, &rest);
        let g = rest.gcd(&(&h - &x));
        if !g.is_one() {
            rest = rest.div_exact(&g);
            h = h.rem(&rest);
            out.push((g, d));
        }
    }
    if rest.deg0() > 0 {
        let d = rest.deg0();
        out.push((rest, d));
    }
    out
}

fn seed_of(f: &Poly) -> u64 {
    f.coeffs().iter().fold(0xcbf2_9ce4_8422_2325u64, |h, &c| {
        (h ^ c).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Cantor-Zassenhaus splitting of a product of distinct degree-d monic
/// irreducibles.
fn equal_degree(f: &Poly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) {
    let n = f.deg0();
    if n == d {
        out.push(f.clone());
        return;
    }
    let field = f.field();
    let q = field.order();
    let p = field.characteristic();
    loop {
        let a = Poly::new(field, (0..n).map(|_| rng.gen_range(0..q)).collect());
        if a.is_constant() {
            continue;
        }
        let b = if p == 2 {
            let mut t = a.rem(f);
            let mut acc = t.clone();
            for _ in 1..(field.degree() as usize * d) {
                t = (&t * &t).rem(f);
                acc = &acc + &t;
            }
            acc
        } else {
            let mut t = a.rem(f);
            let mut acc = t.clone();
            for _ in 1..d {
                t = t.pow_mod(q, f);
                acc = (&acc * &t).rem(f);
            }
            &acc.pow_mod((q - 1) / 2, f) - &Poly::one(field)
        };
        let g = f.gcd(&b);
        if !g.is_one() && g.deg0() < n {
            let h = f.div_exact(&g);
            equal_degree(&g, d, rng, out);
            equal_degree(&h, d, rng, out);
            return;
        }
    }
}

/// Monic irreducible factors with multiplicities, sorted by (degree,
/// encoding). The leading coefficient is not included.
pub fn factorize(f: &Poly) -> Result<Vec<(Poly, u32)>> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed_of(f));
    for (g, m) in squarefree_decomposition(f)? {
        for (h, d) in distinct_degree(&g) {
            let mut parts = Vec::new();
            equal_degree(&h, d, &mut rng, &mut parts);
            out.extend(parts.into_iter().map(|p| (p, m)));
        }
    }
    out.sort();
    Ok(out)
}

/// Roots in the coefficient field, repeated by multiplicity, sorted by
/// encoding.
pub fn roots_in_field(f: &Poly) -> Result<Vec<u64>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("roots"));
    }
    let field = f.field();
    let mut roots = Vec::new();
    if f.is_constant() {
        return Ok(roots);
    }
    // Restrict to the part that splits into linear factors before factoring.
    let x = Poly::x(field);
    let split = f.monic().gcd(&(&x.pow_mod(field.order(), &f.monic()) - &x));
    for (g, _) in factorize(&split)? {
        let r = field.neg(g.coeff(0));
        roots.extend(std::iter::repeat_n(r, f.multiplicity(&g) as usize));
    }
    roots.sort_unstable();
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64, k: u32) -> Field {
        Field::new(p, k, None).unwrap()
    }

    fn product(f: &Field, lc: u64, fs: &[(Poly, u32)]) -> Poly {
        fs.iter()
            .fold(Poly::constant(f, lc), |acc, (g, m)| &acc * &g.pow(*m as u64))
    }

    #[test]
    fn known_factorizations() {
        let f5 = gf(5, 1);
        let x4 = Poly::new(&f5, vec![4, 0, 0, 0, 1]);
        let fs = factorize(&x4).unwrap();
        let lin: Vec<u64> = fs.iter().map(|(g, _)| f5.neg(g.coeff(0))).collect();
        assert_eq!(lin, vec![4, 3, 2, 1]);

        let f2 = gf(2, 1);
        let t = Poly::new(&f2, vec![1, 1, 1]);
        assert_eq!(factorize(&t).unwrap(), vec![(t.clone(), 1)]);

        let c = Poly::new(&f5, vec![0, 1, 0, 1]);
        let fs = factorize(&c).unwrap();
        assert_eq!(
            fs,
            vec![
                (Poly::new(&f5, vec![0, 1]), 1),
                (Poly::new(&f5, vec![2, 1]), 1),
                (Poly::new(&f5, vec![3, 1]), 1),
            ]
        );
        assert_eq!(product(&f5, 1, &fs), c);
    }

    #[test]
    fn roots_of_unity() {
        let f7 = gf(7, 1);
        let t3 = Poly::new(&f7, vec![6, 0, 0, 1]);
        assert_eq!(roots_in_field(&t3).unwrap(), vec![1, 2, 4]);
        let f64 = gf(2, 6);
        let t3 = Poly::new(&f64, vec![1, 0, 0, 1]);
        let r = roots_in_field(&t3).unwrap();
        assert_eq!(r.len(), 3);
        assert!(r.iter().all(|&a| f64.pow(a, 3) == 1));
        let f2 = gf(2, 1);
        assert!(roots_in_field(&Poly::new(&f2, vec![1, 1, 1])).unwrap().is_empty());
        assert!(roots_in_field(&Poly::zero(&f2)).is_err());
    }

    #[test]
    fn inseparable_parts() {
        let f4 = gf(2, 2);
        // (x + #2)^4 * (x^2 + x + #2)^2
        let a = Poly::new(&f4, vec![2, 1]);
        let b = Poly::new(&f4, vec![2, 1, 1]);
        let g = &a.pow(4) * &b.pow(2);
        let fs = factorize(&g).unwrap();
        assert_eq!(product(&f4, 1, &fs), g);
        assert_eq!(roots_in_field(&g).unwrap(), vec![2, 2, 2, 2]);
    }
}
