//! Dense linear algebra over GF(q) on raw element encodings.

use crate::galois::Field;

pub type Matrix = Vec<Vec<u64>>;

/// Reduced row echelon form in place; returns the pivot columns. Zero rows
/// are removed.
pub fn rref(field: &Field, m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, pr);
        let inv = field.inv(m[r][c]).expect("nonzero pivot");
        if inv != 1 {
            for v in m[r].iter_mut() {
                *v = field.mul(*v, inv);
            }
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (v, &pv) in row.iter_mut().zip(&pivot_row).skip(c) {
                if pv != 0 {
                    *v = field.sub(*v, field.mul(f, pv));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    pivots
}

pub fn rank(field: &Field, m: &Matrix) -> usize {
    let mut a = m.clone();
    rref(field, &mut a).len()
}

/// Basis of `{v : m v = 0}` for an `rows x cols` matrix, one vector per free
/// column in increasing column order, with a 1 in that free column.
pub fn kernel(field: &Field, m: &Matrix, cols: usize) -> Vec<Vec<u64>> {
    let mut a = m.clone();
    for row in a.iter_mut() {
        row.resize(cols, 0);
    }
    let pivots = rref(field, &mut a);
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (row, &pc) in a.iter().zip(&pivots) {
            v[pc] = field.neg(row[free]);
        }
        out.push(v);
    }
    out
}

/// Left kernel: `{u : u m = 0}`.
pub fn left_kernel(field: &Field, m: &Matrix) -> Vec<Vec<u64>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    kernel(field, &transpose(m, cols), rows)
}

pub fn transpose(m: &Matrix, cols: usize) -> Matrix {
    (0..cols).map(|c| m.iter().map(|r| r[c]).collect()).collect()
}

/// Solves `x m = target` for a row vector `x`, if possible.
pub fn solve_left(field: &Field, m: &Matrix, target: &[u64]) -> Option<Vec<u64>> {
    let rows = m.len();
    let cols = target.len();
    // Columns of the augmented transposed system are the rows of `m`.
    let mut a: Matrix = (0..cols)
        .map(|c| {
            let mut row: Vec<u64> = m.iter().map(|r| r[c]).collect();
            row.push(target[c]);
            row
        })
        .collect();
    let pivots = rref(field, &mut a);
    if pivots.last() == Some(&rows) {
        return None;
    }
    let mut x = vec![0u64; rows];
    for (row, &pc) in a.iter().zip(&pivots) {
        x[pc] = row[rows];
    }
    Some(x)
}

/// Row vector times matrix.
pub fn vec_mul(field: &Field, v: &[u64], m: &Matrix, cols: usize) -> Vec<u64> {
    let mut out = vec![0u64; cols];
    for (&a, row) in v.iter().zip(m) {
        if a == 0 {
            continue;
        }
        for (o, &b) in out.iter_mut().zip(row) {
            *o = field.add(*o, field.mul(a, b));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_and_solve() {
        let f = Field::prime(5).unwrap();
        let m = vec![vec![1, 2, 3], vec![0, 1, 1]];
        let k = kernel(&f, &m, 3);
        assert_eq!(k.len(), 1);
        for v in &k {
            for row in &m {
                let s = row.iter().zip(v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
                assert_eq!(s, 0);
            }
        }
        assert_eq!(rank(&f, &m), 2);
        let t = vec_mul(&f, &[3, 4], &m, 3);
        let x = solve_left(&f, &m, &t).unwrap();
        assert_eq!(vec_mul(&f, &x, &m, 3), t);
        assert!(solve_left(&f, &m, &[0, 1, 0]).is_none());
        assert_eq!(left_kernel(&f, &vec![vec![1, 1], vec![2, 2]]), vec![vec![3, 1]]);
    }
}
