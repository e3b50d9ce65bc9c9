//! Dense exact linear algebra over the rationals.
//!
//! Everything here is plain Gauss–Jordan elimination with exact fractions.
//! Pivots are taken in column order; there is no magnitude heuristic because
//! there is no rounding.

use num_traits::{One, Zero};

use crate::qscalars::Rational;

pub type Matrix = Vec<Vec<Rational>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Rational::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rational::one();
    }
    m
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|c| {
                    (0..inner)
                        .filter(|&k| !row[k].is_zero() && !b[k][c].is_zero())
                        .fold(Rational::zero(), |acc, k| acc + &row[k] * &b[k][c])
                })
                .collect()
        })
        .collect()
}

pub fn transpose(a: &Matrix) -> Matrix {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|c| a.iter().map(|r| r[c].clone()).collect()).collect()
}

pub fn is_identity(a: &Matrix) -> bool {
    a.iter().enumerate().all(|(i, row)| {
        row.len() == a.len() && row.iter().enumerate().all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
    })
}

/// A subspace kept in reduced row echelon form.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    dim: usize,
    /// Reduced rows, each with a unit at its pivot column.
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_rows<I: IntoIterator<Item = Vec<Rational>>>(dim: usize, rows: I) -> Self {
        let mut e = Echelon::new(dim);
        for r in rows {
            e.insert(r);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// Reduces `v` against the stored rows; the result vanishes at every pivot.
    pub fn reduce(&self, v: &mut [Rational]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let c = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &c * r;
                }
            }
        }
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(Zero::is_zero)
    }

    /// Adds `v` to the span. Returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<Rational>) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].recip();
        for x in v.iter_mut() {
            *x *= &inv;
        }
        // Keep earlier rows fully reduced at the new pivot.
        for row in &mut self.rows {
            if row[p].is_zero() {
                continue;
            }
            let c = row[p].clone();
            for (x, r) in row.iter_mut().zip(&v) {
                if !r.is_zero() {
                    *x -= &c * r;
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        true
    }

    /// Columns that carry no pivot, in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.dim).filter(|c| self.pivots.binary_search(c).is_err()).collect()
    }
}

pub fn rank(a: &Matrix) -> usize {
    let cols = a.first().map_or(0, Vec::len);
    Echelon::from_rows(cols, a.iter().cloned()).rank()
}

pub fn determinant(a: &Matrix) -> Rational {
    let n = a.len();
    let mut m = a.clone();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let pivot = m[c][c].clone();
        det *= &pivot;
        let inv = pivot.recip();
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] * &inv;
            #[allow(clippy::needless_range_loop)] // rows r and c of the same matrix
            for k in c..n {
                let t = &f * &m[c][k];
                m[r][k] -= t;
            }
        }
    }
    det
}

/// `None` when singular.
pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let mut m: Matrix = a.iter().zip(identity(n)).map(|(row, id)| row.iter().cloned().chain(id).collect()).collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(p, c);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r == c || m[r][c].is_zero() {
                continue;
            }
            let f = m[r][c].clone();
            let pivot_row = m[c].clone();
            for (x, y) in m[r].iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Basis of `{x : A x = 0}`.
pub fn kernel(a: &Matrix, cols: usize) -> Vec<Vec<Rational>> {
    let e = Echelon::from_rows(cols, a.iter().cloned());
    e.free_columns()
        .into_iter()
        .map(|f| {
            let mut x = vec![Rational::zero(); cols];
            x[f] = Rational::one();
            for (row, &p) in e.rows().iter().zip(e.pivots()) {
                x[p] = -row[f].clone();
            }
            x
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qscalars::{rat, ratio};
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn determinant_and_inverse() {
        let a = m(&[&[2, 1], &[7, 4]]);
        assert_eq!(determinant(&a), rat(1));
        let inv = inverse(&a).unwrap();
        assert_eq!(inv, m(&[&[4, -1], &[-7, 2]]));
        assert!(is_identity(&mat_mul(&a, &inv)));
        let s = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(determinant(&s), rat(0));
        assert!(inverse(&s).is_none());
    }

    #[test]
    fn echelon_membership_and_kernel() {
        let mut e = Echelon::new(3);
        assert!(e.insert(vec![rat(1), rat(1), rat(0)]));
        assert!(e.insert(vec![rat(0), rat(2), rat(2)]));
        assert!(!e.insert(vec![rat(1), rat(3), rat(2)]));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&[rat(2), rat(0), rat(-2)]));
        assert!(!e.contains(&[rat(0), rat(0), rat(1)]));
        let k = kernel(&m(&[&[1, 1, 0], &[0, 1, 1]]), 3);
        assert_eq!(k, vec![vec![rat(1), rat(-1), rat(1)]]);
        assert_eq!(ratio(1, 2) * rat(2), rat(1));
    }

    proptest! {
        #[test]
        fn inverse_is_two_sided(entries in prop::collection::vec(-5i64..6, 9)) {
            let a: Matrix = entries.chunks(3).map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
            match inverse(&a) {
                Some(inv) => {
                    prop_assert!(is_identity(&mat_mul(&a, &inv)));
                    prop_assert!(is_identity(&mat_mul(&inv, &a)));
                    prop_assert_eq!(determinant(&a) * determinant(&inv), rat(1));
                }
                None => prop_assert_eq!(determinant(&a), rat(0)),
            }
        }

        #[test]
        fn rank_nullity(entries in prop::collection::vec(-3i64..4, 12)) {
            let a: Matrix = entries.chunks(4).map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
            let k = kernel(&a, 4);
            prop_assert_eq!(rank(&a) + k.len(), 4);
            for v in &k {
                for row in &a {
                    let s = row.iter().zip(v).fold(rat(0), |acc, (x, y)| acc + x * y);
                    prop_assert_eq!(s, rat(0));
                }
            }
        }
    }
}
