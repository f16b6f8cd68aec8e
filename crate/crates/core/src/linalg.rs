//! Dense exact linear algebra over ℚ: reduced echelon bases, kernels and solves.
//!
//! Every routine returns canonical output (fully reduced echelon form, kernel
//! vectors indexed by free columns), so results are reproducible bit for bit.

use num_traits::{One, Zero};

use crate::rational::{sub_mul, Rat};

pub type Vector = Vec<Rat>;

pub fn zero_vector(n: usize) -> Vector {
    vec![Rat::zero(); n]
}

pub fn is_zero_vector(v: &[Rat]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// A subspace of ℚ^dim held in reduced row echelon form, grown one vector at a time.
///
/// Invariant: each row has a leading 1 at its pivot and every other row is zero
/// in that column.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    dim: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
    pivot_row: Vec<Option<usize>>,
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        EchelonBasis { dim, rows: Vec::new(), pivots: Vec::new(), pivot_row: vec![None; dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    /// Reduces `v` against the basis in place; the result is zero iff `v` lies in the span.
    pub fn reduce(&self, v: &mut [Rat]) {
        debug_assert_eq!(v.len(), self.dim);
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = sub_mul(x, &f, r);
                }
            }
        }
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        is_zero_vector(&w)
    }

    /// Adds `v` to the span; returns false when it was already contained.
    pub fn insert(&mut self, mut v: Vector) -> bool {
        if self.is_full() {
            return false;
        }
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].recip();
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, r) in row.iter_mut().zip(&v) {
                if !r.is_zero() {
                    *x = sub_mul(x, &f, r);
                }
            }
        }
        self.pivot_row[p] = Some(self.rows.len());
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col].is_some()
    }

    /// The basis rows in insertion order.
    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    /// The basis rows ordered by pivot column: the reduced row echelon form.
    pub fn rref(&self) -> Vec<Vector> {
        let mut idx: Vec<usize> = (0..self.rows.len()).collect();
        idx.sort_by_key(|&i| self.pivots[i]);
        idx.into_iter().map(|i| self.rows[i].clone()).collect()
    }

    /// Coordinates of `v` with respect to the rows (insertion order), if `v` is in the span.
    pub fn coordinates(&self, v: &[Rat]) -> Option<Vector> {
        let coords: Vector = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut w = v.to_vec();
        for (c, row) in coords.iter().zip(&self.rows) {
            if c.is_zero() {
                continue;
            }
            for (x, r) in w.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = sub_mul(x, c, r);
                }
            }
        }
        is_zero_vector(&w).then_some(coords)
    }
}

pub fn rank(rows: &[Vector], ncols: usize) -> usize {
    let mut e = EchelonBasis::new(ncols);
    for r in rows {
        e.insert(r.clone());
        if e.is_full() {
            break;
        }
    }
    e.rank()
}

/// Basis of {x : A x = 0} where `rows` are the rows of A.
///
/// One vector per free column, with a 1 in that column, in increasing column order.
pub fn nullspace(rows: &[Vector], ncols: usize) -> Vec<Vector> {
    let mut e = EchelonBasis::new(ncols);
    for r in rows {
        e.insert(r.clone());
        if e.is_full() {
            break;
        }
    }
    let mut out = Vec::new();
    for f in 0..ncols {
        if e.is_pivot(f) {
            continue;
        }
        let mut v = zero_vector(ncols);
        v[f] = Rat::one();
        for (row, &p) in e.rows.iter().zip(&e.pivots) {
            if !row[f].is_zero() {
                v[p] = -&row[f];
            }
        }
        out.push(v);
    }
    out
}

/// Some solution of A x = b, or None when inconsistent. Free variables are set to zero.
pub fn solve(rows: &[Vector], ncols: usize, rhs: &[Rat]) -> Option<Vector> {
    let mut e = EchelonBasis::new(ncols + 1);
    for (r, b) in rows.iter().zip(rhs) {
        let mut aug = r.clone();
        aug.push(b.clone());
        e.insert(aug);
    }
    if e.is_pivot(ncols) {
        return None;
    }
    let mut x = zero_vector(ncols);
    for (row, &p) in e.rows.iter().zip(&e.pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

/// Matrix–vector product for a row-major dense matrix.
pub fn mat_vec(rows: &[Vector], v: &[Rat]) -> Vector {
    rows.iter()
        .map(|r| {
            let mut acc = Rat::zero();
            for (a, b) in r.iter().zip(v) {
                if !a.is_zero() && !b.is_zero() {
                    acc += a * b;
                }
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| Rat::int(x)).collect()
    }

    #[test]
    fn rank_and_kernel() {
        let a = vec![v(&[1, 2, 3]), v(&[2, 4, 6]), v(&[0, 1, 1])];
        assert_eq!(rank(&a, 3), 2);
        let k = nullspace(&a, 3);
        assert_eq!(k.len(), 1);
        assert!(is_zero_vector(&mat_vec(&a, &k[0])));
    }

    #[test]
    fn solve_consistent_and_not() {
        let a = vec![v(&[1, 1]), v(&[1, -1])];
        let x = solve(&a, 2, &v(&[3, 1])).unwrap();
        assert_eq!(x, v(&[2, 1]));
        let b = vec![v(&[1, 1]), v(&[2, 2])];
        assert!(solve(&b, 2, &v(&[1, 3])).is_none());
    }

    #[test]
    fn coordinates_roundtrip() {
        let mut e = EchelonBasis::new(3);
        e.insert(v(&[1, 2, 0]));
        e.insert(v(&[0, 1, 5]));
        let target = v(&[2, 7, 15]);
        let c = e.coordinates(&target).unwrap();
        let mut rebuilt = zero_vector(3);
        for (ci, row) in c.iter().zip(e.rows()) {
            for (x, r) in rebuilt.iter_mut().zip(row) {
                *x += ci * r;
            }
        }
        assert_eq!(rebuilt, target);
        assert!(e.coordinates(&v(&[0, 0, 1])).is_none());
    }
}
