//! Small exact linear algebra over any [`Field`]: reduced row spans,
//! null spaces, and the handful of matrix products the structure-constant
//! checks need. Everything is dense; the spaces involved are slices of
//! free algebras truncated at single-digit degrees.

use crate::scalars::Field;

/// A subspace of `F^cols` kept as a reduced row-echelon basis with monic
/// pivots, so equal subspaces have identical representations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RowSpace<F: Field> {
    cols: usize,
    rows: Vec<Vec<F>>,
}

impl<F: Field> RowSpace<F> {
    pub fn new(cols: usize) -> Self {
        RowSpace { cols, rows: Vec::new() }
    }

    pub fn from_rows(cols: usize, rows: impl IntoIterator<Item = Vec<F>>) -> Self {
        let mut space = Self::new(cols);
        for r in rows {
            space.insert(r);
        }
        space
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// The canonical basis rows, sorted by pivot column.
    pub fn basis(&self) -> &[Vec<F>] {
        &self.rows
    }

    fn pivot(row: &[F]) -> Option<usize> {
        row.iter().position(|c| !c.is_zero())
    }

    /// Reduces `v` against the basis, returning the residual.
    pub fn reduce(&self, mut v: Vec<F>) -> Vec<F> {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        for row in &self.rows {
            let p = Self::pivot(row).expect("stored rows are nonzero");
            if !v[p].is_zero() {
                let factor = v[p].clone();
                for (vi, ri) in v.iter_mut().zip(row.iter()) {
                    *vi = vi.sub(&factor.mul(ri));
                }
            }
        }
        v
    }

    /// Adds a vector to the span. Returns `true` when the rank grew.
    pub fn insert(&mut self, v: Vec<F>) -> bool {
        let mut v = self.reduce(v);
        let p = match Self::pivot(&v) {
            Some(p) => p,
            None => return false,
        };
        let inv = v[p].inv().expect("pivot is nonzero");
        for c in v.iter_mut() {
            *c = c.mul(&inv);
        }
        // Back-substitute so the representation stays fully reduced.
        for row in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let factor = row[p].clone();
                for (ri, vi) in row.iter_mut().zip(v.iter()) {
                    *ri = ri.sub(&factor.mul(vi));
                }
            }
        }
        let at = self
            .rows
            .iter()
            .position(|row| Self::pivot(row).expect("nonzero") > p)
            .unwrap_or(self.rows.len());
        self.rows.insert(at, v);
        true
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v.to_vec()).iter().all(|c| c.is_zero())
    }

    pub fn is_subspace_of(&self, other: &RowSpace<F>) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    /// Basis of the intersection with the coordinate subspace of the
    /// columns flagged in `keep`.
    pub fn intersect_coordinates(&self, keep: &[bool]) -> Vec<Vec<F>> {
        assert_eq!(keep.len(), self.cols);
        // Order unknowns so the coordinates to be eliminated come first;
        // rows of the reordered echelon form whose leading entry lands in
        // the kept block span exactly the intersection.
        let mut order: Vec<usize> = (0..self.cols).filter(|&i| !keep[i]).collect();
        let kept_start = order.len();
        order.extend((0..self.cols).filter(|&i| keep[i]));
        let permuted: Vec<Vec<F>> = self
            .rows
            .iter()
            .map(|r| order.iter().map(|&i| r[i].clone()).collect())
            .collect();
        let echelon = RowSpace::from_rows(self.cols, permuted);
        let mut result = Vec::new();
        for row in echelon.basis() {
            let p = Self::pivot(row).expect("nonzero");
            if p >= kept_start {
                let mut original = vec![F::zero(); self.cols];
                for (j, &i) in order.iter().enumerate() {
                    original[i] = row[j].clone();
                }
                result.push(original);
            }
        }
        result
    }
}

/// Null-space basis of the linear map whose value on the `i`-th domain
/// basis vector is `images[i]` (each of length `codim`).
pub fn kernel_basis<F: Field>(images: &[Vec<F>], codim: usize) -> Vec<Vec<F>> {
    let dom = images.len();
    for im in images {
        assert_eq!(im.len(), codim, "image vectors must live in the codomain");
    }
    // Gaussian elimination on the codim x dom matrix M with M[r][i] = images[i][r].
    let mut m: Vec<Vec<F>> = (0..codim)
        .map(|r| images.iter().map(|im| im[r].clone()).collect())
        .collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; dom];
    let mut rank = 0usize;
    for col in 0..dom {
        let Some(r) = (rank..codim).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, r);
        let inv = m[rank][col].inv().expect("pivot nonzero");
        for c in m[rank].iter_mut() {
            *c = c.mul(&inv);
        }
        for r2 in 0..codim {
            if r2 != rank && !m[r2][col].is_zero() {
                let factor = m[r2][col].clone();
                for c in 0..dom {
                    let sub = factor.mul(&m[rank][c]);
                    m[r2][c] = m[r2][c].sub(&sub);
                }
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
    }
    let mut kernel = Vec::new();
    for free in 0..dom {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![F::zero(); dom];
        v[free] = F::one();
        for col in 0..dom {
            if let Some(r) = pivot_of_col[col] {
                v[col] = m[r][free].neg();
            }
        }
        kernel.push(v);
    }
    kernel
}

/// `a · b` for dense row-major matrices.
pub fn mat_mul<F: Field>(a: &[Vec<F>], b: &[Vec<F>]) -> Vec<Vec<F>> {
    let rows = a.len();
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| {
                    let mut acc = F::zero();
                    for k in 0..inner {
                        acc = acc.add(&a[i][k].mul(&b[k][j]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// `m · v` for a dense row-major matrix and a column vector.
pub fn mat_vec<F: Field>(m: &[Vec<F>], v: &[F]) -> Vec<F> {
    m.iter()
        .map(|row| {
            let mut acc = F::zero();
            for (a, b) in row.iter().zip(v.iter()) {
                acc = acc.add(&a.mul(b));
            }
            acc
        })
        .collect()
}

pub fn mat_sub<F: Field>(a: &[Vec<F>], b: &[Vec<F>]) -> Vec<Vec<F>> {
    a.iter()
        .zip(b.iter())
        .map(|(ra, rb)| ra.iter().zip(rb.iter()).map(|(x, y)| x.sub(y)).collect())
        .collect()
}

pub fn vec_add<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b.iter()).map(|(x, y)| x.add(y)).collect()
}

pub fn vec_sub<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b.iter()).map(|(x, y)| x.sub(y)).collect()
}

pub fn vec_scale<F: Field>(c: &F, a: &[F]) -> Vec<F> {
    a.iter().map(|x| x.mul(c)).collect()
}

pub fn vec_is_zero<F: Field>(a: &[F]) -> bool {
    a.iter().all(|x| x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{FpScalar, Scalar};

    fn q(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn qv(ns: &[i64]) -> Vec<Scalar> {
        ns.iter().map(|&n| q(n)).collect()
    }

    #[test]
    fn insert_tracks_rank_and_membership() {
        let mut s = RowSpace::new(3);
        assert!(s.insert(qv(&[1, 2, 0])));
        assert!(s.insert(qv(&[0, 1, 1])));
        assert!(!s.insert(qv(&[2, 5, 1]))); // 2*(1,2,0) + (0,1,1)
        assert_eq!(s.rank(), 2);
        assert!(s.contains(&qv(&[1, 3, 1])));
        assert!(!s.contains(&qv(&[0, 0, 1])));
    }

    #[test]
    fn canonical_form_is_representation_independent() {
        let a = RowSpace::from_rows(3, vec![qv(&[1, 1, 0]), qv(&[0, 0, 2])]);
        let b = RowSpace::from_rows(3, vec![qv(&[3, 3, 5]), qv(&[0, 0, 1]), qv(&[2, 2, 7])]);
        assert_eq!(a, b);
    }

    #[test]
    fn kernel_of_a_projection() {
        // Map Q^3 -> Q^2, (a,b,c) -> (a + b, c).
        let images = vec![qv(&[1, 0]), qv(&[1, 0]), qv(&[0, 1])];
        let kernel = kernel_basis(&images, 2);
        assert_eq!(kernel.len(), 1);
        let mut span = RowSpace::new(3);
        for v in kernel {
            span.insert(v);
        }
        assert!(span.contains(&qv(&[1, -1, 0])));
    }

    #[test]
    fn kernel_over_a_prime_field() {
        type F = FpScalar<2>;
        let e = |b: u64| F::new(b);
        // x + y = 0 over F2: kernel of (x, y) -> x + y.
        let images = vec![vec![e(1)], vec![e(1)]];
        let kernel = kernel_basis(&images, 1);
        assert_eq!(kernel, vec![vec![e(1), e(1)]]);
    }

    #[test]
    fn coordinate_intersection() {
        // Span{(1,0,1), (0,1,1)} intersected with {z = 0} is spanned by (1,-1,0).
        let s = RowSpace::from_rows(3, vec![qv(&[1, 0, 1]), qv(&[0, 1, 1])]);
        let meet = s.intersect_coordinates(&[true, true, false]);
        assert_eq!(meet.len(), 1);
        let mut span = RowSpace::new(3);
        span.insert(meet[0].clone());
        assert!(span.contains(&qv(&[1, -1, 0])));
    }

    #[test]
    fn matrix_products() {
        let a = vec![qv(&[1, 2]), qv(&[0, 1])];
        let b = vec![qv(&[1, 0]), qv(&[1, 1])];
        assert_eq!(mat_mul(&a, &b), vec![qv(&[3, 2]), qv(&[1, 1])]);
        assert_eq!(mat_vec(&a, &qv(&[1, 1])), qv(&[3, 1]));
    }
}
