//! Scalar-generic rings, fields and dense matrices.
//!
//! Several of the rings in this crate (`F_{p^2}`, `W(F_{p^2})/p^m`, the quaternion order)
//! carry a runtime context, so there is no context-free `zero()`. [`Ring`] instead asks
//! an existing element for the zero and one of its own ring.

use std::fmt::Debug;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};

pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;

    fn is_zero_elem(&self) -> bool {
        *self == self.zero_like()
    }
}

pub trait Field: Ring {
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
}

macro_rules! num_ring {
    ($($t:ty),*) => {$(
        impl Ring for $t {
            fn zero_like(&self) -> Self { <$t>::zero() }
            fn one_like(&self) -> Self { <$t>::one() }
        }
    )*};
}

num_ring!(i64, i128, BigInt, Ratio<i64>, Ratio<i128>, Ratio<BigInt>);

macro_rules! num_field {
    ($($t:ty),*) => {$(
        impl Field for $t {
            fn inv(&self) -> Option<Self> {
                if self.is_zero() { None } else { Some(self.recip()) }
            }
        }
    )*};
}

num_field!(Ratio<i64>, Ratio<i128>, Ratio<BigInt>);

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R> Mat<R> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> impl Iterator<Item = &R> {
        self.data.iter()
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<R>>
    where
        R: Clone,
    {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<S>(&self, f: impl FnMut(&R) -> S) -> Mat<S> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self
    where
        R: Clone,
    {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }
}

impl<R> Index<(usize, usize)> for Mat<R> {
    type Output = R;
    fn index(&self, (i, j): (usize, usize)) -> &R {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &self.data[i * self.cols + j]
    }
}

impl<R> IndexMut<(usize, usize)> for Mat<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut R {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl<R: Ring> Mat<R> {
    pub fn zeros_like(proto: &R, rows: usize, cols: usize) -> Self {
        let z = proto.zero_like();
        Mat::from_fn(rows, cols, |_, _| z.clone())
    }

    pub fn identity_like(proto: &R, n: usize) -> Self {
        let (z, o) = (proto.zero_like(), proto.one_like());
        Mat::from_fn(n, n, |i, j| if i == j { o.clone() } else { z.clone() })
    }

    /// Any entry, used as a prototype for `zero_like` / `one_like`.
    pub fn proto(&self) -> &R {
        self.data
            .first()
            .expect("empty matrix has no prototype entry")
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::is_zero_elem)
    }

    pub fn scale(&self, s: &R) -> Self {
        self.map(|x| s.clone() * x.clone())
    }

    pub fn det2(&self) -> R {
        assert!(self.rows == 2 && self.cols == 2, "det2 needs a 2x2 matrix");
        self[(0, 0)].clone() * self[(1, 1)].clone() - self[(0, 1)].clone() * self[(1, 0)].clone()
    }

    /// Generic determinant by cofactor expansion (small sizes only).
    pub fn det(&self) -> R {
        assert!(self.is_square());
        let n = self.rows;
        match n {
            1 => self[(0, 0)].clone(),
            2 => self.det2(),
            _ => {
                let mut acc = self.proto().zero_like();
                for j in 0..n {
                    let minor = Mat::from_fn(n - 1, n - 1, |r, c| {
                        self[(r + 1, if c < j { c } else { c + 1 })].clone()
                    });
                    let term = self[(0, j)].clone() * minor.det();
                    acc = if j % 2 == 0 { acc + term } else { acc - term };
                }
                acc
            }
        }
    }
}

impl<'a, R: Ring> Mul for &'a Mat<R> {
    type Output = Mat<R>;
    fn mul(self, rhs: &'a Mat<R>) -> Mat<R> {
        assert_eq!(self.cols, rhs.rows, "matrix shape mismatch");
        Mat::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = self[(i, 0)].clone() * rhs[(0, j)].clone();
            for k in 1..self.cols {
                acc = acc + self[(i, k)].clone() * rhs[(k, j)].clone();
            }
            acc
        })
    }
}

impl<R: Ring> Mul for Mat<R> {
    type Output = Mat<R>;
    fn mul(self, rhs: Mat<R>) -> Mat<R> {
        &self * &rhs
    }
}

impl<'a, R: Ring> Add for &'a Mat<R> {
    type Output = Mat<R>;
    fn add(self, rhs: &'a Mat<R>) -> Mat<R> {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix shape mismatch"
        );
        Mat::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() + rhs[(i, j)].clone()
        })
    }
}

impl<R: Ring> Add for Mat<R> {
    type Output = Mat<R>;
    fn add(self, rhs: Mat<R>) -> Mat<R> {
        &self + &rhs
    }
}

impl<'a, R: Ring> Sub for &'a Mat<R> {
    type Output = Mat<R>;
    fn sub(self, rhs: &'a Mat<R>) -> Mat<R> {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix shape mismatch"
        );
        Mat::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() - rhs[(i, j)].clone()
        })
    }
}

impl<R: Ring> Sub for Mat<R> {
    type Output = Mat<R>;
    fn sub(self, rhs: Mat<R>) -> Mat<R> {
        &self - &rhs
    }
}

impl<R: Ring> Neg for Mat<R> {
    type Output = Mat<R>;
    fn neg(self) -> Mat<R> {
        self.map(|x| -x.clone())
    }
}

impl<R: Field> Mat<R> {
    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m[(i, c)].is_zero_elem()) else {
                continue;
            };
            for j in 0..m.cols {
                m.data.swap(pr * m.cols + j, r * m.cols + j);
            }
            let inv = m[(r, c)].inv().expect("nonzero pivot");
            for j in 0..m.cols {
                m[(r, j)] = inv.clone() * m[(r, j)].clone();
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero_elem() {
                    let f = m[(i, c)].clone();
                    for j in 0..m.cols {
                        let v = m[(i, j)].clone() - f.clone() * m[(r, j)].clone();
                        m[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self * x = 0}` as column vectors.
    pub fn nullspace(&self) -> Vec<Vec<R>> {
        let (r, pivots) = self.rref();
        let zero = self.proto().zero_like();
        let one = self.proto().one_like();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![zero.clone(); self.cols];
                v[f] = one.clone();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let id = Mat::identity_like(self.proto(), n);
        let aug = Mat::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else {
                id[(i, j - n)].clone()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Mat::from_fn(n, n, |i, j| r[(i, j + n)].clone()))
    }
}

/// True iff `target` is an `R`-linear combination of `basis` (all vectors of equal length).
pub fn in_span<R: Field>(basis: &[Vec<R>], target: &[R]) -> bool {
    if target.iter().all(Ring::is_zero_elem) {
        return true;
    }
    if basis.is_empty() {
        return false;
    }
    let a = Mat::from_rows(basis.to_vec());
    let mut rows = basis.to_vec();
    rows.push(target.to_vec());
    Mat::from_rows(rows).rank() == a.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn integer_matrix_product() {
        let a = Mat::from_rows(vec![vec![1i64, 2], vec![3, 4]]);
        let b = Mat::from_rows(vec![vec![0i64, 1], vec![1, 0]]);
        assert_eq!(&a * &b, Mat::from_rows(vec![vec![2, 1], vec![4, 3]]));
        assert_eq!(a.det(), -2);
        let c = Mat::from_rows(vec![vec![2i64, 0, 1], vec![1, 3, 2], vec![1, 1, 1]]);
        assert_eq!(c.det(), 2 * (3 - 2) - 0 + 1 * (1 - 3));
    }

    #[test]
    fn rational_inverse_and_nullspace() {
        let a = Mat::from_rows(vec![vec![q(2), q(1)], vec![q(7), q(4)]]);
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, Mat::identity_like(&q(0), 2));
        let s = Mat::from_rows(vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]]);
        assert_eq!(s.rank(), 1);
        let ns = s.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            let col = Mat::from_fn(3, 1, |i, _| v[i].clone());
            assert!((&s * &col).is_zero());
        }
        assert!(Mat::from_rows(vec![vec![q(1), q(2)], vec![q(2), q(4)]])
            .inverse()
            .is_none());
        assert!(in_span(&[vec![q(1), q(1)]], &[q(3), q(3)]));
        assert!(!in_span(&[vec![q(1), q(1)]], &[q(3), q(2)]));
    }
}
