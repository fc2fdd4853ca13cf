//! Dense quaternion matrices, the storage behind Hermitian blocks and
//! Jordan isomorphism data.

use std::ops::Mul;

use crate::quaternion::Quaternion;

/// Row-major dense matrix with quaternion entries.
#[derive(Debug, Clone, PartialEq)]
pub struct QMat {
    rows: usize,
    cols: usize,
    data: Vec<Quaternion>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            data: vec![Quaternion::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Quaternion::ONE);
        }
        m
    }

    /// Panics if `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Quaternion>) -> Self {
        assert_eq!(data.len(), rows * cols, "QMat::from_vec: wrong data length");
        QMat { rows, cols, data }
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Quaternion,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        QMat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Quaternion] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Quaternion {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, q: Quaternion) {
        self.data[i * self.cols + j] = q;
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> QMat {
        QMat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// Entrywise map.
    pub fn map(&self, f: impl Fn(Quaternion) -> Quaternion) -> QMat {
        QMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&q| f(q)).collect(),
        }
    }

    pub fn add(&self, other: &QMat) -> QMat {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &QMat) -> QMat {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> QMat {
        self.map(|q| q.scale(s))
    }

    pub fn matmul(&self, other: &QMat) -> QMat {
        assert_eq!(
            self.cols, other.rows,
            "QMat::matmul: inner dimensions differ"
        );
        let mut out = QMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Quaternion::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] += a * other.get(k, j);
                }
            }
        }
        out
    }

    /// Frobenius norm.
    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|q| q.max_abs()).fold(0.0, f64::max)
    }

    pub fn column(&self, j: usize) -> Vec<Quaternion> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[Quaternion]) {
        for (i, &q) in col.iter().enumerate() {
            self.set(i, j, q);
        }
    }

    /// Frobenius distance of `self * self^*` from the identity.
    pub fn isometry_residual(&self) -> f64 {
        let g = self.matmul(&self.adjoint());
        g.sub(&QMat::identity(self.rows)).frobenius()
    }
}

impl Mul for &QMat {
    type Output = QMat;
    fn mul(self, rhs: &QMat) -> QMat {
        self.matmul(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjoint_of_product_reverses() {
        let a = QMat::from_fn(2, 3, |i, j| {
            Quaternion::new(i as f64, j as f64, 1.0, -(i as f64))
        });
        let b = QMat::from_fn(3, 2, |i, j| Quaternion::new(1.0, (i * j) as f64, -0.5, 2.0));
        let lhs = a.matmul(&b).adjoint();
        let rhs = b.adjoint().matmul(&a.adjoint());
        assert!(lhs.sub(&rhs).frobenius() < 1e-12);
    }

    #[test]
    fn identity_is_neutral() {
        let a = QMat::from_fn(3, 3, |i, j| {
            Quaternion::new(i as f64 - j as f64, 0.5, 0.0, 1.0)
        });
        assert_eq!(QMat::identity(3).matmul(&a), a);
        assert_eq!(a.matmul(&QMat::identity(3)), a);
        assert!(QMat::identity(4).isometry_residual() == 0.0);
    }
}
