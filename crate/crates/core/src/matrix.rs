//! Small dense complex matrices.
//!
//! These back the brute-force oracles (`densesim::unitary`, `zx::semantics`)
//! and the equivalence checks used throughout the test suites. Everything is
//! row-major `Vec<Complex64>`; sizes stay tiny (at most a few thousand
//! entries) so no effort is spent on blocking or SIMD.

use num_complex::Complex64;

/// A dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Self {
        let r = rows.len();
        let c = if r > 0 { rows[0].len() } else { 0 };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: Complex64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Entrywise maximum absolute difference.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Normalized Frobenius overlap `|<A,B>| / (‖A‖·‖B‖)`, which is 1 exactly
    /// when `B = λA` for some nonzero scalar λ.
    pub fn scalar_overlap(&self, other: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let inner: Complex64 =
            self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum();
        let na = self.frobenius_norm();
        let nb = other.frobenius_norm();
        if na == 0.0 || nb == 0.0 {
            return 0.0;
        }
        inner.norm() / (na * nb)
    }

    /// True when `other = λ·self` up to `tol` in normalized overlap.
    pub fn equal_up_to_scalar(&self, other: &Matrix, tol: f64) -> bool {
        self.scalar_overlap(other) >= 1.0 - tol
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_is_multiplicative_unit() {
        let m = Matrix::from_rows(&[
            &[c(1.0, 2.0), c(0.0, -1.0)],
            &[c(3.0, 0.0), c(0.5, 0.5)],
        ]);
        let id = Matrix::identity(2);
        assert_eq!(m.mul(&id), m);
        assert_eq!(id.mul(&m), m);
    }

    #[test]
    fn adjoint_involution() {
        let m = Matrix::from_rows(&[&[c(1.0, 2.0), c(0.0, -1.0)], &[c(3.0, 0.0), c(0.5, 0.5)]]);
        assert_eq!(m.adjoint().adjoint(), m);
    }

    #[test]
    fn scalar_overlap_detects_proportionality() {
        let m = Matrix::from_rows(&[&[c(1.0, 0.0), c(0.0, 1.0)], &[c(2.0, 0.0), c(0.0, 0.0)]]);
        let scaled = m.scale(c(0.0, -3.0));
        assert!(m.equal_up_to_scalar(&scaled, 1e-12));
        let other = Matrix::identity(2);
        assert!(!m.equal_up_to_scalar(&other, 1e-12));
    }

    #[test]
    fn kron_dimensions_and_values() {
        let a = Matrix::from_rows(&[&[c(1.0, 0.0), c(2.0, 0.0)]]);
        let b = Matrix::from_rows(&[&[c(0.0, 1.0)], &[c(3.0, 0.0)]]);
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (2, 2));
        assert_eq!(k[(0, 0)], c(0.0, 1.0));
        assert_eq!(k[(1, 1)], c(6.0, 0.0));
    }
}
