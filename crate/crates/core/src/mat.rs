//! Minimal dense complex matrices for the channel algebra.
//!
//! Dimensions here are small (hundreds), so plain loops beat pulling in a
//! linear-algebra stack, and everything stays `no_std`.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// `self * x`. Panics on length mismatch; callers validate shapes.
    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols, "mul_vec length mismatch");
        let mut y = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, b) in self.row(r).iter().zip(x) {
                acc += a * b;
            }
            y.push(acc);
        }
        y
    }

    /// `self^H * x` (conjugate transpose times vector).
    pub fn adjoint_mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.rows, "adjoint_mul_vec length mismatch");
        let mut y = vec![Complex64::new(0.0, 0.0); self.cols];
        for (r, &xr) in x.iter().enumerate() {
            for (c, a) in self.row(r).iter().enumerate() {
                y[c] += a.conj() * xr;
            }
        }
        y
    }

    /// `self += s * a * b^H` (rank-one update).
    pub fn add_scaled_outer(&mut self, s: Complex64, a: &[Complex64], b: &[Complex64]) {
        assert_eq!(a.len(), self.rows);
        assert_eq!(b.len(), self.cols);
        for (r, ar) in a.iter().enumerate() {
            let sa = s * ar;
            let row = &mut self.data[r * self.cols..(r + 1) * self.cols];
            for (dst, bc) in row.iter_mut().zip(b) {
                *dst += sa * bc.conj();
            }
        }
    }

    pub fn scale(&mut self, s: f64) {
        for z in &mut self.data {
            *z *= s;
        }
    }

    pub fn frobenius_norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }
}

/// Column-major table of per-beam response vectors (each column one beam).
#[derive(Debug, Clone)]
pub struct ColMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ColMat {
    pub fn from_columns(rows: usize, columns: Vec<Vec<Complex64>>) -> Self {
        let cols = columns.len();
        let mut data = Vec::with_capacity(rows * cols);
        for c in &columns {
            assert_eq!(c.len(), rows);
            data.extend_from_slice(c);
        }
        ColMat { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn col(&self, c: usize) -> &[Complex64] {
        &self.data[c * self.rows..(c + 1) * self.rows]
    }
}

pub(crate) fn inner_product(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm(v: &[Complex64]) -> f64 {
    #[allow(unused_imports)]
    use num_traits::Float;
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
