//! Matrices with polynomial entries.

use num_complex::Complex;

use crate::error::{Result, RifError};
use crate::linalg::CMatrix;
use crate::poly::ComplexPolynomial;
use crate::scalar::{cis, lit, real, Scalar};

/// Matrix with polynomial entries, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialMatrix<T: Scalar> {
    rows: usize,
    cols: usize,
    entries: Vec<ComplexPolynomial<T>>,
}

impl<T: Scalar> PolynomialMatrix<T> {
    pub fn new(rows: usize, cols: usize, entries: Vec<ComplexPolynomial<T>>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(RifError::InvalidArgument(format!(
                "expected {} polynomial entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> ComplexPolynomial<T>) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| ComplexPolynomial::zero())
    }

    /// `p(z)·I_n`.
    pub fn scalar_identity(n: usize, p: &ComplexPolynomial<T>) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { p.clone() } else { ComplexPolynomial::zero() })
    }

    /// Constant matrix.
    pub fn constant(m: &CMatrix<T>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| ComplexPolynomial::constant(m[(i, j)]))
    }

    /// Builds `Σ_k C_k z^k` from coefficient blocks.
    pub fn from_coefficients(rows: usize, cols: usize, blocks: &[CMatrix<T>]) -> Self {
        Self::from_fn(rows, cols, |i, j| {
            ComplexPolynomial::new(blocks.iter().map(|b| b[(i, j)]).collect())
        })
    }

    /// Recovers the polynomial matrix of degree at most `degree` agreeing with `f` at
    /// `degree + 1` equispaced points of the unit circle (inverse DFT).
    pub fn interpolate(
        rows: usize,
        cols: usize,
        degree: usize,
        mut f: impl FnMut(Complex<T>) -> CMatrix<T>,
    ) -> Self {
        let k = degree + 1;
        let step = T::two_pi() / lit::<T>(k as f64);
        let samples: Vec<CMatrix<T>> = (0..k).map(|j| f(cis(step * lit::<T>(j as f64)))).collect();
        let inv_k = real(T::one() / lit::<T>(k as f64));
        let blocks: Vec<CMatrix<T>> = (0..k)
            .map(|l| {
                let mut acc = CMatrix::zeros(rows, cols);
                for (j, s) in samples.iter().enumerate() {
                    let w = cis(-step * lit::<T>(((j * l) % k) as f64));
                    acc += s * w;
                }
                acc * inv_k
            })
            .collect();
        Self::from_coefficients(rows, cols, &blocks)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &ComplexPolynomial<T> {
        &self.entries[i * self.cols + j]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, p: ComplexPolynomial<T>) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> &[ComplexPolynomial<T>] {
        &self.entries
    }

    /// Max entry degree; `None` when every entry is zero.
    pub fn degree(&self) -> Option<usize> {
        self.entries.iter().filter_map(|p| p.degree()).max()
    }

    pub fn max_abs_coeff(&self) -> T {
        self.entries
            .iter()
            .fold(T::zero(), |acc, p| acc.max(p.max_abs_coeff()))
    }

    pub fn eval(&self, z: Complex<T>) -> CMatrix<T> {
        CMatrix::from_fn(self.rows, self.cols, |i, j| self.entry(i, j).eval(z))
    }

    /// Coefficient block of `z^k`.
    pub fn coefficient(&self, k: usize) -> CMatrix<T> {
        CMatrix::from_fn(self.rows, self.cols, |i, j| self.entry(i, j).coeff(k))
    }

    /// All coefficient blocks `C_0..C_deg` (a single zero block for the zero matrix).
    pub fn coefficients(&self) -> Vec<CMatrix<T>> {
        let d = self.degree().unwrap_or(0);
        (0..=d).map(|k| self.coefficient(k)).collect()
    }

    /// Drops coefficients below `rel` times the largest coefficient of the whole matrix.
    pub fn pruned(&self, rel: T) -> Self {
        let cut = rel * self.max_abs_coeff();
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|p| p.prune_absolute(cut)).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(&ComplexPolynomial<T>) -> ComplexPolynomial<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        self.map(|p| p.scale(c))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(RifError::InvalidArgument("polynomial matrix shape mismatch".into()));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(ComplexPolynomial::zero(), |acc, k| {
                &acc + &(self.entry(i, k) * other.entry(k, j))
            })
        }))
    }

    /// `C · self` for a constant matrix `C`.
    pub fn left_mul_constant(&self, c: &CMatrix<T>) -> Self {
        let blocks: Vec<CMatrix<T>> = self.coefficients().iter().map(|b| c * b).collect();
        Self::from_coefficients(c.nrows(), self.cols, &blocks)
    }

    /// `self · C` for a constant matrix `C`.
    pub fn right_mul_constant(&self, c: &CMatrix<T>) -> Self {
        let blocks: Vec<CMatrix<T>> = self.coefficients().iter().map(|b| b * c).collect();
        Self::from_coefficients(self.rows, c.ncols(), &blocks)
    }

    /// Rows `start..start+count`.
    pub fn row_block(&self, start: usize, count: usize) -> Self {
        Self::from_fn(count, self.cols, |i, j| self.entry(start + i, j).clone())
    }

    /// Determinant as a polynomial, interpolated from pointwise LU determinants.
    pub fn det(&self) -> Result<ComplexPolynomial<T>> {
        if self.rows != self.cols {
            return Err(RifError::InvalidArgument("determinant of a non-square matrix".into()));
        }
        if self.rows == 1 {
            return Ok(self.entries[0].clone());
        }
        let bound: usize = (0..self.rows)
            .map(|i| (0..self.cols).filter_map(|j| self.entry(i, j).degree()).max().unwrap_or(0))
            .sum();
        let d = Self::interpolate(1, 1, bound, |z| {
            CMatrix::from_element(1, 1, self.eval(z).determinant())
        });
        Ok(d.entry(0, 0).clone())
    }

    /// Laurent blocks of `A(e^{iθ})*·B(e^{iθ})` indexed `l = −deg A ..= deg B`;
    /// returns the blocks and the index offset `deg A`.
    pub fn circle_gram(a: &Self, b: &Self) -> (Vec<CMatrix<T>>, usize) {
        let ca = a.coefficients();
        let cb = b.coefficients();
        let da = ca.len() - 1;
        let mut out = vec![CMatrix::<T>::zeros(a.cols, b.cols); ca.len() + cb.len() - 1];
        for (j, aj) in ca.iter().enumerate() {
            let aj_h = aj.adjoint();
            for (k, bk) in cb.iter().enumerate() {
                out[k + da - j] += &aj_h * bk;
            }
        }
        (out, da)
    }
}

/// Evaluates a matrix of polynomials given as coefficient blocks (Horner on blocks).
pub fn eval_blocks<T: Scalar>(blocks: &[CMatrix<T>], z: Complex<T>) -> CMatrix<T> {
    let mut it = blocks.iter().rev();
    let Some(first) = it.next() else {
        return CMatrix::zeros(0, 0);
    };
    let mut acc = first.clone();
    for b in it {
        acc = acc * z + b;
    }
    acc
}
