//! Matrix Fejér–Riesz spectral factorization.
//!
//! A Hermitian trigonometric matrix polynomial `Q(e^{iθ}) ⪰ 0` is written as
//! `G(e^{iθ})*G(e^{iθ})` with `G` an outer polynomial matrix and `G(0) ≻ 0`.
//!
//! The factor is read off the stabilized block row of the Cholesky factor of the
//! banded block-Toeplitz matrix of `Q` (Bauer's method), then polished with Newton
//! steps on the quadratic factorization equations and finally normalized by a
//! constant left unitary so that `G(0)` is Hermitian positive definite.

use nalgebra::{Cholesky, DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Result, RifError};
use crate::linalg::{hermitian_eigenvalues, max_abs, polar, spectral_norm, CMatrix};
use crate::poly::ComplexPolynomial;
use crate::poly_matrix::{eval_blocks, PolynomialMatrix};
use crate::scalar::{cabs, circle_grid, cplx, czero, lit, real, to_f64, Scalar};
use crate::tolerance::{default_grid, Tolerances};

const BAUER_START: usize = 32;
const BAUER_MAX: usize = 4096;
const NEWTON_STEPS: usize = 40;

/// Hermitian Laurent polynomial `Σ_{|k|≤d} Q_k e^{ikθ}` with `Q_{−k} = Q_k*`.
///
/// Only `Q_0..Q_d` are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigMatrixPolynomial<T: Scalar> {
    size: usize,
    blocks: Vec<CMatrix<T>>,
}

impl<T: Scalar> TrigMatrixPolynomial<T> {
    /// From the nonnegative-index blocks `Q_0..Q_d`; `Q_0` must be Hermitian.
    pub fn new(blocks: Vec<CMatrix<T>>) -> Result<Self> {
        let Some(q0) = blocks.first() else {
            return Err(RifError::InvalidArgument("trigonometric polynomial needs Q_0".into()));
        };
        let n = q0.nrows();
        if n == 0 || blocks.iter().any(|b| b.nrows() != n || b.ncols() != n) {
            return Err(RifError::InvalidArgument("blocks must be nonempty n×n matrices".into()));
        }
        let scale = blocks.iter().fold(T::one(), |acc, b| acc.max(max_abs(b)));
        if max_abs(&(q0 - q0.adjoint())) > lit::<T>(1e-12) * scale {
            return Err(RifError::InvalidArgument("Q_0 is not Hermitian".into()));
        }
        let mut blocks = blocks;
        while blocks.len() > 1 && max_abs(blocks.last().expect("nonempty")) == T::zero() {
            blocks.pop();
        }
        Ok(Self { size: n, blocks })
    }

    /// From the full list `Q_{−d}..Q_d`, checking Hermitian symmetry.
    pub fn from_full(blocks: Vec<CMatrix<T>>) -> Result<Self> {
        if blocks.len() % 2 == 0 {
            return Err(RifError::InvalidArgument("need an odd number of blocks Q_{-d}..Q_d".into()));
        }
        let d = blocks.len() / 2;
        let scale = blocks.iter().fold(T::one(), |acc, b| acc.max(max_abs(b)));
        for k in 1..=d {
            if max_abs(&(&blocks[d - k] - blocks[d + k].adjoint())) > lit::<T>(1e-12) * scale {
                return Err(RifError::InvalidArgument(format!("Q_-{k} ≠ Q_{k}*")));
            }
        }
        Self::new(blocks[d..].to_vec())
    }

    /// Scalar polynomial from real coefficients `q_0..q_d` (so `q_0 + 2Σ q_k cos kθ`).
    pub fn scalar(coeffs: &[f64]) -> Result<Self> {
        Self::new(
            coeffs
                .iter()
                .map(|&c| CMatrix::from_element(1, 1, real(lit::<T>(c))))
                .collect(),
        )
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn bandwidth(&self) -> usize {
        self.blocks.len() - 1
    }

    /// `Q_k` for any integer `k` (zero outside the band).
    pub fn block(&self, k: isize) -> CMatrix<T> {
        let a = k.unsigned_abs();
        match self.blocks.get(a) {
            Some(b) if k >= 0 => b.clone(),
            Some(b) => b.adjoint(),
            None => CMatrix::zeros(self.size, self.size),
        }
    }

    /// `Q_0..Q_d`.
    pub fn blocks(&self) -> &[CMatrix<T>] {
        &self.blocks
    }

    /// Value at a point `z = e^{iθ}` of the circle.
    pub fn eval(&self, z: Complex<T>) -> CMatrix<T> {
        let zi = z.conj();
        let mut acc = self.blocks[0].clone();
        let mut zk = z;
        let mut zik = zi;
        for b in &self.blocks[1..] {
            acc += b * zk + b.adjoint() * zik;
            zk *= z;
            zik *= zi;
        }
        (&acc + acc.adjoint()) * real(lit::<T>(0.5))
    }

    /// Smallest eigenvalue over a circle grid.
    pub fn min_eigenvalue(&self, grid_size: usize) -> T {
        circle_grid::<T>(grid_size)
            .into_iter()
            .map(|z| hermitian_eigenvalues(&self.eval(z))[0])
            .fold(T::max_value().unwrap(), T::min)
    }

    fn scale(&self) -> T {
        self.blocks.iter().fold(T::zero(), |acc, b| acc.max(max_abs(b)))
    }
}

/// Laurent blocks of `conj(p)·p·I_n − t²·Ỹ*Ỹ` on the circle.
pub fn trig_from_products<T: Scalar>(
    p: &ComplexPolynomial<T>,
    ytilde: &PolynomialMatrix<T>,
    t: T,
) -> TrigMatrixPolynomial<T> {
    let n = ytilde.cols();
    let dp = p.degree().unwrap_or(0);
    let dy = ytilde.degree().unwrap_or(0);
    let d = dp.max(dy);
    let mut blocks = vec![CMatrix::<T>::zeros(n, n); d + 1];
    let (pp, off) = ComplexPolynomial::circle_product(p, p);
    for (idx, c) in pp.iter().enumerate() {
        if idx >= off {
            let l = idx - off;
            for i in 0..n {
                blocks[l][(i, i)] += *c;
            }
        }
    }
    if t != T::zero() {
        let (yy, off) = PolynomialMatrix::circle_gram(ytilde, ytilde);
        let t2 = real(t * t);
        for (idx, b) in yy.iter().enumerate() {
            if idx >= off {
                blocks[idx - off] -= b * t2;
            }
        }
    }
    // exact Hermitian Q_0
    blocks[0] = (&blocks[0] + blocks[0].adjoint()) * real(lit::<T>(0.5));
    TrigMatrixPolynomial {
        size: n,
        blocks,
    }
}

/// Outcome of [`fejer_riesz`].
#[derive(Debug, Clone)]
pub struct SpectralFactor<T: Scalar> {
    pub factor: PolynomialMatrix<T>,
    /// Grid max of `‖G*G − Q‖₂`.
    pub residual: T,
    /// Block rows of the Toeplitz Cholesky that were computed.
    pub toeplitz_rows: usize,
    /// Q is singular somewhere on the circle; the relaxed residual bound applied.
    pub boundary_degenerate: bool,
}

/// Outer spectral factor `G` of `Q` with `G(0) ≻ 0`.
pub fn fejer_riesz<T: Scalar>(q: &TrigMatrixPolynomial<T>, tol: &Tolerances) -> Result<SpectralFactor<T>> {
    let n = q.size();
    let d = q.bandwidth();
    let grid = default_grid(2 * d);
    let scale = q.scale();
    let min_eig = q.min_eigenvalue(grid);
    if min_eig < -lit::<T>(tol.psd) * T::one().max(scale) {
        return Err(RifError::NotNonnegative {
            min_eigenvalue: to_f64(min_eig),
        });
    }
    let degenerate = min_eig <= lit::<T>(1e-6) * T::one().max(scale);

    let (mut coeffs, rows) = bauer(q, tol)?;
    coeffs = newton_polish(q, coeffs, grid);

    let (u, _) = polar(&coeffs[0]);
    let uh = u.adjoint();
    let coeffs: Vec<CMatrix<T>> = coeffs.iter().map(|c| &uh * c).collect();
    let factor = PolynomialMatrix::from_coefficients(n, n, &coeffs);
    let residual = factor_residual(q, &coeffs, grid);

    let bound = if degenerate { tol.factor_degenerate } else { tol.factor };
    if residual > lit::<T>(bound) * T::one().max(scale) {
        return Err(RifError::ConvergenceFailure {
            residual: to_f64(residual),
            context: format!(" (Fejér–Riesz, {rows} Toeplitz rows)"),
        });
    }
    Ok(SpectralFactor {
        factor,
        residual,
        toeplitz_rows: rows,
        boundary_degenerate: degenerate,
    })
}

/// Banded block Cholesky `T = R*R` of the block-Toeplitz matrix `T_{ij} = Q_{j−i}`;
/// returns the latest block row `R_{i,i..i+d}` once it has stabilized.
fn bauer<T: Scalar>(q: &TrigMatrixPolynomial<T>, tol: &Tolerances) -> Result<(Vec<CMatrix<T>>, usize)> {
    let d = q.bandwidth();
    // window[k] holds row (i − d + k) for the last d rows
    let mut window: Vec<Vec<CMatrix<T>>> = Vec::with_capacity(d);
    let mut snapshot: Option<Vec<CMatrix<T>>> = None;
    let mut checkpoint = BAUER_START;
    let change_tol = lit::<T>(tol.bauer_change);
    let mut i = 0usize;
    loop {
        let mut row: Vec<CMatrix<T>> = Vec::with_capacity(d + 1);
        // previous rows k = i − len .. i − 1 live in window
        let base = i - window.len();
        let mut diag_chol: Option<CMatrix<T>> = None;
        for o in 0..=d {
            let mut s = q.block(o as isize);
            for (w, prev) in window.iter().enumerate() {
                let k = base + w;
                // R_{k,i} and R_{k,i+o}
                let a = i - k;
                let b = i + o - k;
                if b <= d {
                    s -= prev[a].adjoint() * &prev[b];
                }
            }
            if o == 0 {
                let herm = (&s + s.adjoint()) * real(lit::<T>(0.5));
                let chol = Cholesky::new(herm).ok_or_else(|| RifError::ConvergenceFailure {
                    residual: f64::NAN,
                    context: format!(" (Toeplitz Cholesky lost definiteness at block row {i})"),
                })?;
                let upper = chol.l().adjoint();
                diag_chol = Some(upper.clone());
                row.push(upper);
            } else {
                let upper = diag_chol.as_ref().expect("diagonal block first");
                let lower = upper.adjoint();
                let x = lower.solve_lower_triangular(&s).ok_or_else(|| RifError::ConvergenceFailure {
                    residual: f64::NAN,
                    context: " (singular Toeplitz pivot)".into(),
                })?;
                row.push(x);
            }
        }
        i += 1;
        if d > 0 {
            if window.len() == d {
                window.remove(0);
            }
            window.push(row.clone());
        }
        if d == 0 {
            return Ok((row, i));
        }
        if i == checkpoint {
            if let Some(prev) = &snapshot {
                let size = row.iter().fold(T::zero(), |acc, b| acc.max(max_abs(b)));
                let change = row
                    .iter()
                    .zip(prev)
                    .fold(T::zero(), |acc, (a, b)| acc.max(max_abs(&(a - b))));
                if change <= change_tol * size || checkpoint >= BAUER_MAX {
                    return Ok((row, i));
                }
            }
            snapshot = Some(row);
            checkpoint *= 2;
        }
    }
}

fn factor_residual<T: Scalar>(q: &TrigMatrixPolynomial<T>, coeffs: &[CMatrix<T>], grid: usize) -> T {
    circle_grid::<T>(grid).into_iter().fold(T::zero(), |acc, z| {
        let g = eval_blocks(coeffs, z);
        acc.max(spectral_norm(&(g.adjoint() * &g - q.eval(z))))
    })
}

/// Laurent blocks `l = 0..=d` of `A*B + B*A` for polynomial matrices given by blocks.
fn symmetric_gram<T: Scalar>(a: &[CMatrix<T>], b: &[CMatrix<T>], d: usize) -> Vec<CMatrix<T>> {
    let n = a[0].ncols();
    let mut out = vec![CMatrix::<T>::zeros(n, n); d + 1];
    for l in 0..=d {
        for j in 0..a.len() {
            if let Some(bj) = b.get(j + l) {
                out[l] += a[j].adjoint() * bj;
            }
            if let Some(aj) = a.get(j + l) {
                out[l] += b[j].adjoint() * aj;
            }
        }
    }
    out
}

/// Newton iteration on `G*G = Q`: solve `G*X + X*G = Q − G*G` in the least-squares
/// (minimum-norm) sense and update `G ← G + X`, keeping the best residual seen.
fn newton_polish<T: Scalar>(q: &TrigMatrixPolynomial<T>, mut g: Vec<CMatrix<T>>, grid: usize) -> Vec<CMatrix<T>> {
    let n = q.size();
    let d = q.bandwidth();
    let unknowns = 2 * n * n * (d + 1);
    let flatten = |blocks: &[CMatrix<T>]| -> DVector<T> {
        let mut v = DVector::zeros(unknowns);
        let mut idx = 0;
        for b in blocks {
            for c in b.iter() {
                v[idx] = c.re;
                v[idx + 1] = c.im;
                idx += 2;
            }
        }
        v
    };
    let target: Vec<CMatrix<T>> = (0..=d).map(|l| q.block(l as isize)).collect();
    let mut best = factor_residual(q, &g, grid);
    let floor = lit::<T>(64.0) * T::default_epsilon() * T::one().max(q.scale());
    for _ in 0..NEWTON_STEPS {
        if best <= floor {
            break;
        }
        let gram = symmetric_gram(&g, &g, d);
        let half = real(lit::<T>(0.5));
        let rhs_blocks: Vec<CMatrix<T>> = target
            .iter()
            .zip(&gram)
            .map(|(t, gg)| t - gg * half)
            .collect();
        let rhs = flatten(&rhs_blocks);
        let mut jac = DMatrix::<T>::zeros(unknowns, unknowns);
        let mut basis = vec![CMatrix::<T>::zeros(n, n); d + 1];
        let mut col = 0;
        for k in 0..=d {
            for idx in 0..n * n {
                for unit in [cplx(T::one(), T::zero()), cplx(T::zero(), T::one())] {
                    let (r, c) = (idx / n, idx % n);
                    basis[k][(r, c)] = unit;
                    let image = symmetric_gram(&g, &basis, d);
                    jac.set_column(col, &flatten(&image));
                    basis[k][(r, c)] = czero();
                    col += 1;
                }
            }
        }
        let svd = jac.svd(true, true);
        let smax = svd.singular_values.max();
        let Ok(step) = svd.solve(&rhs, smax * lit::<T>(1e-13)) else {
            break;
        };
        let mut candidate = g.clone();
        let mut idx = 0;
        for b in candidate.iter_mut() {
            for c in b.iter_mut() {
                *c += cplx(step[idx], step[idx + 1]);
                idx += 2;
            }
        }
        let res = factor_residual(q, &candidate, grid);
        if res < best {
            best = res;
            g = candidate;
        } else {
            break;
        }
    }
    g
}

/// Checks of a candidate factor `G` against `Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorReport {
    /// Grid max of `‖G*G − Q‖₂`.
    pub residual: f64,
    /// Smallest modulus among the roots of `det G` (infinite if `det G` is constant).
    pub min_det_root_modulus: f64,
    pub outer: bool,
    /// Smallest eigenvalue of the Hermitian part of `G(0)`.
    pub g0_min_eigenvalue: f64,
    pub g0_positive_definite: bool,
}

pub fn verify_factor<T: Scalar>(
    q: &TrigMatrixPolynomial<T>,
    g: &PolynomialMatrix<T>,
    grid_size: usize,
    tol: &Tolerances,
) -> Result<FactorReport> {
    if g.rows() != q.size() || g.cols() != q.size() {
        return Err(RifError::InvalidArgument("factor size does not match".into()));
    }
    let coeffs = g.coefficients();
    let residual = factor_residual(q, &coeffs, grid_size);
    let min_root = det_min_root_modulus(g)?;
    let g0 = g.coefficient(0);
    let herm_defect = max_abs(&(&g0 - g0.adjoint()));
    let g0_min = hermitian_eigenvalues(&g0)[0];
    Ok(FactorReport {
        residual: to_f64(residual),
        min_det_root_modulus: min_root,
        outer: min_root >= 1.0 - tol.outer,
        g0_min_eigenvalue: to_f64(g0_min),
        g0_positive_definite: g0_min > T::zero() && herm_defect <= lit::<T>(1e-10) * T::one().max(max_abs(&g0)),
    })
}

/// Smallest root modulus of `det G`; `f64::INFINITY` when the determinant is constant.
pub fn det_min_root_modulus<T: Scalar>(g: &PolynomialMatrix<T>) -> Result<f64> {
    let det = g.det()?.pruned_relative();
    if det.is_zero() {
        return Err(RifError::RankDeficient("det G vanishes identically".into()));
    }
    Ok(det
        .roots()?
        .into_iter()
        .map(|r| to_f64(cabs(r)))
        .fold(f64::INFINITY, f64::min))
}

impl<T: Scalar> ComplexPolynomial<T> {
    /// Drops interpolation noise: coefficients below `1e-11` of the largest one.
    pub fn pruned_relative(&self) -> Self {
        self.prune_absolute(lit::<T>(1e-11) * self.max_abs_coeff())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;

    fn scalar_factor(q: &[f64]) -> Vec<Complex<f64>> {
        let tq = TrigMatrixPolynomial::<f64>::scalar(q).unwrap();
        let f = fejer_riesz(&tq, &Tolerances::default()).unwrap();
        f.factor.entry(0, 0).coeffs().to_vec()
    }

    #[test]
    fn one_plus_z() {
        let g = scalar_factor(&[2.0, 1.0]);
        assert!((g[0] - cplx(1.0, 0.0)).norm() < 1e-6, "{g:?}");
        assert!((g[1] - cplx(1.0, 0.0)).norm() < 1e-6, "{g:?}");
    }

    #[test]
    fn two_plus_z() {
        let g = scalar_factor(&[5.0, 2.0]);
        assert!((g[0] - cplx(2.0, 0.0)).norm() < 1e-12);
        assert!((g[1] - cplx(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn fixture_b_half() {
        // 5/4 − cosθ − t²/4 at t = 1/2; α² = (19/16 + √((19/16)² − 1))/2, β = −1/(2α)
        let g = scalar_factor(&[1.25 - 0.0625, -0.5]);
        assert!((g[0].re - 0.9560163238335616).abs() < 1e-9, "{g:?}");
        assert!((g[1].re + 0.5230036219413424).abs() < 1e-9);
    }

    #[test]
    fn block_diagonal() {
        let q0 = CMatrix::from_row_slice(2, 2, &[cplx(2.0, 0.0), czero(), czero(), cplx(1.0, 0.0)]);
        let q1 = CMatrix::from_row_slice(2, 2, &[cplx(1.0, 0.0), czero(), czero(), czero()]);
        let q = TrigMatrixPolynomial::new(vec![q0, q1]).unwrap();
        let f = fejer_riesz(&q, &Tolerances::default()).unwrap();
        let g = &f.factor;
        assert!((g.entry(0, 0).coeff(0) - cplx(1.0, 0.0)).norm() < 1e-6);
        assert!((g.entry(0, 0).coeff(1) - cplx(1.0, 0.0)).norm() < 1e-6);
        assert!((g.entry(1, 1).coeff(0) - cplx(1.0, 0.0)).norm() < 1e-8);
        assert!(g.entry(0, 1).max_abs_coeff() < 1e-6 && g.entry(1, 0).max_abs_coeff() < 1e-6);
        assert!(f.boundary_degenerate);
    }

    #[test]
    fn indefinite_rejected() {
        let q = TrigMatrixPolynomial::<f64>::scalar(&[1.0, 1.0]).unwrap();
        assert!(matches!(
            fejer_riesz(&q, &Tolerances::default()),
            Err(RifError::NotNonnegative { .. })
        ));
    }

    #[test]
    fn hermitian_symmetry_enforced() {
        let a = CMatrix::from_element(1, 1, cplx(1.0, 0.0));
        let b = CMatrix::from_element(1, 1, cplx(0.5, 0.0));
        let c = CMatrix::from_element(1, 1, cplx(0.4, 0.0));
        assert!(TrigMatrixPolynomial::<f64>::from_full(vec![b.clone(), a.clone(), c]).is_err());
        assert!(TrigMatrixPolynomial::<f64>::from_full(vec![b.clone(), a, b]).is_ok());
        let nh = CMatrix::from_element(1, 1, cplx(1.0, 0.5));
        assert!(TrigMatrixPolynomial::<f64>::new(vec![nh]).is_err());
    }

    #[test]
    fn trig_from_products_examples() {
        let p = ComplexPolynomial::<f64>::one();
        let y = PolynomialMatrix::from_fn(1, 1, |_, _| {
            ComplexPolynomial::constant(cplx(std::f64::consts::FRAC_1_SQRT_2, 0.0))
        });
        let q = trig_from_products(&p, &y, 1.0);
        assert_eq!(q.bandwidth(), 0);
        assert!((q.block(0)[(0, 0)] - cplx(0.5, 0.0)).norm() < 1e-15);

        let p = ComplexPolynomial::<f64>::from_real(&[1.0, -0.5]);
        let y = PolynomialMatrix::from_fn(1, 1, |_, _| ComplexPolynomial::constant(cplx(0.5, 0.0)));
        let q = trig_from_products(&p, &y, 0.0);
        assert_eq!(q.bandwidth(), 1);
        assert_eq!(q.block(-1)[(0, 0)], cplx(-0.5, 0.0));
        assert_eq!(q.block(0)[(0, 0)], cplx(1.25, 0.0));
        assert_eq!(q.block(1)[(0, 0)], cplx(-0.5, 0.0));
    }

    #[test]
    fn verify_factor_examples() {
        let tol = Tolerances::default();
        let q = TrigMatrixPolynomial::<f64>::scalar(&[2.0, 1.0]).unwrap();
        let g = PolynomialMatrix::from_fn(1, 1, |_, _| ComplexPolynomial::from_real(&[1.0, 1.0]));
        assert!(verify_factor(&q, &g, 512, &tol).unwrap().residual < 1e-12);
        let q5 = TrigMatrixPolynomial::<f64>::scalar(&[5.0, 2.0]).unwrap();
        let g5 = PolynomialMatrix::from_fn(1, 1, |_, _| ComplexPolynomial::from_real(&[2.0, 1.0]));
        let r = verify_factor(&q5, &g5, 512, &tol).unwrap();
        assert!(r.residual < 1e-12 && r.outer && r.g0_positive_definite);
        let g9 = PolynomialMatrix::from_fn(1, 1, |_, _| ComplexPolynomial::from_real(&[1.0, 0.9]));
        let r = verify_factor(&q, &g9, 512, &tol).unwrap();
        // |1 + 0.9 e^{iθ}|² − (2 + 2cosθ) = −0.19 − 0.2cosθ, largest magnitude 0.39 at θ = 0
        assert!((r.residual - 0.39).abs() < 1e-6, "{}", r.residual);
    }
}
