//! Inner-outer factorization of square rational matrix functions and
//! Blaschke–Potapov factorization of square rational inner functions.
//!
//! Both factorizations peel off one rank-one elementary factor
//! `B(z) = b_a(z)·vv* + (I − vv*)` per zero of the determinant inside the disk.
//! Peeling is exact polynomial arithmetic on the numerator `N` of `N/q`: the
//! column `N v` (or row `u* N`) vanishes at `a`, so the factor `z − a` divides it.

use num_complex::Complex;

use crate::error::{Result, RifError};
use crate::linalg::{identity, isometry_defect, kernel_vector, max_abs, polar, spectral_norm, CMatrix, CVector};
use crate::matrix::{inner_defect, RationalMatrixFunction};
use crate::poly::{BlaschkeProduct, ComplexPolynomial};
use crate::poly_matrix::PolynomialMatrix;
use crate::scalar::{cabs, circle_grid, cone, lit, real, to_f64, Scalar};
use crate::tolerance::{default_grid, Tolerances, INTERIOR};

pub use crate::linalg::kernel_vector as kernel;

/// `B(z) = b_a(z)·vv* + (I − vv*)` with `b_a(z) = (z − a)/(1 − conj(a) z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementaryFactor<T: Scalar> {
    zero: Complex<T>,
    direction: CVector<T>,
}

impl<T: Scalar> ElementaryFactor<T> {
    /// Normalizes `direction`; rejects zeros outside `|a| <= 1 − 1e-10` and null directions.
    pub fn new(zero: Complex<T>, direction: CVector<T>) -> Result<Self> {
        if cabs(zero) > T::one() - lit::<T>(INTERIOR) {
            return Err(RifError::InvalidArgument(format!(
                "elementary factor zero of modulus {} is not interior",
                to_f64(cabs(zero))
            )));
        }
        let norm = direction.norm();
        if norm <= T::default_epsilon() {
            return Err(RifError::InvalidArgument("elementary factor needs a nonzero direction".into()));
        }
        Ok(Self {
            zero,
            direction: direction / real(norm),
        })
    }

    pub fn zero(&self) -> Complex<T> {
        self.zero
    }

    pub fn direction(&self) -> &CVector<T> {
        &self.direction
    }

    pub fn size(&self) -> usize {
        self.direction.len()
    }

    pub fn blaschke(&self) -> BlaschkeProduct<T> {
        BlaschkeProduct::factor(self.zero).expect("zero validated at construction")
    }

    pub fn projection(&self) -> CMatrix<T> {
        &self.direction * self.direction.adjoint()
    }

    pub fn eval(&self, z: Complex<T>) -> CMatrix<T> {
        let b = (z - self.zero) / (cone::<T>() - self.zero.conj() * z);
        identity::<T>(self.size()) + self.projection() * (b - cone::<T>())
    }

    /// The same factor conjugated by a unitary: `U* B U`, i.e. direction `U* v`.
    pub fn conjugated(&self, u: &CMatrix<T>) -> Self {
        Self {
            zero: self.zero,
            direction: u.adjoint() * &self.direction,
        }
    }
}

/// `Φ = C · B_1 · B_2 ⋯ B_N` with a constant unitary `C`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotapovFactorization<T: Scalar> {
    pub constant_unitary: CMatrix<T>,
    /// Factors in left-to-right product order.
    pub factors: Vec<ElementaryFactor<T>>,
}

impl<T: Scalar> PotapovFactorization<T> {
    pub fn size(&self) -> usize {
        self.constant_unitary.nrows()
    }

    /// `C·Π B_k(z)` evaluated left to right.
    pub fn reconstruct(&self, z: Complex<T>) -> CMatrix<T> {
        self.factors
            .iter()
            .fold(self.constant_unitary.clone(), |acc, f| acc * f.eval(z))
    }

    /// The product as a rational matrix function over `Π (1 − conj(a_k) z)`.
    pub fn to_rational(&self) -> Result<RationalMatrixFunction<T>> {
        let n = self.size();
        let den = self.factors.iter().fold(ComplexPolynomial::one(), |acc, f| {
            &acc * &ComplexPolynomial::new(vec![cone(), -f.zero.conj()])
        });
        let num = PolynomialMatrix::interpolate(n, n, self.factors.len(), |z| self.reconstruct(z) * den.eval(z));
        RationalMatrixFunction::from_polynomial_matrix(&num, &den)
    }
}

/// `C·Π B_k(z)`.
pub fn potapov_reconstruct<T: Scalar>(fact: &PotapovFactorization<T>, z: Complex<T>) -> CMatrix<T> {
    fact.reconstruct(z)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    /// `N = N' B`: kernel vector `v` with `N(a) v = 0`.
    Right,
    /// `N = B N'`: kernel vector `u` with `u* N(a) = 0`.
    Left,
}

/// `N v` (right) or `u* N` (left) as a list of polynomials.
fn contract<T: Scalar>(num: &PolynomialMatrix<T>, v: &CVector<T>, side: Side) -> Vec<ComplexPolynomial<T>> {
    match side {
        Side::Right => (0..num.rows())
            .map(|i| {
                (0..num.cols()).fold(ComplexPolynomial::zero(), |acc, j| {
                    &acc + &num.entry(i, j).scale(v[j])
                })
            })
            .collect(),
        Side::Left => (0..num.cols())
            .map(|j| {
                (0..num.rows()).fold(ComplexPolynomial::zero(), |acc, i| {
                    &acc + &num.entry(i, j).scale(v[i].conj())
                })
            })
            .collect(),
    }
}

fn kernel_at<T: Scalar>(num: &PolynomialMatrix<T>, a: Complex<T>, side: Side, tol: T) -> Result<CVector<T>> {
    let m = num.eval(a);
    let m = match side {
        Side::Right => m,
        Side::Left => m.adjoint(),
    };
    let scale = T::one().max(spectral_norm(&m));
    kernel_vector(&m, tol * scale)
}

/// Newton refinement of an approximate zero `a` of `det N`, using the polynomial
/// vector `N v` (or `u* N`) which vanishes at the exact zero.
fn refine_zero<T: Scalar>(num: &PolynomialMatrix<T>, mut a: Complex<T>, side: Side) -> Complex<T> {
    let loose = T::max_value().unwrap();
    for _ in 0..4 {
        let Ok(v) = kernel_at(num, a, side, loose) else {
            break;
        };
        let r = contract(num, &v, side);
        let size = |z: Complex<T>| r.iter().fold(T::zero(), |acc, p| acc + p.eval(z).norm_sqr());
        let Some((k, slope)) = r
            .iter()
            .enumerate()
            .map(|(k, p)| (k, p.derivative().eval(a)))
            .max_by(|x, y| cabs(x.1).partial_cmp(&cabs(y.1)).unwrap_or(std::cmp::Ordering::Equal))
        else {
            break;
        };
        if cabs(slope) == T::zero() {
            break;
        }
        let step = r[k].eval(a) / slope;
        let next = a - step;
        if size(next) < size(a) {
            a = next;
        } else {
            break;
        }
        if cabs(step) <= T::default_epsilon() * T::one().max(cabs(a)) {
            break;
        }
    }
    a
}

/// Divides one elementary factor off the numerator `N` (denominator unchanged).
fn deflate<T: Scalar>(
    num: &PolynomialMatrix<T>,
    a: Complex<T>,
    v: &CVector<T>,
    side: Side,
    tol: &Tolerances,
) -> Result<PolynomialMatrix<T>> {
    let r = contract(num, v, side);
    let scale = T::one().max(num.max_abs_coeff());
    let mut quotients = Vec::with_capacity(r.len());
    for p in &r {
        let (quot, _) = p.div_linear(a);
        let residual = cabs(p.eval(a));
        if residual > lit::<T>(tol.deflate) * scale {
            return Err(RifError::DeflationFailure {
                re: to_f64(a.re),
                im: to_f64(a.im),
                residual: to_f64(residual),
            });
        }
        // (z − a)·b_a(z)^{-1} = 1 − conj(a) z
        let lifted = &quot * &ComplexPolynomial::new(vec![cone(), -a.conj()]);
        quotients.push(&lifted - p);
    }
    Ok(PolynomialMatrix::from_fn(num.rows(), num.cols(), |i, j| {
        let delta = match side {
            Side::Right => quotients[i].scale(v[j].conj()),
            Side::Left => quotients[j].scale(v[i]),
        };
        num.entry(i, j) + &delta
    }))
}

/// Zeros of `det N` strictly inside `|z| < radius`, innermost first.
fn interior_zeros<T: Scalar>(num: &PolynomialMatrix<T>, radius: T) -> Result<Vec<Complex<T>>> {
    let det = num.det()?.pruned_relative();
    if det.is_zero() {
        return Err(RifError::RankDeficient("determinant vanishes identically".into()));
    }
    let mut zeros: Vec<Complex<T>> = det.roots()?.into_iter().filter(|r| cabs(*r) < radius).collect();
    zeros.sort_by(|x, y| cabs(*x).partial_cmp(&cabs(*y)).unwrap_or(std::cmp::Ordering::Equal));
    Ok(zeros)
}

/// Removes the elementary factor `B = b_a vv* + (I − vv*)` on the right: returns `Φ'`
/// with `Φ = Φ'·B`.
pub fn extract_elementary<T: Scalar>(
    phi: &RationalMatrixFunction<T>,
    a: Complex<T>,
    v: &CVector<T>,
    tol: &Tolerances,
) -> Result<RationalMatrixFunction<T>> {
    if phi.rows() != phi.cols() || v.len() != phi.cols() {
        return Err(RifError::InvalidArgument("extract_elementary needs a square Φ and matching v".into()));
    }
    let factor = ElementaryFactor::new(a, v.clone())?;
    let v = factor.direction();
    let at_zero = phi.eval(a)?;
    let image = (&at_zero * v).norm();
    if image > lit::<T>(tol.kernel) * T::one().max(spectral_norm(&at_zero)) {
        return Err(RifError::InvalidArgument(format!(
            "Φ(a)v has norm {:e}; v is not a kernel vector",
            to_f64(image)
        )));
    }
    let (num, den) = phi.to_common_denominator();
    let num = deflate(&num, a, v, Side::Right, tol)?;
    RationalMatrixFunction::from_polynomial_matrix(&num, &den)
}

/// Blaschke–Potapov factorization by repeated right deflation at the innermost
/// zero of `det Φ`. Factors come back in product order, so the last one listed is
/// the first one extracted.
pub fn potapov_factorize<T: Scalar>(
    phi: &RationalMatrixFunction<T>,
    tol: &Tolerances,
) -> Result<PotapovFactorization<T>> {
    let n = phi.rows();
    if phi.cols() != n {
        return Err(RifError::InvalidArgument("Potapov factorization needs a square Φ".into()));
    }
    let grid = default_grid(phi.max_degree());
    let defect = inner_defect(phi, grid);
    if defect > lit::<T>(tol.inner) {
        return Err(RifError::NotInner(format!("inner defect {:e}", to_f64(defect))));
    }
    let (mut num, den) = phi.to_common_denominator();
    let mut extracted: Vec<ElementaryFactor<T>> = Vec::new();
    let budget = n * num.degree().unwrap_or(0) + 1;
    loop {
        let zeros = interior_zeros(&num, T::one())?;
        let Some(&first) = zeros.first() else {
            break;
        };
        if extracted.len() >= budget {
            return Err(RifError::DeflationFailure {
                re: to_f64(first.re),
                im: to_f64(first.im),
                residual: f64::NAN,
            });
        }
        let a = refine_zero(&num, first, Side::Right);
        let v = kernel_at(&num, a, Side::Right, lit::<T>(tol.kernel)).map_err(|_| {
            RifError::DeflationFailure {
                re: to_f64(a.re),
                im: to_f64(a.im),
                residual: f64::NAN,
            }
        })?;
        num = deflate(&num, a, &v, Side::Right, tol)?.pruned(lit::<T>(1e-14));
        extracted.push(ElementaryFactor::new(a, v)?);
    }
    let constant = constant_value(&num, &den, tol)?;
    extracted.reverse();
    Ok(PotapovFactorization {
        constant_unitary: constant,
        factors: extracted,
    })
}

/// Value of a numerically constant `N/q`, projected onto the unitary group.
fn constant_value<T: Scalar>(num: &PolynomialMatrix<T>, den: &ComplexPolynomial<T>, tol: &Tolerances) -> Result<CMatrix<T>> {
    let n = num.rows();
    let pts = circle_grid::<T>(16);
    let samples: Vec<CMatrix<T>> = pts.iter().map(|z| num.eval(*z) / den.eval(*z)).collect();
    let mean = samples.iter().fold(CMatrix::<T>::zeros(n, n), |acc, s| acc + s) / real(lit::<T>(16.0));
    let spread = samples
        .iter()
        .fold(T::zero(), |acc, s| acc.max(spectral_norm(&(s - &mean))));
    if spread > lit::<T>(tol.deflate) {
        return Err(RifError::DeflationFailure {
            re: f64::NAN,
            im: f64::NAN,
            residual: to_f64(spread),
        });
    }
    if isometry_defect(&mean) > lit::<T>(tol.inner) {
        return Err(RifError::NotInner(format!(
            "remaining constant is not unitary (defect {:e})",
            to_f64(isometry_defect(&mean))
        )));
    }
    Ok(polar(&mean).0)
}

/// `X = Φ·F` with `Φ` inner and `F` outer, `F(0) ≻ 0`.
#[derive(Debug, Clone)]
pub struct InnerOuter<T: Scalar> {
    pub inner: RationalMatrixFunction<T>,
    pub outer: RationalMatrixFunction<T>,
    /// The inner factor as a Blaschke–Potapov product.
    pub inner_factorization: PotapovFactorization<T>,
}

/// Inner-outer factorization of a square disk-analytic rational matrix function.
///
/// Zeros of `det X` in the open disk are divided off on the left one at a time,
/// which leaves an outer polynomial numerator `N_out` with `X = B_1⋯B_N·N_out/q`.
/// Writing `N_out(0) = U·P` (polar), `F = U*·N_out/q` and `Φ = B_1⋯B_N·U`.
/// Zeros on the unit circle (within `1e-7`) stay in the outer factor.
pub fn inner_outer<T: Scalar>(x: &RationalMatrixFunction<T>, tol: &Tolerances) -> Result<InnerOuter<T>> {
    let n = x.rows();
    if x.cols() != n {
        return Err(RifError::InvalidArgument("inner-outer factorization needs a square X".into()));
    }
    let (mut num, den) = x.to_common_denominator();
    let radius = T::one() - lit::<T>(tol.outer);
    let mut left: Vec<ElementaryFactor<T>> = Vec::new();
    let budget = n * num.degree().unwrap_or(0) + 1;
    loop {
        let zeros = interior_zeros(&num, radius)?;
        let Some(&first) = zeros.first() else {
            break;
        };
        if left.len() >= budget {
            return Err(RifError::DeflationFailure {
                re: to_f64(first.re),
                im: to_f64(first.im),
                residual: f64::NAN,
            });
        }
        let a = refine_zero(&num, first, Side::Left);
        let u = kernel_at(&num, a, Side::Left, lit::<T>(tol.kernel)).map_err(|_| {
            RifError::DeflationFailure {
                re: to_f64(a.re),
                im: to_f64(a.im),
                residual: f64::NAN,
            }
        })?;
        num = deflate(&num, a, &u, Side::Left, tol)?;
        left.push(ElementaryFactor::new(a, u)?);
    }
    let (u, _) = polar(&num.coefficient(0));
    let uh = u.adjoint();
    let outer = RationalMatrixFunction::from_polynomial_matrix(&num.left_mul_constant(&uh), &den)?;
    // B_1⋯B_N·U = U·(U*B_1U)⋯(U*B_NU)
    let inner_factorization = PotapovFactorization {
        factors: left.iter().map(|f| f.conjugated(&u)).collect(),
        constant_unitary: u,
    };
    let inner = inner_factorization.to_rational()?;
    Ok(InnerOuter {
        inner,
        outer,
        inner_factorization,
    })
}

/// Diagnostics for an inner-outer pair.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerOuterReport {
    pub inner_defect: f64,
    pub product_residual: f64,
    pub outer_min_det_root: f64,
    pub outer_f0_min_eigenvalue: f64,
}

pub fn verify_inner_outer<T: Scalar>(x: &RationalMatrixFunction<T>, io: &InnerOuter<T>) -> Result<InnerOuterReport> {
    let grid = default_grid(x.max_degree().max(io.inner.max_degree()).max(io.outer.max_degree()));
    let residual = circle_grid::<T>(grid).into_iter().fold(T::zero(), |acc, z| {
        acc.max(spectral_norm(&(io.inner.eval_disk(z) * io.outer.eval_disk(z) - x.eval_disk(z))))
    });
    let (num, _) = io.outer.to_common_denominator();
    let min_root = crate::spectral::det_min_root_modulus(&num)?;
    let f0 = io.outer.eval_disk(Complex::new(T::zero(), T::zero()));
    let herm = max_abs(&(&f0 - f0.adjoint()));
    let min_eig = crate::linalg::hermitian_eigenvalues(&f0)[0];
    Ok(InnerOuterReport {
        inner_defect: to_f64(inner_defect(&io.inner, grid)),
        product_residual: to_f64(residual),
        outer_min_det_root: min_root,
        outer_f0_min_eigenvalue: if herm > lit::<T>(1e-10) { f64::NEG_INFINITY } else { to_f64(min_eig) },
    })
}
