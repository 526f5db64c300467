//! Matrix-valued rational functions on the unit disk.
//!
//! Innerness, sup-norm and winding are all measured on a uniform grid of the
//! unit circle; by the maximum principle the boundary carries the sup-norm of a
//! disk-analytic function.

use num_complex::Complex;

use crate::error::{Result, RifError};
use crate::linalg::{self, isometry_defect, schur, singular_values, spectral_norm, CMatrix};
use crate::poly::{match_roots, ComplexPolynomial, RationalFunction};
use crate::poly_matrix::PolynomialMatrix;
use crate::scalar::{cabs, carg, circle_grid, cis, cone, czero, lit, real, to_f64, Scalar};
use crate::tolerance::{Tolerances, COEFF_DROP, ROOT_MATCH};

/// An m×n matrix of rational functions with no poles in the closed unit disk.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalMatrixFunction<T: Scalar> {
    rows: usize,
    cols: usize,
    entries: Vec<RationalFunction<T>>,
}

impl<T: Scalar> RationalMatrixFunction<T> {
    /// Validates the shape and that every entry is pole-free in `|z| <= 1 + 1e-9`.
    pub fn new(rows: usize, cols: usize, entries: Vec<RationalFunction<T>>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(RifError::InvalidArgument("matrix dimensions must be positive".into()));
        }
        if entries.len() != rows * cols {
            return Err(RifError::InvalidArgument(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        let margin = lit::<T>(Tolerances::for_scalar::<T>().root);
        for e in &entries {
            if let Some(p) = e.poles().into_iter().find(|p| cabs(*p) <= T::one() + margin) {
                return Err(RifError::PoleInDisk {
                    modulus: to_f64(cabs(p)),
                });
            }
        }
        Ok(Self { rows, cols, entries })
    }

    pub(crate) fn new_unchecked(rows: usize, cols: usize, entries: Vec<RationalFunction<T>>) -> Self {
        debug_assert_eq!(entries.len(), rows * cols);
        Self { rows, cols, entries }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> RationalFunction<T>) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self::new(rows, cols, entries)
    }

    pub fn constant(m: &CMatrix<T>) -> Self {
        let entries = m.transpose().iter().map(|c| RationalFunction::constant(*c)).collect();
        Self::new_unchecked(m.nrows(), m.ncols(), entries)
    }

    pub fn identity(n: usize) -> Self {
        Self::constant(&linalg::identity(n))
    }

    /// `(I_n; 0)` of shape m×n.
    pub fn pinned(m: usize, n: usize) -> Self {
        Self::constant(&linalg::pinned(m, n))
    }

    /// `N(z)/q(z)` entrywise, with coefficients below `1e-12` of the matrix scale removed
    /// and each entry reduced.
    pub fn from_polynomial_matrix(num: &PolynomialMatrix<T>, den: &ComplexPolynomial<T>) -> Result<Self> {
        let num = num.pruned(lit::<T>(COEFF_DROP));
        let mut entries = Vec::with_capacity(num.rows() * num.cols());
        for p in num.entries() {
            entries.push(RationalFunction::new(p.clone(), den.clone())?);
        }
        Self::new(num.rows(), num.cols(), entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &RationalFunction<T> {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[RationalFunction<T>] {
        &self.entries
    }

    pub fn max_degree(&self) -> usize {
        self.entries.iter().map(|e| e.max_degree()).max().unwrap_or(0)
    }

    /// Entrywise evaluation; fails only at a pole.
    pub fn eval(&self, z: Complex<T>) -> Result<CMatrix<T>> {
        let mut out = CMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self.entry(i, j).eval(z)?;
            }
        }
        Ok(out)
    }

    /// Evaluation for `|z| <= 1`, where disk analyticity rules out poles.
    pub fn eval_disk(&self, z: Complex<T>) -> CMatrix<T> {
        CMatrix::from_fn(self.rows, self.cols, |i, j| self.entry(i, j).eval_unchecked(z))
    }

    /// Rows `start..start+count`.
    pub fn row_block(&self, start: usize, count: usize) -> Self {
        let entries = (start..start + count)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .map(|(i, j)| self.entry(i, j).clone())
            .collect();
        Self::new_unchecked(count, self.cols, entries)
    }

    /// Stacks `top` over `bottom`.
    pub fn vstack(top: &Self, bottom: &Self) -> Result<Self> {
        if top.cols != bottom.cols {
            return Err(RifError::InvalidArgument("vstack column mismatch".into()));
        }
        let entries = top.entries.iter().chain(&bottom.entries).cloned().collect();
        Ok(Self::new_unchecked(top.rows + bottom.rows, top.cols, entries))
    }

    /// Row `i` of the result is row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        let entries = perm
            .iter()
            .flat_map(|&r| (0..self.cols).map(move |j| (r, j)))
            .map(|(i, j)| self.entry(i, j).clone())
            .collect();
        Self::new_unchecked(self.rows, self.cols, entries)
    }

    /// `N/q` with `q` the least common denominator and `N` polynomial.
    pub fn to_common_denominator(&self) -> (PolynomialMatrix<T>, ComplexPolynomial<T>) {
        let q = lcm_denominator(self.entries.iter().map(|e| e.den()));
        let num = PolynomialMatrix::from_fn(self.rows, self.cols, |i, j| {
            let e = self.entry(i, j);
            cofactor(e, &q)
        });
        (num, q)
    }

    /// `U · self` for a constant matrix `U`.
    pub fn left_mul_constant(&self, u: &CMatrix<T>) -> Result<Self> {
        let (num, q) = self.to_common_denominator();
        Self::from_polynomial_matrix(&num.left_mul_constant(u), &q)
    }

    /// `self · V` for a constant matrix `V`.
    pub fn right_mul_constant(&self, v: &CMatrix<T>) -> Result<Self> {
        let (num, q) = self.to_common_denominator();
        Self::from_polynomial_matrix(&num.right_mul_constant(v), &q)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let (a, qa) = self.to_common_denominator();
        let (b, qb) = other.to_common_denominator();
        Self::from_polynomial_matrix(&a.mul(&b)?, &(&qa * &qb))
    }

    /// `det` as a rational function `det N / q^n`.
    pub fn det(&self) -> Result<RationalFunction<T>> {
        if self.rows != self.cols {
            return Err(RifError::InvalidArgument("determinant of a non-square matrix".into()));
        }
        let (num, q) = self.to_common_denominator();
        let den = (1..self.rows).fold(q.clone(), |acc, _| &acc * &q);
        RationalFunction::new(num.det()?, den)
    }

    /// Max spectral-norm difference against `other` on a circle grid.
    pub fn grid_distance(&self, other: &Self, grid_size: usize) -> T {
        circle_grid::<T>(grid_size).into_iter().fold(T::zero(), |acc, z| {
            acc.max(spectral_norm(&(self.eval_disk(z) - other.eval_disk(z))))
        })
    }
}

/// Least common multiple of disk-analytic denominators, built from the union of their
/// root multisets and normalized to `p(0) = 1`.
fn lcm_denominator<'a, T: Scalar>(dens: impl Iterator<Item = &'a ComplexPolynomial<T>>) -> ComplexPolynomial<T> {
    let tol = lit::<T>(ROOT_MATCH);
    let dens: Vec<&ComplexPolynomial<T>> = dens.collect();
    let mut roots: Vec<Complex<T>> = Vec::new();
    for d in &dens {
        let r = d.roots().unwrap_or_default();
        let mut used = vec![false; r.len()];
        for (i, _) in match_roots(&r, &roots, tol) {
            used[i] = true;
        }
        roots.extend(r.iter().zip(&used).filter(|(_, u)| !**u).map(|(x, _)| *x));
    }
    // a denominator of full degree already is the union; reuse its exact coefficients
    let p = dens
        .iter()
        .find(|d| d.degree().unwrap_or(0) == roots.len())
        .map(|d| (*d).clone())
        .unwrap_or_else(|| ComplexPolynomial::from_roots(&roots, cone()));
    let p0 = p.coeff(0);
    if cabs(p0) == T::zero() {
        return p;
    }
    p.scale(cone::<T>() / p0)
}

/// `num · (q / den)` for a denominator `den` dividing `q`.
fn cofactor<T: Scalar>(e: &RationalFunction<T>, q: &ComplexPolynomial<T>) -> ComplexPolynomial<T> {
    let dq = q.degree().unwrap_or(0);
    let dd = e.den().degree().unwrap_or(0);
    if dd == 0 {
        return e.num().scale(cone::<T>() / e.den().coeff(0)) * q.clone();
    }
    let quotient = q
        .div_series(e.den(), dq.saturating_sub(dd))
        .unwrap_or_else(|_| q.div_rem(e.den()).expect("nonzero denominator").0);
    e.num() * &quotient
}

/// Entrywise evaluation `W(z)`.
pub fn eval_matrix<T: Scalar>(w: &RationalMatrixFunction<T>, z: Complex<T>) -> Result<CMatrix<T>> {
    w.eval(z)
}

/// Grid maximum of `‖W(e^{iθ})*W(e^{iθ}) − I_n‖₂`.
pub fn inner_defect<T: Scalar>(w: &RationalMatrixFunction<T>, grid_size: usize) -> T {
    circle_grid::<T>(grid_size)
        .into_iter()
        .fold(T::zero(), |acc, z| acc.max(isometry_defect(&w.eval_disk(z))))
}

/// Grid maximum of the largest singular value on the circle.
pub fn sup_norm<T: Scalar>(w: &RationalMatrixFunction<T>, grid_size: usize) -> T {
    circle_grid::<T>(grid_size)
        .into_iter()
        .fold(T::zero(), |acc, z| acc.max(spectral_norm(&w.eval_disk(z))))
}

/// Winding number about the origin of a closed sampled curve, by phase unwrapping.
///
/// Fails when a sample has modulus below `min_modulus` or consecutive samples turn
/// by more than `3π/4`.
pub fn winding_of_samples<T: Scalar>(values: &[Complex<T>], min_modulus: T) -> Result<i64> {
    let smallest = values.iter().fold(T::max_value().unwrap(), |acc, v| acc.min(cabs(*v)));
    if values.is_empty() || smallest < min_modulus {
        return Err(RifError::IllConditionedWinding {
            min_modulus: to_f64(smallest),
        });
    }
    let limit = lit::<T>(0.75) * T::pi();
    let mut total = T::zero();
    for k in 0..values.len() {
        let next = values[(k + 1) % values.len()];
        let step = carg(next * values[k].conj());
        if step.abs() > limit {
            return Err(RifError::IllConditionedWinding {
                min_modulus: to_f64(smallest),
            });
        }
        total += step;
    }
    Ok(to_f64(total / T::two_pi()).round() as i64)
}

/// Winding number of `f(e^{iθ})` about the origin.
pub fn winding_number<T: Scalar>(f: &RationalFunction<T>, grid_size: usize, tol: &Tolerances) -> Result<i64> {
    let values: Vec<Complex<T>> = circle_grid::<T>(grid_size)
        .into_iter()
        .map(|z| f.eval_unchecked(z))
        .collect();
    winding_of_samples(&values, lit::<T>(100.0 * tol.inner))
}

/// Winding number of `det W(e^{iθ})` computed pointwise.
pub fn det_winding<T: Scalar>(w: &RationalMatrixFunction<T>, grid_size: usize, tol: &Tolerances) -> Result<i64> {
    if w.rows() != w.cols() {
        return Err(RifError::InvalidArgument("winding of det needs a square matrix".into()));
    }
    let values: Vec<Complex<T>> = circle_grid::<T>(grid_size)
        .into_iter()
        .map(|z| w.eval_disk(z).determinant())
        .collect();
    winding_of_samples(&values, lit::<T>(100.0 * tol.inner))
}

/// Chooses `n` linearly independent rows of `W(z0)` by row-pivoted orthogonal
/// triangularization (largest residual norm first, lowest index on ties within
/// `1e-12`). The selected rows come first, each group in ascending original order.
pub fn select_full_rank_rows<T: Scalar>(
    w: &RationalMatrixFunction<T>,
    z0: Complex<T>,
    tol: &Tolerances,
) -> Result<Vec<usize>> {
    let value = w.eval(z0)?;
    let (m, n) = (w.rows(), w.cols());
    if m < n {
        return Err(RifError::NotInner(format!("{m}x{n} cannot have rank {n}")));
    }
    let mut residual: Vec<CMatrix<T>> = (0..m).map(|i| value.rows(i, 1).into_owned()).collect();
    let mut chosen = vec![false; m];
    let tie = lit::<T>(1e-12);
    for _ in 0..n {
        let mut pick: Option<(usize, T)> = None;
        for (i, r) in residual.iter().enumerate() {
            if chosen[i] {
                continue;
            }
            let norm = r.norm();
            match pick {
                Some((_, best)) if norm <= best + tie => {}
                _ => pick = Some((i, norm)),
            }
        }
        let (i, norm) = pick.expect("m >= n leaves a candidate");
        if norm <= lit::<T>(tol.sigma_min) {
            return Err(RifError::NotInner(format!(
                "W(z0) has rank below {n} (pivot {:e})",
                to_f64(norm)
            )));
        }
        chosen[i] = true;
        let q = &residual[i] / real(norm);
        for (k, r) in residual.iter_mut().enumerate() {
            if !chosen[k] {
                let c = (&*r * q.adjoint())[(0, 0)];
                *r -= &q * c;
            }
        }
    }
    let perm: Vec<usize> = (0..m)
        .filter(|i| chosen[*i])
        .chain((0..m).filter(|i| !chosen[*i]))
        .collect();
    let lead = CMatrix::from_fn(n, n, |i, j| value[(perm[i], j)]);
    let smin = singular_values(&lead).last().copied().unwrap_or_else(T::zero);
    if smin < lit::<T>(tol.sigma_min) {
        return Err(RifError::NotInner(format!(
            "leading block has smallest singular value {:e}",
            to_f64(smin)
        )));
    }
    Ok(perm)
}

/// Permutation matrix `P` with `(P W)_i = W_{perm[i]}`.
pub fn permutation_matrix<T: Scalar>(perm: &[usize]) -> CMatrix<T> {
    let m = perm.len();
    CMatrix::from_fn(m, m, |i, j| if perm[i] == j { cone() } else { czero() })
}

/// Minimal common denominator `p` (with `p(0) = 1`) of the entries of `Y` and the
/// polynomial matrix `Ỹ = p·Y`.
pub fn common_denominator<T: Scalar>(y: &RationalMatrixFunction<T>) -> (ComplexPolynomial<T>, PolynomialMatrix<T>) {
    let (num, p) = y.to_common_denominator();
    (p, num)
}

/// Closed-form path `t ↦ V·diag(e^{itλ_j})·V*` from `I` to a unitary `U`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryPath<T: Scalar> {
    eigenvectors: CMatrix<T>,
    angles: Vec<T>,
}

impl<T: Scalar> UnitaryPath<T> {
    pub fn eigenvectors(&self) -> &CMatrix<T> {
        &self.eigenvectors
    }

    /// Eigen-angles in `(−π, π]`.
    pub fn angles(&self) -> &[T] {
        &self.angles
    }

    pub fn size(&self) -> usize {
        self.angles.len()
    }

    pub fn value(&self, t: T) -> CMatrix<T> {
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.angles.len(),
            self.angles.iter().map(|&a| cis(a * t)),
        ));
        &self.eigenvectors * d * self.eigenvectors.adjoint()
    }

    /// True when every eigen-angle vanishes (the path is constantly `I`).
    pub fn is_identity(&self) -> bool {
        self.angles.iter().all(|a| a.abs() <= lit::<T>(1e-14))
    }
}

/// Eigendecomposition of a unitary via its (diagonal) complex Schur form.
pub fn unitary_path<T: Scalar>(u: &CMatrix<T>) -> Result<UnitaryPath<T>> {
    if !u.is_square() || u.nrows() == 0 {
        return Err(RifError::InvalidArgument("unitary_path needs a nonempty square matrix".into()));
    }
    let defect = isometry_defect(u);
    if defect > lit::<T>(1e-10) {
        return Err(RifError::InvalidArgument(format!(
            "matrix is not unitary (‖U*U − I‖ = {:e})",
            to_f64(defect)
        )));
    }
    let n = u.nrows();
    let (z, t) = schur(u.clone())?;
    let angles = (0..n)
        .map(|i| {
            let a = carg(t[(i, i)]);
            if a <= -T::pi() + lit::<T>(1e-15) {
                T::pi()
            } else {
                a
            }
        })
        .collect();
    Ok(UnitaryPath { eigenvectors: z, angles })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::BlaschkeProduct;
    use crate::scalar::cplx;

    type RF = RationalFunction<f64>;
    type P = ComplexPolynomial<f64>;
    type W = RationalMatrixFunction<f64>;

    fn fixture_a() -> W {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        W::new(
            2,
            1,
            vec![RF::from_poly(P::from_real(&[0.0, s])), RF::constant(cplx(s, 0.0))],
        )
        .unwrap()
    }

    fn poly(c: &[f64]) -> RF {
        RF::from_poly(P::from_real(c))
    }

    #[test]
    fn eval_examples() {
        let v = fixture_a().eval(cplx(1.0, 0.0)).unwrap();
        assert!((v[(0, 0)].re - 0.70711).abs() < 1e-5 && (v[(1, 0)].re - 0.70711).abs() < 1e-5);
        let pinned = W::pinned(3, 2).eval(cplx(0.3, 0.8)).unwrap();
        assert_eq!(pinned, linalg::pinned(3, 2));
        let zi = W::from_fn(2, 2, |i, j| if i == j { poly(&[0.0, 1.0]) } else { RF::zero() }).unwrap();
        let v = zi.eval(cplx(0.0, 1.0)).unwrap();
        assert_eq!(v, linalg::identity::<f64>(2) * cplx(0.0, 1.0));
    }

    #[test]
    fn pole_inside_disk_rejected() {
        let bad = RF::new(P::one(), P::from_real(&[1.0, -2.0])).unwrap();
        assert!(matches!(W::new(1, 1, vec![bad]), Err(RifError::PoleInDisk { .. })));
    }

    #[test]
    fn inner_defect_examples() {
        assert!(inner_defect(&fixture_a(), 512) < 1e-12);
        assert_eq!(inner_defect(&W::pinned(3, 2), 64), 0.0);
        let half = W::new(2, 1, vec![poly(&[0.0, 0.5]), RF::zero()]).unwrap();
        assert!((inner_defect(&half, 512) - 0.75).abs() < 1e-12);
    }

    #[test]
    fn sup_norm_examples() {
        assert!((sup_norm(&fixture_a(), 512) - 1.0).abs() < 1e-10);
        assert!((sup_norm(&W::identity(3), 16) - 1.0).abs() < 1e-14);
        let half = W::new(2, 1, vec![poly(&[0.0, 0.5]), RF::zero()]).unwrap();
        assert!((sup_norm(&half, 512) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn winding_examples() {
        let tol = Tolerances::default();
        assert_eq!(winding_number(&poly(&[0.0, 0.0, 0.0, 1.0]), 512, &tol).unwrap(), 3);
        let b = BlaschkeProduct::factor(cplx(0.5, 0.0)).unwrap().to_rational();
        assert_eq!(winding_number(&b, 512, &tol).unwrap(), 1);
        assert_eq!(winding_number(&poly(&[1.0, -0.5]), 512, &tol).unwrap(), 0);
        let err = winding_number(&poly(&[1.0, 1.0]), 512, &tol).unwrap_err();
        assert!(matches!(err, RifError::IllConditionedWinding { .. }));
    }

    #[test]
    fn row_selection_examples() {
        let tol = Tolerances::default();
        let one = cplx(1.0, 0.0);
        let w = W::new(2, 1, vec![RF::zero(), RF::one()]).unwrap();
        assert_eq!(select_full_rank_rows(&w, one, &tol).unwrap(), vec![1, 0]);
        assert_eq!(select_full_rank_rows(&fixture_a(), one, &tol).unwrap(), vec![0, 1]);
        assert_eq!(select_full_rank_rows(&W::pinned(3, 2), one, &tol).unwrap(), vec![0, 1, 2]);
        let zero = W::new(2, 1, vec![RF::zero(), RF::zero()]).unwrap();
        assert!(matches!(select_full_rank_rows(&zero, one, &tol), Err(RifError::NotInner(_))));
    }

    #[test]
    fn common_denominator_examples() {
        let (p, yt) = common_denominator(&W::constant(&CMatrix::from_element(1, 1, cplx(0.5, 0.0))));
        assert_eq!(p, P::one());
        assert_eq!(yt.entry(0, 0).coeff(0), cplx(0.5, 0.0));

        let b = RF::new(P::from_real(&[0.5]), P::from_real(&[1.0, -0.5])).unwrap();
        let (p, yt) = common_denominator(&W::new(1, 1, vec![b]).unwrap());
        assert!((p.coeff(0) - cplx(1.0, 0.0)).norm() < 1e-15 && (p.coeff(1) - cplx(-0.5, 0.0)).norm() < 1e-15);
        assert_eq!(yt.entry(0, 0).degree(), Some(0));
        assert!((yt.entry(0, 0).coeff(0) - cplx(0.5, 0.0)).norm() < 1e-15);

        let e1 = RF::new(P::one(), P::from_real(&[1.0, -0.5])).unwrap();
        let e2 = RF::new(P::one(), P::from_real(&[1.0, -1.0 / 3.0])).unwrap();
        let (p, _) = common_denominator(&W::new(2, 1, vec![e1, e2]).unwrap());
        assert_eq!(p.degree(), Some(2));
        let expect = &P::from_real(&[1.0, -0.5]) * &P::from_real(&[1.0, -1.0 / 3.0]);
        for k in 0..3 {
            assert!((p.coeff(k) - expect.coeff(k)).norm() < 1e-14);
        }
    }

    #[test]
    fn shared_denominator_is_not_duplicated() {
        let d = P::from_real(&[1.0, -0.5]);
        let e1 = RF::new(P::from_real(&[0.2, 1.0]), d.clone()).unwrap();
        let e2 = RF::new(P::from_real(&[0.7]), d.clone()).unwrap();
        let (p, _) = common_denominator(&W::new(2, 1, vec![e1, e2]).unwrap());
        assert_eq!(p, d);
    }

    #[test]
    fn unitary_path_examples() {
        let id = unitary_path(&linalg::identity::<f64>(3)).unwrap();
        assert!(id.is_identity());
        assert!((id.value(0.7) - linalg::identity::<f64>(3)).norm() < 1e-15);

        let mut d = linalg::identity::<f64>(2);
        d[(1, 1)] = cplx(-1.0, 0.0);
        let p = unitary_path(&d).unwrap();
        let half = p.value(0.5);
        assert!((half[(0, 0)] - cplx(1.0, 0.0)).norm() < 1e-14);
        assert!((half[(1, 1)] - cplx(0.0, 1.0)).norm() < 1e-14);

        let swap = permutation_matrix::<f64>(&[1, 0]);
        let p = unitary_path(&swap).unwrap();
        assert!((p.value(1.0) - &swap).norm() < 1e-12);
        assert!((p.value(0.0) - linalg::identity::<f64>(2)).norm() < 1e-14);
        assert!(isometry_defect(&p.value(0.37)) < 1e-12);

        assert!(unitary_path(&(linalg::identity::<f64>(2) * cplx(1.1, 0.0))).is_err());
    }

    #[test]
    fn det_of_rational_matrix() {
        let b = BlaschkeProduct::factor(cplx(0.5, 0.0)).unwrap().to_rational();
        let w = W::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => b.clone(),
            (1, 1) => poly(&[0.0, 1.0]),
            _ => RF::zero(),
        })
        .unwrap();
        let d = w.det().unwrap();
        let tol = Tolerances::default();
        assert_eq!(winding_number(&d, 512, &tol).unwrap(), 2);
        assert_eq!(det_winding(&w, 512, &tol).unwrap(), 2);
    }
}
