//! Dense complex linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen, SVD};
use num_complex::Complex;

use crate::error::{Result, RifError};
use crate::scalar::{cabs, cone, czero, lit, real, to_f64, Scalar};

pub type CMatrix<T> = DMatrix<Complex<T>>;
pub type CVector<T> = DVector<Complex<T>>;

pub fn identity<T: Scalar>(n: usize) -> CMatrix<T> {
    CMatrix::identity(n, n)
}

/// `(I_n; 0)` of shape m×n.
pub fn pinned<T: Scalar>(m: usize, n: usize) -> CMatrix<T> {
    CMatrix::from_fn(m, n, |i, j| if i == j { cone() } else { czero() })
}

/// Embeds a k×k block into the top-left corner of an m×m identity.
pub fn embed_top_left<T: Scalar>(block: &CMatrix<T>, m: usize) -> CMatrix<T> {
    let mut out = identity::<T>(m);
    let k = block.nrows();
    out.view_mut((0, 0), (k, k)).copy_from(block);
    out
}

pub fn singular_values<T: Scalar>(m: &CMatrix<T>) -> Vec<T> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<T> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    s
}

/// Largest singular value.
pub fn spectral_norm<T: Scalar>(m: &CMatrix<T>) -> T {
    singular_values(m).first().copied().unwrap_or_else(T::zero)
}

/// Eigenvalues of a Hermitian matrix (the input is symmetrized first), ascending.
pub fn hermitian_eigenvalues<T: Scalar>(m: &CMatrix<T>) -> Vec<T> {
    let h = (m + m.adjoint()) * real(lit::<T>(0.5));
    let mut ev: Vec<T> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    ev
}

/// Spectral norm of `M*M − I`, the pointwise innerness defect.
pub fn isometry_defect<T: Scalar>(m: &CMatrix<T>) -> T {
    let g = m.adjoint() * m - identity::<T>(m.ncols());
    hermitian_eigenvalues(&g)
        .into_iter()
        .fold(T::zero(), |acc, e| acc.max(e.abs()))
}

/// Parlett–Reinsch diagonal balancing (radix 2), in place.
pub fn balance<T: Scalar>(m: &mut CMatrix<T>) {
    let n = m.nrows();
    let radix = lit::<T>(2.0);
    let sqrdx = radix * radix;
    let mut done = false;
    let mut sweeps = 0;
    while !done && sweeps < 100 {
        done = true;
        sweeps += 1;
        for i in 0..n {
            let mut c = T::zero();
            let mut r = T::zero();
            for j in 0..n {
                if j != i {
                    c += cabs(m[(j, i)]);
                    r += cabs(m[(i, j)]);
                }
            }
            if c == T::zero() || r == T::zero() {
                continue;
            }
            let s = c + r;
            let mut g = r / radix;
            let mut f = T::one();
            let mut cc = c;
            while cc < g {
                f *= radix;
                cc *= sqrdx;
            }
            g = r * radix;
            while cc > g {
                f /= radix;
                cc /= sqrdx;
            }
            if (cc + r / f) / f < lit::<T>(0.95) * s {
                done = false;
                let finv = T::one() / f;
                for j in 0..n {
                    m[(i, j)] = m[(i, j)].scale(finv);
                }
                for j in 0..n {
                    m[(j, i)] = m[(j, i)].scale(f);
                }
            }
        }
    }
}

/// Eigenvalues of a general complex matrix from its Schur form.
pub fn eigenvalues<T: Scalar>(m: CMatrix<T>) -> Result<Vec<Complex<T>>> {
    let n = m.nrows();
    let schur = Schur::try_new(m, T::default_epsilon(), 10_000).ok_or_else(|| {
        RifError::ConvergenceFailure {
            residual: f64::NAN,
            context: " (Schur iteration)".into(),
        }
    })?;
    let (_, t) = schur.unpack();
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

/// Complex Schur decomposition `m = Z T Z*`.
pub fn schur<T: Scalar>(m: CMatrix<T>) -> Result<(CMatrix<T>, CMatrix<T>)> {
    Schur::try_new(m, T::default_epsilon(), 10_000)
        .map(|s| s.unpack())
        .ok_or_else(|| RifError::ConvergenceFailure {
            residual: f64::NAN,
            context: " (Schur iteration)".into(),
        })
}

/// Polar decomposition `m = U P` with `U` unitary and `P` Hermitian positive semidefinite.
pub fn polar<T: Scalar>(m: &CMatrix<T>) -> (CMatrix<T>, CMatrix<T>) {
    let svd = SVD::new(m.clone(), true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V*");
    let sigma = CMatrix::from_diagonal(&svd.singular_values.map(real));
    let unitary = &u * &v_t;
    let positive = v_t.adjoint() * sigma * &v_t;
    (unitary, (&positive + positive.adjoint()) * real(lit::<T>(0.5)))
}

/// Unit vector spanning (a deterministic direction of) the numerical kernel of `m`.
///
/// Returns the right-singular vector of the smallest singular value. When the
/// smallest singular value is repeated, the projection of the standard basis
/// vector with the largest component in that subspace is used (lowest index on
/// ties). The result is phased so its largest-modulus entry is real positive.
pub fn kernel_vector<T: Scalar>(m: &CMatrix<T>, tol: T) -> Result<CVector<T>> {
    let n = m.ncols();
    if n == 0 {
        return Err(RifError::InvalidArgument("empty matrix has no kernel".into()));
    }
    let padded = if m.nrows() < n {
        let mut p = CMatrix::zeros(n, n);
        p.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = SVD::new(padded, false, true);
    let v_t = svd.v_t.expect("requested V*");
    let sv: Vec<T> = svd.singular_values.iter().copied().collect();
    let smax = sv.iter().copied().fold(T::zero(), T::max);
    let smin = sv.iter().copied().fold(T::max_value().unwrap(), T::min);
    if smin > tol {
        return Err(RifError::NoKernel { sigma: to_f64(smin) });
    }
    let tie = smin + lit::<T>(1e-12) * T::one().max(smax);
    let basis: Vec<CVector<T>> = sv
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= tie)
        .map(|(k, _)| v_t.row(k).adjoint())
        .collect();
    let weight = |k: usize| basis.iter().fold(T::zero(), |acc, v| acc + v[k].norm_sqr());
    let mut best = 0;
    let mut best_w = weight(0);
    for k in 1..n {
        let w = weight(k);
        if w > best_w + lit::<T>(1e-12) {
            best = k;
            best_w = w;
        }
    }
    let mut v = CVector::zeros(n);
    for b in &basis {
        v += b * b[best].conj();
    }
    let norm = v.norm();
    v /= real(norm);
    Ok(phase_normalize(v))
}

/// Rotates `v` so its largest-modulus entry (lowest index on ties) is real positive.
pub fn phase_normalize<T: Scalar>(mut v: CVector<T>) -> CVector<T> {
    let mut idx = 0;
    let mut best = T::zero();
    for (k, c) in v.iter().enumerate() {
        let a = cabs(*c);
        if a > best + lit::<T>(1e-12) {
            best = a;
            idx = k;
        }
    }
    if best > T::zero() {
        let phase = v[idx].conj() / real(best);
        v *= phase;
        v[idx] = real(cabs(v[idx]));
    }
    v
}

/// Largest entry modulus, used as a scale for relative thresholds.
pub fn max_abs<T: Scalar>(m: &CMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, c| acc.max(cabs(*c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;

    fn m2(a: [[f64; 2]; 2]) -> CMatrix<f64> {
        CMatrix::from_fn(2, 2, |i, j| Complex::new(a[i][j], 0.0))
    }

    #[test]
    fn kernel_of_diag() {
        let v = kernel_vector(&m2([[1.0, 0.0], [0.0, 0.0]]), 1e-7).unwrap();
        assert!((v[1] - cone::<f64>()).norm() < 1e-14 && v[0].norm() < 1e-14);
    }

    #[test]
    fn kernel_of_zero_prefers_lowest_index() {
        let v = kernel_vector(&m2([[0.0, 0.0], [0.0, 0.0]]), 1e-7).unwrap();
        assert!((v[0] - cone::<f64>()).norm() < 1e-14 && v[1].norm() < 1e-14);
    }

    #[test]
    fn kernel_of_nilpotent() {
        let v = kernel_vector(&m2([[0.0, 0.0], [1.0, 0.0]]), 1e-7).unwrap();
        assert!((v[1] - cone::<f64>()).norm() < 1e-14 && v[0].norm() < 1e-14);
    }

    #[test]
    fn kernel_missing() {
        let err = kernel_vector(&identity::<f64>(2), 1e-7).unwrap_err();
        assert!(matches!(err, RifError::NoKernel { .. }));
    }

    #[test]
    fn kernel_phase_is_real_positive() {
        // kernel of [[1, i]] is (−i, 1)/√2 → phased to (1, i)/√2 form with a real positive largest entry
        let m = CMatrix::from_row_slice(1, 2, &[cplx(1.0f64, 0.0), cplx(0.0, 1.0)]);
        let v = kernel_vector(&m, 1e-7).unwrap();
        assert!((&m * &v).norm() < 1e-14);
        assert!(v[0].im.abs() < 1e-14 && v[0].re > 0.0);
    }

    #[test]
    fn polar_recovers_factors() {
        let m = CMatrix::from_row_slice(2, 2, &[cplx(1.0f64, 2.0), cplx(0.5, 0.0), cplx(-0.3, 0.1), cplx(2.0, -1.0)]);
        let (u, p) = polar(&m);
        assert!((&u * &p - &m).norm() < 1e-12);
        assert!(isometry_defect(&u) < 1e-12);
        assert!(hermitian_eigenvalues(&p)[0] > 0.0);
    }

    #[test]
    fn balanced_eigenvalues_match() {
        let mut m = m2([[1.0, 1e6], [1e-6, 2.0]]);
        balance(&mut m);
        let mut ev = eigenvalues(m).unwrap();
        ev.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        // eigenvalues of [[1, 1e6], [1e-6, 2]]: (3 ± √5)/2
        assert!((ev[0].re - (3.0 - 5f64.sqrt()) / 2.0f64).abs() < 1e-12);
        assert!((ev[1].re - (3.0 + 5f64.sqrt()) / 2.0f64).abs() < 1e-12);
    }
}
