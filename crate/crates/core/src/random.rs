//! Seeded generators for test inputs: unitaries, Blaschke–Potapov products,
//! positive trigonometric matrix polynomials and rational inner functions.

use num_complex::Complex;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::factor::{ElementaryFactor, PotapovFactorization};
use crate::linalg::{identity, pinned, CMatrix, CVector};
use crate::matrix::RationalMatrixFunction;
use crate::poly_matrix::PolynomialMatrix;
use crate::scalar::{cabs, cis, lit, real, Scalar};
use crate::spectral::TrigMatrixPolynomial;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_gaussian<T: Scalar>(rng: &mut impl Rng) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(lit(re), lit(im))
}

pub fn unit_vector<T: Scalar>(n: usize, rng: &mut impl Rng) -> CVector<T> {
    let v = CVector::from_fn(n, |_, _| complex_gaussian::<T>(rng));
    let norm = v.norm();
    v / real(norm)
}

/// Haar-distributed unitary: QR of a Gaussian matrix with the phases of `R`'s diagonal removed.
pub fn unitary<T: Scalar>(n: usize, rng: &mut impl Rng) -> CMatrix<T> {
    let g = CMatrix::from_fn(n, n, |_, _| complex_gaussian::<T>(rng));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = CMatrix::from_fn(n, n, |i, j| {
        if i != j {
            Complex::new(T::zero(), T::zero())
        } else if cabs(r[(i, i)]) > T::zero() {
            r[(i, i)] / real(cabs(r[(i, i)]))
        } else {
            Complex::new(T::one(), T::zero())
        }
    });
    q * phases
}

/// Uniform point of the disk `|z| <= radius`.
pub fn disk_point<T: Scalar>(radius: f64, rng: &mut impl Rng) -> Complex<T> {
    let r = radius * rng.gen::<f64>().sqrt();
    let theta = std::f64::consts::TAU * rng.gen::<f64>();
    cis(lit::<T>(theta)) * real(lit::<T>(r))
}

pub fn elementary_factor<T: Scalar>(n: usize, max_radius: f64, rng: &mut impl Rng) -> ElementaryFactor<T> {
    ElementaryFactor::new(disk_point(max_radius, rng), unit_vector(n, rng)).expect("interior zero and unit direction")
}

/// `C·B_1⋯B_k` with Haar `C` and zeros uniform in `|a| <= 0.8`.
pub fn potapov_product<T: Scalar>(n: usize, factors: usize, rng: &mut impl Rng) -> PotapovFactorization<T> {
    let constant_unitary = unitary(n, rng);
    let factors = (0..factors).map(|_| elementary_factor(n, 0.8, rng)).collect();
    PotapovFactorization {
        constant_unitary,
        factors,
    }
}

pub fn inner_function<T: Scalar>(n: usize, factors: usize, rng: &mut impl Rng) -> Result<RationalMatrixFunction<T>> {
    potapov_product(n, factors, rng).to_rational()
}

/// `H*H + εI` on the circle for a Gaussian polynomial matrix `H` of degree `d`.
pub fn positive_trig<T: Scalar>(n: usize, d: usize, eps: f64, rng: &mut impl Rng) -> TrigMatrixPolynomial<T> {
    let coeffs: Vec<CMatrix<T>> = (0..=d)
        .map(|_| CMatrix::from_fn(n, n, |_, _| complex_gaussian::<T>(rng)))
        .collect();
    let h = PolynomialMatrix::from_coefficients(n, n, &coeffs);
    let (gram, offset) = PolynomialMatrix::circle_gram(&h, &h);
    let mut blocks: Vec<CMatrix<T>> = gram[offset..].to_vec();
    blocks[0] = (&blocks[0] + blocks[0].adjoint()) * real(lit::<T>(0.5)) + identity::<T>(n) * real(lit::<T>(eps));
    TrigMatrixPolynomial::new(blocks).expect("Hermitian by construction")
}

/// `U·(Φ; 0)` with Haar `U ∈ U(m)` and a random inner `Φ ∈ RIF(n, n)`.
pub fn rif<T: Scalar>(m: usize, n: usize, factors: usize, rng: &mut impl Rng) -> Result<RationalMatrixFunction<T>> {
    let phi = inner_function::<T>(n, factors, rng)?;
    let u = unitary::<T>(m, rng);
    let pin = RationalMatrixFunction::constant(&pinned::<T>(m, n));
    RationalMatrixFunction::constant(&u).mul(&pin)?.mul(&phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::isometry_defect;
    use crate::matrix::inner_defect;

    #[test]
    fn generators_are_deterministic_and_inner() {
        let a = rif::<f64>(3, 2, 2, &mut seeded(7)).unwrap();
        let b = rif::<f64>(3, 2, 2, &mut seeded(7)).unwrap();
        assert_eq!(a, b);
        assert!(inner_defect(&a, 256) < 1e-10);
        assert!(isometry_defect(&unitary::<f64>(4, &mut seeded(1))) < 1e-13);
        assert!(positive_trig::<f64>(3, 4, 0.1, &mut seeded(2)).min_eigenvalue(256) > 0.09);
    }
}
