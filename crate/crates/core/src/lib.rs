//! Rational inner matrix functions on the unit disk: polynomial and rational
//! arithmetic, spectral and Blaschke–Potapov factorizations, and explicit
//! homotopies inside RIF(m, n) to the pinned function `(I_n; 0)`.
//!
//! Everything is generic over the real scalar (`f32` or `f64`); the [`double`]
//! and [`single`] modules fix it.

pub mod error;
pub mod factor;
pub mod homotopy;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod poly;
pub mod poly_matrix;
pub mod random;
pub mod scalar;
pub mod spectral;
pub mod tolerance;

pub use error::{Result, RifError};
pub use scalar::Scalar;
pub use tolerance::Tolerances;

macro_rules! concrete {
    ($t:ty) => {
        pub type Complex = num_complex::Complex<$t>;
        pub type CMatrix = crate::linalg::CMatrix<$t>;
        pub type CVector = crate::linalg::CVector<$t>;
        pub type ComplexPolynomial = crate::poly::ComplexPolynomial<$t>;
        pub type RationalFunction = crate::poly::RationalFunction<$t>;
        pub type BlaschkeProduct = crate::poly::BlaschkeProduct<$t>;
        pub type PolynomialMatrix = crate::poly_matrix::PolynomialMatrix<$t>;
        pub type RationalMatrixFunction = crate::matrix::RationalMatrixFunction<$t>;
        pub type UnitaryPath = crate::matrix::UnitaryPath<$t>;
        pub type TrigMatrixPolynomial = crate::spectral::TrigMatrixPolynomial<$t>;
        pub type SpectralFactor = crate::spectral::SpectralFactor<$t>;
        pub type ElementaryFactor = crate::factor::ElementaryFactor<$t>;
        pub type PotapovFactorization = crate::factor::PotapovFactorization<$t>;
        pub type InnerOuter = crate::factor::InnerOuter<$t>;
        pub type PathSegment = crate::homotopy::PathSegment<$t>;
        pub type HomotopyPath = crate::homotopy::HomotopyPath<$t>;
        pub type Step1 = crate::homotopy::Step1<$t>;
    };
}

/// Double-precision instantiations.
pub mod double {
    concrete!(f64);
}

/// Single-precision instantiations.
pub mod single {
    concrete!(f32);
}
