//! JSON documents for rational matrix functions, trigonometric and polynomial
//! matrices, and Potapov factorizations. Complex numbers are `[re, im]` pairs,
//! coefficient lists ascend in degree, matrices are row-major nested arrays.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Result, RifError};
use crate::factor::{ElementaryFactor, PotapovFactorization};
use crate::linalg::{CMatrix, CVector};
use crate::matrix::RationalMatrixFunction;
use crate::poly::{ComplexPolynomial, RationalFunction};
use crate::poly_matrix::PolynomialMatrix;
use crate::scalar::{lit, to_f64, Scalar};
use crate::spectral::TrigMatrixPolynomial;

pub type ComplexJson = [f64; 2];
pub type MatrixJson = Vec<Vec<ComplexJson>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalJson {
    pub num: Vec<ComplexJson>,
    pub den: Vec<ComplexJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalMatrixJson {
    pub m: usize,
    pub n: usize,
    pub entries: Vec<Vec<RationalJson>>,
}

/// `Q_0..Q_d`; the negative-index blocks follow from `Q_{−k} = Q_k*`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigJson {
    pub n: usize,
    pub d: usize,
    pub blocks: Vec<MatrixJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialMatrixJson {
    pub m: usize,
    pub n: usize,
    pub d: usize,
    pub coefficients: Vec<MatrixJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementaryFactorJson {
    pub zero: ComplexJson,
    pub direction: Vec<ComplexJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotapovJson {
    pub n: usize,
    pub constant_unitary: MatrixJson,
    pub factors: Vec<ElementaryFactorJson>,
}

fn complex_out<T: Scalar>(c: Complex<T>) -> ComplexJson {
    [to_f64(c.re), to_f64(c.im)]
}

fn complex_in<T: Scalar>(c: &ComplexJson) -> Result<Complex<T>> {
    if !c[0].is_finite() || !c[1].is_finite() {
        return Err(RifError::Parse("non-finite coefficient".into()));
    }
    Ok(Complex::new(lit(c[0]), lit(c[1])))
}

fn poly_out<T: Scalar>(p: &ComplexPolynomial<T>) -> Vec<ComplexJson> {
    if p.coeffs().is_empty() {
        return vec![[0.0, 0.0]];
    }
    p.coeffs().iter().map(|c| complex_out(*c)).collect()
}

fn poly_in<T: Scalar>(coeffs: &[ComplexJson]) -> Result<ComplexPolynomial<T>> {
    Ok(ComplexPolynomial::new(coeffs.iter().map(complex_in).collect::<Result<_>>()?))
}

pub fn matrix_to_json<T: Scalar>(m: &CMatrix<T>) -> MatrixJson {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| complex_out(m[(i, j)])).collect())
        .collect()
}

pub fn matrix_from_json<T: Scalar>(m: &MatrixJson, rows: usize, cols: usize) -> Result<CMatrix<T>> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(RifError::Parse(format!("expected a {rows}x{cols} matrix")));
    }
    let mut out = CMatrix::zeros(rows, cols);
    for (i, row) in m.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            out[(i, j)] = complex_in(c)?;
        }
    }
    Ok(out)
}

pub fn rational_matrix_to_json<T: Scalar>(w: &RationalMatrixFunction<T>) -> RationalMatrixJson {
    RationalMatrixJson {
        m: w.rows(),
        n: w.cols(),
        entries: (0..w.rows())
            .map(|i| {
                (0..w.cols())
                    .map(|j| {
                        let e = w.entry(i, j);
                        RationalJson {
                            num: poly_out(e.num()),
                            den: poly_out(e.den()),
                        }
                    })
                    .collect()
            })
            .collect(),
    }
}

/// Builds and reduces every entry; rejects shape mismatches, zero denominators
/// and poles in the closed disk.
pub fn rational_matrix_from_json<T: Scalar>(doc: &RationalMatrixJson) -> Result<RationalMatrixFunction<T>> {
    if doc.m == 0 || doc.n == 0 {
        return Err(RifError::Parse("m and n must be positive".into()));
    }
    if doc.entries.len() != doc.m || doc.entries.iter().any(|r| r.len() != doc.n) {
        return Err(RifError::Parse(format!("entries must form a {}x{} array", doc.m, doc.n)));
    }
    let mut entries = Vec::with_capacity(doc.m * doc.n);
    for row in &doc.entries {
        for e in row {
            let den = poly_in::<T>(&e.den)?;
            if den.is_zero() {
                return Err(RifError::Parse("zero denominator".into()));
            }
            entries.push(RationalFunction::new(poly_in(&e.num)?, den)?);
        }
    }
    RationalMatrixFunction::new(doc.m, doc.n, entries)
}

pub fn trig_to_json<T: Scalar>(q: &TrigMatrixPolynomial<T>) -> TrigJson {
    TrigJson {
        n: q.size(),
        d: q.bandwidth(),
        blocks: q.blocks().iter().map(matrix_to_json).collect(),
    }
}

pub fn trig_from_json<T: Scalar>(doc: &TrigJson) -> Result<TrigMatrixPolynomial<T>> {
    if doc.n == 0 || doc.blocks.len() != doc.d + 1 {
        return Err(RifError::Parse(format!("expected n > 0 and d + 1 = {} blocks", doc.d + 1)));
    }
    let blocks = doc
        .blocks
        .iter()
        .map(|b| matrix_from_json(b, doc.n, doc.n))
        .collect::<Result<Vec<_>>>()?;
    TrigMatrixPolynomial::new(blocks).map_err(|e| RifError::Parse(e.to_string()))
}

pub fn polynomial_matrix_to_json<T: Scalar>(g: &PolynomialMatrix<T>) -> PolynomialMatrixJson {
    let coefficients = g.coefficients();
    PolynomialMatrixJson {
        m: g.rows(),
        n: g.cols(),
        d: coefficients.len().saturating_sub(1),
        coefficients: coefficients.iter().map(matrix_to_json).collect(),
    }
}

pub fn polynomial_matrix_from_json<T: Scalar>(doc: &PolynomialMatrixJson) -> Result<PolynomialMatrix<T>> {
    if doc.coefficients.len() != doc.d + 1 {
        return Err(RifError::Parse("coefficient count must be d + 1".into()));
    }
    let blocks = doc
        .coefficients
        .iter()
        .map(|b| matrix_from_json(b, doc.m, doc.n))
        .collect::<Result<Vec<_>>>()?;
    Ok(PolynomialMatrix::from_coefficients(doc.m, doc.n, &blocks))
}

pub fn potapov_to_json<T: Scalar>(f: &PotapovFactorization<T>) -> PotapovJson {
    PotapovJson {
        n: f.size(),
        constant_unitary: matrix_to_json(&f.constant_unitary),
        factors: f
            .factors
            .iter()
            .map(|e| ElementaryFactorJson {
                zero: complex_out(e.zero()),
                direction: e.direction().iter().map(|c| complex_out(*c)).collect(),
            })
            .collect(),
    }
}

pub fn potapov_from_json<T: Scalar>(doc: &PotapovJson) -> Result<PotapovFactorization<T>> {
    let constant_unitary = matrix_from_json(&doc.constant_unitary, doc.n, doc.n)?;
    let factors = doc
        .factors
        .iter()
        .map(|f| {
            if f.direction.len() != doc.n {
                return Err(RifError::Parse("direction length must equal n".into()));
            }
            let v = CVector::from_vec(f.direction.iter().map(complex_in).collect::<Result<Vec<_>>>()?);
            ElementaryFactor::new(complex_in(&f.zero)?, v)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PotapovFactorization {
        constant_unitary,
        factors,
    })
}

fn parse_json<D: for<'de> Deserialize<'de>>(text: &str) -> Result<D> {
    serde_json::from_str(text).map_err(|e| RifError::Parse(e.to_string()))
}

pub fn parse_rational_matrix<T: Scalar>(text: &str) -> Result<RationalMatrixFunction<T>> {
    rational_matrix_from_json(&parse_json(text)?)
}

pub fn parse_trig<T: Scalar>(text: &str) -> Result<TrigMatrixPolynomial<T>> {
    trig_from_json(&parse_json(text)?)
}

pub fn rational_matrix_to_string<T: Scalar>(w: &RationalMatrixFunction<T>) -> String {
    serde_json::to_string_pretty(&rational_matrix_to_json(w)).expect("plain data serializes")
}

pub fn trig_to_string<T: Scalar>(q: &TrigMatrixPolynomial<T>) -> String {
    serde_json::to_string_pretty(&trig_to_json(q)).expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;

    #[test]
    fn rational_matrix_round_trip() {
        let text = r#"{"m": 2, "n": 1, "entries": [
            [{"num": [[0.0, 0.0], [0.7071067811865476, 0.0]], "den": [[1.0, 0.0]]}],
            [{"num": [[0.7071067811865476, 0.0]], "den": [[1.0, 0.0]]}]]}"#;
        let w = parse_rational_matrix::<f64>(text).unwrap();
        let again = parse_rational_matrix::<f64>(&rational_matrix_to_string(&w)).unwrap();
        assert_eq!(w, again);
        assert!((w.eval(cplx(0.5, 0.0)).unwrap()[(0, 0)].re - 0.5 * std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(matches!(parse_rational_matrix::<f64>("{"), Err(RifError::Parse(_))));
        let wrong_shape = r#"{"m": 2, "n": 1, "entries": [[{"num": [[1,0]], "den": [[1,0]]}]]}"#;
        assert!(matches!(parse_rational_matrix::<f64>(wrong_shape), Err(RifError::Parse(_))));
        let pole = r#"{"m": 1, "n": 1, "entries": [[{"num": [[1,0]], "den": [[1,0],[-2,0]]}]]}"#;
        assert!(matches!(parse_rational_matrix::<f64>(pole), Err(RifError::PoleInDisk { .. })));
    }

    #[test]
    fn trig_round_trip() {
        let text = r#"{"n": 1, "d": 1, "blocks": [[[[2.0, 0.0]]], [[[1.0, 0.0]]]]}"#;
        let q = parse_trig::<f64>(text).unwrap();
        assert_eq!(q.bandwidth(), 1);
        assert_eq!(parse_trig::<f64>(&trig_to_string(&q)).unwrap(), q);
    }
}
