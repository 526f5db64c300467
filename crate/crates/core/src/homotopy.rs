//! Explicit paths inside RIF(m, n) from a rational inner `W` to the pinned
//! function `(I_n; 0)`.
//!
//! A path is a list of closed-form segments, each evaluable at any local
//! parameter `s ∈ [0, 1]` and any point of the closed disk:
//!
//! 1. a unitary-left segment moving the rows chosen at `z = 1` to the top,
//! 2. the Step-1 deformation `(Φ F_t; tY)` run from `t = 1` down to `t = 0`,
//! 3. Step 2 on the square inner `Φ`: remove the constant unitary, then for each
//!    Blaschke–Potapov factor rotate its direction to `e_1`, push the `b` entry to
//!    `1` through the spare row, and rotate back.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Result, RifError};
use crate::factor::{inner_outer, potapov_factorize, ElementaryFactor, PotapovFactorization};
use crate::linalg::{embed_top_left, identity, isometry_defect, max_abs, pinned, spectral_norm, CMatrix};
use crate::matrix::{
    inner_defect, permutation_matrix, select_full_rank_rows, unitary_path, winding_of_samples, RationalMatrixFunction,
    UnitaryPath,
};
use crate::poly::{BlaschkeProduct, ComplexPolynomial, RationalFunction};
use crate::poly_matrix::PolynomialMatrix;
use crate::scalar::{circle_grid, cone, czero, lit, real, to_f64, Scalar};
use crate::spectral::{fejer_riesz, trig_from_products};
use crate::tolerance::{default_grid, Tolerances};

/// Right-hand operand of a segment: either a stored function or a constant `lead`
/// times a product of elementary factors.
#[derive(Debug, Clone)]
pub enum Operand<T: Scalar> {
    Function(RationalMatrixFunction<T>),
    Product {
        lead: CMatrix<T>,
        factors: Vec<ElementaryFactor<T>>,
    },
}

impl<T: Scalar> Operand<T> {
    pub fn eval(&self, z: Complex<T>) -> CMatrix<T> {
        match self {
            Operand::Function(f) => f.eval_disk(z),
            Operand::Product { lead, factors } => factors.iter().fold(lead.clone(), |acc, f| acc * f.eval(z)),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            Operand::Function(f) => f.cols(),
            Operand::Product { lead, .. } => lead.ncols(),
        }
    }

    fn describe(&self) -> String {
        match self {
            Operand::Function(f) => format!("{}x{} rational function", f.rows(), f.cols()),
            Operand::Product { lead, factors } => {
                format!("{}x{} constant times {} elementary factor(s)", lead.nrows(), lead.ncols(), factors.len())
            }
        }
    }
}

/// Step-1 data: `W = (Φ F; Y)` with `Y = Ỹ/p`, and the memoized spectral factors
/// `G_t` of `|p|² I − t² Ỹ*Ỹ`.
#[derive(Debug)]
pub struct Step1<T: Scalar> {
    inner: RationalMatrixFunction<T>,
    inner_factorization: PotapovFactorization<T>,
    outer: RationalMatrixFunction<T>,
    bottom: RationalMatrixFunction<T>,
    p: ComplexPolynomial<T>,
    ytilde: PolynomialMatrix<T>,
    tol: Tolerances,
    cache: RwLock<HashMap<i64, Arc<PolynomialMatrix<T>>>>,
}

fn cache_key<T: Scalar>(t: T) -> i64 {
    (to_f64(t) * 1e12).round() as i64
}

impl<T: Scalar> Step1<T> {
    /// Factors the top block `X = ΦF` and clears the denominators of `Y`.
    pub fn new(x: &RationalMatrixFunction<T>, y: &RationalMatrixFunction<T>, tol: &Tolerances) -> Result<Self> {
        if x.cols() != y.cols() || x.rows() != x.cols() {
            return Err(RifError::InvalidArgument("step 1 needs a square X over Y".into()));
        }
        let io = inner_outer(x, tol)?;
        let (ytilde, p) = y.to_common_denominator();
        Ok(Self {
            inner: io.inner,
            inner_factorization: io.inner_factorization,
            outer: io.outer,
            bottom: y.clone(),
            p,
            ytilde,
            tol: tol.clone(),
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn inner(&self) -> &RationalMatrixFunction<T> {
        &self.inner
    }

    pub fn inner_factorization(&self) -> &PotapovFactorization<T> {
        &self.inner_factorization
    }

    pub fn outer(&self) -> &RationalMatrixFunction<T> {
        &self.outer
    }

    pub fn denominator(&self) -> &ComplexPolynomial<T> {
        &self.p
    }

    pub fn ytilde(&self) -> &PolynomialMatrix<T> {
        &self.ytilde
    }

    pub fn size(&self) -> usize {
        self.inner.rows()
    }

    fn degree_bound(&self) -> usize {
        self.p.degree().unwrap_or(0).max(self.ytilde.degree().unwrap_or(0))
    }

    /// `G_t`: `p·I` at `t = 0`, `p·F` at `t = 1`, Fejér–Riesz in between.
    pub fn spectral_factor(&self, t: T) -> Result<Arc<PolynomialMatrix<T>>> {
        let key = cache_key(t);
        if let Some(g) = self.cache.read().expect("cache lock").get(&key) {
            return Ok(g.clone());
        }
        let n = self.size();
        let g = if t <= T::zero() {
            PolynomialMatrix::scalar_identity(n, &self.p)
        } else if t >= T::one() {
            PolynomialMatrix::interpolate(n, n, self.degree_bound(), |z| self.outer.eval_disk(z) * self.p.eval(z))
                .pruned(lit::<T>(1e-13))
        } else {
            let q = trig_from_products(&self.p, &self.ytilde, t);
            fejer_riesz(&q, &self.tol)
                .map_err(|e| e.context(format!("spectral factor at t = {}", to_f64(t))))?
                .factor
        };
        let g = Arc::new(g);
        self.cache.write().expect("cache lock").entry(key).or_insert_with(|| g.clone());
        Ok(g)
    }

    /// `F_t(z) = G_t(z)/p(z)`.
    pub fn outer_at(&self, t: T, z: Complex<T>) -> Result<CMatrix<T>> {
        if t <= T::zero() {
            return Ok(identity(self.size()));
        }
        if t >= T::one() {
            return Ok(self.outer.eval_disk(z));
        }
        let g = self.spectral_factor(t)?;
        Ok(g.eval(z) / self.p.eval(z))
    }

    /// `W_t(z) = (Φ(z) F_t(z); t Y(z))`.
    pub fn eval(&self, t: T, z: Complex<T>) -> Result<CMatrix<T>> {
        let top = self.inner.eval_disk(z) * self.outer_at(t, z)?;
        let bottom = self.bottom.eval_disk(z) * real(t);
        let n = self.size();
        let m = n + bottom.nrows();
        let mut out = CMatrix::zeros(m, n);
        out.rows_mut(0, n).copy_from(&top);
        out.rows_mut(n, m - n).copy_from(&bottom);
        Ok(out)
    }
}

/// `W_t = (Φ·F_t; t·Y)` as a rational matrix function.
pub fn deform_f<T: Scalar>(step: &Step1<T>, t: T) -> Result<RationalMatrixFunction<T>> {
    let top = if t <= T::zero() {
        step.inner.clone()
    } else if t >= T::one() {
        step.inner.mul(&step.outer)?
    } else {
        let f = RationalMatrixFunction::from_polynomial_matrix(&*step.spectral_factor(t)?, &step.p)?;
        step.inner.mul(&f)?
    };
    let k = step.bottom.rows();
    let bottom = step.bottom.left_mul_constant(&(identity::<T>(k) * real(t)))?;
    RationalMatrixFunction::vstack(&top, &bottom)
}

/// Entries of the Step-2 column at parameter `s`: `(1 − s)b + s` in row `column`,
/// `√(s − s²)(1 − b)` in row `n` (the first spare row), zeros elsewhere.
/// `column` is zero-based.
pub fn column_path<T: Scalar>(
    b: &BlaschkeProduct<T>,
    s: T,
    m: usize,
    n: usize,
    column: usize,
) -> Result<Vec<RationalFunction<T>>> {
    if m <= n {
        return Err(RifError::NoSpareRow { m, n });
    }
    if column >= n {
        return Err(RifError::InvalidArgument(format!("column {column} out of range for n = {n}")));
    }
    if !(s >= T::zero() && s <= T::one()) {
        return Err(RifError::InvalidArgument("column path parameter must lie in [0, 1]".into()));
    }
    let b = b.to_rational();
    let mut out = vec![RationalFunction::zero(); m];
    out[column] = &b.scale(real(T::one() - s)) + &RationalFunction::constant(real(s));
    out[n] = (&RationalFunction::one() - &b).scale(real((s * (T::one() - s)).sqrt()));
    Ok(out)
}

/// The m×n isometry equal to `(I_n; 0)` except for column `column`, which carries
/// the column path of `b(z)` at parameter `s`.
fn column_matrix<T: Scalar>(b: Complex<T>, s: T, m: usize, n: usize, column: usize) -> CMatrix<T> {
    let mut out = pinned::<T>(m, n);
    out[(column, column)] = b * real(T::one() - s) + real(s);
    out[(n, column)] = (cone::<T>() - b) * real((s * (T::one() - s)).sqrt());
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SegmentKind {
    UnitaryLeft,
    #[serde(rename = "deform-F")]
    DeformF,
    ColumnDeform,
    Constant,
}

impl SegmentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SegmentKind::UnitaryLeft => "unitary-left",
            SegmentKind::DeformF => "deform-F",
            SegmentKind::ColumnDeform => "column-deform",
            SegmentKind::Constant => "constant",
        }
    }
}

#[derive(Debug, Clone)]
enum Payload<T: Scalar> {
    /// `s ↦ V(s)·R(z)` with `V(0) = I`.
    UnitaryLeft { path: UnitaryPath<T>, operand: Operand<T> },
    /// `s ↦ W_{1−s}`.
    DeformF(Arc<Step1<T>>),
    /// `s ↦ M_s(z)·R(z)` with `M_s` the column-path isometry.
    ColumnDeform {
        zero: Complex<T>,
        column: usize,
        rows: usize,
        operand: Operand<T>,
    },
    Constant(Operand<T>),
}

/// One closed-form piece of a homotopy.
#[derive(Debug, Clone)]
pub struct PathSegment<T: Scalar> {
    payload: Payload<T>,
    scale: T,
}

impl<T: Scalar> PathSegment<T> {
    fn new(payload: Payload<T>) -> Self {
        Self {
            payload,
            scale: T::one(),
        }
    }

    pub fn constant(operand: Operand<T>) -> Self {
        Self::new(Payload::Constant(operand))
    }

    pub fn unitary_left(path: UnitaryPath<T>, operand: Operand<T>) -> Self {
        Self::new(Payload::UnitaryLeft { path, operand })
    }

    pub fn deform(step: Arc<Step1<T>>) -> Self {
        Self::new(Payload::DeformF(step))
    }

    /// `column` is zero-based; `rows` is `m`; `operand` is n×n.
    pub fn column_deform(zero: Complex<T>, column: usize, rows: usize, operand: Operand<T>) -> Self {
        Self::new(Payload::ColumnDeform {
            zero,
            column,
            rows,
            operand,
        })
    }

    /// Same segment multiplied by a scalar (breaks innerness unless `|factor| = 1`).
    pub fn scaled(mut self, factor: T) -> Self {
        self.scale *= factor;
        self
    }

    pub fn kind(&self) -> SegmentKind {
        match self.payload {
            Payload::UnitaryLeft { .. } => SegmentKind::UnitaryLeft,
            Payload::DeformF(_) => SegmentKind::DeformF,
            Payload::ColumnDeform { .. } => SegmentKind::ColumnDeform,
            Payload::Constant(_) => SegmentKind::Constant,
        }
    }

    pub fn step1(&self) -> Option<&Step1<T>> {
        match &self.payload {
            Payload::DeformF(step) => Some(step),
            _ => None,
        }
    }

    pub fn eval(&self, s: T, z: Complex<T>) -> Result<CMatrix<T>> {
        let value = match &self.payload {
            Payload::UnitaryLeft { path, operand } => {
                let v = path.value(s);
                let r = operand.eval(z);
                v.columns(0, v.ncols()).into_owned() * r
            }
            Payload::DeformF(step) => step.eval(T::one() - s, z)?,
            Payload::ColumnDeform {
                zero,
                column,
                rows,
                operand,
            } => {
                let r = operand.eval(z);
                let b = (z - *zero) / (cone::<T>() - zero.conj() * z);
                column_matrix(b, s, *rows, r.nrows(), *column) * r
            }
            Payload::Constant(operand) => operand.eval(z),
        };
        Ok(if self.scale == T::one() { value } else { value * real(self.scale) })
    }

    pub fn summary(&self) -> String {
        let body = match &self.payload {
            Payload::UnitaryLeft { path, operand } => {
                let max_angle = path.angles().iter().fold(T::zero(), |acc, a| acc.max(a.abs()));
                format!(
                    "{}x{} unitary geodesic (max eigen-angle {:.6}) applied to {}",
                    path.size(),
                    path.size(),
                    to_f64(max_angle),
                    operand.describe()
                )
            }
            Payload::DeformF(step) => format!(
                "W_t = (Phi F_t; t Y) for t from 1 to 0; n = {}, deg p = {}, deg Ytilde = {}",
                step.size(),
                step.p.degree().unwrap_or(0),
                step.ytilde.degree().unwrap_or(0)
            ),
            Payload::ColumnDeform {
                zero,
                column,
                rows,
                operand,
            } => format!(
                "column {} carries b_a with a = {:.6}{:+.6}i, pushed to 1 through spare row {} (m = {}); right factor {}",
                column + 1,
                to_f64(zero.re),
                to_f64(zero.im),
                operand.cols() + 1,
                rows,
                operand.describe()
            ),
            Payload::Constant(operand) => format!("constant {}", operand.describe()),
        };
        if self.scale == T::one() {
            body
        } else {
            format!("{body}; scaled by {}", to_f64(self.scale))
        }
    }
}

/// Manifest entry for one segment.
#[derive(Debug, Clone, Serialize)]
pub struct SegmentSummary {
    pub index: usize,
    pub kind: SegmentKind,
    pub t_start: f64,
    pub t_end: f64,
    pub summary: String,
}

/// Concatenation of segments, each owning an interval of length `1/K`.
#[derive(Debug, Clone)]
pub struct HomotopyPath<T: Scalar> {
    source: RationalMatrixFunction<T>,
    segments: Vec<PathSegment<T>>,
    tol: Tolerances,
}

impl<T: Scalar> HomotopyPath<T> {
    pub fn new(source: RationalMatrixFunction<T>, segments: Vec<PathSegment<T>>, tol: &Tolerances) -> Result<Self> {
        if segments.is_empty() {
            return Err(RifError::InvalidArgument("a path needs at least one segment".into()));
        }
        Ok(Self {
            source,
            segments,
            tol: tol.clone(),
        })
    }

    pub fn rows(&self) -> usize {
        self.source.rows()
    }

    pub fn cols(&self) -> usize {
        self.source.cols()
    }

    pub fn source(&self) -> &RationalMatrixFunction<T> {
        &self.source
    }

    pub fn segments(&self) -> &[PathSegment<T>] {
        &self.segments
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn kinds(&self) -> Vec<SegmentKind> {
        self.segments.iter().map(PathSegment::kind).collect()
    }

    /// Segment index and local parameter for global `t ∈ [0, 1]`.
    pub fn locate(&self, t: T) -> (usize, T) {
        let k = self.segments.len();
        let scaled = t.max(T::zero()).min(T::one()) * lit::<T>(k as f64);
        let idx = to_f64(scaled.floor()).max(0.0) as usize;
        let idx = idx.min(k - 1);
        (idx, scaled - lit::<T>(idx as f64))
    }

    pub fn eval(&self, t: T, z: Complex<T>) -> Result<CMatrix<T>> {
        let (k, s) = self.locate(t);
        self.segments[k].eval(s, z)
    }

    /// The same path with segment `index` multiplied by `factor`.
    pub fn with_scaled_segment(&self, index: usize, factor: T) -> Result<Self> {
        if index >= self.segments.len() {
            return Err(RifError::InvalidArgument(format!("no segment {index}")));
        }
        let mut out = self.clone();
        out.segments[index] = out.segments[index].clone().scaled(factor);
        Ok(out)
    }

    pub fn manifest(&self) -> Vec<SegmentSummary> {
        let k = self.segments.len() as f64;
        self.segments
            .iter()
            .enumerate()
            .map(|(i, s)| SegmentSummary {
                index: i,
                kind: s.kind(),
                t_start: i as f64 / k,
                t_end: (i + 1) as f64 / k,
                summary: s.summary(),
            })
            .collect()
    }

    /// Values on the lattice `t_i = i/(t_samples − 1)` × `θ_j = 2πj/grid_size`,
    /// one row of grid values per `t`. Rows are evaluated in parallel.
    pub fn sample(&self, t_samples: usize, grid_size: usize) -> Vec<Result<Vec<CMatrix<T>>>> {
        let grid = circle_grid::<T>(grid_size);
        let ts = t_lattice::<T>(t_samples);
        let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(ts.len()).max(1);
        let chunk = ts.len().div_ceil(threads);
        let mut out: Vec<Result<Vec<CMatrix<T>>>> = Vec::with_capacity(ts.len());
        std::thread::scope(|scope| {
            let handles: Vec<_> = ts
                .chunks(chunk)
                .map(|part| {
                    let grid = &grid;
                    scope.spawn(move || {
                        part.iter()
                            .map(|&t| grid.iter().map(|&z| self.eval(t, z)).collect::<Result<Vec<_>>>())
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                out.extend(h.join().expect("sampling thread panicked"));
            }
        });
        out
    }
}

pub fn t_lattice<T: Scalar>(t_samples: usize) -> Vec<T> {
    let last = t_samples.max(2) - 1;
    (0..=last).map(|i| lit::<T>(i as f64 / last as f64)).collect()
}

fn unitary_segment<T: Scalar>(u: &CMatrix<T>, operand: Operand<T>) -> Result<Option<PathSegment<T>>> {
    if max_abs(&(u - identity::<T>(u.nrows()))) <= lit::<T>(1e-15) {
        return Ok(None);
    }
    Ok(Some(PathSegment::unitary_left(unitary_path(u)?, operand)))
}

/// Unitary `S` with `S v = e_1`: a Householder reflector preceded by a phase on
/// the first coordinate.
pub fn reflector_to_first<T: Scalar>(v: &crate::linalg::CVector<T>) -> CMatrix<T> {
    let n = v.len();
    let v = v / real(v.norm());
    let phase = if v[0].norm_sqr() > T::zero() {
        v[0] / real(crate::scalar::cabs(v[0]))
    } else {
        cone()
    };
    let w = &v * phase.conj();
    let mut u = w.clone();
    u[0] -= cone::<T>();
    let uu = u.norm_squared();
    let h = if uu <= T::default_epsilon() * T::default_epsilon() {
        identity::<T>(n)
    } else {
        identity::<T>(n) - (&u * u.adjoint()) * real(lit::<T>(2.0) / uu)
    };
    let mut d = identity::<T>(n);
    d[(0, 0)] = phase.conj();
    d * h
}

/// Embeds an n×n unitary in U(m), m > n, with the last diagonal entry chosen so
/// the result has determinant 1.
fn special_embedding<T: Scalar>(s: &CMatrix<T>, m: usize) -> CMatrix<T> {
    let mut out = embed_top_left(s, m);
    let det = s.determinant();
    out[(m - 1, m - 1)] = det.conj() / real(det.norm_sqr());
    out
}

/// Step 2 for a known factorization `Φ = C·B_1⋯B_N`: path from `(Φ; 0)` to `(I_n; 0)` in RIF(m, n).
pub fn square_path<T: Scalar>(fact: &PotapovFactorization<T>, m: usize) -> Result<Vec<PathSegment<T>>> {
    let n = fact.size();
    if m <= n {
        return Err(RifError::NoSpareRow { m, n });
    }
    let pin = pinned::<T>(m, n);
    let factors = &fact.factors;
    let mut segments = Vec::new();
    let c = &fact.constant_unitary;
    if let Some(seg) = unitary_segment(
        &embed_top_left(&c.adjoint(), m),
        Operand::Product {
            lead: &pin * c,
            factors: factors.clone(),
        },
    )? {
        segments.push(seg);
    }
    for k in 0..factors.len() {
        let rest = factors[k + 1..].to_vec();
        let s = reflector_to_first(factors[k].direction());
        let big = special_embedding(&s, m);
        if let Some(seg) = unitary_segment(
            &big,
            Operand::Product {
                lead: pin.clone(),
                factors: factors[k..].to_vec(),
            },
        )? {
            segments.push(seg);
        }
        segments.push(PathSegment::column_deform(
            factors[k].zero(),
            0,
            m,
            Operand::Product {
                lead: s.clone(),
                factors: rest.clone(),
            },
        ));
        if let Some(seg) = unitary_segment(
            &big.adjoint(),
            Operand::Product {
                lead: &pin * &s,
                factors: rest,
            },
        )? {
            segments.push(seg);
        }
    }
    if segments.is_empty() {
        segments.push(PathSegment::constant(Operand::Product {
            lead: pin,
            factors: vec![],
        }));
    }
    Ok(segments)
}

/// Path in RIF(m, n) from `(Φ; 0)` to `(I_n; 0)` for a square inner `Φ`.
pub fn square_to_identity<T: Scalar>(
    phi: &RationalMatrixFunction<T>,
    m: usize,
    tol: &Tolerances,
) -> Result<HomotopyPath<T>> {
    let n = phi.rows();
    if m <= n {
        return Err(RifError::NoSpareRow { m, n });
    }
    let fact = potapov_factorize(phi, tol)?;
    let source = RationalMatrixFunction::vstack(
        phi,
        &RationalMatrixFunction::constant(&CMatrix::zeros(m - n, n)),
    )?;
    HomotopyPath::new(source, merge_constants(square_path(&fact, m)?), tol)
}

fn merge_constants<T: Scalar>(segments: Vec<PathSegment<T>>) -> Vec<PathSegment<T>> {
    let mut out: Vec<PathSegment<T>> = Vec::with_capacity(segments.len());
    for seg in segments {
        let repeat = seg.kind() == SegmentKind::Constant
            && out.last().is_some_and(|prev| prev.kind() == SegmentKind::Constant);
        if !repeat {
            out.push(seg);
        }
    }
    out
}

/// Full path `W → (I_n; 0)`: row selection at `z = 1`, Step 1, Step 2.
pub fn connect_to_pinned<T: Scalar>(w: &RationalMatrixFunction<T>, tol: &Tolerances) -> Result<HomotopyPath<T>> {
    let (m, n) = (w.rows(), w.cols());
    if m <= n {
        return Err(RifError::NoSpareRow { m, n });
    }
    let defect = inner_defect(w, default_grid(w.max_degree()));
    if defect > lit::<T>(tol.inner) {
        return Err(RifError::NotInner(format!("inner defect {:e}", to_f64(defect))));
    }
    let perm = select_full_rank_rows(w, cone(), tol).map_err(|e| e.context("row selection at z = 1"))?;
    let mut segments = Vec::new();
    let identity_perm = perm.iter().enumerate().all(|(i, p)| i == *p);
    if identity_perm {
        segments.push(PathSegment::constant(Operand::Function(w.clone())));
    } else {
        let p = permutation_matrix::<T>(&perm);
        segments.push(PathSegment::unitary_left(unitary_path(&p)?, Operand::Function(w.clone())));
    }
    let wp = w.permute_rows(&perm);
    let x = wp.row_block(0, n);
    let y = wp.row_block(n, m - n);
    let fact = if y.entries().iter().all(RationalFunction::is_zero) {
        segments.push(PathSegment::constant(Operand::Function(wp.clone())));
        potapov_factorize(&x, tol).map_err(|e| e.context("step 2: Potapov factorization"))?
    } else {
        let step = Step1::new(&x, &y, tol).map_err(|e| e.context("step 1: inner-outer factorization"))?;
        let fact = step.inner_factorization.clone();
        segments.push(PathSegment::deform(Arc::new(step)));
        fact
    };
    segments.extend(square_path(&fact, m).map_err(|e| e.context("step 2"))?);
    HomotopyPath::new(w.clone(), merge_constants(segments), tol)
}

/// Numerical certificate for a path.
#[derive(Debug, Clone, Serialize)]
pub struct PathReport {
    pub m: usize,
    pub n: usize,
    pub t_samples: usize,
    pub grid_size: usize,
    pub segments: usize,
    /// Max of `‖W_t(z)*W_t(z) − I‖₂` over the lattice.
    pub max_defect: f64,
    pub max_defect_t: f64,
    /// Max over adjacent `t` samples of the grid sup-norm jump divided by `Δt`.
    pub lipschitz_estimate: f64,
    /// Grid distance between the path at `t = 0` and the source.
    pub start_error: f64,
    /// Grid distance between the path at `t = 1` and `(I_n; 0)`.
    pub end_error: f64,
    /// Grid distance between consecutive segment endpoints.
    pub chain_errors: Vec<f64>,
    /// Winding of `det W_t` per `t` sample, square paths only.
    pub windings: Option<Vec<i64>>,
    pub failures: Vec<String>,
    pub passed: bool,
}

impl PathReport {
    pub fn max_chain_error(&self) -> f64 {
        self.chain_errors.iter().fold(0.0, |acc: f64, e| acc.max(*e))
    }
}

fn grid_gap<T: Scalar>(
    grid: &[Complex<T>],
    a: impl Fn(Complex<T>) -> Result<CMatrix<T>>,
    b: impl Fn(Complex<T>) -> Result<CMatrix<T>>,
) -> Result<f64> {
    let mut worst = T::zero();
    for &z in grid {
        worst = worst.max(spectral_norm(&(a(z)? - b(z)?)));
    }
    Ok(to_f64(worst))
}

/// Samples `path` on the `(t, θ)` lattice and reports defects, continuity and
/// chaining. Failures are recorded in the report rather than returned.
pub fn verify_path<T: Scalar>(path: &HomotopyPath<T>, t_samples: usize, grid_size: usize) -> PathReport {
    let tol = path.tolerances();
    let (m, n) = (path.rows(), path.cols());
    let grid = circle_grid::<T>(grid_size);
    let ts = t_lattice::<T>(t_samples);
    let mut failures = Vec::new();
    let rows = path.sample(t_samples, grid_size);

    let mut max_defect = 0.0f64;
    let mut max_defect_t = 0.0f64;
    let mut lipschitz = 0.0f64;
    let mut previous: Option<(T, &Vec<CMatrix<T>>)> = None;
    let mut windings = (m == n).then(Vec::new);
    for (t, row) in ts.iter().zip(&rows) {
        let values = match row {
            Ok(v) => v,
            Err(e) => {
                failures.push(format!("t = {}: {e}", to_f64(*t)));
                previous = None;
                continue;
            }
        };
        for v in values {
            let d = to_f64(isometry_defect(v));
            if !(d <= max_defect) {
                max_defect = if d.is_nan() { f64::INFINITY } else { d };
                max_defect_t = to_f64(*t);
            }
        }
        if let Some((tp, prev)) = previous {
            let jump = prev
                .iter()
                .zip(values)
                .fold(T::zero(), |acc, (a, b)| acc.max(spectral_norm(&(a - b))));
            lipschitz = lipschitz.max(to_f64(jump / (*t - tp)));
        }
        previous = Some((*t, values));
        if let Some(ws) = windings.as_mut() {
            let dets: Vec<Complex<T>> = values.iter().map(|v| v.determinant()).collect();
            match winding_of_samples(&dets, lit::<T>(100.0 * tol.inner)) {
                Ok(w) => ws.push(w),
                Err(e) => failures.push(format!("winding at t = {}: {e}", to_f64(*t))),
            }
        }
    }
    if max_defect > tol.path {
        failures.push(format!("max inner defect {max_defect:e} exceeds {:e}", tol.path));
    }

    let source = path.source();
    let pin = pinned::<T>(m, n);
    let start_error = grid_gap(&grid, |z| path.eval(T::zero(), z), |z| Ok(source.eval_disk(z))).unwrap_or_else(|e| {
        failures.push(format!("start: {e}"));
        f64::INFINITY
    });
    let end_error = grid_gap(&grid, |z| path.eval(T::one(), z), |_| Ok(pin.clone())).unwrap_or_else(|e| {
        failures.push(format!("end: {e}"));
        f64::INFINITY
    });
    let segs = path.segments();
    let chain_errors: Vec<f64> = segs
        .windows(2)
        .enumerate()
        .map(|(k, pair)| {
            grid_gap(&grid, |z| pair[0].eval(T::one(), z), |z| pair[1].eval(T::zero(), z)).unwrap_or_else(|e| {
                failures.push(format!("chain {k}: {e}"));
                f64::INFINITY
            })
        })
        .collect();
    for (label, err) in [("start", start_error), ("end", end_error)] {
        if !(err <= tol.chain) {
            failures.push(format!("{label} error {err:e} exceeds {:e}", tol.chain));
        }
    }
    for (k, err) in chain_errors.iter().enumerate() {
        if !(*err <= tol.chain) {
            failures.push(format!("segments {k} and {} differ by {err:e} at the junction", k + 1));
        }
    }
    if let Some(ws) = &windings {
        if ws.windows(2).any(|p| p[0] != p[1]) {
            failures.push("winding of det changes along the path".into());
        }
    }
    PathReport {
        m,
        n,
        t_samples: ts.len(),
        grid_size,
        segments: segs.len(),
        max_defect,
        max_defect_t,
        lipschitz_estimate: lipschitz,
        start_error,
        end_error,
        chain_errors,
        windings,
        passed: failures.is_empty(),
        failures,
    }
}

/// Step-1 diagnostics per sampled `t`: `‖F_t*F_t + t²Y*Y − I‖`, `λ_min(F_t(0))`,
/// the smallest modulus of a root of `det G_t`, and `λ_min(G_t(0)*G_t(0) − G_1(0)*G_1(0))`.
#[derive(Debug, Clone, Serialize)]
pub struct Step1Sample {
    pub t: f64,
    pub identity_residual: f64,
    pub f0_min_eigenvalue: f64,
    pub f0_hermitian_defect: f64,
    pub det_min_root: f64,
    pub extremal_min_eigenvalue: f64,
}

pub fn step1_diagnostics<T: Scalar>(step: &Step1<T>, ts: &[T], grid_size: usize) -> Result<Vec<Step1Sample>> {
    let grid = circle_grid::<T>(grid_size);
    let n = step.size();
    let zero = czero::<T>();
    let g1 = step.spectral_factor(T::one())?.eval(zero);
    let g1g1 = g1.adjoint() * &g1;
    ts.iter()
        .map(|&t| {
            let mut residual = T::zero();
            for &z in &grid {
                let f = step.outer_at(t, z)?;
                let y = step.bottom.eval_disk(z);
                let gram = f.adjoint() * &f + y.adjoint() * &y * real(t * t) - identity::<T>(n);
                residual = residual.max(spectral_norm(&gram));
            }
            let f0 = step.outer_at(t, zero)?;
            let herm = max_abs(&(&f0 - f0.adjoint()));
            let sym = (&f0 + f0.adjoint()) * real(lit::<T>(0.5));
            let g = step.spectral_factor(t)?;
            let g0 = g.eval(zero);
            let ext = crate::linalg::hermitian_eigenvalues(&(g0.adjoint() * &g0 - &g1g1))[0];
            Ok(Step1Sample {
                t: to_f64(t),
                identity_residual: to_f64(residual),
                f0_min_eigenvalue: to_f64(crate::linalg::hermitian_eigenvalues(&sym)[0]),
                f0_hermitian_defect: to_f64(herm),
                det_min_root: crate::spectral::det_min_root_modulus(&g)?,
                extremal_min_eigenvalue: to_f64(ext),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;
    use crate::tolerance::Tolerances;

    type RF = RationalFunction<f64>;
    type P = ComplexPolynomial<f64>;
    type W = RationalMatrixFunction<f64>;

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn fixture_a() -> W {
        W::new(2, 1, vec![RF::from_poly(P::from_real(&[0.0, S])), RF::constant(cplx(S, 0.0))]).unwrap()
    }

    fn fixture_b() -> W {
        let den = P::from_real(&[1.0, -0.5]);
        W::new(
            2,
            1,
            vec![
                RF::new(P::from_real(&[S, -S]), den.clone()).unwrap(),
                RF::new(P::from_real(&[0.5]), den).unwrap(),
            ],
        )
        .unwrap()
    }

    fn step1(w: &W) -> Step1<f64> {
        Step1::new(&w.row_block(0, 1), &w.row_block(1, 1), &Tolerances::default()).unwrap()
    }

    #[test]
    fn deform_f_fixture_a() {
        let step = step1(&fixture_a());
        let z = cplx(0.3, -0.2);
        let w0 = deform_f(&step, 0.0).unwrap().eval(z).unwrap();
        assert!((w0[(0, 0)] - z).norm() < 1e-14 && w0[(1, 0)].norm() < 1e-15);
        let w1 = deform_f(&step, 1.0).unwrap().eval(z).unwrap();
        assert!((w1 - fixture_a().eval(z).unwrap()).norm() < 1e-13);
        let half = deform_f(&step, 0.5).unwrap();
        let v = half.eval(z).unwrap();
        assert!((v[(0, 0)] - z * (7.0f64 / 8.0).sqrt()).norm() < 1e-10);
        assert!((v[(1, 0)] - cplx(0.5 * S, 0.0)).norm() < 1e-14);
        assert!(inner_defect(&half, 256) < 1e-10);
    }

    #[test]
    fn column_path_examples() {
        let b = BlaschkeProduct::factor(cplx(0.0, 0.0)).unwrap();
        let z = cplx(0.4, 0.1);
        let c = column_path(&b, 0.0, 2, 1, 0).unwrap();
        assert!((c[0].eval(z).unwrap() - z).norm() < 1e-15 && c[1].is_zero());
        let c = column_path(&b, 1.0, 2, 1, 0).unwrap();
        assert!((c[0].eval(z).unwrap() - cone::<f64>()).norm() < 1e-15 && c[1].eval(z).unwrap().norm() < 1e-15);
        let c = column_path(&b, 0.5, 2, 1, 0).unwrap();
        let zm = cplx(-1.0, 0.0);
        assert!(c[0].eval(zm).unwrap().norm() < 1e-15);
        assert!((c[1].eval(zm).unwrap() - cone::<f64>()).norm() < 1e-15);
        assert!(matches!(column_path(&b, 0.5, 2, 2, 0), Err(RifError::NoSpareRow { .. })));
    }

    #[test]
    fn square_to_identity_examples() {
        let tol = Tolerances::default();
        let path = square_to_identity(&W::identity(2), 3, &tol).unwrap();
        assert_eq!(path.kinds(), vec![SegmentKind::Constant]);

        let z = W::new(1, 1, vec![RF::from_poly(P::from_real(&[0.0, 1.0]))]).unwrap();
        let path = square_to_identity(&z, 2, &tol).unwrap();
        assert_eq!(path.kinds(), vec![SegmentKind::ColumnDeform]);
        let r = verify_path(&path, 17, 128);
        assert!(r.passed, "{r:?}");

        let u = CMatrix::from_row_slice(2, 2, &[cplx(0.0, S), cplx(S, 0.0), cplx(S, 0.0), cplx(0.0, S)]);
        let path = square_to_identity(&W::constant(&u), 3, &tol).unwrap();
        assert_eq!(path.kinds(), vec![SegmentKind::UnitaryLeft]);
        assert!(verify_path(&path, 9, 64).passed);
    }

    #[test]
    fn connect_examples() {
        let tol = Tolerances::default();
        let path = connect_to_pinned(&W::pinned(3, 2), &tol).unwrap();
        assert_eq!(path.kinds(), vec![SegmentKind::Constant]);
        let r = verify_path(&path, 5, 64);
        assert_eq!(r.max_defect, 0.0);
        assert!(r.passed);

        let flipped = W::constant(&CMatrix::from_row_slice(2, 1, &[czero(), cone()]));
        let path = connect_to_pinned(&flipped, &tol).unwrap();
        assert_eq!(path.kinds(), vec![SegmentKind::UnitaryLeft, SegmentKind::Constant]);
        assert!(verify_path(&path, 9, 64).passed);

        let path = connect_to_pinned(&fixture_a(), &tol).unwrap();
        assert_eq!(
            path.kinds(),
            vec![SegmentKind::Constant, SegmentKind::DeformF, SegmentKind::ColumnDeform]
        );
        let r = verify_path(&path, 33, 256);
        assert!(r.passed, "{r:?}");
        assert!(r.max_defect <= 1e-7 && r.start_error <= 1e-9 && r.end_error <= 1e-9, "{r:?}");

        let path = connect_to_pinned(&fixture_b(), &tol).unwrap();
        assert_eq!(
            path.kinds(),
            vec![SegmentKind::UnitaryLeft, SegmentKind::DeformF, SegmentKind::Constant]
        );
        let r = verify_path(&path, 33, 256);
        assert!(r.passed, "{r:?}");

        let square = W::from_fn(2, 2, |i, j| if i == j { RF::from_poly(P::from_real(&[0.0, 1.0])) } else { RF::zero() })
            .unwrap();
        assert!(matches!(connect_to_pinned(&square, &tol), Err(RifError::NoSpareRow { m: 2, n: 2 })));
    }

    #[test]
    fn corrupted_path_is_flagged() {
        let path = connect_to_pinned(&fixture_a(), &Tolerances::default()).unwrap();
        let bad = path.with_scaled_segment(1, 0.9).unwrap();
        let r = verify_path(&bad, 33, 256);
        assert!(!r.passed);
        assert!((r.max_defect - 0.19).abs() < 1e-3, "{}", r.max_defect);
    }

    #[test]
    fn step1_fixture_b_identities() {
        let step = step1(&fixture_b());
        let ts = [0.0, 0.25, 0.5, 0.75, 1.0];
        for s in step1_diagnostics(&step, &ts, 256).unwrap() {
            assert!(s.identity_residual < 1e-7, "{s:?}");
            assert!(s.f0_min_eigenvalue > 0.0 && s.f0_hermitian_defect < 1e-10, "{s:?}");
            assert!(s.det_min_root >= 1.0 - 1e-6, "{s:?}");
            assert!(s.extremal_min_eigenvalue >= -1e-8, "{s:?}");
        }
        let g1 = step.spectral_factor(1.0).unwrap();
        assert!((g1.entry(0, 0).coeff(0) - cplx(S, 0.0)).norm() < 1e-8);
        assert!((g1.entry(0, 0).coeff(1) - cplx(-S, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn reflector_maps_direction_to_e1() {
        let v = crate::linalg::CVector::from_vec(vec![cplx(0.3, 0.4), cplx(-0.5, 0.1), cplx(0.0, 0.7)]);
        let v = &v / real(v.norm());
        let s = reflector_to_first(&v);
        let e = &s * &v;
        assert!((e[0] - cone::<f64>()).norm() < 1e-14 && e[1].norm() < 1e-14 && e[2].norm() < 1e-14);
        assert!(isometry_defect(&s) < 1e-14);
        let big = special_embedding(&s, 4);
        assert!((big.determinant() - cone::<f64>()).norm() < 1e-13);
    }

    #[test]
    fn square_unitary_paths_keep_winding() {
        let tol = Tolerances::default();
        let zi = W::from_fn(2, 2, |i, j| if i == j { RF::from_poly(P::from_real(&[0.0, 1.0])) } else { RF::zero() })
            .unwrap();
        let u = CMatrix::from_row_slice(2, 2, &[czero(), cone(), cone(), czero()]);
        let seg = PathSegment::unitary_left(unitary_path(&u).unwrap(), Operand::Function(zi.clone()));
        let path = HomotopyPath::new(zi, vec![seg], &tol).unwrap();
        let r = verify_path(&path, 11, 64);
        assert_eq!(r.windings.as_deref(), Some(&[2i64; 11][..]));
    }
}
