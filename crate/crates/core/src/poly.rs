//! Scalar complex polynomials, rational functions and finite Blaschke products.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;

use crate::error::{Result, RifError};
use crate::linalg::{balance, eigenvalues, CMatrix};
use crate::scalar::{cabs, cone, czero, epsilon, lit, real, to_f64, Scalar};
use crate::tolerance::{COEFF_DROP, INTERIOR, ROOT_MATCH};

fn drop_tol<T: Scalar>() -> T {
    lit::<T>(COEFF_DROP).max(lit::<T>(16.0) * epsilon::<T>())
}

fn match_tol<T: Scalar>() -> T {
    lit::<T>(ROOT_MATCH).max(lit::<T>(1e3) * epsilon::<T>())
}

fn interior_tol<T: Scalar>() -> T {
    lit::<T>(INTERIOR).max(lit::<T>(16.0) * epsilon::<T>())
}

/// Polynomial with complex coefficients stored in ascending degree.
///
/// Trailing coefficients below `1e-12` times the largest coefficient are pruned,
/// so the zero polynomial has an empty coefficient list.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPolynomial<T: Scalar> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Scalar> ComplexPolynomial<T> {
    pub fn new(coeffs: Vec<Complex<T>>) -> Self {
        let mut p = Self { coeffs };
        p.trim(drop_tol::<T>());
        p
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| real(lit::<T>(c))).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(cone())
    }

    pub fn constant(c: Complex<T>) -> Self {
        Self::new(vec![c])
    }

    /// `z - a`.
    pub fn linear_root(a: Complex<T>) -> Self {
        Self::new(vec![-a, cone()])
    }

    /// `lead · Π (z − r)`.
    pub fn from_roots(roots: &[Complex<T>], lead: Complex<T>) -> Self {
        let mut c = vec![lead];
        for &r in roots {
            let mut next = vec![czero(); c.len() + 1];
            for (i, &a) in c.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * r;
            }
            c = next;
        }
        Self::new(c)
    }

    fn trim(&mut self, rel: T) {
        let scale = self.max_abs_coeff();
        if scale == T::zero() {
            self.coeffs.clear();
            return;
        }
        let cut = rel * scale;
        while let Some(last) = self.coeffs.last() {
            if cabs(*last) <= cut {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    /// Zeroes every coefficient with modulus at most `threshold` and re-trims.
    pub fn prune_absolute(&self, threshold: T) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|&c| if cabs(c) <= threshold { czero() } else { c })
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex<T> {
        self.coeffs.get(k).copied().unwrap_or_else(czero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_abs_coeff(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, c| acc.max(cabs(*c)))
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.coeffs.iter().rev().fold(czero(), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c.scale(lit::<T>(k as f64)))
                .collect(),
        )
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// `z ↦ conj(p(1/conj(z)))·z^deg`, i.e. the coefficient-reversed conjugate.
    pub fn reflect(&self) -> Self {
        Self::new(self.coeffs.iter().rev().map(|c| c.conj()).collect())
    }

    /// Laurent coefficients `c_l = Σ_j conj(a_j)·b_{j+l}` of `conj(a)·b` on the circle, for
    /// `l = −deg a ..= deg b`, returned with the offset `deg a`.
    pub fn circle_product(a: &Self, b: &Self) -> (Vec<Complex<T>>, usize) {
        if a.is_zero() || b.is_zero() {
            return (Vec::new(), 0);
        }
        let da = a.coeffs.len() - 1;
        let db = b.coeffs.len() - 1;
        let mut out = vec![czero(); da + db + 1];
        for (j, aj) in a.coeffs.iter().enumerate() {
            for (k, bk) in b.coeffs.iter().enumerate() {
                out[k + da - j] += aj.conj() * *bk;
            }
        }
        (out, da)
    }

    /// Synthetic division by `z − a`; returns `(quotient, remainder)`.
    ///
    /// Uses forward recurrence for `|a| <= 1` and backward recurrence otherwise,
    /// which keeps the deflation stable in both regimes.
    pub fn div_linear(&self, a: Complex<T>) -> (Self, Complex<T>) {
        let n = self.coeffs.len();
        if n <= 1 {
            return (Self::zero(), self.coeff(0));
        }
        let c = &self.coeffs;
        let mut q = vec![czero(); n - 1];
        if cabs(a) <= T::one() {
            let mut acc = c[n - 1];
            for k in (0..n - 1).rev() {
                q[k] = acc;
                acc = c[k] + acc * a;
            }
            (Self::new(q), acc)
        } else {
            // c_0 = −a q_0, c_k = q_{k−1} − a q_k
            let ainv = cone::<T>() / a;
            q[0] = -c[0] * ainv;
            for k in 1..n - 1 {
                q[k] = (q[k - 1] - c[k]) * ainv;
            }
            let rem = c[n - 1] - q[n - 2];
            (Self::new(q), rem)
        }
    }

    /// Long division from the leading coefficient.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d
            .degree()
            .ok_or_else(|| RifError::InvalidArgument("polynomial division by zero".into()))?;
        let Some(dn) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if dn < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![czero(); dn - dd + 1];
        let lead = d.coeffs[dd];
        for k in (0..=dn - dd).rev() {
            let f = r[k + dd] / lead;
            q[k] = f;
            for (j, dj) in d.coeffs.iter().enumerate() {
                r[k + j] -= f * *dj;
            }
        }
        r.truncate(dd);
        Ok((Self::new(q), Self::new(r)))
    }

    /// Power-series division keeping terms up to `z^degree`; exact when `d` divides `self`
    /// and stable when `d` has no roots in the closed disk.
    pub fn div_series(&self, d: &Self, degree: usize) -> Result<Self> {
        let d0 = d.coeff(0);
        if cabs(d0) == T::zero() {
            return Err(RifError::InvalidArgument("series division needs d(0) ≠ 0".into()));
        }
        let mut q = vec![czero(); degree + 1];
        for k in 0..=degree {
            let mut acc = self.coeff(k);
            for j in 1..=k.min(d.coeffs.len().saturating_sub(1)) {
                acc -= d.coeffs[j] * q[k - j];
            }
            q[k] = acc / d0;
        }
        Ok(Self::new(q))
    }

    /// All roots with multiplicity, from the eigenvalues of the balanced companion
    /// matrix followed by one Newton polish step per root.
    pub fn roots(&self) -> Result<Vec<Complex<T>>> {
        let deg = self
            .degree()
            .ok_or_else(|| RifError::InvalidArgument("roots of the zero polynomial".into()))?;
        if deg == 0 {
            return Ok(Vec::new());
        }
        let c = &self.coeffs;
        let lead = c[deg];
        // exact zeros at the origin are split off first
        let shift = c.iter().take_while(|a| **a == czero::<T>()).count();
        let mut roots = vec![czero(); shift];
        let m = deg - shift;
        if m == 1 {
            roots.push(-c[shift] / c[shift + 1]);
            return Ok(roots);
        }
        if m == 0 {
            return Ok(roots);
        }
        let mut comp = CMatrix::<T>::zeros(m, m);
        for i in 1..m {
            comp[(i, i - 1)] = cone();
        }
        for i in 0..m {
            comp[(i, m - 1)] = -c[shift + i] / lead;
        }
        balance(&mut comp);
        let dp = self.derivative();
        for r in eigenvalues(comp)? {
            let f = self.eval(r);
            let df = dp.eval(r);
            let polished = if cabs(df) > T::zero() { r - f / df } else { r };
            if cabs(self.eval(polished)) < cabs(f) {
                roots.push(polished);
            } else {
                roots.push(r);
            }
        }
        Ok(roots)
    }
}

impl<T: Scalar> Add for &ComplexPolynomial<T> {
    type Output = ComplexPolynomial<T>;
    fn add(self, rhs: Self) -> ComplexPolynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPolynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Scalar> Sub for &ComplexPolynomial<T> {
    type Output = ComplexPolynomial<T>;
    fn sub(self, rhs: Self) -> ComplexPolynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPolynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Scalar> Neg for &ComplexPolynomial<T> {
    type Output = ComplexPolynomial<T>;
    fn neg(self) -> ComplexPolynomial<T> {
        ComplexPolynomial::new(self.coeffs.iter().map(|c| -*c).collect())
    }
}

impl<T: Scalar> Mul for &ComplexPolynomial<T> {
    type Output = ComplexPolynomial<T>;
    fn mul(self, rhs: Self) -> ComplexPolynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return ComplexPolynomial::zero();
        }
        let mut out = vec![czero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += *a * *b;
            }
        }
        ComplexPolynomial::new(out)
    }
}

impl<T: Scalar> std::ops::Mul<ComplexPolynomial<T>> for ComplexPolynomial<T> {
    type Output = ComplexPolynomial<T>;
    fn mul(self, rhs: ComplexPolynomial<T>) -> ComplexPolynomial<T> {
        &self * &rhs
    }
}

/// Greedy nearest matching of two root multisets; returns index pairs `(i, j)`
/// with `|a_i − b_j| <= tol·max(1, |a_i|)`.
pub fn match_roots<T: Scalar>(a: &[Complex<T>], b: &[Complex<T>], tol: T) -> Vec<(usize, usize)> {
    let mut candidates = Vec::new();
    for (i, x) in a.iter().enumerate() {
        let bound = tol * T::one().max(cabs(*x));
        for (j, y) in b.iter().enumerate() {
            let d = cabs(*x - *y);
            if d <= bound {
                candidates.push((d, i, j));
            }
        }
    }
    candidates.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap_or(std::cmp::Ordering::Equal));
    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut pairs = Vec::new();
    for (_, i, j) in candidates {
        if !used_a[i] && !used_b[j] {
            used_a[i] = true;
            used_b[j] = true;
            pairs.push((i, j));
        }
    }
    pairs
}

/// Quotient of two polynomials kept in reduced form.
///
/// The denominator is normalized to `den(0) = 1` whenever `den(0) ≠ 0`, and to a monic
/// polynomial otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFunction<T: Scalar> {
    num: ComplexPolynomial<T>,
    den: ComplexPolynomial<T>,
}

impl<T: Scalar> RationalFunction<T> {
    /// Builds and reduces `num / den`.
    pub fn new(num: ComplexPolynomial<T>, den: ComplexPolynomial<T>) -> Result<Self> {
        Ok(Self::new_unreduced(num, den)?.reduce())
    }

    /// Builds `num / den` with only the denominator normalization applied.
    pub fn new_unreduced(num: ComplexPolynomial<T>, den: ComplexPolynomial<T>) -> Result<Self> {
        if den.is_zero() {
            return Err(RifError::InvalidArgument("rational function with zero denominator".into()));
        }
        Ok(Self { num, den }.normalized())
    }

    pub fn from_poly(p: ComplexPolynomial<T>) -> Self {
        Self {
            num: p,
            den: ComplexPolynomial::one(),
        }
    }

    pub fn constant(c: Complex<T>) -> Self {
        Self::from_poly(ComplexPolynomial::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(ComplexPolynomial::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(ComplexPolynomial::one())
    }

    pub fn num(&self) -> &ComplexPolynomial<T> {
        &self.num
    }

    pub fn den(&self) -> &ComplexPolynomial<T> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Max of numerator and denominator degrees.
    pub fn max_degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    fn normalized(mut self) -> Self {
        if self.num.is_zero() {
            self.den = ComplexPolynomial::one();
            return self;
        }
        let d0 = self.den.coeff(0);
        let pivot = if cabs(d0) > drop_tol::<T>() * self.den.max_abs_coeff() {
            0
        } else {
            self.den.coeffs.len() - 1
        };
        let scale = self.den.coeffs[pivot];
        if scale != cone() {
            let inv = cone::<T>() / scale;
            self.num = self.num.scale(inv);
            self.den = self.den.scale(inv);
            self.den.coeffs[pivot] = cone();
        }
        self
    }

    /// Cancels numerator/denominator root pairs closer than the root-matching tolerance.
    pub fn reduce(&self) -> Self {
        let (Some(dn), Some(dd)) = (self.num.degree(), self.den.degree()) else {
            return self.clone().normalized();
        };
        if dn == 0 || dd == 0 {
            return self.clone().normalized();
        }
        let (Ok(rn), Ok(rd)) = (self.num.roots(), self.den.roots()) else {
            return self.clone().normalized();
        };
        let pairs = match_roots(&rd, &rn, match_tol::<T>());
        if pairs.is_empty() {
            return self.clone().normalized();
        }
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        let half = lit::<T>(0.5);
        for (i, j) in pairs {
            let r = (rd[i] + rn[j]).scale(half);
            num = num.div_linear(r).0;
            den = den.div_linear(r).0;
        }
        Self { num, den }.normalized()
    }

    /// Evaluates `num(z)/den(z)`; fails at a pole.
    pub fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        let d = self.den.eval(z);
        if cabs(d) <= epsilon::<T>() * self.den.max_abs_coeff() {
            return Err(RifError::EvaluationError {
                re: to_f64(z.re),
                im: to_f64(z.im),
            });
        }
        Ok(self.num.eval(z) / d)
    }

    /// Evaluation without the pole check, for points known to be regular.
    #[inline]
    pub fn eval_unchecked(&self, z: Complex<T>) -> Complex<T> {
        self.num.eval(z) / self.den.eval(z)
    }

    /// Roots of the denominator.
    pub fn poles(&self) -> Vec<Complex<T>> {
        self.den.roots().unwrap_or_default()
    }

    /// True when no pole lies in `|z| <= 1 + margin`.
    pub fn is_disk_analytic(&self, margin: T) -> bool {
        self.poles().iter().all(|p| cabs(*p) > T::one() + margin)
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
        .normalized()
    }

    fn same_den(&self, other: &Self) -> bool {
        self.den.coeffs.len() == other.den.coeffs.len()
            && self
                .den
                .coeffs
                .iter()
                .zip(&other.den.coeffs)
                .all(|(a, b)| cabs(*a - *b) <= drop_tol::<T>() * T::one().max(cabs(*a)))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(RifError::InvalidArgument("division by the zero function".into()));
        }
        Self::new(&self.num * &other.den, &self.den * &other.num)
    }

    fn combine(&self, other: &Self, sign: T) -> Self {
        if self.same_den(other) {
            let num = &self.num + &other.num.scale(real(sign));
            return Self::new(num, self.den.clone()).expect("nonzero denominator");
        }
        let num = &(&self.num * &other.den) + &(&other.num * &self.den).scale(real(sign));
        Self::new(num, &self.den * &other.den).expect("nonzero denominator")
    }
}

impl<T: Scalar> Add for &RationalFunction<T> {
    type Output = RationalFunction<T>;
    fn add(self, rhs: Self) -> RationalFunction<T> {
        self.combine(rhs, T::one())
    }
}

impl<T: Scalar> Sub for &RationalFunction<T> {
    type Output = RationalFunction<T>;
    fn sub(self, rhs: Self) -> RationalFunction<T> {
        self.combine(rhs, -T::one())
    }
}

impl<T: Scalar> Mul for &RationalFunction<T> {
    type Output = RationalFunction<T>;
    fn mul(self, rhs: Self) -> RationalFunction<T> {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero denominator")
    }
}

impl<T: Scalar> Neg for &RationalFunction<T> {
    type Output = RationalFunction<T>;
    fn neg(self) -> RationalFunction<T> {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

/// Finite Blaschke product `c · Π (z − a_k)/(1 − conj(a_k) z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlaschkeProduct<T: Scalar> {
    zeros: Vec<Complex<T>>,
    unimodular_constant: Complex<T>,
}

impl<T: Scalar> BlaschkeProduct<T> {
    /// Rejects zeros with `|a| > 1 − 1e-10` and constants off the unit circle.
    pub fn new(zeros: Vec<Complex<T>>, unimodular_constant: Complex<T>) -> Result<Self> {
        let limit = T::one() - interior_tol::<T>();
        if let Some(bad) = zeros.iter().find(|a| cabs(**a) > limit) {
            return Err(RifError::InvalidArgument(format!(
                "Blaschke zero {} is not strictly inside the disk",
                to_f64(cabs(*bad))
            )));
        }
        let m = cabs(unimodular_constant);
        if (m - T::one()).abs() > lit::<T>(1e-10).max(lit::<T>(16.0) * epsilon::<T>()) {
            return Err(RifError::InvalidArgument(format!(
                "Blaschke constant has modulus {}",
                to_f64(m)
            )));
        }
        Ok(Self {
            zeros,
            unimodular_constant: unimodular_constant / real(m),
        })
    }

    /// Single factor `(z − a)/(1 − conj(a) z)`.
    pub fn factor(a: Complex<T>) -> Result<Self> {
        Self::new(vec![a], cone())
    }

    pub fn zeros(&self) -> &[Complex<T>] {
        &self.zeros
    }

    pub fn unimodular_constant(&self) -> Complex<T> {
        self.unimodular_constant
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.zeros.iter().fold(self.unimodular_constant, |acc, &a| {
            acc * (z - a) / (cone::<T>() - a.conj() * z)
        })
    }

    pub fn to_rational(&self) -> RationalFunction<T> {
        let num = ComplexPolynomial::from_roots(&self.zeros, self.unimodular_constant);
        let den = self.zeros.iter().fold(ComplexPolynomial::one(), |acc, a| {
            &acc * &ComplexPolynomial::new(vec![cone(), -a.conj()])
        });
        RationalFunction::new_unreduced(num, den).expect("nonzero denominator")
    }
}
