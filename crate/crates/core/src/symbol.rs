//! Exact Moyal star-product on cylinder symbols `Σ c_{k,n} x^k e^{inθ}`.
//!
//! With the Poisson tensor of `dx ∧ dθ`, the bidifferential operators are
//!
//! ```text
//! P^r(f, g) = Σ_m C(r, m) (−1)^{r−m} (∂_x^m ∂_θ^{r−m} f)(∂_x^{r−m} ∂_θ^m g)
//! ```
//!
//! and `f ⋆ g = Σ_r (1/r!)(1/2i)^r P^r(f, g)`. On symbols polynomial in `x`
//! the sum stops at `r = xdeg f + xdeg g`, so the product is computed exactly.
//! Coefficients are generic: [`ExactComplex`] (big rationals) for the
//! identities that should hold exactly, `Complex64` otherwise.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::LieAlgebraElement;

/// Complex number with arbitrary-precision rational parts.
pub type ExactComplex = Complex<BigRational>;

/// Field of symbol coefficients.
pub trait Coefficient:
    Clone
    + PartialEq
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    /// The imaginary unit.
    fn i() -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn conj(&self) -> Self;
    /// Returns `None` when the parts cannot be represented (non-finite input).
    fn from_parts(re: f64, im: f64) -> Option<Self>;
    fn to_parts(&self) -> (f64, f64);

    fn to_complex64(&self) -> Complex64 {
        let (re, im) = self.to_parts();
        Complex64::new(re, im)
    }
}

impl Coefficient for ExactComplex {
    fn zero() -> Self {
        Complex::new(BigRational::zero(), BigRational::zero())
    }
    fn one() -> Self {
        Complex::new(BigRational::one(), BigRational::zero())
    }
    fn i() -> Self {
        Complex::new(BigRational::zero(), BigRational::one())
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn from_parts(re: f64, im: f64) -> Option<Self> {
        // every finite double is a dyadic rational, so this is exact
        Some(Complex::new(
            BigRational::from_float(re)?,
            BigRational::from_float(im)?,
        ))
    }
    fn to_parts(&self) -> (f64, f64) {
        (
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl Coefficient for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn i() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn from_parts(re: f64, im: f64) -> Option<Self> {
        (re.is_finite() && im.is_finite()).then(|| Complex64::new(re, im))
    }
    fn to_parts(&self) -> (f64, f64) {
        (self.re, self.im)
    }
}

/// Exact rational `p/q` as an exact complex coefficient.
pub fn rational(p: i64, q: i64) -> ExactComplex {
    ExactComplex::from_ratio(p, q)
}

/// Exact complex `(a/d) + i(b/d)`.
pub fn exact_complex(a: i64, b: i64, d: i64) -> ExactComplex {
    Complex::new(
        BigRational::new(a.into(), d.into()),
        BigRational::new(b.into(), d.into()),
    )
}

/// A finite sum `Σ c_{k,n} x^k e^{inθ}` kept in canonical form: terms ordered
/// by `(k, n)` and no zero coefficients stored.
#[derive(Debug, Clone, PartialEq)]
pub struct CylinderSymbol<C: Coefficient = ExactComplex> {
    terms: BTreeMap<(u32, i64), C>,
}

pub type ExactSymbol = CylinderSymbol<ExactComplex>;
pub type FloatSymbol = CylinderSymbol<Complex64>;

impl<C: Coefficient> Default for CylinderSymbol<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> CylinderSymbol<C> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    /// `c · x^k e^{inθ}`.
    pub fn monomial(k: u32, n: i64, c: C) -> Self {
        let mut s = Self::zero();
        s.add_term(k, n, c);
        s
    }

    /// The coordinate function `x`.
    pub fn x() -> Self {
        Self::monomial(1, 0, C::one())
    }

    /// `cos θ = (e^{iθ} + e^{−iθ})/2`.
    pub fn cos() -> Self {
        let half = C::from_ratio(1, 2);
        Self::from_terms([(0, 1, half.clone()), (0, -1, half)])
    }

    /// `sin θ = (e^{iθ} − e^{−iθ})/(2i)`.
    pub fn sin() -> Self {
        let h = C::from_ratio(1, 2) * C::i();
        Self::from_terms([(0, 1, -h.clone()), (0, -1, h)])
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, i64, C)>>(terms: I) -> Self {
        let mut s = Self::zero();
        for (k, n, c) in terms {
            s.add_term(k, n, c);
        }
        s
    }

    fn add_term(&mut self, k: u32, n: i64, c: C) {
        if c.is_zero() {
            return;
        }
        let key = (k, n);
        let sum = match self.terms.remove(&key) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    /// Iterate `(k, n, c_{k,n})` in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, i64, &C)> {
        self.terms.iter().map(|(&(k, n), c)| (k, n, c))
    }

    pub fn coeff(&self, k: u32, n: i64) -> C {
        self.terms.get(&(k, n)).cloned().unwrap_or_else(C::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest power of `x`; zero for the zero symbol.
    pub fn xdeg(&self) -> u32 {
        self.terms.keys().map(|&(k, _)| k).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(self.terms().map(|(k, n, v)| (k, n, v.clone() * c.clone())))
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (k1, n1, a) in self.terms() {
            for (k2, n2, b) in other.terms() {
                out.add_term(k1 + k2, n1 + n2, a.clone() * b.clone());
            }
        }
        out
    }

    /// Complex conjugate: `c_{k,n} ↦ conj(c_{k,−n})`.
    pub fn conj(&self) -> Self {
        Self::from_terms(self.terms().map(|(k, n, c)| (k, -n, c.conj())))
    }

    /// Real-valued iff `c_{k,−n} = conj(c_{k,n})` for every term.
    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// `∂_x^a ∂_θ^b`.
    pub fn derivative(&self, a: u32, b: u32) -> Self {
        let mut out = Self::zero();
        for (k, n, c) in self.terms() {
            if k < a {
                continue;
            }
            let mut v = c.clone();
            for j in 0..a {
                v = v * C::from_ratio(i64::from(k - j), 1);
            }
            let theta_factor = C::from_ratio(n, 1) * C::i();
            for _ in 0..b {
                v = v * theta_factor.clone();
            }
            out.add_term(k - a, n, v);
        }
        out
    }

    /// Poisson bracket `∂_x f ∂_θ g − ∂_θ f ∂_x g`.
    pub fn poisson(&self, other: &Self) -> Self {
        self.derivative(1, 0).mul(&other.derivative(0, 1))
            - self.derivative(0, 1).mul(&other.derivative(1, 0))
    }

    /// The bidifferential operator `P^r(f, g)`.
    pub fn p_r(&self, other: &Self, r: u32) -> Self {
        let mut out = Self::zero();
        let mut binom: i64 = 1;
        for m in 0..=r {
            if m > 0 {
                binom = binom * i64::from(r - m + 1) / i64::from(m);
            }
            // ∂_x^m f needs k ≥ m, ∂_x^{r−m} g needs k ≥ r − m
            if m <= self.xdeg() && r - m <= other.xdeg() {
                let left = self.derivative(m, r - m);
                let right = other.derivative(r - m, m);
                let sign = if (r - m) % 2 == 0 { binom } else { -binom };
                out = out + left.mul(&right).scale(&C::from_ratio(sign, 1));
            }
        }
        out
    }

    /// Moyal product `f ⋆ g` with `λ = 1/(2i)`, summed exactly.
    pub fn star(&self, other: &Self) -> Self {
        let mut out = self.mul(other);
        // factor_r = (1/r!)(1/2i)^r, built as factor_{r−1} · (−i)/(2r)
        let mut factor = C::one();
        for r in 1..=self.xdeg() + other.xdeg() {
            factor = factor * C::from_ratio(1, 2 * i64::from(r)) * -C::i();
            let p = self.p_r(other, r);
            if !p.is_zero() {
                out = out + p.scale(&factor);
            }
        }
        out
    }

    /// Deformed bracket `(1/2λ)(f⋆g − g⋆f) = i(f⋆g − g⋆f)`.
    pub fn star_commutator(&self, other: &Self) -> Self {
        (self.star(other) - other.star(self)).scale(&C::i())
    }

    /// Evaluate at `(x, θ)` in double precision.
    pub fn eval(&self, x: f64, theta: f64) -> Complex64 {
        self.terms()
            .fold(Complex64::new(0.0, 0.0), |acc, (k, n, c)| {
                acc + c.to_complex64()
                    * x.powi(k as i32)
                    * Complex64::from_polar(1.0, n as f64 * theta)
            })
    }

    /// Largest coefficient modulus, in double precision.
    pub fn max_abs(&self) -> f64 {
        self.terms()
            .map(|(_, _, c)| c.to_complex64().norm())
            .fold(0.0, f64::max)
    }

    pub fn to_float(&self) -> FloatSymbol {
        FloatSymbol::from_terms(self.terms().map(|(k, n, c)| (k, n, c.to_complex64())))
    }

    /// JSON rows `{"k", "n", "re", "im"}` in canonical order.
    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms()
            .map(|(k, n, c)| {
                let (re, im) = c.to_parts();
                TermRecord { k, n, re, im }
            })
            .collect()
    }

    pub fn from_records(records: &[TermRecord]) -> Result<Self> {
        let mut s = Self::zero();
        for rec in records {
            let c = C::from_parts(rec.re, rec.im).ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "non-finite coefficient at (k={}, n={})",
                    rec.k, rec.n
                ))
            })?;
            s.add_term(rec.k, rec.n, c);
        }
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_records()).expect("symbol records serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let records: Vec<TermRecord> = serde_json::from_str(s)?;
        Self::from_records(&records)
    }
}

impl ExactSymbol {
    /// Convert from a float symbol. Exact, since finite doubles are dyadic.
    pub fn from_float(f: &FloatSymbol) -> Result<Self> {
        Self::from_records(&f.to_records())
    }
}

impl<C: Coefficient> Add for CylinderSymbol<C> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (k, n, c) in rhs.terms.into_iter().map(|((k, n), c)| (k, n, c)) {
            self.add_term(k, n, c);
        }
        self
    }
}

impl<C: Coefficient> Sub for CylinderSymbol<C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<C: Coefficient> Neg for CylinderSymbol<C> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            terms: self.terms.into_iter().map(|(key, c)| (key, -c)).collect(),
        }
    }
}

/// One JSON row of a serialized symbol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub k: u32,
    pub n: i64,
    pub re: f64,
    pub im: f64,
}

/// The Hamiltonian of `U` on the cylinder of radius `a` as a symbol:
/// `c1·x + (a/2)(c2 − ic3)e^{iθ} + (a/2)(c2 + ic3)e^{−iθ}`.
pub fn embed_hamiltonian<C: Coefficient>(
    u: LieAlgebraElement,
    radius: f64,
) -> Result<CylinderSymbol<C>> {
    if radius.is_nan() || radius <= 0.0 {
        return Err(Error::NonPositiveRadius(radius));
    }
    let coeffs = |v: f64| {
        C::from_parts(v, 0.0).ok_or_else(|| Error::InvalidArgument(format!("non-finite value {v}")))
    };
    embed_hamiltonian_with(coeffs(u.c1)?, coeffs(u.c2)?, coeffs(u.c3)?, coeffs(radius)?)
}

/// [`embed_hamiltonian`] with coefficients already in the target field, so
/// that rational data (`1/3`, say) stays exact.
pub fn embed_hamiltonian_with<C: Coefficient>(
    c1: C,
    c2: C,
    c3: C,
    radius: C,
) -> Result<CylinderSymbol<C>> {
    let half = C::from_ratio(1, 2) * radius;
    let ic3 = C::i() * c3;
    Ok(CylinderSymbol::from_terms([
        (1, 0, c1),
        (0, 1, half.clone() * (c2.clone() - ic3.clone())),
        (0, -1, half * (c2 + ic3)),
    ]))
}

/// Outcome of [`covariance_check`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CovarianceReport {
    pub radius: f64,
    pub pairs_checked: usize,
    pub failures: usize,
    /// Largest coefficient of `[Ũ, T̃]_⋆ − widetilde{[U, T]}` over all pairs.
    pub max_residual: f64,
}

impl CovarianceReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Residual symbol `[Ũ, T̃]_⋆ − widetilde{[U, T]}` for one pair, in exact arithmetic.
pub fn covariance_residual(
    u: [ExactComplex; 3],
    t: [ExactComplex; 3],
    radius: &ExactComplex,
) -> ExactSymbol {
    let [u1, u2, u3] = u;
    let [t1, t2, t3] = t;
    // [U, T] = (0, c1c3' − c1'c3, c1'c2 − c1c2')
    let b2 = u1.clone() * t3.clone() - t1.clone() * u3.clone();
    let b3 = t1.clone() * u2.clone() - u1.clone() * t2.clone();
    let hu = embed_hamiltonian_with(u1, u2, u3, radius.clone()).expect("exact embed");
    let ht = embed_hamiltonian_with(t1, t2, t3, radius.clone()).expect("exact embed");
    let hb = embed_hamiltonian_with(
        <ExactComplex as Coefficient>::zero(),
        b2,
        b3,
        radius.clone(),
    )
    .expect("exact embed");
    hu.star_commutator(&ht) - hb
}

/// Check the relative-quantization identity `i(Ũ⋆T̃ − T̃⋆Ũ) = widetilde{[U, T]}`
/// exactly, over all basis pairs plus the supplied extra pairs.
pub fn covariance_check(
    radius: f64,
    extra_pairs: &[(LieAlgebraElement, LieAlgebraElement)],
) -> Result<CovarianceReport> {
    if radius.is_nan() || radius <= 0.0 {
        return Err(Error::NonPositiveRadius(radius));
    }
    let exact = |v: f64| {
        ExactComplex::from_parts(v, 0.0)
            .ok_or_else(|| Error::InvalidArgument(format!("non-finite value {v}")))
    };
    let ex = |u: LieAlgebraElement| -> Result<[ExactComplex; 3]> {
        Ok([exact(u.c1)?, exact(u.c2)?, exact(u.c3)?])
    };
    let a = exact(radius)?;
    let basis = LieAlgebraElement::basis();
    let mut pairs: Vec<_> = basis
        .iter()
        .flat_map(|&u| basis.iter().map(move |&t| (u, t)))
        .collect();
    pairs.extend_from_slice(extra_pairs);

    let mut report = CovarianceReport {
        radius,
        pairs_checked: 0,
        failures: 0,
        max_residual: 0.0,
    };
    for (u, t) in pairs {
        let res = covariance_residual(ex(u)?, ex(t)?, &a);
        report.pairs_checked += 1;
        if !res.is_zero() {
            report.failures += 1;
            report.max_residual = report.max_residual.max(res.max_abs());
        }
    }
    Ok(report)
}
