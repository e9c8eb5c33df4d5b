//! Principal-series representations of M(2) on `L²(S¹)`, their generators,
//! and the one-dimensional characters attached to point orbits.
//!
//! Functions on the circle are truncated Fourier series `f(θ) = Σ_{|n|≤N} f_n e^{inθ}`.
//! `U^a_{(φ,r)} f(θ) = e^{ia(r1 cosθ + r2 sinθ)} f(θ − φ)`; its generator is
//! `l̂_U = c1 ∂_θ + ia(c2 cosθ + c3 sinθ)`, tridiagonal on coefficients.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::coadjoint::Orbit;
use crate::error::{Error, Result};
use crate::lie::{sinc, GroupElement, LieAlgebraElement};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Coefficients below this magnitude count as empty when checking headroom.
pub const HEADROOM_TOL: f64 = 1e-12;

/// Truncated Fourier series on the circle, modes `−N ..= N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CircleJson", into = "CircleJson")]
pub struct CircleFunction {
    n: usize,
    coeffs: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct CircleJson {
    #[serde(rename = "N")]
    n: usize,
    coeffs: Vec<[f64; 2]>,
}

impl TryFrom<CircleJson> for CircleFunction {
    type Error = Error;
    fn try_from(j: CircleJson) -> Result<Self> {
        Self::new(
            j.n,
            j.coeffs
                .iter()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect(),
        )
    }
}

impl From<CircleFunction> for CircleJson {
    fn from(f: CircleFunction) -> Self {
        CircleJson {
            n: f.n,
            coeffs: f.coeffs.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl CircleFunction {
    pub fn new(n: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != 2 * n + 1 {
            return Err(Error::Shape(format!(
                "N = {n} needs {} coefficients, got {}",
                2 * n + 1,
                coeffs.len()
            )));
        }
        Ok(Self { n, coeffs })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            coeffs: vec![ZERO; 2 * n + 1],
        }
    }

    /// `e^{imθ}`.
    pub fn mode(n: usize, m: i64) -> Result<Self> {
        let mut f = Self::zeros(n);
        if m.unsigned_abs() as usize > n {
            return Err(Error::InvalidArgument(format!("mode {m} outside ±{n}")));
        }
        f.set(m, Complex64::new(1.0, 0.0));
        Ok(f)
    }

    /// Project a function onto modes `−N ..= N` by sampling it on `samples` points.
    pub fn from_fn<F: Fn(f64) -> Complex64>(n: usize, samples: usize, f: F) -> Self {
        let m = samples.max(2 * n + 1);
        let values: Vec<Complex64> = (0..m).map(|j| f(2.0 * PI * j as f64 / m as f64)).collect();
        Sampler::new(m).project(&values, n)
    }

    pub fn cutoff(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient `f_m`; zero outside the stored band.
    pub fn get(&self, m: i64) -> Complex64 {
        if m.unsigned_abs() as usize > self.n {
            ZERO
        } else {
            self.coeffs[(m + self.n as i64) as usize]
        }
    }

    pub fn set(&mut self, m: i64, v: Complex64) {
        let idx = (m + self.n as i64) as usize;
        self.coeffs[idx] = v;
    }

    pub fn modes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let n = self.n as i64;
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, &c)| (i as i64 - n, c))
    }

    /// Parseval norm `(Σ |f_n|²)^{1/2}`.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `Σ conj(f_n) g_n`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        self.modes()
            .map(|(m, c)| c * Complex64::from_polar(1.0, m as f64 * theta))
            .sum()
    }

    pub fn map_coeffs<F: Fn(i64, Complex64) -> Complex64>(&self, f: F) -> Self {
        Self {
            n: self.n,
            coeffs: self.modes().map(|(m, c)| f(m, c)).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map_coeffs(|_, c| c * s)
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::Shape(format!("cutoff {} vs {}", self.n, other.n)))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(self.map_coeffs(|m, c| c + other.get(m)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(self.map_coeffs(|m, c| c - other.get(m)))
    }

    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.norm())
    }

    /// `f(θ − φ)`: coefficient `f_n e^{−inφ}`.
    pub fn rotate(&self, phi: f64) -> Self {
        self.map_coeffs(|m, c| c * Complex64::from_polar(1.0, -(m as f64) * phi))
    }

    /// Error unless every `|f_n| < HEADROOM_TOL` for `|n| > N/2`.
    pub fn check_headroom(&self) -> Result<()> {
        let limit = self.n / 2;
        for (m, c) in self.modes() {
            if m.unsigned_abs() as usize > limit && c.norm() >= HEADROOM_TOL {
                return Err(Error::ModeHeadroom {
                    mode: m,
                    magnitude: c.norm(),
                    limit,
                });
            }
        }
        Ok(())
    }

    /// Samples on `4N` points (at least `2N + 1`).
    fn oversampled(&self) -> (Sampler, Vec<Complex64>) {
        let sampler = Sampler::new((4 * self.n).max(2 * self.n + 1).max(4));
        let values = sampler.synthesize(self);
        (sampler, values)
    }

    /// Pointwise multiplication by `m(θ)` on the oversampled grid, projected back.
    pub fn multiply_by<F: Fn(f64) -> Complex64>(&self, multiplier: F) -> Self {
        let (sampler, mut values) = self.oversampled();
        for (j, v) in values.iter_mut().enumerate() {
            *v *= multiplier(sampler.theta(j));
        }
        sampler.project(&values, self.n)
    }
}

/// Uniform circle grid with FFT plans.
struct Sampler {
    m: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl Sampler {
    fn new(m: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            m,
            fwd: planner.plan_fft_forward(m),
            inv: planner.plan_fft_inverse(m),
        }
    }

    fn theta(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.m as f64
    }

    fn synthesize(&self, f: &CircleFunction) -> Vec<Complex64> {
        let mut buf = vec![ZERO; self.m];
        for (k, c) in f.modes() {
            buf[k.rem_euclid(self.m as i64) as usize] += c;
        }
        self.inv.process(&mut buf);
        buf
    }

    fn project(&self, values: &[Complex64], n: usize) -> CircleFunction {
        let mut buf = values.to_vec();
        self.fwd.process(&mut buf);
        let scale = 1.0 / self.m as f64;
        let mut out = CircleFunction::zeros(n);
        for k in -(n as i64)..=n as i64 {
            out.set(k, buf[k.rem_euclid(self.m as i64) as usize] * scale);
        }
        out
    }
}

fn check_radius(a: f64) -> Result<()> {
    if a.is_nan() || a <= 0.0 {
        Err(Error::NonPositiveRadius(a))
    } else {
        Ok(())
    }
}

/// `(U^a_g f)(θ) = e^{ia(r1 cosθ + r2 sinθ)} f(θ − φ)`.
pub fn rep_apply(g: &GroupElement, a: f64, f: &CircleFunction) -> Result<CircleFunction> {
    check_radius(a)?;
    let rotated = f.rotate(g.phi);
    if g.r == [0.0, 0.0] {
        return Ok(rotated);
    }
    f.check_headroom()?;
    let [r1, r2] = g.r;
    Ok(rotated.multiply_by(|th| Complex64::from_polar(1.0, a * (r1 * th.cos() + r2 * th.sin()))))
}

/// `U^a_{exp tU} f` from the two-branch closed form: for `c1 ≠ 0`
/// `e^{ia[(c2/c1)(sin(tc1+θ) − sinθ) − (c3/c1)(cos(tc1+θ) − cosθ)]} f(θ + tc1)`,
/// for `c1 = 0` `e^{iat(c2 cosθ + c3 sinθ)} f(θ)`.
pub fn rep_one_param(
    u: LieAlgebraElement,
    t: f64,
    a: f64,
    f: &CircleFunction,
) -> Result<CircleFunction> {
    check_radius(a)?;
    let LieAlgebraElement { c1, c2, c3 } = u;
    let translates = t != 0.0 && (c2 != 0.0 || c3 != 0.0);
    if translates {
        f.check_headroom()?;
    }
    if c1 == 0.0 {
        if !translates {
            return Ok(f.clone());
        }
        return Ok(f.multiply_by(|th| {
            Complex64::from_polar(1.0, a * t * (c2 * th.cos() + c3 * th.sin()))
        }));
    }
    let shifted = f.rotate(-t * c1);
    if !translates {
        return Ok(shifted);
    }
    // sin(A+θ) − sinθ = 2 sin(A/2) cos(θ + A/2), cos(A+θ) − cosθ = −2 sin(A/2) sin(θ + A/2);
    // 2 sin(A/2)/c1 = t·sinc(A/2) with A = t·c1
    let half = t * c1 / 2.0;
    let amp = t * sinc(half);
    Ok(shifted.multiply_by(|th| {
        let mid = th + half;
        Complex64::from_polar(1.0, a * amp * (c2 * mid.cos() + c3 * mid.sin()))
    }))
}

/// `l̂_U f = c1 f' + ia(c2 cosθ + c3 sinθ) f` on coefficients:
/// `(l̂f)_n = i n c1 f_n + (ia/2)(c2 − ic3) f_{n−1} + (ia/2)(c2 + ic3) f_{n+1}`.
/// Couplings to `±(N+1)` are dropped.
pub fn lhat_apply(u: LieAlgebraElement, a: f64, f: &CircleFunction) -> Result<CircleFunction> {
    check_radius(a)?;
    Ok(lhat_unchecked(u, a, f))
}

fn lhat_unchecked(u: LieAlgebraElement, a: f64, f: &CircleFunction) -> CircleFunction {
    let up = I * (a / 2.0) * Complex64::new(u.c2, -u.c3);
    let down = I * (a / 2.0) * Complex64::new(u.c2, u.c3);
    f.map_coeffs(|m, c| I * (m as f64 * u.c1) * c + up * f.get(m - 1) + down * f.get(m + 1))
}

/// Relative norm drift above which [`evolve`] reports instability.
pub const EVOLVE_DRIFT_LIMIT: f64 = 1e-3;

/// Integrate `dS/dt = l̂_U S`, `S(0) = f0`, with classical RK4 on coefficients.
pub fn evolve(
    u: LieAlgebraElement,
    a: f64,
    f0: &CircleFunction,
    t: f64,
    dt: f64,
) -> Result<CircleFunction> {
    evolve_observed(u, a, f0, t, dt, |_, _| {})
}

/// [`evolve`] calling `observe(time, state)` after every step, and once at `t = 0`.
pub fn evolve_observed<O>(
    u: LieAlgebraElement,
    a: f64,
    f0: &CircleFunction,
    t: f64,
    dt: f64,
    mut observe: O,
) -> Result<CircleFunction>
where
    O: FnMut(f64, &CircleFunction),
{
    check_radius(a)?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "dt must be positive, got {dt}"
        )));
    }
    if !t.is_finite() {
        return Err(Error::InvalidArgument(format!("t must be finite, got {t}")));
    }
    if u.c2 != 0.0 || u.c3 != 0.0 {
        f0.check_headroom()?;
    }
    observe(0.0, f0);
    if t == 0.0 {
        return Ok(f0.clone());
    }
    let steps = (t.abs() / dt).round().max(1.0) as usize;
    let h = t / steps as f64;
    let norm0 = f0.norm();
    let op = |s: &CircleFunction| lhat_unchecked(u, a, s);
    let axpy =
        |x: &CircleFunction, k: &CircleFunction, w: f64| x.map_coeffs(|m, c| c + k.get(m) * w);
    let mut s = f0.clone();
    for step in 1..=steps {
        let k1 = op(&s);
        let k2 = op(&axpy(&s, &k1, h / 2.0));
        let k3 = op(&axpy(&s, &k2, h / 2.0));
        let k4 = op(&axpy(&s, &k3, h));
        s = s.map_coeffs(|m, c| {
            c + (k1.get(m) + 2.0 * k2.get(m) + 2.0 * k3.get(m) + k4.get(m)) * (h / 6.0)
        });
        if norm0 > 0.0 {
            let drift = (s.norm() - norm0).abs() / norm0;
            if drift > EVOLVE_DRIFT_LIMIT || !drift.is_finite() {
                return Err(Error::Instability { drift });
            }
        }
        observe(h * step as f64, &s);
    }
    Ok(s)
}

/// Largest relative defect of `[l̂_U, l̂_T] e^{inθ} = l̂_{[U,T]} e^{inθ}` over
/// `|n| ≤ N − 2`, on the cutoff-`N` space.
pub fn bracket_homomorphism_check(
    u: LieAlgebraElement,
    t: LieAlgebraElement,
    a: f64,
    n: usize,
) -> Result<f64> {
    check_radius(a)?;
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "cutoff must be ≥ 2, got {n}"
        )));
    }
    let b = u.bracket(t);
    let limit = (n - 2) as i64;
    let mut worst: f64 = 0.0;
    for m in -limit..=limit {
        let f = CircleFunction::mode(n, m)?;
        let ut = lhat_unchecked(u, a, &lhat_unchecked(t, a, &f));
        let tu = lhat_unchecked(t, a, &lhat_unchecked(u, a, &f));
        let lhs = ut.sub(&tu)?;
        let rhs = lhat_unchecked(b, a, &f);
        worst = worst.max(lhs.distance(&rhs)? / f.norm());
    }
    Ok(worst)
}

/// Scalar generator of the point-orbit representation: `l_U = i c1 μ`.
pub fn point_generator(u: LieAlgebraElement, mu: f64) -> Complex64 {
    I * (u.c1 * mu)
}

/// `χ_μ(exp tX) = e^{itμ}`.
pub fn trivial_rep(mu: f64, t: f64) -> Complex64 {
    Complex64::from_polar(1.0, t * mu)
}

/// Representation class attached to a coadjoint orbit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepresentationLabel {
    /// `U^a`, the principal series at radius `a`.
    Principal(f64),
    /// `χ_n ∘ p` for an integer point orbit.
    Character(i64),
    /// `χ_μ ∘ p` with `μ ∉ ℤ`: not a representation of M(2) itself.
    CharacterNonIntegral(f64),
}

impl RepresentationLabel {
    /// Whether the label names a unitary irreducible representation of M(2).
    pub fn is_uir(&self) -> bool {
        !matches!(self, RepresentationLabel::CharacterNonIntegral(_))
    }
}

/// Cylinders map to the principal series, integer points to characters.
pub fn classify_rep(orbit: &Orbit) -> RepresentationLabel {
    match *orbit {
        Orbit::Cylinder { radius } => RepresentationLabel::Principal(radius),
        Orbit::Point { mu } if mu.fract() == 0.0 && mu.abs() < i64::MAX as f64 => {
            RepresentationLabel::Character(mu as i64)
        }
        Orbit::Point { mu } => RepresentationLabel::CharacterNonIntegral(mu),
    }
}
