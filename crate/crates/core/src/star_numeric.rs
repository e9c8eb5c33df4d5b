//! Grid-level Moyal calculus on the cylinder.
//!
//! Left multiplication `l_U f = i(Ũ ⋆ f)` is summed as a series in `r`. Since
//! `Ũ = c1x + a(c2 cosθ + c3 sinθ)` is affine in `x`, every `P^r(Ũ, f)` with
//! `r ≥ 2` reduces to `(−1)^r ∂_θ^r Ũ · ∂_x^r f`. The `x`-derivatives are
//! spectral. Conjugating by the partial Fourier transform `F_x` turns the
//! series into the first-order operator
//! `c1(½∂_θ − ∂_η) + i a (c2 cos(θ − η/2) + c3 sin(θ − η/2))`, which is what
//! [`conjugation_residual`] compares against.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{derivative_symbol, signed_index, Domain, GridFunction, Plans};
use crate::lie::LieAlgebraElement;

/// Magnitude below which a grid function counts as decayed at the `x` boundary.
pub const BOUNDARY_DECAY: f64 = 1e-12;

/// Spectral coefficients below this fraction of the peak are treated as
/// round-off and dropped before high-order differentiation.
pub const SPECTRAL_NOISE_FLOOR: f64 = 1e-14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Stopping rule for the `r`-series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTruncation {
    /// Stop at the first `r ≥ 2` whose term norm is below `tol` times the
    /// reference norm.
    pub tol: f64,
    /// Give up after this many terms.
    pub r_max: usize,
}

impl Default for SeriesTruncation {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            r_max: 80,
        }
    }
}

/// Result of a partial Fourier transform, with the decay check attached.
#[derive(Debug, Clone, PartialEq)]
pub struct Transformed {
    pub grid: GridFunction,
    /// Boundary magnitude of the input when it exceeds [`BOUNDARY_DECAY`].
    pub boundary_warning: Option<f64>,
}

fn decay_warning(f: &GridFunction) -> Option<f64> {
    let b = f.boundary_max();
    (b >= BOUNDARY_DECAY).then_some(b)
}

/// `(F_x f)(η, θ) = ∫ e^{−iηx} f(x, θ) dx/√(2π)` on the grid, as a scaled DFT
/// along `x`. The output's first axis is `η`.
pub fn partial_fourier(f: &GridFunction) -> Transformed {
    let (nx, nt) = (f.nx(), f.ntheta());
    let plans = Plans::for_grid(f);
    let mut v = f.values().to_vec();
    plans.along_x(&mut v, false);
    let scale = f.dx() / (2.0 * PI).sqrt();
    let mut out = vec![ZERO; nx * nt];
    for q in 0..nx {
        let j = signed_index(q, nx);
        let p = (j + (nx / 2) as i64) as usize;
        let s = if j % 2 == 0 { scale } else { -scale };
        for t in 0..nt {
            out[p * nt + t] = v[q * nt + t] * s;
        }
    }
    Transformed {
        grid: f.with_values(out),
        boundary_warning: decay_warning(f),
    }
}

/// Inverse of [`partial_fourier`]:
/// `(F_x⁻¹ f)(x, θ) = ∫ e^{iηx} f(η, θ) dη/√(2π)`.
pub fn inverse_partial_fourier(f: &GridFunction) -> Transformed {
    let (nx, nt) = (f.nx(), f.ntheta());
    let plans = Plans::for_grid(f);
    let scale = f.deta() / (2.0 * PI).sqrt();
    let mut w = vec![ZERO; nx * nt];
    for p in 0..nx {
        let j = p as i64 - (nx / 2) as i64;
        let q = j.rem_euclid(nx as i64) as usize;
        let s = if j % 2 == 0 { scale } else { -scale };
        for t in 0..nt {
            w[q * nt + t] = f.values()[p * nt + t] * s;
        }
    }
    plans.along_x(&mut w, true);
    Transformed {
        grid: f.with_values(w),
        boundary_warning: decay_warning(f),
    }
}

/// `r`-th θ-derivative of `cos` and `sin`, without rounding in `rπ/2`.
fn trig_derivative(r: usize, c: f64, s: f64) -> (f64, f64) {
    match r % 4 {
        0 => (c, s),
        1 => (-s, c),
        2 => (-c, -s),
        _ => (s, -c),
    }
}

/// `∂_θ^r` of the trigonometric part `a(c2 cosθ + c3 sinθ)` of `Ũ`.
fn hamiltonian_trig_derivative(u: LieAlgebraElement, radius: f64, theta: f64, r: usize) -> f64 {
    let (s, c) = theta.sin_cos();
    let (dc, ds) = trig_derivative(r, c, s);
    radius * (u.c2 * dc + u.c3 * ds)
}

/// Zero spectral coefficients below the noise floor relative to the peak.
fn clip_noise(v: &mut [Complex64]) {
    let peak = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let floor = peak * SPECTRAL_NOISE_FLOOR;
    for z in v.iter_mut() {
        if z.norm() < floor {
            *z = ZERO;
        }
    }
}

fn weighted_norm(values: &[Complex64], weight: f64) -> f64 {
    (values.iter().map(|v| v.norm_sqr()).sum::<f64>() * weight).sqrt()
}

/// Spectral `∂_θ` of a whole grid.
fn theta_derivative(plans: &Plans, f: &GridFunction) -> Vec<Complex64> {
    let nt = f.ntheta();
    let mut v = f.values().to_vec();
    plans.along_theta(&mut v, false);
    for row in v.chunks_exact_mut(nt) {
        for (q, z) in row.iter_mut().enumerate() {
            *z *= derivative_symbol(q, nt, signed_index(q, nt) as f64, 1) / nt as f64;
        }
    }
    plans.along_theta(&mut v, true);
    v
}

/// An evaluated series with its per-order term norms.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesOutcome {
    pub value: GridFunction,
    /// Weighted L² norm of the `r`-th term, for `r = 0, 1, …`.
    pub term_norms: Vec<f64>,
}

/// `l_U f = i(Ũ ⋆ f)` on an `x`-space grid.
pub fn l_op(
    u: LieAlgebraElement,
    radius: f64,
    f: &GridFunction,
    trunc: SeriesTruncation,
) -> Result<GridFunction> {
    l_op_series(u, radius, f, trunc).map(|s| s.value)
}

/// [`l_op`], also returning the term norms.
pub fn l_op_series(
    u: LieAlgebraElement,
    radius: f64,
    f: &GridFunction,
    trunc: SeriesTruncation,
) -> Result<SeriesOutcome> {
    l_op_series_inner(u, radius, f, trunc, None)
}

/// Evaluate exactly `terms` orders of the `l_U` series, ignoring the stopping
/// rule. Used to watch term decay.
pub fn l_op_term_norms(
    u: LieAlgebraElement,
    radius: f64,
    f: &GridFunction,
    terms: usize,
) -> Result<Vec<f64>> {
    let trunc = SeriesTruncation {
        tol: 0.0,
        r_max: terms.saturating_sub(1),
    };
    l_op_series_inner(u, radius, f, trunc, Some(terms)).map(|s| s.term_norms)
}

fn l_op_series_inner(
    u: LieAlgebraElement,
    radius: f64,
    f: &GridFunction,
    trunc: SeriesTruncation,
    fixed_terms: Option<usize>,
) -> Result<SeriesOutcome> {
    if radius.is_nan() || radius <= 0.0 {
        return Err(Error::NonPositiveRadius(radius));
    }
    let (nx, nt) = (f.nx(), f.ntheta());
    let weight = f.dx() * f.dtheta();
    let f_norm = f.norm(Domain::Position);
    if f_norm == 0.0 && fixed_terms.is_none() {
        return Ok(SeriesOutcome {
            value: f.clone(),
            term_norms: vec![0.0],
        });
    }
    let plans = Plans::for_grid(f);
    let thetas: Vec<f64> = (0..nt).map(|j| f.theta(j)).collect();
    let trig = |r: usize| -> Vec<f64> {
        thetas
            .iter()
            .map(|&th| hamiltonian_trig_derivative(u, radius, th, r))
            .collect()
    };

    let mut spectrum = f.values().to_vec();
    plans.along_x(&mut spectrum, false);
    clip_noise(&mut spectrum);
    let wavenumber: Vec<f64> = (0..nx)
        .map(|q| PI * signed_index(q, nx) as f64 / f.x_extent())
        .collect();

    // r = 0: Ũ f
    let trig0 = trig(0);
    let mut sum: Vec<Complex64> = (0..nx * nt)
        .map(|idx| {
            let (i, j) = (idx / nt, idx % nt);
            f.values()[idx] * (u.c1 * f.x(i) + trig0[j])
        })
        .collect();
    let mut term_norms = vec![weighted_norm(&sum, weight)];

    // r = 1: (1/2i)(c1 ∂_θ f − ∂_θŨ ∂_x f)
    let dtheta_f = theta_derivative(&plans, f);
    let mut dx_f: Vec<Complex64> = spectrum
        .iter()
        .enumerate()
        .map(|(idx, &z)| {
            let q = idx / nt;
            z * derivative_symbol(q, nx, wavenumber[q], 1) / nx as f64
        })
        .collect();
    plans.along_x(&mut dx_f, true);
    let trig1 = trig(1);
    let half_over_i = Complex64::new(0.0, -0.5);
    let term1: Vec<Complex64> = (0..nx * nt)
        .map(|idx| half_over_i * (dtheta_f[idx] * u.c1 - dx_f[idx] * trig1[idx % nt]))
        .collect();
    term_norms.push(weighted_norm(&term1, weight));
    for (s, t) in sum.iter_mut().zip(&term1) {
        *s += t;
    }

    // r ≥ 2: (1/r!)(i/2)^r ∂_θ^rŨ ∂_x^r f. In η-space, (i/2)^r (iη)^r / r! = (−η/2)^r / r!.
    let mut weights = vec![1.0f64; nx];
    for (q, w) in weights.iter_mut().enumerate() {
        *w = if q == nx / 2 {
            0.0
        } else {
            -wavenumber[q] / 2.0
        };
    }
    let mut multiplier = weights.clone();
    let mut r = 2;
    let mut buf = vec![ZERO; nx * nt];
    loop {
        let stop_at = fixed_terms.map(|n| r >= n);
        if stop_at == Some(true) {
            break;
        }
        if fixed_terms.is_none() && r > trunc.r_max {
            return Err(Error::SeriesTruncation {
                r_max: trunc.r_max,
                last_norm: *term_norms.last().unwrap(),
            });
        }
        for (m, w) in multiplier.iter_mut().zip(&weights) {
            *m *= w / r as f64;
        }
        let trig_r = trig(r);
        for (idx, z) in buf.iter_mut().enumerate() {
            *z = spectrum[idx] * (multiplier[idx / nt] / nx as f64);
        }
        plans.along_x(&mut buf, true);
        for (idx, z) in buf.iter_mut().enumerate() {
            *z *= trig_r[idx % nt];
        }
        let norm = weighted_norm(&buf, weight);
        term_norms.push(norm);
        for (s, t) in sum.iter_mut().zip(&buf) {
            *s += t;
        }
        if fixed_terms.is_none() && norm < trunc.tol * f_norm {
            break;
        }
        r += 1;
    }

    for s in sum.iter_mut() {
        *s *= I;
    }
    Ok(SeriesOutcome {
        value: f.with_values(sum),
        term_norms,
    })
}

/// The closed-form conjugated operator on `η`-space data:
/// `c1(½∂_θ − ∂_η)f + i a (c2 cos(θ − η/2) + c3 sin(θ − η/2)) f`.
pub fn lhat_closed_form(
    u: LieAlgebraElement,
    radius: f64,
    f_eta: &GridFunction,
) -> Result<GridFunction> {
    if radius.is_nan() || radius <= 0.0 {
        return Err(Error::NonPositiveRadius(radius));
    }
    let (nx, nt) = (f_eta.nx(), f_eta.ntheta());
    let plans = Plans::for_grid(f_eta);
    let dtheta = theta_derivative(&plans, f_eta);

    // spectral ∂_η: the η grid has period Nx·Δη, conjugate wavenumbers j·Δx
    let mut deta = f_eta.values().to_vec();
    plans.along_x(&mut deta, false);
    let dual_step = 2.0 * PI / (nx as f64 * f_eta.deta());
    for (idx, z) in deta.iter_mut().enumerate() {
        let q = idx / nt;
        *z *= derivative_symbol(q, nx, dual_step * signed_index(q, nx) as f64, 1) / nx as f64;
    }
    plans.along_x(&mut deta, true);

    let values = (0..nx * nt)
        .map(|idx| {
            let (i, j) = (idx / nt, idx % nt);
            let s = f_eta.theta(j) - f_eta.eta(i) / 2.0;
            let mult = radius * (u.c2 * s.cos() + u.c3 * s.sin());
            (dtheta[idx] * 0.5 - deta[idx]) * u.c1 + I * mult * f_eta.values()[idx]
        })
        .collect();
    Ok(f_eta.with_values(values))
}

/// Relative L² distance between `F_x ∘ l_U ∘ F_x⁻¹` applied to `η`-space data
/// and [`lhat_closed_form`].
pub fn conjugation_residual(
    u: LieAlgebraElement,
    radius: f64,
    f_eta: &GridFunction,
    trunc: SeriesTruncation,
) -> Result<f64> {
    let closed = lhat_closed_form(u, radius, f_eta)?;
    let g = inverse_partial_fourier(f_eta).grid;
    let series = partial_fourier(&l_op(u, radius, &g, trunc)?).grid;
    let diff = series.sub(&closed)?.norm(Domain::Spectral);
    let scale = closed
        .norm(Domain::Spectral)
        .max(f_eta.norm(Domain::Spectral));
    Ok(if scale > 0.0 { diff / scale } else { diff })
}

/// Both sides of `∫ f ⋆ g = ∫ f g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceCheck {
    /// Quadrature of the series `f ⋆ g`.
    pub lhs: Complex64,
    /// Quadrature of the pointwise product.
    pub rhs: Complex64,
    /// Orders `r` summed.
    pub terms: usize,
}

impl TraceCheck {
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs).norm()
    }
}

/// Two-dimensional spectrum of a grid function, for mixed derivatives.
struct Spectrum2<'a> {
    plans: &'a Plans,
    coeffs: Vec<Complex64>,
    kx: Vec<f64>,
    nx: usize,
    nt: usize,
}

impl<'a> Spectrum2<'a> {
    fn new(plans: &'a Plans, f: &GridFunction) -> Self {
        let (nx, nt) = (f.nx(), f.ntheta());
        let mut coeffs = f.values().to_vec();
        plans.along_x(&mut coeffs, false);
        plans.along_theta(&mut coeffs, false);
        clip_noise(&mut coeffs);
        let norm = 1.0 / (nx * nt) as f64;
        coeffs.iter_mut().for_each(|z| *z *= norm);
        let kx = (0..nx)
            .map(|q| PI * signed_index(q, nx) as f64 / f.x_extent())
            .collect();
        Self {
            plans,
            coeffs,
            kx,
            nx,
            nt,
        }
    }

    /// `c · ∂_x^a ∂_θ^b f` on the grid.
    fn derivative(&self, a: u32, b: u32, c: f64) -> Vec<Complex64> {
        let (nx, nt) = (self.nx, self.nt);
        let theta_sym: Vec<Complex64> = (0..nt)
            .map(|q| derivative_symbol(q, nt, signed_index(q, nt) as f64, b))
            .collect();
        let mut v: Vec<Complex64> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(idx, &z)| {
                let (q, p) = (idx / nt, idx % nt);
                z * derivative_symbol(q, nx, self.kx[q], a) * theta_sym[p] * c
            })
            .collect();
        self.plans.along_x(&mut v, true);
        self.plans.along_theta(&mut v, true);
        v
    }
}

/// Evaluate `∫(f ⋆ g)` by the general `P^r` series and compare with `∫ fg`.
pub fn trace_property_check(
    f: &GridFunction,
    g: &GridFunction,
    trunc: SeriesTruncation,
) -> Result<TraceCheck> {
    let product = f.zip_with(g, |a, b| a * b)?;
    let rhs = product.integral(Domain::Position);
    let weight = f.dx() * f.dtheta();
    let reference = product.norm(Domain::Position);
    if reference == 0.0 {
        return Ok(TraceCheck {
            lhs: rhs,
            rhs,
            terms: 1,
        });
    }
    let plans = Plans::for_grid(f);
    let fs = Spectrum2::new(&plans, f);
    let gs = Spectrum2::new(&plans, g);

    let mut sum = product.values().to_vec();
    let mut r: u32 = 1;
    // (1/r!)(1/2i)^r C(r, m) = (1/2i)^r / (m! (r−m)!); the inverse factorials
    // ride on the derivative weights to keep intermediate values moderate
    let mut lambda_pow = Complex64::new(1.0, 0.0);
    loop {
        if r as usize > trunc.r_max {
            return Err(Error::SeriesTruncation {
                r_max: trunc.r_max,
                last_norm: f64::NAN,
            });
        }
        lambda_pow *= Complex64::new(0.0, -0.5);
        let mut term = vec![ZERO; sum.len()];
        for m in 0..=r {
            let left = fs.derivative(m, r - m, 1.0 / factorial(m));
            let right = gs.derivative(r - m, m, 1.0 / factorial(r - m));
            let sign = if (r - m) % 2 == 0 { 1.0 } else { -1.0 };
            for ((t, a), b) in term.iter_mut().zip(&left).zip(&right) {
                *t += a * b * sign;
            }
        }
        term.iter_mut().for_each(|t| *t *= lambda_pow);
        let norm = weighted_norm(&term, weight);
        for (s, t) in sum.iter_mut().zip(&term) {
            *s += t;
        }
        if norm < trunc.tol * reference {
            break;
        }
        r += 1;
    }
    let lhs = f.with_values(sum).integral(Domain::Position);
    Ok(TraceCheck {
        lhs,
        rhs,
        terms: r as usize + 1,
    })
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}
