//! Sampled functions on the `(x, θ)` cylinder, truncated to `[−L, L) × [0, 2π)`.
//!
//! Storage is row-major with `x` (or its dual `η`) as the slow axis:
//! `values[ix * ntheta + itheta]`. Both axes must be powers of two.

use std::f64::consts::PI;
use std::io::{Read, Write};
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

pub const GRID_MAGIC: &[u8; 8] = b"M2DQGRID";
pub const GRID_HEADER_LEN: usize = 24;

/// Which variable the first axis carries, for coordinates and CSV labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// `x ∈ [−L, L)`, spacing `2L/Nx`.
    Position,
    /// `η = πj/L`, `j = −Nx/2 … Nx/2 − 1`.
    Spectral,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    nx: usize,
    ntheta: usize,
    x_extent: f64,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(nx: usize, ntheta: usize, x_extent: f64, values: Vec<Complex64>) -> Result<Self> {
        if !nx.is_power_of_two() || !ntheta.is_power_of_two() || nx < 2 || ntheta < 2 {
            return Err(Error::Shape(format!(
                "grid sizes must be powers of two ≥ 2, got {nx}×{ntheta}"
            )));
        }
        if !(x_extent > 0.0 && x_extent.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "x extent must be positive, got {x_extent}"
            )));
        }
        if values.len() != nx * ntheta {
            return Err(Error::Shape(format!(
                "expected {} values, got {}",
                nx * ntheta,
                values.len()
            )));
        }
        Ok(Self {
            nx,
            ntheta,
            x_extent,
            values,
        })
    }

    pub fn zeros(nx: usize, ntheta: usize, x_extent: f64) -> Result<Self> {
        Self::new(
            nx,
            ntheta,
            x_extent,
            vec![Complex64::new(0.0, 0.0); nx * ntheta],
        )
    }

    /// Sample `f(first, θ)` where `first` is the coordinate of `domain`.
    pub fn from_fn<F>(nx: usize, ntheta: usize, x_extent: f64, domain: Domain, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Complex64,
    {
        let mut g = Self::zeros(nx, ntheta, x_extent)?;
        for i in 0..nx {
            let u = g.coord(domain, i);
            for j in 0..ntheta {
                g.values[i * ntheta + j] = f(u, g.theta(j));
            }
        }
        Ok(g)
    }

    /// A grid of the same shape with new values.
    pub fn with_values(&self, values: Vec<Complex64>) -> Self {
        assert_eq!(values.len(), self.values.len());
        Self {
            values,
            ..self.clone()
        }
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ntheta(&self) -> usize {
        self.ntheta
    }

    pub fn x_extent(&self) -> f64 {
        self.x_extent
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.ntheta + j]
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.x_extent / self.nx as f64
    }

    pub fn dtheta(&self) -> f64 {
        2.0 * PI / self.ntheta as f64
    }

    pub fn deta(&self) -> f64 {
        PI / self.x_extent
    }

    pub fn x(&self, i: usize) -> f64 {
        -self.x_extent + i as f64 * self.dx()
    }

    pub fn eta(&self, i: usize) -> f64 {
        (i as f64 - (self.nx / 2) as f64) * self.deta()
    }

    pub fn theta(&self, j: usize) -> f64 {
        j as f64 * self.dtheta()
    }

    pub fn coord(&self, domain: Domain, i: usize) -> f64 {
        match domain {
            Domain::Position => self.x(i),
            Domain::Spectral => self.eta(i),
        }
    }

    /// Spacing of the first axis in `domain`.
    pub fn step(&self, domain: Domain) -> f64 {
        match domain {
            Domain::Position => self.dx(),
            Domain::Spectral => self.deta(),
        }
    }

    /// Weighted L² norm, `(Σ|f|² Δ Δθ)^{1/2}`.
    pub fn norm(&self, domain: Domain) -> f64 {
        let w = self.step(domain) * self.dtheta();
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * w).sqrt()
    }

    /// Quadrature `Σ f Δ Δθ`; spectrally accurate for periodic data that
    /// decays at the first-axis boundary.
    pub fn integral(&self, domain: Domain) -> Complex64 {
        self.values.iter().sum::<Complex64>() * (self.step(domain) * self.dtheta())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest modulus on the first and last rows of the first axis.
    pub fn boundary_max(&self) -> f64 {
        let n = self.ntheta;
        self.values[..n]
            .iter()
            .chain(&self.values[(self.nx - 1) * n..])
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.nx == other.nx && self.ntheta == other.ntheta && self.x_extent == other.x_extent
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::Shape(format!(
                "{}×{} (L={}) vs {}×{} (L={})",
                self.nx, self.ntheta, self.x_extent, other.nx, other.ntheta, other.x_extent
            )))
        }
    }

    pub fn zip_with<F>(&self, other: &Self, f: F) -> Result<Self>
    where
        F: Fn(Complex64, Complex64) -> Complex64,
    {
        self.check_shape(other)?;
        Ok(self.with_values(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        ))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.with_values(self.values.iter().map(|v| v * c).collect())
    }

    pub fn conj(&self) -> Self {
        self.with_values(self.values.iter().map(|v| v.conj()).collect())
    }

    /// Relative weighted L² distance `‖self − other‖/‖other‖`; absolute when
    /// `other` vanishes.
    pub fn relative_distance(&self, other: &Self, domain: Domain) -> Result<f64> {
        let d = self.sub(other)?.norm(domain);
        let n = other.norm(domain);
        Ok(if n > 0.0 { d / n } else { d })
    }

    /// Binary layout: magic, `u32 Nx`, `u32 Nθ`, `f64 L` (little-endian), then
    /// row-major `(re, im)` pairs of `f64`.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(GRID_MAGIC)?;
        w.write_all(&(self.nx as u32).to_le_bytes())?;
        w.write_all(&(self.ntheta as u32).to_le_bytes())?;
        w.write_all(&self.x_extent.to_le_bytes())?;
        for v in &self.values {
            w.write_all(&v.re.to_le_bytes())?;
            w.write_all(&v.im.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(GRID_HEADER_LEN + 16 * self.values.len());
        self.write_binary(&mut out)
            .expect("writing to a Vec cannot fail");
        out
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut header = [0u8; GRID_HEADER_LEN];
        r.read_exact(&mut header)
            .map_err(|e| Error::Format(format!("truncated header: {e}")))?;
        if &header[..8] != GRID_MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        let nx = u32::from_le_bytes(header[8..12].try_into().unwrap()) as usize;
        let ntheta = u32::from_le_bytes(header[12..16].try_into().unwrap()) as usize;
        let x_extent = f64::from_le_bytes(header[16..24].try_into().unwrap());
        let count = nx
            .checked_mul(ntheta)
            .ok_or_else(|| Error::Format("grid too large".into()))?;
        let mut buf = [0u8; 16];
        let mut values = Vec::with_capacity(count);
        for _ in 0..count {
            r.read_exact(&mut buf)
                .map_err(|e| Error::Format(format!("truncated payload: {e}")))?;
            values.push(Complex64::new(
                f64::from_le_bytes(buf[..8].try_into().unwrap()),
                f64::from_le_bytes(buf[8..].try_into().unwrap()),
            ));
        }
        let mut extra = [0u8; 1];
        if r.read(&mut extra)? != 0 {
            return Err(Error::Format("trailing bytes after payload".into()));
        }
        Self::new(nx, ntheta, x_extent, values)
    }

    /// CSV with columns `x|eta, theta, re, im`.
    pub fn write_csv<W: Write>(&self, mut w: W, domain: Domain) -> Result<()> {
        let label = match domain {
            Domain::Position => "x",
            Domain::Spectral => "eta",
        };
        writeln!(w, "{label},theta,re,im")?;
        for i in 0..self.nx {
            let u = self.coord(domain, i);
            for j in 0..self.ntheta {
                let v = self.get(i, j);
                writeln!(w, "{u},{},{},{}", self.theta(j), v.re, v.im)?;
            }
        }
        Ok(())
    }
}

/// FFT plans for one grid shape.
pub(crate) struct Plans {
    nx: usize,
    ntheta: usize,
    x_fwd: Arc<dyn Fft<f64>>,
    x_inv: Arc<dyn Fft<f64>>,
    t_fwd: Arc<dyn Fft<f64>>,
    t_inv: Arc<dyn Fft<f64>>,
}

impl Plans {
    pub(crate) fn new(nx: usize, ntheta: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            nx,
            ntheta,
            x_fwd: planner.plan_fft_forward(nx),
            x_inv: planner.plan_fft_inverse(nx),
            t_fwd: planner.plan_fft_forward(ntheta),
            t_inv: planner.plan_fft_inverse(ntheta),
        }
    }

    pub(crate) fn for_grid(g: &GridFunction) -> Self {
        Self::new(g.nx, g.ntheta)
    }

    /// Unnormalised DFT along the first axis, in place.
    pub(crate) fn along_x(&self, values: &mut [Complex64], inverse: bool) {
        let (nx, nt) = (self.nx, self.ntheta);
        let plan = if inverse { &self.x_inv } else { &self.x_fwd };
        let mut col = vec![Complex64::new(0.0, 0.0); nx];
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        for j in 0..nt {
            for i in 0..nx {
                col[i] = values[i * nt + j];
            }
            plan.process_with_scratch(&mut col, &mut scratch);
            for i in 0..nx {
                values[i * nt + j] = col[i];
            }
        }
    }

    /// Unnormalised DFT along `θ`, in place.
    pub(crate) fn along_theta(&self, values: &mut [Complex64], inverse: bool) {
        let plan = if inverse { &self.t_inv } else { &self.t_fwd };
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        for row in values.chunks_exact_mut(self.ntheta) {
            plan.process_with_scratch(row, &mut scratch);
        }
    }
}

/// Signed DFT index of storage slot `q` for length `n`: `0, 1, …, n/2 − 1, −n/2, …, −1`.
pub(crate) fn signed_index(q: usize, n: usize) -> i64 {
    if q < n / 2 {
        q as i64
    } else {
        q as i64 - n as i64
    }
}

/// `(i·k)^r` for a spectral derivative of order `r`; the Nyquist slot is
/// dropped for every `r ≥ 1`.
pub(crate) fn derivative_symbol(q: usize, n: usize, wavenumber: f64, r: u32) -> Complex64 {
    if r == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if q == n / 2 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::new(0.0, wavenumber).powu(r)
}
