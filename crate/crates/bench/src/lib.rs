//! Fixtures shared by the benchmarks in `benches/`.

use m2dq_core::symbol::exact_complex;
use m2dq_core::{CircleFunction, Domain, ExactSymbol, GridFunction};
use num_complex::Complex64;

/// Dense symbol `Σ_{k ≤ kmax, |n| ≤ nmax} c_{k,n} x^k e^{inθ}` with small rational coefficients.
pub fn dense_symbol(kmax: u32, nmax: i64) -> ExactSymbol {
    ExactSymbol::from_terms((0..=kmax).flat_map(|k| {
        (-nmax..=nmax).map(move |n| {
            let seed = 7 * i64::from(k) + 3 * n;
            (
                k,
                n,
                exact_complex(seed % 5 + 1, seed % 3 - 1, (k as i64 + 2) * 4),
            )
        })
    }))
}

/// `e^{−(x−x0)²/2} e^{inθ}` on the acceptance grid.
pub fn gaussian(nx: usize, ntheta: usize, x_extent: f64, x0: f64, n: i32) -> GridFunction {
    GridFunction::from_fn(nx, ntheta, x_extent, Domain::Position, |x, th| {
        Complex64::from_polar((-(x - x0).powi(2) / 2.0).exp(), n as f64 * th)
    })
    .expect("power-of-two grid")
}

/// `exp(κ cos θ)` truncated at `n` modes.
pub fn von_mises(n: usize, kappa: f64) -> CircleFunction {
    CircleFunction::from_fn(n, 4 * n, |th| Complex64::new((kappa * th.cos()).exp(), 0.0))
}
