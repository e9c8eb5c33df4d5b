//! Deformation quantization of the Euclidean motion group M(2).
//!
//! - [`lie`]: the algebra m(2), the group M(2), exponential map, adjoint action.
//! - [`coadjoint`]: coadjoint action, orbits, cylinder charts, Hamiltonians.
//! - [`symbol`]: exact Moyal star-product on polynomial-in-`x` cylinder symbols.
//! - [`grid`] and [`star_numeric`]: grid functions, the partial Fourier
//!   transform, the operator `l_U` and its conjugated closed form.
//! - [`circle`]: the principal series `U^a` on the circle, `l̂_U`, RK4 evolution,
//!   point-orbit characters and the orbit classification.
//! - [`suite`]: seeded verification suites with JSON reports.

pub mod circle;
pub mod coadjoint;
pub mod error;
pub mod grid;
pub mod lie;
pub mod star_numeric;
pub mod suite;
pub mod symbol;

pub use circle::{
    bracket_homomorphism_check, classify_rep, evolve, evolve_observed, lhat_apply, point_generator,
    rep_apply, rep_one_param, trivial_rep, CircleFunction, RepresentationLabel,
};
pub use coadjoint::{
    classify, coadjoint_action, coadjoint_action_group, hamiltonian, symplectic_pairing_check,
    ChartPoint, DualElement, HamiltonianData, Orbit,
};
pub use error::{Error, Result};
pub use grid::{Domain, GridFunction};
pub use lie::{GroupElement, LieAlgebraElement, Matrix3};
pub use star_numeric::{
    conjugation_residual, inverse_partial_fourier, l_op, l_op_series, l_op_term_norms,
    lhat_closed_form, partial_fourier, trace_property_check, SeriesTruncation, TraceCheck,
};
pub use suite::{run_suite, Suite, SuiteConfig, SuiteReport, DEFAULT_SEED};
pub use symbol::{
    covariance_check, embed_hamiltonian, CylinderSymbol, ExactComplex, ExactSymbol, FloatSymbol,
};
