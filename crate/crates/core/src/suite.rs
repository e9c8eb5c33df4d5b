//! Seeded verification suites with structured reports.
//!
//! Each suite draws its random samples from a ChaCha8 stream seeded by
//! [`SuiteConfig::seed`], so a report is a pure function of the config.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circle::{
    bracket_homomorphism_check, classify_rep, evolve, lhat_apply, point_generator, rep_apply,
    rep_one_param, trivial_rep, CircleFunction, RepresentationLabel,
};
use crate::coadjoint::{classify, coadjoint_action, symplectic_pairing_check, DualElement, Orbit};
use crate::error::{Error, Result};
use crate::grid::{Domain, GridFunction};
use crate::lie::{GroupElement, LieAlgebraElement, Matrix3};
use crate::star_numeric::{conjugation_residual, trace_property_check, SeriesTruncation};
use crate::symbol::{covariance_check, exact_complex, ExactSymbol};

type L = LieAlgebraElement;

pub const DEFAULT_SEED: u64 = 0xC0FFEE;

/// Available suites, in acceptance order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Brackets,
    GroupLaw,
    Coadjoint,
    Covariance,
    Commutator,
    Conjugation,
    Representation,
    Evolve,
    Trivial,
    Trace,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Brackets,
        Suite::GroupLaw,
        Suite::Coadjoint,
        Suite::Covariance,
        Suite::Commutator,
        Suite::Conjugation,
        Suite::Representation,
        Suite::Evolve,
        Suite::Trivial,
        Suite::Trace,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Brackets => "brackets",
            Suite::GroupLaw => "group-law",
            Suite::Coadjoint => "coadjoint",
            Suite::Covariance => "covariance",
            Suite::Commutator => "commutator",
            Suite::Conjugation => "conjugation",
            Suite::Representation => "representation",
            Suite::Evolve => "evolve",
            Suite::Trivial => "trivial",
            Suite::Trace => "trace",
        }
    }

    /// Acceptance criterion number, 1 through 10.
    pub fn criterion(self) -> usize {
        Suite::ALL.iter().position(|&s| s == self).unwrap() + 1
    }

    pub fn title(self) -> &'static str {
        match self {
            Suite::Brackets => "Lie-algebra brackets",
            Suite::GroupLaw => "exponential map",
            Suite::Coadjoint => "coadjoint orbits",
            Suite::Covariance => "star-product covariance",
            Suite::Commutator => "star algebra",
            Suite::Conjugation => "conjugation identity",
            Suite::Representation => "principal-series representation",
            Suite::Evolve => "Cauchy problem",
            Suite::Trivial => "trivial orbits",
            Suite::Trace => "trace property",
        }
    }

    /// Wall-clock budget in seconds.
    pub fn runtime_limit(self) -> f64 {
        match self {
            Suite::Brackets | Suite::Trivial => 1.0,
            Suite::GroupLaw | Suite::Coadjoint | Suite::Covariance => 5.0,
            Suite::Commutator => 10.0,
            Suite::Representation => 30.0,
            Suite::Conjugation | Suite::Evolve | Suite::Trace => 60.0,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

/// Grid sizes, tolerances, and the seed shared by all suites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Half-width `L` of the `x` box.
    pub x_extent: f64,
    pub nx: usize,
    pub ntheta: usize,
    pub series_tol: f64,
    pub r_max: usize,
    /// Circle mode cutoff `N`.
    pub modes: usize,
    pub t: f64,
    pub dt: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            x_extent: 12.0,
            nx: 256,
            ntheta: 64,
            series_tol: 1e-10,
            r_max: 80,
            modes: 64,
            t: 1.0,
            dt: 1e-3,
        }
    }
}

impl SuiteConfig {
    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn truncation(&self) -> SeriesTruncation {
        SeriesTruncation {
            tol: self.series_tol,
            r_max: self.r_max,
        }
    }
}

/// How a check value is compared with its limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `value < limit`
    Below,
    /// `value ≤ limit`; with limit 0 this is an exactness check.
    AtMost,
    /// `value ≥ limit`, for observed convergence orders.
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub relation: Relation,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, limit: f64, relation: Relation) -> Self {
        let passed = match relation {
            Relation::Below => value < limit,
            Relation::AtMost => value <= limit,
            Relation::AtLeast => value >= limit,
        };
        Self {
            name: name.into(),
            value,
            limit,
            relation,
            passed,
        }
    }

    fn below(name: &str, value: f64, limit: f64) -> Self {
        Self::new(name, value, limit, Relation::Below)
    }

    fn exact(name: &str, value: f64) -> Self {
        Self::new(name, value, 0.0, Relation::AtMost)
    }

    fn at_least(name: &str, value: f64, limit: f64) -> Self {
        Self::new(name, value, limit, Relation::AtLeast)
    }
}

/// Outcome of one suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub criterion: usize,
    pub passed: bool,
    /// Largest value among residual checks (orders excluded).
    pub max_residual: f64,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_s: Option<f64>,
    pub runtime_limit_s: f64,
    pub config: SuiteConfig,
}

impl SuiteReport {
    fn new(suite: Suite, checks: Vec<Check>, runtime: f64, config: &SuiteConfig) -> Self {
        let max_residual = checks
            .iter()
            .filter(|c| c.relation != Relation::AtLeast)
            .map(|c| c.value)
            .fold(0.0, f64::max);
        Self {
            suite,
            criterion: suite.criterion(),
            passed: checks.iter().all(|c| c.passed),
            max_residual,
            checks,
            runtime_s: Some(runtime),
            runtime_limit_s: suite.runtime_limit(),
            config: config.clone(),
        }
    }

    pub fn within_runtime(&self) -> bool {
        self.runtime_s.is_none_or(|r| r < self.runtime_limit_s)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Drop the wall-clock reading so reports compare byte-for-byte.
    pub fn without_runtime(mut self) -> Self {
        self.runtime_s = None;
        self
    }
}

/// Run one suite.
pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Result<SuiteReport> {
    let start = Instant::now();
    let checks = match suite {
        Suite::Brackets => brackets(config),
        Suite::GroupLaw => group_law(config),
        Suite::Coadjoint => coadjoint(config),
        Suite::Covariance => covariance(config)?,
        Suite::Commutator => commutator(config),
        Suite::Conjugation => conjugation(config)?,
        Suite::Representation => representation(config)?,
        Suite::Evolve => evolve_suite(config)?,
        Suite::Trivial => trivial(),
        Suite::Trace => trace(config)?,
    };
    Ok(SuiteReport::new(
        suite,
        checks,
        start.elapsed().as_secs_f64(),
        config,
    ))
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}

fn random_element(rng: &mut ChaCha8Rng, scale: f64) -> L {
    L::new(
        uniform(rng, -scale, scale),
        uniform(rng, -scale, scale),
        uniform(rng, -scale, scale),
    )
}

/// Random element with `‖U‖ ≤ bound`.
fn random_in_ball(rng: &mut ChaCha8Rng, bound: f64) -> L {
    loop {
        let u = random_element(rng, bound);
        if u.norm() <= bound {
            return u;
        }
    }
}

type Q = BigRational;

fn exact_bracket(u: &[Q; 3], t: &[Q; 3]) -> [Q; 3] {
    [
        Q::zero(),
        &u[0] * &t[2] - &t[0] * &u[2],
        &t[0] * &u[1] - &u[0] * &t[1],
    ]
}

fn random_rational(rng: &mut ChaCha8Rng) -> Q {
    Q::new(
        BigInt::from(rng.gen_range(-50i64..=50)),
        BigInt::from(rng.gen_range(1i64..=12)),
    )
}

fn brackets(config: &SuiteConfig) -> Vec<Check> {
    let mut rng = config.rng();
    let basis = L::basis();
    // rows U, columns T, entries [U, T]
    let table = [
        [L::ZERO, -L::E2, L::E1],
        [L::E2, L::ZERO, L::ZERO],
        [-L::E1, L::ZERO, L::ZERO],
    ];
    let mut table_err: f64 = 0.0;
    for (i, &u) in basis.iter().enumerate() {
        for (j, &t) in basis.iter().enumerate() {
            let d = u.bracket(t) - table[i][j];
            table_err = table_err.max(d.to_array().iter().fold(0.0, |m, x| m.max(x.abs())));
        }
    }

    let mut jacobi_failures = 0usize;
    for _ in 0..100 {
        let mut draw = || -> [Q; 3] {
            [
                random_rational(&mut rng),
                random_rational(&mut rng),
                random_rational(&mut rng),
            ]
        };
        let (a, b, c) = (draw(), draw(), draw());
        let j1 = exact_bracket(&a, &exact_bracket(&b, &c));
        let j2 = exact_bracket(&b, &exact_bracket(&c, &a));
        let j3 = exact_bracket(&c, &exact_bracket(&a, &b));
        if (0..3).any(|k| !(&j1[k] + &j2[k] + &j3[k]).is_zero()) {
            jacobi_failures += 1;
        }
    }

    let mut oracle_err: f64 = 0.0;
    for _ in 0..100 {
        let u = random_element(&mut rng, 1.0);
        let t = random_element(&mut rng, 1.0);
        let m = u.algebra_matrix().commutator(&t.algebra_matrix());
        oracle_err = oracle_err.max(m.max_abs_diff(&u.bracket(t).algebra_matrix()));
    }

    vec![
        Check::exact("basis bracket table", table_err),
        Check::exact(
            "Jacobi identity (exact, 100 triples)",
            jacobi_failures as f64,
        ),
        Check::below("matrix commutator oracle (100 pairs)", oracle_err, 1e-12),
    ]
}

fn group_law(config: &SuiteConfig) -> Vec<Check> {
    let mut rng = config.rng();
    let mut oracle_err: f64 = 0.0;
    for _ in 0..1000 {
        let u = random_element(&mut rng, 1.0);
        let bound = 10.0 / u.norm();
        let t = uniform(&mut rng, -bound, bound);
        let oracle = u.algebra_matrix().scale(t).expm();
        oracle_err = oracle_err.max(u.exp_map(t).group_matrix().max_abs_diff(&oracle));
    }

    let mut branch_err: f64 = 0.0;
    for _ in 0..100 {
        let c2 = uniform(&mut rng, -2.0, 2.0);
        let c3 = uniform(&mut rng, -2.0, 2.0);
        let t = uniform(&mut rng, -3.0, 3.0);
        let flat = L::new(0.0, c2, c3).exp_map(t).group_matrix();
        for c1 in [1e-9, -1e-9] {
            let near = L::new(c1, c2, c3).exp_map(t).group_matrix();
            branch_err = branch_err.max(near.max_abs_diff(&flat));
        }
    }

    let mut one_param_err: f64 = 0.0;
    let mut inverse_err: f64 = 0.0;
    for _ in 0..200 {
        let u = random_element(&mut rng, 1.0);
        let s = uniform(&mut rng, -3.0, 3.0);
        let t = uniform(&mut rng, -3.0, 3.0);
        let lhs = u.exp_map(s).compose(&u.exp_map(t)).group_matrix();
        one_param_err = one_param_err.max(lhs.max_abs_diff(&u.exp_map(s + t).group_matrix()));
        let g = u.exp_map(s);
        let e = g.compose(&g.inverse()).group_matrix();
        inverse_err = inverse_err.max(e.max_abs_diff(&Matrix3::identity()));
    }

    vec![
        Check::below(
            "exp_map vs matrix exponential (1000 samples)",
            oracle_err,
            1e-10,
        ),
        Check::below("branch continuity at c1 = ±1e-9", branch_err, 1e-7),
        Check::below("one-parameter subgroup law", one_param_err, 1e-10),
        Check::below("group inverse", inverse_err, 1e-12),
    ]
}

fn coadjoint(config: &SuiteConfig) -> Vec<Check> {
    let mut rng = config.rng();
    let radius = uniform(&mut rng, 0.5, 5.0);
    let angle = uniform(&mut rng, -PI, PI);
    let mut f = DualElement::new(
        uniform(&mut rng, -2.0, 2.0),
        [radius * angle.cos(), radius * angle.sin()],
    );
    let mut drift: f64 = 0.0;
    for _ in 0..1000 {
        f = coadjoint_action(random_element(&mut rng, 1.0), f);
        drift = drift.max((f.alpha_norm() - radius).abs() / radius);
    }

    let mut pairing_err: f64 = 0.0;
    for _ in 0..1000 {
        let orbit = Orbit::Cylinder {
            radius: uniform(&mut rng, 0.5, 2.0),
        };
        let u = random_element(&mut rng, 1.0);
        let t = random_element(&mut rng, 1.0);
        let x = uniform(&mut rng, -2.0, 2.0);
        let th = uniform(&mut rng, -PI, PI);
        let (lhs, rhs) = symplectic_pairing_check(u, t, &orbit, x, th).expect("cylinder orbit");
        pairing_err = pairing_err.max((lhs - rhs).abs());
    }

    vec![
        Check::below("radius invariance over 1000 actions", drift, 1e-12),
        Check::below(
            "Kirillov pairing identity (1000 samples)",
            pairing_err,
            1e-12,
        ),
    ]
}

fn covariance(config: &SuiteConfig) -> Result<Vec<Check>> {
    let mut rng = config.rng();
    let mut checks = Vec::new();
    for radius in [0.5, 1.0, 2.0, 5.0] {
        let pairs: Vec<(L, L)> = (0..100)
            .map(|_| (random_element(&mut rng, 2.0), random_element(&mut rng, 2.0)))
            .collect();
        let report = covariance_check(radius, &pairs)?;
        checks.push(Check::exact(
            &format!(
                "exact covariance at radius {radius} ({} pairs)",
                report.pairs_checked
            ),
            report.max_residual.max(report.failures as f64),
        ));
    }
    Ok(checks)
}

fn random_symbol(rng: &mut ChaCha8Rng) -> ExactSymbol {
    let terms = rng.gen_range(1..=4);
    ExactSymbol::from_terms((0..terms).map(|_| {
        (
            rng.gen_range(0..=3u32),
            rng.gen_range(-3..=3i64),
            exact_complex(
                rng.gen_range(-9..=9),
                rng.gen_range(-9..=9),
                rng.gen_range(1..=8),
            ),
        )
    }))
}

fn commutator(config: &SuiteConfig) -> Vec<Check> {
    let mut rng = config.rng();
    let mut assoc_failures = 0usize;
    for _ in 0..200 {
        let (f, g, h) = (
            random_symbol(&mut rng),
            random_symbol(&mut rng),
            random_symbol(&mut rng),
        );
        if f.star(&g).star(&h) != f.star(&g.star(&h)) {
            assoc_failures += 1;
        }
    }

    let mut termination_failures = 0usize;
    for _ in 0..200 {
        let (f, g) = (random_symbol(&mut rng), random_symbol(&mut rng));
        let d = f.xdeg() + g.xdeg();
        if !(f.p_r(&g, d + 1).is_zero() && f.p_r(&g, d + 2).is_zero()) {
            termination_failures += 1;
        }
    }

    let lhs = ExactSymbol::monomial(1, 1, exact_complex(1, 0, 1));
    let rhs = ExactSymbol::monomial(1, -1, exact_complex(1, 0, 1));
    let want = ExactSymbol::from_terms([
        (2, 0, exact_complex(1, 0, 1)),
        (1, 0, exact_complex(-1, 0, 1)),
        (0, 0, exact_complex(1, 0, 4)),
    ]);
    let worked = (lhs.star(&rhs) - want).max_abs();

    vec![
        Check::exact("associativity (exact, 200 triples)", assoc_failures as f64),
        Check::exact(
            "termination above xdeg f + xdeg g (200 pairs)",
            termination_failures as f64,
        ),
        Check::exact("x e^{iθ} ⋆ x e^{-iθ} = x² - x + 1/4", worked),
    ]
}

/// Gaussian×trig test functions in `(η, θ)` coordinates.
pub fn gaussian_trig_set(config: &SuiteConfig, domain: Domain) -> Result<Vec<GridFunction>> {
    let specs: [(f64, f64, i32, bool); 8] = [
        (0.0, 1.0, 0, false),
        (0.0, 1.0, 1, false),
        (0.5, 0.8, 2, true),
        (-0.7, 1.2, 1, true),
        (1.0, 1.0, 3, false),
        (0.0, 0.7, -2, false),
        (-1.2, 1.5, 0, true),
        (0.3, 1.1, 4, true),
    ];
    specs
        .iter()
        .map(|&(center, width, n, use_cos)| {
            GridFunction::from_fn(
                config.nx,
                config.ntheta,
                config.x_extent,
                domain,
                |u, th| {
                    let gauss = (-(u - center).powi(2) / (2.0 * width * width)).exp();
                    let trig = if use_cos {
                        Complex64::new((n as f64 * th).cos(), 0.0)
                    } else {
                        Complex64::from_polar(1.0, n as f64 * th)
                    };
                    trig * gauss
                },
            )
        })
        .collect()
}

fn conjugation(config: &SuiteConfig) -> Result<Vec<Check>> {
    let mut rng = config.rng();
    let set = gaussian_trig_set(config, Domain::Spectral)?;
    let trunc = config.truncation();
    let mut cases: Vec<(L, f64)> = L::basis().into_iter().map(|u| (u, 1.0)).collect();
    for _ in 0..20 {
        cases.push((random_in_ball(&mut rng, 2.0), uniform(&mut rng, 0.25, 2.0)));
    }
    let mut basis_err: f64 = 0.0;
    let mut random_err: f64 = 0.0;
    for (idx, &(u, radius)) in cases.iter().enumerate() {
        for f in &set {
            let r = conjugation_residual(u, radius, f, trunc)?;
            if idx < 3 {
                basis_err = basis_err.max(r);
            } else {
                random_err = random_err.max(r);
            }
        }
    }
    Ok(vec![
        Check::below("basis elements, 8 test functions", basis_err, 1e-6),
        Check::below("20 random U, 8 test functions", random_err, 1e-6),
    ])
}

/// Smooth test function on the circle, band-limited well inside `N/2`.
fn random_band_limited(rng: &mut ChaCha8Rng, n: usize, band: i64) -> CircleFunction {
    let mut f = CircleFunction::zeros(n);
    for m in -band..=band {
        f.set(
            m,
            Complex64::new(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)),
        );
    }
    f
}

fn random_group_element(rng: &mut ChaCha8Rng) -> GroupElement {
    let rad = uniform(rng, 0.0, 1.0);
    let dir = uniform(rng, -PI, PI);
    GroupElement::new(uniform(rng, -PI, PI), [rad * dir.cos(), rad * dir.sin()])
}

fn von_mises(n: usize, kappa: f64) -> CircleFunction {
    CircleFunction::from_fn(n, 4 * n, |th| Complex64::new((kappa * th.cos()).exp(), 0.0))
}

/// Observed orders `log(e_k/e_{k+1}) / log(h_k/h_{k+1})`, minimum over consecutive pairs.
fn observed_order(steps: &[f64], errors: &[f64]) -> f64 {
    steps
        .windows(2)
        .zip(errors.windows(2))
        .map(|(h, e)| (e[0] / e[1]).ln() / (h[0] / h[1]).ln())
        .fold(f64::INFINITY, f64::min)
}

fn representation(config: &SuiteConfig) -> Result<Vec<Check>> {
    let mut rng = config.rng();
    let n = config.modes;

    let mut hom_err: f64 = 0.0;
    let mut unit_err: f64 = 0.0;
    for _ in 0..100 {
        let a = uniform(&mut rng, 0.1, 2.0);
        let g = random_group_element(&mut rng);
        let h = random_group_element(&mut rng);
        let f = random_band_limited(&mut rng, n, 8);
        let lhs = rep_apply(&g, a, &rep_apply(&h, a, &f)?)?;
        let rhs = rep_apply(&g.compose(&h), a, &f)?;
        hom_err = hom_err.max(lhs.distance(&rhs)? / f.norm());
        unit_err = unit_err.max((rhs.norm() - f.norm()).abs() / f.norm());
    }

    let mut skew_err: f64 = 0.0;
    for _ in 0..50 {
        let a = uniform(&mut rng, 0.1, 2.0);
        let u = random_element(&mut rng, 1.0);
        let f = random_band_limited(&mut rng, n, (n - 2) as i64);
        let g = random_band_limited(&mut rng, n, (n - 2) as i64);
        let s = lhat_apply(u, a, &f)?.inner(&g) + f.inner(&lhat_apply(u, a, &g)?);
        skew_err = skew_err.max(s.norm() / (f.norm() * g.norm()));
    }

    let steps = [1e-2, 1e-3, 1e-4];
    let f = von_mises(n, 1.0);
    let mut order = f64::INFINITY;
    for u in [L::X, L::E1, L::new(0.7, -0.5, 0.9)] {
        let a = 1.3;
        let exact = lhat_apply(u, a, &f)?;
        let mut errors = Vec::new();
        for h in steps {
            let fd = rep_one_param(u, h, a, &f)?
                .sub(&rep_one_param(u, -h, a, &f)?)?
                .scale(Complex64::new(0.5 / h, 0.0));
            errors.push(fd.distance(&exact)?);
        }
        order = order.min(observed_order(&steps, &errors));
    }

    let mut comm_err: f64 = 0.0;
    let basis = L::basis();
    let mut pairs: Vec<(L, L, f64)> = basis
        .iter()
        .flat_map(|&u| basis.iter().map(move |&t| (u, t, 1.0)))
        .collect();
    for _ in 0..20 {
        pairs.push((
            random_element(&mut rng, 1.0),
            random_element(&mut rng, 1.0),
            uniform(&mut rng, 0.1, 2.0),
        ));
    }
    for (u, t, a) in pairs {
        comm_err = comm_err.max(bracket_homomorphism_check(u, t, a, n)?);
    }

    Ok(vec![
        Check::below("homomorphism (100 random g, h, f)", hom_err, 1e-10),
        Check::below("unitarity", unit_err, 1e-10),
        Check::below("skew-adjointness of l̂ on interior modes", skew_err, 1e-12),
        Check::at_least("central-difference order vs l̂", order, 1.9),
        Check::below("[l̂_U, l̂_T] = l̂_[U,T] on interior modes", comm_err, 1e-12),
    ])
}

fn evolve_suite(config: &SuiteConfig) -> Result<Vec<Check>> {
    let n = config.modes;
    let f0 = von_mises(n, 2.0);
    let cases = [L::X, L::E1, L::new(1.0, 1.0, 1.0)];
    let a = 1.0;
    let mut err: f64 = 0.0;
    for u in cases {
        let exact = rep_one_param(u, config.t, a, &f0)?;
        let s = evolve(u, a, &f0, config.t, config.dt)?;
        err = err.max(s.distance(&exact)? / f0.norm());
    }

    let steps = [0.02, 0.01, 0.005];
    let mut order = f64::INFINITY;
    for u in cases {
        let exact = rep_one_param(u, 1.0, a, &f0)?;
        let mut errors = Vec::new();
        for dt in steps {
            errors.push(evolve(u, a, &f0, 1.0, dt)?.distance(&exact)?);
        }
        order = order.min(observed_order(&steps, &errors));
    }

    Ok(vec![
        Check::below(
            &format!("RK4 vs closed form at t = {}, dt = {}", config.t, config.dt),
            err,
            1e-6,
        ),
        Check::at_least("RK4 convergence order in dt", order, 3.9),
    ])
}

fn trivial() -> Vec<Check> {
    let mut exp_err: f64 = 0.0;
    let mut span_err: f64 = 0.0;
    for mu in [-2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 0.3] {
        for t in [-1.0, 0.0, 0.25, 1.0, 2.0 * PI, 7.5] {
            let lx = point_generator(L::X, mu);
            let e = (lx * t).exp() - trivial_rep(mu, t);
            exp_err = exp_err.max(e.norm());
        }
        for u in [L::E1, L::E2, L::new(0.0, 0.6, -1.7)] {
            span_err = span_err.max(point_generator(u, mu).norm());
        }
    }

    let mut periodicity_mismatches = 0usize;
    for mu in [-2.0, -1.0, 0.0, 1.0, 2.0, -1.5, -0.5, 0.5, 1.5] {
        let periodic = (trivial_rep(mu, 2.0 * PI) - 1.0).norm() < 1e-12;
        let integral = mu.fract() == 0.0;
        if periodic != integral {
            periodicity_mismatches += 1;
        }
    }

    let mut table_mismatches = 0usize;
    for a in [0.5, 1.0, 2.5, 5.0] {
        let orbit = classify(DualElement::new(0.7, [a, 0.0]));
        if classify_rep(&orbit) != RepresentationLabel::Principal(a) {
            table_mismatches += 1;
        }
    }
    for mu in [-2.0, -1.0, 0.0, 1.0, 3.0] {
        let label = classify_rep(&classify(DualElement::new(mu, [0.0, 0.0])));
        if label != RepresentationLabel::Character(mu as i64) || !label.is_uir() {
            table_mismatches += 1;
        }
    }
    for mu in [-1.5, 0.5, 2.25] {
        let label = classify_rep(&classify(DualElement::new(mu, [0.0, 0.0])));
        if label != RepresentationLabel::CharacterNonIntegral(mu) || label.is_uir() {
            table_mismatches += 1;
        }
    }

    vec![
        Check::exact("exp(t l_X) = e^{itμ}", exp_err),
        Check::exact("l_U = 0 on span{E1, E2}", span_err),
        Check::exact(
            "2π-periodicity iff μ integral",
            periodicity_mismatches as f64,
        ),
        Check::exact("orbit to representation table", table_mismatches as f64),
    ]
}

fn trace(config: &SuiteConfig) -> Result<Vec<Check>> {
    let mut rng = config.rng();
    let (nx, nt, l) = (config.nx, config.ntheta, config.x_extent);
    let trunc = config.truncation();
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let mut draw = || {
            let x0 = uniform(&mut rng, -1.5, 1.5);
            let w = uniform(&mut rng, 0.7, 1.5);
            let n = rng.gen_range(-3..=3) as f64;
            let p = rng.gen_range(0..=2);
            let phase = uniform(&mut rng, -PI, PI);
            GridFunction::from_fn(nx, nt, l, Domain::Position, move |x, th| {
                let poly = (x - x0).powi(p);
                Complex64::from_polar(
                    poly * (-(x - x0).powi(2) / (2.0 * w * w)).exp(),
                    n * th + phase,
                ) + 0.25 * (-(x * x)).exp() * th.cos()
            })
        };
        let f = draw()?;
        let g = draw()?;
        let check = trace_property_check(&f, &g, trunc)?;
        worst = worst.max(check.residual() / (check.rhs.norm() + 1.0));
    }
    Ok(vec![Check::below(
        "|∫f⋆g − ∫fg| / (|∫fg| + 1), 10 Gaussian pairs",
        worst,
        1e-6,
    )])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
            assert_eq!(
                serde_json::to_string(&s).unwrap(),
                format!("\"{}\"", s.name())
            );
        }
        assert!("nope".parse::<Suite>().is_err());
        assert_eq!(Suite::Trace.criterion(), 10);
    }

    #[test]
    fn check_relations() {
        assert!(Check::below("a", 0.5, 1.0).passed);
        assert!(!Check::below("a", 1.0, 1.0).passed);
        assert!(Check::exact("a", 0.0).passed);
        assert!(!Check::exact("a", 1e-300).passed);
        assert!(Check::at_least("a", 4.0, 3.9).passed);
        assert!(!Check::at_least("a", f64::NAN, 3.9).passed);
    }

    #[test]
    fn fast_suites_pass_and_are_deterministic() {
        let cfg = SuiteConfig::default();
        for s in [Suite::Brackets, Suite::Trivial] {
            let a = run_suite(s, &cfg).unwrap();
            assert!(a.passed, "{a:?}");
            let b = run_suite(s, &cfg).unwrap();
            assert_eq!(a.without_runtime(), b.without_runtime());
        }
    }
}
