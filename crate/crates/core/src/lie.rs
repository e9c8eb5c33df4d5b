//! The Lie algebra m(2) and the Euclidean motion group M(2).
//!
//! Elements of the algebra are written `U = c1·X + c2·E1 + c3·E2`, where `X`
//! generates rotations and `E1`, `E2` translations. Group elements are pairs
//! `(φ, r)` with the product `(φ, r)(ψ, r') = (φ + ψ, r + R_φ r')`. Both have
//! a 3×3 homogeneous matrix model, which doubles as an independent check on
//! every closed form in this module.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Below this magnitude of `t·c1` the trigonometric quotients switch to series.
const SERIES_CUTOFF: f64 = 1e-4;

/// `sin(θ)/θ`, accurate near zero.
pub(crate) fn sinc(theta: f64) -> f64 {
    if theta.abs() < SERIES_CUTOFF {
        let t2 = theta * theta;
        1.0 - t2 / 6.0 + t2 * t2 / 120.0
    } else {
        theta.sin() / theta
    }
}

/// `(1 − cos θ)/θ`, accurate near zero.
pub(crate) fn versinc(theta: f64) -> f64 {
    if theta.abs() < SERIES_CUTOFF {
        let t2 = theta * theta;
        theta * (0.5 - t2 / 24.0 + t2 * t2 / 720.0)
    } else {
        (1.0 - theta.cos()) / theta
    }
}

/// Reduce an angle to `(−π, π]`.
pub fn reduce_angle(phi: f64) -> f64 {
    let a = phi.rem_euclid(2.0 * PI);
    if a > PI {
        a - 2.0 * PI
    } else {
        a
    }
}

/// An element `c1·X + c2·E1 + c3·E2` of m(2).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LieAlgebraElement {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl LieAlgebraElement {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0);
    pub const X: Self = Self::new(1.0, 0.0, 0.0);
    pub const E1: Self = Self::new(0.0, 1.0, 0.0);
    pub const E2: Self = Self::new(0.0, 0.0, 1.0);

    pub const fn new(c1: f64, c2: f64, c3: f64) -> Self {
        Self { c1, c2, c3 }
    }

    /// The basis `(X, E1, E2)` in order.
    pub fn basis() -> [Self; 3] {
        [Self::X, Self::E1, Self::E2]
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.c1, self.c2, self.c3]
    }

    pub fn from_array(c: [f64; 3]) -> Self {
        Self::new(c[0], c[1], c[2])
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(self) -> f64 {
        (self.c1 * self.c1 + self.c2 * self.c2 + self.c3 * self.c3).sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(s * self.c1, s * self.c2, s * self.c3)
    }

    /// Lie bracket `[self, other]`.
    ///
    /// Only the translation part survives: `[U, T] = (c1c3' − c1'c3)E1 + (c1'c2 − c1c2')E2`.
    pub fn bracket(self, other: Self) -> Self {
        Self::new(
            0.0,
            self.c1 * other.c3 - other.c1 * self.c3,
            other.c1 * self.c2 - self.c1 * other.c2,
        )
    }

    /// Homogeneous matrix `[[0, c1, c2], [−c1, 0, c3], [0, 0, 0]]`.
    pub fn algebra_matrix(self) -> Matrix3 {
        Matrix3([
            [0.0, self.c1, self.c2],
            [-self.c1, 0.0, self.c3],
            [0.0, 0.0, 0.0],
        ])
    }

    /// Read an algebra element back from its homogeneous matrix.
    pub fn from_algebra_matrix(m: &Matrix3) -> Self {
        Self::new(m.0[0][1], m.0[0][2], m.0[1][2])
    }

    /// Matrix of `ad_U` in the basis `(X, E1, E2)`; column `j` holds the
    /// coordinates of `[U, basis_j]`.
    pub fn adjoint_action(self) -> Matrix3 {
        let Self { c1, c2, c3 } = self;
        Matrix3([[0.0, 0.0, 0.0], [-c3, 0.0, c1], [c2, -c1, 0.0]])
    }

    /// Closed form of `exp(−ad_U)`:
    /// `[[1, 0], [((1 − R_{c1})/c1)(c2, c3)ᵀ, R_{c1}]]`, with the exact limit
    /// `(1 − R_{c1})/c1 → −J` at `c1 = 0`.
    pub fn exp_neg_adjoint(self) -> Matrix3 {
        let Self { c1, c2, c3 } = self;
        let (s, c) = c1.sin_cos();
        // (1 − R_{c1})/c1 = [[a, b], [−b, a]] with a = (1 − cos c1)/c1, b = sin(c1)/c1
        let (a, b) = if c1 == 0.0 {
            (0.0, 1.0)
        } else {
            (versinc(c1), sinc(c1))
        };
        let v1 = a * c2 + b * c3;
        let v2 = -b * c2 + a * c3;
        Matrix3([[1.0, 0.0, 0.0], [v1, c, -s], [v2, s, c]])
    }

    /// The one-parameter subgroup `exp(tU)`.
    ///
    /// For `c1 ≠ 0` the rotation part is `R_{−t·c1}` and the translation is
    /// `((c2 sin tc1 + c3(1 − cos tc1))/c1, (c2(cos tc1 − 1) + c3 sin tc1)/c1)`;
    /// for `c1 = 0` it is the pure translation `(t·c2, t·c3)`.
    pub fn exp_map(self, t: f64) -> GroupElement {
        let Self { c1, c2, c3 } = self;
        if c1 == 0.0 {
            return GroupElement::new(0.0, [t * c2, t * c3]);
        }
        let theta = t * c1;
        // sin(tc1)/c1 and (1 − cos tc1)/c1, both written as t·f(tc1)
        let sc = t * sinc(theta);
        let vc = t * versinc(theta);
        let r1 = c2 * sc + c3 * vc;
        let r2 = -c2 * vc + c3 * sc;
        GroupElement::new(-theta, [r1, r2])
    }
}

impl Add for LieAlgebraElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.c1 + rhs.c1, self.c2 + rhs.c2, self.c3 + rhs.c3)
    }
}

impl Sub for LieAlgebraElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.c1 - rhs.c1, self.c2 - rhs.c2, self.c3 - rhs.c3)
    }
}

impl Neg for LieAlgebraElement {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.c1, -self.c2, -self.c3)
    }
}

impl fmt::Display for LieAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·X + {}·E1 + {}·E2", self.c1, self.c2, self.c3)
    }
}

/// Rotation-translation pair `(φ, r)` in M(2). The angle is kept in `(−π, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "RawGroupElement")]
pub struct GroupElement {
    pub phi: f64,
    pub r: [f64; 2],
}

#[derive(Deserialize)]
struct RawGroupElement {
    phi: f64,
    r: [f64; 2],
}

impl From<RawGroupElement> for GroupElement {
    fn from(raw: RawGroupElement) -> Self {
        Self::new(raw.phi, raw.r)
    }
}

impl GroupElement {
    pub fn new(phi: f64, r: [f64; 2]) -> Self {
        Self {
            phi: reduce_angle(phi),
            r,
        }
    }

    pub fn identity() -> Self {
        Self::new(0.0, [0.0, 0.0])
    }

    /// Apply the rotation part `R_φ` to a plane vector.
    pub fn rotate(&self, v: [f64; 2]) -> [f64; 2] {
        let (s, c) = self.phi.sin_cos();
        [c * v[0] - s * v[1], s * v[0] + c * v[1]]
    }

    /// Semidirect product `(φ, r)(ψ, r') = (φ + ψ, r + R_φ r')`.
    pub fn compose(&self, other: &Self) -> Self {
        let t = self.rotate(other.r);
        Self::new(self.phi + other.phi, [self.r[0] + t[0], self.r[1] + t[1]])
    }

    /// `(φ, r)⁻¹ = (−φ, −R_{−φ} r)`.
    pub fn inverse(&self) -> Self {
        let (s, c) = self.phi.sin_cos();
        let [r1, r2] = self.r;
        Self::new(-self.phi, [-(c * r1 + s * r2), -(-s * r1 + c * r2)])
    }

    /// Homogeneous matrix `[[R_φ, r], [0, 0, 1]]`.
    pub fn group_matrix(&self) -> Matrix3 {
        let (s, c) = self.phi.sin_cos();
        Matrix3([[c, -s, self.r[0]], [s, c, self.r[1]], [0.0, 0.0, 1.0]])
    }

    /// Read a group element back from a homogeneous matrix.
    pub fn from_group_matrix(m: &Matrix3) -> Self {
        Self::new(m.0[1][0].atan2(m.0[0][0]), [m.0[0][2], m.0[1][2]])
    }

    /// Componentwise distance, comparing angles on the circle.
    pub fn distance(&self, other: &Self) -> f64 {
        let dphi = reduce_angle(self.phi - other.phi).abs();
        dphi.max((self.r[0] - other.r[0]).abs())
            .max((self.r[1] - other.r[1]).abs())
    }
}

/// A 3×3 real matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix3(pub [[f64; 3]; 3]);

impl Matrix3 {
    pub fn zero() -> Self {
        Self([[0.0; 3]; 3])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            m.0[i][i] = 1.0;
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = self.0[j][i];
            }
        }
        m
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|v| *v *= s);
        m
    }

    /// Matrix commutator `AB − BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (i, row) in self.0.iter().enumerate() {
            out[i] = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
        out
    }

    /// Matrix exponential by scaling and squaring with a Taylor kernel.
    ///
    /// Generic in the entries; used as the reference for every closed-form
    /// exponential in the crate.
    pub fn expm(&self) -> Self {
        let norm = self
            .0
            .iter()
            .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max);
        let mut squarings = 0;
        let mut scaled = *self;
        if norm > 0.5 {
            squarings = (norm / 0.5).log2().ceil() as i32;
            scaled = self.scale(0.5f64.powi(squarings));
        }
        let mut sum = Self::identity();
        let mut term = Self::identity();
        for k in 1..=20 {
            term = (term * scaled).scale(1.0 / k as f64);
            sum = sum + term;
            if term.max_abs() < 1e-18 {
                break;
            }
        }
        for _ in 0..squarings {
            sum = sum * sum;
        }
        sum
    }
}

impl Mul for Matrix3 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = (0..3).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        m
    }
}

impl Add for Matrix3 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut m = self;
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] += rhs.0[i][j];
            }
        }
        m
    }
}

impl Sub for Matrix3 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + rhs.scale(-1.0)
    }
}
