//! Coadjoint orbits of M(2), the cylinder chart, and Hamiltonian data.
//!
//! A dual element `F = μX* + α1E1* + α2E2*` sweeps out either the point
//! `{(μ, 0)}` (when `α = 0`) or the cylinder of radius `‖α‖`. The chart
//! `ψ(x, θ) = xX* + ‖α‖cosθ E1* + ‖α‖sinθ E2*` covers the cylinder, and the
//! Kirillov form pulls back to `dx ∧ dθ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{GroupElement, LieAlgebraElement, Matrix3};

/// A point `(μ, α)` of m(2)*.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DualElement {
    pub mu: f64,
    pub alpha: [f64; 2],
}

impl DualElement {
    pub const fn new(mu: f64, alpha: [f64; 2]) -> Self {
        Self { mu, alpha }
    }

    /// `⟨F, U⟩ = μc1 + α1c2 + α2c3`.
    pub fn pair(&self, u: LieAlgebraElement) -> f64 {
        self.mu * u.c1 + self.alpha[0] * u.c2 + self.alpha[1] * u.c3
    }

    pub fn alpha_norm(&self) -> f64 {
        self.alpha[0].hypot(self.alpha[1])
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.mu, self.alpha[0], self.alpha[1]]
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        Self::new(v[0], [v[1], v[2]])
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Pull back through a 3×3 map `M` in the basis `(X, E1, E2)`:
    /// the result is `T ↦ ⟨F, M T⟩`.
    fn pull_back(&self, m: &Matrix3) -> Self {
        Self::from_array(m.transpose().apply(self.to_array()))
    }
}

/// Coadjoint action `K(exp U)F` in closed form.
///
/// Returns `(μ + α·((1 − R_{c1})/c1)(c2, c3)ᵀ, α R_{c1})` with `α` a row
/// vector; at `c1 = 0` the quotient takes its limit `−J`, giving
/// `μ' = μ + α1c3 − α2c2`.
pub fn coadjoint_action(u: LieAlgebraElement, f: DualElement) -> DualElement {
    f.pull_back(&u.exp_neg_adjoint())
}

/// Coadjoint action of an arbitrary group element, `⟨K(g)F, T⟩ = ⟨F, Ad(g⁻¹)T⟩`,
/// computed through the homogeneous matrix model.
pub fn coadjoint_action_group(g: &GroupElement, f: DualElement) -> DualElement {
    let ginv = g.inverse().group_matrix();
    let gm = g.group_matrix();
    let mut ad = Matrix3::zero();
    for (j, b) in LieAlgebraElement::basis().into_iter().enumerate() {
        let conj = ginv * b.algebra_matrix() * gm;
        let col = LieAlgebraElement::from_algebra_matrix(&conj).to_array();
        for (row, v) in ad.0.iter_mut().zip(col) {
            row[j] = v;
        }
    }
    f.pull_back(&ad)
}

/// A classified coadjoint orbit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Orbit {
    Point { mu: f64 },
    Cylinder { radius: f64 },
}

/// Classify the orbit through `F`.
///
/// The zero test on `α` is exact: any nonzero `α`, however small, yields a
/// cylinder.
pub fn classify(f: DualElement) -> Orbit {
    if f.alpha == [0.0, 0.0] {
        Orbit::Point { mu: f.mu }
    } else {
        Orbit::Cylinder {
            radius: f.alpha_norm(),
        }
    }
}

impl Orbit {
    pub fn radius(&self) -> Result<f64> {
        match *self {
            Orbit::Cylinder { radius } => Ok(radius),
            Orbit::Point { .. } => Err(Error::PointOrbit),
        }
    }

    /// The chart `ψ(x, θ)`.
    pub fn chart(&self, x: f64, theta: f64) -> Result<DualElement> {
        let a = self.radius()?;
        let (s, c) = theta.sin_cos();
        Ok(DualElement::new(x, [a * c, a * s]))
    }
}

/// Chart coordinates on a cylinder orbit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    pub x: f64,
    pub theta: f64,
}

/// The Hamiltonian function `Ũ(x, θ) = c1x + a(c2 cosθ + c3 sinθ)` of `U` on
/// the cylinder of radius `a`, with its vector field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianData {
    pub u: LieAlgebraElement,
    pub radius: f64,
}

/// Hamiltonian data of `U` on a cylinder orbit. Point orbits are rejected;
/// their constant Hamiltonians are handled in [`crate::circle::trivial_rep`].
pub fn hamiltonian(u: LieAlgebraElement, orbit: &Orbit) -> Result<HamiltonianData> {
    Ok(HamiltonianData {
        u,
        radius: orbit.radius()?,
    })
}

impl HamiltonianData {
    pub fn value(&self, x: f64, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        self.u.c1 * x + self.radius * (self.u.c2 * c + self.u.c3 * s)
    }

    pub fn value_at(&self, p: ChartPoint) -> f64 {
        self.value(p.x, p.theta)
    }

    /// Components `(dθ(ξ_U), dx(ξ_U))` of `ξ_U = c1∂_θ − a(−c2 sinθ + c3 cosθ)∂_x`.
    pub fn vector_field(&self, theta: f64) -> (f64, f64) {
        let (s, c) = theta.sin_cos();
        (self.u.c1, -self.radius * (-self.u.c2 * s + self.u.c3 * c))
    }
}

/// Both sides of `ω(ξ_U, ξ_T) = ⟨ψ(x, θ), [U, T]⟩` with `ω = dx ∧ dθ`.
pub fn symplectic_pairing_check(
    u: LieAlgebraElement,
    t: LieAlgebraElement,
    orbit: &Orbit,
    x: f64,
    theta: f64,
) -> Result<(f64, f64)> {
    let hu = hamiltonian(u, orbit)?;
    let ht = hamiltonian(t, orbit)?;
    let (dtheta_u, dx_u) = hu.vector_field(theta);
    let (dtheta_t, dx_t) = ht.vector_field(theta);
    let lhs = dx_u * dtheta_t - dx_t * dtheta_u;
    let rhs = orbit.chart(x, theta)?.pair(u.bracket(t));
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    type L = LieAlgebraElement;

    #[test]
    fn identity_action() {
        let f = DualElement::new(1.5, [0.3, -2.0]);
        assert_eq!(coadjoint_action(L::ZERO, f), f);
    }

    #[test]
    fn pure_translation_shifts_mu() {
        let f = DualElement::new(0.0, [0.0, 1.0]);
        let g = coadjoint_action(L::E1, f);
        assert_eq!(g, DualElement::new(-1.0, [0.0, 1.0]));
        let oracle = f.pull_back(&L::E1.adjoint_action().scale(-1.0).expm());
        assert!(g.max_abs_diff(&oracle) < 1e-15);
    }

    #[test]
    fn quarter_rotation_of_alpha() {
        let u = L::new(PI / 2.0, 0.0, 0.0);
        let f = DualElement::new(0.0, [1.0, 0.0]);
        let g = coadjoint_action(u, f);
        // α R_{π/2} with α as a row vector
        assert!(g.max_abs_diff(&DualElement::new(0.0, [0.0, -1.0])) < 1e-15);
        let oracle = f.pull_back(&u.adjoint_action().scale(-1.0).expm());
        assert!(g.max_abs_diff(&oracle) < 1e-14);
    }

    #[test]
    fn closed_form_matches_group_route() {
        let u = L::new(0.7, -1.1, 2.3);
        let f = DualElement::new(0.4, [1.2, -0.5]);
        let a = coadjoint_action(u, f);
        let b = coadjoint_action_group(&u.exp_map(1.0), f);
        assert!(a.max_abs_diff(&b) < 1e-13, "{a:?} vs {b:?}");
    }

    #[test]
    fn classification() {
        assert_eq!(
            classify(DualElement::new(3.5, [0.0, 0.0])),
            Orbit::Point { mu: 3.5 }
        );
        assert_eq!(
            classify(DualElement::new(0.0, [3.0, 4.0])),
            Orbit::Cylinder { radius: 5.0 }
        );
        assert_eq!(
            classify(DualElement::new(1.0, [1e-300, 0.0])),
            Orbit::Cylinder { radius: 1e-300 }
        );
        // −0.0 compares equal to 0.0
        assert_eq!(
            classify(DualElement::new(2.0, [-0.0, 0.0])),
            Orbit::Point { mu: 2.0 }
        );
    }

    #[test]
    fn chart_values() {
        let cyl = Orbit::Cylinder { radius: 2.0 };
        assert_eq!(
            cyl.chart(0.0, 0.0).unwrap(),
            DualElement::new(0.0, [2.0, 0.0])
        );
        let p = Orbit::Cylinder { radius: 1.0 }
            .chart(5.0, PI / 2.0)
            .unwrap();
        assert!(p.max_abs_diff(&DualElement::new(5.0, [0.0, 1.0])) < 1e-16);
        assert!(matches!(
            Orbit::Point { mu: 1.0 }.chart(0.0, 0.0),
            Err(Error::PointOrbit)
        ));
    }

    #[test]
    fn chart_pairing_is_hamiltonian() {
        let orbit = Orbit::Cylinder { radius: 1.7 };
        let u = L::new(0.3, -2.0, 1.25);
        let h = hamiltonian(u, &orbit).unwrap();
        for &(x, th) in &[(0.0, 0.0), (1.5, 2.0), (-3.0, -0.4)] {
            assert!((orbit.chart(x, th).unwrap().pair(u) - h.value(x, th)).abs() < 1e-14);
        }
    }

    #[test]
    fn hamiltonian_examples() {
        let h = hamiltonian(L::X, &Orbit::Cylinder { radius: 3.0 }).unwrap();
        assert_eq!(h.value(2.5, 1.0), 2.5);
        let h = hamiltonian(L::E1, &Orbit::Cylinder { radius: 2.0 }).unwrap();
        assert_eq!(h.value(9.0, 0.3), 2.0 * 0.3f64.cos());
        let h = hamiltonian(L::E2, &Orbit::Cylinder { radius: 1.0 }).unwrap();
        let (dth, dx) = h.vector_field(0.8);
        assert_eq!(dth, 0.0);
        assert!((dx + 0.8f64.cos()).abs() < 1e-16);
        assert!(hamiltonian(L::X, &Orbit::Point { mu: 0.0 }).is_err());
    }

    #[test]
    fn kirillov_pairing_examples() {
        let (l, r) =
            symplectic_pairing_check(L::X, L::E1, &Orbit::Cylinder { radius: 2.0 }, 0.0, 0.0)
                .unwrap();
        assert_eq!((l, r), (0.0, 0.0));
        let (l, r) =
            symplectic_pairing_check(L::X, L::E1, &Orbit::Cylinder { radius: 1.0 }, 0.0, PI / 2.0)
                .unwrap();
        assert!((l + 1.0).abs() < 1e-15 && (r + 1.0).abs() < 1e-15);
        let (l, r) =
            symplectic_pairing_check(L::E1, L::E2, &Orbit::Cylinder { radius: 3.0 }, 1.0, 0.7)
                .unwrap();
        assert_eq!((l, r), (0.0, 0.0));
    }

    #[test]
    fn orbit_json() {
        let s = serde_json::to_string(&Orbit::Cylinder { radius: 5.0 }).unwrap();
        assert_eq!(s, r#"{"kind":"cylinder","radius":5.0}"#);
        let o: Orbit = serde_json::from_str(r#"{"kind":"point","mu":2}"#).unwrap();
        assert_eq!(o, Orbit::Point { mu: 2.0 });
        let f: DualElement = serde_json::from_str(r#"{"mu":1,"alpha":[2,3]}"#).unwrap();
        assert_eq!(f, DualElement::new(1.0, [2.0, 3.0]));
    }
}
