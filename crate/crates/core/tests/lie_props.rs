use m2dq_core::{GroupElement, LieAlgebraElement as L};
use proptest::prelude::*;

fn int_element() -> impl Strategy<Value = L> {
    (-1000i32..=1000, -1000i32..=1000, -1000i32..=1000)
        .prop_map(|(a, b, c)| L::new(a as f64, b as f64, c as f64))
}

fn element(scale: f64) -> impl Strategy<Value = L> {
    (-scale..scale, -scale..scale, -scale..scale).prop_map(|(a, b, c)| L::new(a, b, c))
}

fn group_element() -> impl Strategy<Value = GroupElement> {
    (-3.2f64..3.2, -5.0f64..5.0, -5.0f64..5.0).prop_map(|(p, x, y)| GroupElement::new(p, [x, y]))
}

proptest! {
    // integer coordinates up to 1000: nested brackets stay below 2^53, so f64 is exact here
    #[test]
    fn jacobi_exact(u in int_element(), t in int_element(), w in int_element()) {
        let j = u.bracket(t.bracket(w)) + t.bracket(w.bracket(u)) + w.bracket(u.bracket(t));
        prop_assert_eq!(j, L::ZERO);
    }

    #[test]
    fn bracket_is_matrix_commutator(u in element(3.0), t in element(3.0)) {
        let m = u.algebra_matrix().commutator(&t.algebra_matrix());
        prop_assert!(m.max_abs_diff(&u.bracket(t).algebra_matrix()) < 1e-12);
    }

    #[test]
    fn compose_is_matrix_product(g in group_element(), h in group_element()) {
        let lhs = g.compose(&h).group_matrix();
        let rhs = g.group_matrix() * h.group_matrix();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn compose_is_associative(g in group_element(), h in group_element(), k in group_element()) {
        let a = g.compose(&h).compose(&k).group_matrix();
        let b = g.compose(&h.compose(&k)).group_matrix();
        prop_assert!(a.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn one_parameter_property(u in element(1.0), s in -3.0f64..3.0, t in -3.0f64..3.0) {
        let lhs = u.exp_map(s).compose(&u.exp_map(t)).group_matrix();
        prop_assert!(lhs.max_abs_diff(&u.exp_map(s + t).group_matrix()) < 1e-10);
    }

    #[test]
    fn exp_map_matches_matrix_exponential(u in element(1.0), t in -10.0f64..10.0) {
        let oracle = u.algebra_matrix().scale(t).expm();
        prop_assert!(u.exp_map(t).group_matrix().max_abs_diff(&oracle) < 1e-10);
    }

    #[test]
    fn branch_continuity(c2 in -2.0f64..2.0, c3 in -2.0f64..2.0, t in -3.0f64..3.0) {
        let near = L::new(1e-9, c2, c3).exp_map(t).group_matrix();
        let flat = L::new(0.0, c2, c3).exp_map(t).group_matrix();
        prop_assert!(near.max_abs_diff(&flat) < 1e-7);
    }

    #[test]
    fn angles_stay_canonical(g in group_element(), h in group_element()) {
        let p = g.compose(&h).phi;
        prop_assert!(p > -std::f64::consts::PI && p <= std::f64::consts::PI);
    }

    #[test]
    fn exp_neg_adjoint_matches_matrix_exponential(u in element(3.0)) {
        let oracle = u.adjoint_action().scale(-1.0).expm();
        prop_assert!(u.exp_neg_adjoint().max_abs_diff(&oracle) < 1e-12);
    }
}
