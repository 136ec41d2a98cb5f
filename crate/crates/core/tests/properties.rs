use proptest::prelude::*;

use wcop::hardy::{composition_matrix, kernel_vector, taylor_of_rational, weighted_composition_matrix};
use wcop::matrix::CoeffVec;
use wcop::moebius::{
    build_normal_form, cowen_triple, phi_p, to_j_normal_form, ClassTag, FixedPointSet, HalfPlaneForm, Point,
};
use wcop::series::{Poly, Rational};
use wcop::{LFMap, C64};

const ONE: C64 = C64::new(1.0, 0.0);

fn unimodular() -> impl Strategy<Value = C64> {
    (0.0..std::f64::consts::TAU).prop_map(|a| C64::from_polar(1.0, a))
}

fn disk(radius: f64) -> impl Strategy<Value = C64> {
    (0.0..1.0f64, 0.0..std::f64::consts::TAU).prop_map(move |(r, a)| C64::from_polar(radius * r.sqrt(), a))
}

fn translation() -> impl Strategy<Value = C64> {
    (0.05..3.0f64, -3.0..3.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn self_map() -> impl Strategy<Value = LFMap> {
    (disk(1.0), disk(1.0), disk(0.6))
        .prop_filter_map("not a self-map", |(a, b, c)| LFMap::new(a, b, c, ONE).ok().filter(|m| m.is_self_map()))
}

fn j_form_map() -> impl Strategy<Value = LFMap> {
    prop_oneof![
        (disk(0.9), disk(1.0)).prop_filter_map("not a self-map", |(a0, a1)| {
            LFMap::from_j_form(a0, a1).ok().filter(|m| m.is_self_map())
        }),
        disk(0.95).prop_filter_map("p = 0", |p| phi_p(p).ok()),
    ]
}

fn close(x: C64, y: C64, tol: f64) -> bool {
    (x - y).norm() <= tol
}

proptest! {
    #[test]
    fn boundary_hyperbolic_round_trip(zeta in unimodular(), r in 1.2..5.0f64, t in translation()) {
        let m = build_normal_form(HalfPlaneForm::BoundaryHyperbolic, zeta, Some(r), t).unwrap();
        let an = m.analyze().unwrap();
        prop_assert_eq!(an.class.tag, ClassTag::HyperbolicBoundaryDw);
        prop_assert!(close(an.denjoy_wolff.unwrap(), zeta, 1e-10));
        prop_assert!((an.multiplier_r.unwrap() - r).abs() < 1e-10);
        prop_assert!(close(an.translation_number.unwrap(), t, 1e-10));
    }

    #[test]
    fn interior_hyperbolic_round_trip(zeta in unimodular(), r in 1.2..5.0f64, t in translation()) {
        let m = build_normal_form(HalfPlaneForm::InteriorHyperbolic, zeta, Some(r), t).unwrap();
        let an = m.analyze().unwrap();
        prop_assert_eq!(an.class.tag, ClassTag::HyperbolicInteriorDw);
        prop_assert!(close(an.boundary_point.unwrap(), zeta, 1e-10));
        prop_assert!(an.denjoy_wolff.unwrap().norm() < 1.0);
        prop_assert!((an.multiplier_r.unwrap() - r).abs() < 1e-10);
        prop_assert!(close(an.translation_number.unwrap(), t, 1e-10));
    }

    #[test]
    fn parabolic_round_trip(zeta in unimodular(), t in translation()) {
        let m = build_normal_form(HalfPlaneForm::Parabolic, zeta, None, t).unwrap();
        let an = m.analyze().unwrap();
        prop_assert_eq!(an.class.tag, ClassTag::Parabolic);
        prop_assert!(close(an.denjoy_wolff.unwrap(), zeta, 1e-10));
        prop_assert!(close(an.translation_number.unwrap(), t, 1e-10));
    }

    #[test]
    fn composing_with_the_inverse_is_the_identity(a in disk(2.0), b in disk(2.0), c in disk(2.0), d in disk(2.0)) {
        if let Ok(m) = LFMap::new(a, b, c, d) {
            if m.det().norm() > 1e-6 {
                prop_assert!(m.compose(&m.inverse()).unwrap().projective_distance(&LFMap::identity()) < 1e-12);
            }
        }
    }

    #[test]
    fn sigma_fixes_reflected_fixed_points(m in self_map()) {
        let sigma = cowen_triple(&m).sigma;
        let points = match m.fixed_points() {
            FixedPointSet::Two(p, q) => vec![p, q],
            FixedPointSet::Double(p) => vec![p],
            FixedPointSet::All => vec![],
        };
        for p in points {
            let Point::Finite(a) = p else { continue };
            if a.norm() < 1e-6 || a.norm() > 1e6 {
                continue;
            }
            let x = ONE / a.conj();
            if let Ok(y) = sigma.eval(x) {
                prop_assert!((y - x).norm() <= 1e-10 * x.norm().max(1.0), "a = {a}, σ(1/ā) = {y}");
            }
        }
        prop_assert!(sigma.is_self_map());
    }

    #[test]
    fn parabolic_maps_compose_to_parabolic(zeta in unimodular(), t1 in translation(), t2 in translation()) {
        let f = build_normal_form(HalfPlaneForm::Parabolic, zeta, None, t1).unwrap();
        let g = build_normal_form(HalfPlaneForm::Parabolic, zeta, None, t2).unwrap();
        let an = f.compose(&g).unwrap().analyze().unwrap();
        prop_assert_eq!(an.class.tag, ClassTag::Parabolic);
        prop_assert!(close(an.denjoy_wolff.unwrap(), zeta, 1e-9));
        prop_assert!(close(an.translation_number.unwrap(), t1 + t2, 1e-9));
    }

    #[test]
    fn parabolic_j_forms_fix_plus_or_minus_one(zeta in unimodular(), t in translation(), snap in 0..4u8) {
        let zeta = match snap { 0 => ONE, 1 => -ONE, _ => zeta };
        let m = build_normal_form(HalfPlaneForm::Parabolic, zeta, None, t).unwrap();
        let psi = Rational::j_weight(ONE, m.eval(C64::new(0.0, 0.0)).unwrap());
        let real_axis = (zeta - ONE).norm() < 1e-12 || (zeta + ONE).norm() < 1e-12;
        prop_assert_eq!(to_j_normal_form(&psi, &m).is_ok(), real_axis);
    }

    #[test]
    fn interior_hyperbolic_maps_are_never_j_forms(zeta in unimodular(), r in 1.05..5.0f64, t in translation()) {
        let m = build_normal_form(HalfPlaneForm::InteriorHyperbolic, zeta, Some(r), t).unwrap();
        let psi = Rational::j_weight(ONE, m.eval(C64::new(0.0, 0.0)).unwrap());
        prop_assert!(to_j_normal_form(&psi, &m).is_err());
    }

    #[test]
    fn kernels_reproduce_values(w in disk(0.7), n0 in disk(1.0), n1 in disk(1.0), q in disk(0.5)) {
        let num = Poly::linear(n0, n1);
        let den = Poly::linear(ONE, -q);
        let f = taylor_of_rational(&num, &den, 200).unwrap();
        let k = kernel_vector(w, 200).unwrap();
        let inner: C64 = f.0.iter().zip(&k.0).map(|(a, b)| a * b.conj()).sum();
        prop_assert!(close(inner, Rational::new(num, den).eval(w), 1e-12));
    }

    #[test]
    fn adjoint_maps_kernels_to_kernels(m in self_map(), w in disk(0.5)) {
        // C_φ* K_w = K_{φ(w)}; the leading coefficients of the truncated
        // product are accurate once the kernel tail is negligible.
        let n = 160;
        let adj = composition_matrix(&m, n).unwrap().adjoint();
        let image = adj.apply(&kernel_vector(w, n).unwrap()).unwrap();
        let expected = kernel_vector(m.eval(w).unwrap(), n).unwrap();
        let err = image.0[..16].iter().zip(&expected.0[..16]).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-8, "{err}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn hyperbolic_j_forms_with_boundary_fixed_points_are_automorphisms(m in j_form_map()) {
        let an = m.analyze().unwrap();
        if matches!(an.class.tag, ClassTag::HyperbolicBoundaryDw | ClassTag::HyperbolicInteriorDw) {
            prop_assert!(m.is_automorphism(), "{m:?} {an:?}");
        }
    }
}

#[test]
fn geometric_weight_has_geometric_columns() {
    let psi = Rational::new(Poly::constant(ONE), Poly::linear(ONE, C64::new(-0.5, 0.0)));
    let a = weighted_composition_matrix(&psi, &LFMap::identity(), 8).unwrap();
    let col: CoeffVec = a.column(0);
    for (k, z) in col.0.iter().enumerate() {
        assert!((z - 0.5f64.powi(k as i32)).norm() < 1e-15);
    }
}

#[test]
fn json_round_trips() {
    let m = phi_p(C64::new(0.3, -0.4)).unwrap();
    let back: LFMap = serde_json::from_str(&wcop::json::to_string(&m).unwrap()).unwrap();
    assert_eq!(back.coeffs(), m.coeffs());
    let a = composition_matrix(&m, 6).unwrap();
    let back: wcop::OpMatrix = serde_json::from_str(&wcop::json::to_string(&a).unwrap()).unwrap();
    assert_eq!(back, a);
}
