use jbw_core::algebra::{
    random_element, random_with, AlgebraDescriptor, DivisionRing, ElementClass, FactorDescriptor,
};
use jbw_core::harness::{random_composite_iso, trial_rng};
use jbw_core::io;
use jbw_core::iso::{phi_scalar, Direction};
use jbw_core::order::leq;
use jbw_core::spectral::{apply_function, eigenvalues, min_eigenvalue};
use jbw_core::Element;
use proptest::prelude::*;

fn algebras() -> Vec<AlgebraDescriptor> {
    let h = |n, r| FactorDescriptor::hermitian(n, r).unwrap();
    vec![
        AlgebraDescriptor::single(h(3, DivisionRing::Real)).unwrap(),
        AlgebraDescriptor::single(h(3, DivisionRing::Complex)).unwrap(),
        AlgebraDescriptor::single(h(2, DivisionRing::Quaternion)).unwrap(),
        AlgebraDescriptor::single(FactorDescriptor::spin(5).unwrap()).unwrap(),
        AlgebraDescriptor::new(vec![
            h(2, DivisionRing::Complex),
            h(1, DivisionRing::Real),
            FactorDescriptor::spin(3).unwrap(),
            h(1, DivisionRing::Real),
        ])
        .unwrap(),
    ]
}

fn algebra() -> impl Strategy<Value = AlgebraDescriptor> {
    prop::sample::select(algebras())
}

fn general(d: &AlgebraDescriptor, seed: u64) -> Element {
    random_element(d, seed, ElementClass::General).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jordan_product_is_commutative_and_satisfies_jordan_identity(d in algebra(), a in any::<u64>(), b in any::<u64>()) {
        let x = general(&d, a);
        let y = general(&d, b);
        prop_assert!(x.jordan_product(&y).unwrap().dist(&y.jordan_product(&x).unwrap()).unwrap() < 1e-12);
        let x2 = x.square();
        let lhs = x2.jordan_product(&y).unwrap().jordan_product(&x).unwrap();
        let rhs = x2.jordan_product(&y.jordan_product(&x).unwrap()).unwrap();
        prop_assert!(lhs.dist(&rhs).unwrap() <= 1e-9 * (1.0 + lhs.norm()));
    }

    #[test]
    fn spectral_calculus_reconstructs(d in algebra(), seed in any::<u64>()) {
        let x = general(&d, seed);
        let back = apply_function(&x, |l| l).unwrap();
        prop_assert!(back.dist(&x).unwrap() <= 1e-10 * (1.0 + x.norm()));
        let sq = apply_function(&x, |l| l * l).unwrap();
        prop_assert!(sq.dist(&x.square()).unwrap() <= 1e-10 * (1.0 + sq.norm()));
    }

    #[test]
    fn quad_rep_maps_cone_into_cone(d in algebra(), a in any::<u64>(), b in any::<u64>()) {
        let x = general(&d, a);
        let c = random_element(&d, b, ElementClass::Cone).unwrap();
        let image = x.quad_rep(&c).unwrap();
        prop_assert!(min_eigenvalue(&image) >= -1e-9 * (1.0 + image.norm()));
    }

    #[test]
    fn phi_scalar_is_increasing_bijection_of_unit_interval(t in -5.0f64..0.99, s in 0.0f64..1.0, r in 0.0f64..1.0) {
        prop_assert_eq!(phi_scalar(t, 0.0), 0.0);
        prop_assert!((phi_scalar(t, 1.0) - 1.0).abs() < 1e-15);
        let (lo, hi) = if s <= r { (s, r) } else { (r, s) };
        prop_assert!(phi_scalar(t, lo) <= phi_scalar(t, hi));
        let inv = t / (t - 1.0);
        prop_assert!((phi_scalar(inv, phi_scalar(t, s)) - s).abs() < 1e-12);
    }

    #[test]
    fn composite_isos_are_order_isomorphisms(d in algebra(), seed in any::<u64>(), a in any::<u64>(), b in any::<u64>()) {
        let mut rng = trial_rng(seed, 0);
        let f = random_composite_iso(&d, &d, &mut rng).unwrap();
        let x = random_element(&d, a, ElementClass::Effect).unwrap();
        // y = x + c, rescaled back into [0, e]
        let c = random_element(&d, b, ElementClass::Cone).unwrap().scale(0.2);
        let y = x.add(&c).unwrap();
        let s = 1f64.max(eigenvalues(&y).into_iter().fold(0.0, f64::max));
        let (x, y) = (x.scale(1.0 / s), y.scale(1.0 / s));
        let fx = f.apply(&x, Direction::Forward).unwrap();
        let fy = f.apply(&y, Direction::Forward).unwrap();
        prop_assert!(leq(&fx, &fy, 1e-9).unwrap());
        let back = f.apply(&fx, Direction::Backward).unwrap();
        prop_assert!(back.dist(&x).unwrap() <= 1e-8);
    }

    #[test]
    fn documents_round_trip_byte_stable(d in algebra(), seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 1);
        let x = random_with(&d, ElementClass::Effect, &mut rng).unwrap();
        let text = io::serialize_element(&x);
        let parsed = io::parse_element(&text).unwrap();
        prop_assert_eq!(&parsed, &x);
        prop_assert_eq!(io::serialize_element(&parsed), text);
        let f = random_composite_iso(&d, &d, &mut rng).unwrap();
        let text = io::serialize_iso(&f);
        prop_assert_eq!(io::serialize_iso(&io::parse_iso(&text).unwrap()), text);
    }
}
