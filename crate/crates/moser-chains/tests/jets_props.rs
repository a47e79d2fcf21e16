use moser_chains::lie_jets::{bracket2, commutator, prolong2, IntrinsicField, JetVar, Poly};
use moser_chains::series::GaussianRational as G;
use moser_chains::sphere_isotropy::{bracket, intrinsic_pushforward, standard_fields, tangency_check, FIELD_NAMES};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = G> {
    (-5i64..=5, 1i64..=4).prop_map(|(n, d)| {
        G::new(BigRational::new(BigInt::from(n), BigInt::from(d)), BigRational::from_integer(0.into()))
    })
}

/// A real polynomial in `(u, x, y)` of degree ≤ 3.
fn real_poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((rational(), 0u8..=2, 0u8..=2, 0u8..=1), 0..4).prop_map(|terms| {
        terms.into_iter().fold(Poly::zero(), |acc, (c, a, b, e)| {
            acc.add(&Poly::monomial(c, &[(JetVar::X, a), (JetVar::Y, b), (JetVar::U, e)]))
        })
    })
}

fn field() -> impl Strategy<Value = IntrinsicField> {
    (real_poly(), real_poly(), real_poly()).prop_map(|(a, b, c)| IntrinsicField::new(a, b, c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn prolongation_is_linear(v in field(), w in field(), a in rational(), b in rational()) {
        let lhs = prolong2(&v.scale(&a).add(&w.scale(&b))).unwrap();
        let (pv, pw) = (prolong2(&v).unwrap(), prolong2(&w).unwrap());
        for (l, (x, y)) in lhs.components().iter().zip(pv.components().iter().zip(pw.components())) {
            prop_assert_eq!(*l, &x.scale(&a).add(&y.scale(&b)));
        }
    }

    #[test]
    fn second_prolongation_has_no_third_jets(v in field()) {
        let p = prolong2(&v).unwrap();
        for c in p.components() {
            prop_assert!(!c.uses(JetVar::X3) && !c.uses(JetVar::Y3));
        }
    }

    #[test]
    fn prolongation_respects_random_brackets(v in field(), w in field()) {
        let lhs = prolong2(&commutator(&v, &w)).unwrap();
        let rhs = bracket2(&prolong2(&v).unwrap(), &prolong2(&w).unwrap());
        for (l, r) in lhs.components().into_iter().zip(rhs.iter()) {
            prop_assert_eq!(l, r);
        }
    }
}

#[test]
fn prolongation_respects_isotropy_brackets() {
    let fields: Vec<IntrinsicField> = standard_fields().iter().map(|f| intrinsic_pushforward(f).unwrap()).collect();
    for i in 0..5 {
        for j in i + 1..5 {
            let lhs = prolong2(&commutator(&fields[i], &fields[j])).unwrap();
            let rhs = bracket2(&prolong2(&fields[i]).unwrap(), &prolong2(&fields[j]).unwrap());
            for (l, r) in lhs.components().into_iter().zip(rhs.iter()) {
                assert_eq!(l, r, "[{}, {}]", FIELD_NAMES[i], FIELD_NAMES[j]);
            }
        }
    }
}

#[test]
fn pushforward_preserves_brackets() {
    let ext = standard_fields();
    for i in 0..5 {
        for j in 0..5 {
            let lhs = intrinsic_pushforward(&bracket(&ext[i], &ext[j])).unwrap();
            let rhs = commutator(&intrinsic_pushforward(&ext[i]).unwrap(), &intrinsic_pushforward(&ext[j]).unwrap());
            assert_eq!(lhs, rhs, "[{}, {}]", FIELD_NAMES[i], FIELD_NAMES[j]);
        }
    }
}

#[test]
fn standard_fields_are_tangent() {
    for f in standard_fields() {
        assert!(tangency_check(&f));
    }
}
