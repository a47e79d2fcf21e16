use moser_chains::series::{
    implicit_invert_u, Coeff, GaussianRational as G, Grading, HoloSeries, Mono, Series, UniSeries,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

const ORDER: u32 = 6;

fn rational() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=5).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn gaussian() -> impl Strategy<Value = G> {
    (rational(), rational()).prop_map(|(a, b)| G::new(a, b))
}

fn mono() -> impl Strategy<Value = Mono> {
    (0u32..=4, 0u32..=4, 0u32..=3).prop_map(|(j, k, l)| Mono::new(j, k, l))
}

fn series() -> impl Strategy<Value = Series<G>> {
    prop::collection::vec((mono(), gaussian()), 0..6).prop_map(|t| Series::from_terms(t, ORDER, Grading::Weight))
}

/// Series without constant term.
fn small_series() -> impl Strategy<Value = Series<G>> {
    series().prop_map(|s| s.filter(|m| *m != Mono::ONE))
}

fn real_series() -> impl Strategy<Value = Series<G>> {
    series().prop_map(|s| s.add(&s.conj()))
}

/// `F0(z, u)` with terms of weight ≥ 2, so that `T = ω + …` has weight ≥ 2.
fn holo() -> impl Strategy<Value = HoloSeries<G>> {
    prop::collection::vec((0u32..=4, 0u32..=3, gaussian()), 0..5)
        .prop_map(|t| HoloSeries::from_terms(t.into_iter().filter(|(j, l, _)| j + 2 * l >= 2), ORDER, Grading::Weight))
}

fn uni() -> impl Strategy<Value = UniSeries<G>> {
    prop::collection::vec(gaussian(), 0..6).prop_map(|c| UniSeries::from_coeffs(c, 5))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn addition_is_associative(a in series(), b in series(), c in series()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
    }

    #[test]
    fn multiplication_distributes(a in series(), b in series(), c in series()) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn multiplication_is_associative_and_commutative(a in series(), b in series(), c in series()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
    }

    #[test]
    fn truncation_is_a_ring_homomorphism(a in series(), b in series(), n in 2u32..ORDER) {
        prop_assert_eq!(a.mul(&b).truncate(n), a.truncate(n).mul(&b.truncate(n)).truncate(n));
    }

    #[test]
    fn implicit_inversion_roundtrip(f0 in holo()) {
        // 1 + i·a = 0 for the u-coefficient a has no inverse
        prop_assume!(!G::one().plus(&G::imag_unit().times(&f0.coeff_zw(0, 1))).is_zero());
        let t = implicit_invert_u(&f0).unwrap();
        // T + i F0(z, T) = ω
        let back = t.add(&f0.compose(&HoloSeries::var_z(ORDER, Grading::Weight), &t).unwrap().scale(&G::imag_unit()));
        prop_assert_eq!(back, HoloSeries::var_w(ORDER, Grading::Weight));
    }

    #[test]
    fn sqrt_squares_back(x in small_series()) {
        let s = Series::one(ORDER, Grading::Weight).add(&x);
        let r = s.sqrt().unwrap();
        prop_assert_eq!(r.mul(&r), s);
    }

    #[test]
    fn exp_solves_its_differential_equation(x in small_series()) {
        let e = x.exp().unwrap();
        let lhs = e.diff_u();
        let rhs = x.diff_u().mul(&e);
        // ∂_u lowers weight by 2
        prop_assert_eq!(lhs.truncate(ORDER - 2), rhs.truncate(ORDER - 2));
    }

    #[test]
    fn products_of_real_series_are_real(f in real_series(), g in real_series()) {
        prop_assert!(f.is_real() && g.is_real());
        prop_assert!(f.mul(&g).is_real());
    }

    #[test]
    fn derivative_undoes_integral(s in uni()) {
        prop_assert_eq!(s.integrate().deriv(), s);
    }

    #[test]
    fn conjugation_is_an_involutive_automorphism(a in series(), b in series()) {
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!(a.mul(&b).conj(), a.conj().mul(&b.conj()));
    }

    #[test]
    fn gaussian_field_inverse(x in gaussian()) {
        prop_assume!(!x.is_zero());
        prop_assert_eq!(x.times(&x.inv().unwrap()), G::one());
    }
}
