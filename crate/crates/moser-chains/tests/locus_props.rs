use moser_chains::chain_locus::{first_jet_rank, on_sigma0, pivot_rank, sigma0_jet, tangency_to_sigma0, FiberPoint};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = BigRational> {
    (-12i64..=12, 1i64..=9).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_two_on_the_locus(x1 in rational(), y1 in rational()) {
        let (x2, y2) = sigma0_jet(&x1, &y1);
        let p = FiberPoint::new(x1, y1, x2, y2);
        prop_assert!(on_sigma0(&p));
        prop_assert_eq!(pivot_rank(&p).unwrap(), 2);
    }

    #[test]
    fn rank_four_off_the_locus(x1 in rational(), y1 in rational(), a2 in rational(), b2 in rational()) {
        prop_assume!(!(a2.is_zero() && b2.is_zero()));
        let (sx, sy) = sigma0_jet(&x1, &y1);
        let p = FiberPoint::new(x1, y1, sx + a2, sy + b2);
        prop_assert!(!on_sigma0(&p));
        prop_assert_eq!(pivot_rank(&p).unwrap(), 4);
    }

    #[test]
    fn first_jets_form_one_orbit(x1 in rational(), y1 in rational(), x2 in rational(), y2 in rational()) {
        prop_assert_eq!(first_jet_rank(&FiberPoint::new(x1, y1, x2, y2)).unwrap(), 2);
    }
}

#[test]
fn locus_is_invariant() {
    let r = tangency_to_sigma0().unwrap();
    assert!(r.pass);
    assert_eq!(r.entries.len(), 5);
}
