mod common;

use common::*;
use moser_chains::normalize::{kill_f22, normalize, NormalizeOptions, Stage};
use moser_chains::series::{Coeff, GaussianRational as G, Series, UniSeries};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn vanishes(s: &Series<G>, j: u32, k: u32) -> bool {
    s.slice(j, k).is_zero()
}

/// The conditions each stage establishes, cumulatively in pipeline order.
fn established(s: &Series<G>, upto: Stage) -> Result<(), String> {
    let order = s.order();
    let rank = |st: Stage| Stage::ALL.iter().position(|x| *x == st).unwrap();
    let at = rank(upto);
    let check = |ok: bool, what: &str| if ok { Ok(()) } else { Err(format!("{what} after {upto}")) };
    if at >= rank(Stage::KillHarmonics) {
        for j in 0..=order {
            check(vanishes(s, j, 0) && vanishes(s, 0, j), "harmonic terms")?;
        }
    }
    if at >= rank(Stage::NormalizeLevi) {
        let one = UniSeries::constant(G::one(), s.slice(1, 1).order());
        check(s.slice(1, 1) == one, "F11 = 1")?;
    }
    if at >= rank(Stage::AbsorbK1) {
        for j in 2..=order {
            check(vanishes(s, j, 1) && vanishes(s, 1, j), "F_j1 families")?;
        }
    }
    if at >= rank(Stage::KillF22) {
        check(vanishes(s, 2, 2), "F22")?;
    }
    if at >= rank(Stage::KillF33) {
        check(vanishes(s, 3, 2) && vanishes(s, 2, 3) && vanishes(s, 3, 3), "F32, F33")?;
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn stages_are_sound_and_monotone(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = rand_graph(&mut rng, 7, 0.3);
        let mut opts = NormalizeOptions::new(7);
        opts.verify = true;
        let r = match normalize(&g, &opts) {
            Err(moser_chains::Error::LeviDegenerate(_)) => return Ok(()),
            r => r.unwrap(),
        };
        for s in &r.stages {
            prop_assert_eq!(s.residual_zero, Some(true), "{}", s.stage);
            prop_assert!(s.target.as_series().is_real());
            if let Err(e) = established(s.target.as_series(), s.stage) {
                prop_assert!(false, "{}", e);
            }
        }
        prop_assert!(r.shape_violations.is_empty());
        prop_assert!(r.map.f.order() == 7);
    }

    #[test]
    fn f22_multiplier_has_unit_modulus(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = rand_graph(&mut rng, 7, 0.3);
        let mut opts = NormalizeOptions::new(7);
        opts.stop_after = Some(Stage::AbsorbK1);
        let r = match normalize(&g, &opts) {
            Err(moser_chains::Error::LeviDegenerate(_)) => return Ok(()),
            r => r.unwrap(),
        };
        let m = kill_f22(&r.result).unwrap().map;
        let lambda = m.f.w_slice(1);
        let product = lambda.mul(&lambda.conj());
        prop_assert_eq!(product, UniSeries::constant(G::one(), lambda.order()));
    }
}
