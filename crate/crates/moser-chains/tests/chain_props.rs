mod common;

use common::*;
use moser_chains::chain_locus::sigma0_jet;
use moser_chains::chain_tracer::{
    chain_2jet, origin_chain_2jet, pushed_sphere_chain_error, trace_chain, PointDiffeo2, TraceOptions,
};
use moser_chains::normalize::{transform, Biholo};
use moser_chains::series::{Coeff, GaussianRational as G, Grading, HoloSeries, Mono, RealGraphSeries, Series, C64};
use moser_chains::sphere_isotropy::IsotropyParams;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORDER: u32 = 5;

/// `z + …, w + …` with random terms of weight 2..=5 in `f` and 3..=5 in `g`.
fn rand_map(rng: &mut ChaCha8Rng) -> Biholo<G> {
    let mut f = vec![(1, 0, G::one())];
    let mut g = vec![(0, 1, G::one())];
    for (j, l) in [(2, 0), (0, 1), (1, 1), (3, 0), (2, 1), (0, 2), (4, 0)] {
        if rng.gen_bool(0.5) {
            f.push((j, l, rand_g(rng, 3)));
        }
    }
    for (j, l) in [(3, 0), (1, 1), (2, 1), (0, 2), (4, 0), (5, 0), (3, 1), (1, 2)] {
        if rng.gen_bool(0.5) {
            g.push((j, l, rand_g(rng, 3)));
        }
    }
    let w = Grading::Weight;
    Biholo::new(HoloSeries::from_terms(f, ORDER, w), HoloSeries::from_terms(g, ORDER, w)).unwrap()
}

/// Levi nondegenerate graph in prenormal shape at weight ≤ 5.
fn rand_source(rng: &mut ChaCha8Rng) -> RealGraphSeries<G> {
    let g = rand_graph(rng, ORDER, 0.4).into_series();
    let g = g.filter(|m| m.weight() > 2 || (m.j, m.k) == (1, 1));
    let g = g.filter(|m| !(m.j == 0 && m.k == 0));
    let mut s = Series::from_terms(g.terms().map(|(m, c)| (*m, c.clone())), ORDER, Grading::Weight);
    s.set_term(Mono::new(1, 1, 0), G::one());
    RealGraphSeries::new(s).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn jet_pushforward_is_functorial(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let src = rand_source(&mut rng);
        let (m1, m2) = (rand_map(&mut rng), rand_map(&mut rng));
        let mid = transform(&src, &m1).unwrap();
        let h1 = PointDiffeo2::new(m1.clone(), src.as_series().clone());
        let h2 = PointDiffeo2::new(m2.clone(), mid.into_series());
        let h = PointDiffeo2::new(m1.then(&m2).unwrap(), src.into_series());
        let (c1, c2) = (rand_g(&mut rng, 3), rand_g(&mut rng, 3));
        let (a1, a2) = h1.push(&c1, &c2).unwrap();
        prop_assert_eq!(h2.push(&a1, &a2).unwrap(), h.push(&c1, &c2).unwrap());
    }

    #[test]
    fn isotropy_pushforward_is_functorial(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p1, p2) = (rand_isotropy(&mut rng), rand_isotropy(&mut rng));
        let (h1, h2) = (PointDiffeo2::sphere_isotropy(&p1).unwrap(), PointDiffeo2::sphere_isotropy(&p2).unwrap());
        let h = PointDiffeo2::new(h1.map.then(&h2.map).unwrap(), h1.source.clone());
        let (c1, c2) = (rand_g(&mut rng, 3), rand_g(&mut rng, 3));
        let (a1, a2) = h1.push(&c1, &c2).unwrap();
        prop_assert_eq!(h2.push(&a1, &a2).unwrap(), h.push(&c1, &c2).unwrap());
    }

    #[test]
    fn completion_does_not_depend_on_the_normalizing_map(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = rand_graph(&mut rng, ORDER, 0.5);
        let c1 = rand_g(&mut rng, 2);
        let extra = IsotropyParams::new(rand_g_nonzero(&mut rng, 3), G::zero(), rand_q(&mut rng, 3)).unwrap();
        let Ok(a) = origin_chain_2jet(&g, &c1, None) else { return Ok(()) };
        prop_assert_eq!(a, origin_chain_2jet(&g, &c1, Some(&extra)).unwrap());
    }

    #[test]
    fn sphere_completion_is_the_locus(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x1, y1) = (rand_q(&mut rng, 12), rand_q(&mut rng, 12));
        let c2 = chain_2jet(&sphere(6), &G::zero(), &q(0, 1), &G::new(x1.clone(), y1.clone()), None).unwrap();
        let (x2, y2) = sigma0_jet(&x1, &y1);
        prop_assert_eq!(c2, G::new(x2, y2));
    }

    #[test]
    fn pushed_sphere_chains_are_chains(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alpha = C64::from_polar(rng.gen_range(0.0..=1.0), rng.gen_range(0.0..std::f64::consts::TAU));
        let iso = rand_isotropy(&mut rng).to_numeric();
        let s = sphere(6).map_coeffs(|c| c.to_c64());
        let t = trace_chain(&s, C64::new(0.0, 0.0), alpha, &TraceOptions { chart_radius: 4.0, ..Default::default() }).unwrap();
        prop_assert!(!t.truncated);
        prop_assert!(pushed_sphere_chain_error(&t, alpha, &iso) <= 1e-6);
    }
}

/// `zz̄` plus random terms outside the sporadic families, weight ≤ 8.
fn rand_normal_form(rng: &mut ChaCha8Rng) -> RealGraphSeries<G> {
    let mut s = Series::zero(8, Grading::Weight);
    s.set_term(Mono::new(1, 1, 0), G::one());
    for (j, k) in [(4, 2), (5, 2), (4, 3), (6, 2), (5, 3), (4, 4)] {
        for l in 0..=(8 - j - k) / 2 {
            if rng.gen_bool(0.6) {
                let c = if j == k { G::new(rand_q(rng, 4), q(0, 1)) } else { rand_g(rng, 4) };
                s.set_term(Mono::new(k, j, l), c.conj());
                s.set_term(Mono::new(j, k, l), c);
            }
        }
    }
    RealGraphSeries::new(s).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn flat_chain_of_a_normal_form_is_the_u_axis(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = rand_normal_form(&mut rng).map_coeffs(|c| c.to_c64());
        let t = trace_chain(&g, C64::new(0.0, 0.0), C64::new(0.0, 0.0), &TraceOptions::default()).unwrap();
        let drift = t.rows.iter().map(|r| r[1].abs().max(r[2].abs())).fold(0.0, f64::max);
        prop_assert!(drift <= 1e-10, "drift {}", drift);
    }
}
