#![allow(dead_code)]

use moser_chains::series::{GaussianRational as G, Grading, Mono, RealGraphSeries, Series};
use moser_chains::sphere_isotropy::IsotropyParams;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rand_q(rng: &mut ChaCha8Rng, span: i64) -> BigRational {
    q(rng.gen_range(-span..=span), rng.gen_range(1..=7))
}

pub fn rand_q_nonzero(rng: &mut ChaCha8Rng, span: i64) -> BigRational {
    loop {
        let v = rand_q(rng, span);
        if v != q(0, 1) {
            return v;
        }
    }
}

pub fn rand_g(rng: &mut ChaCha8Rng, span: i64) -> G {
    G::new(rand_q(rng, span), rand_q(rng, span))
}

pub fn rand_g_nonzero(rng: &mut ChaCha8Rng, span: i64) -> G {
    G::new(rand_q_nonzero(rng, span), rand_q(rng, span))
}

pub fn rand_isotropy(rng: &mut ChaCha8Rng) -> IsotropyParams<G> {
    IsotropyParams::new(rand_g_nonzero(rng, 3), rand_g(rng, 3), rand_q(rng, 3)).unwrap()
}

/// A random real graph `v = F` with `F(0) = 0` and terms of weight ≤ `order`.
/// Each admissible monomial is present with probability `density`; the
/// `zz̄` coefficient is a nonzero rational, linear terms included.
pub fn rand_graph(rng: &mut ChaCha8Rng, order: u32, density: f64) -> RealGraphSeries<G> {
    let mut s = Series::zero(order, Grading::Weight);
    for l in 0..=order / 2 {
        for j in 0..=order - 2 * l {
            for k in j..=order - 2 * l - j {
                if (j, k, l) == (0, 0, 0) {
                    continue;
                }
                if (j, k, l) == (1, 1, 0) {
                    s.set_term(Mono::new(1, 1, 0), G::new(rand_q_nonzero(rng, 4), q(0, 1)));
                    continue;
                }
                if !rng.gen_bool(density) {
                    continue;
                }
                if j == k {
                    s.set_term(Mono::new(j, k, l), G::new(rand_q(rng, 4), q(0, 1)));
                } else {
                    let c = rand_g(rng, 4);
                    s.set_term(Mono::new(k, j, l), moser_chains::series::Coeff::conj(&c));
                    s.set_term(Mono::new(j, k, l), c);
                }
            }
        }
    }
    RealGraphSeries::new(s).unwrap()
}

pub fn graph(terms: &[((u32, u32, u32), G)], order: u32) -> RealGraphSeries<G> {
    let s = Series::from_terms(
        terms.iter().map(|((j, k, l), c)| (Mono::new(*j, *k, *l), c.clone())),
        order,
        Grading::Weight,
    );
    RealGraphSeries::new(s).unwrap()
}

pub fn sphere(order: u32) -> RealGraphSeries<G> {
    graph(&[((1, 1, 0), G::from_int(1))], order)
}

/// `v = zz̄ + ε(z⁴z̄² + z²z̄⁴)`.
pub fn perturbed_sphere(eps: &G, order: u32) -> RealGraphSeries<G> {
    graph(&[((1, 1, 0), G::from_int(1)), ((4, 2, 0), eps.clone()), ((2, 4, 0), eps.clone())], order)
}
