//! Normalization to `v = zz̄ + O(6)` by maps `z + f_{δ−1}`, `w + g_δ`, `δ = 3, 4, 5`.
//!
//! At weight `δ` such a map changes the graph by
//! `F'_δ = F_δ − Re{ i g(z, u + izz̄) + 2 z̄ f(z, u + izz̄) }_δ`,
//! a real-linear system in the coefficients of `f` and `g`.

use std::sync::OnceLock;

use num_rational::BigRational;

use super::stages::{prenormalize, StageResult};
use super::{residual_ok, transform, Biholo};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Rref};
use crate::series::scalar::RealScalar;
use crate::series::{Coeff, GaussianRational, Grading, HoloSeries, Mono, RealGraphSeries, Series};

type G = GaussianRational;

#[derive(Clone, Copy, Debug)]
struct Unknown {
    in_g: bool,
    j: u32,
    l: u32,
    imaginary: bool,
}

struct System {
    unknowns: Vec<Unknown>,
    rows: Vec<(Mono, bool)>,
    rref: Rref<BigRational>,
}

fn holo_basis(weight: u32) -> Vec<(u32, u32)> {
    (0..=weight / 2).map(|l| (weight - 2 * l, l)).collect()
}

fn graph_basis(weight: u32) -> Vec<Mono> {
    let mut out = Vec::new();
    for l in 0..=weight / 2 {
        let r = weight - 2 * l;
        for j in 0..=r {
            out.push(Mono::new(j, r - j, l));
        }
    }
    out
}

/// `Re{ i g(z, u + izz̄) + 2 z̄ f(z, u + izz̄) }` at weight `δ`.
fn core<C: Coeff>(f: &HoloSeries<C>, g: &HoloSeries<C>, delta: u32) -> Result<Series<C>> {
    let gr = Grading::Weight;
    let arg = Series::var_u(delta, gr).add(&Series::monomial(Mono::new(1, 1, 0), C::imag_unit(), delta, gr));
    let fs = f.truncate(delta).substitute_w(&arg)?;
    let gs = g.truncate(delta).substitute_w(&arg)?;
    let zb = Series::var_zb(delta, gr);
    let sum = gs.scale(&C::imag_unit()).add(&zb.mul(&fs).scale(&C::from_i64(2)));
    Ok(sum.re_part().part(delta))
}

fn build(delta: u32) -> System {
    let gr = Grading::Weight;
    let mut unknowns = Vec::new();
    for (in_g, w) in [(false, delta - 1), (true, delta)] {
        for (j, l) in holo_basis(w) {
            for imaginary in [false, true] {
                unknowns.push(Unknown { in_g, j, l, imaginary });
            }
        }
    }
    let rows: Vec<(Mono, bool)> = graph_basis(delta).into_iter().flat_map(|m| [(m, false), (m, true)]).collect();
    let mut cols = Vec::new();
    for u in &unknowns {
        let c = if u.imaginary { G::i() } else { G::from_int(1) };
        let mono = HoloSeries::from_terms([(u.j, u.l, c)], delta, gr);
        let zero = HoloSeries::zero(delta, gr);
        let (f, g) = if u.in_g { (zero, mono) } else { (mono, zero) };
        let s = core(&f, &g, delta).expect("weight-2 argument");
        cols.push(
            rows.iter()
                .map(|(m, im)| {
                    let v = s.coeff(m.j, m.k, m.l);
                    if *im {
                        v.im
                    } else {
                        v.re
                    }
                })
                .collect::<Vec<_>>(),
        );
    }
    let a = Matrix::from_rows((0..rows.len()).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect());
    System { unknowns, rows, rref: a.rref(0.0) }
}

fn system(delta: u32) -> &'static System {
    static CACHE: [OnceLock<System>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    CACHE[(delta - 3) as usize].get_or_init(|| build(delta))
}

/// Solves for `(f_{δ−1}, g_δ)` cancelling the weight-`δ` part of the graph.
fn solve<C: Coeff>(graph: &Series<C>, delta: u32, order: u32) -> Result<(HoloSeries<C>, HoloSeries<C>)> {
    let sys = system(delta);
    let b: Vec<C::Real> = sys
        .rows
        .iter()
        .map(|(m, im)| {
            let c = graph.coeff(m.j, m.k, m.l);
            if *im {
                c.im()
            } else {
                c.re()
            }
        })
        .collect();
    let e = &sys.rref.transform;
    let eb: Vec<C::Real> = (0..e.rows())
        .map(|i| {
            let mut acc = <C::Real as RealScalar>::zero();
            for (k, bk) in b.iter().enumerate() {
                let eik = e.get(i, k);
                if !num_traits::Zero::is_zero(eik) && !bk.is_zero() {
                    acc = acc.plus(&<C::Real as RealScalar>::from_rational(eik).times(bk));
                }
            }
            acc
        })
        .collect();
    let rank = sys.rref.pivots.len();
    let scale = 1.0 + b.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max);
    if eb[rank..].iter().any(|v| v.is_pivot(1e-9 * scale)) {
        return Err(Error::Internal(format!("weight-{delta} normalization system is inconsistent")));
    }
    let gr = Grading::Weight;
    let mut f = Series::zero(order, gr);
    let mut g = Series::zero(order, gr);
    for (i, &col) in sys.rref.pivots.iter().enumerate() {
        let u = sys.unknowns[col];
        let zero = <C::Real as RealScalar>::zero();
        let v = if u.imaginary { C::from_parts(zero, eb[i].clone()) } else { C::from_parts(eb[i].clone(), zero) };
        let target = if u.in_g { &mut g } else { &mut f };
        target.add_term(Mono::new(u.j, 0, u.l), &v);
    }
    Ok((HoloSeries::from_series(f)?, HoloSeries::from_series(g)?))
}

/// One weight-`δ` step; the image has no terms of weight `δ`.
pub fn punctual_step<C: Coeff>(graph: &RealGraphSeries<C>, delta: u32) -> Result<StageResult<C>> {
    if !(3..=5).contains(&delta) {
        return Err(Error::Precondition(format!("punctual step weight {delta} outside 3..=5")));
    }
    let order = graph.order();
    let gr = Grading::Weight;
    let (f, g) = solve(graph, delta, order)?;
    let map = Biholo::new(HoloSeries::var_z(order, gr).add(&f), HoloSeries::var_w(order, gr).add(&g))?;
    let target = if map.is_identity() { graph.clone() } else { transform(graph, &map)? };
    if !residual_ok(&target.part(delta), graph.max_abs()) {
        return Err(Error::Internal(format!("weight-{delta} terms survive the punctual step")));
    }
    Ok(StageResult { map, target })
}

fn is_prenormalized<C: Coeff>(graph: &Series<C>) -> bool {
    let expect = Series::monomial(Mono::new(1, 1, 0), C::one(), graph.order(), graph.grading());
    graph.part(1).is_zero() && residual_ok(&graph.part(2).sub(&expect.part(2)), 1.0)
}

/// The steps `δ = 3, 4, 5` (those within the truncation order), preceded by
/// prenormalization when the weight-2 part is not already `zz̄`.
pub fn punctual_steps<C: Coeff>(graph: &RealGraphSeries<C>) -> Result<Vec<StageResult<C>>> {
    let mut steps = Vec::new();
    let mut cur = graph.clone();
    if !is_prenormalized(graph) {
        let p = prenormalize(graph)?;
        cur = p.target.clone();
        steps.push(p);
    }
    for delta in 3..=graph.order().min(5) {
        let s = punctual_step(&cur, delta)?;
        cur = s.target.clone();
        steps.push(s);
    }
    Ok(steps)
}

/// `v = zz̄ + O(6)` and the composed map achieving it.
pub fn punctual_normalize_order5<C: Coeff>(graph: &RealGraphSeries<C>) -> Result<(RealGraphSeries<C>, Biholo<C>)> {
    let steps = punctual_steps(graph)?;
    let mut map = Biholo::identity(graph.order(), Grading::Weight);
    let mut target = graph.clone();
    for s in steps {
        map = map.then(&s.map)?;
        target = s.target;
    }
    Ok((target, map))
}
