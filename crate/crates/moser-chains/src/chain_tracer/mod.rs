//! Chains: 2-jets of transversal curves under point maps, the invariant
//! completion `j¹ ↦ j²`, and numeric tracing of the chain ODE.
//!
//! A 1-jet `(x₁, y₁)` and a 2-jet `(x₂, y₂)` at the origin are handled as the
//! complex numbers `x₁ + i y₁` and `x₂ + i y₂`, derivatives of `z(u)`.

mod trace;

pub use trace::{pushed_sphere_chain_error, pushed_sphere_slope, sphere_chain_point, trace_chain, Trace, TraceOptions};

use crate::error::{Error, Result};
use crate::lie_jets::Jet2;
use crate::normalize::{prenormalize, punctual_step, tangent_normalize, translate_to_point, Biholo};
use crate::series::scalar::RealScalar;
use crate::series::{Coeff, Grading, Mono, RealGraphSeries, Series, UniSeries, C64};
use crate::sphere_isotropy::{isotropy_map_expansion, IsotropyParams};

/// Weighted order at which 2-jets are computed.
const JET_ORDER: u32 = 5;

/// Point map of `M` onto `M'` induced by a biholomorphism: the map together
/// with the graph of its source.
#[derive(Clone, Debug)]
pub struct PointDiffeo2<C: Coeff> {
    pub map: Biholo<C>,
    pub source: Series<C>,
}

impl<C: Coeff> PointDiffeo2<C> {
    pub fn new(map: Biholo<C>, source: Series<C>) -> Self {
        PointDiffeo2 { map, source }
    }

    /// The isotropy element `p` acting on the sphere.
    pub fn sphere_isotropy(p: &IsotropyParams<C>) -> Result<Self> {
        let (f, g) = isotropy_map_expansion(p, JET_ORDER)?;
        Ok(PointDiffeo2 { map: Biholo::new(f, g)?, source: sphere(JET_ORDER) })
    }

    /// Image of the 2-jet `(c₁, c₂)` at the origin.
    pub fn push(&self, c1: &C, c2: &C) -> Result<(C, C)> {
        push_jet(&self.map, &self.source, c1, c2)
    }
}

fn sphere<C: Coeff>(order: u32) -> Series<C> {
    Series::monomial(Mono::new(1, 1, 0), C::one(), order, Grading::Weight)
}

/// Pushes the 2-jet of `z(u) = c₁u + c₂u²/2` on the graph `source` through
/// `map`, returning the image `(dz'/du', d²z'/du'²)` at the origin.
pub fn push_jet<C: Coeff>(map: &Biholo<C>, source: &Series<C>, c1: &C, c2: &C) -> Result<(C, C)> {
    let n = 2;
    let half = C::from_ratio(1, 2);
    let z = UniSeries::from_coeffs(vec![C::zero(), c1.clone(), c2.times(&half)], n);
    let zb = z.conj();
    let t = UniSeries::var(n);
    let w = t.add(&source.along_curve(&z, &zb, &t).scale(&C::imag_unit()));
    let zz = map.f.along_curve(&z, &zb, &w);
    let gg = map.g.along_curve(&z, &zb, &w);
    let uu = gg.add(&gg.conj()).scale(&half);
    let (a1, a2) = (uu.get(1), uu.get(2));
    let (b1, b2) = (zz.get(1), zz.get(2));
    let tol = if C::EXACT { 0.0 } else { 1e-14 };
    if a1.magnitude() <= tol {
        return Err(Error::LeavesChart("du'/du vanishes: jet leaves the transversal chart".into()));
    }
    let inv = a1.inv().expect("nonzero");
    let x1 = b1.times(&inv);
    let two = C::from_i64(2);
    let x2 = two.times(&b2.times(&a1).minus(&b1.times(&a2))).times(&inv).times(&inv).times(&inv);
    Ok((x1, x2))
}

/// [`push_jet`] on real jet coordinates; the jet must sit at the origin.
pub fn jet_pushforward_2<C: Coeff>(h: &PointDiffeo2<C>, j: &Jet2<C::Real>) -> Result<Jet2<C::Real>> {
    if !(j.u.is_zero() && j.x.is_zero() && j.y.is_zero()) {
        return Err(Error::Precondition("jet must be based at the origin of the translated frame".into()));
    }
    let (c1, c2) = h.push(&C::from_parts(j.x1.clone(), j.y1.clone()), &C::from_parts(j.x2.clone(), j.y2.clone()))?;
    let zero = <C::Real as RealScalar>::zero();
    Ok(Jet2 { u: zero.clone(), x: zero.clone(), y: zero, x1: c1.re(), y1: c1.im(), x2: c2.re(), y2: c2.im() })
}

/// Sphere isotropy with `λ = 1`, `r = 0` sending the 1-jet `c₁` to the flat
/// one. Its weight-one part `z' = z + αw` acts on `z ≈ c₁u` as `c₁ + α`.
pub fn flatten_1jet<C: Coeff>(c1: &C) -> IsotropyParams<C> {
    IsotropyParams { lambda: C::one(), alpha: c1.negate(), r: <C::Real as RealScalar>::zero() }
}

/// Chain completion `x₂ + i y₂` of the 1-jet `c₁` at the origin of a graph
/// through 0, optionally normalizing with an extra isotropy element fixing
/// the flat 1-jet.
pub fn origin_chain_2jet<C: Coeff>(graph: &RealGraphSeries<C>, c1: &C, extra: Option<&IsotropyParams<C>>) -> Result<C> {
    let mut maps = Vec::new();
    let mut cur = graph.truncate(JET_ORDER);
    if let Some(t) = tangent_normalize(&cur)? {
        maps.push(PointDiffeo2::new(t.map, cur.regrade(Grading::Degree, JET_ORDER)));
        cur = t.target;
    }
    let p = prenormalize(&cur)?;
    maps.push(PointDiffeo2::new(p.map, cur.into_series()));
    cur = p.target;
    for delta in 3..=JET_ORDER {
        let s = punctual_step(&cur, delta)?;
        maps.push(PointDiffeo2::new(s.map, cur.into_series()));
        cur = s.target;
    }
    let mut flat = c1.clone();
    for m in &maps {
        flat = m.push(&flat, &C::zero())?.0;
    }
    maps.push(PointDiffeo2::sphere_isotropy(&flatten_1jet(&flat))?);
    if let Some(e) = extra {
        maps.push(PointDiffeo2::sphere_isotropy(e)?);
    }
    // the image 2-jet is real-affine in (x₂, y₂)
    let image = |c2: C| -> Result<C> {
        let mut j = (c1.clone(), c2);
        for m in &maps {
            j = m.push(&j.0, &j.1)?;
        }
        Ok(j.1)
    };
    let p0 = image(C::zero())?;
    let p1 = image(C::one())?.minus(&p0);
    let pi = image(C::imag_unit())?.minus(&p0);
    let det = p1.re().times(&pi.im()).minus(&pi.re().times(&p1.im()));
    let x = pi.re().times(&p0.im()).minus(&pi.im().times(&p0.re())).over(&det);
    let y = p1.im().times(&p0.re()).minus(&p1.re().times(&p0.im())).over(&det);
    match (x, y) {
        (Some(x), Some(y)) => Ok(C::from_parts(x, y)),
        _ => Err(Error::Internal("2-jet pushforward is not invertible".into())),
    }
}

/// Chain completion at the point `p = (z_p, u_p + i F(p))` of the graph.
pub fn chain_2jet<C: Coeff>(
    graph: &RealGraphSeries<C>,
    zp: &C,
    up: &C::Real,
    c1: &C,
    extra: Option<&IsotropyParams<C>>,
) -> Result<C> {
    let vp = graph.eval(zp, &zp.conj(), &C::from_real(up.clone())).re();
    let local = translate_to_point(graph, zp, up, &vp)?;
    origin_chain_2jet(&local, c1, extra)
}

/// Right-hand side `(A, B)` of the chain ODE `ẍ = A, ÿ = B` at a state
/// `(u, x, y, x₁, y₁)`.
pub fn chain_ab(graph: &RealGraphSeries<C64>, state: [f64; 5]) -> Result<(f64, f64)> {
    let [u, x, y, x1, y1] = state;
    let c2 = chain_2jet(graph, &C64::new(x, y), &u, &C64::new(x1, y1), None)?;
    Ok((c2.re, c2.im))
}
