//! Normalization of a Levi nondegenerate graph `v = F(z, z̄, u)`.
//!
//! Every stage returns the biholomorphism it used together with the image
//! graph, which is computed from the fundamental identity
//! `F'(Z, Z̄, U) = V`, where `Z = f(z, u + iF)` and `U + iV = g(z, u + iF)`.

mod pipeline;
mod punctual;
mod stages;

pub use pipeline::{
    ambiguity_check, chain_curve, normal_shape_violations, normalize, NormalizeOptions, NormalizeReport, Stage,
    StageRecord,
};
pub use punctual::{punctual_normalize_order5, punctual_step, punctual_steps};
pub use stages::{
    absorb_k1, check_f32_zero, kill_f22, kill_f33, kill_f33_psi, kill_harmonics, normalize_levi, prenormalize,
    straighten_curve, tangent_normalize, StageResult, TransversalCurve,
};

use crate::error::{Error, Result};
use crate::linalg::solve_complex;
use crate::series::{Coeff, Composer, Grading, HoloSeries, Mono, RealGraphSeries, Series, C64};

/// Graph of a real hypersurface through the origin.
pub type Hypersurface<C> = RealGraphSeries<C>;

/// Truncated biholomorphism `(z, w) ↦ (f(z, w), g(z, w))` fixing the origin.
#[derive(Clone, PartialEq, Debug)]
pub struct Biholo<C: Coeff> {
    pub f: HoloSeries<C>,
    pub g: HoloSeries<C>,
}

impl<C: Coeff> Biholo<C> {
    pub fn new(f: HoloSeries<C>, g: HoloSeries<C>) -> Result<Self> {
        if f.grading() != g.grading() {
            return Err(Error::Internal("map components use different gradings".into()));
        }
        if !f.constant_term().is_zero() || !g.constant_term().is_zero() {
            return Err(Error::ConstantTerm("biholomorphism must fix the origin".into()));
        }
        let det = f.coeff_zw(1, 0).times(&g.coeff_zw(0, 1)).minus(&f.coeff_zw(0, 1).times(&g.coeff_zw(1, 0)));
        if det.magnitude() == 0.0 {
            return Err(Error::NonInvertible("jacobian of the map vanishes at the origin".into()));
        }
        Ok(Biholo { f, g })
    }

    pub fn identity(order: u32, grading: Grading) -> Self {
        Biholo { f: HoloSeries::var_z(order, grading), g: HoloSeries::var_w(order, grading) }
    }

    pub fn order(&self) -> u32 {
        self.f.order().min(self.g.order())
    }

    pub fn grading(&self) -> Grading {
        self.f.grading()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.order(), self.grading())
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Biholo<C>) -> Result<Biholo<C>> {
        Ok(Biholo { f: next.f.compose(&self.f, &self.g)?, g: next.g.compose(&self.f, &self.g)? })
    }

    pub fn truncate(&self, order: u32) -> Self {
        Biholo { f: self.f.truncate(order), g: self.g.truncate(order) }
    }

    pub fn regrade(&self, grading: Grading, order: u32) -> Self {
        Biholo { f: self.f.regrade(grading, order), g: self.g.regrade(grading, order) }
    }

    pub fn to_numeric(&self) -> Biholo<C64> {
        Biholo { f: self.f.map_coeffs(|c| c.to_c64()), g: self.g.map_coeffs(|c| c.to_c64()) }
    }
}

/// The pulled-back coordinates `(Z, Z̄, U, V)` as series on `M`.
struct Pullback<C: Coeff> {
    z: Series<C>,
    zb: Series<C>,
    u: Series<C>,
    v: Series<C>,
}

fn pull_back<C: Coeff>(graph: &Series<C>, h: &Biholo<C>) -> Result<Pullback<C>> {
    if graph.grading() != h.grading() {
        return Err(Error::Internal("graph and map use different gradings".into()));
    }
    let order = graph.order().min(h.order());
    let gr = graph.grading();
    let w = Series::var_u(order, gr).add(&graph.truncate(order).scale(&C::imag_unit()));
    let z = h.f.truncate(order).substitute_w(&w)?;
    let g = h.g.truncate(order).substitute_w(&w)?;
    let zb = z.conj();
    Ok(Pullback { u: g.re_part(), v: g.im_part(), z, zb })
}

/// Substitutes undoing the graded-linear leading part of `(Z, Z̄, U)`.
fn leading_inverse<C: Coeff>(p: &Pullback<C>, graph: &Series<C>) -> Result<[Series<C>; 3]> {
    let order = p.z.order();
    let gr = p.z.grading();
    match gr {
        Grading::Weight => {
            if !graph.part(1).is_zero() {
                return Err(Error::Precondition("weight-graded transform needs a graph without linear terms".into()));
            }
            let lambda = p.z.coeff(1, 0, 0);
            let z1 = p.z.part(1);
            if z1.len() > 1 || !z1.coeff(0, 1, 0).is_zero() {
                return Err(Error::Precondition("map is not weight-graded in z".into()));
            }
            let li = lambda.inv().ok_or_else(|| Error::NonInvertible("dz'/dz vanishes at the origin".into()))?;
            let au = p.u.coeff(0, 0, 1);
            let aui = au.inv().ok_or_else(|| Error::NonInvertible("du'/du vanishes at the origin".into()))?;
            let lbi = li.conj();
            let mut rhs_u = Series::var_u(order, gr);
            for (m, c) in p.u.part(2).terms() {
                if m.l > 0 {
                    continue;
                }
                let mut k = c.clone();
                for _ in 0..m.j {
                    k = k.times(&li);
                }
                for _ in 0..m.k {
                    k = k.times(&lbi);
                }
                rhs_u.add_term(*m, &k.negate());
            }
            Ok([
                Series::monomial(Mono::new(1, 0, 0), li, order, gr),
                Series::monomial(Mono::new(0, 1, 0), lbi, order, gr),
                rhs_u.scale(&aui),
            ])
        }
        Grading::Degree => {
            let basis = [Mono::new(1, 0, 0), Mono::new(0, 1, 0), Mono::new(0, 0, 1)];
            let rows: Vec<Vec<C>> = [&p.z, &p.zb, &p.u]
                .iter()
                .map(|s| basis.iter().map(|m| s.get(m).cloned().unwrap_or_else(C::zero)).collect())
                .collect();
            let mut inv = vec![vec![C::zero(); 3]; 3];
            for col in 0..3 {
                let e: Vec<C> = (0..3).map(|i| if i == col { C::one() } else { C::zero() }).collect();
                let x = solve_complex(&rows, &e)
                    .ok_or_else(|| Error::NonInvertible("linear part of the map is singular".into()))?;
                for (r, v) in x.into_iter().enumerate() {
                    inv[r][col] = v;
                }
            }
            let sub = |r: usize| Series::from_terms(basis.iter().zip(&inv[r]).map(|(m, c)| (*m, c.clone())), order, gr);
            Ok([sub(0), sub(1), sub(2)])
        }
    }
}

/// Image of the graph `F` under `h`, by solving `F'(Z, Z̄, U) = V` grade by grade.
pub fn transform<C: Coeff>(graph: &RealGraphSeries<C>, h: &Biholo<C>) -> Result<RealGraphSeries<C>> {
    let p = pull_back(graph, h)?;
    let order = p.z.order();
    let gr = p.z.grading();
    let [lz, lzb, lu] = leading_inverse(&p, graph)?;
    let mut linv = Composer::new(lz, lzb, lu)?;
    let mut comp = Composer::new(p.z.clone(), p.zb.clone(), p.u.clone())?;
    let mut image = Series::zero(order, gr);
    let mut acc = Series::zero(order, gr);
    for d in 1..=order {
        let rhs = p.v.part(d).sub(&acc.part(d));
        if rhs.is_zero() {
            continue;
        }
        let piece = linv.apply(&rhs);
        acc = acc.add(&comp.apply(&piece));
        image = image.add(&piece);
    }
    RealGraphSeries::new(image)
}

/// `F'(Z, Z̄, U) − V`: zero exactly when `h` maps `v = F` into `v' = F'`
/// at the common truncation order.
pub fn fundamental_identity_residual<C: Coeff>(
    source: &RealGraphSeries<C>,
    h: &Biholo<C>,
    target: &RealGraphSeries<C>,
) -> Result<Series<C>> {
    let p = pull_back(source, h)?;
    let order = p.z.order().min(target.order());
    let mut comp = Composer::new(p.z, p.zb, p.u)?;
    Ok(comp.apply(&target.truncate(order)).sub(&p.v.truncate(order)))
}

/// Taylor expansion `F(z + z_p, z̄ + z̄_p, u + u_p) − v_p` of the graph at
/// `p = (z_p, u_p + i v_p)`, reading the stored terms as an exact polynomial.
pub fn translate_to_point<C: Coeff>(
    graph: &RealGraphSeries<C>,
    zp: &C,
    up: &C::Real,
    vp: &C::Real,
) -> Result<RealGraphSeries<C>> {
    let order = graph.order();
    let gr = graph.grading();
    let upc = C::from_real(up.clone());
    let value = graph.eval(zp, &zp.conj(), &upc);
    let gap = value.minus(&C::from_real(vp.clone()));
    let scale = 1.0 + graph.max_abs();
    if (C::EXACT && !gap.is_zero()) || gap.magnitude() > 1e-9 * scale {
        return Err(Error::NotOnHypersurface(format!("F(p) − v_p = {:?}", gap.to_c64())));
    }
    if zp.is_zero() && upc.is_zero() {
        return Ok(graph.clone());
    }
    let (mj, mk, ml) = graph.terms().fold((0, 0, 0), |(a, b, c), (m, _)| (a.max(m.j), b.max(m.k), c.max(m.l)));
    let powers = |base: Series<C>, e: u32| {
        let mut v = vec![Series::one(order, gr)];
        for i in 1..=e as usize {
            let next = v[i - 1].mul(&base);
            v.push(next);
        }
        v
    };
    let pz = powers(Series::var_z(order, gr).add(&Series::constant(zp.clone(), order, gr)), mj);
    let pzb = powers(Series::var_zb(order, gr).add(&Series::constant(zp.conj(), order, gr)), mk);
    let pu = powers(Series::var_u(order, gr).add(&Series::constant(upc, order, gr)), ml);
    let mut out = Series::zero(order, gr);
    for (m, c) in graph.terms() {
        let t = pz[m.j as usize].mul(&pzb[m.k as usize]).mul(&pu[m.l as usize]);
        out.add_scaled(&t, c);
    }
    let mut shifted = out;
    let c0 = shifted.constant_term().minus(&C::from_real(vp.clone()));
    shifted.set_term(Mono::ONE, c0);
    RealGraphSeries::new(shifted)
}

/// Numeric tolerance on a residual, relative to the size of the data.
pub(crate) fn residual_ok<C: Coeff>(residual: &Series<C>, scale: f64) -> bool {
    if C::EXACT {
        residual.is_zero()
    } else {
        residual.max_abs() <= 1e-9 * (1.0 + scale)
    }
}
