//! Individual normalization steps. Each returns the map and the image graph.

use super::{residual_ok, transform, Biholo};
use crate::error::{Error, Result};
use crate::series::{
    implicit_invert_u, Coeff, Grading, HoloSeries, Mono, RealGraphSeries, RealScalar, Series, UniSeries,
};

/// A map and the graph it produces.
#[derive(Clone, Debug)]
pub struct StageResult<C: Coeff> {
    pub map: Biholo<C>,
    pub target: RealGraphSeries<C>,
}

fn apply<C: Coeff>(graph: &RealGraphSeries<C>, map: Biholo<C>) -> Result<StageResult<C>> {
    if map.is_identity() {
        return Ok(StageResult { map, target: graph.clone() });
    }
    let target = transform(graph, &map)?;
    Ok(StageResult { map, target })
}

fn ensure(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Precondition(msg.into()))
    }
}

/// Whether all terms selected by `pick` vanish (to tolerance in numeric mode).
fn vanishes<C: Coeff, P: Fn(&Mono) -> bool>(graph: &Series<C>, pick: P) -> bool {
    residual_ok(&graph.filter(pick), graph.max_abs())
}

fn slice_is<C: Coeff>(graph: &Series<C>, j: u32, k: u32, value: &[C]) -> bool {
    let s = graph.slice(j, k);
    let mut target = UniSeries::zero(s.order());
    for (i, v) in value.iter().enumerate().take(s.order() + 1) {
        target.set(i, v.clone());
    }
    let d = s.sub(&target);
    if C::EXACT {
        d.is_zero()
    } else {
        d.max_abs() <= 1e-9 * (1.0 + graph.max_abs())
    }
}

/// Removes the linear terms `a z + ā z̄ + b u` with `w' = (1 − ib)w − 2iaz`.
/// Runs in the degree grading; the image is returned in the weight grading.
/// `None` when there is nothing to do.
pub fn tangent_normalize<C: Coeff>(graph: &RealGraphSeries<C>) -> Result<Option<StageResult<C>>> {
    let order = graph.order();
    let a = graph.coeff(1, 0, 0);
    let b = graph.coeff(0, 0, 1);
    if a.is_zero() && b.is_zero() {
        return Ok(None);
    }
    let gd = Grading::Degree;
    let deg = RealGraphSeries::new(graph.regrade(gd, order))?;
    let i = C::imag_unit();
    let f = HoloSeries::var_z(order, gd);
    let g = HoloSeries::from_terms(
        [(0, 1, C::one().minus(&i.times(&b))), (1, 0, C::from_i64(-2).times(&i).times(&a))],
        order,
        gd,
    );
    let map = Biholo::new(f, g)?;
    // linear terms of the image vanish identically; drop rounding noise
    let image = transform(&deg, &map)?.filter(|m| m.degree() > 1);
    Ok(Some(StageResult { map, target: RealGraphSeries::new(image.regrade(Grading::Weight, order))? }))
}

/// `w' = (w − 2i e z²)/c` turning the weight-2 part `c zz̄ + e z² + ē z̄²` into `zz̄`.
pub fn prenormalize<C: Coeff>(graph: &RealGraphSeries<C>) -> Result<StageResult<C>> {
    ensure(graph.part(1).is_zero() && graph.coeff(0, 0, 1).is_zero(), "graph still has linear terms")?;
    let order = graph.order();
    let gr = Grading::Weight;
    let c = graph.coeff(1, 1, 0);
    if c.magnitude() <= if C::EXACT { 0.0 } else { 1e-12 } {
        return Err(Error::LeviDegenerate("the zz̄ coefficient vanishes".into()));
    }
    let ci = c.inv().expect("nonzero Levi coefficient");
    let e = graph.coeff(2, 0, 0);
    let i = C::imag_unit();
    let g =
        HoloSeries::from_terms([(0, 1, ci.clone()), (2, 0, C::from_i64(-2).times(&i).times(&e).times(&ci))], order, gr);
    apply(graph, Biholo::new(HoloSeries::var_z(order, gr), g)?)
}

/// Transversal curve `t ↦ (φ(t), ψ(t))` through the origin.
#[derive(Clone, PartialEq, Debug)]
pub struct TransversalCurve<C: Coeff> {
    pub phi: UniSeries<C>,
    pub psi: UniSeries<C>,
}

impl<C: Coeff> TransversalCurve<C> {
    pub fn new(phi: UniSeries<C>, psi: UniSeries<C>) -> Result<Self> {
        if !phi.get(0).is_zero() || !psi.get(0).is_zero() {
            return Err(Error::Precondition("curve must pass through the origin".into()));
        }
        if psi.get(1).is_zero() {
            return Err(Error::NonTransversal("dψ/dt vanishes at 0".into()));
        }
        Ok(TransversalCurve { phi, psi })
    }

    /// The curve `z = c(u)` on the graph, parametrized by `u`:
    /// `ψ(t) = t + i F(c(t), c̄(t), t)`.
    pub fn on_graph(graph: &Series<C>, c: &UniSeries<C>) -> Result<Self> {
        let n = c.order();
        let t = UniSeries::var(n);
        let v = graph.along_curve(c, &c.conj(), &t);
        Self::new(c.clone(), t.add(&v.scale(&C::imag_unit())))
    }

    /// `F(φ, φ̄, Re ψ) − Im ψ` along the curve.
    pub fn defect(&self, graph: &Series<C>) -> UniSeries<C> {
        let half = C::from_ratio(1, 2);
        let re = self.psi.add(&self.psi.conj()).scale(&half);
        let im = self.psi.sub(&self.psi.conj()).scale(&half.times(&C::imag_unit()).negate());
        graph.along_curve(&self.phi, &self.phi.conj(), &re).sub(&im)
    }
}

/// Moves a transversal curve on `M` to the `u`-axis:
/// `w' = ψ⁻¹(w)`, `z' = z − φ(ψ⁻¹(w))`.
pub fn straighten_curve<C: Coeff>(graph: &RealGraphSeries<C>, curve: &TransversalCurve<C>) -> Result<StageResult<C>> {
    let order = graph.order();
    let gr = Grading::Weight;
    let n = (order / 2) as usize;
    let phi = curve.phi.truncate(n);
    let psi = curve.psi.truncate(n);
    let d = TransversalCurve { phi: phi.clone(), psi: psi.clone() }.defect(graph);
    let ok = if C::EXACT { d.is_zero() } else { d.max_abs() <= 1e-9 * (1.0 + graph.max_abs()) };
    ensure(ok, "curve does not lie on the hypersurface")?;
    let inv = psi.reversion()?;
    let shift = phi.compose(&inv)?;
    let f = HoloSeries::var_z(order, gr).sub(&HoloSeries::from_w_series(&shift, order, gr));
    let g = HoloSeries::from_w_series(&inv, order, gr);
    let out = apply(graph, Biholo::new(f, g)?)?;
    if !vanishes(&out.target, |m| m.j == 0 && m.k == 0) {
        return Err(Error::Internal("straightened curve is not on the u-axis".into()));
    }
    Ok(out)
}

/// `w' = w − 2i F(z, 0, T(z, w))` with `u + iF(z, 0, u) = ω ⇔ u = T(z, ω)`;
/// removes every pure `z^j u^l` and `z̄^k u^l` term.
pub fn kill_harmonics<C: Coeff>(graph: &RealGraphSeries<C>) -> Result<StageResult<C>> {
    ensure(vanishes(graph, |m| m.j == 0 && m.k == 0), "F(0,0,u) must vanish identically")?;
    let order = graph.order();
    let gr = Grading::Weight;
    let f0 = HoloSeries::from_series(graph.filter(|m| m.k == 0))?;
    if f0.is_zero() {
        return Ok(StageResult { map: Biholo::identity(order, gr), target: graph.clone() });
    }
    let t = implicit_invert_u(&f0)?;
    let z = HoloSeries::var_z(order, gr);
    let corr = f0.compose(&z, &t)?.scale(&C::from_i64(-2).times(&C::imag_unit()));
    let out = apply(graph, Biholo::new(z, HoloSeries::var_w(order, gr).add(&corr))?)?;
    if !vanishes(&out.target, |m| m.j == 0 || m.k == 0) {
        return Err(Error::Internal("harmonic terms survive".into()));
    }
    Ok(out)
}

fn no_harmonics<C: Coeff>(graph: &Series<C>) -> Result<()> {
    ensure(vanishes(graph, |m| m.j == 0 || m.k == 0), "graph has harmonic terms")
}

/// `z' = z √F₁₁(w)`, making `F₁₁ ≡ 1`.
pub fn normalize_levi<C: Coeff>(graph: &RealGraphSeries<C>) -> Result<StageResult<C>> {
    no_harmonics(graph)?;
    let order = graph.order();
    let gr = Grading::Weight;
    let f11 = graph.slice(1, 1);
    let c0 = f11.get(0);
    let ok = if C::EXACT { c0.is_one() } else { c0.minus(&C::one()).magnitude() <= 1e-12 };
    ensure(ok, "F11(0) must equal 1")?;
    let root = HoloSeries::from_w_series(&f11, order, gr).as_series().sqrt()?;
    let f = HoloSeries::var_z(order, gr).mul(&HoloSeries::from_series(root)?);
    apply(graph, Biholo::new(f, HoloSeries::var_w(order, gr))?)
}

fn levi_is_one<C: Coeff>(graph: &Series<C>) -> Result<()> {
    ensure(slice_is(graph, 1, 1, &[C::one()]), "F11 must be identically 1")
}

/// `z' = z + Σ_{j≥2} z^j F_{j,1}(w)`, removing the `(j,1)` and `(1,k)` families.
pub fn absorb_k1<C: Coeff>(graph: &RealGraphSeries<C>) -> Result<StageResult<C>> {
    no_harmonics(graph)?;
    levi_is_one(graph)?;
    let order = graph.order();
    let gr = Grading::Weight;
    let lambda = HoloSeries::from_terms(
        graph.terms().filter(|(m, _)| m.k == 1 && m.j >= 2).map(|(m, c)| (m.j, m.l, c.clone())),
        order,
        gr,
    );
    let out = apply(graph, Biholo::new(HoloSeries::var_z(order, gr).add(&lambda), HoloSeries::var_w(order, gr))?)?;
    if !vanishes(&out.target, |m| (m.k == 1 || m.j == 1) && m.j + m.k >= 3) {
        return Err(Error::Internal("(j,1) terms survive".into()));
    }
    Ok(out)
}

fn reduced_form<C: Coeff>(graph: &Series<C>) -> Result<()> {
    no_harmonics(graph)?;
    levi_is_one(graph)?;
    ensure(vanishes(graph, |m| (m.k == 1 || m.j == 1) && m.j + m.k >= 3), "graph has (j,1) terms")
}

/// `z' = z λ(w)` with `λ = exp((1/2i)∫₀ F₂₂)`, making `F₂₂ ≡ 0`.
pub fn kill_f22<C: Coeff>(graph: &RealGraphSeries<C>) -> Result<StageResult<C>> {
    reduced_form(graph)?;
    let order = graph.order();
    let gr = Grading::Weight;
    let f22 = graph.slice(2, 2);
    ensure(f22.coeffs().iter().all(|c| c.im().to_f64().abs() <= if C::EXACT { 0.0 } else { 1e-9 }), "F22 is not real")?;
    let half_over_i = C::imag_unit().times(&C::from_ratio(-1, 2));
    let exponent = HoloSeries::from_w_series(&f22.integrate(), order, gr).scale(&half_over_i);
    let lambda = HoloSeries::from_series(exponent.as_series().exp()?)?;
    apply(graph, Biholo::new(HoloSeries::var_z(order, gr).mul(&lambda), HoloSeries::var_w(order, gr))?)
}

/// The slice `F₃₂(u)`, and whether it vanishes.
pub fn check_f32_zero<C: Coeff>(graph: &RealGraphSeries<C>) -> (bool, UniSeries<C>) {
    let s = graph.slice(3, 2);
    let ok = if C::EXACT { s.is_zero() } else { s.max_abs() <= 1e-9 * (1.0 + graph.max_abs()) };
    (ok, s)
}

/// Solution of `ψ''' = (3/2)ψ''²/ψ' − 3F₃₃ψ'` with `ψ(0) = 0`, `ψ'(0) = 1`,
/// `ψ''(0) = 0`, up to `t^n`.
pub fn kill_f33_psi<C: Coeff>(f33: &UniSeries<C>, n: usize) -> Result<UniSeries<C>> {
    let mut psi = UniSeries::zero(n);
    if n >= 1 {
        psi.set(1, C::one());
    }
    for k in 0..n.saturating_sub(2) {
        let d1 = psi.deriv();
        let d2 = d1.deriv();
        let quot = d2.mul(&d2).mul(&d1.inv()?);
        let rhs = quot.get(k).times(&C::from_ratio(3, 2)).minus(&C::from_i64(3).times(&f33.mul(&d1).get(k)));
        let denom = ((k + 1) * (k + 2) * (k + 3)) as i64;
        psi.set(k + 3, rhs.times(&C::from_ratio(1, denom)));
    }
    Ok(psi)
}

/// `z' = z √ψ'(w)`, `w' = ψ(w)`, making `F₃₃ ≡ 0`.
pub fn kill_f33<C: Coeff>(graph: &RealGraphSeries<C>) -> Result<StageResult<C>> {
    reduced_form(graph)?;
    ensure(slice_is(graph, 2, 2, &[]), "F22 must vanish")?;
    ensure(check_f32_zero(graph).0, "F32 must vanish")?;
    let order = graph.order();
    let gr = Grading::Weight;
    let n = (order / 2) as usize;
    let f33 = graph.slice(3, 3);
    let mut padded = UniSeries::zero(n);
    for i in 0..=f33.order().min(n) {
        padded.set(i, f33.get(i));
    }
    let psi = kill_f33_psi(&padded, n)?;
    let dpsi = HoloSeries::from_w_series(&psi.deriv(), order, gr);
    let root = HoloSeries::from_series(dpsi.as_series().sqrt()?)?;
    let f = HoloSeries::var_z(order, gr).mul(&root);
    apply(graph, Biholo::new(f, HoloSeries::from_w_series(&psi, order, gr))?)
}
