use std::ops::Deref;

use super::{Coeff, Composer, Grading, Mono, Series, UniSeries};
use crate::error::{Error, Result};

/// Holomorphic series in `(z, w)`: a [`Series`] whose `z̄` exponents vanish,
/// with the third variable read as `w`.
#[derive(Clone, PartialEq, Debug)]
pub struct HoloSeries<C: Coeff>(Series<C>);

impl<C: Coeff> Deref for HoloSeries<C> {
    type Target = Series<C>;
    fn deref(&self) -> &Series<C> {
        &self.0
    }
}

impl<C: Coeff> HoloSeries<C> {
    pub fn zero(order: u32, grading: Grading) -> Self {
        HoloSeries(Series::zero(order, grading))
    }

    pub fn from_series(s: Series<C>) -> Result<Self> {
        if s.terms().any(|(m, _)| m.k > 0) {
            return Err(Error::Precondition("holomorphic series contains z̄".into()));
        }
        Ok(HoloSeries(s))
    }

    /// Builds from `(j, l, coefficient)` triples for `z^j w^l`.
    pub fn from_terms<I: IntoIterator<Item = (u32, u32, C)>>(terms: I, order: u32, grading: Grading) -> Self {
        HoloSeries(Series::from_terms(terms.into_iter().map(|(j, l, c)| (Mono::new(j, 0, l), c)), order, grading))
    }

    pub fn var_z(order: u32, grading: Grading) -> Self {
        HoloSeries(Series::var_z(order, grading))
    }

    pub fn var_w(order: u32, grading: Grading) -> Self {
        HoloSeries(Series::var_u(order, grading))
    }

    /// A function of `w` alone.
    pub fn from_w_series(s: &UniSeries<C>, order: u32, grading: Grading) -> Self {
        HoloSeries(s.to_series_in_u(order, grading))
    }

    pub fn coeff_zw(&self, j: u32, l: u32) -> C {
        self.0.coeff(j, 0, l)
    }

    pub fn as_series(&self) -> &Series<C> {
        &self.0
    }

    pub fn into_series(self) -> Series<C> {
        self.0
    }

    pub fn add(&self, o: &Self) -> Self {
        HoloSeries(self.0.add(&o.0))
    }

    pub fn sub(&self, o: &Self) -> Self {
        HoloSeries(self.0.sub(&o.0))
    }

    pub fn mul(&self, o: &Self) -> Self {
        HoloSeries(self.0.mul(&o.0))
    }

    pub fn scale(&self, c: &C) -> Self {
        HoloSeries(self.0.scale(c))
    }

    pub fn truncate(&self, order: u32) -> Self {
        HoloSeries(self.0.truncate(order))
    }

    pub fn part(&self, d: u32) -> Self {
        HoloSeries(self.0.part(d))
    }

    pub fn regrade(&self, grading: Grading, order: u32) -> Self {
        HoloSeries(self.0.regrade(grading, order))
    }

    pub fn diff_z(&self) -> Self {
        HoloSeries(self.0.diff_z())
    }

    pub fn diff_w(&self) -> Self {
        HoloSeries(self.0.diff_u())
    }

    pub fn map_coeffs<D: Coeff, F: Fn(&C) -> D>(&self, f: F) -> HoloSeries<D> {
        HoloSeries(self.0.map_coeffs(f))
    }

    /// Conjugate function `h̄(z̄, w̄)` written in the real series variables
    /// with `w̄` stored in the `u` slot.
    pub fn conj_series(&self) -> Series<C> {
        self.0.conj()
    }

    /// `h(z, arg)`: Taylor expansion of `h` around `w = u` in powers of
    /// `arg − u`, exact and truncated.
    pub fn substitute_w(&self, arg: &Series<C>) -> Result<Series<C>> {
        let z = Series::var_z(arg.order(), arg.grading());
        let mut c = Composer::holomorphic(z, arg.clone())?;
        Ok(c.apply(&self.0))
    }

    /// `self(f, g)` for holomorphic `f`, `g`.
    pub fn compose(&self, f: &HoloSeries<C>, g: &HoloSeries<C>) -> Result<Self> {
        let mut c = Composer::holomorphic(f.0.clone(), g.0.clone())?;
        Ok(HoloSeries(c.apply(&self.0)))
    }

    /// The slice `h_j(w)`: coefficient of `z^j` as a series in `w`.
    pub fn w_slice(&self, j: u32) -> UniSeries<C> {
        self.0.slice(j, 0)
    }
}

/// Graphing function `F(z, z̄, u)` of a real hypersurface `v = F`: real
/// (`F̄(z̄, z, u) = F(z, z̄, u)`) with vanishing constant term.
#[derive(Clone, PartialEq, Debug)]
pub struct RealGraphSeries<C: Coeff>(Series<C>);

impl<C: Coeff> Deref for RealGraphSeries<C> {
    type Target = Series<C>;
    fn deref(&self) -> &Series<C> {
        &self.0
    }
}

/// Relative tolerance used by the reality check on floating coefficients.
pub const NUMERIC_REALITY_TOL: f64 = 1e-9;

impl<C: Coeff> RealGraphSeries<C> {
    /// Validates the invariants. Floating-point input is accepted when the
    /// defect is within tolerance and then symmetrized.
    pub fn new(s: Series<C>) -> Result<Self> {
        let scale = 1.0 + s.max_abs();
        if C::EXACT {
            if !s.constant_term().is_zero() {
                return Err(Error::Precondition("graph has a constant term".into()));
            }
            if !s.is_real() {
                return Err(Error::Precondition("graph violates the reality condition".into()));
            }
            Ok(RealGraphSeries(s))
        } else {
            if s.constant_term().magnitude() > NUMERIC_REALITY_TOL * scale {
                return Err(Error::Precondition("graph has a constant term".into()));
            }
            if s.reality_defect() > NUMERIC_REALITY_TOL * scale {
                return Err(Error::Precondition("graph violates the reality condition".into()));
            }
            let mut sym = s.re_part();
            sym.remove_term(&Mono::ONE);
            Ok(RealGraphSeries(sym))
        }
    }

    pub fn as_series(&self) -> &Series<C> {
        &self.0
    }

    pub fn into_series(self) -> Series<C> {
        self.0
    }

    pub fn map_coeffs<D: Coeff, F: Fn(&C) -> D>(&self, f: F) -> RealGraphSeries<D> {
        RealGraphSeries(self.0.map_coeffs(f))
    }

    pub fn truncate(&self, order: u32) -> Self {
        RealGraphSeries(self.0.truncate(order))
    }
}

/// Solves `ω = u + i·F0(z, u)` for `u = T(z, ω)` by fixed-point iteration.
///
/// `F0` is the restriction `F(z, 0, u)`, given as a holomorphic series in
/// `(z, u)`. A linear term `a·u` is allowed as long as `1 + i·a ≠ 0`.
pub fn implicit_invert_u<C: Coeff>(f0: &HoloSeries<C>) -> Result<HoloSeries<C>> {
    let order = f0.order();
    let g = f0.grading();
    let i = C::imag_unit();
    let a = f0.coeff_zw(0, 1);
    let jac = C::one().plus(&i.times(&a));
    let jac_inv = jac.inv().ok_or_else(|| Error::NonInvertible("dω/du vanishes at the origin".into()))?;
    if !f0.coeff_zw(0, 0).is_zero() {
        return Err(Error::ConstantTerm("F(0,0,0) must vanish".into()));
    }
    let mut rest = f0.as_series().clone();
    rest.remove_term(&Mono::new(0, 0, 1));
    let rest = HoloSeries(rest);
    let omega = HoloSeries::var_w(order, g);
    let z = HoloSeries::var_z(order, g);
    let mut t = omega.scale(&jac_inv);
    for _ in 0..=order + 1 {
        let next = omega.sub(&rest.compose(&z, &t)?.scale(&i)).scale(&jac_inv);
        if next == t && C::EXACT {
            return Ok(t);
        }
        t = next;
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::GaussianRational;

    type G = GaussianRational;

    fn q(n: i64) -> G {
        G::from_int(n)
    }

    #[test]
    fn substitute_binomial() {
        let gr = Grading::Weight;
        let w2 = HoloSeries::from_terms([(0, 2, q(1))], 6, gr);
        let arg = Series::var_u(6, gr).add(&Series::monomial(Mono::new(1, 1, 0), G::i(), 6, gr));
        let out = w2.substitute_w(&arg).unwrap();
        let expect = Series::from_terms(
            [(Mono::new(0, 0, 2), q(1)), (Mono::new(1, 1, 1), G::from_ratios(0, 1, 2, 1)), (Mono::new(2, 2, 0), q(-1))],
            6,
            gr,
        );
        assert_eq!(out, expect);
    }

    #[test]
    fn substitute_rejects_constant_shift() {
        let gr = Grading::Weight;
        let h = HoloSeries::from_terms([(0, 1, q(1))], 6, gr);
        let arg = Series::var_u(6, gr).add(&Series::one(6, gr));
        assert!(matches!(h.substitute_w(&arg), Err(Error::InsufficientOrder(_))));
    }

    fn check_inverse(f0: &HoloSeries<G>) -> HoloSeries<G> {
        let t = implicit_invert_u(f0).unwrap();
        // u + i F0(z, u) evaluated at u = T(z, ω) must give back ω
        let z = HoloSeries::var_z(f0.order(), f0.grading());
        let back = t.add(&f0.compose(&z, &t).unwrap().scale(&G::i()));
        assert_eq!(back, HoloSeries::var_w(f0.order(), f0.grading()));
        t
    }

    #[test]
    fn invert_zero() {
        let f0 = HoloSeries::<G>::zero(6, Grading::Weight);
        assert_eq!(implicit_invert_u(&f0).unwrap(), HoloSeries::var_w(6, Grading::Weight));
    }

    #[test]
    fn invert_z_squared() {
        let f0 = HoloSeries::from_terms([(2, 0, q(1))], 6, Grading::Weight);
        let t = check_inverse(&f0);
        let expect = HoloSeries::from_terms([(0, 1, q(1)), (2, 0, -G::i())], 6, Grading::Weight);
        assert_eq!(t, expect);
    }

    #[test]
    fn invert_z_squared_u() {
        let f0 = HoloSeries::from_terms([(2, 1, q(1))], 8, Grading::Weight);
        let t = check_inverse(&f0);
        // ω/(1 + i z²) = ω − i z² ω − z⁴ ω + …
        assert_eq!(t.coeff_zw(2, 1), -G::i());
        assert_eq!(t.coeff_zw(4, 1), q(-1));
    }
}
