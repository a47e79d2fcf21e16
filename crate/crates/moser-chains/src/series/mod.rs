//! Truncated power series in `(z, z̄, u)`.
//!
//! A [`Series`] is a sparse map from monomials `z^j z̄^k u^l` to coefficients,
//! truncated at a fixed grade. Two gradings occur: the weighted one
//! (`[z] = [z̄] = 1`, `[u] = 2`) used almost everywhere, and the plain total
//! degree used only for the first linear normalization at a point.

mod compose;
mod holo;
pub mod json;
pub mod scalar;
mod uni;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_rational::BigRational;

pub use compose::Composer;
pub use holo::{implicit_invert_u, HoloSeries, RealGraphSeries};
pub use scalar::{Coeff, GaussianRational, RealScalar, C64};
pub use uni::UniSeries;

use crate::error::{Error, Result};

/// Default weighted truncation order.
pub const DEFAULT_ORDER: u32 = 6;

/// Monomial `z^j z̄^k u^l`. In holomorphic series `k = 0` and `l` counts `w`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Mono {
    pub j: u32,
    pub k: u32,
    pub l: u32,
}

impl Mono {
    pub const ONE: Mono = Mono { j: 0, k: 0, l: 0 };

    pub const fn new(j: u32, k: u32, l: u32) -> Self {
        Mono { j, k, l }
    }

    pub fn weight(&self) -> u32 {
        self.j + self.k + 2 * self.l
    }

    pub fn degree(&self) -> u32 {
        self.j + self.k + self.l
    }

    pub fn grade(&self, g: Grading) -> u32 {
        match g {
            Grading::Weight => self.weight(),
            Grading::Degree => self.degree(),
        }
    }

    pub fn conj(&self) -> Mono {
        Mono { j: self.k, k: self.j, l: self.l }
    }

    pub fn times(&self, o: &Mono) -> Mono {
        Mono { j: self.j + o.j, k: self.k + o.k, l: self.l + o.l }
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, e) in [("z", self.j), ("zb", self.k), ("u", self.l)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Grading {
    Weight,
    Degree,
}

impl Grading {
    /// Grade of the variable `u` (or `w`).
    pub fn u_grade(self) -> u32 {
        match self {
            Grading::Weight => 2,
            Grading::Degree => 1,
        }
    }
}

/// Sparse truncated series. Terms of grade above `order` are never stored and
/// exact zeros are stripped.
#[derive(Clone, PartialEq)]
pub struct Series<C: Coeff> {
    terms: BTreeMap<Mono, C>,
    order: u32,
    grading: Grading,
}

impl<C: Coeff> fmt::Debug for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series[{:?} ≤ {}](", self.grading, self.order)?;
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c:?})·{m}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

impl<C: Coeff> Series<C> {
    pub fn zero(order: u32, grading: Grading) -> Self {
        Series { terms: BTreeMap::new(), order, grading }
    }

    pub fn weighted(order: u32) -> Self {
        Self::zero(order, Grading::Weight)
    }

    pub fn from_terms<I: IntoIterator<Item = (Mono, C)>>(terms: I, order: u32, grading: Grading) -> Self {
        let mut s = Self::zero(order, grading);
        for (m, c) in terms {
            s.add_term(m, &c);
        }
        s
    }

    pub fn monomial(m: Mono, c: C, order: u32, grading: Grading) -> Self {
        Self::from_terms([(m, c)], order, grading)
    }

    pub fn constant(c: C, order: u32, grading: Grading) -> Self {
        Self::monomial(Mono::ONE, c, order, grading)
    }

    pub fn one(order: u32, grading: Grading) -> Self {
        Self::constant(C::one(), order, grading)
    }

    pub fn var_z(order: u32, grading: Grading) -> Self {
        Self::monomial(Mono::new(1, 0, 0), C::one(), order, grading)
    }

    pub fn var_zb(order: u32, grading: Grading) -> Self {
        Self::monomial(Mono::new(0, 1, 0), C::one(), order, grading)
    }

    pub fn var_u(order: u32, grading: Grading) -> Self {
        Self::monomial(Mono::new(0, 0, 1), C::one(), order, grading)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &C)> {
        self.terms.iter()
    }

    pub fn get(&self, m: &Mono) -> Option<&C> {
        self.terms.get(m)
    }

    pub fn coeff(&self, j: u32, k: u32, l: u32) -> C {
        self.terms.get(&Mono::new(j, k, l)).cloned().unwrap_or_else(C::zero)
    }

    pub fn grade(&self, m: &Mono) -> u32 {
        m.grade(self.grading)
    }

    /// Adds `c·m`, ignoring monomials above the truncation order.
    pub fn add_term(&mut self, m: Mono, c: &C) {
        if m.grade(self.grading) > self.order || c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                v.add_assign(c);
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn set_term(&mut self, m: Mono, c: C) {
        if m.grade(self.grading) > self.order {
            return;
        }
        if c.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, c);
        }
    }

    pub fn remove_term(&mut self, m: &Mono) -> Option<C> {
        self.terms.remove(m)
    }

    /// Lowest grade carrying a nonzero term.
    pub fn min_grade(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.grade(self.grading)).min()
    }

    pub fn truncate(&self, order: u32) -> Self {
        let order = order.min(self.order);
        Series {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.grade(self.grading) <= order)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
            order,
            grading: self.grading,
        }
    }

    /// Reinterprets the terms under another grading and order, dropping the
    /// terms that fall above it.
    pub fn regrade(&self, grading: Grading, order: u32) -> Self {
        Series::from_terms(self.terms.iter().map(|(m, c)| (*m, c.clone())), order, grading)
    }

    /// Homogeneous component of grade `d`.
    pub fn part(&self, d: u32) -> Self {
        Series {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.grade(self.grading) == d)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
            order: self.order,
            grading: self.grading,
        }
    }

    pub fn filter<P: Fn(&Mono) -> bool>(&self, keep: P) -> Self {
        Series {
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (*m, c.clone())).collect(),
            order: self.order,
            grading: self.grading,
        }
    }

    pub fn map_coeffs<D: Coeff, Fn_: Fn(&C) -> D>(&self, f: Fn_) -> Series<D> {
        Series::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))), self.order, self.grading)
    }

    pub fn to_numeric(&self) -> Series<C64> {
        self.map_coeffs(|c| c.to_c64())
    }

    fn check_compatible(&self, o: &Self) {
        assert_eq!(self.grading, o.grading, "mixing series of different gradings");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_compatible(o);
        let mut out = self.truncate(self.order.min(o.order));
        for (m, c) in &o.terms {
            out.add_term(*m, c);
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Series {
            terms: self.terms.iter().map(|(m, c)| (*m, c.negate())).collect(),
            order: self.order,
            grading: self.grading,
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.order, self.grading);
        }
        Series::from_terms(self.terms.iter().map(|(m, v)| (*m, v.times(c))), self.order, self.grading)
    }

    pub fn add_scaled(&mut self, o: &Self, c: &C) {
        self.check_compatible(o);
        if o.order < self.order {
            *self = self.truncate(o.order);
        }
        for (m, v) in &o.terms {
            self.add_term(*m, &v.times(c));
        }
    }

    /// Exact product truncated at the smaller of the two orders.
    pub fn mul(&self, o: &Self) -> Self {
        self.check_compatible(o);
        let order = self.order.min(o.order);
        let g = self.grading;
        let (a, b) = if self.terms.len() <= o.terms.len() { (self, o) } else { (o, self) };
        let mut bs: Vec<(u32, &Mono, &C)> = b.terms.iter().map(|(m, c)| (m.grade(g), m, c)).collect();
        bs.sort_by_key(|t| t.0);
        let mut acc: HashMap<Mono, C> = HashMap::new();
        for (ma, ca) in &a.terms {
            let ga = ma.grade(g);
            if ga > order {
                continue;
            }
            for (gb, mb, cb) in &bs {
                if ga + gb > order {
                    break;
                }
                acc.entry(ma.times(mb)).or_insert_with(C::zero).mul_add_assign(ca, cb);
            }
        }
        Series { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(), order, grading: g }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.order, self.grading);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Complex conjugation: `z ↔ z̄`, coefficients conjugated, `u` fixed.
    pub fn conj(&self) -> Self {
        Series {
            terms: self.terms.iter().map(|(m, c)| (m.conj(), c.conj())).collect(),
            order: self.order,
            grading: self.grading,
        }
    }

    /// `(s + s̄)/2`.
    pub fn re_part(&self) -> Self {
        let half = C::from_ratio(1, 2);
        self.add(&self.conj()).scale(&half)
    }

    /// `(s − s̄)/(2i)`.
    pub fn im_part(&self) -> Self {
        let f = C::from_parts(<C::Real as RealScalar>::zero(), RealScalar::from_rational(&ratio(-1, 2)));
        self.sub(&self.conj()).scale(&f)
    }

    /// `coeff(j,k,l) = conj(coeff(k,j,l))` for every monomial.
    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|(m, c)| match self.terms.get(&m.conj()) {
            Some(d) => *c == d.conj(),
            None => false,
        })
    }

    /// Largest deviation from reality, in absolute value (numeric check).
    pub fn reality_defect(&self) -> f64 {
        let diff = self.sub(&self.conj());
        diff.max_abs()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(0, 0, 0)
    }

    /// Derivative of the stored polynomial. The order is kept; as a
    /// truncated series the result is exact only through `order − 2`.
    pub fn diff_u(&self) -> Self {
        let mut out = Self::zero(self.order, self.grading);
        for (m, c) in &self.terms {
            if m.l > 0 {
                out.add_term(Mono::new(m.j, m.k, m.l - 1), &c.times(&C::from_i64(m.l as i64)));
            }
        }
        out
    }

    /// Derivative of the stored polynomial, exact through `order − 1`.
    pub fn diff_z(&self) -> Self {
        let mut out = Self::zero(self.order, self.grading);
        for (m, c) in &self.terms {
            if m.j > 0 {
                out.add_term(Mono::new(m.j - 1, m.k, m.l), &c.times(&C::from_i64(m.j as i64)));
            }
        }
        out
    }

    pub fn diff_zb(&self) -> Self {
        self.conj().diff_z().conj()
    }

    /// Antiderivative in `u` with zero constant of integration.
    pub fn integrate_u(&self) -> Self {
        let mut out = Self::zero(self.order, self.grading);
        for (m, c) in &self.terms {
            let inv = C::from_ratio(1, (m.l + 1) as i64);
            out.add_term(Mono::new(m.j, m.k, m.l + 1), &c.times(&inv));
        }
        out
    }

    /// Σ_{n} a_n h^n for h = self − constant term; requires h to have positive grade.
    fn power_series_in(&self, coeffs: impl Fn(u32) -> C) -> Self {
        let h = self.filter(|m| *m != Mono::ONE);
        let mut acc = Self::zero(self.order, self.grading);
        let mut hp = Self::one(self.order, self.grading);
        let mut n = 0u32;
        while !hp.is_zero() {
            acc.add_scaled(&hp, &coeffs(n));
            hp = hp.mul(&h);
            n += 1;
        }
        acc
    }

    /// Principal square root of a series with constant term exactly 1.
    pub fn sqrt(&self) -> Result<Self> {
        if !self.constant_term().is_one() {
            return Err(Error::ConstantTerm("sqrt requires constant term 1".into()));
        }
        Ok(self.power_series_in(|n| C::from_gaussian(&GaussianRational::real(binomial_half(n)))))
    }

    /// Exponential of a series with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::ConstantTerm("exp requires zero constant term".into()));
        }
        Ok(self.power_series_in(|n| C::from_gaussian(&GaussianRational::real(inv_factorial(n)))))
    }

    /// Multiplicative inverse; the constant term must be invertible.
    pub fn inv(&self) -> Result<Self> {
        let c0 = self.constant_term();
        let c0inv = c0.inv().ok_or_else(|| Error::NonInvertible("series with zero constant term".into()))?;
        let normalized = self.scale(&c0inv);
        let one = C::one();
        let minus_one = one.negate();
        let s = normalized.power_series_in(|n| if n % 2 == 0 { one.clone() } else { minus_one.clone() });
        Ok(s.scale(&c0inv))
    }

    /// Value at a point, treating the stored terms as a polynomial.
    pub fn eval(&self, z: &C, zb: &C, u: &C) -> C {
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for _ in 0..m.j {
                t = t.times(z);
            }
            for _ in 0..m.k {
                t = t.times(zb);
            }
            for _ in 0..m.l {
                t = t.times(u);
            }
            acc.add_assign(&t);
        }
        acc
    }

    /// Coefficient slice `F_{j,k}(u)` as a series in `u`.
    pub fn slice(&self, j: u32, k: u32) -> UniSeries<C> {
        let max_l = match self.grading {
            Grading::Weight => self.order.saturating_sub(j + k) / 2,
            Grading::Degree => self.order.saturating_sub(j + k),
        };
        let mut out = UniSeries::zero(max_l as usize);
        if j + k > self.order {
            return out;
        }
        for l in 0..=max_l {
            out.set(l as usize, self.coeff(j, k, l));
        }
        out
    }

    /// Largest absolute coefficient difference (numeric comparisons).
    pub fn distance(&self, o: &Self) -> f64 {
        self.sub(o).max_abs()
    }
}

pub(crate) fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `binom(1/2, n)`.
fn binomial_half(n: u32) -> BigRational {
    let mut acc = ratio(1, 1);
    for i in 0..n {
        acc = acc * ratio(1 - 2 * i as i64, 2) / ratio(i as i64 + 1, 1);
    }
    acc
}

fn inv_factorial(n: u32) -> BigRational {
    let mut acc = ratio(1, 1);
    for i in 1..=n {
        acc /= ratio(i as i64, 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    type S = Series<GaussianRational>;

    fn q(n: i64, d: i64) -> GaussianRational {
        GaussianRational::from_ratio(n, d)
    }

    fn zzb(order: u32) -> S {
        S::monomial(Mono::new(1, 1, 0), q(1, 1), order, Grading::Weight)
    }

    #[test]
    fn monomial_product() {
        let p = zzb(6).mul(&zzb(6));
        assert_eq!(p, S::monomial(Mono::new(2, 2, 0), q(1, 1), 6, Grading::Weight));
    }

    #[test]
    fn weight_truncation() {
        let s = S::monomial(Mono::new(3, 2, 1), q(1, 1), 6, Grading::Weight);
        assert!(s.is_zero());
    }

    #[test]
    fn square_keeps_weight_six() {
        let a = zzb(6).add(&S::monomial(Mono::new(2, 2, 0), q(1, 1), 6, Grading::Weight));
        let sq = a.mul(&a);
        let expect = S::from_terms([(Mono::new(2, 2, 0), q(1, 1)), (Mono::new(3, 3, 0), q(2, 1))], 6, Grading::Weight);
        assert_eq!(sq, expect);
    }

    #[test]
    fn sqrt_of_one_plus_u() {
        let s = S::one(8, Grading::Weight).add(&S::var_u(8, Grading::Weight));
        let r = s.sqrt().unwrap();
        assert_eq!(r.coeff(0, 0, 1), q(1, 2));
        assert_eq!(r.coeff(0, 0, 2), q(-1, 8));
        assert_eq!(r.coeff(0, 0, 3), q(1, 16));
        assert_eq!(r.mul(&r), s);
        assert!(S::var_u(4, Grading::Weight).sqrt().is_err());
    }

    #[test]
    fn sqrt_roundtrip_levi_slice() {
        let u = S::var_u(10, Grading::Weight);
        let s = S::one(10, Grading::Weight).add(&u).add(&u.mul(&u));
        let r = s.sqrt().unwrap();
        assert_eq!(r.mul(&r), s);
    }

    #[test]
    fn exp_and_calculus() {
        assert_eq!(S::zero(6, Grading::Weight).exp().unwrap(), S::one(6, Grading::Weight));
        let u = S::var_u(6, Grading::Weight);
        assert_eq!(u.integrate_u(), S::monomial(Mono::new(0, 0, 2), q(1, 2), 6, Grading::Weight));
        let e = u.exp().unwrap();
        assert_eq!(e.coeff(0, 0, 3), q(1, 6));
        assert!(S::one(6, Grading::Weight).exp().is_err());
    }

    #[test]
    fn reality() {
        let i = GaussianRational::i();
        assert!(zzb(6).is_real());
        let good = S::from_terms([(Mono::new(2, 1, 0), i.clone()), (Mono::new(1, 2, 0), -&i)], 6, Grading::Weight);
        assert!(good.is_real());
        let bad = S::from_terms([(Mono::new(2, 1, 0), i.clone()), (Mono::new(1, 2, 0), i)], 6, Grading::Weight);
        assert!(!bad.is_real());
    }

    #[test]
    fn inverse_series() {
        let u = S::var_u(8, Grading::Weight);
        let s = S::constant(q(2, 1), 8, Grading::Weight).add(&u).add(&zzb(8));
        let inv = s.inv().unwrap();
        assert_eq!(inv.mul(&s), S::one(8, Grading::Weight));
    }

    #[test]
    fn re_and_im_parts() {
        let i = GaussianRational::i();
        let s = S::monomial(Mono::new(2, 0, 0), i, 6, Grading::Weight);
        let re = s.re_part();
        assert_eq!(re.coeff(2, 0, 0), GaussianRational::from_ratios(0, 1, 1, 2));
        assert_eq!(re.coeff(0, 2, 0), GaussianRational::from_ratios(0, 1, -1, 2));
        let im = s.im_part();
        assert_eq!(im.coeff(2, 0, 0), q(1, 2));
        assert_eq!(im.coeff(0, 2, 0), q(1, 2));
    }
}
