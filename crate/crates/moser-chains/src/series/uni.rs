use super::{Coeff, Series};
use crate::error::{Error, Result};

/// Truncated power series in one variable, coefficients `c[0..=order]`.
#[derive(Clone, PartialEq, Debug)]
pub struct UniSeries<C: Coeff> {
    c: Vec<C>,
}

impl<C: Coeff> UniSeries<C> {
    pub fn zero(order: usize) -> Self {
        UniSeries { c: vec![C::zero(); order + 1] }
    }

    pub fn from_coeffs(mut c: Vec<C>, order: usize) -> Self {
        c.resize(order + 1, C::zero());
        UniSeries { c }
    }

    pub fn var(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.c[1] = C::one();
        }
        s
    }

    pub fn constant(v: C, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.c[0] = v;
        s
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.c
    }

    pub fn get(&self, n: usize) -> C {
        self.c.get(n).cloned().unwrap_or_else(C::zero)
    }

    pub fn set(&mut self, n: usize, v: C) {
        if n < self.c.len() {
            self.c[n] = v;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|v| v.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(self.c.iter().take(order + 1).cloned().collect(), order)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        Self::from_coeffs((0..=n).map(|i| self.c[i].plus(&o.c[i])).collect(), n)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        Self::from_coeffs((0..=n).map(|i| self.c[i].minus(&o.c[i])).collect(), n)
    }

    pub fn scale(&self, s: &C) -> Self {
        Self::from_coeffs(self.c.iter().map(|v| v.times(s)).collect(), self.order())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        let mut out = vec![C::zero(); n + 1];
        for i in 0..=n {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..=(n - i) {
                out[i + j].mul_add_assign(&self.c[i], &o.c[j]);
            }
        }
        UniSeries { c: out }
    }

    pub fn conj(&self) -> Self {
        Self::from_coeffs(self.c.iter().map(|v| v.conj()).collect(), self.order())
    }

    pub fn deriv(&self) -> Self {
        let n = self.order();
        let mut out = Self::zero(n.saturating_sub(1));
        for i in 1..=n {
            out.c[i - 1] = self.c[i].times(&C::from_i64(i as i64));
        }
        out
    }

    /// Antiderivative vanishing at 0; the order grows by one.
    pub fn integrate(&self) -> Self {
        let n = self.order();
        let mut out = Self::zero(n + 1);
        for i in 0..=n {
            out.c[i + 1] = self.c[i].times(&C::from_ratio(1, i as i64 + 1));
        }
        out
    }

    /// Evaluates as a polynomial.
    pub fn eval(&self, t: &C) -> C {
        let mut acc = C::zero();
        for v in self.c.iter().rev() {
            acc = acc.times(t).plus(v);
        }
        acc
    }

    /// `self(inner)` for `inner(0) = 0`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.c[0].is_zero() {
            return Err(Error::InsufficientOrder("inner series must vanish at 0".into()));
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Self::constant(self.c[n].clone(), n);
        for i in (0..n).rev() {
            acc = acc.mul(&inner);
            acc.c[0] = acc.c[0].plus(&self.c[i]);
        }
        Ok(acc)
    }

    /// Multiplicative inverse; `c₀` must be invertible.
    pub fn inv(&self) -> Result<Self> {
        let n = self.order();
        let c0 = self.c[0].inv().ok_or_else(|| Error::NonInvertible("series with zero constant term".into()))?;
        let mut r = Self::zero(n);
        r.c[0] = c0.clone();
        for k in 1..=n {
            let mut acc = C::zero();
            for i in 1..=k {
                acc.mul_add_assign(&self.c[i], &r.c[k - i]);
            }
            r.c[k] = acc.times(&c0).negate();
        }
        Ok(r)
    }

    /// Compositional inverse of a series with `s(0) = 0` and `s'(0)` invertible.
    pub fn reversion(&self) -> Result<Self> {
        let n = self.order();
        if !self.c[0].is_zero() {
            return Err(Error::NonInvertible("reversion needs s(0) = 0".into()));
        }
        let a1 = self.get(1);
        let inv1 = a1.inv().ok_or_else(|| Error::NonTransversal("zero linear coefficient".into()))?;
        // r = t/a1 − (higher(r))/a1, iterated n times
        let mut r = Self::var(n).scale(&inv1);
        let mut higher = self.clone();
        higher.c[1] = C::zero();
        for _ in 0..n {
            let h = higher.compose(&r)?;
            r = Self::var(n).sub(&h).scale(&inv1);
        }
        Ok(r)
    }

    /// Embeds into a series in `(z, z̄, u)` as a function of `u` alone.
    pub fn to_series_in_u(&self, order: u32, grading: super::Grading) -> Series<C> {
        let mut s = Series::zero(order, grading);
        for (i, v) in self.c.iter().enumerate() {
            s.add_term(super::Mono::new(0, 0, i as u32), v);
        }
        s
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().map(|v| v.magnitude()).fold(0.0, f64::max)
    }
}

impl<C: Coeff> Series<C> {
    /// Restriction to a parametrized curve `(z(t), z̄(t), u(t))`, all of which
    /// may have constant terms; the stored terms are treated as a polynomial.
    pub fn along_curve(&self, z: &UniSeries<C>, zb: &UniSeries<C>, u: &UniSeries<C>) -> UniSeries<C> {
        let n = z.order().min(zb.order()).min(u.order());
        let pow_list = |s: &UniSeries<C>, e: u32| {
            let mut v = vec![UniSeries::constant(C::one(), n)];
            for i in 1..=e as usize {
                let next = v[i - 1].mul(s);
                v.push(next);
            }
            v
        };
        let (mj, mk, ml) = self.terms().fold((0, 0, 0), |(a, b, c), (m, _)| (a.max(m.j), b.max(m.k), c.max(m.l)));
        let pz = pow_list(z, mj);
        let pzb = pow_list(zb, mk);
        let pu = pow_list(u, ml);
        let mut acc = UniSeries::zero(n);
        for (m, c) in self.terms() {
            let t = pz[m.j as usize].mul(&pzb[m.k as usize]).mul(&pu[m.l as usize]).scale(c);
            acc = acc.add(&t);
        }
        acc
    }
}
