use std::collections::HashMap;

use super::{Coeff, Grading, Mono, Series};
use crate::error::{Error, Result};

/// Substitutes three series for `(z, z̄, u)` in any number of outer series,
/// caching the monomial powers `Z^j Z̄^k U^l` between calls.
///
/// A substitute for a variable of grade `d` must itself have minimal grade at
/// least `d`; otherwise the truncated outer series would not determine the
/// result and [`Error::InsufficientOrder`] is returned.
pub struct Composer<C: Coeff> {
    subs: [Series<C>; 3],
    min: [Option<u32>; 3],
    order: u32,
    grading: Grading,
    cache: HashMap<Mono, Series<C>>,
}

impl<C: Coeff> Composer<C> {
    pub fn new(z: Series<C>, zb: Series<C>, u: Series<C>) -> Result<Self> {
        let grading = z.grading();
        if zb.grading() != grading || u.grading() != grading {
            return Err(Error::Internal("composer substitutes use different gradings".into()));
        }
        let order = z.order().min(zb.order()).min(u.order());
        let var_grades = [1, 1, grading.u_grade()];
        let subs = [z, zb, u];
        let mut min = [None; 3];
        for i in 0..3 {
            min[i] = subs[i].min_grade();
            if let Some(g) = min[i] {
                if g < var_grades[i] {
                    let name = ["z", "zb", "u"][i];
                    return Err(Error::InsufficientOrder(format!(
                        "substitute for {name} has grade {g} below {}",
                        var_grades[i]
                    )));
                }
            }
        }
        let mut cache = HashMap::new();
        cache.insert(Mono::ONE, Series::one(order, grading));
        Ok(Composer { subs, min, order, grading, cache })
    }

    /// Substitution `(z, z̄, w) ↦ (z, 0, w)` used for holomorphic functions of `(z, w)`.
    pub fn holomorphic(z: Series<C>, w: Series<C>) -> Result<Self> {
        let zb = Series::zero(z.order(), z.grading());
        Self::new(z, zb, w)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Lower bound for the grade of `Z^j Z̄^k U^l`; `None` when it vanishes.
    fn lower_grade(&self, m: &Mono) -> Option<u32> {
        let mut g = 0;
        for (i, e) in [m.j, m.k, m.l].into_iter().enumerate() {
            if e > 0 {
                g += e * self.min[i]?;
            }
        }
        Some(g)
    }

    fn power(&mut self, m: Mono) -> Option<&Series<C>> {
        let lg = self.lower_grade(&m)?;
        if lg > self.order {
            return None;
        }
        if !self.cache.contains_key(&m) {
            let (prev, var) = if m.l > 0 {
                (Mono::new(m.j, m.k, m.l - 1), 2)
            } else if m.k > 0 {
                (Mono::new(m.j, m.k - 1, 0), 1)
            } else {
                (Mono::new(m.j - 1, 0, 0), 0)
            };
            let p = self.power(prev)?.clone();
            let next = p.mul(&self.subs[var]);
            self.cache.insert(m, next);
        }
        self.cache.get(&m)
    }

    /// `h(Z, Z̄, U)` truncated at the smaller of the two orders.
    pub fn apply(&mut self, h: &Series<C>) -> Series<C> {
        assert_eq!(h.grading(), self.grading, "composition across gradings");
        let order = self.order.min(h.order());
        let mut out = Series::zero(order, self.grading);
        for (m, c) in h.terms() {
            if let Some(p) = self.power(*m) {
                out.add_scaled(p, c);
            }
        }
        out.truncate(order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::GaussianRational;

    type S = Series<GaussianRational>;

    #[test]
    fn identity_substitution() {
        let g = Grading::Weight;
        let f = S::from_terms(
            [(Mono::new(1, 1, 0), GaussianRational::from_int(1)), (Mono::new(2, 1, 1), GaussianRational::i())],
            7,
            g,
        );
        let mut c = Composer::new(S::var_z(7, g), S::var_zb(7, g), S::var_u(7, g)).unwrap();
        assert_eq!(c.apply(&f), f);
    }

    #[test]
    fn low_grade_substitute_rejected() {
        let g = Grading::Weight;
        let bad = S::var_z(6, g);
        assert!(matches!(Composer::new(S::var_z(6, g), S::var_zb(6, g), bad), Err(Error::InsufficientOrder(_))));
    }
}
