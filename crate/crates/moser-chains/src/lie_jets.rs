//! Vector fields on `(u, x, y)`, the total derivative `D_u`, and Lie
//! prolongation to first and second jets of curves `u ↦ (x(u), y(u))`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::series::scalar::format_rational;
use crate::series::GaussianRational;

type G = GaussianRational;

/// Jet coordinates, in storage order.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum JetVar {
    U,
    X,
    Y,
    X1,
    Y1,
    X2,
    Y2,
    X3,
    Y3,
}

pub const NVARS: usize = 9;
pub const VAR_NAMES: [&str; NVARS] = ["u", "x", "y", "x1", "y1", "x2", "y2", "x3", "y3"];

impl JetVar {
    pub const ALL: [JetVar; NVARS] =
        [JetVar::U, JetVar::X, JetVar::Y, JetVar::X1, JetVar::Y1, JetVar::X2, JetVar::Y2, JetVar::X3, JetVar::Y3];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Jet order: 0 for base coordinates.
    pub fn order(self) -> u8 {
        match self {
            JetVar::U | JetVar::X | JetVar::Y => 0,
            JetVar::X1 | JetVar::Y1 => 1,
            JetVar::X2 | JetVar::Y2 => 2,
            JetVar::X3 | JetVar::Y3 => 3,
        }
    }
}

type Exps = [u8; NVARS];

/// Sparse polynomial in the jet coordinates with Gaussian rational
/// coefficients. These are honest polynomials: nothing is truncated.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Exps, G>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: G) -> Self {
        let mut p = Poly::zero();
        p.add_term([0; NVARS], &c);
        p
    }

    pub fn int(n: i64) -> Self {
        Self::constant(G::from_int(n))
    }

    pub fn var(v: JetVar) -> Self {
        let mut e = [0; NVARS];
        e[v.index()] = 1;
        let mut p = Poly::zero();
        p.add_term(e, &G::from_int(1));
        p
    }

    /// `c · Π vars[i]^exps[i]` from a list of `(var, exponent)`.
    pub fn monomial(c: G, powers: &[(JetVar, u8)]) -> Self {
        let mut e = [0; NVARS];
        for &(v, k) in powers {
            e[v.index()] += k;
        }
        let mut p = Poly::zero();
        p.add_term(e, &c);
        p
    }

    fn add_term(&mut self, e: Exps, c: &G) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(|| G::from_int(0));
        *entry = &*entry + c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &G)> {
        self.terms.iter()
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.im.is_zero())
    }

    pub fn uses(&self, v: JetVar) -> bool {
        self.terms.keys().any(|e| e[v.index()] > 0)
    }

    pub fn max_jet_order(&self) -> u8 {
        JetVar::ALL.iter().filter(|v| self.uses(**v)).map(|v| v.order()).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c);
        }
        out
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }

    pub fn scale(&self, s: &G) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            out.add_term(*e, &(c * s));
        }
        out
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let mut e = *ea;
                for i in 0..NVARS {
                    e[i] += eb[i];
                }
                out.add_term(e, &(ca * cb));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Poly {
        (0..n).fold(Poly::int(1), |acc, _| acc.mul(self))
    }

    pub fn diff(&self, v: JetVar) -> Poly {
        let i = v.index();
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = *e;
            e2[i] -= 1;
            out.add_term(e2, &(c * &G::from_int(e[i] as i64)));
        }
        out
    }

    /// Replaces `v` by the polynomial `by`.
    pub fn substitute(&self, v: JetVar, by: &Poly) -> Poly {
        let i = v.index();
        let mut powers = vec![Poly::int(1)];
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            let k = e[i] as usize;
            while powers.len() <= k {
                let next = powers.last().expect("nonempty").mul(by);
                powers.push(next);
            }
            let mut rest = *e;
            rest[i] = 0;
            let mut base = Poly::zero();
            base.add_term(rest, c);
            out = out.add(&base.mul(&powers[k]));
        }
        out
    }

    /// Real and imaginary parts, treating every variable as real.
    pub fn re(&self) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            out.add_term(*e, &G::real(c.re.clone()));
        }
        out
    }

    pub fn im(&self) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            out.add_term(*e, &G::real(c.im.clone()));
        }
        out
    }

    pub fn eval(&self, point: &[G; NVARS]) -> G {
        let mut acc = G::from_int(0);
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..NVARS {
                if e[i] > 0 {
                    t = &t * &point[i].pow(e[i] as u32);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Evaluates with real rational values for every variable.
    pub fn eval_real(&self, point: &[BigRational; NVARS]) -> G {
        let p: [G; NVARS] = std::array::from_fn(|i| G::real(point[i].clone()));
        self.eval(&p)
    }

    /// Parses the output format of [`Poly::display_with`] for real rational
    /// coefficients, e.g. `"-2*x^3 + 1/2*y*u"`.
    pub fn parse_with(text: &str, names: &[&str; NVARS]) -> Result<Poly> {
        let bad = |what: &str| Error::Parse(format!("polynomial '{text}': {what}"));
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty"));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in compact.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);
        let mut out = Poly::zero();
        for t in terms {
            let (sign, body) = match t.as_bytes().first() {
                Some(b'-') => (-1, &t[1..]),
                Some(b'+') => (1, &t[1..]),
                _ => (1, t),
            };
            let mut term = Poly::int(sign);
            for factor in body.split('*') {
                let (base, exp) = match factor.split_once('^') {
                    Some((b, e)) => (b, e.parse::<u32>().map_err(|_| bad("bad exponent"))?),
                    None => (factor, 1),
                };
                let f = if let Some(idx) = names.iter().position(|n| *n == base) {
                    Poly::var(JetVar::ALL[idx])
                } else {
                    let q = crate::series::scalar::parse_rational(base).map_err(|_| bad("unknown factor"))?;
                    Poly::constant(G::real(q))
                };
                term = term.mul(&f.pow(exp));
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    pub fn display_with(&self, names: &[&str; NVARS]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = (0..NVARS)
                .filter(|&i| e[i] > 0)
                .map(|i| if e[i] == 1 { names[i].to_string() } else { format!("{}^{}", names[i], e[i]) })
                .collect();
            let (neg, mag) = if c.im.is_zero() {
                (c.re.is_negative(), format_rational(&c.re.abs()))
            } else {
                (false, format!("({c})"))
            };
            out.push_str(match (n, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            });
            let unit = c.im.is_zero() && c.re.abs().is_one();
            match (mono.is_empty(), unit) {
                (true, _) => out.push_str(&mag),
                (false, true) => out.push_str(&mono.join("*")),
                (false, false) => {
                    out.push_str(&mag);
                    out.push('*');
                    out.push_str(&mono.join("*"));
                }
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&VAR_NAMES))
    }
}

/// Real vector field `ξ∂_u + φ∂_x + ψ∂_y` with polynomial coefficients in `(u, x, y)`.
#[derive(Clone, PartialEq, Debug)]
pub struct IntrinsicField {
    pub xi: Poly,
    pub phi: Poly,
    pub psi: Poly,
}

impl IntrinsicField {
    pub fn new(xi: Poly, phi: Poly, psi: Poly) -> Result<Self> {
        for p in [&xi, &phi, &psi] {
            if !p.is_real() {
                return Err(Error::Precondition("intrinsic field has a non-real coefficient".into()));
            }
            if p.max_jet_order() > 0 {
                return Err(Error::Precondition("intrinsic field depends on jet variables".into()));
            }
        }
        Ok(IntrinsicField { xi, phi, psi })
    }

    pub fn zero() -> Self {
        IntrinsicField { xi: Poly::zero(), phi: Poly::zero(), psi: Poly::zero() }
    }

    /// The field as a derivation on polynomials.
    pub fn apply(&self, f: &Poly) -> Poly {
        self.xi.mul(&f.diff(JetVar::U)).add(&self.phi.mul(&f.diff(JetVar::X))).add(&self.psi.mul(&f.diff(JetVar::Y)))
    }

    pub fn add(&self, o: &Self) -> Self {
        IntrinsicField { xi: self.xi.add(&o.xi), phi: self.phi.add(&o.phi), psi: self.psi.add(&o.psi) }
    }

    pub fn scale(&self, s: &G) -> Self {
        IntrinsicField { xi: self.xi.scale(s), phi: self.phi.scale(s), psi: self.psi.scale(s) }
    }

    pub fn is_zero(&self) -> bool {
        self.xi.is_zero() && self.phi.is_zero() && self.psi.is_zero()
    }
}

/// `[a, b] = a(b) − b(a)`, componentwise.
pub fn commutator(a: &IntrinsicField, b: &IntrinsicField) -> IntrinsicField {
    IntrinsicField {
        xi: a.apply(&b.xi).sub(&b.apply(&a.xi)),
        phi: a.apply(&b.phi).sub(&b.apply(&a.phi)),
        psi: a.apply(&b.psi).sub(&b.apply(&a.psi)),
    }
}

/// Second prolongation `v + φ₁∂_{x₁} + ψ₁∂_{y₁} + φ₂∂_{x₂} + ψ₂∂_{y₂}`.
#[derive(Clone, PartialEq, Debug)]
pub struct JetField2 {
    pub base: IntrinsicField,
    pub phi1: Poly,
    pub psi1: Poly,
    pub phi2: Poly,
    pub psi2: Poly,
}

/// Point of the second jet space.
#[derive(Clone, PartialEq, Debug)]
pub struct Jet2<R> {
    pub u: R,
    pub x: R,
    pub y: R,
    pub x1: R,
    pub y1: R,
    pub x2: R,
    pub y2: R,
}

impl<R: Clone> Jet2<R> {
    pub fn as_array(&self) -> [R; 7] {
        [
            self.u.clone(),
            self.x.clone(),
            self.y.clone(),
            self.x1.clone(),
            self.y1.clone(),
            self.x2.clone(),
            self.y2.clone(),
        ]
    }
}

/// `D_u = ∂_u + x₁∂_x + y₁∂_y + x₂∂_{x₁} + y₂∂_{y₁} + x₃∂_{x₂} + y₃∂_{y₂}`.
pub fn total_derivative(p: &Poly) -> Result<Poly> {
    if p.uses(JetVar::X3) || p.uses(JetVar::Y3) {
        return Err(Error::Precondition("total derivative of a third-order jet polynomial".into()));
    }
    use JetVar::*;
    let pairs = [(X, X1), (Y, Y1), (X1, X2), (Y1, Y2), (X2, X3), (Y2, Y3)];
    let mut out = p.diff(U);
    for (v, coef) in pairs {
        out = out.add(&Poly::var(coef).mul(&p.diff(v)));
    }
    Ok(out)
}

pub fn prolong2(v: &IntrinsicField) -> Result<JetField2> {
    use JetVar::*;
    let qx = v.phi.sub(&v.xi.mul(&Poly::var(X1)));
    let qy = v.psi.sub(&v.xi.mul(&Poly::var(Y1)));
    let dqx = total_derivative(&qx)?;
    let dqy = total_derivative(&qy)?;
    let phi1 = dqx.add(&v.xi.mul(&Poly::var(X2)));
    let psi1 = dqy.add(&v.xi.mul(&Poly::var(Y2)));
    let phi2 = total_derivative(&dqx)?.add(&v.xi.mul(&Poly::var(X3)));
    let psi2 = total_derivative(&dqy)?.add(&v.xi.mul(&Poly::var(Y3)));
    if [&phi2, &psi2].iter().any(|p| p.uses(X3) || p.uses(Y3)) {
        return Err(Error::Internal("third-order jets survive in the second prolongation".into()));
    }
    Ok(JetField2 { base: v.clone(), phi1, psi1, phi2, psi2 })
}

/// First prolongation coefficients `(φ₁, ψ₁)`.
pub fn prolong1(v: &IntrinsicField) -> Result<(Poly, Poly)> {
    let p = prolong2(v)?;
    Ok((p.phi1, p.psi1))
}

impl JetField2 {
    pub fn components(&self) -> [&Poly; 7] {
        [&self.base.xi, &self.base.phi, &self.base.psi, &self.phi1, &self.psi1, &self.phi2, &self.psi2]
    }

    /// The field as a derivation on functions of `(u, x, y, x₁, y₁, x₂, y₂)`.
    pub fn apply(&self, f: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (c, v) in self.components().into_iter().zip(&JetVar::ALL[..7]) {
            out = out.add(&c.mul(&f.diff(*v)));
        }
        out
    }

    /// The four fiber coefficients `(φ₁, ψ₁, φ₂, ψ₂)` restricted to `u = x = y = 0`.
    pub fn at_origin_fiber(&self) -> [Poly; 4] {
        let z = Poly::zero();
        let restrict = |p: &Poly| p.substitute(JetVar::U, &z).substitute(JetVar::X, &z).substitute(JetVar::Y, &z);
        [restrict(&self.phi1), restrict(&self.psi1), restrict(&self.phi2), restrict(&self.psi2)]
    }
}

/// Bracket of two fields on the second jet space, componentwise.
pub fn bracket2(a: &JetField2, b: &JetField2) -> [Poly; 7] {
    let ca = a.components();
    let cb = b.components();
    std::array::from_fn(|i| a.apply(cb[i]).sub(&b.apply(ca[i])))
}

/// Values `(φ₁, ψ₁, φ₂, ψ₂)` at a jet point.
pub fn evaluate_at(f: &JetField2, p: &Jet2<BigRational>) -> [G; 4] {
    let arr = p.as_array();
    let zero = BigRational::zero();
    let point: [BigRational; NVARS] = std::array::from_fn(|i| if i < 7 { arr[i].clone() } else { zero.clone() });
    [f.phi1.eval_real(&point), f.psi1.eval_real(&point), f.phi2.eval_real(&point), f.psi2.eval_real(&point)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use JetVar::*;

    fn v(x: JetVar) -> Poly {
        Poly::var(x)
    }

    fn dilation() -> IntrinsicField {
        IntrinsicField::new(v(U).scale(&G::from_int(2)), v(X), v(Y)).unwrap()
    }

    #[test]
    fn total_derivative_examples() {
        assert_eq!(total_derivative(&v(X)).unwrap(), v(X1));
        assert_eq!(total_derivative(&v(U)).unwrap(), Poly::int(1));
        // D_u(x − 2u·x₁) = −x₁ − 2u·x₂
        let p = v(X).sub(&v(U).mul(&v(X1)).scale(&G::from_int(2)));
        let expect = v(X1).neg().sub(&v(U).mul(&v(X2)).scale(&G::from_int(2)));
        assert_eq!(total_derivative(&p).unwrap(), expect);
        assert!(total_derivative(&v(X3)).is_err());
    }

    #[test]
    fn dilation_prolongation() {
        let p = prolong2(&dilation()).unwrap();
        let [a, b, c, d] = p.at_origin_fiber();
        assert_eq!(a, v(X1).neg());
        assert_eq!(b, v(Y1).neg());
        assert_eq!(c, v(X2).scale(&G::from_int(-3)));
        assert_eq!(d, v(Y2).scale(&G::from_int(-3)));
    }

    #[test]
    fn zero_field_prolongs_to_zero() {
        let (a, b) = prolong1(&IntrinsicField::zero()).unwrap();
        assert!(a.is_zero() && b.is_zero());
    }

    #[test]
    fn substitution_and_display() {
        let p = v(X1).pow(2).scale(&G::from_int(6)).add(&v(Y1).pow(2).scale(&G::from_int(2)));
        assert_eq!(p.to_string(), "6*x1^2 + 2*y1^2");
        let q = p.substitute(X1, &Poly::int(1));
        assert_eq!(q.to_string(), "2*y1^2 + 6");
        assert_eq!(v(X1).neg().to_string(), "-x1");
    }

    #[test]
    fn rejects_complex_fields() {
        assert!(IntrinsicField::new(Poly::constant(G::i()), Poly::zero(), Poly::zero()).is_err());
        assert!(IntrinsicField::new(v(X1), Poly::zero(), Poly::zero()).is_err());
    }
}
