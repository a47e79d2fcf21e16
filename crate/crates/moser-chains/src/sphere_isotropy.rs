//! Isotropy algebra of the Heisenberg sphere `v = z z̄` at the origin.
//!
//! The generators are `D, R, I1, I2, J`. Pushing `2 Re X` down to the
//! intrinsic chart `(x, y, u)` of the sphere identifies `I1`, `I2` with the
//! fields usually written `l1`, `l2`.

use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie_jets::{IntrinsicField, JetVar, Poly};
use crate::series::{Coeff, GaussianRational, Grading, HoloSeries, Mono, Series};

type G = GaussianRational;

/// Weighted order used for the polynomial fields; high enough that no
/// product of two coefficients is ever truncated.
const FIELD_ORDER: u32 = 16;

pub const FIELD_NAMES: [&str; 5] = ["D", "R", "I1", "I2", "J"];

/// Holomorphic field `a(z, w)∂_z + b(z, w)∂_w` vanishing at the origin.
#[derive(Clone, PartialEq, Debug)]
pub struct ExtrinsicField {
    pub a: HoloSeries<G>,
    pub b: HoloSeries<G>,
}

/// Parameters `(λ, α, r)` of the isotropy group, `λ ≠ 0`, `r` real.
#[derive(Clone, PartialEq, Debug)]
pub struct IsotropyParams<C: Coeff> {
    pub lambda: C,
    pub alpha: C,
    pub r: C::Real,
}

impl<C: Coeff> IsotropyParams<C> {
    pub fn new(lambda: C, alpha: C, r: C::Real) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::Precondition("isotropy parameter lambda must be nonzero".into()));
        }
        Ok(IsotropyParams { lambda, alpha, r })
    }

    pub fn identity() -> Self {
        IsotropyParams { lambda: C::one(), alpha: C::zero(), r: C::zero().re() }
    }

    pub fn to_numeric(&self) -> IsotropyParams<crate::series::C64> {
        IsotropyParams {
            lambda: self.lambda.to_c64(),
            alpha: self.alpha.to_c64(),
            r: C::from_real(self.r.clone()).to_c64().re,
        }
    }
}

fn holo(terms: Vec<(u32, u32, G)>) -> HoloSeries<G> {
    HoloSeries::from_terms(terms, FIELD_ORDER, Grading::Weight)
}

fn q(n: i64) -> G {
    G::from_int(n)
}

impl ExtrinsicField {
    pub fn new(a: HoloSeries<G>, b: HoloSeries<G>) -> Result<Self> {
        if !a.coeff_zw(0, 0).is_zero() || !b.coeff_zw(0, 0).is_zero() {
            return Err(Error::Precondition("isotropy field must vanish at the origin".into()));
        }
        Ok(ExtrinsicField { a: a.regrade(Grading::Weight, FIELD_ORDER), b: b.regrade(Grading::Weight, FIELD_ORDER) })
    }

    pub fn zero() -> Self {
        ExtrinsicField { a: holo(vec![]), b: holo(vec![]) }
    }

    /// `X(h) = a h_z + b h_w`.
    pub fn apply(&self, h: &HoloSeries<G>) -> HoloSeries<G> {
        self.a.mul(&h.diff_z()).add(&self.b.mul(&h.diff_w()))
    }

    pub fn add(&self, o: &Self) -> Self {
        ExtrinsicField { a: self.a.add(&o.a), b: self.b.add(&o.b) }
    }

    pub fn scale(&self, s: &G) -> Self {
        ExtrinsicField { a: self.a.scale(s), b: self.b.scale(s) }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

/// `[X, Y] = X(Y) − Y(X)`.
pub fn bracket(x: &ExtrinsicField, y: &ExtrinsicField) -> ExtrinsicField {
    ExtrinsicField { a: x.apply(&y.a).sub(&y.apply(&x.a)), b: x.apply(&y.b).sub(&y.apply(&x.b)) }
}

/// `D, R, I1, I2, J` in that order.
pub fn standard_fields() -> [ExtrinsicField; 5] {
    let i = G::i();
    let two_i = G::from_ratios(0, 1, 2, 1);
    [
        ExtrinsicField { a: holo(vec![(1, 0, q(1))]), b: holo(vec![(0, 1, q(2))]) },
        ExtrinsicField { a: holo(vec![(1, 0, i.clone())]), b: holo(vec![]) },
        ExtrinsicField { a: holo(vec![(0, 1, q(1)), (2, 0, two_i.clone())]), b: holo(vec![(1, 1, two_i.clone())]) },
        ExtrinsicField { a: holo(vec![(0, 1, i), (2, 0, q(2))]), b: holo(vec![(1, 1, q(2))]) },
        ExtrinsicField { a: holo(vec![(1, 1, q(1))]), b: holo(vec![(0, 2, q(1))]) },
    ]
}

/// `h(z, u + i z z̄)`: restriction of a holomorphic function to the sphere.
fn on_sphere(h: &HoloSeries<G>) -> Series<G> {
    let g = h.grading();
    let arg = Series::var_u(h.order(), g).add(&Series::monomial(Mono::new(1, 1, 0), G::i(), h.order(), g));
    h.substitute_w(&arg).expect("u + i z z̄ has weight 2")
}

/// `(X + X̄)(z z̄ − v)` restricted to `v = z z̄`, i.e. `2 Re(a z̄) − Im b`.
pub fn tangency_residual(x: &ExtrinsicField) -> Series<G> {
    let a = on_sphere(&x.a);
    let b = on_sphere(&x.b);
    let order = a.order();
    let g = a.grading();
    let zb = Series::var_zb(order, g);
    let z = Series::var_z(order, g);
    let im_b = b.sub(&b.conj()).scale(&G::from_ratios(0, 1, -1, 2));
    a.mul(&zb).add(&a.conj().mul(&z)).sub(&im_b)
}

pub fn tangency_check(x: &ExtrinsicField) -> bool {
    tangency_residual(x).is_zero()
}

/// Rewrites a series in `(z, z̄, u)` as a polynomial in the real `(x, y, u)`.
pub fn series_to_xyu(s: &Series<G>) -> Poly {
    let x = Poly::var(JetVar::X);
    let iy = Poly::var(JetVar::Y).scale(&G::i());
    let z = x.add(&iy);
    let zb = x.sub(&iy);
    let u = Poly::var(JetVar::U);
    let mut out = Poly::zero();
    for (m, c) in s.terms() {
        let t = z.pow(m.j).mul(&zb.pow(m.k)).mul(&u.pow(m.l)).scale(c);
        out = out.add(&t);
    }
    out
}

/// `π_*(2 Re X) = Re a ∂_x + Im a ∂_y + Re b ∂_u` on the sphere.
pub fn intrinsic_pushforward(x: &ExtrinsicField) -> Result<IntrinsicField> {
    if !tangency_check(x) {
        return Err(Error::Precondition("X + X̄ is not tangent to the sphere".into()));
    }
    let a = series_to_xyu(&on_sphere(&x.a));
    let b = series_to_xyu(&on_sphere(&x.b));
    IntrinsicField::new(b.re(), a.re(), a.im())
}

/// One bracket of the commutator table and whether it matched.
#[derive(Clone, Debug, Serialize)]
pub struct BracketCheck {
    pub left: String,
    pub right: String,
    pub expected: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutatorReport {
    pub entries: Vec<BracketCheck>,
    pub pass: bool,
}

/// `(left, right, [(coefficient, field)])`.
pub type BracketEntry = (usize, usize, Vec<(i64, usize)>);

/// Expected upper-triangular brackets.
pub fn expected_table() -> Vec<BracketEntry> {
    let (d, r, i1, i2, j) = (0, 1, 2, 3, 4);
    vec![
        (d, r, vec![]),
        (d, i1, vec![(1, i1)]),
        (d, i2, vec![(1, i2)]),
        (d, j, vec![(2, j)]),
        (r, i1, vec![(-1, i2)]),
        (r, i2, vec![(1, i1)]),
        (r, j, vec![]),
        (i1, i2, vec![(4, j)]),
        (i1, j, vec![]),
        (i2, j, vec![]),
    ]
}

fn combo_name(c: &[(i64, usize)]) -> String {
    if c.is_empty() {
        return "0".into();
    }
    c.iter()
        .map(|&(k, f)| match k {
            1 => FIELD_NAMES[f].to_string(),
            -1 => format!("-{}", FIELD_NAMES[f]),
            _ => format!("{k}{}", FIELD_NAMES[f]),
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn verify_commutator_table() -> CommutatorReport {
    let fields = standard_fields();
    let entries: Vec<BracketCheck> = expected_table()
        .into_iter()
        .map(|(a, b, combo)| {
            let lhs = bracket(&fields[a], &fields[b]);
            let rhs = combo.iter().fold(ExtrinsicField::zero(), |acc, &(k, f)| acc.add(&fields[f].scale(&q(k))));
            BracketCheck {
                left: FIELD_NAMES[a].into(),
                right: FIELD_NAMES[b].into(),
                expected: combo_name(&combo),
                pass: lhs == rhs,
            }
        })
        .collect();
    let pass = entries.iter().all(|e| e.pass);
    CommutatorReport { entries, pass }
}

/// Expansion of the isotropy group element
/// `z' = λ(z + αw)/Δ`, `w' = λλ̄w/Δ`, `Δ = 1 − 2iᾱz − (r + iαᾱ)w`,
/// to weighted order `order`.
pub fn isotropy_map_expansion<C: Coeff>(p: &IsotropyParams<C>, order: u32) -> Result<(HoloSeries<C>, HoloSeries<C>)> {
    if p.lambda.is_zero() {
        return Err(Error::Precondition("isotropy parameter lambda must be nonzero".into()));
    }
    let g = Grading::Weight;
    let i = C::imag_unit();
    let ab = p.alpha.conj();
    let aa = p.alpha.times(&ab);
    let r = C::from_real(p.r.clone());
    // s = 2iᾱz + (r + iαᾱ)w, 1/Δ = Σ sⁿ
    let s =
        HoloSeries::from_terms([(1, 0, C::from_i64(2).times(&i).times(&ab)), (0, 1, r.plus(&i.times(&aa)))], order, g);
    let mut inv = HoloSeries::from_terms([(0, 0, C::one())], order, g);
    let mut pow = inv.clone();
    for _ in 0..order {
        pow = pow.mul(&s);
        if pow.is_zero() {
            break;
        }
        inv = inv.add(&pow);
    }
    let num_z = HoloSeries::from_terms([(1, 0, p.lambda.clone()), (0, 1, p.lambda.times(&p.alpha))], order, g);
    let ll = p.lambda.times(&p.lambda.conj());
    let num_w = HoloSeries::from_terms([(0, 1, ll)], order, g);
    Ok((num_z.mul(&inv), num_w.mul(&inv)))
}

/// The isotropy element evaluated at a point `(z, w)`.
pub fn isotropy_apply(
    p: &IsotropyParams<crate::series::C64>,
    z: crate::series::C64,
    w: crate::series::C64,
) -> (crate::series::C64, crate::series::C64) {
    let i = crate::series::C64::i();
    let ab = p.alpha.conj();
    let delta = 1.0 - 2.0 * i * ab * z - (p.r + i * p.alpha.norm_sqr()) * w;
    (p.lambda * (z + p.alpha * w) / delta, p.lambda.norm_sqr() * w / delta)
}

/// The explicit polynomial normal form of an order-5 ambiguity map:
/// `z'` through weight 4 and `w'` through weight 5.
pub fn ambiguity_polynomial<C: Coeff>(p: &IsotropyParams<C>) -> (HoloSeries<C>, HoloSeries<C>) {
    let g = Grading::Weight;
    let i = C::imag_unit();
    let n = |k: i64| C::from_i64(k);
    let l = p.lambda.clone();
    let a = p.alpha.clone();
    let ab = a.conj();
    let r = C::from_real(p.r.clone());
    let ll = l.times(&l.conj());
    let m = |xs: &[&C]| xs.iter().fold(C::one(), |acc, x| acc.times(x));
    let zp = HoloSeries::from_terms(
        [
            (1, 0, l.clone()),
            (2, 0, m(&[&n(2), &i, &l, &ab])),
            (3, 0, m(&[&n(-4), &l, &ab, &ab])),
            (4, 0, m(&[&n(-8), &i, &l, &ab, &ab, &ab])),
            (0, 1, m(&[&l, &a])),
            (1, 1, m(&[&n(3), &i, &l, &a, &ab]).plus(&m(&[&l, &r]))),
            (2, 1, m(&[&n(-8), &l, &a, &ab, &ab]).plus(&m(&[&n(4), &i, &ab, &l, &r]))),
            (0, 2, m(&[&l, &a, &r]).plus(&m(&[&i, &l, &a, &a, &ab]))),
        ],
        4,
        g,
    );
    let wp = HoloSeries::from_terms(
        [
            (0, 1, ll.clone()),
            (1, 1, m(&[&n(2), &i, &ll, &ab])),
            (2, 1, m(&[&n(-4), &ll, &ab, &ab])),
            (3, 1, m(&[&n(-8), &i, &ll, &ab, &ab, &ab])),
            (0, 2, m(&[&i, &ll, &a, &ab]).plus(&m(&[&ll, &r]))),
            (1, 2, m(&[&n(4), &i, &ll, &ab, &r]).plus(&m(&[&n(-4), &ll, &ab, &ab, &a]))),
        ],
        5,
        g,
    );
    (zp, wp)
}

/// `Im w' − z' z̄'` restricted to `v = z z̄`; zero when the map preserves the sphere.
pub fn sphere_defect<C: Coeff>(f: &HoloSeries<C>, g: &HoloSeries<C>) -> Series<C> {
    let order = f.order().min(g.order());
    let gr = f.grading();
    let arg = Series::var_u(order, gr).add(&Series::monomial(Mono::new(1, 1, 0), C::imag_unit(), order, gr));
    let fs = f.truncate(order).substitute_w(&arg).expect("weight-2 argument");
    let gs = g.truncate(order).substitute_w(&arg).expect("weight-2 argument");
    let im_g = gs.sub(&gs.conj()).scale(&C::imag_unit().times(&C::from_ratio(-1, 2)));
    im_g.sub(&fs.mul(&fs.conj()))
}

/// Parameters read off the linear and `w²` terms of an isotropy-shaped map.
pub fn extract_params(f: &HoloSeries<G>, g: &HoloSeries<G>) -> Result<IsotropyParams<G>> {
    let lambda = f.coeff_zw(1, 0);
    let linv = lambda.inv().ok_or_else(|| Error::Precondition("map has zero z-derivative".into()))?;
    let alpha = &f.coeff_zw(0, 1) * &linv;
    let ll = lambda.norm_sqr();
    if ll == num_traits::Zero::zero() {
        return Err(Error::Precondition("lambda vanishes".into()));
    }
    let r_c = &(&g.coeff_zw(0, 2)
        * &G::real(num_traits::One::one()).mul_real(&(BigRational::from_integer(1.into()) / ll)))
        - &(&G::i() * &G::real(alpha.norm_sqr()));
    if !num_traits::Zero::is_zero(&r_c.im) {
        return Err(Error::Precondition(format!("w^2 coefficient yields non-real r = {r_c}")));
    }
    IsotropyParams::new(lambda, alpha, r_c.re)
}

impl GaussianRational {
    fn mul_real(&self, s: &BigRational) -> GaussianRational {
        GaussianRational::new(&self.re * s, &self.im * s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_jets::JetVar::*;

    fn v(x: crate::lie_jets::JetVar) -> Poly {
        Poly::var(x)
    }

    #[test]
    fn generators_as_listed() {
        let [d, r, _, _, j] = standard_fields();
        assert_eq!(d.a.coeff_zw(1, 0), q(1));
        assert_eq!(j.b.coeff_zw(0, 2), q(1));
        assert!(r.b.is_zero());
    }

    #[test]
    fn tangency() {
        assert!(standard_fields().iter().all(tangency_check));
        assert!(tangency_check(&ExtrinsicField::zero()));
        let lone = ExtrinsicField::new(holo(vec![(1, 0, q(1))]), holo(vec![])).unwrap();
        assert!(!tangency_check(&lone));
        assert!(intrinsic_pushforward(&lone).is_err());
    }

    #[test]
    fn pushforward_of_d_and_r() {
        let [d, r, ..] = standard_fields();
        let pd = intrinsic_pushforward(&d).unwrap();
        assert_eq!(pd, IntrinsicField::new(v(U).scale(&q(2)), v(X), v(Y)).unwrap());
        let pr = intrinsic_pushforward(&r).unwrap();
        assert_eq!(pr, IntrinsicField::new(Poly::zero(), v(Y).neg(), v(X)).unwrap());
    }

    #[test]
    fn table_holds() {
        let rep = verify_commutator_table();
        assert!(rep.pass, "{rep:?}");
        let [d, ..] = standard_fields();
        assert!(bracket(&d, &d).is_zero());
    }

    #[test]
    fn identity_parameters() {
        let (f, g) = isotropy_map_expansion(&IsotropyParams::<G>::identity(), 6).unwrap();
        assert_eq!(f, HoloSeries::var_z(6, Grading::Weight));
        assert_eq!(g, HoloSeries::var_w(6, Grading::Weight));
        assert!(isotropy_map_expansion(
            &IsotropyParams { lambda: q(0), alpha: q(1), r: BigRational::from_integer(0.into()) },
            6
        )
        .is_err());
    }

    #[test]
    fn expansion_preserves_sphere_and_roundtrips() {
        let p = IsotropyParams::new(q(2), G::i(), BigRational::from_integer(3.into())).unwrap();
        let (f, g) = isotropy_map_expansion(&p, 8).unwrap();
        assert!(sphere_defect(&f, &g).is_zero());
        assert_eq!(extract_params(&f, &g).unwrap(), p);
    }

    fn poly(terms: &[(i64, [(crate::lie_jets::JetVar, u32); 2])]) -> Poly {
        terms.iter().fold(Poly::zero(), |acc, (c, vs)| {
            let m = vs.iter().fold(Poly::int(*c), |m, &(x, e)| m.mul(&v(x).pow(e)));
            acc.add(&m)
        })
    }

    #[test]
    fn pushforwards_match_intrinsic_table() {
        let [_, _, i1, i2, j] = standard_fields();
        let one = (U, 0);
        let l1 = IntrinsicField::new(
            poly(&[(-2, [(X, 3), one]), (-2, [(X, 1), (Y, 2)]), (-2, [(Y, 1), (U, 1)])]),
            poly(&[(1, [(U, 1), one]), (-4, [(X, 1), (Y, 1)])]),
            poly(&[(3, [(X, 2), one]), (-1, [(Y, 2), one])]),
        )
        .unwrap();
        assert_eq!(intrinsic_pushforward(&i1).unwrap(), l1);
        let l2 = IntrinsicField::new(
            poly(&[(2, [(X, 1), (U, 1)]), (-2, [(Y, 1), (X, 2)]), (-2, [(Y, 3), one])]),
            poly(&[(1, [(X, 2), one]), (-3, [(Y, 2), one])]),
            poly(&[(1, [(U, 1), one]), (4, [(X, 1), (Y, 1)])]),
        )
        .unwrap();
        assert_eq!(intrinsic_pushforward(&i2).unwrap(), l2);
        let r2 = v(X).pow(2).add(&v(Y).pow(2));
        let jj = IntrinsicField::new(
            v(U).pow(2).sub(&r2.pow(2)),
            poly(&[(1, [(X, 1), (U, 1)]), (-1, [(X, 2), (Y, 1)]), (-1, [(Y, 3), one])]),
            poly(&[(1, [(X, 3), one]), (1, [(X, 1), (Y, 2)]), (1, [(Y, 1), (U, 1)])]),
        )
        .unwrap();
        assert_eq!(intrinsic_pushforward(&j).unwrap(), jj);
    }

    #[test]
    fn explicit_polynomial_is_truncated_expansion() {
        let p = IsotropyParams::new(
            G::from_ratios(3, 2, -1, 1),
            G::from_ratios(1, 3, 2, 1),
            BigRational::new((-5).into(), 7.into()),
        )
        .unwrap();
        let (f, g) = isotropy_map_expansion(&p, 8).unwrap();
        let (pf, pg) = ambiguity_polynomial(&p);
        assert_eq!(f.truncate(4), pf);
        assert_eq!(g.truncate(5), pg);
    }

    #[test]
    fn group_closure() {
        let p1 = IsotropyParams::new(G::from_ratios(1, 1, 1, 1), G::from_int(2), BigRational::from_integer(1.into()))
            .unwrap();
        let p2 = IsotropyParams::new(G::from_int(3), G::from_ratios(0, 1, -1, 2), BigRational::new(1.into(), 3.into()))
            .unwrap();
        let order = 8;
        let (f1, g1) = isotropy_map_expansion(&p1, order).unwrap();
        let (f2, g2) = isotropy_map_expansion(&p2, order).unwrap();
        let f = HoloSeries::compose(&f2, &f1, &g1).unwrap();
        let g = HoloSeries::compose(&g2, &f1, &g1).unwrap();
        let p = extract_params(&f, &g).unwrap();
        let (ef, eg) = isotropy_map_expansion(&p, order).unwrap();
        assert_eq!(f, ef);
        assert_eq!(g, eg);
    }
}
