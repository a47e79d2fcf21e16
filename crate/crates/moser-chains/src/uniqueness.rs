//! Finite-order uniqueness of the normal form: maps `(z + f, w + g)` that
//! preserve normal forms and have normalized 2-jet are the identity.
//!
//! Preserving `Π_S` of a normal form forces `Π_S Re{i g(z, u + izz̄) +
//! 2z̄ f(z, u + izz̄)} = 0`. This system splits by weight into `(E_ν)` with
//! unknowns `(f_{ν−1}, g_ν)`; every `(E_ν)` is shown to have kernel `{0}`.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::normalize::Biholo;
use crate::series::{Coeff, GaussianRational, Grading, HoloSeries, Mono, Series, UniSeries};

type G = GaussianRational;

/// Membership in `S = {(j,0),(0,k),(j,1),(1,k)} ∪ {(2,2),(3,2),(2,3),(3,3)}`.
pub fn in_sporadic_set(j: u32, k: u32) -> bool {
    j <= 1 || k <= 1 || matches!((j, k), (2, 2) | (3, 2) | (2, 3) | (3, 3))
}

/// Keeps the monomials `z^j z̄^k u^l` with `(j, k) ∈ S`.
pub fn project_s<C: Coeff>(g: &Series<C>) -> Series<C> {
    g.filter(|m| in_sporadic_set(m.j, m.k))
}

/// `Re{ i g(z, u + izz̄) + 2 z̄ f(z, u + izz̄) }`.
pub fn core_expression<C: Coeff>(f: &HoloSeries<C>, g: &HoloSeries<C>) -> Result<Series<C>> {
    let order = f.order().min(g.order());
    let gr = f.grading();
    let arg = Series::var_u(order, gr).add(&Series::monomial(Mono::new(1, 1, 0), C::imag_unit(), order, gr));
    let fs = f.truncate(order).substitute_w(&arg)?;
    let gs = g.truncate(order).substitute_w(&arg)?;
    let zb = Series::var_zb(order, gr);
    Ok(gs.scale(&C::imag_unit()).add(&zb.mul(&fs).scale(&C::from_i64(2))).re_part())
}

/// One real unknown: the real or imaginary part of `f_{j,l}` or `g_{j,l}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Unknown {
    pub in_g: bool,
    pub j: u32,
    pub l: u32,
    pub imaginary: bool,
}

impl Unknown {
    pub fn name(&self) -> String {
        format!(
            "{}{}{}.{}",
            if self.in_g { "g" } else { "f" },
            self.j,
            self.l,
            if self.imaginary { "im" } else { "re" }
        )
    }
}

/// The linear system `(E_ν)` with its boundary rows.
#[derive(Clone, Debug)]
pub struct WeightedSystem {
    pub nu: u32,
    pub unknowns: Vec<Unknown>,
    /// `(monomial, imaginary part?)` for each equation row.
    pub rows: Vec<(Mono, bool)>,
    pub matrix: Matrix<BigRational>,
    /// `f_{0,1} = 0` and `Re g_{0,2} = 0` where they apply.
    pub boundary: Vec<Vec<BigRational>>,
}

fn unit_map(u: &Unknown, order: u32) -> (HoloSeries<G>, HoloSeries<G>) {
    let gr = Grading::Weight;
    let c = if u.imaginary { G::i() } else { G::from_int(1) };
    let mono = HoloSeries::from_terms([(u.j, u.l, c)], order, gr);
    let zero = HoloSeries::zero(order, gr);
    if u.in_g {
        (zero, mono)
    } else {
        (mono, zero)
    }
}

/// Builds `(E_ν)` from the `S`-coefficients of the core expression.
pub fn assemble_e_nu(nu: u32) -> Result<WeightedSystem> {
    if nu < 3 {
        return Err(Error::Precondition(format!("weighted systems start at ν = 3, got {nu}")));
    }
    let mut unknowns = Vec::new();
    for (in_g, w) in [(false, nu - 1), (true, nu)] {
        for l in 0..=w / 2 {
            for imaginary in [false, true] {
                unknowns.push(Unknown { in_g, j: w - 2 * l, l, imaginary });
            }
        }
    }
    let mut rows = Vec::new();
    for l in 0..=nu / 2 {
        let r = nu - 2 * l;
        for j in 0..=r {
            if in_sporadic_set(j, r - j) {
                rows.push((Mono::new(j, r - j, l), false));
                rows.push((Mono::new(j, r - j, l), true));
            }
        }
    }
    let mut cols = Vec::with_capacity(unknowns.len());
    for u in &unknowns {
        let (f, g) = unit_map(u, nu);
        let s = core_expression(&f, &g)?;
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
    let matrix = Matrix::from_rows((0..rows.len()).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect());
    let mut boundary = Vec::new();
    let pick = |pred: &dyn Fn(&Unknown) -> bool| -> Vec<BigRational> {
        unknowns.iter().map(|u| if pred(u) { BigRational::one() } else { BigRational::zero() }).collect()
    };
    if nu == 3 {
        boundary.push(pick(&|u| !u.in_g && (u.j, u.l) == (0, 1) && !u.imaginary));
        boundary.push(pick(&|u| !u.in_g && (u.j, u.l) == (0, 1) && u.imaginary));
    }
    if nu == 4 {
        boundary.push(pick(&|u| u.in_g && (u.j, u.l) == (0, 2) && !u.imaginary));
    }
    Ok(WeightedSystem { nu, unknowns, rows, matrix, boundary })
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelReport {
    pub nu: u32,
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
    pub kernel_dim: usize,
    /// A kernel vector, by unknown name, when the kernel is nontrivial.
    pub witness: Option<Vec<(String, String)>>,
}

/// Real kernel of `(E_ν)` under the boundary conditions.
pub fn solve_e_nu(nu: u32) -> Result<KernelReport> {
    let sys = assemble_e_nu(nu)?;
    let mut all: Vec<Vec<BigRational>> = (0..sys.matrix.rows()).map(|i| sys.matrix.row(i).to_vec()).collect();
    all.extend(sys.boundary.iter().cloned());
    let m = Matrix::from_rows(all);
    let rank = m.rank();
    let kernel = m.kernel();
    let witness = kernel.first().map(|v| {
        sys.unknowns
            .iter()
            .zip(v)
            .filter(|(_, c)| !c.is_zero())
            .map(|(u, c)| (u.name(), crate::series::scalar::format_rational(c)))
            .collect()
    });
    Ok(KernelReport { nu, unknowns: sys.unknowns.len(), equations: m.rows(), rank, kernel_dim: kernel.len(), witness })
}

/// One step of a coefficient chase: the monomial whose coefficient, once the
/// previously forced unknowns are zero, involves only `targets` and pins
/// them to zero.
#[derive(Clone, Debug)]
pub struct ChaseStep {
    pub monomial: (u32, u32, u32),
    pub targets: Vec<&'static str>,
    pub use_boundary: bool,
}

fn step(monomial: (u32, u32, u32), targets: &[&'static str], use_boundary: bool) -> ChaseStep {
    ChaseStep { monomial, targets: targets.to_vec(), use_boundary }
}

/// The order in which `(E₃)` and `(E₄)` force their unknowns to vanish.
pub fn chase_plan(nu: u32) -> Option<Vec<ChaseStep>> {
    match nu {
        3 => Some(vec![
            step((1, 0, 1), &["g11.re", "g11.im"], false),
            step((2, 1, 0), &["f20.re", "f20.im"], false),
            step((3, 0, 0), &["g30.re", "g30.im"], false),
        ]),
        4 => Some(vec![
            step((0, 0, 2), &["g02.re", "g02.im"], true),
            step((1, 1, 1), &["f11.re"], false),
            step((2, 0, 1), &["g21.re", "g21.im"], false),
            step((2, 2, 0), &["f11.im"], false),
            step((3, 1, 0), &["f30.re", "f30.im"], false),
            step((4, 0, 0), &["g40.re", "g40.im"], false),
        ]),
        _ => None,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChaseReport {
    pub nu: u32,
    pub steps: Vec<String>,
    pub holds: bool,
    pub failure: Option<String>,
}

/// Runs the chase for `ν = 3, 4`: each step's equations must involve only
/// its targets among the unknowns not yet forced, and determine them.
pub fn verify_chase(nu: u32) -> Result<ChaseReport> {
    let plan = chase_plan(nu).ok_or_else(|| Error::Precondition(format!("no coefficient chase for ν = {nu}")))?;
    let sys = assemble_e_nu(nu)?;
    let col = |name: &str| sys.unknowns.iter().position(|u| u.name() == name);
    let mut forced: Vec<usize> = Vec::new();
    if nu == 3 {
        forced.extend(["f01.re", "f01.im"].iter().filter_map(|n| col(n)));
    }
    let mut steps = Vec::new();
    let mut failure = None;
    for s in &plan {
        let targets: Vec<usize> = s.targets.iter().filter_map(|n| col(n)).collect();
        let mut eqs: Vec<Vec<BigRational>> = sys
            .rows
            .iter()
            .enumerate()
            .filter(|(_, (m, _))| (m.j, m.k, m.l) == s.monomial)
            .map(|(i, _)| sys.matrix.row(i).to_vec())
            .collect();
        if s.use_boundary {
            eqs.extend(sys.boundary.iter().cloned());
        }
        let stray = eqs
            .iter()
            .any(|r| r.iter().enumerate().any(|(c, v)| !v.is_zero() && !forced.contains(&c) && !targets.contains(&c)));
        let sub = Matrix::from_rows(eqs.iter().map(|r| targets.iter().map(|&c| r[c].clone()).collect()).collect());
        let (j, k, l) = s.monomial;
        let label = format!("z^{j} zb^{k} u^{l} => {} = 0", s.targets.join(", "));
        if targets.len() != s.targets.len() || stray || sub.rank() != targets.len() {
            failure.get_or_insert_with(|| format!("step '{label}' does not isolate its targets"));
        }
        steps.push(label);
        forced.extend(targets);
    }
    let complete = forced.len() == sys.unknowns.len();
    if !complete && failure.is_none() {
        failure = Some("chase leaves unknowns undetermined".into());
    }
    Ok(ChaseReport { nu, steps, holds: failure.is_none(), failure })
}

/// The seven residuals at `(j,k) = (0,0), (1,0), (1,1), (2,1), (2,2), (3,2), (3,3)`.
pub fn seven_equations(
    f0: &UniSeries<G>,
    f1: &UniSeries<G>,
    f2: &UniSeries<G>,
    g0: &UniSeries<G>,
    g1: &UniSeries<G>,
) -> [UniSeries<G>; 7] {
    let i = G::i();
    let c = |a: i64, b: i64| G::from_ratio(a, b);
    // derivatives of polynomials, kept at the input order
    let d = |s: &UniSeries<G>, n: usize| {
        let dn = (0..n).fold(s.clone(), |acc, _| acc.deriv());
        UniSeries::from_coeffs(dn.coeffs().to_vec(), s.order())
    };
    let (f0b, f1b, g0b) = (f0.conj(), f1.conj(), g0.conj());
    [
        g0.scale(&i).sub(&g0b.scale(&i)),
        f0b.scale(&c(2, 1)).add(&g1.scale(&i)),
        f1.scale(&c(2, 1)).add(&f1b.scale(&c(2, 1))).sub(&d(g0, 1)).sub(&d(&g0b, 1)),
        f2.scale(&c(2, 1)).sub(&d(&f0b, 1).scale(&i.times(&c(2, 1)))).sub(&d(g1, 1)),
        d(f1, 1)
            .scale(&i.times(&c(2, 1)))
            .sub(&d(&f1b, 1).scale(&i.times(&c(2, 1))))
            .sub(&d(g0, 2).scale(&i.times(&c(1, 2))))
            .add(&d(&g0b, 2).scale(&i.times(&c(1, 2)))),
        d(f2, 1).scale(&i.times(&c(2, 1))).sub(&d(&f0b, 2)).sub(&d(g1, 2).scale(&i.times(&c(1, 2)))),
        d(f1, 2).scale(&c(-1, 1)).sub(&d(&f1b, 2)).add(&d(g0, 3).scale(&c(1, 6))).sub(&d(&g0b, 3).scale(&c(1, 6))),
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct SevenReport {
    pub u_order: usize,
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
    pub kernel_dim: usize,
}

/// Solves the seven equations with the initial conditions
/// `f₀(0) = f₀'(0) = 0`, `g₀(0) = g₀'(0) = Re g₀''(0) = 0`, `f₁(0) = g₁(0) = 0`
/// for polynomial `f₀, f₁, f₂, g₀, g₁` of degree ≤ `u_order`.
pub fn seven_equation_kernel(u_order: usize) -> SevenReport {
    let n = u_order;
    let slots = 5 * (n + 1) * 2;
    let unit = |idx: usize| -> [UniSeries<G>; 5] {
        let mut out: [UniSeries<G>; 5] = std::array::from_fn(|_| UniSeries::zero(n));
        let (func, rest) = (idx / (2 * (n + 1)), idx % (2 * (n + 1)));
        let (deg, imag) = (rest / 2, rest % 2 == 1);
        out[func].set(deg, if imag { G::i() } else { G::from_int(1) });
        out
    };
    let mut cols: Vec<Vec<BigRational>> = Vec::with_capacity(slots);
    for idx in 0..slots {
        let [f0, f1, f2, g0, g1] = unit(idx);
        let res = seven_equations(&f0, &f1, &f2, &g0, &g1);
        let mut col = Vec::new();
        for r in &res {
            for k in 0..=n {
                let v = r.get(k);
                col.push(v.re);
                col.push(v.im);
            }
        }
        // f₀(0), f₀'(0), g₀(0), g₀'(0), f₁(0), g₁(0): real and imaginary parts
        for (func, k) in [(0, 0), (0, 1), (3, 0), (3, 1), (1, 0), (4, 0)] {
            let s = &[&f0, &f1, &f2, &g0, &g1][func];
            let v = s.get(k);
            col.push(v.re);
            col.push(v.im);
        }
        col.push(g0.get(2).re);
        cols.push(col);
    }
    let rows = cols[0].len();
    let m = Matrix::from_rows((0..rows).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect());
    let rank = m.rank();
    SevenReport { u_order: n, unknowns: slots, equations: rows, rank, kernel_dim: slots - rank }
}

/// `g_{zz}(0) = g_{zw}(0) = 0` and `g_{ww}(0)` real.
pub fn g_second_jet_is_normalized(h: &Biholo<G>) -> bool {
    let g = &h.g;
    g.coeff_zw(2, 0).is_zero() && g.coeff_zw(1, 1).is_zero() && g.coeff_zw(0, 2).im.is_zero()
}

#[derive(Clone, Debug, Serialize)]
pub struct UniquenessReport {
    pub max_weight: u32,
    pub systems: Vec<KernelReport>,
    pub chases: Vec<ChaseReport>,
    pub seven_equations: SevenReport,
    pub pass: bool,
}

/// `(E_ν)` for `ν = 3..=max_weight`, the two chases and the seven equations.
pub fn uniqueness_check(max_weight: u32, u_order: usize) -> Result<UniquenessReport> {
    if max_weight < 3 {
        return Err(Error::Precondition(format!("max weight must be at least 3, got {max_weight}")));
    }
    let systems = (3..=max_weight).map(solve_e_nu).collect::<Result<Vec<_>>>()?;
    let chases = [3, 4].into_iter().filter(|&nu| nu <= max_weight).map(verify_chase).collect::<Result<Vec<_>>>()?;
    let seven = seven_equation_kernel(u_order);
    let pass = systems.iter().all(|s| s.kernel_dim == 0) && chases.iter().all(|c| c.holds) && seven.kernel_dim == 0;
    Ok(UniquenessReport { max_weight, systems, chases, seven_equations: seven, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn holo(terms: &[(u32, u32, G)], order: u32) -> HoloSeries<G> {
        HoloSeries::from_terms(terms.iter().cloned(), order, Grading::Weight)
    }

    #[test]
    fn projection_examples() {
        let gr = Grading::Weight;
        let zz = Series::monomial(Mono::new(1, 1, 0), G::from_int(1), 8, gr);
        assert_eq!(project_s(&zz), zz);
        assert!(project_s(&Series::monomial(Mono::new(4, 2, 0), G::from_int(1), 8, gr)).is_zero());
        let s = Series::from_terms([(Mono::new(3, 2, 0), G::from_int(1)), (Mono::new(4, 3, 0), G::from_int(1))], 8, gr);
        assert_eq!(project_s(&s), Series::monomial(Mono::new(3, 2, 0), G::from_int(1), 8, gr));
    }

    #[test]
    fn core_examples() {
        let zero = holo(&[], 6);
        assert!(core_expression(&zero, &zero).unwrap().is_zero());
        let c = core_expression(&holo(&[(2, 0, G::from_int(1))], 6), &zero).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.coeff(2, 1, 0), G::from_int(1));
        assert_eq!(c.coeff(1, 2, 0), G::from_int(1));
        // g = zw: Re{iz(u + izz̄)} = (i/2)zu − (i/2)z̄u − (1/2)(z²z̄ + zz̄²)
        let c = core_expression(&zero, &holo(&[(1, 1, G::from_int(1))], 6)).unwrap();
        assert_eq!(c.coeff(1, 0, 1), G::from_ratios(0, 1, 1, 2));
        assert_eq!(c.coeff(0, 1, 1), G::from_ratios(0, 1, -1, 2));
        assert_eq!(c.coeff(2, 1, 0), G::from_ratio(-1, 2));
        assert_eq!(c.coeff(1, 2, 0), G::from_ratio(-1, 2));
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn weighted_splitting() {
        for nu in 3..=7 {
            let sys = assemble_e_nu(nu).unwrap();
            for u in &sys.unknowns {
                let (f, g) = unit_map(u, nu + 3);
                let c = core_expression(&f, &g).unwrap();
                assert!(c.terms().all(|(m, _)| m.weight() == nu), "ν = {nu}, {}", u.name());
            }
        }
    }

    #[test]
    fn kernels_vanish() {
        for nu in 3..=8 {
            let r = solve_e_nu(nu).unwrap();
            assert_eq!(r.kernel_dim, 0, "ν = {nu}: {:?}", r.witness);
        }
    }

    #[test]
    fn boundary_conditions_matter() {
        // without f₀₁ = 0 the map f = w survives at ν = 3
        let sys = assemble_e_nu(3).unwrap();
        assert!(sys.matrix.rank() < sys.unknowns.len());
    }

    #[test]
    fn chases_hold() {
        for nu in [3, 4] {
            let r = verify_chase(nu).unwrap();
            assert!(r.holds, "{:?}", r.failure);
        }
    }

    #[test]
    fn seven_equation_examples() {
        let z = UniSeries::<G>::zero(8);
        assert!(seven_equations(&z, &z, &z, &z, &z).iter().all(|r| r.is_zero()));
        let mut g0 = UniSeries::zero(8);
        g0.set(1, G::i());
        let r = seven_equations(&z, &z, &z, &g0, &z);
        assert_eq!(r[0].get(1), G::from_int(-2));
        // a constant f₂ is visible only through (2, 1)
        let f2 = UniSeries::constant(G::from_ratios(1, 1, 2, 1), 8);
        let r = seven_equations(&z, &z, &f2, &z, &z);
        assert!(r[5].is_zero());
        assert!(!r[3].is_zero());
    }

    #[test]
    fn seven_equations_only_zero() {
        let r = seven_equation_kernel(8);
        assert_eq!(r.kernel_dim, 0, "{r:?}");
    }

    #[test]
    fn g_second_jet_examples() {
        let gr = Grading::Weight;
        assert!(g_second_jet_is_normalized(&Biholo::identity(6, gr)));
        let z = HoloSeries::var_z(6, gr);
        let bad = Biholo::new(z.clone(), holo(&[(0, 1, G::from_int(1)), (2, 0, G::from_int(3))], 6)).unwrap();
        assert!(!g_second_jet_is_normalized(&bad));
        let sq = Biholo::new(z, holo(&[(0, 1, G::from_int(1)), (0, 2, G::from_int(1))], 6)).unwrap();
        assert!(g_second_jet_is_normalized(&sq));
    }
}
