//! Orbits of the prolonged isotropy fields in the second-jet fiber over the
//! origin, and the surface `Σ₀` of chain 2-jets.

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie_jets::{prolong2, JetVar, Poly, NVARS, VAR_NAMES};
use crate::linalg::Matrix;
use crate::series::scalar::format_rational;
use crate::series::GaussianRational;
use crate::sphere_isotropy::{intrinsic_pushforward, standard_fields, FIELD_NAMES};

type G = GaussianRational;

/// A point `(x₁, y₁, x₂, y₂)` of the fiber above the origin.
#[derive(Clone, PartialEq, Debug)]
pub struct FiberPoint {
    pub x1: BigRational,
    pub y1: BigRational,
    pub x2: BigRational,
    pub y2: BigRational,
}

impl FiberPoint {
    pub fn new(x1: BigRational, y1: BigRational, x2: BigRational, y2: BigRational) -> Self {
        FiberPoint { x1, y1, x2, y2 }
    }

    fn as_jet_point(&self) -> [BigRational; NVARS] {
        let z = BigRational::zero();
        [
            z.clone(),
            z.clone(),
            z.clone(),
            self.x1.clone(),
            self.y1.clone(),
            self.x2.clone(),
            self.y2.clone(),
            z.clone(),
            z,
        ]
    }
}

/// Rows of fiber coefficients `(φ₁, ψ₁, φ₂, ψ₂)` over the origin, one per field.
#[derive(Clone, PartialEq, Debug)]
pub struct OrbitMatrix {
    pub row_names: Vec<String>,
    pub rows: Vec<[Poly; 4]>,
}

/// Names used when printing: the `x₂, y₂` slots hold `a₂, b₂` after the
/// symbolic pivot.
pub const PIVOT_NAMES: [&str; NVARS] = ["u", "x", "y", "x1", "y1", "a2", "b2", "x3", "y3"];

impl OrbitMatrix {
    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.rows[i][j]
    }

    pub fn render(&self, names: &[&str; NVARS]) -> Vec<Vec<String>> {
        self.rows.iter().map(|r| r.iter().map(|p| p.display_with(names)).collect()).collect()
    }

    pub fn evaluate(&self, p: &FiberPoint) -> Matrix<BigRational> {
        let pt = p.as_jet_point();
        Matrix::from_rows(self.rows.iter().map(|r| r.iter().map(|e| e.eval_real(&pt).re).collect()).collect())
    }
}

/// The fiber table of the second prolongations of `D, R, I1, I2, J`.
pub fn prolonged_table() -> Result<OrbitMatrix> {
    let mut rows = Vec::new();
    for f in standard_fields().iter() {
        rows.push(prolong2(&intrinsic_pushforward(f)?)?.at_origin_fiber());
    }
    Ok(OrbitMatrix { row_names: FIELD_NAMES.iter().map(|s| s.to_string()).collect(), rows })
}

/// The 4×4 block `D, R, I1, I2` (the `J` row vanishes identically).
pub fn orbit_matrix() -> Result<OrbitMatrix> {
    let mut t = prolonged_table()?;
    if t.rows[4].iter().any(|p| !p.is_zero()) {
        return Err(Error::Internal("J does not vanish on the fiber over the origin".into()));
    }
    t.rows.truncate(4);
    t.row_names.truncate(4);
    Ok(t)
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// The unique completion `(x₂, y₂)` of a 1-jet lying on `Σ₀`.
pub fn sigma0_jet(x1: &BigRational, y1: &BigRational) -> (BigRational, BigRational) {
    let x2 = -(rat(2) * x1 * x1 * y1) - rat(2) * y1 * y1 * y1;
    let y2 = rat(2) * x1 * y1 * y1 + rat(2) * x1 * x1 * x1;
    (x2, y2)
}

fn sigma0_polys() -> (Poly, Poly) {
    use JetVar::*;
    let two = G::from_int(2);
    let (x1, y1) = (Poly::var(X1), Poly::var(Y1));
    let sx = x1.pow(2).mul(&y1).add(&y1.pow(3)).scale(&two).neg();
    let sy = x1.mul(&y1.pow(2)).add(&x1.pow(3)).scale(&two);
    (sx, sy)
}

/// Defining equations `(x₂ − σ_x, y₂ − σ_y)` of `Σ₀`.
pub fn sigma0_equations() -> (Poly, Poly) {
    let (sx, sy) = sigma0_polys();
    (Poly::var(JetVar::X2).sub(&sx), Poly::var(JetVar::Y2).sub(&sy))
}

pub fn on_sigma0(p: &FiberPoint) -> bool {
    let (x2, y2) = sigma0_jet(&p.x1, &p.y1);
    x2 == p.x2 && y2 == p.y2
}

/// Rank of the evaluated 4×4 matrix, by exact elimination.
pub fn pivot_rank(p: &FiberPoint) -> Result<usize> {
    Ok(orbit_matrix()?.evaluate(p).rank())
}

/// Rank of the first-jet columns `(φ₁, ψ₁)` at `p`.
pub fn first_jet_rank(p: &FiberPoint) -> Result<usize> {
    let m = orbit_matrix()?.evaluate(p);
    let cols = Matrix::from_rows((0..m.rows()).map(|i| vec![m.get(i, 0).clone(), m.get(i, 1).clone()]).collect());
    Ok(cols.rank())
}

/// Gauss pivot over the polynomial ring, after writing
/// `x₂ = σ_x + a₂`, `y₂ = σ_y + b₂` (with `a₂, b₂` stored in the `x₂, y₂` slots).
///
/// Pivots are constant entries only; at each step the leftmost column holding
/// one among unused rows is chosen, ties going to the lowest row. Rows are
/// never rescaled.
pub fn symbolic_pivot() -> Result<OrbitMatrix> {
    let (sx, sy) = sigma0_polys();
    let ax = Poly::var(JetVar::X2).add(&sx);
    let by = Poly::var(JetVar::Y2).add(&sy);
    let mut m = orbit_matrix()?;
    for row in m.rows.iter_mut() {
        for e in row.iter_mut() {
            *e = e.substitute(JetVar::X2, &ax).substitute(JetVar::Y2, &by);
        }
    }
    let n = m.rows.len();
    let mut used = vec![false; n];
    loop {
        let pick =
            (0..4).find_map(|c| (0..n).find(|&r| !used[r] && constant_value(&m.rows[r][c]).is_some()).map(|r| (r, c)));
        let Some((pr, pc)) = pick else { break };
        used[pr] = true;
        let inv = constant_value(&m.rows[pr][pc]).and_then(|c| c.inv()).expect("constant pivot");
        let prow = m.rows[pr].clone();
        for r in 0..n {
            if r == pr || m.rows[r][pc].is_zero() {
                continue;
            }
            let f = m.rows[r][pc].scale(&inv);
            for c in 0..4 {
                m.rows[r][c] = m.rows[r][c].sub(&f.mul(&prow[c]));
            }
        }
    }
    Ok(m)
}

fn constant_value(p: &Poly) -> Option<G> {
    let mut it = p.terms();
    match (it.next(), it.next()) {
        (Some((e, c)), None) if e.iter().all(|&x| x == 0) => Some(c.clone()),
        _ => None,
    }
}

/// Result of applying one prolonged field to the two equations of `Σ₀`.
#[derive(Clone, Debug, Serialize)]
pub struct TangencyEntry {
    pub field: String,
    pub on_x2_equation: String,
    pub on_y2_equation: String,
    pub tangent: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TangencyReport {
    pub entries: Vec<TangencyEntry>,
    pub pass: bool,
}

/// Applies each fiber field to the defining equations and restricts to `Σ₀`.
pub fn tangency_to_sigma0() -> Result<TangencyReport> {
    use JetVar::*;
    let (e1, e2) = sigma0_equations();
    let (sx, sy) = sigma0_polys();
    let fibers = [X1, Y1, X2, Y2];
    let table = prolonged_table()?;
    let entries: Vec<TangencyEntry> = table
        .rows
        .iter()
        .zip(&table.row_names)
        .map(|(row, name)| {
            let apply = |f: &Poly| {
                let d = row.iter().zip(fibers).fold(Poly::zero(), |acc, (c, v)| acc.add(&c.mul(&f.diff(v))));
                d.substitute(X2, &sx).substitute(Y2, &sy)
            };
            let (r1, r2) = (apply(&e1), apply(&e2));
            TangencyEntry {
                field: name.clone(),
                on_x2_equation: r1.display_with(&VAR_NAMES),
                on_y2_equation: r2.display_with(&VAR_NAMES),
                tangent: r1.is_zero() && r2.is_zero(),
            }
        })
        .collect();
    let pass = entries.iter().all(|e| e.tangent);
    Ok(TangencyReport { entries, pass })
}

/// Summary of the orbit through a fiber point.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitInfo {
    pub rank: usize,
    pub on_sigma0: bool,
    pub sigma0_completion: [String; 2],
}

pub fn orbit_info(p: &FiberPoint) -> Result<OrbitInfo> {
    let (x2, y2) = sigma0_jet(&p.x1, &p.y1);
    Ok(OrbitInfo {
        rank: pivot_rank(p)?,
        on_sigma0: on_sigma0(p),
        sigma0_completion: [format_rational(&x2), format_rational(&y2)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(a: i64, b: i64, c: i64, d: i64) -> FiberPoint {
        FiberPoint::new(rat(a), rat(b), rat(c), rat(d))
    }

    #[test]
    fn table_matches_prolongation_table() {
        let t = prolonged_table().unwrap().render(&VAR_NAMES);
        assert_eq!(t[0], ["-x1", "-y1", "-3*x2", "-3*y2"]);
        assert_eq!(t[1], ["-y1", "x1", "-y2", "x2"]);
        assert_eq!(t[2], ["1", "0", "-4*x1*y1", "6*x1^2 + 2*y1^2"]);
        assert_eq!(t[3], ["0", "1", "-2*x1^2 - 6*y1^2", "4*x1*y1"]);
        assert!(t[4].iter().all(|s| s == "0"));
    }

    #[test]
    fn sigma0_examples() {
        assert_eq!(sigma0_jet(&rat(0), &rat(0)), (rat(0), rat(0)));
        assert_eq!(sigma0_jet(&rat(1), &rat(0)), (rat(0), rat(2)));
        assert_eq!(sigma0_jet(&rat(0), &rat(1)), (rat(-2), rat(0)));
    }

    #[test]
    fn ranks() {
        assert_eq!(pivot_rank(&fp(1, 0, 0, 2)).unwrap(), 2);
        assert_eq!(pivot_rank(&fp(0, 0, 1, 0)).unwrap(), 4);
        let (x2, y2) = sigma0_jet(&rat(1), &rat(1));
        let p = FiberPoint::new(rat(1), rat(1), x2, y2 + rat(5));
        assert_eq!(pivot_rank(&p).unwrap(), 4);
        assert_eq!(first_jet_rank(&fp(3, -2, 7, 1)).unwrap(), 2);
    }

    #[test]
    fn pivot_reduces_to_a2_b2() {
        let m = symbolic_pivot().unwrap();
        let r = m.render(&PIVOT_NAMES);
        assert_eq!(r[0], ["0", "0", "-3*a2", "-3*b2"]);
        assert_eq!(r[1], ["0", "0", "-b2", "a2"]);
        assert_eq!(r[2], ["1", "0", "-4*x1*y1", "6*x1^2 + 2*y1^2"]);
        assert_eq!(r[3], ["0", "1", "-2*x1^2 - 6*y1^2", "4*x1*y1"]);
    }

    #[test]
    fn all_fields_tangent() {
        let rep = tangency_to_sigma0().unwrap();
        assert!(rep.pass, "{rep:?}");
    }
}
