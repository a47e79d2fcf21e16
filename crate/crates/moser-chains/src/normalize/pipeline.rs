//! The full sequence of stages, from an arbitrary Levi nondegenerate graph
//! to the normal form along a chain.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::stages::*;
use super::{fundamental_identity_residual, transform, Biholo};
use crate::chain_tracer::{origin_chain_2jet, push_jet};
use crate::error::{Error, Result};
use crate::series::{Coeff, GaussianRational, Grading, Mono, RealGraphSeries, RealScalar, Series, UniSeries};
use crate::sphere_isotropy::{ambiguity_polynomial, extract_params, IsotropyParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Tangent,
    Prenormalize,
    Straighten,
    KillHarmonics,
    NormalizeLevi,
    AbsorbK1,
    KillF22,
    CheckF32,
    KillF33,
}

impl Stage {
    pub const ALL: [Stage; 9] = [
        Stage::Tangent,
        Stage::Prenormalize,
        Stage::Straighten,
        Stage::KillHarmonics,
        Stage::NormalizeLevi,
        Stage::AbsorbK1,
        Stage::KillF22,
        Stage::CheckF32,
        Stage::KillF33,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Tangent => "tangent",
            Stage::Prenormalize => "prenormalize",
            Stage::Straighten => "straighten",
            Stage::KillHarmonics => "kill-harmonics",
            Stage::NormalizeLevi => "normalize-levi",
            Stage::AbsorbK1 => "absorb-k1",
            Stage::KillF22 => "kill-f22",
            Stage::CheckF32 => "check-f32",
            Stage::KillF33 => "kill-f33",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Stage::ALL.into_iter().find(|st| st.name() == s).ok_or_else(|| Error::Parse(format!("unknown stage '{s}'")))
    }
}

#[derive(Clone, Debug)]
pub struct NormalizeOptions<C: Coeff> {
    pub order: u32,
    pub stop_after: Option<Stage>,
    /// Chain direction `x₁ + i y₁` in the input coordinates.
    pub slope: C,
    /// Curve `z = c(u)` to straighten instead of the chain, given in the
    /// prenormalized coordinates.
    pub curve: Option<UniSeries<C>>,
    /// Compute the fundamental-identity residual of every stage.
    pub verify: bool,
}

impl<C: Coeff> NormalizeOptions<C> {
    pub fn new(order: u32) -> Self {
        NormalizeOptions { order, stop_after: None, slope: C::zero(), curve: None, verify: true }
    }
}

#[derive(Clone, Debug)]
pub struct StageRecord<C: Coeff> {
    pub stage: Stage,
    pub source: RealGraphSeries<C>,
    pub map: Biholo<C>,
    pub target: RealGraphSeries<C>,
    /// Largest coefficient of the residual; `None` when not verified.
    pub residual: Option<f64>,
    pub residual_zero: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct NormalizeReport<C: Coeff> {
    pub stages: Vec<StageRecord<C>>,
    pub result: RealGraphSeries<C>,
    /// The degree-graded map removing linear terms, if one was needed.
    pub tangent_map: Option<Biholo<C>>,
    /// Composition of all weight-graded stage maps.
    pub map: Biholo<C>,
    /// The straightened curve `z = c(u)` in prenormalized coordinates.
    pub curve: Option<UniSeries<C>>,
    /// `F₃₂(u)` just before the final stage.
    pub f32: Option<UniSeries<C>>,
    pub shape_violations: Vec<String>,
}

type StageFn<C> = fn(&RealGraphSeries<C>) -> Result<StageResult<C>>;

fn record<C: Coeff>(
    stage: Stage,
    source: &RealGraphSeries<C>,
    r: StageResult<C>,
    verify: bool,
) -> Result<StageRecord<C>> {
    let (residual, residual_zero) = if verify {
        let res = if r.map.grading() == Grading::Degree {
            // The map mixes weights, so the identity is checked on the full
            // degree-graded image; the target must be its weight truncation.
            let order = source.order();
            let s = RealGraphSeries::new(source.regrade(Grading::Degree, order))?;
            let full = RealGraphSeries::new(transform(&s, &r.map)?.filter(|m| m.degree() > 1))?;
            let mut res = fundamental_identity_residual(&s, &r.map, &full)?.regrade(Grading::Weight, 2 * order);
            res.add_scaled(
                &full.regrade(Grading::Weight, order).sub(r.target.as_series()).regrade(Grading::Weight, 2 * order),
                &C::one(),
            );
            res
        } else {
            fundamental_identity_residual(source, &r.map, &r.target)?
        };
        (Some(res.max_abs()), Some(super::residual_ok(&res, source.max_abs())))
    } else {
        (None, None)
    };
    if residual_zero == Some(false) {
        return Err(Error::Internal(format!("stage {stage} fails the fundamental identity")));
    }
    Ok(StageRecord { stage, source: source.clone(), map: r.map, target: r.target, residual, residual_zero })
}

/// Stages from the straightening on, for a prenormalized graph.
fn run_after_prenorm<C: Coeff>(
    graph: &RealGraphSeries<C>,
    curve: &UniSeries<C>,
    stop: Option<Stage>,
    verify: bool,
    chain_given: bool,
    out: &mut Vec<StageRecord<C>>,
    f32: &mut Option<UniSeries<C>>,
) -> Result<RealGraphSeries<C>> {
    let mut cur = graph.clone();
    let steps: [(Stage, StageFn<C>); 5] = [
        (Stage::KillHarmonics, kill_harmonics),
        (Stage::NormalizeLevi, normalize_levi),
        (Stage::AbsorbK1, absorb_k1),
        (Stage::KillF22, kill_f22),
        (Stage::KillF33, kill_f33),
    ];
    let tc = TransversalCurve::on_graph(&cur, &curve.truncate((cur.order() / 2) as usize))?;
    let r = straighten_curve(&cur, &tc)?;
    out.push(record(Stage::Straighten, &cur, r, verify)?);
    cur = out.last().expect("just pushed").target.clone();
    if stop == Some(Stage::Straighten) {
        return Ok(cur);
    }
    for (stage, run) in steps {
        if stage == Stage::KillF33 {
            let (ok, slice) = check_f32_zero(&cur);
            *f32 = Some(slice.clone());
            if stop == Some(Stage::CheckF32) {
                return Ok(cur);
            }
            if !ok {
                let msg =
                    format!("F32 does not vanish along the straightened curve: F320 = {:?}", slice.get(0).to_c64());
                return Err(if chain_given { Error::Precondition(msg) } else { Error::Internal(msg) });
            }
        }
        let r = run(&cur)?;
        out.push(record(stage, &cur, r, verify)?);
        cur = out.last().expect("just pushed").target.clone();
        if stop == Some(stage) {
            break;
        }
    }
    Ok(cur)
}

/// The chain through the origin with slope `c₁`, as `z = c(u)` in the
/// coordinates of a prenormalized graph, determined far enough that
/// `F₃₂ ≡ 0` holds after straightening at weight `order`.
///
/// The 2-jet comes from the chain locus; each further coefficient `c_{k+2}`
/// enters the weight-`5+2k` coefficient `F₃₂ₖ` real-affinely and is solved for.
pub fn chain_curve<C: Coeff>(graph: &RealGraphSeries<C>, c1: &C, order: u32) -> Result<UniSeries<C>> {
    let n = (order / 2) as usize;
    let mut c = UniSeries::zero(n.max(2));
    c.set(1, c1.clone());
    let c2 = origin_chain_2jet(&graph.truncate(5), c1, None)?;
    c.set(2, c2.times(&C::from_ratio(1, 2)));
    let mut k = 1;
    while 5 + 2 * k <= order {
        let sub = 5 + 2 * k;
        let m = (k + 2) as usize;
        let g = graph.truncate(sub);
        let eval = |v: C| -> Result<C> {
            let mut trial = c.truncate((sub / 2) as usize);
            trial.set(m, v);
            let mut recs = Vec::new();
            let mut f32 = None;
            run_after_prenorm(&g, &trial, Some(Stage::CheckF32), false, true, &mut recs, &mut f32)?;
            Ok(f32.expect("check stage reached").get(k as usize))
        };
        let p0 = eval(C::zero())?;
        let p1 = eval(C::one())?.minus(&p0);
        let pi = eval(C::imag_unit())?.minus(&p0);
        let det = p1.re().times(&pi.im()).minus(&pi.re().times(&p1.im()));
        let x = pi.re().times(&p0.im()).minus(&pi.im().times(&p0.re())).over(&det);
        let y = p1.im().times(&p0.re()).minus(&p1.re().times(&p0.im())).over(&det);
        let (Some(x), Some(y)) = (x, y) else {
            return Err(Error::Internal(format!("chain coefficient c{m} is not determined by F32")));
        };
        c.set(m, C::from_parts(x, y));
        k += 1;
    }
    Ok(c)
}

/// Runs the pipeline on a graph through the origin.
pub fn normalize<C: Coeff>(graph: &RealGraphSeries<C>, opts: &NormalizeOptions<C>) -> Result<NormalizeReport<C>> {
    let order = opts.order;
    if order < 5 {
        return Err(Error::InsufficientOrder(format!("normalization needs weighted order ≥ 5, got {order}")));
    }
    let stop = opts.stop_after;
    let mut cur = RealGraphSeries::new(graph.regrade(Grading::Weight, order))?;
    let mut stages = Vec::new();
    let mut slope = opts.slope.clone();
    let mut tangent_map = None;

    if let Some(r) = tangent_normalize(&cur)? {
        let src_deg = cur.regrade(Grading::Degree, order);
        slope = push_jet(&r.map, &src_deg, &slope, &C::zero())?.0;
        tangent_map = Some(r.map.clone());
        stages.push(record(Stage::Tangent, &cur, r, opts.verify)?);
        cur = stages.last().map(|s: &StageRecord<C>| s.target.clone()).expect("just pushed");
    }
    let mut curve = None;
    let mut f32 = None;
    if stop != Some(Stage::Tangent) {
        let r = prenormalize(&cur)?;
        slope = push_jet(&r.map, &cur, &slope, &C::zero())?.0;
        stages.push(record(Stage::Prenormalize, &cur, r, opts.verify)?);
        cur = stages.last().expect("just pushed").target.clone();
        if stop != Some(Stage::Prenormalize) {
            let given = opts.curve.is_some();
            let c = match &opts.curve {
                Some(c) => c.clone(),
                None => chain_curve(&cur, &slope, order)?,
            };
            cur = run_after_prenorm(&cur, &c, stop, opts.verify, given, &mut stages, &mut f32)?;
            curve = Some(c);
        }
    }
    let mut map = Biholo::identity(order, Grading::Weight);
    for s in stages.iter().filter(|s| s.map.grading() == Grading::Weight) {
        map = map.then(&s.map)?;
    }
    let shape_violations = if stop.is_none() { normal_shape_violations(&cur) } else { Vec::new() };
    if !shape_violations.is_empty() {
        return Err(Error::Internal(format!("normal form not reached: {}", shape_violations.join(", "))));
    }
    Ok(NormalizeReport { stages, result: cur, tangent_map, map, curve, f32, shape_violations })
}

/// Families of the sporadic set that fail to vanish, and `F₁₁ ≢ 1`.
pub fn normal_shape_violations<C: Coeff>(graph: &Series<C>) -> Vec<String> {
    let mut out = Vec::new();
    let tol = if C::EXACT { 0.0 } else { 1e-9 * (1.0 + graph.max_abs()) };
    let bad = |m: &Mono, c: &C| -> bool {
        let target = if (m.j, m.k, m.l) == (1, 1, 0) { C::one() } else { C::zero() };
        c.minus(&target).magnitude() > tol
    };
    let sporadic = |m: &Mono| {
        m.j == 0 || m.k == 0 || m.j == 1 || m.k == 1 || matches!((m.j, m.k), (2, 2) | (3, 2) | (2, 3) | (3, 3))
    };
    let mut families = std::collections::BTreeSet::new();
    for (m, c) in graph.terms() {
        if sporadic(m) && bad(m, c) {
            families.insert((m.j, m.k));
        }
    }
    if graph.coeff(1, 1, 0).minus(&C::one()).magnitude() > tol {
        families.insert((1, 1));
    }
    for (j, k) in families {
        out.push(format!("F{j}{k}"));
    }
    out
}

/// Checks that `h` maps `v = zz̄ + O(6)` to itself and has the displayed
/// shape of the sphere isotropy; returns its parameters.
pub fn ambiguity_check(h: &Biholo<GaussianRational>) -> Result<IsotropyParams<GaussianRational>> {
    type G = GaussianRational;
    let gr = Grading::Weight;
    let sphere = RealGraphSeries::new(Series::monomial(Mono::new(1, 1, 0), G::from_int(1), 5, gr))?;
    let h5 = h.truncate(5);
    if !fundamental_identity_residual(&sphere, &h5, &sphere)?.is_zero() {
        return Err(Error::Precondition("map does not preserve zz̄ + O(6)".into()));
    }
    let p = extract_params(&h5.f, &h5.g)?;
    let (pf, pg) = ambiguity_polynomial(&p);
    for (name, got, want) in [("z'", h5.f.truncate(4), pf), ("w'", h5.g, pg)] {
        let diff = got.sub(&want);
        let first = diff.terms().next().map(|(m, _)| *m);
        if let Some(m) = first {
            return Err(Error::Precondition(format!(
                "{name}: coefficient of z^{} w^{} is {} instead of {}",
                m.j,
                m.l,
                got.coeff_zw(m.j, m.l),
                want.coeff_zw(m.j, m.l)
            )));
        }
    }
    Ok(p)
}
