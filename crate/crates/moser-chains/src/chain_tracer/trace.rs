//! Fixed-step RK4 integration of `(x, y, x₁, y₁)' = (x₁, y₁, A, B)`.

use serde::Serialize;

use super::chain_ab;
use crate::error::{Error, Result};
use crate::series::{RealGraphSeries, C64};
use crate::sphere_isotropy::{isotropy_apply, IsotropyParams};

#[derive(Clone, Debug, Serialize)]
pub struct TraceOptions {
    pub u0: f64,
    pub u1: f64,
    pub step: f64,
    /// Integration stops once `|x| + |y|` exceeds this.
    pub chart_radius: f64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions { u0: 0.0, u1: 0.25, step: 1.0 / 128.0, chart_radius: 0.5 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Trace {
    /// Rows `(u, x, y, x₁, y₁)`, starting at the initial state.
    pub rows: Vec<[f64; 5]>,
    pub truncated: bool,
    pub warning: Option<String>,
}

/// Traces the chain through `(u₀, z₀)` on the graph with initial slope `c₁`.
pub fn trace_chain(graph: &RealGraphSeries<C64>, z0: C64, c1: C64, opts: &TraceOptions) -> Result<Trace> {
    let span = opts.u1 - opts.u0;
    if opts.step.is_nan() || opts.step <= 0.0 || !span.is_finite() || span <= 0.0 {
        return Err(Error::Precondition("need u1 > u0 and a positive step".into()));
    }
    let n = (span / opts.step).round().max(1.0) as usize;
    let h = span / n as f64;
    let rhs = |u: f64, s: [f64; 4]| -> Result<[f64; 4]> {
        let (a, b) = chain_ab(graph, [u, s[0], s[1], s[2], s[3]])?;
        Ok([s[2], s[3], a, b])
    };
    let axpy = |s: &[f64; 4], k: &[f64; 4], c: f64| -> [f64; 4] { std::array::from_fn(|i| s[i] + c * k[i]) };
    let mut s = [z0.re, z0.im, c1.re, c1.im];
    let mut u = opts.u0;
    let mut rows = vec![[u, s[0], s[1], s[2], s[3]]];
    for step in 1..=n {
        let k1 = rhs(u, s)?;
        let k2 = rhs(u + h / 2.0, axpy(&s, &k1, h / 2.0))?;
        let k3 = rhs(u + h / 2.0, axpy(&s, &k2, h / 2.0))?;
        let k4 = rhs(u + h, axpy(&s, &k3, h))?;
        let next: [f64; 4] = std::array::from_fn(|i| s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
        let un = opts.u0 + step as f64 * h;
        if next[0].abs() + next[1].abs() > opts.chart_radius || next.iter().any(|v| !v.is_finite()) {
            return Ok(Trace {
                rows,
                truncated: true,
                warning: Some(format!("chain leaves the chart |x|+|y| <= {} near u = {un}", opts.chart_radius)),
            });
        }
        s = next;
        u = un;
        rows.push([u, s[0], s[1], s[2], s[3]]);
    }
    Ok(Trace { rows, truncated: false, warning: None })
}

/// The chain of `v = zz̄` through 0 with slope `α`, at parameter `t`:
/// the image of the `u`-axis under the isotropy `(1, α, 0)`.
pub fn sphere_chain_point(alpha: C64, t: f64) -> (C64, C64) {
    let d = C64::new(1.0, -alpha.norm_sqr() * t);
    (alpha * t / d, C64::new(t, 0.0) / d)
}

/// Slope at the origin of the image of the sphere chain with slope `α`
/// under the isotropy `(λ, a, r)`: `(α + a)/λ̄`.
pub fn pushed_sphere_slope(alpha: C64, iso: &IsotropyParams<C64>) -> C64 {
    (alpha + iso.alpha) / iso.lambda.conj()
}

/// Chain residual of a traced sphere chain with slope `α` pushed through
/// `iso`. Sphere chains through 0 are the slices `z = βw`, so the residual
/// is the largest `|Z − βW|` over the pushed rows, `β` the pushed slope.
pub fn pushed_sphere_chain_error(trace: &Trace, alpha: C64, iso: &IsotropyParams<C64>) -> f64 {
    let beta = pushed_sphere_slope(alpha, iso);
    let mut worst: f64 = 0.0;
    for r in &trace.rows {
        let z = C64::new(r[1], r[2]);
        let (zi, wi) = isotropy_apply(iso, z, C64::new(r[0], z.norm_sqr()));
        worst = worst.max((zi - beta * wi).norm());
    }
    worst
}
