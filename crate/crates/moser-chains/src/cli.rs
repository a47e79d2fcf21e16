//! Command-line front end. Exit codes: 0 success, 2 parse error,
//! 3 mathematical precondition, 4 internal invariant violated.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::chain_locus::{orbit_info, FiberPoint};
use crate::chain_tracer::{trace_chain, TraceOptions};
use crate::error::{Error, Result};
use crate::normalize::{normalize, Biholo, NormalizeOptions, Stage};
use crate::series::json::{graph_from_str, series_to_json};
use crate::series::scalar::{parse_rational, ratio_to_f64};
use crate::series::{Coeff, GaussianRational, RealGraphSeries, C64};
use crate::tables::{render_text, verify_tables};
use crate::uniqueness::uniqueness_check;

/// Environment variable overriding the default truncation order.
pub const ORDER_ENV: &str = "MOSER_CHAINS_ORDER";
pub const DEFAULT_ORDER: u32 = 6;

#[derive(Parser, Debug)]
#[command(name = "moser-chains", version, about = "Chains and Moser normal forms of real hypersurfaces in C^2")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the commutator, pushforward, prolongation and pivot tables.
    VerifyTables {
        /// Print aligned text instead of JSON.
        #[arg(long)]
        text: bool,
    },
    /// Bring a hypersurface to normal form along a chain.
    Normalize(NormalizeArgs),
    /// Orbit data of a 2-jet (x1, y1, x2, y2) over the origin.
    Orbit {
        #[arg(allow_hyphen_values = true)]
        x1: String,
        #[arg(allow_hyphen_values = true)]
        y1: String,
        #[arg(allow_hyphen_values = true)]
        x2: String,
        #[arg(allow_hyphen_values = true)]
        y2: String,
    },
    /// Trace a chain numerically; CSV rows u,x,y,x1,y1.
    ChainTrace(TraceArgs),
    /// Kernels of the weighted uniqueness systems.
    UniquenessCheck {
        /// Largest weight ν of the systems (E_ν).
        #[arg(long, default_value_t = 10)]
        max_weight: u32,
        /// Degree of the polynomial ansatz for the seven equations.
        #[arg(long, default_value_t = 8)]
        u_order: usize,
    },
}

#[derive(Args, Debug)]
struct NormalizeArgs {
    /// Hypersurface JSON; `-` or absent reads stdin.
    input: Option<PathBuf>,
    /// Truncation order; overrides `MOSER_CHAINS_ORDER`.
    #[arg(long)]
    order: Option<u32>,
    /// Last stage to run, e.g. `kill-harmonics` or `check-f32`.
    #[arg(long)]
    stop_after: Option<String>,
    /// Also print every stage map and the tangent map.
    #[arg(long)]
    emit_map: bool,
    /// Chain direction x1 y1 in the input coordinates.
    #[arg(long, num_args = 2, value_names = ["X1", "Y1"], allow_hyphen_values = true)]
    slope: Option<Vec<String>>,
}

#[derive(Args, Debug)]
struct TraceArgs {
    /// Hypersurface JSON; `-` or absent reads stdin.
    input: Option<PathBuf>,
    /// Truncation order; overrides `MOSER_CHAINS_ORDER`.
    #[arg(long)]
    order: Option<u32>,
    /// Starting point z = x + iy; u starts at the beginning of the span.
    #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_hyphen_values = true)]
    point: Option<Vec<String>>,
    /// Initial slope dz/du = x1 + i y1 [default: 0 0].
    #[arg(long, num_args = 2, value_names = ["X1", "Y1"], allow_hyphen_values = true)]
    jet: Option<Vec<String>>,
    /// Range of u [default: 0 1/4].
    #[arg(long, num_args = 2, value_names = ["U0", "U1"], allow_hyphen_values = true)]
    span: Option<Vec<String>>,
    /// RK4 step in u.
    #[arg(long, default_value = "1/128")]
    step: String,
    /// Stop when |x| + |y| exceeds this bound.
    #[arg(long, default_value = "1/2")]
    chart_radius: String,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Metadata sidecar; defaults to `<out>.json`, or stderr without `--out`.
    #[arg(long)]
    meta: Option<PathBuf>,
}

/// Input and output streams plus the value of [`ORDER_ENV`].
pub struct Io<'a> {
    pub stdin: &'a mut dyn Read,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
    pub env_order: Option<String>,
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, io: &mut Io<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(if code == 0 { &mut *io.stdout } else { &mut *io.stderr }, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, io) {
        Ok(code) => code,
        Err(e) => {
            let report = json!({"error": {"kind": e.kind(), "message": e.to_string()}});
            let _ = writeln!(io.stderr, "{}", serde_json::to_string_pretty(&report).expect("json"));
            e.exit_code()
        }
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Internal(format!("i/o: {e}"))
}

fn emit(out: &mut dyn Write, v: &Value) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("json")).map_err(io_err)
}

fn resolve_order(flag: Option<u32>, env: &Option<String>) -> Result<u32> {
    let n = match (flag, env) {
        (Some(n), _) => n,
        (None, Some(s)) => {
            s.trim().parse::<u32>().map_err(|_| Error::Parse(format!("{ORDER_ENV}='{s}' is not an integer")))?
        }
        (None, None) => DEFAULT_ORDER,
    };
    if n < 6 {
        return Err(Error::Precondition(format!("truncation order must be at least 6, got {n}")));
    }
    Ok(n)
}

fn read_input(path: &Option<PathBuf>, stdin: &mut dyn Read) -> Result<RealGraphSeries<GaussianRational>> {
    let text = match path {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).map_err(|e| Error::Parse(format!("cannot read {}: {e}", p.display())))?
        }
        _ => {
            let mut s = String::new();
            stdin.read_to_string(&mut s).map_err(|e| Error::Parse(format!("cannot read stdin: {e}")))?;
            s
        }
    };
    graph_from_str(&text)
}

fn rational(s: &str) -> Result<BigRational> {
    parse_rational(s)
}

fn pair(v: &Option<Vec<String>>, default: (&str, &str)) -> Result<(BigRational, BigRational)> {
    match v {
        Some(p) => Ok((rational(&p[0])?, rational(&p[1])?)),
        None => Ok((rational(default.0)?, rational(default.1)?)),
    }
}

fn map_json(h: &Biholo<GaussianRational>) -> Value {
    json!({
        "grading": format!("{:?}", h.grading()).to_lowercase(),
        "f": series_to_json(h.f.as_series()),
        "g": series_to_json(h.g.as_series()),
    })
}

/// Runs the pipeline and renders the `normalize` output document.
pub fn normalize_json(
    graph: &RealGraphSeries<GaussianRational>,
    opts: &NormalizeOptions<GaussianRational>,
    emit_map: bool,
) -> Result<Value> {
    let r = normalize(graph, opts)?;
    let stages: Vec<Value> = r
        .stages
        .iter()
        .map(|s| {
            let mut v = json!({
            "stage": s.stage.name(),
            "residual_zero": s.residual_zero,
                });
            if emit_map {
                v["map"] = map_json(&s.map);
            }
            v
        })
        .collect();
    let mut out = json!({
        "order": opts.order,
        "hypersurface": series_to_json(&r.result),
        "biholo": map_json(&r.map),
        "stages": stages,
    });
    if let Some(f32) = &r.f32 {
        out["f32_vanishes"] = json!(f32.is_zero());
    }
    if emit_map {
        out["tangent_map"] = r.tangent_map.as_ref().map(map_json).unwrap_or(Value::Null);
    }
    Ok(out)
}

fn dispatch(cmd: Command, io: &mut Io<'_>) -> Result<i32> {
    match cmd {
        Command::VerifyTables { text } => {
            let r = verify_tables()?;
            if text {
                write!(io.stdout, "{}", render_text(&r)).map_err(io_err)?;
            } else {
                emit(io.stdout, &json!({"table": r, "pass": r.pass}))?;
            }
            Ok(if r.pass { 0 } else { 4 })
        }
        Command::Orbit { x1, y1, x2, y2 } => {
            let p = FiberPoint::new(rational(&x1)?, rational(&y1)?, rational(&x2)?, rational(&y2)?);
            emit(io.stdout, &serde_json::to_value(orbit_info(&p)?).expect("json"))?;
            Ok(0)
        }
        Command::Normalize(a) => {
            let order = resolve_order(a.order, &io.env_order)?;
            let graph = read_input(&a.input, io.stdin)?;
            let mut opts = NormalizeOptions::new(order);
            opts.stop_after = a.stop_after.as_deref().map(str::parse::<Stage>).transpose()?;
            let (sx, sy) = pair(&a.slope, ("0", "0"))?;
            opts.slope = GaussianRational::new(sx, sy);
            let out = normalize_json(&graph, &opts, a.emit_map)?;
            emit(io.stdout, &out)?;
            Ok(0)
        }
        Command::ChainTrace(a) => {
            let order = resolve_order(a.order, &io.env_order)?;
            let graph = read_input(&a.input, io.stdin)?;
            let graph = RealGraphSeries::new(graph.regrade(crate::series::Grading::Weight, order.max(graph.order())))?;
            let numeric = graph.map_coeffs(|c| c.to_c64());
            let (px, py) = pair(&a.point, ("0", "0"))?;
            let (jx, jy) = pair(&a.jet, ("0", "0"))?;
            let (u0, u1) = pair(&a.span, ("0", "1/4"))?;
            let step = ratio_to_f64(&rational(&a.step)?);
            let radius = ratio_to_f64(&rational(&a.chart_radius)?);
            if !(step > 0.0 && radius > 0.0) {
                return Err(Error::Precondition("step and chart radius must be positive".into()));
            }
            let opts = TraceOptions { u0: ratio_to_f64(&u0), u1: ratio_to_f64(&u1), step, chart_radius: radius };
            let z0 = C64::new(ratio_to_f64(&px), ratio_to_f64(&py));
            let c1 = C64::new(ratio_to_f64(&jx), ratio_to_f64(&jy));
            let t = trace_chain(&numeric, z0, c1, &opts)?;
            let mut csv = String::from("u,x,y,x1,y1\n");
            for r in &t.rows {
                csv.push_str(&format!("{},{},{},{},{}\n", r[0], r[1], r[2], r[3], r[4]));
            }
            let meta = json!({
                "order": order,
                "point": [format!("{px}"), format!("{py}")],
                "jet": [format!("{jx}"), format!("{jy}")],
                "span": [format!("{u0}"), format!("{u1}")],
                "step": opts.step,
                "chart_radius": opts.chart_radius,
                "rows": t.rows.len(),
                "truncated": t.truncated,
                "warning": t.warning,
            });
            let meta_text = serde_json::to_string_pretty(&meta).expect("json") + "\n";
            match &a.out {
                Some(p) => {
                    std::fs::write(p, csv).map_err(io_err)?;
                    let mp = a.meta.clone().unwrap_or_else(|| {
                        let mut s = p.clone().into_os_string();
                        s.push(".json");
                        PathBuf::from(s)
                    });
                    std::fs::write(mp, meta_text).map_err(io_err)?;
                }
                None => {
                    io.stdout.write_all(csv.as_bytes()).map_err(io_err)?;
                    match &a.meta {
                        Some(mp) => std::fs::write(mp, meta_text).map_err(io_err)?,
                        None => io.stderr.write_all(meta_text.as_bytes()).map_err(io_err)?,
                    }
                }
            }
            if let Some(w) = &t.warning {
                writeln!(io.stderr, "warning: {w}").map_err(io_err)?;
            }
            Ok(0)
        }
        Command::UniquenessCheck { max_weight, u_order } => {
            let r = uniqueness_check(max_weight, u_order)?;
            emit(io.stdout, &serde_json::to_value(&r).expect("json"))?;
            Ok(if r.pass { 0 } else { 4 })
        }
    }
}
