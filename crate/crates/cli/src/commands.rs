//! Subcommands: argument definitions and their runners.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use reifenberg::constants::{ConstantLedger, Constants, DEFAULT_K1_0};
use reifenberg::flow::{check_lemma2, compose_flows, FlowScenario, SlabLayout};
use reifenberg::io;
use reifenberg::measure::{measure_covering, measure_simplicial};
use reifenberg::span::{span, verify_properties, LChoice, SpanConfig};
use reifenberg::{ClosedBall, Point, SimplicialSet};

use crate::report::{envelope, write_text};
use crate::suites;

#[derive(Parser, Debug, Clone)]
#[command(name = "reifenberg", version, about = "Spanning competitors by recursive slicing and coning")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Build Ã and S̃ for a set A in a ball.
    Span(SpanArgs),
    /// Simulate the cone-collapsing flow of a scenario file.
    Flow(FlowArgs),
    /// Print the constant ledger K^m_k.
    Constants(ConstantsArgs),
    /// Measure a set.
    Measure(MeasureArgs),
    /// Run the randomized property suites.
    Verify(VerifyArgs),
}

fn parse_l(s: &str) -> Result<LChoice, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(LChoice::Auto);
    }
    s.parse::<f64>()
        .map(LChoice::Value)
        .map_err(|_| format!("expected `auto` or a number, got `{s}`"))
}

#[derive(Args, Debug, Clone)]
pub struct SpanArgs {
    /// Geometry file (.json, .obj, or .off).
    #[arg(long)]
    pub input: PathBuf,
    /// Ball as `c1,…,cn,r`; defaults to the bounding-box center with twice
    /// the largest vertex distance as radius.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub ball: Option<Vec<f64>>,
    #[arg(long)]
    pub m: usize,
    #[arg(long = "L", default_value = "auto", value_parser = parse_l)]
    pub l: LChoice,
    #[arg(long, default_value_t = 1024)]
    pub n_offsets: usize,
    #[arg(long, default_value_t = reifenberg::GEOM_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_K1_0)]
    pub k1_0: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct FlowArgs {
    /// Scenario JSON (see the guide for the format).
    #[arg(long)]
    pub scenario: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "1,2,5,10,50")]
    pub times: Vec<f64>,
    /// Distance tolerance for the containment checks.
    #[arg(long, default_value_t = 1e-3)]
    pub check_tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct ConstantsArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_K1_0)]
    pub k1_0: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodArg {
    Simplicial,
    Covering,
}

#[derive(Args, Debug, Clone)]
pub struct MeasureArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Measure dimension.
    #[arg(long)]
    pub d: usize,
    #[arg(long, value_enum, default_value = "simplicial")]
    pub method: MethodArg,
    /// Cell size of the covering estimator.
    #[arg(long, default_value_t = 1e-3)]
    pub grid: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Trials per randomized suite.
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Trials of the end-to-end span suite.
    #[arg(long, default_value_t = 8)]
    pub span_trials: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// What a run produced: the report written as `report.json` (or
/// `flow_report.json`), whether every asserted inequality held, and a
/// human-readable summary.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub pass: bool,
    pub report: String,
    pub summary: String,
}

pub fn run(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    match &cfg.command {
        Command::Span(a) => run_span(a),
        Command::Flow(a) => run_flow(a),
        Command::Constants(a) => run_constants(a),
        Command::Measure(a) => run_measure(a),
        Command::Verify(a) => run_verify(a),
    }
}

/// Reads geometry by extension: `.obj`, `.off`, anything else as JSON.
pub fn read_geometry(path: &Path) -> anyhow::Result<SimplicialSet> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("").to_ascii_lowercase();
    let set = match ext.as_str() {
        "obj" => io::from_obj(&text),
        "off" => io::from_off(&text),
        _ => io::from_json(&text),
    }
    .with_context(|| format!("parsing {}", path.display()))?;
    Ok(set)
}

/// Writes `name.obj` for sets in R^3 and `name.off` otherwise, plus
/// `name.json` with tags.
pub fn write_mesh(dir: &Path, name: &str, x: &SimplicialSet) -> anyhow::Result<()> {
    if x.ambient_dim() == 3 {
        write_text(&dir.join(format!("{name}.obj")), &io::to_obj(x)?)?;
    } else {
        write_text(&dir.join(format!("{name}.off")), &io::to_off(x))?;
    }
    write_text(&dir.join(format!("{name}.json")), &io::to_json(x))
}

fn default_ball(a: &SimplicialSet) -> anyhow::Result<ClosedBall> {
    let verts = a.used_vertices();
    if verts.is_empty() {
        bail!("--ball is required for an empty input");
    }
    let n = a.ambient_dim();
    let center = Point::new((0..n).map(|i| {
        let lo = verts.iter().map(|p| p[i]).fold(f64::INFINITY, f64::min);
        let hi = verts.iter().map(|p| p[i]).fold(f64::NEG_INFINITY, f64::max);
        0.5 * (lo + hi)
    }));
    let r = verts.iter().map(|p| p.dist(&center)).fold(0.0, f64::max);
    Ok(ClosedBall::new(center, 2.0 * r.max(f64::MIN_POSITIVE))?)
}

#[derive(Serialize)]
struct SpanReport<'a> {
    config: &'a SpanConfig,
    result: &'a reifenberg::span::SpanResult,
    verification: reifenberg::span::VerificationReport,
    output_measure: f64,
    exceptional_measure: f64,
}

pub fn run_span(args: &SpanArgs) -> anyhow::Result<Outcome> {
    let a = read_geometry(&args.input)?;
    let ball = match &args.ball {
        Some(v) => {
            let Some((r, c)) = v.split_last() else { bail!("--ball needs center and radius") };
            if c.len() != a.ambient_dim() {
                bail!(
                    "--ball has a {}-dimensional center but the input lives in R^{}",
                    c.len(),
                    a.ambient_dim()
                );
            }
            ClosedBall::new(Point::new(c.iter().copied()), *r)?
        }
        None => default_ball(&a)?,
    };
    let cfg = SpanConfig {
        tol: args.tol,
        n_offsets: args.n_offsets,
        constants: Constants::new(args.k1_0)?,
        ..SpanConfig::default()
    };
    let res = span(&a, &ball, args.m, args.l, &cfg)?;
    let verification = verify_properties(&res);
    let pass = verification.all_pass;
    let s_tilde = res.s_tilde();
    let report = SpanReport {
        config: &cfg,
        result: &res,
        output_measure: res.root.output_measure,
        exceptional_measure: res.root.exceptional_measure,
        verification,
    };
    let json = crate::report::to_json(&envelope("span", pass, &report))?;

    let mut summary = String::new();
    writeln!(summary, "span: m = {}, n = {}, L = {}{}", res.m, res.n, res.l, if res.l_auto { " (auto)" } else { "" })?;
    writeln!(summary, "  H^{}(A)       = {}", res.m - 1, res.input_measure)?;
    writeln!(summary, "  H^{}(A~)      = {}", res.m, res.root.output_measure)?;
    writeln!(summary, "  H^{}(S~)    = {}", res.m - 1, res.root.exceptional_measure)?;
    writeln!(
        summary,
        "  isoperimetric: {} <= {} (margin {}, {})",
        res.theorem.lhs,
        res.theorem.rhs,
        res.theorem.margin,
        if res.theorem.asserted { "asserted" } else { "reported only" }
    )?;
    writeln!(
        summary,
        "  nodes checked: {}, failures: {}",
        report.verification.nodes_checked,
        report.verification.failures.len()
    )?;
    for f in &report.verification.failures {
        writeln!(summary, "    {} ({}): {} > {}", f.path, f.property, f.lhs, f.rhs)?;
    }
    writeln!(summary, "  result: {}", if pass { "PASS" } else { "FAIL" })?;

    if let Some(dir) = &args.out {
        write_mesh(dir, "A_tilde", res.a_tilde())?;
        write_mesh(dir, "S_tilde", &s_tilde)?;
        write_text(&dir.join("report.json"), &json)?;
        write_text(&dir.join("summary.txt"), &summary)?;
    }
    Ok(Outcome {
        pass,
        report: json,
        summary,
    })
}

/// A flow scenario file: the set `z` and either one `scenario` or a
/// `composition` of wall and slab stages.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlowFile {
    pub z: SimplicialSet,
    #[serde(default)]
    pub scenario: Option<FlowScenario>,
    #[serde(default)]
    pub composition: Option<Composition>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Composition {
    pub layout: SlabLayout,
    pub walls: Vec<FlowScenario>,
    pub slabs: Vec<FlowScenario>,
    pub t_per_stage: f64,
}

fn time_label(t: f64) -> String {
    format!("{t}").replace('.', "_")
}

pub fn run_flow(args: &FlowArgs) -> anyhow::Result<Outcome> {
    let text = fs::read_to_string(&args.scenario)
        .with_context(|| format!("reading {}", args.scenario.display()))?;
    let file: FlowFile = serde_json::from_str(&text)
        .map_err(|e| reifenberg::Error::Parse(e.to_string()))
        .with_context(|| format!("parsing {}", args.scenario.display()))?;
    match (&file.scenario, &file.composition) {
        (Some(sc), None) => {
            let (run, rep) = check_lemma2(sc, &file.z, &args.times, args.check_tol)?;
            let json = crate::report::to_json(&envelope("flow", rep.pass, &rep))?;
            let mut summary = String::new();
            writeln!(summary, "flow: {} vertices, delta = {}, rho = {}", rep.vertices, rep.delta, rep.rho)?;
            for s in &rep.samples {
                writeln!(summary, "  t = {:<6} distance {:.3e}  hausdorff {:.3e}", s.t, s.distance, s.hausdorff)?;
            }
            writeln!(summary, "  cone containment     {:.3e} <= {} : {}", rep.cone_containment.lhs, rep.cone_containment.rhs, rep.cone_containment.pass)?;
            writeln!(summary, "  monotone decay       {}", rep.decay_monotone)?;
            writeln!(summary, "  off-support movement {} ({} vertices) : {}", rep.stationarity.max_movement, rep.stationarity.vertices_outside, rep.stationarity.pass)?;
            writeln!(summary, "  boundary containment {:.3e} <= {} : {}", rep.boundary_containment.lhs, rep.boundary_containment.rhs, rep.boundary_containment.pass)?;
            writeln!(summary, "  ray deviation        {:.3e}", rep.ray_deviation)?;
            writeln!(summary, "  result: {}", if rep.pass { "PASS" } else { "FAIL" })?;
            if let Some(dir) = &args.out {
                for (t, zt) in run.times.iter().zip(&run.snapshots) {
                    write_mesh(dir, &format!("Z_t{}", time_label(*t)), zt)?;
                }
                write_text(&dir.join("flow_report.json"), &json)?;
                write_text(&dir.join("summary.txt"), &summary)?;
            }
            Ok(Outcome {
                pass: rep.pass,
                report: json,
                summary,
            })
        }
        (None, Some(c)) => {
            let (y, rep) = compose_flows(&c.layout, &c.walls, &c.slabs, &file.z, c.t_per_stage, args.check_tol)?;
            let json = crate::report::to_json(&envelope("flow", rep.pass, &rep))?;
            let mut summary = String::new();
            writeln!(summary, "flow composition: {} stages", rep.stages.len())?;
            for (a, b) in rep.relative_boundary.iter().zip(&rep.slab_boundary) {
                writeln!(
                    summary,
                    "  slab {}: relative boundary {:.3e}, slab boundary {:.3e}",
                    a.slab, a.lhs, b.lhs
                )?;
            }
            writeln!(summary, "  result: {}", if rep.pass { "PASS" } else { "FAIL" })?;
            if let Some(dir) = &args.out {
                write_mesh(dir, "Y_final", &y)?;
                write_text(&dir.join("flow_report.json"), &json)?;
                write_text(&dir.join("summary.txt"), &summary)?;
            }
            Ok(Outcome {
                pass: rep.pass,
                report: json,
                summary,
            })
        }
        _ => bail!(reifenberg::Error::Parse(
            "scenario file needs exactly one of `scenario` and `composition`".into()
        )),
    }
}

pub fn run_constants(args: &ConstantsArgs) -> anyhow::Result<Outcome> {
    let ledger = ConstantLedger::build(&Constants::new(args.k1_0)?, args.m, args.n)?;
    let json = crate::report::to_json(&envelope("constants", true, &ledger))?;
    let table = ledger.to_table();
    if let Some(dir) = &args.out {
        write_text(&dir.join("report.json"), &json)?;
        write_text(&dir.join("summary.txt"), &table)?;
    }
    let summary = format!("{json}\n{table}");
    Ok(Outcome {
        pass: true,
        report: json,
        summary,
    })
}

pub fn run_measure(args: &MeasureArgs) -> anyhow::Result<Outcome> {
    let x = read_geometry(&args.input)?;
    let rep = match args.method {
        MethodArg::Simplicial => measure_simplicial(&x, args.d)?,
        MethodArg::Covering => measure_covering(&x, args.d, args.grid)?,
    };
    let json = crate::report::to_json(&envelope("measure", true, &rep))?;
    let summary = format!("H^{}({}) = {} ({:?})\n", rep.dimension, args.input.display(), rep.value, rep.method);
    if let Some(dir) = &args.out {
        write_text(&dir.join("report.json"), &json)?;
    }
    Ok(Outcome {
        pass: true,
        report: json,
        summary,
    })
}

#[derive(Serialize)]
struct VerifyReport {
    seed: u64,
    suites: Vec<suites::SuiteReport>,
}

pub fn run_verify(args: &VerifyArgs) -> anyhow::Result<Outcome> {
    let seed = args.seed;
    let t = args.trials;
    let reports = vec![
        suites::cone_suite(seed, t),
        suites::eilenberg_suite(seed.wrapping_add(1), t, t, 0.02),
        suites::slicing_suite(seed.wrapping_add(2), t, &[0.2, 0.5, 1.0], 1024),
        suites::hausdorff_suite(seed.wrapping_add(3), t),
        suites::span_suite(seed.wrapping_add(4), args.span_trials),
    ];
    let pass = reports.iter().all(|r| r.pass);
    let mut summary = String::new();
    for r in &reports {
        writeln!(
            summary,
            "{:<18} {:>5} trials  {:>3} failures  worst ratio {:.6}  {}",
            r.name,
            r.trials,
            r.failures,
            r.worst_ratio,
            if r.pass { "PASS" } else { "FAIL" }
        )?;
    }
    let json = crate::report::to_json(&envelope("verify", pass, &VerifyReport { seed, suites: reports }))?;
    if let Some(dir) = &args.out {
        write_text(&dir.join("report.json"), &json)?;
        write_text(&dir.join("summary.txt"), &summary)?;
    }
    Ok(Outcome {
        pass,
        report: json,
        summary,
    })
}
