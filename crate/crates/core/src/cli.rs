//! The `hermicurv` command line: argument parsing, dispatch, and JSON
//! reports. Every run prints exactly one JSON document, either a report or
//! an error object.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::analysis::{
    classify, corollary12_probe, extremal_bisectional, extremal_sectional, lu_inequality_check,
    BisectionalExtremum, ExtremalResult, LuReport, Mode, PointClassification, Sign,
    DEFAULT_RESTARTS, DEFAULT_SEED, DEFAULT_TOL,
};
use crate::curvature::{complexified_11_direct, PointCurvature};
use crate::dsl::{parse_metric, MetricDefinition};
use crate::error::{Error, Result};
use crate::metric::{catalog_metric, CatalogMetric};
use crate::sectional::{
    chern_sectional, chern_wedge_numerator, holo_bisectional, holo_sectional, identity_suite,
    riemann_sectional, thm11_lhs, Plane,
};
use crate::tangent::{to_holomorphic, ChartPoint, HoloTangentVector, RealTangentVector, C64};
use crate::tensor::Tensor4;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Thresholds for the pass/fail checks in reports.
pub mod thresholds {
    pub const SYMMETRY: f64 = 1e-8;
    pub const CHERN_PAIR: f64 = 1e-9;
    pub const GRAY: f64 = 1e-7;
    pub const DIRECT_BLOCK: f64 = 1e-6;
    pub const CONNECTION_CURVATURE: f64 = 1e-5;
    pub const KD_SYMMETRY: f64 = 1e-10;
    pub const UNIVERSAL_IDENTITY: f64 = 1e-6;
    pub const KAHLER_IDENTITY: f64 = 1e-7;
    pub const EXTREMAL_GAP: f64 = 1e-4;
    pub const KAHLER_PROBE: f64 = 1e-7;
}

const DEFAULT_PLANE_SAMPLES: usize = 16;
const DEFAULT_LU_SAMPLES: usize = 1000;
const DEFAULT_PROBE_SAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Classify,
    Curvature,
    Sectional,
    Identities,
    Extremal,
    Lu,
    ProbeCorollary,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Curvature => "curvature",
            Command::Sectional => "sectional",
            Command::Identities => "identities",
            Command::Extremal => "extremal",
            Command::Lu => "lu",
            Command::ProbeCorollary => "probe-corollary",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SignArg {
    Nonneg,
    Nonpos,
}

#[derive(Debug, Parser)]
#[command(
    name = "hermicurv",
    version,
    about = "Curvature of Hermitian metrics in local complex coordinates"
)]
struct Args {
    command: Command,
    /// Catalog metric name or path to a metric file.
    #[arg(long)]
    metric: String,
    /// Point as a JSON array of [re, im] pairs; repeat for several points.
    #[arg(long = "point")]
    points: Vec<String>,
    /// Plane as {"u": [2n reals], "v": [2n reals]}; random planes are used when absent.
    #[arg(long)]
    plane: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    restarts: usize,
    /// Classification tolerance.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, value_enum, default_value = "max")]
    mode: ModeArg,
    /// Sign hypothesis for the `lu` command; both are tried when absent.
    #[arg(long, value_enum)]
    sign: Option<SignArg>,
    /// Number of random planes or pairs per point.
    #[arg(long)]
    samples: Option<usize>,
    /// Also write the report to this file.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Include wall-clock timing in the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlaneSpec {
    u: Vec<f64>,
    v: Vec<f64>,
}

/// A validated request.
#[derive(Debug, Clone)]
pub struct RunRequest {
    pub command: Command,
    pub metric_source: String,
    pub metric: MetricDefinition,
    pub points: Vec<ChartPoint>,
    pub plane: Option<Plane>,
    pub seed: u64,
    pub restarts: usize,
    pub tol: f64,
    pub mode: Mode,
    pub sign: Option<Sign>,
    pub samples: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub body: Value,
    pub passed: bool,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn parse_point(src: &str) -> Result<ChartPoint> {
    let pairs: Vec<[f64; 2]> = serde_json::from_str(src).map_err(|e| {
        invalid(format!(
            "point '{src}' is not an array of [re, im] pairs: {e}"
        ))
    })?;
    if pairs.is_empty() {
        return Err(invalid("point has no coordinates"));
    }
    ChartPoint::new(pairs.iter().map(|[re, im]| C64::new(*re, *im)).collect())
}

fn parse_plane(src: &str, n: usize) -> Result<Plane> {
    let spec: PlaneSpec = serde_json::from_str(src).map_err(|e| invalid(format!("plane: {e}")))?;
    for w in [&spec.u, &spec.v] {
        if w.len() != 2 * n {
            return Err(Error::Dimension {
                expected: 2 * n,
                got: w.len(),
            });
        }
    }
    Plane::new(
        RealTangentVector::new(spec.u)?,
        RealTangentVector::new(spec.v)?,
    )
}

/// Resolves a catalog name (dimension taken from `n`) or a metric file.
pub fn load_metric(source: &str, n: usize) -> Result<MetricDefinition> {
    if let Ok(cat) = source.parse::<CatalogMetric>() {
        return catalog_metric(cat.name(), n);
    }
    let path = Path::new(source);
    if !path.exists() {
        return Err(Error::UnknownMetric(source.to_string()));
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| invalid(format!("cannot read '{source}': {e}")))?;
    let metric = parse_metric(&text)?;
    if metric.dim() != n {
        return Err(Error::Dimension {
            expected: metric.dim(),
            got: n,
        });
    }
    Ok(metric.with_name(source))
}

impl RunRequest {
    fn from_args(a: &Args) -> Result<Self> {
        if a.points.is_empty() {
            return Err(invalid("at least one --point is required"));
        }
        let points = a
            .points
            .iter()
            .map(|s| parse_point(s))
            .collect::<Result<Vec<_>>>()?;
        let n = points[0].dim();
        if let Some(p) = points.iter().find(|p| p.dim() != n) {
            return Err(Error::Dimension {
                expected: n,
                got: p.dim(),
            });
        }
        if a.restarts == 0 {
            return Err(invalid("--restarts must be positive"));
        }
        if !(a.tol > 0.0 && a.tol.is_finite()) {
            return Err(invalid("--tol must be positive and finite"));
        }
        if a.samples == Some(0) {
            return Err(invalid("--samples must be positive"));
        }
        Ok(Self {
            command: a.command,
            metric: load_metric(&a.metric, n)?,
            metric_source: a.metric.clone(),
            plane: a.plane.as_deref().map(|s| parse_plane(s, n)).transpose()?,
            points,
            seed: a.seed,
            restarts: a.restarts,
            tol: a.tol,
            mode: match a.mode {
                ModeArg::Max => Mode::Max,
                ModeArg::Min => Mode::Min,
            },
            sign: a.sign.map(|s| match s {
                SignArg::Nonneg => Sign::Nonneg,
                SignArg::Nonpos => Sign::Nonpos,
            }),
            samples: a.samples,
        })
    }

    fn echo(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), json!(self.command.name()));
        m.insert("metric".into(), json!(self.metric_source));
        m.insert(
            "points".into(),
            Value::Array(self.points.iter().map(point_json).collect()),
        );
        if let Some(pl) = &self.plane {
            m.insert("plane".into(), plane_json(pl));
        }
        m.insert("seed".into(), json!(self.seed));
        m.insert("restarts".into(), json!(self.restarts));
        m.insert("tol".into(), json!(self.tol));
        m.insert("mode".into(), json!(self.mode.name()));
        if let Some(s) = self.sign {
            m.insert("sign".into(), json!(s.name()));
        }
        if let Some(s) = self.samples {
            m.insert("samples".into(), json!(s));
        }
        Value::Object(m)
    }
}

fn c_json(z: C64) -> Value {
    json!([z.re, z.im])
}

fn point_json(p: &ChartPoint) -> Value {
    Value::Array(p.coords().iter().map(|z| c_json(*z)).collect())
}

fn holo_json(v: &HoloTangentVector) -> Value {
    Value::Array(v.comps().iter().map(|z| c_json(*z)).collect())
}

fn plane_json(pl: &Plane) -> Value {
    json!({"u": pl.u.comps(), "v": pl.v.comps()})
}

fn tensor_json<T: Copy>(t: &Tensor4<T>, f: impl Fn(T) -> Value) -> Value {
    let d = t.dim();
    Value::Array(
        (0..d)
            .map(|a| {
                Value::Array(
                    (0..d)
                        .map(|b| {
                            Value::Array(
                                (0..d)
                                    .map(|c| {
                                        Value::Array((0..d).map(|e| f(t[(a, b, c, e)])).collect())
                                    })
                                    .collect(),
                            )
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

/// Collects named pass/fail checks.
#[derive(Default)]
struct Checks(Vec<Value>, bool);

impl Checks {
    fn new() -> Self {
        Self(Vec::new(), true)
    }

    fn add(&mut self, name: impl Into<String>, value: f64, threshold: f64) -> bool {
        let passed = value < threshold;
        self.1 &= passed;
        self.0.push(
            json!({"name": name.into(), "value": value, "threshold": threshold, "passed": passed}),
        );
        passed
    }

    fn add_flag(&mut self, name: impl Into<String>, passed: bool) {
        self.1 &= passed;
        self.0.push(json!({"name": name.into(), "passed": passed}));
    }
}

fn point_curvature(req: &RunRequest, i: usize) -> Result<PointCurvature> {
    PointCurvature::at(&req.metric, &req.points[i])
        .map_err(|e| Error::InadmissiblePoint(format!("point {i}: {e}")))
}

fn planes(req: &RunRequest, pc: &PointCurvature, stream: u64) -> Vec<Plane> {
    if let Some(pl) = &req.plane {
        return vec![pl.clone()];
    }
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(req.seed);
    rng.set_stream(stream);
    let m = 2 * pc.dim();
    (0..req.samples.unwrap_or(DEFAULT_PLANE_SAMPLES))
        .map(|_| {
            let mut draw = || {
                use rand::Rng;
                RealTangentVector::new((0..m).map(|_| rng.gen_range(-1.0..1.0)).collect())
                    .expect("even length")
            };
            Plane {
                u: draw(),
                v: draw(),
            }
        })
        .collect()
}

fn run_classify(req: &RunRequest) -> Result<RunReport> {
    let r = classify(&req.metric, &req.points, req.tol)?;
    let per_point: Vec<Value> = r.per_point.iter().map(classification_json).collect();
    Ok(RunReport {
        body: json!({
            "kahler": r.kahler.holds,
            "kahler_residual": r.kahler.residual,
            "kahler_like": r.kahler_like.holds,
            "kahler_like_residual": r.kahler_like.residual,
            "g_kahler_like": r.g_kahler_like.holds,
            "g_kahler_like_residual": r.g_kahler_like.residual,
            "tol": r.tol,
            "per_point": per_point,
        }),
        passed: true,
    })
}

fn classification_json(c: &PointClassification) -> Value {
    json!({"kahler_residual": c.kahler, "kahler_like_residual": c.kahler_like, "g_kahler_like_residual": c.g_kahler_like})
}

fn run_curvature(req: &RunRequest) -> Result<RunReport> {
    let mut checks = Checks::new();
    let mut results = Vec::new();
    for i in 0..req.points.len() {
        let pc = point_curvature(req, i)?;
        let direct = complexified_11_direct(&pc.jet);
        let rscale = pc.real.r.max_abs().max(1.0);
        let cscale = pc.complexified.r.max_abs().max(1.0);
        checks.add(
            format!("point {i}: real curvature symmetries"),
            pc.real.symmetry_residual() / rscale,
            thresholds::SYMMETRY,
        );
        checks.add(
            format!("point {i}: first Bianchi identity"),
            pc.real.bianchi_residual() / rscale,
            thresholds::SYMMETRY,
        );
        checks.add(
            format!("point {i}: Chern pair symmetry"),
            pc.chern.pair_symmetry_residual() / pc.chern.kr.max_abs().max(1.0),
            thresholds::CHERN_PAIR,
        );
        checks.add(
            format!("point {i}: Gray vanishing"),
            pc.complexified.gray_residual() / cscale,
            thresholds::GRAY,
        );
        checks.add(
            format!("point {i}: direct (1,1) block"),
            direct.max_abs_diff(&pc.complexified.block_11()),
            thresholds::DIRECT_BLOCK,
        );
        results.push(json!({
            "point": point_json(&req.points[i]),
            "chern_curvature": tensor_json(&pc.chern.kr, c_json),
            "real_curvature": tensor_json(&pc.real.r, |x| json!(x)),
            "complexified_curvature": tensor_json(&pc.complexified.r, c_json),
            "complexified_11_direct": tensor_json(&direct, c_json),
        }));
    }
    Ok(RunReport {
        body: json!({"results": results, "checks": checks.0}),
        passed: checks.1,
    })
}

fn run_sectional(req: &RunRequest) -> Result<RunReport> {
    let mut checks = Checks::new();
    let mut results = Vec::new();
    for i in 0..req.points.len() {
        let pc = point_curvature(req, i)?;
        let mut rows = Vec::new();
        let mut worst_conn: f64 = 0.0;
        let mut worst_sym: f64 = 0.0;
        for pl in planes(req, &pc, i as u64) {
            let k = riemann_sectional(&pc.real, &pc.rjet.g, &pl)?;
            let kd = chern_sectional(&pc.chern, &pc.jet.h, &pl)?;
            let kd_swapped = chern_sectional(
                &pc.chern,
                &pc.jet.h,
                &Plane::new(pl.v.clone(), pl.u.clone())?,
            )?;
            let lhs = thm11_lhs(&pc.connection, &pc.rjet.g, &pl.u, &pl.v)?;
            let rhs = chern_wedge_numerator(&pc.chern, &pl.u, &pl.v)?;
            let xi = to_holomorphic(&pl.u);
            let eta = to_holomorphic(&pl.v);
            worst_conn = worst_conn.max((lhs - rhs).abs() / rhs.abs().max(1.0));
            worst_sym = worst_sym.max((kd - kd_swapped).abs() / kd.abs().max(1.0));
            rows.push(json!({
                "plane": plane_json(&pl),
                "K": k,
                "K_D": kd,
                "K_minus_K_D": k - kd,
                "H_u": holo_sectional(&pc.chern, &pc.jet.h, &xi)?,
                "H_v": holo_sectional(&pc.chern, &pc.jet.h, &eta)?,
                "B_uv": holo_bisectional(&pc.chern, &pc.jet.h, &xi, &eta)?,
                "connection_curvature": lhs,
                "chern_contraction": rhs,
            }));
        }
        checks.add(
            format!("point {i}: connection curvature vs Chern contraction"),
            worst_conn,
            thresholds::CONNECTION_CURVATURE,
        );
        checks.add(
            format!("point {i}: K_D symmetric in (u, v)"),
            worst_sym,
            thresholds::KD_SYMMETRY,
        );
        results.push(json!({"point": point_json(&req.points[i]), "planes": rows}));
    }
    Ok(RunReport {
        body: json!({"results": results, "checks": checks.0}),
        passed: checks.1,
    })
}

fn run_identities(req: &RunRequest) -> Result<RunReport> {
    let mut checks = Checks::new();
    let mut results = Vec::new();
    for i in 0..req.points.len() {
        let pc = point_curvature(req, i)?;
        let kahler = PointClassification::of(&pc).kahler < req.tol;
        let scale = pc.real.r.max_abs().max(1.0);
        let mut worst = [0.0f64; 5];
        let mut count = 0;
        for pl in planes(req, &pc, i as u64) {
            let r = identity_suite(&pc, &pl.u, &pl.v)?;
            let size =
                pl.u.comps()
                    .iter()
                    .chain(pl.v.comps())
                    .map(|x| x * x)
                    .sum::<f64>()
                    .max(1.0);
            let norm = scale * size * size;
            for (w, x) in worst.iter_mut().zip([
                r.kahler_bisectional,
                r.kahler_sectional,
                r.kahler_holomorphic,
                r.decomposition,
                r.holomorphic_plane,
            ]) {
                *w = w.max(x.abs() / norm);
            }
            count += 1;
        }
        checks.add(
            format!("point {i}: complexified decomposition"),
            worst[3],
            thresholds::UNIVERSAL_IDENTITY,
        );
        checks.add(
            format!("point {i}: holomorphic plane identity"),
            worst[4],
            thresholds::UNIVERSAL_IDENTITY,
        );
        if kahler {
            checks.add(
                format!("point {i}: Kahler bisectional identity"),
                worst[0],
                thresholds::KAHLER_IDENTITY,
            );
            checks.add(
                format!("point {i}: Kahler sectional identity"),
                worst[1],
                thresholds::KAHLER_IDENTITY,
            );
            checks.add(
                format!("point {i}: Kahler holomorphic identity"),
                worst[2],
                thresholds::KAHLER_IDENTITY,
            );
        }
        results.push(json!({
            "point": point_json(&req.points[i]),
            "kahler": kahler,
            "planes": count,
            "residuals": {
                "kahler_bisectional": worst[0],
                "kahler_sectional": worst[1],
                "kahler_holomorphic": worst[2],
                "decomposition": worst[3],
                "holomorphic_plane": worst[4],
            },
        }));
    }
    Ok(RunReport {
        body: json!({"results": results, "checks": checks.0}),
        passed: checks.1,
    })
}

fn sectional_extremum_json(r: &ExtremalResult) -> Value {
    json!({
        "mode": r.mode.name(),
        "best_value": r.best_value,
        "best_plane": plane_json(&r.best_plane),
        "holo_best_value": r.holo_best_value,
        "holo_best_direction": r.holo_best_direction.comps(),
        "gap": r.gap,
        "restarts": r.restarts,
        "converged": r.converged,
        "sampled_curvature_range": [r.curvature_sign.min, r.curvature_sign.max],
        "g_kahler_like_residual": r.g_kahler_like_residual,
        "hypotheses_hold": r.hypotheses_hold,
    })
}

fn bisectional_extremum_json(r: &BisectionalExtremum) -> Value {
    json!({
        "mode": r.mode.name(),
        "best_value": r.best_value,
        "best_xi": holo_json(&r.best_xi),
        "best_eta": holo_json(&r.best_eta),
        "alignment": r.alignment,
        "holo_best_value": r.holo_best_value,
        "holo_best_direction": holo_json(&r.holo_best_direction),
        "gap": r.gap,
        "restarts": r.restarts,
        "converged": r.converged,
        "sampled_chern_sectional_range": [r.chern_sign.min, r.chern_sign.max],
        "kahler_like_residual": r.kahler_like_residual,
        "hypotheses_hold": r.hypotheses_hold,
    })
}

fn run_extremal(req: &RunRequest) -> Result<RunReport> {
    let mut checks = Checks::new();
    let mut results = Vec::new();
    for i in 0..req.points.len() {
        let pc = point_curvature(req, i)?;
        let sec = extremal_sectional(&pc, req.mode, req.restarts, req.seed, req.tol);
        let bis = extremal_bisectional(&pc, req.mode, req.restarts, req.seed, req.tol);
        if sec.hypotheses_hold {
            checks.add(
                format!("point {i}: sectional extremum is holomorphic"),
                sec.gap,
                thresholds::EXTREMAL_GAP,
            );
        }
        if bis.hypotheses_hold {
            checks.add(
                format!("point {i}: bisectional extremum is holomorphic"),
                bis.gap,
                thresholds::EXTREMAL_GAP,
            );
        }
        results.push(json!({
            "point": point_json(&req.points[i]),
            "sectional": sectional_extremum_json(&sec),
            "bisectional": bisectional_extremum_json(&bis),
        }));
    }
    Ok(RunReport {
        body: json!({"results": results, "checks": checks.0}),
        passed: checks.1,
    })
}

fn lu_json(r: &LuReport) -> Value {
    json!({
        "sign": r.sign.name(),
        "samples": r.samples,
        "symmetry_holds": r.symmetry.holds,
        "symmetry_residual": r.symmetry.residual,
        "hypothesis_holds": r.hypothesis_holds,
        "hypothesis_worst": r.hypothesis_worst,
        "worst_margin": r.worst_margin,
        "violations": r.violations,
        "status": r.status.name(),
    })
}

fn run_lu(req: &RunRequest) -> Result<RunReport> {
    use crate::analysis::LuStatus;
    let mut checks = Checks::new();
    let mut results = Vec::new();
    let samples = req.samples.unwrap_or(DEFAULT_LU_SAMPLES);
    for i in 0..req.points.len() {
        let pc = point_curvature(req, i)?;
        let signs = match req.sign {
            Some(s) => vec![s],
            None => vec![Sign::Nonneg, Sign::Nonpos],
        };
        let mut chosen = None;
        for s in signs {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(req.seed);
            rng.set_stream(i as u64);
            let r = lu_inequality_check(&pc.chern.kr, samples, s, req.tol, &mut rng);
            let applicable = r.status != LuStatus::Inapplicable;
            if chosen.is_none() || applicable {
                chosen = Some(r);
            }
            if applicable {
                break;
            }
        }
        let r = chosen.expect("at least one sign tried");
        checks.add_flag(
            format!("point {i}: no violations of the inequality"),
            r.status != LuStatus::Violated,
        );
        results.push(json!({"point": point_json(&req.points[i]), "lu": lu_json(&r)}));
    }
    Ok(RunReport {
        body: json!({"results": results, "checks": checks.0}),
        passed: checks.1,
    })
}

fn run_probe(req: &RunRequest) -> Result<RunReport> {
    let samples = req.samples.unwrap_or(DEFAULT_PROBE_SAMPLES);
    let r = corollary12_probe(&req.metric, &req.points, samples, req.seed)?;
    let kahler = classify(&req.metric, &req.points, req.tol)?.kahler.holds;
    let mut checks = Checks::new();
    if kahler {
        checks.add(
            "Kahler metric has K = K_D",
            r.max_abs_diff,
            thresholds::KAHLER_PROBE,
        );
    }
    let w = &r.witness;
    Ok(RunReport {
        body: json!({
            "kahler": kahler,
            "max_abs_diff": r.max_abs_diff,
            "planes_sampled": r.planes_sampled,
            "witness": {
                "point_index": w.point_index,
                "point": point_json(&w.point),
                "plane": plane_json(&w.plane),
                "K": w.k,
                "K_D": w.k_d,
            },
            "checks": checks.0,
        }),
        passed: checks.1,
    })
}

pub fn run(req: &RunRequest) -> Result<RunReport> {
    match req.command {
        Command::Classify => run_classify(req),
        Command::Curvature => run_curvature(req),
        Command::Sectional => run_sectional(req),
        Command::Identities => run_identities(req),
        Command::Extremal => run_extremal(req),
        Command::Lu => run_lu(req),
        Command::ProbeCorollary => run_probe(req),
    }
}

fn has_non_finite(v: &Value) -> bool {
    match v {
        Value::Null => true,
        Value::Number(n) => n.as_f64().is_some_and(|x| !x.is_finite()),
        Value::Array(a) => a.iter().any(has_non_finite),
        Value::Object(m) => m.values().any(has_non_finite),
        _ => false,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse(_) => "parse",
        Error::UnknownMetric(_) => "unknown_metric",
        Error::Dimension { .. }
        | Error::InvalidArgument(_)
        | Error::DegeneratePlane
        | Error::ZeroVector => "input",
        _ => "inadmissible",
    }
}

fn error_json(kind: &str, message: &str, position: Option<(usize, usize)>) -> Value {
    let mut err = Map::new();
    err.insert("kind".into(), json!(kind));
    err.insert("message".into(), json!(message));
    if let Some((line, column)) = position {
        err.insert("line".into(), json!(line));
        err.insert("column".into(), json!(column));
    }
    json!({ "error": err, "version": VERSION })
}

/// Output of one invocation: the JSON document and the exit status.
pub struct Outcome {
    pub document: String,
    pub exit_code: i32,
    pub json_path: Option<PathBuf>,
}

/// Runs the command line `argv` (including the program name).
pub fn execute<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome {
                    document: e.to_string(),
                    exit_code: EXIT_OK,
                    json_path: None,
                };
            }
            let msg = e.to_string();
            let first = msg
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ")
                .to_string();
            return Outcome {
                document: pretty(&error_json("usage", &first, None)),
                exit_code: EXIT_USAGE,
                json_path: None,
            };
        }
    };
    let started = Instant::now();
    let result = RunRequest::from_args(&args).and_then(|req| run(&req).map(|rep| (req, rep)));
    let (document, exit_code) = match result {
        Ok((req, rep)) => {
            let mut body = match rep.body {
                Value::Object(m) => m,
                other => {
                    let mut m = Map::new();
                    m.insert("result".into(), other);
                    m
                }
            };
            body.insert("version".into(), json!(VERSION));
            body.insert("request".into(), req.echo());
            body.insert("passed".into(), json!(rep.passed));
            if args.timing {
                body.insert(
                    "timing_ms".into(),
                    json!(started.elapsed().as_secs_f64() * 1e3),
                );
            }
            let body = Value::Object(body);
            if has_non_finite(&body) {
                (
                    pretty(&error_json(
                        "non_finite",
                        "report contains a non-finite number",
                        None,
                    )),
                    EXIT_CHECK_FAILED,
                )
            } else {
                (
                    pretty(&body),
                    if rep.passed {
                        EXIT_OK
                    } else {
                        EXIT_CHECK_FAILED
                    },
                )
            }
        }
        Err(e) => {
            let position = match &e {
                Error::Parse(p) => Some((p.line, p.column)),
                _ => None,
            };
            (
                pretty(&error_json(error_kind(&e), &e.to_string(), position)),
                EXIT_USAGE,
            )
        }
    };
    Outcome {
        document,
        exit_code,
        json_path: args.json,
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

/// Writes `text` to `path` through a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path)
}

/// Entry point for the binary.
pub fn main_entry() -> i32 {
    use std::io::Write;
    let out = execute(std::env::args_os());
    if let Some(path) = &out.json_path {
        if let Err(e) = write_atomic(path, &out.document) {
            let msg = format!("cannot write {}: {e}", path.display());
            let _ = writeln!(
                std::io::stdout(),
                "{}",
                pretty(&error_json("io", &msg, None))
            );
            return EXIT_USAGE;
        }
    }
    // a closed stdout is not worth a panic
    let _ = writeln!(std::io::stdout(), "{}", out.document);
    out.exit_code
}
