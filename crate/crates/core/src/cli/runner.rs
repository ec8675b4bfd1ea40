//! Grid evaluation and report assembly for every command.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use super::config::{check_shape, ConfigError, GridRange, LoadedSpec};
use super::output::{fmt_f64, fmt_opt, to_csv, to_json};
use crate::frame::{
    build_frame, curvatures, verify_frame_odes, CurvatureDerivs, GeometryError, Tolerances,
};
use crate::invariants::{analyze, ellipse_sample, full_turn, rel_diff, PointClass, PointReport};
use crate::linalg4::Vec4;
use crate::soliton::{
    bdr_residual, compatibility_residuals, omega_v_identity, verify_v_evolution, Compatibility,
};
use crate::surface::SurfaceSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Check,
    Analyze,
    Classify,
    Frame,
    Ellipse,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Analyze => "analyze",
            Command::Classify => "classify",
            Command::Frame => "frame",
            Command::Ellipse => "ellipse",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Default number of curvature-ellipse samples for the `ellipse` command.
pub const DEFAULT_ELLIPSE_SAMPLES: usize = 64;

/// Everything a grid run needs, after command-line overrides.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub spec: SurfaceSpec,
    pub digest: String,
    pub u: GridRange,
    pub v: GridRange,
    pub shape: (usize, usize),
    pub tol: Tolerances,
    /// Worker threads; `None` lets the pool decide.
    pub workers: Option<usize>,
    /// Curvature-ellipse samples per point.
    pub ellipse: Option<usize>,
}

/// Command-line values that take precedence over the definition file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub u: Option<GridRange>,
    pub v: Option<GridRange>,
    pub jet_du: Option<usize>,
    pub jet_dv: Option<usize>,
    pub workers: Option<usize>,
    pub ellipse: Option<usize>,
    pub flip_normal: bool,
}

impl RunConfig {
    pub fn new(loaded: LoadedSpec, o: Overrides) -> Result<RunConfig, ConfigError> {
        let missing = |axis: &str| ConfigError::Invalid {
            field: format!("grid.{axis}"),
            message: "no range in the file or on the command line".into(),
        };
        let u = o.u.or(loaded.u).ok_or_else(|| missing("u"))?;
        let v = o.v.or(loaded.v).ok_or_else(|| missing("v"))?;
        let shape = (
            o.jet_du.unwrap_or(loaded.shape.0),
            o.jet_dv.unwrap_or(loaded.shape.1),
        );
        check_shape(shape)?;
        if o.workers == Some(0) {
            return Err(ConfigError::Invalid {
                field: "workers".into(),
                message: "must be at least 1".into(),
            });
        }
        let mut spec = loaded.spec;
        spec.flip_normal ^= o.flip_normal;
        Ok(RunConfig {
            spec,
            digest: loaded.digest,
            u,
            v,
            shape,
            tol: loaded.tolerances,
            workers: o.workers,
            ellipse: o.ellipse,
        })
    }

    /// Grid points in row-major order, u outer and v inner.
    pub fn grid(&self) -> Vec<(f64, f64)> {
        let vs = self.v.points();
        self.u
            .points()
            .into_iter()
            .flat_map(|u| vs.iter().map(move |&v| (u, v)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointFailure {
    pub code: String,
    pub message: String,
}

impl From<GeometryError> for PointFailure {
    fn from(e: GeometryError) -> Self {
        PointFailure {
            code: e.code().to_string(),
            message: e.to_string(),
        }
    }
}

/// Results at a point where every precondition held.
#[derive(Debug, Clone)]
pub struct PointData {
    /// `T, E, D, N` at the base point.
    pub frame: [Vec4<f64>; 4],
    pub derivs: CurvatureDerivs,
    pub bdr_residual: Vec4<f64>,
    pub bdr_norm: f64,
    pub frame_ode: [f64; 4],
    pub v_evolution: [f64; 4],
    pub compat: Compatibility,
    pub omega_v: f64,
    pub report: PointReport,
    /// The coefficient-form routes are trustworthy here (soliton residual below tolerance).
    pub aform_certified: bool,
    pub ellipse: Vec<(f64, f64)>,
}

impl PointData {
    /// Largest relative gap between the definition route and the closed forms.
    pub fn closed_discrepancy(&self) -> f64 {
        let r = &self.report;
        [
            r.shape.closed_discrepancy,
            rel_diff(r.gamma.k, r.gamma.k_closed),
            rel_diff(r.gamma.h, r.gamma.h_closed),
            rel_diff(r.ellipse.delta, r.ellipse.delta_closed),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn aform_discrepancy(&self) -> f64 {
        let r = &self.report;
        r.shape
            .aform_discrepancy
            .max(rel_diff(r.ellipse.delta, r.ellipse.delta_aform))
    }
}

#[derive(Debug, Clone)]
pub struct PointResult {
    pub u: f64,
    pub v: f64,
    pub warnings: Vec<String>,
    pub outcome: Result<PointData, PointFailure>,
}

fn warnings_at(cfg: &RunConfig, u: f64, v: f64) -> Vec<String> {
    match cfg.spec.membership(u, v) {
        Ok(Some(f)) if f.abs() > cfg.tol.membership => {
            vec![format!(
                "W_OFF_HYPERSURFACE: |f(Omega)| = {:e} at (u, v) = ({u}, {v})",
                f.abs()
            )]
        }
        _ => Vec::new(),
    }
}

fn evaluate(
    cfg: &RunConfig,
    u: f64,
    v: f64,
    warnings: &mut Vec<String>,
) -> Result<PointData, GeometryError> {
    let tol = &cfg.tol;
    let fp = build_frame(&cfg.spec, (u, v), cfg.shape, tol)?;
    let cj = curvatures(&fp, tol)?;
    let derivs = CurvatureDerivs::from_jets(&cj)?;
    let bdr = bdr_residual(&cfg.spec, (u, v))?;
    let report = analyze(&derivs, tol)?;
    if report.forms.negative_metric {
        warnings.push(format!(
            "E_NEGATIVE_METRIC: kappa_n^2 tau_g = {:e} < 0 at (u, v) = ({u}, {v})",
            derivs.kn[0] * derivs.kn[0] * derivs.tg[0]
        ));
    }
    let coeffs = crate::soliton::coeffs_a(&derivs, tol)?;
    let bdr_norm = bdr.euclid();
    let ellipse = match cfg.ellipse {
        Some(n) => ellipse_sample(&report.shape.h, &full_turn(n)),
        None => Vec::new(),
    };
    Ok(PointData {
        frame: fp.values(),
        frame_ode: verify_frame_odes(&fp, &cj),
        v_evolution: verify_v_evolution(&fp, &coeffs),
        compat: compatibility_residuals(&derivs),
        omega_v: omega_v_identity(&fp, &derivs),
        derivs,
        bdr_residual: bdr,
        bdr_norm,
        aform_certified: bdr_norm < tol.bdr,
        report,
        ellipse,
    })
}

pub fn evaluate_point(cfg: &RunConfig, u: f64, v: f64) -> PointResult {
    let mut warnings = warnings_at(cfg, u, v);
    let outcome = evaluate(cfg, u, v, &mut warnings).map_err(PointFailure::from);
    PointResult {
        u,
        v,
        warnings,
        outcome,
    }
}

/// Evaluates every grid point; results come back in grid order whatever the
/// completion order.
pub fn evaluate_grid(cfg: &RunConfig) -> Vec<PointResult> {
    let grid = cfg.grid();
    let run = || {
        grid.par_iter()
            .map(|&(u, v)| evaluate_point(cfg, u, v))
            .collect()
    };
    match cfg.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(run))
            .unwrap_or_else(|_| {
                grid.iter()
                    .map(|&(u, v)| evaluate_point(cfg, u, v))
                    .collect()
            }),
        None => run(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Solution,
    NotSolution,
    Indeterminate,
}

impl Verdict {
    pub fn to_json(self) -> Value {
        match self {
            Verdict::Solution => json!(true),
            Verdict::NotSolution => json!(false),
            Verdict::Indeterminate => json!("indeterminate: no valid points"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub points: usize,
    pub valid_points: usize,
    pub errors: BTreeMap<String, usize>,
    pub warnings: Vec<String>,
    pub max_bdr_residual: Option<f64>,
    pub max_frame_ode_residual: Option<f64>,
    pub max_v_evolution_residual: Option<f64>,
    pub max_omega_v_identity: Option<f64>,
    pub max_compat_abs: Option<[f64; 3]>,
    pub max_compat_normalized: Option<[f64; 3]>,
    pub max_closed_discrepancy: Option<f64>,
    /// Over points where the coefficient forms are certified.
    pub max_aform_discrepancy: Option<f64>,
    pub min_wintgen_gap: Option<f64>,
    pub histogram: BTreeMap<PointClass, usize>,
    pub verdict: Verdict,
}

fn fold_max(acc: Option<f64>, x: f64) -> Option<f64> {
    Some(acc.map_or(x, |a| a.max(x)))
}

fn fold_max3(acc: Option<[f64; 3]>, x: [f64; 3]) -> Option<[f64; 3]> {
    Some(match acc {
        None => x.map(f64::abs),
        Some(a) => [
            a[0].max(x[0].abs()),
            a[1].max(x[1].abs()),
            a[2].max(x[2].abs()),
        ],
    })
}

pub fn summarize(points: &[PointResult], tol: &Tolerances) -> Summary {
    let mut s = Summary {
        points: points.len(),
        valid_points: 0,
        errors: BTreeMap::new(),
        warnings: points
            .iter()
            .flat_map(|p| p.warnings.iter().cloned())
            .collect(),
        max_bdr_residual: None,
        max_frame_ode_residual: None,
        max_v_evolution_residual: None,
        max_omega_v_identity: None,
        max_compat_abs: None,
        max_compat_normalized: None,
        max_closed_discrepancy: None,
        max_aform_discrepancy: None,
        min_wintgen_gap: None,
        histogram: BTreeMap::new(),
        verdict: Verdict::Indeterminate,
    };
    for p in points {
        match &p.outcome {
            Err(f) => *s.errors.entry(f.code.clone()).or_default() += 1,
            Ok(d) => {
                s.valid_points += 1;
                s.max_bdr_residual = fold_max(s.max_bdr_residual, d.bdr_norm);
                let ode = d.frame_ode.iter().copied().fold(0.0, f64::max);
                s.max_frame_ode_residual = fold_max(s.max_frame_ode_residual, ode);
                let evo = d.v_evolution.iter().copied().fold(0.0, f64::max);
                s.max_v_evolution_residual = fold_max(s.max_v_evolution_residual, evo);
                s.max_omega_v_identity = fold_max(s.max_omega_v_identity, d.omega_v);
                s.max_compat_abs = fold_max3(s.max_compat_abs, d.compat.absolute());
                s.max_compat_normalized = fold_max3(s.max_compat_normalized, d.compat.normalized());
                s.max_closed_discrepancy =
                    fold_max(s.max_closed_discrepancy, d.closed_discrepancy());
                if d.aform_certified {
                    s.max_aform_discrepancy =
                        fold_max(s.max_aform_discrepancy, d.aform_discrepancy());
                }
                let gap = d.report.wintgen.gap;
                s.min_wintgen_gap = Some(s.min_wintgen_gap.map_or(gap, |g: f64| g.min(gap)));
                *s.histogram.entry(d.report.ellipse.class).or_default() += 1;
            }
        }
    }
    s.verdict = match s.max_bdr_residual {
        None => Verdict::Indeterminate,
        Some(r) if r < tol.bdr => Verdict::Solution,
        Some(_) => Verdict::NotSolution,
    };
    s
}

/// A finished grid run.
#[derive(Debug, Clone)]
pub struct GridReport {
    pub command: Command,
    pub points: Vec<PointResult>,
    pub summary: Summary,
}

pub fn run(cfg: &RunConfig, command: Command) -> GridReport {
    let points = evaluate_grid(cfg);
    let summary = summarize(&points, &cfg.tol);
    GridReport {
        command,
        points,
        summary,
    }
}

pub fn run_check(cfg: &RunConfig) -> GridReport {
    run(cfg, Command::Check)
}

pub fn run_analyze(cfg: &RunConfig) -> GridReport {
    run(cfg, Command::Analyze)
}

pub fn run_classify(cfg: &RunConfig) -> GridReport {
    run(cfg, Command::Classify)
}

fn vec4_json(v: &Vec4<f64>) -> Value {
    json!(v.0)
}

fn opt_json(x: Option<f64>) -> Value {
    x.map_or(Value::Null, |x| json!(x))
}

fn curvatures_json(d: &CurvatureDerivs) -> Value {
    json!({
        "kappa_n": d.kn[0],
        "kappa_g": d.kg[0],
        "tau_g": d.tg[0],
        "kappa_n_u": d.kn[1..].to_vec(),
        "kappa_g_u": d.kg[1..].to_vec(),
        "tau_g_u": d.tg[1..].to_vec(),
        "kappa_n_v": d.kn_v,
        "kappa_g_v": d.kg_v,
        "tau_g_v": d.tg_v,
    })
}

fn check_json(d: &PointData) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("bdr_residual".into(), vec4_json(&d.bdr_residual));
    m.insert("bdr_residual_norm".into(), json!(d.bdr_norm));
    m.insert("frame_ode_residuals".into(), json!(d.frame_ode));
    m.insert("v_evolution_residuals".into(), json!(d.v_evolution));
    m.insert("omega_v_identity".into(), json!(d.omega_v));
    m.insert(
        "compatibility".into(),
        json!({"absolute": d.compat.absolute(), "normalized": d.compat.normalized()}),
    );
    m.insert("curvatures".into(), curvatures_json(&d.derivs));
    m
}

fn point_json(command: Command, p: &PointResult) -> Value {
    let mut m = Map::new();
    m.insert("u".into(), json!(p.u));
    m.insert("v".into(), json!(p.v));
    m.insert("warnings".into(), json!(p.warnings));
    match &p.outcome {
        Err(f) => {
            m.insert("status".into(), json!(f.code));
            m.insert(
                "error".into(),
                json!({"code": f.code, "message": f.message}),
            );
        }
        Ok(d) => {
            m.insert("status".into(), json!("ok"));
            let r = &d.report;
            match command {
                Command::Check => m.extend(check_json(d)),
                Command::Analyze => {
                    m.extend(check_json(d));
                    m.insert(
                        "report".into(),
                        serde_json::to_value(r).expect("plain data"),
                    );
                    m.insert("aform_certified".into(), json!(d.aform_certified));
                    if !d.ellipse.is_empty() {
                        m.insert("ellipse_samples".into(), json!(d.ellipse));
                    }
                }
                Command::Classify => {
                    m.insert("Delta".into(), json!(r.ellipse.delta));
                    m.insert("K".into(), json!(r.shape.primary.k));
                    m.insert("rankA".into(), json!(r.ellipse.rank_a));
                    m.insert("class".into(), json!(r.ellipse.class.name()));
                }
                Command::Frame => {
                    let [t, e, dd, n] = &d.frame;
                    m.insert("T".into(), vec4_json(t));
                    m.insert("E".into(), vec4_json(e));
                    m.insert("D".into(), vec4_json(dd));
                    m.insert("N".into(), vec4_json(n));
                    m.insert("curvatures".into(), curvatures_json(&d.derivs));
                }
                Command::Ellipse => {
                    m.insert(
                        "H".into(),
                        json!([r.shape.primary.h_e, r.shape.primary.h_n]),
                    );
                    m.insert("samples".into(), json!(d.ellipse));
                }
            }
        }
    }
    Value::Object(m)
}

fn summary_json(s: &Summary) -> Value {
    let histogram: Map<String, Value> = s
        .histogram
        .iter()
        .map(|(c, n)| (c.name().to_string(), json!(n)))
        .collect();
    json!({
        "points": s.points,
        "valid_points": s.valid_points,
        "errors": s.errors,
        "warnings": s.warnings,
        "max_bdr_residual": opt_json(s.max_bdr_residual),
        "max_frame_ode_residual": opt_json(s.max_frame_ode_residual),
        "max_v_evolution_residual": opt_json(s.max_v_evolution_residual),
        "max_omega_v_identity": opt_json(s.max_omega_v_identity),
        "max_compatibility_absolute": s.max_compat_abs.map_or(Value::Null, |x| json!(x)),
        "max_compatibility_normalized": s.max_compat_normalized.map_or(Value::Null, |x| json!(x)),
        "max_closed_route_discrepancy": opt_json(s.max_closed_discrepancy),
        "max_aform_route_discrepancy": opt_json(s.max_aform_discrepancy),
        "min_wintgen_gap": opt_json(s.min_wintgen_gap),
        "class_histogram": histogram,
        "is_bdr_solution": s.verdict.to_json(),
    })
}

fn range_json(r: &GridRange) -> Value {
    json!({"start": r.start, "stop": r.stop, "count": r.count})
}

pub fn render_json(cfg: &RunConfig, report: &GridReport) -> String {
    let doc = json!({
        "spec_digest": cfg.digest,
        "grid": {"u": range_json(&cfg.u), "v": range_json(&cfg.v), "jet": [cfg.shape.0, cfg.shape.1]},
        "points": report.points.iter().map(|p| point_json(report.command, p)).collect::<Vec<_>>(),
        "summary": summary_json(&report.summary),
        "version": env!("CARGO_PKG_VERSION"),
        "command": report.command.name(),
    });
    to_json(&doc)
}

pub const CLASSIFY_HEADER: [&str; 6] = ["u", "v", "Delta", "K", "rankA", "class"];

const CHECK_HEADER: [&str; 19] = [
    "u",
    "v",
    "status",
    "bdr_residual_norm",
    "frame_ode_T",
    "frame_ode_E",
    "frame_ode_D",
    "frame_ode_N",
    "v_evolution_T",
    "v_evolution_E",
    "v_evolution_D",
    "v_evolution_N",
    "compat_r1",
    "compat_r3",
    "compat_r2",
    "compat_r1_normalized",
    "compat_r3_normalized",
    "compat_r2_normalized",
    "omega_v_identity",
];

const ANALYZE_HEADER: [&str; 35] = [
    "u",
    "v",
    "status",
    "kappa_n",
    "kappa_g",
    "tau_g",
    "a12",
    "a13",
    "a14",
    "a23",
    "a24",
    "a34",
    "a34_alt",
    "g11",
    "g12",
    "g22",
    "W",
    "l11",
    "l12",
    "l22",
    "k",
    "h",
    "K",
    "H_E",
    "H_N",
    "K_N",
    "Delta",
    "rankA",
    "class",
    "wintgen_gap",
    "wintgen_ideal",
    "closed_route_discrepancy",
    "aform_route_discrepancy",
    "aform_certified",
    "bdr_residual_norm",
];

const FRAME_HEADER: [&str; 22] = [
    "u", "v", "status", "T1", "T2", "T3", "T4", "E1", "E2", "E3", "E4", "D1", "D2", "D3", "D4",
    "N1", "N2", "N3", "N4", "kappa_n", "kappa_g", "tau_g",
];

fn header(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn padded(mut row: Vec<String>, width: usize) -> Vec<String> {
    row.resize(width, String::new());
    row
}

fn csv_rows(command: Command, cfg: &RunConfig, p: &PointResult) -> Vec<Vec<String>> {
    let (u, v) = (fmt_f64(p.u), fmt_f64(p.v));
    let d = match &p.outcome {
        Ok(d) => d,
        Err(f) => {
            let row = match command {
                Command::Classify => vec![
                    u,
                    v,
                    String::new(),
                    String::new(),
                    String::new(),
                    f.code.clone(),
                ],
                Command::Check => padded(vec![u, v, f.code.clone()], CHECK_HEADER.len()),
                Command::Analyze => {
                    let width = ANALYZE_HEADER.len() + 2 * cfg.ellipse.unwrap_or(0);
                    padded(vec![u, v, f.code.clone()], width)
                }
                Command::Frame => padded(vec![u, v, f.code.clone()], FRAME_HEADER.len()),
                Command::Ellipse => padded(vec![u, v, f.code.clone()], 6),
            };
            return vec![row];
        }
    };
    let r = &d.report;
    let nums = |xs: &[f64]| xs.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>();
    match command {
        Command::Classify => vec![vec![
            u,
            v,
            fmt_f64(r.ellipse.delta),
            fmt_f64(r.shape.primary.k),
            r.ellipse.rank_a.to_string(),
            r.ellipse.class.name().to_string(),
        ]],
        Command::Check => {
            let mut row = vec![u, v, "ok".to_string(), fmt_f64(d.bdr_norm)];
            row.extend(nums(&d.frame_ode));
            row.extend(nums(&d.v_evolution));
            row.extend(nums(&d.compat.absolute()));
            row.extend(nums(&d.compat.normalized()));
            row.push(fmt_f64(d.omega_v));
            vec![row]
        }
        Command::Analyze => {
            let c = &r.coeffs;
            let f = &r.forms;
            let p3 = &r.shape.primary;
            let mut row = vec![u, v, "ok".to_string()];
            row.extend(nums(&[d.derivs.kn[0], d.derivs.kg[0], d.derivs.tg[0]]));
            row.extend(nums(&[c.a12, c.a13, c.a14, c.a23, c.a24, c.a34]));
            row.push(fmt_opt(c.a34_alt));
            row.extend(nums(&[f.g11, f.g12, f.g22, f.w, f.l11, f.l12, f.l22]));
            row.extend(nums(&[
                r.gamma.k,
                r.gamma.h,
                p3.k,
                p3.h_e,
                p3.h_n,
                p3.k_n,
                r.ellipse.delta,
            ]));
            row.push(r.ellipse.rank_a.to_string());
            row.push(r.ellipse.class.name().to_string());
            row.push(fmt_f64(r.wintgen.gap));
            row.push(r.wintgen.ideal.to_string());
            row.push(fmt_f64(d.closed_discrepancy()));
            row.push(fmt_f64(d.aform_discrepancy()));
            row.push(d.aform_certified.to_string());
            row.push(fmt_f64(d.bdr_norm));
            for (x, y) in &d.ellipse {
                row.push(fmt_f64(*x));
                row.push(fmt_f64(*y));
            }
            vec![row]
        }
        Command::Frame => {
            let mut row = vec![u, v, "ok".to_string()];
            for vec in &d.frame {
                row.extend(nums(&vec.0));
            }
            row.extend(nums(&[d.derivs.kn[0], d.derivs.kg[0], d.derivs.tg[0]]));
            vec![row]
        }
        Command::Ellipse => {
            let n = d.ellipse.len();
            full_turn(n)
                .into_iter()
                .zip(&d.ellipse)
                .map(|(th, (x, y))| {
                    vec![
                        u.clone(),
                        v.clone(),
                        "ok".into(),
                        fmt_f64(th),
                        fmt_f64(*x),
                        fmt_f64(*y),
                    ]
                })
                .collect()
        }
    }
}

pub fn render_csv(cfg: &RunConfig, report: &GridReport) -> String {
    let head = match report.command {
        Command::Classify => header(&CLASSIFY_HEADER),
        Command::Check => header(&CHECK_HEADER),
        Command::Analyze => {
            let mut h = header(&ANALYZE_HEADER);
            for i in 0..cfg.ellipse.unwrap_or(0) {
                h.push(format!("ellipse_x_{i}"));
                h.push(format!("ellipse_y_{i}"));
            }
            h
        }
        Command::Frame => header(&FRAME_HEADER),
        Command::Ellipse => header(&["u", "v", "status", "theta", "x", "y"]),
    };
    let rows: Vec<Vec<String>> = report
        .points
        .iter()
        .flat_map(|p| csv_rows(report.command, cfg, p))
        .collect();
    to_csv(&head, &rows)
}

pub fn render(cfg: &RunConfig, report: &GridReport, format: Format) -> String {
    match format {
        Format::Json => render_json(cfg, report),
        Format::Csv => render_csv(cfg, report),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::config::parse_spec;

    const WAVE: &str = r#"
[surface]
x = "sin(u+v)/2 + sin(3*(u+v))/6"
y = "cos(u+v)/2 - cos(3*(u+v))/6"
z = "cos(u+v)/2 - cos(5*(u+v))/10"
w = "sin(u+v)/2 - sin(5*(u+v))/10"

[normal]
x = "sin(u+v)/2 + 3*sin(3*(u+v))/2"
y = "cos(u+v)/2 - 3*cos(3*(u+v))/2"
z = "cos(u+v)/2 - 5*cos(5*(u+v))/2"
w = "sin(u+v)/2 - 5*sin(5*(u+v))/2"

[grid]
u = "0.1:1.1:3"
v = "0:0.5:2"
"#;

    fn config() -> RunConfig {
        RunConfig::new(
            parse_spec(WAVE).unwrap(),
            Overrides {
                workers: Some(2),
                ..Default::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn grid_is_row_major() {
        let g = config().grid();
        assert_eq!(g.len(), 6);
        assert_eq!(g[1], (0.1, 0.5));
        assert_eq!(g[2], (0.6, 0.0));
    }

    #[test]
    fn summary_maxima_match_points() {
        let cfg = config();
        let report = run_check(&cfg);
        let valid: Vec<&PointData> = report
            .points
            .iter()
            .filter_map(|p| p.outcome.as_ref().ok())
            .collect();
        assert_eq!(valid.len(), 6);
        let max =
            |f: &dyn Fn(&PointData) -> f64| valid.iter().map(|d| f(d)).fold(f64::MIN, f64::max);
        let s = &report.summary;
        assert_eq!(s.max_bdr_residual, Some(max(&|d| d.bdr_norm)));
        assert_eq!(s.max_omega_v_identity, Some(max(&|d| d.omega_v)));
        assert_eq!(
            s.max_closed_discrepancy,
            Some(max(&|d| d.closed_discrepancy()))
        );
        assert_eq!(s.histogram.values().sum::<usize>(), 6);
        assert_eq!(s.verdict, Verdict::NotSolution);
    }

    #[test]
    fn overrides_take_precedence() {
        let o = Overrides {
            u: Some(GridRange {
                start: 0.0,
                stop: 0.0,
                count: 1,
            }),
            jet_du: Some(10),
            flip_normal: true,
            ..Default::default()
        };
        let cfg = RunConfig::new(parse_spec(WAVE).unwrap(), o).unwrap();
        assert_eq!(cfg.grid().len(), 2);
        assert_eq!(cfg.shape, (10, 1));
        assert!(cfg.spec.flip_normal);
        let bad = Overrides {
            jet_du: Some(5),
            ..Default::default()
        };
        assert!(RunConfig::new(parse_spec(WAVE).unwrap(), bad).is_err());
    }

    #[test]
    fn classify_rows_fill_failed_points() {
        let mut cfg = config();
        cfg.spec.omega[0] = crate::expr::parse("2*sin(u+v)").unwrap();
        let report = run_classify(&cfg);
        let csv = render_csv(&cfg, &report);
        assert!(csv
            .lines()
            .skip(1)
            .all(|l| l.ends_with(",,,E_NOT_UNIT_SPEED")));
    }
}
