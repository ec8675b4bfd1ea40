//! Surface definition files and run configuration.
//!
//! A definition file is TOML with four tables:
//!
//! ```toml
//! [surface]            # components of Ω in u, v; optional jet shape
//! x = "(cos(u)-u)/2"
//! y = "(cos(u)+u)/2"
//! z = "sin(u)/sqrt(2)"
//! w = "v/(2*sqrt(2))"
//!
//! [normal]             # either f = "..." in x, y, z, w, or x, y, z, w in u, v
//! f = "(x+y)^2+2*z^2-1"
//!
//! [grid]               # start:stop:count, endpoints may be constant expressions
//! u = "0:2*pi:5"
//! v = "0:1:5"
//!
//! [tolerances]         # all optional
//! bdr = 1e-8
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::expr::{parse, Expr, ParseError, Variable};
use crate::frame::Tolerances;
use crate::surface::{NormalSource, SurfaceSpec};
use crate::taylor::{DEFAULT_DU, DEFAULT_DV};

/// The smallest u-order that still yields fourth derivatives of the curvatures.
pub const MIN_JET_DU: usize = 8;
pub const MIN_JET_DV: usize = 1;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("E_PARSE in {field}: {source}")]
    Parse { field: String, source: ParseError },
    #[error("E_CONFIG in {field}: {message}")]
    Invalid { field: String, message: String },
    #[error("E_IO: {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl ConfigError {
    pub fn code(&self) -> &'static str {
        match self {
            ConfigError::Parse { .. } => "E_PARSE",
            ConfigError::Invalid { .. } => "E_CONFIG",
            ConfigError::Io { .. } => "E_IO",
        }
    }

    /// Process exit status for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            ConfigError::Io { .. } => 2,
            _ => 1,
        }
    }

    fn invalid(field: &str, message: impl Into<String>) -> Self {
        ConfigError::Invalid {
            field: field.to_string(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    surface: RawSurface,
    normal: RawNormal,
    grid: Option<RawGrid>,
    tolerances: Option<RawTolerances>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSurface {
    x: String,
    y: String,
    z: String,
    w: String,
    jet_du: Option<usize>,
    jet_dv: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNormal {
    f: Option<String>,
    x: Option<String>,
    y: Option<String>,
    z: Option<String>,
    w: Option<String>,
    #[serde(default)]
    flip: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    u: Option<String>,
    v: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTolerances {
    unit: Option<f64>,
    dep: Option<f64>,
    curv: Option<f64>,
    e: Option<f64>,
    bdr: Option<f64>,
    cls: Option<f64>,
    rank: Option<f64>,
    membership: Option<f64>,
}

/// `count` evenly spaced values from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRange {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridRange {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| self.start + i as f64 * step)
            .collect()
    }

    /// Parses `start:stop:count`; endpoints may be constant expressions such as `2*pi`.
    pub fn parse(field: &str, text: &str) -> Result<GridRange, ConfigError> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(ConfigError::invalid(
                field,
                format!("expected start:stop:count, got '{text}'"),
            ));
        }
        let endpoint = |s: &str| -> Result<f64, ConfigError> {
            let e = parse(s).map_err(|source| ConfigError::Parse {
                field: field.to_string(),
                source,
            })?;
            e.constant_value().filter(|x| x.is_finite()).ok_or_else(|| {
                ConfigError::invalid(field, format!("'{s}' is not a finite constant"))
            })
        };
        let start = endpoint(parts[0])?;
        let stop = endpoint(parts[1])?;
        let count: usize = parts[2].trim().parse().map_err(|_| {
            ConfigError::invalid(
                field,
                format!("count '{}' is not a positive integer", parts[2]),
            )
        })?;
        if count < 1 {
            return Err(ConfigError::invalid(field, "count must be at least 1"));
        }
        if start > stop {
            return Err(ConfigError::invalid(field, "start must not exceed stop"));
        }
        Ok(GridRange { start, stop, count })
    }
}

/// A validated definition file.
#[derive(Debug, Clone)]
pub struct LoadedSpec {
    pub spec: SurfaceSpec,
    /// Hex SHA-256 of the file contents.
    pub digest: String,
    pub u: Option<GridRange>,
    pub v: Option<GridRange>,
    pub shape: (usize, usize),
    pub tolerances: Tolerances,
}

fn parse_field(field: &str, text: &str) -> Result<Expr, ConfigError> {
    parse(text).map_err(|source| ConfigError::Parse {
        field: field.to_string(),
        source,
    })
}

fn restrict(field: &str, e: &Expr, allowed: &[Variable], message: &str) -> Result<(), ConfigError> {
    match e.variables().into_iter().find(|v| !allowed.contains(v)) {
        Some(v) => Err(ConfigError::invalid(
            field,
            format!("{message} (found '{}')", v.name()),
        )),
        None => Ok(()),
    }
}

pub fn load_spec(path: &Path) -> Result<LoadedSpec, ConfigError> {
    let bytes = fs::read(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| ConfigError::invalid("file", "not valid UTF-8"))?;
    let mut loaded = parse_spec(&text)?;
    loaded.digest = hex::encode(Sha256::digest(&bytes));
    Ok(loaded)
}

/// Parses and validates definition-file text. The digest is of `text`.
pub fn parse_spec(text: &str) -> Result<LoadedSpec, ConfigError> {
    let raw: RawFile =
        toml::from_str(text).map_err(|e| ConfigError::invalid("file", e.message().to_string()))?;
    let uv = [Variable::U, Variable::V];

    let s = &raw.surface;
    let mut omega = Vec::with_capacity(4);
    for (name, src) in [("x", &s.x), ("y", &s.y), ("z", &s.z), ("w", &s.w)] {
        let field = format!("surface.{name}");
        let e = parse_field(&field, src)?;
        restrict(&field, &e, &uv, "omega may reference only u, v")?;
        omega.push(e);
    }
    let omega: [Expr; 4] = omega.try_into().expect("four components");

    let n = &raw.normal;
    let explicit = [&n.x, &n.y, &n.z, &n.w];
    let given = explicit.iter().filter(|c| c.is_some()).count();
    let normal = match (&n.f, given) {
        (Some(f), 0) => {
            let e = parse_field("normal.f", f)?;
            let xyzw = [Variable::X, Variable::Y, Variable::Z, Variable::W];
            restrict(
                "normal.f",
                &e,
                &xyzw,
                "the hypersurface may reference only x, y, z, w",
            )?;
            NormalSource::implicit(e)
        }
        (None, 4) => {
            let mut comps = Vec::with_capacity(4);
            for (name, src) in ["x", "y", "z", "w"].into_iter().zip(explicit) {
                let field = format!("normal.{name}");
                let e = parse_field(&field, src.as_deref().unwrap_or_default())?;
                restrict(
                    &field,
                    &e,
                    &uv,
                    "an explicit normal may reference only u, v",
                )?;
                comps.push(e);
            }
            NormalSource::Explicit(comps.try_into().expect("four components"))
        }
        (None, 1..=3) => {
            return Err(ConfigError::invalid(
                "normal",
                "an explicit normal needs all of x, y, z, w",
            ))
        }
        _ => return Err(ConfigError::invalid("normal", "exactly one normal source")),
    };

    let shape = (
        s.jet_du.unwrap_or(DEFAULT_DU),
        s.jet_dv.unwrap_or(DEFAULT_DV),
    );
    check_shape(shape)?;

    let grid = raw.grid.as_ref();
    let u = grid
        .and_then(|g| g.u.as_deref())
        .map(|t| GridRange::parse("grid.u", t))
        .transpose()?;
    let v = grid
        .and_then(|g| g.v.as_deref())
        .map(|t| GridRange::parse("grid.v", t))
        .transpose()?;

    let tolerances = tolerances(raw.tolerances.unwrap_or_default())?;
    let mut spec = SurfaceSpec::new(omega, normal);
    spec.flip_normal = n.flip;
    Ok(LoadedSpec {
        spec,
        digest: hex::encode(Sha256::digest(text.as_bytes())),
        u,
        v,
        shape,
        tolerances,
    })
}

pub fn check_shape(shape: (usize, usize)) -> Result<(), ConfigError> {
    if shape.0 < MIN_JET_DU {
        return Err(ConfigError::invalid(
            "jet_du",
            format!("must be at least {MIN_JET_DU}"),
        ));
    }
    if shape.1 < MIN_JET_DV {
        return Err(ConfigError::invalid(
            "jet_dv",
            format!("must be at least {MIN_JET_DV}"),
        ));
    }
    Ok(())
}

fn tolerances(raw: RawTolerances) -> Result<Tolerances, ConfigError> {
    let mut t = Tolerances::default();
    let slots = [
        ("unit", raw.unit, &mut t.unit),
        ("dep", raw.dep, &mut t.dep),
        ("curv", raw.curv, &mut t.curv),
        ("e", raw.e, &mut t.e),
        ("bdr", raw.bdr, &mut t.bdr),
        ("cls", raw.cls, &mut t.cls),
        ("rank", raw.rank, &mut t.rank),
        ("membership", raw.membership, &mut t.membership),
    ];
    for (name, value, slot) in slots {
        if let Some(x) = value {
            if !(x.is_finite() && x > 0.0) {
                return Err(ConfigError::invalid(
                    &format!("tolerances.{name}"),
                    "must be a positive number",
                ));
            }
            *slot = x;
        }
    }
    Ok(t)
}
