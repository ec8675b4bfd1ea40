//! The frame `{T, E, D, N}` along the u-curves of a surface, the three
//! curvature functions it defines, and the u-derivative identities it obeys.

use thiserror::Error;

use crate::expr::EvalError;
use crate::linalg4::{cross3, dot, gram_schmidt_e_with, FrameVectorError, Vec4};
use crate::surface::SurfaceSpec;
use crate::taylor::{Jet2, JetError};

/// Numerical thresholds shared by the whole pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// `| |Ω_u| - 1 |` allowed at a base point.
    pub unit: f64,
    /// Allowed size of the part of `Ω_uu` off the normal line.
    pub dep: f64,
    /// Smallest `|κ_n|`, `|τ_g|` and (for the alternative `a34`) `|κ_g|`.
    pub curv: f64,
    /// Smallest residual accepted when constructing `E`.
    pub e: f64,
    /// Solution verdict threshold on the soliton residual.
    pub bdr: f64,
    /// Zero test for classification and the ideal-surface test.
    pub cls: f64,
    /// Relative singular-value threshold for the rank of `A(p)`.
    pub rank: f64,
    /// `|f(Ω)|` above which an implicit-normal point gets a warning.
    pub membership: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            unit: 1e-8,
            dep: 1e-8,
            curv: 1e-8,
            e: crate::linalg4::TOL_E,
            bdr: 1e-8,
            cls: 1e-8,
            rank: 1e-8,
            membership: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("E_NOT_UNIT_SPEED: |Omega_u| = {0}")]
    NotUnitSpeed(f64),
    #[error("E_DEPENDENCE_FAIL: Omega_uu has a component of size {0:e} off the normal")]
    DependenceFail(f64),
    #[error("E_ZERO_KN: normal curvature {0:e} is below tolerance")]
    ZeroNormalCurvature(f64),
    #[error("E_ZERO_TG: geodesic torsion {0:e} is below tolerance")]
    ZeroTorsion(f64),
    #[error("E_DEGENERATE_E: third derivative lies in span{{N, T}} (residual norm {0:e})")]
    DegenerateE(f64),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl GeometryError {
    pub fn code(&self) -> &'static str {
        match self {
            GeometryError::NotUnitSpeed(_) => "E_NOT_UNIT_SPEED",
            GeometryError::DependenceFail(_) => "E_DEPENDENCE_FAIL",
            GeometryError::ZeroNormalCurvature(_) => "E_ZERO_KN",
            GeometryError::ZeroTorsion(_) => "E_ZERO_TG",
            GeometryError::DegenerateE(_) => "E_DEGENERATE_E",
            GeometryError::Eval(e) => e.code(),
        }
    }
}

impl From<JetError> for GeometryError {
    fn from(e: JetError) -> Self {
        GeometryError::Eval(EvalError::Jet(e))
    }
}

impl From<FrameVectorError> for GeometryError {
    fn from(e: FrameVectorError) -> Self {
        match e {
            FrameVectorError::Degenerate(r) => GeometryError::DegenerateE(r),
            FrameVectorError::Jet(j) => j.into(),
        }
    }
}

/// The frame as jets about a base point, plus the surface jet it came from.
#[derive(Debug, Clone)]
pub struct FramePoint {
    pub at: (f64, f64),
    pub omega: Vec4<Jet2>,
    pub t: Vec4<Jet2>,
    pub e: Vec4<Jet2>,
    pub d: Vec4<Jet2>,
    pub n: Vec4<Jet2>,
}

impl FramePoint {
    /// Base-point values in the order `T, E, D, N`.
    pub fn values(&self) -> [Vec4<f64>; 4] {
        [
            self.t.values(),
            self.e.values(),
            self.d.values(),
            self.n.values(),
        ]
    }
}

/// Builds the frame about `at` from jets of shape `(du, dv)`.
///
/// Checks run in order: unit speed, dependence of `Ω_uu` on `N`, nonzero
/// normal curvature, then the construction of `E`. A vanishing normal
/// curvature always makes `E` degenerate, so it is reported first.
pub fn build_frame(
    spec: &SurfaceSpec,
    at: (f64, f64),
    shape: (usize, usize),
    tol: &Tolerances,
) -> Result<FramePoint, GeometryError> {
    let (du, dv) = shape;
    let omega = spec.omega_jet(at, du, dv)?;
    let n_full = spec.normal_jet(at, &omega)?;

    let omega_u = omega.deriv_u();
    let omega_uu = omega_u.deriv_u();
    let omega_uuu = omega_uu.deriv_u();

    let speed = omega_u.values().euclid();
    if (speed - 1.0).abs() > tol.unit {
        return Err(GeometryError::NotUnitSpeed(speed));
    }

    let n0 = n_full.values();
    let acc = omega_uu.values();
    let off_normal = (acc.clone() - n0.scale(&dot(&acc, &n0))).euclid();
    if off_normal > tol.dep {
        return Err(GeometryError::DependenceFail(off_normal));
    }
    let kn0 = dot(&acc, &n0);
    if kn0.abs() < tol.curv {
        return Err(GeometryError::ZeroNormalCurvature(kn0));
    }

    let fd = du.saturating_sub(3);
    let t = omega_u.truncate(fd, dv);
    let n = n_full.truncate(fd, dv);
    let e = gram_schmidt_e_with(&omega_uuu, &n, &t, tol.e)?;
    let d = cross3(&n, &t, &e);
    Ok(FramePoint {
        at,
        omega,
        t,
        e,
        d,
        n,
    })
}

/// Normal curvature, geodesic curvature and geodesic torsion as jets.
#[derive(Debug, Clone)]
pub struct CurvatureJets {
    /// `κ_n = <T_u, N>`
    pub kn: Jet2,
    /// `κ_g = <E_u, D>`
    pub kg: Jet2,
    /// `τ_g = <E_u, N>`
    pub tg: Jet2,
}

pub fn curvatures(fp: &FramePoint, tol: &Tolerances) -> Result<CurvatureJets, GeometryError> {
    let (fd, dv) = fp.t.0[0].shape();
    let cd = fd.saturating_sub(1);
    let t_u = fp.t.deriv_u();
    let e_u = fp.e.deriv_u();
    let n = fp.n.truncate(cd, dv);
    let d = fp.d.truncate(cd, dv);
    let cj = CurvatureJets {
        kn: dot(&t_u, &n),
        kg: dot(&e_u, &d),
        tg: dot(&e_u, &n),
    };
    if cj.kn.value().abs() < tol.curv {
        return Err(GeometryError::ZeroNormalCurvature(cj.kn.value()));
    }
    if cj.tg.value().abs() < tol.curv {
        return Err(GeometryError::ZeroTorsion(cj.tg.value()));
    }
    Ok(cj)
}

/// Euclidean norms at the base point of
/// `T_u - κ_n N`, `E_u - κ_g D - τ_g N`, `D_u + κ_g E`, `N_u + κ_n T + τ_g E`.
pub fn verify_frame_odes(fp: &FramePoint, cj: &CurvatureJets) -> [f64; 4] {
    let [t, e, d, n] = fp.values();
    let du = |v: &Vec4<Jet2>| v.deriv_u().values();
    let (kn, kg, tg) = (cj.kn.value(), cj.kg.value(), cj.tg.value());
    [
        (du(&fp.t) - n.scale(&kn)).euclid(),
        (du(&fp.e) - d.scale(&kg) - n.scale(&tg)).euclid(),
        (du(&fp.d) + e.scale(&kg)).euclid(),
        (du(&fp.n) + t.scale(&kn) + e.scale(&tg)).euclid(),
    ]
}

/// Base-point derivatives of the curvature functions used by the
/// closed-form coefficient and invariant formulas.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CurvatureDerivs {
    /// `κ_n` and its u-derivatives up to fourth order.
    pub kn: [f64; 5],
    pub kn_v: f64,
    /// `τ_g` and its u-derivatives up to fourth order.
    pub tg: [f64; 5],
    pub tg_v: f64,
    /// `κ_g` and its u-derivatives up to second order.
    pub kg: [f64; 3],
    pub kg_v: f64,
}

impl CurvatureDerivs {
    pub fn from_jets(cj: &CurvatureJets) -> Result<Self, JetError> {
        let series = |j: &Jet2, out: &mut [f64]| -> Result<(), JetError> {
            for (i, slot) in out.iter_mut().enumerate() {
                *slot = j.extract(i, 0)?;
            }
            Ok(())
        };
        let mut cd = CurvatureDerivs::default();
        series(&cj.kn, &mut cd.kn)?;
        series(&cj.tg, &mut cd.tg)?;
        series(&cj.kg, &mut cd.kg)?;
        cd.kn_v = cj.kn.extract(0, 1)?;
        cd.tg_v = cj.tg.extract(0, 1)?;
        cd.kg_v = cj.kg.extract(0, 1)?;
        Ok(cd)
    }

    /// Constant curvatures with every derivative zero.
    pub fn constant(kn: f64, kg: f64, tg: f64) -> Self {
        CurvatureDerivs {
            kn: [kn, 0.0, 0.0, 0.0, 0.0],
            tg: [tg, 0.0, 0.0, 0.0, 0.0],
            kg: [kg, 0.0, 0.0],
            ..Default::default()
        }
    }
}
