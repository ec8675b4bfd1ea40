//! Invariants of a soliton surface computed from the curvature derivatives
//! at a point: fundamental forms, the `γ` map with its invariants `k` and
//! `h`, shape operators, Gaussian and mean curvature, Gaussian torsion, the
//! curvature ellipse and its classification, and the Wintgen gap.
//!
//! Most quantities are computed along two or three independent routes: the
//! general determinant/trace definitions, the closed forms in the curvature
//! derivatives, and forms written through the evolution coefficients. The
//! last family presumes the surface is a soliton.

use serde::Serialize;

use crate::frame::{CurvatureDerivs, GeometryError, Tolerances};
use crate::soliton::{
    coeffs_a, require_nonzero, second_order_bracket, third_order_bracket, Coeffs,
};

/// `|a - b| / max(1, |a|, |b|)`.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalCoeffs {
    pub c11_1: f64,
    pub c11_2: f64,
    pub c12_1: f64,
    pub c12_2: f64,
    pub c22_1: f64,
    pub c22_2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FormData {
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
    /// Area element, always the non-negative root.
    pub w: f64,
    pub c: NormalCoeffs,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub l11: f64,
    pub l12: f64,
    pub l22: f64,
    /// `κ_n² τ_g < 0`: the closed forms carry the opposite sign of `W`.
    pub negative_metric: bool,
}

pub fn fundamental_forms(
    cd: &CurvatureDerivs,
    tol: &Tolerances,
) -> Result<FormData, GeometryError> {
    require_nonzero(cd, tol)?;
    let [kn, kn_u, kn_uu, kn_uuu, _] = cd.kn;
    let [tg, tg_u, tg_uu, tg_uuu, _] = cd.tg;
    let [kg, kg_u, _] = cd.kg;

    let (g11, g12, g22) = (1.0, 0.0, kn.powi(4) * tg * tg);
    let w = (g11 * g22 - g12 * g12).sqrt();

    let c = NormalCoeffs {
        c11_1: 0.0,
        c11_2: kn,
        c12_1: -kn * kn * tg * kg,
        c12_2: 0.0,
        c22_1: kn
            * kn
            * tg
            * (-3.0 * kn * kg * kg_u - kg * kg / tg * (3.0 * kn * tg_u + 5.0 * tg * kn_u)
                + 2.0 * kn_uuu
                + 1.0 / (kn * kn * tg)
                    * (kn.powi(5) * tg_u + 2.0 * kn.powi(4) * tg * kn_u - 2.0 * tg * kn_u.powi(3)
                        + 2.0 * kn * kn_u * (kn_u * tg_u + 2.0 * tg * kn_uu)
                        + kn * kn * (5.0 * kn_u * tg_uu + 6.0 * tg_u * kn_uu)
                        + kn.powi(3) * tg_uuu)),
        c22_2: kn
            * kn
            * tg
            * (kn * tg * kg * kg
                - 4.0 * kn_u * tg_u
                - kn * tg_uu
                - 2.0 * tg / kn * (kn_u * kn_u + kn * kn_uu)),
    };

    let d1 = c.c11_1 * c.c12_2 - c.c12_1 * c.c11_2;
    let d2 = c.c11_1 * c.c22_2 - c.c22_1 * c.c11_2;
    let d3 = c.c12_1 * c.c22_2 - c.c22_1 * c.c12_2;

    Ok(FormData {
        g11,
        g12,
        g22,
        w,
        c,
        d1,
        d2,
        d3,
        l11: 2.0 * d1 / w,
        l12: d2 / w,
        l22: 2.0 * d3 / w,
        negative_metric: kn * kn * tg < 0.0,
    })
}

/// The bracket `-(κ_n κ_g)² τ_g + 2τ_g κ_n'² + κ_n² τ_g'' + 2κ_n(2κ_n'τ_g' + τ_g κ_n'')`.
fn l22_bracket(cd: &CurvatureDerivs) -> f64 {
    let [kn, kn_u, kn_uu, _, _] = cd.kn;
    let [tg, tg_u, tg_uu, _, _] = cd.tg;
    let kg = cd.kg[0];
    -kn * kn * tg * kg * kg
        + 2.0 * tg * kn_u * kn_u
        + kn * kn * tg_uu
        + 2.0 * kn * (2.0 * kn_u * tg_u + tg * kn_uu)
}

/// Bracket shared by `h` and `K_N`.
fn h_bracket(cd: &CurvatureDerivs) -> f64 {
    let [kn, kn_u, kn_uu, _, _] = cd.kn;
    let [tg, tg_u, tg_uu, _, _] = cd.tg;
    let kg = cd.kg[0];
    (-(kn * kg).powi(2) + kn.powi(4) + 2.0 * kn_u * kn_u + 2.0 * kn * kn_uu) * tg
        + (4.0 * kn_u * tg_u + kn * tg_uu) * kn
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaMap {
    /// Rows `(γ_1^1, γ_1^2)` and `(γ_2^1, γ_2^2)`.
    pub gamma: [[f64; 2]; 2],
    /// `det γ`
    pub k: f64,
    /// `-tr γ / 2`
    pub h: f64,
    pub k_closed: f64,
    pub h_closed: f64,
    /// Closed-form entries of `γ`, same layout as `gamma`.
    pub gamma_closed: [[f64; 2]; 2],
}

pub fn gamma_map(forms: &FormData, cd: &CurvatureDerivs) -> GammaMap {
    let FormData {
        g11,
        g12,
        g22,
        l11,
        l12,
        l22,
        ..
    } = *forms;
    let den = g11 * g22 - g12 * g12;
    let gamma = [
        [(g12 * l12 - g22 * l11) / den, (g12 * l11 - g11 * l12) / den],
        [(g12 * l22 - g22 * l12) / den, (g12 * l12 - g11 * l22) / den],
    ];
    let k = gamma[0][0] * gamma[1][1] - gamma[0][1] * gamma[1][0];
    let h = -(gamma[0][0] + gamma[1][1]) / 2.0;

    let [kn, kn_u, kn_uu, kn_uuu, _] = cd.kn;
    let [tg, tg_u, tg_uu, tg_uuu, _] = cd.tg;
    let [kg, kg_u, _] = cd.kg;
    let big = third_order_bracket(cd);
    let gamma_closed = [
        [-2.0 * kn * kg, big / (kn.powi(5) * tg.powi(3))],
        [
            big / (kn * tg),
            -2.0 * kg / (kn.powi(3) * tg) * l22_bracket(cd),
        ],
    ];

    let s = kn.powi(5) * tg_u + 2.0 * kn.powi(4) * tg * kn_u - 2.0 * tg * kn_u.powi(3)
        + 2.0 * kn * kn_u * (kn_u * tg_u + 2.0 * tg * kn_uu)
        + kn.powi(3) * tg_uuu
        + kn * kn * (5.0 * kn_u * tg_uu + 6.0 * tg_u * kn_uu + 2.0 * tg * kn_uuu);
    let k_closed = -1.0 / (kn.powi(6) * tg.powi(4))
        * (6.0 * kn.powi(5) * tg * kg.powi(3) * kg_u * (3.0 * kn * tg_u + 5.0 * tg * kn_u)
            + (kn * kg).powi(4)
                * (4.0 * kn * kn * tg.powi(4)
                    + 9.0 * (kn * tg_u).powi(2)
                    + 30.0 * kn * tg * kn_u * tg_u
                    + 25.0 * (tg * kn_u).powi(2))
            - 6.0 * kn.powi(3) * tg * kg * kg_u * s
            + s * s
            - (kn * kg).powi(2)
                * (4.0 * (kn * tg).powi(3) * (4.0 * kn_u * tg_u + kn * tg_uu)
                    + 8.0 * (kn * tg * tg).powi(2) * (kn_u * kn_u + kn * kn_uu)
                    + 6.0
                        * kn
                        * kn
                        * tg_u
                        * (kn.powi(4) * tg_u
                            + 2.0 * kn_u * kn_u * tg_u
                            + kn * kn * tg_uuu
                            + kn * (5.0 * kn_u * tg_uu + 6.0 * tg_u * kn_uu))
                    + tg * tg
                        * (-20.0 * kn_u.powi(4)
                            - kn.powi(4) * (9.0 * kg_u * kg_u - 20.0 * kn_u * kn_u)
                            + 40.0 * kn * kn_u * kn_u * kn_uu
                            + 20.0 * kn * kn * kn_u * kn_uuu)
                    + 2.0
                        * kn
                        * tg
                        * (11.0 * kn.powi(4) * kn_u * tg_u
                            + 4.0 * kn_u.powi(3) * tg_u
                            + kn * kn_u * (25.0 * kn_u * tg_uu + 42.0 * tg_u * kn_uu)
                            + kn * kn * (5.0 * kn_u * tg_uuu + 6.0 * tg_u * kn_uuu))));
    let h_closed = kg * h_bracket(cd) / (kn.powi(3) * tg);

    GammaMap {
        gamma,
        k,
        h,
        k_closed,
        h_closed,
        gamma_closed,
    }
}

/// Gaussian curvature, mean curvature vector and Gaussian torsion by one route.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureTriple {
    pub k: f64,
    pub h_e: f64,
    pub h_n: f64,
    pub k_n: f64,
}

impl CurvatureTriple {
    pub fn max_rel_diff(&self, other: &CurvatureTriple) -> f64 {
        [
            rel_diff(self.k, other.k),
            rel_diff(self.h_e, other.h_e),
            rel_diff(self.h_n, other.h_n),
            rel_diff(self.k_n, other.k_n),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Coefficients `h_ij^α` of the second fundamental form in the normal frame `{E, N}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShapeCoeffs {
    pub h11_1: f64,
    pub h11_2: f64,
    pub h12_1: f64,
    pub h12_2: f64,
    pub h22_1: f64,
    pub h22_2: f64,
}

impl ShapeCoeffs {
    pub fn max_abs(&self) -> f64 {
        [
            self.h11_1, self.h11_2, self.h12_1, self.h12_2, self.h22_1, self.h22_2,
        ]
        .into_iter()
        .fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn a_e(&self) -> [[f64; 2]; 2] {
        [[self.h11_1, self.h12_1], [self.h12_1, self.h22_1]]
    }

    pub fn a_n(&self) -> [[f64; 2]; 2] {
        [[self.h11_2, self.h12_2], [self.h12_2, self.h22_2]]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShapeReport {
    pub h: ShapeCoeffs,
    /// Determinant and trace route; the primary values.
    pub primary: CurvatureTriple,
    pub closed: CurvatureTriple,
    /// Through the evolution coefficients; exact only on solutions.
    pub aform: CurvatureTriple,
    pub closed_discrepancy: f64,
    pub aform_discrepancy: f64,
    /// Square of the largest shape coefficient; the unit in which `K` is judged zero.
    pub k_scale: f64,
}

pub fn shape_and_curvatures(forms: &FormData, cd: &CurvatureDerivs, c: &Coeffs) -> ShapeReport {
    let FormData {
        g11,
        g12,
        g22: _,
        w,
        c: cc,
        ..
    } = *forms;
    let h = ShapeCoeffs {
        h11_1: cc.c11_1 / g11,
        h11_2: cc.c11_2 / g11,
        h12_1: (cc.c12_1 - g12 / g11 * cc.c11_1) / w,
        h12_2: (cc.c12_2 - g12 / g11 * cc.c11_2) / w,
        h22_1: (g11 * cc.c22_1 - 2.0 * g12 * cc.c12_1 + g12 * g12 / g11 * cc.c11_1) / (w * w),
        h22_2: (g11 * cc.c22_2 - 2.0 * g12 * cc.c12_2 + g12 * g12 / g11 * cc.c11_2) / (w * w),
    };
    let k_sum = h.h11_1 * h.h22_1 - h.h12_1 * h.h12_1 + h.h11_2 * h.h22_2 - h.h12_2 * h.h12_2;
    let k_n = (forms.g11 * (cc.c12_1 * cc.c22_2 - cc.c12_2 * cc.c22_1)
        - forms.g12 * (cc.c11_1 * cc.c22_2 - cc.c11_2 * cc.c22_1)
        + forms.g22 * (cc.c11_1 * cc.c12_2 - cc.c11_2 * cc.c12_1))
        / w.powi(3);
    let primary = CurvatureTriple {
        k: k_sum,
        h_e: (h.h11_1 + h.h22_1) / 2.0,
        h_n: (h.h11_2 + h.h22_2) / 2.0,
        k_n,
    };

    let [kn, kn_u, kn_uu, _, _] = cd.kn;
    let [tg, tg_u, tg_uu, _, _] = cd.tg;
    let kg = cd.kg[0];
    let w_signed = kn * kn * tg;
    let closed = CurvatureTriple {
        k: -(kn * (4.0 * kn_u * tg_u + kn * tg_uu) + 2.0 * tg * (kn_u * kn_u + kn * kn_uu))
            / (kn * kn * tg),
        h_e: third_order_bracket(cd) / (2.0 * w_signed * w_signed),
        h_n: kn
            * tg
            * ((kn * kg).powi(2) * tg - kn * (4.0 * kn_u * tg_u + kn * tg_uu)
                + tg * (kn.powi(4) - 2.0 * kn_u * kn_u - 2.0 * kn * kn_uu))
            / (2.0 * w_signed * w_signed),
        k_n: kg / (kn.powi(3) * tg) * h_bracket(cd),
    };
    let aform = CurvatureTriple {
        k: (c.a34 - kn * tg * kg * kg) / (kn * tg),
        h_e: -c.a23 * kn * kn * tg / (2.0 * w_signed * w_signed),
        h_n: kn * tg * (c.a34 * kn + kn.powi(4) * tg) / (2.0 * w_signed * w_signed),
        k_n: (kn.powi(3) * tg * kg - c.a34 * kg) / (kn * kn * tg),
    };

    ShapeReport {
        h,
        closed_discrepancy: primary.max_rel_diff(&closed),
        aform_discrepancy: primary.max_rel_diff(&aform),
        primary,
        closed,
        aform,
        k_scale: h.max_abs().powi(2),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PointClass {
    Hyperbolic,
    Elliptic,
    ParabolicNonDegenerate,
    InflectionImaginary,
    InflectionReal,
    InflectionFlat,
}

impl PointClass {
    pub const ALL: [PointClass; 6] = [
        PointClass::Hyperbolic,
        PointClass::Elliptic,
        PointClass::ParabolicNonDegenerate,
        PointClass::InflectionImaginary,
        PointClass::InflectionReal,
        PointClass::InflectionFlat,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PointClass::Hyperbolic => "Hyperbolic",
            PointClass::Elliptic => "Elliptic",
            PointClass::ParabolicNonDegenerate => "ParabolicNonDegenerate",
            PointClass::InflectionImaginary => "InflectionImaginary",
            PointClass::InflectionReal => "InflectionReal",
            PointClass::InflectionFlat => "InflectionFlat",
        }
    }
}

fn det4(m: [[f64; 4]; 4]) -> f64 {
    let det3 = |r: [usize; 3], c: [usize; 3]| {
        m[r[0]][c[0]] * (m[r[1]][c[1]] * m[r[2]][c[2]] - m[r[1]][c[2]] * m[r[2]][c[1]])
            - m[r[0]][c[1]] * (m[r[1]][c[0]] * m[r[2]][c[2]] - m[r[1]][c[2]] * m[r[2]][c[0]])
            + m[r[0]][c[2]] * (m[r[1]][c[0]] * m[r[2]][c[1]] - m[r[1]][c[1]] * m[r[2]][c[0]])
    };
    (0..4)
        .map(|k| {
            let cols: Vec<usize> = (0..4).filter(|&c| c != k).collect();
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * m[0][k] * det3([1, 2, 3], [cols[0], cols[1], cols[2]])
        })
        .sum()
}

/// Rank of the 2×3 matrix with rows `a` and `b`, using a relative
/// singular-value threshold.
pub fn rank_2x3(a: [f64; 3], b: [f64; 3], rel_tol: f64) -> u8 {
    let frob2: f64 = a.iter().chain(&b).map(|x| x * x).sum();
    let cross = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    let area = cross.iter().map(|x| x * x).sum::<f64>().sqrt();
    let disc = (frob2 * frob2 - 4.0 * area * area).max(0.0).sqrt();
    let s_max = ((frob2 + disc) / 2.0).sqrt();
    if s_max == 0.0 {
        return 0;
    }
    let s_min = area / s_max;
    if s_min <= rel_tol * s_max {
        1
    } else {
        2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EllipseReport {
    /// Quarter-determinant of the 4×4 matrix of shape coefficients.
    pub delta: f64,
    pub delta_closed: f64,
    pub delta_aform: f64,
    /// Fourth power of the largest shape coefficient; the unit in which `delta` is judged zero.
    pub delta_scale: f64,
    pub rank_a: u8,
    pub class: PointClass,
}

/// Divides by `scale` when it is positive.
fn normalize(x: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        x / scale
    } else {
        x
    }
}

pub fn ellipse_and_classify(
    shape: &ShapeReport,
    c: &Coeffs,
    cd: &CurvatureDerivs,
    tol: &Tolerances,
) -> EllipseReport {
    let h = &shape.h;
    let m = [
        [h.h11_1, 2.0 * h.h12_1, h.h22_1, 0.0],
        [h.h11_2, 2.0 * h.h12_2, h.h22_2, 0.0],
        [0.0, h.h11_1, 2.0 * h.h12_1, h.h22_1],
        [0.0, h.h11_2, 2.0 * h.h12_2, h.h22_2],
    ];
    let delta = det4(m) / 4.0;

    let [kn, _, _, _, _] = cd.kn;
    let tg = cd.tg[0];
    let kg = cd.kg[0];
    let big = third_order_bracket(cd);
    let den = 4.0 * kn.powi(7) * tg.powi(4);
    let delta_closed = (-4.0 * kn.powi(5) * tg.powi(3) * kg * kg * second_order_bracket(cd)
        - kn * big * big)
        / den;
    let delta_scale = shape.k_scale * shape.k_scale;
    let delta_aform =
        -(4.0 * c.a34 * kn * tg * kg * kg + c.a23 * c.a23) / (4.0 * (kn * tg).powi(2));

    let rank_a = rank_2x3(
        [h.h11_1, h.h12_1, h.h22_1],
        [h.h11_2, h.h12_2, h.h22_2],
        tol.rank,
    );
    let d = normalize(delta, delta_scale);
    let k = normalize(shape.primary.k, shape.k_scale);
    let class = if d < -tol.cls {
        PointClass::Hyperbolic
    } else if d > tol.cls {
        PointClass::Elliptic
    } else if k > tol.cls {
        PointClass::InflectionImaginary
    } else if k < -tol.cls {
        if rank_a == 2 {
            PointClass::ParabolicNonDegenerate
        } else {
            PointClass::InflectionReal
        }
    } else {
        PointClass::InflectionFlat
    };
    EllipseReport {
        delta,
        delta_closed,
        delta_aform,
        delta_scale,
        rank_a,
        class,
    }
}

/// Points of the curvature ellipse in `(E, N)` coordinates at the given angles.
pub fn ellipse_sample(h: &ShapeCoeffs, thetas: &[f64]) -> Vec<(f64, f64)> {
    thetas
        .iter()
        .map(|&th| {
            let (s, c) = (2.0 * th).sin_cos();
            let x = (h.h11_1 + h.h22_1) / 2.0 + (h.h11_1 - h.h22_1) / 2.0 * c + h.h12_1 * s;
            let y = (h.h11_2 + h.h22_2) / 2.0 + (h.h11_2 - h.h22_2) / 2.0 * c + h.h12_2 * s;
            (x, y)
        })
        .collect()
}

/// `n` equally spaced angles on `[0, 2π)`.
pub fn full_turn(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| std::f64::consts::TAU * i as f64 / n as f64)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WintgenReport {
    /// `|H|² - K - |K_N|`
    pub gap: f64,
    pub ideal: bool,
    /// `(|a23|, |a34 - κ_n² τ_g (κ_n - 2κ_g)|)`
    pub condition: [f64; 2],
    /// As `condition`, with `κ_n - 2κ_g` replaced by `κ_n + 2κ_g` when `K_N < 0`.
    pub condition_signed: [f64; 2],
    /// The gap written through the evolution coefficients.
    pub gap_aform: f64,
}

pub fn wintgen(
    shape: &ShapeReport,
    c: &Coeffs,
    cd: &CurvatureDerivs,
    tol: &Tolerances,
) -> WintgenReport {
    let p = &shape.primary;
    let gap = p.h_e * p.h_e + p.h_n * p.h_n - p.k - p.k_n.abs();
    let kn = cd.kn[0];
    let tg = cd.tg[0];
    let kg = cd.kg[0];
    let base = kn * kn * tg;
    let condition = [c.a23.abs(), (c.a34 - base * (kn - 2.0 * kg)).abs()];
    let branch = if shape.closed.k_n >= 0.0 {
        kn - 2.0 * kg
    } else {
        kn + 2.0 * kg
    };
    let residual = c.a34 - base * branch;
    let condition_signed = [c.a23.abs(), residual.abs()];
    let gap_aform = (c.a23 * c.a23 + residual * residual) / (4.0 * base * base);
    WintgenReport {
        gap,
        ideal: gap < tol.cls,
        condition,
        condition_signed,
        gap_aform,
    }
}

/// Everything computable from the curvature derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointReport {
    pub coeffs: CoeffsReport,
    pub forms: FormData,
    pub gamma: GammaMap,
    pub shape: ShapeReport,
    pub ellipse: EllipseReport,
    pub wintgen: WintgenReport,
}

/// Serializable mirror of [`Coeffs`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoeffsReport {
    pub a12: f64,
    pub a13: f64,
    pub a14: f64,
    pub a23: f64,
    pub a24: f64,
    pub a34: f64,
    pub a34_alt: Option<f64>,
}

impl From<Coeffs> for CoeffsReport {
    fn from(c: Coeffs) -> Self {
        let Coeffs {
            a12,
            a13,
            a14,
            a23,
            a24,
            a34,
            a34_alt,
        } = c;
        CoeffsReport {
            a12,
            a13,
            a14,
            a23,
            a24,
            a34,
            a34_alt,
        }
    }
}

pub fn analyze(cd: &CurvatureDerivs, tol: &Tolerances) -> Result<PointReport, GeometryError> {
    let c = coeffs_a(cd, tol)?;
    let forms = fundamental_forms(cd, tol)?;
    let gamma = gamma_map(&forms, cd);
    let shape = shape_and_curvatures(&forms, cd, &c);
    let ellipse = ellipse_and_classify(&shape, &c, cd, tol);
    let wintgen = wintgen(&shape, &c, cd, tol);
    Ok(PointReport {
        coeffs: c.into(),
        forms,
        gamma,
        shape,
        ellipse,
        wintgen,
    })
}
