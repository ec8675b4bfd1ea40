//! Soliton-specific quantities: the residual of the localized induction
//! equation `Ω_v = Ω_u × Ω_uu × Ω_uuu`, the coefficients of the frame's
//! v-evolution, and the compatibility identities they imply.

use crate::expr::EvalError;
use crate::frame::{CurvatureDerivs, FramePoint, GeometryError, Tolerances};
use crate::linalg4::{cross3, Vec4};
use crate::surface::SurfaceSpec;

/// Smallest jet shape that carries `Ω_uuu` and `Ω_v`.
const RESIDUAL_SHAPE: (usize, usize) = (3, 1);

/// `Ω_v - Ω_u × Ω_uu × Ω_uuu` at the base point.
pub fn bdr_residual(spec: &SurfaceSpec, at: (f64, f64)) -> Result<Vec4<f64>, EvalError> {
    let omega = spec.omega_jet(at, RESIDUAL_SHAPE.0, RESIDUAL_SHAPE.1)?;
    let o_u = omega.deriv_u();
    let o_uu = o_u.deriv_u();
    let o_uuu = o_uu.deriv_u();
    let rhs = cross3(&o_u.values(), &o_uu.values(), &o_uuu.values());
    Ok(omega.deriv_v().values() - rhs)
}

/// Coefficients of the skew matrix driving `∂_v {T, E, D, N}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coeffs {
    pub a12: f64,
    pub a13: f64,
    pub a14: f64,
    pub a23: f64,
    pub a24: f64,
    pub a34: f64,
    /// The second expression for `a34`; absent when `κ_g` vanishes.
    pub a34_alt: Option<f64>,
}

impl Coeffs {
    /// Rows give `T_v, E_v, D_v, N_v` in the basis `T, E, D, N`.
    pub fn matrix(&self) -> [[f64; 4]; 4] {
        let Coeffs {
            a12,
            a13,
            a14,
            a23,
            a24,
            a34,
            ..
        } = *self;
        [
            [0.0, a12, a13, a14],
            [-a12, 0.0, a23, a24],
            [-a13, -a23, 0.0, a34],
            [-a14, -a24, -a34, 0.0],
        ]
    }
}

/// The bracket shared by `a23`, `c22^1`, `l12`, `γ`, `h22^1`, `H_E` and `Δ`.
pub(crate) fn third_order_bracket(cd: &CurvatureDerivs) -> f64 {
    let [kn, kn_u, kn_uu, kn_uuu, _] = cd.kn;
    let [tg, tg_u, tg_uu, tg_uuu, _] = cd.tg;
    let [kg, kg_u, _] = cd.kg;
    -3.0 * kn.powi(3) * tg * kg * kg_u + kn.powi(5) * tg_u + 2.0 * kn.powi(4) * tg * kn_u
        - 2.0 * tg * kn_u.powi(3)
        - (kn * kg).powi(2) * (3.0 * kn * tg_u + 5.0 * tg * kn_u)
        + 2.0 * kn * kn_u * (kn_u * tg_u + 2.0 * tg * kn_uu)
        + kn.powi(3) * tg_uuu
        + kn.powi(2) * (5.0 * kn_u * tg_uu + 6.0 * tg_u * kn_uu + 2.0 * tg * kn_uuu)
}

/// `a34`'s bracket: `(κ_n τ_g κ_g² - 4κ_n'τ_g' - κ_n τ_g'')κ_n - 2(κ_n'² + κ_n κ_n'')τ_g`.
pub(crate) fn second_order_bracket(cd: &CurvatureDerivs) -> f64 {
    let [kn, kn_u, kn_uu, _, _] = cd.kn;
    let [tg, tg_u, tg_uu, _, _] = cd.tg;
    let kg = cd.kg[0];
    (kn * tg * kg * kg - 4.0 * kn_u * tg_u - kn * tg_uu) * kn
        - 2.0 * (kn_u * kn_u + kn * kn_uu) * tg
}

pub(crate) fn require_nonzero(cd: &CurvatureDerivs, tol: &Tolerances) -> Result<(), GeometryError> {
    if cd.kn[0].abs() < tol.curv {
        return Err(GeometryError::ZeroNormalCurvature(cd.kn[0]));
    }
    if cd.tg[0].abs() < tol.curv {
        return Err(GeometryError::ZeroTorsion(cd.tg[0]));
    }
    Ok(())
}

pub fn coeffs_a(cd: &CurvatureDerivs, tol: &Tolerances) -> Result<Coeffs, GeometryError> {
    require_nonzero(cd, tol)?;
    let [kn, kn_u, kn_uu, _, _] = cd.kn;
    let [tg, tg_u, tg_uu, _, _] = cd.tg;
    let [kg, kg_u, kg_uu] = cd.kg;
    let tg_v = cd.tg_v;

    let a12 = -kn * kn * tg * kg;
    let a13 = kn * (2.0 * tg * kn_u + kn * tg_u);
    let a23 = -third_order_bracket(cd) / (tg * kn * kn);
    let a24 = 2.0 * kn * kg * tg_u + tg * (kn * kg_u + 4.0 * kg * kn_u);
    let a34 = second_order_bracket(cd) / kn;
    let a34_alt = (kg.abs() >= tol.curv).then(|| {
        (-tg_v
            + (3.0 * kn * tg_u + 5.0 * tg * kn_u) * kg_u
            + kn * tg * kg_uu
            + (6.0 * kn_u * tg_u + 2.0 * kn * tg_uu + (kn.powi(3) + 4.0 * kn_uu) * tg) * kg)
            / kg
    });
    Ok(Coeffs {
        a12,
        a13,
        a14: 0.0,
        a23,
        a24,
        a34,
        a34_alt,
    })
}

/// A sum that remembers its largest summand, for scale-aware zero tests.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Terms {
    pub sum: f64,
    pub scale: f64,
}

impl Terms {
    pub fn of(terms: &[f64]) -> Self {
        Terms {
            sum: terms.iter().sum(),
            scale: terms.iter().fold(0.0, |m, t| m.max(t.abs())),
        }
    }

    /// `|sum| / scale`, or `|sum|` when every summand is zero.
    pub fn normalized(&self) -> f64 {
        if self.scale > 0.0 {
            self.sum.abs() / self.scale
        } else {
            self.sum.abs()
        }
    }
}

/// Left-hand sides of the three compatibility identities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Compatibility {
    /// `(κ_n τ_g)² κ_g + (κ_n)_v`
    pub r1: Terms,
    /// Agreement of the two `a34` expressions, cleared of denominators.
    pub r3: Terms,
    /// The identity pairing `(κ_g)_v` with fourth u-derivatives.
    pub r2: Terms,
}

impl Compatibility {
    pub fn absolute(&self) -> [f64; 3] {
        [self.r1.sum, self.r3.sum, self.r2.sum]
    }

    pub fn normalized(&self) -> [f64; 3] {
        [
            self.r1.normalized(),
            self.r3.normalized(),
            self.r2.normalized(),
        ]
    }
}

pub fn compatibility_residuals(cd: &CurvatureDerivs) -> Compatibility {
    let [kn, kn_u, kn_uu, kn_uuu, kn_uuuu] = cd.kn;
    let [tg, tg_u, tg_uu, tg_uuu, tg_uuuu] = cd.tg;
    let [kg, kg_u, kg_uu] = cd.kg;
    let (kn_v, tg_v, kg_v) = (cd.kn_v, cd.tg_v, cd.kg_v);

    let r1 = Terms::of(&[(kn * tg).powi(2) * kg, kn_v]);

    let r3 = Terms::of(&[
        (kn * tg * kg * kg - 10.0 * kn_u * tg_u - 3.0 * kn * tg_uu) * kn * kg,
        -(2.0 * kn_u * kn_u + kn * (kn.powi(3) + 6.0 * kn_uu)) * tg * kg,
        (tg_v - (3.0 * kn * tg_u + 5.0 * tg * kn_u) * kg_u - kn * tg * kg_uu) * kn,
    ]);

    let r2 = Terms::of(&[
        kn.powi(3)
            * tg
            * kg
            * (kg_u * (6.0 * kn * tg_u + 13.0 * tg * kn_u) + 3.0 * kn * tg * kg_uu),
        -(kn * tg).powi(3) * (4.0 * kn_u * tg_u + kn * tg_uu),
        -2.0 * kn * kn * tg.powi(4) * (kn_u * kn_u + kn * kn_uu),
        kn.powi(3)
            * kg
            * kg
            * (kn * tg.powi(4) - 3.0 * kn * tg_u * tg_u
                + 3.0 * (kn_u * tg_u + kn * tg_uu) * tg
                + 5.0 * tg * tg * kn_uu),
        kn * kn
            * tg_u
            * (kn.powi(4) * tg_u
                + 2.0 * kn_u * kn_u * tg_u
                + kn * (5.0 * kn_u * tg_uu + 6.0 * tg_u * kn_uu)
                + kn * kn * tg_uuu),
        -kn * tg
            * (3.0 * kn.powi(4) * kn_u * tg_u - 2.0 * kn_u.powi(3) * tg_u
                + 2.0 * kn * kn_u * (kn_u * tg_uu + 2.0 * tg_u * kn_uu)
                + kn * kn * (11.0 * kn_uu * tg_uu + 6.0 * kn_u * tg_uuu + 6.0 * tg_u * kn_uuu)
                + kn.powi(5) * tg_uu
                + kn.powi(3) * tg_uuuu),
        -tg * tg
            * (4.0 * kn_u.powi(4)
                + kn.powi(4) * (4.0 * kn_u * kn_u - 3.0 * kg_u * kg_u)
                + 2.0 * kn.powi(5) * kn_uu
                - 10.0 * kn * kn_u * kn_u * kn_uu
                + 4.0 * kn * kn * (kn_uu * kn_uu + kn_u * kn_uuu)
                + kn.powi(3) * (kg_v + 2.0 * kn_uuuu)),
    ]);

    Compatibility { r1, r3, r2 }
}

/// Euclidean norms at the base point of `X_v - Σ a_XY Y` for `X = T, E, D, N`.
pub fn verify_v_evolution(fp: &FramePoint, c: &Coeffs) -> [f64; 4] {
    let basis = fp.values();
    let derived = [&fp.t, &fp.e, &fp.d, &fp.n].map(|x| x.deriv_v().values());
    let m = c.matrix();
    let mut out = [0.0; 4];
    for (row, (lhs, slot)) in derived.into_iter().zip(out.iter_mut()).enumerate() {
        let rhs = basis
            .iter()
            .zip(m[row])
            .fold(Vec4([0.0; 4]), |acc, (b, a)| acc + b.scale(&a));
        *slot = (lhs - rhs).euclid();
    }
    out
}

/// `|Ω_v - κ_n² τ_g D|` at the base point.
pub fn omega_v_identity(fp: &FramePoint, cd: &CurvatureDerivs) -> f64 {
    let speed = cd.kn[0] * cd.kn[0] * cd.tg[0];
    (fp.omega.deriv_v().values() - fp.d.values().scale(&speed)).euclid()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::frame::{build_frame, curvatures};
    use crate::surface::NormalSource;

    const R2: f64 = std::f64::consts::SQRT_2;

    fn spec(omega: [&str; 4], f: &str) -> SurfaceSpec {
        SurfaceSpec::new(
            omega.map(|s| parse(s).unwrap()),
            NormalSource::implicit(parse(f).unwrap()),
        )
    }

    fn example() -> SurfaceSpec {
        spec(
            [
                "(cos(u)-u)/2",
                "(cos(u)+u)/2",
                "sin(u)/sqrt(2)",
                "v/(2*sqrt(2))",
            ],
            "(x+y)^2+2*z^2-1",
        )
    }

    #[test]
    fn example_is_a_solution() {
        for &at in &[(0.0, 0.0), (2.0, 0.5), (6.0, 1.0)] {
            assert!(bdr_residual(&example(), at).unwrap().euclid() < 1e-12);
        }
    }

    #[test]
    fn helix_is_not_a_solution() {
        let helix = spec(["3*cos(u/5)", "3*sin(u/5)", "4*u/5", "v"], "x^2+y^2-9");
        let r = bdr_residual(&helix, (0.0, 0.0)).unwrap();
        assert!((r.0[3] - (1.0 + 36.0 / 15625.0)).abs() < 1e-12);
    }

    #[test]
    fn static_curve_residual() {
        let static_helix = spec(["3*cos(u/5)", "3*sin(u/5)", "4*u/5", "0"], "x^2+y^2-9");
        let r = bdr_residual(&static_helix, (0.0, 0.0)).unwrap();
        assert!((r.0[3] - 36.0 / 15625.0).abs() < 1e-12);
    }

    #[test]
    fn example_coefficients() {
        let cd = CurvatureDerivs::constant(-1.0 / R2, 0.0, 1.0 / R2);
        let c = coeffs_a(&cd, &Tolerances::default()).unwrap();
        for a in [c.a12, c.a13, c.a14, c.a23, c.a24, c.a34] {
            assert!(a.abs() < 1e-15);
        }
        assert_eq!(c.a34_alt, None);
    }

    #[test]
    fn constant_curvature_coefficients() {
        let (kn, kg, tg) = (0.7, -1.3, 0.4);
        let c = coeffs_a(
            &CurvatureDerivs::constant(kn, kg, tg),
            &Tolerances::default(),
        )
        .unwrap();
        assert!((c.a34 - kn * tg * kg * kg).abs() < 1e-15);
        assert_eq!(c.a13, 0.0);
        assert!((c.a12 + kn * kn * tg * kg).abs() < 1e-15);
        let m = c.matrix();
        for (i, row) in m.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert_eq!(*x, -m[j][i]);
            }
        }
    }

    #[test]
    fn zero_curvatures_rejected() {
        let tol = Tolerances::default();
        let err = coeffs_a(&CurvatureDerivs::constant(0.0, 1.0, 1.0), &tol).unwrap_err();
        assert_eq!(err.code(), "E_ZERO_KN");
        let err = coeffs_a(&CurvatureDerivs::constant(1.0, 1.0, 0.0), &tol).unwrap_err();
        assert_eq!(err.code(), "E_ZERO_TG");
    }

    #[test]
    fn first_identity_reduces_to_kn_v() {
        let mut cd = CurvatureDerivs::constant(0.3, 0.0, 0.9);
        cd.kn_v = 1.0;
        assert_eq!(compatibility_residuals(&cd).r1.sum, 1.0);
    }

    #[test]
    fn example_frame_evolution() {
        let tol = Tolerances::default();
        let fp = build_frame(&example(), (1.0, 0.5), (8, 1), &tol).unwrap();
        let cd = CurvatureDerivs::from_jets(&curvatures(&fp, &tol).unwrap()).unwrap();
        let mut c = coeffs_a(&cd, &tol).unwrap();
        assert!(verify_v_evolution(&fp, &c).iter().all(|r| *r < 1e-9));
        assert!(omega_v_identity(&fp, &cd) < 1e-12);
        assert!(compatibility_residuals(&cd)
            .absolute()
            .iter()
            .all(|r| r.abs() < 1e-9));
        c.a12 += 1.0;
        assert!((verify_v_evolution(&fp, &c)[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn terms_normalization() {
        let t = Terms::of(&[1e6, -1e6, 1e-3]);
        assert!((t.normalized() - 1e-9).abs() < 1e-15);
        assert_eq!(Terms::of(&[0.0, 0.0]).normalized(), 0.0);
    }
}
