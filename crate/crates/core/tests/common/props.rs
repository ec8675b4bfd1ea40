//! Randomized suites shared by the property tests and the acceptance gate.
//! Each runs `cases` proptest cases and reports the first minimal failure.

use ed2::frame::{
    build_frame, curvatures, verify_frame_odes, CurvatureDerivs, GeometryError, Tolerances,
};
use ed2::invariants::{analyze, PointClass};
use ed2::linalg4::{cross3, dot, Vec4};
use ed2::surface::SurfaceSpec;
use ed2::taylor::Jet2;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use super::fixture;

pub const CASES: u32 = 256;

/// Fixtures whose valid points the frame and Wintgen suites sample.
pub const VALID_FIXTURES: [&str; 4] = ["example", "helix", "zero_kn", "wave"];

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

fn report<T: std::fmt::Debug>(
    r: Result<(), proptest::test_runner::TestError<T>>,
) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

fn jet(du: usize, dv: usize) -> impl Strategy<Value = Jet2> {
    prop::collection::vec(prop::collection::vec(-2.0..2.0f64, dv + 1), du + 1)
        .prop_map(|rows| Jet2::from_coeffs(&rows))
}

fn jet_triple() -> impl Strategy<Value = (Jet2, Jet2, Jet2)> {
    (0usize..5, 0usize..3).prop_flat_map(|(du, dv)| (jet(du, dv), jet(du, dv), jet(du, dv)))
}

fn close(a: &Jet2, b: &Jet2, tol: f64) -> Result<(), TestCaseError> {
    let d = a.max_abs_diff(b);
    prop_assert!(d <= tol, "jets differ by {d}: {a:?} vs {b:?}");
    Ok(())
}

pub fn ring_axioms(cases: u32) -> Result<(), String> {
    report(runner(cases).run(&jet_triple(), |(a, b, c)| {
        let (du, dv) = a.shape();
        close(&(&a + &b), &(&b + &a), 0.0)?;
        close(&(&a * &b), &(&b * &a), 1e-12)?;
        close(&(&(&a * &b) * &c), &(&a * &(&b * &c)), 1e-10)?;
        close(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c)), 1e-10)?;
        close(&(&a + &Jet2::zeros(du, dv)), &a, 0.0)?;
        close(&(&a * &Jet2::constant(1.0, du, dv)), &a, 0.0)?;
        close(&(&(&a + &b) - &b), &a, 1e-12)?;
        Ok(())
    }))
}

pub fn division_round_trip(cases: u32) -> Result<(), String> {
    let strat = jet_triple().prop_map(|(a, mut b, _)| {
        let b0 = b.value();
        b.set(0, 0, if b0 >= 0.0 { b0 + 0.5 } else { b0 - 0.5 });
        (a, b)
    });
    report(runner(cases).run(&strat, |(a, b)| {
        let q = a
            .checked_div(&b)
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        close(&(&q * &b), &a, 1e-9)?;
        let r = b.recip().map_err(|e| TestCaseError::fail(e.to_string()))?;
        let (du, dv) = b.shape();
        close(&(&r * &b), &Jet2::constant(1.0, du, dv), 1e-9)
    }))
}

fn vec4() -> impl Strategy<Value = Vec4<f64>> {
    prop::array::uniform4(-3.0..3.0f64).prop_map(Vec4)
}

pub fn cross3_laws(cases: u32) -> Result<(), String> {
    report(runner(cases).run(&(vec4(), vec4(), vec4()), |(a, b, c)| {
        let x = cross3(&a, &b, &c);
        let scale = a.euclid() * b.euclid() * c.euclid();
        let tol = 1e-12 * scale.max(1.0);
        for swapped in [cross3(&b, &a, &c), cross3(&a, &c, &b), cross3(&c, &b, &a)] {
            prop_assert!((swapped + x.clone()).euclid() <= tol);
        }
        for v in [&a, &b, &c] {
            prop_assert!(dot(&x, v).abs() <= tol * v.euclid().max(1.0));
        }
        Ok(())
    }))
}

/// A fixture surface with its u and v grid intervals.
type Sampled = (SurfaceSpec, (f64, f64), (f64, f64));

/// A fixture point inside the fixture's grid box.
fn fixture_point() -> impl Strategy<Value = (usize, f64, f64)> {
    (0..VALID_FIXTURES.len(), 0.0..1.0f64, 0.0..1.0f64)
}

fn at(specs: &[Sampled], (k, su, sv): (usize, f64, f64)) -> (&SurfaceSpec, f64, f64) {
    let (spec, (u0, u1), (v0, v1)) = &specs[k];
    (spec, u0 + su * (u1 - u0), v0 + sv * (v1 - v0))
}

fn fixture_specs() -> Vec<Sampled> {
    VALID_FIXTURES
        .iter()
        .map(|name| {
            let cfg = fixture(name);
            (
                cfg.spec,
                (cfg.u.start, cfg.u.stop),
                (cfg.v.start, cfg.v.stop),
            )
        })
        .collect()
}

pub fn frame_orthonormal(cases: u32) -> Result<(), String> {
    let specs = fixture_specs();
    let tol = Tolerances::default();
    report(runner(cases).run(&fixture_point(), |p| {
        let (spec, u, v) = at(&specs, p);
        let Ok(fp) = build_frame(spec, (u, v), (8, 1), &tol) else {
            return Ok(());
        };
        let Ok(cj) = curvatures(&fp, &tol) else {
            return Ok(());
        };
        let frame = fp.values();
        for (i, x) in frame.iter().enumerate() {
            for (j, y) in frame.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((dot(x, y) - want).abs() < 1e-9, "<{i},{j}> at ({u}, {v})");
            }
        }
        for r in verify_frame_odes(&fp, &cj) {
            prop_assert!(r < 1e-9, "frame equation residual {r} at ({u}, {v})");
        }
        Ok(())
    }))
}

fn derivs() -> impl Strategy<Value = CurvatureDerivs> {
    (
        prop::array::uniform5(-2.0..2.0f64),
        prop::array::uniform5(-2.0..2.0f64),
        prop::array::uniform3(-2.0..2.0f64),
        prop::array::uniform3(-2.0..2.0f64),
    )
        .prop_map(|(kn, tg, kg, v)| CurvatureDerivs {
            kn,
            tg,
            kg,
            kn_v: v[0],
            tg_v: v[1],
            kg_v: v[2],
        })
}

fn check_gap(gap: f64) -> Result<(), TestCaseError> {
    prop_assert!(gap >= -1e-8, "Wintgen gap {gap}");
    Ok(())
}

pub fn wintgen_inequality(cases: u32) -> Result<(), String> {
    let specs = fixture_specs();
    let tol = Tolerances::default();
    report(runner(cases).run(&(fixture_point(), derivs()), |(p, cd)| {
        let (spec, u, v) = at(&specs, p);
        if let Ok(fp) = build_frame(spec, (u, v), (8, 1), &tol) {
            if let Ok(cj) = curvatures(&fp, &tol) {
                let cd = CurvatureDerivs::from_jets(&cj)
                    .map_err(|e| TestCaseError::fail(e.to_string()))?;
                if let Ok(r) = analyze(&cd, &tol) {
                    check_gap(r.wintgen.gap)?;
                }
            }
        }
        if let Ok(r) = analyze(&cd, &tol) {
            check_gap(r.wintgen.gap)?;
        }
        Ok(())
    }))
}

/// Every input either classifies into exactly one class consistent with the
/// signs of the discriminant and `K`, or fails with a geometry error code.
pub fn classification_total(cases: u32) -> Result<(), String> {
    let tol = Tolerances::default();
    let near_zero = prop_oneof![
        derivs(),
        derivs().prop_map(|mut cd| {
            cd.kn[0] *= 1e-9;
            cd
        })
    ];
    report(
        runner(cases).run(&near_zero, |cd| match analyze(&cd, &tol) {
            Err(e) => {
                prop_assert!(matches!(
                    e,
                    GeometryError::ZeroNormalCurvature(_) | GeometryError::ZeroTorsion(_)
                ));
                Ok(())
            }
            Ok(r) => {
                let e = r.ellipse;
                prop_assert!(PointClass::ALL.contains(&e.class));
                match e.class {
                    PointClass::Hyperbolic => prop_assert!(e.delta < 0.0),
                    PointClass::Elliptic => prop_assert!(e.delta > 0.0),
                    PointClass::InflectionImaginary => prop_assert!(r.shape.primary.k > 0.0),
                    PointClass::ParabolicNonDegenerate => {
                        prop_assert!(r.shape.primary.k < 0.0 && e.rank_a == 2)
                    }
                    PointClass::InflectionReal => {
                        prop_assert!(r.shape.primary.k < 0.0 && e.rank_a < 2)
                    }
                    PointClass::InflectionFlat => {}
                }
                Ok(())
            }
        }),
    )
}

/// Every suite, named as in the acceptance report.
pub fn all(cases: u32) -> Vec<(&'static str, Result<(), String>)> {
    vec![
        ("jet ring axioms", ring_axioms(cases)),
        ("jet division round trip", division_round_trip(cases)),
        ("cross3 antisymmetry and orthogonality", cross3_laws(cases)),
        (
            "frame orthonormality and frame equations",
            frame_orthonormal(cases),
        ),
        ("Wintgen inequality", wintgen_inequality(cases)),
        ("classification totality", classification_total(cases)),
    ]
}
