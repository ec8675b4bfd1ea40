#![allow(dead_code)]

pub mod props;

use std::path::PathBuf;

use ed2::cli::config::load_spec;
use ed2::cli::runner::{Overrides, RunConfig};
use ed2::frame::{build_frame, curvatures, CurvatureDerivs, Tolerances};
use ed2::surface::SurfaceSpec;
use ed2::taylor::fd_oracle;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("surfaces")
        .join(format!("{name}.toml"))
}

pub fn fixture(name: &str) -> RunConfig {
    let loaded = load_spec(&fixture_path(name)).expect("fixture loads");
    RunConfig::new(loaded, Overrides::default()).expect("fixture grid")
}

/// `(κ_n, κ_g, τ_g)` at a point, from the lowest jet order that determines them.
pub fn curvature_values(spec: &SurfaceSpec, u: f64, v: f64) -> Option<[f64; 3]> {
    let tol = Tolerances::default();
    let fp = build_frame(spec, (u, v), (4, 1), &tol).ok()?;
    let cj = curvatures(&fp, &tol).ok()?;
    Some([cj.kn.value(), cj.kg.value(), cj.tg.value()])
}

/// Largest disagreement, relative to `max(1, |jet|)`, between jet-extracted
/// curvature derivatives of total order at most 3 and the finite-difference
/// oracle, over `count` random points of the fixture grid box.
pub fn oracle_max_error(name: &str, count: usize, seed: u64) -> f64 {
    let cfg = fixture(name);
    let tol = Tolerances::default();
    let mut rng = StdRng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    while checked < count {
        let u = rng.gen_range(cfg.u.start..=cfg.u.stop);
        let v = rng.gen_range(cfg.v.start..=cfg.v.stop);
        let Ok(fp) = build_frame(&cfg.spec, (u, v), (8, 3), &tol) else {
            continue;
        };
        let Ok(cj) = curvatures(&fp, &tol) else {
            continue;
        };
        checked += 1;
        for (k, jet) in [&cj.kn, &cj.kg, &cj.tg].into_iter().enumerate() {
            for order in 0..=3 {
                for j in 0..=order {
                    let i = order - j;
                    let exact = jet.extract(i, j).expect("within jet shape");
                    let h = if order == 3 { 1e-2 } else { 1e-3 };
                    let f = |a: f64, b: f64| {
                        curvature_values(&cfg.spec, a, b).expect("valid nearby")[k]
                    };
                    let fd = fd_oracle(f, (u, v), i, j, h);
                    worst = worst.max((exact - fd).abs() / exact.abs().max(1.0));
                }
            }
        }
    }
    worst
}

/// Curvature derivatives drawn from a seeded stream, with `κ_n < 0 < τ_g` bounded away from zero.
pub fn synthetic_derivs(seed: u64) -> CurvatureDerivs {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut cd = CurvatureDerivs::default();
    for x in cd
        .kn
        .iter_mut()
        .chain(cd.tg.iter_mut())
        .chain(cd.kg.iter_mut())
    {
        *x = rng.gen_range(-1.0..1.0);
    }
    cd.kn[0] = -rng.gen_range(0.5..1.5);
    cd.tg[0] = rng.gen_range(0.5..1.5);
    cd.kn_v = rng.gen_range(-1.0..1.0);
    cd.tg_v = rng.gen_range(-1.0..1.0);
    cd.kg_v = rng.gen_range(-1.0..1.0);
    cd
}
