//! Acceptance suite: one PASS/FAIL line per criterion, pinned tolerances.
//! Exits non-zero if any criterion fails.

mod common;

use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use bisa_mech_core::bending::{withstand_moment, MomentBalance};
use bisa_mech_core::datafit::{calibrate_bls, calibrate_chambers, fit_slope};
use bisa_mech_core::kinematics::min_enclosing_circle;
use bisa_mech_core::lateral::{
    evaluation_function, influence_bending, influence_torsion, lateral_stiffness,
    lateral_stiffness_quadrature, recommend_aspect_ratio, AspectStudy,
};
use bisa_mech_core::{
    derive_section, BlsModel, ChamberStack, ForceDispSeries, Material, Point, SeriesMeta,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORACLE_DRAWS: usize = 200;
const ORACLE_PANELS: usize = 4096;
const ORACLE_TOL: f64 = 1e-9;
const ORACLE_BUDGET: Duration = Duration::from_secs(5);
const STRAIGHT_ALPHA: f64 = 1e-5;
const STRAIGHT_TOL: f64 = 1e-6;
const SERIES_TOL: f64 = 1e-6;
const COLLINEAR_TOL: f64 = 1e-12;
const ROUND_TRIP_TOL: f64 = 1e-10;
const CIRCLE_TOL: f64 = 1e-12;
const SHUFFLES: usize = 100;
const E2E_BUDGET: Duration = Duration::from_secs(30);
const NU: f64 = 0.35;

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn model(e: f64, nu: f64, b: f64, lambda: f64, c: f64) -> BlsModel {
    BlsModel::new(
        Material::new(e, nu).unwrap(),
        derive_section(b, lambda).unwrap(),
        c,
        0.006,
        c,
        10,
        19.62,
    )
    .unwrap()
}

fn degrees_grid() -> Vec<f64> {
    (1..=180).map(|d| f64::from(d).to_radians()).collect()
}

fn column(lambda: f64) -> Vec<f64> {
    degrees_grid()
        .into_iter()
        .map(|a| evaluation_function(a, NU, lambda).unwrap())
        .collect()
}

fn oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let start = Instant::now();
    let mut worst = 0.0f64;
    for _ in 0..ORACLE_DRAWS {
        let m = model(
            10f64.powf(rng.gen_range(8.0..11.0)),
            rng.gen_range(0.0..0.49),
            rng.gen_range(1e-3..1e-2),
            rng.gen_range(0.25..4.0),
            rng.gen_range(0.02..0.2),
        );
        let alpha = rng.gen_range(1e-3..std::f64::consts::PI);
        let closed = lateral_stiffness(&m, alpha)
            .map_err(|e| e.to_string())?
            .stiffness;
        let quad =
            lateral_stiffness_quadrature(&m, alpha, ORACLE_PANELS).map_err(|e| e.to_string())?;
        worst = worst.max(rel(closed, quad));
    }
    let elapsed = start.elapsed();
    let detail = format!(
        "max rel err {worst:.2e} (< {ORACLE_TOL:e}), {:.2} s (< 5 s)",
        elapsed.as_secs_f64()
    );
    if worst < ORACLE_TOL && elapsed < ORACLE_BUDGET {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn straight_limit() -> Outcome {
    let m = model(2.7e9, NU, 0.004, 1.0, 0.08);
    let k = lateral_stiffness(&m, STRAIGHT_ALPHA)
        .map_err(|e| e.to_string())?
        .stiffness;
    let beam = 3.0 * m.flexural_rigidity() / m.arc_length().powi(3);
    let err = rel(k, beam);
    let detail = format!("k(1e-5)/(3EI/C^3) - 1 = {err:.2e} (< {STRAIGHT_TOL:e})");
    if err < STRAIGHT_TOL {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn influence_shapes() -> Outcome {
    let ratios: Vec<f64> = degrees_grid()
        .into_iter()
        .map(|a| influence_torsion(a).unwrap() / influence_bending(a).unwrap())
        .collect();
    let increasing = ratios.windows(2).all(|w| w[1] > w[0]);
    let ab0 = influence_bending(1e-9).map_err(|e| e.to_string())?;
    let at0 = influence_torsion(1e-9).map_err(|e| e.to_string())?;
    let limits = (ab0 - 4.0 / 3.0).abs() < SERIES_TOL && at0.abs() < SERIES_TOL;
    let detail = format!(
        "A_t/A_b strictly increasing on 1..180 deg: {increasing}; A_b(0+) - 4/3 = {:.1e}, A_t(0+) = {:.1e}",
        ab0 - 4.0 / 3.0,
        at0
    );
    if increasing && limits {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn aspect_study() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for lambda in [1.25, 1.5, 2.0] {
        let mono = column(lambda).windows(2).all(|w| w[1] >= w[0]);
        pass &= mono;
        notes.push(format!("lambda={lambda} non-decreasing: {mono}"));
    }
    let quarter = column(0.25);
    // Index i is (i + 1) degrees.
    let dip = quarter[..89].windows(2).any(|w| w[1] < w[0]);
    let min_idx = quarter
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap();
    let rise = quarter[min_idx..].windows(2).any(|w| w[1] > w[0]);
    pass &= dip && rise;
    notes.push(format!(
        "lambda=0.25 decreases below 90 deg: {dip}, min at {} deg, then increases: {rise}",
        min_idx + 1
    ));
    let study = AspectStudy::new(NU, 0.004, 0.010);
    let rec = recommend_aspect_ratio(&[0.25, 0.5, 1.0, 2.0], &study).map_err(|e| e.to_string())?;
    pass &= rec.recommended == Some(1.0);
    notes.push(format!("recommended {:?}", rec.recommended));
    let detail = notes.join("; ");
    if pass {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn moment_balance() -> Outcome {
    let b = MomentBalance::from_moments(9, 0.1, 0.05, 0.08).map_err(|e| e.to_string())?;
    let exact = b.withstand == 0.72;
    let stack = ChamberStack::new(9, 0.006, 0.005, 2e-7, 0.0, 0.02).unwrap();
    let pts: Vec<(f64, f64)> = [1.0e4, 3.5e4, 8.0e4]
        .iter()
        .map(|&p| (p, withstand_moment(&stack, p).unwrap().withstand))
        .collect();
    let (p1, m1) = pts[0];
    let (p2, m2) = pts[1];
    let (p3, m3) = pts[2];
    let cross =
        ((m2 - m1) * (p3 - p1) - (m3 - m1) * (p2 - p1)).abs() / ((m3 - m1) * (p3 - p1)).abs();
    let through_origin = (m1 / p1 - m3 / p3).abs() / (m3 / p3);
    let detail = format!(
        "M_f = {} (== 0.72: {exact}); collinearity {cross:.1e}, origin slope mismatch {through_origin:.1e} (< {COLLINEAR_TOL:e})",
        b.withstand
    );
    if exact && cross < COLLINEAR_TOL && through_origin < COLLINEAR_TOL {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn calibration_round_trips() -> Outcome {
    let s = 2.5;
    let lambda = 1.0;
    let pts: Vec<(f64, f64)> = [30.0f64, 60.0, 90.0, 135.0, 180.0]
        .iter()
        .map(|d| {
            let a = d.to_radians();
            (a, 4.0 * s * evaluation_function(a, NU, lambda).unwrap())
        })
        .collect();
    let bls = calibrate_bls(&pts, NU, lambda).map_err(|e| e.to_string())?;
    let bls_err = rel(bls.scale, s);

    let truth = ChamberStack::new(9, 0.006, 0.005, 2e-7, 0.01, 0.02).unwrap();
    let data: Vec<(f64, f64)> = [20e3, 30e3, 40e3, 55e3]
        .iter()
        .map(|&p| (p, withstand_moment(&truth, p).unwrap().withstand))
        .collect();
    let cal = calibrate_chambers(&data, 9).map_err(|e| e.to_string())?;
    let nominal = ChamberStack::new(9, 0.006, 0.005, 0.0, 0.0, 0.02).unwrap();
    let rebuilt = nominal
        .from_lumped_fit(cal.lumped_coefficient, cal.restoring_moment)
        .map_err(|e| e.to_string())?;
    let s_err = rel(rebuilt.contact_first_moment(), truth.contact_first_moment());
    let mw_err = rel(rebuilt.restoring_moment(), truth.restoring_moment());
    let worst = bls_err.max(s_err).max(mw_err);
    let detail = format!(
        "BLS scale {bls_err:.1e}, S_contact {s_err:.1e}, M_w {mw_err:.1e} (< {ROUND_TRIP_TOL:e})"
    );
    if worst < ROUND_TRIP_TOL {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn slope_pipeline() -> Outcome {
    let x: Vec<f64> = (0..=10).map(|i| f64::from(i) * 0.5e-3).collect();
    let exact: Vec<f64> = x.iter().map(|v| 700.0 * v).collect();
    let fit = fit_slope(&ForceDispSeries::new(x.clone(), exact, SeriesMeta::default()).unwrap())
        .map_err(|e| e.to_string())?;
    let line_ok = (fit.stiffness_n_per_mm() - 0.7).abs() < 1e-12 && fit.r_squared == 1.0;

    // 0.46 N/mm with a 50 mN preload, then with ±0.2 mN gauge ripple.
    let preloaded: Vec<f64> = x.iter().map(|v| 0.05 + 460.0 * v).collect();
    let rippled: Vec<f64> = preloaded
        .iter()
        .enumerate()
        .map(|(i, f)| f + 2e-4 * ((i as f64) * 2.3).sin())
        .collect();
    let mut shown = Vec::new();
    let mut r2 = 1.0f64;
    for force in [preloaded, rippled] {
        let fit =
            fit_slope(&ForceDispSeries::new(x.clone(), force, SeriesMeta::default()).unwrap())
                .map_err(|e| e.to_string())?;
        shown.push(format!("{:.4}", fit.stiffness_n_per_mm()));
        r2 = r2.min(fit.r_squared);
    }
    let resolved = shown.iter().all(|s| s == "0.4600");
    let detail = format!(
        "0.7 line -> {} N/mm, r^2 = {}; 0.46 data (exact, rippled) -> {} N/mm (min r^2 {r2:.6})",
        fit.stiffness_n_per_mm(),
        fit.r_squared,
        shown.join(", ")
    );
    if line_ok && resolved {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn enclosing_circle() -> Outcome {
    let h = 3f64.sqrt() / 2.0;
    let tri: [Point; 3] = [[0.0, 0.0], [1.0, 0.0], [0.5, h]];
    let c = min_enclosing_circle(&tri).map_err(|e| e.to_string())?;
    let r_err = (c.radius - 1.0 / 3f64.sqrt()).abs();
    let c_err = (c.center[0] - 0.5).abs().max((c.center[1] - h / 3.0).abs());
    let analytic = r_err < CIRCLE_TOL && c_err < CIRCLE_TOL;

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let mut pts: Vec<Point> = (0..40)
        .map(|_| [rng.gen_range(-1e-3..1e-3), rng.gen_range(-1e-3..1e-3)])
        .collect();
    let reference = min_enclosing_circle(&pts).map_err(|e| e.to_string())?;
    let mut invariant = true;
    for _ in 0..SHUFFLES {
        pts.shuffle(&mut rng);
        invariant &= min_enclosing_circle(&pts).map_err(|e| e.to_string())? == reference;
    }
    let detail = format!(
        "equilateral radius err {r_err:.1e}, center err {c_err:.1e} (< {CIRCLE_TOL:e}); identical over {SHUFFLES} shuffles: {invariant}"
    );
    if analytic && invariant {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn sweep_bytes(out: &Path, threads: &str) -> Result<Vec<Vec<u8>>, String> {
    let o = out.to_str().unwrap();
    let run = common::run_with(&["sweep", "--out", o], Some(threads));
    if !run.status.success() {
        return Err(String::from_utf8_lossy(&run.stderr).into_owned());
    }
    ["influence.csv", "evaluation.csv", "evaluation.json"]
        .iter()
        .map(|f| fs::read(out.join(f)).map_err(|e| e.to_string()))
        .collect()
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut sweeps = Vec::new();
    let mut reports = Vec::new();
    for (i, threads) in ["1", "1", "4", "4"].iter().enumerate() {
        sweeps.push(sweep_bytes(&dir.path().join(format!("sweep{i}")), threads)?);
        let root = dir.path().join(format!("run{i}"));
        let report = common::pipeline(&root, Some(threads));
        reports.push(fs::read(report).map_err(|e| e.to_string())?);
    }
    let sweep_same = sweeps.iter().all(|s| *s == sweeps[0]);
    let report_same = reports.iter().all(|r| *r == reports[0]);
    let detail = format!(
        "sweep identical over 2 runs x threads {{1,4}}: {sweep_same}; report identical: {report_same}"
    );
    if sweep_same && report_same {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn end_to_end() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let start = Instant::now();
    let report_path = common::pipeline(dir.path(), None);
    let elapsed = start.elapsed();
    let text = fs::read_to_string(report_path).map_err(|e| e.to_string())?;
    let report: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let errors = common::schema_errors(&report);
    let detail = format!(
        "sweep -> synth -> fit -> report in {:.2} s (< 30 s); schema errors: {}",
        elapsed.as_secs_f64(),
        errors.len()
    );
    if elapsed < E2E_BUDGET && errors.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail} {errors:?}"))
    }
}

fn main() {
    let criteria: [(&str, Check); 10] = [
        ("closed form vs quadrature oracle", oracle),
        ("straight-beam limit", straight_limit),
        (
            "influence functions (ratio growth, small-angle limits)",
            influence_shapes,
        ),
        (
            "aspect-ratio study (monotonicity, recommendation)",
            aspect_study,
        ),
        ("moment balance (hand check, linearity)", moment_balance),
        ("calibration round trips", calibration_round_trips),
        ("slope pipeline", slope_pipeline),
        ("minimum enclosing circle", enclosing_circle),
        ("determinism (runs, thread counts)", determinism),
        ("synthetic end-to-end with schema", end_to_end),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
