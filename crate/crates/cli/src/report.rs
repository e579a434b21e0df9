//! `report`: combines fit outputs with sweep summaries and gripper
//! estimates into one JSON document.

use std::io::Write;
use std::path::Path;

use bisa_mech_core::gripper::{
    inverse_grasp_capacity, lift_capacity, normal_grasp_report, InverseGrasp, LiftCapacity,
    NormalGraspReport,
};
use bisa_mech_core::lateral::{
    lateral_stiffness, max_relative_drop, recommend_aspect_ratio, AspectRecommendation,
};
use bisa_mech_core::units::kpa_to_pa;
use bisa_mech_core::{BlsModel, ChamberStack, ObjectShape};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::config::RunConfig;
use crate::formats::*;
use crate::sweep::SweepPlan;
use crate::{print_json, to_json, write_file, CliError, ReportArgs};

pub const REPORT_FORMAT: &str = "bisa-mech-report/1";

/// Angles at which the calibrated lateral model is tabulated.
const MODEL_ANGLES_DEG: [f64; 12] = [
    15.0, 30.0, 45.0, 60.0, 75.0, 90.0, 105.0, 120.0, 135.0, 150.0, 165.0, 180.0,
];

#[derive(Debug, Serialize)]
pub struct Report {
    pub format: &'static str,
    pub calibration: Calibration,
    pub stiffness_table: Vec<SlopeRow>,
    pub ratio_curves: Option<Vec<RatioCurveOut>>,
    pub ratio_note: Option<String>,
    pub angle_pressure: Option<AnglePressureFitFile>,
    pub sweep_summary: SweepSummary,
    pub lateral_model: Vec<ModelPoint>,
    pub gripper: GripperSummary,
}

#[derive(Debug, Serialize)]
pub struct Calibration {
    pub bls: BlsCalibrationOut,
    pub chambers: ChamberCalibrationOut,
}

#[derive(Debug, Serialize)]
pub struct BlsCalibrationOut {
    pub fit: BlsFitFile,
    /// Young's modulus implied by the fitted scale and configured geometry.
    #[serde(rename = "young_modulus_MPa")]
    pub young_modulus_mpa: f64,
}

#[derive(Debug, Serialize)]
pub struct ChamberCalibrationOut {
    pub fit: ChamberFitFile,
    /// Stack rebuilt from the fit; `None` when the fit has no physical stack.
    pub stack: Option<ChamberStack>,
    pub note: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct LambdaSummary {
    pub lambda: f64,
    pub evaluation_min: f64,
    pub evaluation_max: f64,
    pub evaluation_first: f64,
    pub evaluation_last: f64,
    pub max_relative_drop: f64,
    pub max_drop_at_deg: f64,
}

#[derive(Debug, Serialize)]
pub struct SweepSummary {
    pub alpha_range_deg: String,
    pub poisson_ratio: f64,
    pub rows: usize,
    pub lambdas: Vec<LambdaSummary>,
    pub recommendation: AspectRecommendation,
}

#[derive(Debug, Serialize)]
pub struct ModelPoint {
    pub alpha_deg: f64,
    #[serde(rename = "stiffness_N_per_mm")]
    pub stiffness_n_per_mm: f64,
    pub evaluation: f64,
}

#[derive(Debug, Serialize)]
pub struct LiftOut {
    pub alpha_deg: f64,
    pub allowable_deflection_mm: f64,
    #[serde(flatten)]
    pub result: LiftCapacity,
}

#[derive(Debug, Serialize)]
pub struct InverseOut {
    #[serde(rename = "normal_force_per_finger_N")]
    pub normal_force_per_finger_n: f64,
    pub cylindrical: InverseGrasp,
    pub reduced: InverseGrasp,
}

#[derive(Debug, Serialize)]
pub struct GripperSummary {
    pub finger_count: usize,
    pub lift: LiftOut,
    pub inverse_grasp: InverseOut,
    pub normal_grasp: NormalGraspReport,
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Fit outputs read from a data directory.
#[derive(Debug)]
pub struct FitInputs {
    pub slope: SlopeFitFile,
    pub bls: BlsFitFile,
    pub chambers: ChamberFitFile,
    pub angle_pressure: Option<AnglePressureFitFile>,
}

impl FitInputs {
    pub fn load(dir: &Path) -> Result<Self, CliError> {
        let required = [FIT_SLOPE_FILE, FIT_BLS_FILE, FIT_CHAMBERS_FILE];
        let missing: Vec<&str> = required
            .iter()
            .copied()
            .filter(|f| !dir.join(f).is_file())
            .collect();
        if !missing.is_empty() {
            return Err(CliError::Usage(format!(
                "{}: missing fit outputs: {}",
                dir.display(),
                missing.join(", ")
            )));
        }
        let ap = dir.join(FIT_ANGLE_PRESSURE_FILE);
        Ok(Self {
            slope: read_json(&dir.join(FIT_SLOPE_FILE))?,
            bls: read_json(&dir.join(FIT_BLS_FILE))?,
            chambers: read_json(&dir.join(FIT_CHAMBERS_FILE))?,
            angle_pressure: if ap.is_file() {
                Some(read_json(&ap)?)
            } else {
                None
            },
        })
    }
}

fn sweep_summary(cfg: &RunConfig) -> Result<SweepSummary, CliError> {
    let plan = SweepPlan::from_config(cfg)?;
    let grid = plan.grid()?;
    let degrees = plan.range.degrees();
    let lambdas = grid
        .lambdas
        .iter()
        .enumerate()
        .map(|(j, &lambda)| {
            let col = grid.column(j);
            let (drop, at) = max_relative_drop(&col);
            LambdaSummary {
                lambda,
                evaluation_min: col.iter().copied().fold(f64::INFINITY, f64::min),
                evaluation_max: col.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                evaluation_first: col[0],
                evaluation_last: col[col.len() - 1],
                max_relative_drop: drop,
                max_drop_at_deg: degrees[at],
            }
        })
        .collect();
    Ok(SweepSummary {
        alpha_range_deg: cfg.sweep.alpha_range_deg.clone(),
        poisson_ratio: plan.nu,
        rows: degrees.len(),
        lambdas,
        recommendation: recommend_aspect_ratio(&cfg.sweep.candidates, &cfg.aspect_study())?,
    })
}

fn lateral_model(bls: &BlsModel) -> Result<Vec<ModelPoint>, CliError> {
    MODEL_ANGLES_DEG
        .iter()
        .map(|&deg| {
            let r = lateral_stiffness(bls, deg.to_radians())?;
            Ok(ModelPoint {
                alpha_deg: deg,
                stiffness_n_per_mm: r.stiffness / 1000.0,
                evaluation: r.evaluation,
            })
        })
        .collect()
}

/// Builds the report from configuration and previously written fits.
pub fn build_report(cfg: &RunConfig, inputs: FitInputs) -> Result<Report, CliError> {
    let bls = cfg
        .bls_model()?
        .with_stiffness_scale(inputs.bls.stiffness_scale_n_per_m)?;
    let nominal = cfg.chamber_stack()?;
    let stack_fit = nominal
        .with_chamber_count(inputs.chambers.chamber_count)
        .and_then(|s| {
            s.from_lumped_fit(
                inputs.chambers.lumped_coefficient,
                inputs.chambers.restoring_moment_n_m,
            )
        });
    let (stack, note) = match stack_fit {
        Ok(s) => (Some(s), None),
        Err(e) => (
            None,
            Some(format!("nominal stack used for grasp estimates: {e}")),
        ),
    };
    let grip_stack = stack.unwrap_or(nominal);
    let gripper = cfg.gripper_with(bls, grip_stack)?;

    let lift_alpha = cfg.grasp.lift_angle_deg;
    if !(lift_alpha > 0.0 && lift_alpha <= 180.0) {
        return Err(CliError::Usage(format!(
            "config: grasp.lift_angle_deg {lift_alpha} must lie in (0, 180]"
        )));
    }
    let normal = cfg.grasp.normal_force_per_finger_n;
    let gripper_summary = GripperSummary {
        finger_count: gripper.finger_count(),
        lift: LiftOut {
            alpha_deg: lift_alpha,
            allowable_deflection_mm: cfg.gripper.allowable_deflection_mm,
            result: lift_capacity(&gripper, lift_alpha.to_radians())?,
        },
        inverse_grasp: InverseOut {
            normal_force_per_finger_n: normal,
            cylindrical: inverse_grasp_capacity(&gripper, ObjectShape::Cylindrical, normal)?,
            reduced: inverse_grasp_capacity(&gripper, ObjectShape::Reduced, normal)?,
        },
        normal_grasp: normal_grasp_report(
            &gripper,
            kpa_to_pa(cfg.grasp.base_pressure_kpa),
            kpa_to_pa(cfg.grasp.pressure_increment_kpa),
        )?,
    };

    Ok(Report {
        format: REPORT_FORMAT,
        calibration: Calibration {
            bls: BlsCalibrationOut {
                young_modulus_mpa: bls.material().young_modulus() / 1e6,
                fit: inputs.bls,
            },
            chambers: ChamberCalibrationOut {
                fit: inputs.chambers,
                stack,
                note,
            },
        },
        stiffness_table: inputs.slope.rows,
        ratio_curves: inputs.slope.ratio_curves,
        ratio_note: inputs.slope.ratio_note,
        angle_pressure: inputs.angle_pressure,
        sweep_summary: sweep_summary(cfg)?,
        lateral_model: lateral_model(&bls)?,
        gripper: gripper_summary,
    })
}

pub fn run(args: &ReportArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cfg = RunConfig::load(args.config.as_deref())?;
    let inputs = FitInputs::load(&args.data_dir)?;
    let report = build_report(&cfg, inputs)?;
    if let Some(out) = &args.out {
        write_file(out, &to_json(&report))?;
    }
    print_json(stdout, &report)?;
    Ok(())
}
