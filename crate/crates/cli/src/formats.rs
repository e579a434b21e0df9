//! On-disk formats written by `fit` and read back by `report`.

use serde::{Deserialize, Serialize};

pub const FIT_SLOPE_FILE: &str = "fit_slope.json";
pub const FIT_BLS_FILE: &str = "fit_bls.json";
pub const FIT_CHAMBERS_FILE: &str = "fit_chambers.json";
pub const FIT_ANGLE_PRESSURE_FILE: &str = "fit_angle_pressure.json";
pub const STIFFNESS_TABLE_FILE: &str = "stiffness_table.csv";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlopeRow {
    pub file: String,
    pub label: String,
    pub bending_angle_deg: f64,
    pub pulling_mass_kg: f64,
    #[serde(rename = "pulling_force_N")]
    pub pulling_force_n: f64,
    #[serde(rename = "pressure_step_kPa")]
    pub pressure_step_kpa: f64,
    #[serde(rename = "stiffness_N_per_mm")]
    pub stiffness_n_per_mm: f64,
    #[serde(rename = "intercept_N")]
    pub intercept_n: f64,
    pub r_squared: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatioCurveOut {
    pub group: String,
    pub angles_deg: Vec<f64>,
    pub ratios: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlopeFitFile {
    pub kind: String,
    pub rows: Vec<SlopeRow>,
    /// `None` when some group lacks a 0° baseline.
    pub ratio_curves: Option<Vec<RatioCurveOut>>,
    pub ratio_note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlsFitFile {
    pub kind: String,
    pub files: Vec<String>,
    pub points: usize,
    pub poisson_ratio: f64,
    pub aspect_ratio: f64,
    /// `E·I/C³`.
    #[serde(rename = "stiffness_scale_N_per_m")]
    pub stiffness_scale_n_per_m: f64,
    #[serde(rename = "rms_residual_N_per_m")]
    pub rms_residual_n_per_m: f64,
    #[serde(rename = "residual_sum_squares_N2_per_m2")]
    pub residual_sum_squares: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChamberFitFile {
    pub kind: String,
    pub files: Vec<String>,
    pub points: usize,
    pub chamber_count: u32,
    #[serde(rename = "lumped_coefficient_N_m_per_Pa")]
    pub lumped_coefficient: f64,
    #[serde(rename = "restoring_moment_N_m")]
    pub restoring_moment_n_m: f64,
    #[serde(rename = "residual_sum_squares_N2_m2")]
    pub residual_sum_squares: f64,
    pub unphysical: bool,
    pub warning: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchFitOut {
    pub branch: String,
    /// `angle_deg = Σ c_k · pressure_kPa^k`.
    pub coefficients: Vec<f64>,
    #[serde(rename = "residual_sum_squares_deg2")]
    pub residual_sum_squares: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnglePressureFitFile {
    pub kind: String,
    pub files: Vec<String>,
    pub degree: usize,
    pub branches: Vec<BranchFitOut>,
}
