//! Data reduction: stiffness slopes from force-displacement records,
//! stiffness ratios against the straight pose, and least-squares
//! calibration of the lateral and bending models.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{finite, MechError, Result};
use crate::lateral::evaluation_function;

/// Conditions a force-displacement record was taken under.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesMeta {
    pub bending_angle_deg: f64,
    pub pulling_mass_kg: f64,
    #[serde(rename = "pressure_step_kPa")]
    pub pressure_step_kpa: f64,
    pub label: String,
}

/// Force against displacement, SI units.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceDispSeries {
    displacement: Vec<f64>,
    force: Vec<f64>,
    pub meta: SeriesMeta,
}

impl ForceDispSeries {
    /// `displacement` in m, strictly increasing; `force` in N.
    pub fn new(displacement: Vec<f64>, force: Vec<f64>, meta: SeriesMeta) -> Result<Self> {
        if displacement.len() != force.len() {
            return Err(MechError::domain(
                "force",
                format!(
                    "{} forces for {} displacements",
                    force.len(),
                    displacement.len()
                ),
            ));
        }
        if displacement.len() < 2 {
            return Err(MechError::domain(
                "displacement",
                "need at least two samples",
            ));
        }
        for (&x, &f) in displacement.iter().zip(&force) {
            finite("displacement", x)?;
            finite("force", f)?;
        }
        if displacement.windows(2).any(|w| w[1] <= w[0]) {
            return Err(MechError::domain(
                "displacement",
                "must be strictly increasing",
            ));
        }
        Ok(Self {
            displacement,
            force,
            meta,
        })
    }

    pub fn displacement(&self) -> &[f64] {
        &self.displacement
    }

    pub fn force(&self) -> &[f64] {
        &self.force
    }

    pub fn len(&self) -> usize {
        self.force.len()
    }

    pub fn is_empty(&self) -> bool {
        self.force.is_empty()
    }
}

/// Least-squares line through a force-displacement record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeFit {
    /// Slope in N/m.
    #[serde(rename = "stiffness_N_per_m")]
    pub stiffness: f64,
    #[serde(rename = "intercept_N")]
    pub intercept: f64,
    pub r_squared: f64,
}

impl SlopeFit {
    pub fn stiffness_n_per_mm(&self) -> f64 {
        self.stiffness / 1000.0
    }
}

/// Ordinary least-squares slope with free intercept.
pub fn fit_slope(series: &ForceDispSeries) -> Result<SlopeFit> {
    let (slope, intercept, r_squared) = linear_fit(series.displacement(), series.force())?;
    Ok(SlopeFit {
        stiffness: slope,
        intercept,
        r_squared,
    })
}

/// `(slope, intercept, r²)` of `y` on `x`.
fn linear_fit(x: &[f64], y: &[f64]) -> Result<(f64, f64, f64)> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    if sxx <= 0.0 {
        return Err(MechError::domain(
            "displacement",
            "zero variance; slope undefined",
        ));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my) * (v - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = b - (intercept + slope * a);
            r * r
        })
        .sum();
    let r_squared = if syy > 0.0 {
        (1.0 - sse / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok((slope, intercept, r_squared))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StiffnessRow {
    pub meta: SeriesMeta,
    #[serde(rename = "stiffness_N_per_m")]
    pub stiffness: f64,
    pub r_squared: f64,
}

/// Fitted stiffness per test condition.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct StiffnessTable {
    pub rows: Vec<StiffnessRow>,
}

impl StiffnessTable {
    /// Fits every series in order.
    pub fn from_series<'a>(series: impl IntoIterator<Item = &'a ForceDispSeries>) -> Result<Self> {
        let rows = series
            .into_iter()
            .map(|s| {
                let fit = fit_slope(s)?;
                Ok(StiffnessRow {
                    meta: s.meta.clone(),
                    stiffness: fit.stiffness,
                    r_squared: fit.r_squared,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { rows })
    }

    /// CSV with one row per condition.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "label,bending_angle_deg,pulling_mass_kg,pressure_step_kPa,stiffness_N_per_mm,r_squared\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.meta.label,
                r.meta.bending_angle_deg,
                r.meta.pulling_mass_kg,
                r.meta.pressure_step_kpa,
                r.stiffness / 1000.0,
                r.r_squared
            ));
        }
        out
    }
}

/// Stiffness relative to the straight (0°) condition of the same group.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioCurve {
    pub group: String,
    pub angles_deg: Vec<f64>,
    pub ratios: Vec<f64>,
}

/// Groups rows by label, sorts each group by bending angle and divides by
/// the group's 0° stiffness. Groups come out in label order.
pub fn ratio_curve(table: &StiffnessTable) -> Result<Vec<RatioCurve>> {
    let mut groups: BTreeMap<&str, Vec<(f64, f64)>> = BTreeMap::new();
    for row in &table.rows {
        groups
            .entry(row.meta.label.as_str())
            .or_default()
            .push((row.meta.bending_angle_deg, row.stiffness));
    }
    groups
        .into_iter()
        .map(|(group, mut rows)| {
            rows.sort_by(|a, b| a.0.total_cmp(&b.0));
            let base = rows
                .iter()
                .find(|(a, _)| *a == 0.0)
                .map(|&(_, k)| k)
                .ok_or_else(|| {
                    MechError::domain("table", format!("group '{group}' has no 0° baseline"))
                })?;
            if base == 0.0 {
                return Err(MechError::domain(
                    "table",
                    format!("group '{group}' has zero stiffness at 0°"),
                ));
            }
            Ok(RatioCurve {
                group: group.to_string(),
                angles_deg: rows.iter().map(|r| r.0).collect(),
                ratios: rows
                    .iter()
                    .map(|&(a, k)| if a == 0.0 { 1.0 } else { k / base })
                    .collect(),
            })
        })
        .collect()
}

/// Least-squares stiffness scale of the lateral model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlsCalibration {
    /// `E·I/C³` in N/m.
    #[serde(rename = "stiffness_scale_N_per_m")]
    pub scale: f64,
    /// Sum of squared stiffness residuals, (N/m)².
    pub residual_sum_squares: f64,
    #[serde(rename = "rms_residual_N_per_m")]
    pub rms_residual: f64,
}

/// Fits `s` in `k = 4·s·F(α)` to measured `(α rad, k N/m)` pairs:
/// `s = Σ k_i F_i / (4 Σ F_i²)`.
pub fn calibrate_bls(measured: &[(f64, f64)], nu: f64, lambda: f64) -> Result<BlsCalibration> {
    if measured.is_empty() {
        return Err(MechError::domain("measured", "no measurements"));
    }
    let mut fs = Vec::with_capacity(measured.len());
    for &(alpha, k) in measured {
        finite("stiffness", k)?;
        fs.push(evaluation_function(alpha, nu, lambda)?);
    }
    let num: f64 = measured.iter().zip(&fs).map(|(m, f)| m.1 * f).sum();
    let den: f64 = fs.iter().map(|f| f * f).sum();
    let scale = num / (4.0 * den);
    let rss: f64 = measured
        .iter()
        .zip(&fs)
        .map(|(m, f)| {
            let r = m.1 - 4.0 * scale * f;
            r * r
        })
        .sum();
    Ok(BlsCalibration {
        scale,
        residual_sum_squares: rss,
        rms_residual: (rss / measured.len() as f64).sqrt(),
    })
}

/// Lumped linear fit of the chamber moment balance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChamberCalibration {
    pub chamber_count: u32,
    /// `c = 2(n−1)·4ab² + (n−1)·S_contact`, in N·m/Pa.
    #[serde(rename = "lumped_coefficient_N_m_per_Pa")]
    pub lumped_coefficient: f64,
    /// `M_w` in N·m.
    #[serde(rename = "restoring_moment_N_m")]
    pub restoring_moment: f64,
    /// Sum of squared moment residuals, (N·m)².
    pub residual_sum_squares: f64,
    /// Set when the fitted `M_w` is negative.
    pub unphysical: bool,
}

/// Fits `M_f = c·P − 2(n−1)·M_w` to `(P Pa, M_f N·m)` pairs.
pub fn calibrate_chambers(
    measured: &[(f64, f64)],
    chamber_count: u32,
) -> Result<ChamberCalibration> {
    if chamber_count < 2 {
        return Err(MechError::domain(
            "chamber_count",
            format!("must be >= 2, got {chamber_count}"),
        ));
    }
    let (p, m): (Vec<f64>, Vec<f64>) = measured.iter().copied().unzip();
    for (&pi, &mi) in p.iter().zip(&m) {
        finite("pressure", pi)?;
        finite("withstand_moment", mi)?;
    }
    if p.len() < 2 || p.iter().all(|&v| v == p[0]) {
        return Err(MechError::domain(
            "measured",
            "need at least two distinct pressures",
        ));
    }
    let (slope, intercept, _) = linear_fit(&p, &m)?;
    let n1 = f64::from(chamber_count - 1);
    let restoring_moment = -intercept / (2.0 * n1);
    let rss = p
        .iter()
        .zip(&m)
        .map(|(pi, mi)| {
            let r = mi - (slope * pi + intercept);
            r * r
        })
        .sum();
    Ok(ChamberCalibration {
        chamber_count,
        lumped_coefficient: slope,
        restoring_moment,
        residual_sum_squares: rss,
        unphysical: restoring_moment < 0.0,
    })
}

/// Loading branch of an angle-pressure record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Inflate,
    Deflate,
    Unlabeled,
}

impl std::str::FromStr for Branch {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "inflate" => Ok(Branch::Inflate),
            "deflate" => Ok(Branch::Deflate),
            "" | "unlabeled" => Ok(Branch::Unlabeled),
            other => Err(format!("unknown branch '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngleSample {
    #[serde(rename = "pressure_kPa")]
    pub pressure_kpa: f64,
    pub angle_deg: f64,
    pub branch: Branch,
}

/// Polynomial bending angle against pressure for one branch.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolynomialFit {
    pub branch: Branch,
    /// `angle_deg = Σ c_k · pressure_kPa^k`, ascending powers.
    pub coefficients: Vec<f64>,
    /// Sum of squared residuals, deg².
    pub residual_sum_squares: f64,
    pub samples: usize,
}

impl PolynomialFit {
    pub fn eval(&self, pressure_kpa: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * pressure_kpa + c)
    }
}

pub const MAX_POLY_DEGREE: usize = 4;

/// Fits each branch separately, in branch order.
pub fn fit_angle_pressure(samples: &[AngleSample], degree: usize) -> Result<Vec<PolynomialFit>> {
    if !(1..=MAX_POLY_DEGREE).contains(&degree) {
        return Err(MechError::domain(
            "degree",
            format!("must lie in [1, {MAX_POLY_DEGREE}], got {degree}"),
        ));
    }
    if samples.is_empty() {
        return Err(MechError::domain("samples", "no samples"));
    }
    let mut branches: BTreeMap<Branch, Vec<(f64, f64)>> = BTreeMap::new();
    for s in samples {
        finite("pressure_kPa", s.pressure_kpa)?;
        finite("angle_deg", s.angle_deg)?;
        branches
            .entry(s.branch)
            .or_default()
            .push((s.pressure_kpa, s.angle_deg));
    }
    branches
        .into_iter()
        .map(|(branch, pts)| {
            let (coefficients, residual_sum_squares) = polyfit(&pts, degree)?;
            Ok(PolynomialFit {
                branch,
                coefficients,
                residual_sum_squares,
                samples: pts.len(),
            })
        })
        .collect()
}

fn polyfit(points: &[(f64, f64)], degree: usize) -> Result<(Vec<f64>, f64)> {
    let cols = degree + 1;
    let mut distinct: Vec<f64> = points.iter().map(|p| p.0).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < cols {
        return Err(MechError::domain(
            "samples",
            format!(
                "degree {degree} needs {cols} distinct pressures, got {}",
                distinct.len()
            ),
        ));
    }
    // Scale the abscissa to [-1, 1]-ish for conditioning.
    let scale = points
        .iter()
        .fold(0.0f64, |m, p| m.max(p.0.abs()))
        .max(f64::MIN_POSITIVE);
    let a = DMatrix::from_fn(points.len(), cols, |i, j| {
        (points[i].0 / scale).powi(j as i32)
    });
    let b = DVector::from_iterator(points.len(), points.iter().map(|p| p.1));
    let solved = a
        .clone()
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| MechError::domain("samples", e.to_string()))?;
    let residual = &a * &solved - &b;
    let coefficients = solved
        .iter()
        .enumerate()
        .map(|(j, c)| c / scale.powi(j as i32))
        .collect();
    Ok((coefficients, residual.norm_squared()))
}
