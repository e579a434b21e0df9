//! Lateral stiffness of a bone-like structure.
//!
//! The chain is treated as a circular cantilever of constant arc length `C`
//! bent through `α`, loaded at the tip perpendicular to its plane. Bending
//! and torsion strain energies give the tip compliance
//!
//! ```text
//! 1/k = C³ · [ A_b(α) / (4EI) + A_t(α) / (4G·I_p) ]
//! A_b(α) = 2/α² − sin 2α / α³
//! A_t(α) = 6/α² + sin 2α / α³ − 8 sin α / α³
//! ```
//!
//! which, with `G = E/(2(1+ν))` and `I_p = I(1+λ²)`, is `k = 4EI/C³ · F(α)`
//! where `F(α) = 1 / [A_b + 2(1+ν)·A_t/(1+λ²)]`.
//!
//! Angles are restricted to `(0, π]`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{finite, positive, MechError, Result};
use crate::model::{BlsModel, LoadCase};
use crate::quadrature::simpson;

/// Below this angle the influence functions are summed from their Taylor
/// series. Above it the closed forms lose less than ~1e-13 to cancellation.
pub const SERIES_CUTOFF: f64 = 0.25;

/// Minimum Simpson panel count accepted by [`lateral_stiffness_quadrature`].
pub const MIN_PANELS: usize = 16;

fn check_angle(alpha: f64) -> Result<f64> {
    finite("alpha", alpha)?;
    if alpha <= 0.0 || alpha > PI {
        return Err(MechError::domain(
            "alpha",
            format!("bending angle must lie in (0, π], got {alpha} rad"),
        ));
    }
    Ok(alpha)
}

/// Sums `Σ_{k≥1} sign(k)·coef(k)·α^{2k−2}/(2k+1)!` until the terms vanish.
fn series(alpha: f64, coef: impl Fn(i32) -> f64) -> f64 {
    let x2 = alpha * alpha;
    let mut sum = 0.0;
    let mut power = 1.0; // α^{2k-2}
    let mut fact = 6.0; // (2k+1)!
    for k in 1..40 {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let term = sign * coef(k) * power / fact;
        sum += term;
        if k > 2 && term.abs() <= f64::EPSILON * 1e-3 * sum.abs().max(f64::MIN_POSITIVE) {
            break;
        }
        power *= x2;
        let m = f64::from(2 * k + 2);
        fact *= m * (m + 1.0);
    }
    sum
}

/// Bending influence `A_b(α) = 2/α² − sin 2α / α³`; tends to 4/3 as α → 0.
pub fn influence_bending(alpha: f64) -> Result<f64> {
    check_angle(alpha)?;
    if alpha < SERIES_CUTOFF {
        // (2α − sin 2α)/α³ = Σ (−1)^{k+1} 2^{2k+1} α^{2k−2} / (2k+1)!
        Ok(series(alpha, |k| 2f64.powi(2 * k + 1)))
    } else {
        Ok(2.0 / (alpha * alpha) - (2.0 * alpha).sin() / alpha.powi(3))
    }
}

/// Torsion influence `A_t(α) = 6/α² + sin 2α/α³ − 8 sin α/α³`; behaves like
/// `α²/5` near zero.
pub fn influence_torsion(alpha: f64) -> Result<f64> {
    check_angle(alpha)?;
    if alpha < SERIES_CUTOFF {
        // (6α + sin 2α − 8 sin α)/α³ = Σ (−1)^{k+1} (8 − 2^{2k+1}) α^{2k−2} / (2k+1)!
        Ok(series(alpha, |k| 8.0 - 2f64.powi(2 * k + 1)))
    } else {
        Ok(6.0 / (alpha * alpha) + (2.0 * alpha).sin() / alpha.powi(3)
            - 8.0 * alpha.sin() / alpha.powi(3))
    }
}

/// Torsion weight `2(1+ν)/(1+λ²)`, i.e. `EI / (G·I_p)`.
fn torsion_weight(nu: f64, lambda: f64) -> f64 {
    2.0 * (1.0 + nu) / (1.0 + lambda * lambda)
}

fn check_nu_lambda(nu: f64, lambda: f64) -> Result<()> {
    finite("poisson_ratio", nu)?;
    if !(0.0..0.5).contains(&nu) {
        return Err(MechError::domain(
            "poisson_ratio",
            format!("must lie in [0, 0.5), got {nu}"),
        ));
    }
    positive("aspect_ratio", lambda)?;
    Ok(())
}

/// Dimensionless evaluation function
/// `F(α) = 1 / [A_b(α) + 2(1+ν)·A_t(α)/(1+λ²)]`.
pub fn evaluation_function(alpha: f64, nu: f64, lambda: f64) -> Result<f64> {
    check_nu_lambda(nu, lambda)?;
    let ab = influence_bending(alpha)?;
    let at = influence_torsion(alpha)?;
    Ok(1.0 / (ab + torsion_weight(nu, lambda) * at))
}

/// Closed-form lateral stiffness and its intermediate factors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LateralResult {
    pub alpha_rad: f64,
    /// Tip stiffness in N/m.
    #[serde(rename = "stiffness_N_per_m")]
    pub stiffness: f64,
    /// `F(α)`.
    pub evaluation: f64,
    pub a_bending: f64,
    pub a_torsion: f64,
}

/// `k = (4EI/C³)·F(α)` for the model at bending angle `alpha`.
pub fn lateral_stiffness(model: &BlsModel, alpha: f64) -> Result<LateralResult> {
    let a_bending = influence_bending(alpha)?;
    let a_torsion = influence_torsion(alpha)?;
    let section = model.section();
    let weight = torsion_weight(model.material().poisson_ratio(), section.aspect_ratio());
    let evaluation = 1.0 / (a_bending + weight * a_torsion);
    Ok(LateralResult {
        alpha_rad: alpha,
        stiffness: 4.0 * model.stiffness_scale() * evaluation,
        evaluation,
        a_bending,
        a_torsion,
    })
}

/// Lateral stiffness by direct integration of the strain energy.
///
/// With tip force `F` the moments along the arc `φ ∈ [0, α]` are
/// `M_b = F·R·sin(α−φ)` and `M_t = F·R·(1 − cos(α−φ))`, `R = C/α`. The
/// energy `U = ∫M_b²/(2EI) ds + ∫M_t²/(2G·I_p) ds` is quadratic in `F`, so
/// `δ = ∂U/∂F = (1/F)·2U` and the stiffness is `F/δ`. Both integrals are
/// evaluated with composite Simpson on `panels` panels. Does not share any
/// code path with [`lateral_stiffness`].
pub fn lateral_stiffness_quadrature(model: &BlsModel, alpha: f64, panels: usize) -> Result<f64> {
    check_angle(alpha)?;
    if panels < MIN_PANELS {
        return Err(MechError::domain(
            "panels",
            format!("need at least {MIN_PANELS} panels, got {panels}"),
        ));
    }
    let radius = model.arc_length() / alpha;
    let ei = model.flexural_rigidity();
    let gj = model.torsional_rigidity();
    // Unit tip force; ds = R dφ.
    let energy_density = |phi: f64| {
        let u = alpha - phi;
        let m_bend = radius * u.sin();
        // 1 − cos u, written without cancellation.
        let m_twist = radius * 2.0 * (0.5 * u).sin().powi(2);
        (m_bend * m_bend / (2.0 * ei) + m_twist * m_twist / (2.0 * gj)) * radius
    };
    let energy = simpson(energy_density, 0.0, alpha, panels);
    let deflection = 2.0 * energy;
    Ok(1.0 / deflection)
}

/// Outcome of the tendon working-condition check `F_t·h ≥ F_ext·L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WorkingCondition {
    pub satisfied: bool,
    /// `F_t·h − F_ext·L` in N·m.
    #[serde(rename = "margin_N_m")]
    pub margin: f64,
}

/// Checks whether the chain stays closed under the tip load. When it does
/// not, the continuous-beam stiffness prediction does not apply.
pub fn working_condition(model: &BlsModel, load: &LoadCase) -> WorkingCondition {
    let margin = model.pretension() * model.structure_height()
        - load.external_force() * model.segment_length();
    WorkingCondition {
        satisfied: margin >= 0.0,
        margin,
    }
}

/// `F(α)` sampled over a grid of bending angles (rows) and aspect ratios
/// (columns).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepGrid {
    #[serde(rename = "alphas_rad")]
    pub alphas: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub poisson_ratio: f64,
    /// `values[i][j] = F(alphas[i], ν, lambdas[j])`.
    pub values: Vec<Vec<f64>>,
}

fn check_sweep_inputs(alphas: &[f64], lambdas: &[f64], nu: f64) -> Result<()> {
    if alphas.is_empty() {
        return Err(MechError::domain("alphas", "empty angle list"));
    }
    if lambdas.is_empty() {
        return Err(MechError::domain("lambdas", "empty aspect-ratio list"));
    }
    for &a in alphas {
        check_angle(a)?;
    }
    if alphas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(MechError::domain("alphas", "must be strictly increasing"));
    }
    for &l in lambdas {
        check_nu_lambda(nu, l)?;
    }
    Ok(())
}

fn sweep_row(alpha: f64, lambdas: &[f64], nu: f64) -> Vec<f64> {
    lambdas
        .iter()
        .map(|&l| evaluation_function(alpha, nu, l).expect("inputs validated"))
        .collect()
}

/// Evaluates `F(α, ν, λ)` on the grid, row per angle.
pub fn sweep_evaluation(alphas: &[f64], lambdas: &[f64], nu: f64) -> Result<SweepGrid> {
    check_sweep_inputs(alphas, lambdas, nu)?;
    let values = alphas.iter().map(|&a| sweep_row(a, lambdas, nu)).collect();
    Ok(SweepGrid {
        alphas: alphas.to_vec(),
        lambdas: lambdas.to_vec(),
        poisson_ratio: nu,
        values,
    })
}

/// Same as [`sweep_evaluation`] but rows are computed on the current rayon
/// pool. Output is identical to the sequential version.
pub fn sweep_evaluation_par(alphas: &[f64], lambdas: &[f64], nu: f64) -> Result<SweepGrid> {
    check_sweep_inputs(alphas, lambdas, nu)?;
    let values = alphas
        .par_iter()
        .map(|&a| sweep_row(a, lambdas, nu))
        .collect();
    Ok(SweepGrid {
        alphas: alphas.to_vec(),
        lambdas: lambdas.to_vec(),
        poisson_ratio: nu,
        values,
    })
}

impl SweepGrid {
    /// Column of `F` values for the `j`-th aspect ratio.
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.values.iter().map(|row| row[j]).collect()
    }

    /// CSV with header `alpha_deg,lambda=<λ>...` and one row per angle.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha_deg");
        for l in &self.lambdas {
            out.push_str(&format!(",lambda={l}"));
        }
        out.push('\n');
        for (a, row) in self.alphas.iter().zip(&self.values) {
            out.push_str(&format_degrees(*a));
            for v in row {
                out.push_str(&format!(",{v}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("grid serializes")
    }
}

/// Degrees rounded to 1e-9 so that grids built from whole degrees print
/// as whole degrees.
pub fn format_degrees(alpha: f64) -> String {
    let d = (alpha.to_degrees() * 1e9).round() / 1e9;
    format!("{d}")
}

/// Inputs of an aspect-ratio selection study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AspectStudy {
    pub poisson_ratio: f64,
    /// Section width `b` in m.
    #[serde(rename = "width_m")]
    pub width: f64,
    /// Largest admissible section dimension in m.
    #[serde(rename = "max_extent_m")]
    pub max_extent: f64,
    /// Angle range `(start, end]` in degrees, sampled every degree.
    pub alpha_range_deg: (f64, f64),
    /// Largest relative drop of `F` below its running maximum that still
    /// counts as non-decreasing.
    pub monotonic_tolerance: f64,
}

/// Default for [`AspectStudy::monotonic_tolerance`]: 0.1 %.
pub const DEFAULT_MONOTONIC_TOLERANCE: f64 = 1e-3;

impl AspectStudy {
    pub fn new(poisson_ratio: f64, width: f64, max_extent: f64) -> Self {
        Self {
            poisson_ratio,
            width,
            max_extent,
            alpha_range_deg: (0.0, 180.0),
            monotonic_tolerance: DEFAULT_MONOTONIC_TOLERANCE,
        }
    }

    fn sample_angles(&self) -> Result<Vec<f64>> {
        let (lo, hi) = self.alpha_range_deg;
        finite("alpha_range", lo)?;
        finite("alpha_range", hi)?;
        if lo < 0.0 || hi > 180.0 || hi <= lo {
            return Err(MechError::domain(
                "alpha_range",
                format!("need 0 <= start < end <= 180 degrees, got ({lo}, {hi}]"),
            ));
        }
        let steps = (hi - lo + 1e-9).floor() as usize;
        let mut out: Vec<f64> = (1..=steps).map(|i| (lo + i as f64).to_radians()).collect();
        if out.is_empty() || (hi - lo - steps as f64).abs() > 1e-9 {
            out.push(hi.to_radians());
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Rejection {
    /// `b` or `λ·b` exceeds the admissible extent.
    TooLarge {
        #[serde(rename = "extent_m")]
        extent: f64,
    },
    /// `F` drops by more than the tolerance somewhere in the range.
    Decreasing {
        /// Largest relative drop below the running maximum.
        relative_drop: f64,
        at_deg: f64,
    },
    Invalid {
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateVerdict {
    pub lambda: f64,
    pub rejection: Option<Rejection>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AspectRecommendation {
    /// `None` when no candidate is admissible.
    pub recommended: Option<f64>,
    pub candidates: Vec<CandidateVerdict>,
}

/// Largest relative drop of `values` below their running maximum, and the
/// index where it happens.
pub fn max_relative_drop(values: &[f64]) -> (f64, usize) {
    let mut peak = f64::NEG_INFINITY;
    let mut worst = (0.0, 0);
    for (i, &v) in values.iter().enumerate() {
        peak = peak.max(v);
        let drop = (peak - v) / peak;
        if drop > worst.0 {
            worst = (drop, i);
        }
    }
    worst
}

/// Picks the smallest aspect ratio whose section fits within the extent
/// limit and whose `F(α)` does not decrease over the study range.
pub fn recommend_aspect_ratio(
    candidates: &[f64],
    study: &AspectStudy,
) -> Result<AspectRecommendation> {
    if candidates.is_empty() {
        return Err(MechError::domain("candidates", "empty candidate list"));
    }
    positive("max_extent", study.max_extent)?;
    positive("width", study.width)?;
    let angles = study.sample_angles()?;

    let mut sorted = candidates.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();

    let mut verdicts = Vec::with_capacity(sorted.len());
    let mut recommended = None;
    for lambda in sorted {
        let rejection = assess_candidate(lambda, &angles, study);
        if rejection.is_none() && recommended.is_none() {
            recommended = Some(lambda);
        }
        verdicts.push(CandidateVerdict { lambda, rejection });
    }
    Ok(AspectRecommendation {
        recommended,
        candidates: verdicts,
    })
}

fn assess_candidate(lambda: f64, angles: &[f64], study: &AspectStudy) -> Option<Rejection> {
    if let Err(e) = check_nu_lambda(study.poisson_ratio, lambda) {
        return Some(Rejection::Invalid {
            message: e.to_string(),
        });
    }
    let extent = study.width.max(lambda * study.width);
    if extent > study.max_extent {
        return Some(Rejection::TooLarge { extent });
    }
    let values: Vec<f64> = angles
        .iter()
        .map(|&a| evaluation_function(a, study.poisson_ratio, lambda).expect("validated"))
        .collect();
    let (drop, at) = max_relative_drop(&values);
    if drop > study.monotonic_tolerance {
        return Some(Rejection::Decreasing {
            relative_drop: drop,
            at_deg: (angles[at].to_degrees() * 1e9).round() / 1e9,
        });
    }
    None
}
