//! JSON run configuration.
//!
//! Keys carry their units (mm, N, kPa, MPa, deg); values are converted to SI
//! when the configuration is turned into model types. Every section is
//! optional and falls back to the example profile below; unknown keys are
//! rejected.

use std::path::Path;

use bisa_mech_core::gripper::{Finger, GripperConfig};
use bisa_mech_core::lateral::{AspectStudy, DEFAULT_MONOTONIC_TOLERANCE};
use bisa_mech_core::units::{kpa_to_pa, mm_to_m};
use bisa_mech_core::{derive_section, BlsModel, ChamberStack, LoadCase, Material};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub material: MaterialConfig,
    pub section: SectionConfig,
    pub bls: BlsConfig,
    pub chambers: ChamberConfig,
    pub gripper: GripperSection,
    pub load: LoadConfig,
    pub sweep: SweepConfig,
    pub grasp: GraspConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MaterialConfig {
    #[serde(rename = "young_modulus_MPa")]
    pub young_modulus_mpa: f64,
    pub poisson_ratio: f64,
}

impl Default for MaterialConfig {
    fn default() -> Self {
        Self {
            young_modulus_mpa: 2700.0,
            poisson_ratio: 0.35,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SectionConfig {
    pub width_mm: f64,
    pub aspect_ratio: f64,
}

impl Default for SectionConfig {
    fn default() -> Self {
        Self {
            width_mm: 4.0,
            aspect_ratio: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BlsConfig {
    pub arc_length_mm: f64,
    pub structure_height_mm: f64,
    pub segment_length_mm: f64,
    pub segment_count: u32,
    #[serde(rename = "pretension_N")]
    pub pretension_n: f64,
}

impl Default for BlsConfig {
    fn default() -> Self {
        Self {
            arc_length_mm: 80.0,
            structure_height_mm: 6.0,
            segment_length_mm: 80.0,
            segment_count: 10,
            // 2 kg hanging weight.
            pretension_n: 19.62,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChamberConfig {
    pub chamber_count: u32,
    pub half_width_mm: f64,
    pub half_height_mm: f64,
    pub contact_first_moment_mm3: f64,
    #[serde(rename = "restoring_moment_N_mm")]
    pub restoring_moment_n_mm: f64,
    #[serde(rename = "tendon_critical_moment_N_mm")]
    pub tendon_critical_moment_n_mm: f64,
}

impl Default for ChamberConfig {
    fn default() -> Self {
        Self {
            chamber_count: bisa_mech_core::model::DEFAULT_CHAMBER_COUNT,
            half_width_mm: 6.0,
            half_height_mm: 5.0,
            contact_first_moment_mm3: 200.0,
            restoring_moment_n_mm: 10.0,
            tendon_critical_moment_n_mm: 20.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GripperSection {
    pub finger_count: usize,
    pub mount_tilt_deg: f64,
    pub friction_coefficient: f64,
    pub allowable_deflection_mm: f64,
    #[serde(rename = "tendon_force_limit_N")]
    pub tendon_force_limit_n: Option<f64>,
}

impl Default for GripperSection {
    fn default() -> Self {
        Self {
            finger_count: 4,
            mount_tilt_deg: 15.0,
            friction_coefficient: 0.5,
            allowable_deflection_mm: 4.0,
            tendon_force_limit_n: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LoadConfig {
    #[serde(rename = "external_force_N")]
    pub external_force_n: f64,
    #[serde(rename = "pressure_kPa")]
    pub pressure_kpa: f64,
}

impl Default for LoadConfig {
    fn default() -> Self {
        Self {
            external_force_n: 1.0,
            pressure_kpa: 25.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// `start:end:step` in degrees, inclusive.
    pub alpha_range_deg: String,
    pub lambdas: Vec<f64>,
    /// Candidate aspect ratios for the recommendation.
    pub candidates: Vec<f64>,
    pub max_extent_mm: f64,
    pub monotonic_tolerance: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            alpha_range_deg: "1:180:1".into(),
            lambdas: vec![0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0],
            candidates: vec![0.25, 0.5, 1.0, 2.0],
            max_extent_mm: 10.0,
            monotonic_tolerance: DEFAULT_MONOTONIC_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GraspConfig {
    #[serde(rename = "base_pressure_kPa")]
    pub base_pressure_kpa: f64,
    #[serde(rename = "pressure_increment_kPa")]
    pub pressure_increment_kpa: f64,
    pub lift_angle_deg: f64,
    #[serde(rename = "normal_force_per_finger_N")]
    pub normal_force_per_finger_n: f64,
}

impl Default for GraspConfig {
    fn default() -> Self {
        Self {
            base_pressure_kpa: 25.0,
            pressure_increment_kpa: 25.0,
            lift_angle_deg: 45.0,
            normal_force_per_finger_n: 2.0,
        }
    }
}

/// Inclusive `start:end:step` range in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeRange {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl DegreeRange {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = text.split(':').collect();
        let bad = |why: &str| CliError::Usage(format!("alpha range '{text}': {why}"));
        if parts.len() != 3 {
            return Err(bad("expected start:end:step"));
        }
        let nums: Vec<f64> = parts
            .iter()
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad("not a number"))?;
        let (start, end, step) = (nums[0], nums[1], nums[2]);
        if !(start.is_finite() && end.is_finite() && step.is_finite()) {
            return Err(bad("values must be finite"));
        }
        if start <= 0.0 || end > 180.0 {
            return Err(bad("angles must lie in (0, 180] degrees"));
        }
        if step <= 0.0 || end < start {
            return Err(bad("need step > 0 and end >= start"));
        }
        Ok(Self { start, end, step })
    }

    /// Angles in degrees, `start + i·step` up to `end`.
    pub fn degrees(&self) -> Vec<f64> {
        let count = ((self.end - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| self.start + i as f64 * self.step)
            .collect()
    }

    pub fn radians(&self) -> Vec<f64> {
        self.degrees().into_iter().map(f64::to_radians).collect()
    }
}

fn domain(e: bisa_mech_core::MechError) -> CliError {
    CliError::Usage(format!("config: {e}"))
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let cfg: Self = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Builds every model type once so that bad values are reported before
    /// any computation.
    pub fn validate(&self) -> Result<(), CliError> {
        self.bls_model()?;
        self.chamber_stack()?;
        self.gripper_config()?;
        self.load_case()?;
        DegreeRange::parse(&self.sweep.alpha_range_deg)?;
        if self.sweep.lambdas.is_empty() || self.sweep.candidates.is_empty() {
            return Err(CliError::Usage(
                "config: sweep lists must not be empty".into(),
            ));
        }
        Ok(())
    }

    pub fn material(&self) -> Result<Material, CliError> {
        Material::new(
            self.material.young_modulus_mpa * 1e6,
            self.material.poisson_ratio,
        )
        .map_err(domain)
    }

    pub fn bls_model(&self) -> Result<BlsModel, CliError> {
        let section = derive_section(mm_to_m(self.section.width_mm), self.section.aspect_ratio)
            .map_err(domain)?;
        BlsModel::new(
            self.material()?,
            section,
            mm_to_m(self.bls.arc_length_mm),
            mm_to_m(self.bls.structure_height_mm),
            mm_to_m(self.bls.segment_length_mm),
            self.bls.segment_count,
            self.bls.pretension_n,
        )
        .map_err(domain)
    }

    pub fn chamber_stack(&self) -> Result<ChamberStack, CliError> {
        let c = &self.chambers;
        ChamberStack::new(
            c.chamber_count,
            mm_to_m(c.half_width_mm),
            mm_to_m(c.half_height_mm),
            c.contact_first_moment_mm3 * 1e-9,
            c.restoring_moment_n_mm / 1000.0,
            c.tendon_critical_moment_n_mm / 1000.0,
        )
        .map_err(domain)
    }

    pub fn gripper_with(
        &self,
        bls: BlsModel,
        stack: ChamberStack,
    ) -> Result<GripperConfig, CliError> {
        let g = &self.gripper;
        GripperConfig::uniform(
            g.finger_count,
            Finger { bls, stack },
            g.mount_tilt_deg,
            g.friction_coefficient,
            mm_to_m(g.allowable_deflection_mm),
            g.tendon_force_limit_n,
        )
        .map_err(domain)
    }

    pub fn gripper_config(&self) -> Result<GripperConfig, CliError> {
        self.gripper_with(self.bls_model()?, self.chamber_stack()?)
    }

    pub fn load_case(&self) -> Result<LoadCase, CliError> {
        LoadCase::new(
            self.load.external_force_n,
            kpa_to_pa(self.load.pressure_kpa),
        )
        .map_err(domain)
    }

    pub fn aspect_study(&self) -> AspectStudy {
        AspectStudy {
            poisson_ratio: self.material.poisson_ratio,
            width: mm_to_m(self.section.width_mm),
            max_extent: mm_to_m(self.sweep.max_extent_mm),
            alpha_range_deg: (0.0, 180.0),
            monotonic_tolerance: self.sweep.monotonic_tolerance,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_profile_is_valid() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = serde_json::from_str::<RunConfig>(
            r#"{"material":{"young_modulus_MPa":1,"colour":"red"}}"#,
        );
        assert!(err.is_err());
        let err = serde_json::from_str::<RunConfig>(r#"{"extra":{}}"#);
        assert!(err.is_err());
    }

    #[test]
    fn partial_sections_fill_defaults() {
        let cfg: RunConfig = serde_json::from_str(r#"{"section":{"aspect_ratio":2}}"#).unwrap();
        assert_eq!(cfg.section.width_mm, 4.0);
        assert_eq!(cfg.section.aspect_ratio, 2.0);
    }

    #[test]
    fn ranges() {
        assert_eq!(DegreeRange::parse("10:180:10").unwrap().degrees().len(), 18);
        assert_eq!(DegreeRange::parse("1:180:1").unwrap().degrees().len(), 180);
        assert_eq!(DegreeRange::parse("45:45:1").unwrap().degrees(), vec![45.0]);
        for bad in ["0:180:1", "1:181:1", "10:5:1", "1:2", "a:b:c", "1:10:0"] {
            assert!(DegreeRange::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn invalid_values_fail_validation() {
        let mut cfg = RunConfig::default();
        cfg.material.poisson_ratio = 0.6;
        assert!(matches!(cfg.validate(), Err(CliError::Usage(_))));
    }
}
