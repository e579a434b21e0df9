//! Static capacity estimates for a multi-finger gripper built from these
//! actuators: horizontal lift, inverse (inside-out) grasp and normal grasp.

use serde::Serialize;

use crate::bending::{stiffness_gain, StiffnessGain};
use crate::error::{finite, non_negative, positive, MechError, Result};
use crate::lateral::{lateral_stiffness, working_condition, WorkingCondition};
use crate::model::{BlsModel, ChamberStack, LoadCase};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Finger {
    pub bls: BlsModel,
    pub stack: ChamberStack,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GripperConfig {
    fingers: Vec<Finger>,
    mount_tilt_deg: f64,
    friction_coefficient: f64,
    allowable_deflection: f64,
    tendon_force_limit: Option<f64>,
}

impl GripperConfig {
    /// `allowable_deflection` in m. `tendon_force_limit` (N, total) caps the
    /// inverse-grasp capacity when given. The mount tilt is recorded but not
    /// used by the capacity estimates.
    pub fn new(
        fingers: Vec<Finger>,
        mount_tilt_deg: f64,
        friction_coefficient: f64,
        allowable_deflection: f64,
        tendon_force_limit: Option<f64>,
    ) -> Result<Self> {
        if fingers.len() < 2 {
            return Err(MechError::domain(
                "finger_count",
                format!("need at least two fingers, got {}", fingers.len()),
            ));
        }
        finite("mount_tilt_deg", mount_tilt_deg)?;
        non_negative("friction_coefficient", friction_coefficient)?;
        positive("allowable_deflection", allowable_deflection)?;
        if let Some(limit) = tendon_force_limit {
            non_negative("tendon_force_limit", limit)?;
        }
        Ok(Self {
            fingers,
            mount_tilt_deg,
            friction_coefficient,
            allowable_deflection,
            tendon_force_limit,
        })
    }

    /// `count` identical fingers.
    pub fn uniform(
        count: usize,
        finger: Finger,
        mount_tilt_deg: f64,
        friction_coefficient: f64,
        allowable_deflection: f64,
        tendon_force_limit: Option<f64>,
    ) -> Result<Self> {
        Self::new(
            vec![finger; count],
            mount_tilt_deg,
            friction_coefficient,
            allowable_deflection,
            tendon_force_limit,
        )
    }

    pub fn finger_count(&self) -> usize {
        self.fingers.len()
    }

    pub fn fingers(&self) -> &[Finger] {
        &self.fingers
    }

    pub fn mount_tilt_deg(&self) -> f64 {
        self.mount_tilt_deg
    }

    pub fn friction_coefficient(&self) -> f64 {
        self.friction_coefficient
    }

    pub fn allowable_deflection(&self) -> f64 {
        self.allowable_deflection
    }

    pub fn tendon_force_limit(&self) -> Option<f64> {
        self.tendon_force_limit
    }

    pub fn with_allowable_deflection(&self, allowable_deflection: f64) -> Result<Self> {
        positive("allowable_deflection", allowable_deflection)?;
        Ok(Self {
            allowable_deflection,
            ..self.clone()
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiftCapacity {
    #[serde(rename = "capacity_N")]
    pub capacity: f64,
    #[serde(rename = "per_finger_N")]
    pub per_finger: Vec<f64>,
    /// Working condition of each finger's chain under its share of the load.
    pub working_conditions: Vec<WorkingCondition>,
    /// False if any finger's chain leaves the working regime.
    pub valid: bool,
}

/// Fingers as parallel lateral springs, each deflected by the allowable
/// deflection: `F = Σ k_i(α)·δ_max`.
pub fn lift_capacity(config: &GripperConfig, alpha: f64) -> Result<LiftCapacity> {
    let mut per_finger = Vec::with_capacity(config.finger_count());
    let mut working_conditions = Vec::with_capacity(config.finger_count());
    for f in &config.fingers {
        let k = lateral_stiffness(&f.bls, alpha)?.stiffness;
        let force = k * config.allowable_deflection;
        working_conditions.push(working_condition(&f.bls, &LoadCase::new(force, 0.0)?));
        per_finger.push(force);
    }
    Ok(LiftCapacity {
        capacity: per_finger.iter().sum(),
        valid: working_conditions.iter().all(|w| w.satisfied),
        per_finger,
        working_conditions,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectShape {
    /// Straight bore; holding relies on friction.
    Cylindrical,
    /// Bore narrows towards the opening; the fingers hook behind the lip.
    Reduced,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InverseGrasp {
    #[serde(rename = "capacity_N")]
    pub capacity: f64,
    /// The tendon limit, not the contact model, set the capacity.
    pub tendon_limited: bool,
}

/// Holding force when grasping from the inside with `normal_force` (N) per
/// finger. Cylindrical: `n·μ·N`; reduced: `n·N`.
pub fn inverse_grasp_capacity(
    config: &GripperConfig,
    shape: ObjectShape,
    normal_force: f64,
) -> Result<InverseGrasp> {
    non_negative("normal_force", normal_force)?;
    let n = config.finger_count() as f64;
    let raw = match shape {
        ObjectShape::Cylindrical => n * config.friction_coefficient * normal_force,
        ObjectShape::Reduced => n * normal_force,
    };
    Ok(match config.tendon_force_limit {
        Some(limit) if raw > limit => InverseGrasp {
            capacity: limit,
            tendon_limited: true,
        },
        _ => InverseGrasp {
            capacity: raw,
            tendon_limited: false,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalGraspReport {
    #[serde(rename = "base_pressure_kPa")]
    pub base_pressure_kpa: f64,
    #[serde(rename = "pressure_increment_kPa")]
    pub increment_kpa: f64,
    pub per_finger: Vec<StiffnessGain>,
    /// Ratio of summed withstand moments; `None` when the base sum is zero.
    pub aggregate_gain: Option<f64>,
    /// Every finger's stack came from a fit.
    pub calibrated: bool,
    /// `"calibrated"` or `"uncalibrated model estimate"`.
    pub status: &'static str,
}

/// Withstand-moment gain of each finger for a pressure step (Pa).
pub fn normal_grasp_report(
    config: &GripperConfig,
    base_pressure: f64,
    increment: f64,
) -> Result<NormalGraspReport> {
    let per_finger = config
        .fingers
        .iter()
        .map(|f| stiffness_gain(base_pressure, increment, &f.stack))
        .collect::<Result<Vec<_>>>()?;
    let base: f64 = per_finger.iter().map(|g| g.base_withstand).sum();
    let raised: f64 = per_finger.iter().map(|g| g.raised_withstand).sum();
    let calibrated = per_finger.iter().all(|g| g.calibrated);
    Ok(NormalGraspReport {
        base_pressure_kpa: base_pressure / 1000.0,
        increment_kpa: increment / 1000.0,
        aggregate_gain: (base > 0.0).then(|| raised / base),
        calibrated,
        status: if calibrated {
            "calibrated"
        } else {
            "uncalibrated model estimate"
        },
        per_finger,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{derive_section, Material};
    use approx::assert_relative_eq;

    fn finger() -> Finger {
        let bls = BlsModel::new(
            Material::new(2.7e9, 0.35).unwrap(),
            derive_section(0.004, 1.0).unwrap(),
            0.08,
            0.006,
            0.08,
            10,
            19.62,
        )
        .unwrap();
        let stack = ChamberStack::new(9, 0.006, 0.005, 2e-7, 0.01, 0.02).unwrap();
        Finger { bls, stack }
    }

    fn config(count: usize, deflection: f64) -> GripperConfig {
        GripperConfig::uniform(count, finger(), 15.0, 0.5, deflection, None).unwrap()
    }

    #[test]
    fn lift_is_linear_in_count_and_deflection() {
        let a = 1.0;
        let base = lift_capacity(&config(4, 0.002), a).unwrap().capacity;
        let double_count = lift_capacity(&config(8, 0.002), a).unwrap().capacity;
        let double_defl = lift_capacity(&config(4, 0.004), a).unwrap().capacity;
        assert_relative_eq!(double_count, 2.0 * base, max_relative = 1e-14);
        assert_relative_eq!(double_defl, 2.0 * base, max_relative = 1e-14);
        assert!(GripperConfig::uniform(4, finger(), 15.0, 0.5, 0.0, None).is_err());
    }

    #[test]
    fn lift_reproduces_reported_magnitude() {
        // Pick E so one finger has k = 0.46 N/mm at 45°.
        let alpha = 45f64.to_radians();
        let f = finger();
        let k_now = lateral_stiffness(&f.bls, alpha).unwrap().stiffness;
        let scale = f.bls.stiffness_scale() * 460.0 / k_now;
        let bls = f
            .bls
            .with_stiffness_scale(scale)
            .unwrap()
            .with_pretension(200.0)
            .unwrap();
        let cfg = GripperConfig::uniform(4, Finger { bls, ..f }, 15.0, 0.5, 0.00924, None).unwrap();
        let lift = lift_capacity(&cfg, alpha).unwrap();
        assert_relative_eq!(lift.per_finger[0], 0.46 * 9.24, max_relative = 1e-9);
        assert_relative_eq!(lift.capacity, 17.0, max_relative = 1e-3);
        assert!(lift.valid);
    }

    #[test]
    fn lift_flags_open_chain() {
        let f = finger();
        let slack = Finger {
            bls: f.bls.with_pretension(0.0).unwrap(),
            ..f
        };
        let cfg = GripperConfig::uniform(4, slack, 15.0, 0.5, 0.002, None).unwrap();
        let lift = lift_capacity(&cfg, 1.0).unwrap();
        assert!(!lift.valid);
        assert!(lift.capacity > 0.0);
    }

    #[test]
    fn inverse_grasp() {
        let frictionless = GripperConfig::uniform(4, finger(), 15.0, 0.0, 0.002, None).unwrap();
        assert_eq!(
            inverse_grasp_capacity(&frictionless, ObjectShape::Cylindrical, 3.0)
                .unwrap()
                .capacity,
            0.0
        );
        let cfg = config(4, 0.002);
        let cyl = inverse_grasp_capacity(&cfg, ObjectShape::Cylindrical, 3.0).unwrap();
        let red = inverse_grasp_capacity(&cfg, ObjectShape::Reduced, 3.0).unwrap();
        assert_eq!(cyl.capacity, 6.0);
        assert_eq!(red.capacity, 12.0);
        for shape in [ObjectShape::Cylindrical, ObjectShape::Reduced] {
            assert_eq!(
                inverse_grasp_capacity(&cfg, shape, 0.0).unwrap().capacity,
                0.0
            );
        }
        let capped = GripperConfig::uniform(4, finger(), 15.0, 0.5, 0.002, Some(10.0)).unwrap();
        let red = inverse_grasp_capacity(&capped, ObjectShape::Reduced, 3.0).unwrap();
        assert_eq!(red.capacity, 10.0);
        assert!(red.tendon_limited);
        assert!(inverse_grasp_capacity(&cfg, ObjectShape::Reduced, -1.0).is_err());
    }

    #[test]
    fn normal_grasp() {
        let cfg = config(4, 0.002);
        let r = normal_grasp_report(&cfg, 25e3, 0.0).unwrap();
        assert_eq!(r.aggregate_gain, Some(1.0));
        assert_eq!(r.status, "uncalibrated model estimate");

        let mut fingers = cfg.fingers().to_vec();
        fingers[1].stack = fingers[1].stack.with_contact_first_moment(1e-6).unwrap();
        let mixed = GripperConfig::new(fingers, 15.0, 0.5, 0.002, None).unwrap();
        let r = normal_grasp_report(&mixed, 25e3, 25e3).unwrap();
        assert_eq!(r.per_finger.len(), 4);
        assert_ne!(r.per_finger[0].gain, r.per_finger[1].gain);
        let base: f64 = r.per_finger.iter().map(|g| g.base_withstand).sum();
        let raised: f64 = r.per_finger.iter().map(|g| g.raised_withstand).sum();
        assert_relative_eq!(
            r.aggregate_gain.unwrap(),
            raised / base,
            max_relative = 1e-15
        );
    }
}
