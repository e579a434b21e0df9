//! Quasi-static stiffness mechanics of a soft pneumatic actuator stiffened
//! in two directions: an antagonistic air-tendon drive for bending
//! stiffness and tendon-clamped rigid side chains ("bone-like structures")
//! for lateral stiffness.
//!
//! Modules:
//!
//! - [`model`]: shared value types (material, section, chain, chamber stack).
//! - [`lateral`]: closed-form and quadrature lateral stiffness, aspect-ratio sweeps.
//! - [`bending`]: chamber moment balance and loading regimes.
//! - [`kinematics`]: constant-curvature poses and distal-point spread.
//! - [`datafit`]: slopes, stiffness ratios and least-squares calibration.
//! - [`gripper`]: static capacity estimates for a multi-finger gripper.
//! - [`io`]: CSV ingestion.
//!
//! All quantities are SI unless a name says otherwise.

pub mod bending;
pub mod datafit;
pub mod error;
pub mod gripper;
pub mod io;
pub mod kinematics;
pub mod lateral;
pub mod model;
pub mod quadrature;
pub mod units;

pub use bending::{MomentBalance, Regime, StiffnessGain};
pub use datafit::{ForceDispSeries, RatioCurve, SeriesMeta, StiffnessTable};
pub use error::{MechError, Result};
pub use gripper::{Finger, GripperConfig, ObjectShape};
pub use kinematics::{CirclePatch, Point, Pose2D};
pub use lateral::{LateralResult, SweepGrid, WorkingCondition};
pub use model::{
    derive_section, shear_modulus, ArcState, BlsModel, ChamberStack, LoadCase, Material,
    RectSection, StackSource,
};
