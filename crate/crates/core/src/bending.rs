//! Air-tendon bending stiffness: quasi-static moment balance across the
//! chamber stack.
//!
//! With `n` chambers, the external moment the actuator withstands is
//!
//! ```text
//! M_f = 2(n−1)·M_p + (n−1)·M_c − 2(n−1)·M_w
//! M_p = 4·P·a·b²        (pressure on the lateral walls)
//! M_c = P·S_contact     (pressure on the contact between adjoining chambers)
//! ```
//!
//! `M_w` is the elastic restoring moment of the inflated chambers and is
//! held constant at a fixed bending angle.

use serde::Serialize;

use crate::error::{non_negative, positive, MechError, Result};
use crate::model::ChamberStack;

/// Moment from pressure on one chamber's lateral wall, `4·P·a·b²`, in N·m.
pub fn pressure_moment(stack: &ChamberStack, pressure: f64) -> f64 {
    4.0 * pressure * stack.half_width() * stack.half_height().powi(2)
}

/// Contact moment between two adjoining chambers, `P·S_contact`, in N·m.
pub fn contact_moment(stack: &ChamberStack, pressure: f64) -> f64 {
    pressure * stack.contact_first_moment()
}

/// Terms of the moment balance at one pressure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentBalance {
    pub chamber_count: u32,
    #[serde(rename = "pressure_moment_N_m")]
    pub pressure_moment: f64,
    #[serde(rename = "contact_moment_N_m")]
    pub contact_moment: f64,
    #[serde(rename = "restoring_moment_N_m")]
    pub restoring_moment: f64,
    /// Withstand moment `M_f`, clamped at zero.
    #[serde(rename = "withstand_moment_N_m")]
    pub withstand: f64,
    /// `2(n−1)M_p + (n−1)M_c − 2(n−1)M_w − M_f`; non-zero only when clamped.
    #[serde(rename = "residual_N_m")]
    pub residual: f64,
    /// The restoring moment exceeds the pressure terms, so the chambers are
    /// not yet pressed against each other.
    pub pre_contact: bool,
}

impl MomentBalance {
    /// Balances explicit per-chamber moments.
    pub fn from_moments(
        chamber_count: u32,
        pressure_moment: f64,
        contact_moment: f64,
        restoring_moment: f64,
    ) -> Result<Self> {
        if chamber_count < 2 {
            return Err(MechError::domain(
                "chamber_count",
                format!("must be >= 2, got {chamber_count}"),
            ));
        }
        non_negative("pressure_moment", pressure_moment)?;
        non_negative("contact_moment", contact_moment)?;
        non_negative("restoring_moment", restoring_moment)?;
        let n1 = f64::from(chamber_count - 1);
        let raw = 2.0 * n1 * pressure_moment + n1 * contact_moment - 2.0 * n1 * restoring_moment;
        let withstand = raw.max(0.0);
        Ok(Self {
            chamber_count,
            pressure_moment,
            contact_moment,
            restoring_moment,
            withstand,
            residual: raw - withstand,
            pre_contact: raw < 0.0,
        })
    }
}

/// Full moment balance of the stack at chamber pressure `pressure` (Pa).
pub fn withstand_moment(stack: &ChamberStack, pressure: f64) -> Result<MomentBalance> {
    non_negative("pressure", pressure)?;
    MomentBalance::from_moments(
        stack.chamber_count(),
        pressure_moment(stack, pressure),
        contact_moment(stack, pressure),
        stack.restoring_moment(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Below the tendon critical moment; the tendon holds the shape.
    TendonTaut,
    /// Between `M_CR` and the withstand moment (both ends inclusive).
    QuasistaticDeflection,
    /// Beyond what the pressurised stack can balance.
    Overload,
}

/// Classifies an external moment (N·m) against `M_CR` and the withstand
/// moment at `pressure`.
pub fn classify_regime(external: f64, stack: &ChamberStack, pressure: f64) -> Result<Regime> {
    non_negative("external_moment", external)?;
    let withstand = withstand_moment(stack, pressure)?.withstand;
    Ok(if external < stack.tendon_critical_moment() {
        Regime::TendonTaut
    } else if external <= withstand {
        Regime::QuasistaticDeflection
    } else {
        Regime::Overload
    })
}

/// Ratio of withstand moments after and before a pressure increment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StiffnessGain {
    /// `None` when the base withstand moment is zero.
    pub gain: Option<f64>,
    #[serde(rename = "base_withstand_N_m")]
    pub base_withstand: f64,
    #[serde(rename = "raised_withstand_N_m")]
    pub raised_withstand: f64,
    /// False unless the stack parameters were fitted from measurements.
    pub calibrated: bool,
}

/// `M_f(P_base + ΔP) / M_f(P_base)`.
pub fn stiffness_gain(
    base_pressure: f64,
    increment: f64,
    stack: &ChamberStack,
) -> Result<StiffnessGain> {
    positive("base_pressure", base_pressure)?;
    non_negative("pressure_increment", increment)?;
    let base = withstand_moment(stack, base_pressure)?.withstand;
    let raised = withstand_moment(stack, base_pressure + increment)?.withstand;
    Ok(StiffnessGain {
        gain: (base > 0.0).then(|| raised / base),
        base_withstand: base,
        raised_withstand: raised,
        calibrated: stack.is_calibrated(),
    })
}
