//! `stiffness`: single-point lateral or bending evaluation.

use std::io::Write;

use bisa_mech_core::bending::{classify_regime, withstand_moment};
use bisa_mech_core::lateral::{lateral_stiffness, working_condition};
use bisa_mech_core::units::kpa_to_pa;
use bisa_mech_core::{LateralResult, LoadCase, MomentBalance, Regime, WorkingCondition};
use serde::Serialize;

use crate::config::RunConfig;
use crate::{print_json, CliError, StiffnessArgs, StiffnessMode};

#[derive(Debug, Serialize)]
struct LateralOut {
    mode: &'static str,
    alpha_deg: f64,
    #[serde(rename = "external_force_N")]
    external_force_n: f64,
    #[serde(rename = "stiffness_N_per_mm")]
    stiffness_n_per_mm: f64,
    result: LateralResult,
    working_condition: WorkingCondition,
}

#[derive(Debug, Serialize)]
struct BendingOut {
    mode: &'static str,
    #[serde(rename = "pressure_kPa")]
    pressure_kpa: f64,
    #[serde(rename = "withstand_moment_N_mm")]
    withstand_n_mm: f64,
    balance: MomentBalance,
    #[serde(rename = "external_moment_N_mm")]
    external_moment_n_mm: Option<f64>,
    regime: Option<Regime>,
    working_condition: WorkingCondition,
}

fn check_alpha(alpha_deg: f64) -> Result<f64, CliError> {
    if alpha_deg.is_finite() && alpha_deg > 0.0 && alpha_deg <= 180.0 {
        Ok(alpha_deg.to_radians())
    } else {
        Err(CliError::Usage(format!(
            "--alpha {alpha_deg}: bending angle must lie in (0, 180] degrees"
        )))
    }
}

pub fn run(args: &StiffnessArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cfg = RunConfig::load(args.config.as_deref())?;
    let alpha = check_alpha(args.alpha)?;
    let model = cfg.bls_model()?;
    let force = args.external_force_n.unwrap_or(cfg.load.external_force_n);
    let pressure_kpa = args.pressure_kpa.unwrap_or(cfg.load.pressure_kpa);
    let load = LoadCase::new(force, kpa_to_pa(pressure_kpa))?;
    let wc = working_condition(&model, &load);

    match args.mode {
        StiffnessMode::Lateral => {
            let result = lateral_stiffness(&model, alpha)?;
            print_json(
                stdout,
                &LateralOut {
                    mode: "lateral",
                    alpha_deg: args.alpha,
                    external_force_n: force,
                    stiffness_n_per_mm: result.stiffness / 1000.0,
                    result,
                    working_condition: wc,
                },
            )?;
        }
        StiffnessMode::Bending => {
            let stack = cfg.chamber_stack()?;
            let balance = withstand_moment(&stack, load.pressure())?;
            let regime = args
                .external_moment_n_mm
                .map(|m| classify_regime(m / 1000.0, &stack, load.pressure()))
                .transpose()?;
            print_json(
                stdout,
                &BendingOut {
                    mode: "bending",
                    pressure_kpa,
                    withstand_n_mm: balance.withstand * 1000.0,
                    balance,
                    external_moment_n_mm: args.external_moment_n_mm,
                    regime,
                    working_condition: wc,
                },
            )?;
        }
    }
    Ok(())
}
