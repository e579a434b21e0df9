//! `sweep`: influence functions and evaluation-function grid.

use std::io::Write;

use bisa_mech_core::lateral::{
    format_degrees, influence_bending, influence_torsion, sweep_evaluation_par,
};
use bisa_mech_core::SweepGrid;
use serde::Serialize;

use crate::config::{DegreeRange, RunConfig};
use crate::{create_dir, print_json, write_file, CliError, SweepArgs};

pub const INFLUENCE_FILE: &str = "influence.csv";
pub const EVALUATION_CSV: &str = "evaluation.csv";
pub const EVALUATION_JSON: &str = "evaluation.json";

/// Resolved sweep inputs after applying flag overrides to the config.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPlan {
    pub range: DegreeRange,
    pub lambdas: Vec<f64>,
    pub nu: f64,
}

impl SweepPlan {
    pub fn from_config(cfg: &RunConfig) -> Result<Self, CliError> {
        Ok(Self {
            range: DegreeRange::parse(&cfg.sweep.alpha_range_deg)?,
            lambdas: cfg.sweep.lambdas.clone(),
            nu: cfg.material.poisson_ratio,
        })
    }

    pub fn grid(&self) -> Result<SweepGrid, CliError> {
        Ok(sweep_evaluation_par(
            &self.range.radians(),
            &self.lambdas,
            self.nu,
        )?)
    }
}

/// `alpha_deg,A_bending,A_torsion,torsion_to_bending` rows.
pub fn influence_csv(alphas: &[f64]) -> Result<String, CliError> {
    let mut out = String::from("alpha_deg,A_bending,A_torsion,torsion_to_bending\n");
    for &a in alphas {
        let ab = influence_bending(a)?;
        let at = influence_torsion(a)?;
        out.push_str(&format!("{},{ab},{at},{}\n", format_degrees(a), at / ab));
    }
    Ok(out)
}

#[derive(Serialize)]
struct SweepSummary<'a> {
    out_dir: String,
    files: [&'a str; 3],
    rows: usize,
    lambdas: &'a [f64],
    poisson_ratio: f64,
}

pub fn run(args: &SweepArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cfg = RunConfig::load(args.config.as_deref())?;
    let mut plan = SweepPlan::from_config(&cfg)?;
    if let Some(r) = &args.alpha_range {
        plan.range = DegreeRange::parse(r)?;
    }
    if let Some(l) = &args.lambda_list {
        plan.lambdas = l.clone();
    }
    if let Some(nu) = args.nu {
        plan.nu = nu;
    }
    let grid = plan.grid()?;
    let influence = influence_csv(&grid.alphas)?;

    create_dir(&args.out)?;
    write_file(&args.out.join(INFLUENCE_FILE), &influence)?;
    write_file(&args.out.join(EVALUATION_CSV), &grid.to_csv())?;
    let mut json = grid.to_json();
    json.push('\n');
    write_file(&args.out.join(EVALUATION_JSON), &json)?;

    print_json(
        stdout,
        &SweepSummary {
            out_dir: args.out.display().to_string(),
            files: [INFLUENCE_FILE, EVALUATION_CSV, EVALUATION_JSON],
            rows: grid.alphas.len(),
            lambdas: &grid.lambdas,
            poisson_ratio: grid.poisson_ratio,
        },
    )?;
    Ok(())
}
