//! `synth`: noiseless synthetic data generated from the configured models,
//! in the same file formats `fit` reads. Useful for exercising the whole
//! pipeline without hardware.

use std::io::Write;
use std::path::Path;

use bisa_mech_core::bending::withstand_moment;
use bisa_mech_core::io::{
    ANGLE_PRESSURE_HEADER, CHAMBER_POINTS_HEADER, FORCE_DISP_HEADER, LATERAL_POINTS_HEADER,
};
use bisa_mech_core::lateral::lateral_stiffness;
use bisa_mech_core::units::{kpa_to_pa, mass_to_force};
use bisa_mech_core::{BlsModel, SeriesMeta};
use serde::Serialize;

use crate::config::RunConfig;
use crate::{create_dir, print_json, to_json, write_file, CliError, SynthArgs};

pub const SLOPE_DIR: &str = "slope";
pub const LATERAL_FILE: &str = "lateral_points.csv";
pub const CHAMBER_FILE: &str = "chamber_points.csv";
pub const ANGLE_PRESSURE_FILE: &str = "angle_pressure.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

pub const SLOPE_ANGLES_DEG: [f64; 5] = [0.0, 45.0, 90.0, 135.0, 180.0];
pub const SLOPE_MASSES_KG: [f64; 2] = [1.0, 2.0];
pub const LATERAL_ANGLES_DEG: [f64; 5] = [30.0, 60.0, 90.0, 135.0, 180.0];
pub const CHAMBER_PRESSURES_KPA: [f64; 4] = [20.0, 30.0, 40.0, 55.0];
const DISPLACEMENTS_MM: [f64; 6] = [0.0, 0.5, 1.0, 1.5, 2.0, 2.5];
const AP_PRESSURES_KPA: [f64; 7] = [0.0, 10.0, 20.0, 30.0, 40.0, 50.0, 60.0];
/// `angle_deg = c0 + c1·P + c2·P²` per branch.
const INFLATE_POLY: [f64; 3] = [0.0, 1.5, 0.02];
const DEFLATE_POLY: [f64; 3] = [2.0, 1.8, 0.015];

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub synthetic: bool,
    pub description: &'static str,
    pub slope_files: Vec<String>,
    pub lateral_file: &'static str,
    pub chamber_file: &'static str,
    pub angle_pressure_file: &'static str,
}

/// Lateral stiffness in N/m; 0° maps to the straight-beam value `3EI/C³`.
fn stiffness_at(bls: &BlsModel, deg: f64) -> Result<f64, CliError> {
    if deg == 0.0 {
        Ok(3.0 * bls.stiffness_scale())
    } else {
        Ok(lateral_stiffness(bls, deg.to_radians())?.stiffness)
    }
}

fn header(cols: &[&str]) -> String {
    let mut s = cols.join(",");
    s.push('\n');
    s
}

fn poly(c: &[f64; 3], p: f64) -> f64 {
    c[0] + c[1] * p + c[2] * p * p
}

fn write_slope_set(dir: &Path, bls: &BlsModel) -> Result<Vec<String>, CliError> {
    create_dir(dir)?;
    let mut names = Vec::new();
    for &mass in &SLOPE_MASSES_KG {
        let chain = bls.with_pretension(mass_to_force(mass))?;
        let label = format!("mass_{mass}kg");
        for &deg in &SLOPE_ANGLES_DEG {
            let k = stiffness_at(&chain, deg)?;
            let mut csv = header(&FORCE_DISP_HEADER);
            for &x in &DISPLACEMENTS_MM {
                csv.push_str(&format!("{x},{}\n", k * x / 1000.0));
            }
            let stem = format!("{label}_a{deg:03}");
            let meta = SeriesMeta {
                bending_angle_deg: deg,
                pulling_mass_kg: mass,
                pressure_step_kpa: 0.0,
                label: label.clone(),
            };
            write_file(&dir.join(format!("{stem}.csv")), &csv)?;
            write_file(&dir.join(format!("{stem}.json")), &to_json(&meta))?;
            names.push(format!("{SLOPE_DIR}/{stem}.csv"));
        }
    }
    Ok(names)
}

/// Writes the synthetic data set into `out`.
pub fn generate(cfg: &RunConfig, out: &Path) -> Result<Manifest, CliError> {
    let bls = cfg.bls_model()?;
    let stack = cfg.chamber_stack()?;
    create_dir(out)?;

    let slope_files = write_slope_set(&out.join(SLOPE_DIR), &bls)?;

    let mut lateral = header(&LATERAL_POINTS_HEADER);
    for &deg in &LATERAL_ANGLES_DEG {
        lateral.push_str(&format!("{deg},{}\n", stiffness_at(&bls, deg)? / 1000.0));
    }
    write_file(&out.join(LATERAL_FILE), &lateral)?;

    let mut chambers = header(&CHAMBER_POINTS_HEADER);
    for &kpa in &CHAMBER_PRESSURES_KPA {
        let m = withstand_moment(&stack, kpa_to_pa(kpa))?;
        if m.pre_contact {
            return Err(CliError::Usage(format!(
                "config: chamber stack is pre-contact at {kpa} kPa; synthetic withstand data would be clamped"
            )));
        }
        chambers.push_str(&format!("{kpa},{}\n", m.withstand * 1000.0));
    }
    write_file(&out.join(CHAMBER_FILE), &chambers)?;

    let mut ap = header(&ANGLE_PRESSURE_HEADER);
    for &p in &AP_PRESSURES_KPA {
        ap.push_str(&format!("{p},{},inflate\n", poly(&INFLATE_POLY, p)));
    }
    for &p in AP_PRESSURES_KPA.iter().rev() {
        ap.push_str(&format!("{p},{},deflate\n", poly(&DEFLATE_POLY, p)));
    }
    write_file(&out.join(ANGLE_PRESSURE_FILE), &ap)?;

    let manifest = Manifest {
        synthetic: true,
        description: "noiseless data generated from the configured models; not measurements",
        slope_files,
        lateral_file: LATERAL_FILE,
        chamber_file: CHAMBER_FILE,
        angle_pressure_file: ANGLE_PRESSURE_FILE,
    };
    write_file(&out.join(MANIFEST_FILE), &to_json(&manifest))?;
    Ok(manifest)
}

pub fn run(args: &SynthArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cfg = RunConfig::load(args.config.as_deref())?;
    let manifest = generate(&cfg, &args.out)?;
    print_json(stdout, &manifest)?;
    Ok(())
}
