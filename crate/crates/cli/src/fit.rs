//! `fit`: data reduction of measured CSV files.

use std::io::Write;
use std::path::{Path, PathBuf};

use bisa_mech_core::datafit::{
    calibrate_bls, calibrate_chambers, fit_angle_pressure, fit_slope, ratio_curve,
};
use bisa_mech_core::io;
use bisa_mech_core::units::mass_to_force;
use bisa_mech_core::StiffnessTable;

use crate::config::RunConfig;
use crate::formats::*;
use crate::{create_dir, print_json, to_json, write_file, CliError, FitArgs, FitKind};

pub const UNPHYSICAL_WARNING: &str = "unphysical fit: negative restoring moment";

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn sorted(files: &[PathBuf]) -> Vec<PathBuf> {
    let mut out = files.to_vec();
    out.sort();
    out
}

pub fn fit_slope_files(files: &[PathBuf]) -> Result<(SlopeFitFile, StiffnessTable), CliError> {
    let files = sorted(files);
    let series = files
        .iter()
        .map(|f| io::read_force_disp(f))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rows = Vec::with_capacity(series.len());
    for (path, s) in files.iter().zip(&series) {
        let fit = fit_slope(s)?;
        rows.push(SlopeRow {
            file: file_name(path),
            label: s.meta.label.clone(),
            bending_angle_deg: s.meta.bending_angle_deg,
            pulling_mass_kg: s.meta.pulling_mass_kg,
            pulling_force_n: mass_to_force(s.meta.pulling_mass_kg),
            pressure_step_kpa: s.meta.pressure_step_kpa,
            stiffness_n_per_mm: fit.stiffness_n_per_mm(),
            intercept_n: fit.intercept,
            r_squared: fit.r_squared,
        });
    }
    let table = StiffnessTable::from_series(&series)?;
    let (ratio_curves, ratio_note) = match ratio_curve(&table) {
        Ok(curves) => (
            Some(
                curves
                    .into_iter()
                    .map(|c| RatioCurveOut {
                        group: c.group,
                        angles_deg: c.angles_deg,
                        ratios: c.ratios,
                    })
                    .collect(),
            ),
            None,
        ),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok((
        SlopeFitFile {
            kind: "slope".into(),
            rows,
            ratio_curves,
            ratio_note,
        },
        table,
    ))
}

pub fn fit_bls_files(files: &[PathBuf], cfg: &RunConfig) -> Result<BlsFitFile, CliError> {
    let files = sorted(files);
    let mut points = Vec::new();
    for f in &files {
        points.extend(io::read_lateral_points(f)?);
    }
    let nu = cfg.material.poisson_ratio;
    let lambda = cfg.section.aspect_ratio;
    let cal = calibrate_bls(&points, nu, lambda)?;
    Ok(BlsFitFile {
        kind: "bls".into(),
        files: files.iter().map(|f| file_name(f)).collect(),
        points: points.len(),
        poisson_ratio: nu,
        aspect_ratio: lambda,
        stiffness_scale_n_per_m: cal.scale,
        rms_residual_n_per_m: cal.rms_residual,
        residual_sum_squares: cal.residual_sum_squares,
    })
}

pub fn fit_chamber_files(files: &[PathBuf], cfg: &RunConfig) -> Result<ChamberFitFile, CliError> {
    let files = sorted(files);
    let mut points = Vec::new();
    for f in &files {
        points.extend(io::read_chamber_points(f)?);
    }
    let cal = calibrate_chambers(&points, cfg.chambers.chamber_count)?;
    Ok(ChamberFitFile {
        kind: "chambers".into(),
        files: files.iter().map(|f| file_name(f)).collect(),
        points: points.len(),
        chamber_count: cal.chamber_count,
        lumped_coefficient: cal.lumped_coefficient,
        restoring_moment_n_m: cal.restoring_moment,
        residual_sum_squares: cal.residual_sum_squares,
        unphysical: cal.unphysical,
        warning: cal.unphysical.then(|| UNPHYSICAL_WARNING.to_string()),
    })
}

pub fn fit_angle_pressure_files(
    files: &[PathBuf],
    degree: usize,
) -> Result<AnglePressureFitFile, CliError> {
    let files = sorted(files);
    let mut samples = Vec::new();
    for f in &files {
        samples.extend(io::read_angle_pressure(f)?);
    }
    let fits = fit_angle_pressure(&samples, degree)?;
    Ok(AnglePressureFitFile {
        kind: "angle-pressure".into(),
        files: files.iter().map(|f| file_name(f)).collect(),
        degree,
        branches: fits
            .into_iter()
            .map(|f| BranchFitOut {
                branch: serde_json::to_value(f.branch)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default(),
                coefficients: f.coefficients,
                residual_sum_squares: f.residual_sum_squares,
                samples: f.samples,
            })
            .collect(),
    })
}

fn emit<T: serde::Serialize>(
    stdout: &mut dyn Write,
    out: Option<&Path>,
    name: &str,
    value: &T,
) -> Result<(), CliError> {
    if let Some(dir) = out {
        create_dir(dir)?;
        write_file(&dir.join(name), &to_json(value))?;
    }
    print_json(stdout, value)?;
    Ok(())
}

pub fn run(args: &FitArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cfg = RunConfig::load(args.config.as_deref())?;
    let out = args.out.as_deref();
    match args.kind {
        FitKind::Slope => {
            let (fit, table) = fit_slope_files(&args.files)?;
            if let Some(dir) = out {
                create_dir(dir)?;
                write_file(&dir.join(STIFFNESS_TABLE_FILE), &table.to_csv())?;
            }
            emit(stdout, out, FIT_SLOPE_FILE, &fit)
        }
        FitKind::Bls => emit(
            stdout,
            out,
            FIT_BLS_FILE,
            &fit_bls_files(&args.files, &cfg)?,
        ),
        FitKind::Chambers => emit(
            stdout,
            out,
            FIT_CHAMBERS_FILE,
            &fit_chamber_files(&args.files, &cfg)?,
        ),
        FitKind::AnglePressure => emit(
            stdout,
            out,
            FIT_ANGLE_PRESSURE_FILE,
            &fit_angle_pressure_files(&args.files, args.degree)?,
        ),
    }
}
