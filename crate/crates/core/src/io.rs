//! CSV ingestion for measured data.
//!
//! | kind            | header                                   | notes                          |
//! |-----------------|------------------------------------------|--------------------------------|
//! | force-disp      | `displacement_mm,force_N`                | sidecar `<stem>.json` metadata |
//! | angle-pressure  | `pressure_kPa,angle_deg,branch`          | branch: inflate/deflate/empty  |
//! | lateral points  | `angle_deg,stiffness_N_per_mm`           |                                |
//! | chamber points  | `pressure_kPa,withstand_N_mm`            |                                |
//!
//! Files are converted to SI on the way in, except angle-pressure samples
//! which keep their kPa/degree units.

use std::path::Path;

use crate::datafit::{AngleSample, Branch, ForceDispSeries, SeriesMeta};
use crate::error::{MechError, Result};

pub const FORCE_DISP_HEADER: [&str; 2] = ["displacement_mm", "force_N"];
pub const ANGLE_PRESSURE_HEADER: [&str; 3] = ["pressure_kPa", "angle_deg", "branch"];
pub const LATERAL_POINTS_HEADER: [&str; 2] = ["angle_deg", "stiffness_N_per_mm"];
pub const CHAMBER_POINTS_HEADER: [&str; 2] = ["pressure_kPa", "withstand_N_mm"];

fn schema(file: &Path, row: usize, reason: impl Into<String>) -> MechError {
    MechError::Schema {
        file: file.display().to_string(),
        row,
        reason: reason.into(),
    }
}

fn io_error(file: &Path, e: impl std::fmt::Display) -> MechError {
    MechError::Io {
        path: file.display().to_string(),
        reason: e.to_string(),
    }
}

/// Reads rows of a CSV whose header must equal `header` exactly. Row
/// numbers in errors are 1-based file lines (the header is line 1).
fn read_rows(path: &Path, header: &[&str]) -> Result<Vec<(usize, csv::StringRecord)>> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let got = reader
        .headers()
        .map_err(|e| schema(path, 1, e.to_string()))?;
    if got.iter().collect::<Vec<_>>() != header {
        return Err(schema(
            path,
            1,
            format!(
                "expected header '{}', got '{}'",
                header.join(","),
                got.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| schema(path, line, e.to_string()))?;
        if rec.len() != header.len() {
            return Err(schema(
                path,
                line,
                format!("expected {} fields, got {}", header.len(), rec.len()),
            ));
        }
        rows.push((line, rec));
    }
    if rows.is_empty() {
        return Err(schema(path, 1, "no data rows"));
    }
    Ok(rows)
}

fn number(
    path: &Path,
    line: usize,
    rec: &csv::StringRecord,
    col: usize,
    name: &str,
) -> Result<f64> {
    let raw = &rec[col];
    let v: f64 = raw
        .parse()
        .map_err(|_| schema(path, line, format!("{name}: '{raw}' is not a number")))?;
    if !v.is_finite() {
        return Err(schema(path, line, format!("{name}: '{raw}' is not finite")));
    }
    Ok(v)
}

fn pairs(path: &Path, header: &[&str; 2]) -> Result<Vec<(f64, f64)>> {
    read_rows(path, header)?
        .into_iter()
        .map(|(line, rec)| {
            Ok((
                number(path, line, &rec, 0, header[0])?,
                number(path, line, &rec, 1, header[1])?,
            ))
        })
        .collect()
}

/// Path of the metadata sidecar for a force-displacement CSV.
pub fn sidecar_path(csv_path: &Path) -> std::path::PathBuf {
    csv_path.with_extension("json")
}

pub fn read_meta(path: &Path) -> Result<SeriesMeta> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    serde_json::from_str(&text).map_err(|e| schema(path, e.line(), e.to_string()))
}

/// Reads a force-displacement record and its sidecar metadata.
pub fn read_force_disp(path: &Path) -> Result<ForceDispSeries> {
    let meta = read_meta(&sidecar_path(path))?;
    let rows = pairs(path, &FORCE_DISP_HEADER)?;
    let (x_mm, f): (Vec<f64>, Vec<f64>) = rows.into_iter().unzip();
    let x = x_mm.iter().map(|v| v / 1000.0).collect();
    ForceDispSeries::new(x, f, meta).map_err(|e| schema(path, 0, e.to_string()))
}

pub fn read_angle_pressure(path: &Path) -> Result<Vec<AngleSample>> {
    read_rows(path, &ANGLE_PRESSURE_HEADER)?
        .into_iter()
        .map(|(line, rec)| {
            let branch: Branch = rec[2].parse().map_err(|e: String| schema(path, line, e))?;
            Ok(AngleSample {
                pressure_kpa: number(path, line, &rec, 0, "pressure_kPa")?,
                angle_deg: number(path, line, &rec, 1, "angle_deg")?,
                branch,
            })
        })
        .collect()
}

/// `(α rad, k N/m)` pairs.
pub fn read_lateral_points(path: &Path) -> Result<Vec<(f64, f64)>> {
    Ok(pairs(path, &LATERAL_POINTS_HEADER)?
        .into_iter()
        .map(|(deg, k)| (deg.to_radians(), k * 1000.0))
        .collect())
}

/// `(P Pa, M_f N·m)` pairs.
pub fn read_chamber_points(path: &Path) -> Result<Vec<(f64, f64)>> {
    Ok(pairs(path, &CHAMBER_POINTS_HEADER)?
        .into_iter()
        .map(|(kpa, nmm)| (kpa * 1000.0, nmm / 1000.0))
        .collect())
}
