use thiserror::Error;

/// Errors raised by the mechanics routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum MechError {
    /// An input lies outside the domain of the model.
    #[error("invalid {field}: {reason}")]
    Domain { field: &'static str, reason: String },

    /// An input file does not match its expected schema.
    #[error("{file}: row {row}: {reason}")]
    Schema {
        file: String,
        row: usize,
        reason: String,
    },

    #[error("{path}: {reason}")]
    Io { path: String, reason: String },
}

pub type Result<T> = std::result::Result<T, MechError>;

impl MechError {
    pub(crate) fn domain(field: &'static str, reason: impl Into<String>) -> Self {
        MechError::Domain {
            field,
            reason: reason.into(),
        }
    }
}

/// Rejects NaN and infinities.
pub(crate) fn finite(field: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(MechError::domain(
            field,
            format!("must be finite, got {value}"),
        ))
    }
}

pub(crate) fn positive(field: &'static str, value: f64) -> Result<f64> {
    finite(field, value)?;
    if value > 0.0 {
        Ok(value)
    } else {
        Err(MechError::domain(
            field,
            format!("must be > 0, got {value}"),
        ))
    }
}

pub(crate) fn non_negative(field: &'static str, value: f64) -> Result<f64> {
    finite(field, value)?;
    if value >= 0.0 {
        Ok(value)
    } else {
        Err(MechError::domain(
            field,
            format!("must be >= 0, got {value}"),
        ))
    }
}
