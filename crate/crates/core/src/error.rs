use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("quantum emitter has no decay channel (gamma = Gamma = 0)")]
    InvalidQe,

    #[error("{module}::{operation}: pole at omega = {omega}")]
    Pole {
        module: &'static str,
        operation: &'static str,
        omega: Complex64,
    },

    #[error("{module}::{operation}: ill-conditioned product (norm {norm:e})")]
    IllConditioned {
        module: &'static str,
        operation: &'static str,
        norm: f64,
    },

    #[error("{module}::{operation}: {detail}")]
    Numerical {
        module: &'static str,
        operation: &'static str,
        detail: String,
    },

    #[error("circulator routing undefined: port {port} has zero total output")]
    DegenerateRouting { port: usize },
}

impl Error {
    pub fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// `module::operation` for numerical failures, `None` for input errors.
    pub fn location(&self) -> Option<String> {
        match self {
            Error::Pole { module, operation, .. }
            | Error::IllConditioned { module, operation, .. }
            | Error::Numerical { module, operation, .. } => Some(format!("{module}::{operation}")),
            Error::DegenerateRouting { .. } => Some("circulator::circulator_metrics".into()),
            Error::InvalidParameter { .. } | Error::InvalidQe => None,
        }
    }
}
