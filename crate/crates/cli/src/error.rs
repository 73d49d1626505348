use serde::Serialize;
use thiserror::Error;
use twist_construct::TwistError;

/// Run errors, each with a distinct exit status and a stable code string.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("critical level: {0}")]
    CriticalLevel(String),
    #[error("step {step}: u is not fixed by the automorphism built so far")]
    NotFixed { step: usize },
    #[error("{0}: the spectrum is not rational")]
    NeedsFieldExtension(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid diagram symmetry: {0}")]
    InvalidSymmetry(String),
    #[error("u is not quasi-primary: {0}")]
    NotQuasiPrimary(String),
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("internal: {0}")]
    Internal(String),
}

/// The machine-readable error object printed on failure.
#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ErrorObject {
    pub schema_version: u32,
    pub error: ErrorBody,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ErrorBody {
    pub code: &'static str,
    pub exit_status: i32,
    pub message: String,
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::CriticalLevel(_) => "CriticalLevel",
            CliError::NotFixed { .. } => "NotFixed",
            CliError::NeedsFieldExtension(_) => "NeedsFieldExtension",
            CliError::Unsupported(_) => "Unsupported",
            CliError::InvalidSymmetry(_) => "InvalidSymmetry",
            CliError::NotQuasiPrimary(_) => "NotQuasiPrimary",
            CliError::InvalidAutomorphism(_) => "InvalidAutomorphism",
            CliError::Config(_) => "InvalidConfig",
            CliError::Io(_) => "Io",
            CliError::Internal(_) => "Internal",
        }
    }

    pub fn exit_status(&self) -> i32 {
        match self {
            CliError::CriticalLevel(_) => 10,
            CliError::NotFixed { .. } => 11,
            CliError::NeedsFieldExtension(_) => 12,
            CliError::Unsupported(_) => 13,
            CliError::InvalidSymmetry(_) => 14,
            CliError::NotQuasiPrimary(_) => 15,
            CliError::InvalidAutomorphism(_) => 16,
            CliError::Config(_) => 64,
            CliError::Io(_) => 74,
            CliError::Internal(_) => 70,
        }
    }

    pub fn to_object(&self) -> ErrorObject {
        ErrorObject {
            schema_version: crate::config::SCHEMA_VERSION,
            error: ErrorBody {
                code: self.code(),
                exit_status: self.exit_status(),
                message: self.to_string(),
            },
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_object()).expect("error serializes");
        s.push('\n');
        s
    }
}

impl From<lie_core::LieError> for CliError {
    fn from(e: lie_core::LieError) -> Self {
        use lie_core::LieError as L;
        match e {
            L::NeedsFieldExtension => CliError::NeedsFieldExtension("element".into()),
            L::InvalidSymmetry(m) => CliError::InvalidSymmetry(m),
            L::UnsupportedAlgebra(m) => CliError::Unsupported(format!("algebra {m}")),
            L::UnknownBasisElement(m) => CliError::Config(format!("unknown basis element {m:?}")),
            L::InvalidAutomorphism(m) => CliError::InvalidAutomorphism(m),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<affine_fock::AffineError> for CliError {
    fn from(e: affine_fock::AffineError) -> Self {
        use affine_fock::AffineError as A;
        match e {
            A::CriticalLevel(m) => CliError::CriticalLevel(format!("ℓ = -h∨ = {m}")),
            A::InvalidTop(m) => CliError::Config(m),
            A::Unsupported(m) => CliError::Unsupported(m),
            A::Lie(l) => l.into(),
        }
    }
}

impl From<TwistError> for CliError {
    fn from(e: TwistError) -> Self {
        match e {
            TwistError::NotFixed => CliError::NotFixed { step: 0 },
            TwistError::NeedsFieldExtension => CliError::NeedsFieldExtension("element".into()),
            TwistError::Unsupported(m) => CliError::Unsupported(m),
            TwistError::InvalidAutomorphism(m) => CliError::InvalidAutomorphism(m),
            TwistError::Delta(delta_op::DeltaError::NotQuasiPrimary) => CliError::NotQuasiPrimary("u".into()),
            TwistError::Delta(delta_op::DeltaError::Unsupported(m)) => CliError::Unsupported(m),
            other => CliError::Internal(other.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all() -> Vec<CliError> {
        vec![
            CliError::CriticalLevel(String::new()),
            CliError::NotFixed { step: 1 },
            CliError::NeedsFieldExtension(String::new()),
            CliError::Unsupported(String::new()),
            CliError::InvalidSymmetry(String::new()),
            CliError::NotQuasiPrimary(String::new()),
            CliError::InvalidAutomorphism(String::new()),
            CliError::Config(String::new()),
            CliError::Io(String::new()),
            CliError::Internal(String::new()),
        ]
    }

    #[test]
    fn codes_are_distinct() {
        let errors = all();
        let statuses: std::collections::BTreeSet<_> = errors.iter().map(|e| e.exit_status()).collect();
        let codes: std::collections::BTreeSet<_> = errors.iter().map(|e| e.code()).collect();
        assert_eq!(statuses.len(), errors.len());
        assert_eq!(codes.len(), errors.len());
        // 0, 2 and 3 are reserved for finished runs.
        assert!(statuses.iter().all(|&s| s > 3));
    }

    #[test]
    fn json_shape() {
        let v: serde_json::Value = serde_json::from_str(&CliError::NotFixed { step: 2 }.to_json()).unwrap();
        assert_eq!(v["schemaVersion"], 1);
        assert_eq!(v["error"]["code"], "NotFixed");
        assert_eq!(v["error"]["exitStatus"], 11);
        assert!(v["error"]["message"].as_str().unwrap().starts_with("step 2"));
    }

    #[test]
    fn library_errors_map() {
        let e: CliError = lie_core::LieError::NeedsFieldExtension.into();
        assert_eq!(e.exit_status(), 12);
        let e: CliError = lie_core::LieError::UnknownBasisElement("x".into()).into();
        assert_eq!(e.code(), "InvalidConfig");
    }
}
