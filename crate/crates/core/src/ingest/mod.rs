//! Corpus import, project persistence and integrity checks.

mod persist;
mod tsv;
mod validate;

pub use persist::{load_project, parse_project, save_project, stage_save, to_canonical_string, StagedSave};
pub use tsv::{import_tsv, ColumnMapping};
pub use validate::{validate_project, Violation, ViolationKind};

/// File extension of persisted projects.
pub const PROJECT_EXTENSION: &str = "hope";

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("row {row}: expected at least {expected} fields, found {found}")]
    RaggedRow { row: usize, expected: usize, found: usize },
    #[error("row {row}: duplicate unit id {id:?}")]
    DuplicateId { row: usize, id: String },
    #[error("row {row}: empty unit id")]
    EmptyId { row: usize },
    #[error("row {row}: empty source cell")]
    EmptySource { row: usize },
    #[error("column mapping: {0}")]
    BadMapping(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported schema version {0} (this build reads version {v})", v = crate::project::SCHEMA_VERSION)]
    UnsupportedSchema(u64),
    #[error("project is invalid: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

impl From<serde_json::Error> for IngestError {
    fn from(e: serde_json::Error) -> Self {
        if e.is_io() {
            return IngestError::Io(e.into());
        }
        IngestError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}
