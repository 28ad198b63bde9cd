//! The annotation data model: errors, translation units and projects.

use std::collections::BTreeMap;

use chrono::{DateTime, SubsecRound, Utc};
use serde::{Deserialize, Serialize};

use crate::taxonomy::{ErrorType, Severity};

pub const SCHEMA_VERSION: u32 = 1;

/// Character span `[start, end)` into a target text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

/// One error recorded by an evaluator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorAnnotation {
    pub error_type: ErrorType,
    pub severity: Severity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub span: Option<Span>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotator_id: Option<String>,
}

impl ErrorAnnotation {
    pub fn new(error_type: ErrorType, severity: Severity) -> Self {
        ErrorAnnotation {
            error_type,
            severity,
            note: None,
            span: None,
            annotator_id: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn with_span(mut self, start: usize, end: usize) -> Self {
        self.span = Some(Span { start, end });
        self
    }

    pub fn with_annotator(mut self, id: impl Into<String>) -> Self {
        self.annotator_id = Some(id.into());
        self
    }

    /// Checks the span against the target text it annotates.
    pub fn span_problem(&self, target: &str) -> Option<SpanProblem> {
        let span = self.span?;
        if span.start >= span.end {
            return Some(SpanProblem::Empty(span));
        }
        let len = target.chars().count();
        if span.end > len {
            return Some(SpanProblem::OutOfBounds { span, len });
        }
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpanProblem {
    Empty(Span),
    OutOfBounds { span: Span, len: usize },
}

/// A source segment with per-engine translations and annotations.
///
/// A key present in `annotations` (even with an empty list) means the unit has
/// been reviewed for that engine; an absent key means it has not.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslationUnit {
    pub id: String,
    pub source: String,
    pub targets: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub post_edited: BTreeMap<String, String>,
    #[serde(default)]
    pub annotations: BTreeMap<String, Vec<ErrorAnnotation>>,
}

impl TranslationUnit {
    pub fn new(id: impl Into<String>, source: impl Into<String>) -> Self {
        TranslationUnit {
            id: id.into(),
            source: source.into(),
            targets: BTreeMap::new(),
            post_edited: BTreeMap::new(),
            annotations: BTreeMap::new(),
        }
    }

    pub fn with_target(mut self, engine_id: impl Into<String>, text: impl Into<String>) -> Self {
        self.targets.insert(engine_id.into(), text.into());
        self
    }

    /// Annotations for an engine; empty when the unit is unreviewed.
    pub fn annotations_for(&self, engine_id: &str) -> &[ErrorAnnotation] {
        self.annotations.get(engine_id).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn is_reviewed(&self, engine_id: &str) -> bool {
        self.annotations.contains_key(engine_id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Engine {
    pub engine_id: String,
    #[serde(default)]
    pub display_name: String,
    #[serde(default)]
    pub description: String,
}

impl Engine {
    pub fn new(engine_id: impl Into<String>) -> Self {
        let engine_id = engine_id.into();
        Engine {
            display_name: engine_id.clone(),
            engine_id,
            description: String::new(),
        }
    }
}

/// A corpus of translation units under evaluation, with its registered engines.
///
/// Field order here is the on-disk field order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationProject {
    pub schema_version: u32,
    pub project_id: String,
    pub name: String,
    pub source_lang: String,
    pub target_lang: String,
    /// Incremented on every accepted mutation made through the service.
    #[serde(default)]
    pub revision: u64,
    #[serde(with = "timestamp")]
    pub created_at: DateTime<Utc>,
    #[serde(with = "timestamp")]
    pub modified_at: DateTime<Utc>,
    pub engines: Vec<Engine>,
    pub units: Vec<TranslationUnit>,
}

impl AnnotationProject {
    pub fn new(project_id: impl Into<String>) -> Self {
        let now = now();
        AnnotationProject {
            schema_version: SCHEMA_VERSION,
            project_id: project_id.into(),
            name: String::new(),
            source_lang: "und".to_string(),
            target_lang: "und".to_string(),
            revision: 0,
            created_at: now,
            modified_at: now,
            engines: Vec::new(),
            units: Vec::new(),
        }
    }

    pub fn engine(&self, engine_id: &str) -> Option<&Engine> {
        self.engines.iter().find(|e| e.engine_id == engine_id)
    }

    pub fn has_engine(&self, engine_id: &str) -> bool {
        self.engine(engine_id).is_some()
    }

    pub fn engine_ids(&self) -> impl Iterator<Item = &str> {
        self.engines.iter().map(|e| e.engine_id.as_str())
    }

    pub fn unit(&self, unit_id: &str) -> Option<&TranslationUnit> {
        self.units.iter().find(|u| u.id == unit_id)
    }

    pub fn unit_mut(&mut self, unit_id: &str) -> Option<&mut TranslationUnit> {
        self.units.iter_mut().find(|u| u.id == unit_id)
    }

    /// Registers an engine if it is not already present.
    pub fn add_engine(&mut self, engine: Engine) {
        if !self.has_engine(&engine.engine_id) {
            self.engines.push(engine);
        }
    }

    /// Marks the project as modified now.
    pub fn touch(&mut self) {
        self.modified_at = now();
    }
}

/// Current UTC time truncated to whole seconds.
pub fn now() -> DateTime<Utc> {
    Utc::now().trunc_subsecs(0)
}

/// RFC 3339 timestamps at second precision, e.g. `2021-06-01T12:00:00Z`.
pub mod timestamp {
    use chrono::{DateTime, SecondsFormat, SubsecRound, Utc};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(t: &DateTime<Utc>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&t.to_rfc3339_opts(SecondsFormat::Secs, true))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DateTime<Utc>, D::Error> {
        let raw = String::deserialize(d)?;
        DateTime::parse_from_rfc3339(&raw)
            .map(|t| t.with_timezone(&Utc).trunc_subsecs(0))
            .map_err(serde::de::Error::custom)
    }
}
