use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::project::{AnnotationProject, SpanProblem, SCHEMA_VERSION};

/// One broken invariant found by [`validate_project`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub engine_id: Option<String>,
    #[serde(flatten)]
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ViolationKind {
    UnsupportedSchema {
        version: u32,
    },
    EmptyProjectId,
    EmptyEngineId,
    DuplicateEngine,
    EmptyUnitId {
        position: usize,
    },
    DuplicateUnit,
    /// A target, post-edit or annotation list names an engine the project does not register.
    UnregisteredEngine {
        field: String,
    },
    /// A post-edit or annotation list exists for an engine with no target text.
    MissingTarget {
        field: String,
    },
    SpanStartNotBeforeEnd {
        annotation: usize,
        start: usize,
        end: usize,
    },
    SpanOutOfBounds {
        annotation: usize,
        start: usize,
        end: usize,
        target_len: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(unit) = &self.unit_id {
            write!(f, "unit {unit:?}: ")?;
        }
        let engine = self.engine_id.as_deref().unwrap_or("");
        match &self.kind {
            ViolationKind::UnsupportedSchema { version } => {
                write!(f, "unsupported schema version {version}")
            }
            ViolationKind::EmptyProjectId => f.write_str("empty project id"),
            ViolationKind::EmptyEngineId => f.write_str("empty engine id"),
            ViolationKind::DuplicateEngine => write!(f, "engine {engine:?} registered twice"),
            ViolationKind::EmptyUnitId { position } => write!(f, "unit at position {position} has an empty id"),
            ViolationKind::DuplicateUnit => f.write_str("duplicate unit id"),
            ViolationKind::UnregisteredEngine { field } => {
                write!(f, "{field} reference unregistered engine {engine:?}")
            }
            ViolationKind::MissingTarget { field } => {
                write!(f, "{field} for engine {engine:?} which has no target text")
            }
            ViolationKind::SpanStartNotBeforeEnd { annotation, start, end } => write!(
                f,
                "engine {engine:?} annotation {annotation}: span start >= end ({start} >= {end})"
            ),
            ViolationKind::SpanOutOfBounds {
                annotation,
                start,
                end,
                target_len,
            } => write!(
                f,
                "engine {engine:?} annotation {annotation}: span {start}..{end} exceeds target length {target_len}"
            ),
        }
    }
}

/// Lists every broken project invariant. Empty means valid.
pub fn validate_project(project: &AnnotationProject) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |unit_id: Option<&str>, engine_id: Option<&str>, kind: ViolationKind| {
        out.push(Violation {
            unit_id: unit_id.map(str::to_string),
            engine_id: engine_id.map(str::to_string),
            kind,
        })
    };

    if project.schema_version != SCHEMA_VERSION {
        push(
            None,
            None,
            ViolationKind::UnsupportedSchema {
                version: project.schema_version,
            },
        );
    }
    if project.project_id.is_empty() {
        push(None, None, ViolationKind::EmptyProjectId);
    }

    let mut engines = HashSet::new();
    for engine in &project.engines {
        if engine.engine_id.is_empty() {
            push(None, None, ViolationKind::EmptyEngineId);
        } else if !engines.insert(engine.engine_id.as_str()) {
            push(None, Some(&engine.engine_id), ViolationKind::DuplicateEngine);
        }
    }

    let mut unit_ids = HashSet::new();
    for (position, unit) in project.units.iter().enumerate() {
        let uid = Some(unit.id.as_str());
        if unit.id.is_empty() {
            push(None, None, ViolationKind::EmptyUnitId { position });
        } else if !unit_ids.insert(unit.id.as_str()) {
            push(uid, None, ViolationKind::DuplicateUnit);
        }

        for engine in unit.targets.keys() {
            if !engines.contains(engine.as_str()) {
                push(
                    uid,
                    Some(engine),
                    ViolationKind::UnregisteredEngine {
                        field: "targets".into(),
                    },
                );
            }
        }
        for engine in unit.post_edited.keys() {
            if !engines.contains(engine.as_str()) {
                push(
                    uid,
                    Some(engine),
                    ViolationKind::UnregisteredEngine {
                        field: "post-edits".into(),
                    },
                );
            } else if !unit.targets.contains_key(engine) {
                push(
                    uid,
                    Some(engine),
                    ViolationKind::MissingTarget {
                        field: "post-edit".into(),
                    },
                );
            }
        }
        for (engine, annotations) in &unit.annotations {
            if !engines.contains(engine.as_str()) {
                push(
                    uid,
                    Some(engine),
                    ViolationKind::UnregisteredEngine {
                        field: "annotations".into(),
                    },
                );
                continue;
            }
            let Some(target) = unit.targets.get(engine) else {
                push(
                    uid,
                    Some(engine),
                    ViolationKind::MissingTarget {
                        field: "annotations".into(),
                    },
                );
                continue;
            };
            for (i, a) in annotations.iter().enumerate() {
                match a.span_problem(target) {
                    None => {}
                    Some(SpanProblem::Empty(s)) => push(
                        uid,
                        Some(engine),
                        ViolationKind::SpanStartNotBeforeEnd {
                            annotation: i,
                            start: s.start,
                            end: s.end,
                        },
                    ),
                    Some(SpanProblem::OutOfBounds { span, len }) => push(
                        uid,
                        Some(engine),
                        ViolationKind::SpanOutOfBounds {
                            annotation: i,
                            start: span.start,
                            end: span.end,
                            target_len: len,
                        },
                    ),
                }
            }
        }
    }
    out
}
