//! Project service behind the annotation UI.
//!
//! Every open project sits behind its own lock. Mutations are gated by the
//! project revision (optimistic concurrency) and written through to disk
//! before they become visible; reads see consistent snapshots.

mod http;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

use crate::ingest::{load_project, save_project, validate_project, IngestError, Violation, PROJECT_EXTENSION};
use crate::project::{AnnotationProject, ErrorAnnotation};
use crate::report::{build_report, render_report, ReportError, ReportFormat};
use crate::scoring::{classify_segment, epptu, CountingSide, ScoringError, SegmentCategory};

pub use http::{router, serve, REVISION_HEADER};

pub const DEFAULT_PAGE_SIZE: usize = 50;
pub const MAX_PAGE_SIZE: usize = 500;

#[derive(Debug, thiserror::Error)]
pub enum ServiceError {
    #[error("{0} not found")]
    NotFound(String),
    #[error("bad request: {0}")]
    BadRequest(String),
    #[error("revision conflict: expected {expected}, current is {current}")]
    Conflict { expected: u64, current: u64 },
    #[error("{} validation errors", .0.len())]
    Validation(Vec<Violation>),
    #[error(transparent)]
    Report(ReportError),
    #[error("storage error: {0}")]
    Storage(#[from] IngestError),
}

impl From<ReportError> for ServiceError {
    fn from(e: ReportError) -> Self {
        match e {
            ReportError::Scoring(ScoringError::EngineNotFound(id)) => ServiceError::NotFound(format!("engine {id:?}")),
            other => ServiceError::Report(other),
        }
    }
}

/// One open project and the file it is persisted to.
#[derive(Debug)]
pub struct SessionState {
    pub path: PathBuf,
    pub project: AnnotationProject,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectSummary {
    pub project_id: String,
    pub name: String,
    pub source_lang: String,
    pub target_lang: String,
    pub revision: u64,
    pub engines: Vec<String>,
    pub units: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineStatus {
    pub epptu: u64,
    pub category: SegmentCategory,
    pub reviewed: bool,
    pub annotations: Vec<ErrorAnnotation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitSummary {
    pub id: String,
    pub source: String,
    pub targets: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub post_edited: BTreeMap<String, String>,
    pub engines: BTreeMap<String, EngineStatus>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitPage {
    pub project_id: String,
    pub revision: u64,
    pub total_units: usize,
    pub units: Vec<UnitSummary>,
    /// Pass back as `cursor` to fetch the next page; absent on the last page.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub next_cursor: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PutOutcome {
    pub new_revision: u64,
    pub epptu: u64,
    pub category: SegmentCategory,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportRequest {
    /// Engines to include; all registered engines when empty.
    pub engines: Vec<String>,
    pub side: CountingSide,
    pub format: ReportFormat,
    pub allow_partial: bool,
}

impl Default for ReportRequest {
    fn default() -> Self {
        ReportRequest {
            engines: Vec::new(),
            side: CountingSide::Source,
            format: ReportFormat::Machine,
            allow_partial: false,
        }
    }
}

/// The set of projects served from one directory.
#[derive(Debug, Default)]
pub struct ProjectService {
    projects: BTreeMap<String, Arc<RwLock<SessionState>>>,
}

impl ProjectService {
    /// Opens every `.hope` file in `dir`. Files that fail to load are skipped
    /// with a warning.
    pub fn open_dir(dir: impl AsRef<Path>) -> Result<Self, ServiceError> {
        let mut service = ProjectService::default();
        let mut paths: Vec<PathBuf> = std::fs::read_dir(dir.as_ref())
            .map_err(IngestError::from)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == PROJECT_EXTENSION))
            .collect();
        paths.sort();
        for path in paths {
            match load_project(&path) {
                Ok(project) => {
                    if let Err(e) = service.insert(project, path.clone()) {
                        tracing::warn!(path = %path.display(), "skipping project: {e}");
                    }
                }
                Err(e) => tracing::warn!(path = %path.display(), "cannot load project: {e}"),
            }
        }
        Ok(service)
    }

    /// Adds an already loaded project persisted at `path`.
    pub fn insert(&mut self, project: AnnotationProject, path: PathBuf) -> Result<(), ServiceError> {
        if self.projects.contains_key(&project.project_id) {
            return Err(ServiceError::BadRequest(format!(
                "duplicate project id {:?}",
                project.project_id
            )));
        }
        self.projects.insert(
            project.project_id.clone(),
            Arc::new(RwLock::new(SessionState { path, project })),
        );
        Ok(())
    }

    fn session(&self, project_id: &str) -> Result<&Arc<RwLock<SessionState>>, ServiceError> {
        self.projects
            .get(project_id)
            .ok_or_else(|| ServiceError::NotFound(format!("project {project_id:?}")))
    }

    /// A consistent copy of a project.
    pub fn snapshot(&self, project_id: &str) -> Result<AnnotationProject, ServiceError> {
        Ok(self.session(project_id)?.read().project.clone())
    }

    pub fn list_projects(&self) -> Vec<ProjectSummary> {
        self.projects
            .values()
            .map(|s| {
                let p = &s.read().project;
                ProjectSummary {
                    project_id: p.project_id.clone(),
                    name: p.name.clone(),
                    source_lang: p.source_lang.clone(),
                    target_lang: p.target_lang.clone(),
                    revision: p.revision,
                    engines: p.engine_ids().map(str::to_string).collect(),
                    units: p.units.len(),
                }
            })
            .collect()
    }

    /// One page of units in project order, each with server-computed scores.
    pub fn list_units(
        &self,
        project_id: &str,
        cursor: Option<&str>,
        page_size: Option<usize>,
    ) -> Result<UnitPage, ServiceError> {
        let page_size = page_size.unwrap_or(DEFAULT_PAGE_SIZE);
        if !(1..=MAX_PAGE_SIZE).contains(&page_size) {
            return Err(ServiceError::BadRequest(format!(
                "page_size must be between 1 and {MAX_PAGE_SIZE}"
            )));
        }
        let session = self.session(project_id)?.read();
        let project = &session.project;
        let start = match cursor.filter(|c| !c.is_empty()) {
            None => 0,
            Some(c) => match c.parse::<usize>() {
                Ok(n) if n <= project.units.len() => n,
                _ => return Err(ServiceError::BadRequest(format!("bad cursor {c:?}"))),
            },
        };
        let end = (start + page_size).min(project.units.len());
        let units = project.units[start..end]
            .iter()
            .map(|u| UnitSummary {
                id: u.id.clone(),
                source: u.source.clone(),
                targets: u.targets.clone(),
                post_edited: u.post_edited.clone(),
                engines: project
                    .engine_ids()
                    .map(|e| {
                        let annotations = u.annotations_for(e).to_vec();
                        let points = epptu(&annotations);
                        let status = EngineStatus {
                            epptu: points,
                            category: classify_segment(points),
                            reviewed: u.is_reviewed(e),
                            annotations,
                        };
                        (e.to_string(), status)
                    })
                    .collect(),
            })
            .collect();
        Ok(UnitPage {
            project_id: project.project_id.clone(),
            revision: project.revision,
            total_units: project.units.len(),
            units,
            next_cursor: (end < project.units.len()).then(|| end.to_string()),
        })
    }

    /// Replaces the annotations of one unit for one engine.
    ///
    /// Succeeds only when `expected_revision` is the current revision. The new
    /// state is persisted before it becomes visible; on any error nothing changes.
    pub fn put_annotations(
        &self,
        project_id: &str,
        unit_id: &str,
        engine_id: &str,
        annotations: Vec<ErrorAnnotation>,
        expected_revision: u64,
    ) -> Result<PutOutcome, ServiceError> {
        let mut session = self.session(project_id)?.write();
        let current = session.project.revision;
        if expected_revision != current {
            return Err(ServiceError::Conflict {
                expected: expected_revision,
                current,
            });
        }
        if !session.project.has_engine(engine_id) {
            return Err(ServiceError::NotFound(format!("engine {engine_id:?}")));
        }
        let mut next = session.project.clone();
        let unit = next
            .unit_mut(unit_id)
            .ok_or_else(|| ServiceError::NotFound(format!("unit {unit_id:?}")))?;
        let points = epptu(&annotations);
        unit.annotations.insert(engine_id.to_string(), annotations);
        let violations = validate_project(&next);
        if !violations.is_empty() {
            return Err(ServiceError::Validation(violations));
        }
        next.revision += 1;
        next.touch();
        save_project(&next, &session.path)?;
        let new_revision = next.revision;
        session.project = next;
        Ok(PutOutcome {
            new_revision,
            epptu: points,
            category: classify_segment(points),
        })
    }

    /// Renders a report over a snapshot of the project.
    pub fn report(&self, project_id: &str, request: &ReportRequest) -> Result<String, ServiceError> {
        let session = self.session(project_id)?.read();
        let project = &session.project;
        let engines: Vec<String> = if request.engines.is_empty() {
            project.engine_ids().map(str::to_string).collect()
        } else {
            request.engines.clone()
        };
        let report = build_report(project, &engines, request.side, request.allow_partial)?;
        Ok(render_report(&report, request.format))
    }
}
