use std::collections::HashSet;
use std::io::BufRead;

use super::IngestError;
use crate::project::{AnnotationProject, Engine, TranslationUnit};

/// Maps TSV columns (zero-based) onto unit fields.
///
/// A first row whose mapped cells read `id`, `source` and the engine ids is
/// treated as a header and skipped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMapping {
    pub id: Option<usize>,
    pub source: usize,
    /// Engine id → column, in registration order.
    pub targets: Vec<(String, usize)>,
}

impl ColumnMapping {
    pub fn new(source: usize) -> Self {
        ColumnMapping {
            id: None,
            source,
            targets: Vec::new(),
        }
    }

    pub fn with_id(mut self, column: usize) -> Self {
        self.id = Some(column);
        self
    }

    pub fn with_target(mut self, engine_id: impl Into<String>, column: usize) -> Self {
        self.targets.push((engine_id.into(), column));
        self
    }

    fn min_fields(&self) -> usize {
        self.targets
            .iter()
            .map(|(_, c)| *c)
            .chain(self.id)
            .chain([self.source])
            .max()
            .unwrap_or(0)
            + 1
    }

    fn is_header(&self, cells: &[&str]) -> bool {
        let cell = |i: usize| cells.get(i).copied();
        self.id.is_none_or(|i| cell(i) == Some("id"))
            && cell(self.source) == Some("source")
            && self.targets.iter().all(|(e, i)| cell(*i) == Some(e.as_str()))
    }

    fn check(&self) -> Result<(), IngestError> {
        let mut seen = HashSet::new();
        for (engine, _) in &self.targets {
            if engine.is_empty() {
                return Err(IngestError::BadMapping("empty engine id".into()));
            }
            if !seen.insert(engine.as_str()) {
                return Err(IngestError::BadMapping(format!("engine {engine:?} mapped twice")));
            }
        }
        Ok(())
    }
}

/// Reads a tab-separated corpus: one unit per non-empty row, cells taken verbatim.
///
/// Row numbers in errors are 1-based physical line numbers.
pub fn import_tsv<R: BufRead>(reader: R, mapping: &ColumnMapping) -> Result<AnnotationProject, IngestError> {
    mapping.check()?;
    let mut project = AnnotationProject::new("project");
    for (engine, _) in &mapping.targets {
        project.add_engine(Engine::new(engine.clone()));
    }
    let min_fields = mapping.min_fields();
    let mut ids = HashSet::new();

    for (index, line) in reader.lines().enumerate() {
        let line = line?;
        let row = index + 1;
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split('\t').collect();
        if row == 1 && mapping.is_header(&cells) {
            continue;
        }
        if cells.len() < min_fields {
            return Err(IngestError::RaggedRow {
                row,
                expected: min_fields,
                found: cells.len(),
            });
        }
        let source = cells[mapping.source];
        if source.is_empty() {
            return Err(IngestError::EmptySource { row });
        }
        let id = match mapping.id {
            Some(col) => {
                let id = cells[col];
                if id.is_empty() {
                    return Err(IngestError::EmptyId { row });
                }
                id.to_string()
            }
            None => format!("{:06}", project.units.len() + 1),
        };
        if !ids.insert(id.clone()) {
            return Err(IngestError::DuplicateId { row, id });
        }
        let mut unit = TranslationUnit::new(id, source);
        for (engine, col) in &mapping.targets {
            unit.targets.insert(engine.clone(), cells[*col].to_string());
        }
        project.units.push(unit);
    }
    Ok(project)
}
