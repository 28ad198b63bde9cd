use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::{self, IgnoredAny, MapAccess, Visitor};
use serde::Deserializer;
use tempfile::NamedTempFile;

use super::{validate_project, IngestError};
use crate::project::{AnnotationProject, SCHEMA_VERSION};

/// Canonical text of a project: two-space indented JSON, fixed field order,
/// sorted map keys, trailing newline. Equal projects render to equal bytes.
pub fn to_canonical_string(project: &AnnotationProject) -> String {
    let mut out = serde_json::to_string_pretty(project).expect("project serializes");
    out.push('\n');
    out
}

/// Parses a project document. The first field must be `schema_version`.
pub fn parse_project(text: &str) -> Result<AnnotationProject, IngestError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let version = de.deserialize_map(SchemaProbe)?;
    if version != u64::from(SCHEMA_VERSION) {
        return Err(IngestError::UnsupportedSchema(version));
    }
    Ok(serde_json::from_str(text)?)
}

pub fn load_project(path: impl AsRef<Path>) -> Result<AnnotationProject, IngestError> {
    let text = fs::read_to_string(path)?;
    parse_project(&text)
}

/// Validates and atomically writes a project: the destination holds either
/// the previous file or the complete new one.
pub fn save_project(project: &AnnotationProject, path: impl AsRef<Path>) -> Result<(), IngestError> {
    stage_save(project, path)?.commit()
}

/// A fully written temporary file waiting to replace its destination.
///
/// Dropping it without [`commit`](StagedSave::commit) removes the temporary
/// file and leaves the destination untouched.
#[derive(Debug)]
pub struct StagedSave {
    temp: NamedTempFile,
    dest: PathBuf,
}

impl StagedSave {
    pub fn temp_path(&self) -> &Path {
        self.temp.path()
    }

    pub fn destination(&self) -> &Path {
        &self.dest
    }

    /// Renames the staged file over the destination.
    pub fn commit(self) -> Result<(), IngestError> {
        self.temp.persist(&self.dest).map_err(|e| IngestError::Io(e.error))?;
        if let Some(dir) = self.dest.parent() {
            // make the rename durable; not supported on every platform
            if let Ok(d) = fs::File::open(dir) {
                let _ = d.sync_all();
            }
        }
        Ok(())
    }
}

/// Validates the project and writes it to a temporary file beside `path`.
pub fn stage_save(project: &AnnotationProject, path: impl AsRef<Path>) -> Result<StagedSave, IngestError> {
    let violations = validate_project(project);
    if !violations.is_empty() {
        return Err(IngestError::Invalid(violations));
    }
    let dest = path.as_ref().to_path_buf();
    let dir = match dest.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut temp = tempfile::Builder::new()
        .prefix(".hope-")
        .suffix(".tmp")
        .tempfile_in(dir)?;
    temp.write_all(to_canonical_string(project).as_bytes())?;
    temp.as_file().sync_all()?;
    Ok(StagedSave { temp, dest })
}

/// Reads only the leading `schema_version` field.
struct SchemaProbe;

impl<'de> Visitor<'de> for SchemaProbe {
    type Value = u64;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a project object starting with schema_version")
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<u64, A::Error> {
        match map.next_key::<String>()? {
            Some(key) if key == "schema_version" => {}
            Some(key) => {
                return Err(de::Error::custom(format!(
                    "first field must be schema_version, found {key:?}"
                )))
            }
            None => return Err(de::Error::missing_field("schema_version")),
        }
        let version = map.next_value::<u64>()?;
        while map.next_entry::<IgnoredAny, IgnoredAny>()?.is_some() {}
        Ok(version)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::project::{Engine, ErrorAnnotation, TranslationUnit};
    use crate::taxonomy::{ErrorType, Severity};

    fn sample() -> AnnotationProject {
        let mut p = AnnotationProject::new("demo");
        p.name = "Demo".into();
        p.source_lang = "en".into();
        p.target_lang = "ru".into();
        p.add_engine(Engine::new("sys1"));
        let mut u = TranslationUnit::new("000001", "Hello \"world\"\t!").with_target("sys1", "Привет, мир");
        u.annotations.insert(
            "sys1".into(),
            vec![ErrorAnnotation::new(ErrorType::Terminology, Severity::Minor)
                .with_span(0, 6)
                .with_note("term")],
        );
        p.units.push(u);
        p
    }

    #[test]
    fn canonical_text_starts_with_schema_version() {
        let text = to_canonical_string(&sample());
        assert!(text.starts_with("{\n  \"schema_version\": 1,\n  \"project_id\": \"demo\""));
        assert!(text.ends_with("}\n"));
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("demo.hope");
        let p = sample();
        save_project(&p, &path).unwrap();
        let first = fs::read(&path).unwrap();
        let back = load_project(&path).unwrap();
        assert_eq!(back, p);
        save_project(&back, &path).unwrap();
        assert_eq!(fs::read(&path).unwrap(), first);
    }

    #[test]
    fn truncated_file_is_a_parse_error() {
        let text = to_canonical_string(&sample());
        for cut in [1, text.len() / 3, text.len() - 3] {
            match parse_project(&text[..cut]) {
                Err(IngestError::Parse { line, .. }) => assert!(line >= 1),
                other => panic!("cut {cut}: {other:?}"),
            }
        }
    }

    #[test]
    fn unsupported_schema() {
        let text = to_canonical_string(&sample()).replacen("\"schema_version\": 1", "\"schema_version\": 99", 1);
        assert!(matches!(parse_project(&text), Err(IngestError::UnsupportedSchema(99))));
    }

    #[test]
    fn schema_version_must_come_first() {
        let err = parse_project(r#"{"project_id": "x", "schema_version": 1}"#).unwrap_err();
        assert!(err.to_string().contains("schema_version"), "{err}");
        assert!(matches!(parse_project("{}"), Err(IngestError::Parse { .. })));
        assert!(matches!(parse_project("[]"), Err(IngestError::Parse { .. })));
    }

    #[test]
    fn invalid_project_is_not_saved() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.hope");
        let mut p = sample();
        p.units[0].annotations.insert("deepl".into(), vec![]);
        assert!(matches!(save_project(&p, &path), Err(IngestError::Invalid(v)) if v.len() == 1));
        assert!(!path.exists());
    }

    #[test]
    fn dropped_stage_leaves_destination() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("demo.hope");
        let p = sample();
        save_project(&p, &path).unwrap();
        let mut changed = p.clone();
        changed.name = "changed".into();
        let staged = stage_save(&changed, &path).unwrap();
        let temp = staged.temp_path().to_path_buf();
        assert!(temp.exists());
        drop(staged);
        assert!(!temp.exists());
        assert_eq!(load_project(&path).unwrap(), p);
    }
}
