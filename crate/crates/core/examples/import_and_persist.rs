//! Imports a TSV corpus, validates it and round-trips it through the `.hope`
//! project format.
//!
//! cargo run --example import_and_persist

use hope::ingest::{import_tsv, load_project, save_project, to_canonical_string, validate_project, ColumnMapping};
use hope::project::ErrorAnnotation;
use hope::taxonomy::{ErrorType, Severity};

const CORPUS: &str = "\
id\tsource\tsys1\tgoogle
intro-1\tOpen the file.\tОткройте файл.\tОткрыть файл.
intro-2\tSave your work often.\tСохраняйте работу часто.\tЧасто сохраняйте свою работу.
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mapping = ColumnMapping::new(1)
        .with_id(0)
        .with_target("sys1", 2)
        .with_target("google", 3);
    let mut project = import_tsv(CORPUS.as_bytes(), &mapping)?;
    project.project_id = "intro".into();
    project.source_lang = "en".into();
    project.target_lang = "ru".into();
    println!(
        "imported {} units for engines {:?}",
        project.units.len(),
        project.engine_ids().collect::<Vec<_>>()
    );

    // annotate a span of the target: characters 0..10 are "Сохраняйте"
    let unit = project.unit_mut("intro-2").expect("ids come from the id column");
    unit.annotations.insert(
        "sys1".into(),
        vec![ErrorAnnotation::new(ErrorType::Style, Severity::Minor)
            .with_span(0, 10)
            .with_annotator("rater-1")],
    );

    let dir = tempfile::tempdir()?;
    let path = dir.path().join("intro.hope");
    save_project(&project, &path)?;
    let loaded = load_project(&path)?;
    assert_eq!(loaded, project);
    assert_eq!(std::fs::read_to_string(&path)?, to_canonical_string(&loaded));
    println!("saved and reloaded {} unchanged\n", path.display());
    print!("{}", to_canonical_string(&loaded));

    // an annotation whose span runs past the end of the target is rejected
    let mut broken = loaded.clone();
    broken.units[0].annotations.insert(
        "google".into(),
        vec![ErrorAnnotation::new(ErrorType::Impact, Severity::Major).with_span(3, 99)],
    );
    println!("\nvalidating a broken copy:");
    for violation in validate_project(&broken) {
        println!("  {violation}");
    }
    assert!(save_project(&broken, &path).is_err());
    Ok(())
}
