//! Scores hand-made annotations: error points per unit, categories, and the
//! engine's quality profile.
//!
//! cargo run --example score_annotations

use hope::project::{AnnotationProject, Engine, ErrorAnnotation, TranslationUnit};
use hope::scoring::{aggregate, classify_segment, epptu, hope_score, CountingSide, SegmentCategory};
use hope::taxonomy::{ErrorType, Severity};

fn main() {
    println!("error types:");
    for t in ErrorType::ALL {
        println!("  {}  {:<27} {}", t.code(), t.name(), t.definition());
    }
    println!("severities:");
    for s in Severity::ALL {
        println!("  {:<8} weight {}", s.name(), s.weight());
    }

    let mut project = AnnotationProject::new("manual");
    project.add_engine(Engine::new("sys1"));
    let units = [
        ("Open the file.", "Откройте файл.", vec![]),
        (
            "Save your work often.",
            "Сохраняйте работу часто.",
            vec![ErrorAnnotation::new(ErrorType::Style, Severity::Medium)],
        ),
        (
            "Click Export to continue.",
            "Нажмите Вывоз, чтобы продолжить.",
            vec![
                ErrorAnnotation::new(ErrorType::Terminology, Severity::Minor),
                ErrorAnnotation::new(ErrorType::Mistranslation, Severity::Major).with_note("Export is a button label"),
            ],
        ),
    ];
    for (i, (source, target, errors)) in units.into_iter().enumerate() {
        let mut unit = TranslationUnit::new(format!("{:06}", i + 1), source).with_target("sys1", target);
        unit.annotations.insert("sys1".into(), errors);
        project.units.push(unit);
    }

    println!();
    for unit in &project.units {
        let points = epptu(unit.annotations_for("sys1"));
        println!(
            "{}  EPPTU {points:>2}  {:<12} {}",
            unit.id,
            classify_segment(points).label(),
            unit.source
        );
    }

    let profile = aggregate(&project, "sys1", CountingSide::Source).expect("engine is registered");
    println!();
    println!("HOPE score: {}", hope_score(&project, "sys1").unwrap());
    for c in SegmentCategory::ALL {
        println!(
            "  {:<12} {} segments, {} words",
            c.label(),
            profile.segment_counts.get(c),
            profile.word_counts.get(c)
        );
    }
}
