//! Compares two engines over a small annotated corpus and prints the report
//! in all three formats.
//!
//! cargo run --example compare_engines

use hope::project::{AnnotationProject, Engine, ErrorAnnotation, TranslationUnit};
use hope::report::{compare_engines, render_report, ReportFormat};
use hope::scoring::CountingSide;
use hope::taxonomy::{ErrorType::*, Severity::*};

fn main() {
    let mut project = AnnotationProject::new("release-notes");
    project.add_engine(Engine::new("sys1"));
    project.add_engine(Engine::new("google"));
    let corpus = [
        ("The update fixes three crashes.", vec![], vec![(Mistranslation, Major)]),
        ("Restart the app after installing.", vec![(Style, Minor)], vec![]),
        (
            "Sync now works offline.",
            vec![(Impact, Severe)],
            vec![(Terminology, Medium)],
        ),
        ("Thanks to our beta testers!", vec![], vec![]),
    ];
    for (i, (source, sys1, google)) in corpus.into_iter().enumerate() {
        let mut unit = TranslationUnit::new(format!("{:06}", i + 1), source)
            .with_target("sys1", "…")
            .with_target("google", "…");
        for (engine, errors) in [("sys1", sys1), ("google", google)] {
            let errors = errors.into_iter().map(|(t, s)| ErrorAnnotation::new(t, s)).collect();
            unit.annotations.insert(engine.into(), errors);
        }
        project.units.push(unit);
    }

    let report =
        compare_engines(&project, &["sys1", "google"], CountingSide::Source, false).expect("all units reviewed");
    print!("{}", render_report(&report, ReportFormat::Table));
    println!("\n--- machine ---");
    print!("{}", render_report(&report, ReportFormat::Machine));
    println!("\n--- plot data ---");
    print!("{}", render_report(&report, ReportFormat::PlotData));
}
