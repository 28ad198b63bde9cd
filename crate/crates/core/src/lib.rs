//! Human-centric machine translation quality evaluation.
//!
//! Professional evaluators walk a corpus unit by unit and record the errors
//! they see in each MT output: one of eight [error types](taxonomy::ErrorType)
//! and one of five [severities](taxonomy::Severity) weighted 1, 2, 4, 8, 16.
//! From those annotations this crate computes
//!
//! * the error point penalty of every unit ([`scoring::epptu`]) and its
//!   category: *unchanged* (0), *good enough* (1 to 4) or *must fix* (5+),
//! * the system score of an engine ([`scoring::hope_score`]) and its full
//!   [quality profile](scoring::QualityProfile) at segment and word level,
//! * side-by-side [engine comparisons](report::compare_engines) rendered as
//!   tables, canonical JSON or plot-ready series.
//!
//! The classic edit-distance baselines live in [`metrics`]: WER, PER, TER with
//! greedy block shifts, and HTER, all returning exact rational rates and
//! replayable edit traces.
//!
//! Projects are imported from TSV and persisted as canonical `.hope` documents
//! by [`ingest`]; [`service`] serves them over HTTP to an annotation front end
//! with optimistic concurrency; [`cli`] drives everything from the shell.
//!
//! ```
//! use hope::project::ErrorAnnotation;
//! use hope::scoring::{classify_segment, epptu, SegmentCategory};
//! use hope::taxonomy::{ErrorType, Severity};
//!
//! let errors = [
//!     ErrorAnnotation::new(ErrorType::Terminology, Severity::Minor),
//!     ErrorAnnotation::new(ErrorType::Mistranslation, Severity::Major),
//! ];
//! assert_eq!(epptu(&errors), 5);
//! assert_eq!(classify_segment(5), SegmentCategory::MustFix);
//! ```
//!
//! Runnable walkthroughs of each capability are under `examples/`.

pub mod cli;
pub mod ingest;
pub mod metrics;
pub mod project;
pub mod report;
pub mod scoring;
pub mod service;
pub mod taxonomy;
