//! Error-point scoring: per-unit penalties, segment categories, system totals
//! and per-engine quality profiles.
//!
//! Everything here is exact integer arithmetic over immutable inputs.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::project::{AnnotationProject, ErrorAnnotation, TranslationUnit};
use crate::taxonomy::{ErrorType, Severity};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScoringError {
    #[error("engine not found: {0}")]
    EngineNotFound(String),
}

/// Error point penalty of one translation unit: the sum of the severity
/// weights of every recorded error. Repeated errors each count.
pub fn epptu(annotations: &[ErrorAnnotation]) -> u64 {
    annotations.iter().map(|a| a.severity.weight()).sum()
}

/// Quality band of a single segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentCategory {
    /// No recorded errors.
    Unchanged,
    /// Penalty 1 to 4: only minor problems.
    GoodEnough,
    /// Penalty 5 or more.
    MustFix,
}

impl SegmentCategory {
    pub const ALL: [SegmentCategory; 3] = [
        SegmentCategory::Unchanged,
        SegmentCategory::GoodEnough,
        SegmentCategory::MustFix,
    ];

    pub fn key(self) -> &'static str {
        match self {
            SegmentCategory::Unchanged => "unchanged",
            SegmentCategory::GoodEnough => "good_enough",
            SegmentCategory::MustFix => "must_fix",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SegmentCategory::Unchanged => "unchanged",
            SegmentCategory::GoodEnough => "good enough",
            SegmentCategory::MustFix => "must fix",
        }
    }
}

impl fmt::Display for SegmentCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Highest penalty still considered "good enough".
pub const GOOD_ENOUGH_MAX: u64 = 4;

pub fn classify_segment(epptu_value: u64) -> SegmentCategory {
    match epptu_value {
        0 => SegmentCategory::Unchanged,
        1..=GOOD_ENOUGH_MAX => SegmentCategory::GoodEnough,
        _ => SegmentCategory::MustFix,
    }
}

/// System-level score: the sum of unit penalties for one engine.
pub fn hope_score(project: &AnnotationProject, engine_id: &str) -> Result<u64, ScoringError> {
    require_engine(project, engine_id)?;
    Ok(project.units.iter().map(|u| epptu(u.annotations_for(engine_id))).sum())
}

/// Whitespace-delimited tokens after NFC normalization.
pub fn word_count(text: &str) -> u64 {
    let normalized: String = text.nfc().collect();
    normalized.split_whitespace().count() as u64
}

/// Which side of a unit supplies the word count for word-level statistics.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountingSide {
    #[default]
    Source,
    Target,
}

impl CountingSide {
    pub fn name(self) -> &'static str {
        match self {
            CountingSide::Source => "source",
            CountingSide::Target => "target",
        }
    }

    /// Word count of `unit` on this side, for `engine_id` when counting targets.
    pub fn words(self, unit: &TranslationUnit, engine_id: &str) -> u64 {
        match self {
            CountingSide::Source => word_count(&unit.source),
            CountingSide::Target => unit.targets.get(engine_id).map_or(0, |t| word_count(t)),
        }
    }
}

impl fmt::Display for CountingSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("counting side must be `source` or `target`, got {0:?}")]
pub struct UnknownCountingSide(pub String);

impl FromStr for CountingSide {
    type Err = UnknownCountingSide;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "source" => Ok(CountingSide::Source),
            "target" => Ok(CountingSide::Target),
            _ => Err(UnknownCountingSide(s.to_string())),
        }
    }
}

/// Counts per segment category.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryCounts {
    pub unchanged: u64,
    pub good_enough: u64,
    pub must_fix: u64,
}

impl CategoryCounts {
    pub fn get(&self, category: SegmentCategory) -> u64 {
        match category {
            SegmentCategory::Unchanged => self.unchanged,
            SegmentCategory::GoodEnough => self.good_enough,
            SegmentCategory::MustFix => self.must_fix,
        }
    }

    pub fn add(&mut self, category: SegmentCategory, n: u64) {
        match category {
            SegmentCategory::Unchanged => self.unchanged += n,
            SegmentCategory::GoodEnough => self.good_enough += n,
            SegmentCategory::MustFix => self.must_fix += n,
        }
    }

    pub fn total(&self) -> u64 {
        self.unchanged + self.good_enough + self.must_fix
    }

    pub fn as_array(&self) -> [u64; 3] {
        [self.unchanged, self.good_enough, self.must_fix]
    }
}

/// Error counts indexed by (error type, severity).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "Vec<MatrixRow>", try_from = "Vec<MatrixRow>")]
pub struct ErrorMatrix {
    counts: [[u64; 5]; 8],
}

/// Serialized row of an [`ErrorMatrix`]: counts from minor to critical.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixRow {
    pub error_type: ErrorType,
    pub counts: [u64; 5],
}

impl ErrorMatrix {
    pub fn get(&self, error_type: ErrorType, severity: Severity) -> u64 {
        self.counts[error_type.index()][severity.index()]
    }

    pub fn record(&mut self, annotation: &ErrorAnnotation) {
        self.counts[annotation.error_type.index()][annotation.severity.index()] += 1;
    }

    pub fn row(&self, error_type: ErrorType) -> [u64; 5] {
        self.counts[error_type.index()]
    }

    pub fn row_total(&self, error_type: ErrorType) -> u64 {
        self.row(error_type).iter().sum()
    }

    pub fn column_total(&self, severity: Severity) -> u64 {
        self.counts.iter().map(|row| row[severity.index()]).sum()
    }

    pub fn total_errors(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Σ count × severity weight.
    pub fn weighted_total(&self) -> u64 {
        Severity::ALL.iter().map(|s| self.column_total(*s) * s.weight()).sum()
    }
}

impl From<ErrorMatrix> for Vec<MatrixRow> {
    fn from(m: ErrorMatrix) -> Self {
        ErrorType::ALL
            .iter()
            .map(|t| MatrixRow {
                error_type: *t,
                counts: m.row(*t),
            })
            .collect()
    }
}

impl TryFrom<Vec<MatrixRow>> for ErrorMatrix {
    type Error = String;

    fn try_from(rows: Vec<MatrixRow>) -> Result<Self, Self::Error> {
        let mut m = ErrorMatrix::default();
        let mut seen = [false; 8];
        for row in rows {
            let i = row.error_type.index();
            if seen[i] {
                return Err(format!("duplicate matrix row for {}", row.error_type));
            }
            seen[i] = true;
            m.counts[i] = row.counts;
        }
        Ok(m)
    }
}

/// Per-engine breakdown of errors and segment/word categories.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QualityProfile {
    pub engine_id: String,
    pub total_epp: u64,
    pub total_segments: u64,
    pub total_words: u64,
    pub segment_counts: CategoryCounts,
    pub word_counts: CategoryCounts,
    pub matrix: ErrorMatrix,
    /// Penalty value → number of segments with that penalty.
    pub epptu_histogram: BTreeMap<u64, u64>,
}

/// Builds the quality profile of one engine over the whole project.
///
/// Each unit's word count goes entirely to that unit's category.
pub fn aggregate(
    project: &AnnotationProject,
    engine_id: &str,
    side: CountingSide,
) -> Result<QualityProfile, ScoringError> {
    require_engine(project, engine_id)?;
    let mut profile = QualityProfile {
        engine_id: engine_id.to_string(),
        total_epp: 0,
        total_segments: 0,
        total_words: 0,
        segment_counts: CategoryCounts::default(),
        word_counts: CategoryCounts::default(),
        matrix: ErrorMatrix::default(),
        epptu_histogram: BTreeMap::new(),
    };
    for unit in &project.units {
        let annotations = unit.annotations_for(engine_id);
        for a in annotations {
            profile.matrix.record(a);
        }
        let points = epptu(annotations);
        let category = classify_segment(points);
        let words = side.words(unit, engine_id);
        profile.total_epp += points;
        profile.total_segments += 1;
        profile.total_words += words;
        profile.segment_counts.add(category, 1);
        profile.word_counts.add(category, words);
        *profile.epptu_histogram.entry(points).or_default() += 1;
    }
    Ok(profile)
}

fn require_engine(project: &AnnotationProject, engine_id: &str) -> Result<(), ScoringError> {
    if project.has_engine(engine_id) {
        Ok(())
    } else {
        Err(ScoringError::EngineNotFound(engine_id.to_string()))
    }
}
