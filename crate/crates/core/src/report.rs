//! Engine comparison reports and their renderings.
//!
//! Both segment-level and word-level breakdowns are always produced. There is
//! no single "winner" figure: profiles and pairwise differences are laid side
//! by side.

use std::collections::{BTreeMap, HashSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::project::{timestamp, AnnotationProject};
use crate::scoring::{aggregate, CategoryCounts, CountingSide, QualityProfile, ScoringError, SegmentCategory};
use crate::taxonomy::{ErrorType, Severity};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReportError {
    #[error(transparent)]
    Scoring(#[from] ScoringError),
    #[error("at least {needed} engines required, got {got}")]
    TooFewEngines { needed: usize, got: usize },
    #[error("engine {0} listed twice")]
    DuplicateEngine(String),
    #[error("{count} units are not annotated for engine {engine}; pass allow_partial to count them as unchanged")]
    Unreviewed { engine: String, count: u64 },
}

/// Signed per-category differences, first engine minus second.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryDeltas {
    pub unchanged: i64,
    pub good_enough: i64,
    pub must_fix: i64,
}

impl CategoryDeltas {
    fn between(a: &CategoryCounts, b: &CategoryCounts) -> Self {
        CategoryDeltas {
            unchanged: a.unchanged as i64 - b.unchanged as i64,
            good_enough: a.good_enough as i64 - b.good_enough as i64,
            must_fix: a.must_fix as i64 - b.must_fix as i64,
        }
    }

    pub fn get(&self, category: SegmentCategory) -> i64 {
        match category {
            SegmentCategory::Unchanged => self.unchanged,
            SegmentCategory::GoodEnough => self.good_enough,
            SegmentCategory::MustFix => self.must_fix,
        }
    }

    pub fn is_zero(&self) -> bool {
        *self == CategoryDeltas::default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineDelta {
    pub engine_a: String,
    pub engine_b: String,
    pub epp_delta: i64,
    pub segment_category_deltas: CategoryDeltas,
    pub word_category_deltas: CategoryDeltas,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub project_id: String,
    pub counting_side: CountingSide,
    /// The project's last modification time, so equal inputs give equal reports.
    #[serde(with = "timestamp")]
    pub generated_at: DateTime<Utc>,
    pub profiles: Vec<QualityProfile>,
    pub deltas: Vec<EngineDelta>,
    /// Engines with units that were never annotated and were counted as unchanged.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub unreviewed_segments: BTreeMap<String, u64>,
}

impl ComparisonReport {
    pub fn profile(&self, engine_id: &str) -> Option<&QualityProfile> {
        self.profiles.iter().find(|p| p.engine_id == engine_id)
    }

    pub fn is_partial(&self) -> bool {
        !self.unreviewed_segments.is_empty()
    }
}

/// Compares two or more engines.
///
/// Unless `allow_partial` is set, every unit must have been annotated (possibly
/// with an empty list) for every listed engine.
pub fn compare_engines<S: AsRef<str>>(
    project: &AnnotationProject,
    engine_ids: &[S],
    side: CountingSide,
    allow_partial: bool,
) -> Result<ComparisonReport, ReportError> {
    if engine_ids.len() < 2 {
        return Err(ReportError::TooFewEngines {
            needed: 2,
            got: engine_ids.len(),
        });
    }
    build_report(project, engine_ids, side, allow_partial)
}

/// Like [`compare_engines`] but also accepts a single engine, yielding its
/// profile with no deltas.
pub fn build_report<S: AsRef<str>>(
    project: &AnnotationProject,
    engine_ids: &[S],
    side: CountingSide,
    allow_partial: bool,
) -> Result<ComparisonReport, ReportError> {
    if engine_ids.is_empty() {
        return Err(ReportError::TooFewEngines { needed: 1, got: 0 });
    }
    let mut seen = HashSet::new();
    let mut profiles = Vec::with_capacity(engine_ids.len());
    let mut unreviewed_segments = BTreeMap::new();
    for id in engine_ids {
        let id = id.as_ref();
        if !seen.insert(id) {
            return Err(ReportError::DuplicateEngine(id.to_string()));
        }
        let profile = aggregate(project, id, side)?;
        let missing = project.units.iter().filter(|u| !u.is_reviewed(id)).count() as u64;
        if missing > 0 {
            if !allow_partial {
                return Err(ReportError::Unreviewed {
                    engine: id.to_string(),
                    count: missing,
                });
            }
            unreviewed_segments.insert(id.to_string(), missing);
        }
        profiles.push(profile);
    }
    let mut deltas = Vec::new();
    for (i, a) in profiles.iter().enumerate() {
        for b in &profiles[i + 1..] {
            deltas.push(EngineDelta {
                engine_a: a.engine_id.clone(),
                engine_b: b.engine_id.clone(),
                epp_delta: a.total_epp as i64 - b.total_epp as i64,
                segment_category_deltas: CategoryDeltas::between(&a.segment_counts, &b.segment_counts),
                word_category_deltas: CategoryDeltas::between(&a.word_counts, &b.word_counts),
            });
        }
    }
    Ok(ComparisonReport {
        project_id: project.project_id.clone(),
        counting_side: side,
        generated_at: project.modified_at,
        profiles,
        deltas,
        unreviewed_segments,
    })
}

/// A percentage held in tenths of a percent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Percent(pub u32);

impl Percent {
    pub fn as_f64(self) -> f64 {
        f64::from(self.0) / 10.0
    }
}

impl fmt::Display for Percent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.0 / 10, self.0 % 10)
    }
}

/// Percentages at one decimal place that sum to exactly 100.0, by the
/// largest-remainder method. `None` when the total is zero.
///
/// Leftover tenths go to the largest remainders; ties favour earlier entries.
pub fn percentages(counts: &[u64]) -> Option<Vec<Percent>> {
    let total: u128 = counts.iter().map(|c| u128::from(*c)).sum();
    if total == 0 {
        return None;
    }
    let mut shares: Vec<u32> = Vec::with_capacity(counts.len());
    let mut remainders: Vec<(u128, usize)> = Vec::with_capacity(counts.len());
    for (i, c) in counts.iter().enumerate() {
        let scaled = u128::from(*c) * 1000;
        shares.push((scaled / total) as u32);
        remainders.push((scaled % total, i));
    }
    let assigned: u32 = shares.iter().sum();
    remainders.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    for (_, i) in remainders.into_iter().take((1000 - assigned) as usize) {
        shares[i] += 1;
    }
    Some(shares.into_iter().map(Percent).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    /// Canonical JSON mirroring [`ComparisonReport`].
    Machine,
    /// Aligned plain-text tables.
    Table,
    /// JSON series of (category, count, percent) per engine and level.
    PlotData,
}

impl ReportFormat {
    pub fn name(self) -> &'static str {
        match self {
            ReportFormat::Machine => "machine",
            ReportFormat::Table => "table",
            ReportFormat::PlotData => "plot_data",
        }
    }

    pub fn content_type(self) -> &'static str {
        match self {
            ReportFormat::Table => "text/plain; charset=utf-8",
            ReportFormat::Machine | ReportFormat::PlotData => "application/json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown report format {0:?} (expected machine, table or plot_data)")]
pub struct UnknownFormat(pub String);

impl FromStr for ReportFormat {
    type Err = UnknownFormat;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "machine" => Ok(ReportFormat::Machine),
            "table" => Ok(ReportFormat::Table),
            "plot_data" | "plot-data" => Ok(ReportFormat::PlotData),
            _ => Err(UnknownFormat(s.to_string())),
        }
    }
}

pub fn render_report(report: &ComparisonReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Machine => json_document(report),
        ReportFormat::Table => render_table(report),
        ReportFormat::PlotData => json_document(&plot_data(report)),
    }
}

/// Reads back a `machine` rendering.
pub fn parse_machine_report(text: &str) -> Result<ComparisonReport, serde_json::Error> {
    serde_json::from_str(text)
}

fn json_document<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("report serializes");
    out.push('\n');
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotData {
    pub project_id: String,
    pub counting_side: CountingSide,
    pub series: Vec<PlotSeries>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotSeries {
    pub engine_id: String,
    /// `segment` or `word`.
    pub level: String,
    pub points: Vec<PlotPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotPoint {
    pub category: SegmentCategory,
    pub count: u64,
    /// `None` when the level total is zero.
    pub percent: Option<f64>,
}

pub fn plot_data(report: &ComparisonReport) -> PlotData {
    let mut series = Vec::new();
    for profile in &report.profiles {
        for (level, counts) in [("segment", &profile.segment_counts), ("word", &profile.word_counts)] {
            let values = counts.as_array();
            let pct = percentages(&values);
            let points = SegmentCategory::ALL
                .iter()
                .enumerate()
                .map(|(i, category)| PlotPoint {
                    category: *category,
                    count: values[i],
                    percent: pct.as_ref().map(|p| p[i].as_f64()),
                })
                .collect();
            series.push(PlotSeries {
                engine_id: profile.engine_id.clone(),
                level: level.to_string(),
                points,
            });
        }
    }
    PlotData {
        project_id: report.project_id.clone(),
        counting_side: report.counting_side,
        series,
    }
}

/// Plain-text table with a left-aligned first column and right-aligned rest.
struct TextTable {
    rows: Vec<Vec<String>>,
}

impl TextTable {
    fn new<S: ToString>(header: &[S]) -> Self {
        TextTable {
            rows: vec![header.iter().map(ToString::to_string).collect()],
        }
    }

    fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    fn render(&self, out: &mut String) {
        let cols = self.rows.iter().map(Vec::len).max().unwrap_or(0);
        let widths: Vec<usize> = (0..cols)
            .map(|c| {
                self.rows
                    .iter()
                    .filter_map(|r| r.get(c))
                    .map(|s| s.chars().count())
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        for row in &self.rows {
            let mut line = String::new();
            for (c, cell) in row.iter().enumerate() {
                if c == 0 {
                    let _ = write!(line, "{cell:<w$}", w = widths[0]);
                } else {
                    let _ = write!(line, "  {cell:>w$}", w = widths[c]);
                }
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
    }
}

fn signed(v: i64) -> String {
    if v > 0 {
        format!("+{v}")
    } else {
        v.to_string()
    }
}

fn category_table(out: &mut String, title: &str, unit: &str, counts: &CategoryCounts) {
    let _ = writeln!(out, "{title}");
    let values = counts.as_array();
    let pct = percentages(&values);
    let mut t = TextTable::new(&["category", unit, "percent"]);
    for (i, category) in SegmentCategory::ALL.iter().enumerate() {
        let p = pct.as_ref().map_or("n/a".to_string(), |p| format!("{}%", p[i]));
        t.row(vec![category.label().to_string(), values[i].to_string(), p]);
    }
    let total_pct = if pct.is_some() { "100.0%" } else { "n/a" };
    t.row(vec!["total".into(), counts.total().to_string(), total_pct.into()]);
    t.render(out);
}

fn render_table(report: &ComparisonReport) -> String {
    let mut out = String::new();
    let engines: Vec<&str> = report.profiles.iter().map(|p| p.engine_id.as_str()).collect();
    let _ = writeln!(out, "HOPE quality report");
    let generated = report.generated_at.to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    let _ = writeln!(out, "{:<15}{}", "project:", report.project_id);
    let _ = writeln!(out, "{:<15}{}", "counting side:", report.counting_side);
    let _ = writeln!(out, "{:<15}{}", "generated at:", generated);
    let _ = writeln!(out, "{:<15}{}", "engines:", engines.join(", "));
    for (engine, n) in &report.unreviewed_segments {
        let _ = writeln!(out, "note: {n} unannotated units of {engine} counted as unchanged");
    }

    for profile in &report.profiles {
        let _ = writeln!(out);
        let _ = writeln!(out, "== {} ==", profile.engine_id);
        let _ = writeln!(out, "HOPE score (total EPP): {}", profile.total_epp);
        let _ = writeln!(out, "segments: {}", profile.total_segments);
        let _ = writeln!(out, "words ({}): {}", report.counting_side, profile.total_words);

        let _ = writeln!(out);
        let _ = writeln!(out, "errors by type and severity");
        let mut header: Vec<String> = vec!["type".into()];
        header.extend(Severity::ALL.iter().map(|s| format!("{s}({})", s.weight())));
        header.push("errors".into());
        header.push("points".into());
        let mut t = TextTable::new(&header);
        for et in ErrorType::ALL {
            let row = profile.matrix.row(et);
            let points: u64 = Severity::ALL.iter().map(|s| row[s.index()] * s.weight()).sum();
            let mut cells = vec![et.code().to_string()];
            cells.extend(row.iter().map(u64::to_string));
            cells.push(profile.matrix.row_total(et).to_string());
            cells.push(points.to_string());
            t.row(cells);
        }
        let mut cells = vec!["total".to_string()];
        cells.extend(
            Severity::ALL
                .iter()
                .map(|s| profile.matrix.column_total(*s).to_string()),
        );
        cells.push(profile.matrix.total_errors().to_string());
        cells.push(profile.matrix.weighted_total().to_string());
        t.row(cells);
        t.render(&mut out);

        let _ = writeln!(out);
        category_table(&mut out, "segment level", "segments", &profile.segment_counts);
        let _ = writeln!(out);
        category_table(&mut out, "word level", "words", &profile.word_counts);

        let _ = writeln!(out);
        let _ = writeln!(out, "EPPTU histogram");
        let mut t = TextTable::new(&["epptu", "segments"]);
        for (value, n) in &profile.epptu_histogram {
            t.row(vec![value.to_string(), n.to_string()]);
        }
        t.render(&mut out);
    }

    for d in &report.deltas {
        let _ = writeln!(out);
        let _ = writeln!(out, "== {} vs {} ==", d.engine_a, d.engine_b);
        let _ = writeln!(out, "HOPE score delta: {}", signed(d.epp_delta));
        let mut t = TextTable::new(&["category", "segments", "words"]);
        for category in SegmentCategory::ALL {
            t.row(vec![
                category.label().to_string(),
                signed(d.segment_category_deltas.get(category)),
                signed(d.word_category_deltas.get(category)),
            ]);
        }
        t.render(&mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::project::{Engine, ErrorAnnotation, TranslationUnit};
    use proptest::prelude::*;

    fn tenths(p: &[Percent]) -> Vec<u32> {
        p.iter().map(|p| p.0).collect()
    }

    #[test]
    fn simple_percentages() {
        assert_eq!(tenths(&percentages(&[3, 5, 2]).unwrap()), [300, 500, 200]);
        assert_eq!(percentages(&[3, 5, 2]).unwrap()[0].to_string(), "30.0");
        assert!(percentages(&[0, 0, 0]).is_none());
    }

    #[test]
    fn thirds_sum_to_hundred() {
        // 33.33.. each; the leftover tenth goes to the first
        assert_eq!(tenths(&percentages(&[1, 1, 1]).unwrap()), [334, 333, 333]);
        assert_eq!(tenths(&percentages(&[2, 1, 0]).unwrap()), [667, 333, 0]);
    }

    proptest! {
        #[test]
        fn percentages_always_sum_to_100(counts in prop::collection::vec(0u64..1_000_000, 1..6)) {
            match percentages(&counts) {
                None => prop_assert!(counts.iter().all(|c| *c == 0)),
                Some(p) => {
                    prop_assert_eq!(p.iter().map(|x| x.0).sum::<u32>(), 1000);
                    let total: u64 = counts.iter().sum();
                    for (c, x) in counts.iter().zip(&p) {
                        // each share within one tenth of its exact value
                        let exact = *c as f64 * 1000.0 / total as f64;
                        prop_assert!((f64::from(x.0) - exact).abs() < 1.0);
                    }
                }
            }
        }
    }

    fn two_engine_project() -> AnnotationProject {
        let mut p = AnnotationProject::new("p");
        p.add_engine(Engine::new("a"));
        p.add_engine(Engine::new("b"));
        for i in 0..3 {
            let mut u = TranslationUnit::new(i.to_string(), "one two")
                .with_target("a", "x")
                .with_target("b", "y");
            u.annotations.insert("a".into(), vec![]);
            u.annotations.insert("b".into(), vec![]);
            p.units.push(u);
        }
        p
    }

    #[test]
    fn epp_delta_is_a_minus_b() {
        let mut p = two_engine_project();
        let major = ErrorAnnotation::new(ErrorType::Mistranslation, Severity::Major);
        p.units[0].annotations.insert("a".into(), vec![major.clone(); 10]);
        p.units[1].annotations.insert("b".into(), vec![major.clone(); 13]);
        p.units[2].annotations.insert(
            "b".into(),
            vec![ErrorAnnotation::new(ErrorType::Style, Severity::Minor); 3],
        );
        let r = compare_engines(&p, &["a", "b"], CountingSide::Source, false).unwrap();
        assert_eq!(r.profiles[0].total_epp, 40);
        assert_eq!(r.profiles[1].total_epp, 55);
        assert_eq!(r.deltas[0].epp_delta, -15);
        assert_eq!(r.deltas[0].segment_category_deltas.must_fix, 0);
        assert_eq!(r.deltas[0].segment_category_deltas.unchanged, 1);
    }

    #[test]
    fn identical_annotations_give_zero_deltas() {
        let mut p = two_engine_project();
        let a = vec![ErrorAnnotation::new(ErrorType::Terminology, Severity::Medium)];
        for u in &mut p.units {
            u.annotations.insert("a".into(), a.clone());
            u.annotations.insert("b".into(), a.clone());
        }
        let r = compare_engines(&p, &["a", "b"], CountingSide::Source, false).unwrap();
        let d = &r.deltas[0];
        assert_eq!(d.epp_delta, 0);
        assert!(d.segment_category_deltas.is_zero());
        assert!(d.word_category_deltas.is_zero());
    }

    #[test]
    fn compare_errors() {
        let p = two_engine_project();
        assert!(matches!(
            compare_engines(&p, &["a"], CountingSide::Source, false),
            Err(ReportError::TooFewEngines { needed: 2, got: 1 })
        ));
        assert!(matches!(
            compare_engines(&p, &["a", "deepl"], CountingSide::Source, false),
            Err(ReportError::Scoring(ScoringError::EngineNotFound(_)))
        ));
        assert!(matches!(
            compare_engines(&p, &["a", "a"], CountingSide::Source, false),
            Err(ReportError::DuplicateEngine(_))
        ));
    }

    #[test]
    fn unreviewed_units_need_allow_partial() {
        let mut p = two_engine_project();
        p.units[1].annotations.remove("b");
        assert!(matches!(
            compare_engines(&p, &["a", "b"], CountingSide::Source, false),
            Err(ReportError::Unreviewed { count: 1, .. })
        ));
        let r = compare_engines(&p, &["a", "b"], CountingSide::Source, true).unwrap();
        assert!(r.is_partial());
        assert_eq!(r.unreviewed_segments["b"], 1);
        assert_eq!(r.profiles[1].segment_counts.unchanged, 3);
        assert!(render_report(&r, ReportFormat::Table).contains("note: 1 unannotated units of b"));
    }

    #[test]
    fn single_engine_report_has_no_deltas() {
        let p = two_engine_project();
        let r = build_report(&p, &["b"], CountingSide::Source, false).unwrap();
        assert_eq!(r.profiles.len(), 1);
        assert!(r.deltas.is_empty());
        assert!(!render_report(&r, ReportFormat::Table).contains(" vs "));
    }

    #[test]
    fn deltas_follow_input_order() {
        let mut p = two_engine_project();
        p.add_engine(Engine::new("c"));
        for u in &mut p.units {
            u.targets.insert("c".into(), "z".into());
            u.annotations.insert("c".into(), vec![]);
        }
        let r = compare_engines(&p, &["c", "a", "b"], CountingSide::Source, false).unwrap();
        let pairs: Vec<_> = r
            .deltas
            .iter()
            .map(|d| (d.engine_a.as_str(), d.engine_b.as_str()))
            .collect();
        assert_eq!(pairs, [("c", "a"), ("c", "b"), ("a", "b")]);
    }

    #[test]
    fn machine_rendering_round_trips() {
        let mut p = two_engine_project();
        p.units[0].annotations.insert(
            "a".into(),
            vec![ErrorAnnotation::new(ErrorType::ProperName, Severity::Critical)],
        );
        let r = compare_engines(&p, &["a", "b"], CountingSide::Target, false).unwrap();
        let text = render_report(&r, ReportFormat::Machine);
        assert_eq!(parse_machine_report(&text).unwrap(), r);
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn empty_project_renders_na() {
        let mut p = AnnotationProject::new("empty");
        p.add_engine(Engine::new("a"));
        p.add_engine(Engine::new("b"));
        let r = compare_engines(&p, &["a", "b"], CountingSide::Source, false).unwrap();
        let table = render_report(&r, ReportFormat::Table);
        assert!(table.contains("unchanged           0      n/a"), "{table}");
        let plot = plot_data(&r);
        assert!(plot.series.iter().flat_map(|s| &s.points).all(|p| p.percent.is_none()));
    }

    #[test]
    fn plot_data_series() {
        let mut p = two_engine_project();
        p.units[0].annotations.insert(
            "a".into(),
            vec![ErrorAnnotation::new(ErrorType::Style, Severity::Minor)],
        );
        let r = compare_engines(&p, &["a", "b"], CountingSide::Source, false).unwrap();
        let plot = plot_data(&r);
        assert_eq!(plot.series.len(), 4);
        let seg_a = &plot.series[0];
        assert_eq!((seg_a.engine_id.as_str(), seg_a.level.as_str()), ("a", "segment"));
        let pct: Vec<_> = seg_a.points.iter().map(|p| p.percent.unwrap()).collect();
        assert_eq!(pct, [66.7, 33.3, 0.0]);
        let json = render_report(&r, ReportFormat::PlotData);
        let back: PlotData = serde_json::from_str(&json).unwrap();
        assert_eq!(back, plot);
    }

    #[test]
    fn format_names() {
        for f in [ReportFormat::Machine, ReportFormat::Table, ReportFormat::PlotData] {
            assert_eq!(f.name().parse::<ReportFormat>().unwrap(), f);
        }
        assert!("pdf".parse::<ReportFormat>().is_err());
    }
}
