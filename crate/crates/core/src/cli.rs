//! Command-line entry point.
//!
//! Exit codes: 0 on success, 1 for data or validation errors, 2 for usage
//! errors. Results go to `out`, diagnostics to `err`.

use std::fs::{self, File};
use std::io::{BufReader, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use crate::ingest::{import_tsv, load_project, save_project, validate_project, ColumnMapping};
use crate::metrics::{format_decimal, per_errors, ter, tokenize, wer, Rate, TokenSequence, TokenizerConfig};
use crate::project::AnnotationProject;
use crate::report::{build_report, render_report, ReportFormat};
use crate::scoring::{aggregate, hope_score, CountingSide, SegmentCategory};
use crate::service::{serve, ProjectService};

#[derive(Debug, Parser)]
#[command(
    name = "hope",
    version,
    about = "Score post-editing annotations and compare MT engines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Create a project from a tab-separated corpus.
    Import {
        #[arg(long)]
        tsv: PathBuf,
        /// Zero-based column holding the source text.
        #[arg(long)]
        source_col: usize,
        /// Zero-based column holding unit ids; rows are numbered when absent.
        #[arg(long)]
        id_col: Option<usize>,
        /// Engine output column as ENGINE=COLUMN (zero-based); repeatable.
        #[arg(long = "engine", value_parser = parse_engine_column, required = true)]
        engines: Vec<(String, usize)>,
        #[arg(long)]
        out: PathBuf,
        /// Defaults to the output file name without extension.
        #[arg(long)]
        project_id: Option<String>,
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        source_lang: Option<String>,
        #[arg(long)]
        target_lang: Option<String>,
    },
    /// Print the HOPE score, category counts and EPPTU histogram of one engine.
    Score {
        project: PathBuf,
        #[arg(long)]
        engine: String,
        #[arg(long, value_enum, default_value_t = Side::Source)]
        side: Side,
    },
    /// Render a comparison report.
    Report {
        project: PathBuf,
        /// Comma-separated engine ids; all registered engines when omitted.
        #[arg(long, value_delimiter = ',')]
        engines: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(long, value_enum, default_value_t = Side::Source)]
        side: Side,
        /// Count units never annotated for an engine as unchanged.
        #[arg(long)]
        allow_partial: bool,
    },
    /// Automatic edit-distance metrics over line-aligned files.
    ScoreAuto {
        #[arg(long)]
        hyp: PathBuf,
        /// Reference file; repeat for multiple references (TER only).
        #[arg(long = "ref", required = true)]
        refs: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Metric::Wer)]
        metric: Metric,
        #[arg(long)]
        lowercase: bool,
        #[arg(long)]
        split_punct: bool,
    },
    /// Serve projects over HTTP.
    Serve {
        #[arg(long, env = "HOPE_LISTEN", default_value = "127.0.0.1:8080")]
        listen: SocketAddr,
        #[arg(long, env = "HOPE_PROJECTS_DIR", default_value = ".")]
        projects_dir: PathBuf,
    },
    /// List project invariant violations.
    Validate { project: PathBuf },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Side {
    Source,
    Target,
}

impl From<Side> for CountingSide {
    fn from(s: Side) -> Self {
        match s {
            Side::Source => CountingSide::Source,
            Side::Target => CountingSide::Target,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Machine,
    #[value(name = "plot_data", alias = "plot-data")]
    PlotData,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Table => ReportFormat::Table,
            Format::Machine => ReportFormat::Machine,
            Format::PlotData => ReportFormat::PlotData,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Metric {
    Wer,
    Per,
    Ter,
    Hter,
}

fn parse_engine_column(s: &str) -> Result<(String, usize), String> {
    let (engine, col) = s
        .rsplit_once('=')
        .ok_or_else(|| format!("expected ENGINE=COLUMN, got {s:?}"))?;
    if engine.is_empty() {
        return Err("empty engine id".into());
    }
    let col = col.parse().map_err(|_| format!("bad column {col:?}"))?;
    Ok((engine.to_string(), col))
}

/// Failure of a subcommand.
enum Failure {
    Data(String),
    Usage(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Data(e.to_string())
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure::Data(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Import {
            tsv,
            source_col,
            id_col,
            engines,
            out: dest,
            project_id,
            name,
            source_lang,
            target_lang,
        } => {
            let mut mapping = ColumnMapping::new(source_col);
            mapping.id = id_col;
            mapping.targets = engines;
            let reader = BufReader::new(File::open(&tsv).map_err(|e| format!("{}: {e}", tsv.display()))?);
            let mut project = import_tsv(reader, &mapping).map_err(|e| format!("{}: {e}", tsv.display()))?;
            project.project_id = project_id.unwrap_or_else(|| file_stem(&dest));
            if let Some(n) = name {
                project.name = n;
            }
            if let Some(l) = source_lang {
                project.source_lang = l;
            }
            if let Some(l) = target_lang {
                project.target_lang = l;
            }
            save_project(&project, &dest)?;
            writeln!(out, "units\t{}", project.units.len())?;
            writeln!(out, "engines\t{}", project.engine_ids().collect::<Vec<_>>().join(","))?;
            writeln!(out, "project\t{}", dest.display())?;
            Ok(0)
        }
        Command::Score { project, engine, side } => {
            let project = load(&project)?;
            let profile = aggregate(&project, &engine, side.into())?;
            debug_assert_eq!(Some(profile.total_epp), hope_score(&project, &engine).ok());
            writeln!(out, "engine\t{engine}")?;
            writeln!(out, "side\t{}", CountingSide::from(side))?;
            writeln!(out, "hope_score\t{}", profile.total_epp)?;
            writeln!(out, "segments\t{}", profile.total_segments)?;
            writeln!(out, "words\t{}", profile.total_words)?;
            for c in SegmentCategory::ALL {
                writeln!(out, "segment.{}\t{}", c.key(), profile.segment_counts.get(c))?;
            }
            for c in SegmentCategory::ALL {
                writeln!(out, "word.{}\t{}", c.key(), profile.word_counts.get(c))?;
            }
            for (value, n) in &profile.epptu_histogram {
                writeln!(out, "epptu.{value}\t{n}")?;
            }
            Ok(0)
        }
        Command::Report {
            project,
            engines,
            format,
            side,
            allow_partial,
        } => {
            let project = load(&project)?;
            let engines: Vec<String> = if engines.is_empty() {
                project.engine_ids().map(str::to_string).collect()
            } else {
                engines
            };
            let report = build_report(&project, &engines, side.into(), allow_partial)?;
            out.write_all(render_report(&report, format.into()).as_bytes())?;
            Ok(0)
        }
        Command::ScoreAuto {
            hyp,
            refs,
            metric,
            lowercase,
            split_punct,
        } => score_auto(
            &hyp,
            &refs,
            metric,
            TokenizerConfig {
                lowercase,
                split_punctuation: split_punct,
            },
            out,
        ),
        Command::Serve { listen, projects_dir } => {
            let _ = tracing_subscriber::fmt()
                .with_writer(std::io::stderr)
                .with_env_filter(
                    tracing_subscriber::EnvFilter::try_from_default_env()
                        .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new("info")),
                )
                .try_init();
            let service = Arc::new(ProjectService::open_dir(&projects_dir)?);
            writeln!(
                err,
                "serving {} projects from {} on http://{listen}",
                service.list_projects().len(),
                projects_dir.display()
            )?;
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(async move {
                let listener = tokio::net::TcpListener::bind(listen).await?;
                tokio::select! {
                    r = serve(service, listener) => r,
                    _ = tokio::signal::ctrl_c() => Ok(()),
                }
            })?;
            Ok(0)
        }
        Command::Validate { project } => {
            let project = load(&project)?;
            let violations = validate_project(&project);
            if violations.is_empty() {
                writeln!(out, "ok")?;
                return Ok(0);
            }
            for v in &violations {
                writeln!(out, "{v}")?;
            }
            writeln!(err, "{} violations", violations.len())?;
            Ok(1)
        }
    }
}

fn load(path: &Path) -> Result<AnnotationProject, Failure> {
    load_project(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .filter(|s| !s.is_empty())
        .unwrap_or_else(|| "project".to_string())
}

fn read_lines(path: &Path) -> Result<Vec<String>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(text.lines().map(str::to_string).collect())
}

fn score_auto(
    hyp_path: &Path,
    ref_paths: &[PathBuf],
    metric: Metric,
    config: TokenizerConfig,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    if metric != Metric::Ter && ref_paths.len() > 1 {
        return Err(Failure::Usage(
            "multiple --ref files are only supported with --metric ter".into(),
        ));
    }
    let hyps = read_lines(hyp_path)?;
    let mut ref_sets = Vec::with_capacity(ref_paths.len());
    for path in ref_paths {
        let lines = read_lines(path)?;
        if lines.len() != hyps.len() {
            return Err(Failure::Data(format!(
                "line count mismatch: {} has {} lines, {} has {}",
                hyp_path.display(),
                hyps.len(),
                path.display(),
                lines.len()
            )));
        }
        ref_sets.push(lines);
    }

    let k = ref_sets.len() as u64;
    // rate_i = edits_i * k / ref_words_i, summed as Σ edits * k / Σ ref_words
    let (mut total_edits, mut total_ref_words) = (0u64, 0u64);
    writeln!(out, "line\trate\tedits\tref_words")?;
    for (i, h) in hyps.iter().enumerate() {
        let line = i + 1;
        let hyp = tokenize(h, config);
        let refs: Vec<TokenSequence> = ref_sets.iter().map(|set| tokenize(&set[i], config)).collect();
        if refs.iter().any(TokenSequence::is_empty) {
            return Err(Failure::Data(format!("line {line}: reference is empty")));
        }
        let ref_words: u64 = refs.iter().map(|r| r.len() as u64).sum();
        let edits = match metric {
            Metric::Wer => wer(&hyp, &refs[0])?.counts.edits(),
            Metric::Per => per_errors(&hyp, &refs[0])?,
            Metric::Ter | Metric::Hter => ter(&hyp, &refs)?.counts.edits(),
        };
        total_edits += edits;
        total_ref_words += ref_words;
        let rate = Rate::new(edits * k, ref_words);
        writeln!(
            out,
            "{line}\t{}\t{edits}\t{}",
            format_decimal(rate, 4),
            Rate::new(ref_words, k)
        )?;
    }
    let corpus = if total_ref_words == 0 {
        "n/a".to_string()
    } else {
        format_decimal(Rate::new(total_edits * k, total_ref_words), 4)
    };
    writeln!(
        out,
        "corpus\t{corpus}\t{total_edits}\t{}",
        Rate::new(total_ref_words, k)
    )?;
    Ok(0)
}
