use std::fs;
use std::path::Path;

use hope::ingest::{load_project, save_project};
use hope::project::ErrorAnnotation;
use hope::report::parse_machine_report;
use hope::taxonomy::{ErrorType, Severity};

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn hope(args: &[&str]) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["hope"];
    argv.extend_from_slice(args);
    let code = hope::cli::run(argv, &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn imported(dir: &Path) -> std::path::PathBuf {
    let tsv = dir.join("corpus.tsv");
    fs::write(
        &tsv,
        "source\tsys1\tgoogle\n\
         Open the file.\tОткройте файл.\tОткрыть файл.\n\
         Save your work often.\tСохраняйте работу часто.\tЧасто сохраняйте свою работу.\n\
         Click Export.\tНажмите Экспорт.\tНажмите «Экспорт».\n",
    )
    .unwrap();
    let out = dir.join("demo.hope");
    let r = hope(&[
        "import",
        "--tsv",
        p(&tsv),
        "--source-col",
        "0",
        "--engine",
        "sys1=1",
        "--engine",
        "google=2",
        "--out",
        p(&out),
        "--source-lang",
        "en",
        "--target-lang",
        "ru",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("units\t3"));
    out
}

fn annotate(path: &Path, engine: &str, per_unit: &[Vec<ErrorAnnotation>]) {
    let mut project = load_project(path).unwrap();
    for (unit, anns) in project.units.iter_mut().zip(per_unit) {
        unit.annotations.insert(engine.to_string(), anns.clone());
    }
    save_project(&project, path).unwrap();
}

fn ann(t: ErrorType, s: Severity) -> ErrorAnnotation {
    ErrorAnnotation::new(t, s)
}

#[test]
fn import_creates_a_loadable_project() {
    let dir = tempfile::tempdir().unwrap();
    let path = imported(dir.path());
    let project = load_project(&path).unwrap();
    assert_eq!(project.project_id, "demo");
    assert_eq!(project.units.len(), 3);
    assert_eq!(project.source_lang, "en");
    assert_eq!(project.units[2].targets["google"], "Нажмите «Экспорт».");
}

#[test]
fn score_prints_the_total() {
    let dir = tempfile::tempdir().unwrap();
    let path = imported(dir.path());
    annotate(
        &path,
        "sys1",
        &[
            vec![],
            vec![ann(ErrorType::Style, Severity::Major)],
            vec![
                ann(ErrorType::Terminology, Severity::Minor),
                ann(ErrorType::Mistranslation, Severity::Major),
            ],
        ],
    );
    let r = hope(&["score", p(&path), "--engine", "sys1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert!(lines.contains(&"hope_score\t9"), "{}", r.stdout);
    assert!(lines.contains(&"segments\t3"));
    assert!(lines.contains(&"segment.unchanged\t1"));
    assert!(lines.contains(&"segment.good_enough\t1"));
    assert!(lines.contains(&"segment.must_fix\t1"));
    assert!(lines.contains(&"words\t9"));
    assert!(lines.contains(&"word.good_enough\t4"));
    assert!(lines.contains(&"epptu.5\t1"));

    let target = hope(&["score", p(&path), "--engine", "sys1", "--side", "target"]);
    assert!(target.stdout.contains("side\ttarget"));
    assert!(target.stdout.contains("words\t7"), "{}", target.stdout);
}

#[test]
fn score_unknown_engine_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = imported(dir.path());
    let r = hope(&["score", p(&path), "--engine", "deepl"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("engine not found: deepl"));
    assert!(r.stdout.is_empty());
}

#[test]
fn report_machine_output_reparses() {
    let dir = tempfile::tempdir().unwrap();
    let path = imported(dir.path());
    let unit_errors = vec![vec![ann(ErrorType::Impact, Severity::Medium)], vec![], vec![]];
    annotate(&path, "sys1", &unit_errors);
    annotate(
        &path,
        "google",
        &[vec![], vec![], vec![ann(ErrorType::ProperName, Severity::Severe)]],
    );
    let r = hope(&["report", p(&path), "--engines", "sys1,google", "--format", "machine"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let project = load_project(&path).unwrap();
    let expected = hope::report::compare_engines(&project, &["sys1", "google"], Default::default(), false).unwrap();
    assert_eq!(parse_machine_report(&r.stdout).unwrap(), expected);

    let table = hope(&["report", p(&path), "--engines", "sys1,google"]);
    assert!(table.stdout.contains("== sys1 vs google =="));
    assert!(table.stdout.contains("HOPE score delta: -6"), "{}", table.stdout);
}

#[test]
fn report_on_unannotated_project_needs_allow_partial() {
    let dir = tempfile::tempdir().unwrap();
    let path = imported(dir.path());
    let r = hope(&["report", p(&path), "--format", "table"]);
    assert_eq!(r.code, 1);
    let r = hope(&["report", p(&path), "--format", "plot_data", "--allow-partial"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("\"level\": \"word\""));
}

#[test]
fn validate_reports_dangling_engine() {
    let dir = tempfile::tempdir().unwrap();
    let path = imported(dir.path());
    let ok = hope(&["validate", p(&path)]);
    assert_eq!((ok.code, ok.stdout.as_str()), (0, "ok\n"));

    // save_project refuses invalid projects, so write the document directly
    let mut project = load_project(&path).unwrap();
    project.units[0]
        .annotations
        .insert("deepl".into(), vec![ann(ErrorType::Mistranslation, Severity::Major)]);
    fs::write(&path, hope::ingest::to_canonical_string(&project)).unwrap();
    let r = hope(&["validate", p(&path)]);
    assert_eq!(r.code, 1);
    assert_eq!(r.stdout.lines().count(), 1, "{}", r.stdout);
    assert!(r.stdout.contains("deepl"));
    assert!(r.stdout.contains("000001"));
}

#[test]
fn load_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.hope");
    fs::write(&path, "{\"schema_version\": 99}").unwrap();
    let r = hope(&["validate", p(&path)]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("unsupported schema"));
    let r = hope(&["score", p(&dir.path().join("missing.hope")), "--engine", "x"]);
    assert_eq!(r.code, 1);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(hope(&[]).code, 2);
    assert_eq!(hope(&["frobnicate"]).code, 2);
    assert_eq!(hope(&["score"]).code, 2);
    assert_eq!(
        hope(&["score-auto", "--hyp", "h", "--ref", "r", "--metric", "bleu"]).code,
        2
    );
    assert_eq!(
        hope(&[
            "import",
            "--tsv",
            "x",
            "--source-col",
            "0",
            "--engine",
            "noequals",
            "--out",
            "o"
        ])
        .code,
        2
    );
    let help = hope(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("score-auto"));
}

#[test]
fn import_ragged_row_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let tsv = dir.path().join("bad.tsv");
    fs::write(&tsv, "a\tb\tc\nd\te\n").unwrap();
    let out = dir.path().join("bad.hope");
    let r = hope(&[
        "import",
        "--tsv",
        p(&tsv),
        "--source-col",
        "0",
        "--engine",
        "s=1",
        "--engine",
        "g=2",
        "--out",
        p(&out),
    ]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("row 2"), "{}", r.stderr);
    assert!(!out.exists());
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn score_auto_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let text = "the cat sat on the mat\nhello world\n";
    let h = write(dir.path(), "hyp.txt", text);
    let r = write(dir.path(), "ref.txt", text);
    for metric in ["wer", "per", "ter", "hter"] {
        let out = hope(&["score-auto", "--hyp", p(&h), "--ref", p(&r), "--metric", metric]);
        assert_eq!(out.code, 0, "{metric}: {}", out.stderr);
        let corpus = out.stdout.lines().last().unwrap();
        let rate: f64 = corpus.split('\t').nth(1).unwrap().parse().unwrap();
        assert_eq!(rate, 0.0, "{metric}");
    }
}

#[test]
fn score_auto_per_line_and_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let h = write(dir.path(), "hyp.txt", "c d a b\na b x d\n");
    let r = write(dir.path(), "ref.txt", "a b c d\na b c d\n");
    let ter = hope(&["score-auto", "--hyp", p(&h), "--ref", p(&r), "--metric", "ter"]);
    assert_eq!(
        ter.stdout,
        "line\trate\tedits\tref_words\n1\t0.2500\t1\t4\n2\t0.2500\t1\t4\ncorpus\t0.2500\t2\t8\n"
    );
    let wer = hope(&["score-auto", "--hyp", p(&h), "--ref", p(&r)]);
    assert!(wer.stdout.ends_with("corpus\t0.6250\t5\t8\n"), "{}", wer.stdout);
}

#[test]
fn score_auto_multi_reference_ter() {
    let dir = tempfile::tempdir().unwrap();
    let h = write(dir.path(), "hyp.txt", "a b x y\n");
    let r1 = write(dir.path(), "r1.txt", "a b c d\n");
    let r2 = write(dir.path(), "r2.txt", "p q r s t u\n");
    let out = hope(&[
        "score-auto",
        "--hyp",
        p(&h),
        "--ref",
        p(&r1),
        "--ref",
        p(&r2),
        "--metric",
        "ter",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("1\t0.4000\t2\t5\n"), "{}", out.stdout);
    let wer = hope(&["score-auto", "--hyp", p(&h), "--ref", p(&r1), "--ref", p(&r2)]);
    assert_eq!(wer.code, 2);
}

#[test]
fn score_auto_options_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let h = write(dir.path(), "hyp.txt", "Hello, World\n");
    let r = write(dir.path(), "ref.txt", "hello , world\n");
    let plain = hope(&["score-auto", "--hyp", p(&h), "--ref", p(&r)]);
    assert!(plain.stdout.contains("1\t1.0000"), "{}", plain.stdout);
    let norm = hope(&[
        "score-auto",
        "--hyp",
        p(&h),
        "--ref",
        p(&r),
        "--lowercase",
        "--split-punct",
    ]);
    assert!(norm.stdout.contains("1\t0.0000"), "{}", norm.stdout);

    let short = write(dir.path(), "short.txt", "one line\n");
    let two = write(dir.path(), "two.txt", "one\ntwo\n");
    let mismatch = hope(&["score-auto", "--hyp", p(&two), "--ref", p(&short)]);
    assert_eq!(mismatch.code, 1);
    assert!(
        mismatch.stderr.contains("2 lines") && mismatch.stderr.contains("has 1"),
        "{}",
        mismatch.stderr
    );

    let empty_ref = write(dir.path(), "empty.txt", "x\n\n");
    let r = hope(&["score-auto", "--hyp", p(&two), "--ref", p(&empty_ref)]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("line 2: reference is empty"));
}
