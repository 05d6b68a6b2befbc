//! End-to-end tests of the `msort` binary: golden outputs, exit codes,
//! warning and error diagnostics, format equivalence, and path resolution.

use std::collections::HashMap;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use msort::engine::{GroupedList, LineGroupedList, PairCorpus, SortedRow};
use msort::features::{DerivedThesaurus, Similarity};
use msort::render::{self, Format, HierarchyPair};

fn fixture(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(rel)
        .to_string_lossy()
        .into_owned()
}

fn golden(rel: &str) -> String {
    std::fs::read_to_string(fixture(&format!("golden/{rel}"))).expect(rel)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_msort"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

/// Run expecting success and no diagnostics; return stdout.
fn ok(args: &[&str]) -> String {
    let output = run(args);
    assert!(
        output.status.success() && output.stderr.is_empty(),
        "args {args:?}: status {:?}, stderr {:?}",
        output.status,
        stderr_of(&output)
    );
    stdout_of(&output)
}

#[test]
fn coded_intermediate_matches_golden() {
    let out = ok(&[
        "coded",
        "--lexicon",
        &fixture("coded/lexicon.tsv"),
        "--intermediate",
        &fixture("coded/events.txt"),
    ]);
    assert_eq!(out, golden("events_intermediate.txt"));
}

#[test]
fn coded_groups_match_golden() {
    let out = ok(&[
        "coded",
        "--lexicon",
        &fixture("coded/lexicon.tsv"),
        "--markers",
        &fixture("coded/markers_short_labels.tsv"),
        &fixture("coded/events.txt"),
    ]);
    assert_eq!(out, golden("events_groups.txt"));
}

#[test]
fn coded_with_builtin_remap_matches_golden() {
    let out = ok(&[
        "coded",
        "--lexicon",
        &fixture("eat/lexicon_eat.tsv"),
        "--markers",
        &fixture("eat/markers_eat.tsv"),
        "--remap",
        &fixture("eat/objective.txt"),
    ]);
    assert_eq!(out, golden("eat_groups.txt"));
}

#[test]
fn coded_with_remap_file_matches_builtin() {
    let rules = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data/remap_default.tsv")
        .to_string_lossy()
        .into_owned();
    let out = ok(&[
        "coded",
        "--lexicon",
        &fixture("eat/lexicon_eat.tsv"),
        "--markers",
        &fixture("eat/markers_eat.tsv"),
        &format!("--remap={rules}"),
        &fixture("eat/objective.txt"),
    ]);
    assert_eq!(out, golden("eat_groups.txt"));
}

#[test]
fn path_groups_match_golden() {
    let out = ok(&[
        "path",
        "--thesaurus",
        &fixture("path/mini_thesaurus.tsv"),
        &fixture("path/events.txt"),
    ]);
    assert_eq!(out, golden("path_groups.txt"));
}

#[test]
fn pairs_match_golden_and_warn_about_unknown_keys() {
    let output = run(&[
        "pairs",
        "--lexicon",
        &fixture("pairs/lexicon_pairs.tsv"),
        "--keys",
        "X,Y",
        &fixture("pairs/corpus.tsv"),
    ]);
    assert!(output.status.success());
    assert_eq!(stdout_of(&output), golden("pairs_sorted.tsv"));
    let err = stderr_of(&output);
    assert!(err.contains("warning: no lexicon entry for \"the worst\""), "{err}");
    assert!(err.contains("warning: no lexicon entry for \"the largest\""), "{err}");
}

#[test]
fn keywords_match_golden() {
    let out = ok(&[
        "keywords",
        "--lexicon",
        &fixture("keywords/lexicon_keywords.tsv"),
        &fixture("keywords/keywords.txt"),
    ]);
    assert_eq!(out, golden("keywords.txt"));
}

#[test]
fn feature_orders_match_goldens() {
    let dict = fixture("features/containers.tsv");
    let left = ok(&["features", "--dict", &dict]);
    assert_eq!(left, golden("containers_left.txt"));
    let right = ok(&[
        "features",
        "--dict",
        &dict,
        "--priority",
        "Material,Size,Depth,Object,Style",
    ]);
    assert_eq!(right, golden("containers_right.txt"));
}

#[test]
fn derived_trees_match_goldens() {
    let dict = fixture("features/containers.tsv");
    assert_eq!(ok(&["derive", "--dict", &dict]), golden("derive_left.txt"));
    assert_eq!(
        ok(&["derive", "--dict", &dict, "--priority", "Material,Size,Depth,Object,Style"]),
        golden("derive_right.txt")
    );
}

#[test]
fn hierarchy_matches_golden() {
    assert_eq!(
        ok(&["hierarchy", "--dict", &fixture("features/containers.tsv")]),
        golden("hierarchy.txt")
    );
}

#[test]
fn sim_reports_the_ratio_in_all_formats() {
    let dict = fixture("features/containers.tsv");
    assert_eq!(ok(&["sim", "--dict", &dict, "wan1", "wan2"]), "4/5\n");
    assert_eq!(ok(&["--format", "tsv", "sim", "--dict", &dict, "wan1", "wan2"]), "4\t5\n");
    let json = ok(&["--format", "json", "sim", "--dict", &dict, "wan1", "wan2"]);
    let parsed: Similarity = serde_json::from_str(&json).unwrap();
    assert_eq!((parsed.matching, parsed.total), (4, 5));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = [
        "coded",
        "--lexicon",
        &fixture("coded/lexicon.tsv"),
        &fixture("coded/events.txt"),
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

/// Every subcommand's JSON output re-renders to exactly its text output.
#[test]
fn json_round_trips_to_text() {
    // Warnings are fine here (the pairs corpus has unknown keys); only the
    // rendered output is under test.
    let succeed = |args: &[&str]| -> String {
        let output = run(args);
        assert!(output.status.success(), "args {args:?}: {}", stderr_of(&output));
        stdout_of(&output)
    };
    let text_and_json = |args: &[&str]| -> (String, String) {
        let mut text_args = vec!["--format", "text"];
        text_args.extend_from_slice(args);
        let mut json_args = vec!["--format", "json"];
        json_args.extend_from_slice(args);
        (succeed(&text_args), succeed(&json_args))
    };

    let lexicon = fixture("coded/lexicon.tsv");
    let events = fixture("coded/events.txt");
    let dict = fixture("features/containers.tsv");

    let (text, json) = text_and_json(&["coded", "--lexicon", &lexicon, &events]);
    let list: GroupedList = serde_json::from_str(&json).unwrap();
    assert_eq!(render::grouped(&list, Format::Text), text);

    let (text, json) =
        text_and_json(&["coded", "--lexicon", &lexicon, "--intermediate", &events]);
    let rows: Vec<SortedRow> = serde_json::from_str(&json).unwrap();
    assert_eq!(render::sorted_rows(&rows, Format::Text), text);

    let (text, json) = text_and_json(&[
        "pairs",
        "--lexicon",
        &fixture("pairs/lexicon_pairs.tsv"),
        "--keys",
        "X,Y",
        &fixture("pairs/corpus.tsv"),
    ]);
    let corpus: PairCorpus = serde_json::from_str(&json).unwrap();
    assert_eq!(render::pair_corpus(&corpus, Format::Text), text);

    let (text, json) = text_and_json(&[
        "path",
        "--thesaurus",
        &fixture("path/mini_thesaurus.tsv"),
        &fixture("path/events.txt"),
    ]);
    let list: GroupedList = serde_json::from_str(&json).unwrap();
    assert_eq!(render::grouped(&list, Format::Text), text);

    let (text, json) = text_and_json(&[
        "keywords",
        "--lexicon",
        &fixture("keywords/lexicon_keywords.tsv"),
        &fixture("keywords/keywords.txt"),
    ]);
    let list: LineGroupedList = serde_json::from_str(&json).unwrap();
    assert_eq!(render::line_grouped(&list, Format::Text), text);

    let (text, json) = text_and_json(&["features", "--dict", &dict]);
    let words: Vec<String> = serde_json::from_str(&json).unwrap();
    assert_eq!(render::word_list(&words, Format::Text), text);

    let (text, json) = text_and_json(&["derive", "--dict", &dict]);
    let tree: DerivedThesaurus = serde_json::from_str(&json).unwrap();
    assert_eq!(render::derived(&tree, Format::Text), text);

    let (text, json) = text_and_json(&["hierarchy", "--dict", &dict]);
    let pairs: Vec<HierarchyPair> = serde_json::from_str(&json).unwrap();
    let pairs: Vec<(String, String)> =
        pairs.into_iter().map(|p| (p.superordinate, p.subordinate)).collect();
    assert_eq!(render::hierarchy(&pairs, Format::Text), text);

    let (text, json) = text_and_json(&["sim", "--dict", &dict, "utsuwa", "sara"]);
    let sim: Similarity = serde_json::from_str(&json).unwrap();
    assert_eq!(render::similarity(&sim, Format::Text), text);
}

#[test]
fn payloads_ride_through_tsv_output() {
    let input = std::fs::read_to_string(fixture("coded/events_freq.txt")).unwrap();
    let payload_of: HashMap<&str, &str> = input
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split_once('\t').unwrap())
        .collect();

    let out = ok(&[
        "--format",
        "tsv",
        "coded",
        "--lexicon",
        &fixture("coded/lexicon.tsv"),
        &fixture("coded/events_freq.txt"),
    ]);
    let rows: Vec<Vec<&str>> = out.lines().map(|l| l.split('\t').collect()).collect();
    // One row per grouped word; two words appear in two groups each.
    assert_eq!(rows.len(), 20);
    assert_eq!(rows[0], ["(Human)", "the Imperial Household", "3"]);
    for row in &rows {
        assert_eq!(row.len(), 3, "fixed arity: {row:?}");
        assert_eq!(row[2], payload_of[row[1]], "payload of {:?}", row[1]);
    }
}

#[test]
fn freq_tie_break_orders_equal_codes_by_descending_payload() {
    let dir = tempfile::tempdir().unwrap();
    let lexicon = dir.path().join("lexicon.tsv");
    std::fs::write(&lexicon, "alpha\t5110000000\nbeta\t5110000000\ngamma\t5110000000\n")
        .unwrap();
    let input = dir.path().join("input.txt");
    std::fs::write(&input, "alpha\t1\nbeta\t3\ngamma\t2\n").unwrap();
    let lexicon = lexicon.to_string_lossy().into_owned();
    let input = input.to_string_lossy().into_owned();

    let stable = ok(&["coded", "--lexicon", &lexicon, &input]);
    assert_eq!(stable, "(Animal) alpha, beta, gamma\n");
    let by_freq = ok(&["coded", "--lexicon", &lexicon, "--freq-tie-break", &input]);
    assert_eq!(by_freq, "(Animal) beta, gamma, alpha\n");
}

#[test]
fn no_dedup_keeps_repeats_and_keep_empty_keeps_groups() {
    let lexicon = fixture("coded/lexicon.tsv");
    let events = fixture("coded/events.txt");

    let out = ok(&["coded", "--lexicon", &lexicon, "--no-dedup", &events]);
    assert!(out.contains("a temple, a temple"), "{out}");
    assert!(out.contains("a government official, the head of a school, a government official"));

    let out = ok(&["coded", "--lexicon", &lexicon, "--keep-empty", &events]);
    assert!(out.starts_with("(Animal)\n(Human) "), "{out}");
    assert!(
        out.contains("\n(Product)\n(Part of a living thing)\n(Plant)\n(Nature)\n(Location)\n"),
        "{out}"
    );
    assert!(out.ends_with("\n(Other)\n"), "{out}");
}

#[test]
fn stdin_dash_reads_the_word_list() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_msort"))
        .args(["coded", "--lexicon", &fixture("coded/lexicon.tsv"), "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"a festival\na Royal family\n")
        .unwrap();
    let output = child.wait_with_output().unwrap();
    assert!(output.status.success());
    assert_eq!(
        stdout_of(&output),
        "(Human) a Royal family\n(Human activity) a festival\n"
    );
}

#[test]
fn unknown_words_warn_and_group_as_unknown() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("input.txt");
    std::fs::write(&input, "a festival\nxyzzy\n").unwrap();
    let input = input.to_string_lossy().into_owned();

    let output = run(&["coded", "--lexicon", &fixture("coded/lexicon.tsv"), &input]);
    assert!(output.status.success());
    assert_eq!(
        stdout_of(&output),
        "(Human activity) a festival\n(Unknown) xyzzy\n"
    );
    assert_eq!(stderr_of(&output), "warning: no lexicon entry for \"xyzzy\"\n");
}

#[test]
fn strict_promotes_warnings_and_suppresses_output() {
    let output = run(&[
        "--strict",
        "pairs",
        "--lexicon",
        &fixture("pairs/lexicon_pairs.tsv"),
        "--keys",
        "X,Y",
        &fixture("pairs/corpus.tsv"),
    ]);
    assert_eq!(output.status.code(), Some(1));
    assert!(output.stdout.is_empty(), "no output in strict mode with warnings");
    let err = stderr_of(&output);
    assert!(err.contains("error: no lexicon entry for \"the worst\""), "{err}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["coded"]).status.code(), Some(2), "missing required option");
    assert_eq!(run(&["--bogus"]).status.code(), Some(2), "unknown flag");
    assert_eq!(
        run(&[
            "path",
            "--thesaurus",
            &fixture("path/mini_thesaurus.tsv"),
            "--sibling-order",
            "via-lexicon",
            &fixture("path/events.txt"),
        ])
        .status
        .code(),
        Some(2),
        "via-lexicon ordering requires --lexicon"
    );
}

#[test]
fn missing_file_exits_1_with_the_path() {
    let output = run(&["coded", "--lexicon", "/nonexistent/lexicon.tsv"]);
    assert_eq!(output.status.code(), Some(1));
    let err = stderr_of(&output);
    assert!(err.starts_with("error: opening /nonexistent/lexicon.tsv"), "{err}");
}

#[test]
fn parse_errors_report_file_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let lexicon = dir.path().join("lexicon.tsv");
    std::fs::write(&lexicon, "a school\t5363010012\nbad\tNOTACODE!!\n").unwrap();
    let lexicon = lexicon.to_string_lossy().into_owned();

    let output = run(&["coded", "--lexicon", &lexicon]);
    assert_eq!(output.status.code(), Some(1));
    let err = stderr_of(&output);
    assert!(err.starts_with("error: "), "{err}");
    assert!(err.contains(&lexicon), "file path in {err}");
    assert!(err.contains("line 2"), "line number in {err}");
    assert!(err.contains("invalid symbol"), "cause in {err}");
}

#[test]
fn data_dir_env_resolves_relative_paths() {
    let dir = tempfile::tempdir().unwrap();
    let output = Command::new(env!("CARGO_BIN_EXE_msort"))
        .args(["coded", "--lexicon", "coded/lexicon.tsv", "--intermediate", "coded/events.txt"])
        .current_dir(dir.path())
        .env("MSORT_DATA_DIR", fixture(""))
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stderr_of(&output));
    assert_eq!(stdout_of(&output), golden("events_intermediate.txt"));
}
