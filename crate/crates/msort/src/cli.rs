//! Command-line surface: one subcommand per pipeline, three output formats,
//! deterministic rendering.

use std::env;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use crate::engine::{
    self, group_keywords, msort_by, msort_pairs, sort_annotations_by, CondenseOptions, Entry,
    PairCorpus, TieBreak,
};
use crate::features::{
    derive_thesaurus, infer_hierarchy, msort_by_features, similarity, FeatureDictionary,
    FeaturePriority,
};
use crate::lexicon::{CodedLexicon, SensePolicy, TextOrder};
use crate::markers::MarkerTable;
use crate::path::{msort_by_path, PathThesaurus};
use crate::remap::RemapTable;
use crate::render::{self, Format};

#[derive(Debug, Parser)]
#[command(name = "msort", version, about = "Sort word lists into meaning order")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Treat warnings (unknown words, unmatched remaps) as errors.
    #[arg(long, global = true)]
    pub strict: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Group a word list by the category codes of a lexicon.
    Coded(CodedArgs),
    /// Reorder a TSV corpus by the codes of its word columns.
    Pairs(PairsArgs),
    /// Group a word list by definition paths in an is-a thesaurus.
    Path(PathArgs),
    /// Order a feature dictionary's words by their value tuples.
    Features(FeaturesArgs),
    /// Derive a thesaurus tree from a feature dictionary.
    Derive(DeriveArgs),
    /// Infer superordinate/subordinate pairs from feature inclusion.
    Hierarchy(HierarchyArgs),
    /// Report the feature-overlap similarity of two words.
    Sim(SimArgs),
    /// Group keywords into display lines sharing a code prefix.
    Keywords(KeywordsArgs),
}

/// How free-text terms (definitions, feature values) are ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OrderChoice {
    #[default]
    Lexicographic,
    /// Order terms by their codes in a lexicon (see --lexicon).
    ViaLexicon,
}

#[derive(Debug, Args)]
pub struct CodedArgs {
    /// Lexicon file: `word TAB code` per line.
    #[arg(long, value_name = "FILE")]
    pub lexicon: PathBuf,

    /// Marker table: `code TAB label` per line; builtin markers when omitted.
    #[arg(long, value_name = "FILE")]
    pub markers: Option<PathBuf>,

    /// Remap lexicon codes at load; bare --remap uses the builtin ruleset,
    /// --remap=FILE a custom one.
    #[arg(long, value_name = "FILE", num_args = 0..=1, require_equals = true)]
    pub remap: Option<Option<PathBuf>>,

    /// Keep repeated words within a group.
    #[arg(long)]
    pub no_dedup: bool,

    /// Keep groups that received no words.
    #[arg(long)]
    pub keep_empty: bool,

    /// Print the sorted code rows instead of the condensed groups.
    #[arg(long)]
    pub intermediate: bool,

    /// Order equal codes by descending numeric payload instead of input order.
    #[arg(long)]
    pub freq_tie_break: bool,

    /// Word list (`word`, optionally `TAB payload`); stdin when omitted.
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PairsArgs {
    /// Lexicon file: `word TAB code` per line.
    #[arg(long, value_name = "FILE")]
    pub lexicon: PathBuf,

    /// Remap lexicon codes at load; bare --remap uses the builtin ruleset.
    #[arg(long, value_name = "FILE", num_args = 0..=1, require_equals = true)]
    pub remap: Option<Option<PathBuf>>,

    /// Comma-separated key columns, most significant first.
    #[arg(long, value_delimiter = ',', required = true, value_name = "COL,COL")]
    pub keys: Vec<String>,

    /// Which sense keys a polysemous word.
    #[arg(long, value_enum, default_value_t = SensePolicy::MinimumCode)]
    pub policy: SensePolicy,

    /// TSV corpus with a header row; stdin when omitted.
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PathArgs {
    /// Thesaurus file with NODE and WORD records.
    #[arg(long, value_name = "FILE")]
    pub thesaurus: PathBuf,

    /// How many leading path terms form the group label.
    #[arg(long, default_value_t = 3, value_name = "N")]
    pub depth: usize,

    /// How sibling definition terms are ordered.
    #[arg(long, value_enum, default_value_t = OrderChoice::Lexicographic)]
    pub sibling_order: OrderChoice,

    /// Lexicon for --sibling-order=via-lexicon.
    #[arg(long, value_name = "FILE", required_if_eq("sibling_order", "via-lexicon"))]
    pub lexicon: Option<PathBuf>,

    /// Word list; stdin when omitted.
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FeaturesArgs {
    /// Feature dictionary: TSV with a `word TAB f1 TAB f2 …` header.
    #[arg(long, value_name = "FILE")]
    pub dict: PathBuf,

    /// Comma-separated feature priority, most important first; header order
    /// when omitted.
    #[arg(long, value_delimiter = ',', value_name = "F,F")]
    pub priority: Vec<String>,

    /// How specified feature values are ordered.
    #[arg(long, value_enum, default_value_t = OrderChoice::Lexicographic)]
    pub value_order: OrderChoice,

    /// Lexicon for --value-order=via-lexicon.
    #[arg(long, value_name = "FILE", required_if_eq("value_order", "via-lexicon"))]
    pub lexicon: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DeriveArgs {
    /// Feature dictionary: TSV with a `word TAB f1 TAB f2 …` header.
    #[arg(long, value_name = "FILE")]
    pub dict: PathBuf,

    /// Comma-separated feature priority, most important first; header order
    /// when omitted.
    #[arg(long, value_delimiter = ',', value_name = "F,F")]
    pub priority: Vec<String>,
}

#[derive(Debug, Args)]
pub struct HierarchyArgs {
    /// Feature dictionary: TSV with a `word TAB f1 TAB f2 …` header.
    #[arg(long, value_name = "FILE")]
    pub dict: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    /// Feature dictionary: TSV with a `word TAB f1 TAB f2 …` header.
    #[arg(long, value_name = "FILE")]
    pub dict: PathBuf,

    /// First word.
    pub word1: String,

    /// Second word.
    pub word2: String,
}

#[derive(Debug, Args)]
pub struct KeywordsArgs {
    /// Lexicon file: `word TAB code` per line.
    #[arg(long, value_name = "FILE")]
    pub lexicon: PathBuf,

    /// Marker table: `code TAB label` per line; builtin markers when omitted.
    #[arg(long, value_name = "FILE")]
    pub markers: Option<PathBuf>,

    /// Remap lexicon codes at load; bare --remap uses the builtin ruleset.
    #[arg(long, value_name = "FILE", num_args = 0..=1, require_equals = true)]
    pub remap: Option<Option<PathBuf>>,

    /// Words sharing this many leading code symbols stay on one line.
    #[arg(long, default_value_t = 3, value_name = "N")]
    pub prefix_length: usize,

    /// Word list; stdin when omitted.
    pub input: Option<PathBuf>,
}

/// Resolve a path, falling back to `$MSORT_DATA_DIR/<path>` for relative
/// paths that do not exist as given.
fn resolve(path: &Path) -> PathBuf {
    if path.exists() || path.is_absolute() {
        return path.to_path_buf();
    }
    if let Some(dir) = env::var_os("MSORT_DATA_DIR") {
        let candidate = Path::new(&dir).join(path);
        if candidate.exists() {
            return candidate;
        }
    }
    path.to_path_buf()
}

fn open(path: &Path) -> Result<BufReader<File>> {
    let resolved = resolve(path);
    let file =
        File::open(&resolved).with_context(|| format!("opening {}", resolved.display()))?;
    Ok(BufReader::new(file))
}

fn load_remap(arg: &Option<Option<PathBuf>>) -> Result<Option<RemapTable>> {
    match arg {
        None => Ok(None),
        Some(None) => Ok(Some(RemapTable::builtin())),
        Some(Some(path)) => {
            let table = RemapTable::from_reader(open(path)?)
                .with_context(|| format!("{}", resolve(path).display()))?;
            Ok(Some(table))
        }
    }
}

fn load_lexicon(
    path: &Path,
    remap: Option<&RemapTable>,
    warnings: &mut Vec<String>,
) -> Result<CodedLexicon> {
    let (lexicon, lex_warnings) = CodedLexicon::load(open(path)?, remap)
        .with_context(|| format!("{}", resolve(path).display()))?;
    warnings.extend(
        lex_warnings
            .iter()
            .map(|w| format!("{}: {w}", resolve(path).display())),
    );
    Ok(lexicon)
}

fn load_markers(path: Option<&Path>) -> Result<MarkerTable> {
    match path {
        None => Ok(MarkerTable::builtin()),
        Some(path) => MarkerTable::from_reader(open(path)?)
            .with_context(|| format!("{}", resolve(path).display())),
    }
}

/// Read a word list from a file or stdin; blank lines are skipped, the text
/// after the first tab is the payload.
fn read_word_list(path: Option<&Path>) -> Result<Vec<Entry>> {
    let text = read_input(path)?;
    Ok(text
        .lines()
        .filter(|line| !line.trim().is_empty())
        .map(Entry::parse)
        .collect())
}

fn read_input(path: Option<&Path>) -> Result<String> {
    match path {
        Some(p) if p != Path::new("-") => {
            let resolved = resolve(p);
            std::fs::read_to_string(&resolved)
                .with_context(|| format!("reading {}", resolved.display()))
        }
        _ => {
            let mut text = String::new();
            io::stdin()
                .read_to_string(&mut text)
                .context("reading stdin")?;
            Ok(text)
        }
    }
}

fn open_input(path: Option<&Path>) -> Result<Box<dyn BufRead>> {
    match path {
        Some(p) if p != Path::new("-") => Ok(Box::new(open(p)?)),
        _ => Ok(Box::new(BufReader::new(io::stdin()))),
    }
}

fn warn_unknown_words(entries: &[Entry], warnings: &mut Vec<String>) {
    let mut seen = Vec::new();
    for entry in entries {
        if !seen.contains(&entry.word.as_str()) {
            warnings.push(format!("no lexicon entry for {:?}", entry.word));
            seen.push(entry.word.as_str());
        }
    }
}

fn coded(args: &CodedArgs, format: Format, warnings: &mut Vec<String>) -> Result<String> {
    let remap = load_remap(&args.remap)?;
    let lexicon = load_lexicon(&args.lexicon, remap.as_ref(), warnings)?;
    let markers = load_markers(args.markers.as_deref())?;
    let words = read_word_list(args.input.as_deref())?;
    let tie_break = if args.freq_tie_break {
        TieBreak::PayloadDescending
    } else {
        TieBreak::Stable
    };
    if args.intermediate {
        let (annotations, unknowns) = engine::annotate(&words, &lexicon);
        warn_unknown_words(&unknowns, warnings);
        let rows = sort_annotations_by(&annotations, &markers, tie_break);
        Ok(render::sorted_rows(&rows, format))
    } else {
        let options = CondenseOptions {
            dedup_within_group: !args.no_dedup,
            drop_empty_groups: !args.keep_empty,
        };
        let grouped = msort_by(&words, &lexicon, &markers, options, tie_break);
        warn_unknown_words(&grouped.unknowns, warnings);
        Ok(render::grouped(&grouped, format))
    }
}

fn pairs(args: &PairsArgs, format: Format, warnings: &mut Vec<String>) -> Result<String> {
    let remap = load_remap(&args.remap)?;
    let lexicon = load_lexicon(&args.lexicon, remap.as_ref(), warnings)?;
    let corpus = PairCorpus::from_reader(open_input(args.input.as_deref())?)
        .context("reading corpus")?;
    let sorted = msort_pairs(&corpus, &lexicon, &args.keys, args.policy)?;
    let mut seen = Vec::new();
    for key in &args.keys {
        let column = corpus.column(key).expect("validated by msort_pairs");
        for row in &corpus.rows {
            let word = row[column].as_str();
            if lexicon.lookup(word).is_none() && !seen.contains(&word) {
                warnings.push(format!("no lexicon entry for {word:?} (column {key:?})"));
                seen.push(word);
            }
        }
    }
    Ok(render::pair_corpus(&sorted, format))
}

fn path_cmd(args: &PathArgs, format: Format, warnings: &mut Vec<String>) -> Result<String> {
    let thesaurus = PathThesaurus::from_reader(open(&args.thesaurus)?)
        .with_context(|| format!("{}", resolve(&args.thesaurus).display()))?;
    let lexicon = match (&args.sibling_order, &args.lexicon) {
        (OrderChoice::ViaLexicon, Some(path)) => Some(load_lexicon(path, None, warnings)?),
        _ => None,
    };
    let order = match &lexicon {
        Some(lexicon) => TextOrder::ViaLexicon { lexicon, policy: SensePolicy::MinimumCode },
        None => TextOrder::Lexicographic,
    };
    let words = read_word_list(args.input.as_deref())?;
    let grouped = msort_by_path(&words, &thesaurus, args.depth, &order)?;
    warn_unknown_words(&grouped.unknowns, warnings);
    Ok(render::grouped(&grouped, format))
}

fn load_dict(path: &Path) -> Result<FeatureDictionary> {
    FeatureDictionary::from_reader(open(path)?)
        .with_context(|| format!("{}", resolve(path).display()))
}

fn priority_for(dict: &FeatureDictionary, names: &[String]) -> Result<FeaturePriority> {
    if names.is_empty() {
        Ok(FeaturePriority::left_to_right(dict))
    } else {
        Ok(FeaturePriority::new(dict, names)?)
    }
}

fn features(args: &FeaturesArgs, format: Format, warnings: &mut Vec<String>) -> Result<String> {
    let dict = load_dict(&args.dict)?;
    let priority = priority_for(&dict, &args.priority)?;
    let lexicon = match (&args.value_order, &args.lexicon) {
        (OrderChoice::ViaLexicon, Some(path)) => Some(load_lexicon(path, None, warnings)?),
        _ => None,
    };
    let order = match &lexicon {
        Some(lexicon) => TextOrder::ViaLexicon { lexicon, policy: SensePolicy::MinimumCode },
        None => TextOrder::Lexicographic,
    };
    let sorted = msort_by_features(&dict, &priority, &order);
    Ok(render::word_list(&sorted, format))
}

fn derive(args: &DeriveArgs, format: Format) -> Result<String> {
    let dict = load_dict(&args.dict)?;
    let priority = priority_for(&dict, &args.priority)?;
    Ok(render::derived(&derive_thesaurus(&dict, &priority), format))
}

fn hierarchy(args: &HierarchyArgs, format: Format) -> Result<String> {
    let dict = load_dict(&args.dict)?;
    Ok(render::hierarchy(&infer_hierarchy(&dict), format))
}

fn sim(args: &SimArgs, format: Format) -> Result<String> {
    let dict = load_dict(&args.dict)?;
    Ok(render::similarity(&similarity(&dict, &args.word1, &args.word2)?, format))
}

fn keywords(args: &KeywordsArgs, format: Format, warnings: &mut Vec<String>) -> Result<String> {
    let remap = load_remap(&args.remap)?;
    let lexicon = load_lexicon(&args.lexicon, remap.as_ref(), warnings)?;
    let markers = load_markers(args.markers.as_deref())?;
    let words = read_word_list(args.input.as_deref())?;
    let grouped = group_keywords(&words, &lexicon, &markers, args.prefix_length)?;
    warn_unknown_words(&grouped.unknowns, warnings);
    Ok(render::line_grouped(&grouped, format))
}

/// Execute a parsed command line. Output goes to `out`, diagnostics to
/// `err`; the return value is the process exit status (0 success, 1 error;
/// usage errors exit 2 in the argument parser before this runs).
pub fn run(cli: &Cli, out: &mut impl Write, err: &mut impl Write) -> i32 {
    let mut warnings = Vec::new();
    let result = match &cli.command {
        Command::Coded(args) => coded(args, cli.format, &mut warnings),
        Command::Pairs(args) => pairs(args, cli.format, &mut warnings),
        Command::Path(args) => path_cmd(args, cli.format, &mut warnings),
        Command::Features(args) => features(args, cli.format, &mut warnings),
        Command::Derive(args) => derive(args, cli.format),
        Command::Hierarchy(args) => hierarchy(args, cli.format),
        Command::Sim(args) => sim(args, cli.format),
        Command::Keywords(args) => keywords(args, cli.format, &mut warnings),
    };
    match result {
        Ok(output) => {
            if cli.strict && !warnings.is_empty() {
                for warning in &warnings {
                    let _ = writeln!(err, "error: {warning}");
                }
                return 1;
            }
            for warning in &warnings {
                let _ = writeln!(err, "warning: {warning}");
            }
            let _ = out.write_all(output.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            1
        }
    }
}
