//! Command-line surface for tanglekit.
//!
//! Exit status: 0 on success, 1 when a verification suite fails, 2 on a
//! usage error.

pub mod cache;

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tanglekit::element::TableDoc;
use tanglekit::{
    classify, enumerate_basis, evaluate_word_in, verify_counts, verify_lemma57, verify_presentation, verify_rewrites,
    verify_symmetric_representation, verify_word_lemmas, AlgebraKind, Alphabet, Family, GeneratorWord, Scalar,
    VerificationReport,
};

pub use cache::{load_table, persist_table, TableError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "tanglekit", version, about = "Exact computations in decorated tangle algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Counts,
    Presentation,
    Words,
    Rewrites,
    Lemma57,
    Symmetric,
}

#[derive(Debug, Clone, Args)]
pub struct AlgebraArgs {
    /// Algebra family: tl, blob, typeB, typeD or dquot
    #[arg(long)]
    pub algebra: Family,
    #[arg(long)]
    pub rank: usize,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write output to this file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the basis diagrams with their classes
    Enumerate {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate a word in the generators
    Eval {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// Whitespace-separated letters: e, e~, e1, e2, ...
        #[arg(long)]
        word: String,
        /// Accept every named generator of the carrier, not just the standard set
        #[arg(long)]
        extended: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run verification suites
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 4)]
        max_rank: usize,
        /// Word-length bound for the reduced-word suites
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print the structure constants, using the on-disk cache
    Table {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, env = "TANGLEKIT_CACHE", default_value = ".tanglekit-cache")]
        cache_dir: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print diagrams in canonical text form, one per line
    Render {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// Render the diagram of this word instead of the whole basis
        #[arg(long)]
        word: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// An error attributed to a flag, reported with exit status 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError {
    pub flag: &'static str,
    pub message: String,
}

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "error: --{}: {}", self.flag, self.message)
    }
}

/// Largest rank each family accepts; beyond it enumeration is impractical.
pub fn max_supported_rank(family: Family) -> usize {
    match family {
        Family::TL => 12,
        Family::Blob | Family::DQuotient => 8,
        Family::TypeB => 8,
        Family::TypeD => 9,
    }
}

fn algebra(args: &AlgebraArgs) -> Result<AlgebraKind, UsageError> {
    let top = max_supported_rank(args.algebra);
    if args.rank == 0 || args.rank > top {
        return Err(UsageError {
            flag: "rank",
            message: format!("{} supports ranks 1..={top}, got {}", args.algebra, args.rank),
        });
    }
    Ok(AlgebraKind::new(args.algebra, args.rank))
}

fn parse_word(kind: &AlgebraKind, text: &str, alphabet: Alphabet) -> Result<GeneratorWord, UsageError> {
    let bad = |message: String| UsageError { flag: "word", message };
    let word: GeneratorWord = text.parse().map_err(|e: tanglekit::ElementError| bad(e.to_string()))?;
    word.check_legal(kind, alphabet).map_err(|e| bad(e.to_string()))?;
    Ok(word)
}

#[derive(Serialize)]
struct DiagramRow {
    diagram: String,
    class: &'static str,
}

#[derive(Serialize)]
struct TermRow {
    coeff: Scalar,
    diagram: String,
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

/// Result of running one command: text to emit and the exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub status: i32,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome { output, status: EXIT_OK }
    }
}

fn enumerate(kind: &AlgebraKind, format: Format) -> String {
    let rows: Vec<DiagramRow> = enumerate_basis(kind)
        .into_iter()
        .map(|d| DiagramRow {
            class: classify(&d, kind).name(),
            diagram: d.to_string(),
        })
        .collect();
    match format {
        Format::Json => json(&rows),
        Format::Text => rows.iter().fold(String::new(), |mut s, r| {
            let _ = writeln!(s, "{}\t{}", r.class, r.diagram);
            s
        }),
    }
}

/// The suites selected by `suite`, each over its meaningful rank range up to
/// `max_rank`.
pub fn run_suites(suite: Suite, max_rank: usize, max_len: usize) -> Vec<VerificationReport> {
    let want = |s: Suite| suite == Suite::All || suite == s;
    let ranks = |lo: usize| lo..=max_rank;
    let mut out = Vec::new();
    if want(Suite::Counts) {
        for (fam, lo) in [
            (Family::TL, 2),
            (Family::Blob, 2),
            (Family::TypeB, 2),
            (Family::TypeD, 4),
            (Family::DQuotient, 2),
        ] {
            out.extend(ranks(lo).map(|n| verify_counts(&AlgebraKind::new(fam, n))));
        }
    }
    if want(Suite::Presentation) {
        for (fam, lo) in [(Family::TL, 2), (Family::Blob, 2), (Family::TypeB, 2), (Family::TypeD, 4)] {
            out.extend(ranks(lo).map(|n| verify_presentation(&AlgebraKind::new(fam, n))));
        }
    }
    if want(Suite::Words) {
        for fam in [Family::TL, Family::Blob] {
            out.extend(ranks(2).map(|n| verify_word_lemmas(&AlgebraKind::new(fam, n), max_len)));
        }
    }
    if want(Suite::Rewrites) {
        out.extend(ranks(2).map(|n| verify_rewrites(&AlgebraKind::blob(n), max_len)));
    }
    if want(Suite::Symmetric) {
        out.extend(ranks(1).map(verify_symmetric_representation));
    }
    if want(Suite::Lemma57) {
        out.extend(ranks(2).map(verify_lemma57));
    }
    out
}

fn verify(suite: Suite, max_rank: usize, max_len: usize, format: Format) -> Outcome {
    let reports = run_suites(suite, max_rank, max_len);
    let passed = reports.iter().filter(|r| r.overall).count();
    let all = passed == reports.len();
    let output = match format {
        Format::Json => json(&reports),
        Format::Text => {
            let mut s: String = reports.iter().map(|r| r.to_table()).collect();
            let _ = writeln!(
                s,
                "overall: {} ({passed} of {} reports pass)",
                if all { "PASS" } else { "FAIL" },
                reports.len()
            );
            s
        }
    };
    Outcome {
        output,
        status: if all { EXIT_OK } else { EXIT_FAILED },
    }
}

fn table(kind: &AlgebraKind, cache_dir: &std::path::Path, format: Format) -> Result<String, TableError> {
    let t = cache::cached_table(kind, cache_dir)?;
    Ok(match format {
        Format::Json => json(&TableDoc::from(&t)),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "{kind}, dimension {}", t.dim());
            for (k, d) in t.basis.iter().enumerate() {
                let _ = writeln!(s, "b{k} = {d}");
            }
            for e in &t.entries {
                let coeff = if e.coeff.len() > 1 {
                    format!("({})", e.coeff)
                } else {
                    e.coeff.to_string()
                };
                let _ = writeln!(s, "b{} b{} = {coeff} b{}", e.i, e.j, e.k);
            }
            s
        }
    })
}

/// Runs a parsed command. Usage problems are returned as errors so the
/// caller can report them with status 2.
pub fn execute(command: &Command) -> Result<Outcome, UsageError> {
    match command {
        Command::Enumerate { algebra: a, output } => Ok(Outcome::ok(enumerate(&algebra(a)?, output.format))),
        Command::Eval {
            algebra: a,
            word,
            extended,
            output,
        } => {
            let kind = algebra(a)?;
            let alphabet = if *extended { Alphabet::Extended } else { Alphabet::Standard };
            let w = parse_word(&kind, word, alphabet)?;
            let value = evaluate_word_in(&kind, &w, alphabet).map_err(|e| UsageError {
                flag: "word",
                message: e.to_string(),
            })?;
            let text = match output.format {
                Format::Text => format!("{value}\n"),
                Format::Json => {
                    let rows: Vec<TermRow> = value
                        .terms()
                        .map(|(d, c)| TermRow {
                            coeff: c.clone(),
                            diagram: d.to_string(),
                        })
                        .collect();
                    json(&rows)
                }
            };
            Ok(Outcome::ok(text))
        }
        Command::Verify {
            suite,
            max_rank,
            max_len,
            output,
        } => {
            if *max_rank > 6 {
                return Err(UsageError {
                    flag: "max-rank",
                    message: format!("at most 6, got {max_rank}"),
                });
            }
            if *max_len > 12 {
                return Err(UsageError {
                    flag: "max-len",
                    message: format!("at most 12, got {max_len}"),
                });
            }
            Ok(verify(*suite, *max_rank, *max_len, output.format))
        }
        Command::Table {
            algebra: a,
            cache_dir,
            output,
        } => {
            let kind = algebra(a)?;
            table(&kind, cache_dir, output.format)
                .map(Outcome::ok)
                .map_err(|e| UsageError {
                    flag: "cache-dir",
                    message: e.to_string(),
                })
        }
        Command::Render {
            algebra: a,
            word,
            output,
        } => {
            let kind = algebra(a)?;
            let diagrams = match word {
                Some(text) => {
                    let w = parse_word(&kind, text, Alphabet::Extended)?;
                    let r = tanglekit::element::word_reduction(&kind, &w, Alphabet::Extended).map_err(|e| {
                        UsageError {
                            flag: "word",
                            message: e.to_string(),
                        }
                    })?;
                    vec![r.diagram]
                }
                None => enumerate_basis(&kind),
            };
            let lines: Vec<String> = diagrams.iter().map(|d| d.to_string()).collect();
            Ok(Outcome::ok(match output.format {
                Format::Json => json(&lines),
                Format::Text => lines.iter().map(|l| format!("{l}\n")).collect(),
            }))
        }
    }
}

fn output_args(command: &Command) -> &OutputArgs {
    match command {
        Command::Enumerate { output, .. }
        | Command::Eval { output, .. }
        | Command::Verify { output, .. }
        | Command::Table { output, .. }
        | Command::Render { output, .. } => output,
    }
}

/// Executes `cli`, writing to `--out` or `stdout`, and returns the exit status.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let outcome = match execute(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            return EXIT_USAGE;
        }
    };
    let written = match &output_args(&cli.command).out {
        Some(path) => fs::write(path, &outcome.output).map_err(|e| (path.clone(), e)),
        None => stdout
            .write_all(outcome.output.as_bytes())
            .map_err(|e| (PathBuf::from("<stdout>"), e)),
    };
    if let Err((path, e)) = written {
        let _ = writeln!(stderr, "error: --out: cannot write {}: {e}", path.display());
        return EXIT_USAGE;
    }
    outcome.status
}

/// Parses `args` (program name first) and runs; clap's own usage errors
/// also map to status 2.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    run(&cli, &mut io::stdout().lock(), &mut io::stderr().lock())
}
