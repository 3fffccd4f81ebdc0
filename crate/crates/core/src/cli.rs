//! The `wex` command line.
//!
//! Results go to `out`, diagnostics to `err`. Exit codes: 0 for success or
//! a positive answer, 1 for a negative answer (`invalid`, `dead-end`), 2 for
//! any error.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::bench::{run_benchmark, BenchConfig, BenchError};
use crate::image::{self, ImageError};
use crate::trie::WordIndex;
use crate::word::{NormalizedWord, WordError};
use crate::wordlist::{load_wordlist, Lines};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_ERROR: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "wex",
    version,
    about = "Word existence index: build, query and benchmark"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an index file from a wordlist.
    Build {
        #[arg(long)]
        wordlist: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check whether a word is stored. Prints valid/invalid.
    Query {
        #[arg(long)]
        index: PathBuf,
        /// Also print tables visited and why the lookup stopped.
        #[arg(long)]
        trace: bool,
        word: String,
    },
    /// Check whether any stored word starts with a prefix.
    Prefix {
        #[arg(long)]
        index: PathBuf,
        prefix: String,
    },
    /// Look up every line of a wordlist.
    Check {
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        wordlist: PathBuf,
    },
    /// Print index statistics as name=value lines.
    Stats {
        #[arg(long)]
        index: PathBuf,
    },
    /// Compare the index against a sorted array and a hash set.
    Bench {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = BenchConfig::DEFAULT_QUERY_COUNT)]
        queries: usize,
        #[arg(long, default_value_t = BenchConfig::DEFAULT_HIT_RATIO)]
        hit_ratio: f64,
        #[arg(long, default_value_t = BenchConfig::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_values_t = BenchConfig::DEFAULT_SIZES)]
        sizes: Vec<usize>,
        /// Also write the report as CSV to this path.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("output: {0}")]
    Output(#[from] io::Error),
    #[error("{path}: {source}")]
    Image { path: PathBuf, source: ImageError },
    #[error("{raw:?}: {source}")]
    Word { raw: String, source: WordError },
    #[error(transparent)]
    Bench(#[from] BenchError),
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
}

/// Runs one command and returns its exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let result = match &cli.command {
        Command::Build {
            wordlist,
            out: dest,
        } => cmd_build(wordlist, dest, err),
        Command::Query { index, trace, word } => cmd_query(index, word, *trace, out),
        Command::Prefix { index, prefix } => cmd_prefix(index, prefix, out),
        Command::Check { index, wordlist } => cmd_check(index, wordlist, out, err),
        Command::Stats { index } => cmd_stats(index, out),
        Command::Bench {
            corpus,
            queries,
            hit_ratio,
            seed,
            sizes,
            csv,
        } => {
            let config = BenchConfig {
                corpus_path: corpus.clone(),
                query_count: *queries,
                hit_ratio: *hit_ratio,
                seed: *seed,
                sizes: sizes.clone(),
            };
            cmd_bench(&config, csv.as_deref(), out)
        }
    };
    let _ = out.flush();
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })
}

pub fn load_index(path: &Path) -> Result<WordIndex, CliError> {
    image::deserialize(open(path)?).map_err(|source| CliError::Image {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_word(raw: &str) -> Result<NormalizedWord, CliError> {
    NormalizedWord::normalize(raw).map_err(|source| CliError::Word {
        raw: raw.to_string(),
        source,
    })
}

pub fn cmd_build(wordlist: &Path, dest: &Path, err: &mut dyn Write) -> Result<u8, CliError> {
    let io_error = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Io { path, source }
    };
    let (words, report) = load_wordlist(open(wordlist)?).map_err(io_error(wordlist))?;
    let index = WordIndex::from_words(&words);

    let file = File::create(dest).map_err(io_error(dest))?;
    image::serialize(&index, BufWriter::new(file)).map_err(|source| match source {
        ImageError::Io(source) => CliError::Io {
            path: dest.to_path_buf(),
            source,
        },
        source => CliError::Image {
            path: dest.to_path_buf(),
            source,
        },
    })?;

    for reject in &report.rejects {
        writeln!(
            err,
            "line {}: {}: {:?}",
            reject.line_number, reject.reason, reject.raw_text
        )?;
    }
    writeln!(err, "{}", report.summary())?;
    Ok(EXIT_OK)
}

pub fn cmd_query(
    index: &Path,
    raw: &str,
    trace: bool,
    out: &mut dyn Write,
) -> Result<u8, CliError> {
    let word = parse_word(raw)?;
    let index = load_index(index)?;
    let result = index.contains_traced(&word);
    writeln!(out, "{}", if result.found { "valid" } else { "invalid" })?;
    if trace {
        writeln!(out, "visits={}", result.visits)?;
        writeln!(out, "stop_reason={}", result.stop_reason)?;
    }
    Ok(if result.found { EXIT_OK } else { EXIT_NEGATIVE })
}

pub fn cmd_prefix(index: &Path, raw: &str, out: &mut dyn Write) -> Result<u8, CliError> {
    let prefix = parse_word(raw)?;
    let index = load_index(index)?;
    let continues = index.has_prefix(&prefix);
    writeln!(out, "{}", if continues { "continues" } else { "dead-end" })?;
    Ok(if continues { EXIT_OK } else { EXIT_NEGATIVE })
}

pub fn cmd_check(
    index: &Path,
    wordlist: &Path,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<u8, CliError> {
    let index = load_index(index)?;
    let (mut valid, mut invalid, mut skipped) = (0usize, 0usize, 0usize);
    for line in Lines::new(open(wordlist)?) {
        let line = line.map_err(|source| CliError::Io {
            path: wordlist.to_path_buf(),
            source,
        })?;
        match NormalizedWord::normalize(&line) {
            Ok(word) if index.contains(&word) => {
                valid += 1;
                writeln!(out, "{line}\tvalid")?;
            }
            Ok(_) => {
                invalid += 1;
                writeln!(out, "{line}\tinvalid")?;
            }
            Err(reason) => {
                skipped += 1;
                writeln!(out, "{line}\tskipped\t{reason}")?;
            }
        }
    }
    writeln!(err, "valid={valid} invalid={invalid} skipped={skipped}")?;
    Ok(EXIT_OK)
}

pub fn cmd_stats(index: &Path, out: &mut dyn Write) -> Result<u8, CliError> {
    let stats = load_index(index)?.stats();
    for (name, value) in stats.fields() {
        writeln!(out, "{name}={value}")?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_bench(
    config: &BenchConfig,
    csv_path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<u8, CliError> {
    let report = run_benchmark(config)?;
    write!(out, "{report}")?;
    if let Some(path) = csv_path {
        let csv_error = |source| CliError::Csv {
            path: path.to_path_buf(),
            source,
        };
        let file = File::create(path).map_err(|e| csv_error(e.into()))?;
        report.write_csv(file).map_err(csv_error)?;
    }
    Ok(EXIT_OK)
}
