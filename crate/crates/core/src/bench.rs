//! Benchmark of the word existence index against two conventional
//! membership structures: a sorted array searched by bisection and a
//! general-purpose hash set.
//!
//! All three are built from the same corpus prefix and answer the same
//! seeded query list. Their answers are compared on every query before any
//! timing is recorded; a single disagreement aborts the run. Latencies are
//! reported, never judged.

use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::hint::black_box;
use std::io::{self, BufReader};
use std::mem;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::trie::WordIndex;
use crate::word::{NormalizedWord, ALPHABET_LEN, MAX_WORD_LEN};
use crate::wordlist::load_wordlist;

/// Queries per timed batch. A single lookup is too short for the clock.
const BATCH: usize = 32;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("cannot read corpus {path}: {source}")]
    Corpus { path: PathBuf, source: io::Error },
    #[error("invalid benchmark config: {0}")]
    InvalidConfig(String),
    #[error(
        "{structure} answered {got} for {query:?} at size {size}, word-existence answered {expected}"
    )]
    AnswerMismatch {
        size: usize,
        structure: Structure,
        query: String,
        expected: bool,
        got: bool,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub corpus_path: PathBuf,
    pub query_count: usize,
    pub hit_ratio: f64,
    pub seed: u64,
    pub sizes: Vec<usize>,
}

impl BenchConfig {
    pub const DEFAULT_QUERY_COUNT: usize = 100_000;
    pub const DEFAULT_HIT_RATIO: f64 = 0.5;
    pub const DEFAULT_SEED: u64 = 42;
    pub const DEFAULT_SIZES: [usize; 3] = [1_000, 10_000, 50_000];

    pub fn new(corpus_path: impl Into<PathBuf>) -> Self {
        BenchConfig {
            corpus_path: corpus_path.into(),
            query_count: Self::DEFAULT_QUERY_COUNT,
            hit_ratio: Self::DEFAULT_HIT_RATIO,
            seed: Self::DEFAULT_SEED,
            sizes: Self::DEFAULT_SIZES.to_vec(),
        }
    }

    pub fn validate(&self, corpus_len: usize) -> Result<(), BenchError> {
        let invalid = |msg: String| Err(BenchError::InvalidConfig(msg));
        if self.query_count == 0 {
            return invalid("query count must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.hit_ratio) {
            return invalid(format!("hit ratio {} is outside [0, 1]", self.hit_ratio));
        }
        if self.sizes.is_empty() {
            return invalid("no corpus sizes given".into());
        }
        for &size in &self.sizes {
            if size == 0 || size > corpus_len {
                return invalid(format!(
                    "size {size} must be between 1 and the corpus word count {corpus_len}"
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Structure {
    WordExistence,
    SortedArray,
    HashSet,
}

impl Structure {
    pub const ALL: [Structure; 3] = [
        Structure::WordExistence,
        Structure::SortedArray,
        Structure::HashSet,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Structure::WordExistence => "word-existence",
            Structure::SortedArray => "sorted-array",
            Structure::HashSet => "hash-set",
        }
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Anything that can answer "is this word stored?".
pub trait Membership {
    fn contains(&self, word: &NormalizedWord) -> bool;
    /// Structural size estimate in bytes.
    fn estimated_bytes(&self) -> usize;
}

impl Membership for WordIndex {
    fn contains(&self, word: &NormalizedWord) -> bool {
        WordIndex::contains(self, word)
    }

    fn estimated_bytes(&self) -> usize {
        self.stats().estimated_bytes
    }
}

/// Sorted, deduplicated words searched by bisection.
#[derive(Debug, Clone)]
pub struct SortedArray(Vec<NormalizedWord>);

impl SortedArray {
    pub fn new(words: &[NormalizedWord]) -> Self {
        let mut words = words.to_vec();
        words.sort_unstable();
        words.dedup();
        SortedArray(words)
    }
}

impl Membership for SortedArray {
    fn contains(&self, word: &NormalizedWord) -> bool {
        self.0.binary_search(word).is_ok()
    }

    fn estimated_bytes(&self) -> usize {
        self.0.capacity() * mem::size_of::<NormalizedWord>()
            + self.0.iter().map(NormalizedWord::len).sum::<usize>()
    }
}

#[derive(Debug, Clone)]
pub struct HashSetBaseline(HashSet<NormalizedWord>);

impl HashSetBaseline {
    pub fn new(words: &[NormalizedWord]) -> Self {
        HashSetBaseline(words.iter().cloned().collect())
    }
}

impl Membership for HashSetBaseline {
    fn contains(&self, word: &NormalizedWord) -> bool {
        self.0.contains(word)
    }

    fn estimated_bytes(&self) -> usize {
        // One control byte per bucket, as in SwissTable.
        self.0.capacity() * (mem::size_of::<NormalizedWord>() + 1)
            + self.0.iter().map(NormalizedWord::len).sum::<usize>()
    }
}

/// Seeded query workload over `words`.
///
/// `round(query_count * hit_ratio)` queries are drawn uniformly, with
/// replacement, from `words`. The rest are misses made by replacing one
/// letter of a random word or appending a letter to it, re-rolled until the
/// result is not in `words`. The list is shuffled before it is returned.
///
/// # Panics
///
/// If `words` is empty.
pub fn generate_queries(words: &[NormalizedWord], config: &BenchConfig) -> Vec<NormalizedWord> {
    assert!(!words.is_empty(), "cannot generate queries from no words");
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let stored: HashSet<&NormalizedWord> = words.iter().collect();
    let hits = ((config.query_count as f64) * config.hit_ratio.clamp(0.0, 1.0)).round() as usize;
    let hits = hits.min(config.query_count);

    let mut queries = Vec::with_capacity(config.query_count);
    for _ in 0..hits {
        queries.push(words[rng.random_range(..words.len())].clone());
    }
    while queries.len() < config.query_count {
        let mut letters = words[rng.random_range(..words.len())].letters().to_vec();
        if letters.len() < MAX_WORD_LEN && rng.random_bool(0.5) {
            letters.push(rng.random_range(..ALPHABET_LEN as u8));
        } else {
            let at = rng.random_range(..letters.len());
            let shift = rng.random_range(1..ALPHABET_LEN as u8);
            letters[at] = (letters[at] + shift) % ALPHABET_LEN as u8;
        }
        let candidate = NormalizedWord::from_codes(letters).expect("letters stay in range");
        if !stored.contains(&candidate) {
            queries.push(candidate);
        }
    }
    queries.shuffle(&mut rng);
    queries
}

/// Nearest-rank percentile of an already sorted slice, `p` in (0, 1].
fn percentile<T: Copy>(sorted: &[T], p: f64) -> Option<T> {
    if sorted.is_empty() {
        return None;
    }
    let rank = (p * sorted.len() as f64).ceil() as usize;
    Some(sorted[rank.clamp(1, sorted.len()) - 1])
}

/// Per-query nanoseconds for each batch of `queries`, sorted ascending.
fn time_batches(set: &dyn Membership, queries: &[NormalizedWord]) -> Vec<f64> {
    let mut samples: Vec<f64> = queries
        .chunks(BATCH)
        .map(|batch| {
            let start = Instant::now();
            for query in batch {
                black_box(set.contains(black_box(query)));
            }
            start.elapsed().as_nanos() as f64 / batch.len() as f64
        })
        .collect();
    samples.sort_by(f64::total_cmp);
    samples
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub structure: Structure,
    pub size: usize,
    pub build_nanos: u64,
    pub median_hit_nanos: Option<f64>,
    pub median_miss_nanos: Option<f64>,
    pub p99_hit_nanos: Option<f64>,
    pub estimated_bytes: usize,
    /// Median tables inspected per query; word-existence rows only.
    pub median_visits: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VisitSummary {
    pub size: usize,
    pub median_hit_visits: Option<usize>,
    pub median_miss_visits: Option<usize>,
    pub median_visits: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub seed: u64,
    pub query_count: usize,
    pub hit_ratio: f64,
    pub rows: Vec<BenchRow>,
    pub visits: Vec<VisitSummary>,
}

impl BenchReport {
    pub fn row(&self, structure: Structure, size: usize) -> Option<&BenchRow> {
        self.rows
            .iter()
            .find(|r| r.structure == structure && r.size == size)
    }

    /// One record per structure and size, with a header row.
    pub fn write_csv(&self, sink: impl io::Write) -> csv::Result<()> {
        let mut writer = csv::Writer::from_writer(sink);
        for row in &self.rows {
            writer.serialize(row)?;
        }
        writer.flush()?;
        Ok(())
    }
}

fn fmt_opt(value: Option<f64>) -> String {
    value.map_or_else(|| "-".to_string(), |v| format!("{v:.1}"))
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "queries={} hit_ratio={} seed={}",
            self.query_count, self.hit_ratio, self.seed
        )?;
        writeln!(
            f,
            "{:<15} {:>7} {:>12} {:>10} {:>10} {:>10} {:>12}",
            "structure", "size", "build_ns", "hit_p50", "miss_p50", "hit_p99", "bytes"
        )?;
        for row in &self.rows {
            writeln!(
                f,
                "{:<15} {:>7} {:>12} {:>10} {:>10} {:>10} {:>12}",
                row.structure.name(),
                row.size,
                row.build_nanos,
                fmt_opt(row.median_hit_nanos),
                fmt_opt(row.median_miss_nanos),
                fmt_opt(row.p99_hit_nanos),
                row.estimated_bytes,
            )?;
        }
        writeln!(f)?;
        writeln!(
            f,
            "{:<7} {:>10} {:>11} {:>9}",
            "size", "hit_visits", "miss_visits", "visits"
        )?;
        for v in &self.visits {
            let show = |x: Option<usize>| x.map_or_else(|| "-".to_string(), |x| x.to_string());
            writeln!(
                f,
                "{:<7} {:>10} {:>11} {:>9}",
                v.size,
                show(v.median_hit_visits),
                show(v.median_miss_visits),
                v.median_visits
            )?;
        }
        Ok(())
    }
}

/// Median tables inspected over `queries`, or `None` for an empty list.
pub fn median_visits(index: &WordIndex, queries: &[NormalizedWord]) -> Option<usize> {
    let mut visits: Vec<usize> = queries
        .iter()
        .map(|q| index.contains_traced(q).visits)
        .collect();
    visits.sort_unstable();
    percentile(&visits, 0.5)
}

/// Fails on the first query where a candidate disagrees with `expected`.
pub fn check_agreement(
    size: usize,
    queries: &[NormalizedWord],
    expected: &[bool],
    candidates: &[(Structure, &dyn Membership)],
) -> Result<(), BenchError> {
    for &(structure, set) in candidates {
        for (query, &want) in queries.iter().zip(expected) {
            let got = set.contains(query);
            if got != want {
                return Err(BenchError::AnswerMismatch {
                    size,
                    structure,
                    query: query.to_string(),
                    expected: want,
                    got,
                });
            }
        }
    }
    Ok(())
}

/// Loads the corpus named by `config` and runs [`run_benchmark_on`].
pub fn run_benchmark(config: &BenchConfig) -> Result<BenchReport, BenchError> {
    let words = load_corpus(&config.corpus_path)?;
    run_benchmark_on(&words, config)
}

pub fn load_corpus(path: &Path) -> Result<Vec<NormalizedWord>, BenchError> {
    let corpus_error = |source| BenchError::Corpus {
        path: path.to_path_buf(),
        source,
    };
    let file = File::open(path).map_err(corpus_error)?;
    let (words, _) = load_wordlist(BufReader::new(file)).map_err(corpus_error)?;
    Ok(words)
}

/// Benchmarks every size in `config` over prefixes of `words`.
pub fn run_benchmark_on(
    words: &[NormalizedWord],
    config: &BenchConfig,
) -> Result<BenchReport, BenchError> {
    config.validate(words.len())?;
    let mut rows = Vec::new();
    let mut visits = Vec::new();
    for &size in &config.sizes {
        let subset = &words[..size];
        let queries = generate_queries(subset, config);

        let start = Instant::now();
        let trie = WordIndex::from_words(subset);
        let trie_build = start.elapsed();
        let start = Instant::now();
        let sorted = SortedArray::new(subset);
        let sorted_build = start.elapsed();
        let start = Instant::now();
        let hashed = HashSetBaseline::new(subset);
        let hashed_build = start.elapsed();

        // The differential sweep doubles as the warm-up pass.
        let expected: Vec<bool> = queries.iter().map(|q| trie.contains(q)).collect();
        check_agreement(
            size,
            &queries,
            &expected,
            &[
                (Structure::SortedArray, &sorted as &dyn Membership),
                (Structure::HashSet, &hashed),
            ],
        )?;

        let (hits, misses): (Vec<_>, Vec<_>) =
            queries.iter().zip(&expected).partition(|(_, &found)| found);
        let hits: Vec<NormalizedWord> = hits.into_iter().map(|(q, _)| q.clone()).collect();
        let misses: Vec<NormalizedWord> = misses.into_iter().map(|(q, _)| q.clone()).collect();

        let summary = VisitSummary {
            size,
            median_hit_visits: median_visits(&trie, &hits),
            median_miss_visits: median_visits(&trie, &misses),
            median_visits: median_visits(&trie, &queries).expect("query_count >= 1"),
        };
        visits.push(summary);

        for (structure, set, build) in [
            (
                Structure::WordExistence,
                &trie as &dyn Membership,
                trie_build,
            ),
            (Structure::SortedArray, &sorted, sorted_build),
            (Structure::HashSet, &hashed, hashed_build),
        ] {
            let hit_samples = time_batches(set, &hits);
            let miss_samples = time_batches(set, &misses);
            rows.push(BenchRow {
                structure,
                size,
                build_nanos: build.as_nanos() as u64,
                median_hit_nanos: percentile(&hit_samples, 0.5),
                median_miss_nanos: percentile(&miss_samples, 0.5),
                p99_hit_nanos: percentile(&hit_samples, 0.99),
                estimated_bytes: set.estimated_bytes(),
                median_visits: (structure == Structure::WordExistence)
                    .then_some(summary.median_visits),
            });
        }
    }
    Ok(BenchReport {
        seed: config.seed,
        query_count: config.query_count,
        hit_ratio: config.hit_ratio,
        rows,
        visits,
    })
}
