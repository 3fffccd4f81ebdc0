//! Acceptance criteria. Each one runs at its stated tolerance and prints a
//! single PASS/FAIL line; run with `--nocapture` to see them.

mod common;

use std::collections::HashSet;
use std::time::{Duration, Instant};

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use word_existence::bench::{run_benchmark, BenchConfig, Structure};
use word_existence::image::{from_bytes, to_bytes};
use word_existence::WordIndex;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

struct Criterion {
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn worked_example() -> Outcome {
    let index = build(&["bat".into(), "bath".into()]);
    ensure!(
        index.table_count() == 4,
        "table_count = {}",
        index.table_count()
    );
    let shared = shared_path_tables(&index, "bat", "bath");
    ensure!(shared == 3, "shared tables = {shared}");
    ensure!(index.contains(&nw("bat")), "bat missing");
    ensure!(index.contains(&nw("bath")), "bath missing");
    ensure!(!index.contains(&nw("ba")), "ba reported present");
    Ok(format!("tables=4 shared={shared}"))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE);
    let (mut contains_checked, mut prefix_checked, mut scanned) = (0u64, 0u64, 0u64);
    for trial in 0..50 {
        let count = if trial % 2 == 0 {
            5_000
        } else {
            rng.random_range(1..=5_000)
        };
        let words = random_words(&mut rng, count, 12);
        let stored: HashSet<&str> = words.iter().map(String::as_str).collect();
        let prefixes = prefix_set(&words);
        let index = build(&words).frozen();

        let queries = mixed_queries(&mut rng, &words, &stored, 100_000, 12);
        let hits = queries
            .iter()
            .filter(|q| stored.contains(q.as_str()))
            .count();
        ensure!(hits == 50_000, "trial {trial}: {hits} hits of 100000");
        for q in &queries {
            let want = stored.contains(q.as_str());
            ensure!(
                index.contains(&nw(q)) == want,
                "trial {trial}: contains({q}) != {want}"
            );
        }
        contains_checked += queries.len() as u64;

        // Prefix queries: truncated stored words and random short strings.
        for i in 0..100_000 {
            let q = if i % 2 == 0 {
                let w = &words[rng.random_range(..words.len())];
                w[..rng.random_range(1..=w.len())].to_string()
            } else {
                random_word(&mut rng, 1, 6)
            };
            let want = prefixes.contains(&q);
            ensure!(
                index.has_prefix(&nw(&q)) == want,
                "trial {trial}: has_prefix({q}) != {want}"
            );
            // The enumerated prefix set is itself checked against a scan.
            if i < 200 {
                ensure!(
                    scan_has_prefix(&words, &q) == want,
                    "prefix oracle disagrees on {q}"
                );
                scanned += 1;
            }
        }
        prefix_checked += 100_000;
    }
    Ok(format!(
        "contains {contains_checked}/{contains_checked}, has_prefix {prefix_checked}/{prefix_checked} (scan cross-check {scanned})"
    ))
}

fn cost_claim() -> Outcome {
    let corpus = corpus();
    let small = build(&corpus[..1_000]).frozen();
    let large = build(&corpus).frozen();
    ensure!(
        large.word_count() == 50_000,
        "large index has {}",
        large.word_count()
    );

    let probes = &corpus[..100];
    for p in probes {
        let (a, b) = (small.contains_traced(&nw(p)), large.contains_traced(&nw(p)));
        ensure!(a.found && b.found, "probe {p} not found");
        ensure!(
            a.visits == b.visits,
            "{p}: {} visits at 1k, {} at 50k",
            a.visits,
            b.visits
        );
        ensure!(
            a.visits == p.len(),
            "{p}: {} visits for a hit of length {}",
            a.visits,
            p.len()
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0xC057);
    let stored: HashSet<&str> = corpus.iter().map(String::as_str).collect();
    let mut misses = 0;
    while misses < 1_000 {
        let q = random_word(&mut rng, 1, 12);
        if stored.contains(q.as_str()) {
            continue;
        }
        misses += 1;
        for index in [&small, &large] {
            let trace = index.contains_traced(&nw(&q));
            ensure!(!trace.found, "{q} reported present");
            ensure!(
                trace.visits <= q.len(),
                "{q}: {} visits > length",
                trace.visits
            );
        }
    }
    Ok(format!(
        "100 probes equal at 1k and 50k; {misses} misses within length"
    ))
}

fn lazy_allocation() -> Outcome {
    let corpus = corpus();
    let expected = proper_prefixes(&corpus);
    let index = build(&corpus).frozen();
    let (tables, mismatched) = walk(&index);
    let stray = tables.difference(&expected).count();
    ensure!(stray == 0, "{stray} tables without a word behind them");
    ensure!(
        mismatched == 0,
        "{mismatched} slots with child/continuation mismatch"
    );
    ensure!(
        tables.len() == expected.len(),
        "{} tables, {} proper prefixes",
        tables.len(),
        expected.len()
    );
    index.validate().map_err(|e| e.to_string())?;
    Ok(format!(
        "{} tables, 0 stray, 0 mismatched slots",
        tables.len()
    ))
}

fn space_sharing() -> Outcome {
    let corpus = corpus();
    let index = build(&corpus).frozen();
    let letters: usize = corpus.iter().map(String::len).sum();
    let tables = index.table_count();
    ensure!(
        tables < letters,
        "table_count {tables} >= total letters {letters}"
    );
    Ok(format!(
        "table_count={tables} letters={letters} ratio={:.3}",
        tables as f64 / letters as f64
    ))
}

fn serialization() -> Outcome {
    let index = build(&["bat".into(), "bath".into()]).frozen();
    let bytes = to_bytes(&index).map_err(|e| e.to_string())?;
    ensure!(bytes.len() == 45, "bat/bath image is {} bytes", bytes.len());

    let mut rng = ChaCha8Rng::seed_from_u64(0x5E71);
    for trial in 0..20 {
        let count = rng.random_range(1..=5_000);
        let words = random_words(&mut rng, count, 12);
        let stored: HashSet<&str> = words.iter().map(String::as_str).collect();
        let index = build(&words).frozen();
        let bytes = to_bytes(&index).map_err(|e| e.to_string())?;
        let back = from_bytes(&bytes).map_err(|e| format!("trial {trial}: {e}"))?;
        let again = to_bytes(&back).map_err(|e| e.to_string())?;
        ensure!(again == bytes, "trial {trial}: re-serialization differs");
        ensure!(back.stats() == index.stats(), "trial {trial}: stats differ");
        for q in mixed_queries(&mut rng, &words, &stored, 10_000, 12) {
            let q = nw(&q);
            ensure!(
                back.contains(&q) == index.contains(&q),
                "trial {trial}: contains({q}) differs"
            );
            ensure!(
                back.has_prefix(&q) == index.has_prefix(&q),
                "trial {trial}: has_prefix({q}) differs"
            );
        }
    }
    Ok("bat/bath=45 bytes; 20 round trips byte-identical".into())
}

fn benchmark_differential() -> Outcome {
    let config = BenchConfig::new(corpus_path());
    ensure!(
        config.query_count == 100_000,
        "default query count {}",
        config.query_count
    );
    ensure!(
        config.sizes == [1_000, 10_000, 50_000],
        "default sizes {:?}",
        config.sizes
    );
    let report = run_benchmark(&config).map_err(|e| e.to_string())?;
    ensure!(report.rows.len() == 9, "{} rows", report.rows.len());
    for row in &report.rows {
        for v in [
            row.median_hit_nanos,
            row.median_miss_nanos,
            row.p99_hit_nanos,
        ] {
            let v = v.ok_or("missing latency")?;
            ensure!(
                v.is_finite() && v > 0.0,
                "{} at {}: latency {v}",
                row.structure,
                row.size
            );
        }
    }
    println!("{report}");
    let trie = report.row(Structure::WordExistence, 50_000).unwrap();
    let hash = report.row(Structure::HashSet, 50_000).unwrap();
    Ok(format!(
        "0 mismatches over 3 sizes x 100000 queries; 50k hit p50: trie {:.1} ns, hash-set {:.1} ns",
        trie.median_hit_nanos.unwrap(),
        hash.median_hit_nanos.unwrap()
    ))
}

#[test]
fn acceptance() {
    let criteria = [
        Criterion {
            name: "worked example {bat, bath}",
            budget: Duration::from_millis(1),
            run: worked_example,
        },
        Criterion {
            name: "oracle equivalence",
            budget: Duration::from_secs(60),
            run: oracle_equivalence,
        },
        Criterion {
            name: "cost independent of dictionary size",
            budget: Duration::from_secs(1),
            run: cost_claim,
        },
        Criterion {
            name: "lazy allocation",
            budget: Duration::from_secs(1),
            run: lazy_allocation,
        },
        Criterion {
            name: "space sharing",
            budget: Duration::from_secs(1),
            run: space_sharing,
        },
        Criterion {
            name: "serialization",
            budget: Duration::from_secs(1),
            run: serialization,
        },
        Criterion {
            name: "benchmark differential",
            budget: Duration::from_secs(60),
            run: benchmark_differential,
        },
    ];

    let mut failed = Vec::new();
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            if elapsed <= c.budget {
                Ok(detail)
            } else {
                Err(format!("{detail}; took {elapsed:?}, budget {:?}", c.budget))
            }
        });
        match outcome {
            Ok(detail) => println!("PASS  {:<38} {elapsed:>12.3?}  {detail}", c.name),
            Err(why) => {
                println!("FAIL  {:<38} {elapsed:>12.3?}  {why}", c.name);
                failed.push(c.name);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}

#[test]
fn worked_example_on_fresh_index_is_exact() {
    // Same check outside the timed runner, against a plain `WordIndex`.
    let mut index = WordIndex::new();
    index.insert(&nw("bat")).unwrap();
    index.insert(&nw("bath")).unwrap();
    let stats = index.stats();
    assert_eq!(
        (stats.table_count, stats.word_count, stats.max_depth),
        (4, 2, 4)
    );
}
