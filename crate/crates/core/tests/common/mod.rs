//! Reference oracles and fixtures shared by the integration tests. Nothing
//! here goes through the index; every expected answer comes from plain
//! strings, hash sets and linear scans.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};
use std::path::PathBuf;

use rand::Rng;
use word_existence::{NormalizedWord, WordIndex};

pub fn nw(s: &str) -> NormalizedWord {
    NormalizedWord::normalize(s).unwrap()
}

pub fn corpus_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/english-50k.txt")
}

/// The bundled corpus as plain strings, in file order.
pub fn corpus() -> Vec<String> {
    std::fs::read_to_string(corpus_path())
        .unwrap()
        .lines()
        .map(str::to_owned)
        .collect()
}

pub fn random_word(rng: &mut impl Rng, min_len: usize, max_len: usize) -> String {
    let len = rng.random_range(min_len..=max_len);
    (0..len)
        .map(|_| rng.random_range(b'a'..=b'z') as char)
        .collect()
}

pub fn random_words(rng: &mut impl Rng, count: usize, max_len: usize) -> Vec<String> {
    (0..count).map(|_| random_word(rng, 1, max_len)).collect()
}

pub fn build(words: &[String]) -> WordIndex {
    let mut index = WordIndex::new();
    for w in words {
        index.insert(&nw(w)).unwrap();
    }
    index
}

/// Every non-empty prefix of every word, the words included.
pub fn prefix_set(words: &[String]) -> HashSet<String> {
    let mut set = HashSet::new();
    for w in words {
        for end in 1..=w.len() {
            set.insert(w[..end].to_string());
        }
    }
    set
}

/// The empty prefix plus every proper non-empty prefix.
pub fn proper_prefixes(words: &[String]) -> BTreeSet<String> {
    let mut set = BTreeSet::from([String::new()]);
    for w in words {
        for end in 1..w.len() {
            set.insert(w[..end].to_string());
        }
    }
    set
}

pub fn scan_has_prefix(words: &[String], prefix: &str) -> bool {
    words.iter().any(|w| w.starts_with(prefix))
}

pub fn spell(codes: &[u8]) -> String {
    codes.iter().map(|&c| (b'a' + c) as char).collect()
}

/// Allocated tables by prefix, plus the number of slots whose child link
/// disagrees with their continuation flag.
pub fn walk(index: &WordIndex) -> (BTreeSet<String>, usize) {
    let mut prefixes = BTreeSet::new();
    let mut mismatched = 0;
    index.for_each_table(|prefix, table| {
        prefixes.insert(spell(prefix));
        mismatched += table
            .slots()
            .filter(|s| s.continuation != s.child.is_some())
            .count();
    });
    (prefixes, mismatched)
}

/// Tables common to both lookup paths, by identity.
pub fn shared_path_tables(index: &WordIndex, a: &str, b: &str) -> usize {
    let (a, b) = (nw(a), nw(b));
    let pa = index.lookup_path(&a);
    let pb = index.lookup_path(&b);
    pa.iter()
        .filter(|t| pb.iter().any(|u| std::ptr::eq(**t, *u)))
        .count()
}

/// Half stored words, half strings absent from `stored`.
pub fn mixed_queries(
    rng: &mut impl Rng,
    words: &[String],
    stored: &HashSet<&str>,
    count: usize,
    max_len: usize,
) -> Vec<String> {
    let mut queries = Vec::with_capacity(count);
    for i in 0..count {
        if i % 2 == 0 {
            queries.push(words[rng.random_range(..words.len())].clone());
        } else {
            loop {
                let q = random_word(rng, 1, max_len);
                if !stored.contains(q.as_str()) {
                    queries.push(q);
                    break;
                }
            }
        }
    }
    queries
}
