//! Reading plain-text wordlists into normalized words.
//!
//! One word per line, LF or CRLF. Every line ends up in exactly one bucket:
//! accepted, duplicate of an earlier accepted word, or rejected with a reason.

use std::collections::HashSet;
use std::io::{self, BufRead};

use crate::word::{NormalizedWord, WordError};

/// Case-folds `raw` into a [`NormalizedWord`].
pub fn normalize(raw: &str) -> Result<NormalizedWord, WordError> {
    NormalizedWord::normalize(raw)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reject {
    /// 1-based.
    pub line_number: usize,
    pub raw_text: String,
    pub reason: WordError,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngestReport {
    pub accepted_count: usize,
    pub duplicate_count: usize,
    pub rejects: Vec<Reject>,
}

impl IngestReport {
    pub fn total_lines(&self) -> usize {
        self.accepted_count + self.duplicate_count + self.rejects.len()
    }

    /// `accepted=N duplicates=N rejected=N`
    pub fn summary(&self) -> String {
        format!(
            "accepted={} duplicates={} rejected={}",
            self.accepted_count,
            self.duplicate_count,
            self.rejects.len()
        )
    }
}

/// Iterates the lines of a wordlist without their terminators.
///
/// Invalid UTF-8 is replaced rather than treated as a read error, so such a
/// line surfaces as a non-letter reject. A final terminator does not start an
/// extra empty line.
pub struct Lines<R> {
    reader: R,
    buf: Vec<u8>,
}

impl<R: BufRead> Lines<R> {
    pub fn new(reader: R) -> Self {
        Lines {
            reader,
            buf: Vec::new(),
        }
    }
}

impl<R: BufRead> Iterator for Lines<R> {
    type Item = io::Result<String>;

    fn next(&mut self) -> Option<Self::Item> {
        self.buf.clear();
        match self.reader.read_until(b'\n', &mut self.buf) {
            Ok(0) => None,
            Ok(_) => {
                if self.buf.last() == Some(&b'\n') {
                    self.buf.pop();
                    if self.buf.last() == Some(&b'\r') {
                        self.buf.pop();
                    }
                }
                Some(Ok(String::from_utf8_lossy(&self.buf).into_owned()))
            }
            Err(err) => Some(Err(err)),
        }
    }
}

/// Reads a wordlist, returning distinct words in first-seen order.
pub fn load_wordlist(source: impl BufRead) -> io::Result<(Vec<NormalizedWord>, IngestReport)> {
    let mut words = Vec::new();
    let mut seen = HashSet::new();
    let mut report = IngestReport::default();
    for (i, line) in Lines::new(source).enumerate() {
        let line = line?;
        match normalize(&line) {
            Ok(word) => {
                if seen.insert(word.clone()) {
                    report.accepted_count += 1;
                    words.push(word);
                } else {
                    report.duplicate_count += 1;
                }
            }
            Err(reason) => report.rejects.push(Reject {
                line_number: i + 1,
                raw_text: line,
                reason,
            }),
        }
    }
    Ok((words, report))
}
