//! The word existence index: nested 26-slot letter tables.
//!
//! Every table belongs to exactly one prefix. Slot `i` of the table for
//! prefix `p` describes the string `p + letter(i)` with two flags:
//!
//! * continuation: some stored word extends past `p + letter(i)`, and the
//!   slot links to the table for that longer prefix;
//! * existence: `p + letter(i)` itself was inserted.
//!
//! Child tables are allocated the first time a continuation flag is set, so
//! the set of tables is exactly the root plus one table per proper prefix of
//! the stored words. A lookup inspects at most one table per query letter
//! and stops as soon as it meets an unset continuation flag.

use std::fmt;
use std::mem;

use thiserror::Error;

use crate::word::{NormalizedWord, ALPHABET_LEN};

/// Bits 0..26 of a slot bitmap. Anything above is never set.
pub const LETTER_MASK: u32 = (1 << ALPHABET_LEN) - 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexError {
    #[error("index is frozen; insertions are rejected")]
    Frozen,
}

/// A broken structural invariant, as found by [`WordIndex::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error(
        "slot {letter} of table {prefix:?}: continuation={continuation} but child present={child}"
    )]
    ChildMismatch {
        prefix: String,
        letter: char,
        continuation: bool,
        child: bool,
    },
    #[error("table {prefix:?} has bits set above letter 'z'")]
    StrayBits { prefix: String },
    #[error("table {prefix:?} is allocated but no stored word passes through it")]
    DeadTable { prefix: String },
    #[error("bookkeeping says {recorded} {what}, structure holds {actual}")]
    CountMismatch {
        what: &'static str,
        recorded: usize,
        actual: usize,
    },
}

/// One of the 26 slots of a [`LetterTable`], viewed by value.
#[derive(Debug, Clone, Copy)]
pub struct Slot<'a> {
    pub continuation: bool,
    pub existence: bool,
    pub child: Option<&'a LetterTable>,
}

/// A table of 26 slots for a single prefix.
///
/// The flags are kept as two bitmaps (bit `i` is letter `i`) next to the
/// child links.
#[derive(Default)]
pub struct LetterTable {
    continuation: u32,
    existence: u32,
    children: [Option<Box<LetterTable>>; ALPHABET_LEN],
}

impl LetterTable {
    pub fn slot(&self, letter: u8) -> Slot<'_> {
        let bit = 1u32 << letter;
        Slot {
            continuation: self.continuation & bit != 0,
            existence: self.existence & bit != 0,
            child: self.children[letter as usize].as_deref(),
        }
    }

    pub fn slots(&self) -> impl Iterator<Item = Slot<'_>> + '_ {
        (0..ALPHABET_LEN as u8).map(move |letter| self.slot(letter))
    }

    /// Continuation flags as a bitmap, bit `i` for letter `i`.
    pub fn continuation_bits(&self) -> u32 {
        self.continuation
    }

    /// Existence flags as a bitmap, bit `i` for letter `i`.
    pub fn existence_bits(&self) -> u32 {
        self.existence
    }

    /// Slots with either flag set.
    pub fn occupied_slots(&self) -> usize {
        (self.continuation | self.existence).count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.continuation | self.existence == 0
    }

    pub(crate) fn with_bits(continuation: u32, existence: u32) -> Self {
        LetterTable {
            continuation,
            existence,
            ..LetterTable::default()
        }
    }

    pub(crate) fn set_child(&mut self, letter: u8, child: LetterTable) {
        self.children[letter as usize] = Some(Box::new(child));
    }
}

impl fmt::Debug for LetterTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LetterTable")
            .field("continuation", &format_args!("{:#028b}", self.continuation))
            .field("existence", &format_args!("{:#028b}", self.existence))
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InsertOutcome {
    Inserted,
    AlreadyPresent,
}

/// Where a lookup ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StopReason {
    /// Reached the final letter and its existence flag was set.
    ExistenceHit,
    /// Reached the final letter and its existence flag was unset.
    ExistenceMiss,
    /// A non-final letter had its continuation flag unset.
    ContinuationStop,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::ExistenceHit => "existence-hit",
            StopReason::ExistenceMiss => "existence-miss",
            StopReason::ContinuationStop => "continuation-stop",
        }
    }
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Instrumented lookup result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LookupTrace {
    pub found: bool,
    /// Tables inspected, including the one where the walk stopped.
    pub visits: usize,
    pub stop_reason: StopReason,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexStats {
    pub word_count: usize,
    pub table_count: usize,
    pub occupied_slot_count: usize,
    /// Length of the longest stored word.
    pub max_depth: usize,
    pub estimated_bytes: usize,
}

impl IndexStats {
    /// `(name, value)` pairs in display order.
    pub fn fields(&self) -> [(&'static str, usize); 5] {
        [
            ("word_count", self.word_count),
            ("table_count", self.table_count),
            ("occupied_slot_count", self.occupied_slot_count),
            ("max_depth", self.max_depth),
            ("estimated_bytes", self.estimated_bytes),
        ]
    }
}

/// The whole structure: a root table for the empty prefix plus bookkeeping.
///
/// Building needs `&mut self`. Once [`freeze`](Self::freeze) is called the
/// index rejects insertions and can be shared freely across threads.
pub struct WordIndex {
    root: Box<LetterTable>,
    word_count: usize,
    table_count: usize,
    max_depth: usize,
    frozen: bool,
}

impl Default for WordIndex {
    fn default() -> Self {
        WordIndex::new()
    }
}

impl fmt::Debug for WordIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WordIndex")
            .field("word_count", &self.word_count)
            .field("table_count", &self.table_count)
            .field("max_depth", &self.max_depth)
            .field("frozen", &self.frozen)
            .finish()
    }
}

impl WordIndex {
    pub fn new() -> Self {
        WordIndex {
            root: Box::default(),
            word_count: 0,
            table_count: 1,
            max_depth: 0,
            frozen: false,
        }
    }

    /// Builds an index from `words` and freezes it. Duplicates are ignored.
    pub fn from_words<'a>(words: impl IntoIterator<Item = &'a NormalizedWord>) -> Self {
        let mut index = WordIndex::new();
        for word in words {
            index.insert(word).expect("fresh index is not frozen");
        }
        index.freeze();
        index
    }

    /// Rebuilds bookkeeping from a finished table tree.
    pub(crate) fn from_root(root: LetterTable, word_count: usize) -> Self {
        let mut index = WordIndex {
            root: Box::new(root),
            word_count,
            table_count: 0,
            max_depth: 0,
            frozen: true,
        };
        let (mut tables, mut max_depth) = (0, 0);
        index.for_each_table(|prefix, table| {
            tables += 1;
            if table.existence != 0 {
                max_depth = max_depth.max(prefix.len() + 1);
            }
        });
        index.table_count = tables;
        index.max_depth = max_depth;
        index
    }

    pub fn root(&self) -> &LetterTable {
        &self.root
    }

    pub fn word_count(&self) -> usize {
        self.word_count
    }

    pub fn table_count(&self) -> usize {
        self.table_count
    }

    pub fn is_frozen(&self) -> bool {
        self.frozen
    }

    /// Rejects all further insertions. Idempotent.
    pub fn freeze(&mut self) {
        self.frozen = true;
    }

    pub fn frozen(mut self) -> Self {
        self.freeze();
        self
    }

    /// Adds `word`, allocating tables for any new proper prefixes.
    pub fn insert(&mut self, word: &NormalizedWord) -> Result<InsertOutcome, IndexError> {
        if self.frozen {
            return Err(IndexError::Frozen);
        }
        let (&last, init) = word
            .letters()
            .split_last()
            .expect("normalized words are non-empty");

        let mut table = &mut *self.root;
        for &letter in init {
            let i = letter as usize;
            if table.children[i].is_none() {
                table.children[i] = Some(Box::default());
                table.continuation |= 1 << letter;
                self.table_count += 1;
            }
            table = table.children[i]
                .as_deref_mut()
                .expect("child allocated above");
        }

        let bit = 1u32 << last;
        if table.existence & bit != 0 {
            return Ok(InsertOutcome::AlreadyPresent);
        }
        table.existence |= bit;
        self.word_count += 1;
        self.max_depth = self.max_depth.max(word.len());
        Ok(InsertOutcome::Inserted)
    }

    pub fn contains(&self, word: &NormalizedWord) -> bool {
        self.contains_traced(word).found
    }

    /// Membership with the number of tables inspected and the reason the
    /// walk stopped.
    pub fn contains_traced(&self, word: &NormalizedWord) -> LookupTrace {
        let letters = word.letters();
        let last_at = letters.len() - 1;
        let mut table = &*self.root;
        for (depth, &letter) in letters.iter().enumerate() {
            let bit = 1u32 << letter;
            let visits = depth + 1;
            if depth == last_at {
                let found = table.existence & bit != 0;
                let stop_reason = if found {
                    StopReason::ExistenceHit
                } else {
                    StopReason::ExistenceMiss
                };
                return LookupTrace {
                    found,
                    visits,
                    stop_reason,
                };
            }
            if table.continuation & bit == 0 {
                return LookupTrace {
                    found: false,
                    visits,
                    stop_reason: StopReason::ContinuationStop,
                };
            }
            table = table.children[letter as usize]
                .as_deref()
                .expect("continuation implies child");
        }
        unreachable!("normalized words are non-empty")
    }

    /// Whether some stored word starts with `prefix` (the word itself counts).
    pub fn has_prefix(&self, prefix: &NormalizedWord) -> bool {
        let (&last, init) = prefix
            .letters()
            .split_last()
            .expect("normalized words are non-empty");
        let mut table = &*self.root;
        for &letter in init {
            if table.continuation & (1 << letter) == 0 {
                return false;
            }
            table = table.children[letter as usize]
                .as_deref()
                .expect("continuation implies child");
        }
        (table.continuation | table.existence) & (1 << last) != 0
    }

    /// The tables a lookup of `word` inspects, root first.
    pub fn lookup_path(&self, word: &NormalizedWord) -> Vec<&LetterTable> {
        let visits = self.contains_traced(word).visits;
        let mut path = Vec::with_capacity(visits);
        let mut table = &*self.root;
        path.push(table);
        for &letter in &word.letters()[..visits - 1] {
            table = table.children[letter as usize]
                .as_deref()
                .expect("walk reached this depth");
            path.push(table);
        }
        path
    }

    /// Visits every table in depth-first preorder, children in ascending
    /// letter order, passing the table's prefix as letter codes.
    pub fn for_each_table<'a>(&'a self, mut f: impl FnMut(&[u8], &'a LetterTable)) {
        fn walk<'a>(
            table: &'a LetterTable,
            prefix: &mut Vec<u8>,
            f: &mut impl FnMut(&[u8], &'a LetterTable),
        ) {
            f(prefix, table);
            for (letter, child) in table.children.iter().enumerate() {
                if let Some(child) = child {
                    prefix.push(letter as u8);
                    walk(child, prefix, f);
                    prefix.pop();
                }
            }
        }
        walk(&self.root, &mut Vec::new(), &mut f);
    }

    /// Number of tables at each depth; entry 0 is the root.
    pub fn depth_histogram(&self) -> Vec<usize> {
        let mut histogram = Vec::new();
        self.for_each_table(|prefix, _| {
            if histogram.len() <= prefix.len() {
                histogram.resize(prefix.len() + 1, 0);
            }
            histogram[prefix.len()] += 1;
        });
        histogram
    }

    pub fn stats(&self) -> IndexStats {
        let mut occupied_slot_count = 0;
        self.for_each_table(|_, table| occupied_slot_count += table.occupied_slots());
        IndexStats {
            word_count: self.word_count,
            table_count: self.table_count,
            occupied_slot_count,
            max_depth: self.max_depth,
            estimated_bytes: self.table_count * mem::size_of::<LetterTable>()
                + mem::size_of::<WordIndex>(),
        }
    }

    /// Walks the whole structure and checks every invariant: children exist
    /// exactly where continuation is set, no bits past 'z', no table without
    /// a word running through it, and bookkeeping matches the tables.
    pub fn validate(&self) -> Result<(), StructureError> {
        let mut first_error = None;
        let (mut tables, mut words, mut max_depth) = (0, 0, 0);
        self.for_each_table(|prefix, table| {
            tables += 1;
            words += table.existence.count_ones() as usize;
            if table.existence != 0 {
                max_depth = max_depth.max(prefix.len() + 1);
            }
            if first_error.is_some() {
                return;
            }
            if (table.continuation | table.existence) & !LETTER_MASK != 0 {
                first_error = Some(StructureError::StrayBits {
                    prefix: spell(prefix),
                });
            } else if !prefix.is_empty() && table.is_empty() {
                first_error = Some(StructureError::DeadTable {
                    prefix: spell(prefix),
                });
            } else if let Some(letter) = (0..ALPHABET_LEN as u8).find(|&l| {
                let slot = table.slot(l);
                slot.continuation != slot.child.is_some()
            }) {
                let slot = table.slot(letter);
                first_error = Some(StructureError::ChildMismatch {
                    prefix: spell(prefix),
                    letter: (b'a' + letter) as char,
                    continuation: slot.continuation,
                    child: slot.child.is_some(),
                });
            }
        });
        if let Some(err) = first_error {
            return Err(err);
        }
        for (what, recorded, actual) in [
            ("tables", self.table_count, tables),
            ("words", self.word_count, words),
            ("max depth", self.max_depth, max_depth),
        ] {
            if recorded != actual {
                return Err(StructureError::CountMismatch {
                    what,
                    recorded,
                    actual,
                });
            }
        }
        Ok(())
    }
}

fn spell(codes: &[u8]) -> String {
    codes.iter().map(|&c| (b'a' + c) as char).collect()
}
