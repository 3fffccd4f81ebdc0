//! Word existence index.
//!
//! Words over `a-z` are stored in nested 26-slot tables, one table per
//! prefix. Each slot carries a continuation flag (some word goes further)
//! and an existence flag (a word ends here). Lookups walk one table per
//! letter and give up at the first unset continuation flag, so the cost of a
//! query depends on its length and never on how many words are stored.
//!
//! ```
//! use word_existence::{NormalizedWord, WordIndex};
//!
//! let words: Vec<NormalizedWord> = ["bat", "bath"]
//!     .iter()
//!     .map(|w| w.parse().unwrap())
//!     .collect();
//! let index = WordIndex::from_words(&words);
//! assert!(index.contains(&"bath".parse().unwrap()));
//! assert!(!index.contains(&"ba".parse().unwrap()));
//! assert_eq!(index.table_count(), 4);
//! ```

pub mod bench;
pub mod cli;
pub mod image;
pub mod trie;
pub mod word;
pub mod wordlist;

pub use trie::{
    IndexError, IndexStats, InsertOutcome, LetterTable, LookupTrace, Slot, StopReason,
    StructureError, WordIndex,
};
pub use word::{NormalizedWord, WordError, ALPHABET_LEN, MAX_WORD_LEN};
