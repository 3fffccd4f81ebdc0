//! Validated lowercase words, the only key type the index accepts.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Number of letters in the alphabet, and therefore slots per table.
pub const ALPHABET_LEN: usize = 26;

/// Longest word the index will store. Caps the depth of the table tree.
pub const MAX_WORD_LEN: usize = 64;

/// Why a piece of text could not become a [`NormalizedWord`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("empty word")]
    Empty,
    #[error("non-letter {ch:?} at position {position}")]
    NonLetter { ch: char, position: usize },
    #[error("word has {len} letters, limit is {MAX_WORD_LEN}")]
    TooLong { len: usize },
}

impl WordError {
    /// Short machine-friendly tag: `empty`, `non-letter` or `too-long`.
    pub fn kind(&self) -> &'static str {
        match self {
            WordError::Empty => "empty",
            WordError::NonLetter { .. } => "non-letter",
            WordError::TooLong { .. } => "too-long",
        }
    }
}

/// A non-empty sequence of letter codes, `a = 0` through `z = 25`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalizedWord(Box<[u8]>);

impl NormalizedWord {
    /// Builds a word from raw letter codes.
    pub fn from_codes(codes: impl Into<Vec<u8>>) -> Result<Self, WordError> {
        let codes = codes.into();
        if codes.is_empty() {
            return Err(WordError::Empty);
        }
        if codes.len() > MAX_WORD_LEN {
            return Err(WordError::TooLong { len: codes.len() });
        }
        if let Some(position) = codes.iter().position(|&c| c as usize >= ALPHABET_LEN) {
            // Report the code as if it were a letter past 'z'.
            let ch = char::from_u32(u32::from(b'a') + u32::from(codes[position])).unwrap_or('?');
            return Err(WordError::NonLetter { ch, position });
        }
        Ok(NormalizedWord(codes.into_boxed_slice()))
    }

    /// Case-folds ASCII letters and maps them to letter codes.
    ///
    /// Anything outside `A-Z`/`a-z` is rejected with the first offending
    /// character and its zero-based character position.
    pub fn normalize(raw: &str) -> Result<Self, WordError> {
        if raw.is_empty() {
            return Err(WordError::Empty);
        }
        let mut codes = Vec::with_capacity(raw.len());
        for (position, ch) in raw.chars().enumerate() {
            if !ch.is_ascii_alphabetic() {
                return Err(WordError::NonLetter { ch, position });
            }
            codes.push(ch.to_ascii_lowercase() as u8 - b'a');
        }
        if codes.len() > MAX_WORD_LEN {
            return Err(WordError::TooLong { len: codes.len() });
        }
        Ok(NormalizedWord(codes.into_boxed_slice()))
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Whether `prefix` is a (not necessarily proper) prefix of this word.
    pub fn starts_with(&self, prefix: &NormalizedWord) -> bool {
        self.0.starts_with(&prefix.0)
    }
}

impl FromStr for NormalizedWord {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NormalizedWord::normalize(s)
    }
}

impl fmt::Display for NormalizedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &c in self.0.iter() {
            fmt::Write::write_char(f, (b'a' + c) as char)?;
        }
        Ok(())
    }
}

impl fmt::Debug for NormalizedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NormalizedWord({self})")
    }
}
