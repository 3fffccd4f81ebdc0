//! Canonical binary image of a [`WordIndex`].
//!
//! ```text
//! offset  size  field
//! 0       4     magic "WEX1"
//! 4       1     version (1)
//! 5       8     word count, u64 little-endian
//! 13      8*T   tables, depth-first preorder from the root
//! ```
//!
//! A table is two u32 little-endian bitmaps, continuation then existence,
//! bit `i` for letter `i`; bits 26..32 are zero. The tables of a node's
//! children follow it immediately, one per set continuation bit, in
//! ascending letter order. Each logical index has exactly one image.

use std::io::{self, Read, Write};

use thiserror::Error;

use crate::trie::{LetterTable, WordIndex, LETTER_MASK};
use crate::word::MAX_WORD_LEN;

pub const MAGIC: [u8; 4] = *b"WEX1";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 13;
pub const TABLE_LEN: usize = 8;

#[derive(Debug, Error)]
pub enum ImageError {
    #[error("index must be frozen before it is serialized")]
    Unfrozen,
    #[error("bad magic {0:?}, expected \"WEX1\"")]
    BadMagic([u8; 4]),
    #[error("unsupported image version {0}")]
    UnsupportedVersion(u8),
    #[error("image truncated")]
    Truncated,
    #[error("table at byte {offset} has bits set above letter 'z'")]
    MalformedBitmap { offset: u64 },
    #[error("table at byte {offset} is empty but was linked from its parent")]
    DeadTable { offset: u64 },
    #[error("table at byte {offset} continues past the {MAX_WORD_LEN}-letter limit")]
    TooDeep { offset: u64 },
    #[error("header declares {header} words, tables hold {found}")]
    WordCountMismatch { header: u64, found: u64 },
    #[error("unexpected bytes after the last table")]
    TrailingBytes,
    #[error(transparent)]
    Io(io::Error),
}

impl From<io::Error> for ImageError {
    fn from(err: io::Error) -> Self {
        if err.kind() == io::ErrorKind::UnexpectedEof {
            ImageError::Truncated
        } else {
            ImageError::Io(err)
        }
    }
}

/// Writes the image of a frozen index and returns the number of bytes written.
pub fn serialize(index: &WordIndex, mut sink: impl Write) -> Result<u64, ImageError> {
    if !index.is_frozen() {
        return Err(ImageError::Unfrozen);
    }
    let mut header = [0u8; HEADER_LEN];
    header[..4].copy_from_slice(&MAGIC);
    header[4] = VERSION;
    header[5..].copy_from_slice(&(index.word_count() as u64).to_le_bytes());
    sink.write_all(&header)?;

    let mut written = HEADER_LEN as u64;
    let mut result = Ok(());
    index.for_each_table(|_, table| {
        if result.is_err() {
            return;
        }
        let mut record = [0u8; TABLE_LEN];
        record[..4].copy_from_slice(&table.continuation_bits().to_le_bytes());
        record[4..].copy_from_slice(&table.existence_bits().to_le_bytes());
        result = sink.write_all(&record);
        written += TABLE_LEN as u64;
    });
    result?;
    sink.flush()?;
    Ok(written)
}

pub fn to_bytes(index: &WordIndex) -> Result<Vec<u8>, ImageError> {
    let mut bytes = Vec::with_capacity(HEADER_LEN + TABLE_LEN * index.table_count());
    serialize(index, &mut bytes)?;
    Ok(bytes)
}

/// Reads an image back into a frozen index. The whole source must be
/// consumed; trailing bytes are an error.
pub fn deserialize(source: impl Read) -> Result<WordIndex, ImageError> {
    let mut reader = Counting {
        inner: source,
        offset: 0,
    };
    let mut header = [0u8; HEADER_LEN];
    reader.read_exact(&mut header)?;
    let magic: [u8; 4] = header[..4].try_into().expect("4 bytes");
    if magic != MAGIC {
        return Err(ImageError::BadMagic(magic));
    }
    if header[4] != VERSION {
        return Err(ImageError::UnsupportedVersion(header[4]));
    }
    let declared = u64::from_le_bytes(header[5..].try_into().expect("8 bytes"));

    let mut found = 0u64;
    let root = read_table(&mut reader, 0, &mut found)?;
    if found != declared {
        return Err(ImageError::WordCountMismatch {
            header: declared,
            found,
        });
    }
    let mut probe = [0u8; 1];
    loop {
        match reader.inner.read(&mut probe) {
            Ok(0) => break,
            Ok(_) => return Err(ImageError::TrailingBytes),
            Err(err) if err.kind() == io::ErrorKind::Interrupted => continue,
            Err(err) => return Err(err.into()),
        }
    }
    Ok(WordIndex::from_root(root, declared as usize))
}

pub fn from_bytes(bytes: &[u8]) -> Result<WordIndex, ImageError> {
    deserialize(bytes)
}

fn read_table<R: Read>(
    reader: &mut Counting<R>,
    depth: usize,
    words: &mut u64,
) -> Result<LetterTable, ImageError> {
    let offset = reader.offset;
    let mut record = [0u8; TABLE_LEN];
    reader.read_exact(&mut record)?;
    let continuation = u32::from_le_bytes(record[..4].try_into().expect("4 bytes"));
    let existence = u32::from_le_bytes(record[4..].try_into().expect("4 bytes"));

    if (continuation | existence) & !LETTER_MASK != 0 {
        return Err(ImageError::MalformedBitmap { offset });
    }
    if depth > 0 && continuation | existence == 0 {
        return Err(ImageError::DeadTable { offset });
    }
    // A child at depth d + 1 only makes sense for words of length d + 2.
    if continuation != 0 && depth + 2 > MAX_WORD_LEN {
        return Err(ImageError::TooDeep { offset });
    }
    *words += u64::from(existence.count_ones());

    let mut table = LetterTable::with_bits(continuation, existence);
    for letter in 0..26u8 {
        if continuation & (1 << letter) != 0 {
            let child = read_table(reader, depth + 1, words)?;
            table.set_child(letter, child);
        }
    }
    Ok(table)
}

struct Counting<R> {
    inner: R,
    offset: u64,
}

impl<R: Read> Read for Counting<R> {
    fn read(&mut self, buf: &mut [u8]) -> io::Result<usize> {
        let n = self.inner.read(buf)?;
        self.offset += n as u64;
        Ok(n)
    }
}
