//! Serialization of series.
//!
//! Two formats:
//!
//! - **F2S1 binary**: 4-byte magic `F2S1`, the precision as an unsigned
//!   64-bit little-endian integer, then `ceil(N/64)` packed words, each
//!   little-endian, with bit `i` of the stream the coefficient of `q^i`
//!   and all padding bits zero.
//! - **Text**: one decimal exponent per line, strictly increasing;
//!   `#`-prefixed comment lines and blank lines are ignored on input and
//!   never produced on output.

use std::io::{self, BufRead, Read, Write};

use thiserror::Error;

use crate::series::{words_for, BitSeries, IndexSet};

pub const F2S1_MAGIC: [u8; 4] = *b"F2S1";

/// Refuse length headers past this many coefficients; nothing legitimate
/// comes close and a corrupt header must not drive the allocator.
const MAX_PRECISION: u64 = 1 << 40;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("bad magic {found:02x?}, expected \"F2S1\"")]
    BadMagic { found: [u8; 4] },
    #[error("header declares precision 0")]
    ZeroPrecision,
    #[error("header declares implausible precision {precision}")]
    ImplausiblePrecision { precision: u64 },
    #[error("padding bits above the precision are not zero")]
    NonzeroPadding,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: exponents must be strictly increasing")]
    NotStrictlyIncreasing { line: usize },
}

/// Writes the F2S1 binary encoding of `series`.
pub fn write_f2s1<W: Write>(series: &BitSeries, out: &mut W) -> io::Result<()> {
    out.write_all(&F2S1_MAGIC)?;
    out.write_all(&(series.precision() as u64).to_le_bytes())?;
    for &word in series.words() {
        out.write_all(&word.to_le_bytes())?;
    }
    Ok(())
}

/// Reads one F2S1-encoded series, validating magic, precision, and
/// canonical padding.
pub fn read_f2s1<R: Read>(input: &mut R) -> Result<BitSeries, FormatError> {
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic)?;
    if magic != F2S1_MAGIC {
        return Err(FormatError::BadMagic { found: magic });
    }
    let mut header = [0u8; 8];
    input.read_exact(&mut header)?;
    let precision = u64::from_le_bytes(header);
    if precision == 0 {
        return Err(FormatError::ZeroPrecision);
    }
    if precision > MAX_PRECISION {
        return Err(FormatError::ImplausiblePrecision { precision });
    }
    let n = precision as usize;
    let mut words = vec![0u64; words_for(n)];
    let mut buf = [0u8; 8];
    for word in words.iter_mut() {
        input.read_exact(&mut buf)?;
        *word = u64::from_le_bytes(buf);
    }
    let r = n % 64;
    if r != 0 && words.last().is_some_and(|&w| w >> r != 0) {
        return Err(FormatError::NonzeroPadding);
    }
    Ok(BitSeries::from_words(words, n).expect("precision checked nonzero"))
}

/// Writes the set-bit exponents of `series`, one per line.
pub fn write_indices<W: Write>(series: &BitSeries, out: &mut W) -> io::Result<()> {
    for i in series.iter_ones() {
        writeln!(out, "{i}")?;
    }
    Ok(())
}

/// Parses an exponent-per-line listing into an [`IndexSet`].
pub fn read_indices<R: BufRead>(input: R) -> Result<IndexSet, FormatError> {
    let mut exponents: Vec<u64> = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let value: u64 = trimmed.parse().map_err(|e| FormatError::Parse {
            line: line_no,
            message: format!("expected a decimal exponent, got {trimmed:?} ({e})"),
        })?;
        if exponents.last().is_some_and(|&prev| prev >= value) {
            return Err(FormatError::NotStrictlyIncreasing { line: line_no });
        }
        exponents.push(value);
    }
    Ok(IndexSet::new(exponents).expect("monotonicity enforced line by line"))
}
