//! Matrix files for the command-line tools.
//!
//! Binary layout (all little-endian): a 16-byte header `b"HEIG"`, version
//! `u32`, dimension `n: u32`, kind `u32`, followed by column-major complex
//! entries as `(re: f64, im: f64)` pairs. Kind [`FileKind::Matrix`] carries one
//! `n x n` block; kind [`FileKind::Pencil`] carries `A` then `B`.
//!
//! The text format has one matrix row per line with whitespace- or
//! comma-separated entries written as `re+imj`, `re-imj`, `re` or `imj`.

use std::io::{Read, Write};

use super::dense::{c64, CMat};
use crate::error::{Error, Result};

pub const MAGIC: [u8; 4] = *b"HEIG";
pub const VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u32)]
pub enum FileKind {
    Matrix = 1,
    Pencil = 2,
}

impl FileKind {
    fn from_u32(v: u32) -> Result<Self> {
        match v {
            1 => Ok(Self::Matrix),
            2 => Ok(Self::Pencil),
            other => Err(Error::Format(format!("unknown kind {other}"))),
        }
    }

    fn blocks(self) -> usize {
        match self {
            Self::Matrix => 1,
            Self::Pencil => 2,
        }
    }
}

/// Writes one matrix or a pencil. All blocks must be square and the same size.
pub fn write_heig<W: Write>(mut w: W, blocks: &[&CMat]) -> Result<()> {
    let kind = match blocks.len() {
        1 => FileKind::Matrix,
        2 => FileKind::Pencil,
        k => return Err(Error::InvalidArgument(format!("cannot store {k} blocks"))),
    };
    let n = blocks[0].rows();
    if blocks.iter().any(|m| m.rows() != n || m.cols() != n) {
        return Err(Error::InvalidArgument("blocks must be square and equally sized".into()));
    }
    let n32 = u32::try_from(n).map_err(|_| Error::InvalidArgument("dimension exceeds u32".into()))?;
    let mut header = [0u8; 16];
    header[0..4].copy_from_slice(&MAGIC);
    header[4..8].copy_from_slice(&VERSION.to_le_bytes());
    header[8..12].copy_from_slice(&n32.to_le_bytes());
    header[12..16].copy_from_slice(&(kind as u32).to_le_bytes());
    w.write_all(&header)?;
    let mut buf = Vec::with_capacity(16 * n * n);
    for m in blocks {
        buf.clear();
        for z in m.data() {
            buf.extend_from_slice(&z.re.to_le_bytes());
            buf.extend_from_slice(&z.im.to_le_bytes());
        }
        w.write_all(&buf)?;
    }
    Ok(())
}

/// Reads a file written by [`write_heig`]; returns one or two blocks.
pub fn read_heig<R: Read>(mut r: R) -> Result<(FileKind, Vec<CMat>)> {
    let mut header = [0u8; 16];
    r.read_exact(&mut header)
        .map_err(|_| Error::Format("truncated header".into()))?;
    if header[0..4] != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let word = |k: usize| u32::from_le_bytes(header[4 * k..4 * k + 4].try_into().unwrap());
    let version = word(1);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let n = word(2) as usize;
    if n == 0 {
        return Err(Error::Format("zero dimension".into()));
    }
    let kind = FileKind::from_u32(word(3))?;
    let mut blocks = Vec::with_capacity(kind.blocks());
    let mut buf = vec![0u8; 16 * n * n];
    for _ in 0..kind.blocks() {
        r.read_exact(&mut buf)
            .map_err(|_| Error::Format("truncated payload".into()))?;
        let data = buf
            .chunks_exact(16)
            .map(|c| {
                c64::new(
                    f64::from_le_bytes(c[0..8].try_into().unwrap()),
                    f64::from_le_bytes(c[8..16].try_into().unwrap()),
                )
            })
            .collect();
        blocks.push(CMat::from_col_major(n, n, data));
    }
    let mut extra = [0u8; 1];
    if r.read(&mut extra)? != 0 {
        return Err(Error::Format("trailing bytes after payload".into()));
    }
    Ok((kind, blocks))
}

/// Parses a single `re+imj` style entry.
pub fn parse_complex(s: &str) -> Result<c64> {
    let bad = || Error::Format(format!("cannot parse complex entry `{s}`"));
    let t = s.trim();
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix(['j', 'i']) else {
        return t.parse::<f64>().map(|re| c64::new(re, 0.0)).map_err(|_| bad());
    };
    // Find the sign that separates real and imaginary parts, skipping exponent signs.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "+" | "" => "1",
        "-" => "-1",
        other => other,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.trim_start_matches('+').parse().map_err(|_| bad())?;
    Ok(c64::new(re, im))
}

/// Writes the text format, one row per line. Entries round-trip exactly
/// through [`read_text`].
pub fn write_text<W: Write>(mut w: W, m: &CMat) -> Result<()> {
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| format!("{:e}{:+e}j", m[(i, j)].re, m[(i, j)].im)).collect();
        writeln!(w, "{}", row.join(" "))?;
    }
    Ok(())
}

/// Parses the text format into a square matrix.
pub fn read_text(src: &str) -> Result<CMat> {
    let rows: Vec<Vec<c64>> = src
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(parse_complex)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let n = rows.len();
    if n == 0 {
        return Err(Error::Format("no rows".into()));
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(Error::Format(format!("row {i} has {} entries, expected {n}", r.len())));
    }
    Ok(CMat::from_fn(n, n, |i, j| rows[i][j]))
}
