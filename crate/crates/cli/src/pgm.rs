//! Binary 8-bit PGM (P5) frames and numbered frame directories.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use dsnn::LuminanceFrame;

use crate::error::{io_err, CliError, Result};

/// Decoded 8-bit grayscale image, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gray8 {
    pub rows: usize,
    pub cols: usize,
    pub pixels: Vec<u8>,
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn skip_space(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> std::result::Result<u32, String> {
        self.skip_space();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| format!("expected {what}"))
    }
}

/// Parses a P5 image with maxval 255. `path` only labels errors.
pub fn decode(bytes: &[u8], path: &Path) -> Result<Gray8> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        let found = String::from_utf8_lossy(&bytes[..bytes.len().min(2)]).into_owned();
        return Err(CliError::BadMagic {
            path: path.to_path_buf(),
            found,
        });
    }
    let bad = |reason: String| CliError::BadHeader {
        path: path.to_path_buf(),
        reason,
    };
    let mut h = Header { bytes, pos: 2 };
    let cols = h.number("width").map_err(bad)? as usize;
    let rows = h.number("height").map_err(bad)? as usize;
    let maxval = h.number("maxval").map_err(bad)?;
    if cols == 0 || rows == 0 {
        return Err(bad(format!("empty image {cols}x{rows}")));
    }
    if maxval != 255 {
        return Err(CliError::BadMaxval {
            path: path.to_path_buf(),
            maxval,
        });
    }
    if !bytes.get(h.pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(bad("missing separator after maxval".into()));
    }
    let data = &bytes[h.pos + 1..];
    let expected = rows * cols;
    if data.len() < expected {
        return Err(CliError::Truncated {
            path: path.to_path_buf(),
            expected,
            found: data.len(),
        });
    }
    Ok(Gray8 {
        rows,
        cols,
        pixels: data[..expected].to_vec(),
    })
}

pub fn encode(rows: usize, cols: usize, pixels: &[u8]) -> Vec<u8> {
    let mut out = format!("P5\n{cols} {rows}\n255\n").into_bytes();
    out.extend_from_slice(pixels);
    out
}

pub fn write_frame(path: &Path, frame: &LuminanceFrame) -> Result<()> {
    let (rows, cols) = frame.dims();
    let mut f = fs::File::create(path).map_err(io_err(path))?;
    f.write_all(&encode(rows, cols, &frame.to_u8()))
        .map_err(io_err(path))
}

/// Last run of decimal digits in the file stem, e.g. `frame_0042` → 42.
pub fn frame_index(path: &Path) -> Option<u64> {
    let stem = path.file_stem()?.to_str()?;
    let end = stem.rfind(|c: char| c.is_ascii_digit())? + 1;
    let start = stem[..end]
        .rfind(|c: char| !c.is_ascii_digit())
        .map_or(0, |i| i + 1);
    stem[start..end].parse().ok()
}

/// A directory of numbered `.pgm` files, validated for a gap-free index run.
#[derive(Debug, Clone)]
pub struct PgmSequence {
    entries: Vec<(u64, PathBuf)>,
}

impl PgmSequence {
    pub fn open(dir: &Path) -> Result<Self> {
        let mut entries = Vec::new();
        for entry in fs::read_dir(dir).map_err(io_err(dir))? {
            let path = entry.map_err(io_err(dir))?.path();
            let is_pgm = path
                .extension()
                .and_then(|e| e.to_str())
                .is_some_and(|e| e.eq_ignore_ascii_case("pgm"));
            if !is_pgm {
                continue;
            }
            let index =
                frame_index(&path).ok_or_else(|| CliError::NoIndex { path: path.clone() })?;
            entries.push((index, path));
        }
        if entries.is_empty() {
            return Err(CliError::EmptySequence);
        }
        entries.sort();
        for pair in entries.windows(2) {
            let (a, b) = (pair[0].0, pair[1].0);
            if a == b {
                return Err(CliError::DuplicateIndex(a));
            }
            if b != a + 1 {
                return Err(CliError::MissingIndex { missing: a + 1 });
            }
        }
        Ok(Self { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Reads frames lazily in index order; every frame must match the first
    /// one's dimensions.
    pub fn frames(&self) -> impl Iterator<Item = Result<LuminanceFrame>> + '_ {
        let mut dims: Option<(usize, usize)> = None;
        self.entries.iter().map(move |(index, path)| {
            let bytes = fs::read(path).map_err(io_err(path))?;
            let img = decode(&bytes, path)?;
            match dims {
                None => dims = Some((img.rows, img.cols)),
                Some((rows, cols)) if (rows, cols) != (img.rows, img.cols) => {
                    return Err(CliError::InconsistentDims {
                        frame: *index,
                        rows,
                        cols,
                        found_rows: img.rows,
                        found_cols: img.cols,
                    })
                }
                Some(_) => {}
            }
            Ok(LuminanceFrame::from_u8(
                *index,
                img.rows,
                img.cols,
                &img.pixels,
            ))
        })
    }

    /// Dimensions of the first frame.
    pub fn dims(&self) -> Result<(usize, usize)> {
        let path = &self.entries[0].1;
        let bytes = fs::read(path).map_err(io_err(path))?;
        let img = decode(&bytes, path)?;
        Ok((img.rows, img.cols))
    }
}
