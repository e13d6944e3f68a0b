//! File formats: PGM images (P2 and P5, maxval up to 65535) and ASCII OFF
//! triangle meshes with per-vertex scalars.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{CliError, Result};

/// A parsed grayscale image; values are row-major, one per pixel.
#[derive(Clone, Debug, PartialEq)]
pub struct PgmImage {
    pub rows: usize,
    pub cols: usize,
    pub maxval: u32,
    pub values: Vec<f64>,
}

pub fn parse_pgm(bytes: &[u8]) -> Result<PgmImage> {
    let mut cursor = 0usize;
    let mut header = Vec::new();
    while header.len() < 4 {
        if cursor >= bytes.len() {
            return Err(CliError::Parse("truncated PGM header".into()));
        }
        match bytes[cursor] {
            b'#' => {
                while cursor < bytes.len() && bytes[cursor] != b'\n' {
                    cursor += 1;
                }
            }
            c if c.is_ascii_whitespace() => cursor += 1,
            _ => {
                let start = cursor;
                while cursor < bytes.len() && !bytes[cursor].is_ascii_whitespace() {
                    cursor += 1;
                }
                header.push(
                    std::str::from_utf8(&bytes[start..cursor])
                        .map_err(|_| CliError::Parse("non-ASCII PGM header".into()))?
                        .to_owned(),
                );
            }
        }
    }
    let magic = header[0].as_str();
    let cols: usize = header[1]
        .parse()
        .map_err(|_| CliError::Parse("bad PGM width".into()))?;
    let rows: usize = header[2]
        .parse()
        .map_err(|_| CliError::Parse("bad PGM height".into()))?;
    let maxval: u32 = header[3]
        .parse()
        .map_err(|_| CliError::Parse("bad PGM maxval".into()))?;
    if maxval == 0 || maxval > 65535 {
        return Err(CliError::Parse(format!("PGM maxval {maxval} out of range")));
    }
    if rows == 0 || cols == 0 {
        return Err(CliError::Parse("empty PGM".into()));
    }
    let count = rows * cols;
    let values = match magic {
        "P2" => {
            let text = std::str::from_utf8(&bytes[cursor..])
                .map_err(|_| CliError::Parse("non-ASCII P2 body".into()))?;
            let mut values = Vec::with_capacity(count);
            for token in text.split_ascii_whitespace() {
                if token.starts_with('#') {
                    continue;
                }
                let v: u32 = token
                    .parse()
                    .map_err(|_| CliError::Parse(format!("bad P2 sample {token:?}")))?;
                if v > maxval {
                    return Err(CliError::Parse(format!("sample {v} above maxval {maxval}")));
                }
                values.push(v as f64);
            }
            values
        }
        "P5" => {
            cursor += 1; // single whitespace byte after maxval
            let width = if maxval < 256 { 1 } else { 2 };
            let body = &bytes[cursor..];
            if body.len() < count * width {
                return Err(CliError::Parse("truncated P5 body".into()));
            }
            let mut values = Vec::with_capacity(count);
            for k in 0..count {
                let v = if width == 1 {
                    body[k] as u32
                } else {
                    u16::from_be_bytes([body[2 * k], body[2 * k + 1]]) as u32
                };
                if v > maxval {
                    return Err(CliError::Parse(format!("sample {v} above maxval {maxval}")));
                }
                values.push(v as f64);
            }
            values
        }
        other => {
            return Err(CliError::Parse(format!("unsupported PGM magic {other:?}")));
        }
    };
    if values.len() != count {
        return Err(CliError::Parse(format!(
            "PGM body has {} samples, expected {count}",
            values.len()
        )));
    }
    Ok(PgmImage {
        rows,
        cols,
        maxval,
        values,
    })
}

pub fn read_pgm(path: &Path) -> Result<PgmImage> {
    let bytes = std::fs::read(path)?;
    parse_pgm(&bytes)
}

/// Quantization chosen when a field goes back out as integers.
#[derive(Clone, Copy, Debug)]
pub struct PgmScale {
    pub offset: f64,
    pub scale: f64,
    pub max_error: f64,
}

/// Encodes real values as a binary P5 image. Values that are already
/// integers in range are written as-is; anything else is rescaled to the
/// full range, with the mapping reported for the sidecar.
pub fn encode_pgm(rows: usize, cols: usize, maxval: u32, values: &[f64]) -> (Vec<u8>, PgmScale) {
    assert_eq!(values.len(), rows * cols);
    let identity = values
        .iter()
        .all(|v| v.fract() == 0.0 && *v >= 0.0 && *v <= maxval as f64);
    let (offset, scale) = if identity {
        (0.0, 1.0)
    } else {
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi > lo {
            (lo, (hi - lo) / maxval as f64)
        } else {
            (lo, 1.0)
        }
    };
    let mut body = Vec::with_capacity(values.len() * 2);
    let mut max_error = 0.0f64;
    for v in values {
        let q = ((v - offset) / scale).round().clamp(0.0, maxval as f64);
        max_error = max_error.max((q * scale + offset - v).abs());
        if maxval < 256 {
            body.push(q as u8);
        } else {
            body.extend_from_slice(&(q as u16).to_be_bytes());
        }
    }
    let mut out = format!("P5\n{cols} {rows}\n{maxval}\n").into_bytes();
    out.extend_from_slice(&body);
    (
        out,
        PgmScale {
            offset,
            scale,
            max_error,
        },
    )
}

/// A parsed OFF mesh: triangles over indexed vertices, plus the scalar
/// per vertex (fourth coordinate column, unless a separate values file is
/// supplied).
#[derive(Clone, Debug)]
pub struct OffMesh {
    pub vertex_count: usize,
    pub triangles: Vec<[usize; 3]>,
    pub scalars: Option<Vec<f64>>,
}

pub fn parse_off(text: &str) -> Result<OffMesh> {
    let mut tokens = text
        .lines()
        .map(|line| line.split('#').next().unwrap_or(""))
        .flat_map(|line| line.split_ascii_whitespace())
        .peekable();
    match tokens.next() {
        Some("OFF") => {}
        other => return Err(CliError::Parse(format!("expected OFF magic, got {other:?}"))),
    }
    let mut take = |what: &str| -> Result<usize> {
        tokens
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| CliError::Parse(format!("bad OFF {what}")))
    };
    let vertex_count = take("vertex count")?;
    let face_count = take("face count")?;
    let _edge_count = take("edge count")?;

    // Vertices come as lines of 3 or 4 floats; re-split by line to tell
    // the two layouts apart.
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(vertex_count);
    let mut rest: Vec<&str> = tokens.collect();
    // Tokens were flattened; recover per-vertex arity by counting floats:
    // a vertex line has 3 or 4 fields and faces start with the literal 3.
    // Parse vertices by consuming floats greedily: decide arity from the
    // total token count.
    let face_tokens = face_count * 4;
    let vertex_tokens = rest.len().checked_sub(face_tokens).ok_or_else(|| {
        CliError::Parse("OFF file shorter than its face table".into())
    })?;
    let arity = if vertex_count > 0 && vertex_tokens == vertex_count * 4 {
        4
    } else if vertex_tokens == vertex_count * 3 {
        3
    } else {
        return Err(CliError::Parse(format!(
            "OFF vertex table has {vertex_tokens} fields for {vertex_count} vertices"
        )));
    };
    let faces_start = vertex_count * arity;
    for chunk in rest[..faces_start].chunks(arity) {
        let mut row = Vec::with_capacity(arity);
        for t in chunk {
            row.push(
                t.parse::<f64>()
                    .map_err(|_| CliError::Parse(format!("bad OFF coordinate {t:?}")))?,
            );
        }
        rows.push(row);
    }
    let mut triangles = Vec::with_capacity(face_count);
    rest.drain(..faces_start);
    for chunk in rest.chunks(4) {
        if chunk.len() != 4 {
            return Err(CliError::Parse("truncated OFF face table".into()));
        }
        if chunk[0] != "3" {
            return Err(CliError::Parse(format!(
                "only triangle faces are supported, got arity {}",
                chunk[0]
            )));
        }
        let mut tri = [0usize; 3];
        for (slot, t) in tri.iter_mut().zip(&chunk[1..]) {
            *slot = t
                .parse()
                .map_err(|_| CliError::Parse(format!("bad OFF face index {t:?}")))?;
        }
        triangles.push(tri);
    }
    let scalars = if arity == 4 {
        Some(rows.iter().map(|r| r[3]).collect())
    } else {
        None
    };
    Ok(OffMesh {
        vertex_count,
        triangles,
        scalars,
    })
}

pub fn read_off(path: &Path) -> Result<OffMesh> {
    let text = std::fs::read_to_string(path)?;
    parse_off(&text)
}

/// Newline-delimited scalars, one per vertex.
pub fn read_values(path: &Path, expected: usize) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)?;
    let values: Vec<f64> = text
        .split_ascii_whitespace()
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| CliError::Parse(format!("bad value {t:?}")))
        })
        .collect::<Result<_>>()?;
    if values.len() != expected {
        return Err(CliError::Parse(format!(
            "values file has {} entries, expected {expected}",
            values.len()
        )));
    }
    Ok(values)
}

pub fn format_value(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v}")
    }
}

pub fn diagram_tsv(records: &[plateau::PersistenceRecord]) -> String {
    let mut rows: Vec<(u8, f64, f64)> = records
        .iter()
        .map(|r| (r.homology_dim(), r.birth, r.death))
        .collect();
    rows.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then(a.1.total_cmp(&b.1))
            .then(a.2.total_cmp(&b.2))
    });
    let mut out = String::from("dim\tbirth\tdeath\n");
    for (dim, birth, death) in rows {
        let _ = writeln!(
            out,
            "{dim}\t{}\t{}",
            format_value(birth),
            format_value(death)
        );
    }
    out
}
