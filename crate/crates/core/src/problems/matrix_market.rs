//! MatrixMarket (`.mtx`) reader and writer for real, general or symmetric
//! matrices in coordinate or array layout.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::linalg::{CsrMatrix, LinalgError, Matrix};

/// Dense matrices larger than this many entries are rejected.
const MAX_DENSE_ENTRIES: usize = 1 << 28;

#[derive(Debug, Error)]
pub enum MatrixMarketError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("line {line}: {message}")]
    Header { line: usize, message: String },
    #[error("line {line}: unsupported field `{field}` (only `real` is supported)")]
    UnsupportedField { line: usize, field: String },
    #[error("line {line}: {message}")]
    Size { line: usize, message: String },
    #[error("line {line}: {message}")]
    Entry { line: usize, message: String },
    #[error("expected {expected} entries, found {found}")]
    MissingEntries { expected: usize, found: usize },
    #[error(transparent)]
    Matrix(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmFormat {
    Coordinate,
    Array,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
}

struct Header {
    format: MmFormat,
    symmetry: Symmetry,
}

fn parse_header(line: &str, lineno: usize) -> Result<Header, MatrixMarketError> {
    let header_err = |message: String| MatrixMarketError::Header { line: lineno, message };
    let tokens: Vec<String> = line.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.first().map(String::as_str) != Some("%%matrixmarket") {
        return Err(header_err("expected `%%MatrixMarket` banner".into()));
    }
    if tokens.len() != 5 {
        return Err(header_err(format!(
            "banner needs 4 fields (object format field symmetry), found {}",
            tokens.len() - 1
        )));
    }
    if tokens[1] != "matrix" {
        return Err(header_err(format!("unsupported object `{}`", tokens[1])));
    }
    let format = match tokens[2].as_str() {
        "coordinate" => MmFormat::Coordinate,
        "array" => MmFormat::Array,
        other => return Err(header_err(format!("unknown format `{other}`"))),
    };
    if tokens[3] != "real" {
        return Err(MatrixMarketError::UnsupportedField { line: lineno, field: tokens[3].clone() });
    }
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        other => return Err(header_err(format!("unsupported symmetry `{other}`"))),
    };
    Ok(Header { format, symmetry })
}

fn parse_usize(tok: &str, lineno: usize, what: &str) -> Result<usize, MatrixMarketError> {
    tok.parse().map_err(|_| MatrixMarketError::Size {
        line: lineno,
        message: format!("invalid {what} `{tok}`"),
    })
}

fn parse_value(tok: &str, lineno: usize) -> Result<f64, MatrixMarketError> {
    let v: f64 = tok.parse().map_err(|_| MatrixMarketError::Entry {
        line: lineno,
        message: format!("invalid real value `{tok}`"),
    })?;
    if !v.is_finite() {
        return Err(MatrixMarketError::Entry { line: lineno, message: format!("non-finite value `{tok}`") });
    }
    Ok(v)
}

/// Parses a MatrixMarket stream into a dense matrix, expanding symmetric
/// storage.
pub fn parse_matrix_market<R: BufRead>(reader: R) -> Result<Matrix, MatrixMarketError> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));
    let io_err = |source| MatrixMarketError::Io { path: PathBuf::from("<stream>"), source };

    let (lineno, first) = match lines.next() {
        Some((n, l)) => (n, l.map_err(io_err)?),
        None => return Err(MatrixMarketError::Header { line: 1, message: "empty input".into() }),
    };
    let header = parse_header(&first, lineno)?;

    // Data lines: skip comments and blank lines.
    let mut data = lines.filter_map(|(n, l)| match l {
        Ok(s) => {
            let t = s.trim();
            (!t.is_empty() && !t.starts_with('%')).then(|| Ok((n, t.to_string())))
        }
        Err(e) => Some(Err(e)),
    });

    let (size_line, size) = match data.next() {
        Some(r) => r.map_err(io_err)?,
        None => {
            return Err(MatrixMarketError::Size { line: lineno + 1, message: "missing size line".into() })
        }
    };
    let dims: Vec<&str> = size.split_whitespace().collect();
    let expected_dims = match header.format {
        MmFormat::Coordinate => 3,
        MmFormat::Array => 2,
    };
    if dims.len() != expected_dims {
        return Err(MatrixMarketError::Size {
            line: size_line,
            message: format!("expected {expected_dims} size fields, found {}", dims.len()),
        });
    }
    let rows = parse_usize(dims[0], size_line, "row count")?;
    let cols = parse_usize(dims[1], size_line, "column count")?;
    let total = rows
        .checked_mul(cols)
        .filter(|&t| t <= MAX_DENSE_ENTRIES)
        .ok_or_else(|| MatrixMarketError::Size {
            line: size_line,
            message: format!("dimension overflow: {rows}x{cols} is too large for a dense matrix"),
        })?;
    if rows == 0 || cols == 0 {
        return Err(MatrixMarketError::Size { line: size_line, message: format!("empty shape {rows}x{cols}") });
    }
    if header.symmetry == Symmetry::Symmetric && rows != cols {
        return Err(MatrixMarketError::Size {
            line: size_line,
            message: format!("symmetric matrix must be square, found {rows}x{cols}"),
        });
    }

    match header.format {
        MmFormat::Coordinate => {
            let nnz = parse_usize(dims[2], size_line, "entry count")?;
            let mut triplets = Vec::with_capacity(nnz.min(total));
            let mut stored = 0usize;
            for line in data.by_ref() {
                let (n, s) = line.map_err(io_err)?;
                let toks: Vec<&str> = s.split_whitespace().collect();
                if toks.len() != 3 {
                    return Err(MatrixMarketError::Entry {
                        line: n,
                        message: format!("expected `row col value`, found {} fields", toks.len()),
                    });
                }
                stored += 1;
                if stored > nnz {
                    return Err(MatrixMarketError::Entry {
                        line: n,
                        message: format!("more than the declared {nnz} entries"),
                    });
                }
                let i = parse_usize(toks[0], n, "row index")?;
                let j = parse_usize(toks[1], n, "column index")?;
                if i == 0 || j == 0 || i > rows || j > cols {
                    return Err(MatrixMarketError::Entry {
                        line: n,
                        message: format!("index ({i}, {j}) outside {rows}x{cols} (indices are 1-based)"),
                    });
                }
                let v = parse_value(toks[2], n)?;
                triplets.push((i - 1, j - 1, v));
                if header.symmetry == Symmetry::Symmetric && i != j {
                    triplets.push((j - 1, i - 1, v));
                }
            }
            if stored != nnz {
                return Err(MatrixMarketError::MissingEntries { expected: nnz, found: stored });
            }
            Ok(CsrMatrix::from_triplets(rows, cols, &triplets)?.to_dense())
        }
        MmFormat::Array => {
            let mut dense = vec![0.0; total];
            // Column-major; symmetric storage lists the lower triangle only.
            let positions: Vec<(usize, usize)> = match header.symmetry {
                Symmetry::General => (0..cols).flat_map(|j| (0..rows).map(move |i| (i, j))).collect(),
                Symmetry::Symmetric => (0..cols).flat_map(|j| (j..rows).map(move |i| (i, j))).collect(),
            };
            let mut k = 0;
            for line in data.by_ref() {
                let (n, s) = line.map_err(io_err)?;
                for tok in s.split_whitespace() {
                    let &(i, j) = positions.get(k).ok_or_else(|| MatrixMarketError::Entry {
                        line: n,
                        message: format!("more than the expected {} values", positions.len()),
                    })?;
                    let v = parse_value(tok, n)?;
                    dense[i * cols + j] = v;
                    if header.symmetry == Symmetry::Symmetric {
                        dense[j * cols + i] = v;
                    }
                    k += 1;
                }
            }
            if k != positions.len() {
                return Err(MatrixMarketError::MissingEntries { expected: positions.len(), found: k });
            }
            Ok(Matrix::new(rows, cols, dense)?)
        }
    }
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<Matrix, MatrixMarketError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| MatrixMarketError::Io { path: path.to_path_buf(), source })?;
    parse_matrix_market(BufReader::new(file)).map_err(|e| match e {
        MatrixMarketError::Io { source, .. } => MatrixMarketError::Io { path: path.to_path_buf(), source },
        other => other,
    })
}

/// Writes a general real matrix with 17 significant digits per value.
pub fn write_matrix_market_to<W: Write>(mut w: W, a: &Matrix, format: MmFormat) -> io::Result<()> {
    match format {
        MmFormat::Array => {
            writeln!(w, "%%MatrixMarket matrix array real general")?;
            writeln!(w, "{} {}", a.rows(), a.cols())?;
            for j in 0..a.cols() {
                for i in 0..a.rows() {
                    writeln!(w, "{:.16e}", a[(i, j)])?;
                }
            }
        }
        MmFormat::Coordinate => {
            let entries: Vec<(usize, usize, f64)> = (0..a.rows())
                .flat_map(|i| (0..a.cols()).map(move |j| (i, j)))
                .map(|(i, j)| (i, j, a[(i, j)]))
                .filter(|&(_, _, v)| v != 0.0)
                .collect();
            writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
            writeln!(w, "{} {} {}", a.rows(), a.cols(), entries.len())?;
            for (i, j, v) in entries {
                writeln!(w, "{} {} {:.16e}", i + 1, j + 1, v)?;
            }
        }
    }
    w.flush()
}

pub fn write_matrix_market(path: impl AsRef<Path>, a: &Matrix, format: MmFormat) -> Result<(), MatrixMarketError> {
    let path = path.as_ref();
    let wrap = |source| MatrixMarketError::Io { path: path.to_path_buf(), source };
    let file = File::create(path).map_err(wrap)?;
    write_matrix_market_to(BufWriter::new(file), a, format).map_err(wrap)
}
