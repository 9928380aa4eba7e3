//! MatrixMarket coordinate files.
//!
//! Systems are written as
//!
//! ```text
//! %%MatrixMarket matrix coordinate integer general
//! % circhad system
//! % n 4
//! % coset even
//! % convention antipodal-half-range/v1
//! 16 16 48
//! 1 4 1
//! ...
//! ```
//!
//! Row `i` (1-based) is the `i`-th row of the system in `(γ, d)` order and
//! column `c` is the unknown `M(c - 1)`.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use circhad_core::linalg::{RowSource, SparseMatrix, SparseVector};
use circhad_core::rational::{parse_fraction, to_fraction_string};
use circhad_core::system::{Coset, MtilingSystem};
use circhad_core::{Rational, CONVENTION_TAG};
use rayon::prelude::*;

use crate::error::{CliError, CliResult};

pub const HEADER: &str = "%%MatrixMarket matrix coordinate integer general";

/// γ positions formatted per parallel task.
const BLOCK: u64 = 1 << 10;

/// Number of stored entries; rows never have colliding keys, and the row
/// length only depends on `d`.
pub fn system_nnz(system: &MtilingSystem) -> u64 {
    let per_gamma: u64 = (1..=system.shifts()).map(|d| system.row(0, d).len() as u64).sum();
    per_gamma * system.coset().size(system.n())
}

/// Writes the system; rows are formatted on `pool` and merged in row order.
pub fn write_system(
    system: &MtilingSystem,
    extra: &[(&str, String)],
    pool: &rayon::ThreadPool,
    out: &mut dyn Write,
) -> CliResult<()> {
    writeln!(out, "{HEADER}")?;
    writeln!(out, "% circhad system")?;
    writeln!(out, "% n {}", system.n())?;
    writeln!(out, "% coset {}", system.coset())?;
    writeln!(out, "% convention {CONVENTION_TAG}")?;
    for (k, v) in extra {
        writeln!(out, "% {k} {v}")?;
    }
    writeln!(out, "{} {} {}", system.row_count(), system.column_count(), system_nnz(system))?;

    let positions = system.coset().size(system.n());
    let blocks: Vec<u64> = (0..positions.div_ceil(BLOCK)).collect();
    let batch = pool.current_num_threads().max(1) * 4;
    for chunk in blocks.chunks(batch) {
        let texts: Vec<String> = pool.install(|| {
            chunk
            .par_iter()
            .map(|&b| {
                use std::fmt::Write as _;
                let range = b * BLOCK..((b + 1) * BLOCK).min(positions);
                let mut s = String::new();
                let mut index = system.row_index(system.coset().member(range.start), 1);
                for row in system.rows_in(range) {
                    index += 1;
                    for &(k, c) in row.raw_terms() {
                        let _ = writeln!(s, "{index} {} {c}", k + 1);
                    }
                }
                s
            })
            .collect()
        });
        for t in texts {
            out.write_all(t.as_bytes())?;
        }
    }
    Ok(())
}

/// Writes an arbitrary matrix with values as integers where possible.
pub fn write_matrix(m: &SparseMatrix, comments: &[(&str, String)], out: &mut dyn Write) -> CliResult<()> {
    let integral = m.iter_rows().flatten().all(|(_, v)| v.is_integer());
    if integral {
        writeln!(out, "{HEADER}")?;
    } else {
        writeln!(out, "%%MatrixMarket matrix coordinate rational general")?;
    }
    for (k, v) in comments {
        writeln!(out, "% {k} {v}")?;
    }
    writeln!(out, "{} {} {}", m.nrows(), m.ncols(), m.nnz())?;
    for (i, row) in m.iter_rows().enumerate() {
        for (c, v) in row {
            writeln!(out, "{} {} {}", i + 1, c + 1, to_fraction_string(v).trim_end_matches("/1"))?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct MtxFile {
    /// `% key value` comment lines, first occurrence wins.
    pub meta: BTreeMap<String, String>,
    pub matrix: SparseMatrix,
}

impl MtxFile {
    pub fn n(&self) -> Option<usize> {
        self.meta.get("n").and_then(|v| v.parse().ok())
    }

    pub fn coset(&self) -> Option<Coset> {
        self.meta.get("coset").and_then(|v| v.parse().ok())
    }

    /// Columns that carry at least one entry bound the rank.
    pub fn used_columns(&self) -> usize {
        let mut seen = vec![false; self.matrix.ncols()];
        for row in self.matrix.iter_rows() {
            for (c, _) in row {
                seen[*c] = true;
            }
        }
        seen.into_iter().filter(|&b| b).count()
    }
}

fn bad(line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Data(format!("line {line}: {msg}"))
}

/// Reads `coordinate` files with `integer`, `real` (integral or `p/q`
/// values), `rational` or `pattern` fields and `general` symmetry.
/// Duplicate entries are summed.
pub fn read_mtx(input: impl BufRead) -> CliResult<MtxFile> {
    let mut lines = input.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| CliError::Data("empty file".into()))?;
    let header = header?;
    let fields: Vec<String> = header.split_whitespace().map(|s| s.to_ascii_lowercase()).collect();
    if fields.len() != 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" || fields[2] != "coordinate" {
        return Err(bad(1, format!("unsupported header {header:?}")));
    }
    let pattern = match fields[3].as_str() {
        "integer" | "real" | "rational" => false,
        "pattern" => true,
        other => return Err(bad(1, format!("unsupported field {other:?}"))),
    };
    if fields[4] != "general" {
        return Err(bad(1, format!("unsupported symmetry {:?}", fields[4])));
    }

    let mut meta = BTreeMap::new();
    let mut size: Option<(usize, usize, usize)> = None;
    let mut rows: Vec<Vec<(usize, Rational)>> = Vec::new();
    let mut ncols = 0;
    let mut seen = 0usize;
    for (i, line) in lines {
        let line = line?;
        let lineno = i + 1;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(c) = t.strip_prefix('%') {
            if size.is_none() {
                let mut kv = c.trim().splitn(2, char::is_whitespace);
                if let (Some(k), Some(v)) = (kv.next(), kv.next()) {
                    meta.entry(k.to_string()).or_insert_with(|| v.trim().to_string());
                }
            }
            continue;
        }
        let parts: Vec<&str> = t.split_whitespace().collect();
        match size {
            None => {
                if parts.len() != 3 {
                    return Err(bad(lineno, "size line needs rows, columns and entries"));
                }
                let p = |s: &str| s.parse::<usize>().map_err(|e| bad(lineno, e));
                let dims = (p(parts[0])?, p(parts[1])?, p(parts[2])?);
                rows = vec![Vec::new(); dims.0];
                ncols = dims.1;
                size = Some(dims);
            }
            Some((nr, nc, _)) => {
                let want = if pattern { 2 } else { 3 };
                if parts.len() != want {
                    return Err(bad(lineno, format!("expected {want} fields")));
                }
                let r: usize = parts[0].parse().map_err(|e| bad(lineno, e))?;
                let c: usize = parts[1].parse().map_err(|e| bad(lineno, e))?;
                if r == 0 || r > nr || c == 0 || c > nc {
                    return Err(bad(lineno, format!("entry ({r}, {c}) outside {nr}x{nc}")));
                }
                let v = if pattern {
                    Rational::from_integer(1.into())
                } else {
                    parse_fraction(parts[2]).map_err(|e| bad(lineno, e))?
                };
                rows[r - 1].push((c - 1, v));
                seen += 1;
            }
        }
    }
    let (_, _, nnz) = size.ok_or_else(|| CliError::Data("missing size line".into()))?;
    if seen != nnz {
        return Err(CliError::Data(format!("size line announces {nnz} entries, found {seen}")));
    }
    if let Some(tag) = meta.get("convention") {
        if tag != CONVENTION_TAG {
            return Err(circhad_core::Error::ConventionMismatch(tag.clone()).into());
        }
    }
    let mut matrix = SparseMatrix::new(ncols);
    for r in rows {
        matrix.push_row(r)?;
    }
    Ok(MtxFile { meta, matrix })
}

/// A file matrix whose rank bound is its number of used columns.
pub struct FileRows<'a> {
    file: &'a MtxFile,
    bound: usize,
}

impl<'a> FileRows<'a> {
    pub fn new(file: &'a MtxFile) -> Self {
        FileRows { bound: file.used_columns().min(file.matrix.nrows()), file }
    }
}

impl RowSource for FileRows<'_> {
    fn ncols(&self) -> usize {
        self.file.matrix.ncols()
    }

    fn nrows(&self) -> usize {
        self.file.matrix.nrows()
    }

    fn rows(&self) -> Box<dyn Iterator<Item = SparseVector> + '_> {
        Box::new(self.file.matrix.iter_rows().cloned())
    }

    fn rank_bound(&self) -> usize {
        self.bound
    }
}
