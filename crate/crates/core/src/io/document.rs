//! The canonical CSR text document: one `key values...` line per field,
//! values rendered shortest-round-trip so reload is bit-exact and
//! serialization of a loaded document is byte-identical.
//!
//! ```text
//! %%csr v1
//! rows 2
//! cols 3
//! row_ptr 0 1 2
//! col_ind 0 2
//! vals 1.5 -2
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use crate::csr::CsrMatrix;
use crate::scalars::Scalar;

const TAG: &str = "%%csr v1";

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct CsrDocError {
    pub line: usize,
    pub msg: String,
}

fn doc_err(line: usize, msg: impl Into<String>) -> CsrDocError {
    CsrDocError {
        line,
        msg: msg.into(),
    }
}

/// Render a CSR matrix as its canonical document.
pub fn write_csr_document(csr: &CsrMatrix) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{TAG}");
    let _ = writeln!(out, "rows {}", csr.rows());
    let _ = writeln!(out, "cols {}", csr.cols);
    let _ = writeln!(out, "row_ptr{}", join(csr.row_ptr.iter()));
    let _ = writeln!(out, "col_ind{}", join(csr.col_ind.iter()));
    let _ = writeln!(out, "vals{}", join(csr.vals.iter().map(|v| &v.0)));
    out
}

fn join<T: std::fmt::Display>(items: impl Iterator<Item = T>) -> String {
    let mut s = String::new();
    for item in items {
        let _ = write!(s, " {item}");
    }
    s
}

/// Parse a CSR document. The field lines must appear in canonical order;
/// the declared row count must match the row-pointer length and the value
/// and column lists must have equal lengths.
pub fn parse_csr_document(text: &str) -> Result<CsrMatrix, CsrDocError> {
    let mut lines = text.lines().enumerate();
    let mut next_line = |key: &'static str| -> Result<(usize, String), CsrDocError> {
        let (idx, line) = lines
            .next()
            .ok_or_else(|| doc_err(0, format!("missing '{key}' line")))?;
        let no = idx + 1;
        match line.strip_prefix(key) {
            Some(rest)
                if rest.trim().is_empty() || rest.starts_with(|c: char| c.is_whitespace()) =>
            {
                Ok((no, rest.trim().to_string()))
            }
            _ => Err(doc_err(
                no,
                format!("expected '{key}' line, found '{line}'"),
            )),
        }
    };

    let (tag_no, rest) = next_line("%%csr")?;
    if rest != "v1" {
        return Err(doc_err(tag_no, format!("unknown format version '{rest}'")));
    }
    let (rows_no, rows_s) = next_line("rows")?;
    let rows: i64 = rows_s
        .parse()
        .map_err(|_| doc_err(rows_no, format!("invalid row count '{rows_s}'")))?;
    let (cols_no, cols_s) = next_line("cols")?;
    let cols: i64 = cols_s
        .parse()
        .map_err(|_| doc_err(cols_no, format!("invalid column count '{cols_s}'")))?;

    let parse_ints = |no: usize, s: &str| -> Result<Vec<i64>, CsrDocError> {
        s.split_whitespace()
            .map(|tok| {
                tok.parse()
                    .map_err(|_| doc_err(no, format!("invalid integer '{tok}'")))
            })
            .collect()
    };
    let (rp_no, rp_s) = next_line("row_ptr")?;
    let row_ptr = parse_ints(rp_no, &rp_s)?;
    let (ci_no, ci_s) = next_line("col_ind")?;
    let col_ind = parse_ints(ci_no, &ci_s)?;
    let (vals_no, vals_s) = next_line("vals")?;
    let vals: Vec<Scalar> = vals_s
        .split_whitespace()
        .map(|tok| {
            tok.parse::<f64>()
                .map(Scalar)
                .map_err(|_| doc_err(vals_no, format!("invalid value '{tok}'")))
        })
        .collect::<Result<_, _>>()?;

    if row_ptr.len() as i64 - 1 != rows {
        return Err(doc_err(
            rp_no,
            format!(
                "row_ptr has {} entries, but {rows} rows are declared",
                row_ptr.len()
            ),
        ));
    }
    if vals.len() != col_ind.len() {
        return Err(doc_err(
            vals_no,
            format!("{} values but {} column indices", vals.len(), col_ind.len()),
        ));
    }
    for (idx, line) in lines {
        if !line.trim().is_empty() {
            return Err(doc_err(
                idx + 1,
                format!("unexpected trailing line '{line}'"),
            ));
        }
    }
    Ok(CsrMatrix {
        cols,
        vals,
        col_ind,
        row_ptr,
    })
}
