//! Matrix Market coordinate-format reader and writer.
//!
//! Only `matrix coordinate {real,integer} general` files are accepted.
//! Symmetric and pattern variants are rejected rather than expanded:
//! expansion would silently change the duplicate structure, and duplicate
//! order is semantically meaningful here. File entries are 1-based and
//! mapped to 0-based coordinates at parse time; entry order is preserved
//! exactly, because appearance order pins the duplicate sums.

use thiserror::Error;

use crate::coo::{CooEntry, CooMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MtxError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: unsupported Matrix Market variant '{what}'")]
    Unsupported { line: usize, what: String },
    #[error(
        "line {line}: entry ({row}, {col}) outside the declared {rows} x {cols} bounds \
         (the matrix would not be well-formed)"
    )]
    Bounds {
        line: usize,
        row: i64,
        col: i64,
        rows: i64,
        cols: i64,
    },
}

fn parse_err(line: usize, msg: impl Into<String>) -> MtxError {
    MtxError::Parse {
        line,
        msg: msg.into(),
    }
}

/// The accepted banner-line shape: `matrix coordinate {real,integer}
/// general`. Field and symmetry are kept so rejections can name what was
/// unsupported; nothing else of the header survives parsing.
struct MtxHeader {
    field: String,
    symmetry: String,
}

impl MtxHeader {
    fn parse(line: &str, line_no: usize) -> Result<Self, MtxError> {
        let tokens: Vec<String> = line.split_whitespace().map(str::to_lowercase).collect();
        if tokens.first().map(String::as_str) != Some("%%matrixmarket") {
            return Err(parse_err(line_no, "missing %%MatrixMarket header"));
        }
        if tokens.len() != 5 {
            return Err(parse_err(
                line_no,
                format!("header has {} fields, expected 5", tokens.len()),
            ));
        }
        if tokens[1] != "matrix" || tokens[2] != "coordinate" {
            return Err(MtxError::Unsupported {
                line: line_no,
                what: format!("{} {}", tokens[1], tokens[2]),
            });
        }
        let header = MtxHeader {
            field: tokens[3].clone(),
            symmetry: tokens[4].clone(),
        };
        if header.field != "real" && header.field != "integer" {
            return Err(MtxError::Unsupported {
                line: line_no,
                what: header.field,
            });
        }
        if header.symmetry != "general" {
            return Err(MtxError::Unsupported {
                line: line_no,
                what: header.symmetry,
            });
        }
        Ok(header)
    }
}

/// Parse a Matrix Market coordinate file into a COO matrix, preserving
/// entry order. The declared nonzero count must match the number of data
/// lines exactly.
pub fn parse_mtx(text: &str) -> Result<CooMatrix, MtxError> {
    let mut lines = text.lines().enumerate();

    let (header_line, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let header_no = header_line + 1;
    let _ = MtxHeader::parse(header, header_no)?;

    let mut data = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });

    let (size_line, size) = data
        .next()
        .ok_or_else(|| parse_err(header_no, "missing size line"))?;
    let size_no = size_line + 1;
    let fields: Vec<&str> = size.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(parse_err(
            size_no,
            format!("size line has {} fields, expected 3", fields.len()),
        ));
    }
    let dim = |s: &str, what: &str| -> Result<i64, MtxError> {
        let v: i64 = s
            .parse()
            .map_err(|_| parse_err(size_no, format!("invalid {what} '{s}'")))?;
        if v < 0 {
            return Err(parse_err(size_no, format!("negative {what} {v}")));
        }
        Ok(v)
    };
    let rows = dim(fields[0], "row count")?;
    let cols = dim(fields[1], "column count")?;
    let nnz = dim(fields[2], "entry count")? as usize;

    let mut entries = Vec::with_capacity(nnz);
    for (data_line, line) in data {
        let line_no = data_line + 1;
        if entries.len() == nnz {
            return Err(parse_err(
                line_no,
                format!("extra data line; {nnz} entries declared"),
            ));
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_err(
                line_no,
                format!("entry line has {} fields, expected 3", fields.len()),
            ));
        }
        let row: i64 = fields[0]
            .parse()
            .map_err(|_| parse_err(line_no, format!("invalid row index '{}'", fields[0])))?;
        let col: i64 = fields[1]
            .parse()
            .map_err(|_| parse_err(line_no, format!("invalid column index '{}'", fields[1])))?;
        let value: f64 = fields[2]
            .parse()
            .map_err(|_| parse_err(line_no, format!("invalid value '{}'", fields[2])))?;
        if !(1 <= row && row <= rows && 1 <= col && col <= cols) {
            return Err(MtxError::Bounds {
                line: line_no,
                row,
                col,
                rows,
                cols,
            });
        }
        entries.push(CooEntry::new(row - 1, col - 1, value));
    }
    if entries.len() != nnz {
        return Err(parse_err(
            text.lines().count(),
            format!("{nnz} entries declared, {} found", entries.len()),
        ));
    }
    Ok(CooMatrix::new(rows, cols, entries))
}

/// Render a COO matrix as a Matrix Market coordinate file, 1-based, in
/// entry order, with round-trip-exact values.
pub fn write_mtx(coo: &CooMatrix) -> String {
    let mut out = String::from("%%MatrixMarket matrix coordinate real general\n");
    out.push_str(&format!(
        "{} {} {}\n",
        coo.rows,
        coo.cols,
        coo.entries.len()
    ));
    for e in &coo.entries {
        out.push_str(&format!(
            "{} {} {}\n",
            e.coord.row + 1,
            e.coord.col + 1,
            e.value
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Scalar;

    #[test]
    fn parses_a_small_file() {
        let text = "%%MatrixMarket matrix coordinate real general\n\
                    % a comment\n\
                    2 3 2\n\
                    1 1 1.5\n\
                    2 3 -2\n";
        let coo = parse_mtx(text).unwrap();
        assert_eq!(coo.rows, 2);
        assert_eq!(coo.cols, 3);
        assert_eq!(coo.entries.len(), 2);
        assert_eq!(coo.entries[0], CooEntry::new(0, 0, 1.5));
        assert_eq!(coo.entries[1], CooEntry::new(1, 2, -2.0));
        assert!(coo.is_wellformed());
    }

    #[test]
    fn parses_an_empty_matrix() {
        let coo = parse_mtx("%%MatrixMarket matrix coordinate real general\n1 1 0\n").unwrap();
        assert_eq!(coo.rows, 1);
        assert_eq!(coo.cols, 1);
        assert!(coo.entries.is_empty());
    }

    #[test]
    fn preserves_entry_order_of_shuffled_duplicates() {
        let text = "%%MatrixMarket matrix coordinate real general\n\
                    2 2 3\n\
                    2 2 1\n\
                    1 1 3\n\
                    1 1 7\n";
        let coo = parse_mtx(text).unwrap();
        let values: Vec<Scalar> = coo.entries.iter().map(|e| e.value).collect();
        assert_eq!(values, vec![Scalar(1.0), Scalar(3.0), Scalar(7.0)]);
    }

    #[test]
    fn rejects_count_mismatches() {
        let short = "%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 1\n2 2 2\n";
        assert!(matches!(parse_mtx(short), Err(MtxError::Parse { .. })));
        let long = "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 1\n2 2 2\n";
        assert!(matches!(parse_mtx(long), Err(MtxError::Parse { .. })));
    }

    #[test]
    fn rejects_unsupported_variants() {
        for bad in [
            "%%MatrixMarket matrix coordinate pattern general\n1 1 0\n",
            "%%MatrixMarket matrix coordinate complex general\n1 1 0\n",
            "%%MatrixMarket matrix coordinate real symmetric\n1 1 0\n",
            "%%MatrixMarket matrix array real general\n1 1\n",
        ] {
            assert!(matches!(parse_mtx(bad), Err(MtxError::Unsupported { .. })));
        }
    }

    #[test]
    fn rejects_out_of_bounds_entries() {
        let text = "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n";
        assert!(matches!(
            parse_mtx(text),
            Err(MtxError::Bounds {
                line: 3,
                row: 3,
                ..
            })
        ));
        let zero_based = "%%MatrixMarket matrix coordinate real general\n2 2 1\n0 1 1.0\n";
        assert!(matches!(
            parse_mtx(zero_based),
            Err(MtxError::Bounds { .. })
        ));
    }

    #[test]
    fn accepts_integer_field_and_case_variants() {
        let text = "%%matrixmarket MATRIX Coordinate Integer General\n1 1 1\n1 1 42\n";
        let coo = parse_mtx(text).unwrap();
        assert_eq!(coo.entries[0].value, Scalar(42.0));
    }

    #[test]
    fn roundtrips_through_write() {
        let text = "%%MatrixMarket matrix coordinate real general\n\
                    3 3 3\n\
                    3 3 0.1\n\
                    1 1 7\n\
                    1 1 3\n";
        let coo = parse_mtx(text).unwrap();
        let again = parse_mtx(&write_mtx(&coo)).unwrap();
        assert_eq!(coo, again);
    }
}
