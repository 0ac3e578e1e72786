//! Compressed-sparse-row matrices: checkable well-formedness, element
//! access, dense materialization, and matrix-vector multiply.

use thiserror::Error;

use crate::dense::DenseMatrix;
use crate::scalars::{fp_add, fp_mul, Scalar, ScalarFormat};

/// Default bound on row pointers and distinct-entry counts: the largest
/// unsigned 32-bit machine word. The bound is a machine-word artifact,
/// not matrix semantics, so it is a parameter with this default.
pub const DEFAULT_INDEX_BOUND: i64 = u32::MAX as i64;

/// A compressed-sparse-row matrix. Row `r` owns the slots
/// `row_ptr[r] .. row_ptr[r + 1]` of `vals`/`col_ind`; the row count is
/// `row_ptr.len() - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsrMatrix {
    pub cols: i64,
    pub vals: Vec<Scalar>,
    pub col_ind: Vec<i64>,
    pub row_ptr: Vec<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum CsrError {
    #[error("index ({row}, {col}) outside a {rows} x {cols} matrix")]
    IndexOutOfRange {
        row: i64,
        col: i64,
        rows: i64,
        cols: i64,
    },
    #[error("vector length {got} does not match column count {expected}")]
    DimensionMismatch { got: usize, expected: i64 },
}

impl CsrMatrix {
    /// Derived row count; `-1` when `row_ptr` is empty (never well-formed).
    pub fn rows(&self) -> i64 {
        self.row_ptr.len() as i64 - 1
    }

    /// Stored-slot count.
    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Well-formedness under [`DEFAULT_INDEX_BOUND`].
    pub fn is_wellformed(&self) -> bool {
        self.is_wellformed_with_bound(DEFAULT_INDEX_BOUND)
    }

    /// The five-clause well-formedness conjunction:
    /// non-negative dimensions; `vals` and `col_ind` the same length;
    /// `vals` length equal to the final row pointer; `0 :: row_ptr ++
    /// [index_bound]` non-decreasing; and per row, `-1 :: columns ++
    /// [cols]` strictly increasing (sorted, in range, duplicate-free).
    ///
    /// Note the row-pointer clause does not force `row_ptr[0] == 0`;
    /// the converter guarantees that for its own outputs, but it is not
    /// part of well-formedness.
    pub fn is_wellformed_with_bound(&self, index_bound: i64) -> bool {
        let rows = self.rows();
        if rows < 0 || self.cols < 0 {
            return false;
        }
        if self.vals.len() != self.col_ind.len() {
            return false;
        }
        let mut prev = 0i64;
        for &p in &self.row_ptr {
            if p < prev {
                return false;
            }
            prev = p;
        }
        if prev > index_bound {
            return false;
        }
        if self.vals.len() as i64 != self.row_ptr[rows as usize] {
            return false;
        }
        for r in 0..rows as usize {
            let lo = self.row_ptr[r] as usize;
            let hi = self.row_ptr[r + 1] as usize;
            let mut prev_col = -1i64;
            for &c in &self.col_ind[lo..hi] {
                if c <= prev_col {
                    return false;
                }
                prev_col = c;
            }
            if prev_col >= self.cols {
                return false;
            }
        }
        true
    }

    /// Element access. Requires a well-formed matrix; absent coordinates
    /// read as `+0.0`.
    pub fn get(&self, r: i64, c: i64) -> Result<Scalar, CsrError> {
        let rows = self.rows();
        if r < 0 || r >= rows || c < 0 || c >= self.cols {
            return Err(CsrError::IndexOutOfRange {
                row: r,
                col: c,
                rows,
                cols: self.cols,
            });
        }
        let lo = self.row_ptr[r as usize] as usize;
        let hi = self.row_ptr[r as usize + 1] as usize;
        Ok(match self.col_ind[lo..hi].binary_search(&c) {
            Ok(k) => self.vals[lo + k],
            Err(_) => Scalar::ZERO,
        })
    }

    /// Materialize as a dense grid: entry (r, c) is [`CsrMatrix::get`].
    /// Requires a well-formed matrix.
    pub fn to_dense(&self) -> DenseMatrix {
        let rows = self.rows();
        let mut m = DenseMatrix::zeros(rows, self.cols);
        for r in 0..rows as usize {
            let lo = self.row_ptr[r] as usize;
            let hi = self.row_ptr[r + 1] as usize;
            for k in lo..hi {
                m.set(r as i64, self.col_ind[k], self.vals[k]);
            }
        }
        m
    }

    /// Matrix-vector product. Each output component is the left-to-right
    /// fold of `acc + vals[k] * x[col_ind[k]]` over the row's slots,
    /// starting from `+0.0`. Requires a well-formed matrix.
    pub fn spmv(&self, x: &[Scalar]) -> Result<Vec<Scalar>, CsrError> {
        if x.len() as i64 != self.cols {
            return Err(CsrError::DimensionMismatch {
                got: x.len(),
                expected: self.cols,
            });
        }
        let fmt = ScalarFormat::Binary64;
        let rows = self.rows();
        let mut y = Vec::with_capacity(rows as usize);
        for r in 0..rows as usize {
            let lo = self.row_ptr[r] as usize;
            let hi = self.row_ptr[r + 1] as usize;
            let mut acc = Scalar::ZERO;
            for k in lo..hi {
                acc = fp_add(
                    fmt,
                    acc,
                    fp_mul(fmt, self.vals[k], x[self.col_ind[k] as usize]),
                );
            }
            y.push(acc);
        }
        Ok(y)
    }
}
