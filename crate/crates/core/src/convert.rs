//! The sort-then-fill COO to CSR conversion: stable sort by coordinate,
//! then a single left-to-right pass that folds duplicates, fills row
//! pointers across empty rows, and finishes the tail. Optionally emits a
//! step trace that the relation checkers can replay.

use thiserror::Error;

use crate::coo::CooMatrix;
use crate::csr::{CsrMatrix, DEFAULT_INDEX_BOUND};
use crate::scalars::{fp_add, Scalar, ScalarFormat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum ConvertError {
    #[error("input COO matrix is not well-formed")]
    NotWellFormed,
    #[error("{what} ({value}) exceeds the index bound {bound}")]
    CapacityBound {
        what: &'static str,
        value: i64,
        bound: i64,
    },
}

/// What a single conversion step did. One `Init` opens a trace and one
/// `Done` closes it; each entry contributes exactly one of `Duplicate`,
/// `NewCol`, or `NewRow`; each row-pointer slot written inside the main
/// loop contributes a `SkipRow` and each tail slot a `LastRows`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceKind {
    Init,
    Duplicate,
    NewCol,
    SkipRow,
    NewRow,
    LastRows,
    Done,
}

/// Cursor state plus the defined prefixes of the three output buffers.
///
/// `vals`, `col_ind`, and `row_ptr` hold only the slots written so far
/// (the defined-prefix watermark is their length); the `*_capacity`
/// fields record the allocated sizes, which the relation checkers compare
/// against the distinct-entry count and `rows + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConversionState {
    /// Entries consumed so far.
    pub i: usize,
    /// Row cursor; starts at -1, one below the smallest row index.
    pub r: i64,
    /// Column of the most recently written slot.
    pub c: i64,
    /// Distinct coordinates seen so far; the next slot to fill.
    pub l: usize,
    pub vals: Vec<Scalar>,
    pub col_ind: Vec<i64>,
    pub row_ptr: Vec<i64>,
    pub val_capacity: usize,
    pub col_ind_capacity: usize,
    pub row_ptr_capacity: usize,
}

/// One traced step: the kind plus full state snapshots on both sides.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceEvent {
    pub kind: TraceKind,
    pub state_before: ConversionState,
    pub state_after: ConversionState,
}

/// Distinct-coordinate count by the operational adjacent-difference scan.
/// Requires sorted entries.
pub fn coo_count(coo: &CooMatrix) -> usize {
    debug_assert!(coo.is_sorted(), "coo_count requires sorted entries");
    let entries = &coo.entries;
    let n = entries.len();
    if n == 0 {
        return 0;
    }
    let mut count = 1;
    for i in 1..n {
        if entries[i - 1].coord != entries[i].coord {
            count += 1;
        }
    }
    count
}

/// Convert under [`DEFAULT_INDEX_BOUND`]. See [`coo_to_csr_with_bound`].
pub fn coo_to_csr(coo: &CooMatrix) -> Result<CsrMatrix, ConvertError> {
    coo_to_csr_with_bound(coo, DEFAULT_INDEX_BOUND)
}

/// Convert a well-formed COO matrix to CSR form.
///
/// The input is untouched; the conversion works on a stably sorted copy,
/// so duplicate values accumulate left-to-right in their appearance order
/// and the output is bit-for-bit reproducible. The result is well-formed,
/// has `row_ptr[0] == 0`, and stores exactly one slot per distinct
/// coordinate.
pub fn coo_to_csr_with_bound(coo: &CooMatrix, index_bound: i64) -> Result<CsrMatrix, ConvertError> {
    convert_impl(coo, index_bound, None)
}

/// Convert under [`DEFAULT_INDEX_BOUND`], recording a step trace.
pub fn convert_with_trace(coo: &CooMatrix) -> Result<(CsrMatrix, Vec<TraceEvent>), ConvertError> {
    convert_with_trace_and_bound(coo, DEFAULT_INDEX_BOUND)
}

/// Convert, recording one [`TraceEvent`] per step. The matrix returned is
/// identical to the untraced conversion.
pub fn convert_with_trace_and_bound(
    coo: &CooMatrix,
    index_bound: i64,
) -> Result<(CsrMatrix, Vec<TraceEvent>), ConvertError> {
    let mut trace = Vec::new();
    let csr = convert_impl(coo, index_bound, Some(&mut trace))?;
    Ok((csr, trace))
}

fn convert_impl(
    coo: &CooMatrix,
    index_bound: i64,
    mut trace: Option<&mut Vec<TraceEvent>>,
) -> Result<CsrMatrix, ConvertError> {
    if !coo.is_wellformed() {
        return Err(ConvertError::NotWellFormed);
    }
    let sorted = coo.sort_entries();
    let k = coo_count(&sorted);
    if k as i64 > index_bound {
        return Err(ConvertError::CapacityBound {
            what: "distinct entry count",
            value: k as i64,
            bound: index_bound,
        });
    }
    let rows = sorted.rows;
    if rows.checked_add(1).is_none_or(|v| v > index_bound) {
        return Err(ConvertError::CapacityBound {
            what: "row count plus one",
            value: rows.saturating_add(1),
            bound: index_bound,
        });
    }

    let mut st = ConversionState {
        i: 0,
        r: -1,
        c: 0,
        l: 0,
        vals: Vec::with_capacity(k),
        col_ind: Vec::with_capacity(k),
        row_ptr: Vec::with_capacity(rows as usize + 1),
        val_capacity: k,
        col_ind_capacity: k,
        row_ptr_capacity: rows as usize + 1,
    };

    macro_rules! step {
        ($kind:expr, $body:block) => {{
            let before = trace.as_ref().map(|_| st.clone());
            $body
            if let Some(sink) = trace.as_deref_mut() {
                sink.push(TraceEvent {
                    kind: $kind,
                    state_before: before.unwrap(),
                    state_after: st.clone(),
                });
            }
        }};
    }

    step!(TraceKind::Init, {});

    let n = sorted.entries.len();
    for idx in 0..n {
        let entry = sorted.entries[idx];
        let (ri, ci) = (entry.coord.row, entry.coord.col);
        let x = entry.value;
        if ri == st.r {
            if ci == st.c {
                step!(TraceKind::Duplicate, {
                    st.vals[st.l - 1] = fp_add(ScalarFormat::Binary64, st.vals[st.l - 1], x);
                    st.i = idx + 1;
                });
            } else {
                step!(TraceKind::NewCol, {
                    st.c = ci;
                    st.col_ind.push(ci);
                    st.vals.push(x);
                    st.l += 1;
                    st.i = idx + 1;
                });
            }
        } else {
            // Advance the row cursor to this entry's row, recording the
            // current fill level for every row passed over. The cursor is
            // signed, so `r < ri` is safe even from the initial r = -1.
            while st.r < ri {
                step!(TraceKind::SkipRow, {
                    st.r += 1;
                    st.row_ptr.push(st.l as i64);
                });
            }
            step!(TraceKind::NewRow, {
                st.c = ci;
                st.col_ind.push(ci);
                st.vals.push(x);
                st.l += 1;
                st.i = idx + 1;
            });
        }
    }

    while st.r < rows {
        step!(TraceKind::LastRows, {
            st.r += 1;
            st.row_ptr.push(st.l as i64);
        });
    }

    step!(TraceKind::Done, {});

    let csr = CsrMatrix {
        cols: sorted.cols,
        vals: st.vals,
        col_ind: st.col_ind,
        row_ptr: st.row_ptr,
    };
    debug_assert!(csr.is_wellformed_with_bound(index_bound));
    debug_assert_eq!(csr.row_ptr.first(), Some(&0));
    debug_assert_eq!(*csr.row_ptr.last().unwrap() as usize, k);
    Ok(csr)
}
