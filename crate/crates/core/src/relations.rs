//! Executable forms of the correspondence relations between the matrix
//! forms: the appearance-order dense oracle, COO/dense and COO/CSR
//! correspondence, partial-CSR states, and a replay checker that
//! validates every step of a conversion trace.
//!
//! Each checker returns a plain verdict; the `_report` variants name the
//! violated clause (`coo_csr_vals`, `partial_CSR_rowptr`, ...) and the
//! offending indices so failures can be traced to the specific invariant.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::convert::{coo_to_csr_with_bound, ConversionState, TraceEvent, TraceKind};
use crate::coo::{count_distinct, CooMatrix, Coord};
use crate::csr::{CsrMatrix, DEFAULT_INDEX_BOUND};
use crate::dense::DenseMatrix;
use crate::scalars::{
    fp_add, sum_any_set, sum_left_to_right, LengthCapExceeded, Scalar, ScalarFormat, SUM_ANY_CAP,
};

const FMT: ScalarFormat = ScalarFormat::Binary64;

/// How duplicate-sum agreement was established.
///
/// `Membership` means every stored value was checked against the full
/// enumeration of reachable sums. `CheckedDeterministic` means at least
/// one coordinate exceeded the enumeration cap and was compared against
/// the appearance-order left-to-right fold instead; that comparison is
/// sound (the fold is one of the reachable sums) but incomplete.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumMode {
    Membership,
    CheckedDeterministic,
}

impl SumMode {
    fn join(self, other: SumMode) -> SumMode {
        if self == SumMode::Membership && other == SumMode::Membership {
            SumMode::Membership
        } else {
            SumMode::CheckedDeterministic
        }
    }
}

impl fmt::Display for SumMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SumMode::Membership => write!(f, "membership"),
            SumMode::CheckedDeterministic => write!(f, "checked-deterministic"),
        }
    }
}

/// A named-clause rejection: which invariant failed, at which trace event
/// (when replaying), and the offending detail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseFailure {
    pub clause: &'static str,
    pub event: Option<usize>,
    pub detail: String,
}

impl ClauseFailure {
    fn new(clause: &'static str, detail: String) -> Self {
        ClauseFailure {
            clause,
            event: None,
            detail,
        }
    }

    fn at_event(mut self, event: usize) -> Self {
        self.event = Some(event);
        self
    }
}

impl fmt::Display for ClauseFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.event {
            Some(idx) => write!(f, "event {}: clause {}: {}", idx, self.clause, self.detail),
            None => write!(f, "clause {}: {}", self.clause, self.detail),
        }
    }
}

/// Summary of an accepted trace replay.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceSummary {
    pub events: usize,
    pub sum_mode: SumMode,
}

/// Values grouped per coordinate in entry order.
fn group_values(coo: &CooMatrix) -> HashMap<Coord, Vec<Scalar>> {
    let mut groups: HashMap<Coord, Vec<Scalar>> = HashMap::new();
    for e in &coo.entries {
        groups.entry(e.coord).or_default().push(e.value);
    }
    groups
}

/// Row `r`'s slot range `[row_ptr[r], row_ptr[r + 1])`, if both pointers
/// exist. Never panics on malformed inputs.
fn row_segment(csr: &CsrMatrix, r: i64) -> Option<(i64, i64)> {
    let lo = *csr.row_ptr.get(usize::try_from(r).ok()?)?;
    let hi = *csr.row_ptr.get(usize::try_from(r.checked_add(1)?).ok()?)?;
    Some((lo, hi))
}

/// Does `stored` agree with the duplicate values at one coordinate?
/// Within the cap this is membership in the enumerated sum set; above it,
/// `fallback` selects between an error and the deterministic comparison.
fn values_agree(
    dupes: &[Scalar],
    stored: Scalar,
    cap: usize,
    fallback: bool,
) -> Result<(bool, SumMode), LengthCapExceeded> {
    if dupes.len() <= cap {
        let set = sum_any_set(FMT, dupes, cap).expect("length is within the cap");
        Ok((set.contains(&stored), SumMode::Membership))
    } else if fallback {
        Ok((
            stored == sum_left_to_right(FMT, dupes),
            SumMode::CheckedDeterministic,
        ))
    } else {
        Err(LengthCapExceeded {
            len: dupes.len(),
            cap,
        })
    }
}

/// The dense matrix a COO represents under the deterministic reading:
/// entry (i, j) is the left-to-right sum of the values at (i, j) in entry
/// order, and absent coordinates are `+0.0`. Requires a well-formed input.
pub fn coo_to_dense_appearance_order(coo: &CooMatrix) -> DenseMatrix {
    debug_assert!(coo.is_wellformed());
    let mut acc: HashMap<Coord, Scalar> = HashMap::new();
    let mut order: Vec<Coord> = Vec::new();
    for e in &coo.entries {
        match acc.entry(e.coord) {
            std::collections::hash_map::Entry::Occupied(mut slot) => {
                let folded = fp_add(FMT, *slot.get(), e.value);
                slot.insert(folded);
            }
            std::collections::hash_map::Entry::Vacant(slot) => {
                slot.insert(e.value);
                order.push(e.coord);
            }
        }
    }
    let mut m = DenseMatrix::zeros(coo.rows, coo.cols);
    for coord in order {
        m.set(coord.row, coord.col, acc[&coord]);
    }
    m
}

/// Does the dense matrix `m` represent `coo`? Dimensions must match and
/// every position must hold a member of the reachable-sum set of that
/// coordinate's values (with `{+0.0}` for absent coordinates).
pub fn check_coo_to_matrix(
    coo: &CooMatrix,
    m: &DenseMatrix,
    cap: usize,
) -> Result<bool, LengthCapExceeded> {
    coo_to_matrix_impl(coo, m, cap, false).map(|(ok, _)| ok)
}

/// Like [`check_coo_to_matrix`], but above the cap a coordinate is
/// compared against the deterministic fold instead of erroring.
pub fn check_coo_to_matrix_with_fallback(
    coo: &CooMatrix,
    m: &DenseMatrix,
    cap: usize,
) -> (bool, SumMode) {
    coo_to_matrix_impl(coo, m, cap, true).expect("fallback path does not hit the cap")
}

fn coo_to_matrix_impl(
    coo: &CooMatrix,
    m: &DenseMatrix,
    cap: usize,
    fallback: bool,
) -> Result<(bool, SumMode), LengthCapExceeded> {
    let mut mode = SumMode::Membership;
    if coo.rows != m.rows() || coo.cols != m.cols() {
        return Ok((false, mode));
    }
    let groups = group_values(coo);
    let empty: Vec<Scalar> = Vec::new();
    for i in 0..coo.rows {
        for j in 0..coo.cols {
            let dupes = groups.get(&Coord::new(i, j)).unwrap_or(&empty);
            let (ok, used) = values_agree(dupes, m.get(i, j), cap, fallback)?;
            mode = mode.join(used);
            if !ok {
                return Ok((false, mode));
            }
        }
    }
    Ok((true, mode))
}

/// Every COO entry has its CSR slot: for entry `h` at (r, c), the slot
/// `cd_upto(h + 1) - 1` lies inside row `r`'s segment, carries column
/// `c`, and stores a reachable sum of all values at (r, c). Requires
/// sorted, well-formed COO entries.
pub fn check_entries_correspond(
    coo: &CooMatrix,
    csr: &CsrMatrix,
    cap: usize,
) -> Result<bool, LengthCapExceeded> {
    entries_correspond_impl(coo, csr, cap, false).map(|(failure, _)| failure.is_none())
}

fn entries_correspond_impl(
    coo: &CooMatrix,
    csr: &CsrMatrix,
    cap: usize,
    fallback: bool,
) -> Result<(Option<ClauseFailure>, SumMode), LengthCapExceeded> {
    debug_assert!(
        coo.is_sorted(),
        "entries_correspond requires sorted entries"
    );
    let mut mode = SumMode::Membership;
    let groups = group_values(coo);
    // Cache the agreement verdict per coordinate; duplicates share slots.
    let mut agreed: HashMap<Coord, bool> = HashMap::new();
    let mut distinct_so_far = 0usize;
    for (h, entry) in coo.entries.iter().enumerate() {
        if h == 0 || coo.entries[h - 1].coord != entry.coord {
            distinct_so_far += 1;
        }
        let k = distinct_so_far - 1;
        let (r, c) = (entry.coord.row, entry.coord.col);
        let fail = |detail: String| ClauseFailure::new("entries_correspond", detail);

        let Some((lo, hi)) = row_segment(csr, r) else {
            return Ok((
                Some(fail(format!("entry {h}: row {r} has no row_ptr segment"))),
                mode,
            ));
        };
        if !(lo <= k as i64 && (k as i64) < hi) {
            return Ok((
                Some(fail(format!(
                    "entry {h}: slot {k} outside row {r} segment [{lo}, {hi})"
                ))),
                mode,
            ));
        }
        if csr.col_ind.get(k) != Some(&c) {
            return Ok((
                Some(fail(format!(
                    "entry {h}: col_ind[{k}] = {:?}, expected {c}",
                    csr.col_ind.get(k)
                ))),
                mode,
            ));
        }
        let Some(&stored) = csr.vals.get(k) else {
            return Ok((Some(fail(format!("entry {h}: vals[{k}] undefined"))), mode));
        };
        let ok = match agreed.get(&entry.coord) {
            Some(&ok) => ok,
            None => {
                let (ok, used) = values_agree(&groups[&entry.coord], stored, cap, fallback)?;
                mode = mode.join(used);
                agreed.insert(entry.coord, ok);
                ok
            }
        };
        if !ok {
            return Ok((
                Some(fail(format!(
                    "entry {h}: vals[{k}] = {stored} is not a reachable sum at ({r}, {c})"
                ))),
                mode,
            ));
        }
    }
    Ok((None, mode))
}

/// Every stored CSR slot traces back to a COO coordinate: for each row
/// `r` of the COO and slot `k` in that row's segment, `(r, col_ind[k])`
/// appears among the COO coordinates.
pub fn check_no_extra_zeros(coo: &CooMatrix, csr: &CsrMatrix) -> bool {
    no_extra_zeros_impl(coo, csr).is_none()
}

fn no_extra_zeros_impl(coo: &CooMatrix, csr: &CsrMatrix) -> Option<ClauseFailure> {
    let coords: HashSet<Coord> = coo.entries.iter().map(|e| e.coord).collect();
    for r in 0..coo.rows {
        let Some((lo, hi)) = row_segment(csr, r) else {
            // Rows the CSR does not cover have no slots to account for.
            continue;
        };
        for k in lo.max(0)..hi.max(0) {
            let Some(&c) = csr.col_ind.get(k as usize) else {
                return Some(ClauseFailure::new(
                    "no_extra_zeros",
                    format!("row {r}: slot {k} outside col_ind"),
                ));
            };
            if !coords.contains(&Coord::new(r, c)) {
                return Some(ClauseFailure::new(
                    "no_extra_zeros",
                    format!("row {r}: slot {k} stores column {c} with no COO entry"),
                ));
            }
        }
    }
    None
}

/// Full structural correspondence between a sorted, well-formed COO
/// matrix and a CSR matrix: equal dimensions, one stored slot per
/// distinct coordinate, entry correspondence, and no extra zeros.
pub fn check_coo_csr(
    coo: &CooMatrix,
    csr: &CsrMatrix,
    cap: usize,
) -> Result<bool, LengthCapExceeded> {
    coo_csr_impl(coo, csr, cap, false).map(|(failure, _)| failure.is_none())
}

/// Like [`check_coo_csr`], but falls back to the deterministic
/// comparison above the cap instead of erroring.
pub fn check_coo_csr_with_fallback(
    coo: &CooMatrix,
    csr: &CsrMatrix,
    cap: usize,
) -> (bool, SumMode) {
    let (failure, mode) =
        coo_csr_impl(coo, csr, cap, true).expect("fallback path does not hit the cap");
    (failure.is_none(), mode)
}

fn coo_csr_impl(
    coo: &CooMatrix,
    csr: &CsrMatrix,
    cap: usize,
    fallback: bool,
) -> Result<(Option<ClauseFailure>, SumMode), LengthCapExceeded> {
    let mode = SumMode::Membership;
    if coo.rows != csr.rows() {
        return Ok((
            Some(ClauseFailure::new(
                "coo_csr_rows",
                format!("COO has {} rows, CSR has {}", coo.rows, csr.rows()),
            )),
            mode,
        ));
    }
    if coo.cols != csr.cols {
        return Ok((
            Some(ClauseFailure::new(
                "coo_csr_cols",
                format!("COO has {} cols, CSR has {}", coo.cols, csr.cols),
            )),
            mode,
        ));
    }
    let cd = count_distinct(&coo.entries);
    if csr.vals.len() != cd {
        return Ok((
            Some(ClauseFailure::new(
                "coo_csr_vals",
                format!(
                    "CSR stores {} values, COO has {} distinct coordinates",
                    csr.vals.len(),
                    cd
                ),
            )),
            mode,
        ));
    }
    let (ec_failure, ec_mode) = entries_correspond_impl(coo, csr, cap, fallback)?;
    let mode = mode.join(ec_mode);
    if let Some(f) = ec_failure {
        return Ok((
            Some(ClauseFailure::new("coo_csr_entries", f.to_string())),
            mode,
        ));
    }
    if let Some(f) = no_extra_zeros_impl(coo, csr) {
        return Ok((
            Some(ClauseFailure::new("coo_csr_zeros", f.to_string())),
            mode,
        ));
    }
    Ok((None, mode))
}

/// Partial-CSR state check with default cap and index bound.
pub fn check_partial_csr(h: usize, r: i64, coo: &CooMatrix, state: &ConversionState) -> bool {
    check_partial_csr_report(h, r, coo, state, SUM_ANY_CAP, DEFAULT_INDEX_BOUND).is_ok()
}

/// Validates a mid-conversion state against the partial-CSR relation:
/// after consuming `h` entries with row cursor `r`, the defined prefixes
/// of the buffers must equal the arrays of a witness CSR, constructed
/// deterministically by converting the first `h` entries (which fills row
/// pointers beyond `r` with the current distinct count).
pub fn check_partial_csr_report(
    h: usize,
    r: i64,
    coo: &CooMatrix,
    state: &ConversionState,
    cap: usize,
    index_bound: i64,
) -> Result<SumMode, ClauseFailure> {
    if !coo.is_wellformed() {
        return Err(ClauseFailure::new(
            "partial_CSR_coo",
            "COO matrix is not well-formed".into(),
        ));
    }
    if !coo.is_sorted() {
        return Err(ClauseFailure::new(
            "partial_CSR_coo_sorted",
            "COO entries are not sorted".into(),
        ));
    }
    let n = coo.entries.len();
    if h > n {
        return Err(ClauseFailure::new(
            "partial_CSR_i",
            format!("h = {h} exceeds entry count {n}"),
        ));
    }
    if !(-1 <= r && r <= coo.rows) {
        return Err(ClauseFailure::new(
            "partial_CSR_r",
            format!("r = {r} outside [-1, {}]", coo.rows),
        ));
    }
    if let Some(bad) = coo.entries[..h].iter().position(|e| e.coord.row > r) {
        return Err(ClauseFailure::new(
            "partial_CSR_r'",
            format!(
                "entry {bad} has row {} > r = {r}",
                coo.entries[bad].coord.row
            ),
        ));
    }
    if let Some(bad) = coo.entries[h..].iter().position(|e| e.coord.row < r) {
        return Err(ClauseFailure::new(
            "partial_CSR_r''",
            format!(
                "entry {} has row {} < r = {r}",
                h + bad,
                coo.entries[h + bad].coord.row
            ),
        ));
    }
    let cd = count_distinct(&coo.entries);
    if cd as i64 > index_bound {
        return Err(ClauseFailure::new(
            "partial_CSR_dbound",
            format!("{cd} distinct coordinates exceed the index bound {index_bound}"),
        ));
    }

    let witness = coo_to_csr_with_bound(&coo.upto(h), index_bound)
        .map_err(|e| ClauseFailure::new("witness", format!("witness construction failed: {e}")))?;
    if !witness.is_wellformed_with_bound(index_bound) {
        return Err(ClauseFailure::new(
            "partial_CSR_wf",
            "witness CSR is not well-formed".into(),
        ));
    }
    let (coo_csr_failure, mode) = coo_csr_impl(&coo.upto(h), &witness, cap, true)
        .expect("fallback path does not hit the cap");
    if let Some(f) = coo_csr_failure {
        return Err(ClauseFailure::new("partial_CSR_coo_csr", f.to_string()));
    }

    if state.vals.len() < witness.vals.len() || state.vals[..witness.vals.len()] != witness.vals[..]
    {
        return Err(ClauseFailure::new(
            "partial_CSR_val",
            format!(
                "defined val prefix {:?} does not extend witness values {:?}",
                state.vals, witness.vals
            ),
        ));
    }
    if state.col_ind.len() < witness.col_ind.len()
        || state.col_ind[..witness.col_ind.len()] != witness.col_ind[..]
    {
        return Err(ClauseFailure::new(
            "partial_CSR_colind",
            format!(
                "defined col_ind prefix {:?} does not extend witness columns {:?}",
                state.col_ind, witness.col_ind
            ),
        ));
    }
    let defined_rows = (r + 1) as usize;
    if state.row_ptr.len() < defined_rows
        || state.row_ptr[..defined_rows] != witness.row_ptr[..defined_rows]
    {
        return Err(ClauseFailure::new(
            "partial_CSR_rowptr",
            format!(
                "first {defined_rows} row_ptr slots {:?} do not match witness {:?}",
                state.row_ptr, witness.row_ptr
            ),
        ));
    }
    if state.val_capacity != cd || state.vals.len() > state.val_capacity {
        return Err(ClauseFailure::new(
            "partial_CSR_val'",
            format!(
                "val buffer capacity {} must equal the distinct count {cd}",
                state.val_capacity
            ),
        ));
    }
    if state.col_ind_capacity != cd || state.col_ind.len() > state.col_ind_capacity {
        return Err(ClauseFailure::new(
            "partial_CSR_colind'",
            format!(
                "col_ind buffer capacity {} must equal the distinct count {cd}",
                state.col_ind_capacity
            ),
        ));
    }
    let expected_rows = coo.rows as usize + 1;
    if state.row_ptr_capacity != expected_rows || state.row_ptr.len() > state.row_ptr_capacity {
        return Err(ClauseFailure::new(
            "partial_CSR_rowptr'",
            format!(
                "row_ptr buffer capacity {} must equal rows + 1 = {expected_rows}",
                state.row_ptr_capacity
            ),
        ));
    }
    Ok(mode)
}

/// Replay a conversion trace with default cap and index bound.
pub fn check_trace(coo: &CooMatrix, trace: &[TraceEvent]) -> bool {
    check_trace_report(coo, trace, SUM_ANY_CAP, DEFAULT_INDEX_BOUND).is_ok()
}

/// Replays a trace against the sorted input: the opening state must be
/// pristine, every event's preconditions must hold in its before-state,
/// the after-state must equal the prescribed update, chained states must
/// agree, every intermediate state must satisfy the partial-CSR relation,
/// and the closing state must extract to a CSR that represents the input.
pub fn check_trace_report(
    coo: &CooMatrix,
    trace: &[TraceEvent],
    cap: usize,
    index_bound: i64,
) -> Result<TraceSummary, ClauseFailure> {
    if !coo.is_wellformed() {
        return Err(ClauseFailure::new(
            "partial_CSR_coo",
            "COO matrix is not well-formed".into(),
        ));
    }
    let coo = coo.sort_entries();
    let n = coo.entries.len();
    let rows = coo.rows;
    let cd = count_distinct(&coo.entries);
    let mut mode = SumMode::Membership;

    let Some(first) = trace.first() else {
        return Err(ClauseFailure::new("trace_shape", "empty trace".into()));
    };
    if first.kind != TraceKind::Init {
        return Err(ClauseFailure::new(
            "trace_shape",
            format!("trace opens with {:?}, expected Init", first.kind),
        )
        .at_event(0));
    }
    let pristine = ConversionState {
        i: 0,
        r: -1,
        c: 0,
        l: 0,
        vals: Vec::new(),
        col_ind: Vec::new(),
        row_ptr: Vec::new(),
        val_capacity: cd,
        col_ind_capacity: cd,
        row_ptr_capacity: rows as usize + 1,
    };
    if first.state_before != pristine || first.state_after != pristine {
        return Err(ClauseFailure::new(
            "partial_CSR_0",
            "Init state is not the all-undefined initial state".into(),
        )
        .at_event(0));
    }
    mode = mode.join(
        check_partial_csr_report(0, -1, &coo, &first.state_after, cap, index_bound)
            .map_err(|f| f.at_event(0))?,
    );

    let mut cur = first.state_after.clone();
    let mut closed = false;
    for (idx, ev) in trace.iter().enumerate().skip(1) {
        if closed {
            return Err(
                ClauseFailure::new("trace_shape", format!("{:?} after Done", ev.kind))
                    .at_event(idx),
            );
        }
        if ev.state_before != cur {
            return Err(ClauseFailure::new(
                "trace_chain",
                "state_before does not match the previous state_after".into(),
            )
            .at_event(idx));
        }
        let premise = |clause: &'static str, detail: String| {
            Err::<(), ClauseFailure>(ClauseFailure::new(clause, detail).at_event(idx))
        };
        let mut expected = cur.clone();
        match ev.kind {
            TraceKind::Init => {
                return Err(ClauseFailure::new("trace_shape", "second Init".into()).at_event(idx));
            }
            TraceKind::Done => {
                check_done(&coo, &cur, cap, &mut mode).map_err(|f| f.at_event(idx))?;
                if idx != trace.len() - 1 {
                    return Err(ClauseFailure::new(
                        "trace_shape",
                        "Done is not the final event".into(),
                    )
                    .at_event(idx));
                }
                closed = true;
                continue;
            }
            TraceKind::Duplicate => {
                let h = cur.i;
                if !(0 < h && h < n) {
                    premise("partial_CSR_duplicate", format!("h = {h} outside (0, {n})"))?;
                }
                if coo.entries[h - 1].coord != coo.entries[h].coord {
                    premise(
                        "partial_CSR_duplicate",
                        format!("entries {} and {h} have different coordinates", h - 1),
                    )?;
                }
                if cur.r != coo.entries[h - 1].coord.row {
                    premise(
                        "partial_CSR_duplicate",
                        format!("r = {} is not the previous entry's row", cur.r),
                    )?;
                }
                let slot = coo.cd_upto(h) - 1;
                let Some(&old) = cur.vals.get(slot) else {
                    premise(
                        "partial_CSR_duplicate",
                        format!("val slot {slot} is undefined"),
                    )?;
                    unreachable!();
                };
                expected.vals[slot] = fp_add(FMT, old, coo.entries[h].value);
                expected.i = h + 1;
            }
            TraceKind::NewCol => {
                let h = cur.i;
                if !(0 < h && h < n) {
                    premise("partial_CSR_newcol", format!("h = {h} outside (0, {n})"))?;
                }
                let e = coo.entries[h];
                if e.coord.row != cur.r {
                    premise(
                        "partial_CSR_newcol",
                        format!("entry row {} differs from r = {}", e.coord.row, cur.r),
                    )?;
                }
                if coo.entries[h - 1].coord.row != cur.r {
                    premise(
                        "partial_CSR_newcol",
                        "previous entry is in a different row".into(),
                    )?;
                }
                if coo.entries[h - 1].coord.col == e.coord.col {
                    premise(
                        "partial_CSR_newcol",
                        "previous entry has the same column".into(),
                    )?;
                }
                push_slot(
                    &mut expected,
                    "partial_CSR_newcol",
                    e.coord.col,
                    e.value,
                    coo.cd_upto(h),
                    h,
                )
                .map_err(|f| f.at_event(idx))?;
            }
            TraceKind::NewRow => {
                let h = cur.i;
                if h >= n {
                    premise("partial_CSR_newrow", format!("h = {h} outside [0, {n})"))?;
                }
                let e = coo.entries[h];
                if e.coord.row != cur.r {
                    premise(
                        "partial_CSR_newrow",
                        format!("entry row {} differs from r = {}", e.coord.row, cur.r),
                    )?;
                }
                if h != 0 && coo.entries[h - 1].coord.row == cur.r {
                    premise(
                        "partial_CSR_newrow",
                        "previous entry is in the same row".into(),
                    )?;
                }
                push_slot(
                    &mut expected,
                    "partial_CSR_newrow",
                    e.coord.col,
                    e.value,
                    coo.cd_upto(h),
                    h,
                )
                .map_err(|f| f.at_event(idx))?;
            }
            TraceKind::SkipRow => {
                let h = cur.i;
                if h >= n {
                    premise(
                        "partial_CSR_skiprow",
                        format!("no pending entry at h = {h}"),
                    )?;
                }
                let r_new = cur.r + 1;
                if r_new > coo.entries[h].coord.row {
                    premise(
                        "partial_CSR_skiprow",
                        format!(
                            "target row {r_new} beyond the pending entry's row {}",
                            coo.entries[h].coord.row
                        ),
                    )?;
                }
                if cur.row_ptr.len() != r_new as usize {
                    premise(
                        "partial_CSR_skiprow",
                        format!(
                            "row_ptr write lands at {} instead of row {r_new}",
                            cur.row_ptr.len()
                        ),
                    )?;
                }
                expected.r = r_new;
                expected.row_ptr.push(coo.cd_upto(h) as i64);
            }
            TraceKind::LastRows => {
                if cur.i != n {
                    premise(
                        "partial_CSR_lastrows",
                        format!("{} of {n} entries consumed", cur.i),
                    )?;
                }
                let r_new = cur.r + 1;
                if r_new > rows {
                    premise(
                        "partial_CSR_lastrows",
                        format!("target row {r_new} beyond row count {rows}"),
                    )?;
                }
                if cur.row_ptr.len() != r_new as usize {
                    premise(
                        "partial_CSR_lastrows",
                        format!(
                            "row_ptr write lands at {} instead of row {r_new}",
                            cur.row_ptr.len()
                        ),
                    )?;
                }
                expected.r = r_new;
                expected.row_ptr.push(cd as i64);
            }
        }
        if ev.state_after != expected {
            let clause = match ev.kind {
                TraceKind::Duplicate => "partial_CSR_duplicate",
                TraceKind::NewCol => "partial_CSR_newcol",
                TraceKind::NewRow => "partial_CSR_newrow",
                TraceKind::SkipRow => "partial_CSR_skiprow",
                TraceKind::LastRows => "partial_CSR_lastrows",
                _ => "trace_shape",
            };
            return Err(ClauseFailure::new(
                clause,
                "state_after differs from the prescribed update".into(),
            )
            .at_event(idx));
        }
        mode = mode.join(
            check_partial_csr_report(
                expected.i,
                expected.r,
                &coo,
                &ev.state_after,
                cap,
                index_bound,
            )
            .map_err(|f| f.at_event(idx))?,
        );
        cur = ev.state_after.clone();
    }
    if !closed {
        return Err(ClauseFailure::new(
            "trace_shape",
            "trace does not end with Done".into(),
        ));
    }
    Ok(TraceSummary {
        events: trace.len(),
        sum_mode: mode,
    })
}

/// Shared update for the two slot-writing entry events: the write must
/// land at the next distinct-slot index, then column, value, and cursors
/// advance.
fn push_slot(
    expected: &mut ConversionState,
    clause: &'static str,
    col: i64,
    value: Scalar,
    slot: usize,
    h: usize,
) -> Result<(), ClauseFailure> {
    if expected.vals.len() != slot || expected.col_ind.len() != slot {
        return Err(ClauseFailure::new(
            clause,
            format!(
                "slot write lands at {} / {} instead of {slot}",
                expected.vals.len(),
                expected.col_ind.len()
            ),
        ));
    }
    expected.c = col;
    expected.col_ind.push(col);
    expected.vals.push(value);
    expected.l += 1;
    expected.i = h + 1;
    Ok(())
}

/// The closing checks: all entries and rows consumed, the buffers fully
/// defined, and the extracted CSR well-formed and representing the input
/// through the dense reading.
fn check_done(
    coo: &CooMatrix,
    cur: &ConversionState,
    cap: usize,
    mode: &mut SumMode,
) -> Result<(), ClauseFailure> {
    let n = coo.entries.len();
    let cd = count_distinct(&coo.entries);
    if cur.i != n || cur.r != coo.rows {
        return Err(ClauseFailure::new(
            "partial_CSR_properties",
            format!(
                "final cursors (i = {}, r = {}) have not reached (n = {n}, rows = {})",
                cur.i, cur.r, coo.rows
            ),
        ));
    }
    if cur.vals.len() != cd || cur.col_ind.len() != cd {
        return Err(ClauseFailure::new(
            "partial_CSR_properties",
            format!(
                "{} values and {} columns defined, expected {cd}",
                cur.vals.len(),
                cur.col_ind.len()
            ),
        ));
    }
    if cur.row_ptr.len() != coo.rows as usize + 1 {
        return Err(ClauseFailure::new(
            "partial_CSR_properties",
            format!(
                "{} row_ptr slots defined, expected {}",
                cur.row_ptr.len(),
                coo.rows as usize + 1
            ),
        ));
    }
    let csr = CsrMatrix {
        cols: coo.cols,
        vals: cur.vals.clone(),
        col_ind: cur.col_ind.clone(),
        row_ptr: cur.row_ptr.clone(),
    };
    if !csr.is_wellformed() {
        return Err(ClauseFailure::new(
            "partial_CSR_properties",
            "extracted CSR is not well-formed".into(),
        ));
    }
    let dense = csr.to_dense();
    let (ok, used) = check_coo_to_matrix_with_fallback(coo, &dense, cap);
    *mode = mode.join(used);
    if !ok {
        return Err(ClauseFailure::new(
            "partial_CSR_properties",
            "extracted CSR does not represent the COO matrix".into(),
        ));
    }
    Ok(())
}
