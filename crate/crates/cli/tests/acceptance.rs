//! Acceptance suite: one test per criterion, each printing a single
//! PASS/FAIL line (visible with `--nocapture`) and asserting it.
//!
//! Criteria, in order: the golden 6x6 fixture; bitwise agreement with the
//! dense oracle in the exact-integer regime; reachable-sum membership in
//! the full-rounding regime; structural soundness of every output; trace
//! replay of every conversion plus two planted-bug rejections; the
//! explicit-zero distinguisher; agreement of the three distinct-count
//! routes; and the SpMV cross-check.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use coo2csr::convert::{
    convert_with_trace, coo_count, coo_to_csr, ConversionState, TraceEvent, TraceKind,
};
use coo2csr::coo::{count_distinct, distinct_coord_count_by_set};
use coo2csr::dense::dense_spmv;
use coo2csr::io::{gen_random_coo, parse_csr_document, parse_mtx, GenParams, ValueRegime};
use coo2csr::relations::{
    check_coo_csr, check_coo_csr_with_fallback, check_coo_to_matrix, check_trace,
    coo_to_dense_appearance_order,
};
use coo2csr::scalars::{fp_add, Scalar, ScalarFormat, SUM_ANY_CAP};
use coo2csr::{CooMatrix, CsrMatrix};

fn report(criterion: &str, ok: bool, detail: &str) {
    println!(
        "acceptance {criterion}: {}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "{criterion}: {detail}");
}

fn within(start: Instant, bound: Duration, criterion: &str) {
    let elapsed = start.elapsed();
    assert!(
        elapsed < bound,
        "{criterion}: took {elapsed:?}, bound {bound:?}"
    );
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

/// Case shapes for the exact-integer regime: dims <= 8, up to 16
/// entries, integer values in [-100, 100], duplication probability 0.3.
fn exact_params(rng: &mut ChaCha8Rng) -> GenParams {
    GenParams {
        rows: rng.random_range(1..=8),
        cols: rng.random_range(1..=8),
        nnz: rng.random_range(0..=16),
        dup_prob: 0.3,
        regime: ValueRegime::SmallInt,
        max_multiplicity: None,
    }
}

/// Case shapes for the rounding regime: full-range doubles with at most
/// five entries per coordinate.
fn rounding_params(rng: &mut ChaCha8Rng) -> GenParams {
    GenParams {
        rows: rng.random_range(1..=8),
        cols: rng.random_range(1..=8),
        nnz: rng.random_range(0..=16),
        dup_prob: 0.3,
        regime: ValueRegime::Full,
        max_multiplicity: Some(5),
    }
}

fn exact_cases(count: usize) -> impl Iterator<Item = CooMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    (0..count).map(move |_| {
        let params = exact_params(&mut rng);
        gen_random_coo(rng.random(), &params)
    })
}

fn rounding_cases(count: usize) -> impl Iterator<Item = CooMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    (0..count).map(move |_| {
        let params = rounding_params(&mut rng);
        gen_random_coo(rng.random(), &params)
    })
}

/// Fixed shapes exercising leading, interior, and trailing empty rows and
/// the degenerate row/entry counts.
fn structural_patterns() -> Vec<CooMatrix> {
    use coo2csr::CooEntry;
    vec![
        CooMatrix::new(0, 0, vec![]),
        CooMatrix::new(0, 4, vec![]),
        CooMatrix::new(4, 0, vec![]),
        CooMatrix::new(3, 3, vec![]),
        CooMatrix::new(4, 2, vec![CooEntry::new(2, 1, 1.0)]), // leading empties
        CooMatrix::new(4, 2, vec![CooEntry::new(0, 0, 1.0)]), // trailing empties
        CooMatrix::new(
            5,
            3,
            vec![CooEntry::new(0, 2, 1.0), CooEntry::new(3, 0, 2.0)], // interior empties
        ),
        CooMatrix::new(
            1,
            1,
            vec![CooEntry::new(0, 0, 7.0), CooEntry::new(0, 0, 3.0)],
        ),
    ]
}

#[test]
fn criterion_1_golden_fixture() {
    let start = Instant::now();
    let coo = parse_mtx(&fs::read_to_string(data("example6x6.mtx")).unwrap()).unwrap();
    let csr = coo_to_csr(&coo).unwrap();

    let mut ok = csr.row_ptr == vec![0, 2, 5, 8, 12, 16, 19];
    ok &= csr.vals.len() == 19;
    ok &= csr.vals[0] == Scalar(10.0);
    ok &= csr.col_ind == vec![0, 4, 0, 1, 5, 1, 2, 3, 0, 2, 3, 4, 1, 3, 4, 5, 1, 4, 5];
    ok &= csr == parse_csr_document(&fs::read_to_string(data("example6x6.csr")).unwrap()).unwrap();

    // Two CLI runs must produce byte-identical documents.
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a.csr");
    let out_b = dir.path().join("b.csr");
    for out in [&out_a, &out_b] {
        let status = Command::new(env!("CARGO_BIN_EXE_coo2csr"))
            .args([
                "convert",
                "--input",
                data("example6x6.mtx").to_str().unwrap(),
                "--output",
                out.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        ok &= status.success();
    }
    let bytes_a = fs::read(&out_a).unwrap();
    ok &= bytes_a == fs::read(&out_b).unwrap();
    ok &= bytes_a == fs::read(data("example6x6.csr")).unwrap();

    within(start, Duration::from_secs(1), "criterion 1");
    report(
        "criterion 1 (golden fixture)",
        ok,
        "fixture arrays or documents diverged",
    );
}

#[test]
fn criterion_2_exact_regime_oracle_equivalence() {
    let start = Instant::now();
    let mut failures = 0;
    for coo in exact_cases(1000) {
        let csr = coo_to_csr(&coo).unwrap();
        if csr.to_dense() != coo_to_dense_appearance_order(&coo) {
            failures += 1;
        }
    }
    within(start, Duration::from_secs(10), "criterion 2");
    report(
        "criterion 2 (exact-regime oracle equivalence, 1000 cases)",
        failures == 0,
        &format!("{failures} bitwise disagreements"),
    );
}

#[test]
fn criterion_3_rounding_regime_membership() {
    let start = Instant::now();
    let mut failures = 0;
    for coo in rounding_cases(500) {
        let csr = coo_to_csr(&coo).unwrap();
        if !check_coo_to_matrix(&coo, &csr.to_dense(), SUM_ANY_CAP).unwrap() {
            failures += 1;
        }
    }
    within(start, Duration::from_secs(60), "criterion 3");
    report(
        "criterion 3 (rounding-regime membership, 500 cases)",
        failures == 0,
        &format!("{failures} entries outside their reachable-sum sets"),
    );
}

#[test]
fn criterion_4_structural_suite() {
    let mut failures = Vec::new();
    let all_cases = exact_cases(1000)
        .chain(rounding_cases(500))
        .chain(structural_patterns());
    for coo in all_cases {
        let csr = coo_to_csr(&coo).unwrap();
        if !csr.is_wellformed() {
            failures.push(format!("not well-formed: {coo:?}"));
            continue;
        }
        let sorted = coo.sort_entries();
        let (ok, _) = check_coo_csr_with_fallback(&sorted, &csr, SUM_ANY_CAP);
        if !ok {
            failures.push(format!("correspondence failed: {coo:?}"));
        }
    }
    report(
        "criterion 4 (structural suite)",
        failures.is_empty(),
        &failures.join("; "),
    );
}

#[test]
fn criterion_5_trace_invariants_and_mutations() {
    // Every conversion from criteria 2-4 replays through the checkers.
    let mut replay_failures = 0;
    let all_cases: Vec<CooMatrix> = exact_cases(1000)
        .chain(rounding_cases(500))
        .chain(structural_patterns())
        .collect();
    for coo in &all_cases {
        let (_, trace) = convert_with_trace(coo).unwrap();
        if !check_trace(coo, &trace) {
            replay_failures += 1;
        }
    }

    // Planted bugs must be rejected on at least one generated case each.
    let mut overwrite_rejected = 0;
    let mut guard_rejected = 0;
    let mut guard_rejected_first_row_zero = 0;
    for coo in all_cases.iter().take(200) {
        let (_, trace) = mutant_convert(coo, Mutation::OverwriteDuplicate);
        if !check_trace(coo, &trace) {
            overwrite_rejected += 1;
        }
        let (_, trace) = mutant_convert(coo, Mutation::UnsignedGuard);
        if !check_trace(coo, &trace) {
            guard_rejected += 1;
            let sorted = coo.sort_entries();
            if sorted.entries.first().map(|e| e.coord.row) == Some(0) {
                guard_rejected_first_row_zero += 1;
            }
        }
    }

    let ok = replay_failures == 0
        && overwrite_rejected > 0
        && guard_rejected > 0
        && guard_rejected_first_row_zero > 0;
    report(
        "criterion 5 (trace invariants and mutation rejection)",
        ok,
        &format!(
            "replay failures {replay_failures}, overwrite rejections {overwrite_rejected}, \
             guard rejections {guard_rejected} (first-row-zero {guard_rejected_first_row_zero})"
        ),
    );
}

#[test]
fn criterion_6_explicit_zero_distinguisher() {
    use coo2csr::CooEntry;
    let coo = CooMatrix::new(
        2,
        2,
        vec![CooEntry::new(0, 0, 0.0), CooEntry::new(1, 1, 5.0)],
    )
    .sort_entries();
    let with_slot = coo_to_csr(&coo).unwrap();
    let without_slot = CsrMatrix {
        cols: 2,
        vals: vec![Scalar(5.0)],
        col_ind: vec![1],
        row_ptr: vec![0, 0, 1],
    };

    let dense_indistinguishable = with_slot.is_wellformed()
        && without_slot.is_wellformed()
        && with_slot.to_dense() == without_slot.to_dense()
        && check_coo_to_matrix(&coo, &without_slot.to_dense(), SUM_ANY_CAP).unwrap();
    let structurally_distinguished = check_coo_csr(&coo, &with_slot, SUM_ANY_CAP).unwrap()
        && !check_coo_csr(&coo, &without_slot, SUM_ANY_CAP).unwrap();
    report(
        "criterion 6 (explicit-zero anti-weakening)",
        dense_indistinguishable && structurally_distinguished,
        "structural relation is not strictly stronger than the dense one here",
    );
}

#[test]
fn criterion_7_distinct_count_routes_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut failures = 0;
    for _ in 0..1000 {
        let params = GenParams {
            rows: rng.random_range(1..=10),
            cols: rng.random_range(1..=10),
            nnz: rng.random_range(0..=30),
            dup_prob: rng.random_range(0.0..=1.0),
            regime: ValueRegime::SmallInt,
            max_multiplicity: None,
        };
        let sorted = gen_random_coo(rng.random(), &params).sort_entries();
        let scan = coo_count(&sorted);
        let definition = count_distinct(&sorted.entries);
        let set = distinct_coord_count_by_set(&sorted.entries);
        if scan != definition || definition != set {
            failures += 1;
        }
    }
    report(
        "criterion 7 (distinct-count route agreement, 1000 cases)",
        failures == 0,
        &format!("{failures} disagreements"),
    );
}

#[test]
fn criterion_8_spmv_cross_check() {
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let mut failures = 0;
    for _ in 0..500 {
        let params = exact_params(&mut rng);
        let coo = gen_random_coo(rng.random(), &params);
        let csr = coo_to_csr(&coo).unwrap();
        let x: Vec<Scalar> = (0..csr.cols)
            .map(|_| Scalar(rng.random_range(-100i64..=100) as f64))
            .collect();
        if csr.spmv(&x).unwrap() != dense_spmv(&csr.to_dense(), &x) {
            failures += 1;
        }
    }

    let reference =
        parse_csr_document(&fs::read_to_string(data("example6x6.csr")).unwrap()).unwrap();
    let ones = vec![Scalar(1.0); 6];
    let row_sums_ok = reference.spmv(&ones).unwrap()
        == vec![
            Scalar(8.0),
            Scalar(15.0),
            Scalar(22.0),
            Scalar(23.0),
            Scalar(39.0),
            Scalar(5.0),
        ];
    report(
        "criterion 8 (spmv cross-check, 500 cases)",
        failures == 0 && row_sums_ok,
        &format!("{failures} bitwise mismatches, row sums ok: {row_sums_ok}"),
    );
}

/// Planted bugs for criterion 5. `OverwriteDuplicate` stores a duplicate
/// value instead of accumulating it. `UnsignedGuard` models the skip-row
/// guard comparing the row cursor as an unsigned word, so the initial
/// cursor (-1 as all-ones) is never below any target row and the fill
/// loop never runs.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Mutation {
    OverwriteDuplicate,
    UnsignedGuard,
}

/// A copy of the conversion loop with the planted bug, emitting the same
/// trace events the real converter does.
fn mutant_convert(coo: &CooMatrix, mutation: Mutation) -> (CsrMatrix, Vec<TraceEvent>) {
    assert!(coo.is_wellformed());
    let sorted = coo.sort_entries();
    let k = coo_count(&sorted);
    let rows = sorted.rows;
    let mut trace = Vec::new();
    let mut st = ConversionState {
        i: 0,
        r: -1,
        c: 0,
        l: 0,
        vals: Vec::new(),
        col_ind: Vec::new(),
        row_ptr: Vec::new(),
        val_capacity: k,
        col_ind_capacity: k,
        row_ptr_capacity: rows as usize + 1,
    };
    macro_rules! step {
        ($kind:expr, $body:block) => {{
            let before = st.clone();
            $body
            trace.push(TraceEvent {
                kind: $kind,
                state_before: before,
                state_after: st.clone(),
            });
        }};
    }
    step!(TraceKind::Init, {});
    for idx in 0..sorted.entries.len() {
        let entry = sorted.entries[idx];
        let (ri, ci, x) = (entry.coord.row, entry.coord.col, entry.value);
        if ri == st.r {
            if ci == st.c {
                step!(TraceKind::Duplicate, {
                    st.vals[st.l - 1] = match mutation {
                        Mutation::OverwriteDuplicate => x,
                        Mutation::UnsignedGuard => {
                            fp_add(ScalarFormat::Binary64, st.vals[st.l - 1], x)
                        }
                    };
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
            let guard = |st: &ConversionState| match mutation {
                Mutation::OverwriteDuplicate => st.r < ri,
                Mutation::UnsignedGuard => (st.r as u64) < (ri as u64),
            };
            while guard(&st) {
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
    (
        CsrMatrix {
            cols: sorted.cols,
            vals: st.vals,
            col_ind: st.col_ind,
            row_ptr: st.row_ptr,
        },
        trace,
    )
}
