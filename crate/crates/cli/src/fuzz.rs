//! The fuzz pipeline: generate random matrices, convert with a trace,
//! replay the trace through the step checkers, and compare against the
//! dense oracle. The first failing case is greedily minimized and written
//! to a reproduction file.

use std::fs;
use std::process::ExitCode;

use anyhow::{Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use coo2csr::convert::convert_with_trace;
use coo2csr::io::{gen_random_coo, write_mtx, GenParams, ValueRegime};
use coo2csr::relations::{
    check_coo_csr_with_fallback, check_coo_to_matrix_with_fallback, check_trace_report,
    coo_to_dense_appearance_order,
};
use coo2csr::scalars::SUM_ANY_CAP;
use coo2csr::{CooMatrix, DEFAULT_INDEX_BOUND};

const REPRO_PATH: &str = "fuzz-failure.mtx";

pub fn run(cases: usize, seed: u64, exact_ints: bool) -> Result<ExitCode> {
    let regime = if exact_ints {
        ValueRegime::SmallInt
    } else {
        ValueRegime::Full
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let params = GenParams {
            rows: rng.random_range(1..=8),
            cols: rng.random_range(1..=8),
            nnz: rng.random_range(0..=16),
            dup_prob: 0.3,
            regime,
            max_multiplicity: Some(SUM_ANY_CAP),
        };
        let coo = gen_random_coo(rng.random(), &params);
        if let Some(reason) = pipeline_failure(&coo, exact_ints) {
            let minimized = minimize(&coo, |m| pipeline_failure(m, exact_ints).is_some());
            fs::write(REPRO_PATH, write_mtx(&minimized))
                .with_context(|| format!("writing {REPRO_PATH}"))?;
            eprintln!("case {case} failed: {reason}");
            eprintln!(
                "minimized reproduction ({} entries, {} x {}) written to {REPRO_PATH}",
                minimized.entries.len(),
                minimized.rows,
                minimized.cols
            );
            return Ok(ExitCode::FAILURE);
        }
    }
    println!("{cases} cases passed");
    Ok(ExitCode::SUCCESS)
}

/// Run one matrix through convert + trace replay + oracle comparison.
/// `None` means the pipeline held; `Some` describes the first failure.
pub fn pipeline_failure(coo: &CooMatrix, exact_ints: bool) -> Option<String> {
    let (csr, trace) = match convert_with_trace(coo) {
        Ok(out) => out,
        Err(e) => return Some(format!("conversion failed: {e}")),
    };
    if !csr.is_wellformed() {
        return Some("output is not well-formed".into());
    }
    if let Err(f) = check_trace_report(coo, &trace, SUM_ANY_CAP, DEFAULT_INDEX_BOUND) {
        return Some(format!("trace check failed: {f}"));
    }
    let sorted = coo.sort_entries();
    let (structural, _) = check_coo_csr_with_fallback(&sorted, &csr, SUM_ANY_CAP);
    if !structural {
        return Some("structural correspondence does not hold".into());
    }
    let dense = csr.to_dense();
    if exact_ints {
        if dense != coo_to_dense_appearance_order(coo) {
            return Some("dense readings disagree bitwise".into());
        }
    } else {
        let (ok, _) = check_coo_to_matrix_with_fallback(coo, &dense, SUM_ANY_CAP);
        if !ok {
            return Some("a dense entry is not a reachable duplicate sum".into());
        }
    }
    None
}

/// Greedy minimization: repeatedly drop single entries while the failure
/// persists, then shrink the dimensions to the occupied bounding box.
pub fn minimize(coo: &CooMatrix, still_fails: impl Fn(&CooMatrix) -> bool) -> CooMatrix {
    let mut best = coo.clone();
    loop {
        let mut shrunk = false;
        let mut idx = 0;
        while idx < best.entries.len() {
            let mut candidate = best.clone();
            candidate.entries.remove(idx);
            if still_fails(&candidate) {
                best = candidate;
                shrunk = true;
            } else {
                idx += 1;
            }
        }
        let tight = CooMatrix::new(
            best.entries
                .iter()
                .map(|e| e.coord.row + 1)
                .max()
                .unwrap_or(0),
            best.entries
                .iter()
                .map(|e| e.coord.col + 1)
                .max()
                .unwrap_or(0),
            best.entries.clone(),
        );
        if tight != best && still_fails(&tight) {
            best = tight;
            shrunk = true;
        }
        if !shrunk {
            return best;
        }
    }
}
