//! Seed-deterministic random COO generation. Two runs with the same seed
//! and parameters produce identical matrices, bit for bit.

use std::collections::HashMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coo::{CooEntry, CooMatrix, Coord};
use crate::scalars::Scalar;

/// Value distribution for generated entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueRegime {
    /// Integer-valued doubles in [-100, 100]; sums of a few of these are
    /// exact, so differential checks can demand bitwise equality.
    SmallInt,
    /// Finite doubles with a wide exponent spread (never NaN/Inf), for
    /// exercising genuine rounding.
    Full,
}

#[derive(Clone, Copy, Debug)]
pub struct GenParams {
    pub rows: i64,
    pub cols: i64,
    pub nnz: usize,
    /// Probability that a new entry reuses an already-emitted coordinate.
    pub dup_prob: f64,
    pub regime: ValueRegime,
    /// Optional cap on how many entries may share one coordinate.
    pub max_multiplicity: Option<usize>,
}

/// Generate a well-formed COO matrix, deterministic in `seed`.
///
/// Each entry either reuses a previously emitted coordinate (with
/// probability `dup_prob`, respecting `max_multiplicity`) or draws a
/// coordinate not yet used, so `dup_prob = 0` yields all-distinct
/// coordinates. If the fresh-coordinate pool is exhausted the entry
/// falls back to reuse. Non-positive dimensions yield an empty matrix.
pub fn gen_random_coo(seed: u64, params: &GenParams) -> CooMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if params.rows <= 0 || params.cols <= 0 {
        return CooMatrix::new(params.rows.max(0), params.cols.max(0), Vec::new());
    }
    let cells = params.rows as u128 * params.cols as u128;
    let max_mult = params.max_multiplicity.unwrap_or(usize::MAX);

    let mut counts: HashMap<Coord, usize> = HashMap::new();
    let mut seen: Vec<Coord> = Vec::new();
    let mut entries = Vec::with_capacity(params.nnz);
    for _ in 0..params.nnz {
        let want_reuse = !seen.is_empty() && rng.random::<f64>() < params.dup_prob;
        let exhausted = seen.len() as u128 >= cells;
        let coord = if want_reuse || exhausted {
            match pick_reusable(&mut rng, &seen, &counts, max_mult) {
                Some(c) => c,
                None if exhausted => break, // nothing fresh and nothing reusable
                None => fresh_coord(&mut rng, params, &counts),
            }
        } else {
            fresh_coord(&mut rng, params, &counts)
        };
        *counts.entry(coord).or_insert_with(|| {
            seen.push(coord);
            0
        }) += 1;
        let value = match params.regime {
            ValueRegime::SmallInt => rng.random_range(-100i64..=100) as f64,
            ValueRegime::Full => {
                let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                let mantissa = 1.0 + rng.random::<f64>();
                let exponent = rng.random_range(-60i32..=60);
                sign * mantissa * 2f64.powi(exponent)
            }
        };
        entries.push(CooEntry {
            coord,
            value: Scalar(value),
        });
    }
    CooMatrix::new(params.rows, params.cols, entries)
}

fn pick_reusable(
    rng: &mut ChaCha8Rng,
    seen: &[Coord],
    counts: &HashMap<Coord, usize>,
    max_mult: usize,
) -> Option<Coord> {
    let eligible: Vec<Coord> = seen
        .iter()
        .copied()
        .filter(|c| counts[c] < max_mult)
        .collect();
    if eligible.is_empty() {
        None
    } else {
        Some(eligible[rng.random_range(0..eligible.len())])
    }
}

/// A coordinate not yet used: rejection-sample, then fall back to a
/// linear scan from a random offset when the matrix is nearly full.
fn fresh_coord(rng: &mut ChaCha8Rng, params: &GenParams, counts: &HashMap<Coord, usize>) -> Coord {
    for _ in 0..200 {
        let c = Coord::new(
            rng.random_range(0..params.rows),
            rng.random_range(0..params.cols),
        );
        if !counts.contains_key(&c) {
            return c;
        }
    }
    let cells = (params.rows as u128 * params.cols as u128) as u64;
    let start = rng.random_range(0..cells);
    for offset in 0..cells {
        let flat = (start + offset) % cells;
        let c = Coord::new(
            (flat / params.cols as u64) as i64,
            (flat % params.cols as u64) as i64,
        );
        if !counts.contains_key(&c) {
            return c;
        }
    }
    unreachable!("fresh_coord called with no unused coordinates left");
}
