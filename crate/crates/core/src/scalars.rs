//! Floating-point scalars compared bit-for-bit, format-parameterized IEEE
//! arithmetic, and the brute-force enumeration of every sum reachable by
//! reordering and reassociating a list of values.

use std::collections::HashSet;
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

/// IEEE-754 binary interchange format governing arithmetic semantics.
///
/// Addition and multiplication under a format are exactly the IEEE
/// operations for that width, round-to-nearest-even. Values are carried
/// as `f64`; `Binary32` operands are assumed exactly representable in
/// single precision, so narrowing before the operation is exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarFormat {
    Binary32,
    Binary64,
}

/// A floating-point value with bitwise equality and hashing.
///
/// `-0.0` and `+0.0` are distinct, and a NaN equals itself when the bit
/// patterns agree. This is the equality used throughout the differential
/// suites.
#[derive(Clone, Copy)]
pub struct Scalar(pub f64);

impl Scalar {
    /// Positive zero, the sum of an empty value list.
    pub const ZERO: Scalar = Scalar(0.0);

    pub fn to_bits(self) -> u64 {
        self.0.to_bits()
    }

    pub fn from_bits(bits: u64) -> Self {
        Scalar(f64::from_bits(bits))
    }
}

impl From<f64> for Scalar {
    fn from(v: f64) -> Self {
        Scalar(v)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.to_bits() == other.to_bits()
    }
}

impl Eq for Scalar {}

impl std::hash::Hash for Scalar {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.to_bits().hash(state);
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Default cap on the length of value lists fed to the enumeration oracle.
///
/// Permutations times association trees grows as n! * Catalan(n-1);
/// seven elements is about 665k additions, which keeps a single oracle
/// call in the millisecond range.
pub const SUM_ANY_CAP: usize = 7;

/// A value list was too long for exhaustive enumeration. Callers fall back
/// to checking membership of the deterministic left-to-right sum only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("value list of length {len} exceeds the enumeration cap {cap}")]
pub struct LengthCapExceeded {
    pub len: usize,
    pub cap: usize,
}

/// IEEE addition in the given format, round-to-nearest-even. Not reordered,
/// not fused.
pub fn fp_add(format: ScalarFormat, a: Scalar, b: Scalar) -> Scalar {
    match format {
        ScalarFormat::Binary64 => Scalar(a.0 + b.0),
        ScalarFormat::Binary32 => Scalar(((a.0 as f32) + (b.0 as f32)) as f64),
    }
}

/// IEEE multiplication in the given format.
pub fn fp_mul(format: ScalarFormat, a: Scalar, b: Scalar) -> Scalar {
    match format {
        ScalarFormat::Binary64 => Scalar(a.0 * b.0),
        ScalarFormat::Binary32 => Scalar(((a.0 as f32) * (b.0 as f32)) as f64),
    }
}

/// Sum of `vals` in sequence order: the first element seeds the fold and
/// each later element is added on the right. The empty list sums to `+0.0`.
///
/// Seeding with the first element (rather than `+0.0`) matters bitwise: the
/// singleton `[-0.0]` sums to `-0.0`, not `+0.0 + -0.0 = +0.0`.
pub fn sum_left_to_right(format: ScalarFormat, vals: &[Scalar]) -> Scalar {
    match vals.split_first() {
        None => Scalar::ZERO,
        Some((&first, rest)) => rest.iter().fold(first, |acc, &v| fp_add(format, acc, v)),
    }
}

/// Every value obtainable by summing `vals` once each, in any order and
/// under any binary association tree.
///
/// The empty list yields `{+0.0}` and a singleton `[x]` yields `{x}`.
/// Enumeration is exhaustive: all permutations, and per permutation an
/// interval table of all association splits.
pub fn sum_any_set(
    format: ScalarFormat,
    vals: &[Scalar],
    max_len: usize,
) -> Result<HashSet<Scalar>, LengthCapExceeded> {
    if vals.len() > max_len {
        return Err(LengthCapExceeded {
            len: vals.len(),
            cap: max_len,
        });
    }
    let mut out = HashSet::new();
    if vals.is_empty() {
        out.insert(Scalar::ZERO);
        return Ok(out);
    }
    for perm in vals.iter().copied().permutations(vals.len()) {
        out.extend(association_sums(format, &perm));
    }
    Ok(out)
}

/// Membership in [`sum_any_set`] under bitwise equality.
pub fn sum_any_member(
    format: ScalarFormat,
    vals: &[Scalar],
    s: Scalar,
    max_len: usize,
) -> Result<bool, LengthCapExceeded> {
    Ok(sum_any_set(format, vals, max_len)?.contains(&s))
}

/// All sums of `seq` in the given order, over every association tree.
/// Interval dynamic program: `table[(start, len)]` holds the sums of
/// `seq[start .. start + len]`; deduplication per cell prunes the blowup.
fn association_sums(format: ScalarFormat, seq: &[Scalar]) -> HashSet<Scalar> {
    let n = seq.len();
    debug_assert!(n >= 1);
    // table[len - 1][start]
    let mut table: Vec<Vec<HashSet<Scalar>>> = Vec::with_capacity(n);
    table.push(seq.iter().map(|&v| HashSet::from([v])).collect());
    for len in 2..=n {
        let mut row = Vec::with_capacity(n - len + 1);
        for start in 0..=n - len {
            let mut cell = HashSet::new();
            for split in 1..len {
                for &a in &table[split - 1][start] {
                    for &b in &table[len - split - 1][start + split] {
                        cell.insert(fp_add(format, a, b));
                    }
                }
            }
            row.push(cell);
        }
        table.push(row);
    }
    table.pop().unwrap().pop().unwrap()
}
