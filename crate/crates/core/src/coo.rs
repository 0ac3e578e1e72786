//! Coordinate-form sparse matrices: row-major entry ordering, stable
//! sorting, distinct-coordinate counting, and prefix truncation.

use std::collections::HashSet;

use crate::scalars::Scalar;

/// A (row, col) coordinate. The derived `Ord` is the row-major
/// lexicographic order: `(r1, c1) <= (r2, c2)` iff `r1 < r2`, or
/// `r1 == r2` and `c1 <= c2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coord {
    pub row: i64,
    pub col: i64,
}

impl Coord {
    pub fn new(row: i64, col: i64) -> Self {
        Coord { row, col }
    }
}

/// One coordinate-form entry. Value equality is bitwise via [`Scalar`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CooEntry {
    pub coord: Coord,
    pub value: Scalar,
}

impl CooEntry {
    pub fn new(row: i64, col: i64, value: f64) -> Self {
        CooEntry {
            coord: Coord::new(row, col),
            value: Scalar(value),
        }
    }
}

/// A coordinate-form sparse matrix. Entries are an ordered sequence;
/// several entries may share a coordinate, and the represented matrix
/// holds their floating-point sum there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CooMatrix {
    pub rows: i64,
    pub cols: i64,
    pub entries: Vec<CooEntry>,
}

impl CooMatrix {
    pub fn new(rows: i64, cols: i64, entries: Vec<CooEntry>) -> Self {
        CooMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Dimensions are non-negative and every entry is within bounds.
    pub fn is_wellformed(&self) -> bool {
        self.rows >= 0
            && self.cols >= 0
            && self.entries.iter().all(|e| {
                0 <= e.coord.row
                    && e.coord.row < self.rows
                    && 0 <= e.coord.col
                    && e.coord.col < self.cols
            })
    }

    /// Entries are non-decreasing under the row-major coordinate order.
    pub fn is_sorted(&self) -> bool {
        entries_sorted(&self.entries)
    }

    /// A copy whose entries are stably sorted by coordinate. Stability
    /// makes duplicate values keep their appearance order, which is what
    /// pins duplicate accumulation to a single deterministic result.
    pub fn sort_entries(&self) -> CooMatrix {
        let mut entries = self.entries.clone();
        entries.sort_by_key(|e| e.coord);
        CooMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    /// The same matrix truncated to its first `i` entries.
    pub fn upto(&self, i: usize) -> CooMatrix {
        assert!(i <= self.entries.len());
        CooMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries[..i].to_vec(),
        }
    }

    /// Distinct-coordinate count of the first `i` entries. Requires the
    /// entries to be sorted, like [`count_distinct`].
    pub fn cd_upto(&self, i: usize) -> usize {
        count_distinct(&self.entries[..i])
    }

    /// Equal dimensions and entry lists that are permutations of each
    /// other (multiset equality, bitwise on values).
    pub fn equiv(&self, other: &CooMatrix) -> bool {
        if self.rows != other.rows || self.cols != other.cols {
            return false;
        }
        if self.entries.len() != other.entries.len() {
            return false;
        }
        let canon = |m: &CooMatrix| {
            let mut keyed: Vec<(i64, i64, u64)> = m
                .entries
                .iter()
                .map(|e| (e.coord.row, e.coord.col, e.value.to_bits()))
                .collect();
            keyed.sort_unstable();
            keyed
        };
        canon(self) == canon(other)
    }
}

fn entries_sorted(entries: &[CooEntry]) -> bool {
    entries.windows(2).all(|w| w[0].coord <= w[1].coord)
}

/// Number of distinct coordinates in a sorted entry list, counted by
/// adjacent differences: 0 for the empty list, otherwise 1 plus the
/// number of positions where the coordinate changes.
///
/// The run-counting formula only equals the distinct-set size on sorted
/// input; calling this on unsorted entries is a contract violation.
pub fn count_distinct(entries: &[CooEntry]) -> usize {
    debug_assert!(
        entries_sorted(entries),
        "count_distinct requires coordinate-sorted entries"
    );
    if entries.is_empty() {
        0
    } else {
        1 + entries
            .windows(2)
            .filter(|w| w[0].coord != w[1].coord)
            .count()
    }
}

/// Independent oracle for [`count_distinct`]: the cardinality of the
/// coordinate set, with no sortedness assumption.
pub fn distinct_coord_count_by_set(entries: &[CooEntry]) -> usize {
    entries
        .iter()
        .map(|e| e.coord)
        .collect::<HashSet<_>>()
        .len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn coo(rows: i64, cols: i64, triples: &[(i64, i64, f64)]) -> CooMatrix {
        CooMatrix::new(
            rows,
            cols,
            triples
                .iter()
                .map(|&(r, c, v)| CooEntry::new(r, c, v))
                .collect(),
        )
    }

    #[test]
    fn wellformed_examples() {
        assert!(coo(0, 0, &[]).is_wellformed());
        assert!(!coo(2, 2, &[(2, 0, 1.0)]).is_wellformed());
        assert!(!coo(-1, 3, &[]).is_wellformed());
        assert!(coo(3, 3, &[(0, 0, 1.0), (2, 2, -1.0)]).is_wellformed());
        assert!(!coo(3, 3, &[(0, -1, 1.0)]).is_wellformed());
    }

    #[test]
    fn coordinate_order_is_row_major() {
        assert!(Coord::new(0, 5) < Coord::new(1, 0));
        assert!(Coord::new(1, 0) <= Coord::new(1, 0));
        assert!(Coord::new(1, 2) < Coord::new(1, 3));
    }

    #[test]
    fn sort_is_fixpoint_on_sorted_input() {
        let m = coo(3, 3, &[(0, 1, 1.0), (1, 0, 2.0), (2, 2, 3.0)]);
        assert_eq!(m.sort_entries(), m);
    }

    #[test]
    fn sort_puts_rows_before_columns() {
        let m = coo(2, 6, &[(1, 0, 1.0), (0, 5, 2.0)]);
        let sorted = m.sort_entries();
        assert_eq!(
            sorted.entries,
            vec![CooEntry::new(0, 5, 2.0), CooEntry::new(1, 0, 1.0)]
        );
    }

    #[test]
    fn sort_is_stable_for_equal_coordinates() {
        // Values tag the appearance order; reversal must be preserved.
        let m = coo(1, 1, &[(0, 0, 3.0), (0, 0, 7.0)]);
        let sorted = m.sort_entries();
        assert_eq!(sorted.entries[0].value, Scalar(3.0));
        assert_eq!(sorted.entries[1].value, Scalar(7.0));
    }

    #[test]
    fn count_distinct_examples() {
        assert_eq!(count_distinct(&[]), 0);
        let entries = vec![
            CooEntry::new(0, 0, 1.0),
            CooEntry::new(0, 0, 2.0),
            CooEntry::new(0, 1, 3.0),
        ];
        assert_eq!(count_distinct(&entries), 2);
        assert_eq!(distinct_coord_count_by_set(&entries), 2);
    }

    #[test]
    fn cd_upto_examples() {
        let m = coo(2, 2, &[(0, 0, 1.0), (0, 0, 2.0), (0, 1, 3.0), (1, 1, 4.0)]);
        assert_eq!(m.cd_upto(0), 0);
        assert_eq!(m.cd_upto(2), 1);
        assert_eq!(m.cd_upto(3), 2);
        assert_eq!(m.cd_upto(4), 3);
    }

    #[test]
    fn upto_examples() {
        let m = coo(2, 2, &[(0, 0, 1.0), (1, 1, 2.0)]);
        assert_eq!(m.upto(m.entries.len()), m);
        let empty = m.upto(0);
        assert_eq!(empty.rows, 2);
        assert_eq!(empty.cols, 2);
        assert!(empty.entries.is_empty());
    }

    #[test]
    fn equiv_examples() {
        let m = coo(2, 2, &[(1, 1, 2.0), (0, 0, 1.0)]);
        assert!(m.equiv(&m.sort_entries()));

        let mut flipped = m.clone();
        flipped.entries[0].value = Scalar(f64::from_bits(Scalar(2.0).to_bits() ^ 1));
        assert!(!m.equiv(&flipped));

        let mut taller = m.clone();
        taller.rows = 3;
        assert!(!m.equiv(&taller));
    }

    #[test]
    fn equiv_is_multiset_equality_not_set_equality() {
        let a = coo(1, 1, &[(0, 0, 1.0), (0, 0, 1.0)]);
        let b = coo(1, 1, &[(0, 0, 1.0)]);
        assert!(!a.equiv(&b));
    }

    fn arb_coo() -> impl Strategy<Value = CooMatrix> {
        (0i64..=6, 0i64..=6).prop_flat_map(|(rows, cols)| {
            let entry = (0..rows.max(1), 0..cols.max(1), -100i64..=100)
                .prop_map(|(r, c, v)| CooEntry::new(r, c, v as f64));
            let max = if rows == 0 || cols == 0 { 0 } else { 12 };
            proptest::collection::vec(entry, 0..=max)
                .prop_map(move |entries| CooMatrix::new(rows, cols, entries))
        })
    }

    proptest! {
        #[test]
        fn sort_output_is_sorted_permutation(m in arb_coo()) {
            let sorted = m.sort_entries();
            prop_assert!(sorted.is_sorted());
            prop_assert!(m.equiv(&sorted));
        }

        #[test]
        fn sort_is_stable(m in arb_coo()) {
            // Tag every entry with its input index through the value.
            let tagged = CooMatrix::new(
                m.rows,
                m.cols,
                m.entries
                    .iter()
                    .enumerate()
                    .map(|(i, e)| CooEntry {
                        coord: e.coord,
                        value: Scalar(i as f64),
                    })
                    .collect(),
            );
            let sorted = tagged.sort_entries();
            for w in sorted.entries.windows(2) {
                if w[0].coord == w[1].coord {
                    prop_assert!(w[0].value.0 < w[1].value.0);
                }
            }
        }

        #[test]
        fn count_distinct_matches_set_oracle(m in arb_coo()) {
            let sorted = m.sort_entries();
            prop_assert_eq!(
                count_distinct(&sorted.entries),
                distinct_coord_count_by_set(&sorted.entries)
            );
        }

        #[test]
        fn cd_upto_is_monotone_and_complete(m in arb_coo()) {
            let sorted = m.sort_entries();
            let n = sorted.entries.len();
            let mut prev = 0;
            for i in 0..=n {
                let cd = sorted.cd_upto(i);
                prop_assert!(cd >= prev);
                prop_assert!(cd - prev <= 1);
                prev = cd;
            }
            prop_assert_eq!(prev, count_distinct(&sorted.entries));
        }

        #[test]
        fn upto_preserves_wellformedness(m in arb_coo(), frac in 0.0f64..=1.0) {
            prop_assume!(m.is_wellformed());
            let i = (frac * m.entries.len() as f64) as usize;
            prop_assert!(m.upto(i.min(m.entries.len())).is_wellformed());
        }
    }
}
