//! Shared fixture: a 6 x 6 matrix with one duplicated coordinate, used
//! across the integration suites. The duplicate at (0, 0) is stored as
//! 7 followed by 3, so the represented value there is 10.
#![allow(dead_code)] // each test target uses a different subset

use coo2csr::{CooEntry, CooMatrix, CsrMatrix, Scalar};

pub const EXAMPLE_DENSE: [[f64; 6]; 6] = [
    [10.0, 0.0, 0.0, 0.0, -2.0, 0.0],
    [3.0, 9.0, 0.0, 0.0, 0.0, 3.0],
    [0.0, 7.0, 8.0, 7.0, 0.0, 0.0],
    [3.0, 0.0, 8.0, 7.0, 5.0, 0.0],
    [0.0, 8.0, 0.0, 9.0, 9.0, 13.0],
    [0.0, 4.0, 0.0, 0.0, 2.0, -1.0],
];

/// The 20 coordinate entries in sorted order: one entry per nonzero of
/// [`EXAMPLE_DENSE`], except (0, 0) which appears as 7 then 3.
pub const EXAMPLE_TRIPLES: [(i64, i64, f64); 20] = [
    (0, 0, 7.0),
    (0, 0, 3.0),
    (0, 4, -2.0),
    (1, 0, 3.0),
    (1, 1, 9.0),
    (1, 5, 3.0),
    (2, 1, 7.0),
    (2, 2, 8.0),
    (2, 3, 7.0),
    (3, 0, 3.0),
    (3, 2, 8.0),
    (3, 3, 7.0),
    (3, 4, 5.0),
    (4, 1, 8.0),
    (4, 3, 9.0),
    (4, 4, 9.0),
    (4, 5, 13.0),
    (5, 1, 4.0),
    (5, 4, 2.0),
    (5, 5, -1.0),
];

pub const EXAMPLE_ROW_PTR: [i64; 7] = [0, 2, 5, 8, 12, 16, 19];
pub const EXAMPLE_COL_IND: [i64; 19] = [0, 4, 0, 1, 5, 1, 2, 3, 0, 2, 3, 4, 1, 3, 4, 5, 1, 4, 5];
pub const EXAMPLE_VALS: [f64; 19] = [
    10.0, -2.0, 3.0, 9.0, 3.0, 7.0, 8.0, 7.0, 3.0, 8.0, 7.0, 5.0, 8.0, 9.0, 9.0, 13.0, 4.0, 2.0,
    -1.0,
];

pub fn example_coo() -> CooMatrix {
    CooMatrix::new(
        6,
        6,
        EXAMPLE_TRIPLES
            .iter()
            .map(|&(r, c, v)| CooEntry::new(r, c, v))
            .collect(),
    )
}

pub fn example_csr() -> CsrMatrix {
    CsrMatrix {
        cols: 6,
        vals: EXAMPLE_VALS.iter().copied().map(Scalar).collect(),
        col_ind: EXAMPLE_COL_IND.to_vec(),
        row_ptr: EXAMPLE_ROW_PTR.to_vec(),
    }
}
