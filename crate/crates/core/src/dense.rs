//! Plain row-major dense matrices, the semantic ground truth the sparse
//! forms are differentially tested against.

use crate::scalars::{fp_add, fp_mul, Scalar, ScalarFormat};

/// A rows x cols grid of scalars in row-major order. Equality is bitwise
/// per entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: i64,
    cols: i64,
    grid: Vec<Scalar>,
}

impl DenseMatrix {
    /// An all-`+0.0` matrix. Dimensions must be non-negative.
    pub fn zeros(rows: i64, cols: i64) -> Self {
        assert!(rows >= 0 && cols >= 0, "negative dimensions");
        DenseMatrix {
            rows,
            cols,
            grid: vec![Scalar::ZERO; (rows as usize) * (cols as usize)],
        }
    }

    pub fn rows(&self) -> i64 {
        self.rows
    }

    pub fn cols(&self) -> i64 {
        self.cols
    }

    pub fn get(&self, r: i64, c: i64) -> Scalar {
        assert!(0 <= r && r < self.rows && 0 <= c && c < self.cols);
        self.grid[(r * self.cols + c) as usize]
    }

    pub fn set(&mut self, r: i64, c: i64, v: Scalar) {
        assert!(0 <= r && r < self.rows && 0 <= c && c < self.cols);
        self.grid[(r * self.cols + c) as usize] = v;
    }

    /// Coordinates of entries that are not `+0.0`/`-0.0`, row-major.
    pub fn nonzero_coords(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c).0 != 0.0 {
                    out.push((r, c));
                }
            }
        }
        out
    }
}

/// Dense matrix-vector product: per row, a left-to-right fold of
/// `acc + m[r][c] * x[c]` over every column, starting from `+0.0`.
pub fn dense_spmv(m: &DenseMatrix, x: &[Scalar]) -> Vec<Scalar> {
    assert_eq!(x.len() as i64, m.cols(), "vector length must match cols");
    let fmt = ScalarFormat::Binary64;
    (0..m.rows())
        .map(|r| {
            (0..m.cols()).fold(Scalar::ZERO, |acc, c| {
                fp_add(fmt, acc, fp_mul(fmt, m.get(r, c), x[c as usize]))
            })
        })
        .collect()
}
