//! Construction of compressed-sparse-row (CSR) matrices from
//! coordinate-form (COO) input, with every structural invariant of the
//! conversion executable as a runtime check.
//!
//! The conversion itself is the classic one: stably sort the entries by
//! (row, column), then fill the three CSR arrays left to right, folding
//! duplicate coordinates with IEEE addition as they are encountered. What
//! this crate adds around it:
//!
//! - [`scalars`]: bit-for-bit scalar comparison and a brute-force oracle
//!   enumerating every floating-point sum reachable by reordering and
//!   reassociating a value list.
//! - [`coo`] / [`csr`] / [`dense`]: the three matrix forms, each with its
//!   checkable well-formedness or ground-truth role.
//! - [`convert`]: the conversion, optionally emitting a per-step trace.
//! - [`relations`]: executable correspondence relations between the forms
//!   (entry correspondence, no extra zeros, partial-CSR states) and a
//!   replay checker that validates every traced step.
//! - [`io`]: Matrix Market ingestion, a canonical CSR text document, and
//!   seed-deterministic random generation for differential suites.

pub mod convert;
pub mod coo;
pub mod csr;
pub mod dense;
pub mod io;
pub mod relations;
pub mod scalars;

pub use convert::{
    convert_with_trace, coo_to_csr, ConversionState, ConvertError, TraceEvent, TraceKind,
};
pub use coo::{CooEntry, CooMatrix, Coord};
pub use csr::{CsrMatrix, DEFAULT_INDEX_BOUND};
pub use dense::DenseMatrix;
pub use scalars::{Scalar, ScalarFormat};
