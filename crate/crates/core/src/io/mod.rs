//! File formats and random-input generation: Matrix Market ingestion,
//! the canonical CSR text document, and seed-deterministic COO
//! generation for differential suites.

mod document;
mod gen;
mod mtx;

pub use document::{parse_csr_document, write_csr_document, CsrDocError};
pub use gen::{gen_random_coo, GenParams, ValueRegime};
pub use mtx::{parse_mtx, write_mtx, MtxError};
