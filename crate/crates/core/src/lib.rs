//! Exponents and bases of derivation modules of plane multiarrangements,
//! and the structure of the multiplicity lattice under the map
//! `mu -> |d1 - d2|`.
//!
//! All arithmetic is exact: rationals, real quadratic fields, and large
//! prime fields for modular cross-checks.

pub mod cache;
pub mod cli;
pub mod coxeter;
pub mod dermod;
pub mod explorer;
pub mod field;
pub mod lattice;
pub mod linalg;
pub mod poly;
pub mod theorems;

pub use dermod::{exponents, full_basis, graded_dimension, verify_saito, ExponentResult, SaitoVerdict, Solver, SolverError};
pub use field::{FieldSpec, Scalar};
pub use lattice::{Multiplicity, PointClass, ScanBox};
pub use poly::{Arrangement, Derivation, HomogPoly, LinearForm};
