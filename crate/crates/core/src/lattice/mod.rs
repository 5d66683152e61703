//! Lattice reduction and integer relation detection.

pub mod lll;
pub mod relation;

pub use lll::{lll_reduce, IntLattice};
pub use relation::{
    find_int_relation, find_int_relation_reverified, find_int_relation_with, find_vector_relation, guess_min_poly, guess_min_poly_with, LatticeConfig,
    RelationReport, Verdict,
};
