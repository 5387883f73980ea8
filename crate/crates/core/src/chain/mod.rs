//! Complexes of free modules over exact rings, with verified chain maps,
//! contractions and split equivalences.

pub mod complex;
pub mod homology;
pub mod sparse;

pub use complex::{
    compose, sign_before, split_equivalence, submasks, verify_chain_map, verify_contraction,
    verify_equivalence, verify_homotopy_formula, verify_is_identity, ChainError, ChainMap,
    CoeffSystem, Complex, EquivCert, SplitSpec,
};
pub use sparse::SparseMat;
