//! Orbifold Chow rings of toric stack bundles.
//!
//! Each Box element `v` contributes a sector spanned by monomials
//! `y^v · Π y^{bᵢ}^{mᵢ} ⊗ e_γ`. Sectors are reduced degree by degree modulo the
//! linear relations, and products are rewritten into the target sector using
//! the Box decomposition of the product exponent.

mod base;
mod deformed;
mod report;
mod ring;

pub use base::{BaseProduct, BaseRing, BaseVec};
pub use deformed::{deformed_mul, grade, linear_relations, stanley_reisner_generators, DeformedElement};
pub use report::{
    canonical_bijection, isomorphic_presentation_check, module_decomposition_report, sector_quotient, ModuleDecomposition,
    SectorSummary,
};
pub use ring::{orbifold_ring, ordinary_chow_ring, OrbifoldRing, RingBasisElement, SparseVec, StructureReport};
