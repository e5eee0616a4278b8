//! Finitely generated abelian groups, homomorphisms between them, and Gale duality.

mod gale;
mod group;
pub mod snf;

pub use gale::{beta_from_vectors, gale_dual, gerbe_group, verify_gale_exactness, ExactnessReport, GaleDual};
pub use group::{cokernel, dual, dual_hom, kernel, FgAbGroup, GroupHom, Presented};
pub use snf::{smith_normal_form, solve_integer, Snf};
