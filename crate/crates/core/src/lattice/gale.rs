use num_bigint::BigInt;
use serde::Serialize;

use super::group::{cokernel, dual_hom, kernel, FgAbGroup, GroupHom};
use crate::arith::{rational_rank, to_rational_vec, IntMatrix};
use crate::error::{Error, Result};

/// `β^∨ : ℤ^m → DG(β)`.
#[derive(Clone, Debug)]
pub struct GaleDual {
    pub dg: FgAbGroup,
    pub beta_vee: GroupHom,
}

/// Checks that `β` has a free source and finite cokernel.
fn check_beta(beta: &GroupHom) -> Result<()> {
    if !beta.source().is_free() {
        return Err(Error::NonFreeSource);
    }
    let d = beta.target().rank();
    let free_images: Vec<_> = beta
        .image_generators()
        .iter()
        .map(|c| to_rational_vec(&c[..d]))
        .collect();
    if rational_rank(&free_images, d) < d {
        return Err(Error::InfiniteCokernel);
    }
    Ok(())
}

/// Gale dual of `β : ℤ^m → N`, computed as the cokernel of `[B Q]^T`,
/// where `B` lifts `β` and `Q` holds the torsion relations of `N`.
pub fn gale_dual(beta: &GroupHom) -> Result<GaleDual> {
    check_beta(beta)?;
    let n = beta.target();
    let m = beta.source().coords();
    let s = n.torsion().len();
    let bq = beta.matrix().hstack(&n.relation_matrix());
    let p = FgAbGroup::presented_by(m + s, &bq.transpose());
    let cols: Vec<usize> = (0..m).collect();
    let beta_vee = GroupHom::new(beta.source().clone(), p.group.clone(), p.projection.select_columns(&cols))?;
    Ok(GaleDual {
        dg: p.group,
        beta_vee,
    })
}

/// `coker(β^∨)`: the banding group of the gerbe structure.
pub fn gerbe_group(beta: &GroupHom) -> Result<FgAbGroup> {
    let g = gale_dual(beta)?;
    Ok(cokernel(&g.beta_vee).0)
}

/// Results of checking exactness of
/// `0 → DG(β)* → ℤ^m → N → coker β → 0` and
/// `0 → N* → ℤ^m → DG(β) → coker β^∨ → 0` at every position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub dg_dual_injective: bool,
    pub exact_at_source_first: bool,
    pub exact_at_n: bool,
    pub coker_beta_finite: bool,
    pub n_dual_injective: bool,
    pub exact_at_source_second: bool,
    pub exact_at_dg: bool,
    pub coker_beta_vee_finite: bool,
    pub dg_rank_is_m_minus_d: bool,
}

impl ExactnessReport {
    pub fn is_exact(&self) -> bool {
        self.dg_dual_injective
            && self.exact_at_source_first
            && self.exact_at_n
            && self.coker_beta_finite
            && self.n_dual_injective
            && self.exact_at_source_second
            && self.exact_at_dg
            && self.coker_beta_vee_finite
            && self.dg_rank_is_m_minus_d
    }
}

/// Image of `f` equals the kernel of `g` (with `g ∘ f` composable).
fn exact_at(f: &GroupHom, g: &GroupHom) -> bool {
    let middle = g.source();
    let image = f.image_generators();
    let ker = g.kernel_generators();
    g.compose(f).map(|c| c.is_zero()).unwrap_or(false) && ker.iter().all(|x| middle.in_subgroup(&image, x))
}

pub fn verify_gale_exactness(beta: &GroupHom, gale: &GaleDual) -> Result<ExactnessReport> {
    let m = beta.source().coords();
    let d = beta.target().rank();
    let bv = &gale.beta_vee;
    let bv_dual = dual_hom(bv);
    let beta_dual = dual_hom(beta);
    let (coker_b, proj_b) = cokernel(beta);
    let (coker_bv, proj_bv) = cokernel(bv);

    let (ker_beta, ker_incl) = kernel(beta)?;
    let exact_at_source_first = beta.compose(&bv_dual).map(|c| c.is_zero()).unwrap_or(false)
        && ker_incl
            .image_generators()
            .iter()
            .all(|x| beta.source().in_subgroup(&bv_dual.image_generators(), x))
        && ker_beta.rank() == bv_dual.source().rank();

    Ok(ExactnessReport {
        dg_dual_injective: bv_dual.is_injective(),
        exact_at_source_first,
        exact_at_n: exact_at(beta, &proj_b) && proj_b.is_surjective(),
        coker_beta_finite: coker_b.is_finite(),
        n_dual_injective: beta_dual.is_injective(),
        exact_at_source_second: exact_at(&beta_dual, bv),
        exact_at_dg: exact_at(bv, &proj_bv) && proj_bv.is_surjective(),
        coker_beta_vee_finite: coker_bv.is_finite(),
        dg_rank_is_m_minus_d: gale.dg.rank() + d == m,
    })
}

/// Builds `β : ℤ^m → N` from the images of the standard basis.
pub fn beta_from_vectors(target: &FgAbGroup, vectors: &[Vec<BigInt>]) -> Result<GroupHom> {
    let matrix = IntMatrix::from_columns(target.coords(), vectors);
    GroupHom::new(FgAbGroup::free(vectors.len()), target.clone(), matrix)
}
