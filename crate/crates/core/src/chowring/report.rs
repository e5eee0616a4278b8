use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::base::BaseRing;
use super::ring::{ordinary_chow_ring, OrbifoldRing};
use crate::error::{Error, Result};
use crate::stacky::{BoxElement, ExtendedStackyFan};

/// The quotient stacky fan of a sector together with a base ring carrying the
/// induced twist classes.
///
/// Rays outside the star of `σ(v̄)` are carried along as extra vectors, so
/// that `Σ_k θ(b_k) p_k` is the same on both sides for every `θ` vanishing on
/// `σ(v̄)`.
pub fn sector_quotient(fan: &ExtendedStackyFan, base: &BaseRing, v: &BoxElement) -> Result<(ExtendedStackyFan, BaseRing)> {
    let sigma = &v.cone;
    let link = fan.fan().link_rays(sigma);
    let outside: Vec<usize> = (0..fan.n_rays())
        .filter(|r| !sigma.contains(*r) && link.binary_search(r).is_err())
        .collect();
    let mut sources: Vec<usize> = (fan.n_rays()..fan.m()).collect();
    sources.extend(&outside);
    let q = fan.quotient_with_extras(sigma, &sources)?;
    let twists = base.twists();
    if twists.len() != fan.m() {
        return Err(Error::TwistArityMismatch {
            expected: fan.m(),
            found: twists.len(),
        });
    }
    let induced = q.link_rays.iter().chain(&q.extra_sources).map(|&k| twists[k].clone()).collect();
    Ok((q.fan, base.clone().with_twists(induced)?))
}

#[derive(Clone, Debug)]
pub struct SectorSummary {
    pub sector: usize,
    pub element: BoxElement,
    pub dimension: usize,
    pub histogram: BTreeMap<BigRational, usize>,
    /// Histogram of the quotient's ordinary ring, shifted by the age.
    pub quotient_histogram: BTreeMap<BigRational, usize>,
}

impl SectorSummary {
    pub fn consistent(&self) -> bool {
        self.histogram == self.quotient_histogram
    }
}

#[derive(Clone, Debug)]
pub struct ModuleDecomposition {
    pub ring_dimension: usize,
    pub sectors: Vec<SectorSummary>,
}

impl ModuleDecomposition {
    pub fn total_dimension(&self) -> usize {
        self.sectors.iter().map(|s| s.dimension).sum()
    }

    pub fn is_consistent(&self) -> bool {
        self.total_dimension() == self.ring_dimension && self.sectors.iter().all(SectorSummary::consistent)
    }
}

/// Per-sector dimensions and degree histograms, each cross-checked against
/// the ordinary ring of the sector's quotient stacky fan.
pub fn module_decomposition_report(ring: &OrbifoldRing) -> Result<ModuleDecomposition> {
    let mut sectors = Vec::with_capacity(ring.n_sectors());
    for s in 0..ring.n_sectors() {
        let v = ring.sector(s);
        let (qfan, qbase) = sector_quotient(ring.fan(), ring.base(), v)?;
        let q = ordinary_chow_ring(&qfan, &qbase)?;
        let quotient_histogram = q.histogram().into_iter().map(|(d, c)| (d + &v.age, c)).collect();
        sectors.push(SectorSummary {
            sector: s,
            element: v.clone(),
            dimension: ring.sector_range(s).len(),
            histogram: ring.sector_histogram(s),
            quotient_histogram,
        });
    }
    Ok(ModuleDecomposition {
        ring_dimension: ring.dim(),
        sectors,
    })
}

/// Whether the structure constants agree under `bijection` (basis index of
/// `r1` to basis index of `r2`). Returns false when the bijection does not
/// preserve degrees.
pub fn isomorphic_presentation_check(r1: &OrbifoldRing, r2: &OrbifoldRing, bijection: &[usize]) -> Result<bool> {
    let n = r1.dim();
    if r2.dim() != n || bijection.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "rings of dimension {} and {} with a map on {} elements",
            n,
            r2.dim(),
            bijection.len()
        )));
    }
    let mut seen = vec![false; n];
    for &k in bijection {
        if k >= n || seen[k] {
            return Err(Error::DimensionMismatch("basis map is not a bijection".into()));
        }
        seen[k] = true;
    }
    if (0..n).any(|i| r1.basis()[i].degree != r2.basis()[bijection[i]].degree) {
        return Ok(false);
    }
    for i in 0..n {
        for j in 0..n {
            let mut mapped: Vec<(usize, BigRational)> =
                r1.product(i, j).iter().map(|(k, c)| (bijection[*k], c.clone())).collect();
            mapped.sort_by_key(|(k, _)| *k);
            if &mapped != r2.product(bijection[i], bijection[j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Matches basis elements by sector value, exponent vector and base label.
pub fn canonical_bijection(r1: &OrbifoldRing, r2: &OrbifoldRing) -> Option<Vec<usize>> {
    let key = |r: &OrbifoldRing, i: usize| -> (Vec<BigInt>, Vec<u32>, String) {
        let b = &r.basis()[i];
        (
            r.sector(b.sector).value.clone(),
            b.exponents.clone(),
            r.base().label(b.base).to_string(),
        )
    };
    let index: HashMap<_, usize> = (0..r2.dim()).map(|i| (key(r2, i), i)).collect();
    (0..r1.dim()).map(|i| index.get(&key(r1, i)).copied()).collect()
}
