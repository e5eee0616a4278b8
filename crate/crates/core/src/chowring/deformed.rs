//! The deformed group ring `A*(B) ⊗ ℚ[N]^Σ` and the relations of the orbifold ring.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::base::BaseRing;
use crate::error::{Error, Result};
use crate::fan::{ConeRef, SimplicialFan};
use crate::stacky::ExtendedStackyFan;

/// Finite sum of `coeff · y^c ⊗ e_γ`, keyed by `(c, γ)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DeformedElement {
    terms: BTreeMap<(Vec<BigInt>, usize), BigRational>,
}

impl DeformedElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(c: Vec<BigInt>, base: usize, coeff: BigRational) -> Self {
        let mut e = Self::zero();
        e.add_term(c, base, coeff);
        e
    }

    pub fn add_term(&mut self, c: Vec<BigInt>, base: usize, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let key = (c, base);
        let slot = self.terms.entry(key.clone()).or_insert_with(BigRational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &DeformedElement) -> DeformedElement {
        let mut out = self.clone();
        for ((c, g), x) in &other.terms {
            out.add_term(c.clone(), *g, x.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<BigInt>, usize, &BigRational)> {
        self.terms.iter().map(|((c, g), x)| (c, *g, x))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `y^{c₁}·y^{c₂} = y^{c₁+c₂}` when `c̄₁, c̄₂` share a cone, else 0; base
/// parts multiply in `A*(B)`.
pub fn deformed_mul(fan: &ExtendedStackyFan, base: &BaseRing, a: &DeformedElement, b: &DeformedElement) -> DeformedElement {
    let g = fan.group();
    let mut out = DeformedElement::zero();
    for (c1, g1, x1) in a.terms() {
        for (c2, g2, x2) in b.terms() {
            if fan.fan().minimal_cone(&[fan.bar(c1), fan.bar(c2)]).is_none() {
                continue;
            }
            let c = g.add(c1, c2);
            let x = x1 * x2;
            for (k, coeff) in base.mul_basis(g1, g2).iter().enumerate() {
                if !coeff.is_zero() {
                    out.add_term(c.clone(), k, &x * coeff);
                }
            }
        }
    }
    out
}

/// `deg(y^c) = Σ aᵢ` where `c̄ = Σ aᵢ b̄ᵢ` over the minimal cone.
pub fn grade(fan: &ExtendedStackyFan, c: &[BigInt]) -> Result<BigRational> {
    let loc = fan.fan().locate(&fan.bar(c)).ok_or(Error::OutsideSupport)?;
    Ok(loc.coeffs.iter().sum())
}

/// Minimal sets of rays that span no cone.
pub fn stanley_reisner_generators(fan: &SimplicialFan) -> Vec<ConeRef> {
    let n = fan.n_rays();
    let max_size = fan.max_cones().iter().map(|c| c.len()).max().unwrap_or(0) + 1;
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn walk(fan: &SimplicialFan, n: usize, size: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<ConeRef>) {
        if current.len() == size {
            let s = ConeRef::new(current.clone());
            if fan.is_cone(&s) {
                return;
            }
            let minimal = (0..size).all(|drop| {
                let mut sub = current.clone();
                sub.remove(drop);
                fan.is_cone(&ConeRef::new(sub))
            });
            if minimal {
                out.push(s);
            }
            return;
        }
        for i in start..n {
            current.push(i);
            walk(fan, n, size, i + 1, current, out);
            current.pop();
        }
    }
    for size in 1..=max_size.min(n) {
        walk(fan, n, size, 0, &mut current, &mut out);
    }
    out
}

/// `θ(b)` for the `j`-th coordinate functional of `M = Hom(N, ℤ)`.
pub(crate) fn theta(j: usize, b: &[BigInt]) -> &BigInt {
    &b[j]
}

/// One relation `L_θ = Σ_k θ(b_k) p_k + Σ_i θ(bᵢ) y^{bᵢ}` per coordinate
/// functional `θ` of `M`.
pub fn linear_relations(fan: &ExtendedStackyFan, base: &BaseRing) -> Result<Vec<DeformedElement>> {
    check_twist_arity(fan, base)?;
    let g = fan.group();
    let mut out = Vec::with_capacity(g.rank());
    for j in 0..g.rank() {
        let mut rel = DeformedElement::zero();
        for (k, b) in fan.vectors().enumerate() {
            let t = BigRational::from_integer(theta(j, b).clone());
            for (gamma, p) in base.twists()[k].iter().enumerate() {
                rel.add_term(g.zero(), gamma, &t * p);
            }
        }
        for b in fan.ray_lifts() {
            rel.add_term(b.clone(), 0, BigRational::from_integer(theta(j, b).clone()));
        }
        out.push(rel);
    }
    Ok(out)
}

pub(crate) fn check_twist_arity(fan: &ExtendedStackyFan, base: &BaseRing) -> Result<()> {
    if base.twists().len() != fan.m() {
        return Err(Error::TwistArityMismatch {
            expected: fan.m(),
            found: base.twists().len(),
        });
    }
    Ok(())
}
