//! Degreewise linear algebra for the orbifold Chow ring.

use std::collections::{BTreeMap, HashMap};
use std::ops::Range;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::base::{BaseRing, BaseVec};
use super::deformed::{check_twist_arity, theta};
use crate::arith::{floor, rref, to_rational};
use crate::error::{Error, Result};
use crate::fan::ConeRef;
use crate::stacky::{BoxElement, ExtendedStackyFan};

/// Sparse vector over the ring basis, sorted by index, no zero entries.
pub type SparseVec = Vec<(usize, BigRational)>;

/// `y^v · Π y^{bᵢ}^{mᵢ} ⊗ e_base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingBasisElement {
    pub sector: usize,
    pub exponents: Vec<u32>,
    pub base: usize,
    /// `|m| + deg(e_base)`.
    pub level: usize,
    pub degree: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub unital: bool,
    pub commutative: bool,
    pub associative: bool,
    pub degree_additive: bool,
}

impl StructureReport {
    pub fn holds(&self) -> bool {
        self.unital && self.commutative && self.associative && self.degree_additive
    }
}

type Monomial = (Vec<u32>, usize);

#[derive(Clone, Debug)]
struct Level {
    index: HashMap<Monomial, usize>,
    /// Normal form of each monomial, over the global basis.
    normal_forms: Vec<SparseVec>,
}

#[derive(Clone, Debug)]
struct Sector {
    element: BoxElement,
    range: Range<usize>,
    levels: Vec<Level>,
}

/// Data needed to multiply basis elements.
#[derive(Clone, Debug)]
struct Lift {
    value: Vec<BigInt>,
    cone: ConeRef,
    coeffs: Vec<BigRational>,
}

/// The orbifold Chow ring with an explicit ℚ-basis and structure constants.
#[derive(Clone, Debug)]
pub struct OrbifoldRing {
    fan: ExtendedStackyFan,
    base: BaseRing,
    sectors: Vec<Sector>,
    basis: Vec<RingBasisElement>,
    lifts: Vec<Lift>,
    table: Vec<Vec<SparseVec>>,
    cap: usize,
}

/// Computes the full orbifold ring and checks its structure constants.
pub fn orbifold_ring(fan: &ExtendedStackyFan, base: &BaseRing) -> Result<OrbifoldRing> {
    let ring = OrbifoldRing::build(fan, base, fan.box_elements())?;
    ring.require_structure()?;
    Ok(ring)
}

/// The untwisted sector alone: the Chow ring of the toric stack bundle.
pub fn ordinary_chow_ring(fan: &ExtendedStackyFan, base: &BaseRing) -> Result<OrbifoldRing> {
    let zero = fan
        .box_element(&fan.group().zero())
        .ok_or(Error::StructureViolation("zero is not in Box".into()))?;
    let ring = OrbifoldRing::build(fan, base, vec![zero])?;
    ring.require_structure()?;
    Ok(ring)
}

impl OrbifoldRing {
    /// Builds the ring restricted to the given sectors, which must be closed
    /// under the product (all of Box, or the zero element alone).
    pub fn build(fan: &ExtendedStackyFan, base: &BaseRing, sectors: Vec<BoxElement>) -> Result<OrbifoldRing> {
        if !fan.fan().is_complete() {
            return Err(Error::IncompleteFan);
        }
        check_twist_arity(fan, base)?;
        let cap = base.top_degree() + fan.group().rank();
        let builder = SectorBuilder::new(fan, base);
        let mut ring = OrbifoldRing {
            fan: fan.clone(),
            base: base.clone(),
            sectors: Vec::with_capacity(sectors.len()),
            basis: Vec::new(),
            lifts: Vec::new(),
            table: Vec::new(),
            cap,
        };
        for (s, element) in sectors.into_iter().enumerate() {
            let start = ring.basis.len();
            let levels = builder.levels(s, &element, cap, &mut ring.basis)?;
            let range = start..ring.basis.len();
            ring.sectors.push(Sector {
                element,
                range,
                levels,
            });
        }
        ring.lifts = ring.basis.iter().map(|b| ring.lift_of(b)).collect();
        let sector_index: HashMap<Vec<BigInt>, usize> = ring
            .sectors
            .iter()
            .enumerate()
            .map(|(s, sec)| (sec.element.value.clone(), s))
            .collect();
        let n = ring.basis.len();
        let mut table = Vec::with_capacity(n);
        for a in 0..n {
            let mut row = Vec::with_capacity(n);
            for b in 0..n {
                row.push(ring.multiply_basis(a, b, &sector_index)?);
            }
            table.push(row);
        }
        ring.table = table;
        Ok(ring)
    }

    fn lift_of(&self, b: &RingBasisElement) -> Lift {
        let v = &self.sectors[b.sector].element;
        let n = self.fan.n_rays();
        let mut coeffs = vec![BigRational::zero(); n];
        for (&r, a) in v.cone.rays().iter().zip(&v.coeffs) {
            coeffs[r] = a.clone();
        }
        let mut value = v.value.clone();
        for (i, &e) in b.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            coeffs[i] += BigRational::from_integer(e.into());
            for (x, y) in value.iter_mut().zip(&self.fan.ray_lifts()[i]) {
                *x += BigInt::from(e) * y;
            }
        }
        let cone = ConeRef::new((0..n).filter(|&i| !coeffs[i].is_zero()).collect());
        Lift {
            value: self.fan.group().reduce(&value),
            cone,
            coeffs,
        }
    }

    fn multiply_basis(&self, a: usize, b: usize, sector_index: &HashMap<Vec<BigInt>, usize>) -> Result<SparseVec> {
        let (la, lb) = (&self.lifts[a], &self.lifts[b]);
        if !self.fan.fan().is_cone(&la.cone.union(&lb.cone)) {
            return Ok(Vec::new());
        }
        let group = self.fan.group();
        let mut value = group.add(&la.value, &lb.value);
        let mut exps = Vec::with_capacity(la.coeffs.len());
        for (i, (x, y)) in la.coeffs.iter().zip(&lb.coeffs).enumerate() {
            let m = floor(&(x + y));
            if !m.is_zero() {
                for (c, r) in value.iter_mut().zip(&self.fan.ray_lifts()[i]) {
                    *c -= &m * r;
                }
            }
            exps.push(u32::try_from(m).expect("exponent fits in u32"));
        }
        let value = group.reduce(&value);
        let s = *sector_index
            .get(&value)
            .ok_or_else(|| Error::StructureViolation("product left the computed sectors".into()))?;
        let total: usize = exps.iter().map(|&e| e as usize).sum();
        let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
        let (ga, gb) = (self.basis[a].base, self.basis[b].base);
        for (delta, coeff) in self.base.mul_basis(ga, gb).iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let level = total + self.base.degree(delta);
            let Some(lvl) = self.sectors[s].levels.get(level) else {
                continue;
            };
            let col = lvl.index[&(exps.clone(), delta)];
            for (k, c) in &lvl.normal_forms[col] {
                *acc.entry(*k).or_insert_with(BigRational::zero) += coeff * c;
            }
        }
        Ok(to_sparse(acc))
    }

    fn require_structure(&self) -> Result<()> {
        let r = self.verify();
        let failed = [
            (r.unital, "the unit law"),
            (r.commutative, "commutativity"),
            (r.associative, "associativity"),
            (r.degree_additive, "degree additivity"),
        ]
        .into_iter()
        .find(|(ok, _)| !ok);
        match failed {
            Some((_, what)) => Err(Error::StructureViolation(what.into())),
            None => Ok(()),
        }
    }

    /// Checks the unit law, commutativity, associativity on every triple,
    /// and additivity of degrees.
    pub fn verify(&self) -> StructureReport {
        let n = self.dim();
        let unital = n > 0
            && self.basis[0].level == 0
            && self.sectors[0].element.is_zero()
            && self.basis[0].base == 0
            && (0..n).all(|j| self.table[0][j] == vec![(j, BigRational::one())] && self.table[j][0] == self.table[0][j]);
        let commutative = (0..n).all(|i| (0..n).all(|j| self.table[i][j] == self.table[j][i]));
        let degree_additive = (0..n).all(|i| {
            (0..n).all(|j| {
                let d = &self.basis[i].degree + &self.basis[j].degree;
                self.table[i][j].iter().all(|(k, _)| self.basis[*k].degree == d)
            })
        });
        let associative = (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n).all(|k| {
                    let left = self.mul(&self.table[i][j], &[(k, BigRational::one())]);
                    let right = self.mul(&[(i, BigRational::one())], &self.table[j][k]);
                    left == right
                })
            })
        });
        StructureReport {
            unital,
            commutative,
            associative,
            degree_additive,
        }
    }

    pub fn fan(&self) -> &ExtendedStackyFan {
        &self.fan
    }

    pub fn base(&self) -> &BaseRing {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Degree cap used for the truncation, `top degree of the base + rank N`.
    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn basis(&self) -> &[RingBasisElement] {
        &self.basis
    }

    pub fn n_sectors(&self) -> usize {
        self.sectors.len()
    }

    pub fn sector(&self, s: usize) -> &BoxElement {
        &self.sectors[s].element
    }

    pub fn sector_range(&self, s: usize) -> Range<usize> {
        self.sectors[s].range.clone()
    }

    /// `y^c` for basis element `i`, as an element of `N`.
    pub fn basis_value(&self, i: usize) -> &[BigInt] {
        &self.lifts[i].value
    }

    pub fn product(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i][j]
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> BigRational {
        self.table[i][j]
            .iter()
            .find(|(x, _)| *x == k)
            .map_or_else(BigRational::zero, |(_, c)| c.clone())
    }

    pub fn mul(&self, a: &[(usize, BigRational)], b: &[(usize, BigRational)]) -> SparseVec {
        let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (i, x) in a {
            for (j, y) in b {
                let xy = x * y;
                for (k, c) in &self.table[*i][*j] {
                    *acc.entry(*k).or_insert_with(BigRational::zero) += &xy * c;
                }
            }
        }
        to_sparse(acc)
    }

    /// Number of basis elements in each degree.
    pub fn histogram(&self) -> BTreeMap<BigRational, usize> {
        histogram_of(self.basis.iter())
    }

    pub fn sector_histogram(&self, s: usize) -> BTreeMap<BigRational, usize> {
        histogram_of(self.basis[self.sector_range(s)].iter())
    }

    /// Readable name such as `y1^2*y3*H` or `v2*y1`.
    pub fn basis_label(&self, i: usize) -> String {
        let b = &self.basis[i];
        let mut parts = Vec::new();
        if !self.sectors[b.sector].element.is_zero() {
            parts.push(format!("v{}", b.sector));
        }
        for (r, &e) in b.exponents.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("y{}", r + 1)),
                _ => parts.push(format!("y{}^{e}", r + 1)),
            }
        }
        if b.base != 0 {
            parts.push(self.base.label(b.base).to_string());
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// Index of the basis element with this description, if it is standard.
    pub fn find_basis(&self, sector: usize, exponents: &[u32], base: usize) -> Option<usize> {
        self.basis[self.sector_range(sector)]
            .iter()
            .position(|b| b.exponents == exponents && b.base == base)
            .map(|k| k + self.sectors[sector].range.start)
    }
}

fn histogram_of<'a>(it: impl Iterator<Item = &'a RingBasisElement>) -> BTreeMap<BigRational, usize> {
    let mut h = BTreeMap::new();
    for b in it {
        *h.entry(b.degree.clone()).or_insert(0) += 1;
    }
    h
}

fn to_sparse(acc: BTreeMap<usize, BigRational>) -> SparseVec {
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Per-sector monomial enumeration and row reduction.
struct SectorBuilder<'a> {
    fan: &'a ExtendedStackyFan,
    base: &'a BaseRing,
    /// `θⱼ(bᵢ)` for the rays.
    ray_theta: Vec<Vec<BigRational>>,
    /// `c₁(ξ_θⱼ) = Σ_k θⱼ(b_k) p_k`.
    twist_class: Vec<BaseVec>,
}

impl<'a> SectorBuilder<'a> {
    fn new(fan: &'a ExtendedStackyFan, base: &'a BaseRing) -> Self {
        let d = fan.group().rank();
        let ray_theta = (0..d)
            .map(|j| fan.ray_lifts().iter().map(|b| to_rational(theta(j, b))).collect())
            .collect();
        let twist_class = (0..d)
            .map(|j| {
                let mut c = base.zero();
                for (k, b) in fan.vectors().enumerate() {
                    let t = to_rational(theta(j, b));
                    for (x, p) in c.iter_mut().zip(&base.twists()[k]) {
                        *x += &t * p;
                    }
                }
                c
            })
            .collect();
        SectorBuilder {
            fan,
            base,
            ray_theta,
            twist_class,
        }
    }

    /// Monomials `(m, γ)` at `level` whose support together with `σ` is a cone,
    /// largest first: `m` descending lexicographically, then smaller `γ`.
    fn monomials(&self, sigma: &ConeRef, level: usize) -> Vec<Monomial> {
        let n = self.fan.n_rays();
        let mut out = Vec::new();
        for g in 0..self.base.dim() {
            let deg = self.base.degree(g);
            if deg > level {
                continue;
            }
            let mut m = vec![0u32; n];
            self.exponents(sigma, 0, level - deg, &mut m, &mut |m| out.push((m.to_vec(), g)));
        }
        out.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        out
    }

    fn exponents(&self, sigma: &ConeRef, i: usize, left: usize, m: &mut Vec<u32>, emit: &mut dyn FnMut(&[u32])) {
        if left == 0 {
            emit(m);
            return;
        }
        if i == m.len() {
            return;
        }
        // m_i = 0
        self.exponents(sigma, i + 1, left, m, emit);
        let mut support: Vec<usize> = (0..i).filter(|&r| m[r] > 0).collect();
        support.push(i);
        if !self.fan.fan().is_cone(&sigma.union(&ConeRef::new(support))) {
            return;
        }
        for e in 1..=left {
            m[i] = e as u32;
            self.exponents(sigma, i + 1, left - e, m, emit);
        }
        m[i] = 0;
    }

    fn allowed(&self, sigma: &ConeRef, m: &[u32]) -> bool {
        let support: Vec<usize> = (0..m.len()).filter(|&r| m[r] > 0).collect();
        self.fan.fan().is_cone(&sigma.union(&ConeRef::new(support)))
    }

    /// Reduces every level `0..=cap+1` of the sector, appending standard
    /// monomials to `basis`.
    fn levels(&self, s: usize, v: &BoxElement, cap: usize, basis: &mut Vec<RingBasisElement>) -> Result<Vec<Level>> {
        let sigma = &v.cone;
        let mut levels: Vec<Level> = Vec::new();
        let mut previous: Vec<Monomial> = Vec::new();
        for level in 0..=cap + 1 {
            let cols = self.monomials(sigma, level);
            let index: HashMap<Monomial, usize> = cols.iter().cloned().enumerate().map(|(k, m)| (m, k)).collect();
            let mut rows = Vec::new();
            if level > 0 {
                for (m, g) in &previous {
                    for j in 0..self.ray_theta.len() {
                        let mut row = vec![BigRational::zero(); cols.len()];
                        for (delta, c) in self.base.mul(&self.base.basis_vector(*g), &self.twist_class[j]).iter().enumerate() {
                            if !c.is_zero() {
                                row[index[&(m.clone(), delta)]] += c;
                            }
                        }
                        for (i, t) in self.ray_theta[j].iter().enumerate() {
                            if t.is_zero() {
                                continue;
                            }
                            let mut m2 = m.clone();
                            m2[i] += 1;
                            if self.allowed(sigma, &m2) {
                                row[index[&(m2, *g)]] += t;
                            }
                        }
                        if row.iter().any(|x| !x.is_zero()) {
                            rows.push(row);
                        }
                    }
                }
            }
            let red = rref(rows, cols.len());
            let mut is_pivot = vec![None; cols.len()];
            for (r, &p) in red.pivots.iter().enumerate() {
                is_pivot[p] = Some(r);
            }
            let mut global = vec![usize::MAX; cols.len()];
            for (k, (m, g)) in cols.iter().enumerate() {
                if is_pivot[k].is_none() {
                    if level == cap + 1 {
                        return Err(Error::InfiniteDimensional { sector: s, level });
                    }
                    global[k] = basis.len();
                    basis.push(RingBasisElement {
                        sector: s,
                        exponents: m.clone(),
                        base: *g,
                        level,
                        degree: &v.age + BigRational::from_integer(level.into()),
                    });
                }
            }
            let normal_forms = (0..cols.len())
                .map(|k| match is_pivot[k] {
                    None => vec![(global[k], BigRational::one())],
                    Some(r) => {
                        let mut nf: SparseVec = (0..cols.len())
                            .filter(|&c| is_pivot[c].is_none() && !red.rows[r][c].is_zero())
                            .map(|c| (global[c], -red.rows[r][c].clone()))
                            .collect();
                        nf.sort_by_key(|(i, _)| *i);
                        nf
                    }
                })
                .collect();
            levels.push(Level { index, normal_forms });
            previous = cols;
        }
        Ok(levels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int_vec, rat};
    use crate::lattice::FgAbGroup;

    fn p112() -> ExtendedStackyFan {
        ExtendedStackyFan::new(
            FgAbGroup::free(2),
            vec![int_vec(&[1, 0]), int_vec(&[0, 1]), int_vec(&[-1, -2])],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn weighted_plane_over_a_point() {
        let f = p112();
        let ring = orbifold_ring(&f, &BaseRing::point().with_zero_twists(3)).unwrap();
        assert_eq!(ring.dim(), 4);
        let h: Vec<(BigRational, usize)> = ring.histogram().into_iter().collect();
        assert_eq!(h, vec![(rat(0, 1), 1), (rat(1, 1), 2), (rat(2, 1), 1)]);
        let v = ring.sector_range(1).start;
        let a = ring.find_basis(0, &[0, 0, 1], 0).unwrap();
        let top = ring.find_basis(0, &[0, 0, 2], 0).unwrap();
        assert_eq!(ring.product(a, a), &vec![(top, rat(1, 1))]);
        assert_eq!(ring.product(v, v), &vec![(top, rat(1, 1))]);
        assert!(ring.product(a, v).is_empty());
    }

    #[test]
    fn incomplete_fan_rejected() {
        let f = ExtendedStackyFan::new(FgAbGroup::free(1), vec![int_vec(&[1])], vec![vec![0]], vec![]).unwrap();
        let err = orbifold_ring(&f, &BaseRing::point().with_zero_twists(1)).unwrap_err();
        assert_eq!(err, Error::IncompleteFan);
    }
}
