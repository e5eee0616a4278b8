//! Extended stacky fans: local groups, Box elements and quotient fans.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::{floor, fract, rational_rank, to_rational, IntMatrix};
use crate::error::{Error, Result};
use crate::fan::{ConeRef, Location, QVec, SimplicialFan};
use crate::lattice::{beta_from_vectors, FgAbGroup, GroupHom, Presented};

/// An element `v ∈ N` with `v̄ = Σ_{i∈σ} aᵢ b̄ᵢ`, `0 < aᵢ < 1`, where `σ` is
/// the minimal cone of `v̄`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoxElement {
    pub value: Vec<BigInt>,
    pub cone: ConeRef,
    /// Aligned with `cone.rays()`.
    pub coeffs: Vec<BigRational>,
    pub age: BigRational,
}

impl BoxElement {
    pub fn is_zero(&self) -> bool {
        self.cone.is_empty() && self.value.iter().all(Zero::is_zero)
    }

    /// Coefficient on ray `i` (zero off the cone).
    pub fn coeff(&self, ray: usize) -> BigRational {
        match self.cone.rays().binary_search(&ray) {
            Ok(k) => self.coeffs[k].clone(),
            Err(_) => BigRational::zero(),
        }
    }

    fn sort_key(&self) -> (&BigRational, usize, &ConeRef, &[BigInt]) {
        (&self.age, self.cone.len(), &self.cone, &self.value)
    }
}

/// `c = element.value + Σ multiplier·b_ray`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxDecomposition {
    pub element: BoxElement,
    /// `(ray, mᵢ)` for each ray of the minimal cone of `c̄`, with `mᵢ ≥ 0`.
    pub multipliers: Vec<(usize, BigInt)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedStackyFan {
    group: FgAbGroup,
    fan: SimplicialFan,
    lifts: Vec<Vec<BigInt>>,
    extra: Vec<Vec<BigInt>>,
}

/// The stacky fan `Σ/σ` with lattice `N(σ)`.
#[derive(Clone, Debug)]
pub struct StackyQuotient {
    pub cone: ConeRef,
    pub fan: ExtendedStackyFan,
    /// `N → N(σ)`.
    pub projection: GroupHom,
    /// Original ray index of each quotient ray.
    pub link_rays: Vec<usize>,
    /// Original vector index (into `b_1..b_m`) of each quotient extra vector.
    pub extra_sources: Vec<usize>,
}

impl ExtendedStackyFan {
    /// `lifts[i]` lifts the ray `b̄ᵢ`; `extra` are the additional vectors
    /// `b_{n+1}..b_m`. All vectors are in the coordinates of `group`.
    pub fn new(group: FgAbGroup, lifts: Vec<Vec<BigInt>>, cones: Vec<Vec<usize>>, extra: Vec<Vec<BigInt>>) -> Result<Self> {
        let lifts = reduce_all(&group, lifts, "ray")?;
        let extra = reduce_all(&group, extra, "extra vector")?;
        let d = group.rank();
        let rays: Vec<QVec> = lifts.iter().map(|b| bar_of(d, b)).collect();
        let fan = SimplicialFan::new(d, rays, cones)?;
        if let Some(issue) = fan.validate().into_iter().next() {
            return Err(issue);
        }
        let out = ExtendedStackyFan {
            group,
            fan,
            lifts,
            extra,
        };
        out.check_finite_cokernel()?;
        Ok(out)
    }

    fn check_finite_cokernel(&self) -> Result<()> {
        let d = self.group.rank();
        let bars: Vec<QVec> = self.vectors().map(|b| bar_of(d, b)).collect();
        if rational_rank(&bars, d) < d {
            return Err(Error::InfiniteCokernel);
        }
        Ok(())
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn fan(&self) -> &SimplicialFan {
        &self.fan
    }

    pub fn ray_lifts(&self) -> &[Vec<BigInt>] {
        &self.lifts
    }

    pub fn extra(&self) -> &[Vec<BigInt>] {
        &self.extra
    }

    pub fn n_rays(&self) -> usize {
        self.lifts.len()
    }

    /// `m = n + #extra`.
    pub fn m(&self) -> usize {
        self.lifts.len() + self.extra.len()
    }

    /// `b_1, …, b_m`.
    pub fn vectors(&self) -> impl Iterator<Item = &Vec<BigInt>> {
        self.lifts.iter().chain(self.extra.iter())
    }

    pub fn vector(&self, k: usize) -> &Vec<BigInt> {
        if k < self.lifts.len() {
            &self.lifts[k]
        } else {
            &self.extra[k - self.lifts.len()]
        }
    }

    /// `β : ℤ^m → N`.
    pub fn beta(&self) -> GroupHom {
        let vs: Vec<Vec<BigInt>> = self.vectors().cloned().collect();
        beta_from_vectors(&self.group, &vs).expect("vectors lie in N")
    }

    /// Image in `N_ℚ`.
    pub fn bar(&self, c: &[BigInt]) -> QVec {
        bar_of(self.group.rank(), c)
    }

    fn check_cone(&self, sigma: &ConeRef) -> Result<()> {
        if !self.fan.is_cone(sigma) {
            return Err(Error::NotACone(sigma.clone()));
        }
        Ok(())
    }

    /// `N(σ) = N / N_σ` with projection and section matrices.
    pub fn local_presentation(&self, sigma: &ConeRef) -> Result<Presented> {
        self.check_cone(sigma)?;
        let gens: Vec<Vec<BigInt>> = sigma.rays().iter().map(|&i| self.lifts[i].clone()).collect();
        let rel = IntMatrix::from_columns(self.group.coords(), &gens).hstack(&self.group.relation_matrix());
        Ok(FgAbGroup::presented_by(self.group.coords(), &rel))
    }

    /// `N(σ)` and the projection `N → N(σ)`.
    pub fn local_group(&self, sigma: &ConeRef) -> Result<(FgAbGroup, GroupHom)> {
        let p = self.local_presentation(sigma)?;
        let proj = GroupHom::new(self.group.clone(), p.group.clone(), p.projection)?;
        Ok((p.group, proj))
    }

    /// Writes `c` as a Box element plus a nonnegative combination of the
    /// rays of its minimal cone, given the location of `c̄`.
    fn split(&self, c: &[BigInt], loc: Location) -> BoxDecomposition {
        let mut v = c.to_vec();
        let mut multipliers = Vec::new();
        let mut rays = Vec::new();
        let mut coeffs = Vec::new();
        for (&r, a) in loc.cone.rays().iter().zip(&loc.coeffs) {
            let m = floor(a);
            if !m.is_zero() {
                for (x, b) in v.iter_mut().zip(&self.lifts[r]) {
                    *x -= &m * b;
                }
            }
            multipliers.push((r, m));
            let f = fract(a);
            if !f.is_zero() {
                rays.push(r);
                coeffs.push(f);
            }
        }
        let age = coeffs.iter().sum();
        BoxDecomposition {
            element: BoxElement {
                value: self.group.reduce(&v),
                cone: ConeRef::new(rays),
                coeffs,
                age,
            },
            multipliers,
        }
    }

    /// `c = v + Σ mᵢ bᵢ` with `v ∈ Box`, over the minimal cone of `c̄`.
    pub fn box_decompose(&self, c: &[BigInt]) -> Result<BoxDecomposition> {
        if c.len() != self.group.coords() {
            return Err(Error::DimensionMismatch("element has wrong length".into()));
        }
        let loc = self.fan.locate(&self.bar(c)).ok_or(Error::OutsideSupport)?;
        Ok(self.split(&self.group.reduce(c), loc))
    }

    /// The Box element with this value, if `v ∈ Box`.
    pub fn box_element(&self, v: &[BigInt]) -> Option<BoxElement> {
        let d = self.box_decompose(v).ok()?;
        d.multipliers.iter().all(|(_, m)| m.is_zero()).then_some(d.element)
    }

    /// `Box(σ)`: Box elements whose minimal cone is a face of `σ`, sorted.
    pub fn box_of_cone(&self, sigma: &ConeRef) -> Result<Vec<BoxElement>> {
        let p = self.local_presentation(sigma)?;
        let vecs: Vec<QVec> = sigma.rays().iter().map(|&i| self.fan.ray(i).clone()).collect();
        let mut out: Vec<BoxElement> = Vec::new();
        for t in p.group.torsion_elements() {
            let u = self.group.reduce(&p.section.mul_vec(&t));
            let coeffs = crate::arith::solve_unique(&vecs, &self.bar(&u))
                .expect("torsion of N(σ) lifts into the span of σ");
            let loc = Location {
                cone: sigma.clone(),
                coeffs: coeffs.iter().map(fract).collect(),
            };
            // shift by ⌊a⌋ first so the split sees coefficients in [0, 1)
            let mut v = u.clone();
            for (&r, a) in sigma.rays().iter().zip(&coeffs) {
                let k = floor(a);
                for (x, b) in v.iter_mut().zip(&self.lifts[r]) {
                    *x -= &k * b;
                }
            }
            let v = self.group.reduce(&v);
            let element = self.split(&v, loc).element;
            out.push(element);
        }
        sort_box(&mut out);
        Ok(out)
    }

    /// `Box(Σ)`, the union over maximal cones, sorted by age, cone and value.
    pub fn box_elements(&self) -> Vec<BoxElement> {
        let mut out = Vec::new();
        for c in self.fan.max_cones() {
            out.extend(self.box_of_cone(c).expect("maximal cones are cones"));
        }
        sort_box(&mut out);
        out
    }

    /// The unique `v₃ ∈ Box` with `v₁ + v₂ + v₃ ∈ N_σ`, where `σ` is the
    /// minimal cone containing `v̄₁` and `v̄₂`.
    pub fn box_complement(&self, v1: &BoxElement, v2: &BoxElement) -> Result<BoxElement> {
        let sigma = self
            .fan
            .minimal_cone(&[self.bar(&v1.value), self.bar(&v2.value)])
            .ok_or(Error::NoCommonCone)?;
        let mut w: Vec<BigInt> = v1.value.iter().zip(&v2.value).map(|(a, b)| -(a + b)).collect();
        let mut rays = Vec::new();
        let mut coeffs = Vec::new();
        for &r in sigma.rays() {
            let c = -(v1.coeff(r) + v2.coeff(r));
            let k = floor(&c);
            for (x, b) in w.iter_mut().zip(&self.lifts[r]) {
                *x -= &k * b;
            }
            let f = fract(&c);
            if !f.is_zero() {
                rays.push(r);
                coeffs.push(f);
            }
        }
        let age = coeffs.iter().sum();
        Ok(BoxElement {
            value: self.group.reduce(&w),
            cone: ConeRef::new(rays),
            coeffs,
            age,
        })
    }

    /// Replaces each extra vector by its Box representative. Extras outside
    /// the support are kept and their indices returned.
    pub fn normalize_extra_data(&self) -> (ExtendedStackyFan, Vec<usize>) {
        let mut warnings = Vec::new();
        let mut extra = Vec::with_capacity(self.extra.len());
        for (j, b) in self.extra.iter().enumerate() {
            match self.box_decompose(b) {
                Ok(d) => extra.push(d.element.value),
                Err(_) => {
                    warnings.push(j);
                    extra.push(b.clone());
                }
            }
        }
        let out = ExtendedStackyFan {
            group: self.group.clone(),
            fan: self.fan.clone(),
            lifts: self.lifts.clone(),
            extra,
        };
        (out, warnings)
    }

    /// `Σ/σ` over `N(σ)`; the extras are the images of the original extras.
    pub fn quotient_stacky_fan(&self, sigma: &ConeRef) -> Result<StackyQuotient> {
        let sources: Vec<usize> = (self.n_rays()..self.m()).collect();
        self.quotient_with_extras(sigma, &sources)
    }

    /// `Σ/σ` whose extra vectors are the images of `b_k` for `k ∈ extra_sources`.
    pub fn quotient_with_extras(&self, sigma: &ConeRef, extra_sources: &[usize]) -> Result<StackyQuotient> {
        let (g, proj) = self.local_group(sigma)?;
        let d = self.group.rank();
        let rational: Vec<QVec> = (0..g.rank())
            .map(|i| (0..d).map(|j| to_rational(&proj.matrix()[(i, j)])).collect())
            .collect();
        let (fan, link_rays) = self.fan.quotient_fan(sigma, &rational)?;
        let lifts: Vec<Vec<BigInt>> = link_rays.iter().map(|&r| proj.apply(&self.lifts[r])).collect();
        let extra: Vec<Vec<BigInt>> = extra_sources.iter().map(|&k| proj.apply(self.vector(k))).collect();
        for (k, (b, ray)) in lifts.iter().zip(fan.rays()).enumerate() {
            debug_assert_eq!(&bar_of(g.rank(), b), ray, "quotient ray {k} disagrees with its lift");
        }
        let qfan = ExtendedStackyFan {
            group: g,
            fan,
            lifts,
            extra,
        };
        qfan.check_finite_cokernel()?;
        Ok(StackyQuotient {
            cone: sigma.clone(),
            fan: qfan,
            projection: proj,
            link_rays,
            extra_sources: extra_sources.to_vec(),
        })
    }

    /// Box elements grouped by their minimal cone.
    pub fn box_by_cone(&self) -> BTreeMap<ConeRef, Vec<BoxElement>> {
        let mut map: BTreeMap<ConeRef, Vec<BoxElement>> = BTreeMap::new();
        for v in self.box_elements() {
            map.entry(v.cone.clone()).or_default().push(v);
        }
        map
    }
}

fn bar_of(d: usize, c: &[BigInt]) -> QVec {
    c[..d].iter().map(to_rational).collect()
}

fn reduce_all(group: &FgAbGroup, vs: Vec<Vec<BigInt>>, what: &str) -> Result<Vec<Vec<BigInt>>> {
    vs.into_iter()
        .enumerate()
        .map(|(i, v)| {
            if v.len() != group.coords() {
                Err(Error::DimensionMismatch(format!(
                    "{what} {i} has {} coordinates, expected {}",
                    v.len(),
                    group.coords()
                )))
            } else {
                Ok(group.reduce(&v))
            }
        })
        .collect()
}

fn sort_box(v: &mut Vec<BoxElement>) {
    v.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    v.dedup_by(|a, b| a.value == b.value);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int_vec, rat};

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
    fn weighted_plane_box() {
        let f = p112();
        let bx = f.box_elements();
        assert_eq!(bx.len(), 2);
        assert!(bx[0].is_zero());
        assert_eq!(bx[1].value, int_vec(&[0, -1]));
        assert_eq!(bx[1].cone, ConeRef::new(vec![0, 2]));
        assert_eq!(bx[1].coeffs, vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(bx[1].age, rat(1, 1));
        let (g, _) = f.local_group(&ConeRef::new(vec![0, 2])).unwrap();
        assert_eq!(g.order(), Some(BigInt::from(2)));
    }

    #[test]
    fn complements_in_weighted_plane() {
        let f = p112();
        let v = f.box_elements()[1].clone();
        let zero = f.box_elements()[0].clone();
        // 2v = b_1 + b_3
        assert_eq!(f.box_complement(&v, &v).unwrap(), zero);
        assert_eq!(f.box_complement(&v, &zero).unwrap(), v);
        assert_eq!(f.box_complement(&zero, &zero).unwrap(), zero);
    }

    #[test]
    fn decomposition_recovers_the_element() {
        let f = p112();
        let d = f.box_decompose(&int_vec(&[-1, -3])).unwrap();
        // (-1,-3) = (0,-1) + 1*(-1,-2)
        assert_eq!(d.element.value, int_vec(&[0, -1]));
        assert_eq!(d.multipliers, vec![(0, BigInt::from(0)), (2, BigInt::from(1))]);
    }

    #[test]
    fn torsion_in_the_lattice() {
        // P^1 with a Z/2 gerbe
        let n = FgAbGroup::new(1, int_vec(&[2])).unwrap();
        let f = ExtendedStackyFan::new(n, vec![int_vec(&[1, 1]), int_vec(&[-1, 1])], vec![vec![0], vec![1]], vec![]).unwrap();
        let bx = f.box_elements();
        assert_eq!(bx.len(), 2);
        assert_eq!(bx[1].value, int_vec(&[0, 1]));
        assert_eq!(bx[1].age, rat(0, 1));
    }
}
