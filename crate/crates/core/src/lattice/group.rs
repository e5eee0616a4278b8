use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::snf::{integer_kernel, smith_normal_form, solve_integer};
use crate::arith::IntMatrix;
use crate::error::{Error, Result};

/// `ℤ^rank ⊕ ℤ/q₁ ⊕ … ⊕ ℤ/q_s` with `q₁ | q₂ | … | q_s` and every `qⱼ ≥ 2`.
///
/// Elements are coordinate vectors of length `rank + s`: free coordinates
/// first, then torsion coordinates reduced into `[0, qⱼ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FgAbGroup {
    rank: usize,
    #[serde(rename = "invariant_factors", serialize_with = "serialize_ints")]
    torsion: Vec<BigInt>,
}

fn serialize_ints<S: serde::Serializer>(xs: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        match x.to_i64() {
            Some(v) => seq.serialize_element(&v)?,
            None => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

/// A group produced from a presentation, together with the maps relating it
/// to the ambient coordinates.
#[derive(Clone, Debug)]
pub struct Presented {
    pub group: FgAbGroup,
    /// `coords × generators`: sends ambient vectors to group coordinates.
    pub projection: IntMatrix,
    /// `generators × coords`: a lift of each group coordinate.
    pub section: IntMatrix,
}

impl FgAbGroup {
    pub fn new(rank: usize, torsion: Vec<BigInt>) -> Result<Self> {
        for (j, q) in torsion.iter().enumerate() {
            if q < &BigInt::from(2) {
                return Err(Error::InvalidGroup(format!("factor {q} is below 2")));
            }
            if j > 0 && !(q % &torsion[j - 1]).is_zero() {
                return Err(Error::InvalidGroup(format!(
                    "{} does not divide {q}",
                    torsion[j - 1]
                )));
            }
        }
        Ok(FgAbGroup { rank, torsion })
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    /// `ℤ^rank ⊕ ⊕ ℤ/orders[j]` for arbitrary positive orders. The free
    /// coordinates are kept as they are; only the torsion block is rewritten.
    pub fn from_orders(rank: usize, orders: &[BigInt]) -> Result<Presented> {
        if let Some(q) = orders.iter().find(|q| !q.is_positive()) {
            return Err(Error::InvalidGroup(format!("torsion order {q} is not positive")));
        }
        let s = orders.len();
        let mut rel = IntMatrix::zeros(s, s);
        for (j, q) in orders.iter().enumerate() {
            rel.set(j, j, q.clone());
        }
        let tors = Self::presented_by(s, &rel);
        let t = tors.group.torsion.len();
        debug_assert_eq!(tors.group.rank, 0);
        let mut projection = IntMatrix::zeros(rank + t, rank + s);
        let mut section = IntMatrix::zeros(rank + s, rank + t);
        for i in 0..rank {
            projection.set(i, i, BigInt::one());
            section.set(i, i, BigInt::one());
        }
        for r in 0..t {
            for c in 0..s {
                projection.set(rank + r, rank + c, tors.projection[(r, c)].clone());
                section.set(rank + c, rank + r, tors.section[(c, r)].clone());
            }
        }
        Ok(Presented {
            group: FgAbGroup {
                rank,
                torsion: tors.group.torsion,
            },
            projection,
            section,
        })
    }

    /// `ℤ^generators / (column span of relations)`.
    pub fn presented_by(generators: usize, relations: &IntMatrix) -> Presented {
        assert_eq!(relations.rows(), generators, "relation matrix has wrong height");
        let snf = smith_normal_form(relations);
        let diag = snf.diagonal();
        let r = snf.rank();
        let torsion_rows: Vec<usize> = (0..r).filter(|&i| !diag[i].is_one()).collect();
        let mut rows: Vec<usize> = (r..generators).collect();
        rows.extend(&torsion_rows);
        let torsion: Vec<BigInt> = torsion_rows.iter().map(|&i| diag[i].clone()).collect();
        let group = FgAbGroup {
            rank: generators - r,
            torsion,
        };
        Presented {
            projection: snf.u.select_rows(&rows),
            section: snf.u_inv.select_columns(&rows),
            group,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    /// Length of coordinate vectors.
    pub fn coords(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Order of a finite group.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    pub fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.coords()]
    }

    pub fn reduce(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.coords(), "element has wrong length");
        let mut out = x.to_vec();
        for (j, q) in self.torsion.iter().enumerate() {
            out[self.rank + j] = out[self.rank + j].mod_floor(q);
        }
        out
    }

    pub fn is_reduced(&self, x: &[BigInt]) -> bool {
        x.len() == self.coords() && self.reduce(x) == x
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let s: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.reduce(&s)
    }

    pub fn sub(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let s: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.reduce(&s)
    }

    pub fn neg(&self, a: &[BigInt]) -> Vec<BigInt> {
        let s: Vec<BigInt> = a.iter().map(|x| -x).collect();
        self.reduce(&s)
    }

    pub fn scale(&self, k: &BigInt, a: &[BigInt]) -> Vec<BigInt> {
        let s: Vec<BigInt> = a.iter().map(|x| x * k).collect();
        self.reduce(&s)
    }

    pub fn is_zero(&self, a: &[BigInt]) -> bool {
        self.reduce(a).iter().all(Zero::is_zero)
    }

    /// Free part of an element.
    pub fn free_part<'a>(&self, a: &'a [BigInt]) -> &'a [BigInt] {
        &a[..self.rank]
    }

    /// Columns `qⱼ e_{rank+j}`: the relations of the torsion block.
    pub fn relation_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.coords(), self.torsion.len());
        for (j, q) in self.torsion.iter().enumerate() {
            m.set(self.rank + j, j, q.clone());
        }
        m
    }

    /// All elements of the torsion subgroup, in lexicographic order.
    pub fn torsion_elements(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![self.zero()];
        for (j, q) in self.torsion.iter().enumerate() {
            let q = q.to_usize().expect("torsion order too large to enumerate");
            let mut next = Vec::with_capacity(out.len() * q);
            for e in &out {
                for t in 0..q {
                    let mut e = e.clone();
                    e[self.rank + j] = BigInt::from(t);
                    next.push(e);
                }
            }
            out = next;
        }
        out
    }

    /// Integer coefficients expressing `x` in the subgroup generated by `gens`.
    pub fn express(&self, gens: &[Vec<BigInt>], x: &[BigInt]) -> Option<Vec<BigInt>> {
        let a = IntMatrix::from_columns(self.coords(), gens).hstack(&self.relation_matrix());
        solve_integer(&a, x).map(|y| y[..gens.len()].to_vec())
    }

    pub fn in_subgroup(&self, gens: &[Vec<BigInt>], x: &[BigInt]) -> bool {
        self.express(gens, x).is_some()
    }

    pub fn same_subgroup(&self, a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> bool {
        a.iter().all(|x| self.in_subgroup(b, x)) && b.iter().all(|x| self.in_subgroup(a, x))
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.rank > 0 {
            parts.push(if self.rank == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.rank)
            });
        }
        for q in &self.torsion {
            parts.push(format!("Z/{q}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// A homomorphism between groups in normal form. `matrix` is
/// `target.coords() × source.coords()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: IntMatrix,
}

impl GroupHom {
    pub fn new(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.coords() || matrix.cols() != source.coords() {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.coords(),
                source.coords()
            )));
        }
        for (j, q) in source.torsion().iter().enumerate() {
            let col = matrix.column(source.rank() + j);
            if !target.is_zero(&target.scale(q, &col)) {
                return Err(Error::IllDefinedHom(format!(
                    "torsion generator {j} of order {q} maps to an element of larger order"
                )));
            }
        }
        // keep entries canonical
        let cols: Vec<Vec<BigInt>> = matrix.columns().iter().map(|c| target.reduce(c)).collect();
        let matrix = IntMatrix::from_columns(target.coords(), &cols);
        Ok(GroupHom {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(group: &FgAbGroup) -> Self {
        GroupHom {
            source: group.clone(),
            target: group.clone(),
            matrix: IntMatrix::identity(group.coords()),
        }
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.target.reduce(&self.matrix.mul_vec(x))
    }

    /// Images of the source generators.
    pub fn image_generators(&self) -> Vec<Vec<BigInt>> {
        self.matrix.columns()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &GroupHom) -> Result<GroupHom> {
        if inner.target != self.source {
            return Err(Error::DimensionMismatch("composition of incompatible maps".into()));
        }
        GroupHom::new(
            inner.source.clone(),
            self.target.clone(),
            self.matrix.mul(&inner.matrix),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.image_generators().iter().all(|c| self.target.is_zero(c))
    }

    /// Generators of the kernel as elements of the source. Works for any
    /// source; see [`kernel`] for the free-source version returning a group.
    pub fn kernel_generators(&self) -> Vec<Vec<BigInt>> {
        let a = self.matrix.hstack(&self.target.relation_matrix());
        let ds = self.source.coords();
        let mut gens: Vec<Vec<BigInt>> = integer_kernel(&a)
            .into_iter()
            .map(|v| self.source.reduce(&v[..ds]))
            .filter(|v| !self.source.is_zero(v))
            .collect();
        gens.dedup();
        gens
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_generators().is_empty()
    }

    pub fn is_surjective(&self) -> bool {
        let gens = self.image_generators();
        (0..self.target.coords()).all(|i| {
            let mut e = self.target.zero();
            e[i] = BigInt::one();
            self.target.in_subgroup(&gens, &e)
        })
    }
}

/// `coker f` and the projection `target → coker f`.
pub fn cokernel(f: &GroupHom) -> (FgAbGroup, GroupHom) {
    let rel = f.matrix.hstack(&f.target.relation_matrix());
    let p = FgAbGroup::presented_by(f.target.coords(), &rel);
    let proj = GroupHom::new(f.target.clone(), p.group.clone(), p.projection)
        .expect("cokernel projection is well defined");
    (p.group, proj)
}

/// `ker f` and its inclusion into the source. The source must be free.
pub fn kernel(f: &GroupHom) -> Result<(FgAbGroup, GroupHom)> {
    if !f.source.is_free() {
        return Err(Error::NonFreeSource);
    }
    let a = f.matrix.hstack(&f.target.relation_matrix());
    let m = f.source.coords();
    // projecting the kernel of [M | T] to the first m coordinates is injective,
    // since T has independent columns
    let basis: Vec<Vec<BigInt>> = integer_kernel(&a).into_iter().map(|v| v[..m].to_vec()).collect();
    let k = FgAbGroup::free(basis.len());
    let incl = GroupHom::new(k.clone(), f.source.clone(), IntMatrix::from_columns(m, &basis))?;
    Ok((k, incl))
}

/// `Hom(G, ℤ)`.
pub fn dual(g: &FgAbGroup) -> FgAbGroup {
    FgAbGroup::free(g.rank())
}

/// `f* : Hom(B, ℤ) → Hom(A, ℤ)`, in the dual bases of the free coordinates.
pub fn dual_hom(f: &GroupHom) -> GroupHom {
    let dt = f.target.rank();
    let ds = f.source.rank();
    let rows: Vec<usize> = (0..dt).collect();
    let cols: Vec<usize> = (0..ds).collect();
    let block = f.matrix.select_rows(&rows).select_columns(&cols);
    GroupHom {
        source: dual(&f.target),
        target: dual(&f.source),
        matrix: block.transpose(),
    }
}
