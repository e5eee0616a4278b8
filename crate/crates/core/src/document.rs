//! JSON documents for fans, base rings and computed rings.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{format_rational, parse_rational, IntMatrix};
use crate::chowring::{BaseProduct, BaseRing, OrbifoldRing};
use crate::error::{Error, Result};
use crate::fan::{ConeRef, QVec, SimplicialFan};
use crate::lattice::FgAbGroup;
use crate::stacky::ExtendedStackyFan;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDocument {
    pub rank: usize,
    #[serde(default)]
    pub torsion: Vec<i64>,
}

/// An extended stacky fan. Vectors have `rank + torsion.len()` entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanDocument {
    pub group: GroupDocument,
    pub rays: Vec<Vec<i64>>,
    #[serde(default)]
    pub cones: Vec<Vec<usize>>,
    #[serde(default)]
    pub extra: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub label: String,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub k: usize,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductEntry {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<Term>,
}

/// A base ring table; products with the unit are implied. Without `twists`
/// every twist class is zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseDocument {
    pub basis: Vec<BasisEntry>,
    #[serde(default)]
    pub products: Vec<ProductEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twists: Option<Vec<Vec<Term>>>,
}

fn invalid(pointer: impl Into<String>, message: impl Into<String>) -> Error {
    Error::InvalidDocument {
        pointer: pointer.into(),
        message: message.into(),
    }
}

/// Parses JSON into `T`, reporting the failing location as a JSON pointer.
pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let mut pointer = String::new();
        for seg in e.path().iter() {
            use serde_path_to_error::Segment;
            match seg {
                Segment::Seq { index } => pointer.push_str(&format!("/{index}")),
                Segment::Map { key } => pointer.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
                Segment::Enum { variant } => pointer.push_str(&format!("/{variant}")),
                Segment::Unknown => pointer.push_str("/?"),
            }
        }
        invalid(if pointer.is_empty() { "/".to_string() } else { pointer }, e.inner().to_string())
    })
}

/// A problem in a document, located by JSON pointer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub kind: String,
    pub pointer: String,
    pub message: String,
}

/// Translation between the document's coordinates and the normal form of `N`.
#[derive(Clone, Debug)]
pub struct InputCoordinates {
    orders: Vec<BigInt>,
    rank: usize,
    to_normal: IntMatrix,
    from_normal: IntMatrix,
}

impl InputCoordinates {
    pub fn to_normal(&self, group: &FgAbGroup, v: &[BigInt]) -> Vec<BigInt> {
        group.reduce(&self.to_normal.mul_vec(v))
    }

    pub fn to_input(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut out = self.from_normal.mul_vec(v);
        for (j, q) in self.orders.iter().enumerate() {
            out[self.rank + j] = out[self.rank + j].mod_floor(q);
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct LoadedFan {
    pub fan: ExtendedStackyFan,
    pub coords: InputCoordinates,
}

impl LoadedFan {
    pub fn to_input(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.coords.to_input(v)
    }
}

impl FanDocument {
    pub fn parse(text: &str) -> Result<Self> {
        parse_json(text)
    }

    fn coordinates(&self) -> Result<(FgAbGroup, InputCoordinates)> {
        let mut orders = Vec::new();
        for (j, &q) in self.group.torsion.iter().enumerate() {
            if q < 1 {
                return Err(invalid(format!("/group/torsion/{j}"), "torsion orders must be positive"));
            }
            orders.push(BigInt::from(q));
        }
        let p = FgAbGroup::from_orders(self.group.rank, &orders).map_err(|e| invalid("/group", e.to_string()))?;
        Ok((
            p.group,
            InputCoordinates {
                orders,
                rank: self.group.rank,
                to_normal: p.projection,
                from_normal: p.section,
            },
        ))
    }

    fn vectors(&self, coords: &InputCoordinates, group: &FgAbGroup, key: &str, vs: &[Vec<i64>]) -> Result<Vec<Vec<BigInt>>> {
        let len = self.group.rank + self.group.torsion.len();
        vs.iter()
            .enumerate()
            .map(|(i, v)| {
                if v.len() != len {
                    return Err(invalid(format!("/{key}/{i}"), format!("expected {len} entries, found {}", v.len())));
                }
                let big: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
                Ok(coords.to_normal(group, &big))
            })
            .collect()
    }

    fn check_indices(&self) -> Result<()> {
        for (c, cone) in self.cones.iter().enumerate() {
            for (k, &i) in cone.iter().enumerate() {
                if i >= self.rays.len() {
                    return Err(invalid(format!("/cones/{c}/{k}"), format!("ray index {i} out of range")));
                }
            }
        }
        Ok(())
    }

    fn cone_pointer(&self, cone: &ConeRef) -> String {
        self.cones
            .iter()
            .position(|c| ConeRef::new(c.clone()) == *cone)
            .map_or_else(|| "/cones".to_string(), |k| format!("/cones/{k}"))
    }

    pub fn diagnostic(&self, e: &Error) -> Diagnostic {
        let pointer = match e {
            Error::NotSimplicial(c) => self.cone_pointer(c),
            Error::BadIntersection(a, _) => self.cone_pointer(a),
            Error::ZeroRay(i) => format!("/rays/{i}"),
            Error::InfiniteCokernel => "/rays".to_string(),
            Error::IncompleteFan => "/cones".to_string(),
            Error::InvalidDocument { pointer, message } => {
                return Diagnostic {
                    kind: e.kind().to_string(),
                    pointer: pointer.clone(),
                    message: message.clone(),
                }
            }
            _ => "/".to_string(),
        };
        Diagnostic {
            kind: e.kind().to_string(),
            pointer,
            message: e.to_string(),
        }
    }

    fn locate_error(&self, e: Error) -> Error {
        if matches!(e, Error::InvalidDocument { .. }) {
            return e;
        }
        let d = self.diagnostic(&e);
        invalid(d.pointer, format!("{}: {}", d.kind, d.message))
    }

    pub fn load(&self) -> Result<LoadedFan> {
        let (group, coords) = self.coordinates()?;
        self.check_indices()?;
        let lifts = self.vectors(&coords, &group, "rays", &self.rays)?;
        let extra = self.vectors(&coords, &group, "extra", &self.extra)?;
        let fan = ExtendedStackyFan::new(group, lifts, self.cones.clone(), extra).map_err(|e| self.locate_error(e))?;
        Ok(LoadedFan { fan, coords })
    }

    /// Every problem found, as library errors (first failing stage only for
    /// problems that block the later checks).
    pub fn diagnose(&self) -> Vec<Diagnostic> {
        let early = |e: Error| vec![self.diagnostic(&e)];
        let (group, coords) = match self.coordinates() {
            Ok(x) => x,
            Err(e) => return early(e),
        };
        if let Err(e) = self.check_indices() {
            return early(e);
        }
        let lifts = match self.vectors(&coords, &group, "rays", &self.rays) {
            Ok(v) => v,
            Err(e) => return early(e),
        };
        if let Err(e) = self.vectors(&coords, &group, "extra", &self.extra) {
            return early(e);
        }
        let d = group.rank();
        let rays: Vec<QVec> = lifts.iter().map(|b| b[..d].iter().map(crate::arith::to_rational).collect()).collect();
        let mut out = Vec::new();
        match SimplicialFan::new(d, rays, self.cones.clone()) {
            Ok(f) => out.extend(f.validate()),
            Err(e) => out.push(e),
        }
        let extra = self.vectors(&coords, &group, "extra", &self.extra).unwrap_or_default();
        let bars: Vec<QVec> = lifts
            .iter()
            .chain(&extra)
            .map(|b| b[..d].iter().map(crate::arith::to_rational).collect())
            .collect();
        if crate::arith::rational_rank(&bars, d) < d {
            out.push(Error::InfiniteCokernel);
        }
        out.iter().map(|e| self.diagnostic(e)).collect()
    }
}

impl BaseDocument {
    pub fn parse(text: &str) -> Result<Self> {
        parse_json(text)
    }

    fn parse_terms(&self, pointer: &str, terms: &[Term]) -> Result<Vec<(usize, num_rational::BigRational)>> {
        terms
            .iter()
            .enumerate()
            .map(|(t, term)| {
                let c = parse_rational(&term.coeff)
                    .ok_or_else(|| invalid(format!("{pointer}/{t}/coeff"), format!("not a rational: {:?}", term.coeff)))?;
                if term.k >= self.basis.len() {
                    return Err(invalid(format!("{pointer}/{t}/k"), "basis index out of range"));
                }
                Ok((term.k, c))
            })
            .collect()
    }

    /// Builds the ring; without explicit twists, `m` zero twists are used.
    pub fn to_ring(&self, m: usize) -> Result<BaseRing> {
        let labels = self.basis.iter().map(|b| b.label.clone()).collect();
        let degrees = self.basis.iter().map(|b| b.degree).collect();
        let mut products = Vec::new();
        for (p, entry) in self.products.iter().enumerate() {
            products.push(BaseProduct {
                i: entry.i,
                j: entry.j,
                terms: self.parse_terms(&format!("/products/{p}/terms"), &entry.terms)?,
            });
        }
        let ring = BaseRing::new(labels, degrees, &products, Vec::new()).map_err(|e| invalid("/products", e.to_string()))?;
        match &self.twists {
            None => Ok(ring.with_zero_twists(m)),
            Some(ts) => {
                let mut twists = Vec::new();
                for (k, t) in ts.iter().enumerate() {
                    let mut v = ring.zero();
                    for (i, c) in self.parse_terms(&format!("/twists/{k}"), t)? {
                        v[i] += c;
                    }
                    twists.push(v);
                }
                ring.with_twists(twists).map_err(|e| invalid("/twists", e.to_string()))
            }
        }
    }

    /// Table form of a ring, listing each unordered pair of non-unit basis
    /// elements with a nonzero product once.
    pub fn from_ring(ring: &BaseRing, with_twists: bool) -> Self {
        let terms = |v: &[num_rational::BigRational]| -> Vec<Term> {
            v.iter()
                .enumerate()
                .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
                .map(|(k, c)| Term {
                    k,
                    coeff: format_rational(c),
                })
                .collect()
        };
        let n = ring.dim();
        let mut products = Vec::new();
        for i in 1..n {
            for j in i..n {
                let t = terms(ring.mul_basis(i, j));
                if !t.is_empty() {
                    products.push(ProductEntry { i, j, terms: t });
                }
            }
        }
        BaseDocument {
            basis: (0..n)
                .map(|i| BasisEntry {
                    label: ring.label(i).to_string(),
                    degree: ring.degree(i),
                })
                .collect(),
            products,
            twists: with_twists.then(|| ring.twists().iter().map(|t| terms(t)).collect()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistogramEntry {
    pub degree: String,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorEntry {
    pub index: usize,
    pub value: Vec<i64>,
    pub cone: Vec<usize>,
    pub age: String,
    pub dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingBasisEntry {
    pub index: usize,
    pub sector: usize,
    /// `y^c` for the element, in input coordinates.
    pub value: Vec<i64>,
    pub exponents: Vec<u32>,
    pub base: String,
    pub degree: String,
    pub label: String,
}

/// A computed ring: basis and all nonzero structure constants `e_i e_j = Σ c e_k`
/// as `[i, j, k, c]`, over every ordered pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingDocument {
    pub dimension: usize,
    pub histogram: Vec<HistogramEntry>,
    pub sectors: Vec<SectorEntry>,
    pub basis: Vec<RingBasisEntry>,
    pub mult_table: Vec<(usize, usize, usize, String)>,
}

pub(crate) fn small(v: &[BigInt]) -> Vec<i64> {
    v.iter()
        .map(|x| i64::try_from(x).expect("coordinate fits in i64"))
        .collect()
}

pub fn histogram_entries(h: &BTreeMap<num_rational::BigRational, usize>) -> Vec<HistogramEntry> {
    h.iter()
        .map(|(d, c)| HistogramEntry {
            degree: format_rational(d),
            count: *c,
        })
        .collect()
}

impl RingDocument {
    /// `to_input` maps sector values back to the document's coordinates.
    pub fn from_ring(ring: &OrbifoldRing, to_input: &dyn Fn(&[BigInt]) -> Vec<BigInt>) -> Self {
        let sectors = (0..ring.n_sectors())
            .map(|s| {
                let v = ring.sector(s);
                SectorEntry {
                    index: s,
                    value: small(&to_input(&v.value)),
                    cone: v.cone.rays().to_vec(),
                    age: format_rational(&v.age),
                    dimension: ring.sector_range(s).len(),
                }
            })
            .collect();
        let basis = ring
            .basis()
            .iter()
            .enumerate()
            .map(|(i, b)| RingBasisEntry {
                index: i,
                sector: b.sector,
                value: small(&to_input(ring.basis_value(i))),
                exponents: b.exponents.clone(),
                base: ring.base().label(b.base).to_string(),
                degree: format_rational(&b.degree),
                label: ring.basis_label(i),
            })
            .collect();
        let mut mult_table = Vec::new();
        for i in 0..ring.dim() {
            for j in 0..ring.dim() {
                for (k, c) in ring.product(i, j) {
                    mult_table.push((i, j, *k, format_rational(c)));
                }
            }
        }
        RingDocument {
            dimension: ring.dim(),
            histogram: histogram_entries(&ring.histogram()),
            sectors,
            basis,
            mult_table,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pointer_for_type_errors() {
        let err = FanDocument::parse(r#"{"group":{"rank":1},"rays":[[1],["x"]]}"#).unwrap_err();
        match err {
            Error::InvalidDocument { pointer, .. } => assert_eq!(pointer, "/rays/1/0"),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn pointer_for_semantic_errors() {
        let doc = FanDocument::parse(r#"{"group":{"rank":2},"rays":[[1,0],[2,0]],"cones":[[0,1]]}"#).unwrap();
        match doc.load().unwrap_err() {
            Error::InvalidDocument { pointer, message } => {
                assert_eq!(pointer, "/cones/0");
                assert!(message.starts_with("NotSimplicial"));
            }
            e => panic!("unexpected {e:?}"),
        }
        let doc = FanDocument::parse(r#"{"group":{"rank":1},"rays":[[1]],"cones":[[3]]}"#).unwrap();
        assert!(matches!(doc.load().unwrap_err(), Error::InvalidDocument { pointer, .. } if pointer == "/cones/0/0"));
    }

    #[test]
    fn input_coordinates_round_trip() {
        let doc = FanDocument::parse(r#"{"group":{"rank":0,"torsion":[4,9]},"rays":[],"extra":[[1,1]]}"#).unwrap();
        let loaded = doc.load().unwrap();
        assert_eq!(loaded.fan.group().torsion(), &[BigInt::from(36)]);
        for a in 0..4 {
            for b in 0..9 {
                let v = vec![BigInt::from(a), BigInt::from(b)];
                let n = loaded.coords.to_normal(loaded.fan.group(), &v);
                assert_eq!(loaded.to_input(&n), v);
            }
        }
    }
}
