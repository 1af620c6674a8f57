//! Versioned JSON documents for fans and their generators.
//!
//! Rationals are `{"num": n, "den": d}` in lowest terms with d > 0. Integers
//! outside the i64 range are written as decimal strings. Parsing rejects any
//! other spelling, so a parsed document serializes back to the same bytes as
//! the canonical writer produces.

use super::report::CheckReport;
use crate::constructions::{FanData, Rank2BundleData, Rank2ConeData};
use crate::base::{ray_name, BaseKind, BaseVariety, PrimeId, QDivisor};
use crate::error::DocumentError;
use crate::geom::rational::{Q, QVec};
use crate::geom::{Cone, TailedPolyhedron};
use crate::ppdiv::{PPDivisor, WeightFunction};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::sync::Arc;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawInt {
    Small(i64),
    Big(String),
}

impl RawInt {
    fn of(x: &BigInt) -> RawInt {
        x.to_i64().map_or_else(|| RawInt::Big(x.to_string()), RawInt::Small)
    }

    fn value(self) -> Result<BigInt, String> {
        match self {
            RawInt::Small(x) => Ok(x.into()),
            RawInt::Big(s) => {
                let x: BigInt = s.parse().map_err(|_| format!("`{s}` is not an integer"))?;
                // Big values only; small ones must use the number form.
                if x.to_i64().is_some() || s != x.to_string() {
                    return Err(format!("`{s}` is not in canonical form"));
                }
                Ok(x)
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQ {
    num: RawInt,
    den: RawInt,
}

/// Exact rational in `{num, den}` form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct JsonQ(pub Q);

impl Serialize for JsonQ {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawQ { num: RawInt::of(self.0.numer()), den: RawInt::of(self.0.denom()) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for JsonQ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawQ::deserialize(d)?;
        let num = raw.num.value().map_err(D::Error::custom)?;
        let den = raw.den.value().map_err(D::Error::custom)?;
        if !den.is_positive() {
            return Err(D::Error::custom("denominator must be positive"));
        }
        if !num.gcd(&den).is_one() {
            return Err(D::Error::custom(format!("{num}/{den} is not in lowest terms")));
        }
        Ok(JsonQ(Q::new_raw(num, den)))
    }
}

pub fn qvec_json(v: &[Q]) -> Vec<JsonQ> {
    v.iter().cloned().map(JsonQ).collect()
}

fn from_json(v: &[JsonQ]) -> QVec {
    v.iter().map(|x| x.0.clone()).collect()
}

/// A named prime; `degree` is omitted when it is 1 and absent on the affine line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimeJson {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<JsonQ>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum BaseJson {
    A1 {
        primes: Vec<PrimeJson>,
    },
    P1 {
        primes: Vec<PrimeJson>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        incidence: Vec<Vec<String>>,
    },
    Pn {
        n: usize,
        primes: Vec<PrimeJson>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        incidence: Vec<Vec<String>>,
    },
    #[serde(rename = "toric")]
    Toric {
        dim: usize,
        rays: Vec<Vec<JsonQ>>,
        cones: Vec<Vec<usize>>,
        /// Prime names when they differ from the ray names.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        names: Option<Vec<String>>,
    },
}

impl BaseJson {
    pub fn of(base: &BaseVariety) -> BaseJson {
        let incidence: Vec<Vec<String>> = base
            .declared_incidence()
            .iter()
            .map(|s| s.iter().map(|p| base.name(*p).to_string()).collect())
            .collect();
        let primes: Vec<PrimeJson> = base
            .primes()
            .iter()
            .map(|p| PrimeJson { name: p.name.clone(), degree: p.degree.clone().filter(|d| !d.is_one()).map(JsonQ) })
            .collect();
        match base.kind() {
            BaseKind::AffineLine => BaseJson::A1 { primes },
            BaseKind::ProjLine => BaseJson::P1 { primes, incidence },
            BaseKind::ProjSpace(n) => BaseJson::Pn { n: *n, primes, incidence },
            BaseKind::Toric { dim, rays, cones } => {
                let names: Vec<String> = base.primes().iter().map(|p| p.name.clone()).collect();
                let default: Vec<String> = rays.iter().map(|r| ray_name(r)).collect();
                BaseJson::Toric {
                    dim: *dim,
                    rays: rays.iter().map(|r| qvec_json(r)).collect(),
                    cones: cones.clone(),
                    names: (names != default).then_some(names),
                }
            }
        }
    }

    pub fn build(&self) -> Result<BaseVariety, DocumentError> {
        let hypersurfaces = |primes: &[PrimeJson]| -> Vec<(String, Q)> {
            primes.iter().map(|p| (p.name.clone(), p.degree.as_ref().map_or_else(Q::one, |d| d.0.clone()))).collect()
        };
        let projective = |n: usize, primes: &[PrimeJson], incidence: &[Vec<String>]| -> Result<BaseVariety, DocumentError> {
            let hs = hypersurfaces(primes);
            let hs: Vec<(&str, Q)> = hs.iter().map(|(n, d)| (n.as_str(), d.clone())).collect();
            let inc: Vec<Vec<&str>> = incidence.iter().map(|s| s.iter().map(String::as_str).collect()).collect();
            Ok(BaseVariety::proj_space(n, &hs, &inc)?)
        };
        Ok(match self {
            BaseJson::A1 { primes } => {
                if primes.iter().any(|p| p.degree.is_some()) {
                    return Err(DocumentError::Invalid("points of the affine line carry no degree".into()));
                }
                let names: Vec<&str> = primes.iter().map(|p| p.name.as_str()).collect();
                BaseVariety::affine_line(&names)?
            }
            BaseJson::P1 { primes, incidence } if incidence.is_empty() && primes.iter().all(|p| p.degree.is_none()) => {
                let names: Vec<&str> = primes.iter().map(|p| p.name.as_str()).collect();
                BaseVariety::proj_line(&names)?
            }
            BaseJson::P1 { primes, incidence } => projective(1, primes, incidence)?,
            BaseJson::Pn { n, primes, incidence } => projective(*n, primes, incidence)?,
            BaseJson::Toric { dim, rays, cones, names } => {
                let rays: Vec<QVec> = rays.iter().map(|r| from_json(r)).collect();
                let base = BaseVariety::toric(*dim, &rays, cones)?;
                match names {
                    None => base,
                    Some(names) => {
                        if names.len() != base.primes().len() {
                            return Err(DocumentError::Invalid("one name per ray is required".into()));
                        }
                        let old: Vec<String> = base.primes().iter().map(|p| p.name.clone()).collect();
                        let pairs: Vec<(&str, &str)> = old.iter().map(String::as_str).zip(names.iter().map(String::as_str)).collect();
                        base.rename(&pairs)?
                    }
                }
            }
        })
    }
}

/// A tailed polyhedron. The empty one keeps its tail cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PolyhedronJson {
    Proper { vertices: Vec<Vec<JsonQ>>, tail_rays: Vec<Vec<JsonQ>> },
    Empty { tail_rays: Vec<Vec<JsonQ>> },
}

impl PolyhedronJson {
    pub fn of(p: &TailedPolyhedron) -> PolyhedronJson {
        let tail_rays = p.tail().rays().iter().map(|v| qvec_json(v)).collect();
        if p.is_empty() {
            return PolyhedronJson::Empty { tail_rays };
        }
        PolyhedronJson::Proper { vertices: p.vertices().iter().map(|v| qvec_json(v)).collect(), tail_rays }
    }

    pub fn build(&self, dim: usize) -> Result<TailedPolyhedron, DocumentError> {
        let (vertices, rays) = match self {
            PolyhedronJson::Proper { vertices, tail_rays } => (vertices.as_slice(), tail_rays),
            PolyhedronJson::Empty { tail_rays } => (&[][..], tail_rays),
        };
        let pts: Vec<QVec> = vertices.iter().map(|v| from_json(v)).collect();
        let rays: Vec<QVec> = rays.iter().map(|v| from_json(v)).collect();
        if pts.iter().chain(&rays).any(|v| v.len() != dim) {
            return Err(DocumentError::Invalid(format!("vector of length other than {dim}")));
        }
        match self {
            PolyhedronJson::Empty { .. } => Ok(TailedPolyhedron::empty(Cone::from_rays(dim, &rays))),
            PolyhedronJson::Proper { .. } if pts.is_empty() => Err(DocumentError::Invalid("a proper polyhedron needs a vertex".into())),
            PolyhedronJson::Proper { .. } => Ok(TailedPolyhedron::from_points(dim, &pts, &rays)?),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorJson {
    pub dim: usize,
    /// Rays of the pointed tail cone.
    pub tail_rays: Vec<Vec<JsonQ>>,
    /// Coefficients other than the tail, by prime name. Each has the same tail.
    pub coeffs: BTreeMap<String, PolyhedronJson>,
}

impl DivisorJson {
    pub fn of(d: &PPDivisor) -> DivisorJson {
        DivisorJson {
            dim: d.dim(),
            tail_rays: d.tail().rays().iter().map(|r| qvec_json(r)).collect(),
            coeffs: d.listed().map(|(p, c)| (d.base().name(p).to_string(), PolyhedronJson::of(c))).collect(),
        }
    }

    pub fn build(&self, base: &Arc<BaseVariety>) -> Result<PPDivisor, DocumentError> {
        let rays: Vec<QVec> = self.tail_rays.iter().map(|r| from_json(r)).collect();
        if rays.iter().any(|r| r.len() != self.dim) {
            return Err(DocumentError::Invalid("tail ray of the wrong length".into()));
        }
        let tail = Cone::from_rays(self.dim, &rays);
        let mut coeffs: Vec<(PrimeId, TailedPolyhedron)> = Vec::new();
        for (name, c) in &self.coeffs {
            coeffs.push((base.lookup(name)?, c.build(self.dim)?));
        }
        Ok(PPDivisor::new(base.clone(), tail, coeffs)?)
    }
}

/// Base, generators, and optionally the last check report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanDocument {
    pub format_version: u32,
    pub base: BaseJson,
    pub generators: Vec<DivisorJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cached: Option<CheckReport>,
}

impl FanDocument {
    /// Document of generators sharing one base.
    pub fn new(generators: &[PPDivisor]) -> Result<FanDocument, DocumentError> {
        let first = generators.first().ok_or_else(|| DocumentError::Invalid("no generators".into()))?;
        if generators.iter().any(|g| !g.same_base(first)) {
            return Err(DocumentError::Invalid("generators live on different bases".into()));
        }
        Ok(FanDocument {
            format_version: FORMAT_VERSION,
            base: BaseJson::of(first.base()),
            generators: generators.iter().map(DivisorJson::of).collect(),
            cached: None,
        })
    }

    pub fn parse(text: &str) -> Result<FanDocument, DocumentError> {
        let doc: FanDocument = serde_json::from_str(text).map_err(|e| DocumentError::Json(e.to_string()))?;
        if doc.format_version != FORMAT_VERSION {
            return Err(DocumentError::Version(doc.format_version));
        }
        Ok(doc)
    }

    /// Canonical text: pretty-printed with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }

    pub fn build_base(&self) -> Result<Arc<BaseVariety>, DocumentError> {
        Ok(Arc::new(self.base.build()?))
    }

    pub fn divisors(&self) -> Result<Vec<PPDivisor>, DocumentError> {
        let base = self.build_base()?;
        self.generators.iter().map(|g| g.build(&base)).collect()
    }
}

/// A complete simplicial fan with integral rays, as input to builders.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanDataJson {
    pub rays: Vec<Vec<i64>>,
    pub cones: Vec<Vec<usize>>,
}

impl FanDataJson {
    pub fn of(fan: &FanData) -> FanDataJson {
        let int = |x: &Q| x.to_integer().to_i64().expect("small integral ray");
        FanDataJson { rays: fan.rays.iter().map(|r| r.iter().map(int).collect()).collect(), cones: fan.cones.clone() }
    }

    pub fn data(&self) -> Result<FanData, DocumentError> {
        let dim = self.rays.first().map_or(0, Vec::len);
        if self.rays.iter().any(|r| r.len() != dim) {
            return Err(DocumentError::Invalid("rays of different lengths".into()));
        }
        if self.cones.iter().flatten().any(|&i| i >= self.rays.len()) {
            return Err(DocumentError::Invalid("cone refers to a missing ray".into()));
        }
        Ok(FanData { rays: self.rays.iter().map(|r| int_vec(r)).collect(), cones: self.cones.clone() })
    }
}

fn int_vec(v: &[i64]) -> QVec {
    v.iter().map(|&x| Q::from_integer(x.into())).collect()
}

/// Characters `u1`, `u2` of one maximal cone and the points of P¹ carrying
/// the two lines.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rank2ConeJson {
    pub u1: Vec<i64>,
    pub u2: Vec<i64>,
    pub p1: String,
    pub p2: String,
}

/// Rank-2 bundle data: one entry of `cones` per maximal cone of `fan`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleJson {
    pub fan: FanDataJson,
    pub cones: Vec<Rank2ConeJson>,
}

impl BundleJson {
    pub fn of(data: &Rank2BundleData) -> BundleJson {
        let int = |v: &QVec| v.iter().map(|x| x.to_integer().to_i64().expect("small integral character")).collect();
        BundleJson {
            fan: FanDataJson::of(&data.fan),
            cones: data.cones.iter().map(|c| Rank2ConeJson { u1: int(&c.u1), u2: int(&c.u2), p1: c.p1.clone(), p2: c.p2.clone() }).collect(),
        }
    }

    pub fn data(&self) -> Result<Rank2BundleData, DocumentError> {
        let fan = self.fan.data()?;
        if self.cones.len() != fan.cones.len() {
            return Err(DocumentError::Invalid("one entry per maximal cone is required".into()));
        }
        if self.cones.iter().any(|c| c.u1.len() != fan.dim() || c.u2.len() != fan.dim()) {
            return Err(DocumentError::Invalid("character of the wrong length".into()));
        }
        let cones = self
            .cones
            .iter()
            .map(|c| Rank2ConeData { u1: int_vec(&c.u1), u2: int_vec(&c.u2), p1: c.p1.clone(), p2: c.p2.clone() })
            .collect();
        Ok(Rank2BundleData { fan, cones })
    }
}

/// Prime name → coefficient, zero terms omitted.
pub fn qdivisor_json(base: &BaseVariety, d: &QDivisor) -> BTreeMap<String, JsonQ> {
    d.terms().map(|(p, c)| (base.name(p).to_string(), JsonQ(c.clone()))).collect()
}

pub fn weight_json(base: &BaseVariety, mu: &WeightFunction) -> BTreeMap<String, JsonQ> {
    mu.terms().map(|(p, c)| (base.name(p).to_string(), JsonQ(c.clone()))).collect()
}

/// Cells of one slice, indexed by member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceJson {
    pub mu: BTreeMap<String, JsonQ>,
    pub cells: Vec<PolyhedronJson>,
    pub is_complex: bool,
    pub covers: Option<bool>,
}

impl SliceJson {
    pub fn of(base: &BaseVariety, s: &crate::fan::Slice) -> SliceJson {
        SliceJson {
            mu: weight_json(base, &s.mu),
            cells: s.cells.iter().map(PolyhedronJson::of).collect(),
            is_complex: s.is_complex,
            covers: s.covers,
        }
    }
}

/// Parses `name=q,name=q` into a weight function on `base`.
pub fn parse_weights(base: &BaseVariety, text: &str) -> Result<WeightFunction, DocumentError> {
    let mut pairs = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, value) =
            item.split_once('=').ok_or_else(|| DocumentError::Invalid(format!("expected name=value, found `{item}`")))?;
        let w = crate::geom::rational::parse_q(value.trim())
            .ok_or_else(|| DocumentError::Invalid(format!("`{value}` is not a rational number")))?;
        if w.is_negative() {
            return Err(DocumentError::Invalid(format!("negative weight at `{name}`")));
        }
        pairs.push((base.lookup(name.trim())?, w));
    }
    Ok(WeightFunction::from_pairs(pairs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{danilov_gizatullin_generators, noncomplete_p2, noncoherent_pair, DGParams};
    use crate::geom::rational::q;

    #[test]
    fn rationals_are_canonical() {
        let s = serde_json::to_string(&JsonQ(q(-2, 4))).unwrap();
        assert_eq!(s, r#"{"num":-1,"den":2}"#);
        assert!(serde_json::from_str::<JsonQ>(r#"{"num":2,"den":4}"#).is_err());
        assert!(serde_json::from_str::<JsonQ>(r#"{"num":1,"den":-2}"#).is_err());
        assert!(serde_json::from_str::<JsonQ>(r#"{"num":"5","den":1}"#).is_err());
        let big = JsonQ(Q::from_integer(BigInt::from(i64::MAX) * 4));
        let text = serde_json::to_string(&big).unwrap();
        assert_eq!(serde_json::from_str::<JsonQ>(&text).unwrap(), big);
    }

    #[test]
    fn documents_round_trip() {
        let families = [
            danilov_gizatullin_generators(&DGParams::new(2, 3)).unwrap(),
            noncomplete_p2().unwrap(),
            noncoherent_pair(true).unwrap(),
        ];
        for gens in families {
            let doc = FanDocument::new(&gens).unwrap();
            let text = doc.to_json();
            let back = FanDocument::parse(&text).unwrap();
            assert_eq!(back, doc);
            assert_eq!(back.to_json(), text);
            assert_eq!(back.divisors().unwrap(), gens);
        }
    }

    #[test]
    fn version_is_checked() {
        let gens = noncoherent_pair(false).unwrap();
        let mut doc = FanDocument::new(&gens).unwrap();
        doc.format_version = 7;
        assert_eq!(FanDocument::parse(&doc.to_json()), Err(DocumentError::Version(7)));
    }
}
