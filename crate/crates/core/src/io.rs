//! JSON documents: categories, functors, witnesses, covers, bundles,
//! fibration-morphism inputs and invariant results.
//!
//! Nested categories, functors and bundles may be given inline or as a path;
//! relative paths resolve against the directory of the referencing file.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::category::{validate_category, CategorySpec, FinCategory};
use crate::construct::power;
use crate::covers::{Chain, GeometricCover, Subcategory};
use crate::error::{Error, Result};
use crate::extnat::ExtNat;
use crate::fibrations::FibrationReport;
use crate::functor::FinFunctor;
use crate::homotopy::{Direction, ZigzagStep, ZigzagWitness};
use crate::invariants::{Certificate, Invariant, InvariantResult};
use crate::verify::InequalityReport;
use crate::Config;

/// A nested document given by path or inline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Ref<T> {
    Path(String),
    Inline(T),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dom: Option<Ref<CategorySpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cod: Option<Ref<CategorySpec>>,
    pub on_objects: BTreeMap<String, String>,
    #[serde(default)]
    pub on_arrows: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepSpec {
    pub dir: String,
    pub components: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dom: Option<Ref<CategorySpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cod: Option<Ref<CategorySpec>>,
    pub functors: Vec<FunctorSpec>,
    pub steps: Vec<StepSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MemberSpec {
    pub objects: Vec<String>,
    #[serde(default)]
    pub arrows: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverSpec {
    pub parent: Ref<CategorySpec>,
    pub members: Vec<MemberSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleSpec {
    pub total: Ref<CategorySpec>,
    pub base: Ref<CategorySpec>,
    #[serde(rename = "P")]
    pub p: Ref<FunctorSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VaradarajanSpec {
    #[serde(rename = "P")]
    pub p: Ref<BundleSpec>,
    #[serde(rename = "Pprime")]
    pub p_prime: Ref<BundleSpec>,
    #[serde(rename = "F")]
    pub f: Ref<FunctorSpec>,
    #[serde(rename = "Fbar")]
    pub f_bar: Ref<FunctorSpec>,
    #[serde(rename = "G")]
    pub g: Ref<FunctorSpec>,
    #[serde(rename = "Gbar")]
    pub g_bar: Ref<FunctorSpec>,
    pub basepoint: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSpec {
    pub start: String,
    pub arrows: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairWitnessSpec {
    pub i: usize,
    pub j: usize,
    pub witness: WitnessSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MemberWitnessSpec {
    pub member: usize,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<PairWitnessSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub section: Option<FunctorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessSpec>,
}

/// An invariant result. For `cD` the functors carry inline categories; for
/// `ccat` and `cTC` the category is given and the covered category is
/// rebuilt from it. Witness functors omit `dom`/`cod`: they are functors on
/// the member's subcategory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultSpec {
    pub invariant: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<Ref<CategorySpec>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub functors: Vec<FunctorSpec>,
    pub value: ExtNat,
    pub cover: Option<CoverSpec>,
    pub witnesses: Vec<MemberWitnessSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uncovered_chain: Option<ChainSpec>,
    #[serde(default)]
    pub maximal: Vec<MemberSpec>,
}

/// A parsed and validated document.
#[derive(Debug, Clone)]
pub enum Document {
    Category(Arc<FinCategory>),
    Functor(FinFunctor),
    Bundle(FinFunctor),
    Witness(ZigzagWitness),
    Cover(GeometricCover),
    Result(Box<InvariantResult>),
    Varadarajan(Box<crate::fixtures::VaradarajanInput>),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Category(_) => "category",
            Document::Functor(_) => "functor",
            Document::Bundle(_) => "bundle",
            Document::Witness(_) => "witness",
            Document::Cover(_) => "cover",
            Document::Result(_) => "result",
            Document::Varadarajan(_) => "varadarajan input",
        }
    }
}

fn parse_err(location: &Path, e: impl std::fmt::Display) -> Error {
    Error::Parse {
        location: location.display().to_string(),
        detail: e.to_string(),
    }
}

/// Resolves nested references relative to the file that contains them.
#[derive(Debug, Clone)]
pub struct Loader {
    dir: PathBuf,
    file: PathBuf,
}

fn read_value(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        detail: e.to_string(),
    })?;
    serde_json::from_str(&text).map_err(|e| parse_err(path, e))
}

fn from_value<T: serde::de::DeserializeOwned>(path: &Path, v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| parse_err(path, e))
}

impl Loader {
    pub fn for_file(path: &Path) -> Loader {
        Loader {
            dir: path.parent().map(Path::to_path_buf).unwrap_or_default(),
            file: path.to_path_buf(),
        }
    }

    fn resolve(&self, rel: &str) -> PathBuf {
        let p = Path::new(rel);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.dir.join(p)
        }
    }

    fn deref<T: serde::de::DeserializeOwned + Clone>(&self, r: &Ref<T>) -> Result<(T, Loader)> {
        match r {
            Ref::Inline(t) => Ok((t.clone(), self.clone())),
            Ref::Path(p) => {
                let path = self.resolve(p);
                let v = read_value(&path)?;
                Ok((from_value(&path, v)?, Loader::for_file(&path)))
            }
        }
    }

    fn wrap(&self, e: Error) -> Error {
        match e {
            Error::Parse { .. } | Error::Io { .. } => e,
            other => Error::Parse {
                location: self.file.display().to_string(),
                detail: other.to_string(),
            },
        }
    }

    pub fn category(&self, r: &Ref<CategorySpec>) -> Result<Arc<FinCategory>> {
        let (spec, _) = self.deref(r)?;
        Ok(Arc::new(validate_category(&spec)?))
    }

    /// A functor; `dom`/`cod` fall back to the given defaults.
    pub fn functor(
        &self,
        r: &Ref<FunctorSpec>,
        dom: Option<&Arc<FinCategory>>,
        cod: Option<&Arc<FinCategory>>,
    ) -> Result<FinFunctor> {
        let (spec, inner) = self.deref(r)?;
        inner.functor_spec(&spec, dom, cod)
    }

    fn functor_spec(
        &self,
        spec: &FunctorSpec,
        dom: Option<&Arc<FinCategory>>,
        cod: Option<&Arc<FinCategory>>,
    ) -> Result<FinFunctor> {
        let side = |r: &Option<Ref<CategorySpec>>,
                    fallback: Option<&Arc<FinCategory>>,
                    what: &str|
         -> Result<Arc<FinCategory>> {
            match (r, fallback) {
                (Some(r), _) => self.category(r),
                (None, Some(c)) => Ok(c.clone()),
                (None, None) => Err(Error::Parse {
                    location: self.file.display().to_string(),
                    detail: format!("functor has no {what}"),
                }),
            }
        };
        let d = side(&spec.dom, dom, "dom")?;
        let c = side(&spec.cod, cod, "cod")?;
        if let (Some(expected), Some(_)) = (dom, &spec.dom) {
            if expected.as_ref() != d.as_ref() {
                return Err(Error::DomainMismatch(format!(
                    "functor domain {} is not {}",
                    d.name(),
                    expected.name()
                )));
            }
        }
        if let (Some(expected), Some(_)) = (cod, &spec.cod) {
            if expected.as_ref() != c.as_ref() {
                return Err(Error::DomainMismatch(format!(
                    "functor codomain {} is not {}",
                    c.name(),
                    expected.name()
                )));
            }
        }
        FinFunctor::from_names(
            &d,
            &c,
            spec.on_objects
                .iter()
                .map(|(a, b)| (a.as_str(), b.as_str())),
            spec.on_arrows.iter().map(|(a, b)| (a.as_str(), b.as_str())),
        )
    }

    pub fn bundle(&self, r: &Ref<BundleSpec>) -> Result<FinFunctor> {
        let (spec, inner) = self.deref(r)?;
        let total = inner.category(&spec.total)?;
        let base = inner.category(&spec.base)?;
        inner.functor(&spec.p, Some(&total), Some(&base))
    }

    pub fn witness(
        &self,
        spec: &WitnessSpec,
        dom: Option<&Arc<FinCategory>>,
        cod: Option<&Arc<FinCategory>>,
    ) -> Result<ZigzagWitness> {
        let dom = match &spec.dom {
            Some(r) => Some(self.category(r)?),
            None => dom.cloned(),
        };
        let cod = match &spec.cod {
            Some(r) => Some(self.category(r)?),
            None => cod.cloned(),
        };
        let mut functors = Vec::new();
        for f in &spec.functors {
            let g = self.functor_spec(
                f,
                dom.as_ref()
                    .or(functors.first().map(|g: &FinFunctor| g.dom())),
                cod.as_ref()
                    .or(functors.first().map(|g: &FinFunctor| g.cod())),
            )?;
            functors.push(g);
        }
        let first = functors
            .first()
            .ok_or_else(|| self.wrap(Error::InvalidNatTrans("witness has no functors".into())))?
            .clone();
        let mut steps = Vec::new();
        for (i, s) in spec.steps.iter().enumerate() {
            let direction = match s.dir.as_str() {
                "fwd" => Direction::Forward,
                "bwd" => Direction::Backward,
                other => {
                    return Err(
                        self.wrap(Error::BadParams(format!("step {i}: direction {other:?}")))
                    )
                }
            };
            let d = first.dom();
            let c = first.cod();
            let mut comps = vec![None; d.num_objects()];
            for (o, a) in &s.components {
                let o = d
                    .object_id(o)
                    .ok_or_else(|| Error::UnknownObject(o.clone()))?;
                let a = c
                    .arrow_id(a)
                    .ok_or_else(|| Error::UnknownArrow(a.clone()))?;
                comps[o] = Some(a);
            }
            let components = comps
                .into_iter()
                .enumerate()
                .map(|(o, a)| {
                    a.ok_or_else(|| {
                        Error::InvalidNatTrans(format!(
                            "step {i}: no component at {}",
                            d.object_name(o)
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            steps.push(ZigzagStep {
                direction,
                components,
            });
        }
        Ok(ZigzagWitness { functors, steps })
    }

    pub fn subcategory(&self, parent: &Arc<FinCategory>, m: &MemberSpec) -> Result<Subcategory> {
        let objects = m
            .objects
            .iter()
            .map(|o| {
                parent
                    .object_id(o)
                    .ok_or_else(|| Error::UnknownObject(o.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        let arrows = m
            .arrows
            .iter()
            .map(|a| {
                parent
                    .arrow_id(a)
                    .ok_or_else(|| Error::UnknownArrow(a.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Subcategory::new(parent, &objects, &arrows)
    }

    /// Members only; the chain condition is checked by the caller.
    pub fn cover_members(&self, spec: &CoverSpec) -> Result<(Arc<FinCategory>, Vec<Subcategory>)> {
        let parent = self.category(&spec.parent)?;
        let members = spec
            .members
            .iter()
            .map(|m| self.subcategory(&parent, m))
            .collect::<Result<Vec<_>>>()?;
        Ok((parent, members))
    }

    pub fn varadarajan(&self, spec: &VaradarajanSpec) -> Result<crate::fixtures::VaradarajanInput> {
        let p = self.bundle(&spec.p)?;
        let p_prime = self.bundle(&spec.p_prime)?;
        let f = self.functor(&spec.f, Some(p.dom()), Some(p_prime.dom()))?;
        let f_bar = self.functor(&spec.f_bar, Some(p.cod()), Some(p_prime.cod()))?;
        let g = self.functor(&spec.g, Some(p.dom()), Some(p_prime.dom()))?;
        let g_bar = self.functor(&spec.g_bar, Some(p.cod()), Some(p_prime.cod()))?;
        let basepoint = p
            .cod()
            .object_id(&spec.basepoint)
            .ok_or_else(|| Error::UnknownObject(spec.basepoint.clone()))?;
        Ok(crate::fixtures::VaradarajanInput {
            p,
            p_prime,
            f,
            f_bar,
            g,
            g_bar,
            basepoint,
        })
    }

    pub fn result(&self, spec: &ResultSpec, config: &Config) -> Result<InvariantResult> {
        let invariant = match spec.invariant.as_str() {
            "cD" => {
                let fs = spec
                    .functors
                    .iter()
                    .map(|f| self.functor_spec(f, None, None))
                    .collect::<Result<Vec<_>>>()?;
                if fs.len() < 2 {
                    return Err(Error::BadParams(
                        "cD result needs at least two functors".into(),
                    ));
                }
                Invariant::Distance(fs)
            }
            "ccat" => Invariant::Ccat(
                self.category(
                    spec.category
                        .as_ref()
                        .ok_or_else(|| Error::BadParams("ccat result has no category".into()))?,
                )?,
            ),
            "cTC" | "cTC_n" => {
                let c = self.category(
                    spec.category
                        .as_ref()
                        .ok_or_else(|| Error::BadParams("cTC result has no category".into()))?,
                )?;
                Invariant::Ctc(c, spec.n.unwrap_or(2))
            }
            other => return Err(Error::BadParams(format!("unknown invariant {other:?}"))),
        };
        let parent = match &invariant {
            Invariant::Distance(fs) => fs[0].dom().clone(),
            Invariant::Ccat(c) => c.clone(),
            Invariant::Ctc(c, n) => power(c, *n, config)?.category,
        };
        let maximal = spec
            .maximal
            .iter()
            .map(|m| self.subcategory(&parent, m))
            .collect::<Result<Vec<_>>>()?;
        let uncovered = match &spec.uncovered_chain {
            None => None,
            Some(ch) => Some(Chain {
                start: parent
                    .object_id(&ch.start)
                    .ok_or_else(|| Error::UnknownObject(ch.start.clone()))?,
                arrows: ch
                    .arrows
                    .iter()
                    .map(|a| {
                        parent
                            .arrow_id(a)
                            .ok_or_else(|| Error::UnknownArrow(a.clone()))
                    })
                    .collect::<Result<Vec<_>>>()?,
            }),
        };
        let members = match &spec.cover {
            None => Vec::new(),
            Some(cs) => cs
                .members
                .iter()
                .map(|m| self.subcategory(&parent, m))
                .collect::<Result<Vec<_>>>()?,
        };
        let mut certificates = Vec::new();
        for (i, u) in members.iter().enumerate() {
            let w = spec
                .witnesses
                .iter()
                .find(|w| w.member == i)
                .ok_or_else(|| Error::BadParams(format!("no witness for member {i}")))?;
            let (uc, _) = u.to_category();
            let cert = match (&invariant, w.kind.as_str()) {
                (Invariant::Distance(fs), "domain") => {
                    let cod = fs[0].cod();
                    let pairs = w
                        .pairs
                        .iter()
                        .map(|p| Ok((p.i, p.j, self.witness(&p.witness, Some(&uc), Some(cod))?)))
                        .collect::<Result<Vec<_>>>()?;
                    Certificate::Domain(pairs)
                }
                (Invariant::Ccat(c), "contraction") => {
                    let object = match &w.constant {
                        Some(o) => Some(
                            c.object_id(o)
                                .ok_or_else(|| Error::UnknownObject(o.clone()))?,
                        ),
                        None => None,
                    };
                    let ws = w
                        .witness
                        .as_ref()
                        .ok_or_else(|| Error::BadParams("contraction without witness".into()))?;
                    Certificate::Contraction {
                        object,
                        witness: self.witness(ws, Some(&uc), Some(c))?,
                    }
                }
                (Invariant::Ctc(c, _), "section") => {
                    let s = w
                        .section
                        .as_ref()
                        .ok_or_else(|| Error::BadParams("section missing".into()))?;
                    let ws = w
                        .witness
                        .as_ref()
                        .ok_or_else(|| Error::BadParams("section without witness".into()))?;
                    Certificate::Section {
                        section: self.functor_spec(s, Some(&uc), Some(c))?,
                        witness: self.witness(ws, Some(&uc), Some(&parent))?,
                    }
                }
                (_, kind) => {
                    return Err(Error::BadParams(format!(
                        "member {i}: unexpected certificate kind {kind:?}"
                    )))
                }
            };
            certificates.push(cert);
        }
        let cover = match &spec.cover {
            None => None,
            Some(_) => Some(GeometricCover::new(&parent, members)?),
        };
        Ok(InvariantResult {
            invariant,
            value: spec.value,
            parent,
            maximal,
            cover,
            certificates,
            uncovered,
        })
    }
}

/// Read and validate any supported document, dispatching on its keys.
pub fn load_document(path: &Path, config: &Config) -> Result<Document> {
    let v = read_value(path)?;
    let loader = Loader::for_file(path);
    let obj = v
        .as_object()
        .ok_or_else(|| parse_err(path, "expected a JSON object"))?;
    let has = |k: &str| obj.contains_key(k);
    let doc = if has("functors") && has("steps") {
        let spec: WitnessSpec = from_value(path, v)?;
        Document::Witness(loader.witness(&spec, None, None)?)
    } else if has("invariant") {
        let spec: ResultSpec = from_value(path, v)?;
        Document::Result(Box::new(loader.result(&spec, config)?))
    } else if has("Pprime") {
        let spec: VaradarajanSpec = from_value(path, v)?;
        Document::Varadarajan(Box::new(loader.varadarajan(&spec)?))
    } else if has("total") {
        let spec: BundleSpec = from_value(path, v)?;
        Document::Bundle(loader.bundle(&Ref::Inline(spec))?)
    } else if has("members") {
        let spec: CoverSpec = from_value(path, v)?;
        let (parent, members) = loader.cover_members(&spec)?;
        Document::Cover(GeometricCover::new(&parent, members)?)
    } else if has("on_objects") {
        let spec: FunctorSpec = from_value(path, v)?;
        Document::Functor(loader.functor_spec(&spec, None, None)?)
    } else if has("objects") {
        let spec: CategorySpec = from_value(path, v)?;
        Document::Category(Arc::new(validate_category(&spec)?))
    } else {
        return Err(parse_err(
            path,
            "unrecognized document: no known top-level keys",
        ));
    };
    Ok(doc)
}

pub fn load_category(path: &Path) -> Result<Arc<FinCategory>> {
    let v = read_value(path)?;
    let spec: CategorySpec = from_value(path, v)?;
    Ok(Arc::new(validate_category(&spec)?))
}

/// A witness whose `dom`/`cod` may be omitted in favour of the defaults.
pub fn load_witness(
    path: &Path,
    dom: Option<&Arc<FinCategory>>,
    cod: Option<&Arc<FinCategory>>,
) -> Result<ZigzagWitness> {
    let v = read_value(path)?;
    let spec: WitnessSpec = from_value(path, v)?;
    Loader::for_file(path).witness(&spec, dom, cod)
}

pub fn load_functor(path: &Path) -> Result<FinFunctor> {
    let v = read_value(path)?;
    let spec: FunctorSpec = from_value(path, v)?;
    Loader::for_file(path).functor_spec(&spec, None, None)
}

pub fn load_bundle(path: &Path) -> Result<FinFunctor> {
    let v = read_value(path)?;
    let spec: BundleSpec = from_value(path, v)?;
    Loader::for_file(path).bundle(&Ref::Inline(spec))
}

// ---- writing ----

pub fn category_spec(c: &FinCategory) -> CategorySpec {
    c.to_spec()
}

/// Functor by names; identity images are left implicit.
pub fn functor_spec(f: &FinFunctor, with_categories: bool) -> FunctorSpec {
    let d = f.dom();
    let c = f.cod();
    FunctorSpec {
        dom: with_categories.then(|| Ref::Inline(d.to_spec())),
        cod: with_categories.then(|| Ref::Inline(c.to_spec())),
        on_objects: (0..d.num_objects())
            .map(|o| {
                (
                    d.object_name(o).to_string(),
                    c.object_name(f.obj(o)).to_string(),
                )
            })
            .collect(),
        on_arrows: d
            .non_identity_arrows()
            .map(|a| {
                (
                    d.arrow_name(a).to_string(),
                    c.arrow_name(f.arr(a)).to_string(),
                )
            })
            .collect(),
    }
}

pub fn witness_spec(w: &ZigzagWitness, with_categories: bool) -> WitnessSpec {
    let d = w.start().dom();
    let c = w.start().cod();
    WitnessSpec {
        dom: with_categories.then(|| Ref::Inline(d.to_spec())),
        cod: with_categories.then(|| Ref::Inline(c.to_spec())),
        functors: w.functors.iter().map(|f| functor_spec(f, false)).collect(),
        steps: w
            .steps
            .iter()
            .map(|s| StepSpec {
                dir: match s.direction {
                    Direction::Forward => "fwd".into(),
                    Direction::Backward => "bwd".into(),
                },
                components: s
                    .components
                    .iter()
                    .enumerate()
                    .map(|(o, &a)| (d.object_name(o).to_string(), c.arrow_name(a).to_string()))
                    .collect(),
            })
            .collect(),
    }
}

pub fn member_spec(u: &Subcategory) -> MemberSpec {
    let p = u.parent();
    MemberSpec {
        objects: u
            .object_ids()
            .iter()
            .map(|&o| p.object_name(o).to_string())
            .collect(),
        arrows: u
            .arrow_ids()
            .into_iter()
            .filter(|&a| !p.is_identity(a))
            .map(|a| p.arrow_name(a).to_string())
            .collect(),
    }
}

pub fn cover_spec(parent: &FinCategory, members: &[Subcategory]) -> CoverSpec {
    CoverSpec {
        parent: Ref::Inline(parent.to_spec()),
        members: members.iter().map(member_spec).collect(),
    }
}

pub fn chain_spec(c: &FinCategory, chain: &Chain) -> ChainSpec {
    ChainSpec {
        start: c.object_name(chain.start).to_string(),
        arrows: chain
            .arrows
            .iter()
            .map(|&a| c.arrow_name(a).to_string())
            .collect(),
    }
}

pub fn result_spec(r: &InvariantResult) -> ResultSpec {
    let (invariant, n, category, functors) = match &r.invariant {
        Invariant::Distance(fs) => (
            "cD",
            None,
            None,
            fs.iter().map(|f| functor_spec(f, true)).collect(),
        ),
        Invariant::Ccat(c) => ("ccat", None, Some(Ref::Inline(c.to_spec())), Vec::new()),
        Invariant::Ctc(c, 2) => ("cTC", Some(2), Some(Ref::Inline(c.to_spec())), Vec::new()),
        Invariant::Ctc(c, n) => (
            "cTC_n",
            Some(*n),
            Some(Ref::Inline(c.to_spec())),
            Vec::new(),
        ),
    };
    let witnesses = r
        .certificates
        .iter()
        .enumerate()
        .map(|(i, cert)| match cert {
            Certificate::Domain(pairs) => MemberWitnessSpec {
                member: i,
                kind: "domain".into(),
                pairs: pairs
                    .iter()
                    .map(|(a, b, w)| PairWitnessSpec {
                        i: *a,
                        j: *b,
                        witness: witness_spec(w, false),
                    })
                    .collect(),
                constant: None,
                section: None,
                witness: None,
            },
            Certificate::Contraction { object, witness } => MemberWitnessSpec {
                member: i,
                kind: "contraction".into(),
                pairs: Vec::new(),
                constant: object.map(|o| witness.start().cod().object_name(o).to_string()),
                section: None,
                witness: Some(witness_spec(witness, false)),
            },
            Certificate::Section { section, witness } => MemberWitnessSpec {
                member: i,
                kind: "section".into(),
                pairs: Vec::new(),
                constant: None,
                section: Some(functor_spec(section, false)),
                witness: Some(witness_spec(witness, false)),
            },
        })
        .collect();
    ResultSpec {
        invariant: invariant.into(),
        n,
        category,
        functors,
        value: r.value,
        cover: r.cover.as_ref().map(|c| cover_spec(&r.parent, c.members())),
        witnesses,
        uncovered_chain: r.uncovered.as_ref().map(|ch| chain_spec(&r.parent, ch)),
        maximal: r.maximal.iter().map(member_spec).collect(),
    }
}

pub fn bundle_spec(p: &FinFunctor) -> BundleSpec {
    BundleSpec {
        total: Ref::Inline(p.dom().to_spec()),
        base: Ref::Inline(p.cod().to_spec()),
        p: Ref::Inline(functor_spec(p, false)),
    }
}

pub fn varadarajan_spec(v: &crate::fixtures::VaradarajanInput) -> VaradarajanSpec {
    VaradarajanSpec {
        p: Ref::Inline(bundle_spec(&v.p)),
        p_prime: Ref::Inline(bundle_spec(&v.p_prime)),
        f: Ref::Inline(functor_spec(&v.f, false)),
        f_bar: Ref::Inline(functor_spec(&v.f_bar, false)),
        g: Ref::Inline(functor_spec(&v.g, false)),
        g_bar: Ref::Inline(functor_spec(&v.g_bar, false)),
        basepoint: v.p.cod().object_name(v.basepoint).to_string(),
    }
}

pub fn fibration_report_json(r: &FibrationReport) -> Value {
    let p = r.structure.functor();
    let (e, b) = (p.dom(), p.cod());
    let missing = |v: &[crate::fibrations::MissingLift]| -> Value {
        v.iter()
            .map(|m| serde_json::json!({"base_arrow": b.arrow_name(m.base_arrow), "object": e.object_name(m.object)}))
            .collect()
    };
    let lifts = |m: &BTreeMap<(usize, usize), usize>| -> Value {
        m.iter()
            .map(|(&(u, x), &a)| serde_json::json!({"base_arrow": b.arrow_name(u), "object": e.object_name(x), "lift": e.arrow_name(a)}))
            .collect()
    };
    serde_json::json!({
        "fibration": r.is_fibration,
        "op_fibration": r.is_op_fibration,
        "bifibration": r.is_bifibration(),
        "missing_cartesian": missing(&r.missing_cartesian),
        "missing_op_cartesian": missing(&r.missing_op_cartesian),
        "cartesian_lifts": lifts(r.structure.cartesian_lifts()),
        "op_cartesian_lifts": lifts(r.structure.op_cartesian_lifts()),
    })
}

pub fn inequality_json(r: &InequalityReport) -> Value {
    let subs: serde_json::Map<String, Value> = r
        .sub_results
        .iter()
        .map(|(k, v)| {
            (
                k.clone(),
                serde_json::to_value(result_spec(v)).expect("serializable"),
            )
        })
        .collect();
    serde_json::json!({
        "name": r.name,
        "relation": r.relation.to_string(),
        "left": r.left,
        "right": r.right,
        "holds": r.holds,
        "inputs": r.inputs,
        "sub_results": subs,
    })
}

pub fn to_pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

pub fn write_json<T: Serialize>(path: &Path, v: &T) -> Result<()> {
    fs::write(path, to_pretty(v)).map_err(|e| Error::Io {
        path: path.display().to_string(),
        detail: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{standard_category, StandardKind};

    #[test]
    fn category_round_trip() {
        let c = standard_category(&StandardKind::DirectedChain(2)).unwrap();
        let json = to_pretty(&c.to_spec());
        let back: CategorySpec = serde_json::from_str(&json).unwrap();
        assert_eq!(validate_category(&back).unwrap(), c);
    }

    #[test]
    fn refs_parse_both_ways() {
        let r: Ref<CategorySpec> = serde_json::from_str("\"a.json\"").unwrap();
        assert_eq!(r, Ref::Path("a.json".into()));
        let r: Ref<CategorySpec> = serde_json::from_str(r#"{"objects":["x"]}"#).unwrap();
        assert!(matches!(r, Ref::Inline(_)));
    }

    #[test]
    fn extnat_in_result() {
        let v: ExtNat = serde_json::from_str("\"inf\"").unwrap();
        assert_eq!(v, ExtNat::Infinity);
        assert_eq!(serde_json::to_string(&ExtNat::Finite(3)).unwrap(), "3");
    }
}
