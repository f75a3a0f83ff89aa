//! Functors and natural transformations between finite categories.

use std::fmt;
use std::sync::Arc;

use crate::category::{ArrowId, FinCategory, ObjId};
use crate::error::{Error, Result};

/// The raw data of a functor: an object map and an arrow map, both indexed by
/// the domain's canonical order. Ordered lexicographically (objects first),
/// which is the canonical order of functor enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mapping {
    pub objects: Vec<ObjId>,
    pub arrows: Vec<ArrowId>,
}

impl Mapping {
    /// Check the functor laws of this mapping between `dom` and `cod`.
    pub fn check(&self, dom: &FinCategory, cod: &FinCategory) -> Result<()> {
        if self.objects.len() != dom.num_objects() || self.arrows.len() != dom.num_arrows() {
            return Err(Error::InvalidFunctor(format!(
                "map sizes {}/{} do not match domain {}",
                self.objects.len(),
                self.arrows.len(),
                dom.name()
            )));
        }
        for (o, &p) in self.objects.iter().enumerate() {
            if p >= cod.num_objects() {
                return Err(Error::InvalidFunctor(format!(
                    "object {} maps outside the codomain",
                    dom.object_name(o)
                )));
            }
        }
        for (f, &g) in self.arrows.iter().enumerate() {
            if g >= cod.num_arrows() {
                return Err(Error::InvalidFunctor(format!(
                    "arrow {} maps outside the codomain",
                    dom.arrow_name(f)
                )));
            }
            if cod.src(g) != self.objects[dom.src(f)] || cod.tgt(g) != self.objects[dom.tgt(f)] {
                return Err(Error::InvalidFunctor(format!(
                    "arrow {} maps to {} with mismatched endpoints",
                    dom.arrow_name(f),
                    cod.arrow_name(g)
                )));
            }
        }
        for o in 0..dom.num_objects() {
            let image = self.arrows[dom.identity(o)];
            if image != cod.identity(self.objects[o]) {
                return Err(Error::InvalidFunctor(format!(
                    "identity of {} maps to non-identity {}",
                    dom.object_name(o),
                    cod.arrow_name(image)
                )));
            }
        }
        for g in 0..dom.num_arrows() {
            for f in 0..dom.num_arrows() {
                if let Some(h) = dom.compose(g, f) {
                    if cod.compose(self.arrows[g], self.arrows[f]) != Some(self.arrows[h]) {
                        return Err(Error::InvalidFunctor(format!(
                            "composition {} ∘ {} not preserved",
                            dom.arrow_name(g),
                            dom.arrow_name(f)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A validated functor.
#[derive(Clone)]
pub struct FinFunctor {
    dom: Arc<FinCategory>,
    cod: Arc<FinCategory>,
    map: Mapping,
}

impl PartialEq for FinFunctor {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map
            && (Arc::ptr_eq(&self.dom, &other.dom) || self.dom == other.dom)
            && (Arc::ptr_eq(&self.cod, &other.cod) || self.cod == other.cod)
    }
}

impl Eq for FinFunctor {}

impl fmt::Debug for FinFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinFunctor({} → {}: ", self.dom.name(), self.cod.name())?;
        let objs: Vec<String> = (0..self.dom.num_objects())
            .map(|o| {
                format!(
                    "{}↦{}",
                    self.dom.object_name(o),
                    self.cod.object_name(self.map.objects[o])
                )
            })
            .collect();
        write!(f, "{})", objs.join(", "))
    }
}

impl FinFunctor {
    pub fn new(dom: Arc<FinCategory>, cod: Arc<FinCategory>, map: Mapping) -> Result<Self> {
        map.check(&dom, &cod)?;
        Ok(FinFunctor { dom, cod, map })
    }

    /// Construct without re-checking the functor laws; callers guarantee them.
    pub(crate) fn new_unchecked(
        dom: Arc<FinCategory>,
        cod: Arc<FinCategory>,
        map: Mapping,
    ) -> Self {
        debug_assert!(map.check(&dom, &cod).is_ok());
        FinFunctor { dom, cod, map }
    }

    pub fn identity(c: &Arc<FinCategory>) -> Self {
        FinFunctor {
            dom: c.clone(),
            cod: c.clone(),
            map: Mapping {
                objects: (0..c.num_objects()).collect(),
                arrows: (0..c.num_arrows()).collect(),
            },
        }
    }

    /// The functor sending everything to `b` and its identity.
    pub fn constant(dom: &Arc<FinCategory>, cod: &Arc<FinCategory>, b: ObjId) -> Result<Self> {
        if b >= cod.num_objects() {
            return Err(Error::BadParams(format!(
                "object index {b} outside {}",
                cod.name()
            )));
        }
        Ok(FinFunctor {
            dom: dom.clone(),
            cod: cod.clone(),
            map: Mapping {
                objects: vec![b; dom.num_objects()],
                arrows: vec![cod.identity(b); dom.num_arrows()],
            },
        })
    }

    /// Build from object and arrow images given by name. Identity arrows may
    /// be omitted; every other arrow needs an image.
    pub fn from_names<'a>(
        dom: &Arc<FinCategory>,
        cod: &Arc<FinCategory>,
        objects: impl IntoIterator<Item = (&'a str, &'a str)>,
        arrows: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self> {
        let mut obj: Vec<Option<ObjId>> = vec![None; dom.num_objects()];
        for (x, y) in objects {
            let i = dom
                .object_id(x)
                .ok_or_else(|| Error::UnknownObject(x.to_string()))?;
            let j = cod
                .object_id(y)
                .ok_or_else(|| Error::UnknownObject(y.to_string()))?;
            obj[i] = Some(j);
        }
        let objects = obj
            .iter()
            .enumerate()
            .map(|(i, o)| {
                o.ok_or_else(|| {
                    Error::InvalidFunctor(format!("object {} has no image", dom.object_name(i)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut arr: Vec<Option<ArrowId>> = vec![None; dom.num_arrows()];
        for (x, y) in arrows {
            let i = dom
                .arrow_id(x)
                .ok_or_else(|| Error::UnknownArrow(x.to_string()))?;
            let j = cod
                .arrow_id(y)
                .ok_or_else(|| Error::UnknownArrow(y.to_string()))?;
            arr[i] = Some(j);
        }
        let arrows = arr
            .iter()
            .enumerate()
            .map(|(i, a)| match (a, dom.identity_of(i)) {
                (Some(a), _) => Ok(*a),
                (None, Some(o)) => Ok(cod.identity(objects[o])),
                (None, None) => Err(Error::InvalidFunctor(format!(
                    "arrow {} has no image",
                    dom.arrow_name(i)
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        FinFunctor::new(dom.clone(), cod.clone(), Mapping { objects, arrows })
    }

    pub fn dom(&self) -> &Arc<FinCategory> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FinCategory> {
        &self.cod
    }

    pub fn mapping(&self) -> &Mapping {
        &self.map
    }

    pub fn into_mapping(self) -> Mapping {
        self.map
    }

    #[inline]
    pub fn obj(&self, o: ObjId) -> ObjId {
        self.map.objects[o]
    }

    #[inline]
    pub fn arr(&self, f: ArrowId) -> ArrowId {
        self.map.arrows[f]
    }

    /// Constant at some object? Returns it. The empty functor is constant
    /// with no object.
    pub fn constant_value(&self) -> Option<Option<ObjId>> {
        let first = match self.map.objects.first() {
            None => return Some(None),
            Some(&b) => b,
        };
        let id = self.cod.identity(first);
        (self.map.objects.iter().all(|&o| o == first) && self.map.arrows.iter().all(|&a| a == id))
            .then_some(Some(first))
    }

    pub fn same_shape(&self, other: &FinFunctor) -> bool {
        (Arc::ptr_eq(&self.dom, &other.dom) || self.dom == other.dom)
            && (Arc::ptr_eq(&self.cod, &other.cod) || self.cod == other.cod)
    }

    pub(crate) fn with_mapping(&self, map: Mapping) -> FinFunctor {
        FinFunctor {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            map,
        }
    }
}

/// `second ∘ first`.
pub fn compose_functors(second: &FinFunctor, first: &FinFunctor) -> Result<FinFunctor> {
    if !(Arc::ptr_eq(first.cod(), second.dom()) || first.cod() == second.dom()) {
        return Err(Error::DomainMismatch(format!(
            "cannot compose: codomain {} is not domain {}",
            first.cod().name(),
            second.dom().name()
        )));
    }
    Ok(FinFunctor {
        dom: first.dom.clone(),
        cod: second.cod.clone(),
        map: Mapping {
            objects: first.map.objects.iter().map(|&o| second.obj(o)).collect(),
            arrows: first.map.arrows.iter().map(|&f| second.arr(f)).collect(),
        },
    })
}

pub(crate) fn ensure_parallel(f: &FinFunctor, g: &FinFunctor) -> Result<()> {
    if f.same_shape(g) {
        Ok(())
    } else {
        Err(Error::DomainMismatch(format!(
            "functors {} → {} and {} → {} are not parallel",
            f.dom().name(),
            f.cod().name(),
            g.dom().name(),
            g.cod().name()
        )))
    }
}

/// A natural transformation `from ⇒ to`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatTrans {
    pub from: FinFunctor,
    pub to: FinFunctor,
    pub components: Vec<ArrowId>,
}

impl NatTrans {
    pub fn new(from: FinFunctor, to: FinFunctor, components: Vec<ArrowId>) -> Result<Self> {
        ensure_parallel(&from, &to)?;
        check_naturality(&from, &to, &components)?;
        Ok(NatTrans {
            from,
            to,
            components,
        })
    }

    pub fn identity(f: &FinFunctor) -> NatTrans {
        let components = (0..f.dom().num_objects())
            .map(|o| f.cod().identity(f.obj(o)))
            .collect();
        NatTrans {
            from: f.clone(),
            to: f.clone(),
            components,
        }
    }

    /// Whether every component is invertible.
    pub fn is_isomorphism(&self) -> bool {
        self.components
            .iter()
            .all(|&a| self.to.cod().inverse(a).is_some())
    }
}

/// Check that `components` form a natural transformation `from ⇒ to`.
pub fn check_naturality(from: &FinFunctor, to: &FinFunctor, components: &[ArrowId]) -> Result<()> {
    let dom = from.dom();
    let cod = from.cod();
    if components.len() != dom.num_objects() {
        return Err(Error::InvalidNatTrans(format!(
            "{} components for {} objects",
            components.len(),
            dom.num_objects()
        )));
    }
    for (c, &eta) in components.iter().enumerate() {
        if eta >= cod.num_arrows() || cod.src(eta) != from.obj(c) || cod.tgt(eta) != to.obj(c) {
            return Err(Error::InvalidNatTrans(format!(
                "component at {} has wrong endpoints",
                dom.object_name(c)
            )));
        }
    }
    for f in 0..dom.num_arrows() {
        let (a, b) = (dom.src(f), dom.tgt(f));
        let lhs = cod.compose(to.arr(f), components[a]);
        let rhs = cod.compose(components[b], from.arr(f));
        if lhs != rhs {
            return Err(Error::InvalidNatTrans(format!(
                "naturality square fails at arrow {}",
                dom.arrow_name(f)
            )));
        }
    }
    Ok(())
}
