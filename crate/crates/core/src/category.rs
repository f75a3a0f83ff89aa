//! Finite categories as validated composition tables.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of an object in its category's canonical order.
pub type ObjId = usize;
/// Index of an arrow in its category's canonical order.
pub type ArrowId = usize;

/// Prefix reserved for generated identity arrows.
pub const IDENTITY_PREFIX: &str = "id:";

pub fn identity_name(object: &str) -> String {
    format!("{IDENTITY_PREFIX}{object}")
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub src: ObjId,
    pub tgt: ObjId,
}

/// A finite category.
///
/// Objects and arrows are addressed by their position in the canonical order,
/// which is fixed at construction time; every search in this crate iterates in
/// that order. Composition is stored as a dense table indexed by
/// `(second, first)`.
#[derive(Clone)]
pub struct FinCategory {
    name: String,
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    identities: Vec<ArrowId>,
    comp: Vec<Option<ArrowId>>,
    // derived
    hom: Vec<Vec<ArrowId>>,
    identity_of: Vec<Option<ObjId>>,
    object_index: HashMap<String, ObjId>,
    arrow_index: HashMap<String, ArrowId>,
}

impl PartialEq for FinCategory {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.objects == other.objects
            && self.arrows == other.arrows
            && self.identities == other.identities
            && self.comp == other.comp
    }
}

impl Eq for FinCategory {}

impl fmt::Debug for FinCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCategory")
            .field("name", &self.name)
            .field("objects", &self.objects)
            .field("arrows", &self.arrows.len())
            .finish()
    }
}

impl FinCategory {
    /// Build and fully validate a category from its parts.
    ///
    /// `compose(g, f)` must return `Some(g ∘ f)` exactly when `tgt f = src g`.
    pub fn from_parts<C>(
        name: impl Into<String>,
        objects: Vec<String>,
        arrows: Vec<Arrow>,
        identities: Vec<ArrowId>,
        compose: C,
    ) -> Result<FinCategory>
    where
        C: Fn(ArrowId, ArrowId) -> Option<ArrowId>,
    {
        let n = arrows.len();
        let mut comp = vec![None; n * n];
        for g in 0..n {
            for f in 0..n {
                let composable = arrows[f].tgt == arrows[g].src;
                match (composable, compose(g, f)) {
                    (true, Some(h)) => comp[g * n + f] = Some(h),
                    (true, None) => {
                        return Err(Error::MissingComposite {
                            second: arrows[g].name.clone(),
                            first: arrows[f].name.clone(),
                        })
                    }
                    (false, Some(_)) => {
                        return Err(Error::BadComposite {
                            second: arrows[g].name.clone(),
                            first: arrows[f].name.clone(),
                            detail: "arrows are not composable".into(),
                        })
                    }
                    (false, None) => {}
                }
            }
        }
        let cat = Self::assemble(name.into(), objects, arrows, identities, comp)?;
        cat.check_laws()?;
        Ok(cat)
    }

    fn assemble(
        name: String,
        objects: Vec<String>,
        arrows: Vec<Arrow>,
        identities: Vec<ArrowId>,
        comp: Vec<Option<ArrowId>>,
    ) -> Result<FinCategory> {
        let n_obj = objects.len();
        let mut object_index = HashMap::with_capacity(n_obj);
        for (i, o) in objects.iter().enumerate() {
            if object_index.insert(o.clone(), i).is_some() {
                return Err(Error::DuplicateId(o.clone()));
            }
        }
        let mut arrow_index = HashMap::with_capacity(arrows.len());
        for (i, a) in arrows.iter().enumerate() {
            if arrow_index.insert(a.name.clone(), i).is_some() {
                return Err(Error::DuplicateId(a.name.clone()));
            }
            for (endpoint, o) in [("source", a.src), ("target", a.tgt)] {
                if o >= n_obj {
                    return Err(Error::DanglingEndpoint {
                        arrow: a.name.clone(),
                        endpoint,
                        object: o.to_string(),
                    });
                }
            }
        }
        if identities.len() != n_obj {
            return Err(Error::Internal(format!(
                "{} identities for {} objects",
                identities.len(),
                n_obj
            )));
        }
        let mut identity_of = vec![None; arrows.len()];
        for (o, &i) in identities.iter().enumerate() {
            let a = arrows
                .get(i)
                .ok_or_else(|| Error::UnknownArrow(i.to_string()))?;
            if a.src != o || a.tgt != o {
                return Err(Error::UnitViolation {
                    arrow: a.name.clone(),
                    detail: format!("identity of {} has wrong endpoints", objects[o]),
                });
            }
            identity_of[i] = Some(o);
        }
        let mut hom = vec![Vec::new(); n_obj * n_obj];
        for (i, a) in arrows.iter().enumerate() {
            hom[a.src * n_obj + a.tgt].push(i);
        }
        Ok(FinCategory {
            name,
            objects,
            arrows,
            identities,
            comp,
            hom,
            identity_of,
            object_index,
            arrow_index,
        })
    }

    fn check_laws(&self) -> Result<()> {
        let n = self.arrows.len();
        for g in 0..n {
            for f in 0..n {
                if let Some(h) = self.comp[g * n + f] {
                    let (hf, ff, gf) = (&self.arrows[h], &self.arrows[f], &self.arrows[g]);
                    if hf.src != ff.src || hf.tgt != gf.tgt {
                        return Err(Error::BadComposite {
                            second: gf.name.clone(),
                            first: ff.name.clone(),
                            detail: format!("result {} has wrong endpoints", hf.name),
                        });
                    }
                }
            }
        }
        for (f, a) in self.arrows.iter().enumerate() {
            let left = self.compose(self.identities[a.tgt], f);
            let right = self.compose(f, self.identities[a.src]);
            if left != Some(f) || right != Some(f) {
                return Err(Error::UnitViolation {
                    arrow: a.name.clone(),
                    detail: "composition with an identity does not return the arrow".into(),
                });
            }
        }
        for f in 0..n {
            for g in self.out_arrows(self.arrows[f].tgt) {
                let gf = self.comp[g * n + f].expect("checked composable");
                for h in self.out_arrows(self.arrows[g].tgt) {
                    let hg = self.comp[h * n + g].expect("checked composable");
                    if self.comp[h * n + gf] != self.comp[hg * n + f] {
                        return Err(Error::AssociativityViolation {
                            h: self.arrows[h].name.clone(),
                            g: self.arrows[g].name.clone(),
                            f: self.arrows[f].name.clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn object_name(&self, o: ObjId) -> &str {
        &self.objects[o]
    }

    pub fn arrow_name(&self, f: ArrowId) -> &str {
        &self.arrows[f].name
    }

    pub fn object_id(&self, name: &str) -> Option<ObjId> {
        self.object_index.get(name).copied()
    }

    pub fn arrow_id(&self, name: &str) -> Option<ArrowId> {
        self.arrow_index.get(name).copied()
    }

    pub fn src(&self, f: ArrowId) -> ObjId {
        self.arrows[f].src
    }

    pub fn tgt(&self, f: ArrowId) -> ObjId {
        self.arrows[f].tgt
    }

    pub fn identity(&self, o: ObjId) -> ArrowId {
        self.identities[o]
    }

    pub fn identities(&self) -> &[ArrowId] {
        &self.identities
    }

    pub fn is_identity(&self, f: ArrowId) -> bool {
        self.identity_of[f].is_some()
    }

    /// The object whose identity `f` is, if any.
    pub fn identity_of(&self, f: ArrowId) -> Option<ObjId> {
        self.identity_of[f]
    }

    /// `g ∘ f`, defined when `tgt f = src g`.
    #[inline]
    pub fn compose(&self, g: ArrowId, f: ArrowId) -> Option<ArrowId> {
        self.comp[g * self.arrows.len() + f]
    }

    /// Arrows `a → b` in canonical order.
    #[inline]
    pub fn hom(&self, a: ObjId, b: ObjId) -> &[ArrowId] {
        &self.hom[a * self.objects.len() + b]
    }

    pub fn out_arrows(&self, a: ObjId) -> impl Iterator<Item = ArrowId> + '_ {
        (0..self.objects.len()).flat_map(move |b| self.hom(a, b).iter().copied())
    }

    pub fn non_identity_arrows(&self) -> impl Iterator<Item = ArrowId> + '_ {
        (0..self.arrows.len()).filter(|&f| !self.is_identity(f))
    }

    /// Is `f` invertible? Returns its inverse.
    pub fn inverse(&self, f: ArrowId) -> Option<ArrowId> {
        let a = &self.arrows[f];
        self.hom(a.tgt, a.src).iter().copied().find(|&g| {
            self.compose(g, f) == Some(self.identities[a.src])
                && self.compose(f, g) == Some(self.identities[a.tgt])
        })
    }

    /// Opposite category: same indices, arrows reversed.
    pub fn opposite(&self) -> FinCategory {
        let n = self.arrows.len();
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow {
                name: a.name.clone(),
                src: a.tgt,
                tgt: a.src,
            })
            .collect();
        let mut comp = vec![None; n * n];
        for g in 0..n {
            for f in 0..n {
                comp[g * n + f] = self.comp[f * n + g];
            }
        }
        let name = match self.name.strip_suffix("^op") {
            Some(base) => base.to_string(),
            None => format!("{}^op", self.name),
        };
        Self::assemble(
            name,
            self.objects.clone(),
            arrows,
            self.identities.clone(),
            comp,
        )
        .expect("opposite of a valid category is valid")
    }

    /// Whether the underlying undirected graph is connected. The empty
    /// category counts as connected.
    pub fn is_connected(&self) -> bool {
        self.components().iter().all(|&c| c == 0)
    }

    /// Connected-component label of every object (labels in order of first
    /// appearance).
    pub fn components(&self) -> Vec<usize> {
        let n = self.objects.len();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            label[start] = next;
            while let Some(o) = stack.pop() {
                for p in 0..n {
                    if label[p] == usize::MAX
                        && (!self.hom(o, p).is_empty() || !self.hom(p, o).is_empty())
                    {
                        label[p] = next;
                        stack.push(p);
                    }
                }
            }
            next += 1;
        }
        label
    }

    /// The serializable description (identities implicit).
    pub fn to_spec(&self) -> CategorySpec {
        let arrows = self
            .non_identity_arrows()
            .map(|f| ArrowSpec {
                id: self.arrows[f].name.clone(),
                src: self.objects[self.arrows[f].src].clone(),
                tgt: self.objects[self.arrows[f].tgt].clone(),
            })
            .collect();
        let mut compose = Vec::new();
        for g in self.non_identity_arrows() {
            for f in self.non_identity_arrows() {
                if let Some(h) = self.compose(g, f) {
                    compose.push(ComposeSpec {
                        second: self.arrows[g].name.clone(),
                        first: self.arrows[f].name.clone(),
                        equals: self.arrows[h].name.clone(),
                    });
                }
            }
        }
        CategorySpec {
            name: self.name.clone(),
            objects: self.objects.clone(),
            arrows,
            compose,
        }
    }
}

/// The JSON description of a category.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategorySpec {
    #[serde(default)]
    pub name: String,
    pub objects: Vec<String>,
    #[serde(default)]
    pub arrows: Vec<ArrowSpec>,
    #[serde(default)]
    pub compose: Vec<ComposeSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowSpec {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComposeSpec {
    pub second: String,
    pub first: String,
    pub equals: String,
}

/// Validate a raw description.
///
/// Identities `id:<object>` are inserted ahead of the listed arrows, in object
/// order; compositions with identities are filled in automatically. Listed
/// composites may mention identities, but then must agree with the unit laws.
pub fn validate_category(raw: &CategorySpec) -> Result<FinCategory> {
    let mut object_index = HashMap::new();
    for (i, o) in raw.objects.iter().enumerate() {
        if object_index.insert(o.as_str(), i).is_some() {
            return Err(Error::DuplicateId(o.clone()));
        }
    }
    let mut arrows: Vec<Arrow> = raw
        .objects
        .iter()
        .enumerate()
        .map(|(i, o)| Arrow {
            name: identity_name(o),
            src: i,
            tgt: i,
        })
        .collect();
    let identities: Vec<ArrowId> = (0..raw.objects.len()).collect();
    for a in &raw.arrows {
        if a.id.starts_with(IDENTITY_PREFIX) {
            return Err(Error::ReservedId(a.id.clone()));
        }
        let endpoint = |endpoint: &'static str, name: &str| {
            object_index
                .get(name)
                .copied()
                .ok_or_else(|| Error::DanglingEndpoint {
                    arrow: a.id.clone(),
                    endpoint,
                    object: name.to_string(),
                })
        };
        let src = endpoint("source", &a.src)?;
        let tgt = endpoint("target", &a.tgt)?;
        if arrows.iter().any(|b| b.name == a.id) {
            return Err(Error::DuplicateId(a.id.clone()));
        }
        arrows.push(Arrow {
            name: a.id.clone(),
            src,
            tgt,
        });
    }
    let arrow_index: HashMap<&str, ArrowId> = arrows
        .iter()
        .enumerate()
        .map(|(i, a)| (a.name.as_str(), i))
        .collect();
    let lookup = |name: &str| {
        arrow_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownArrow(name.to_string()))
    };
    let n = arrows.len();
    let n_obj = raw.objects.len();
    let mut comp = vec![None; n * n];
    for f in 0..n {
        let src = arrows[f].src;
        let tgt = arrows[f].tgt;
        comp[identities[tgt] * n + f] = Some(f);
        comp[f * n + identities[src]] = Some(f);
    }
    for c in &raw.compose {
        let g = lookup(&c.second)?;
        let f = lookup(&c.first)?;
        let h = lookup(&c.equals)?;
        let bad = |detail: &str| Error::BadComposite {
            second: c.second.clone(),
            first: c.first.clone(),
            detail: detail.to_string(),
        };
        if arrows[f].tgt != arrows[g].src {
            return Err(bad("arrows are not composable"));
        }
        if arrows[h].src != arrows[f].src || arrows[h].tgt != arrows[g].tgt {
            return Err(bad(&format!("result {} has wrong endpoints", c.equals)));
        }
        let g_is_id = g < n_obj;
        let f_is_id = f < n_obj;
        if g_is_id || f_is_id {
            let expected = if g_is_id { f } else { g };
            if h != expected {
                return Err(Error::UnitViolation {
                    arrow: arrows[expected].name.clone(),
                    detail: format!("{} ∘ {} listed as {}", c.second, c.first, c.equals),
                });
            }
            continue;
        }
        match comp[g * n + f] {
            Some(prev) if prev != h => {
                return Err(bad(&format!(
                    "conflicting entries {} and {}",
                    arrows[prev].name, c.equals
                )))
            }
            _ => comp[g * n + f] = Some(h),
        }
    }
    FinCategory::from_parts(
        raw.name.clone(),
        raw.objects.clone(),
        arrows,
        identities,
        |g, f| comp[g * n + f],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(
        objects: &[&str],
        arrows: &[(&str, &str, &str)],
        compose: &[(&str, &str, &str)],
    ) -> CategorySpec {
        CategorySpec {
            name: "t".into(),
            objects: objects.iter().map(|s| s.to_string()).collect(),
            arrows: arrows
                .iter()
                .map(|(id, s, t)| ArrowSpec {
                    id: id.to_string(),
                    src: s.to_string(),
                    tgt: t.to_string(),
                })
                .collect(),
            compose: compose
                .iter()
                .map(|(g, f, h)| ComposeSpec {
                    second: g.to_string(),
                    first: f.to_string(),
                    equals: h.to_string(),
                })
                .collect(),
        }
    }

    #[test]
    fn interval_gets_identities() {
        let c = validate_category(&spec(&["0", "1"], &[("s", "0", "1")], &[])).unwrap();
        assert_eq!(c.num_arrows(), 3);
        assert_eq!(c.arrow_name(0), "id:0");
        assert_eq!(c.arrow_id("s"), Some(2));
        assert_eq!(c.compose(c.identity(1), 2), Some(2));
    }

    #[test]
    fn cyclic_group_of_order_two() {
        let c =
            validate_category(&spec(&["*"], &[("g", "*", "*")], &[("g", "g", "id:*")])).unwrap();
        let g = c.arrow_id("g").unwrap();
        assert_eq!(c.compose(g, g), Some(c.identity(0)));
        assert_eq!(c.inverse(g), Some(g));
    }

    #[test]
    fn missing_composite() {
        let err = validate_category(&spec(
            &["0", "1", "2"],
            &[("f", "0", "1"), ("g", "1", "2")],
            &[],
        ))
        .unwrap_err();
        assert_eq!(
            err,
            Error::MissingComposite {
                second: "g".into(),
                first: "f".into()
            }
        );
    }

    #[test]
    fn dangling_endpoint_and_reserved_ids() {
        let err = validate_category(&spec(&["0"], &[("f", "0", "9")], &[])).unwrap_err();
        assert!(matches!(err, Error::DanglingEndpoint { ref object, .. } if object == "9"));
        let err = validate_category(&spec(&["0"], &[("id:0", "0", "0")], &[])).unwrap_err();
        assert_eq!(err, Error::ReservedId("id:0".into()));
    }

    #[test]
    fn unit_violation_when_identity_composite_is_wrong() {
        let err = validate_category(&spec(
            &["0", "1"],
            &[("s", "0", "1"), ("t", "0", "1")],
            &[("id:1", "s", "t")],
        ))
        .unwrap_err();
        assert!(matches!(err, Error::UnitViolation { .. }));
    }

    #[test]
    fn associativity_violation() {
        // a∘a = b, a∘b = b, b∘a = a, b∘b = b: (a∘b)∘a = a but a∘(b∘a) = b
        let err = validate_category(&spec(
            &["*"],
            &[("a", "*", "*"), ("b", "*", "*")],
            &[
                ("a", "a", "b"),
                ("a", "b", "b"),
                ("b", "a", "a"),
                ("b", "b", "b"),
            ],
        ))
        .unwrap_err();
        assert!(
            matches!(err, Error::AssociativityViolation { .. }),
            "{err:?}"
        );
    }

    #[test]
    fn opposite_is_an_involution() {
        let c = validate_category(&spec(
            &["0", "1", "2"],
            &[("f", "0", "1"), ("g", "1", "2"), ("h", "0", "2")],
            &[("g", "f", "h")],
        ))
        .unwrap();
        let op = c.opposite();
        assert_eq!(op.src(op.arrow_id("f").unwrap()), 1);
        assert_eq!(
            op.compose(op.arrow_id("f").unwrap(), op.arrow_id("g").unwrap()),
            op.arrow_id("h")
        );
        assert_eq!(op.opposite(), c);
    }

    #[test]
    fn connectivity() {
        let c = validate_category(&spec(&["a", "b"], &[], &[])).unwrap();
        assert!(!c.is_connected());
        let e = validate_category(&spec(&[], &[], &[])).unwrap();
        assert!(e.is_connected());
    }

    #[test]
    fn spec_round_trip() {
        let raw = spec(
            &["0", "1", "2"],
            &[("f", "0", "1"), ("g", "1", "2"), ("h", "0", "2")],
            &[("g", "f", "h")],
        );
        let c = validate_category(&raw).unwrap();
        let back = validate_category(&c.to_spec()).unwrap();
        assert_eq!(back, c);
        let json = serde_json::to_string(&c.to_spec()).unwrap();
        let parsed: CategorySpec = serde_json::from_str(&json).unwrap();
        assert_eq!(validate_category(&parsed).unwrap(), c);
    }
}
