//! Subcategories, geometric covers and maximal subcategories satisfying a
//! hereditary predicate.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::category::{Arrow, ArrowId, FinCategory, ObjId};
use crate::error::{Error, Result};
use crate::functor::{FinFunctor, Mapping};
use crate::homotopy::{ZigzagStep, ZigzagWitness};
use crate::{par, Config};

/// A subcategory of `parent`: an object set and an arrow set that contain
/// all endpoints and identities and are closed under composition.
#[derive(Clone)]
pub struct Subcategory {
    parent: Arc<FinCategory>,
    objects: FixedBitSet,
    arrows: FixedBitSet,
}

impl PartialEq for Subcategory {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects && self.arrows == other.arrows && self.parent == other.parent
    }
}

impl Eq for Subcategory {}

/// Canonical order: by the sorted list of member arrow indices.
impl Ord for Subcategory {
    fn cmp(&self, other: &Self) -> Ordering {
        self.arrows.ones().cmp(other.arrows.ones())
    }
}

impl PartialOrd for Subcategory {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subcategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl Subcategory {
    /// Validate an explicit object and arrow selection.
    pub fn new(
        parent: &Arc<FinCategory>,
        objects: &[ObjId],
        arrows: &[ArrowId],
    ) -> Result<Subcategory> {
        let mut obj = FixedBitSet::with_capacity(parent.num_objects());
        let mut arr = FixedBitSet::with_capacity(parent.num_arrows());
        for &o in objects {
            if o >= parent.num_objects() {
                return Err(Error::NotASubcategory(format!(
                    "object index {o} out of range"
                )));
            }
            obj.insert(o);
        }
        for &a in arrows {
            if a >= parent.num_arrows() {
                return Err(Error::NotASubcategory(format!(
                    "arrow index {a} out of range"
                )));
            }
            arr.insert(a);
        }
        for o in obj.ones() {
            arr.insert(parent.identity(o));
        }
        for a in arr.ones() {
            for o in [parent.src(a), parent.tgt(a)] {
                if !obj.contains(o) {
                    return Err(Error::NotASubcategory(format!(
                        "arrow {} has endpoint {} outside the object set",
                        parent.arrow_name(a),
                        parent.object_name(o)
                    )));
                }
            }
        }
        for g in arr.ones() {
            for f in arr.ones() {
                if let Some(h) = parent.compose(g, f) {
                    if !arr.contains(h) {
                        return Err(Error::NotASubcategory(format!(
                            "composite {} ∘ {} = {} is missing",
                            parent.arrow_name(g),
                            parent.arrow_name(f),
                            parent.arrow_name(h)
                        )));
                    }
                }
            }
        }
        Ok(Subcategory {
            parent: parent.clone(),
            objects: obj,
            arrows: arr,
        })
    }

    pub fn whole(parent: &Arc<FinCategory>) -> Subcategory {
        let mut objects = FixedBitSet::with_capacity(parent.num_objects());
        objects.insert_range(..);
        let mut arrows = FixedBitSet::with_capacity(parent.num_arrows());
        arrows.insert_range(..);
        Subcategory {
            parent: parent.clone(),
            objects,
            arrows,
        }
    }

    pub fn empty(parent: &Arc<FinCategory>) -> Subcategory {
        Subcategory {
            parent: parent.clone(),
            objects: FixedBitSet::with_capacity(parent.num_objects()),
            arrows: FixedBitSet::with_capacity(parent.num_arrows()),
        }
    }

    /// Objects are determined by the identities among `arrows`; the caller
    /// guarantees closure.
    fn from_arrow_set(parent: &Arc<FinCategory>, arrows: FixedBitSet) -> Subcategory {
        let mut objects = FixedBitSet::with_capacity(parent.num_objects());
        for o in 0..parent.num_objects() {
            if arrows.contains(parent.identity(o)) {
                objects.insert(o);
            }
        }
        Subcategory {
            parent: parent.clone(),
            objects,
            arrows,
        }
    }

    pub fn parent(&self) -> &Arc<FinCategory> {
        &self.parent
    }

    pub fn object_ids(&self) -> Vec<ObjId> {
        self.objects.ones().collect()
    }

    pub fn arrow_ids(&self) -> Vec<ArrowId> {
        self.arrows.ones().collect()
    }

    pub fn num_objects(&self) -> usize {
        self.objects.count_ones(..)
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.count_ones(..)
    }

    pub fn contains_object(&self, o: ObjId) -> bool {
        self.objects.contains(o)
    }

    pub fn contains_arrow(&self, a: ArrowId) -> bool {
        self.arrows.contains(a)
    }

    pub fn is_whole(&self) -> bool {
        self.num_arrows() == self.parent.num_arrows()
    }

    pub fn is_subset_of(&self, other: &Subcategory) -> bool {
        self.arrows.is_subset(&other.arrows)
    }

    pub fn arrow_set(&self) -> &FixedBitSet {
        &self.arrows
    }

    /// Non-identity member arrows by name, in canonical order.
    pub fn describe(&self) -> String {
        let objs: Vec<&str> = self
            .objects
            .ones()
            .map(|o| self.parent.object_name(o))
            .collect();
        let arrs: Vec<&str> = self
            .arrows
            .ones()
            .filter(|&a| !self.parent.is_identity(a))
            .map(|a| self.parent.arrow_name(a))
            .collect();
        format!(
            "{{{}}} with arrows {{{}}}",
            objs.join(", "),
            arrs.join(", ")
        )
    }

    /// The subcategory as a standalone category (names kept, parent order
    /// kept) together with its inclusion into the parent.
    pub fn to_category(&self) -> (Arc<FinCategory>, FinFunctor) {
        let p = &self.parent;
        let obj_ids = self.object_ids();
        let arr_ids = self.arrow_ids();
        let mut obj_pos = vec![usize::MAX; p.num_objects()];
        for (i, &o) in obj_ids.iter().enumerate() {
            obj_pos[o] = i;
        }
        let mut arr_pos = vec![usize::MAX; p.num_arrows()];
        for (i, &a) in arr_ids.iter().enumerate() {
            arr_pos[a] = i;
        }
        let objects = obj_ids
            .iter()
            .map(|&o| p.object_name(o).to_string())
            .collect();
        let arrows = arr_ids
            .iter()
            .map(|&a| Arrow {
                name: p.arrow_name(a).to_string(),
                src: obj_pos[p.src(a)],
                tgt: obj_pos[p.tgt(a)],
            })
            .collect();
        let identities = obj_ids.iter().map(|&o| arr_pos[p.identity(o)]).collect();
        let cat = FinCategory::from_parts(
            format!("{}|U", p.name()),
            objects,
            arrows,
            identities,
            |g, f| p.compose(arr_ids[g], arr_ids[f]).map(|h| arr_pos[h]),
        )
        .expect("a closed subcategory is a category");
        let cat = Arc::new(cat);
        let inclusion = FinFunctor::new_unchecked(
            cat.clone(),
            p.clone(),
            Mapping {
                objects: obj_ids,
                arrows: arr_ids,
            },
        );
        (cat, inclusion)
    }

    /// Connected components, each as a subcategory of the same parent.
    pub fn components(&self) -> Vec<Subcategory> {
        split_components(&self.parent, &self.arrows)
            .into_iter()
            .map(|a| Subcategory::from_arrow_set(&self.parent, a))
            .collect()
    }

    fn local_object(&self, o: ObjId) -> usize {
        self.objects.count_ones(..o)
    }

    fn local_arrow(&self, a: ArrowId) -> usize {
        self.arrows.count_ones(..a)
    }

    /// Is the composable chain `start, arrows…` inside this subcategory?
    pub fn contains_chain(&self, chain: &Chain) -> bool {
        self.contains_object(chain.start) && chain.arrows.iter().all(|&a| self.contains_arrow(a))
    }
}

/// Restrict `f` to a subcategory of its domain: `f ∘ ι`.
pub fn restrict(f: &FinFunctor, sub: &Subcategory) -> Result<FinFunctor> {
    let (_, inclusion) = sub.to_category();
    crate::functor::compose_functors(f, &inclusion)
}

/// The functor on `u` agreeing with each part on its component.
pub fn glue_functors(
    u: &Subcategory,
    cod: &Arc<FinCategory>,
    parts: &[(Subcategory, FinFunctor)],
) -> Result<FinFunctor> {
    let (uc, _) = u.to_category();
    let mut objects = vec![usize::MAX; uc.num_objects()];
    let mut arrows = vec![usize::MAX; uc.num_arrows()];
    for (piece, f) in parts {
        for o in piece.objects.ones() {
            objects[u.local_object(o)] = f.obj(piece.local_object(o));
        }
        for a in piece.arrows.ones() {
            arrows[u.local_arrow(a)] = f.arr(piece.local_arrow(a));
        }
    }
    if objects.contains(&usize::MAX) || arrows.contains(&usize::MAX) {
        return Err(Error::Internal("parts do not cover the subcategory".into()));
    }
    FinFunctor::new(uc, cod.clone(), Mapping { objects, arrows })
}

/// A zigzag on `u` from `start` that runs each part's zigzag in turn while
/// the other components stay put. Each part must start at the restriction
/// of `start`.
pub fn glue_witnesses(
    u: &Subcategory,
    start: &FinFunctor,
    parts: &[(Subcategory, ZigzagWitness)],
) -> Result<ZigzagWitness> {
    let cod = start.cod().clone();
    let mut current: Vec<(Subcategory, FinFunctor)> = parts
        .iter()
        .map(|(p, w)| (p.clone(), w.start().clone()))
        .collect();
    let mut out = ZigzagWitness::trivial(start);
    if glue_functors(u, &cod, &current)?.mapping() != start.mapping() {
        return Err(Error::EndpointMismatch(
            "parts do not start at the given functor".into(),
        ));
    }
    for (i, (piece, w)) in parts.iter().enumerate() {
        for (k, step) in w.steps.iter().enumerate() {
            let before = out.end().clone();
            current[i].1 = w.functors[k + 1].clone();
            let after = glue_functors(u, &cod, &current)?;
            let mut components: Vec<ArrowId> = (0..before.dom().num_objects())
                .map(|x| cod.identity(before.obj(x)))
                .collect();
            for o in piece.objects.ones() {
                components[u.local_object(o)] = step.components[piece.local_object(o)];
            }
            out.functors.push(after);
            out.steps.push(ZigzagStep {
                direction: step.direction,
                components,
            });
        }
    }
    out.check()?;
    Ok(out)
}

/// The least subcategory containing the seeds.
pub fn generated_subcategory(
    parent: &Arc<FinCategory>,
    seed_objects: &[ObjId],
    seed_arrows: &[ArrowId],
) -> Subcategory {
    let mut arrows = FixedBitSet::with_capacity(parent.num_arrows());
    for &o in seed_objects {
        arrows.insert(parent.identity(o));
    }
    for &a in seed_arrows {
        arrows.insert(a);
        arrows.insert(parent.identity(parent.src(a)));
        arrows.insert(parent.identity(parent.tgt(a)));
    }
    loop {
        let mut added = Vec::new();
        for g in arrows.ones() {
            for f in arrows.ones() {
                if let Some(h) = parent.compose(g, f) {
                    if !arrows.contains(h) {
                        added.push(h);
                    }
                }
            }
        }
        if added.is_empty() {
            break;
        }
        for h in added {
            arrows.insert(h);
        }
    }
    Subcategory::from_arrow_set(parent, arrows)
}

/// A composable chain `start → ⋯` given by its arrows; a chain without
/// arrows is a single object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub start: ObjId,
    pub arrows: Vec<ArrowId>,
}

impl Chain {
    pub fn is_composable(&self, c: &FinCategory) -> bool {
        let mut at = self.start;
        for &a in &self.arrows {
            if a >= c.num_arrows() || c.src(a) != at {
                return false;
            }
            at = c.tgt(a);
        }
        true
    }

    pub fn describe(&self, c: &FinCategory) -> String {
        if self.arrows.is_empty() {
            format!("object {}", c.object_name(self.start))
        } else {
            let names: Vec<&str> = self.arrows.iter().map(|&a| c.arrow_name(a)).collect();
            format!("chain ({})", names.join(", "))
        }
    }
}

/// A shortest chain lying in no member of `family`, or `None` when the family
/// is a geometric cover.
///
/// Runs breadth-first over states `(object, members containing every arrow so
/// far)`; the family fails exactly when a state with no member is reachable.
pub fn find_uncovered_chain(parent: &FinCategory, family: &[Subcategory]) -> Option<Chain> {
    let k = family.len();
    let mut seen: HashSet<(ObjId, FixedBitSet)> = HashSet::new();
    let mut queue: VecDeque<(ObjId, FixedBitSet, usize)> = VecDeque::new();
    // (state, parent entry, arrow) for chain reconstruction
    let mut trail: Vec<(ObjId, Option<(usize, ArrowId)>)> = Vec::new();
    let arrow_members: Vec<FixedBitSet> = (0..parent.num_arrows())
        .map(|a| {
            let mut m = FixedBitSet::with_capacity(k);
            for (i, u) in family.iter().enumerate() {
                if u.contains_arrow(a) {
                    m.insert(i);
                }
            }
            m
        })
        .collect();
    let rebuild = |trail: &[(ObjId, Option<(usize, ArrowId)>)], mut i: usize| {
        let mut arrows = Vec::new();
        while let Some((p, a)) = trail[i].1 {
            arrows.push(a);
            i = p;
        }
        arrows.reverse();
        Chain {
            start: trail[i].0,
            arrows,
        }
    };
    for c in 0..parent.num_objects() {
        let mask = arrow_members[parent.identity(c)].clone();
        if mask.is_clear() {
            return Some(Chain {
                start: c,
                arrows: Vec::new(),
            });
        }
        if seen.insert((c, mask.clone())) {
            trail.push((c, None));
            queue.push_back((c, mask, trail.len() - 1));
        }
    }
    while let Some((c, mask, at)) = queue.pop_front() {
        for f in parent.out_arrows(c) {
            if parent.is_identity(f) {
                continue;
            }
            let mut next = mask.clone();
            next.intersect_with(&arrow_members[f]);
            let d = parent.tgt(f);
            if next.is_clear() {
                trail.push((d, Some((at, f))));
                return Some(rebuild(&trail, trail.len() - 1));
            }
            if seen.insert((d, next.clone())) {
                trail.push((d, Some((at, f))));
                queue.push_back((d, next, trail.len() - 1));
            }
        }
    }
    None
}

pub fn is_geometric_cover(parent: &FinCategory, family: &[Subcategory]) -> bool {
    find_uncovered_chain(parent, family).is_none()
}

/// A validated geometric cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeometricCover {
    parent: Arc<FinCategory>,
    members: Vec<Subcategory>,
}

impl GeometricCover {
    /// Check the chain condition; on failure the error names an uncovered
    /// chain.
    pub fn new(parent: &Arc<FinCategory>, members: Vec<Subcategory>) -> Result<GeometricCover> {
        if let Some(u) = members
            .iter()
            .find(|u| u.parent().as_ref() != parent.as_ref())
        {
            return Err(Error::NotASubcategory(format!(
                "member {} has a different parent",
                u.describe()
            )));
        }
        if let Some(chain) = find_uncovered_chain(parent, &members) {
            return Err(Error::NotASubcategory(format!(
                "not a geometric cover: {} lies in no member",
                chain.describe(parent)
            )));
        }
        Ok(GeometricCover {
            parent: parent.clone(),
            members,
        })
    }

    pub fn parent(&self) -> &Arc<FinCategory> {
        &self.parent
    }

    pub fn members(&self) -> &[Subcategory] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Arrow sets of the connected components of a subcategory.
fn split_components(parent: &FinCategory, arrows: &FixedBitSet) -> Vec<FixedBitSet> {
    let n = parent.num_objects();
    let mut root: Vec<usize> = (0..n).collect();
    fn find(root: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while root[x] != x {
            root[x] = root[root[x]];
            x = root[x];
        }
        x
    }
    for a in arrows.ones() {
        let (x, y) = (
            find(&mut root, parent.src(a)),
            find(&mut root, parent.tgt(a)),
        );
        root[x.max(y)] = x.min(y);
    }
    let mut by_root: Vec<Option<usize>> = vec![None; n];
    let mut out: Vec<FixedBitSet> = Vec::new();
    for a in arrows.ones() {
        let r = find(&mut root, parent.src(a));
        let i = *by_root[r].get_or_insert_with(|| {
            out.push(FixedBitSet::with_capacity(parent.num_arrows()));
            out.len() - 1
        });
        out[i].insert(a);
    }
    out
}

/// The least subcategory containing the closed set `base` and the arrow `e`.
fn closure_with(parent: &FinCategory, base: &FixedBitSet, e: ArrowId) -> FixedBitSet {
    let mut arrows = base.clone();
    let mut queue = Vec::new();
    for x in [
        e,
        parent.identity(parent.src(e)),
        parent.identity(parent.tgt(e)),
    ] {
        if !arrows.put(x) {
            queue.push(x);
        }
    }
    while let Some(x) = queue.pop() {
        let members: Vec<ArrowId> = arrows.ones().collect();
        for y in members {
            for h in [parent.compose(x, y), parent.compose(y, x)]
                .into_iter()
                .flatten()
            {
                if !arrows.put(h) {
                    queue.push(h);
                }
            }
        }
    }
    arrows
}

/// All inclusion-maximal subcategories of `parent` satisfying `pred`, which
/// must be hereditary (inherited by subcategories). Sorted canonically.
///
/// Maximal members are found one at a time. Given the members found so far,
/// a depth-first search looks for a satisfying subcategory inside none of
/// them, adding one arrow outside each found member in turn and pruning any
/// closure that fails the predicate; a hit is then grown greedily to a
/// maximal one. The search ends when no such subcategory exists. Predicate
/// calls are memoized and each batch runs in parallel.
pub fn maximal_subcategories<P>(
    parent: &Arc<FinCategory>,
    pred: P,
    config: &Config,
) -> Result<Vec<Subcategory>>
where
    P: Fn(&Subcategory) -> Result<bool> + Sync + Send,
{
    maximal_below(parent, Subcategory::whole(parent), &pred, false, config)
}

/// The connected components of `parent` as full subcategories.
pub fn component_subcategories(parent: &Arc<FinCategory>) -> Vec<Subcategory> {
    let labels = parent.components();
    let count = labels.iter().max().map_or(0, |m| m + 1);
    (0..count)
        .map(|j| {
            let mut arrows = FixedBitSet::with_capacity(parent.num_arrows());
            for a in 0..parent.num_arrows() {
                if labels[parent.src(a)] == j {
                    arrows.insert(a);
                }
            }
            Subcategory::from_arrow_set(parent, arrows)
        })
        .collect()
}

/// [`maximal_subcategories`] for a predicate that holds on `U` exactly when
/// it holds on each connected component of `U`. The predicate is only called
/// on connected subcategories; each component of the parent is searched on
/// its own and the maxima are combined.
pub fn maximal_subcategories_local<P>(
    parent: &Arc<FinCategory>,
    pred: P,
    config: &Config,
) -> Result<Vec<Subcategory>>
where
    P: Fn(&Subcategory) -> Result<bool> + Sync + Send,
{
    let comps = component_subcategories(parent);
    if comps.len() <= 1 {
        return maximal_below(parent, Subcategory::whole(parent), &pred, true, config);
    }
    let mut combined = vec![Subcategory::empty(parent)];
    for comp in comps {
        let maxima = maximal_below(parent, comp, &pred, true, config)?;
        if combined.len() * maxima.len() > config.max_subcategories {
            return Err(Error::budget(
                "combined maximal subcategories",
                combined.len() * maxima.len(),
                config.max_subcategories,
            ));
        }
        combined = combined
            .iter()
            .flat_map(|u| {
                maxima.iter().map(move |m| {
                    let mut arrows = u.arrows.clone();
                    arrows.union_with(&m.arrows);
                    Subcategory::from_arrow_set(parent, arrows)
                })
            })
            .collect();
    }
    combined.sort();
    Ok(combined)
}

/// [`maximal_subcategories`] for a predicate that fails on every
/// subcategory meeting two connected components of the parent and, within
/// one component, holds exactly when it holds on each connected component
/// of `U`.
pub fn maximal_subcategories_connected<P>(
    parent: &Arc<FinCategory>,
    pred: P,
    config: &Config,
) -> Result<Vec<Subcategory>>
where
    P: Fn(&Subcategory) -> Result<bool> + Sync + Send,
{
    let comps = component_subcategories(parent);
    if comps.len() <= 1 {
        return maximal_below(parent, Subcategory::whole(parent), &pred, true, config);
    }
    let mut out = Vec::new();
    for comp in comps {
        out.extend(maximal_below(parent, comp, &pred, true, config)?);
    }
    out.sort();
    Ok(out)
}

fn maximal_below<P>(
    parent: &Arc<FinCategory>,
    start: Subcategory,
    pred: &P,
    local: bool,
    config: &Config,
) -> Result<Vec<Subcategory>>
where
    P: Fn(&Subcategory) -> Result<bool> + Sync + Send,
{
    let mut search = MaximalSearch {
        parent,
        pred,
        config,
        local,
        memo: HashMap::new(),
        work: 0,
    };
    if search.eval(vec![start.arrows.clone()])?[0] {
        return Ok(vec![start]);
    }
    let elements: Vec<ArrowId> = start.arrows.ones().collect();
    let empty = FixedBitSet::with_capacity(parent.num_arrows());
    if !search.eval(vec![empty.clone()])?[0] {
        return Ok(Vec::new());
    }
    let mut found = vec![search.grow(empty.clone(), &elements)?];
    loop {
        let mut stack = vec![empty.clone()];
        let mut seen: HashSet<FixedBitSet> = HashSet::new();
        let mut hit = None;
        while let Some(t) = stack.pop() {
            let Some(m) = found.iter().find(|m| t.is_subset(m)) else {
                hit = Some(t);
                break;
            };
            let children: Vec<FixedBitSet> = elements
                .iter()
                .filter(|&&e| !m.contains(e))
                .map(|&e| closure_with(parent, &t, e))
                .filter(|c| seen.insert(c.clone()))
                .collect();
            search.work += children.len();
            let ok = search.eval(children.clone())?;
            stack.extend(
                children
                    .into_iter()
                    .zip(ok)
                    .rev()
                    .filter_map(|(c, k)| k.then_some(c)),
            );
        }
        match hit {
            Some(t) => {
                let m = search.grow(t, &elements)?;
                found.push(m);
            }
            None => break,
        }
    }
    let mut out: Vec<Subcategory> = found
        .into_iter()
        .map(|a| Subcategory::from_arrow_set(parent, a))
        .collect();
    out.sort();
    Ok(out)
}

struct MaximalSearch<'a, P> {
    parent: &'a Arc<FinCategory>,
    pred: &'a P,
    config: &'a Config,
    local: bool,
    memo: HashMap<FixedBitSet, bool>,
    work: usize,
}

impl<P> MaximalSearch<'_, P>
where
    P: Fn(&Subcategory) -> Result<bool> + Sync + Send,
{
    fn eval(&mut self, sets: Vec<FixedBitSet>) -> Result<Vec<bool>> {
        let pieces: Vec<Vec<FixedBitSet>> = if self.local {
            sets.iter()
                .map(|s| split_components(self.parent, s))
                .collect()
        } else {
            sets.iter().map(|s| vec![s.clone()]).collect()
        };
        let mut fresh: Vec<FixedBitSet> = pieces
            .iter()
            .flatten()
            .filter(|s| !self.memo.contains_key(*s))
            .cloned()
            .collect();
        fresh.sort_by(|x, y| x.ones().cmp(y.ones()));
        fresh.dedup();
        let total = self.memo.len() + fresh.len() + self.work;
        if total > self.config.max_subcategories {
            return Err(Error::budget(
                "subcategories examined",
                total,
                self.config.max_subcategories,
            ));
        }
        let subs: Vec<Subcategory> = fresh
            .iter()
            .map(|a| Subcategory::from_arrow_set(self.parent, a.clone()))
            .collect();
        let verdicts = par::try_map(self.config, &subs, |u| (self.pred)(u))?;
        for (a, v) in fresh.into_iter().zip(verdicts) {
            self.memo.insert(a, v);
        }
        Ok(pieces
            .iter()
            .map(|ps| ps.iter().all(|s| self.memo[s]))
            .collect())
    }

    /// One pass suffices: an element rejected once stays rejected.
    fn grow(&mut self, mut u: FixedBitSet, elements: &[ArrowId]) -> Result<FixedBitSet> {
        for &e in elements {
            if !u.contains(e) {
                let c = closure_with(self.parent, &u, e);
                if self.eval(vec![c.clone()])?[0] {
                    u = c;
                }
            }
        }
        Ok(u)
    }
}

/// Inclusion-maximal subcategories `U` with `F|U ≃ G|U`.
pub fn maximal_homotopy_domains(
    f: &FinFunctor,
    g: &FinFunctor,
    config: &Config,
) -> Result<Vec<Subcategory>> {
    crate::functor::ensure_parallel(f, g)?;
    maximal_subcategories_local(
        f.dom(),
        |u| {
            let (_, inc) = u.to_category();
            let fu = crate::functor::compose_functors(f, &inc)?;
            let gu = crate::functor::compose_functors(g, &inc)?;
            Ok(crate::homotopy::homotopic(&fu, &gu, config)?.is_some())
        },
        config,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{standard_category, StandardKind};

    fn cat(kind: StandardKind) -> Arc<FinCategory> {
        Arc::new(standard_category(&kind).unwrap())
    }

    #[test]
    fn closure_adds_endpoints_and_identities() {
        let i1 = cat(StandardKind::ZigzagInterval(1));
        let s = i1.arrow_id("s0").unwrap();
        let u = generated_subcategory(&i1, &[], &[s]);
        assert!(u.is_whole());
        let z2 = cat(StandardKind::CyclicGroup(2));
        let g = z2.arrow_id("g^1").unwrap();
        assert!(generated_subcategory(&z2, &[], &[g]).is_whole());
        assert_eq!(generated_subcategory(&z2, &[], &[]).num_arrows(), 0);
    }

    #[test]
    fn closure_adds_composites() {
        let c = cat(StandardKind::DirectedChain(2));
        let u = generated_subcategory(
            &c,
            &[],
            &[c.arrow_id("0<1").unwrap(), c.arrow_id("1<2").unwrap()],
        );
        assert!(u.is_whole());
    }

    #[test]
    fn non_subcategory_is_rejected() {
        let c = cat(StandardKind::DirectedChain(2));
        let ids: Vec<ArrowId> = vec![c.arrow_id("0<1").unwrap(), c.arrow_id("1<2").unwrap()];
        let err = Subcategory::new(&c, &[0, 1, 2], &ids).unwrap_err();
        assert!(matches!(err, Error::NotASubcategory(_)));
        let err = Subcategory::new(&c, &[0], &ids[..1]).unwrap_err();
        assert!(matches!(err, Error::NotASubcategory(_)));
    }

    #[test]
    fn cover_examples() {
        let z2 = cat(StandardKind::CyclicGroup(2));
        assert!(is_geometric_cover(&z2, &[Subcategory::whole(&z2)]));
        let trivial = Subcategory::new(&z2, &[0], &[]).unwrap();
        let chain = find_uncovered_chain(&z2, &[trivial]).unwrap();
        assert_eq!(chain.arrows, vec![z2.arrow_id("g^1").unwrap()]);

        let i2 = cat(StandardKind::ZigzagInterval(2));
        let s0 = i2.arrow_id("s0").unwrap();
        let s1 = i2.arrow_id("s1").unwrap();
        let fam = [
            generated_subcategory(&i2, &[], &[s0]),
            generated_subcategory(&i2, &[], &[s1]),
        ];
        assert!(is_geometric_cover(&i2, &fam));
    }

    #[test]
    fn uncovered_object_and_long_chain() {
        let c = cat(StandardKind::DirectedChain(2));
        let a = c.arrow_id("0<1").unwrap();
        let b = c.arrow_id("1<2").unwrap();
        let fam = [
            generated_subcategory(&c, &[], &[a]),
            generated_subcategory(&c, &[], &[b]),
        ];
        // the composite 0 → 2 lies in neither member
        let chain = find_uncovered_chain(&c, &fam).unwrap();
        assert_eq!(chain.arrows, vec![c.arrow_id("0<2").unwrap()]);
        let fam = [generated_subcategory(&c, &[], &[a, b])];
        assert!(find_uncovered_chain(&c, &fam).is_none());
        let fam = [generated_subcategory(&c, &[0], &[])];
        let chain = find_uncovered_chain(&c, &fam).unwrap();
        assert_eq!((chain.start, chain.arrows.len()), (1, 0));
    }

    #[test]
    fn empty_family_covers_only_the_empty_category() {
        let e = cat(StandardKind::Discrete(0));
        assert!(is_geometric_cover(&e, &[]));
        let p = cat(StandardKind::Point);
        assert!(!is_geometric_cover(&p, &[]));
    }

    #[test]
    fn standalone_subcategory() {
        let c = cat(StandardKind::DirectedChain(2));
        let u = generated_subcategory(&c, &[], &[c.arrow_id("1<2").unwrap()]);
        let (uc, inc) = u.to_category();
        assert_eq!(uc.num_objects(), 2);
        assert_eq!(uc.num_arrows(), 3);
        inc.mapping().check(&uc, &c).unwrap();
    }

    #[test]
    fn homotopy_domain_examples() {
        let cfg = Config::default();
        let z2 = cat(StandardKind::CyclicGroup(2));
        let id = FinFunctor::identity(&z2);
        let triv = FinFunctor::constant(&z2, &z2, 0).unwrap();
        let doms = maximal_homotopy_domains(&id, &triv, &cfg).unwrap();
        assert_eq!(doms.len(), 1);
        assert_eq!(doms[0].num_arrows(), 1);

        let i1 = cat(StandardKind::ZigzagInterval(1));
        let id = FinFunctor::identity(&i1);
        let k1 = FinFunctor::constant(&i1, &i1, 1).unwrap();
        let doms = maximal_homotopy_domains(&id, &k1, &cfg).unwrap();
        assert_eq!(doms.len(), 1);
        assert!(doms[0].is_whole());
    }

    fn brute_force_maximal<P: Fn(&Subcategory) -> bool>(
        c: &Arc<FinCategory>,
        pred: P,
    ) -> Vec<Vec<ArrowId>> {
        let n = c.num_arrows();
        let mut good: Vec<FixedBitSet> = Vec::new();
        for mask in 0u32..(1 << n) {
            let mut set = FixedBitSet::with_capacity(n);
            for a in 0..n {
                if mask & (1 << a) != 0 {
                    set.insert(a);
                }
            }
            let closed = set
                .ones()
                .all(|a| set.contains(c.identity(c.src(a))) && set.contains(c.identity(c.tgt(a))))
                && set.ones().all(|g| {
                    set.ones()
                        .all(|f| c.compose(g, f).is_none_or(|h| set.contains(h)))
                });
            if closed && pred(&Subcategory::from_arrow_set(c, set.clone())) {
                good.push(set);
            }
        }
        let mut out: Vec<Vec<ArrowId>> = good
            .iter()
            .filter(|x| !good.iter().any(|y| y != *x && x.is_subset(y)))
            .map(|x| x.ones().collect())
            .collect();
        out.sort();
        out
    }

    #[test]
    fn maximal_search_matches_brute_force() {
        let cfg = Config::default();
        for seed in 0..30 {
            let c = Arc::new(crate::verify::random_category(seed, 3, 4, &cfg).unwrap());
            if c.num_arrows() > 12 {
                continue;
            }
            let all = crate::homotopy::enumerate_functors(&c, &c, &cfg).unwrap();
            for (f, g) in [(0, all.len() - 1), (all.len() / 2, 0)] {
                let (f, g) = (&all[f], &all[g]);
                let hom = |u: &Subcategory| {
                    let fu = restrict(f, u).unwrap();
                    let gu = restrict(g, u).unwrap();
                    crate::homotopy::homotopic(&fu, &gu, &cfg)
                        .unwrap()
                        .is_some()
                };
                let expected = brute_force_maximal(&c, hom);
                let got: Vec<Vec<ArrowId>> = maximal_homotopy_domains(f, g, &cfg)
                    .unwrap()
                    .iter()
                    .map(|u| u.arrow_ids())
                    .collect();
                assert_eq!(got, expected, "seed {seed}");
                let got: Vec<Vec<ArrowId>> = maximal_subcategories(&c, |u| Ok(hom(u)), &cfg)
                    .unwrap()
                    .iter()
                    .map(|u| u.arrow_ids())
                    .collect();
                assert_eq!(got, expected, "seed {seed}");
            }
            // at most two non-identity arrows
            let small =
                |u: &Subcategory| u.arrow_ids().iter().filter(|&&a| !c.is_identity(a)).count() <= 2;
            let got: Vec<Vec<ArrowId>> = maximal_subcategories(&c, |u| Ok(small(u)), &cfg)
                .unwrap()
                .iter()
                .map(|u| u.arrow_ids())
                .collect();
            assert_eq!(got, brute_force_maximal(&c, small), "seed {seed}");
        }
    }
}
