//! Homotopy of functors as reachability in the zigzag graph of functors.
//!
//! Two functors `F, G: C → D` are homotopic when a finite zigzag
//! `F = F₀ ~ F₁ ~ ⋯ ~ Fₘ = G` of natural transformations (each pointing either
//! way) connects them. The functor space of a finite pair is finite, so this
//! is decided exactly by a breadth-first search whose neighbours are generated
//! by backtracking over transformation components.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::category::{ArrowId, FinCategory, ObjId};
use crate::construct::{standard_category, StandardKind};
use crate::error::{Error, Result};
use crate::functor::{
    check_naturality, compose_functors, ensure_parallel, FinFunctor, Mapping, NatTrans,
};
use crate::{par, Config};

/// Orientation of one zigzag step between `Fᵢ` and `Fᵢ₊₁`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    /// `Fᵢ ⇒ Fᵢ₊₁`
    Forward,
    /// `Fᵢ₊₁ ⇒ Fᵢ`
    Backward,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZigzagStep {
    pub direction: Direction,
    /// One component per object of the common domain.
    pub components: Vec<ArrowId>,
}

/// A homotopy certificate `F₀ ~ F₁ ~ ⋯ ~ Fₘ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZigzagWitness {
    pub functors: Vec<FinFunctor>,
    pub steps: Vec<ZigzagStep>,
}

impl ZigzagWitness {
    pub fn trivial(f: &FinFunctor) -> Self {
        ZigzagWitness {
            functors: vec![f.clone()],
            steps: Vec::new(),
        }
    }

    /// Number of steps.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn start(&self) -> &FinFunctor {
        &self.functors[0]
    }

    pub fn end(&self) -> &FinFunctor {
        self.functors
            .last()
            .expect("witness has at least one functor")
    }

    /// The natural transformation of step `i`, oriented as stored.
    pub fn transformation(&self, i: usize) -> NatTrans {
        let step = &self.steps[i];
        let (from, to) = match step.direction {
            Direction::Forward => (&self.functors[i], &self.functors[i + 1]),
            Direction::Backward => (&self.functors[i + 1], &self.functors[i]),
        };
        NatTrans {
            from: from.clone(),
            to: to.clone(),
            components: step.components.clone(),
        }
    }

    /// Check every functor, endpoint and naturality square. The error names
    /// the failing step and arrow.
    pub fn check(&self) -> Result<()> {
        let first = self
            .functors
            .first()
            .ok_or_else(|| Error::InvalidNatTrans("witness has no functors".into()))?;
        if self.steps.len() + 1 != self.functors.len() {
            return Err(Error::InvalidNatTrans(format!(
                "{} steps for {} functors",
                self.steps.len(),
                self.functors.len()
            )));
        }
        for (i, f) in self.functors.iter().enumerate() {
            ensure_parallel(first, f)
                .map_err(|e| Error::InvalidNatTrans(format!("functor {i}: {e}")))?;
            f.mapping()
                .check(f.dom(), f.cod())
                .map_err(|e| Error::InvalidNatTrans(format!("functor {i}: {e}")))?;
        }
        for i in 0..self.steps.len() {
            let t = self.transformation(i);
            check_naturality(&t.from, &t.to, &t.components)
                .map_err(|e| Error::InvalidNatTrans(format!("step {i}: {e}")))?;
        }
        Ok(())
    }

    /// Does the witness connect `f` to `g`?
    pub fn connects(&self, f: &FinFunctor, g: &FinFunctor) -> bool {
        self.start() == f && self.end() == g
    }

    pub fn reversed(&self) -> ZigzagWitness {
        ZigzagWitness {
            functors: self.functors.iter().rev().cloned().collect(),
            steps: self
                .steps
                .iter()
                .rev()
                .map(|s| ZigzagStep {
                    direction: s.direction.flip(),
                    components: s.components.clone(),
                })
                .collect(),
        }
    }

    pub fn concat(&self, next: &ZigzagWitness) -> Result<ZigzagWitness> {
        if self.end() != next.start() {
            return Err(Error::EndpointMismatch("witnesses do not meet".into()));
        }
        let mut functors = self.functors.clone();
        functors.extend(next.functors.iter().skip(1).cloned());
        let mut steps = self.steps.clone();
        steps.extend(next.steps.iter().cloned());
        Ok(ZigzagWitness { functors, steps })
    }

    /// Whisker on the right: `Fᵢ ∘ K`.
    pub fn precompose(&self, k: &FinFunctor) -> Result<ZigzagWitness> {
        let functors = self
            .functors
            .iter()
            .map(|f| compose_functors(f, k))
            .collect::<Result<Vec<_>>>()?;
        let steps = self
            .steps
            .iter()
            .map(|s| ZigzagStep {
                direction: s.direction,
                components: (0..k.dom().num_objects())
                    .map(|b| s.components[k.obj(b)])
                    .collect(),
            })
            .collect();
        Ok(ZigzagWitness { functors, steps })
    }

    /// Whisker on the left: `H ∘ Fᵢ`.
    pub fn postcompose(&self, h: &FinFunctor) -> Result<ZigzagWitness> {
        let functors = self
            .functors
            .iter()
            .map(|f| compose_functors(h, f))
            .collect::<Result<Vec<_>>>()?;
        let steps = self
            .steps
            .iter()
            .map(|s| ZigzagStep {
                direction: s.direction,
                components: s.components.iter().map(|&a| h.arr(a)).collect(),
            })
            .collect();
        Ok(ZigzagWitness { functors, steps })
    }

    /// The same homotopy as a functor `C × Iₘ → D` out of a zigzag interval
    /// `0 → 1 ← 2 → ⋯`. Steps are padded with identity transformations where
    /// the orientation does not alternate; returns the functor and `m`.
    pub fn to_interval_functor(&self, config: &Config) -> Result<(FinFunctor, usize)> {
        let mut functors = vec![self.functors[0].clone()];
        let mut steps: Vec<ZigzagStep> = Vec::new();
        for (i, s) in self.steps.iter().enumerate() {
            let wanted = if steps.len() % 2 == 0 {
                Direction::Forward
            } else {
                Direction::Backward
            };
            if s.direction != wanted {
                let f = &self.functors[i];
                steps.push(ZigzagStep {
                    direction: wanted,
                    components: NatTrans::identity(f).components,
                });
                functors.push(f.clone());
            }
            steps.push(s.clone());
            functors.push(self.functors[i + 1].clone());
        }
        let m = steps.len();
        let interval = Arc::new(standard_category(&StandardKind::ZigzagInterval(m))?);
        let c = self.functors[0].dom().clone();
        let d = self.functors[0].cod().clone();
        let prod = crate::construct::product(&[c.clone(), interval.clone()], config)?;
        let pc = &prod.category;
        let mut objects = vec![0; pc.num_objects()];
        for o in 0..pc.num_objects() {
            let (x, i) = (prod.projections[0].obj(o), prod.projections[1].obj(o));
            objects[o] = functors[i].obj(x);
        }
        let mut arrows = vec![0; pc.num_arrows()];
        for a in 0..pc.num_arrows() {
            let (f, t) = (prod.projections[0].arr(a), prod.projections[1].arr(a));
            arrows[a] = match interval.identity_of(t) {
                Some(i) => functors[i].arr(f),
                None => {
                    // t = s_j between j and j+1
                    let j = t - interval.num_objects();
                    let step = &steps[j];
                    let from = match step.direction {
                        Direction::Forward => &functors[j],
                        Direction::Backward => &functors[j + 1],
                    };
                    let eta = step.components[c.tgt(f)];
                    d.compose(eta, from.arr(f)).expect("component composes")
                }
            };
        }
        let h = FinFunctor::new(pc.clone(), d, Mapping { objects, arrows })?;
        Ok((h, m))
    }
}

/// Non-identity arrows of `c` grouped by the later of their two endpoints.
fn arrows_by_last_endpoint(c: &FinCategory) -> Vec<Vec<ArrowId>> {
    let mut out = vec![Vec::new(); c.num_objects()];
    for f in c.non_identity_arrows() {
        out[c.src(f).max(c.tgt(f))].push(f);
    }
    out
}

/// First natural transformation `F ⇒ G` in canonical component order.
pub fn nat_trans_search(f: &FinFunctor, g: &FinFunctor) -> Result<Option<NatTrans>> {
    ensure_parallel(f, g)?;
    Ok(nat_trans_components(f, g).map(|components| NatTrans {
        from: f.clone(),
        to: g.clone(),
        components,
    }))
}

fn nat_trans_components(f: &FinFunctor, g: &FinFunctor) -> Option<Vec<ArrowId>> {
    let dom = f.dom();
    let cod = f.cod();
    let by_last = arrows_by_last_endpoint(dom);
    let mut eta = vec![0; dom.num_objects()];

    fn go(
        c: usize,
        f: &FinFunctor,
        g: &FinFunctor,
        cod: &FinCategory,
        dom: &FinCategory,
        by_last: &[Vec<ArrowId>],
        eta: &mut Vec<ArrowId>,
    ) -> bool {
        if c == eta.len() {
            return true;
        }
        for &cand in cod.hom(f.obj(c), g.obj(c)) {
            eta[c] = cand;
            let ok = by_last[c].iter().all(|&a| {
                cod.compose(g.arr(a), eta[dom.src(a)]) == cod.compose(eta[dom.tgt(a)], f.arr(a))
            });
            if ok && go(c + 1, f, g, cod, dom, by_last, eta) {
                return true;
            }
        }
        false
    }

    go(0, f, g, cod, dom, &by_last, &mut eta).then_some(eta)
}

/// Composition constraints `(g, f, g∘f)` of `dom`, each filed under its
/// largest arrow index so arrow maps can be checked while being built.
fn composition_constraints(dom: &FinCategory) -> Vec<Vec<(ArrowId, ArrowId, ArrowId)>> {
    let mut out = vec![Vec::new(); dom.num_arrows()];
    for g in dom.non_identity_arrows() {
        for f in dom.non_identity_arrows() {
            if let Some(h) = dom.compose(g, f) {
                out[g.max(f).max(h)].push((g, f, h));
            }
        }
    }
    out
}

/// Enumerate all arrow maps drawn from `candidates` that preserve composition.
/// `visit` returns `false` to stop early; so does running out of `steps`.
fn for_each_arrow_map(
    cod: &FinCategory,
    candidates: &[Vec<ArrowId>],
    constraints: &[Vec<(ArrowId, ArrowId, ArrowId)>],
    steps: &mut usize,
    visit: &mut dyn FnMut(&[ArrowId]) -> bool,
) -> bool {
    fn go(
        k: usize,
        cod: &FinCategory,
        candidates: &[Vec<ArrowId>],
        constraints: &[Vec<(ArrowId, ArrowId, ArrowId)>],
        current: &mut Vec<ArrowId>,
        steps: &mut usize,
        visit: &mut dyn FnMut(&[ArrowId]) -> bool,
    ) -> bool {
        if k == candidates.len() {
            return visit(current);
        }
        for &cand in &candidates[k] {
            if *steps == 0 {
                return false;
            }
            *steps -= 1;
            current[k] = cand;
            let ok = constraints[k]
                .iter()
                .all(|&(g, f, h)| cod.compose(current[g], current[f]) == Some(current[h]));
            if ok && !go(k + 1, cod, candidates, constraints, current, steps, visit) {
                return false;
            }
        }
        true
    }
    let mut current = vec![0; candidates.len()];
    go(0, cod, candidates, constraints, &mut current, steps, visit)
}

fn object_map_count(dom: &FinCategory, cod: &FinCategory) -> usize {
    let mut total: usize = 1;
    for _ in 0..dom.num_objects() {
        total = total.saturating_mul(cod.num_objects());
    }
    total
}

/// Every functor `dom → cod`, each once, in canonical order (lexicographic on
/// the object map, then the arrow map).
pub fn enumerate_functors(
    dom: &Arc<FinCategory>,
    cod: &Arc<FinCategory>,
    config: &Config,
) -> Result<Vec<FinFunctor>> {
    let maps = object_map_count(dom, cod);
    if maps > config.max_object_maps {
        return Err(Error::budget(
            "functor object maps",
            maps,
            config.max_object_maps,
        ));
    }
    let constraints = composition_constraints(dom);
    let n = dom.num_objects();
    let mut out = Vec::new();
    if n > 0 && cod.num_objects() == 0 {
        return Ok(out);
    }
    let mut objects = vec![0; n];
    loop {
        let candidates: Vec<Vec<ArrowId>> = (0..dom.num_arrows())
            .map(|a| match dom.identity_of(a) {
                Some(o) => vec![cod.identity(objects[o])],
                None => cod.hom(objects[dom.src(a)], objects[dom.tgt(a)]).to_vec(),
            })
            .collect();
        for_each_arrow_map(
            cod,
            &candidates,
            &constraints,
            &mut { usize::MAX },
            &mut |arrows| {
                out.push(FinFunctor::new_unchecked(
                    dom.clone(),
                    cod.clone(),
                    Mapping {
                        objects: objects.clone(),
                        arrows: arrows.to_vec(),
                    },
                ));
                true
            },
        );
        // odometer, last object fastest
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            objects[k] += 1;
            if objects[k] < cod.num_objects() {
                break;
            }
            objects[k] = 0;
        }
    }
}

/// All functors joined to `f` by one natural transformation, with the first
/// transformation found for each (canonical order). Outgoing edges
/// (`f ⇒ g`) take precedence over incoming ones.
pub fn zigzag_neighbours(f: &FinFunctor) -> BTreeMap<Mapping, ZigzagStep> {
    neighbours_bounded(f, usize::MAX).expect("unbounded").0
}

/// [`zigzag_neighbours`] within `steps` enumeration steps; also returns the
/// steps used.
fn neighbours_bounded(
    f: &FinFunctor,
    steps: usize,
) -> Result<(BTreeMap<Mapping, ZigzagStep>, usize)> {
    let mut out = BTreeMap::new();
    let constraints = composition_constraints(f.dom());
    let mut left = steps;
    for direction in [Direction::Forward, Direction::Backward] {
        let complete = transformations_at(f, direction, &constraints, &mut left, &mut |g, eta| {
            out.entry(g).or_insert_with(|| ZigzagStep {
                direction,
                components: eta.to_vec(),
            });
            true
        });
        if !complete {
            return Err(Error::budget(
                "neighbour enumeration steps",
                steps + 1,
                steps,
            ));
        }
    }
    Ok((out, steps - left))
}

/// Neighbours of every frontier node in `chunk`, each node drawing an equal
/// share of `budget`.
fn expand_chunk<F>(
    config: &Config,
    chunk: &[usize],
    budget: &mut usize,
    functor_at: F,
) -> Result<Vec<BTreeMap<Mapping, ZigzagStep>>>
where
    F: Fn(usize) -> FinFunctor + Sync,
{
    let share = *budget / chunk.len().max(1);
    let expanded = par::try_map(config, chunk, |&i| {
        neighbours_bounded(&functor_at(i), share)
    })?;
    let mut out = Vec::with_capacity(expanded.len());
    for (neighbours, used) in expanded {
        *budget -= used;
        out.push(neighbours);
    }
    Ok(out)
}

/// Enumerate pairs `(g, η)` with `η: f ⇒ g` (`Forward`) or `η: g ⇒ f`
/// (`Backward`).
fn transformations_at(
    f: &FinFunctor,
    direction: Direction,
    constraints: &[Vec<(ArrowId, ArrowId, ArrowId)>],
    steps: &mut usize,
    visit: &mut dyn FnMut(Mapping, &[ArrowId]) -> bool,
) -> bool {
    let dom = f.dom().as_ref();
    let cod = f.cod().as_ref();
    let by_last = arrows_by_last_endpoint(dom);
    let n = dom.num_objects();
    let mut g_obj = vec![0; n];
    let mut eta = vec![0; n];
    let mut cands: Vec<Vec<ArrowId>> = (0..dom.num_arrows()).map(|_| Vec::new()).collect();

    // candidate images of `a` under g, given g on objects and η
    let fillers = |a: ArrowId, g_obj: &[ObjId], eta: &[ArrowId]| -> Vec<ArrowId> {
        let (s, t) = (dom.src(a), dom.tgt(a));
        cod.hom(g_obj[s], g_obj[t])
            .iter()
            .copied()
            .filter(|&x| match direction {
                Direction::Forward => cod.compose(x, eta[s]) == cod.compose(eta[t], f.arr(a)),
                Direction::Backward => cod.compose(f.arr(a), eta[s]) == cod.compose(eta[t], x),
            })
            .collect()
    };

    #[allow(clippy::too_many_arguments)]
    fn go(
        c: usize,
        f: &FinFunctor,
        direction: Direction,
        dom: &FinCategory,
        cod: &FinCategory,
        by_last: &[Vec<ArrowId>],
        constraints: &[Vec<(ArrowId, ArrowId, ArrowId)>],
        g_obj: &mut Vec<ObjId>,
        eta: &mut Vec<ArrowId>,
        cands: &mut Vec<Vec<ArrowId>>,
        fillers: &dyn Fn(ArrowId, &[ObjId], &[ArrowId]) -> Vec<ArrowId>,
        steps: &mut usize,
        visit: &mut dyn FnMut(Mapping, &[ArrowId]) -> bool,
    ) -> bool {
        if c == g_obj.len() {
            for o in 0..dom.num_objects() {
                cands[dom.identity(o)] = vec![cod.identity(g_obj[o])];
            }
            return for_each_arrow_map(cod, cands, constraints, steps, &mut |arrows| {
                visit(
                    Mapping {
                        objects: g_obj.clone(),
                        arrows: arrows.to_vec(),
                    },
                    eta,
                )
            });
        }
        for d in 0..cod.num_objects() {
            g_obj[c] = d;
            let comps: &[ArrowId] = match direction {
                Direction::Forward => cod.hom(f.obj(c), d),
                Direction::Backward => cod.hom(d, f.obj(c)),
            };
            for &e in comps {
                if *steps == 0 {
                    return false;
                }
                *steps -= 1;
                eta[c] = e;
                let mut ok = true;
                for &a in &by_last[c] {
                    let fl = fillers(a, g_obj, eta);
                    if fl.is_empty() {
                        ok = false;
                        break;
                    }
                    cands[a] = fl;
                }
                if ok
                    && !go(
                        c + 1,
                        f,
                        direction,
                        dom,
                        cod,
                        by_last,
                        constraints,
                        g_obj,
                        eta,
                        cands,
                        fillers,
                        steps,
                        visit,
                    )
                {
                    return false;
                }
            }
        }
        true
    }

    go(
        0,
        f,
        direction,
        dom,
        cod,
        &by_last,
        constraints,
        &mut g_obj,
        &mut eta,
        &mut cands,
        &fillers,
        steps,
        visit,
    )
}

const FRONTIER_CHUNK: usize = 32;
const NEIGHBOUR_STEPS: usize = 64;

/// Breadth-first search of the zigzag graph from `start` until a functor
/// satisfying `is_target` is reached. Returns a shortest witness, or `None`
/// when the whole component of `start` has been explored.
///
/// Frontier expansion may run in parallel; neighbours are merged in frontier
/// order, so the witness does not depend on the mode.
pub fn search_component<P>(
    start: &FinFunctor,
    is_target: P,
    config: &Config,
) -> Result<Option<ZigzagWitness>>
where
    P: Fn(&Mapping) -> bool,
{
    if is_target(start.mapping()) {
        return Ok(Some(ZigzagWitness::trivial(start)));
    }
    let mut nodes: Vec<Mapping> = vec![start.mapping().clone()];
    let mut parent: Vec<Option<(usize, ZigzagStep)>> = vec![None];
    let mut seen: HashMap<Mapping, usize> = HashMap::from([(start.mapping().clone(), 0)]);
    let mut frontier = vec![0usize];
    let mut budget = config.max_visited.saturating_mul(NEIGHBOUR_STEPS);
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for chunk in frontier.chunks(FRONTIER_CHUNK) {
            let expanded = expand_chunk(config, chunk, &mut budget, |i| {
                start.with_mapping(nodes[i].clone())
            })?;
            for (&i, neighbours) in chunk.iter().zip(expanded) {
                for (g, step) in neighbours {
                    if seen.contains_key(&g) {
                        continue;
                    }
                    let idx = nodes.len();
                    if idx >= config.max_visited {
                        return Err(Error::budget(
                            "functors visited",
                            idx + 1,
                            config.max_visited,
                        ));
                    }
                    seen.insert(g.clone(), idx);
                    let hit = is_target(&g);
                    nodes.push(g);
                    parent.push(Some((i, step)));
                    if hit {
                        return Ok(Some(rebuild(start, &nodes, &parent, idx)));
                    }
                    next.push(idx);
                }
            }
        }
        frontier = next;
    }
    Ok(None)
}

fn rebuild(
    start: &FinFunctor,
    nodes: &[Mapping],
    parent: &[Option<(usize, ZigzagStep)>],
    mut idx: usize,
) -> ZigzagWitness {
    let mut functors = vec![start.with_mapping(nodes[idx].clone())];
    let mut steps = Vec::new();
    while let Some((p, step)) = &parent[idx] {
        steps.push(step.clone());
        functors.push(start.with_mapping(nodes[*p].clone()));
        idx = *p;
    }
    // collected end → start; steps recorded as p → idx
    functors.reverse();
    steps.reverse();
    ZigzagWitness { functors, steps }
}

struct Side {
    nodes: Vec<Mapping>,
    parent: Vec<Option<(usize, ZigzagStep)>>,
    depth: Vec<usize>,
    seen: HashMap<Mapping, usize>,
    frontier: Vec<usize>,
}

impl Side {
    fn new(m: &Mapping) -> Side {
        Side {
            nodes: vec![m.clone()],
            parent: vec![None],
            depth: vec![0],
            seen: HashMap::from([(m.clone(), 0)]),
            frontier: vec![0],
        }
    }

    /// Functors and steps from the root to `idx`.
    fn path(&self, start: &FinFunctor, mut idx: usize) -> (Vec<FinFunctor>, Vec<ZigzagStep>) {
        let mut functors = vec![start.with_mapping(self.nodes[idx].clone())];
        let mut steps = Vec::new();
        while let Some((p, step)) = &self.parent[idx] {
            steps.push(step.clone());
            functors.push(start.with_mapping(self.nodes[*p].clone()));
            idx = *p;
        }
        functors.reverse();
        steps.reverse();
        (functors, steps)
    }
}

/// Decide `F ≃ G`; on success returns a shortest zigzag from `F` to `G`.
///
/// Breadth-first from both ends, always completing a layer on the side with
/// the smaller frontier.
pub fn homotopic(f: &FinFunctor, g: &FinFunctor, config: &Config) -> Result<Option<ZigzagWitness>> {
    ensure_parallel(f, g)?;
    if f.mapping() == g.mapping() {
        return Ok(Some(ZigzagWitness::trivial(f)));
    }
    let mut sides = [Side::new(f.mapping()), Side::new(g.mapping())];
    let mut budget = config.max_visited.saturating_mul(NEIGHBOUR_STEPS);
    loop {
        if sides[0].frontier.is_empty() || sides[1].frontier.is_empty() {
            return Ok(None);
        }
        let s = usize::from(sides[1].frontier.len() < sides[0].frontier.len());
        let o = 1 - s;
        let frontier = std::mem::take(&mut sides[s].frontier);
        let mut next = Vec::new();
        let mut best: Option<(usize, usize, usize)> = None;
        for chunk in frontier.chunks(FRONTIER_CHUNK) {
            let side = &sides[s];
            let expanded = expand_chunk(config, chunk, &mut budget, |i| {
                f.with_mapping(side.nodes[i].clone())
            })?;
            for (&i, neighbours) in chunk.iter().zip(expanded) {
                for (m, step) in neighbours {
                    if sides[s].seen.contains_key(&m) {
                        continue;
                    }
                    let idx = sides[s].nodes.len();
                    if idx + sides[o].nodes.len() >= config.max_visited {
                        return Err(Error::budget(
                            "functors visited",
                            idx + sides[o].nodes.len() + 1,
                            config.max_visited,
                        ));
                    }
                    let d = sides[s].depth[i] + 1;
                    if let Some(&j) = sides[o].seen.get(&m) {
                        let total = d + sides[o].depth[j];
                        if best.is_none_or(|b| total < b.0) {
                            best = Some((total, idx, j));
                        }
                    }
                    let side = &mut sides[s];
                    side.seen.insert(m.clone(), idx);
                    side.nodes.push(m);
                    side.parent.push(Some((i, step)));
                    side.depth.push(d);
                    next.push(idx);
                }
            }
        }
        sides[s].frontier = next;
        if let Some((_, a, b)) = best {
            let (from_f, to_g) = if s == 0 { (a, b) } else { (b, a) };
            let (mut functors, mut steps) = sides[0].path(f, from_f);
            let (back, back_steps) = sides[1].path(f, to_g);
            functors.extend(back.into_iter().rev().skip(1));
            steps.extend(back_steps.into_iter().rev().map(|st| ZigzagStep {
                direction: st.direction.flip(),
                components: st.components,
            }));
            return Ok(Some(ZigzagWitness { functors, steps }));
        }
    }
}

/// Homotopy of several functors to the first one; all pairwise homotopies
/// follow by reversal and concatenation.
pub fn homotopic_to_all(fs: &[FinFunctor], config: &Config) -> Result<Option<Vec<ZigzagWitness>>> {
    let mut out = Vec::new();
    for g in &fs[1..] {
        match homotopic(&fs[0], g, config)? {
            Some(w) => out.push(w),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

pub(crate) fn constant_value_of(map: &Mapping, cod: &FinCategory) -> Option<Option<ObjId>> {
    let first = match map.objects.first() {
        None => return Some(None),
        Some(&b) => b,
    };
    let id = cod.identity(first);
    (map.objects.iter().all(|&o| o == first) && map.arrows.iter().all(|&a| a == id))
        .then_some(Some(first))
}

/// A contraction `id_C ≃ const_b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contraction {
    /// `None` only for the empty category.
    pub object: Option<ObjId>,
    pub witness: ZigzagWitness,
}

/// Search for a homotopy from `f` to some constant functor.
pub fn homotopic_to_constant(f: &FinFunctor, config: &Config) -> Result<Option<Contraction>> {
    let cod = f.cod().clone();
    let w = search_component(f, |m| constant_value_of(m, &cod).is_some(), config)?;
    Ok(w.map(|witness| Contraction {
        object: constant_value_of(witness.end().mapping(), &cod).flatten(),
        witness,
    }))
}

/// Is `id_C` homotopic to a constant functor? Returns the constant reached
/// first by the breadth-first search and the witness.
pub fn is_contractible(c: &Arc<FinCategory>, config: &Config) -> Result<Option<Contraction>> {
    homotopic_to_constant(&FinFunctor::identity(c), config)
}

/// Homotopy classes by full enumeration and union–find over every pair
/// joined by a transformation. Independent of the breadth-first search and
/// used to cross-check it. Returns all functors and a class label per functor
/// (the index of the class's first member).
pub fn homotopy_classes(
    dom: &Arc<FinCategory>,
    cod: &Arc<FinCategory>,
    config: &Config,
) -> Result<(Vec<FinFunctor>, Vec<usize>)> {
    let all = enumerate_functors(dom, cod, config)?;
    let n = all.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let rows = par::map(config, &(0..n).collect::<Vec<_>>(), |&i| {
        (i + 1..n)
            .filter(|&j| {
                nat_trans_components(&all[i], &all[j]).is_some()
                    || nat_trans_components(&all[j], &all[i]).is_some()
            })
            .collect::<Vec<_>>()
    });
    for (i, row) in rows.into_iter().enumerate() {
        for j in row {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                let (lo, hi) = (a.min(b), a.max(b));
                parent[hi] = lo;
            }
        }
    }
    let labels = (0..n).map(|i| find(&mut parent, i)).collect();
    Ok((all, labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat(kind: StandardKind) -> Arc<FinCategory> {
        Arc::new(standard_category(&kind).unwrap())
    }

    #[test]
    fn identity_transformation() {
        let c = cat(StandardKind::DirectedChain(2));
        let id = FinFunctor::identity(&c);
        let t = nat_trans_search(&id, &id).unwrap().unwrap();
        assert_eq!(t.components, c.identities().to_vec());
    }

    #[test]
    fn cone_to_terminal_of_interval() {
        let i1 = cat(StandardKind::ZigzagInterval(1));
        let id = FinFunctor::identity(&i1);
        let k1 = FinFunctor::constant(&i1, &i1, 1).unwrap();
        let t = nat_trans_search(&id, &k1).unwrap().unwrap();
        assert_eq!(
            t.components,
            vec![i1.arrow_id("s0").unwrap(), i1.identity(1)]
        );
        assert!(nat_trans_search(&k1, &id).unwrap().is_none());
    }

    #[test]
    fn no_transformation_from_identity_to_trivial_on_z2() {
        let z2 = cat(StandardKind::CyclicGroup(2));
        let id = FinFunctor::identity(&z2);
        let triv = FinFunctor::constant(&z2, &z2, 0).unwrap();
        assert!(nat_trans_search(&id, &triv).unwrap().is_none());
        assert!(nat_trans_search(&triv, &id).unwrap().is_none());
        assert!(homotopic(&id, &triv, &Config::default()).unwrap().is_none());
    }

    #[test]
    fn functor_counts() {
        let cfg = Config::default();
        let pt = cat(StandardKind::Point);
        let i1 = cat(StandardKind::ZigzagInterval(1));
        let z2 = cat(StandardKind::CyclicGroup(2));
        assert_eq!(enumerate_functors(&pt, &i1, &cfg).unwrap().len(), 2);
        assert_eq!(enumerate_functors(&i1, &i1, &cfg).unwrap().len(), 3);
        assert_eq!(enumerate_functors(&z2, &z2, &cfg).unwrap().len(), 2);
    }

    #[test]
    fn enumeration_is_canonically_ordered() {
        let cfg = Config::default();
        let c = cat(StandardKind::DirectedChain(2));
        let all = enumerate_functors(&c, &c, &cfg).unwrap();
        assert!(all.windows(2).all(|w| w[0].mapping() < w[1].mapping()));
    }

    #[test]
    fn enumeration_budget() {
        let cfg = Config {
            max_object_maps: 8,
            ..Config::default()
        };
        let c = cat(StandardKind::DirectedChain(2));
        let err = enumerate_functors(&c, &c, &cfg).unwrap_err();
        assert!(matches!(err, Error::SizeBudgetExceeded { .. }));
    }

    #[test]
    fn zigzag_interval_two_contracts_in_one_step() {
        let cfg = Config::default();
        let i2 = cat(StandardKind::ZigzagInterval(2));
        let id = FinFunctor::identity(&i2);
        let k1 = FinFunctor::constant(&i2, &i2, 1).unwrap();
        let w = homotopic(&id, &k1, &cfg).unwrap().unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w.steps[0].direction, Direction::Forward);
        let names: Vec<&str> = w.steps[0]
            .components
            .iter()
            .map(|&a| i2.arrow_name(a))
            .collect();
        assert_eq!(names, ["s0", "id:1", "s1"]);
        w.check().unwrap();
    }

    #[test]
    fn corrupted_witness_is_rejected() {
        let cfg = Config::default();
        let i1 = cat(StandardKind::ZigzagInterval(1));
        let id = FinFunctor::identity(&i1);
        let k1 = FinFunctor::constant(&i1, &i1, 1).unwrap();
        let mut w = homotopic(&id, &k1, &cfg).unwrap().unwrap();
        w.check().unwrap();
        w.steps[0].components[0] = i1.identity(0);
        let err = w.check().unwrap_err();
        assert!(err.to_string().contains("step 0"), "{err}");
    }

    #[test]
    fn hand_written_witness() {
        let i1 = cat(StandardKind::ZigzagInterval(1));
        let w = ZigzagWitness {
            functors: vec![
                FinFunctor::identity(&i1),
                FinFunctor::constant(&i1, &i1, 1).unwrap(),
            ],
            steps: vec![ZigzagStep {
                direction: Direction::Forward,
                components: vec![i1.arrow_id("s0").unwrap(), i1.identity(1)],
            }],
        };
        w.check().unwrap();
        w.reversed().check().unwrap();
    }

    #[test]
    fn contractibility() {
        let cfg = Config::default();
        for m in 0..=4 {
            let c = cat(StandardKind::ZigzagInterval(m));
            let con = is_contractible(&c, &cfg)
                .unwrap()
                .expect("interval is contractible");
            con.witness.check().unwrap();
        }
        let z2 = cat(StandardKind::CyclicGroup(2));
        assert!(is_contractible(&z2, &cfg).unwrap().is_none());
        let empty = cat(StandardKind::Discrete(0));
        let con = is_contractible(&empty, &cfg).unwrap().unwrap();
        assert_eq!(con.object, None);
    }

    #[test]
    fn lattice_with_products_is_contractible() {
        // the Boolean lattice on two atoms: 0 < a, b < 1
        let cfg = Config::default();
        let l = cat(StandardKind::Poset {
            n: 4,
            relation: vec![(0, 1), (0, 2), (1, 3), (2, 3)],
        });
        assert!(is_contractible(&l, &cfg).unwrap().is_some());
    }

    #[test]
    fn interval_functor_form() {
        let cfg = Config::default();
        let i2 = cat(StandardKind::ZigzagInterval(2));
        let id = FinFunctor::identity(&i2);
        let k0 = FinFunctor::constant(&i2, &i2, 0).unwrap();
        let w = homotopic(&id, &k0, &cfg).unwrap().unwrap();
        let (h, m) = w.to_interval_functor(&cfg).unwrap();
        let ends = |i: usize| -> Vec<ObjId> {
            (0..i2.num_objects())
                .map(|x| {
                    let o = h
                        .dom()
                        .object_id(&format!("({},{})", i2.object_name(x), i))
                        .unwrap();
                    h.obj(o)
                })
                .collect()
        };
        assert_eq!(ends(0), id.mapping().objects);
        assert_eq!(ends(m), k0.mapping().objects);
    }

    #[test]
    fn union_find_oracle_agrees_with_search() {
        let cfg = Config::default();
        let c = cat(StandardKind::ZigzagInterval(2));
        let z2 = cat(StandardKind::CyclicGroup(2));
        for (dom, cod) in [(&c, &c), (&z2, &z2), (&c, &z2), (&z2, &c)] {
            let (all, labels) = homotopy_classes(dom, cod, &cfg).unwrap();
            for i in 0..all.len() {
                for j in 0..all.len() {
                    let found = homotopic(&all[i], &all[j], &cfg).unwrap();
                    assert_eq!(found.is_some(), labels[i] == labels[j]);
                    if let Some(w) = found {
                        w.check().unwrap();
                        assert!(w.connects(&all[i], &all[j]));
                    }
                }
            }
        }
    }
}
