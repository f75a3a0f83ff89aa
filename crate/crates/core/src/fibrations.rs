//! Cartesian arrows, Grothendieck (op-/bi-)fibrations, fibers, transport
//! functors and homotopy lifting.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use crate::category::{ArrowId, FinCategory, ObjId};
use crate::covers::Subcategory;
use crate::error::{Error, Result};
use crate::functor::{compose_functors, FinFunctor, Mapping, NatTrans};
use crate::homotopy::{Direction, ZigzagStep, ZigzagWitness};
use crate::{par, Config};

/// Is `phi: e₁ → e₂` cartesian for `p`? For every `β: e → e₂` and
/// `ᾱ: Pe → Pe₁` with `Pφ ∘ ᾱ = Pβ` there must be exactly one `α: e → e₁`
/// with `φ ∘ α = β` and `Pα = ᾱ`.
pub fn is_cartesian(p: &FinFunctor, phi: ArrowId) -> bool {
    let e = p.dom();
    let b = p.cod();
    let (e1, e2) = (e.src(phi), e.tgt(phi));
    for x in 0..e.num_objects() {
        for &beta in e.hom(x, e2) {
            for &abar in b.hom(p.obj(x), p.obj(e1)) {
                if b.compose(p.arr(phi), abar) != Some(p.arr(beta)) {
                    continue;
                }
                let fillers = e
                    .hom(x, e1)
                    .iter()
                    .filter(|&&alpha| e.compose(phi, alpha) == Some(beta) && p.arr(alpha) == abar)
                    .count();
                if fillers != 1 {
                    return false;
                }
            }
        }
    }
    true
}

/// Cartesianness through hom-sets: for every `e` the map
/// `E(e, e₁) → E(e, e₂) ×_{B(Pe, Pe₂)} B(Pe, Pe₁)`, `α ↦ (φ∘α, Pα)`, must be a
/// bijection of finite sets.
pub fn is_cartesian_pullback(p: &FinFunctor, phi: ArrowId) -> bool {
    let e = p.dom();
    let b = p.cod();
    let (e1, e2) = (e.src(phi), e.tgt(phi));
    for x in 0..e.num_objects() {
        let image: Vec<(ArrowId, ArrowId)> = e
            .hom(x, e1)
            .iter()
            .map(|&alpha| (e.compose(phi, alpha).expect("composable"), p.arr(alpha)))
            .collect();
        let distinct: HashSet<&(ArrowId, ArrowId)> = image.iter().collect();
        if distinct.len() != image.len() {
            return false;
        }
        let mut target = 0usize;
        for &beta in e.hom(x, e2) {
            for &abar in b.hom(p.obj(x), p.obj(e1)) {
                if b.compose(p.arr(phi), abar) == Some(p.arr(beta)) {
                    target += 1;
                }
            }
        }
        if target != image.len() {
            return false;
        }
    }
    true
}

/// Dual of [`is_cartesian`]: for every `β: e₁ → e` and `ᾱ: Pe₂ → Pe` with
/// `ᾱ ∘ Pφ = Pβ` there is exactly one `α: e₂ → e` with `α ∘ φ = β` and
/// `Pα = ᾱ`.
pub fn is_op_cartesian(p: &FinFunctor, phi: ArrowId) -> bool {
    let e = p.dom();
    let b = p.cod();
    let (e1, e2) = (e.src(phi), e.tgt(phi));
    for x in 0..e.num_objects() {
        for &beta in e.hom(e1, x) {
            for &abar in b.hom(p.obj(e2), p.obj(x)) {
                if b.compose(abar, p.arr(phi)) != Some(p.arr(beta)) {
                    continue;
                }
                let fillers = e
                    .hom(e2, x)
                    .iter()
                    .filter(|&&alpha| e.compose(alpha, phi) == Some(beta) && p.arr(alpha) == abar)
                    .count();
                if fillers != 1 {
                    return false;
                }
            }
        }
    }
    true
}

/// `P^op: E^op → B^op`; arrows keep their indices.
pub fn opposite_functor(p: &FinFunctor) -> FinFunctor {
    FinFunctor::new_unchecked(
        Arc::new(p.dom().opposite()),
        Arc::new(p.cod().opposite()),
        p.mapping().clone(),
    )
}

/// A base arrow and total-category object at which a lift is missing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MissingLift {
    pub base_arrow: ArrowId,
    pub object: ObjId,
}

/// Chosen cartesian and op-cartesian lifts of a functor `P: E → B`.
#[derive(Debug, Clone)]
pub struct FibrationStructure {
    p: FinFunctor,
    cartesian: Vec<bool>,
    op_cartesian: Vec<bool>,
    cart: BTreeMap<(ArrowId, ObjId), ArrowId>,
    opcart: BTreeMap<(ArrowId, ObjId), ArrowId>,
}

/// Outcome of [`classify_fibration`].
#[derive(Debug, Clone)]
pub struct FibrationReport {
    pub is_fibration: bool,
    pub is_op_fibration: bool,
    /// `(φ̄, e₂)` with no cartesian lift of `φ̄` ending at `e₂`.
    pub missing_cartesian: Vec<MissingLift>,
    /// `(φ̄, e₁)` with no op-cartesian lift of `φ̄` starting at `e₁`.
    pub missing_op_cartesian: Vec<MissingLift>,
    pub structure: FibrationStructure,
}

impl FibrationReport {
    pub fn is_bifibration(&self) -> bool {
        self.is_fibration && self.is_op_fibration
    }
}

/// Decide the fibration properties of `p` by exhaustive lift search and
/// record chosen lifts: identities over identities, otherwise the first valid
/// lift in canonical arrow order.
pub fn classify_fibration(p: &FinFunctor, config: &Config) -> FibrationReport {
    let e = p.dom();
    let b = p.cod();
    let arrows: Vec<ArrowId> = (0..e.num_arrows()).collect();
    let cartesian = par::map(config, &arrows, |&a| is_cartesian(p, a));
    let op_cartesian = par::map(config, &arrows, |&a| is_op_cartesian(p, a));
    let mut cart = BTreeMap::new();
    let mut opcart = BTreeMap::new();
    let mut missing_cartesian = Vec::new();
    let mut missing_op_cartesian = Vec::new();
    for u in 0..b.num_arrows() {
        for x in 0..e.num_objects() {
            if p.obj(x) == b.tgt(u) {
                let lift = if b.is_identity(u) {
                    Some(e.identity(x))
                } else {
                    (0..e.num_arrows()).find(|&a| e.tgt(a) == x && p.arr(a) == u && cartesian[a])
                };
                match lift {
                    Some(a) => {
                        cart.insert((u, x), a);
                    }
                    None => missing_cartesian.push(MissingLift {
                        base_arrow: u,
                        object: x,
                    }),
                }
            }
            if p.obj(x) == b.src(u) {
                let lift = if b.is_identity(u) {
                    Some(e.identity(x))
                } else {
                    (0..e.num_arrows()).find(|&a| e.src(a) == x && p.arr(a) == u && op_cartesian[a])
                };
                match lift {
                    Some(a) => {
                        opcart.insert((u, x), a);
                    }
                    None => missing_op_cartesian.push(MissingLift {
                        base_arrow: u,
                        object: x,
                    }),
                }
            }
        }
    }
    FibrationReport {
        is_fibration: missing_cartesian.is_empty(),
        is_op_fibration: missing_op_cartesian.is_empty(),
        missing_cartesian,
        missing_op_cartesian,
        structure: FibrationStructure {
            p: p.clone(),
            cartesian,
            op_cartesian,
            cart,
            opcart,
        },
    }
}

/// A fiber `E_b` as a standalone category with its inclusion into `E`.
#[derive(Debug, Clone)]
pub struct Fiber {
    pub base_object: ObjId,
    pub category: Arc<FinCategory>,
    pub inclusion: FinFunctor,
}

impl Fiber {
    /// Position in the fiber of a total-category object.
    pub fn local(&self, x: ObjId) -> Option<ObjId> {
        self.inclusion
            .mapping()
            .objects
            .iter()
            .position(|&o| o == x)
    }

    fn local_arrow(&self, a: ArrowId) -> Option<ArrowId> {
        self.inclusion.mapping().arrows.iter().position(|&f| f == a)
    }
}

/// Objects over `b` and arrows over `id_b`.
pub fn fiber(p: &FinFunctor, b: ObjId) -> Result<Fiber> {
    let base = p.cod();
    if b >= base.num_objects() {
        return Err(Error::UnknownObject(format!("base object index {b}")));
    }
    let e = p.dom();
    let objects: Vec<ObjId> = (0..e.num_objects()).filter(|&x| p.obj(x) == b).collect();
    let arrows: Vec<ArrowId> = (0..e.num_arrows())
        .filter(|&a| p.arr(a) == base.identity(b))
        .collect();
    let sub = Subcategory::new(e, &objects, &arrows)?;
    let (cat, inclusion) = sub.to_category();
    let name = format!("{}_{}", e.name(), base.object_name(b));
    let cat = Arc::new(cat.as_ref().clone().with_name(name));
    let inclusion = FinFunctor::new_unchecked(cat.clone(), e.clone(), inclusion.into_mapping());
    Ok(Fiber {
        base_object: b,
        category: cat,
        inclusion,
    })
}

impl FibrationStructure {
    pub fn functor(&self) -> &FinFunctor {
        &self.p
    }

    pub fn is_cartesian(&self, a: ArrowId) -> bool {
        self.cartesian[a]
    }

    pub fn is_op_cartesian(&self, a: ArrowId) -> bool {
        self.op_cartesian[a]
    }

    /// Chosen `Cart(u, e₂): u*e₂ → e₂`.
    pub fn cartesian_lift(&self, u: ArrowId, e2: ObjId) -> Result<ArrowId> {
        self.cart
            .get(&(u, e2))
            .copied()
            .ok_or_else(|| Error::NoLift {
                kind: "cartesian",
                base_arrow: self.p.cod().arrow_name(u).to_string(),
                object: self.p.dom().object_name(e2).to_string(),
            })
    }

    /// Chosen `opCart(u, e₁): e₁ → u_*e₁`.
    pub fn op_cartesian_lift(&self, u: ArrowId, e1: ObjId) -> Result<ArrowId> {
        self.opcart
            .get(&(u, e1))
            .copied()
            .ok_or_else(|| Error::NoLift {
                kind: "op-cartesian",
                base_arrow: self.p.cod().arrow_name(u).to_string(),
                object: self.p.dom().object_name(e1).to_string(),
            })
    }

    /// Chosen cartesian lifts keyed by `(u, e₂)`.
    pub fn cartesian_lifts(&self) -> &BTreeMap<(ArrowId, ObjId), ArrowId> {
        &self.cart
    }

    /// Chosen op-cartesian lifts keyed by `(u, e₁)`.
    pub fn op_cartesian_lifts(&self) -> &BTreeMap<(ArrowId, ObjId), ArrowId> {
        &self.opcart
    }

    /// Every valid cartesian lift of `u` ending at `e₂`, in canonical order.
    pub fn all_cartesian_lifts(&self, u: ArrowId, e2: ObjId) -> Vec<ArrowId> {
        let e = self.p.dom();
        (0..e.num_arrows())
            .filter(|&a| e.tgt(a) == e2 && self.p.arr(a) == u && self.cartesian[a])
            .collect()
    }

    /// The unique `α: x → y` with `Pα = abar` and `lhs ∘ α = rhs`
    /// (`post = true`) or `α ∘ lhs = rhs` (`post = false`).
    fn unique_filler(
        &self,
        x: ObjId,
        y: ObjId,
        abar: ArrowId,
        lhs: ArrowId,
        rhs: ArrowId,
        post: bool,
    ) -> Result<ArrowId> {
        let e = self.p.dom();
        let found: Vec<ArrowId> = e
            .hom(x, y)
            .iter()
            .copied()
            .filter(|&a| {
                self.p.arr(a) == abar
                    && if post {
                        e.compose(lhs, a) == Some(rhs)
                    } else {
                        e.compose(a, lhs) == Some(rhs)
                    }
            })
            .collect();
        match found.as_slice() {
            [a] => Ok(*a),
            [] => Err(Error::NoFiller(format!(
                "no arrow {} → {} over {}",
                e.object_name(x),
                e.object_name(y),
                self.p.cod().arrow_name(abar)
            ))),
            _ => Err(Error::NonUniqueFiller(format!(
                "{} arrows {} → {} over {}",
                found.len(),
                e.object_name(x),
                e.object_name(y),
                self.p.cod().arrow_name(abar)
            ))),
        }
    }

    fn base_arrow(&self, u: ArrowId) -> Result<(ObjId, ObjId)> {
        let b = self.p.cod();
        if u >= b.num_arrows() {
            return Err(Error::UnknownArrow(format!("base arrow index {u}")));
        }
        Ok((b.src(u), b.tgt(u)))
    }

    /// `u*: E_{b₂} → E_{b₁}` for `u: b₁ → b₂`.
    pub fn pullback_functor(&self, u: ArrowId) -> Result<FinFunctor> {
        let (b1, b2) = self.base_arrow(u)?;
        let f1 = fiber(&self.p, b1)?;
        let f2 = fiber(&self.p, b2)?;
        let e = self.p.dom();
        let id_b1 = self.p.cod().identity(b1);
        let inc2 = f2.inclusion.mapping();
        let mut objects = Vec::new();
        for &x in &inc2.objects {
            let c = self.cartesian_lift(u, x)?;
            objects.push(
                f1.local(e.src(c))
                    .ok_or_else(|| Error::Internal("lift leaves the fiber".into()))?,
            );
        }
        let mut arrows = Vec::new();
        for &v in &inc2.arrows {
            let (x, y) = (e.src(v), e.tgt(v));
            let (cx, cy) = (self.cartesian_lift(u, x)?, self.cartesian_lift(u, y)?);
            let rhs = e.compose(v, cx).expect("composable");
            let a = self.unique_filler(e.src(cx), e.src(cy), id_b1, cy, rhs, true)?;
            arrows.push(
                f1.local_arrow(a)
                    .ok_or_else(|| Error::Internal("filler is not vertical".into()))?,
            );
        }
        FinFunctor::new(
            f2.category.clone(),
            f1.category.clone(),
            Mapping { objects, arrows },
        )
    }

    /// `u_*: E_{b₁} → E_{b₂}` for `u: b₁ → b₂`.
    pub fn pushforward_functor(&self, u: ArrowId) -> Result<FinFunctor> {
        let (b1, b2) = self.base_arrow(u)?;
        let f1 = fiber(&self.p, b1)?;
        let f2 = fiber(&self.p, b2)?;
        let e = self.p.dom();
        let id_b2 = self.p.cod().identity(b2);
        let inc1 = f1.inclusion.mapping();
        let mut objects = Vec::new();
        for &x in &inc1.objects {
            let c = self.op_cartesian_lift(u, x)?;
            objects.push(
                f2.local(e.tgt(c))
                    .ok_or_else(|| Error::Internal("lift leaves the fiber".into()))?,
            );
        }
        let mut arrows = Vec::new();
        for &v in &inc1.arrows {
            let (x, y) = (e.src(v), e.tgt(v));
            let (cx, cy) = (self.op_cartesian_lift(u, x)?, self.op_cartesian_lift(u, y)?);
            let rhs = e.compose(cy, v).expect("composable");
            let a = self.unique_filler(e.tgt(cx), e.tgt(cy), id_b2, cx, rhs, false)?;
            arrows.push(
                f2.local_arrow(a)
                    .ok_or_else(|| Error::Internal("filler is not vertical".into()))?,
            );
        }
        FinFunctor::new(
            f1.category.clone(),
            f2.category.clone(),
            Mapping { objects, arrows },
        )
    }

    /// The adjunction `u_* ⊣ u*` between the fibers over the ends of
    /// `u: b₁ → b₂`, with unit `id ⇒ u*u_*` and counit `u_*u* ⇒ id` built
    /// from unique vertical fillers.
    pub fn fiber_adjunction(&self, u: ArrowId) -> Result<FiberAdjunction> {
        let (b1, b2) = self.base_arrow(u)?;
        let push = self.pushforward_functor(u)?;
        let pull = self.pullback_functor(u)?;
        let f1 = fiber(&self.p, b1)?;
        let f2 = fiber(&self.p, b2)?;
        let e = self.p.dom();
        let base = self.p.cod();

        // unit at x: the vertical η with Cart(u, u_*x) ∘ η = opCart(u, x)
        let mut unit = Vec::new();
        for &x in &f1.inclusion.mapping().objects {
            let oc = self.op_cartesian_lift(u, x)?;
            let c = self.cartesian_lift(u, e.tgt(oc))?;
            let eta = self.unique_filler(x, e.src(c), base.identity(b1), c, oc, true)?;
            unit.push(
                f1.local_arrow(eta)
                    .ok_or_else(|| Error::Internal("unit is not vertical".into()))?,
            );
        }
        // counit at y: the vertical ε with ε ∘ opCart(u, u*y) = Cart(u, y)
        let mut counit = Vec::new();
        for &y in &f2.inclusion.mapping().objects {
            let c = self.cartesian_lift(u, y)?;
            let oc = self.op_cartesian_lift(u, e.src(c))?;
            let eps = self.unique_filler(e.tgt(oc), y, base.identity(b2), oc, c, false)?;
            counit.push(
                f2.local_arrow(eps)
                    .ok_or_else(|| Error::Internal("counit is not vertical".into()))?,
            );
        }
        let pull_push = compose_functors(&pull, &push)?;
        let push_pull = compose_functors(&push, &pull)?;
        let unit = NatTrans::new(FinFunctor::identity(&f1.category), pull_push, unit)?;
        let counit = NatTrans::new(push_pull, FinFunctor::identity(&f2.category), counit)?;
        Ok(FiberAdjunction {
            push,
            pull,
            unit,
            counit,
        })
    }

    /// The adjunction of [`fiber_adjunction`](Self::fiber_adjunction) when its
    /// unit and counit are natural isomorphisms; otherwise
    /// [`Error::NotInvertible`] names the first failing component.
    pub fn fiber_equivalence(&self, u: ArrowId) -> Result<FiberAdjunction> {
        let adj = self.fiber_adjunction(u)?;
        for t in [&adj.unit, &adj.counit] {
            let c = t.from.dom();
            let d = t.to.cod();
            for (o, &a) in t.components.iter().enumerate() {
                if d.inverse(a).is_none() {
                    return Err(Error::NotInvertible {
                        object: c.object_name(o).to_string(),
                        arrow: d.arrow_name(a).to_string(),
                    });
                }
            }
        }
        Ok(adj)
    }
}

/// Transport functors between two fibers with unit and counit.
#[derive(Debug, Clone)]
pub struct FiberAdjunction {
    /// `u_*: E_{b₁} → E_{b₂}`
    pub push: FinFunctor,
    /// `u*: E_{b₂} → E_{b₁}`
    pub pull: FinFunctor,
    /// `id ⇒ u* ∘ u_*`
    pub unit: NatTrans,
    /// `u_* ∘ u* ⇒ id`
    pub counit: NatTrans,
}

impl FiberAdjunction {
    pub fn is_equivalence(&self) -> bool {
        self.unit.is_isomorphism() && self.counit.is_isomorphism()
    }

    /// The natural isomorphisms `id ≅ u*u_*` and `id ≅ u_*u*` as explicit
    /// inverse pairs, re-checked for naturality.
    pub fn inverse_transformations(&self) -> Result<(NatTrans, NatTrans)> {
        let inv = |t: &NatTrans| -> Result<NatTrans> {
            let d = t.to.cod();
            let comps = t
                .components
                .iter()
                .enumerate()
                .map(|(o, &a)| {
                    d.inverse(a).ok_or_else(|| Error::NotInvertible {
                        object: t.from.dom().object_name(o).to_string(),
                        arrow: d.arrow_name(a).to_string(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            NatTrans::new(t.to.clone(), t.from.clone(), comps)
        };
        Ok((inv(&self.unit)?, inv(&self.counit)?))
    }
}

/// Are `c` and `d` isomorphic as categories? Decided by searching for a
/// functor that is bijective on objects and arrows.
pub fn are_isomorphic(c: &Arc<FinCategory>, d: &Arc<FinCategory>, config: &Config) -> Result<bool> {
    if c.num_objects() != d.num_objects() || c.num_arrows() != d.num_arrows() {
        return Ok(false);
    }
    let all = crate::homotopy::enumerate_functors(c, d, config)?;
    Ok(all.iter().any(|f| {
        let mut objs = f.mapping().objects.clone();
        let mut arrs = f.mapping().arrows.clone();
        objs.sort_unstable();
        objs.dedup();
        arrs.sort_unstable();
        arrs.dedup();
        objs.len() == d.num_objects() && arrs.len() == d.num_arrows()
    }))
}

/// Which end of a one-step base homotopy the given lift sits over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Start,
    End,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftKind {
    Cartesian,
    OpCartesian,
}

/// A lifted homotopy with the kind of lift used at each step and per-component
/// cartesianness flags.
#[derive(Debug, Clone)]
pub struct LiftedHomotopy {
    pub witness: ZigzagWitness,
    pub kinds: Vec<LiftKind>,
    pub flags: Vec<Vec<bool>>,
}

/// Lift a one-step homotopy `H` of functors `A → B` along `P: E → B`, fixing
/// `G: A → E` over one end.
///
/// With `θ` the step's transformation: if `G` lies over the target of `θ`
/// the new end is built from chosen cartesian lifts (needs a fibration), if
/// over the source from op-cartesian lifts (needs an op-fibration). Arrow
/// images are unique fillers.
pub fn lift_homotopy(
    report: &FibrationReport,
    g: &FinFunctor,
    h: &ZigzagWitness,
    endpoint: Endpoint,
) -> Result<LiftedHomotopy> {
    let s = &report.structure;
    let p = &s.p;
    if h.len() != 1 {
        return Err(Error::BadParams(format!(
            "expected a one-step homotopy, got {} steps",
            h.len()
        )));
    }
    h.check()?;
    if g.cod().as_ref() != p.dom().as_ref()
        || h.start().cod().as_ref() != p.cod().as_ref()
        || g.dom().as_ref() != h.start().dom().as_ref()
    {
        return Err(Error::DomainMismatch(
            "lift data do not fit the fibration".into(),
        ));
    }
    let pg = compose_functors(p, g)?;
    let (over, other) = match endpoint {
        Endpoint::Start => (0, 1),
        Endpoint::End => (1, 0),
    };
    if pg.mapping() != h.functors[over].mapping() {
        return Err(Error::EndpointMismatch(format!(
            "P ∘ G is not the {} of the base homotopy",
            if over == 0 { "start" } else { "end" }
        )));
    }
    let step = &h.steps[0];
    // θ: from ⇒ to in the base
    let g_over_target = match step.direction {
        Direction::Forward => over == 1,
        Direction::Backward => over == 0,
    };
    let kind = if g_over_target {
        if !report.is_fibration {
            return Err(Error::NotAFibration("fibration"));
        }
        LiftKind::Cartesian
    } else {
        if !report.is_op_fibration {
            return Err(Error::NotAFibration("op-fibration"));
        }
        LiftKind::OpCartesian
    };
    let a = g.dom();
    let e = p.dom();
    let h_other = &h.functors[other];
    let mut objects = Vec::new();
    let mut comps = Vec::new();
    for c in 0..a.num_objects() {
        let theta = step.components[c];
        let lift = match kind {
            LiftKind::Cartesian => s.cartesian_lift(theta, g.obj(c))?,
            LiftKind::OpCartesian => s.op_cartesian_lift(theta, g.obj(c))?,
        };
        comps.push(lift);
        objects.push(match kind {
            LiftKind::Cartesian => e.src(lift),
            LiftKind::OpCartesian => e.tgt(lift),
        });
    }
    let mut arrows = Vec::new();
    for f in 0..a.num_arrows() {
        let (c, c2) = (a.src(f), a.tgt(f));
        let abar = h_other.arr(f);
        let img = match kind {
            LiftKind::Cartesian => {
                let rhs = e.compose(g.arr(f), comps[c]).expect("composable");
                s.unique_filler(objects[c], objects[c2], abar, comps[c2], rhs, true)?
            }
            LiftKind::OpCartesian => {
                let rhs = e.compose(comps[c2], g.arr(f)).expect("composable");
                s.unique_filler(objects[c], objects[c2], abar, comps[c], rhs, false)?
            }
        };
        arrows.push(img);
    }
    let g2 = FinFunctor::new(a.clone(), e.clone(), Mapping { objects, arrows })?;
    let functors = match endpoint {
        Endpoint::End => vec![g2, g.clone()],
        Endpoint::Start => vec![g.clone(), g2],
    };
    let flags = comps
        .iter()
        .map(|&x| match kind {
            LiftKind::Cartesian => s.is_cartesian(x),
            LiftKind::OpCartesian => s.is_op_cartesian(x),
        })
        .collect();
    let witness = ZigzagWitness {
        functors,
        steps: vec![ZigzagStep {
            direction: step.direction,
            components: comps,
        }],
    };
    witness.check()?;
    Ok(LiftedHomotopy {
        witness,
        kinds: vec![kind],
        flags: vec![flags],
    })
}

/// Lift a homotopy of any length starting at `P ∘ G`, one step at a time.
pub fn lift_chain_homotopy(
    report: &FibrationReport,
    g: &FinFunctor,
    h: &ZigzagWitness,
) -> Result<LiftedHomotopy> {
    let mut current = g.clone();
    let mut out = LiftedHomotopy {
        witness: ZigzagWitness::trivial(g),
        kinds: Vec::new(),
        flags: Vec::new(),
    };
    let pg = compose_functors(&report.structure.p, g)?;
    if pg.mapping() != h.start().mapping() {
        return Err(Error::EndpointMismatch(
            "P ∘ G is not the start of the base homotopy".into(),
        ));
    }
    for i in 0..h.len() {
        let one = ZigzagWitness {
            functors: vec![h.functors[i].clone(), h.functors[i + 1].clone()],
            steps: vec![h.steps[i].clone()],
        };
        let lifted = lift_homotopy(report, &current, &one, Endpoint::Start)?;
        current = lifted.witness.end().clone();
        out.witness = out.witness.concat(&lifted.witness)?;
        out.kinds.extend(lifted.kinds);
        out.flags.extend(lifted.flags);
    }
    Ok(out)
}

/// Re-check a lift: `P ∘ H̃ = H` on every functor and component, the fixed
/// end equals `G`, and every flagged component passes the direct check.
pub fn check_lift(
    p: &FinFunctor,
    g: &FinFunctor,
    h: &ZigzagWitness,
    lifted: &LiftedHomotopy,
    fixed: usize,
) -> Result<()> {
    let w = &lifted.witness;
    w.check()?;
    if w.len() != h.len() {
        return Err(Error::Internal("lift has the wrong length".into()));
    }
    if w.functors[fixed] != *g {
        return Err(Error::EndpointMismatch("lift does not end at G".into()));
    }
    for (i, f) in w.functors.iter().enumerate() {
        if compose_functors(p, f)?.mapping() != h.functors[i].mapping() {
            return Err(Error::Internal(format!("P ∘ H̃_{i} differs from H_{i}")));
        }
    }
    for (i, step) in w.steps.iter().enumerate() {
        if step.direction != h.steps[i].direction {
            return Err(Error::Internal(format!("step {i} changed direction")));
        }
        for (c, &a) in step.components.iter().enumerate() {
            if p.arr(a) != h.steps[i].components[c] {
                return Err(Error::Internal(format!(
                    "component {c} of step {i} lies over the wrong arrow"
                )));
            }
            let ok = match lifted.kinds[i] {
                LiftKind::Cartesian => is_cartesian(p, a),
                LiftKind::OpCartesian => is_op_cartesian(p, a),
            };
            if !ok || !lifted.flags[i][c] {
                return Err(Error::Internal(format!(
                    "component {c} of step {i} is not a chosen lift"
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{product, standard_category, StandardKind};
    use crate::fixtures;

    fn cat(kind: StandardKind) -> Arc<FinCategory> {
        Arc::new(standard_category(&kind).unwrap())
    }

    #[test]
    fn identity_functor_arrows_are_cartesian() {
        for kind in [
            StandardKind::ZigzagInterval(2),
            StandardKind::CyclicGroup(3),
            StandardKind::DirectedChain(2),
        ] {
            let c = cat(kind);
            let id = FinFunctor::identity(&c);
            for a in 0..c.num_arrows() {
                assert!(is_cartesian(&id, a));
                assert!(is_cartesian_pullback(&id, a));
                assert!(is_op_cartesian(&id, a));
            }
        }
    }

    #[test]
    fn over_a_point_cartesian_means_invertible() {
        let pt = cat(StandardKind::Point);
        for kind in [
            StandardKind::ZigzagInterval(1),
            StandardKind::CyclicGroup(2),
        ] {
            let c = cat(kind);
            let p = FinFunctor::constant(&c, &pt, 0).unwrap();
            for a in 0..c.num_arrows() {
                let iso = c.inverse(a).is_some();
                assert_eq!(is_cartesian(&p, a), iso);
                assert_eq!(is_cartesian_pullback(&p, a), iso);
                assert_eq!(is_op_cartesian(&p, a), iso);
            }
        }
    }

    #[test]
    fn cyclic_reduction_is_a_bifibration() {
        let cfg = Config::default();
        let p = fixtures::z4_to_z2();
        let r = classify_fibration(&p, &cfg);
        assert!(r.is_bifibration());
        let f = fiber(&p, 0).unwrap();
        let names: Vec<&str> = (0..f.category.num_arrows())
            .map(|a| f.category.arrow_name(a))
            .collect();
        assert_eq!(names, ["id:*", "g^2"]);
        let z2 = cat(StandardKind::CyclicGroup(2));
        assert!(are_isomorphic(&f.category, &z2, &cfg).unwrap());
        let g = p.cod().arrow_id("g^1").unwrap();
        let lift = r.structure.cartesian_lift(g, 0).unwrap();
        assert_eq!(p.dom().arrow_name(lift), "g^1");
        assert_eq!(r.structure.all_cartesian_lifts(g, 0).len(), 2);
    }

    #[test]
    fn nosobre_is_a_fibration_only() {
        let cfg = Config::default();
        let p = fixtures::nosobre();
        let r = classify_fibration(&p, &cfg);
        assert!(r.is_fibration);
        assert!(!r.is_op_fibration);
        let miss = r.missing_op_cartesian[0];
        assert_eq!(p.cod().arrow_name(miss.base_arrow), "s");
        assert_eq!(p.dom().object_name(miss.object), "0");
        assert_eq!(fiber(&p, 1).unwrap().category.num_objects(), 0);
        let err = r
            .structure
            .op_cartesian_lift(miss.base_arrow, miss.object)
            .unwrap_err();
        assert!(matches!(err, Error::NoLift { .. }));
    }

    #[test]
    fn projection_is_a_bifibration_with_identity_transport() {
        let cfg = Config::default();
        let b = cat(StandardKind::ZigzagInterval(1));
        let c = cat(StandardKind::ZigzagInterval(2));
        let prod = product(&[b.clone(), c.clone()], &cfg).unwrap();
        let p = prod.projections[0].clone();
        let r = classify_fibration(&p, &cfg);
        assert!(r.is_bifibration());
        let s = b.arrow_id("s0").unwrap();
        let pull = r.structure.pullback_functor(s).unwrap();
        let names = |f: &FinFunctor| -> Vec<String> {
            (0..f.dom().num_objects())
                .map(|o| f.cod().object_name(f.obj(o)).to_string())
                .collect()
        };
        assert_eq!(names(&pull), ["(0,0)", "(0,1)", "(0,2)"]);
        let eq = r.structure.fiber_equivalence(s).unwrap();
        assert!(eq
            .unit
            .components
            .iter()
            .all(|&a| eq.unit.to.cod().is_identity(a)));
        assert!(eq
            .counit
            .components
            .iter()
            .all(|&a| eq.counit.to.cod().is_identity(a)));
    }

    #[test]
    fn identity_base_arrow_gives_identity_transport() {
        let cfg = Config::default();
        let p = fixtures::z4_to_z2();
        let r = classify_fibration(&p, &cfg);
        let id = p.cod().identity(0);
        let pull = r.structure.pullback_functor(id).unwrap();
        assert_eq!(pull.mapping(), FinFunctor::identity(pull.dom()).mapping());
        let eq = r.structure.fiber_equivalence(id).unwrap();
        assert!(eq.is_equivalence());
    }

    #[test]
    fn equivalent_non_isomorphic_fibers() {
        let cfg = Config::default();
        let p = fixtures::iso_fiber();
        let r = classify_fibration(&p, &cfg);
        assert!(r.is_bifibration());
        let f0 = fiber(&p, 0).unwrap();
        let f1 = fiber(&p, 1).unwrap();
        assert_eq!(
            (f0.category.num_objects(), f1.category.num_objects()),
            (1, 2)
        );
        assert!(!are_isomorphic(&f0.category, &f1.category, &cfg).unwrap());
        let s = p.cod().arrow_id("s").unwrap();
        let eq = r.structure.fiber_equivalence(s).unwrap();
        assert!(eq.is_equivalence());
        eq.inverse_transformations().unwrap();
    }

    #[test]
    fn adjoint_but_inequivalent_fibers() {
        let cfg = Config::default();
        let p = fixtures::adjoint_fibers();
        let r = classify_fibration(&p, &cfg);
        assert!(r.is_bifibration());
        let s = p.cod().arrow_id("s").unwrap();
        let adj = r.structure.fiber_adjunction(s).unwrap();
        assert!(!adj.is_equivalence());
        let err = r.structure.fiber_equivalence(s).unwrap_err();
        assert!(matches!(err, Error::NotInvertible { .. }));
    }

    #[test]
    fn lifting_a_generator_step() {
        let cfg = Config::default();
        let p = fixtures::z4_to_z2();
        let r = classify_fibration(&p, &cfg);
        let pt = cat(StandardKind::Point);
        let g = FinFunctor::constant(&pt, p.dom(), 0).unwrap();
        let base_const = FinFunctor::constant(&pt, p.cod(), 0).unwrap();
        let gen = p.cod().arrow_id("g^1").unwrap();
        let h = ZigzagWitness {
            functors: vec![base_const.clone(), base_const],
            steps: vec![ZigzagStep {
                direction: Direction::Forward,
                components: vec![gen],
            }],
        };
        let lifted = lift_homotopy(&r, &g, &h, Endpoint::End).unwrap();
        check_lift(&p, &g, &h, &lifted, 1).unwrap();
        assert_eq!(
            p.dom().arrow_name(lifted.witness.steps[0].components[0]),
            "g^1"
        );
        let lifted = lift_homotopy(&r, &g, &h, Endpoint::Start).unwrap();
        check_lift(&p, &g, &h, &lifted, 0).unwrap();
    }

    #[test]
    fn nosobre_rejects_op_lifting() {
        let cfg = Config::default();
        let p = fixtures::nosobre();
        let r = classify_fibration(&p, &cfg);
        let pt = cat(StandardKind::Point);
        let g = FinFunctor::constant(&pt, p.dom(), 0).unwrap();
        let s = p.cod().arrow_id("s").unwrap();
        let h = ZigzagWitness {
            functors: vec![
                FinFunctor::constant(&pt, p.cod(), 0).unwrap(),
                FinFunctor::constant(&pt, p.cod(), 1).unwrap(),
            ],
            steps: vec![ZigzagStep {
                direction: Direction::Forward,
                components: vec![s],
            }],
        };
        let err = lift_homotopy(&r, &g, &h, Endpoint::Start).unwrap_err();
        assert_eq!(err, Error::NotAFibration("op-fibration"));
    }

    #[test]
    fn constant_homotopy_lifts_to_constant() {
        let cfg = Config::default();
        let p = fixtures::iso_fiber();
        let r = classify_fibration(&p, &cfg);
        let g = FinFunctor::identity(p.dom());
        let pg = compose_functors(&p, &g).unwrap();
        let h = ZigzagWitness {
            functors: vec![pg.clone(), pg.clone()],
            steps: vec![ZigzagStep {
                direction: Direction::Forward,
                components: NatTrans::identity(&pg).components,
            }],
        };
        for end in [Endpoint::Start, Endpoint::End] {
            let lifted = lift_homotopy(&r, &g, &h, end).unwrap();
            assert!(lifted.witness.functors.iter().all(|f| *f == g));
        }
    }
}
