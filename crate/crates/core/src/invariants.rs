//! Homotopic distance, LS-category and categorical complexity with
//! certificates.
//!
//! Each invariant is the least `n` such that a geometric cover by `n + 1`
//! admissible subcategories exists. Admissibility is hereditary in every case,
//! so it suffices to search the maximal admissible subcategories and pick a
//! smallest covering subfamily. The value is infinite exactly when the whole
//! maximal family fails the chain condition.

use std::sync::Arc;

use crate::category::{ArrowId, FinCategory, ObjId};
use crate::construct::{power, Product};
use crate::covers::{
    find_uncovered_chain, glue_functors, glue_witnesses, maximal_subcategories_connected,
    maximal_subcategories_local, Chain, GeometricCover, Subcategory,
};
use crate::error::{Error, Result};
use crate::extnat::ExtNat;
use crate::functor::{compose_functors, ensure_parallel, FinFunctor};
use crate::homotopy::{
    homotopic, homotopic_to_constant, is_contractible, search_component, ZigzagStep, ZigzagWitness,
};
use crate::{par, Config};

/// Which invariant a result certifies, with the data it is computed from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Invariant {
    /// `cD(F₁, …, Fₖ)`.
    Distance(Vec<FinFunctor>),
    /// `ccat(C)`.
    Ccat(Arc<FinCategory>),
    /// `cTCₙ(C)`; `n = 2` is `cTC`.
    Ctc(Arc<FinCategory>, usize),
}

impl Invariant {
    pub fn label(&self) -> String {
        match self {
            Invariant::Distance(_) => "cD".into(),
            Invariant::Ccat(_) => "ccat".into(),
            Invariant::Ctc(_, 2) => "cTC".into(),
            Invariant::Ctc(_, n) => format!("cTC_{n}"),
        }
    }
}

/// Why one cover member is admissible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// `Fᵢ|U ≃ Fⱼ|U` for each listed pair `i < j`.
    Domain(Vec<(usize, usize, ZigzagWitness)>),
    /// `ι_U ≃ const_b`.
    Contraction {
        object: Option<ObjId>,
        witness: ZigzagWitness,
    },
    /// `Δ ∘ s ≃ ι_U` for the section `s: U → C`.
    Section {
        section: FinFunctor,
        witness: ZigzagWitness,
    },
}

/// An invariant value with its certificate.
#[derive(Debug, Clone)]
pub struct InvariantResult {
    pub invariant: Invariant,
    pub value: ExtNat,
    /// The category being covered (`C`, or `Cⁿ` for complexity).
    pub parent: Arc<FinCategory>,
    /// Every maximal admissible subcategory, canonically sorted.
    pub maximal: Vec<Subcategory>,
    /// A minimum cover when the value is finite.
    pub cover: Option<GeometricCover>,
    /// One certificate per cover member.
    pub certificates: Vec<Certificate>,
    /// When the value is infinite: a chain in no maximal member.
    pub uncovered: Option<Chain>,
}

/// Smallest subfamily of `family` (in the given order) that is a geometric
/// cover, tie-broken lexicographically on member indices. `None` when even
/// the whole family fails.
pub fn minimum_cover(
    parent: &FinCategory,
    family: &[Subcategory],
    config: &Config,
) -> Result<Option<Vec<usize>>> {
    if find_uncovered_chain(parent, family).is_some() {
        return Ok(None);
    }
    // members that alone contain some object or arrow belong to every cover
    let mut forced: Vec<usize> = Vec::new();
    for a in 0..parent.num_arrows() {
        let holders: Vec<usize> = (0..family.len())
            .filter(|&i| family[i].contains_arrow(a))
            .collect();
        if holders.len() == 1 && !forced.contains(&holders[0]) {
            forced.push(holders[0]);
        }
    }
    forced.sort_unstable();
    let rest: Vec<usize> = (0..family.len()).filter(|i| !forced.contains(i)).collect();
    let mut tested = 0usize;
    let lo = forced.len().max(1);
    let check = |pick: &Vec<usize>| {
        let mut idx: Vec<usize> = forced.iter().chain(pick.iter()).copied().collect();
        idx.sort_unstable();
        let members: Vec<Subcategory> = idx.iter().map(|&i| family[i].clone()).collect();
        find_uncovered_chain(parent, &members).is_none()
    };
    if family.is_empty() {
        return Ok(Some(Vec::new()));
    }
    for size in lo..=family.len() {
        let extra = size - forced.len();
        if extra > rest.len() {
            break;
        }
        let mut combos = Combinations::new(rest.len(), extra);
        loop {
            let batch: Vec<Vec<usize>> = combos
                .by_ref()
                .take(4096)
                .map(|c| c.into_iter().map(|i| rest[i]).collect())
                .collect();
            if batch.is_empty() {
                break;
            }
            tested += batch.len();
            if tested > config.max_cover_candidates {
                return Err(Error::budget(
                    "cover candidates",
                    tested,
                    config.max_cover_candidates,
                ));
            }
            if let Some(hit) = par::position_first(config, &batch, check) {
                let mut idx: Vec<usize> = forced.iter().chain(batch[hit].iter()).copied().collect();
                idx.sort_unstable();
                return Ok(Some(idx));
            }
        }
    }
    Err(Error::Internal(
        "full family covers but no subfamily was found".into(),
    ))
}

/// k-subsets of `0..n` in lexicographic order.
struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// Assemble a result from the maximal family and a certificate builder.
fn finish<C>(
    invariant: Invariant,
    parent: Arc<FinCategory>,
    maximal: Vec<Subcategory>,
    certify: C,
    config: &Config,
) -> Result<InvariantResult>
where
    C: Fn(&Subcategory) -> Result<Certificate> + Sync + Send,
{
    match minimum_cover(&parent, &maximal, config)? {
        None => {
            let uncovered = find_uncovered_chain(&parent, &maximal);
            Ok(InvariantResult {
                invariant,
                value: ExtNat::Infinity,
                parent,
                maximal,
                cover: None,
                certificates: Vec::new(),
                uncovered,
            })
        }
        Some(idx) => {
            let members: Vec<Subcategory> = idx.iter().map(|&i| maximal[i].clone()).collect();
            let certificates = par::try_map(config, &members, |u| certify(u))?;
            let value = ExtNat::Finite(members.len().saturating_sub(1) as u64);
            let cover = GeometricCover::new(&parent, members)?;
            Ok(InvariantResult {
                invariant,
                value,
                parent,
                maximal,
                cover: Some(cover),
                certificates,
                uncovered: None,
            })
        }
    }
}

fn restricted(fs: &[FinFunctor], u: &Subcategory) -> Result<Vec<FinFunctor>> {
    let (_, inc) = u.to_category();
    fs.iter().map(|f| compose_functors(f, &inc)).collect()
}

/// `cD(F₁, …, Fₖ)`: least `n` with a geometric cover by `n + 1`
/// subcategories on which all the `Fᵢ` are pairwise homotopic.
pub fn distance(functors: &[FinFunctor], config: &Config) -> Result<InvariantResult> {
    if functors.len() < 2 {
        return Err(Error::BadParams(
            "distance needs at least two functors".into(),
        ));
    }
    for f in &functors[1..] {
        ensure_parallel(&functors[0], f)?;
    }
    let parent = functors[0].dom().clone();
    let maximal = maximal_subcategories_local(
        &parent,
        |u| {
            let fs = restricted(functors, u)?;
            for g in &fs[1..] {
                if homotopic(&fs[0], g, config)?.is_none() {
                    return Ok(false);
                }
            }
            Ok(true)
        },
        config,
    )?;
    finish(
        Invariant::Distance(functors.to_vec()),
        parent,
        maximal,
        |u| {
            let pieces = u.components();
            let fs = restricted(functors, u)?;
            let mut to_first = Vec::new();
            for g in 1..fs.len() {
                let mut parts = Vec::new();
                for piece in &pieces {
                    let ps = restricted(functors, piece)?;
                    let w = homotopic(&ps[0], &ps[g], config)?
                        .ok_or_else(|| Error::Internal("member lost its homotopy".into()))?;
                    parts.push((piece.clone(), w));
                }
                to_first.push(glue_witnesses(u, &fs[0], &parts)?);
            }
            let mut pairs = Vec::new();
            for j in 1..fs.len() {
                pairs.push((0, j, to_first[j - 1].clone()));
            }
            for i in 1..fs.len() {
                for j in i + 1..fs.len() {
                    let w = to_first[i - 1].reversed().concat(&to_first[j - 1])?;
                    pairs.push((i, j, w));
                }
            }
            pairs.sort_by_key(|p| (p.0, p.1));
            Ok(Certificate::Domain(pairs))
        },
        config,
    )
}

/// `ccat(C)` from its definition: covers by subcategories whose inclusion is
/// homotopic to a constant functor (each member may use its own constant).
pub fn ccat_direct(c: &Arc<FinCategory>, config: &Config) -> Result<InvariantResult> {
    let contraction = |u: &Subcategory| {
        let (_, inc) = u.to_category();
        homotopic_to_constant(&inc, config)
    };
    let maximal = maximal_subcategories_connected(c, |u| Ok(contraction(u)?.is_some()), config)?;
    finish(
        Invariant::Ccat(c.clone()),
        c.clone(),
        maximal,
        |u| {
            let (_, inc) = u.to_category();
            let pieces = u.components();
            let Some(first) = pieces.first() else {
                return Ok(Certificate::Contraction {
                    object: None,
                    witness: ZigzagWitness::trivial(&inc),
                });
            };
            let b = contraction(first)?
                .and_then(|con| con.object)
                .ok_or_else(|| Error::Internal("member lost its contraction".into()))?;
            let mut parts = Vec::new();
            for piece in &pieces {
                let (pc, pinc) = piece.to_category();
                let w = homotopic(&pinc, &FinFunctor::constant(&pc, c, b)?, config)?
                    .ok_or_else(|| Error::Internal("member lost its contraction".into()))?;
                parts.push((piece.clone(), w));
            }
            let witness = glue_witnesses(u, &inc, &parts)?;
            Ok(Certificate::Contraction {
                object: Some(b),
                witness,
            })
        },
        config,
    )
}

/// Search the component of `ι_U` in `Fun(U, Cⁿ)` for a functor through the
/// diagonal; returns the section and `Δ ∘ s ≃ ι_U`.
fn diagonal_section(
    prod: &Product,
    u: &Subcategory,
    config: &Config,
) -> Result<Option<(FinFunctor, ZigzagWitness)>> {
    let (_, inc) = u.to_category();
    let w = search_component(
        &inc,
        |m| {
            m.objects.iter().all(|&o| prod.is_diagonal_object(o))
                && m.arrows.iter().all(|&a| prod.is_diagonal_arrow(a))
        },
        config,
    )?;
    match w {
        None => Ok(None),
        Some(w) => {
            let section = compose_functors(&prod.projections[0], w.end())?;
            Ok(Some((section, w.reversed())))
        }
    }
}

/// `cTCₙ(C)` from its definition: covers of `Cⁿ` by subcategories `U`
/// admitting `s: U → C` with `Δₙ ∘ s ≃ ι_U`.
pub fn ctc_n_direct(c: &Arc<FinCategory>, n: usize, config: &Config) -> Result<InvariantResult> {
    if n < 2 {
        return Err(Error::BadParams(format!("complexity needs n ≥ 2, got {n}")));
    }
    let prod = power(c, n, config)?;
    let parent = prod.category.clone();
    if let Some(r) = contractible_complexity(c, n, &prod, config)? {
        return Ok(r);
    }
    let maximal = maximal_subcategories_local(
        &parent,
        |u| Ok(diagonal_section(&prod, u, config)?.is_some()),
        config,
    )?;
    finish(
        Invariant::Ctc(c.clone(), n),
        parent,
        maximal,
        |u| {
            let (_, inc) = u.to_category();
            let mut sections = Vec::new();
            let mut parts = Vec::new();
            for piece in u.components() {
                let (s, w) = diagonal_section(&prod, &piece, config)?
                    .ok_or_else(|| Error::Internal("member lost its section".into()))?;
                sections.push((piece.clone(), s));
                // Δ ∘ s ≃ ι read backwards starts at ι
                parts.push((piece, w.reversed()));
            }
            let section = glue_functors(u, c, &sections)?;
            let witness = glue_witnesses(u, &inc, &parts)?.reversed();
            Ok(Certificate::Section { section, witness })
        },
        config,
    )
}

/// For contractible `C` the whole of `Cⁿ` admits the constant section, with
/// the witness moving one coordinate at a time along a contraction.
fn contractible_complexity(
    c: &Arc<FinCategory>,
    n: usize,
    prod: &Product,
    config: &Config,
) -> Result<Option<InvariantResult>> {
    if c.is_empty() || !c.is_connected() {
        return Ok(None);
    }
    let con = match is_contractible(c, config) {
        Ok(Some(con)) => con,
        Ok(None) | Err(Error::SizeBudgetExceeded { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let Some(b) = con.object else {
        return Ok(None);
    };
    let whole = Subcategory::whole(&prod.category);
    let certify = |u: &Subcategory| -> Result<Certificate> {
        let (uc, inc) = u.to_category();
        let mut coords: Vec<FinFunctor> = prod
            .projections
            .iter()
            .map(|p| compose_functors(p, &inc))
            .collect::<Result<_>>()?;
        let mut witness = ZigzagWitness::trivial(&prod.pairing(&coords)?);
        for k in 0..n {
            let h = con.witness.precompose(&coords[k])?;
            let mut functors = Vec::new();
            let mut steps = Vec::new();
            for (j, f) in h.functors.iter().enumerate() {
                coords[k] = f.clone();
                functors.push(prod.pairing(&coords)?);
                if let Some(step) = h.steps.get(j) {
                    let components = (0..uc.num_objects())
                        .map(|x| {
                            let parts: Vec<ArrowId> = (0..n)
                                .map(|i| {
                                    if i == k {
                                        step.components[x]
                                    } else {
                                        c.identity(coords[i].obj(x))
                                    }
                                })
                                .collect();
                            prod.arrow(&parts)
                        })
                        .collect();
                    steps.push(ZigzagStep {
                        direction: step.direction,
                        components,
                    });
                }
            }
            witness = witness.concat(&ZigzagWitness { functors, steps })?;
        }
        let section = FinFunctor::constant(&uc, c, b)?;
        Ok(Certificate::Section {
            section,
            witness: witness.reversed(),
        })
    };
    finish(
        Invariant::Ctc(c.clone(), n),
        prod.category.clone(),
        vec![whole],
        certify,
        config,
    )
    .map(Some)
}

/// `cTC(C) = cTC₂(C)`.
pub fn ctc_direct(c: &Arc<FinCategory>, config: &Config) -> Result<InvariantResult> {
    ctc_n_direct(c, 2, config)
}

impl InvariantResult {
    pub fn members(&self) -> &[Subcategory] {
        self.cover.as_ref().map(|c| c.members()).unwrap_or(&[])
    }

    /// Re-check the certificate from scratch: the cover condition, the member
    /// count, and every witness against the functors it must connect; for an
    /// infinite value, that the stored chain is composable and lies in no
    /// maximal member. Maximality of the family is not re-proved.
    pub fn replay(&self, config: &Config) -> Result<()> {
        let expected_parent = match &self.invariant {
            Invariant::Distance(fs) => fs[0].dom().clone(),
            Invariant::Ccat(c) => c.clone(),
            Invariant::Ctc(c, n) => power(c, *n, config)?.category,
        };
        if expected_parent.as_ref() != self.parent.as_ref() {
            return Err(Error::Internal(
                "result parent does not match its invariant".into(),
            ));
        }
        match self.value {
            ExtNat::Infinity => {
                let chain = self.uncovered.as_ref().ok_or_else(|| {
                    Error::Internal("infinite value without an uncovered chain".into())
                })?;
                if !chain.is_composable(&self.parent) {
                    return Err(Error::Internal("uncovered chain is not composable".into()));
                }
                if let Some(u) = self.maximal.iter().find(|u| u.contains_chain(chain)) {
                    return Err(Error::Internal(format!(
                        "{} lies in {}",
                        chain.describe(&self.parent),
                        u.describe()
                    )));
                }
                Ok(())
            }
            ExtNat::Finite(k) => {
                let members = self.members();
                if members.len() as u64 != k + 1 || self.certificates.len() != members.len() {
                    return Err(Error::Internal(format!(
                        "value {k} with {} members",
                        members.len()
                    )));
                }
                if let Some(chain) = find_uncovered_chain(&self.parent, members) {
                    return Err(Error::Internal(format!(
                        "{} is uncovered",
                        chain.describe(&self.parent)
                    )));
                }
                for (i, (u, cert)) in members.iter().zip(&self.certificates).enumerate() {
                    self.replay_member(u, cert, config)
                        .map_err(|e| Error::Internal(format!("member {i}: {e}")))?;
                }
                Ok(())
            }
        }
    }

    fn replay_member(&self, u: &Subcategory, cert: &Certificate, config: &Config) -> Result<()> {
        let (uc, inc) = u.to_category();
        let ends = |w: &ZigzagWitness, a: &FinFunctor, b: &FinFunctor| -> Result<()> {
            w.check()?;
            if !w.connects(a, b) {
                return Err(Error::EndpointMismatch(
                    "witness does not connect the required functors".into(),
                ));
            }
            Ok(())
        };
        match (&self.invariant, cert) {
            (Invariant::Distance(fs), Certificate::Domain(pairs)) => {
                let rs = restricted(fs, u)?;
                for i in 0..rs.len() {
                    for j in i + 1..rs.len() {
                        let w = pairs.iter().find(|p| p.0 == i && p.1 == j).ok_or_else(|| {
                            Error::Internal(format!("no witness for pair ({i}, {j})"))
                        })?;
                        ends(&w.2, &rs[i], &rs[j])?;
                    }
                }
                Ok(())
            }
            (Invariant::Ccat(c), Certificate::Contraction { object, witness }) => {
                let target = match object {
                    Some(b) => FinFunctor::constant(&uc, c, *b)?,
                    None if uc.is_empty() => inc.clone(),
                    None => return Err(Error::Internal("missing constant object".into())),
                };
                ends(witness, &inc, &target)
            }
            (Invariant::Ctc(c, n), Certificate::Section { section, witness }) => {
                let prod = power(c, *n, config)?;
                if section.dom().as_ref() != uc.as_ref() || section.cod().as_ref() != c.as_ref() {
                    return Err(Error::DomainMismatch("section has the wrong shape".into()));
                }
                let ds = compose_functors(&prod.diagonal()?, section)?;
                ends(witness, &ds, &inc)
            }
            _ => Err(Error::Internal(
                "certificate kind does not match the invariant".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{product, standard_category, StandardKind};

    fn cat(kind: StandardKind) -> Arc<FinCategory> {
        Arc::new(standard_category(&kind).unwrap())
    }

    #[test]
    fn combinations_in_lex_order() {
        let all: Vec<Vec<usize>> = Combinations::new(4, 2).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(Combinations::new(3, 0).count(), 1);
        assert_eq!(Combinations::new(2, 3).count(), 0);
    }

    #[test]
    fn distance_examples() {
        let cfg = Config::default();
        let z2 = cat(StandardKind::CyclicGroup(2));
        let id = FinFunctor::identity(&z2);
        let r = distance(&[id.clone(), id.clone()], &cfg).unwrap();
        assert_eq!(r.value, ExtNat::Finite(0));
        assert!(r.members()[0].is_whole());
        r.replay(&cfg).unwrap();

        let triv = FinFunctor::constant(&z2, &z2, 0).unwrap();
        let r = distance(&[id, triv], &cfg).unwrap();
        assert_eq!(r.value, ExtNat::Infinity);
        r.replay(&cfg).unwrap();

        let i1 = cat(StandardKind::ZigzagInterval(1));
        let sq = product(&[i1.clone(), i1.clone()], &cfg).unwrap();
        let r = distance(&sq.projections, &cfg).unwrap();
        assert_eq!(r.value, ExtNat::Finite(0));
        r.replay(&cfg).unwrap();
    }

    #[test]
    fn ccat_examples() {
        let cfg = Config::default();
        for m in 0..=4 {
            let r = ccat_direct(&cat(StandardKind::ZigzagInterval(m)), &cfg).unwrap();
            assert_eq!(r.value, ExtNat::Finite(0), "I_{m}");
            r.replay(&cfg).unwrap();
        }
        let r = ccat_direct(&cat(StandardKind::CyclicGroup(2)), &cfg).unwrap();
        assert_eq!(r.value, ExtNat::Infinity);
        r.replay(&cfg).unwrap();
        let r = ccat_direct(&cat(StandardKind::Point), &cfg).unwrap();
        assert_eq!(r.value, ExtNat::Finite(0));
        let r = ccat_direct(&cat(StandardKind::Discrete(2)), &cfg).unwrap();
        assert_eq!(r.value, ExtNat::Finite(1));
        r.replay(&cfg).unwrap();
        let r = ccat_direct(&cat(StandardKind::Discrete(0)), &cfg).unwrap();
        assert_eq!(r.value, ExtNat::Finite(0));
        r.replay(&cfg).unwrap();
    }

    #[test]
    fn ctc_examples() {
        let cfg = Config::default();
        for kind in [StandardKind::ZigzagInterval(1), StandardKind::Point] {
            let r = ctc_direct(&cat(kind), &cfg).unwrap();
            assert_eq!(r.value, ExtNat::Finite(0));
            r.replay(&cfg).unwrap();
        }
        let r = ctc_direct(&cat(StandardKind::CyclicGroup(2)), &cfg).unwrap();
        assert_eq!(r.value, ExtNat::Infinity);
        r.replay(&cfg).unwrap();
        let r = ctc_n_direct(&cat(StandardKind::ZigzagInterval(1)), 3, &cfg).unwrap();
        assert_eq!(r.value, ExtNat::Finite(0));
        r.replay(&cfg).unwrap();
    }

    #[test]
    fn tampered_result_fails_replay() {
        let cfg = Config::default();
        let mut r = ccat_direct(&cat(StandardKind::Discrete(2)), &cfg).unwrap();
        r.value = ExtNat::Finite(0);
        assert!(r.replay(&cfg).is_err());
    }
}
