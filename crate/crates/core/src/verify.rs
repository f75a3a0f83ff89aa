//! Executable checks of the product inequalities and distance bounds, and
//! seeded random instances.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::category::{Arrow, FinCategory};
use crate::construct::power;
use crate::error::{Error, Result};
use crate::extnat::ExtNat;
use crate::fibrations::{classify_fibration, fiber};
use crate::functor::{compose_functors, FinFunctor, Mapping};
use crate::homotopy::enumerate_functors;
use crate::invariants::{ccat_direct, ctc_direct, ctc_n_direct, distance, InvariantResult};
use crate::{par, Config};

/// A strictly commuting square `P′ ∘ F = F̄ ∘ P`.
#[derive(Debug, Clone)]
pub struct FibrationMorphism {
    pub p: FinFunctor,
    pub p_prime: FinFunctor,
    pub f: FinFunctor,
    pub f_bar: FinFunctor,
}

impl FibrationMorphism {
    pub fn new(
        p: FinFunctor,
        p_prime: FinFunctor,
        f: FinFunctor,
        f_bar: FinFunctor,
    ) -> Result<Self> {
        let left = compose_functors(&p_prime, &f)?;
        let right = compose_functors(&f_bar, &p)?;
        if !left.same_shape(&right) || left.mapping() != right.mapping() {
            let e = p.dom();
            let bad = (0..e.num_arrows())
                .find(|&a| left.mapping().arrows.get(a) != right.mapping().arrows.get(a))
                .map(|a| e.arrow_name(a).to_string())
                .unwrap_or_default();
            return Err(Error::NotAMorphism(format!(
                "square does not commute at arrow {bad}"
            )));
        }
        Ok(FibrationMorphism {
            p,
            p_prime,
            f,
            f_bar,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "≤",
            Relation::Eq => "=",
        })
    }
}

/// One evaluated (in)equality with the invariant values behind it.
#[derive(Debug, Clone)]
pub struct InequalityReport {
    pub name: String,
    pub relation: Relation,
    pub left: ExtNat,
    pub right: ExtNat,
    pub holds: bool,
    pub inputs: String,
    pub sub_results: Vec<(String, InvariantResult)>,
}

impl InequalityReport {
    fn new(
        name: &str,
        relation: Relation,
        left: ExtNat,
        right: ExtNat,
        inputs: String,
        sub_results: Vec<(String, InvariantResult)>,
    ) -> Self {
        let holds = match relation {
            Relation::Le => left <= right,
            Relation::Eq => left == right,
        };
        InequalityReport {
            name: name.to_string(),
            relation,
            left,
            right,
            holds,
            inputs,
            sub_results,
        }
    }

    /// Replay every stored certificate and recompute `holds`.
    pub fn replay(&self, config: &Config) -> Result<()> {
        for (label, r) in &self.sub_results {
            r.replay(config)
                .map_err(|e| Error::Internal(format!("{label}: {e}")))?;
        }
        let holds = match self.relation {
            Relation::Le => self.left <= self.right,
            Relation::Eq => self.left == self.right,
        };
        if holds != self.holds {
            return Err(Error::Internal(format!(
                "{}: stored verdict is stale",
                self.name
            )));
        }
        Ok(())
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: {} {} {} ({})",
            self.name,
            self.left,
            self.relation,
            self.right,
            if self.holds { "holds" } else { "VIOLATED" }
        )
    }
}

fn ensure_bifibration(p: &FinFunctor, config: &Config, label: &str) -> Result<()> {
    let r = classify_fibration(p, config);
    if !r.is_bifibration() {
        let what = if r.is_fibration {
            "op-fibration"
        } else {
            "fibration"
        };
        return Err(Error::NotBiFibration(format!("{label} is not an {what}")));
    }
    if !p.cod().is_connected() {
        return Err(Error::BaseNotConnected(p.cod().name().to_string()));
    }
    Ok(())
}

/// The fiber functor `F_b: E_b → E′_{b′}`.
fn fiber_functor(m: &FibrationMorphism, b: usize, b_prime: usize) -> Result<FinFunctor> {
    let src = fiber(&m.p, b)?;
    let dst = fiber(&m.p_prime, b_prime)?;
    let inc = compose_functors(&m.f, &src.inclusion)?;
    let dst_map = dst.inclusion.mapping();
    let objects = inc
        .mapping()
        .objects
        .iter()
        .map(|&x| {
            dst_map.objects.iter().position(|&y| y == x).ok_or_else(|| {
                Error::FiberNotPreserved(format!(
                    "object {} leaves the fiber",
                    m.p_prime.dom().object_name(x)
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let arrows = inc
        .mapping()
        .arrows
        .iter()
        .map(|&a| {
            dst_map.arrows.iter().position(|&y| y == a).ok_or_else(|| {
                Error::FiberNotPreserved(format!(
                    "arrow {} is not vertical",
                    m.p_prime.dom().arrow_name(a)
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    FinFunctor::new(
        src.category.clone(),
        dst.category.clone(),
        Mapping { objects, arrows },
    )
}

/// `cD(F, G) + 1 ≤ (cD(F_b, G_b) + 1) · (ccat(B) + 1)` for two morphisms of
/// bi-fibrations with `F̄(b) = Ḡ(b)`.
pub fn check_varadarajan(
    m1: &FibrationMorphism,
    m2: &FibrationMorphism,
    b: usize,
    config: &Config,
) -> Result<InequalityReport> {
    if m1.p != m2.p || m1.p_prime != m2.p_prime {
        return Err(Error::DomainMismatch(
            "morphisms between different bundles".into(),
        ));
    }
    ensure_bifibration(&m1.p, config, "P")?;
    ensure_bifibration(&m1.p_prime, config, "P′")?;
    let base = m1.p.cod();
    if b >= base.num_objects() {
        return Err(Error::UnknownObject(format!("base object index {b}")));
    }
    let (fb, gb) = (m1.f_bar.obj(b), m2.f_bar.obj(b));
    if fb != gb {
        return Err(Error::BasepointMismatch(format!(
            "F̄({0}) = {1} but Ḡ({0}) = {2}",
            base.object_name(b),
            m1.p_prime.cod().object_name(fb),
            m1.p_prime.cod().object_name(gb)
        )));
    }
    let f_fib = fiber_functor(m1, b, fb)?;
    let g_fib = fiber_functor(m2, b, fb)?;
    let whole = distance(&[m1.f.clone(), m2.f.clone()], config)?;
    let fibre = distance(&[f_fib, g_fib], config)?;
    let base_ccat = ccat_direct(base, config)?;
    let left = whole.value + 1;
    let right = (fibre.value + 1) * (base_ccat.value + 1);
    Ok(InequalityReport::new(
        "cD(F,G)+1 ≤ (cD(F_b,G_b)+1)(ccat(B)+1)",
        Relation::Le,
        left,
        right,
        format!(
            "P: {} → {}, b = {}",
            m1.p.dom().name(),
            base.name(),
            base.object_name(b)
        ),
        vec![
            ("cD(F,G)".into(), whole),
            ("cD(F_b,G_b)".into(), fibre),
            ("ccat(B)".into(), base_ccat),
        ],
    ))
}

/// `ccat(E) + 1 ≤ (ccat(B) + 1) · (ccat(E_b) + 1)`.
pub fn check_tanaka(p: &FinFunctor, b: usize, config: &Config) -> Result<InequalityReport> {
    ensure_bifibration(p, config, "P")?;
    let fib = fiber(p, b)?;
    let total = ccat_direct(p.dom(), config)?;
    let base = ccat_direct(p.cod(), config)?;
    let fibre = ccat_direct(&fib.category, config)?;
    let left = total.value + 1;
    let right = (base.value + 1) * (fibre.value + 1);
    Ok(InequalityReport::new(
        "ccat(E)+1 ≤ (ccat(B)+1)(ccat(F)+1)",
        Relation::Le,
        left,
        right,
        format!(
            "P: {} → {}, b = {}",
            p.dom().name(),
            p.cod().name(),
            p.cod().object_name(b)
        ),
        vec![
            ("ccat(E)".into(), total),
            ("ccat(B)".into(), base),
            ("ccat(F)".into(), fibre),
        ],
    ))
}

/// Data for one run of the inequality suite: `F, G: C → D`, optionally
/// `H: D → D′` (post-composition) and `K: C′ → C` (pre-composition), and an
/// optional `n` for `cTCₙ(C) = cD(p₁, …, pₙ)`.
#[derive(Debug, Clone)]
pub struct SuiteInstance {
    pub label: String,
    pub f: FinFunctor,
    pub g: FinFunctor,
    pub post: Option<FinFunctor>,
    pub pre: Option<FinFunctor>,
    pub ctc_n: Option<usize>,
}

/// Evaluate every listed (in)equality on one instance.
///
/// `cD(F, G) ≤ ccat(C)` is evaluated only when `D` is connected, the
/// comparisons with `ccat(C)` only when `C` is connected: both fail for
/// disconnected categories.
pub fn check_instance(inst: &SuiteInstance, config: &Config) -> Result<Vec<InequalityReport>> {
    let c = inst.f.dom().clone();
    let d = inst.f.cod().clone();
    let mut out = Vec::new();
    let fg = distance(&[inst.f.clone(), inst.g.clone()], config)?;
    if let Some(h) = &inst.post {
        let hf = compose_functors(h, &inst.f)?;
        let hg = compose_functors(h, &inst.g)?;
        let r = distance(&[hf, hg], config)?;
        out.push(InequalityReport::new(
            "cD(H∘F,H∘G) ≤ cD(F,G)",
            Relation::Le,
            r.value,
            fg.value,
            inst.label.clone(),
            vec![("cD(H∘F,H∘G)".into(), r), ("cD(F,G)".into(), fg.clone())],
        ));
    }
    if let Some(k) = &inst.pre {
        let fk = compose_functors(&inst.f, k)?;
        let gk = compose_functors(&inst.g, k)?;
        let r = distance(&[fk, gk], config)?;
        out.push(InequalityReport::new(
            "cD(F∘K,G∘K) ≤ cD(F,G)",
            Relation::Le,
            r.value,
            fg.value,
            inst.label.clone(),
            vec![("cD(F∘K,G∘K)".into(), r), ("cD(F,G)".into(), fg.clone())],
        ));
    }
    let ccat_c = ccat_direct(&c, config)?;
    if d.is_connected() {
        out.push(InequalityReport::new(
            "cD(F,G) ≤ ccat(C)",
            Relation::Le,
            fg.value,
            ccat_c.value,
            inst.label.clone(),
            vec![
                ("cD(F,G)".into(), fg.clone()),
                ("ccat(C)".into(), ccat_c.clone()),
            ],
        ));
    }
    let ctc_d = ctc_direct(&d, config)?;
    out.push(InequalityReport::new(
        "cD(F,G) ≤ cTC(D)",
        Relation::Le,
        fg.value,
        ctc_d.value,
        inst.label.clone(),
        vec![
            ("cD(F,G)".into(), fg.clone()),
            ("cTC(D)".into(), ctc_d.clone()),
        ],
    ));
    if c.is_connected() {
        let ctc_c = if c == d {
            ctc_d.clone()
        } else {
            ctc_direct(&c, config)?
        };
        out.push(InequalityReport::new(
            "ccat(C) ≤ cTC(C)",
            Relation::Le,
            ccat_c.value,
            ctc_c.value,
            inst.label.clone(),
            vec![("ccat(C)".into(), ccat_c.clone()), ("cTC(C)".into(), ctc_c)],
        ));
        if !c.is_empty() {
            let id = FinFunctor::identity(&c);
            let k0 = FinFunctor::constant(&c, &c, 0)?;
            let r = distance(&[id, k0], config)?;
            out.push(InequalityReport::new(
                "ccat(C) = cD(id,•)",
                Relation::Eq,
                ccat_c.value,
                r.value,
                inst.label.clone(),
                vec![("ccat(C)".into(), ccat_c.clone()), ("cD(id,•)".into(), r)],
            ));
            let sq = power(&c, 2, config)?;
            let i1 = sq.based_inclusion(0, true)?;
            let i2 = sq.based_inclusion(0, false)?;
            let r = distance(&[i1, i2], config)?;
            out.push(InequalityReport::new(
                "ccat(C) = cD(i₁,i₂)",
                Relation::Eq,
                ccat_c.value,
                r.value,
                inst.label.clone(),
                vec![("ccat(C)".into(), ccat_c.clone()), ("cD(i₁,i₂)".into(), r)],
            ));
        }
    }
    if let Some(n) = inst.ctc_n {
        let t = ctc_n_direct(&c, n, config)?;
        let pw = power(&c, n, config)?;
        let r = distance(&pw.projections, config)?;
        out.push(InequalityReport::new(
            "cTC_n(C) = cD(p₁,…,p_n)",
            Relation::Eq,
            t.value,
            r.value,
            format!("{} (n = {n})", inst.label),
            vec![("cTC_n(C)".into(), t), ("cD(p₁,…,p_n)".into(), r)],
        ));
    }
    Ok(out)
}

/// Run [`check_instance`] on many instances in parallel; per-instance errors
/// (such as exhausted budgets) are reported, not fatal.
pub fn check_inequality_suite(
    instances: &[SuiteInstance],
    config: &Config,
) -> Vec<Result<Vec<InequalityReport>>> {
    par::map(config, instances, |inst| check_instance(inst, config))
}

/// A random finite category, deterministic in `seed`.
///
/// Objects are small finite sets and arrows are functions between them:
/// random generating functions are added one at a time and the category is
/// closed under composition, discarding a generator when the closure would
/// exceed `n_arrows` non-identity arrows. `n_arrows = 0` gives a discrete
/// category.
pub fn random_category(
    seed: u64,
    n_objects: usize,
    n_arrows: usize,
    config: &Config,
) -> Result<FinCategory> {
    if n_objects > config.max_objects || n_objects + n_arrows > config.max_arrows {
        return Err(Error::budget(
            "random category size",
            n_objects + n_arrows,
            config.max_arrows,
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sizes: Vec<usize> = (0..n_objects).map(|_| rng.gen_range(1..=3)).collect();
    // (src, tgt, function)
    let mut arrows: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    let mut known: BTreeSet<(usize, usize, Vec<usize>)> = BTreeSet::new();
    let is_identity =
        |s: usize, t: usize, f: &[usize]| s == t && f.iter().enumerate().all(|(i, &x)| i == x);
    let attempts = if n_objects == 0 { 0 } else { 4 * n_arrows + 8 };
    for _ in 0..attempts {
        if arrows.len() >= n_arrows {
            break;
        }
        let s = rng.gen_range(0..n_objects);
        let t = rng.gen_range(0..n_objects);
        let f: Vec<usize> = (0..sizes[s]).map(|_| rng.gen_range(0..sizes[t])).collect();
        if is_identity(s, t, &f) || known.contains(&(s, t, f.clone())) {
            continue;
        }
        let mut trial = arrows.clone();
        let mut trial_known = known.clone();
        trial.push((s, t, f.clone()));
        trial_known.insert((s, t, f));
        let mut ok = true;
        let mut i = 0;
        'close: while i < trial.len() {
            for j in 0..trial.len() {
                for (a, b) in [(i, j), (j, i)] {
                    // trial[b] ∘ trial[a]
                    if trial[a].1 != trial[b].0 {
                        continue;
                    }
                    let h: Vec<usize> = trial[a].2.iter().map(|&x| trial[b].2[x]).collect();
                    let key = (trial[a].0, trial[b].1, h);
                    if is_identity(key.0, key.1, &key.2) || trial_known.contains(&key) {
                        continue;
                    }
                    if trial.len() >= n_arrows {
                        ok = false;
                        break 'close;
                    }
                    trial_known.insert(key.clone());
                    trial.push(key);
                }
            }
            i += 1;
        }
        if ok {
            arrows = trial;
            known = trial_known;
        }
    }
    let objects: Vec<String> = (0..n_objects).map(|i| format!("o{i}")).collect();
    let mut all: Vec<(usize, usize, Vec<usize>)> = (0..n_objects)
        .map(|o| (o, o, (0..sizes[o]).collect()))
        .collect();
    all.extend(arrows);
    let arrow_data: Vec<Arrow> = all
        .iter()
        .enumerate()
        .map(|(i, (s, t, _))| Arrow {
            name: if i < n_objects {
                crate::category::identity_name(&objects[i])
            } else {
                format!("a{}", i - n_objects)
            },
            src: *s,
            tgt: *t,
        })
        .collect();
    let identities = (0..n_objects).collect();
    FinCategory::from_parts(
        format!("random{seed}"),
        objects,
        arrow_data,
        identities,
        |g, f| {
            if all[f].1 != all[g].0 {
                return None;
            }
            let h: Vec<usize> = all[f].2.iter().map(|&x| all[g].2[x]).collect();
            all.iter()
                .position(|a| a.0 == all[f].0 && a.1 == all[g].1 && a.2 == h)
        },
    )
}

/// A random connected category: retries derived seeds until the result is
/// connected.
pub fn random_connected_category(
    seed: u64,
    n_objects: usize,
    n_arrows: usize,
    config: &Config,
) -> Result<FinCategory> {
    for attempt in 0..256u64 {
        let c = random_category(
            seed.wrapping_mul(1_000_003).wrapping_add(attempt),
            n_objects,
            n_arrows,
            config,
        )?;
        if c.is_connected() {
            return Ok(c.with_name(format!("random{seed}")));
        }
    }
    Err(Error::budget(
        "connected random category attempts",
        257,
        256,
    ))
}

/// A functor `c → d` drawn uniformly from all functors; `None` only when there
/// are none.
pub fn random_functor(
    seed: u64,
    c: &Arc<FinCategory>,
    d: &Arc<FinCategory>,
    config: &Config,
) -> Result<Option<FinFunctor>> {
    let all = enumerate_functors(c, d, config)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(all.choose(&mut rng).cloned())
}

/// A random suite instance, deterministic in `seed`: `F, G: C → D` with
/// post- and pre-composition functors, all categories having at most
/// `max_objects` objects and `max_arrows` non-identity arrows.
pub fn random_suite_instance(
    seed: u64,
    max_objects: usize,
    max_arrows: usize,
    config: &Config,
) -> Result<SuiteInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cat = |rng: &mut ChaCha8Rng, k: u64| -> Result<Arc<FinCategory>> {
        let n = rng.gen_range(1..=max_objects.max(1));
        let m = rng.gen_range(0..=max_arrows);
        Ok(Arc::new(random_category(
            seed.wrapping_mul(4).wrapping_add(k),
            n,
            m,
            config,
        )?))
    };
    let c = cat(&mut rng, 0)?;
    let d = cat(&mut rng, 1)?;
    let d2 = cat(&mut rng, 2)?;
    let c0 = cat(&mut rng, 3)?;
    let pick = |k: u64, a: &Arc<FinCategory>, b: &Arc<FinCategory>| -> Result<FinFunctor> {
        random_functor(seed.wrapping_mul(8).wrapping_add(k), a, b, config)?
            .ok_or_else(|| Error::Internal("no functor into a non-empty category".into()))
    };
    Ok(SuiteInstance {
        label: format!("seed {seed}"),
        f: pick(0, &c, &d)?,
        g: pick(1, &c, &d)?,
        post: Some(pick(2, &d, &d2)?),
        pre: Some(pick(3, &c0, &c)?),
        ctc_n: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn random_categories_are_deterministic() {
        let cfg = Config::default();
        for seed in 0..20 {
            let a = random_category(seed, 3, 4, &cfg).unwrap();
            let b = random_category(seed, 3, 4, &cfg).unwrap();
            assert_eq!(a, b);
            assert!(a.num_arrows() - a.num_objects() <= 4);
        }
        let d = random_category(1, 3, 0, &cfg).unwrap();
        assert_eq!(d.num_arrows(), 3);
    }

    #[test]
    fn random_functor_into_nonempty_exists() {
        let cfg = Config::default();
        for seed in 0..10 {
            let c = Arc::new(random_category(seed, 2, 3, &cfg).unwrap());
            let d = Arc::new(random_category(seed + 100, 2, 3, &cfg).unwrap());
            assert!(random_functor(seed, &c, &d, &cfg).unwrap().is_some());
        }
    }

    #[test]
    fn varadarajan_fixtures() {
        let cfg = Config::default();
        for (name, inp) in fixtures::varadarajan_inputs() {
            let m1 = FibrationMorphism::new(
                inp.p.clone(),
                inp.p_prime.clone(),
                inp.f.clone(),
                inp.f_bar.clone(),
            )
            .unwrap();
            let m2 = FibrationMorphism::new(
                inp.p.clone(),
                inp.p_prime.clone(),
                inp.g.clone(),
                inp.g_bar.clone(),
            )
            .unwrap();
            let r = check_varadarajan(&m1, &m2, inp.basepoint, &cfg).unwrap();
            assert!(r.holds, "{name}: {}", r.summary());
            r.replay(&cfg).unwrap();
        }
    }

    #[test]
    fn varadarajan_values() {
        let cfg = Config::default();
        let inp = fixtures::varadarajan_finite();
        let m1 =
            FibrationMorphism::new(inp.p.clone(), inp.p_prime.clone(), inp.f, inp.f_bar).unwrap();
        let m2 = FibrationMorphism::new(inp.p, inp.p_prime, inp.g, inp.g_bar).unwrap();
        let r = check_varadarajan(&m1, &m2, 0, &cfg).unwrap();
        assert_eq!((r.left, r.right), (ExtNat::Finite(1), ExtNat::Finite(1)));
        let inp = fixtures::varadarajan_infinite();
        let m1 =
            FibrationMorphism::new(inp.p.clone(), inp.p_prime.clone(), inp.f, inp.f_bar).unwrap();
        let m2 = FibrationMorphism::new(inp.p, inp.p_prime, inp.g, inp.g_bar).unwrap();
        let r = check_varadarajan(&m1, &m2, 0, &cfg).unwrap();
        assert_eq!(r.right, ExtNat::Infinity);
    }

    #[test]
    fn non_commuting_square_is_rejected() {
        let p = fixtures::z4_to_z2();
        let z4 = p.dom().clone();
        let z2 = p.cod().clone();
        let f = FinFunctor::identity(&z4);
        let trivial = FinFunctor::constant(&z2, &z2, 0).unwrap();
        let err = FibrationMorphism::new(p.clone(), p, f, trivial).unwrap_err();
        assert!(matches!(err, Error::NotAMorphism(_)));
    }

    #[test]
    fn tanaka_fixtures() {
        let cfg = Config::default();
        for (name, p) in fixtures::bifibrations() {
            let r = check_tanaka(&p, 0, &cfg).unwrap();
            assert!(r.holds, "{name}: {}", r.summary());
        }
        let r = check_tanaka(&fixtures::point_over_point(), 0, &cfg).unwrap();
        assert_eq!((r.left, r.right), (ExtNat::Finite(1), ExtNat::Finite(1)));
    }

    #[test]
    fn nosobre_is_not_accepted() {
        let cfg = Config::default();
        let err = check_tanaka(&fixtures::nosobre(), 0, &cfg).unwrap_err();
        assert!(matches!(err, Error::NotBiFibration(_)));
    }
}
