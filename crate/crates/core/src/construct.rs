//! Standard categories, products and the standard functors between them.

use std::sync::Arc;

use crate::category::{identity_name, Arrow, ArrowId, FinCategory, ObjId};
use crate::error::{Error, Result};
use crate::functor::{FinFunctor, Mapping};
use crate::Config;

/// The standard shapes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StandardKind {
    /// `0 → 1 ← 2 → ⋯` with `m + 1` objects.
    ZigzagInterval(usize),
    /// `0 → 1 → ⋯ → n` with all composites.
    DirectedChain(usize),
    Point,
    /// ℤ/k as a one-object category.
    CyclicGroup(usize),
    /// `n` objects, identities only.
    Discrete(usize),
    /// The partial order generated by `relation` on `0..n` (reflexive and
    /// transitive closure; must be antisymmetric).
    Poset {
        n: usize,
        relation: Vec<(usize, usize)>,
    },
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn identities_first(objects: &[String]) -> (Vec<Arrow>, Vec<ArrowId>) {
    let arrows = objects
        .iter()
        .enumerate()
        .map(|(i, o)| Arrow {
            name: identity_name(o),
            src: i,
            tgt: i,
        })
        .collect();
    (arrows, (0..objects.len()).collect())
}

/// Build one of the standard categories.
pub fn standard_category(kind: &StandardKind) -> Result<FinCategory> {
    match kind {
        StandardKind::ZigzagInterval(m) => {
            let objects = names(m + 1);
            let (mut arrows, ids) = identities_first(&objects);
            for i in 0..*m {
                let (src, tgt) = if i % 2 == 0 { (i, i + 1) } else { (i + 1, i) };
                arrows.push(Arrow {
                    name: format!("s{i}"),
                    src,
                    tgt,
                });
            }
            thin(format!("I{m}"), objects, arrows, ids)
        }
        StandardKind::DirectedChain(n) => {
            let objects = names(n + 1);
            let (mut arrows, ids) = identities_first(&objects);
            for i in 0..=*n {
                for j in i + 1..=*n {
                    arrows.push(Arrow {
                        name: format!("{i}<{j}"),
                        src: i,
                        tgt: j,
                    });
                }
            }
            thin(format!("chain{n}"), objects, arrows, ids)
        }
        StandardKind::Point => {
            standard_category(&StandardKind::Discrete(1)).map(|c| c.with_name("point"))
        }
        StandardKind::Discrete(n) => {
            let objects = if *n == 1 {
                vec!["*".to_string()]
            } else {
                names(*n)
            };
            let (arrows, ids) = identities_first(&objects);
            thin(format!("discrete{n}"), objects, arrows, ids)
        }
        StandardKind::CyclicGroup(k) => {
            if *k == 0 {
                return Err(Error::BadParams("cyclic group of order 0".into()));
            }
            let objects = vec!["*".to_string()];
            let (mut arrows, ids) = identities_first(&objects);
            for i in 1..*k {
                arrows.push(Arrow {
                    name: format!("g^{i}"),
                    src: 0,
                    tgt: 0,
                });
            }
            let k = *k;
            FinCategory::from_parts(format!("Z{k}"), objects, arrows, ids, |g, f| {
                Some((g + f) % k)
            })
        }
        StandardKind::Poset { n, relation } => {
            let n = *n;
            let mut le = vec![vec![false; n]; n];
            for i in 0..n {
                le[i][i] = true;
            }
            for &(a, b) in relation {
                if a >= n || b >= n {
                    return Err(Error::BadParams(format!(
                        "relation pair ({a},{b}) out of range"
                    )));
                }
                le[a][b] = true;
            }
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        if le[i][k] && le[k][j] {
                            le[i][j] = true;
                        }
                    }
                }
            }
            for i in 0..n {
                for j in i + 1..n {
                    if le[i][j] && le[j][i] {
                        return Err(Error::BadParams(format!(
                            "relation is not antisymmetric: {i} and {j} are equivalent"
                        )));
                    }
                }
            }
            let objects = names(n);
            let (mut arrows, ids) = identities_first(&objects);
            for i in 0..n {
                for j in 0..n {
                    if i != j && le[i][j] {
                        arrows.push(Arrow {
                            name: format!("{i}<{j}"),
                            src: i,
                            tgt: j,
                        });
                    }
                }
            }
            thin(format!("poset{n}"), objects, arrows, ids)
        }
    }
}

/// A category with at most one arrow per hom-set; composition is forced.
fn thin(
    name: String,
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    ids: Vec<ArrowId>,
) -> Result<FinCategory> {
    let n = objects.len();
    let mut between = vec![None; n * n];
    for (i, a) in arrows.iter().enumerate() {
        between[a.src * n + a.tgt] = Some(i);
    }
    let ends: Vec<(ObjId, ObjId)> = arrows.iter().map(|a| (a.src, a.tgt)).collect();
    FinCategory::from_parts(name, objects, arrows, ids, |g, f| {
        let (fs, ft) = ends[f];
        let (gs, gt) = ends[g];
        if ft == gs {
            between[fs * n + gt]
        } else {
            None
        }
    })
}

/// A product category together with its projections.
///
/// Objects and arrows of the product are tuples ordered lexicographically
/// with the first factor most significant.
#[derive(Debug, Clone)]
pub struct Product {
    pub category: Arc<FinCategory>,
    pub factors: Vec<Arc<FinCategory>>,
    pub projections: Vec<FinFunctor>,
}

fn tuple_name<'a>(parts: impl Iterator<Item = &'a str>) -> String {
    let parts: Vec<&str> = parts.collect();
    format!("({})", parts.join(","))
}

/// `∏ factors`, checked against the configured size budget.
pub fn product(factors: &[Arc<FinCategory>], config: &Config) -> Result<Product> {
    if factors.is_empty() {
        return Err(Error::BadParams("product of no factors".into()));
    }
    let n_obj = factors
        .iter()
        .try_fold(1usize, |acc, c| acc.checked_mul(c.num_objects()))
        .unwrap_or(usize::MAX);
    if n_obj > config.max_objects {
        return Err(Error::budget("product objects", n_obj, config.max_objects));
    }
    let n_arr = factors
        .iter()
        .try_fold(1usize, |acc, c| acc.checked_mul(c.num_arrows()))
        .unwrap_or(usize::MAX);
    if n_arr > config.max_arrows {
        return Err(Error::budget("product arrows", n_arr, config.max_arrows));
    }
    let obj_radix: Vec<usize> = factors.iter().map(|c| c.num_objects()).collect();
    let arr_radix: Vec<usize> = factors.iter().map(|c| c.num_arrows()).collect();

    let objects: Vec<String> = (0..n_obj)
        .map(|i| {
            let t = decode(i, &obj_radix);
            tuple_name(t.iter().zip(factors).map(|(&o, c)| c.object_name(o)))
        })
        .collect();
    let mut identities = vec![0; n_obj];
    let arrows: Vec<Arrow> = (0..n_arr)
        .map(|i| {
            let t = decode(i, &arr_radix);
            let src = encode(t.iter().zip(factors).map(|(&f, c)| c.src(f)), &obj_radix);
            let tgt = encode(t.iter().zip(factors).map(|(&f, c)| c.tgt(f)), &obj_radix);
            let is_id = t.iter().zip(factors).all(|(&f, c)| c.is_identity(f));
            let name = if is_id {
                identities[src] = i;
                identity_name(&objects[src])
            } else {
                tuple_name(t.iter().zip(factors).map(|(&f, c)| c.arrow_name(f)))
            };
            Arrow { name, src, tgt }
        })
        .collect();
    let name = factors
        .iter()
        .map(|c| c.name())
        .collect::<Vec<_>>()
        .join("×");
    let category = FinCategory::from_parts(name, objects, arrows, identities, |g, f| {
        let tg = decode(g, &arr_radix);
        let tf = decode(f, &arr_radix);
        let parts: Option<Vec<ArrowId>> = tg
            .iter()
            .zip(&tf)
            .zip(factors)
            .map(|((&g, &f), c)| c.compose(g, f))
            .collect();
        parts.map(|p| encode(p.into_iter(), &arr_radix))
    })?;
    let category = Arc::new(category);
    let projections = factors
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let map = Mapping {
                objects: (0..n_obj).map(|i| decode(i, &obj_radix)[k]).collect(),
                arrows: (0..n_arr).map(|i| decode(i, &arr_radix)[k]).collect(),
            };
            FinFunctor::new_unchecked(category.clone(), c.clone(), map)
        })
        .collect();
    Ok(Product {
        category,
        factors: factors.to_vec(),
        projections,
    })
}

/// `C × ⋯ × C` (`n` factors).
pub fn power(c: &Arc<FinCategory>, n: usize, config: &Config) -> Result<Product> {
    product(&vec![c.clone(); n], config)
}

fn decode(mut i: usize, radix: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radix.len()];
    for k in (0..radix.len()).rev() {
        out[k] = i % radix[k];
        i /= radix[k];
    }
    out
}

fn encode(parts: impl Iterator<Item = usize>, radix: &[usize]) -> usize {
    parts.zip(radix).fold(0, |acc, (p, &r)| acc * r + p)
}

impl Product {
    pub fn object(&self, parts: &[ObjId]) -> ObjId {
        let radix: Vec<usize> = self.factors.iter().map(|c| c.num_objects()).collect();
        encode(parts.iter().copied(), &radix)
    }

    pub fn arrow(&self, parts: &[ArrowId]) -> ArrowId {
        let radix: Vec<usize> = self.factors.iter().map(|c| c.num_arrows()).collect();
        encode(parts.iter().copied(), &radix)
    }

    /// The functor `c ↦ (F₁c, …, Fₙc)` into this product.
    pub fn pairing(&self, functors: &[FinFunctor]) -> Result<FinFunctor> {
        if functors.len() != self.factors.len() {
            return Err(Error::BadParams(format!(
                "{} functors for {} factors",
                functors.len(),
                self.factors.len()
            )));
        }
        let dom = functors[0].dom().clone();
        for (f, c) in functors.iter().zip(&self.factors) {
            if f.dom().as_ref() != dom.as_ref() || f.cod().as_ref() != c.as_ref() {
                return Err(Error::DomainMismatch(format!(
                    "functor {} → {} does not fit the pairing",
                    f.dom().name(),
                    f.cod().name()
                )));
            }
        }
        let map = Mapping {
            objects: (0..dom.num_objects())
                .map(|o| self.object(&functors.iter().map(|f| f.obj(o)).collect::<Vec<_>>()))
                .collect(),
            arrows: (0..dom.num_arrows())
                .map(|a| self.arrow(&functors.iter().map(|f| f.arr(a)).collect::<Vec<_>>()))
                .collect(),
        };
        Ok(FinFunctor::new_unchecked(dom, self.category.clone(), map))
    }

    /// The diagonal `C → Cⁿ`; all factors must coincide.
    pub fn diagonal(&self) -> Result<FinFunctor> {
        let c = &self.factors[0];
        if self.factors.iter().any(|f| f.as_ref() != c.as_ref()) {
            return Err(Error::BadParams("diagonal needs equal factors".into()));
        }
        self.pairing(&vec![FinFunctor::identity(c); self.factors.len()])
    }

    /// `i₁(c) = (c, c₀)` (`first = true`) or `i₂(c) = (c₀, c)` into `C × C`.
    pub fn based_inclusion(&self, base: ObjId, first: bool) -> Result<FinFunctor> {
        if self.factors.len() != 2 || self.factors[0].as_ref() != self.factors[1].as_ref() {
            return Err(Error::BadParams(
                "based inclusion needs a square C × C".into(),
            ));
        }
        let c = &self.factors[0];
        let id = FinFunctor::identity(c);
        let constant = FinFunctor::constant(c, c, base)?;
        if first {
            self.pairing(&[id, constant])
        } else {
            self.pairing(&[constant, id])
        }
    }

    /// Does `f` have all coordinates equal?
    pub fn is_diagonal_object(&self, o: ObjId) -> bool {
        let first = self.projections[0].obj(o);
        self.projections.iter().all(|p| p.obj(o) == first)
    }

    pub fn is_diagonal_arrow(&self, a: ArrowId) -> bool {
        let first = self.projections[0].arr(a);
        self.projections.iter().all(|p| p.arr(a) == first)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functor::compose_functors;

    fn cat(kind: StandardKind) -> Arc<FinCategory> {
        Arc::new(standard_category(&kind).unwrap())
    }

    #[test]
    fn standard_shapes() {
        let i1 = cat(StandardKind::ZigzagInterval(1));
        assert_eq!((i1.num_objects(), i1.num_arrows()), (2, 3));
        let i2 = cat(StandardKind::ZigzagInterval(2));
        let s1 = i2.arrow_id("s1").unwrap();
        assert_eq!((i2.src(s1), i2.tgt(s1)), (2, 1));
        let chain = cat(StandardKind::DirectedChain(2));
        assert_eq!(chain.num_arrows(), 6);
        let f = chain.arrow_id("0<1").unwrap();
        let g = chain.arrow_id("1<2").unwrap();
        assert_eq!(chain.compose(g, f), chain.arrow_id("0<2"));
        let z2 = cat(StandardKind::CyclicGroup(2));
        let g = z2.arrow_id("g^1").unwrap();
        assert_eq!(z2.compose(g, g), Some(z2.identity(0)));
    }

    #[test]
    fn poset_rejects_cycles() {
        let err = standard_category(&StandardKind::Poset {
            n: 2,
            relation: vec![(0, 1), (1, 0)],
        })
        .unwrap_err();
        assert!(matches!(err, Error::BadParams(_)));
        let p = standard_category(&StandardKind::Poset {
            n: 3,
            relation: vec![(0, 1), (1, 2)],
        })
        .unwrap();
        assert_eq!(p.num_arrows(), 6);
    }

    #[test]
    fn product_counts() {
        let cfg = Config::default();
        let i1 = cat(StandardKind::ZigzagInterval(1));
        let p = product(&[i1.clone(), i1.clone()], &cfg).unwrap();
        assert_eq!((p.category.num_objects(), p.category.num_arrows()), (4, 9));
        let p3 = power(&i1, 3, &cfg).unwrap();
        assert_eq!(
            (p3.category.num_objects(), p3.category.num_arrows()),
            (8, 27)
        );
    }

    #[test]
    fn product_with_point_is_isomorphic() {
        let cfg = Config::default();
        let pt = cat(StandardKind::Point);
        let c = cat(StandardKind::DirectedChain(2));
        let p = product(&[pt, c.clone()], &cfg).unwrap();
        let p2 = &p.projections[1];
        assert_eq!(p2.mapping().objects, (0..3).collect::<Vec<_>>());
        assert_eq!(p2.mapping().arrows, (0..c.num_arrows()).collect::<Vec<_>>());
    }

    #[test]
    fn budget_guard() {
        let cfg = Config {
            max_objects: 3,
            ..Config::default()
        };
        let i1 = cat(StandardKind::ZigzagInterval(1));
        let err = product(&[i1.clone(), i1], &cfg).unwrap_err();
        assert!(matches!(err, Error::SizeBudgetExceeded { .. }));
    }

    #[test]
    fn standard_functor_laws() {
        let cfg = Config::default();
        let c = cat(StandardKind::DirectedChain(2));
        let p = power(&c, 2, &cfg).unwrap();
        let delta = p.diagonal().unwrap();
        let back = compose_functors(&p.projections[0], &delta).unwrap();
        assert_eq!(back, FinFunctor::identity(&c));
        let i1 = p.based_inclusion(1, true).unwrap();
        let second = compose_functors(&p.projections[1], &i1).unwrap();
        assert_eq!(second, FinFunctor::constant(&c, &c, 1).unwrap());
        for f in [&delta, &i1, &p.based_inclusion(0, false).unwrap()] {
            f.mapping().check(f.dom(), f.cod()).unwrap();
        }
        let k = FinFunctor::constant(&c, &c, 2).unwrap();
        let pair = p.pairing(&[FinFunctor::identity(&c), k.clone()]).unwrap();
        assert_eq!(compose_functors(&p.projections[1], &pair).unwrap(), k);
    }
}
