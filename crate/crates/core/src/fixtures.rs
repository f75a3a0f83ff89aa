//! Built-in example categories, bundles and fibration morphisms.
//!
//! The JSON files under `fixtures/` describe the same data; the test suite
//! checks that both agree.

use std::sync::Arc;

use crate::category::{validate_category, ArrowSpec, CategorySpec, ComposeSpec, FinCategory};
use crate::construct::{product, standard_category, StandardKind};
use crate::functor::{compose_functors, FinFunctor};
use crate::Config;

fn build(
    name: &str,
    objects: &[&str],
    arrows: &[(&str, &str, &str)],
    compose: &[(&str, &str, &str)],
) -> Arc<FinCategory> {
    let spec = CategorySpec {
        name: name.into(),
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
    };
    Arc::new(validate_category(&spec).expect("fixture category is valid"))
}

fn functor(
    dom: &Arc<FinCategory>,
    cod: &Arc<FinCategory>,
    objects: &[(&str, &str)],
    arrows: &[(&str, &str)],
) -> FinFunctor {
    FinFunctor::from_names(dom, cod, objects.iter().copied(), arrows.iter().copied())
        .expect("fixture functor is valid")
}

pub fn standard(kind: StandardKind) -> Arc<FinCategory> {
    Arc::new(standard_category(&kind).expect("standard category"))
}

/// The interval `0 → 1` with its arrow named `s`.
pub fn interval_s(name: &str) -> Arc<FinCategory> {
    build(name, &["0", "1"], &[("s", "0", "1")], &[])
}

/// ℤ/4 → ℤ/2, reduction mod 2.
pub fn z4_to_z2() -> FinFunctor {
    let z4 = standard(StandardKind::CyclicGroup(4));
    let z2 = standard(StandardKind::CyclicGroup(2));
    functor(
        &z4,
        &z2,
        &[("*", "*")],
        &[("g^1", "g^1"), ("g^2", "id:*"), ("g^3", "g^1")],
    )
}

/// The constant functor `I₁ → I₁` at `0`: a fibration that is not an
/// op-fibration and misses the fiber over `1`.
pub fn nosobre() -> FinFunctor {
    let e = interval_s("E");
    let b = interval_s("I1");
    functor(&e, &b, &[("0", "0"), ("1", "0")], &[("s", "id:0")])
}

/// A bi-fibration over `0 → 1` whose fibers `{0}` and `{1 ≅ 1bar}` are
/// equivalent but not isomorphic.
pub fn iso_fiber() -> FinFunctor {
    let e = build(
        "E",
        &["0", "1", "1bar"],
        &[
            ("s", "0", "1"),
            ("f", "1bar", "1"),
            ("g", "1", "1bar"),
            ("gs", "0", "1bar"),
        ],
        &[
            ("f", "g", "id:1"),
            ("g", "f", "id:1bar"),
            ("g", "s", "gs"),
            ("f", "gs", "s"),
        ],
    );
    let b = interval_s("I1");
    functor(
        &e,
        &b,
        &[("0", "0"), ("1", "1"), ("1bar", "1")],
        &[("s", "s"), ("gs", "s"), ("f", "id:1"), ("g", "id:1")],
    )
}

/// A bi-fibration over `0 → 1` with fibers `{x}` and `{y → z}`: adjoint
/// transport functors that are not an equivalence.
pub fn adjoint_fibers() -> FinFunctor {
    let e = build(
        "E",
        &["x", "y", "z"],
        &[("a", "x", "y"), ("b", "y", "z"), ("c", "x", "z")],
        &[("b", "a", "c")],
    );
    let b = interval_s("I1");
    functor(
        &e,
        &b,
        &[("x", "0"), ("y", "1"), ("z", "1")],
        &[("a", "s"), ("b", "id:1"), ("c", "s")],
    )
}

/// An 8-cycle of zigzag arrows (even → odd neighbours) over the 4-cycle,
/// `n ↦ n mod 4`.
pub fn cyclic_zigzag8() -> FinFunctor {
    let objects: Vec<String> = (0..8).map(|i| i.to_string()).collect();
    let mut arrows = Vec::new();
    for n in (0..8).step_by(2) {
        for m in [(n + 7) % 8, (n + 1) % 8] {
            arrows.push((format!("e{n}{m}"), n.to_string(), m.to_string()));
        }
    }
    arrows.sort_by_key(|a| a.0.clone());
    let obj_refs: Vec<&str> = objects.iter().map(|s| s.as_str()).collect();
    let arr_refs: Vec<(&str, &str, &str)> = arrows
        .iter()
        .map(|(a, s, t)| (a.as_str(), s.as_str(), t.as_str()))
        .collect();
    let e = build("Z8zigzag", &obj_refs, &arr_refs, &[]);
    let b = build(
        "Z4zigzag",
        &["b0", "b1", "b2", "b3"],
        &[
            ("t01", "b0", "b1"),
            ("t03", "b0", "b3"),
            ("t21", "b2", "b1"),
            ("t23", "b2", "b3"),
        ],
        &[],
    );
    let obj_map: Vec<(String, String)> = (0..8)
        .map(|i| (i.to_string(), format!("b{}", i % 4)))
        .collect();
    let arr_map: Vec<(String, String)> = arrows
        .iter()
        .map(|(a, s, t)| {
            let (s, t): (usize, usize) = (s.parse().unwrap(), t.parse().unwrap());
            (a.clone(), format!("t{}{}", s % 4, t % 4))
        })
        .collect();
    FinFunctor::from_names(
        &e,
        &b,
        obj_map.iter().map(|(a, b)| (a.as_str(), b.as_str())),
        arr_map.iter().map(|(a, b)| (a.as_str(), b.as_str())),
    )
    .expect("fixture functor is valid")
}

/// First projection `B × F → B`.
pub fn projection(b: StandardKind, f: StandardKind) -> FinFunctor {
    let prod = product(&[standard(b), standard(f)], &Config::default()).expect("small product");
    prod.projections[0].clone()
}

/// `point → point`.
pub fn point_over_point() -> FinFunctor {
    let pt = standard(StandardKind::Point);
    FinFunctor::identity(&pt)
}

/// A pair of fibration morphisms `(F, F̄)`, `(G, Ḡ)` from `P` to `P′` and a
/// base object.
#[derive(Debug, Clone)]
pub struct VaradarajanInput {
    pub p: FinFunctor,
    pub p_prime: FinFunctor,
    pub f: FinFunctor,
    pub f_bar: FinFunctor,
    pub g: FinFunctor,
    pub g_bar: FinFunctor,
    pub basepoint: usize,
}

fn fiberwise(p: &FinFunctor, fiber_map: &FinFunctor) -> FinFunctor {
    // (b, c) ↦ (b, φ(c)) on a product B × C
    let prod = product(
        &[p.cod().clone(), fiber_map.dom().clone()],
        &Config::default(),
    )
    .unwrap();
    let q = compose_functors(fiber_map, &prod.projections[1]).unwrap();
    prod.pairing(&[prod.projections[0].clone(), q]).unwrap()
}

/// `p₁: I₁ × I₂ → I₁` with `F = id` and `G(b, c) = (b, 0)`: both sides finite.
pub fn varadarajan_finite() -> VaradarajanInput {
    let p = projection(
        StandardKind::ZigzagInterval(1),
        StandardKind::ZigzagInterval(2),
    );
    let i2 = standard(StandardKind::ZigzagInterval(2));
    let g = fiberwise(&p, &FinFunctor::constant(&i2, &i2, 0).unwrap());
    let id_b = FinFunctor::identity(p.cod());
    VaradarajanInput {
        f: FinFunctor::identity(p.dom()),
        f_bar: id_b.clone(),
        g,
        g_bar: id_b,
        p_prime: p.clone(),
        p,
        basepoint: 0,
    }
}

/// `p₁: I₁ × ℤ/2 → I₁` with `F = id` and `G` trivial on the fiber: both
/// sides infinite.
pub fn varadarajan_infinite() -> VaradarajanInput {
    let p = projection(
        StandardKind::ZigzagInterval(1),
        StandardKind::CyclicGroup(2),
    );
    let z2 = standard(StandardKind::CyclicGroup(2));
    let g = fiberwise(&p, &FinFunctor::constant(&z2, &z2, 0).unwrap());
    let id_b = FinFunctor::identity(p.cod());
    VaradarajanInput {
        f: FinFunctor::identity(p.dom()),
        f_bar: id_b.clone(),
        g,
        g_bar: id_b,
        p_prime: p.clone(),
        p,
        basepoint: 0,
    }
}

/// ℤ/4 → ℤ/2 with `F = id` and `G = (·3)`: the fiber functors agree while
/// the base is not contractible.
pub fn varadarajan_cyclic() -> VaradarajanInput {
    let p = z4_to_z2();
    let z4 = p.dom().clone();
    let g = functor(
        &z4,
        &z4,
        &[("*", "*")],
        &[("g^1", "g^3"), ("g^2", "g^2"), ("g^3", "g^1")],
    );
    let id_b = FinFunctor::identity(p.cod());
    VaradarajanInput {
        f: FinFunctor::identity(&z4),
        f_bar: id_b.clone(),
        g,
        g_bar: id_b,
        p_prime: p.clone(),
        p,
        basepoint: 0,
    }
}

/// Every shipped bundle that is a bi-fibration over a connected base.
pub fn bifibrations() -> Vec<(&'static str, FinFunctor)> {
    vec![
        ("z4_to_z2", z4_to_z2()),
        ("iso_fiber", iso_fiber()),
        ("adjoint_fibers", adjoint_fibers()),
        ("cyclic_zigzag8", cyclic_zigzag8()),
        (
            "product_i1_i2",
            projection(
                StandardKind::ZigzagInterval(1),
                StandardKind::ZigzagInterval(2),
            ),
        ),
        (
            "product_i1_z2",
            projection(
                StandardKind::ZigzagInterval(1),
                StandardKind::CyclicGroup(2),
            ),
        ),
        (
            "product_i2_i1",
            projection(
                StandardKind::ZigzagInterval(2),
                StandardKind::ZigzagInterval(1),
            ),
        ),
        ("point_over_point", point_over_point()),
    ]
}

/// Every shipped bundle.
pub fn bundles() -> Vec<(&'static str, FinFunctor)> {
    let mut out = bifibrations();
    out.insert(1, ("nosobre", nosobre()));
    out
}

pub fn varadarajan_inputs() -> Vec<(&'static str, VaradarajanInput)> {
    vec![
        ("varadarajan_finite", varadarajan_finite()),
        ("varadarajan_infinite", varadarajan_infinite()),
        ("varadarajan_cyclic", varadarajan_cyclic()),
    ]
}
