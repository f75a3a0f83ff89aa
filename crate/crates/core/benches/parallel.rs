use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};

use fincat::fibrations::classify_fibration;
use fincat::verify::{check_inequality_suite, random_suite_instance};
use fincat::*;

fn modes() -> [(&'static str, Config); 2] {
    [
        ("parallel", Config::default()),
        ("sequential", Config::sequential()),
    ]
}

fn suite(c: &mut Criterion) {
    let config = Config::default();
    let instances: Vec<_> = (0..16)
        .map(|s| random_suite_instance(s, 3, 2, &config).unwrap())
        .collect();
    let mut group = c.benchmark_group("inequality_suite");
    group.sample_size(10);
    for (name, cfg) in modes() {
        group.bench_function(name, |b| {
            b.iter(|| check_inequality_suite(black_box(&instances), &cfg))
        });
    }
    group.finish();
}

fn complexity(c: &mut Criterion) {
    let cats: Vec<Arc<FinCategory>> = [
        StandardKind::ZigzagInterval(2),
        StandardKind::DirectedChain(2),
        StandardKind::CyclicGroup(3),
    ]
    .into_iter()
    .map(fixtures::standard)
    .collect();
    let mut group = c.benchmark_group("ctc");
    for (name, cfg) in modes() {
        group.bench_function(name, |b| {
            b.iter(|| {
                for cat in &cats {
                    black_box(ctc_direct(cat, &cfg).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn lusternik(c: &mut Criterion) {
    let p = fixtures::cyclic_zigzag8();
    let e = p.dom().clone();
    let mut group = c.benchmark_group("ccat_zigzag8");
    for (name, cfg) in modes() {
        group.bench_function(name, |b| {
            b.iter(|| ccat_direct(black_box(&e), &cfg).unwrap())
        });
    }
    group.finish();
}

fn fibration(c: &mut Criterion) {
    let bundles = fixtures::bundles();
    let mut group = c.benchmark_group("classify_fibration");
    for (name, cfg) in modes() {
        group.bench_function(name, |b| {
            b.iter(|| {
                for (_, p) in &bundles {
                    black_box(classify_fibration(p, &cfg));
                }
            })
        });
    }
    group.finish();
}

criterion_group!(benches, suite, complexity, lusternik, fibration);
criterion_main!(benches);
