use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use symcirc::cfi::{cfi_even_odd, ck_equivalent, SimpleGraph};
use symcirc::immanant::{synth_immanant, synth_symmetric_determinant, ImmanantCaps, IntegerPartition};
use symcirc::oracle::brute_hom;
use symcirc::rational::q;
use symcirc::synth::{synth_hom, synth_sub_moebius};
use symcirc::{BipartitePattern, WeightedHost};

fn hom_synthesis(c: &mut Criterion) {
    let mut group = c.benchmark_group("synth_hom");
    for len in [3, 5, 7] {
        let f = BipartitePattern::path(len);
        group.bench_with_input(BenchmarkId::new("path", len), &f, |b, f| b.iter(|| synth_hom(black_box(f), None, 5, 5).unwrap()));
    }
    let c6 = BipartitePattern::cycle(3);
    group.bench_function("cycle6", |b| b.iter(|| synth_hom(black_box(&c6), None, 5, 5).unwrap()));
    group.finish();
}

fn evaluation(c: &mut Criterion) {
    let f = BipartitePattern::cycle(3);
    let circuit = synth_hom(&f, None, 5, 5).unwrap().circuit;
    let g = WeightedHost::from_fn(5, 5, |i, j| q(((i * 7 + j * 3) % 5) as i64 - 2));
    let mut group = c.benchmark_group("hom_cycle6_5x5");
    group.bench_function("circuit", |b| b.iter(|| circuit.evaluate(black_box(&g)).unwrap()));
    group.bench_function("brute", |b| b.iter(|| brute_hom(&f, black_box(&g)).unwrap()));
    group.finish();
}

fn subgraph(c: &mut Criterion) {
    let f = BipartitePattern::path(4);
    c.bench_function("synth_sub_moebius_p4_4x4", |b| b.iter(|| synth_sub_moebius(black_box(&f), 4, 4).unwrap()));
}

fn immanants(c: &mut Criterion) {
    let mut group = c.benchmark_group("immanant");
    group.sample_size(10);
    for n in [3, 4, 5] {
        group.bench_with_input(BenchmarkId::new("determinant", n), &n, |b, &n| b.iter(|| synth_symmetric_determinant(n).unwrap()));
    }
    let lambda = IntegerPartition::parse("3,1").unwrap();
    group.bench_function("synth_3_1", |b| b.iter(|| synth_immanant(black_box(&lambda), ImmanantCaps::default(), 1).unwrap()));
    group.finish();
}

fn weisfeiler_leman(c: &mut Criterion) {
    let (g0, g1) = cfi_even_odd(&SimpleGraph::complete_bipartite(3, 3)).unwrap();
    let mut group = c.benchmark_group("wl_cfi_k33");
    group.sample_size(10);
    group.bench_function("c2", |b| b.iter(|| ck_equivalent(&g0.graph, &g1.graph, 2)));
    group.bench_function("c3", |b| b.iter(|| ck_equivalent(&g0.graph, &g1.graph, 3)));
    group.finish();
}

criterion_group!(benches, hom_synthesis, evaluation, subgraph, immanants, weisfeiler_leman);
criterion_main!(benches);
