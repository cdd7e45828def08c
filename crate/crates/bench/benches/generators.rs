use criterion::{black_box, criterion_group, criterion_main, Criterion};
use rgiso_core::{gen_gnm, gen_gnp, induced_subgraph, Seed};

fn generators(c: &mut Criterion) {
    c.bench_function("gen_gnp/150", |b| b.iter(|| gen_gnp(150, black_box(0.5), Seed::new(1)).unwrap()));
    c.bench_function("gen_gnm/150", |b| b.iter(|| gen_gnm(150, black_box(5000), Seed::new(1)).unwrap()));
    let g = gen_gnp(150, 0.5, Seed::new(2)).unwrap();
    let keep: Vec<usize> = (0..150).step_by(2).collect();
    c.bench_function("induced_subgraph/75of150", |b| b.iter(|| induced_subgraph(black_box(&g), &keep).unwrap()));
}

criterion_group!(benches, generators);
criterion_main!(benches);
