use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rgiso_core::solver::{automorphism_count, canonical_form, contains_induced, count_induced_subsets, mcis_size, SearchBudget};
use rgiso_core::{gen_gnp, Seed};

fn induced(c: &mut Criterion) {
    let mut group = c.benchmark_group("contains_induced");
    group.sample_size(10);
    for &(n, big_n) in &[(10usize, 60usize), (14, 100), (20, 150)] {
        let h = gen_gnp(n, 0.5, Seed::new(1)).unwrap();
        let g = gen_gnp(big_n, 0.5, Seed::new(2)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(format!("{n}in{big_n}")), &(h, g), |b, (h, g)| {
            b.iter(|| contains_induced(black_box(h), black_box(g), SearchBudget::UNLIMITED))
        });
    }
    group.finish();

    let h = gen_gnp(5, 0.5, Seed::new(3)).unwrap();
    let g = gen_gnp(40, 0.5, Seed::new(4)).unwrap();
    c.bench_function("count_induced_subsets/5in40", |b| {
        b.iter(|| count_induced_subsets(black_box(&h), black_box(&g), SearchBudget::UNLIMITED))
    });
}

fn mcis(c: &mut Criterion) {
    let mut group = c.benchmark_group("mcis_size");
    group.sample_size(10);
    for &n in &[12usize, 16, 20] {
        let g1 = gen_gnp(n, 0.5, Seed::new(5)).unwrap();
        let g2 = gen_gnp(n, 0.5, Seed::new(6)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &(g1, g2), |b, (g1, g2)| {
            b.iter(|| mcis_size(black_box(g1), black_box(g2), SearchBudget::UNLIMITED))
        });
    }
    group.finish();
}

fn symmetry(c: &mut Criterion) {
    let g = gen_gnp(30, 0.5, Seed::new(7)).unwrap();
    c.bench_function("automorphism_count/30", |b| b.iter(|| automorphism_count(black_box(&g))));
    let h = gen_gnp(9, 0.5, Seed::new(8)).unwrap();
    c.bench_function("canonical_form/9", |b| b.iter(|| canonical_form(black_box(&h)).unwrap()));
}

criterion_group!(benches, induced, mcis, symmetry);
criterion_main!(benches);
