//! Benchmarks of the hot paths: expansion, peeling, the invariant
//! vector, the kernel computation, and the relation certificate.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

use linkhom::combinat::sigma_group;
use linkhom::dk::btf_kernel_rank;
use linkhom::kappa::kappa_coeffs;
use linkhom::links::{mu_vector, tau_n_sigma, StringLink};
use linkhom::magnus::magnus;
use linkhom::rfree::{normal_form, RFWord};
use linkhom::verify::random_word;

fn bench_magnus(c: &mut Criterion) {
    let mut group = c.benchmark_group("magnus");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for &len in &[30usize, 120, 480] {
        let w = random_word(&mut rng, 4, len);
        group.bench_with_input(BenchmarkId::new("square_free_d4", len), &w, |b, w| {
            b.iter(|| magnus(black_box(w), 4, true));
        });
    }
    let w = random_word(&mut rng, 4, 120);
    group.bench_function("plain_d4_len120", |b| {
        b.iter(|| magnus(black_box(&w), 4, false));
    });
    group.finish();
}

fn brunnian_word(n: usize, seed: u64) -> StringLink {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = StringLink::identity(n);
    for sigma in sigma_group(n - 1) {
        let e = rand::Rng::random_range(&mut rng, -5..=5);
        z = z.mul(&tau_n_sigma(n, &sigma).unwrap().pow(e)).unwrap();
    }
    z
}

fn bench_normal_form(c: &mut Criterion) {
    let mut group = c.benchmark_group("normal_form");
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for &n in &[4usize, 5] {
        let w = RFWord::new(random_word(&mut rng, n - 1, 30), n).unwrap();
        group.bench_with_input(BenchmarkId::new("random_len30", n), &w, |b, w| {
            b.iter(|| normal_form(black_box(w)).unwrap());
        });
    }
    group.finish();
}

fn bench_invariant_vectors(c: &mut Criterion) {
    let mut group = c.benchmark_group("invariant_vectors");
    for &n in &[4usize, 5] {
        let z = brunnian_word(n, 3);
        group.bench_with_input(BenchmarkId::new("mu_vector", n), &z, |b, z| {
            b.iter(|| mu_vector(black_box(z)).unwrap());
        });
        group.bench_with_input(BenchmarkId::new("kappa_coeffs", n), &z, |b, z| {
            b.iter(|| kappa_coeffs(black_box(z)).unwrap());
        });
    }
    group.finish();
}

fn bench_kernel_and_relations(c: &mut Criterion) {
    let mut group = c.benchmark_group("configuration_algebra");
    group.sample_size(10);
    for &n in &[4usize, 5] {
        group.bench_with_input(BenchmarkId::new("btf_kernel_rank", n), &n, |b, &n| {
            b.iter(|| btf_kernel_rank(black_box(n)).unwrap());
        });
        group.bench_with_input(BenchmarkId::new("check_4t", n), &n, |b, &n| {
            b.iter(|| linkhom::dk::check_4t(black_box(n)).unwrap());
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_magnus,
    bench_normal_form,
    bench_invariant_vectors,
    bench_kernel_and_relations
);
criterion_main!(benches);
