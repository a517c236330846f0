use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use signed_ecc::{
    bit_flipping_decode, bp_decode, bsc_flip, hamming_decode, largest_component, sbm_signed, Affinity,
    BitFlipConfig, BpConfig, FundamentalCycleMatrix, SbmParams, SearchConfig, SignedGraph, WeightVector,
};

fn instance(n: usize, p: f64) -> (SignedGraph, WeightVector) {
    let (g, truth) = sbm_signed(&SbmParams::from_degree(n, 6.0, 5.0, 1)).unwrap();
    let (g, clean, _) = largest_component(&g, &truth.clean_weights, &truth).unwrap();
    let noisy = bsc_flip(&clean, p, 2).unwrap();
    (g, noisy)
}

fn cycle_matrix(c: &mut Criterion) {
    let mut group = c.benchmark_group("cycle_matrix");
    for n in [500, 2000] {
        let (g, _) = instance(n, 0.0);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| FundamentalCycleMatrix::from_graph(g, 0).unwrap())
        });
    }
    group.finish();
}

fn decoders(c: &mut Criterion) {
    let mut group = c.benchmark_group("decode_n2000_p0.05");
    group.sample_size(10);
    let (g, w) = instance(2000, 0.05);
    let h = FundamentalCycleMatrix::from_graph(&g, 0).unwrap();
    group.bench_function("bit-flip", |b| {
        b.iter(|| bit_flipping_decode(&g, &h, &w, &BitFlipConfig::default()).unwrap())
    });
    group.bench_function("bp", |b| b.iter(|| bp_decode(&g, &h, &w, 0.05, &BpConfig::default()).unwrap()));
    for (name, affinity) in [("hamming-plain", Affinity::Plain), ("hamming-two-step", Affinity::TwoStep)] {
        group.bench_function(name, |b| {
            b.iter(|| hamming_decode(&g, &w, affinity, &SearchConfig::seeded(3)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, cycle_matrix, decoders);
criterion_main!(benches);
