use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use signed_ecc::{
    bit_flipping_decode, bsc_flip, encode, fundamental_cycle_matrix, generator_matrix, is_codeword,
    largest_component, sbm_signed, spanning_tree, syndrome, BitFlipConfig, BitVector,
    FundamentalCycleMatrix, SbmParams, Sign, SignedGraph, StopReason, WeightVector,
};

/// Star around node 5 first, then the outer ring and the chord (1, 3).
fn five_node_graph() -> (SignedGraph, FundamentalCycleMatrix) {
    let pairs = [(1, 5), (2, 5), (3, 5), (4, 5), (1, 2), (2, 3), (3, 4), (1, 4), (1, 3)];
    let g = SignedGraph::with_edge_order(pairs.iter().map(|&(u, v)| (u, v, Sign::Positive))).unwrap();
    let h = fundamental_cycle_matrix(&g, spanning_tree(&g, 4).unwrap());
    (g, h)
}

#[test]
fn five_node_parity_check_matrix() {
    let (g, h) = five_node_graph();
    assert_eq!(g.external_ids(), &[1, 2, 3, 4, 5]);
    assert_eq!(
        h.h.to_dense_text(),
        "1 1 0 0 1 0 0 0 0\n\
         0 1 1 0 0 1 0 0 0\n\
         0 0 1 1 0 0 1 0 0\n\
         1 0 0 1 0 0 0 1 0\n\
         1 0 1 0 0 0 0 0 1\n"
    );
}

#[test]
fn five_node_generator_matrix() {
    let (g, h) = five_node_graph();
    let gen = generator_matrix(&g);
    // Node 3 is an endpoint of the chord (1, 3), hence the final 1 in row 3.
    assert_eq!(
        gen.g.to_dense_text(),
        "1 0 0 0 1 0 0 1 1\n\
         0 1 0 0 1 1 0 0 0\n\
         0 0 1 0 0 1 1 0 1\n\
         0 0 0 1 0 0 1 1 0\n\
         1 1 1 1 0 0 0 0 0\n"
    );
    assert_eq!(h.h.mul_transpose(&gen.g).unwrap().nnz(), 0);
}

#[test]
fn five_node_encoding_and_syndromes() {
    let (g, h) = five_node_graph();
    let gen = generator_matrix(&g);
    let x = BitVector::from_positions(5, [0, 1]);
    let w = encode(&x, &gen).unwrap();
    // Nodes 1 and 2 against the rest: the four edges leaving {1, 2}.
    assert_eq!(w.bits().iter_ones().collect::<Vec<_>>(), vec![0, 1, 5, 7, 8]);
    assert!(is_codeword(&h, &w).unwrap());

    let mut chord = WeightVector::zeros(9);
    chord.flip(8);
    assert_eq!(syndrome(&h, &chord).unwrap().iter_ones().collect::<Vec<_>>(), vec![4]);
    let r = bit_flipping_decode(&g, &h, &chord, &BitFlipConfig::default()).unwrap();
    assert!(r.converged);
    assert_eq!(r.iterations, 1);
    assert_eq!(r.corrected, WeightVector::zeros(9));
    assert_eq!(r.stop, StopReason::Converged);
}

#[test]
fn bit_flipping_corrects_single_cycle_errors_on_sbm_instances() {
    let mut corrected = 0;
    let mut seed = 0;
    while corrected < 50 {
        seed += 1;
        let (g, truth) = sbm_signed(&SbmParams::from_degree(200, 6.0, 5.0, seed)).unwrap();
        let (g, clean, _) = largest_component(&g, &truth.clean_weights, &truth).unwrap();
        let h = FundamentalCycleMatrix::from_graph(&g, 0).unwrap();
        let columns = h.h.column_lists();
        let candidates: Vec<usize> = (0..g.edge_count()).filter(|&j| !columns[j].is_empty()).collect();
        if candidates.is_empty() {
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut w = clean.clone();
        w.flip(candidates[rng.gen_range(0..candidates.len())]);
        let r = bit_flipping_decode(&g, &h, &w, &BitFlipConfig::default()).unwrap();
        assert!(r.converged, "seed {seed}: {:?}", r.stop);
        assert!(is_codeword(&h, &r.corrected).unwrap());
        assert!(r.corrected.hamming(&w).unwrap() <= 1);
        corrected += 1;
    }
}

#[test]
fn sbm_mean_degree_is_close_to_target() {
    let mut total = 0.0;
    for seed in 0..20 {
        let params = SbmParams::from_degree(500, 6.0, 5.0, seed);
        let (g, _) = sbm_signed(&params).unwrap();
        // Degree over all n nodes, isolated ones included.
        total += 2.0 * g.edge_count() as f64 / 500.0;
    }
    let mean = total / 20.0;
    assert!((mean - 6.0).abs() <= 0.6, "mean degree {mean}");
}

#[test]
fn bsc_flip_count_is_binomial() {
    let m = 20_000;
    let p = 0.07;
    let w = WeightVector::zeros(m);
    let sigma = (m as f64 * p * (1.0 - p)).sqrt();
    for seed in 0..10 {
        let flips = bsc_flip(&w, p, seed).unwrap().bits().count_ones() as f64;
        assert!((flips - m as f64 * p).abs() <= 3.0 * sigma, "seed {seed}: {flips} flips");
    }
}
