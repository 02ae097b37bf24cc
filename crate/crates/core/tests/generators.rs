use netrank_core::generators::{
    ensure_connected, enumerate_connected_nonisomorphic, gen_kg, mix_seed, KroneckerInitiator,
};
use netrank_core::{Graph, ModelConfig, ModelParams};
use proptest::prelude::*;

fn arb_params() -> impl Strategy<Value = ModelParams> {
    prop_oneof![
        (2usize..60, 0.0f64..=1.0).prop_map(|(n, p)| ModelParams::Er { n, p }),
        (3usize..60, 2usize..6).prop_filter_map("k < n", |(n, k)| {
            (k < n).then_some(ModelParams::Sf { n, k })
        }),
        (5usize..60, 1usize..4, 0.0f64..=1.0).prop_filter_map("k < n", |(n, half, p)| {
            let k = 2 * half;
            (k < n).then_some(ModelParams::Sw { n, k, p })
        }),
        (2usize..8, 1.05f64..3.0).prop_map(|(side, kappa)| ModelParams::Gr {
            n: side * side,
            kappa
        }),
        (
            2usize..60,
            0.05f64..=1.0,
            0.0f64..=1.0,
            1usize..12,
            any::<bool>()
        )
            .prop_map(|(n, p_c, p, c, covering)| ModelParams::Cs {
                n,
                p_c,
                p,
                c,
                covering
            }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn samples_are_simple_and_reproducible(params in arb_params(), seed in any::<u64>()) {
        let g = params.generate(seed).unwrap();
        prop_assert_eq!(g.n(), params.n());
        for v in 0..g.n() {
            prop_assert!(!g.has_edge(v, v));
        }
        let degree_sum: usize = g.degrees().iter().sum();
        prop_assert_eq!(degree_sum, 2 * g.m());
        prop_assert_eq!(params.generate(seed).unwrap(), g);
    }

    #[test]
    fn connected_samples_are_connected(params in arb_params(), seed in any::<u64>()) {
        let cfg = ModelConfig::new(params, seed);
        if let Ok(sample) = ensure_connected(&cfg, 20) {
            prop_assert!(sample.graph.is_connected());
            prop_assert!(sample.retries < 20);
            prop_assert_eq!(ensure_connected(&cfg, 20).unwrap(), sample);
        }
    }

    #[test]
    fn seed_mixing_is_order_sensitive(a in any::<u64>(), b in any::<u64>()) {
        prop_assume!(a != b);
        prop_assert_ne!(mix_seed(&[a, b]), mix_seed(&[b, a]));
        prop_assert_eq!(mix_seed(&[a, b]), mix_seed(&[a, b]));
    }
}

#[test]
fn enumeration_counts() {
    let counts: Vec<usize> = (1..=7)
        .map(|n| enumerate_connected_nonisomorphic(n).unwrap().len())
        .collect();
    assert_eq!(counts, [1, 1, 2, 6, 21, 112, 853]);
}

#[test]
fn kronecker_size_and_certain_initiator() {
    let full = KroneckerInitiator::new("full", [1.0, 1.0, 1.0, 1.0]);
    // self-loops are dropped, so probability one everywhere gives K_{2^k}
    assert_eq!(gen_kg(&full, 4, 3).unwrap(), Graph::complete(16));
    let sparse = KroneckerInitiator::new("sparse", [0.9, 0.5, 0.5, 0.1]);
    let g = gen_kg(&sparse, 6, 3).unwrap();
    assert_eq!(g.n(), 64);
    assert_eq!(g, gen_kg(&sparse, 6, 3).unwrap());
}

#[test]
fn connectivity_retries_are_bounded() {
    let cfg = ModelConfig::new(ModelParams::Er { n: 10, p: 0.0 }, 1);
    assert!(ensure_connected(&cfg, 5).is_err());
    assert!(ensure_connected(&cfg, 0).is_err());
}
