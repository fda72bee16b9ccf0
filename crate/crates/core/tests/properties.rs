//! Property-based invariants over generated graphs and words.

mod common;

use hde::graph::WeightedGraph;
use hde::ratio::{parse_rat, rat, Rat};
use proptest::prelude::*;

/// Arbitrary small weighted graph: vertex count 2..=8, arbitrary edge subset
/// of the complete graph with small rational weights.
fn arb_graph() -> impl Strategy<Value = WeightedGraph> {
    (2usize..=8)
        .prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|a| ((a + 1)..n).map(move |b| (a, b)))
                .collect();
            let m = pairs.len();
            (
                Just(n),
                Just(pairs),
                proptest::collection::vec(proptest::bool::ANY, m),
                proptest::collection::vec((1i64..=9, 1i64..=4), m),
            )
        })
        .prop_map(|(n, pairs, included, weights)| {
            let labels = (0..n).map(|i| format!("v{i}")).collect();
            let edges = pairs
                .iter()
                .zip(included)
                .zip(weights)
                .filter(|((_, inc), _)| *inc)
                .map(|(((a, b), _), (num, den))| (*a, *b, rat(num, den)))
                .collect();
            WeightedGraph::new(labels, edges).expect("valid by construction")
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// h_G <= 2 always, and h_G = 0 exactly for disconnected graphs.
    #[test]
    fn cheeger_range_and_connectivity(g in arb_graph()) {
        if g.vertex_weights().iter().any(|w| w == &rat(0, 1)) {
            // Isolated vertices are rejected by the Cheeger scan.
            prop_assert!(g.cheeger_constant(20).is_err());
        } else {
            let (h, witness) = g.cheeger_constant(20).unwrap();
            prop_assert!(h <= rat(2, 1));
            prop_assert_eq!(h == rat(0, 1), !g.is_connected());
            prop_assert!(!witness.is_empty() && witness.len() < g.vertex_count());
        }
    }

    /// Cheeger inequality h_G >= 1 - λ₂ on connected graphs.
    #[test]
    fn cheeger_inequality(g in arb_graph()) {
        if g.is_connected() && g.vertex_count() >= 2 {
            let (h, _) = g.cheeger_constant(20).unwrap();
            let lambda2 = g.second_eigenvalue(4000).unwrap();
            prop_assert!(hde::ratio::rat_to_f64(&h) >= 1.0 - lambda2 - 1e-9);
        }
    }

    /// Weak covers generated from a base graph verify and never expand more
    /// than the base.
    #[test]
    fn weak_cover_domination(g in arb_graph(), seed in 0u64..1000) {
        if g.vertex_weights().iter().all(|w| w != &rat(0, 1)) {
            let mut rng = common::rng(seed);
            let (cover, proj) = common::random_weak_cover(&mut rng, &g);
            let verdict = hde::graph::check_weak_cover(&cover, &g, &proj);
            prop_assert!(verdict.ok, "{:?}", verdict.reason);
            if cover.vertex_weights().iter().all(|w| w != &rat(0, 1)) {
                let (h_base, _) = g.cheeger_constant(20).unwrap();
                let (h_cover, _) = cover.cheeger_constant(20).unwrap();
                prop_assert!(h_base >= h_cover);
            }
        }
    }

    /// Rational parsing round-trips through the fraction formatter.
    #[test]
    fn rational_roundtrip(num in -1000i64..1000, den in 1i64..1000) {
        let r = rat(num, den);
        let s = hde::ratio::fmt_frac(&r);
        prop_assert_eq!(parse_rat(&s).unwrap(), r);
    }

    /// rej is invariant under codeword translation and the weighted norm is
    /// a metric-compatible size on the triangle-complex codes.
    #[test]
    fn rej_translation_invariance(word_bits in proptest::collection::vec(0u64..3, 4), seed in 0u64..100) {
        let mut rng = common::rng(seed);
        let x = common::random_s2_system(&mut rng, 6);
        if x.k() == 2 && x.big_k() == 3 && x.vertex_count() == 4 {
            let code = hde::code::builders::triangle_complex_code(3, x).unwrap();
            let w = hde::code::Word(word_bits);
            let base = code.rej(&w).unwrap();
            let f = code.field();
            for c in code.codewords(1 << 16).unwrap() {
                let shifted = hde::code::Word(
                    (0..4).map(|v| f.add(w.0[v], c.0[v])).collect(),
                );
                prop_assert_eq!(code.rej(&shifted).unwrap(), base.clone());
            }
        }
    }
}

/// The exhaustive Cheeger witness is the lexicographically smallest minimizer.
#[test]
fn cheeger_witness_tiebreak() {
    // Two disjoint unit edges: every cut separating the components achieves 0;
    // the smallest witness is {0} only if it achieves the minimum, otherwise
    // the smallest zero-cut set. Here {0,1} is the first zero cut, but {0}
    // cuts one edge; the minimum 0 is achieved by {0,1} and {2,3}, and the
    // lexicographically smaller is {0,1}.
    let labels = (0..4).map(|i| format!("v{i}")).collect();
    let g = WeightedGraph::new(labels, vec![(0, 1, rat(1, 1)), (2, 3, rat(1, 1))]).unwrap();
    let (h, witness) = g.cheeger_constant(20).unwrap();
    assert_eq!(h, rat(0, 1));
    assert_eq!(witness, vec![0, 1]);
}

/// Exhaustive Cheeger agrees with a direct second evaluation route on a
/// weighted wheel (regression against subset-scan bookkeeping).
#[test]
fn cheeger_cross_check_on_wheel() {
    let labels: Vec<String> = (0..5).map(|i| format!("v{i}")).collect();
    let mut edges = vec![
        (0, 1, rat(2, 1)),
        (1, 2, rat(1, 2)),
        (2, 3, rat(3, 1)),
        (3, 4, rat(1, 1)),
        (1, 4, rat(5, 2)),
    ];
    edges.push((0, 2, rat(1, 3)));
    let g = WeightedGraph::new(labels, edges).unwrap();
    let (h, witness) = g.cheeger_constant(20).unwrap();
    // Second route: recompute the ratio of the reported witness.
    let m_u = g.set_weight(&witness);
    let rest: Vec<usize> = (0..5).filter(|v| !witness.contains(v)).collect();
    let m_rest = g.set_weight(&rest);
    let cut = g.boundary_weight(&witness, &rest).unwrap();
    assert_eq!(h, cut * g.total_weight() / (m_u * m_rest));
    let cmp: Rat = rat(2, 1);
    assert!(h <= cmp);
}
