use chordtest::coloring::{encode_k_colorability, has_proper_coloring};
use chordtest::experiment::{clopper_pearson, random_bipartite, random_chordal, random_gnp, GeneratorSpec};
use chordtest::m2::{elimination_sequence, interval_representation, peel_to_core, BipartiteView};
use chordtest::oracles::{
    c4_packing, exact_min_conflicts, find_induced_long_cycle, find_m2, is_chordal, is_induced_cycle,
    is_perfect_elimination_order, perfect_elimination_order, verify_c4_packing,
};
use chordtest::pipeline::chordality_tester;
use chordtest::tree::{canonical_key, clique_tree_representation, minimalize, DiscreteTree, SubtreeFamily};
use chordtest::{Graph, Guards, VertexSet};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn random_chordal_is_chordal(n in 1usize..25, p in 0.0f64..1.0, seed in any::<u64>()) {
        let g = random_chordal(n, p, &mut rng(seed));
        let order = perfect_elimination_order(&g);
        prop_assert!(order.is_some());
        prop_assert!(is_perfect_elimination_order(&g, &order.unwrap()));
    }

    #[test]
    fn chordality_matches_cycle_search(n in 1usize..10, p in 0.0f64..1.0, seed in any::<u64>()) {
        let g = random_gnp(n, p, &mut rng(seed));
        match find_induced_long_cycle(&g) {
            Some(c) => {
                prop_assert!(!is_chordal(&g));
                prop_assert!(c.len() >= 4 && is_induced_cycle(&g, &c));
            }
            None => prop_assert!(is_chordal(&g)),
        }
    }

    #[test]
    fn edge_list_round_trip(n in 1usize..30, p in 0.0f64..1.0, seed in any::<u64>()) {
        let g = random_gnp(n, p, &mut rng(seed));
        prop_assert_eq!(Graph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
    }

    #[test]
    fn clique_tree_round_trip(n in 1usize..20, p in 0.0f64..1.0, seed in any::<u64>()) {
        let g = random_chordal(n, p, &mut rng(seed));
        let f = clique_tree_representation(&g).unwrap();
        prop_assert_eq!(f.intersection_graph(), g.clone());
        let m = minimalize(&f);
        prop_assert!(m.is_minimal());
        prop_assert_eq!(m.intersection_graph(), g);
        prop_assert_eq!(SubtreeFamily::from_text(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn canonical_key_ignores_node_names(n in 1usize..10, p in 0.0f64..1.0, seed in any::<u64>(), perm_seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let g = random_chordal(n, p, &mut rng(seed));
        let f = minimalize(&clique_tree_representation(&g).unwrap());
        let t = f.tree();
        let mut perm: Vec<usize> = t.nodes().collect();
        perm.shuffle(&mut rng(perm_seed));
        let edges: Vec<(usize, usize)> = t.edges().map(|(a, b)| (perm[a], perm[b])).collect();
        let tree = DiscreteTree::new(t.node_count(), &edges).unwrap();
        let sets = f
            .subtrees()
            .iter()
            .map(|s| VertexSet::from_iter(t.node_count(), s.iter().map(|x| perm[x])))
            .collect();
        let g2 = SubtreeFamily::new(tree, sets).unwrap();
        prop_assert_eq!(canonical_key(&g2), canonical_key(&f));
    }

    #[test]
    fn chordality_tester_is_one_sided(n in 4usize..40, p in 0.0f64..1.0, m in 1usize..40, seed in any::<u64>()) {
        let g = random_chordal(n, p, &mut rng(seed));
        let out = chordality_tester(&g, 0.1, m, &mut rng(seed ^ 1)).unwrap();
        prop_assert!(!out.rejected());
        prop_assert_eq!(out.sample.len(), m.min(n));
    }

    #[test]
    fn tester_witnesses_are_induced_cycles(n in 4usize..30, p in 0.0f64..1.0, m in 4usize..30, seed in any::<u64>()) {
        let g = random_gnp(n, p, &mut rng(seed));
        let out = chordality_tester(&g, 0.1, m, &mut rng(seed ^ 1)).unwrap();
        if let Some(c) = out.witness {
            prop_assert!(c.len() >= 4 && is_induced_cycle(&g, &c));
        }
    }

    #[test]
    fn m2_characterizations_agree(left in 1usize..6, right in 1usize..6, p in 0.0f64..1.0, seed in any::<u64>()) {
        let g = random_bipartite(left, right, p, &mut rng(seed));
        let view = BipartiteView::new(
            &g,
            VertexSet::from_iter(left + right, 0..left),
            VertexSet::from_iter(left + right, left..left + right),
        )
        .unwrap();
        let free = find_m2(&view).unwrap().is_none();
        prop_assert_eq!(peel_to_core(&view, 0).core.is_empty(), free);
        let seq = elimination_sequence(&view);
        prop_assert_eq!(seq.is_some(), free);
        if let Some(seq) = seq {
            prop_assert!(seq.is_valid_for(&view));
            prop_assert!(interval_representation(&seq).represents(&view));
        }
    }

    #[test]
    fn c4_packings_are_valid(n in 4usize..30, p in 0.0f64..1.0, seed in any::<u64>()) {
        let g = random_gnp(n, p, &mut rng(seed));
        let packing = c4_packing(&g);
        prop_assert!(verify_c4_packing(&g, &packing));
        if is_chordal(&g) {
            prop_assert_eq!(packing.value(), 0);
        }
    }

    #[test]
    fn colorability_encoding_agrees(n in 1usize..8, k in 1usize..4, p in 0.0f64..1.0, seed in any::<u64>()) {
        let g = random_gnp(n, p, &mut rng(seed));
        let inst = encode_k_colorability(&g, k).unwrap();
        let proper = has_proper_coloring(&inst, 1_000_000).unwrap();
        let min = exact_min_conflicts(&inst, &Guards::default()).unwrap();
        prop_assert_eq!(proper, min == 0);
    }

    #[test]
    fn generator_specs_round_trip(n in 1usize..500, p in 0.0f64..1.0) {
        let spec: GeneratorSpec = format!("random-chordal:n={n},p={p}").parse().unwrap();
        prop_assert_eq!(&spec, &GeneratorSpec::RandomChordal { n, p });
        let json = serde_json::to_string(&spec).unwrap();
        prop_assert_eq!(serde_json::from_str::<GeneratorSpec>(&json).unwrap(), spec);
    }

    #[test]
    fn clopper_pearson_brackets_the_estimate(trials in 1usize..500, frac in 0.0f64..=1.0) {
        let k = ((trials as f64) * frac).round() as usize;
        let (lo, hi) = clopper_pearson(k, trials, 0.95);
        let est = k as f64 / trials as f64;
        prop_assert!(0.0 <= lo && lo <= est && est <= hi && hi <= 1.0);
    }
}
