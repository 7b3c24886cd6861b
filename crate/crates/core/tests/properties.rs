//! Randomized properties checked against independent computations.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use essence_core::diagram::{Color, LinkDiagram, PlaneGraph, Smoothing};
use essence_core::fixtures::braid_closure;
use essence_core::forms::{brute_force_minimum, form_minimum, goeritz_matrix};
use essence_core::graphs::tait_graph;
use essence_core::plumbing::{random_tree, tree_count_inequality};
use essence_core::suite::brute_force_girth;

fn alternating(seed: u64, edges: usize) -> LinkDiagram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PlaneGraph::random_two_connected(&mut rng, edges, Smoothing::A)
        .to_diagram()
        .unwrap()
}

/// Cycles of the permutation a braid word induces on the strands it crosses.
fn closure_components(strands: usize, word: &[i32]) -> usize {
    let mut perm: Vec<usize> = (0..strands).collect();
    let mut seen = vec![true; strands];
    for &w in word {
        let i = w.unsigned_abs() as usize - 1;
        perm.swap(i, i + 1);
        seen[i] = false;
        seen[i + 1] = false;
    }
    let mut cycles = 0;
    for s in 0..strands {
        if !seen[s] {
            cycles += 1;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = perm[x];
            }
        }
    }
    cycles
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tait_girth_matches_exhaustive_search(seed in any::<u64>(), edges in 2usize..=14) {
        let d = alternating(seed, edges);
        for color in [Color::Black, Color::White] {
            let g = tait_graph(&d, color).unwrap();
            prop_assert_eq!(g.girth().length, brute_force_girth(&g));
        }
    }

    #[test]
    fn form_minimum_matches_box_search(seed in any::<u64>(), edges in 2usize..=8) {
        let d = alternating(seed, edges);
        for color in [Color::Black, Color::White] {
            let form = goeritz_matrix(&d, color).unwrap();
            let min = form_minimum(&form).unwrap();
            prop_assert_eq!(form.evaluate(&min.witness), min.value as i128);
            let bound = *min.coordinate_bounds.iter().max().unwrap_or(&1);
            if form.dim() > 0 && bound.pow(form.dim() as u32) <= 200_000 {
                prop_assert_eq!(brute_force_minimum(&form, bound), Some(min.value));
            }
        }
    }

    #[test]
    fn both_goeritz_forms_give_one_determinant(seed in any::<u64>(), edges in 2usize..=12) {
        let d = alternating(seed, edges);
        let black = goeritz_matrix(&d, Color::Black).unwrap().determinant();
        let white = goeritz_matrix(&d, Color::White).unwrap().determinant();
        prop_assert_eq!(black.magnitude(), white.magnitude());
    }

    #[test]
    fn pd_text_round_trips(seed in any::<u64>(), edges in 2usize..=12) {
        let d = alternating(seed, edges);
        let back = LinkDiagram::parse(&d.to_pd_text()).unwrap();
        prop_assert_eq!(back.pd_code(), d.pd_code());
        prop_assert_eq!(back.component_count(), d.component_count());
    }

    #[test]
    fn braid_closure_counts(
        strands in 2usize..=5,
        raw in proptest::collection::vec((1i32..=4, any::<bool>()), 1..=12),
    ) {
        let word: Vec<i32> = raw
            .iter()
            .map(|&(i, pos)| {
                let i = (i - 1) % (strands as i32 - 1) + 1;
                if pos { i } else { -i }
            })
            .collect();
        let d = braid_closure(strands, &word);
        prop_assert_eq!(d.crossing_count(), word.len());
        prop_assert_eq!(d.component_count(), closure_components(strands, &word));
    }

    #[test]
    fn pinch_trees_satisfy_degree_count(seed in any::<u64>(), edges in 2usize..=400) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tree = random_tree(&mut rng, edges);
        prop_assert_eq!(tree.len(), edges);
        let count = tree_count_inequality(&tree).unwrap();
        prop_assert!(count.holds, "{:?}", count);
    }
}
