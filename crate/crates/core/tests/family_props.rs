mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use turan_core::canon::canonical_form_colored;
use turan_core::family::{contains_subgraph, disjoint_power, enumerate_power_with_bound};
use turan_core::{build_t_ab, contains_member, enumerate_power, Graph, RootedTree};

/// Subgraph containment by trying every injective map.
fn brute_force_contains(host: &Graph, pattern: &Graph) -> bool {
    let k = pattern.n();
    let mut image = Vec::with_capacity(k);
    fn go(host: &Graph, pattern: &Graph, image: &mut Vec<usize>) -> bool {
        let v = image.len();
        if v == pattern.n() {
            return true;
        }
        for c in 0..host.n() {
            if image.contains(&c) {
                continue;
            }
            if pattern.neighbors(v).iter().filter(|&&w| w < v).all(|&w| host.has_edge(image[w], c)) {
                image.push(c);
                if go(host, pattern, image) {
                    return true;
                }
                image.pop();
            }
        }
        false
    }
    go(host, pattern, &mut image)
}

#[test]
fn square_of_rooted_path_has_four_classes() {
    let t = RootedTree::path_with_rooted_ends(3);
    let members = enumerate_power(&t, 2).unwrap();
    let mut shapes: Vec<(usize, usize)> = members.iter().map(|m| (m.vertex_count(), m.edge_count())).collect();
    shapes.sort_unstable();
    assert_eq!(shapes, vec![(4, 5), (5, 5), (5, 6), (6, 6)]);
    let hexagon = members.iter().find(|m| m.vertex_count() == 6).unwrap();
    assert!((0..6).all(|v| hexagon.union_graph.degree(v) == 2));
    // The two roots of the hexagon are antipodal.
    let (x, y) = (hexagon.roots[0], hexagon.roots[1]);
    assert!(!hexagon.union_graph.has_edge(x, y));
    assert_eq!(hexagon.union_graph.neighbors(x).len(), 2);
    for m in &members {
        assert!(m.is_valid_for(&t));
    }
    // Pairwise non-isomorphic as root-coloured graphs.
    let forms: BTreeSet<Vec<u8>> = members
        .iter()
        .map(|m| canonical_form_colored(&m.union_graph, &m.root_colors(), 16).unwrap())
        .collect();
    assert_eq!(forms.len(), 4);
}

#[test]
fn members_match_brute_force_unions() {
    // Independent enumeration for T_{1,2}: the union of p distinct paths
    // through p distinct centres is always K_{2,p}.
    let t = build_t_ab(1, 2).unwrap();
    for p in 1..=4 {
        let members = enumerate_power(&t, p).unwrap();
        assert_eq!(members.len(), 1);
        assert!(brute_force_contains(&members[0].union_graph, &Graph::complete_bipartite(2, p)));
        assert_eq!(members[0].edge_count(), 2 * p);
    }
}

#[test]
fn disjoint_power_is_a_member() {
    for t in common::rooted_trees(3) {
        for p in 1..=3 {
            let single = disjoint_power(&t, p);
            let members = enumerate_power_with_bound(&t, p, 15).unwrap();
            let roots: Vec<usize> = (0..t.root_count()).collect();
            let colours = |g: &Graph, roots: &[usize]| -> Vec<u32> {
                let mut c = vec![0u32; g.n()];
                for (i, &r) in roots.iter().enumerate() {
                    c[r] = i as u32 + 1;
                }
                c
            };
            let target = canonical_form_colored(&single, &colours(&single, &roots), 64).unwrap();
            let found = members
                .iter()
                .any(|m| canonical_form_colored(&m.union_graph, &colours(&m.union_graph, &m.roots), 64).unwrap() == target);
            assert!(found, "{t:?} p = {p}");
            assert!(contains_member(&single, &t, p).is_some());
        }
    }
}

fn arb_tree() -> impl Strategy<Value = RootedTree> {
    let trees: Vec<RootedTree> = common::rooted_trees(3).into_iter().filter(|t| t.vertex_count() <= 4).collect();
    (0..trees.len()).prop_map(move |i| trees[i].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn contains_member_iff_some_member_embeds(t in arb_tree(), p in 1usize..3, n in 2usize..8, density in 0.1f64..0.9, seed in any::<u64>()) {
        let g = common::random_graph(n, density, &mut ChaCha8Rng::seed_from_u64(seed));
        let members = enumerate_power(&t, p).unwrap();
        let embeds = members.iter().any(|m| brute_force_contains(&g, &m.union_graph));
        let witness = contains_member(&g, &t, p);
        prop_assert_eq!(witness.is_some(), embeds);
        if let Some(w) = witness {
            prop_assert!(w.is_valid(&g, &t, p));
        }
        prop_assert_eq!(
            members.iter().any(|m| contains_subgraph(&g, &m.union_graph)),
            embeds
        );
    }

    #[test]
    fn membership_is_monotone_in_p(t in arb_tree(), n in 2usize..9, density in 0.1f64..0.9, seed in any::<u64>()) {
        let g = common::random_graph(n, density, &mut ChaCha8Rng::seed_from_u64(seed));
        let mut previous = true;
        for p in 1..5 {
            let now = contains_member(&g, &t, p).is_some();
            prop_assert!(previous || !now, "T^{} found without T^{}", p, p - 1);
            previous = now;
        }
    }

    #[test]
    fn subgraph_search_matches_brute_force(n in 1usize..7, k in 1usize..5, d1 in 0.0f64..1.0, d2 in 0.0f64..1.0, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let host = common::random_graph(n, d1, &mut rng);
        let pattern = common::random_graph(k, d2, &mut rng);
        prop_assert_eq!(contains_subgraph(&host, &pattern), brute_force_contains(&host, &pattern));
    }
}
