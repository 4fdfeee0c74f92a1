//! Regenerate the shipped verification corpus: small graphs under
//! `corpus/graphs/*.txt` plus exact size-count fixtures under
//! `corpus/counts/*.json`.
//!
//! Run from the workspace root:
//!
//! ```bash
//! cargo run --release -p kslice --example build_corpus
//! ```

use kslice::count::{size_counts, size_counts_brute, PinSet};
use kslice::graph::Graph;

fn corpus_graphs() -> Vec<(&'static str, Graph)> {
    let petersen = Graph::new(
        10,
        &[
            // outer 5-cycle, inner pentagram, spokes
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 0),
            (5, 7),
            (7, 9),
            (9, 6),
            (6, 8),
            (8, 5),
            (0, 5),
            (1, 6),
            (2, 7),
            (3, 8),
            (4, 9),
        ],
    )
    .unwrap();
    let grid33 = {
        let mut edges = Vec::new();
        for r in 0..3 {
            for c in 0..3 {
                let v = 3 * r + c;
                if c + 1 < 3 {
                    edges.push((v, v + 1));
                }
                if r + 1 < 3 {
                    edges.push((v, v + 3));
                }
            }
        }
        Graph::new(9, &edges).unwrap()
    };
    let k33 = Graph::new(6, &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)])
        .unwrap();
    let forest9 = Graph::new(9, &[(0, 1), (0, 2), (0, 3), (4, 5), (5, 6), (7, 8)]).unwrap();
    vec![
        ("p3", Graph::path(3)),
        ("p5", Graph::path(5)),
        ("p8", Graph::path(8)),
        ("c5", Graph::cycle(5)),
        ("c6", Graph::cycle(6)),
        ("c8", Graph::cycle(8)),
        ("k3", Graph::complete(3)),
        ("k4", Graph::complete(4)),
        ("empty2", Graph::empty(2)),
        ("empty4", Graph::empty(4)),
        ("empty6", Graph::empty(6)),
        ("star4", Graph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap()),
        ("two_triangles", Graph::complete(3).disjoint_union(&Graph::complete(3))),
        ("k3_isolated", Graph::complete(3).disjoint_union(&Graph::empty(1))),
        ("two_edges", Graph::path(2).disjoint_union(&Graph::path(2))),
        ("two_c5", Graph::cycle(5).disjoint_union(&Graph::cycle(5))),
        ("p4_p4", Graph::path(4).disjoint_union(&Graph::path(4))),
        ("grid33", grid33),
        ("petersen", petersen),
        ("k33", k33),
        ("forest9", forest9),
        ("random10", Graph::random_max_degree(10, 3, 42)),
        ("random12a", Graph::random_max_degree(12, 3, 7)),
        ("random12b", Graph::random_max_degree(12, 3, 13)),
    ]
}

/// The shipped corpus, loadable from tests and examples without touching
/// the filesystem.
pub fn main() {
    let root = std::path::Path::new("corpus");
    std::fs::create_dir_all(root.join("graphs")).unwrap();
    std::fs::create_dir_all(root.join("counts")).unwrap();
    for (name, g) in corpus_graphs() {
        std::fs::write(root.join(format!("graphs/{name}.txt")), g.to_edge_list()).unwrap();
        let counts = size_counts(&g, &PinSet::none()).unwrap();
        // cross-check against the brute route before freezing the fixture
        assert_eq!(counts, size_counts_brute(&g, &PinSet::none()).unwrap(), "{name}");
        std::fs::write(root.join(format!("counts/{name}.json")), counts.to_json()).unwrap();
        println!(
            "{name}: n = {}, edges = {}, independence number = {}",
            g.n(),
            g.edge_count(),
            counts.independence_number()
        );
    }
    println!("corpus written to {}", root.display());
}
