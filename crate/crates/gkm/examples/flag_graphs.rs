//! GKM graphs of homogeneous spaces: vertices are minimal coset
//! representatives, edges join `w` to `w s_alpha` and carry the weight
//! `w(alpha)`.
//!
//! ```bash
//! cargo run -p gkm --example flag_graphs
//! ```

use gkm::graph::build_homogeneous_graph;
use gkm::weyl::{RootSystem, Series, SimpleSubset};

fn main() -> gkm::Result<()> {
    let cap = gkm::max_group_order();

    for (series, rank, k, name) in [
        (Series::A, 2, vec![], "Fl(C^3)"),
        (Series::A, 2, vec![1usize], "CP^2"),
        (Series::B, 2, vec![1], "Gr2+(R^5)"),
        (Series::D, 3, vec![1, 2], "Gr2+(R^6)"),
    ] {
        let rs = RootSystem::build(series, rank)?;
        let subset: SimpleSubset = k.into_iter().collect();
        let hg = build_homogeneous_graph(&rs, &subset, cap)?;
        let g = &hg.graph;
        println!(
            "{name}: {} vertices, valence {}, {} edges, simple = {}",
            g.vertex_count(),
            g.valence(0),
            g.undirected_reps().len(),
            !g.has_parallel_edges()
        );
        for &ei in &g.undirected_reps() {
            let e = &g.edges[ei];
            println!(
                "  {:6} -- {:6}  weight {}",
                g.labels[e.src], g.labels[e.dst], e.weight
            );
        }
        println!();
    }
    Ok(())
}
