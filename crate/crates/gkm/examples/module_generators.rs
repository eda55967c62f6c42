//! Graded module generators of a congruence ring, extracted greedily degree
//! by degree. Generator multiplicities reproduce the Betti numbers.
//!
//! ```bash
//! cargo run -p gkm --example module_generators
//! ```

use gkm::graph::{build_homogeneous_graph, module_generators, GKMGraph};
use gkm::poly::LinearForm;
use gkm::weyl::{RootSystem, Series, SimpleSubset};

fn main() -> gkm::Result<()> {
    let cap = gkm::max_group_order();

    let sphere = GKMGraph::cp1(LinearForm::from_ints(&[2]));
    show("sphere", &sphere, 2)?;

    let rs = RootSystem::build(Series::A, 2)?;
    let cp2 = build_homogeneous_graph(&rs, &[1].into_iter().collect(), cap)?;
    show("CP^2", &cp2.graph, 3)?;

    let flag = build_homogeneous_graph(&rs, &SimpleSubset::new(), cap)?;
    show("Fl(C^3)", &flag.graph, 3)?;

    // The even quadric needs two generators in the middle degree.
    let d3 = RootSystem::build(Series::D, 3)?;
    let quadric = build_homogeneous_graph(&d3, &[1, 2].into_iter().collect(), cap)?;
    show("Gr2+(R^6)", &quadric.graph, 4)?;
    Ok(())
}

fn show(name: &str, g: &GKMGraph, max_degree: u32) -> gkm::Result<()> {
    let basis = module_generators(g, max_degree, None)?;
    println!("{name}:");
    for (d, dim, new) in &basis.report.rows {
        println!("  degree {d}: dimension {dim:3}, new generators {new}");
    }
    for (gen, d) in &basis.generators {
        let values: Vec<String> = gen.values.iter().map(|p| p.to_string()).collect();
        println!("  generator (degree {d}): [{}]", values.join(", "));
    }
    println!();
    Ok(())
}
