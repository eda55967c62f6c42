//! Holonomy groups of homogeneous bundles and their action on fiber
//! classes: permute the fiber, twist the polynomial values. Averaging over
//! the group projects onto the invariant classes.
//!
//! ```bash
//! cargo run -p gkm --example holonomy
//! ```

use gkm::fibration::{
    act_on_class, average_class, build_homogeneous_fibration, holonomy_group,
};
use gkm::graph::{is_gkm_class, GKMClass};
use gkm::poly::Polynomial;
use gkm::weyl::{RootSystem, Series, SimpleSubset};

fn main() -> gkm::Result<()> {
    let cap = gkm::max_group_order();

    for (series, rank, k, name) in [
        (Series::A, 2, vec![1usize], "Fl(C^3) -> CP^2"),
        (Series::A, 3, vec![1, 2], "Fl(C^4) -> CP^3"),
        (Series::B, 3, vec![1, 2], "B3 flag -> Gr2+(R^7)"),
    ] {
        let rs = RootSystem::build(series, rank)?;
        let hf = build_homogeneous_fibration(
            &rs,
            &SimpleSubset::new(),
            &k.into_iter().collect(),
            cap,
        )?;
        let group = holonomy_group(&hf.fibration, 0, cap)?;
        println!(
            "{name}: fiber size {}, holonomy order {} ({} cycle generators)",
            hf.fibration.fiber_size(),
            group.order(),
            group.generators.len()
        );
    }

    // The order-two holonomy of the smallest bundle, acting on a class.
    println!();
    let rs = RootSystem::build(Series::A, 2)?;
    let hf =
        build_homogeneous_fibration(&rs, &SimpleSubset::new(), &[1].into_iter().collect(), cap)?;
    let group = holonomy_group(&hf.fibration, 0, cap)?;
    let fiber = &hf.fibration.fibers[0];
    let class = GKMClass {
        values: vec![Polynomial::zero(2), fiber.graph.edges[0].weight.as_poly()],
    };
    let w = group.elements.iter().find(|w| !w.is_identity()).unwrap();
    let moved = act_on_class(w, &class)?;
    let avg = average_class(&group, &class)?;
    println!("fiber class         {:?}", values(&class));
    println!("after the involution {:?}", values(&moved));
    println!("holonomy average     {:?}", values(&avg));
    println!(
        "average is invariant: {}, still a class: {}",
        act_on_class(w, &avg)? == avg,
        is_gkm_class(&fiber.graph, &avg)?.0
    );
    Ok(())
}

fn values(c: &GKMClass) -> Vec<String> {
    c.values.iter().map(|p| p.to_string()).collect()
}
