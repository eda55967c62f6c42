//! Membership in the congruence ring: a vertex-indexed polynomial tuple is
//! a class exactly when its difference across every edge is divisible by
//! the edge weight. Graded dimensions match the Hilbert-series identity
//! with the Betti numbers.
//!
//! ```bash
//! cargo run -p gkm --example congruence_ring
//! ```

use gkm::graph::{
    build_homogeneous_graph, formal_dimension, graded_dimension, is_gkm_class, GKMClass, GKMGraph,
};
use gkm::poly::{LinearForm, Polynomial};
use gkm::weyl::{poincare_polynomial, RootSystem, Series, SimpleSubset};

fn main() -> gkm::Result<()> {
    let cap = gkm::max_group_order();

    // The sphere: two fixed points, one edge of weight alpha.
    let alpha = LinearForm::from_ints(&[2]);
    let sphere = GKMGraph::cp1(alpha.clone());
    let good = GKMClass {
        values: vec![Polynomial::zero(1), alpha.as_poly()],
    };
    let bad = GKMClass {
        values: vec![Polynomial::zero(1), Polynomial::one(1)],
    };
    println!("sphere, class (0, alpha): {}", verdict(&sphere, &good)?);
    println!("sphere, class (0, 1):     {}", verdict(&sphere, &bad)?);

    // The weight-orbit class w -> w(lambda) on the full flag graph.
    let rs = RootSystem::build(Series::A, 2)?;
    let flag = build_homogeneous_graph(&rs, &SimpleSubset::new(), cap)?;
    let orbit = flag.orbit_class(&Polynomial::var(2, 0));
    println!("flag graph, orbit class of x1: {}", verdict(&flag.graph, &orbit)?);
    for (v, value) in orbit.values.iter().enumerate() {
        println!("  c({:6}) = {}", flag.graph.labels[v], value);
    }

    // Graded dimensions versus the Betti-number count.
    println!();
    let betti = poincare_polynomial(&flag.cosets);
    println!("flag graph Betti numbers {betti:?}");
    for d in 0..=4 {
        let direct = graded_dimension(&flag.graph, d);
        let formal = formal_dimension(&betti, flag.graph.dim_t, d);
        println!("  degree {d}: dimension {direct}, Betti count {formal}");
    }
    Ok(())
}

fn verdict(g: &GKMGraph, c: &GKMClass) -> gkm::Result<String> {
    let (ok, violations) = is_gkm_class(g, c)?;
    Ok(if ok {
        "class".into()
    } else {
        format!(
            "not a class ({} failing edges, first remainder {})",
            violations.len(),
            violations[0].remainder
        )
    })
}
