//! Root systems, Weyl groups and coset spaces of the classical series.
//!
//! ```bash
//! cargo run -p gkm --example root_systems
//! ```

use gkm::weyl::{
    coset_space, full_subset, generate_weyl_group, poincare_polynomial, RootSystem, Series,
    SimpleSubset,
};

fn main() -> gkm::Result<()> {
    let cap = gkm::max_group_order();

    for (series, rank) in [
        (Series::A, 2),
        (Series::A, 3),
        (Series::B, 2),
        (Series::C, 2),
        (Series::D, 3),
    ] {
        let rs = RootSystem::build(series, rank)?;
        let w = generate_weyl_group(&rs, cap)?;
        println!(
            "{series}{rank}: {} positive roots, Weyl group of order {}",
            rs.positive.len(),
            w.order()
        );
        for &s in &rs.simple {
            println!("  simple root  {}", rs.positive[s].form);
        }
    }

    // Cosets of a maximal-rank subgroup: the fixed points of a projective
    // plane and of an oriented two-plane Grassmannian.
    println!();
    for (series, rank, k, name) in [
        (Series::A, 2, vec![1usize], "CP^2"),
        (Series::B, 2, vec![1], "Gr2+(R^5)"),
        (Series::A, 3, vec![1, 2], "CP^3"),
    ] {
        let rs = RootSystem::build(series, rank)?;
        let subset: SimpleSubset = k.into_iter().collect();
        let cs = coset_space(&rs, &full_subset(rank), &subset, cap)?;
        let betti = poincare_polynomial(&cs);
        println!("{name}: {} fixed points, Betti numbers {betti:?}", cs.count());
        for i in 0..cs.count() {
            println!("  representative {:6}  length {}", cs.rep(i).label(), cs.lengths[i]);
        }
    }
    Ok(())
}
