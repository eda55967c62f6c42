//! Homogeneous bundles and the balance verification: every twist must fix
//! the hyperplane of its edge weight, and transports must carry vertical
//! weights to their twisted images. A corrupted twist is caught on exactly
//! the edge it sits on.
//!
//! ```bash
//! cargo run -p gkm --example balanced_bundles
//! ```

use gkm::fibration::{build_homogeneous_fibration, check_balanced};
use gkm::linalg::Matrix;
use gkm::weyl::{RootSystem, Series, SimpleSubset};

fn main() -> gkm::Result<()> {
    let cap = gkm::max_group_order();

    for (series, rank, k, name) in [
        (Series::A, 2, vec![1usize], "Fl(C^3) -> CP^2"),
        (Series::B, 2, vec![1], "B2 flag -> Gr2+(R^5)"),
        (Series::C, 2, vec![1], "C2 flag -> CP^3"),
    ] {
        let rs = RootSystem::build(series, rank)?;
        let hf = build_homogeneous_fibration(
            &rs,
            &SimpleSubset::new(),
            &k.into_iter().collect(),
            cap,
        )?;
        let report = check_balanced(&hf.fibration);
        println!(
            "{name}: base {} vertices, fibers of size {}, balanced on all {} directed edges: {}",
            hf.fibration.base.vertex_count(),
            hf.fibration.fiber_size(),
            report.edges.len(),
            report.pass()
        );
    }

    // Negative control: overwrite one twist with the identity.
    let rs = RootSystem::build(Series::A, 2)?;
    let mut hf =
        build_homogeneous_fibration(&rs, &SimpleSubset::new(), &[1].into_iter().collect(), cap)?;
    hf.fibration.edge_data[2].twist = Matrix::identity(2);
    let report = check_balanced(&hf.fibration);
    println!(
        "corrupted twist on edge 2: pass = {}, failing edges {:?}",
        report.pass(),
        report.failing_edges()
    );
    Ok(())
}
