//! Iterated towers of flag bundles and their invariant module bases.
//!
//! The flag variety of a rank-`n` classical group fibers over a minimal
//! coadjoint orbit (a projective space in types A and C, an oriented
//! two-plane Grassmannian in types B and D) with fiber the flag variety of
//! the rank-`n-1` subgroup. Iterating all the way down gives a tower whose
//! stages are realized here inside one root system as parabolic subgraphs.
//! Climbing back up, an invariant basis of each fiber is transported over
//! the stage and multiplied by pullbacks of base classes, producing a full
//! module basis of the top flag graph consisting of holonomy-invariant
//! classes.
//!
//! In types A, B and C the base classes are the powers of the weight-orbit
//! class of a stabilized generic weight. The even Grassmannian of type D
//! carries an extra middle-degree class that no power of a degree-two class
//! reaches (its Betti numbers are 1,1,2,1,1), so powers cannot form a module
//! basis there; those stages use graded module generators chosen to vanish
//! at the base point instead, which keeps their pullbacks invariant.

use std::fmt::Write as _;

use crate::error::{invalid, GkmError, Result};
use crate::fibration::{
    act_on_class, build_levi_fibration, holonomy_group, independence_certificate, span_report,
    tensor_classes, SpanRow,
};
use crate::graph::{is_gkm_class, module_generators, GKMClass, HomogeneousGraph};
use crate::poly::{rat, LinearForm};
use crate::weyl::{poincare_polynomial, RootSystem, Series, SimpleSubset};

/// One stage of a tower: the flag graph of the `ambient` parabolic fibered
/// over its quotient by the subgroup of the simple subset `k`.
#[derive(Clone, Debug)]
pub struct TowerStage {
    pub ambient: SimpleSubset,
    pub k: SimpleSubset,
}

#[derive(Clone, Debug)]
pub struct TowerSpec {
    pub series: Series,
    pub rank: usize,
    /// Bottom-up; the last stage has the full simple set as ambient.
    pub stages: Vec<TowerStage>,
}

impl TowerSpec {
    /// Human-readable name of the stage base space.
    pub fn base_label(&self, stage: usize) -> String {
        let s = self.stages[stage].ambient.len();
        let mut out = String::new();
        match self.series {
            Series::A => write!(out, "CP^{s}").unwrap(),
            Series::B => write!(out, "Gr2+(R^{})", 2 * s + 1).unwrap(),
            Series::C => write!(out, "CP^{}", 2 * s - 1).unwrap(),
            Series::D => {
                if self.stages[stage].k.is_empty() {
                    out.push_str("CP^1 x CP^1");
                } else {
                    write!(out, "Gr2+(R^{})", 2 * s).unwrap();
                }
            }
        }
        out
    }
}

/// The stage list of the classical tower: each stage drops the first simple
/// root of its ambient set, so bases are minimal coadjoint orbits and
/// fibers are the next-lower flag graphs. Type D stops at the reducible
/// rank-two subsystem, whose flag graph is a product of two spheres.
pub fn build_tower(series: Series, rank: usize) -> Result<TowerSpec> {
    if rank < 1 {
        return Err(invalid("rank must be at least 1"));
    }
    if series == Series::D && rank < 3 {
        return Err(invalid("series D towers need rank at least 3"));
    }
    let mut stages = Vec::new();
    let bottom_size = if series == Series::D { 2 } else { 1 };
    for size in bottom_size..=rank {
        let ambient: SimpleSubset = (rank - size..rank).collect();
        let k: SimpleSubset = if size == bottom_size {
            SimpleSubset::new()
        } else {
            (rank - size + 1..rank).collect()
        };
        stages.push(TowerStage { ambient, k });
    }
    Ok(TowerSpec {
        series,
        rank,
        stages,
    })
}

// ---------------------------------------------------------------------------
// Base classes
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct SymplecticReport {
    pub class_count: usize,
    /// The vertex values are pairwise distinct forms, which is exactly the
    /// nonvanishing of the Vandermonde determinant of the power classes.
    pub determinant_nonzero: bool,
    pub rows: Vec<SpanRow>,
}

impl SymplecticReport {
    pub fn pass(&self) -> bool {
        self.determinant_nonzero && self.rows.iter().all(|r| r.pass())
    }
}

/// Powers of the weight-orbit class of `lambda`: the degree-`j` class has
/// value `(w lambda)^j` at the vertex `w`, for `j` up to `count - 1`.
/// Every power is checked to be a class; the report records the
/// distinctness of the vertex values (the exact determinant criterion) and
/// whether the powers span every graded piece up to `max_degree`.
pub fn symplectic_power_classes(
    base: &HomogeneousGraph,
    lambda: &LinearForm,
    count: usize,
    max_degree: u32,
) -> Result<(Vec<(GKMClass, u32)>, SymplecticReport)> {
    let orbit = base.orbit_class(&lambda.as_poly());
    let (valid, _) = is_gkm_class(&base.graph, &orbit)?;
    if !valid {
        return Err(GkmError::VerificationFailure(
            "the weight-orbit class violates an edge congruence; the weight is not stabilized"
                .into(),
        ));
    }
    let values: Vec<LinearForm> = (0..base.graph.vertex_count())
        .map(|v| base.rep(v).apply_form(lambda))
        .collect();
    let mut distinct = true;
    'outer: for i in 0..values.len() {
        for j in (i + 1)..values.len() {
            if values[i] == values[j] {
                distinct = false;
                break 'outer;
            }
        }
    }
    if !distinct {
        return Err(GkmError::VerificationFailure(
            "vertex values of the weight-orbit class coincide; the determinant vanishes".into(),
        ));
    }
    let classes: Vec<(GKMClass, u32)> = (0..count as u32).map(|j| (orbit.pow(j), j)).collect();
    for (c, _) in &classes {
        let (ok, _) = is_gkm_class(&base.graph, c)?;
        debug_assert!(ok, "powers of classes are classes");
    }
    let rows = span_report(&base.graph, &classes, max_degree);
    let report = SymplecticReport {
        class_count: classes.len(),
        determinant_nonzero: distinct,
        rows,
    };
    Ok((classes, report))
}

/// The stabilized weight used for a stage base: the coordinate of the
/// ambient block's first variable. It pairs to zero with every simple
/// coroot of the ambient set except the first, so the subgroup dropped by
/// the stage fixes it, and its orbit values are pairwise distinct.
pub fn stage_weight(rs: &RootSystem, ambient: &SimpleSubset) -> LinearForm {
    let a = *ambient.iter().next().expect("ambient set is nonempty");
    let mut coeffs = vec![rat(0, 1); rs.rank];
    coeffs[a] = rat(1, 1);
    LinearForm::new(coeffs)
}

/// Module basis of the reducible rank-two bottom of a type-D tower: products
/// of the two half-sum weights' orbit classes, one per sphere factor.
fn d_series_bottom_basis(bottom: &HomogeneousGraph) -> Vec<(GKMClass, u32)> {
    let n = bottom.rs.rank;
    let a = n - 2;
    let mut w1 = vec![rat(0, 1); n];
    w1[a] = rat(1, 2);
    w1[a + 1] = rat(-1, 2);
    let mut w2 = vec![rat(0, 1); n];
    w2[a] = rat(1, 2);
    w2[a + 1] = rat(1, 2);
    let omega1 = LinearForm::new(w1).as_poly();
    let omega2 = LinearForm::new(w2).as_poly();
    let mut out = Vec::with_capacity(4);
    for (j1, j2) in [(0u32, 0u32), (1, 0), (0, 1), (1, 1)] {
        let p = omega1.pow(j1).mul(&omega2.pow(j2));
        out.push((bottom.orbit_class(&p), j1 + j2));
    }
    out
}

// ---------------------------------------------------------------------------
// The iterated basis
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct StageReport {
    pub stage: usize,
    pub base_label: String,
    pub base_vertices: usize,
    pub fiber_vertices: usize,
    pub holonomy_order: usize,
    pub class_count: usize,
}

#[derive(Clone, Debug)]
pub struct TowerReport {
    pub stages: Vec<StageReport>,
    /// Spanning of the top flag graph, degree by degree.
    pub spans: Vec<SpanRow>,
    /// Every output class restricts to a holonomy-invariant class on the
    /// base-point fiber of the top stage.
    pub invariant: bool,
    pub independent: bool,
    pub degree_histogram: Vec<usize>,
    /// Length histogram of the full Weyl group.
    pub expected_histogram: Vec<usize>,
}

impl TowerReport {
    pub fn pass(&self) -> bool {
        self.invariant
            && self.independent
            && self.degree_histogram == self.expected_histogram
            && self.spans.iter().all(|r| r.pass())
    }
}

/// Climb the tower bottom-up: transport the previous stage's invariant
/// basis through the stage bundle and multiply by pullbacks of the stage's
/// base classes. The result is a module basis of the top flag graph, one
/// class per Weyl group element, verified invariant and spanning.
pub fn iterated_invariant_basis(
    rs: &RootSystem,
    tower: &TowerSpec,
    max_degree: u32,
    cap: usize,
) -> Result<(Vec<(GKMClass, u32)>, TowerReport)> {
    if tower.rank != rs.rank || tower.series != rs.series {
        return Err(invalid("tower does not belong to this root system"));
    }
    let mut stage_reports = Vec::new();

    // Bottom stage: the basis lives on the bottom flag graph directly.
    let bottom_stage = &tower.stages[0];
    let mut current =
        crate::graph::build_levi_graph(rs, &bottom_stage.ambient, &SimpleSubset::new(), cap)?;
    let mut basis: Vec<(GKMClass, u32)> = match tower.series {
        Series::D => {
            let b = d_series_bottom_basis(&current);
            for (c, _) in &b {
                if !is_gkm_class(&current.graph, c)?.0 {
                    return Err(GkmError::InternalInconsistency(
                        "stage 1: bottom class violates a congruence".into(),
                    ));
                }
            }
            let rows = span_report(&current.graph, &b, max_degree);
            if !rows.iter().all(|r| r.pass()) {
                return Err(GkmError::VerificationFailure(
                    "stage 1: bottom basis fails to span".into(),
                ));
            }
            b
        }
        _ => {
            let lambda = stage_weight(rs, &bottom_stage.ambient);
            let count = current.graph.vertex_count();
            let (classes, report) = symplectic_power_classes(&current, &lambda, count, max_degree)?;
            if !report.pass() {
                return Err(GkmError::VerificationFailure(
                    "stage 1: power classes fail to span the bottom".into(),
                ));
            }
            classes
        }
    };
    stage_reports.push(StageReport {
        stage: 1,
        base_label: tower.base_label(0),
        base_vertices: current.graph.vertex_count(),
        fiber_vertices: 1,
        holonomy_order: 1,
        class_count: basis.len(),
    });

    let mut top_invariance: Option<bool> = None;
    let mut top_independent = independence_certificate(&current.graph, &basis);

    for (si, stage) in tower.stages.iter().enumerate().skip(1) {
        let stage_no = si + 1;
        let err = |msg: String| GkmError::VerificationFailure(format!("stage {stage_no}: {msg}"));
        if stage.k != tower.stages[si - 1].ambient {
            return Err(invalid(format!(
                "stage {stage_no}: isotropy must equal the previous ambient set"
            )));
        }
        let hf = build_levi_fibration(rs, &stage.ambient, &SimpleSubset::new(), &stage.k, cap)?;
        let group = holonomy_group(&hf.fibration, 0, cap)?;

        // Re-express the previous basis on the base-point fiber by matching
        // group elements.
        let fiber = &hf.fibration.fibers[0];
        let prev_index: Vec<usize> = fiber
            .total_ids
            .iter()
            .map(|&t| {
                current
                    .cosets
                    .group
                    .element_index(&hf.total.rep(t).matrix)
                    .expect("fiber vertices are elements of the previous group")
            })
            .collect();
        let fiber_basis: Vec<(GKMClass, u32)> = basis
            .iter()
            .map(|(c, d)| {
                (
                    GKMClass {
                        values: prev_index.iter().map(|&i| c.values[i].clone()).collect(),
                    },
                    *d,
                )
            })
            .collect();
        for (c, d) in &fiber_basis {
            if !is_gkm_class(&fiber.graph, c)?.0 {
                return Err(err(format!("degree-{d} fiber class violates a congruence")));
            }
            for w in &group.elements {
                if act_on_class(w, c)? != *c {
                    return Err(err(format!(
                        "degree-{d} fiber class is not holonomy invariant"
                    )));
                }
            }
        }

        // Base classes of the stage.
        let base_classes: Vec<(GKMClass, u32)> = match tower.series {
            Series::D => {
                let top = *hf.base.cosets.lengths.iter().max().unwrap_or(&0) as u32;
                let gens = module_generators(&hf.base.graph, top, Some(0))?;
                gens.generators
            }
            _ => {
                let lambda = stage_weight(rs, &stage.ambient);
                let count = hf.base.graph.vertex_count();
                let (classes, report) =
                    symplectic_power_classes(&hf.base, &lambda, count, max_degree)?;
                if !report.pass() {
                    return Err(err("base power classes fail to span".into()));
                }
                classes
            }
        };

        basis = tensor_classes(&hf.fibration, &group, &fiber_basis, &base_classes)?;
        stage_reports.push(StageReport {
            stage: stage_no,
            base_label: tower.base_label(si),
            base_vertices: hf.base.graph.vertex_count(),
            fiber_vertices: hf.fibration.fiber_size(),
            holonomy_order: group.order(),
            class_count: basis.len(),
        });

        // Invariance of the output classes, restricted to the fiber.
        let mut invariant = true;
        'inv: for (c, _) in &basis {
            let local = GKMClass {
                values: fiber
                    .total_ids
                    .iter()
                    .map(|&t| c.values[t].clone())
                    .collect(),
            };
            for w in &group.elements {
                if act_on_class(w, &local)? != local {
                    invariant = false;
                    break 'inv;
                }
            }
        }
        top_invariance = Some(invariant);
        top_independent = independence_certificate(&hf.fibration.total, &basis);
        current = hf.total;
    }

    let spans = span_report(&current.graph, &basis, max_degree);
    let expected = poincare_polynomial(&current.cosets);
    let mut histogram = vec![0usize; expected.len()];
    for (_, d) in &basis {
        let d = *d as usize;
        if d >= histogram.len() {
            histogram.resize(d + 1, 0);
        }
        histogram[d] += 1;
    }
    let report = TowerReport {
        stages: stage_reports,
        spans,
        invariant: top_invariance.unwrap_or(true),
        independent: top_independent,
        degree_histogram: histogram,
        expected_histogram: expected,
    };
    Ok((basis, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_homogeneous_graph, graded_dimension};
    use crate::max_group_order;

    fn base_graph(series: Series, rank: usize, k: &[usize]) -> HomogeneousGraph {
        let rs = RootSystem::build(series, rank).unwrap();
        build_homogeneous_graph(&rs, &k.iter().copied().collect(), max_group_order()).unwrap()
    }

    #[test]
    fn tower_shapes() {
        let a2 = build_tower(Series::A, 2).unwrap();
        assert_eq!(a2.stages.len(), 2);
        assert_eq!(a2.base_label(0), "CP^1");
        assert_eq!(a2.base_label(1), "CP^2");

        let c2 = build_tower(Series::C, 2).unwrap();
        assert_eq!(c2.base_label(1), "CP^3");

        let d3 = build_tower(Series::D, 3).unwrap();
        assert_eq!(d3.stages.len(), 2);
        assert_eq!(d3.base_label(0), "CP^1 x CP^1");
        assert_eq!(d3.base_label(1), "Gr2+(R^6)");
        assert!(build_tower(Series::D, 2).is_err());
    }

    #[test]
    fn power_classes_on_small_bases() {
        // CP^1 with the fundamental weight.
        let cp1 = base_graph(Series::A, 1, &[]);
        let lambda = LinearForm::from_ints(&[1]);
        let (classes, report) = symplectic_power_classes(&cp1, &lambda, 2, 3).unwrap();
        assert_eq!(classes.len(), 2);
        assert!(report.pass(), "{report:?}");

        // CP^2 with the first fundamental weight.
        let cp2 = base_graph(Series::A, 2, &[1]);
        let lambda = LinearForm::from_ints(&[1, 0]);
        let (_, report) = symplectic_power_classes(&cp2, &lambda, 3, 3).unwrap();
        assert!(report.pass(), "{report:?}");

        // The odd quadric: values are the signed coordinates.
        let gr5 = base_graph(Series::B, 2, &[1]);
        let lambda = LinearForm::from_ints(&[1, 0]);
        let (classes, report) = symplectic_power_classes(&gr5, &lambda, 4, 3).unwrap();
        assert_eq!(classes.len(), 4);
        assert!(report.pass(), "{report:?}");
    }

    #[test]
    fn unstabilized_weight_is_rejected() {
        // On CP^2 the second fundamental weight is moved by the isotropy
        // subgroup, so its orbit class violates a congruence or collides.
        let cp2 = base_graph(Series::A, 2, &[1]);
        let lambda = LinearForm::from_ints(&[0, 1]);
        assert!(symplectic_power_classes(&cp2, &lambda, 3, 2).is_err());
    }

    #[test]
    fn even_quadric_powers_cannot_span() {
        // The type-D Grassmannian has a two-dimensional middle cohomology,
        // so powers of one degree-two class must miss a class in degree 2.
        let gr6 = base_graph(Series::D, 3, &[1, 2]);
        let lambda = LinearForm::from_ints(&[1, 0, 0]);
        let (_, report) = symplectic_power_classes(&gr6, &lambda, 6, 2).unwrap();
        assert!(report.determinant_nonzero);
        let row2 = &report.rows[2];
        assert_eq!(row2.ambient, 11);
        assert_eq!(row2.rank, 10);
        assert!(!report.pass());
    }

    #[test]
    fn a2_tower() {
        let rs = RootSystem::build(Series::A, 2).unwrap();
        let tower = build_tower(Series::A, 2).unwrap();
        let (basis, report) = iterated_invariant_basis(&rs, &tower, 3, max_group_order()).unwrap();
        assert_eq!(basis.len(), 6);
        assert!(report.pass(), "{report:?}");
        assert_eq!(report.degree_histogram, vec![1, 2, 2, 1]);
    }

    #[test]
    fn single_stage_tower() {
        let rs = RootSystem::build(Series::A, 1).unwrap();
        let tower = build_tower(Series::A, 1).unwrap();
        let (basis, report) = iterated_invariant_basis(&rs, &tower, 1, max_group_order()).unwrap();
        assert_eq!(basis.len(), 2);
        assert!(report.pass(), "{report:?}");
    }

    #[test]
    fn b2_tower() {
        let rs = RootSystem::build(Series::B, 2).unwrap();
        let tower = build_tower(Series::B, 2).unwrap();
        let (basis, report) = iterated_invariant_basis(&rs, &tower, 3, max_group_order()).unwrap();
        assert_eq!(basis.len(), 8);
        assert!(report.pass(), "{report:?}");
        assert_eq!(report.degree_histogram, vec![1, 2, 2, 2, 1]);
    }

    #[test]
    fn d3_tower() {
        let rs = RootSystem::build(Series::D, 3).unwrap();
        let tower = build_tower(Series::D, 3).unwrap();
        let (basis, report) = iterated_invariant_basis(&rs, &tower, 3, max_group_order()).unwrap();
        assert_eq!(basis.len(), 24);
        assert!(report.pass(), "{report:?}");
        assert_eq!(report.degree_histogram, vec![1, 3, 5, 6, 5, 3, 1]);
    }

    #[test]
    fn bottom_basis_of_the_product_of_spheres() {
        let rs = RootSystem::build(Series::D, 3).unwrap();
        let bottom = crate::graph::build_levi_graph(
            &rs,
            &[1usize, 2].into_iter().collect(),
            &SimpleSubset::new(),
            max_group_order(),
        )
        .unwrap();
        assert_eq!(bottom.graph.vertex_count(), 4);
        let basis = d_series_bottom_basis(&bottom);
        let degrees: Vec<u32> = basis.iter().map(|(_, d)| *d).collect();
        assert_eq!(degrees, vec![0, 1, 1, 2]);
        let rows = span_report(&bottom.graph, &basis, 3);
        assert!(rows.iter().all(|r| r.pass()));
        assert_eq!(rows[2].ambient, graded_dimension(&bottom.graph, 2));
    }
}
