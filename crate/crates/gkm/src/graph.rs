//! GKM graphs, their congruence rings, and graded module bases.
//!
//! A GKM graph is a multigraph with paired opposite directed edges and a
//! nonzero linear form on every edge (the axial function); opposite edges
//! carry opposite forms and the forms at any one vertex are pairwise
//! linearly independent. A class is an assignment of a polynomial to each
//! vertex such that across every edge the difference of the endpoint values
//! is divisible by the edge weight. Degree by degree these congruences are
//! finite linear systems, so dimensions and module generators are computed
//! by exact elimination.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{invalid, GkmError, Result};
use crate::linalg::{IntReducer, Matrix};
use crate::poly::{
    binomial, canonical_remainder, monomials_of_degree, LinearForm, Monomial, Polynomial, Rat,
};
use crate::weyl::{CosetSpace, RootSystem, SimpleSubset, WeylElement};

/// A directed edge with its axial weight; `opp` is the reversed edge.
#[derive(Clone, Debug)]
pub struct GKMEdge {
    pub src: usize,
    pub dst: usize,
    pub weight: LinearForm,
    pub opp: usize,
}

/// Multigraph with an axial function.
#[derive(Clone, Debug)]
pub struct GKMGraph {
    pub dim_t: usize,
    pub labels: Vec<String>,
    pub edges: Vec<GKMEdge>,
}

impl GKMGraph {
    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn valence(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.src == v).count()
    }

    /// Ids of one directed representative per opposite pair.
    pub fn undirected_reps(&self) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&i| i < self.edges[i].opp)
            .collect()
    }

    /// The graph of a single two-sphere: two vertices joined by one edge.
    pub fn cp1(weight: LinearForm) -> GKMGraph {
        GKMGraph {
            dim_t: weight.nvars(),
            labels: vec!["p".into(), "q".into()],
            edges: vec![
                GKMEdge {
                    src: 0,
                    dst: 1,
                    weight: weight.clone(),
                    opp: 1,
                },
                GKMEdge {
                    src: 1,
                    dst: 0,
                    weight: weight.neg(),
                    opp: 0,
                },
            ],
        }
    }

    /// Structural checks: opposite pairing is a weight-negating involution
    /// and the weights at every vertex are pairwise independent.
    pub fn validate(&self) -> Result<()> {
        for (i, e) in self.edges.iter().enumerate() {
            if e.src >= self.vertex_count() || e.dst >= self.vertex_count() {
                return Err(invalid(format!("edge {i} references a missing vertex")));
            }
            if e.weight.is_zero() {
                return Err(invalid(format!("edge {i} carries the zero weight")));
            }
            if e.weight.nvars() != self.dim_t {
                return Err(invalid(format!("edge {i} weight has wrong variable count")));
            }
            let o = self
                .edges
                .get(e.opp)
                .ok_or_else(|| invalid(format!("edge {i} has a dangling opposite")))?;
            if o.opp != i || o.src != e.dst || o.dst != e.src {
                return Err(invalid(format!("edge {i}: opposite pairing is not an involution")));
            }
            if o.weight != e.weight.neg() {
                return Err(invalid(format!("edge {i}: opposite weight is not negated")));
            }
        }
        for v in 0..self.vertex_count() {
            let at: Vec<&GKMEdge> = self.edges.iter().filter(|e| e.src == v).collect();
            for i in 0..at.len() {
                for j in (i + 1)..at.len() {
                    if at[i].weight.parallel(&at[j].weight) {
                        return Err(invalid(format!(
                            "weights at vertex {v} are not pairwise independent"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in self.edges.iter().filter(|e| e.src == v) {
                if !seen[e.dst] {
                    seen[e.dst] = true;
                    stack.push(e.dst);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Whether some pair of vertices is joined by more than one edge.
    pub fn has_parallel_edges(&self) -> bool {
        let mut seen = BTreeMap::new();
        for &i in &self.undirected_reps() {
            let e = &self.edges[i];
            let key = (e.src.min(e.dst), e.src.max(e.dst));
            if *seen.entry(key).and_modify(|c| *c += 1).or_insert(1usize) > 1 {
                return true;
            }
        }
        false
    }
}

/// Vertex-indexed polynomial tuple; the candidate elements of the
/// congruence ring of a graph.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GKMClass {
    pub values: Vec<Polynomial>,
}

impl GKMClass {
    pub fn constant(graph: &GKMGraph, c: Rat) -> GKMClass {
        GKMClass {
            values: vec![Polynomial::constant(graph.dim_t, c); graph.vertex_count()],
        }
    }

    pub fn one(graph: &GKMGraph) -> GKMClass {
        Self::constant(graph, Rat::from_integer(1.into()))
    }

    pub fn add(&self, other: &GKMClass) -> GKMClass {
        GKMClass {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &GKMClass) -> GKMClass {
        GKMClass {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    /// Pointwise product; congruence rings are closed under it.
    pub fn mul(&self, other: &GKMClass) -> GKMClass {
        GKMClass {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.mul(b))
                .collect(),
        }
    }

    /// Multiply every value by a fixed polynomial coefficient.
    pub fn mul_poly(&self, p: &Polynomial) -> GKMClass {
        GKMClass {
            values: self.values.iter().map(|v| v.mul(p)).collect(),
        }
    }

    pub fn scale(&self, s: &Rat) -> GKMClass {
        GKMClass {
            values: self.values.iter().map(|v| v.scale(s)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> GKMClass {
        GKMClass {
            values: self.values.iter().map(|v| v.pow(e)).collect(),
        }
    }

    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.values.iter().all(|v| v.is_homogeneous(d))
    }
}

/// A failed edge congruence: the canonical remainder of the difference.
#[derive(Clone, Debug)]
pub struct CongruenceViolation {
    pub edge: usize,
    pub remainder: Polynomial,
}

/// Check all edge congruences; the report lists every failing undirected
/// edge together with its nonzero remainder.
pub fn is_gkm_class(graph: &GKMGraph, class: &GKMClass) -> Result<(bool, Vec<CongruenceViolation>)> {
    if class.values.len() != graph.vertex_count() {
        return Err(invalid(format!(
            "class assigns {} values to a graph with {} vertices",
            class.values.len(),
            graph.vertex_count()
        )));
    }
    for v in &class.values {
        if v.nvars() != graph.dim_t {
            return Err(invalid("class value has the wrong variable count"));
        }
    }
    let mut violations = Vec::new();
    for &i in &graph.undirected_reps() {
        let e = &graph.edges[i];
        let diff = class.values[e.src].sub(&class.values[e.dst]);
        let rem = canonical_remainder(&diff, &e.weight)?;
        if !rem.is_zero() {
            violations.push(CongruenceViolation { edge: i, remainder: rem });
        }
    }
    Ok((violations.is_empty(), violations))
}

// ---------------------------------------------------------------------------
// Degree-d linear algebra
// ---------------------------------------------------------------------------

/// Bookkeeping for the degree-`d` coefficient space of a graph: one block of
/// monomial coordinates per vertex, in graded-lexicographic order.
pub struct DegreeSpace {
    pub n: usize,
    pub d: u32,
    pub vertices: usize,
    pub monos: Vec<Monomial>,
    mono_index: BTreeMap<Monomial, usize>,
}

impl DegreeSpace {
    pub fn new(graph: &GKMGraph, d: u32) -> DegreeSpace {
        let monos = monomials_of_degree(graph.dim_t, d);
        let mono_index = monos
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        DegreeSpace {
            n: graph.dim_t,
            d,
            vertices: graph.vertex_count(),
            monos,
            mono_index,
        }
    }

    pub fn block(&self) -> usize {
        self.monos.len()
    }

    pub fn dim(&self) -> usize {
        self.vertices * self.block()
    }

    pub fn class_to_vec(&self, class: &GKMClass) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim()];
        for (v, poly) in class.values.iter().enumerate() {
            debug_assert!(poly.is_homogeneous(self.d));
            for (m, c) in poly.terms() {
                out[v * self.block() + self.mono_index[m]] = c.clone();
            }
        }
        out
    }

    pub fn vec_to_class(&self, vec: &[Rat]) -> GKMClass {
        let mut values = Vec::with_capacity(self.vertices);
        for v in 0..self.vertices {
            let mut p = Polynomial::zero(self.n);
            for (mi, m) in self.monos.iter().enumerate() {
                let c = &vec[v * self.block() + mi];
                if !c.is_zero() {
                    p = p.add(&Polynomial::monomial(self.n, m.clone(), c.clone()));
                }
            }
            values.push(p);
        }
        GKMClass { values }
    }
}

/// Rows of the edge-congruence system in degree `d`. Each undirected edge
/// contributes one row per monomial of the quotient by its weight: the
/// canonical remainder of the difference of endpoint values must vanish.
pub fn congruence_rows(graph: &GKMGraph, space: &DegreeSpace) -> Vec<Vec<Rat>> {
    congruence_rows_for_edges(graph, space, &graph.undirected_reps())
}

/// Congruence rows for a chosen set of edges only.
pub fn congruence_rows_for_edges(
    graph: &GKMGraph,
    space: &DegreeSpace,
    edge_ids: &[usize],
) -> Vec<Vec<Rat>> {
    let block = space.block();
    let mut rows = Vec::new();
    for &ei in edge_ids {
        let e = &graph.edges[ei];
        let pivot = e.weight.pivot().expect("validated nonzero weight");
        // Reduced monomials: degree-d monomials free of the pivot variable.
        let reduced: Vec<&Monomial> = space.monos.iter().filter(|m| m.0[pivot] == 0).collect();
        if reduced.is_empty() {
            continue;
        }
        let red_index: BTreeMap<&Monomial, usize> =
            reduced.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut edge_rows = vec![vec![Rat::zero(); space.dim()]; reduced.len()];
        for (mi, m) in space.monos.iter().enumerate() {
            let rem = canonical_remainder(
                &Polynomial::monomial(space.n, m.clone(), Rat::from_integer(1.into())),
                &e.weight,
            )
            .expect("nonzero weight");
            for (rm, c) in rem.terms() {
                let r = red_index[rm];
                edge_rows[r][e.src * block + mi] = edge_rows[r][e.src * block + mi].clone() + c;
                edge_rows[r][e.dst * block + mi] = edge_rows[r][e.dst * block + mi].clone() - c;
            }
        }
        rows.extend(edge_rows);
    }
    rows
}

fn nullspace_of_rows(rows: Vec<Vec<Rat>>, cols: usize) -> Vec<Vec<Rat>> {
    if rows.is_empty() {
        return (0..cols)
            .map(|i| {
                let mut v = vec![Rat::zero(); cols];
                v[i] = Rat::from_integer(1.into());
                v
            })
            .collect();
    }
    crate::linalg::nullspace(&Matrix::from_rows(rows))
}

/// Dimension over the rationals of the space of degree-`d` classes.
pub fn graded_dimension(graph: &GKMGraph, d: u32) -> usize {
    let space = DegreeSpace::new(graph, d);
    let rows = congruence_rows(graph, &space);
    let mut red = IntReducer::new(space.dim());
    for r in &rows {
        red.add_rat_row(r);
    }
    space.dim() - red.rank()
}

/// Exact basis of the space of degree-`d` classes.
pub fn class_space_basis(graph: &GKMGraph, d: u32) -> Vec<GKMClass> {
    let space = DegreeSpace::new(graph, d);
    let rows = congruence_rows(graph, &space);
    nullspace_of_rows(rows, space.dim())
        .into_iter()
        .map(|v| space.vec_to_class(&v))
        .collect()
}

/// Expected degree-`d` dimension from Betti numbers: the Hilbert-series
/// identity `sum_j b_j * C(d-j+n-1, n-1)`.
pub fn formal_dimension(betti: &[usize], n: usize, d: u32) -> usize {
    betti
        .iter()
        .enumerate()
        .filter(|(j, _)| *j as u32 <= d)
        .map(|(j, &b)| b * binomial((d - j as u32) as usize + n - 1, n - 1))
        .sum()
}

/// Module generators of the congruence ring, extracted greedily degree by
/// degree: in each degree the span of polynomial multiples of the lower
/// generators is completed to the full degree-`d` space and the new basis
/// vectors are emitted.
#[derive(Clone, Debug)]
pub struct ModuleBasis {
    pub generators: Vec<(GKMClass, u32)>,
    pub report: GradedBasisReport,
}

#[derive(Clone, Debug)]
pub struct GradedBasisReport {
    pub max_degree: u32,
    /// Per degree: dimension of the class space and number of generators.
    pub rows: Vec<(u32, usize, usize)>,
}

/// `vanish_at`: when set, new generators in positive degree are chosen with
/// value zero at that vertex. Any degree-`d` class splits as such a class
/// plus a polynomial multiple of the constant generator, so the greedy
/// extraction still spans.
pub fn module_generators(
    graph: &GKMGraph,
    max_degree: u32,
    vanish_at: Option<usize>,
) -> Result<ModuleBasis> {
    let mut generators: Vec<(GKMClass, u32)> = Vec::new();
    let mut rows_report = Vec::new();
    for d in 0..=max_degree {
        let space = DegreeSpace::new(graph, d);
        let mut rows = congruence_rows(graph, &space);
        let dim_d = {
            let mut red = IntReducer::new(space.dim());
            for r in &rows {
                red.add_rat_row(r);
            }
            space.dim() - red.rank()
        };
        if let Some(v) = vanish_at {
            if d > 0 {
                for mi in 0..space.block() {
                    let mut row = vec![Rat::zero(); space.dim()];
                    row[v * space.block() + mi] = Rat::from_integer(1.into());
                    rows.push(row);
                }
            }
        }
        let kernel = nullspace_of_rows(rows, space.dim());

        let mut reducer = IntReducer::new(space.dim());
        for (gen, jdeg) in &generators {
            for m in monomials_of_degree(graph.dim_t, d - jdeg) {
                let shifted = gen.mul_poly(&Polynomial::monomial(
                    graph.dim_t,
                    m,
                    Rat::from_integer(1.into()),
                ));
                reducer.add_rat_row(&space.class_to_vec(&shifted));
            }
        }
        let mut new_count = 0usize;
        for v in kernel {
            if reducer.add_rat_row(&v) {
                generators.push((space.vec_to_class(&v), d));
                new_count += 1;
            }
        }
        if reducer.rank() != dim_d {
            return Err(GkmError::InternalInconsistency(format!(
                "degree {d}: generators span dimension {} of {}",
                reducer.rank(),
                dim_d
            )));
        }
        rows_report.push((d, dim_d, new_count));
    }
    Ok(ModuleBasis {
        generators,
        report: GradedBasisReport {
            max_degree,
            rows: rows_report,
        },
    })
}

/// Rank of the degree-`d` span of polynomial multiples of the given
/// homogeneous classes.
pub fn span_rank(graph: &GKMGraph, classes: &[(GKMClass, u32)], d: u32) -> usize {
    let space = DegreeSpace::new(graph, d);
    let mut reducer = IntReducer::new(space.dim());
    for (class, jdeg) in classes {
        if *jdeg > d {
            continue;
        }
        for m in monomials_of_degree(graph.dim_t, d - jdeg) {
            let shifted = class.mul_poly(&Polynomial::monomial(
                graph.dim_t,
                m,
                Rat::from_integer(1.into()),
            ));
            reducer.add_rat_row(&space.class_to_vec(&shifted));
        }
    }
    reducer.rank()
}

/// Whether every degree-`d` multiple of `inner` lies in the span of the
/// degree-`d` multiples of `outer`.
pub fn span_contains(
    graph: &GKMGraph,
    outer: &[(GKMClass, u32)],
    inner: &[(GKMClass, u32)],
    d: u32,
) -> bool {
    let space = DegreeSpace::new(graph, d);
    let mut reducer = IntReducer::new(space.dim());
    for (class, jdeg) in outer {
        if *jdeg > d {
            continue;
        }
        for m in monomials_of_degree(graph.dim_t, d - jdeg) {
            let shifted = class.mul_poly(&Polynomial::monomial(
                graph.dim_t,
                m,
                Rat::from_integer(1.into()),
            ));
            reducer.add_rat_row(&space.class_to_vec(&shifted));
        }
    }
    for (class, jdeg) in inner {
        if *jdeg > d {
            continue;
        }
        for m in monomials_of_degree(graph.dim_t, d - jdeg) {
            let shifted = class.mul_poly(&Polynomial::monomial(
                graph.dim_t,
                m,
                Rat::from_integer(1.into()),
            ));
            if !reducer.contains(&space.class_to_vec(&shifted)) {
                return false;
            }
        }
    }
    true
}

/// Pull a class on the base back to the total space of a projection.
pub fn pullback_class(
    projection: &[usize],
    base_vertex_count: usize,
    base_class: &GKMClass,
) -> Result<GKMClass> {
    if base_class.values.len() != base_vertex_count {
        return Err(invalid("base class size does not match the base graph"));
    }
    let mut hit = vec![false; base_vertex_count];
    for &b in projection {
        if b >= base_vertex_count {
            return Err(invalid("projection hits a missing base vertex"));
        }
        hit[b] = true;
    }
    if !hit.iter().all(|&h| h) {
        return Err(invalid("projection is not surjective onto the base vertices"));
    }
    Ok(GKMClass {
        values: projection
            .iter()
            .map(|&b| base_class.values[b].clone())
            .collect(),
    })
}

// ---------------------------------------------------------------------------
// Homogeneous graphs
// ---------------------------------------------------------------------------

/// The GKM graph of a homogeneous space together with the root data used to
/// build it. Vertices are minimal-length coset representatives; the edge at
/// a vertex `w` attached to a complement root `alpha` joins `w` to the
/// coset of `w s_alpha` and carries the weight `w(alpha)`.
#[derive(Clone, Debug)]
pub struct HomogeneousGraph {
    pub graph: GKMGraph,
    pub rs: RootSystem,
    pub cosets: CosetSpace,
    /// Positive-root indices of the ambient subsystem not in the isotropy.
    pub complement: Vec<usize>,
    /// Per directed edge: the complement root at the source side.
    pub edge_alpha: Vec<usize>,
    /// Per directed edge: the positive-root index of the reflection line of
    /// the edge (the line of the edge weight itself).
    pub edge_reflection: Vec<usize>,
}

impl HomogeneousGraph {
    pub fn rep(&self, vertex: usize) -> &WeylElement {
        self.cosets.rep(vertex)
    }

    /// The class whose value at a vertex `w` is `w` applied to the given
    /// polynomial. Edge congruences hold for any polynomial since
    /// `p - s_beta(p)` is divisible by `beta`.
    pub fn orbit_class(&self, p: &Polynomial) -> GKMClass {
        GKMClass {
            values: (0..self.graph.vertex_count())
                .map(|v| {
                    crate::poly::apply_form_map(p, &self.rep(v).matrix)
                })
                .collect(),
        }
    }
}

/// Build the GKM graph of `G/K` for the subgroup cut out by a set of simple
/// roots (the ambient set builds the flag variety of a Levi subgroup
/// instead of all of `G`).
pub fn build_levi_graph(
    rs: &RootSystem,
    ambient: &SimpleSubset,
    k: &SimpleSubset,
    cap: usize,
) -> Result<HomogeneousGraph> {
    let cosets = coset_space_checked(rs, ambient, k, cap)?;
    let complement = rs.complement_positive(ambient, k);
    let m = cosets.count();
    let labels: Vec<String> = (0..m).map(|i| cosets.rep(i).label()).collect();

    let mut edges: Vec<GKMEdge> = Vec::with_capacity(m * complement.len());
    let mut edge_alpha = Vec::with_capacity(m * complement.len());
    let mut edge_reflection = Vec::with_capacity(m * complement.len());
    for i in 0..m {
        let w = cosets.rep(i);
        for &alpha in &complement {
            let target = w.matrix.mul(&rs.reflection_matrix(alpha));
            let j = cosets
                .coset_of_matrix(&target)
                .expect("reflection stays in the ambient group");
            debug_assert_ne!(i, j, "complement roots never stabilize a coset");
            let weight = w.apply_form(&rs.positive[alpha].form);
            let (line, _) = rs
                .classify_form(&weight)
                .expect("Weyl image of a root is a root");
            edges.push(GKMEdge {
                src: i,
                dst: j,
                weight,
                opp: usize::MAX,
            });
            edge_alpha.push(alpha);
            edge_reflection.push(line);
        }
    }

    // Pair opposites: the unique reverse edge with a parallel weight.
    for i in 0..edges.len() {
        if edges[i].opp != usize::MAX {
            continue;
        }
        let mut found = None;
        for j in 0..edges.len() {
            if j == i || edges[j].opp != usize::MAX {
                continue;
            }
            if edges[j].src == edges[i].dst
                && edges[j].dst == edges[i].src
                && edges[j].weight.parallel(&edges[i].weight)
            {
                if found.is_some() {
                    return Err(GkmError::InternalInconsistency(
                        "ambiguous opposite-edge pairing".into(),
                    ));
                }
                found = Some(j);
            }
        }
        let j = found.ok_or_else(|| {
            GkmError::InternalInconsistency("missing opposite edge".into())
        })?;
        edges[i].opp = j;
        edges[j].opp = i;
        // Fix the axial sign convention: opposite edges carry opposite forms.
        edges[j].weight = edges[i].weight.neg();
    }

    let graph = GKMGraph {
        dim_t: rs.rank,
        labels,
        edges,
    };
    graph.validate()?;
    Ok(HomogeneousGraph {
        graph,
        rs: rs.clone(),
        cosets,
        complement,
        edge_alpha,
        edge_reflection,
    })
}

/// The GKM graph of `G/K` itself.
pub fn build_homogeneous_graph(
    rs: &RootSystem,
    k: &SimpleSubset,
    cap: usize,
) -> Result<HomogeneousGraph> {
    build_levi_graph(rs, &crate::weyl::full_subset(rs.rank), k, cap)
}

fn coset_space_checked(
    rs: &RootSystem,
    ambient: &SimpleSubset,
    k: &SimpleSubset,
    cap: usize,
) -> Result<CosetSpace> {
    crate::weyl::coset_space(rs, ambient, k, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::max_group_order;
    use crate::weyl::{poincare_polynomial, Series};

    fn flag(series: Series, rank: usize) -> HomogeneousGraph {
        let rs = RootSystem::build(series, rank).unwrap();
        build_homogeneous_graph(&rs, &SimpleSubset::new(), max_group_order()).unwrap()
    }

    fn quotient(series: Series, rank: usize, k: &[usize]) -> HomogeneousGraph {
        let rs = RootSystem::build(series, rank).unwrap();
        build_homogeneous_graph(&rs, &k.iter().copied().collect(), max_group_order()).unwrap()
    }

    #[test]
    fn census_of_small_flag_graphs() {
        let a2 = flag(Series::A, 2);
        assert_eq!(a2.graph.vertex_count(), 6);
        assert!((0..6).all(|v| a2.graph.valence(v) == 3));
        assert_eq!(a2.graph.undirected_reps().len(), 9);

        let cp2 = quotient(Series::A, 2, &[1]);
        assert_eq!(cp2.graph.vertex_count(), 3);
        assert!((0..3).all(|v| cp2.graph.valence(v) == 2));

        let gr5 = quotient(Series::B, 2, &[1]);
        assert_eq!(gr5.graph.vertex_count(), 4);
        assert!((0..4).all(|v| gr5.graph.valence(v) == 3));
        // complete graph on 4 vertices
        assert!(!gr5.graph.has_parallel_edges());
    }

    #[test]
    fn built_graphs_are_simple_coadjoint_orbits() {
        for g in [
            flag(Series::A, 2),
            flag(Series::B, 2),
            quotient(Series::A, 3, &[1, 2]),
            quotient(Series::D, 3, &[1, 2]),
        ] {
            assert!(!g.graph.has_parallel_edges());
            g.graph.validate().unwrap();
        }
    }

    #[test]
    fn cp1_classes() {
        let alpha = LinearForm::from_ints(&[2]);
        let g = GKMGraph::cp1(alpha.clone());
        let ok = GKMClass {
            values: vec![Polynomial::zero(1), alpha.as_poly()],
        };
        assert!(is_gkm_class(&g, &ok).unwrap().0);
        let bad = GKMClass {
            values: vec![Polynomial::zero(1), Polynomial::one(1)],
        };
        let (pass, viol) = is_gkm_class(&g, &bad).unwrap();
        assert!(!pass);
        assert_eq!(viol.len(), 1);
    }

    #[test]
    fn weight_orbit_class_on_the_flag_graph() {
        // c(w) = w(lambda) for a fundamental weight is a class.
        let a2 = flag(Series::A, 2);
        let lambda = Polynomial::var(2, 0);
        let class = a2.orbit_class(&lambda);
        assert!(is_gkm_class(&a2.graph, &class).unwrap().0);
    }

    #[test]
    fn graded_dimensions_match_hand_counts() {
        let cp1 = GKMGraph::cp1(LinearForm::from_ints(&[2]));
        assert_eq!(graded_dimension(&cp1, 1), 2);

        let a2 = flag(Series::A, 2);
        assert_eq!(graded_dimension(&a2.graph, 1), 4);

        let cp2 = quotient(Series::A, 2, &[1]);
        assert_eq!(graded_dimension(&cp2.graph, 2), 6);
    }

    #[test]
    fn formality_identity_small() {
        for (g, series, rank, k) in [
            (quotient(Series::A, 2, &[1]), Series::A, 2, vec![1usize]),
            (flag(Series::B, 2), Series::B, 2, vec![]),
        ] {
            let betti = poincare_polynomial(&g.cosets);
            for d in 0..=3u32 {
                assert_eq!(
                    graded_dimension(&g.graph, d),
                    formal_dimension(&betti, g.graph.dim_t, d),
                    "{series}{rank} K={k:?} degree {d}"
                );
            }
        }
    }

    #[test]
    fn module_generators_cp1() {
        let g = GKMGraph::cp1(LinearForm::from_ints(&[2]));
        let basis = module_generators(&g, 1, None).unwrap();
        assert_eq!(basis.generators.len(), 2);
        assert_eq!(basis.generators[0].1, 0);
        assert_eq!(basis.generators[1].1, 1);
        // Mutual containment with the hand basis {(1,1), (0, alpha)}.
        let hand = vec![
            (GKMClass::one(&g), 0u32),
            (
                GKMClass {
                    values: vec![Polynomial::zero(1), LinearForm::from_ints(&[2]).as_poly()],
                },
                1u32,
            ),
        ];
        for d in 0..=3 {
            assert!(span_contains(&g, &hand, &basis.generators, d));
            assert!(span_contains(&g, &basis.generators, &hand, d));
        }
    }

    #[test]
    fn module_generator_multiplicities() {
        let cp2 = quotient(Series::A, 2, &[1]);
        let basis = module_generators(&cp2.graph, 2, None).unwrap();
        let counts: Vec<usize> = basis.report.rows.iter().map(|r| r.2).collect();
        assert_eq!(counts, vec![1, 1, 1]);

        let a2 = flag(Series::A, 2);
        let basis = module_generators(&a2.graph, 3, None).unwrap();
        let counts: Vec<usize> = basis.report.rows.iter().map(|r| r.2).collect();
        assert_eq!(counts, vec![1, 2, 2, 1]);
    }

    #[test]
    fn vanishing_generators_still_span() {
        let quadric = quotient(Series::D, 3, &[1, 2]);
        let basis = module_generators(&quadric.graph, 4, Some(0)).unwrap();
        let counts: Vec<usize> = basis.report.rows.iter().map(|r| r.2).collect();
        assert_eq!(counts, vec![1, 1, 2, 1, 1]);
        for (gen, d) in basis.generators.iter().filter(|(_, d)| *d > 0) {
            assert!(gen.values[0].is_zero(), "degree {d} generator at basepoint");
        }
    }

    #[test]
    fn products_of_classes_are_classes() {
        let a2 = flag(Series::A, 2);
        let basis = module_generators(&a2.graph, 2, None).unwrap();
        for (g1, _) in &basis.generators {
            for (g2, _) in &basis.generators {
                let prod = g1.mul(g2);
                assert!(is_gkm_class(&a2.graph, &prod).unwrap().0);
            }
        }
    }

    #[test]
    fn pullback_requires_surjectivity() {
        let base = GKMGraph::cp1(LinearForm::from_ints(&[2]));
        let c = GKMClass::one(&base);
        assert!(pullback_class(&[0, 0], 2, &c).is_err());
        let ok = pullback_class(&[0, 1, 1], 2, &c).unwrap();
        assert_eq!(ok.values.len(), 3);
    }

    #[test]
    fn graded_dimension_of_multigraph() {
        // Two vertices joined by two edges with independent weights: the
        // difference must be divisible by both, hence by their product.
        let w1 = LinearForm::from_ints(&[1, 0]);
        let w2 = LinearForm::from_ints(&[0, 1]);
        let g = GKMGraph {
            dim_t: 2,
            labels: vec!["p".into(), "q".into()],
            edges: vec![
                GKMEdge { src: 0, dst: 1, weight: w1.clone(), opp: 1 },
                GKMEdge { src: 1, dst: 0, weight: w1.neg(), opp: 0 },
                GKMEdge { src: 0, dst: 1, weight: w2.clone(), opp: 3 },
                GKMEdge { src: 1, dst: 0, weight: w2.neg(), opp: 2 },
            ],
        };
        g.validate().unwrap();
        assert!(g.has_parallel_edges());
        // degree 2: diagonal (3) plus one class (0, x1 x2)
        assert_eq!(graded_dimension(&g, 2), 4);
        let witness = GKMClass {
            values: vec![
                Polynomial::zero(2),
                Polynomial::var(2, 0).mul(&Polynomial::var(2, 1)),
            ],
        };
        assert!(is_gkm_class(&g, &witness).unwrap().0);
    }
}
