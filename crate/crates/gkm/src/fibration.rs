//! GKM fiber bundles: edge transports, twists, holonomy, and the
//! congruence description of the total space.
//!
//! A fibration carries, for every directed base edge, a bijection of the
//! fibers over its endpoints and a twist matrix acting on linear forms. A
//! bundle is balanced when each twist fixes the hyperplane of the edge
//! weight and the transport carries vertical edge weights to their twisted
//! images. Composing the edge data around cycles of the base graph gives a
//! finite holonomy group at the base point; classes on the base-point
//! fiber invariant under it spread over the whole bundle by parallel
//! transport, and together with base classes they generate everything.
//!
//! For homogeneous bundles `G/K1 -> G/K` the transport along the base edge
//! attached to a root `beta` is left multiplication by the reflection in
//! `beta`, and the twist is that reflection's action on forms.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::Zero;

use crate::error::{invalid, GkmError, Result};
use crate::graph::{
    build_levi_graph, congruence_rows_for_edges, graded_dimension, is_gkm_class,
    module_generators, pullback_class, span_rank, DegreeSpace, GKMClass, GKMEdge, GKMGraph,
    HomogeneousGraph,
};
use crate::linalg::{IntReducer, Matrix};
use crate::poly::{apply_form_map, canonical_remainder, map_form, LinearForm, Polynomial, Rat};
use crate::weyl::{RootSystem, SimpleSubset};

/// Fiber over one base vertex: the induced subgraph on the total vertices
/// projecting there. Local index `i` is total vertex `total_ids[i]`.
#[derive(Clone, Debug)]
pub struct Fiber {
    pub total_ids: Vec<usize>,
    pub graph: GKMGraph,
}

/// Transport bijection and twist matrix of one directed base edge. The
/// twist acts on coefficient vectors of linear forms.
#[derive(Clone, Debug)]
pub struct EdgeData {
    pub transport: Vec<usize>,
    pub twist: Matrix,
}

#[derive(Clone, Debug)]
pub struct GKMFibration {
    pub total: GKMGraph,
    pub base: GKMGraph,
    /// Total vertex -> base vertex.
    pub projection: Vec<usize>,
    pub fibers: Vec<Fiber>,
    /// Indexed like `base.edges`.
    pub edge_data: Vec<EdgeData>,
}

impl GKMFibration {
    /// Assemble and validate a fibration; fibers are derived from the
    /// projection, never trusted from outside.
    pub fn new(
        total: GKMGraph,
        base: GKMGraph,
        projection: Vec<usize>,
        edge_data: Vec<EdgeData>,
    ) -> Result<GKMFibration> {
        total.validate()?;
        base.validate()?;
        if projection.len() != total.vertex_count() {
            return Err(invalid("projection must cover every total vertex"));
        }
        let fibers = derive_fibers(&total, &base, &projection)?;
        let f = GKMFibration {
            total,
            base,
            projection,
            fibers,
            edge_data,
        };
        f.validate_structure()?;
        Ok(f)
    }

    pub fn fiber_size(&self) -> usize {
        self.fibers.first().map(|f| f.total_ids.len()).unwrap_or(0)
    }

    /// Local index of a total vertex inside its fiber.
    pub fn local_index(&self, total_id: usize) -> usize {
        let fiber = &self.fibers[self.projection[total_id]];
        fiber
            .total_ids
            .binary_search(&total_id)
            .expect("vertex lies in its own fiber")
    }

    /// Ids of total edges inside fibers (endpoints project equally).
    pub fn vertical_edge_ids(&self) -> Vec<usize> {
        (0..self.total.edges.len())
            .filter(|&i| {
                let e = &self.total.edges[i];
                self.projection[e.src] == self.projection[e.dst]
            })
            .collect()
    }

    fn validate_structure(&self) -> Result<()> {
        let mut hit = vec![false; self.base.vertex_count()];
        for &b in &self.projection {
            if b >= self.base.vertex_count() {
                return Err(invalid("projection hits a missing base vertex"));
            }
            hit[b] = true;
        }
        if !hit.iter().all(|&h| h) {
            return Err(invalid("projection is not surjective onto the base"));
        }
        let size = self.fiber_size();
        if self.fibers.iter().any(|f| f.total_ids.len() != size) {
            return Err(invalid("fibers have unequal sizes"));
        }
        if self.edge_data.len() != self.base.edges.len() {
            return Err(invalid(format!(
                "edge data supplied for {} of {} base edges",
                self.edge_data.len(),
                self.base.edges.len()
            )));
        }
        for (i, e) in self.base.edges.iter().enumerate() {
            let data = &self.edge_data[i];
            if data.transport.len() != size {
                return Err(invalid(format!("edge {i}: transport has wrong size")));
            }
            let mut seen = vec![false; size];
            for &t in &data.transport {
                if t >= size || seen[t] {
                    return Err(invalid(format!("edge {i}: transport is not a bijection")));
                }
                seen[t] = true;
            }
            if data.twist.rows() != self.total.dim_t || data.twist.cols() != self.total.dim_t {
                return Err(invalid(format!("edge {i}: twist has wrong dimensions")));
            }
            if !data.twist.is_invertible() {
                return Err(invalid(format!("edge {i}: twist is singular")));
            }
            // Reverse data must be the inverse.
            let rev = &self.edge_data[e.opp];
            for u in 0..size {
                if rev.transport[data.transport[u]] != u {
                    return Err(invalid(format!(
                        "edge {i}: reverse transport is not the inverse"
                    )));
                }
            }
            if rev.twist.mul(&data.twist) != Matrix::identity(self.total.dim_t) {
                return Err(invalid(format!("edge {i}: reverse twist is not the inverse")));
            }
        }
        // Every non-vertical total edge lies over some base edge.
        for (i, e) in self.total.edges.iter().enumerate() {
            let (p, q) = (self.projection[e.src], self.projection[e.dst]);
            if p == q {
                continue;
            }
            let covered = self
                .base
                .edges
                .iter()
                .any(|be| be.src == p && be.dst == q && be.weight.parallel(&e.weight));
            if !covered {
                return Err(invalid(format!("total edge {i} projects to no base edge")));
            }
        }
        Ok(())
    }
}

fn derive_fibers(total: &GKMGraph, base: &GKMGraph, projection: &[usize]) -> Result<Vec<Fiber>> {
    let mut fibers = Vec::with_capacity(base.vertex_count());
    for b in 0..base.vertex_count() {
        let total_ids: Vec<usize> = (0..total.vertex_count())
            .filter(|&u| projection[u] == b)
            .collect();
        if total_ids.is_empty() {
            return Err(invalid(format!("base vertex {b} has an empty fiber")));
        }
        let local: BTreeMap<usize, usize> = total_ids
            .iter()
            .enumerate()
            .map(|(i, &t)| (t, i))
            .collect();
        // Induced vertical edges, re-paired locally.
        let mut edges = Vec::new();
        let mut old_to_new = BTreeMap::new();
        for (i, e) in total.edges.iter().enumerate() {
            if local.contains_key(&e.src) && local.contains_key(&e.dst) {
                old_to_new.insert(i, edges.len());
                edges.push(GKMEdge {
                    src: local[&e.src],
                    dst: local[&e.dst],
                    weight: e.weight.clone(),
                    opp: e.opp,
                });
            }
        }
        for e in &mut edges {
            e.opp = old_to_new[&e.opp];
        }
        let graph = GKMGraph {
            dim_t: total.dim_t,
            labels: total_ids.iter().map(|&t| total.labels[t].clone()).collect(),
            edges,
        };
        graph.validate()?;
        fibers.push(Fiber { total_ids, graph });
    }
    Ok(fibers)
}

// ---------------------------------------------------------------------------
// Homogeneous bundles
// ---------------------------------------------------------------------------

/// A fibration remembering the homogeneous data of both ends.
#[derive(Clone, Debug)]
pub struct HomogeneousFibration {
    pub fibration: GKMFibration,
    pub total: HomogeneousGraph,
    pub base: HomogeneousGraph,
}

/// Build `G/K1 -> G/K` restricted to the parabolic subgroup of an ambient
/// simple subset (the full set gives the honest homogeneous bundle).
pub fn build_levi_fibration(
    rs: &RootSystem,
    ambient: &SimpleSubset,
    k1: &SimpleSubset,
    k: &SimpleSubset,
    cap: usize,
) -> Result<HomogeneousFibration> {
    if !k1.is_subset(k) {
        return Err(invalid(
            "the total isotropy subset must be contained in the base one",
        ));
    }
    let total = build_levi_graph(rs, ambient, k1, cap)?;
    let base = build_levi_graph(rs, ambient, k, cap)?;
    let projection: Vec<usize> = (0..total.graph.vertex_count())
        .map(|u| {
            base.cosets
                .coset_of_matrix(&total.rep(u).matrix)
                .expect("total representative lies in the ambient group")
        })
        .collect();
    let fibers = derive_fibers(&total.graph, &base.graph, &projection)?;

    let mut edge_data = Vec::with_capacity(base.graph.edges.len());
    for ei in 0..base.graph.edges.len() {
        let e = &base.graph.edges[ei];
        let refl = rs.reflection_matrix(base.edge_reflection[ei]);
        let src_fiber = &fibers[e.src];
        let dst_fiber = &fibers[e.dst];
        let transport: Vec<usize> = src_fiber
            .total_ids
            .iter()
            .map(|&t| {
                let target = refl.mul(&total.rep(t).matrix);
                let tv = total
                    .cosets
                    .coset_of_matrix(&target)
                    .expect("reflection stays in the ambient group");
                dst_fiber
                    .total_ids
                    .binary_search(&tv)
                    .expect("transport lands in the fiber over the edge target")
            })
            .collect();
        edge_data.push(EdgeData {
            transport,
            twist: refl,
        });
    }

    let fibration = GKMFibration::new(
        total.graph.clone(),
        base.graph.clone(),
        projection,
        edge_data,
    )?;
    Ok(HomogeneousFibration {
        fibration,
        total,
        base,
    })
}

pub fn build_homogeneous_fibration(
    rs: &RootSystem,
    k1: &SimpleSubset,
    k: &SimpleSubset,
    cap: usize,
) -> Result<HomogeneousFibration> {
    build_levi_fibration(rs, &crate::weyl::full_subset(rs.rank), k1, k, cap)
}

// ---------------------------------------------------------------------------
// Balancedness
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct EdgeBalanceRow {
    pub edge: usize,
    /// The twist restricts to the identity on the hyperplane of the weight.
    pub kernel_fixed: bool,
    /// Transport carries every vertical edge weight to its twisted image.
    pub weights_match: bool,
}

impl EdgeBalanceRow {
    pub fn pass(&self) -> bool {
        self.kernel_fixed && self.weights_match
    }
}

#[derive(Clone, Debug)]
pub struct BalanceReport {
    pub edges: Vec<EdgeBalanceRow>,
}

impl BalanceReport {
    pub fn pass(&self) -> bool {
        self.edges.iter().all(|e| e.pass())
    }

    pub fn failing_edges(&self) -> Vec<usize> {
        self.edges
            .iter()
            .filter(|e| !e.pass())
            .map(|e| e.edge)
            .collect()
    }
}

/// Verify the balanced-bundle conditions on every directed base edge.
/// Failures are report entries, never errors.
pub fn check_balanced(f: &GKMFibration) -> BalanceReport {
    let mut rows = Vec::with_capacity(f.base.edges.len());
    for (ei, e) in f.base.edges.iter().enumerate() {
        let data = &f.edge_data[ei];
        // (i) the induced map on the Lie algebra fixes ker(alpha_e)
        // pointwise; on coordinates of t this reads transpose(twist) v = v.
        let tt = data.twist.transpose();
        let kernel_fixed = e.weight.kernel_basis().iter().all(|v| tt.mat_vec(v) == *v);
        // (ii) vertical edges map to vertical edges with twisted weights
        // (up to the overall sign of the axial function).
        let src_fiber = &f.fibers[e.src];
        let dst_fiber = &f.fibers[e.dst];
        let mut weights_match = true;
        for &vi in &src_fiber.graph.undirected_reps() {
            let ve = &src_fiber.graph.edges[vi];
            let (a, b) = (data.transport[ve.src], data.transport[ve.dst]);
            let wanted = map_form(&data.twist, &ve.weight);
            let found = dst_fiber
                .graph
                .edges
                .iter()
                .any(|de| de.src == a && de.dst == b && de.weight.parallel(&wanted));
            if !found {
                weights_match = false;
                break;
            }
        }
        rows.push(EdgeBalanceRow {
            edge: ei,
            kernel_fixed,
            weights_match,
        });
    }
    BalanceReport { edges: rows }
}

// ---------------------------------------------------------------------------
// Holonomy
// ---------------------------------------------------------------------------

/// A fiber permutation together with a twist of the torus; the pair acts on
/// classes of the base-point fiber.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HolonomyElement {
    pub perm: Vec<usize>,
    pub twist: Matrix,
}

impl HolonomyElement {
    pub fn identity(fiber_size: usize, dim_t: usize) -> Self {
        HolonomyElement {
            perm: (0..fiber_size).collect(),
            twist: Matrix::identity(dim_t),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p) && self.twist.is_identity()
    }

    /// `self` after `other` (composition of maps).
    pub fn compose(&self, other: &HolonomyElement) -> HolonomyElement {
        HolonomyElement {
            perm: other.perm.iter().map(|&i| self.perm[i]).collect(),
            twist: self.twist.mul(&other.twist),
        }
    }

    pub fn inverse(&self) -> HolonomyElement {
        let mut perm = vec![0usize; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            perm[p] = i;
        }
        HolonomyElement {
            perm,
            twist: self.twist.inverse().expect("twists are invertible"),
        }
    }

    fn key(&self) -> (Vec<usize>, Vec<Rat>) {
        let mut flat = Vec::new();
        for i in 0..self.twist.rows() {
            flat.extend_from_slice(self.twist.row(i));
        }
        (self.perm.clone(), flat)
    }
}

#[derive(Clone, Debug)]
pub struct HolonomyGroup {
    pub base_point: usize,
    /// One generator per fundamental cycle of the base graph.
    pub generators: Vec<HolonomyElement>,
    pub elements: Vec<HolonomyElement>,
}

impl HolonomyGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// Breadth-first spanning tree of the base graph; returns per-vertex
/// incoming directed edge (root gets none), scanning edges in id order,
/// optionally reversed.
fn spanning_tree(base: &GKMGraph, root: usize, reverse_scan: bool) -> Result<Vec<Option<usize>>> {
    let n = base.vertex_count();
    let mut incoming: Vec<Option<usize>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    let order: Vec<usize> = if reverse_scan {
        (0..base.edges.len()).rev().collect()
    } else {
        (0..base.edges.len()).collect()
    };
    while let Some(v) = queue.pop_front() {
        for &ei in &order {
            let e = &base.edges[ei];
            if e.src == v && !seen[e.dst] {
                seen[e.dst] = true;
                incoming[e.dst] = Some(ei);
                queue.push_back(e.dst);
            }
        }
    }
    if !seen.iter().all(|&s| s) {
        return Err(invalid("base graph is not connected"));
    }
    Ok(incoming)
}

fn edge_element(f: &GKMFibration, edge: usize) -> HolonomyElement {
    HolonomyElement {
        perm: f.edge_data[edge].transport.clone(),
        twist: f.edge_data[edge].twist.clone(),
    }
}

/// Composite transport from the fiber over `root` to the fiber over each
/// vertex along the tree.
fn tree_transports(
    f: &GKMFibration,
    incoming: &[Option<usize>],
    root: usize,
) -> Vec<HolonomyElement> {
    let n = f.base.vertex_count();
    let id = HolonomyElement::identity(f.fiber_size(), f.total.dim_t);
    let mut out: Vec<Option<HolonomyElement>> = vec![None; n];
    out[root] = Some(id);
    let mut remaining: Vec<usize> = (0..n).filter(|&v| v != root).collect();
    while !remaining.is_empty() {
        let mut next = Vec::new();
        for &v in &remaining {
            let e = incoming[v].expect("tree covers the graph");
            let src = f.base.edges[e].src;
            if let Some(base_elem) = out[src].clone() {
                out[v] = Some(edge_element(f, e).compose(&base_elem));
            } else {
                next.push(v);
            }
        }
        assert!(next.len() < remaining.len(), "tree is acyclic");
        remaining = next;
    }
    out.into_iter().map(|o| o.unwrap()).collect()
}

/// Holonomy group at a base point: generators come from fundamental cycles
/// of a breadth-first spanning tree, the group is their closure under
/// composition (bounded by `cap`).
pub fn holonomy_group(f: &GKMFibration, base_point: usize, cap: usize) -> Result<HolonomyGroup> {
    let incoming = spanning_tree(&f.base, base_point, false)?;
    let trans = tree_transports(f, &incoming, base_point);
    let tree_edges: BTreeSet<usize> = incoming.iter().flatten().copied().collect();

    let mut generators = Vec::new();
    let mut used = BTreeSet::new();
    for ei in 0..f.base.edges.len() {
        if tree_edges.contains(&ei) || tree_edges.contains(&f.base.edges[ei].opp) {
            continue;
        }
        if used.contains(&ei) {
            continue;
        }
        used.insert(ei);
        used.insert(f.base.edges[ei].opp);
        let e = &f.base.edges[ei];
        let loop_elem = trans[e.dst]
            .inverse()
            .compose(&edge_element(f, ei))
            .compose(&trans[e.src]);
        generators.push(loop_elem);
    }

    let identity = HolonomyElement::identity(f.fiber_size(), f.total.dim_t);
    let mut elements = vec![identity.clone()];
    let mut index = BTreeSet::new();
    index.insert(identity.key());
    let mut queue = VecDeque::from([0usize]);
    while let Some(at) = queue.pop_front() {
        for g in &generators {
            let next = elements[at].compose(g);
            if index.insert(next.key()) {
                if elements.len() >= cap {
                    return Err(GkmError::ResourceLimit(format!(
                        "holonomy closure exceeds the cap of {cap}"
                    )));
                }
                elements.push(next);
                queue.push_back(elements.len() - 1);
            }
        }
    }
    Ok(HolonomyGroup {
        base_point,
        generators,
        elements,
    })
}

// ---------------------------------------------------------------------------
// The action on fiber classes
// ---------------------------------------------------------------------------

/// Left action on classes of the base-point fiber: the value at a vertex is
/// the twisted value at the permutation preimage.
pub fn act_on_class(w: &HolonomyElement, class: &GKMClass) -> Result<GKMClass> {
    if class.values.len() != w.perm.len() {
        return Err(invalid(
            "class does not live on the fiber this element acts on",
        ));
    }
    let inv = w.inverse();
    Ok(GKMClass {
        values: (0..class.values.len())
            .map(|u| apply_form_map(&class.values[inv.perm[u]], &w.twist))
            .collect(),
    })
}

/// Group average: the projection onto invariant classes.
pub fn average_class(group: &HolonomyGroup, class: &GKMClass) -> Result<GKMClass> {
    let mut sum: Option<GKMClass> = None;
    for w in &group.elements {
        let moved = act_on_class(w, class)?;
        sum = Some(match sum {
            None => moved,
            Some(s) => s.add(&moved),
        });
    }
    let order = Rat::from_integer((group.order() as i64).into());
    Ok(sum.expect("group contains the identity").scale(&order.recip()))
}

/// Invariant generators of the base-point fiber: module generators of the
/// fiber graph, averaged over the holonomy group, checked to still generate
/// degree by degree.
pub fn invariant_fiber_basis(
    f: &GKMFibration,
    group: &HolonomyGroup,
    max_degree: u32,
) -> Result<Vec<(GKMClass, u32)>> {
    let fiber = &f.fibers[group.base_point];
    let basis = module_generators(&fiber.graph, max_degree, None)?;
    let mut averaged = Vec::with_capacity(basis.generators.len());
    for (gen, d) in basis.generators {
        let avg = average_class(group, &gen)?;
        if !avg.is_homogeneous(d) {
            return Err(GkmError::InternalInconsistency(
                "averaging failed to preserve the degree".into(),
            ));
        }
        averaged.push((avg, d));
    }
    for d in 0..=max_degree {
        let want = graded_dimension(&fiber.graph, d);
        let got = span_rank(&fiber.graph, &averaged, d);
        if got != want {
            return Err(GkmError::InternalInconsistency(format!(
                "averaged generators span {got} of {want} in degree {d}"
            )));
        }
    }
    Ok(averaged)
}

/// Parallel transport of an invariant class of the base-point fiber to a
/// class on the whole total graph. Invariance under every holonomy
/// generator is checked up front; consistency over every non-tree edge and
/// the full set of edge congruences are checked exactly.
pub fn transport_invariant_class(
    f: &GKMFibration,
    group: &HolonomyGroup,
    class: &GKMClass,
) -> Result<GKMClass> {
    transport_invariant_class_scanned(f, group, class, false)
}

/// Same as [`transport_invariant_class`] with a reversed edge scan for the
/// spanning tree; path independence makes the result identical.
pub fn transport_invariant_class_scanned(
    f: &GKMFibration,
    group: &HolonomyGroup,
    class: &GKMClass,
    reverse_scan: bool,
) -> Result<GKMClass> {
    let root = group.base_point;
    if class.values.len() != f.fiber_size() {
        return Err(invalid("class does not live on the base-point fiber"));
    }
    for g in &group.generators {
        if act_on_class(g, class)? != *class {
            return Err(invalid(
                "class is not invariant under the holonomy generators",
            ));
        }
    }
    let push = |c: &GKMClass, e: usize| -> GKMClass {
        let elem = edge_element(f, e);
        let inv_perm = elem.inverse().perm;
        GKMClass {
            values: (0..c.values.len())
                .map(|u| apply_form_map(&c.values[inv_perm[u]], &elem.twist))
                .collect(),
        }
    };

    let incoming = spanning_tree(&f.base, root, reverse_scan)?;
    let n = f.base.vertex_count();
    let mut at: Vec<Option<GKMClass>> = vec![None; n];
    at[root] = Some(class.clone());
    let mut remaining: Vec<usize> = (0..n).filter(|&v| v != root).collect();
    while !remaining.is_empty() {
        let mut next = Vec::new();
        for &v in &remaining {
            let e = incoming[v].expect("tree covers the graph");
            let src = f.base.edges[e].src;
            if let Some(c) = at[src].clone() {
                at[v] = Some(push(&c, e));
            } else {
                next.push(v);
            }
        }
        remaining = next;
    }
    let at: Vec<GKMClass> = at.into_iter().map(|o| o.unwrap()).collect();

    let tree_edges: BTreeSet<usize> = incoming.iter().flatten().copied().collect();
    for ei in 0..f.base.edges.len() {
        if tree_edges.contains(&ei) {
            continue;
        }
        let e = &f.base.edges[ei];
        if push(&at[e.src], ei) != at[e.dst] {
            return Err(GkmError::InternalInconsistency(format!(
                "transported class disagrees across base edge {ei}"
            )));
        }
    }

    let assembled = GKMClass {
        values: (0..f.total.vertex_count())
            .map(|u| at[f.projection[u]].values[f.local_index(u)].clone())
            .collect(),
    };
    let (ok, _) = is_gkm_class(&f.total, &assembled)?;
    if !ok {
        return Err(GkmError::InternalInconsistency(
            "transported class violates a total-graph congruence".into(),
        ));
    }
    Ok(assembled)
}

// ---------------------------------------------------------------------------
// Tensor-product bases
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct SpanRow {
    pub degree: u32,
    /// Dimension of the degree-d class space of the total graph.
    pub ambient: usize,
    /// Rank of the degree-d span of polynomial multiples of the classes.
    pub rank: usize,
    /// Count expected from a free module on the classes' degrees.
    pub free_count: usize,
}

impl SpanRow {
    pub fn pass(&self) -> bool {
        self.rank == self.ambient && self.free_count == self.ambient
    }
}

#[derive(Clone, Debug)]
pub struct ProductBasisReport {
    pub class_count: usize,
    pub rows: Vec<SpanRow>,
    /// Vertex-evaluation matrix has full row rank over the fraction field.
    pub independent: bool,
}

impl ProductBasisReport {
    pub fn pass(&self) -> bool {
        self.independent && self.rows.iter().all(|r| r.pass())
    }
}

/// Products of transported invariant fiber classes with pullbacks of base
/// classes. Degrees add.
pub fn tensor_classes(
    f: &GKMFibration,
    group: &HolonomyGroup,
    fiber_classes: &[(GKMClass, u32)],
    base_classes: &[(GKMClass, u32)],
) -> Result<Vec<(GKMClass, u32)>> {
    let mut transported = Vec::with_capacity(fiber_classes.len());
    for (c, d) in fiber_classes {
        transported.push((transport_invariant_class(f, group, c)?, *d));
    }
    let mut out = Vec::with_capacity(transported.len() * base_classes.len());
    for (bc, bd) in base_classes {
        let pulled = pullback_class(&f.projection, f.base.vertex_count(), bc)?;
        for (tc, td) in &transported {
            out.push((tc.mul(&pulled), td + bd));
        }
    }
    Ok(out)
}

/// Per-degree spanning report of a family of homogeneous classes on a graph.
pub fn span_report(graph: &GKMGraph, classes: &[(GKMClass, u32)], max_degree: u32) -> Vec<SpanRow> {
    (0..=max_degree)
        .map(|d| {
            let ambient = graded_dimension(graph, d);
            let rank = span_rank(graph, classes, d);
            let free_count: usize = classes
                .iter()
                .filter(|(_, j)| *j <= d)
                .map(|(_, j)| {
                    crate::poly::binomial((d - j) as usize + graph.dim_t - 1, graph.dim_t - 1)
                })
                .sum();
            SpanRow {
                degree: d,
                ambient,
                rank,
                free_count,
            }
        })
        .collect()
}

/// Certify linear independence over the fraction field by evaluating the
/// class values at deterministic points: a full-rank evaluation is a proof,
/// and for an honest basis some prime-power point always works.
pub fn independence_certificate(graph: &GKMGraph, classes: &[(GKMClass, u32)]) -> bool {
    let n = graph.dim_t;
    for s in [2i64, 3, 5, 7, 11, 13] {
        let mut point = Vec::with_capacity(n);
        let mut acc = 1i64;
        for _ in 0..n {
            acc *= s;
            point.push(Rat::from_integer(acc.into()));
        }
        let mut red = IntReducer::new(graph.vertex_count());
        let mut rank = 0usize;
        for (c, _) in classes {
            let row: Vec<Rat> = c.values.iter().map(|p| p.eval(&point)).collect();
            if red.add_rat_row(&row) {
                rank += 1;
            }
        }
        if rank == classes.len() {
            return true;
        }
    }
    false
}

/// The tensor-product module basis of a fibration: invariant generators of
/// the base-point fiber (degrees up to `max_degree`) transported over the
/// bundle, multiplied by pullbacks of base module generators, then verified
/// to span every graded piece of the total congruence ring up to
/// `max_degree`.
pub fn product_basis(
    f: &GKMFibration,
    max_degree: u32,
    cap: usize,
) -> Result<(Vec<(GKMClass, u32)>, ProductBasisReport)> {
    let group = holonomy_group(f, 0, cap)?;
    let fiber_classes = invariant_fiber_basis(f, &group, max_degree)?;
    let base_basis = module_generators(&f.base, max_degree, None)?;
    let classes = tensor_classes(f, &group, &fiber_classes, &base_basis.generators)?;
    let rows = span_report(&f.total, &classes, max_degree);
    let report = ProductBasisReport {
        class_count: classes.len(),
        independent: independence_certificate(&f.total, &classes),
        rows,
    };
    Ok((classes, report))
}

// ---------------------------------------------------------------------------
// The congruence description of the total space
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct CsRow {
    pub degree: u32,
    /// Dimension of the class space of the total graph (all edges).
    pub dim_direct: usize,
    /// Dimension of the space of fiber-class tuples matching across every
    /// base edge in the quotient by its weight.
    pub dim_cs: usize,
    pub direct_in_cs: bool,
    pub cs_in_direct: bool,
}

impl CsRow {
    pub fn pass(&self) -> bool {
        self.dim_direct == self.dim_cs && self.direct_in_cs && self.cs_in_direct
    }
}

#[derive(Clone, Debug)]
pub struct CsReport {
    pub rows: Vec<CsRow>,
}

impl CsReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass())
    }
}

/// Compare, degree by degree, the classes of the total graph with the
/// fiberwise description: tuples of fiber classes whose images agree in the
/// quotient by each base-edge weight after transport and twist. Both
/// solution spaces are computed exactly and checked for mutual containment.
pub fn verify_chang_skjelbred(f: &GKMFibration, max_degree: u32) -> Result<CsReport> {
    let mut rows_out = Vec::new();
    for d in 0..=max_degree {
        let space = DegreeSpace::new(&f.total, d);
        let all_edges: Vec<usize> = f.total.undirected_reps();
        let direct_rows = congruence_rows_for_edges(&f.total, &space, &all_edges);

        // Fiberwise system: vertical congruences plus the edge conditions.
        let vertical: Vec<usize> = f
            .vertical_edge_ids()
            .into_iter()
            .filter(|&i| i < f.total.edges[i].opp)
            .collect();
        let mut cs_rows = congruence_rows_for_edges(&f.total, &space, &vertical);
        for ei in 0..f.base.edges.len() {
            let e = &f.base.edges[ei];
            if ei > e.opp {
                continue;
            }
            cs_rows.extend(cs_edge_rows(f, &space, ei)?);
        }

        let direct_basis = nullspace_rows(&direct_rows, space.dim());
        let cs_basis = nullspace_rows(&cs_rows, space.dim());
        let direct_in_cs = direct_basis.iter().all(|v| satisfies(&cs_rows, v));
        let cs_in_direct = cs_basis.iter().all(|v| satisfies(&direct_rows, v));
        rows_out.push(CsRow {
            degree: d,
            dim_direct: direct_basis.len(),
            dim_cs: cs_basis.len(),
            direct_in_cs,
            cs_in_direct,
        });
    }
    Ok(CsReport { rows: rows_out })
}

/// Rows of the condition over one base edge `e = (p, q)`: for every fiber
/// vertex `u` over `p`, the value at `u` agrees with the untwisted pullback
/// of the value at the transported vertex, modulo the edge weight.
fn cs_edge_rows(f: &GKMFibration, space: &DegreeSpace, ei: usize) -> Result<Vec<Vec<Rat>>> {
    let e = &f.base.edges[ei];
    let data = &f.edge_data[ei];
    let twist_inv = data.twist.inverse().expect("twists are invertible");
    let pivot = e.weight.pivot().expect("base weights are nonzero");
    let reduced: Vec<&crate::poly::Monomial> =
        space.monos.iter().filter(|m| m.0[pivot] == 0).collect();
    if reduced.is_empty() {
        return Ok(Vec::new());
    }
    let red_index: BTreeMap<&crate::poly::Monomial, usize> =
        reduced.iter().enumerate().map(|(i, m)| (*m, i)).collect();

    let src_fiber = &f.fibers[e.src];
    let dst_fiber = &f.fibers[e.dst];
    let block = space.block();
    let mut rows = Vec::new();
    for (u_local, &u_total) in src_fiber.total_ids.iter().enumerate() {
        let v_total = dst_fiber.total_ids[data.transport[u_local]];
        let mut edge_rows = vec![vec![Rat::zero(); space.dim()]; reduced.len()];
        for (mi, m) in space.monos.iter().enumerate() {
            let mono_poly = Polynomial::monomial(space.n, m.clone(), Rat::from_integer(1.into()));
            // + remainder of the monomial at u
            let rem_u = canonical_remainder(&mono_poly, &e.weight)?;
            for (rm, c) in rem_u.terms() {
                let r = red_index[rm];
                edge_rows[r][u_total * block + mi] =
                    edge_rows[r][u_total * block + mi].clone() + c;
            }
            // - remainder of the untwisted monomial at the transport image
            let pulled = apply_form_map(&mono_poly, &twist_inv);
            let rem_v = canonical_remainder(&pulled, &e.weight)?;
            for (rm, c) in rem_v.terms() {
                let r = red_index[rm];
                edge_rows[r][v_total * block + mi] =
                    edge_rows[r][v_total * block + mi].clone() - c;
            }
        }
        rows.extend(edge_rows);
    }
    Ok(rows)
}

fn nullspace_rows(rows: &[Vec<Rat>], cols: usize) -> Vec<Vec<Rat>> {
    if rows.is_empty() {
        return (0..cols)
            .map(|i| {
                let mut v = vec![Rat::zero(); cols];
                v[i] = Rat::from_integer(1.into());
                v
            })
            .collect();
    }
    crate::linalg::nullspace(&Matrix::from_rows(rows.to_vec()))
}

fn satisfies(rows: &[Vec<Rat>], v: &[Rat]) -> bool {
    rows.iter().all(|row| {
        row.iter()
            .zip(v)
            .map(|(a, b)| a * b)
            .fold(Rat::zero(), |x, y| x + y)
            .is_zero()
    })
}

// ---------------------------------------------------------------------------
// Restriction to a single base edge
// ---------------------------------------------------------------------------

/// The sub-bundle over one undirected base edge: a two-vertex base joined
/// by that edge, the two fibers, their vertical edges, and the lifted
/// edges given by the transport. Over such a base the fiberwise condition
/// is literally "equal restrictions in the quotient by the edge weight".
pub fn restrict_to_base_edge(f: &GKMFibration, edge: usize) -> Result<GKMFibration> {
    let e = f
        .base
        .edges
        .get(edge)
        .ok_or_else(|| invalid("no such base edge"))?
        .clone();
    let data = f.edge_data[edge].clone();
    let src_fiber = &f.fibers[e.src];
    let dst_fiber = &f.fibers[e.dst];
    let size = f.fiber_size();

    let base = GKMGraph::cp1(e.weight.clone());
    let mut labels: Vec<String> = Vec::with_capacity(2 * size);
    labels.extend(src_fiber.total_ids.iter().map(|&t| f.total.labels[t].clone()));
    labels.extend(dst_fiber.total_ids.iter().map(|&t| f.total.labels[t].clone()));

    let mut edges: Vec<GKMEdge> = Vec::new();
    let push_pair = |src: usize, dst: usize, weight: LinearForm, edges: &mut Vec<GKMEdge>| {
        let i = edges.len();
        edges.push(GKMEdge {
            src,
            dst,
            weight: weight.clone(),
            opp: i + 1,
        });
        edges.push(GKMEdge {
            src: dst,
            dst: src,
            weight: weight.neg(),
            opp: i,
        });
    };
    for &vi in &src_fiber.graph.undirected_reps() {
        let ve = &src_fiber.graph.edges[vi];
        push_pair(ve.src, ve.dst, ve.weight.clone(), &mut edges);
    }
    for &vi in &dst_fiber.graph.undirected_reps() {
        let ve = &dst_fiber.graph.edges[vi];
        push_pair(size + ve.src, size + ve.dst, ve.weight.clone(), &mut edges);
    }
    for u in 0..size {
        // Inherit the exact weight of the covering edge of the total graph.
        let (a, b) = (
            src_fiber.total_ids[u],
            dst_fiber.total_ids[data.transport[u]],
        );
        let lifted = f
            .total
            .edges
            .iter()
            .find(|te| te.src == a && te.dst == b && te.weight.parallel(&e.weight))
            .ok_or_else(|| invalid(format!("transport of fiber vertex {u} lifts no edge")))?;
        push_pair(u, size + data.transport[u], lifted.weight.clone(), &mut edges);
    }

    let total = GKMGraph {
        dim_t: f.total.dim_t,
        labels,
        edges,
    };
    let projection: Vec<usize> = (0..2 * size).map(|u| usize::from(u >= size)).collect();
    let edge_data = vec![
        EdgeData {
            transport: data.transport.clone(),
            twist: data.twist.clone(),
        },
        EdgeData {
            transport: {
                let mut inv = vec![0usize; size];
                for (i, &t) in data.transport.iter().enumerate() {
                    inv[t] = i;
                }
                inv
            },
            twist: data.twist.inverse().expect("twists are invertible"),
        },
    ];
    GKMFibration::new(total, base, projection, edge_data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{class_space_basis, formal_dimension};
    use crate::max_group_order;
    use crate::weyl::{poincare_polynomial, Series};

    fn fibration(series: Series, rank: usize, k1: &[usize], k: &[usize]) -> HomogeneousFibration {
        let rs = RootSystem::build(series, rank).unwrap();
        build_homogeneous_fibration(
            &rs,
            &k1.iter().copied().collect(),
            &k.iter().copied().collect(),
            max_group_order(),
        )
        .unwrap()
    }

    #[test]
    fn flag_over_projective_plane() {
        let hf = fibration(Series::A, 2, &[], &[1]);
        assert_eq!(hf.fibration.total.vertex_count(), 6);
        assert_eq!(hf.fibration.base.vertex_count(), 3);
        assert_eq!(hf.fibration.fiber_size(), 2);
        assert!(check_balanced(&hf.fibration).pass());
    }

    #[test]
    fn b2_flag_over_grassmannian() {
        let hf = fibration(Series::B, 2, &[], &[1]);
        assert_eq!(hf.fibration.base.vertex_count(), 4);
        assert_eq!(hf.fibration.fiber_size(), 2);
        assert!(check_balanced(&hf.fibration).pass());
    }

    #[test]
    fn identity_fibration_is_trivially_balanced() {
        let hf = fibration(Series::A, 1, &[], &[]);
        assert_eq!(hf.fibration.fiber_size(), 1);
        let report = check_balanced(&hf.fibration);
        assert!(report.pass());
        let group = holonomy_group(&hf.fibration, 0, max_group_order()).unwrap();
        assert_eq!(group.order(), 1);
    }

    #[test]
    fn corrupted_twist_fails_on_that_edge() {
        let mut hf = fibration(Series::A, 2, &[], &[1]);
        let bad = 2usize;
        hf.fibration.edge_data[bad].twist = Matrix::identity(2);
        let report = check_balanced(&hf.fibration);
        assert!(!report.pass());
        assert_eq!(report.failing_edges(), vec![bad]);
    }

    #[test]
    fn holonomy_orders() {
        let a2 = fibration(Series::A, 2, &[], &[1]);
        assert_eq!(
            holonomy_group(&a2.fibration, 0, max_group_order())
                .unwrap()
                .order(),
            2
        );
        let a3 = fibration(Series::A, 3, &[], &[1, 2]);
        assert_eq!(
            holonomy_group(&a3.fibration, 0, max_group_order())
                .unwrap()
                .order(),
            6
        );
    }

    #[test]
    fn action_law_and_congruence_preservation() {
        let hf = fibration(Series::A, 2, &[], &[1]);
        let group = holonomy_group(&hf.fibration, 0, max_group_order()).unwrap();
        let fiber = &hf.fibration.fibers[0];
        let classes: Vec<GKMClass> = class_space_basis(&fiber.graph, 1);
        for w1 in &group.elements {
            for w2 in &group.elements {
                for c in &classes {
                    let lhs = act_on_class(&w1.compose(w2), c).unwrap();
                    let rhs = act_on_class(w1, &act_on_class(w2, c).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
        for w in &group.elements {
            for c in &classes {
                let moved = act_on_class(w, c).unwrap();
                assert!(is_gkm_class(&fiber.graph, &moved).unwrap().0);
            }
        }
    }

    #[test]
    fn involution_acts_with_order_two() {
        let hf = fibration(Series::A, 2, &[], &[1]);
        let group = holonomy_group(&hf.fibration, 0, max_group_order()).unwrap();
        let w = group
            .elements
            .iter()
            .find(|w| !w.is_identity())
            .expect("nontrivial holonomy");
        let fiber = &hf.fibration.fibers[0];
        let c = GKMClass {
            values: vec![Polynomial::zero(2), fiber.graph.edges[0].weight.as_poly()],
        };
        let once = act_on_class(w, &c).unwrap();
        assert_ne!(once, c);
        let twice = act_on_class(w, &once).unwrap();
        assert_eq!(twice, c);
    }

    #[test]
    fn averaging_is_idempotent_and_invariant() {
        let hf = fibration(Series::A, 2, &[], &[1]);
        let group = holonomy_group(&hf.fibration, 0, max_group_order()).unwrap();
        let fiber = &hf.fibration.fibers[0];
        let c = GKMClass {
            values: vec![Polynomial::zero(2), fiber.graph.edges[0].weight.as_poly()],
        };
        let avg = average_class(&group, &c).unwrap();
        for w in &group.elements {
            assert_eq!(act_on_class(w, &avg).unwrap(), avg);
        }
        assert_eq!(average_class(&group, &avg).unwrap(), avg);
        assert!(is_gkm_class(&fiber.graph, &avg).unwrap().0);
        // averaging a moved class gives the same projection
        let moved = act_on_class(&group.elements[1], &c).unwrap();
        assert_eq!(average_class(&group, &moved).unwrap(), avg);
    }

    #[test]
    fn invariant_basis_of_the_cp2_fiber() {
        let hf = fibration(Series::A, 2, &[], &[1]);
        let group = holonomy_group(&hf.fibration, 0, max_group_order()).unwrap();
        let basis = invariant_fiber_basis(&hf.fibration, &group, 1).unwrap();
        let degrees: Vec<u32> = basis.iter().map(|(_, d)| *d).collect();
        assert_eq!(degrees, vec![0, 1]);
    }

    #[test]
    fn transport_and_path_independence() {
        let hf = fibration(Series::A, 2, &[], &[1]);
        let group = holonomy_group(&hf.fibration, 0, max_group_order()).unwrap();
        let basis = invariant_fiber_basis(&hf.fibration, &group, 1).unwrap();
        for (c, _) in &basis {
            let t1 = transport_invariant_class_scanned(&hf.fibration, &group, c, false).unwrap();
            let t2 = transport_invariant_class_scanned(&hf.fibration, &group, c, true).unwrap();
            assert_eq!(t1, t2);
            assert!(is_gkm_class(&hf.fibration.total, &t1).unwrap().0);
        }
        // constant class transports to the constant class
        let one = GKMClass {
            values: vec![Polynomial::one(2); 2],
        };
        let t = transport_invariant_class(&hf.fibration, &group, &one).unwrap();
        assert_eq!(t, GKMClass::one(&hf.fibration.total));
    }

    #[test]
    fn non_invariant_transport_is_rejected() {
        let hf = fibration(Series::A, 2, &[], &[1]);
        let group = holonomy_group(&hf.fibration, 0, max_group_order()).unwrap();
        let fiber = &hf.fibration.fibers[0];
        let c = GKMClass {
            values: vec![Polynomial::zero(2), fiber.graph.edges[0].weight.as_poly()],
        };
        assert!(transport_invariant_class(&hf.fibration, &group, &c).is_err());
    }

    #[test]
    fn product_basis_of_the_flag_bundle() {
        let hf = fibration(Series::A, 2, &[], &[1]);
        let (classes, report) = product_basis(&hf.fibration, 3, max_group_order()).unwrap();
        assert_eq!(classes.len(), 6);
        assert!(report.pass(), "{report:?}");
        // degree histogram matches the length histogram of the Weyl group
        let mut hist = vec![0usize; 4];
        for (_, d) in &classes {
            hist[*d as usize] += 1;
        }
        assert_eq!(hist, vec![1, 2, 2, 1]);
    }

    #[test]
    fn product_basis_of_identity_fibration_is_the_base_basis() {
        let hf = fibration(Series::A, 1, &[], &[]);
        let (classes, report) = product_basis(&hf.fibration, 1, max_group_order()).unwrap();
        assert_eq!(classes.len(), 2);
        assert!(report.pass());
    }

    #[test]
    fn chang_skjelbred_on_the_flag_bundle() {
        let hf = fibration(Series::A, 2, &[], &[1]);
        let report = verify_chang_skjelbred(&hf.fibration, 3).unwrap();
        assert!(report.pass(), "{report:?}");
        assert_eq!(report.rows[1].dim_direct, 4);
        // dims follow the Hilbert identity of the total space
        let betti = poincare_polynomial(&hf.total.cosets);
        for row in &report.rows {
            assert_eq!(row.dim_direct, formal_dimension(&betti, 2, row.degree));
        }
    }

    #[test]
    fn chang_skjelbred_with_point_fibers_is_the_base_ring() {
        let hf = fibration(Series::A, 2, &[1], &[1]);
        assert_eq!(hf.fibration.fiber_size(), 1);
        let report = verify_chang_skjelbred(&hf.fibration, 2).unwrap();
        assert!(report.pass());
        for row in &report.rows {
            assert_eq!(
                row.dim_direct,
                graded_dimension(&hf.fibration.base, row.degree)
            );
        }
    }

    #[test]
    fn sub_bundle_over_one_edge() {
        let hf = fibration(Series::A, 2, &[], &[1]);
        let rep = hf.fibration.base.undirected_reps()[0];
        let sub = restrict_to_base_edge(&hf.fibration, rep).unwrap();
        assert_eq!(sub.base.vertex_count(), 2);
        assert_eq!(sub.total.vertex_count(), 4);
        assert!(check_balanced(&sub).pass());
        let report = verify_chang_skjelbred(&sub, 3).unwrap();
        assert!(report.pass(), "{report:?}");
    }
}
