//! Versioned JSON schemas for graphs, classes, fibrations and reports.
//!
//! Rationals travel as `[numerator, denominator]` pairs; values outside the
//! 64-bit range are written as decimal strings so round trips are always
//! bit exact. Maps are keyed by decimal vertex or edge ids. Every document
//! carries `"schema": 1`.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::fibration::{
    BalanceReport, CsReport, EdgeData, GKMFibration, HolonomyGroup, ProductBasisReport, SpanRow,
};
use crate::graph::{GKMClass, GKMEdge, GKMGraph, GradedBasisReport};
use crate::linalg::Matrix;
use crate::poly::{LinearForm, Monomial, Polynomial, Rat};
use crate::tower::{SymplecticReport, TowerReport};
use crate::weyl::{CosetSpace, RootSystem};

pub const SCHEMA_VERSION: u32 = 1;

// ---------------------------------------------------------------------------
// Rationals and polynomials
// ---------------------------------------------------------------------------

/// An integer that may exceed 64 bits; big values are decimal strings.
#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(untagged)]
pub enum IntJson {
    Small(i64),
    Big(String),
}

impl IntJson {
    fn from_bigint(v: &BigInt) -> IntJson {
        match i64::try_from(v.clone()) {
            Ok(s) => IntJson::Small(s),
            Err(_) => IntJson::Big(v.to_string()),
        }
    }

    fn to_bigint(&self, field: &str) -> Result<BigInt> {
        match self {
            IntJson::Small(s) => Ok(BigInt::from(*s)),
            IntJson::Big(s) => s
                .parse()
                .map_err(|_| invalid(format!("field {field}: bad integer literal {s:?}"))),
        }
    }
}

pub type RatJson = [IntJson; 2];

pub fn rat_to_json(r: &Rat) -> RatJson {
    [IntJson::from_bigint(r.numer()), IntJson::from_bigint(r.denom())]
}

pub fn rat_from_json(v: &RatJson, field: &str) -> Result<Rat> {
    let num = v[0].to_bigint(field)?;
    let den = v[1].to_bigint(field)?;
    if den == BigInt::from(0) {
        return Err(invalid(format!("field {field}: zero denominator")));
    }
    Ok(Rat::new(num, den))
}

pub fn form_to_json(l: &LinearForm) -> Vec<RatJson> {
    l.coeffs.iter().map(rat_to_json).collect()
}

pub fn form_from_json(v: &[RatJson], field: &str) -> Result<LinearForm> {
    Ok(LinearForm::new(
        v.iter()
            .map(|r| rat_from_json(r, field))
            .collect::<Result<_>>()?,
    ))
}

pub fn matrix_to_json(m: &Matrix) -> Vec<Vec<RatJson>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(rat_to_json).collect())
        .collect()
}

pub fn matrix_from_json(rows: &[Vec<RatJson>], field: &str) -> Result<Matrix> {
    let data: Vec<Vec<Rat>> = rows
        .iter()
        .map(|row| row.iter().map(|r| rat_from_json(r, field)).collect())
        .collect::<Result<_>>()?;
    if data.is_empty() || data.iter().any(|r| r.len() != data[0].len()) {
        return Err(invalid(format!("field {field}: ragged matrix")));
    }
    Ok(Matrix::from_rows(data))
}

/// One polynomial term: a rational coefficient and an exponent vector.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct TermJson {
    pub coeffs: RatJson,
    pub exps: Vec<u32>,
}

pub fn poly_to_json(p: &Polynomial) -> Vec<TermJson> {
    p.terms()
        .map(|(m, c)| TermJson {
            coeffs: rat_to_json(c),
            exps: m.0.clone(),
        })
        .collect()
}

pub fn poly_from_json(terms: &[TermJson], nvars: usize, field: &str) -> Result<Polynomial> {
    let mut p = Polynomial::zero(nvars);
    for t in terms {
        if t.exps.len() != nvars {
            return Err(invalid(format!(
                "field {field}: exponent vector of length {} in a {nvars}-variable ring",
                t.exps.len()
            )));
        }
        let c = rat_from_json(&t.coeffs, field)?;
        p = p.add(&Polynomial::monomial(nvars, Monomial(t.exps.clone()), c));
    }
    Ok(p)
}

// ---------------------------------------------------------------------------
// Graphs, classes, fibrations
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct VertexJson {
    pub id: usize,
    pub label: String,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct EdgeJson {
    pub id: usize,
    pub src: usize,
    pub dst: usize,
    pub weight: Vec<RatJson>,
    pub opp: usize,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct GraphJson {
    pub schema: u32,
    pub dim_t: usize,
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<EdgeJson>,
}

pub fn graph_to_json(g: &GKMGraph) -> GraphJson {
    GraphJson {
        schema: SCHEMA_VERSION,
        dim_t: g.dim_t,
        vertices: g
            .labels
            .iter()
            .enumerate()
            .map(|(id, label)| VertexJson {
                id,
                label: label.clone(),
            })
            .collect(),
        edges: g
            .edges
            .iter()
            .enumerate()
            .map(|(id, e)| EdgeJson {
                id,
                src: e.src,
                dst: e.dst,
                weight: form_to_json(&e.weight),
                opp: e.opp,
            })
            .collect(),
    }
}

pub fn graph_from_json(j: &GraphJson) -> Result<GKMGraph> {
    for (i, v) in j.vertices.iter().enumerate() {
        if v.id != i {
            return Err(invalid(format!(
                "field vertices[{i}].id: expected {i}, got {}",
                v.id
            )));
        }
    }
    for (i, e) in j.edges.iter().enumerate() {
        if e.id != i {
            return Err(invalid(format!(
                "field edges[{i}].id: expected {i}, got {}",
                e.id
            )));
        }
    }
    let g = GKMGraph {
        dim_t: j.dim_t,
        labels: j.vertices.iter().map(|v| v.label.clone()).collect(),
        edges: j
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| {
                Ok(GKMEdge {
                    src: e.src,
                    dst: e.dst,
                    weight: form_from_json(&e.weight, &format!("edges[{i}].weight"))?,
                    opp: e.opp,
                })
            })
            .collect::<Result<_>>()?,
    };
    g.validate()?;
    Ok(g)
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ClassJson {
    pub schema: u32,
    pub dim_t: usize,
    /// Vertex id (decimal string) -> polynomial value.
    pub values: BTreeMap<String, Vec<TermJson>>,
}

pub fn class_to_json(g: &GKMGraph, c: &GKMClass) -> ClassJson {
    ClassJson {
        schema: SCHEMA_VERSION,
        dim_t: g.dim_t,
        values: c
            .values
            .iter()
            .enumerate()
            .map(|(v, p)| (v.to_string(), poly_to_json(p)))
            .collect(),
    }
}

pub fn class_from_json(j: &ClassJson, g: &GKMGraph) -> Result<GKMClass> {
    if j.dim_t != g.dim_t {
        return Err(invalid("field dim_t: class and graph disagree"));
    }
    let mut values = vec![Polynomial::zero(g.dim_t); g.vertex_count()];
    for (key, terms) in &j.values {
        let v: usize = key
            .parse()
            .map_err(|_| invalid(format!("field values: bad vertex id {key:?}")))?;
        if v >= g.vertex_count() {
            return Err(invalid(format!("field values: vertex {v} out of range")));
        }
        values[v] = poly_from_json(terms, g.dim_t, &format!("values[{key}]"))?;
    }
    Ok(GKMClass { values })
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct EdgeDataJson {
    /// Total vertex id over the source -> total vertex id over the target.
    pub transport: BTreeMap<String, usize>,
    pub twist: Vec<Vec<RatJson>>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct FibrationJson {
    pub schema: u32,
    pub total: GraphJson,
    pub base: GraphJson,
    /// Total vertex id (decimal string) -> base vertex id.
    pub projection: BTreeMap<String, usize>,
    /// Base edge id (decimal string) -> transport and twist.
    pub edge_data: BTreeMap<String, EdgeDataJson>,
}

pub fn fibration_to_json(f: &GKMFibration) -> FibrationJson {
    FibrationJson {
        schema: SCHEMA_VERSION,
        total: graph_to_json(&f.total),
        base: graph_to_json(&f.base),
        projection: f
            .projection
            .iter()
            .enumerate()
            .map(|(u, &b)| (u.to_string(), b))
            .collect(),
        edge_data: f
            .edge_data
            .iter()
            .enumerate()
            .map(|(ei, data)| {
                let e = &f.base.edges[ei];
                let src_ids = &f.fibers[e.src].total_ids;
                let dst_ids = &f.fibers[e.dst].total_ids;
                let transport: BTreeMap<String, usize> = data
                    .transport
                    .iter()
                    .enumerate()
                    .map(|(u, &v)| (src_ids[u].to_string(), dst_ids[v]))
                    .collect();
                (
                    ei.to_string(),
                    EdgeDataJson {
                        transport,
                        twist: matrix_to_json(&data.twist),
                    },
                )
            })
            .collect(),
    }
}

pub fn fibration_from_json(j: &FibrationJson) -> Result<GKMFibration> {
    let total = graph_from_json(&j.total)?;
    let base = graph_from_json(&j.base)?;
    let mut projection = vec![usize::MAX; total.vertex_count()];
    for (key, &b) in &j.projection {
        let u: usize = key
            .parse()
            .map_err(|_| invalid(format!("field projection: bad vertex id {key:?}")))?;
        if u >= total.vertex_count() {
            return Err(invalid(format!("field projection: vertex {u} out of range")));
        }
        projection[u] = b;
    }
    if projection.iter().any(|&b| b == usize::MAX) {
        return Err(invalid("field projection: missing a total vertex"));
    }

    // Fiber membership in ascending total-id order, as derived internally.
    let mut fiber_ids: Vec<Vec<usize>> = vec![Vec::new(); base.vertex_count()];
    for (u, &b) in projection.iter().enumerate() {
        if b >= base.vertex_count() {
            return Err(invalid(format!("field projection: base vertex {b} out of range")));
        }
        fiber_ids[b].push(u);
    }

    let mut edge_data = Vec::with_capacity(base.edges.len());
    for (ei, e) in base.edges.iter().enumerate() {
        let key = ei.to_string();
        let data = j
            .edge_data
            .get(&key)
            .ok_or_else(|| invalid(format!("field edge_data: missing base edge {ei}")))?;
        let twist = matrix_from_json(&data.twist, &format!("edge_data[{ei}].twist"))?;
        let src_ids = &fiber_ids[e.src];
        let dst_ids = &fiber_ids[e.dst];
        let mut transport = Vec::with_capacity(src_ids.len());
        for &u in src_ids {
            let v = data.transport.get(&u.to_string()).ok_or_else(|| {
                invalid(format!(
                    "field edge_data[{ei}].transport: missing fiber vertex {u}"
                ))
            })?;
            let local = dst_ids.binary_search(v).map_err(|_| {
                invalid(format!(
                    "field edge_data[{ei}].transport: {v} is not in the target fiber"
                ))
            })?;
            transport.push(local);
        }
        edge_data.push(EdgeData { transport, twist });
    }
    GKMFibration::new(total, base, projection, edge_data)
}

// ---------------------------------------------------------------------------
// Root systems and cosets
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct RootSystemJson {
    pub schema: u32,
    pub series: String,
    pub rank: usize,
    pub positive_roots: Vec<Vec<RatJson>>,
    pub coroots: Vec<Vec<RatJson>>,
    /// Indices of the simple roots, in Dynkin order.
    pub simple_indices: Vec<usize>,
}

pub fn root_system_to_json(rs: &RootSystem) -> RootSystemJson {
    RootSystemJson {
        schema: SCHEMA_VERSION,
        series: rs.series.to_string(),
        rank: rs.rank,
        positive_roots: rs
            .positive
            .iter()
            .map(|r| form_to_json(&r.form))
            .collect(),
        coroots: rs
            .positive
            .iter()
            .map(|r| r.coroot.iter().map(rat_to_json).collect())
            .collect(),
        simple_indices: rs.simple.clone(),
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct CosetJson {
    /// 1-based simple reflection indices of a shortest word.
    pub representative_word: Vec<usize>,
    pub length: usize,
}

pub fn cosets_to_json(cs: &CosetSpace) -> Vec<CosetJson> {
    (0..cs.count())
        .map(|i| CosetJson {
            representative_word: cs
                .rep(i)
                .word
                .clone()
                .unwrap_or_default()
                .iter()
                .map(|w| w + 1)
                .collect(),
            length: cs.lengths[i],
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct BalanceRowJson {
    pub edge: usize,
    pub kernel_fixed: bool,
    pub weights_match: bool,
    pub pass: bool,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct BalanceReportJson {
    pub schema: u32,
    pub pass: bool,
    pub edges: Vec<BalanceRowJson>,
}

pub fn balance_report_to_json(r: &BalanceReport) -> BalanceReportJson {
    BalanceReportJson {
        schema: SCHEMA_VERSION,
        pass: r.pass(),
        edges: r
            .edges
            .iter()
            .map(|e| BalanceRowJson {
                edge: e.edge,
                kernel_fixed: e.kernel_fixed,
                weights_match: e.weights_match,
                pass: e.pass(),
            })
            .collect(),
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct CsRowJson {
    pub degree: u32,
    pub dim_direct: usize,
    pub dim_cs: usize,
    pub mutual_containment: bool,
    pub pass: bool,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct CsReportJson {
    pub schema: u32,
    pub pass: bool,
    pub rows: Vec<CsRowJson>,
}

pub fn cs_report_to_json(r: &CsReport) -> CsReportJson {
    CsReportJson {
        schema: SCHEMA_VERSION,
        pass: r.pass(),
        rows: r
            .rows
            .iter()
            .map(|row| CsRowJson {
                degree: row.degree,
                dim_direct: row.dim_direct,
                dim_cs: row.dim_cs,
                mutual_containment: row.direct_in_cs && row.cs_in_direct,
                pass: row.pass(),
            })
            .collect(),
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct SpanRowJson {
    pub degree: u32,
    pub ambient_dim: usize,
    pub span_rank: usize,
    pub free_count: usize,
    pub pass: bool,
}

pub fn span_rows_to_json(rows: &[SpanRow]) -> Vec<SpanRowJson> {
    rows.iter()
        .map(|r| SpanRowJson {
            degree: r.degree,
            ambient_dim: r.ambient,
            span_rank: r.rank,
            free_count: r.free_count,
            pass: r.pass(),
        })
        .collect()
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ProductReportJson {
    pub schema: u32,
    pub pass: bool,
    pub class_count: usize,
    pub independent: bool,
    pub rows: Vec<SpanRowJson>,
}

pub fn product_report_to_json(r: &ProductBasisReport) -> ProductReportJson {
    ProductReportJson {
        schema: SCHEMA_VERSION,
        pass: r.pass(),
        class_count: r.class_count,
        independent: r.independent,
        rows: span_rows_to_json(&r.rows),
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct SymplecticReportJson {
    pub schema: u32,
    pub pass: bool,
    pub class_count: usize,
    pub determinant_nonzero: bool,
    pub rows: Vec<SpanRowJson>,
}

pub fn symplectic_report_to_json(r: &SymplecticReport) -> SymplecticReportJson {
    SymplecticReportJson {
        schema: SCHEMA_VERSION,
        pass: r.pass(),
        class_count: r.class_count,
        determinant_nonzero: r.determinant_nonzero,
        rows: span_rows_to_json(&r.rows),
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct HolonomyElementJson {
    pub perm: Vec<usize>,
    pub twist: Vec<Vec<RatJson>>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct HolonomyReportJson {
    pub schema: u32,
    pub base_point: usize,
    pub order: usize,
    pub generator_count: usize,
    pub elements: Vec<HolonomyElementJson>,
}

pub fn holonomy_report_to_json(g: &HolonomyGroup) -> HolonomyReportJson {
    HolonomyReportJson {
        schema: SCHEMA_VERSION,
        base_point: g.base_point,
        order: g.order(),
        generator_count: g.generators.len(),
        elements: g
            .elements
            .iter()
            .map(|e| HolonomyElementJson {
                perm: e.perm.clone(),
                twist: matrix_to_json(&e.twist),
            })
            .collect(),
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct BasisRowJson {
    pub degree: u32,
    pub dim: usize,
    pub generators: usize,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct BasisReportJson {
    pub schema: u32,
    pub max_degree: u32,
    pub rows: Vec<BasisRowJson>,
    pub generators: Vec<ClassJson>,
}

pub fn basis_report_to_json(
    g: &GKMGraph,
    report: &GradedBasisReport,
    generators: &[(GKMClass, u32)],
) -> BasisReportJson {
    BasisReportJson {
        schema: SCHEMA_VERSION,
        max_degree: report.max_degree,
        rows: report
            .rows
            .iter()
            .map(|&(degree, dim, generators)| BasisRowJson {
                degree,
                dim,
                generators,
            })
            .collect(),
        generators: generators.iter().map(|(c, _)| class_to_json(g, c)).collect(),
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct TowerStageJson {
    pub stage: usize,
    pub base: String,
    pub base_vertices: usize,
    pub fiber_vertices: usize,
    pub holonomy_order: usize,
    pub class_count: usize,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct TowerReportJson {
    pub schema: u32,
    pub pass: bool,
    pub stages: Vec<TowerStageJson>,
    pub per_degree_dims: Vec<SpanRowJson>,
    pub invariant: bool,
    pub independent: bool,
    pub degree_histogram: Vec<usize>,
    pub expected_histogram: Vec<usize>,
}

pub fn tower_report_to_json(r: &TowerReport) -> TowerReportJson {
    TowerReportJson {
        schema: SCHEMA_VERSION,
        pass: r.pass(),
        stages: r
            .stages
            .iter()
            .map(|s| TowerStageJson {
                stage: s.stage,
                base: s.base_label.clone(),
                base_vertices: s.base_vertices,
                fiber_vertices: s.fiber_vertices,
                holonomy_order: s.holonomy_order,
                class_count: s.class_count,
            })
            .collect(),
        per_degree_dims: span_rows_to_json(&r.spans),
        invariant: r.invariant,
        independent: r.independent,
        degree_histogram: r.degree_histogram.clone(),
        expected_histogram: r.expected_histogram.clone(),
    }
}

/// Root-system document with optional coset data for a chosen isotropy.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct RootSystemDocJson {
    pub schema: u32,
    pub root_system: RootSystemJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cosets: Option<Vec<CosetJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub poincare: Option<Vec<usize>>,
}

/// Fibration document bundled with its balance verification.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct FibrationDocJson {
    pub schema: u32,
    pub fibration: FibrationJson,
    pub balance: BalanceReportJson,
}

pub fn to_string(value: &impl Serialize, pretty: bool) -> Result<String> {
    Ok(if pretty {
        serde_json::to_string_pretty(value)?
    } else {
        serde_json::to_string(value)?
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fibration::build_homogeneous_fibration;
    use crate::graph::build_homogeneous_graph;
    use crate::max_group_order;
    use crate::poly::rat;
    use crate::weyl::Series;

    #[test]
    fn rational_round_trip_including_big_values() {
        let small = rat(-7, 3);
        let j = rat_to_json(&small);
        assert_eq!(rat_from_json(&j, "t").unwrap(), small);

        let big = Rat::new(
            "123456789012345678901234567890".parse().unwrap(),
            BigInt::one(),
        );
        let j = rat_to_json(&big);
        assert!(matches!(j[0], IntJson::Big(_)));
        assert_eq!(rat_from_json(&j, "t").unwrap(), big);
    }

    #[test]
    fn graph_round_trip_is_bit_exact() {
        let rs = RootSystem::build(Series::B, 2).unwrap();
        let g = build_homogeneous_graph(&rs, &[1].into_iter().collect(), max_group_order())
            .unwrap()
            .graph;
        let j = graph_to_json(&g);
        let s1 = serde_json::to_string(&j).unwrap();
        let back = graph_from_json(&serde_json::from_str(&s1).unwrap()).unwrap();
        let s2 = serde_json::to_string(&graph_to_json(&back)).unwrap();
        assert_eq!(s1, s2);
    }

    #[test]
    fn fibration_round_trip_is_bit_exact() {
        let rs = RootSystem::build(Series::A, 2).unwrap();
        let f = build_homogeneous_fibration(
            &rs,
            &Default::default(),
            &[1].into_iter().collect(),
            max_group_order(),
        )
        .unwrap()
        .fibration;
        let s1 = serde_json::to_string(&fibration_to_json(&f)).unwrap();
        let back = fibration_from_json(&serde_json::from_str(&s1).unwrap()).unwrap();
        let s2 = serde_json::to_string(&fibration_to_json(&back)).unwrap();
        assert_eq!(s1, s2);
    }

    #[test]
    fn class_round_trip() {
        let rs = RootSystem::build(Series::A, 2).unwrap();
        let hg =
            build_homogeneous_graph(&rs, &Default::default(), max_group_order()).unwrap();
        let c = hg.orbit_class(&Polynomial::var(2, 0));
        let j = class_to_json(&hg.graph, &c);
        let back = class_from_json(&j, &hg.graph).unwrap();
        assert_eq!(c, back);
    }

    #[test]
    fn malformed_input_names_the_field() {
        let rs = RootSystem::build(Series::A, 1).unwrap();
        let g = build_homogeneous_graph(&rs, &Default::default(), max_group_order())
            .unwrap()
            .graph;
        let mut j = graph_to_json(&g);
        j.edges[0].weight = vec![[IntJson::Small(1), IntJson::Small(0)]];
        let err = graph_from_json(&j).unwrap_err().to_string();
        assert!(err.contains("edges[0].weight"), "{err}");
    }
}
