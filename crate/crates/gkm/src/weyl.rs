//! Root systems of the classical series and their Weyl groups.
//!
//! Coordinates are fixed once and for all so that the symmetric algebra is
//! an honest polynomial ring in `rank` variables:
//!
//! * `A_n`: roots `x_i - x_j` for `1 <= i < j <= n+1`, written in the first
//!   `n` coordinates after eliminating `x_{n+1} = -(x_1 + ... + x_n)`;
//! * `B_n`: `e_i - e_j`, `e_i + e_j` (`i < j`) and the short roots `e_i`;
//! * `C_n`: `e_i - e_j`, `e_i + e_j` (`i < j`) and the long roots `2 e_i`;
//! * `D_n`: `e_i - e_j`, `e_i + e_j` (`i < j`).
//!
//! Reflections are defined through the root/coroot pairing rather than a
//! metric, since the trace elimination in type `A` distorts the Euclidean
//! structure. Group elements act on coefficient vectors of linear forms.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{invalid, GkmError, Result};
use crate::linalg::Matrix;
use crate::poly::{LinearForm, Rat};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Series {
    A,
    B,
    C,
    D,
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Series::A => "A",
            Series::B => "B",
            Series::C => "C",
            Series::D => "D",
        };
        write!(f, "{s}")
    }
}

impl FromStr for Series {
    type Err = GkmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Series::A),
            "B" | "b" => Ok(Series::B),
            "C" | "c" => Ok(Series::C),
            "D" | "d" => Ok(Series::D),
            other => Err(invalid(format!("unknown series {other:?}, expected A/B/C/D"))),
        }
    }
}

/// A positive root together with its coroot. The coroot is stored as the
/// coordinate vector pairing with coefficient vectors of linear forms, so
/// that `form . coroot = 2` for the root itself.
#[derive(Clone, Debug)]
pub struct PositiveRoot {
    pub form: LinearForm,
    pub coroot: Vec<Rat>,
}

/// Set of simple-root indices (0-based) cutting out a maximal-rank subgroup.
pub type SimpleSubset = BTreeSet<usize>;

/// Parse a 1-based comma list like "2,3" into a 0-based subset; the empty
/// string denotes the torus itself.
pub fn parse_simple_subset(s: &str, rank: usize) -> Result<SimpleSubset> {
    let mut out = SimpleSubset::new();
    for piece in s.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        let v: usize = piece
            .parse()
            .map_err(|_| invalid(format!("bad simple-root index {piece:?}")))?;
        if v < 1 || v > rank {
            return Err(invalid(format!(
                "simple-root index {v} out of range 1..={rank}"
            )));
        }
        out.insert(v - 1);
    }
    Ok(out)
}

pub fn full_subset(rank: usize) -> SimpleSubset {
    (0..rank).collect()
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    pub series: Series,
    pub rank: usize,
    pub positive: Vec<PositiveRoot>,
    /// Indices into `positive` of the simple roots, in Dynkin order.
    pub simple: Vec<usize>,
    /// Each positive root expressed in the simple-root basis.
    simple_coords: Vec<Vec<Rat>>,
    /// Coefficient vector -> (positive root index, sign).
    sign_table: BTreeMap<Vec<Rat>, (usize, bool)>,
}

/// Number of variables of the ambient polynomial ring.
impl RootSystem {
    pub fn dim(&self) -> usize {
        self.rank
    }

    pub fn build(series: Series, rank: usize) -> Result<RootSystem> {
        if rank < 1 {
            return Err(invalid("rank must be at least 1"));
        }
        if series == Series::D && rank < 2 {
            return Err(invalid("series D needs rank at least 2"));
        }
        let n = rank;
        let mut positive: Vec<PositiveRoot> = Vec::new();
        let e = |i: usize| -> Vec<Rat> {
            let mut v = vec![Rat::zero(); n];
            v[i] = Rat::one();
            v
        };
        let add = |positive: &mut Vec<PositiveRoot>, form: Vec<Rat>, coroot: Vec<Rat>| {
            positive.push(PositiveRoot {
                form: LinearForm::new(form),
                coroot,
            });
        };
        match series {
            Series::A => {
                // x_i - x_j over 1 <= i < j <= n+1 with x_{n+1} eliminated.
                for i in 0..n {
                    for j in (i + 1)..=n {
                        if j < n {
                            let mut f = e(i);
                            f[j] = -Rat::one();
                            let mut c = e(i);
                            c[j] = -Rat::one();
                            add(&mut positive, f, c);
                        } else {
                            // x_i - x_{n+1} = x_i + (x_1 + ... + x_n)
                            let mut f = vec![Rat::one(); n];
                            f[i] += Rat::one();
                            add(&mut positive, f, e(i));
                        }
                    }
                }
            }
            Series::B | Series::C | Series::D => {
                for i in 0..n {
                    for j in (i + 1)..n {
                        let mut f = e(i);
                        f[j] = -Rat::one();
                        add(&mut positive, f.clone(), f);
                    }
                }
                for i in 0..n {
                    for j in (i + 1)..n {
                        let mut f = e(i);
                        f[j] = Rat::one();
                        add(&mut positive, f.clone(), f);
                    }
                }
                match series {
                    Series::B => {
                        for i in 0..n {
                            let two: Vec<Rat> = e(i).iter().map(|v| v + v).collect();
                            add(&mut positive, e(i), two);
                        }
                    }
                    Series::C => {
                        for i in 0..n {
                            let two: Vec<Rat> = e(i).iter().map(|v| v + v).collect();
                            add(&mut positive, two, e(i));
                        }
                    }
                    Series::A | Series::D => {}
                }
            }
        }

        // Simple roots in Dynkin order.
        let find = |positive: &[PositiveRoot], want: &LinearForm| -> usize {
            positive
                .iter()
                .position(|r| r.form == *want)
                .expect("simple root present")
        };
        let mut simple = Vec::with_capacity(n);
        match series {
            Series::A => {
                for i in 0..n {
                    let want = if i + 1 < n {
                        let mut f = e(i);
                        f[i + 1] = -Rat::one();
                        LinearForm::new(f)
                    } else {
                        let mut f = vec![Rat::one(); n];
                        f[n - 1] += Rat::one();
                        LinearForm::new(f)
                    };
                    simple.push(find(&positive, &want));
                }
            }
            Series::B | Series::C | Series::D => {
                for i in 0..n.saturating_sub(1) {
                    let mut f = e(i);
                    f[i + 1] = -Rat::one();
                    simple.push(find(&positive, &LinearForm::new(f)));
                }
                let last = match series {
                    Series::B => LinearForm::new(e(n - 1)),
                    Series::C => {
                        LinearForm::new(e(n - 1).iter().map(|v| v + v).collect())
                    }
                    Series::D => {
                        let mut f = e(n - 2);
                        f[n - 1] = Rat::one();
                        LinearForm::new(f)
                    }
                    Series::A => unreachable!(),
                };
                simple.push(find(&positive, &last));
            }
        }
        debug_assert_eq!(simple.len(), n);

        // Pairing sanity: every root pairs to 2 with its own coroot.
        for r in &positive {
            let p = r.form.eval(&r.coroot);
            assert_eq!(p, Rat::one() + Rat::one(), "coroot normalization");
        }

        // Coordinates of each positive root in the simple-root basis.
        let basis = Matrix::from_rows(
            simple
                .iter()
                .map(|&s| positive[s].form.coeffs.clone())
                .collect(),
        )
        .transpose();
        let inv = basis
            .inverse()
            .map_err(|_| invalid("simple roots do not form a basis"))?;
        let simple_coords: Vec<Vec<Rat>> = positive
            .iter()
            .map(|r| inv.mat_vec(&r.form.coeffs))
            .collect();

        let mut sign_table = BTreeMap::new();
        for (i, r) in positive.iter().enumerate() {
            sign_table.insert(r.form.coeffs.clone(), (i, true));
            sign_table.insert(r.form.neg().coeffs, (i, false));
        }

        Ok(RootSystem {
            series,
            rank,
            positive,
            simple,
            simple_coords,
            sign_table,
        })
    }

    /// Reflection in the given positive root as a matrix acting on
    /// coefficient vectors of linear forms: `c -> c - (v . c) a` for root
    /// vector `a` and coroot `v`.
    pub fn reflection_matrix(&self, root_idx: usize) -> Matrix {
        let root = &self.positive[root_idx];
        let n = self.rank;
        let mut m = Matrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                let v = m.get(i, j) - &(&root.form.coeffs[i] * &root.coroot[j]);
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn reflection(&self, root_idx: usize) -> WeylElement {
        let word = self
            .simple
            .iter()
            .position(|&s| s == root_idx)
            .map(|i| vec![i]);
        WeylElement {
            matrix: self.reflection_matrix(root_idx),
            word,
        }
    }

    /// Identify a coefficient vector as plus or minus a positive root.
    pub fn classify_form(&self, form: &LinearForm) -> Option<(usize, bool)> {
        self.sign_table.get(&form.coeffs).copied()
    }

    /// Whether the root lies in the subsystem spanned by the given simple
    /// subset (support of its simple-root coordinates).
    pub fn root_in_subset(&self, root_idx: usize, subset: &SimpleSubset) -> bool {
        self.simple_coords[root_idx]
            .iter()
            .enumerate()
            .all(|(i, c)| c.is_zero() || subset.contains(&i))
    }

    /// Positive roots of the subsystem generated by `subset`.
    pub fn positive_in_subset(&self, subset: &SimpleSubset) -> Vec<usize> {
        (0..self.positive.len())
            .filter(|&i| self.root_in_subset(i, subset))
            .collect()
    }

    /// Positive roots of `ambient` not lying in `k`.
    pub fn complement_positive(&self, ambient: &SimpleSubset, k: &SimpleSubset) -> Vec<usize> {
        (0..self.positive.len())
            .filter(|&i| self.root_in_subset(i, ambient) && !self.root_in_subset(i, k))
            .collect()
    }

    /// Count of positive roots sent negative by the matrix, relative to the
    /// positive system of `ambient`. For group elements this equals the
    /// Coxeter length within the ambient subsystem.
    pub fn inversions(&self, m: &Matrix, ambient: &SimpleSubset) -> usize {
        self.positive_in_subset(ambient)
            .into_iter()
            .filter(|&i| {
                let image = LinearForm::new(m.mat_vec(&self.positive[i].form.coeffs));
                let (_, pos) = self
                    .classify_form(&image)
                    .expect("Weyl images permute the root set");
                !pos
            })
            .count()
    }
}

/// Element of a Weyl group: a matrix acting on coefficient vectors of
/// linear forms, together with a shortest word in simple reflections when
/// one is known (indices are 0-based Dynkin positions).
#[derive(Clone, Debug)]
pub struct WeylElement {
    pub matrix: Matrix,
    pub word: Option<Vec<usize>>,
}

impl WeylElement {
    pub fn length(&self) -> usize {
        self.word.as_ref().map(|w| w.len()).unwrap_or(0)
    }

    pub fn apply_form(&self, l: &LinearForm) -> LinearForm {
        LinearForm::new(self.matrix.mat_vec(&l.coeffs))
    }

    /// Compact label such as `e` or `s1s3`, 1-based.
    pub fn label(&self) -> String {
        match &self.word {
            Some(w) if !w.is_empty() => w
                .iter()
                .map(|i| format!("s{}", i + 1))
                .collect::<Vec<_>>()
                .join(""),
            _ => "e".into(),
        }
    }
}

fn matrix_key(m: &Matrix) -> Vec<Rat> {
    let mut out = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        out.extend_from_slice(m.row(i));
    }
    out
}

/// A finite reflection group enumerated by closure of simple reflections.
/// Element 0 is the identity; breadth-first order makes stored words
/// shortest and the enumeration reproducible.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    pub elements: Vec<WeylElement>,
    /// Simple indices used as generators (an ambient parabolic subset).
    pub generator_simples: Vec<usize>,
    index: BTreeMap<Vec<Rat>, usize>,
}

impl WeylGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element_index(&self, m: &Matrix) -> Option<usize> {
        self.index.get(&matrix_key(m)).copied()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        let m = self.elements[a].matrix.mul(&self.elements[b].matrix);
        self.element_index(&m).expect("group is closed")
    }

    pub fn inverse(&self, a: usize) -> usize {
        let m = self.elements[a]
            .matrix
            .inverse()
            .expect("group elements are invertible");
        self.element_index(&m).expect("group is closed")
    }
}

/// Closure of the reflections at the given simple indices under
/// multiplication, up to the order cap.
pub fn generate_parabolic(
    rs: &RootSystem,
    simples: &SimpleSubset,
    cap: usize,
) -> Result<WeylGroup> {
    let gens: Vec<(usize, Matrix)> = simples
        .iter()
        .map(|&i| (i, rs.reflection_matrix(rs.simple[i])))
        .collect();
    let mut elements = vec![WeylElement {
        matrix: Matrix::identity(rs.rank),
        word: Some(vec![]),
    }];
    let mut index = BTreeMap::new();
    index.insert(matrix_key(&elements[0].matrix), 0usize);
    let mut queue: VecDeque<usize> = VecDeque::from([0]);
    while let Some(at) = queue.pop_front() {
        for (si, gm) in &gens {
            let m = elements[at].matrix.mul(gm);
            let key = matrix_key(&m);
            if index.contains_key(&key) {
                continue;
            }
            if elements.len() >= cap {
                return Err(GkmError::ResourceLimit(format!(
                    "group order exceeds the cap of {cap}"
                )));
            }
            let mut word = elements[at].word.clone().unwrap();
            word.push(*si);
            index.insert(key, elements.len());
            elements.push(WeylElement {
                matrix: m,
                word: Some(word),
            });
            queue.push_back(elements.len() - 1);
        }
    }
    Ok(WeylGroup {
        elements,
        generator_simples: simples.iter().copied().collect(),
        index,
    })
}

/// The full Weyl group of the root system.
pub fn generate_weyl_group(rs: &RootSystem, cap: usize) -> Result<WeylGroup> {
    generate_parabolic(rs, &full_subset(rs.rank), cap)
}

/// Left cosets `w W_K` of a parabolic subgroup inside an ambient parabolic
/// group, each represented by its unique minimal-length element.
#[derive(Clone, Debug)]
pub struct CosetSpace {
    pub group: WeylGroup,
    pub ambient: SimpleSubset,
    pub k: SimpleSubset,
    /// Element id of each representative, in discovery order (vertex order).
    pub rep_ids: Vec<usize>,
    pub lengths: Vec<usize>,
    /// Element id -> coset index.
    pub coset_of: Vec<usize>,
}

impl CosetSpace {
    pub fn count(&self) -> usize {
        self.rep_ids.len()
    }

    pub fn rep(&self, coset: usize) -> &WeylElement {
        &self.group.elements[self.rep_ids[coset]]
    }

    /// Coset containing the given group element.
    pub fn coset_of_matrix(&self, m: &Matrix) -> Option<usize> {
        self.group.element_index(m).map(|i| self.coset_of[i])
    }
}

pub fn coset_space(
    rs: &RootSystem,
    ambient: &SimpleSubset,
    k: &SimpleSubset,
    cap: usize,
) -> Result<CosetSpace> {
    if !k.is_subset(ambient) {
        return Err(invalid("isotropy subset must be contained in the ambient subset"));
    }
    let group = generate_parabolic(rs, ambient, cap)?;
    // Subgroup element ids generated by k.
    let mut sub_ids: Vec<usize> = Vec::new();
    {
        let mut seen = BTreeSet::new();
        let gen_ids: Vec<usize> = k
            .iter()
            .map(|&i| {
                group
                    .element_index(&rs.reflection_matrix(rs.simple[i]))
                    .expect("generator lies in the ambient group")
            })
            .collect();
        let mut queue = VecDeque::from([0usize]);
        seen.insert(0usize);
        while let Some(at) = queue.pop_front() {
            sub_ids.push(at);
            for &g in &gen_ids {
                let next = group.mul(at, g);
                if seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        sub_ids.sort_unstable();
    }

    let order = group.order();
    let mut coset_of = vec![usize::MAX; order];
    let mut rep_ids = Vec::new();
    let mut lengths = Vec::new();
    for id in 0..order {
        if coset_of[id] != usize::MAX {
            continue;
        }
        let coset = rep_ids.len();
        // Breadth-first enumeration makes the first member minimal-length.
        rep_ids.push(id);
        lengths.push(group.elements[id].length());
        for &s in &sub_ids {
            let member = group.mul(id, s);
            coset_of[member] = coset;
        }
    }
    Ok(CosetSpace {
        group,
        ambient: ambient.clone(),
        k: k.clone(),
        rep_ids,
        lengths,
        coset_of,
    })
}

/// Betti numbers of `G/K`: the histogram of minimal coset-representative
/// lengths. Sums to the coset count and is palindromic.
pub fn poincare_polynomial(cs: &CosetSpace) -> Vec<usize> {
    let top = cs.lengths.iter().copied().max().unwrap_or(0);
    let mut out = vec![0usize; top + 1];
    for &l in &cs.lengths {
        out[l] += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::max_group_order;

    fn rs(series: Series, rank: usize) -> RootSystem {
        RootSystem::build(series, rank).unwrap()
    }

    #[test]
    fn positive_root_counts() {
        assert_eq!(rs(Series::A, 2).positive.len(), 3);
        assert_eq!(
            rs(Series::B, 2)
                .positive
                .iter()
                .map(|r| r.form.clone())
                .collect::<Vec<_>>(),
            vec![
                LinearForm::from_ints(&[1, -1]),
                LinearForm::from_ints(&[1, 1]),
                LinearForm::from_ints(&[1, 0]),
                LinearForm::from_ints(&[0, 1]),
            ]
        );
        assert_eq!(rs(Series::C, 3).positive.len(), 9);
        assert_eq!(rs(Series::D, 2).positive.len(), 2);
        assert_eq!(rs(Series::D, 3).positive.len(), 6);
        assert!(RootSystem::build(Series::D, 1).is_err());
    }

    #[test]
    fn reflection_matrices_in_b2() {
        let b2 = rs(Series::B, 2);
        // e1 - e2 swaps the coordinates
        let swap = b2.reflection_matrix(0);
        assert_eq!(swap, Matrix::from_int_rows(&[&[0, 1], &[1, 0]]));
        // the short root e1 flips the first coordinate
        let idx = b2
            .positive
            .iter()
            .position(|r| r.form == LinearForm::from_ints(&[1, 0]))
            .unwrap();
        let flip = b2.reflection_matrix(idx);
        assert_eq!(flip, Matrix::from_int_rows(&[&[-1, 0], &[0, 1]]));
    }

    #[test]
    fn reflections_are_involutions() {
        let a3 = rs(Series::A, 3);
        for i in 0..a3.positive.len() {
            let m = a3.reflection_matrix(i);
            assert!(m.mul(&m).is_identity());
        }
    }

    #[test]
    fn group_orders() {
        let cap = max_group_order();
        assert_eq!(generate_weyl_group(&rs(Series::A, 2), cap).unwrap().order(), 6);
        assert_eq!(generate_weyl_group(&rs(Series::B, 2), cap).unwrap().order(), 8);
        assert_eq!(generate_weyl_group(&rs(Series::C, 2), cap).unwrap().order(), 8);
        assert_eq!(generate_weyl_group(&rs(Series::D, 3), cap).unwrap().order(), 24);
        assert_eq!(generate_weyl_group(&rs(Series::A, 3), cap).unwrap().order(), 24);
    }

    #[test]
    fn group_elements_permute_roots_and_lengths_match_inversions() {
        let a3 = rs(Series::A, 3);
        let w = generate_weyl_group(&a3, max_group_order()).unwrap();
        let ambient = full_subset(3);
        for el in &w.elements {
            for r in &a3.positive {
                let image = el.apply_form(&r.form);
                assert!(a3.classify_form(&image).is_some());
            }
            assert_eq!(el.length(), a3.inversions(&el.matrix, &ambient));
        }
    }

    #[test]
    fn order_cap_is_enforced() {
        let a3 = rs(Series::A, 3);
        assert!(matches!(
            generate_weyl_group(&a3, 10),
            Err(GkmError::ResourceLimit(_))
        ));
    }

    #[test]
    fn coset_spaces() {
        let a2 = rs(Series::A, 2);
        let full = full_subset(2);
        let cap = max_group_order();

        let cp2 = coset_space(&a2, &full, &[1].into_iter().collect(), cap).unwrap();
        assert_eq!(cp2.count(), 3);
        let mut lens = cp2.lengths.clone();
        lens.sort_unstable();
        assert_eq!(lens, vec![0, 1, 2]);

        let all = coset_space(&a2, &full, &SimpleSubset::new(), cap).unwrap();
        assert_eq!(all.count(), 6);

        let b2 = rs(Series::B, 2);
        let gr = coset_space(&b2, &full_subset(2), &[1].into_iter().collect(), cap).unwrap();
        assert_eq!(gr.count(), 4);
        assert_eq!(poincare_polynomial(&gr), vec![1, 1, 1, 1]);

        // K = the full simple set gives a single coset.
        let pt = coset_space(&a2, &full, &full, cap).unwrap();
        assert_eq!(pt.count(), 1);
    }

    #[test]
    fn poincare_polynomials() {
        let cap = max_group_order();
        let a2 = rs(Series::A, 2);
        let flag = coset_space(&a2, &full_subset(2), &SimpleSubset::new(), cap).unwrap();
        assert_eq!(poincare_polynomial(&flag), vec![1, 2, 2, 1]);

        let a3 = rs(Series::A, 3);
        let cp3 = coset_space(
            &a3,
            &full_subset(3),
            &[1, 2].into_iter().collect(),
            cap,
        )
        .unwrap();
        assert_eq!(poincare_polynomial(&cp3), vec![1, 1, 1, 1]);

        let d3 = rs(Series::D, 3);
        let quadric = coset_space(
            &d3,
            &full_subset(3),
            &[1, 2].into_iter().collect(),
            cap,
        )
        .unwrap();
        assert_eq!(poincare_polynomial(&quadric), vec![1, 1, 2, 1, 1]);
    }

    #[test]
    fn poincare_is_palindromic_and_sums_to_count() {
        let cap = max_group_order();
        for (series, rank, k) in [
            (Series::A, 3, vec![1usize]),
            (Series::B, 2, vec![1]),
            (Series::C, 2, vec![0]),
            (Series::D, 3, vec![0, 2]),
        ] {
            let r = rs(series, rank);
            let cs = coset_space(
                &r,
                &full_subset(rank),
                &k.into_iter().collect(),
                cap,
            )
            .unwrap();
            let p = poincare_polynomial(&cs);
            let mut rev = p.clone();
            rev.reverse();
            assert_eq!(p, rev, "{series}{rank}");
            assert_eq!(p.iter().sum::<usize>(), cs.count());
        }
    }

    #[test]
    fn parabolic_ambient_groups() {
        // The last two simple roots of D3 generate a 4-element group.
        let d3 = rs(Series::D, 3);
        let amb: SimpleSubset = [1, 2].into_iter().collect();
        let g = generate_parabolic(&d3, &amb, max_group_order()).unwrap();
        assert_eq!(g.order(), 4);
    }
}
