//! Dense exact linear algebra over the rationals.
//!
//! Constraint systems stay small here (a few hundred columns), so dense
//! Gaussian elimination is the right tool. Rank computations run on
//! denominator-cleared integer rows with per-row gcd normalization, which
//! is considerably faster than eliminating with rational entries; kernel
//! bases are extracted with a plain rational reduced row echelon form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{invalid, Result};
use crate::poly::Rat;

/// Dense rational matrix, row major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        assert!(rows.iter().all(|row| row.len() == c));
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&v| Rat::from_integer(BigInt::from(v))).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = m.get(i, j) + &(a * other.get(k, j));
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    pub fn mat_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .fold(Rat::zero(), |x, y| x + y)
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.rows)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && rank(self) == self.rows
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(invalid("only square matrices can be inverted"));
        }
        let n = self.rows;
        let mut work: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                let mut aug = vec![Rat::zero(); n];
                aug[i] = Rat::one();
                row.extend(aug);
                row
            })
            .collect();
        let pivots = rref(&mut work);
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return Err(invalid("matrix is singular"));
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, work[i][n + j].clone());
            }
        }
        Ok(inv)
    }
}

/// In-place reduced row echelon form; returns the pivot column of each of
/// the leading rows. Deterministic: pivots are chosen as the first row with
/// a nonzero entry in the leftmost unfinished column.
pub fn rref(rows: &mut Vec<Vec<Rat>>) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(sel) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = rows[r][c].recip();
        for j in c..ncols {
            let v = &rows[r][j] * &inv;
            rows[r][j] = v;
        }
        for i in 0..nrows {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..ncols {
                    let v = &rows[i][j] - &(&f * &rows[r][j]);
                    rows[i][j] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Exact basis of the kernel `{v : m v = 0}`, one vector per free column,
/// in ascending free-column order.
pub fn nullspace(m: &Matrix) -> Vec<Vec<Rat>> {
    let mut rows = m.row_vecs();
    let pivots = rref(&mut rows);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..m.cols() {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); m.cols()];
        v[free] = Rat::one();
        for (ri, &pc) in pivots.iter().enumerate() {
            v[pc] = -rows[ri][free].clone();
        }
        basis.push(v);
    }
    basis
}

pub fn rank(m: &Matrix) -> usize {
    let mut red = IntReducer::new(m.cols());
    for i in 0..m.rows() {
        red.add_rat_row(m.row(i));
    }
    red.rank()
}

/// Incremental row-space builder over cleared-denominator integer rows.
///
/// `add_row` reduces the incoming row against the stored pivot rows by
/// integer cross-multiplication, divides out the row gcd to keep entries
/// small, and keeps the row when it contributes a new pivot.
pub struct IntReducer {
    cols: usize,
    // sorted by pivot column
    pivots: Vec<(usize, Vec<BigInt>)>,
}

impl IntReducer {
    pub fn new(cols: usize) -> Self {
        IntReducer {
            cols,
            pivots: Vec::new(),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn add_rat_row(&mut self, row: &[Rat]) -> bool {
        self.add_row(clear_denominators(row))
    }

    /// Returns true when the row enlarged the span.
    pub fn add_row(&mut self, mut row: Vec<BigInt>) -> bool {
        assert_eq!(row.len(), self.cols);
        for (pc, prow) in &self.pivots {
            if row[*pc].is_zero() {
                continue;
            }
            // row := row * prow[pc] - prow * row[pc], then normalize.
            let a = prow[*pc].clone();
            let b = row[*pc].clone();
            for j in 0..self.cols {
                row[j] = &row[j] * &a - &prow[j] * &b;
            }
            normalize_int_row(&mut row);
        }
        let Some(pc) = row.iter().position(|v| !v.is_zero()) else {
            return false;
        };
        normalize_int_row(&mut row);
        let at = self.pivots.partition_point(|(c, _)| *c < pc);
        self.pivots.insert(at, (pc, row));
        true
    }

    /// Whether the given row already lies in the span.
    pub fn contains(&self, row: &[Rat]) -> bool {
        let mut r = clear_denominators(row);
        for (pc, prow) in &self.pivots {
            if r[*pc].is_zero() {
                continue;
            }
            let a = prow[*pc].clone();
            let b = r[*pc].clone();
            for j in 0..self.cols {
                r[j] = &r[j] * &a - &prow[j] * &b;
            }
            normalize_int_row(&mut r);
        }
        r.iter().all(|v| v.is_zero())
    }
}

fn clear_denominators(row: &[Rat]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for v in row {
        if !v.is_zero() {
            lcm = lcm.lcm(v.denom());
        }
    }
    row.iter()
        .map(|v| v.numer() * (&lcm / v.denom()))
        .collect()
}

fn normalize_int_row(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for v in row.iter() {
        if !v.is_zero() {
            g = g.gcd(v);
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for v in row.iter_mut() {
        *v = &*v / &g;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, rat_int};

    #[test]
    fn nullspace_of_identity_is_trivial() {
        assert!(nullspace(&Matrix::identity(3)).is_empty());
    }

    #[test]
    fn nullspace_of_zero_matrix_is_everything() {
        let m = Matrix::zeros(2, 3);
        let b = nullspace(&m);
        assert_eq!(b.len(), 3);
    }

    #[test]
    fn nullspace_hand_example() {
        let m = Matrix::from_int_rows(&[&[1, 1, 0], &[0, 1, 1]]);
        let b = nullspace(&m);
        assert_eq!(b.len(), 1);
        // spanned by (1, -1, 1)
        let v = &b[0];
        let s = v[0].clone();
        assert!(!s.is_zero());
        assert_eq!(v[1], -s.clone());
        assert_eq!(v[2], s);
    }

    #[test]
    fn kernel_vectors_satisfy_system_and_rank_nullity() {
        let m = Matrix::from_int_rows(&[&[2, 4, 6, 0], &[1, 2, 3, 1], &[0, 0, 0, 2]]);
        let b = nullspace(&m);
        for v in &b {
            assert!(m.mat_vec(v).iter().all(|x| x.is_zero()));
        }
        assert_eq!(rank(&m) + b.len(), m.cols());
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_int_rows(&[&[1, 2], &[3, 5]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(inv.mul(&m).is_identity());
    }

    #[test]
    fn singular_inverse_fails() {
        let m = Matrix::from_int_rows(&[&[1, 2], &[2, 4]]);
        assert!(m.inverse().is_err());
    }

    #[test]
    fn reducer_agrees_with_rational_rank() {
        let m = Matrix::from_rows(vec![
            vec![rat(1, 2), rat(1, 3), rat_int(0)],
            vec![rat(3, 2), rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(0), rat(7, 5)],
        ]);
        assert_eq!(rank(&m), 2);
        let mut red = IntReducer::new(3);
        assert!(red.add_rat_row(m.row(0)));
        assert!(!red.add_rat_row(m.row(1)));
        assert!(red.add_rat_row(m.row(2)));
        assert!(red.contains(m.row(1)));
    }
}
