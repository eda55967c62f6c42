//! Exact multivariate polynomials over the rationals.
//!
//! Everything downstream works in the symmetric algebra of a fixed torus
//! dual `t*`, i.e. the polynomial ring `Q[x_1, ..., x_n]`. Edge weights and
//! roots are linear forms; cohomology classes assign a polynomial to every
//! graph vertex. All arithmetic is exact: divisibility of a difference by a
//! linear form is an algebraic identity, so floating point is never used.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{invalid, Result};
use crate::linalg::Matrix;

/// Exact rational scalar used throughout the crate.
pub type Rat = BigRational;

/// Shorthand for a rational from an integer pair.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for an integer rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Exponent vector of a monomial; the length is the ambient variable count.
///
/// The ordering is graded lexicographic: compare total degree first, then
/// the exponent vectors lexicographically. This makes every enumeration of
/// monomials in the crate reproducible.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.degree(), &self.0).cmp(&(other.degree(), &other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of total degree `d` in `n` variables, in descending
/// graded-lexicographic order (`x_1^d` first). There are `C(d+n-1, n-1)`.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    assert!(n >= 1);
    let mut out = Vec::with_capacity(binomial(d as usize + n - 1, n - 1));
    let mut current = vec![0u32; n];
    fill(&mut out, &mut current, 0, d, n);
    out.sort();
    out.reverse();
    return out;

    fn fill(out: &mut Vec<Monomial>, cur: &mut Vec<u32>, i: usize, rem: u32, n: usize) {
        if i == n - 1 {
            cur[i] = rem;
            out.push(Monomial(cur.clone()));
            return;
        }
        for e in 0..=rem {
            cur[i] = e;
            fill(out, cur, i + 1, rem - e, n);
        }
        cur[i] = 0;
    }
}

/// Binomial coefficient as usize; panics on overflow (desk scale only).
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// A linear form on `t`, stored as its coefficient vector in the basis dual
/// to the coordinates of `t`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearForm {
    pub coeffs: Vec<Rat>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<Rat>) -> Self {
        LinearForm { coeffs }
    }

    pub fn zero(nvars: usize) -> Self {
        LinearForm {
            coeffs: vec![Rat::zero(); nvars],
        }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        LinearForm {
            coeffs: coeffs.iter().map(|&c| rat_int(c)).collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Index of the lowest-index nonzero coefficient.
    pub fn pivot(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn neg(&self) -> LinearForm {
        LinearForm {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &LinearForm) -> LinearForm {
        LinearForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, s: &Rat) -> LinearForm {
        LinearForm {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Evaluate on a vector of `t` written in coordinates.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        self.coeffs
            .iter()
            .zip(point)
            .map(|(c, p)| c * p)
            .fold(Rat::zero(), |a, b| a + b)
    }

    /// Whether the two forms span the same line (both zero counts as true
    /// only when both are zero).
    pub fn parallel(&self, other: &LinearForm) -> bool {
        match (self.pivot(), other.pivot()) {
            (None, None) => true,
            (Some(i), Some(j)) if i == j => {
                let s = &other.coeffs[i] / &self.coeffs[i];
                self.coeffs
                    .iter()
                    .zip(&other.coeffs)
                    .all(|(a, b)| &(a * &s) == b)
            }
            _ => false,
        }
    }

    pub fn as_poly(&self) -> Polynomial {
        let mut p = Polynomial::zero(self.nvars());
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                p.terms.insert(Monomial::var(self.nvars(), i), c.clone());
            }
        }
        p
    }

    /// Basis of the hyperplane `self = 0` in `t`, as coordinate vectors.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let n = self.nvars();
        let Some(k) = self.pivot() else {
            // zero form: whole space
            return (0..n)
                .map(|i| {
                    let mut v = vec![Rat::zero(); n];
                    v[i] = Rat::one();
                    v
                })
                .collect();
        };
        let mut out = Vec::with_capacity(n - 1);
        for i in 0..n {
            if i == k {
                continue;
            }
            let mut v = vec![Rat::zero(); n];
            v[i] = Rat::one();
            v[k] = -&self.coeffs[i] / &self.coeffs[k];
            out.push(v);
        }
        out
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_poly())
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Invariants: no zero coefficients are stored and every monomial has
/// exponent length equal to `nvars`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.terms.insert(Monomial::var(nvars, i), Rat::one());
        p
    }

    pub fn monomial(nvars: usize, m: Monomial, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            assert_eq!(m.0.len(), nvars);
            p.terms.insert(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    /// Total degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    /// The degree-`d` homogeneous component.
    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        let mut p = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            if m.degree() == d {
                p.terms.insert(m.clone(), c.clone());
            }
        }
        p
    }

    fn insert(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Rat) -> Polynomial {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.insert(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rat) -> Polynomial {
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            out.insert(ma.mul(m), ca * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut out = Self::one(self.nvars);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= &point[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Ring homomorphism sending `x_i` to `images[i]`. The images may live
    /// in a ring with a different variable count.
    pub fn substitute_images(&self, images: &[LinearForm]) -> Polynomial {
        assert_eq!(images.len(), self.nvars);
        let out_vars = images
            .first()
            .map(|l| l.nvars())
            .unwrap_or(self.nvars);
        // Cache powers of each image.
        let max_exp: Vec<u32> = (0..self.nvars)
            .map(|i| self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0))
            .collect();
        let powers: Vec<Vec<Polynomial>> = images
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let mut v = vec![Polynomial::one(out_vars)];
                let lp = l.as_poly();
                for e in 1..=max_exp[i] {
                    let prev = v[(e - 1) as usize].clone();
                    v.push(prev.mul(&lp));
                }
                v
            })
            .collect();
        let mut out = Polynomial::zero(out_vars);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(out_vars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&powers[i][e as usize]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Divide by a linear form: returns the quotient and the canonical
    /// remainder obtained by eliminating the pivot variable of `l` (its
    /// lowest-index nonzero coefficient) via `l = 0`. The identity
    /// `self = q * l + r` holds exactly, and `r` is free of the pivot
    /// variable, so `r` is zero exactly when `l` divides `self`.
    pub fn reduce_by_linear(&self, l: &LinearForm) -> Result<(Polynomial, Polynomial)> {
        let k = l
            .pivot()
            .ok_or_else(|| invalid("division by the zero linear form"))?;
        if l.nvars() != self.nvars {
            return Err(invalid(format!(
                "variable count mismatch: polynomial has {}, form has {}",
                self.nvars,
                l.nvars()
            )));
        }
        let lead = l.coeffs[k].clone();
        let mut q = Polynomial::zero(self.nvars);
        let mut r = self.clone();
        let lp = l.as_poly();
        loop {
            // Largest remaining term containing the pivot variable.
            let Some((m, c)) = r
                .terms
                .iter()
                .rev()
                .find(|(m, _)| m.0[k] > 0)
                .map(|(m, c)| (m.clone(), c.clone()))
            else {
                break;
            };
            let mut m1 = m.clone();
            m1.0[k] -= 1;
            let qc = &c / &lead;
            q.insert(m1.clone(), qc.clone());
            let chunk = lp.mul_monomial(&m1, &qc);
            r = r.sub(&chunk);
        }
        Ok((q, r))
    }

    pub fn to_string_with(&self, names: &dyn Fn(usize) -> String) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts: Vec<String> = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names(i)),
                    _ => factors.push(format!("{}^{}", names(i), e)),
                }
            }
            let body = factors.join("*");
            let piece = if body.is_empty() {
                format!("{}", c)
            } else if c.is_one() {
                body
            } else if (-c).is_one() {
                format!("-{}", body)
            } else {
                format!("{}*{}", c, body)
            };
            parts.push(piece);
        }
        let mut s = String::new();
        for (i, piece) in parts.iter().enumerate() {
            if i == 0 {
                s.push_str(piece);
            } else if let Some(stripped) = piece.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(stripped);
            } else {
                s.push_str(" + ");
                s.push_str(piece);
            }
        }
        s
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_with(&|i| format!("x{}", i + 1)))
    }
}

/// Exact division test by a linear form. Returns the quotient and whether
/// the division was exact.
pub fn divide_by_linear(p: &Polynomial, l: &LinearForm) -> Result<(Polynomial, bool)> {
    let (q, r) = p.reduce_by_linear(l)?;
    Ok((q, r.is_zero()))
}

/// Canonical representative of `p` modulo the principal ideal generated by
/// a nonzero linear form: the pivot variable of `l` is eliminated, so the
/// result is idempotent under repeated reduction and zero exactly when `l`
/// divides `p`.
pub fn canonical_remainder(p: &Polynomial, l: &LinearForm) -> Result<Polynomial> {
    let (_, r) = p.reduce_by_linear(l)?;
    Ok(r)
}

/// The substitution `p(x) -> p(m x)` taken row-wise: variable `x_i` is
/// replaced by the linear combination given by row `i` of `m`. Requires a
/// square invertible matrix so that the substitution is a ring automorphism.
pub fn substitute_linear(p: &Polynomial, m: &Matrix) -> Result<Polynomial> {
    if m.rows() != m.cols() || m.rows() != p.nvars() {
        return Err(invalid(format!(
            "substitution matrix must be square of size {}, got {}x{}",
            p.nvars(),
            m.rows(),
            m.cols()
        )));
    }
    if !m.is_invertible() {
        return Err(invalid("substitution matrix is singular"));
    }
    let images: Vec<LinearForm> = (0..m.rows()).map(|i| LinearForm::new(m.row(i).to_vec())).collect();
    Ok(p.substitute_images(&images))
}

/// Extend the linear map `w` on coefficient vectors of forms to an algebra
/// map on polynomials: `x_i` maps to the form `w * e_i` (column `i`).
pub fn apply_form_map(p: &Polynomial, w: &Matrix) -> Polynomial {
    assert_eq!(w.rows(), w.cols());
    assert_eq!(w.cols(), p.nvars());
    let images: Vec<LinearForm> = (0..w.cols())
        .map(|i| LinearForm::new((0..w.rows()).map(|r| w.get(r, i).clone()).collect()))
        .collect();
    p.substitute_images(&images)
}

/// Apply the linear map to a form directly (matrix times coefficient vector).
pub fn map_form(w: &Matrix, l: &LinearForm) -> LinearForm {
    LinearForm::new(w.mat_vec(&l.coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, i)
    }

    #[test]
    fn grlex_order_of_monomials() {
        assert_eq!(monomials_of_degree(2, 0), vec![Monomial(vec![0, 0])]);
        assert_eq!(
            monomials_of_degree(2, 1),
            vec![Monomial(vec![1, 0]), Monomial(vec![0, 1])]
        );
        let m32 = monomials_of_degree(3, 2);
        assert_eq!(m32.len(), 6);
        assert_eq!(m32[0], Monomial(vec![2, 0, 0]));
        assert_eq!(m32[5], Monomial(vec![0, 0, 2]));
        assert_eq!(monomials_of_degree(3, 2).len(), binomial(4, 2));
    }

    #[test]
    fn difference_of_squares_divides() {
        // (x1^2 - x2^2) / (x1 - x2) = x1 + x2
        let p = x(2, 0).mul(&x(2, 0)).sub(&x(2, 1).mul(&x(2, 1)));
        let l = LinearForm::from_ints(&[1, -1]);
        let (q, exact) = divide_by_linear(&p, &l).unwrap();
        assert!(exact);
        assert_eq!(q, x(2, 0).add(&x(2, 1)));
    }

    #[test]
    fn independent_variable_does_not_divide() {
        let p = x(2, 0);
        let l = LinearForm::from_ints(&[0, 1]);
        let (q, exact) = divide_by_linear(&p, &l).unwrap();
        assert!(!exact);
        assert!(q.is_zero());
    }

    #[test]
    fn cubic_multiple_divides_back() {
        // (x1-x2)^3 (x1+x2) / (x1-x2) = (x1-x2)^2 (x1+x2); checked by
        // multiplying the quotient back.
        let d = x(2, 0).sub(&x(2, 1));
        let s = x(2, 0).add(&x(2, 1));
        let p = d.pow(3).mul(&s);
        let l = LinearForm::from_ints(&[1, -1]);
        let (q, exact) = divide_by_linear(&p, &l).unwrap();
        assert!(exact);
        assert_eq!(q, d.pow(2).mul(&s));
        assert_eq!(q.mul(&l.as_poly()), p);
    }

    #[test]
    fn canonical_remainder_examples() {
        // x1 mod (x1 - x2) = x2
        let r = canonical_remainder(&x(2, 0), &LinearForm::from_ints(&[1, -1])).unwrap();
        assert_eq!(r, x(2, 1));
        // (x1 + x2) mod (x1 + x2) = 0
        let p = x(2, 0).add(&x(2, 1));
        let r = canonical_remainder(&p, &LinearForm::from_ints(&[1, 1])).unwrap();
        assert!(r.is_zero());
        // x1^2 mod (x1 - 2 x2) = 4 x2^2
        let r = canonical_remainder(&x(2, 0).pow(2), &LinearForm::from_ints(&[1, -2])).unwrap();
        assert_eq!(r, x(2, 1).pow(2).scale(&rat_int(4)));
    }

    #[test]
    fn remainder_is_idempotent() {
        let p = x(2, 0).pow(3).add(&x(2, 1).pow(2));
        let l = LinearForm::from_ints(&[2, 3]);
        let r = canonical_remainder(&p, &l).unwrap();
        let r2 = canonical_remainder(&r, &l).unwrap();
        assert_eq!(r, r2);
    }

    #[test]
    fn zero_form_is_rejected() {
        assert!(divide_by_linear(&x(2, 0), &LinearForm::zero(2)).is_err());
    }

    #[test]
    fn substitution_examples() {
        let id = Matrix::identity(2);
        assert_eq!(substitute_linear(&x(2, 0), &id).unwrap(), x(2, 0));
        let swap = Matrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(substitute_linear(&x(2, 0), &swap).unwrap(), x(2, 1));
        // Reflection of the root x1 - x2 in two variables fixes x1*x2.
        let refl = Matrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        let p = x(2, 0).mul(&x(2, 1));
        assert_eq!(substitute_linear(&p, &refl).unwrap(), p);
    }

    #[test]
    fn singular_substitution_is_rejected() {
        let m = Matrix::from_int_rows(&[&[1, 1], &[1, 1]]);
        assert!(substitute_linear(&x(2, 0), &m).is_err());
    }

    #[test]
    fn display_is_readable() {
        let p = x(2, 0).pow(2).sub(&x(2, 1).scale(&rat(3, 2)));
        assert_eq!(p.to_string(), "x1^2 - 3/2*x2");
    }
}
