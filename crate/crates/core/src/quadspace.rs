//! Symmetric bilinear forms: radicals, complements, skew-adjoint maps,
//! diagonalization and isotropy.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{bail, Result};
use crate::field::{Elem, Field};
use crate::linalg::{kernel, Subspace};
use crate::matrix::{unit_vector, vec_is_zero, Matrix};

/// A finite-dimensional space with a symmetric bilinear form given by its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrthogonalSpace {
    gram: Matrix,
    regular: bool,
}

impl OrthogonalSpace {
    pub fn new(gram: Matrix) -> Result<OrthogonalSpace> {
        if !gram.is_square() {
            bail!(Dimension, "Gram matrix must be square, got {}x{}", gram.rows(), gram.cols());
        }
        if !gram.is_symmetric() {
            bail!(Validation, "Gram matrix is not symmetric");
        }
        let regular = gram.rows() == 0 || !gram.det().is_zero();
        Ok(OrthogonalSpace { gram, regular })
    }

    /// The space `K^n` with the identity Gram matrix.
    pub fn standard(field: Field, n: usize) -> OrthogonalSpace {
        OrthogonalSpace { gram: Matrix::identity(field, n), regular: true }
    }

    pub fn field(&self) -> Field {
        self.gram.field()
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn is_regular(&self) -> bool {
        self.regular
    }

    /// `phi(u, v)`.
    pub fn form(&self, u: &[Elem], v: &[Elem]) -> Elem {
        self.gram.bilinear(u, v)
    }

    /// `V^perp`, the kernel of the Gram matrix.
    pub fn radical(&self) -> Subspace {
        kernel(&self.gram)
    }

    /// `{v : phi(v, U) = 0}`.
    pub fn ortho_complement(&self, u: &Subspace) -> Subspace {
        if u.is_zero() {
            return Subspace::full(self.field(), self.dim());
        }
        let ub = Matrix::from_rows(self.field(), u.basis()).unwrap();
        kernel(&(&ub * &self.gram))
    }

    /// The first index pair `(i, j)` (0-based) where `A^T B + B A` is nonzero,
    /// or `None` when `A` is skew-adjoint.
    pub fn skew_violation(&self, a: &Matrix) -> Result<Option<(usize, usize)>> {
        if !a.is_square() || a.rows() != self.dim() {
            bail!(
                Dimension,
                "map of shape {}x{} on a space of dimension {}",
                a.rows(),
                a.cols(),
                self.dim()
            );
        }
        let s = &(&a.transpose() * &self.gram) + &(&self.gram * a);
        for i in 0..s.rows() {
            for j in 0..s.cols() {
                if !s[(i, j)].is_zero() {
                    return Ok(Some((i, j)));
                }
            }
        }
        Ok(None)
    }

    pub fn is_skew(&self, a: &Matrix) -> Result<bool> {
        Ok(self.skew_violation(a)?.is_none())
    }

    /// `(P, d)` with `P^T B P = diag(d)` and `P` invertible. The columns of
    /// `P` at zero entries of `d` span the radical.
    pub fn diagonalize(&self) -> (Matrix, Vec<Elem>) {
        let f = self.field();
        let n = self.dim();
        let mut m = self.gram.clone();
        let mut p = Matrix::identity(f, n);
        // congruence step: basis_j += c * basis_i
        fn add_multiple(m: &mut Matrix, p: &mut Matrix, j: usize, i: usize, c: &Elem) {
            let n = m.rows();
            for k in 0..n {
                let t = c * &m[(i, k)];
                m[(j, k)] += &t;
            }
            for k in 0..n {
                let t = c * &m[(k, i)];
                m[(k, j)] += &t;
            }
            for k in 0..n {
                let t = c * &p[(k, i)];
                p[(k, j)] += &t;
            }
        }
        fn swap(m: &mut Matrix, p: &mut Matrix, i: usize, j: usize) {
            let n = m.rows();
            m.swap_rows(i, j);
            for k in 0..n {
                let t = m[(k, i)].clone();
                m[(k, i)] = m[(k, j)].clone();
                m[(k, j)] = t;
                let t = p[(k, i)].clone();
                p[(k, i)] = p[(k, j)].clone();
                p[(k, j)] = t;
            }
        }
        for i in 0..n {
            if m[(i, i)].is_zero() {
                if let Some(j) = (i + 1..n).find(|&j| !m[(j, j)].is_zero()) {
                    swap(&mut m, &mut p, i, j);
                } else if let Some(j) = (i + 1..n).find(|&j| !m[(i, j)].is_zero()) {
                    let one = f.one();
                    add_multiple(&mut m, &mut p, i, j, &one);
                } else {
                    continue;
                }
            }
            let piv = m[(i, i)].clone();
            for j in i + 1..n {
                if !m[(i, j)].is_zero() {
                    let c = -(&m[(i, j)] / &piv);
                    add_multiple(&mut m, &mut p, j, i, &c);
                }
            }
        }
        let d = (0..n).map(|i| m[(i, i)].clone()).collect();
        (p, d)
    }

    pub fn isotropy_report(&self) -> Result<IsotropyReport> {
        self.isotropy_report_with(&IsotropyOptions::default())
    }

    pub fn isotropy_report_with(&self, opts: &IsotropyOptions) -> Result<IsotropyReport> {
        if !self.regular {
            bail!(Precondition, "isotropy analysis requires a regular form");
        }
        let (p, d) = self.diagonalize();
        match self.field() {
            Field::Prime(_) => Ok(self.report_finite(&p, &d)),
            Field::Rational => Ok(self.report_rational(&p, &d, opts)),
        }
    }

    fn report_finite(&self, p: &Matrix, d: &[Elem]) -> IsotropyReport {
        let f = self.field();
        let n = d.len();
        let disc = d.iter().fold(f.one(), |acc, x| &acc * x);
        let w = witt_index_finite(n, &disc);
        let witness = if w >= 1 { finite_witness(d).map(|u| p.mul_vec(&u)) } else { None };
        debug_assert_eq!(witness.is_some(), w >= 1);
        IsotropyReport {
            verdict: if w >= 1 { IsotropyVerdict::Isotropic } else { IsotropyVerdict::Anisotropic },
            witness,
            witt_index: Some(w),
            anisotropic_dim: Some(n - 2 * w),
            signature: None,
            diagonal: d.to_vec(),
        }
    }

    fn report_rational(&self, p: &Matrix, d: &[Elem], opts: &IsotropyOptions) -> IsotropyReport {
        let n = d.len();
        let pos = d.iter().filter(|x| x.sign() == Some(Ordering::Greater)).count();
        let neg = n - pos;
        let mut report = IsotropyReport {
            verdict: IsotropyVerdict::Undecided,
            witness: None,
            witt_index: None,
            anisotropic_dim: None,
            signature: Some((pos, neg)),
            diagonal: d.to_vec(),
        };
        if pos == 0 || neg == 0 {
            report.verdict = IsotropyVerdict::AnisotropicDefinite;
            report.witt_index = Some(0);
            report.anisotropic_dim = Some(n);
            return report;
        }
        if let Some(w) = self.rational_witness(p, d, opts) {
            report.verdict = IsotropyVerdict::Isotropic;
            report.witness = Some(w);
            if n <= 3 {
                report.witt_index = Some(1);
                report.anisotropic_dim = Some(n - 2);
            }
        }
        report
    }

    fn rational_witness(&self, p: &Matrix, d: &[Elem], opts: &IsotropyOptions) -> Option<Vec<Elem>> {
        let f = self.field();
        let n = d.len();
        if let Some(i) = (0..n).find(|&i| self.gram[(i, i)].is_zero()) {
            return Some(unit_vector(f, n, i));
        }
        for i in 0..n {
            for j in i + 1..n {
                if d[i].sign() == d[j].sign() {
                    continue;
                }
                if let Some(x) = (-(&d[j] / &d[i])).sqrt() {
                    let mut u = vec![f.zero(); n];
                    u[i] = x;
                    u[j] = f.one();
                    return Some(p.mul_vec(&u));
                }
            }
        }
        bounded_search(&self.gram, opts)
    }
}

/// Exact Witt index of a regular form over F_p from its dimension and discriminant.
pub fn witt_index_finite(n: usize, disc: &Elem) -> usize {
    if n == 0 {
        return 0;
    }
    if n % 2 == 1 {
        return (n - 1) / 2;
    }
    let sign = if (n / 2) % 2 == 0 { disc.one_like() } else { -disc.one_like() };
    if (&sign * disc).is_square() {
        n / 2
    } else {
        n / 2 - 1
    }
}

fn finite_witness(d: &[Elem]) -> Option<Vec<Elem>> {
    let n = d.len();
    if n < 2 {
        return None;
    }
    let f = d[0].field();
    if let Some(x) = (-(&d[1] / &d[0])).sqrt() {
        let mut u = vec![f.zero(); n];
        u[0] = x;
        u[1] = f.one();
        return Some(u);
    }
    if n < 3 {
        return None;
    }
    for x in f.elements().unwrap() {
        let rhs = -(&(&d[2] + &(&d[0] * &(&x * &x))) / &d[1]);
        if let Some(y) = rhs.sqrt() {
            let mut u = vec![f.zero(); n];
            u[0] = x;
            u[1] = y;
            u[2] = f.one();
            return Some(u);
        }
    }
    None
}

/// Vectors with integer coordinates of growing height, first nonzero entry positive.
fn bounded_search(gram: &Matrix, opts: &IsotropyOptions) -> Option<Vec<Elem>> {
    let f = gram.field();
    let n = gram.rows();
    let mut budget = opts.search_budget;
    for h in 1..=opts.search_height {
        let mut x = vec![-h; n];
        loop {
            let top = x.iter().map(|v| v.abs()).max().unwrap_or(0);
            let lead = x.iter().find(|&&v| v != 0).copied().unwrap_or(0);
            if top == h && lead > 0 {
                if budget == 0 {
                    return None;
                }
                budget -= 1;
                let v: Vec<Elem> = x.iter().map(|&c| f.from_i64(c)).collect();
                if gram.bilinear(&v, &v).is_zero() && !vec_is_zero(&v) {
                    return Some(v);
                }
            }
            // odometer step
            let mut k = 0;
            loop {
                if k == n {
                    break;
                }
                if x[k] < h {
                    x[k] += 1;
                    break;
                }
                x[k] = -h;
                k += 1;
            }
            if k == n {
                break;
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropyOptions {
    /// Largest absolute coordinate tried in the rational witness search.
    pub search_height: i64,
    /// Maximum number of candidate vectors evaluated.
    pub search_budget: usize,
}

impl Default for IsotropyOptions {
    fn default() -> Self {
        IsotropyOptions { search_height: 10, search_budget: 250_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IsotropyVerdict {
    /// Positive or negative definite over Q; no nonzero isotropic vectors.
    AnisotropicDefinite,
    /// No nonzero isotropic vectors (decided exactly over F_p).
    Anisotropic,
    Isotropic,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropyReport {
    pub verdict: IsotropyVerdict,
    pub witness: Option<Vec<Elem>>,
    /// Known exactly over F_p; over Q only when the verdict settles it.
    pub witt_index: Option<usize>,
    pub anisotropic_dim: Option<usize>,
    /// `(positive, negative)` counts of the diagonalization over Q.
    pub signature: Option<(usize, usize)>,
    pub diagonal: Vec<Elem>,
}

/// A map `A` on an orthogonal space with `A^T B + B A = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewEndo {
    space: OrthogonalSpace,
    matrix: Matrix,
}

impl SkewEndo {
    pub fn new(space: OrthogonalSpace, matrix: Matrix) -> Result<SkewEndo> {
        if matrix.field() != space.field() {
            bail!(Validation, "map over {} on a space over {}", matrix.field(), space.field());
        }
        if let Some((i, j)) = space.skew_violation(&matrix)? {
            bail!(Validation, "map is not skew-adjoint: (A^T B + B A)[{i}][{j}] is nonzero");
        }
        Ok(SkewEndo { space, matrix })
    }

    pub fn space(&self) -> &OrthogonalSpace {
        &self.space
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn gram(&self) -> &Matrix {
        self.space.gram()
    }

    pub fn field(&self) -> Field {
        self.space.field()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// The pair `(P^{-1} A P, P^T B P)`.
    pub fn change_basis(&self, p: &Matrix) -> Result<SkewEndo> {
        let pinv = p
            .inverse()
            .ok_or_else(|| crate::Error::Singular("change of basis is not invertible".into()))?;
        let a = &(&pinv * &self.matrix) * p;
        let b = self.gram().congruent(p);
        SkewEndo::new(OrthogonalSpace::new(b)?, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyperbolic_plane_diagonalization() {
        let f = Field::Rational;
        let s = OrthogonalSpace::new(Matrix::from_ints(f, &[&[0, 1], &[1, 0]])).unwrap();
        let (p, d) = s.diagonalize();
        assert_eq!(d, vec![f.from_i64(2), f.from_ratio(-1, 2)]);
        assert_eq!(s.gram().congruent(&p), Matrix::diagonal(f, &d));
        assert!(s.radical().is_zero());
        let r = s.isotropy_report().unwrap();
        assert_eq!(r.verdict, IsotropyVerdict::Isotropic);
        assert_eq!(r.witness, Some(vec![f.one(), f.zero()]));
        assert_eq!(r.witt_index, Some(1));
    }

    #[test]
    fn degenerate_forms() {
        let f = Field::Rational;
        let s = OrthogonalSpace::new(Matrix::from_ints(f, &[&[1, 0], &[0, 0]])).unwrap();
        assert!(!s.is_regular());
        assert_eq!(s.radical(), Subspace::span(f, 2, &[vec![f.zero(), f.one()]]));
        assert_eq!(s.diagonalize().1, vec![f.one(), f.zero()]);
        assert!(matches!(s.isotropy_report(), Err(crate::Error::Precondition(_))));
    }

    #[test]
    fn finite_field_witt_indices() {
        let f = Field::Prime(5);
        let s = OrthogonalSpace::standard(f, 3);
        let r = s.isotropy_report().unwrap();
        assert_eq!(r.verdict, IsotropyVerdict::Isotropic);
        let w = r.witness.unwrap();
        assert!(s.form(&w, &w).is_zero());
        // x^2 + y^2 over F_3 is anisotropic, over F_5 hyperbolic
        let r = OrthogonalSpace::standard(Field::Prime(3), 2).isotropy_report().unwrap();
        assert_eq!(r.witt_index, Some(0));
        let r = OrthogonalSpace::standard(f, 2).isotropy_report().unwrap();
        assert_eq!(r.witt_index, Some(1));
    }

    #[test]
    fn skew_check_reports_first_violation() {
        let f = Field::Rational;
        let s = OrthogonalSpace::standard(f, 2);
        assert!(s.is_skew(&Matrix::from_ints(f, &[&[0, 1], &[-1, 0]])).unwrap());
        assert_eq!(s.skew_violation(&Matrix::from_ints(f, &[&[1, 0], &[0, 0]])).unwrap(), Some((0, 0)));
        assert!(s.is_skew(&Matrix::zeros(f, 3, 3)).is_err());
    }
}
