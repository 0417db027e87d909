//! Subspaces, kernels, minimal polynomials and primary components.

use crate::error::{bail, Result};
use crate::field::{Elem, Field};
use crate::matrix::{unit_vector, vec_is_zero, Matrix};
use crate::poly::Poly;

/// A subspace of `K^n` stored as the nonzero rows of a reduced row echelon
/// basis. Two subspaces are equal exactly when their stored bases agree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(field: Field, ambient: usize, vectors: &[Vec<Elem>]) -> Subspace {
        for v in vectors {
            assert_eq!(v.len(), ambient, "vector length does not match ambient dimension");
        }
        if vectors.is_empty() {
            return Subspace::zero(field, ambient);
        }
        let m = Matrix::from_rows(field, vectors).expect("rectangular");
        let (r, pivots) = m.rref();
        let basis = (0..pivots.len()).map(|i| r.row(i)).collect();
        Subspace { field, ambient, basis, pivots }
    }

    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace { field, ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: Field, ambient: usize) -> Subspace {
        let basis = (0..ambient).map(|i| unit_vector(field, ambient, i)).collect();
        Subspace { field, ambient, basis, pivots: (0..ambient).collect() }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    /// The echelon basis vectors.
    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis vectors as the columns of an `ambient x dim` matrix.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_columns(self.field, self.ambient, &self.basis)
    }

    /// Reduces `v` against the echelon basis; the result is zero exactly when `v` lies in the subspace.
    pub fn reduce(&self, v: &[Elem]) -> Vec<Elem> {
        let mut x = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if !x[p].is_zero() {
                let c = x[p].clone();
                for (xi, ri) in x.iter_mut().zip(row) {
                    if !ri.is_zero() {
                        *xi -= &(&c * ri);
                    }
                }
            }
        }
        x
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        assert_eq!(v.len(), self.ambient);
        vec_is_zero(&self.reduce(v))
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Coordinates of `v` in the echelon basis; `None` if `v` is outside.
    pub fn coordinates(&self, v: &[Elem]) -> Option<Vec<Elem>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::span(self.field, self.ambient, &vs)
    }

    /// Vectors `u` with `u . v = 0` for every `v` in the subspace.
    pub fn annihilator(&self) -> Subspace {
        if self.is_zero() {
            return Subspace::full(self.field, self.ambient);
        }
        let m = Matrix::from_rows(self.field, &self.basis).unwrap();
        Subspace::span(self.field, self.ambient, &m.kernel_vectors())
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        self.annihilator().sum(&other.annihilator()).annihilator()
    }

    /// Image of the subspace under `a`.
    pub fn image(&self, a: &Matrix) -> Subspace {
        let vs: Vec<Vec<Elem>> = self.basis.iter().map(|v| a.mul_vec(v)).collect();
        Subspace::span(self.field, a.rows(), &vs)
    }

    pub fn is_invariant(&self, a: &Matrix) -> bool {
        self.basis.iter().all(|v| self.contains(&a.mul_vec(v)))
    }
}

/// Null space of `a` as a subspace of `K^cols`.
pub fn kernel(a: &Matrix) -> Subspace {
    Subspace::span(a.field(), a.cols(), &a.kernel_vectors())
}

/// Column space of `a`.
pub fn column_space(a: &Matrix) -> Subspace {
    Subspace::span(a.field(), a.rows(), &a.columns())
}

/// Monic polynomial of least degree annihilating `v` under `a`.
pub fn vector_annihilator(a: &Matrix, v: &[Elem]) -> Poly {
    let f = a.field();
    // echelon rows of the Krylov vectors, each with its expression in powers of a
    let mut rows: Vec<(usize, Vec<Elem>, Vec<Elem>)> = Vec::new();
    let mut k = v.to_vec();
    for m in 0..=a.rows() {
        let mut x = k.clone();
        let mut comb = vec![f.zero(); m + 1];
        comb[m] = f.one();
        for (p, r, c) in &rows {
            if !x[*p].is_zero() {
                let t = x[*p].clone();
                for (xi, ri) in x.iter_mut().zip(r) {
                    if !ri.is_zero() {
                        *xi -= &(&t * ri);
                    }
                }
                for (ci, cc) in comb.iter_mut().zip(c) {
                    if !cc.is_zero() {
                        *ci -= &(&t * cc);
                    }
                }
            }
        }
        match x.iter().position(|e| !e.is_zero()) {
            None => return Poly::new(f, comb),
            Some(p) => {
                let inv = x[p].inv().unwrap();
                let x: Vec<Elem> = x.iter().map(|e| e * &inv).collect();
                let comb: Vec<Elem> = comb.iter().map(|e| e * &inv).collect();
                rows.push((p, x, comb));
            }
        }
        k = a.mul_vec(&k);
    }
    unreachable!("Krylov sequence must become dependent")
}

/// Minimal polynomial of a square matrix, verified by evaluation.
pub fn minimal_polynomial(a: &Matrix) -> Result<Poly> {
    if !a.is_square() {
        bail!(Dimension, "minimal polynomial of a non-square {}x{} matrix", a.rows(), a.cols());
    }
    let f = a.field();
    let n = a.rows();
    let mut m = Poly::one(f);
    for i in 0..n {
        let e = unit_vector(f, n, i);
        m = Poly::lcm(&m, &vector_annihilator(a, &e));
    }
    if !m.eval_matrix(a).is_zero() {
        bail!(Internal, "minimal polynomial does not annihilate the matrix");
    }
    Ok(m)
}

/// `ker pi(a)^k`; requires `pi^k` to divide the minimal polynomial of `a`.
pub fn primary_component(a: &Matrix, pi: &Poly, k: usize) -> Result<Subspace> {
    let m = minimal_polynomial(a)?;
    let pk = pi.pow(k);
    if !pk.divides(&m) {
        bail!(Domain, "({pi})^{k} does not divide the minimal polynomial {m}");
    }
    Ok(kernel(&pk.eval_matrix(a)))
}

/// Solves `t x = b` for triangular `t` (upper or lower is detected).
pub fn solve_triangular(t: &Matrix, b: &[Elem]) -> Result<Vec<Elem>> {
    if !t.is_square() || t.rows() != b.len() {
        bail!(Dimension, "triangular system of shape {}x{} with right side of length {}", t.rows(), t.cols(), b.len());
    }
    let n = t.rows();
    let upper = (0..n).all(|i| (0..i).all(|j| t[(i, j)].is_zero()));
    let lower = (0..n).all(|i| (i + 1..n).all(|j| t[(i, j)].is_zero()));
    if !upper && !lower {
        bail!(Validation, "matrix is not triangular");
    }
    if let Some(i) = (0..n).find(|&i| t[(i, i)].is_zero()) {
        bail!(Singular, "zero diagonal entry at position {i}");
    }
    let f = t.field();
    let mut x = vec![f.zero(); n];
    let order: Vec<usize> = if upper { (0..n).rev().collect() } else { (0..n).collect() };
    for &i in &order {
        let mut s = b[i].clone();
        for j in 0..n {
            if j != i && !t[(i, j)].is_zero() {
                s -= &(&t[(i, j)] * &x[j]);
            }
        }
        x[i] = &s / &t[(i, i)];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_polynomial_of_jordan_blocks() {
        let f = Field::Rational;
        let a = Matrix::from_ints(f, &[&[2, 1, 0, 0], &[0, 2, 0, 0], &[0, 0, 2, 0], &[0, 0, 0, 3]]);
        let m = minimal_polynomial(&a).unwrap();
        let expect = &Poly::from_ints(f, &[-2, 1]).pow(2) * &Poly::from_ints(f, &[-3, 1]);
        assert_eq!(m, expect);
        let v = primary_component(&a, &Poly::from_ints(f, &[-2, 1]), 2).unwrap();
        assert_eq!(v.dim(), 3);
        assert!(primary_component(&a, &Poly::from_ints(f, &[-2, 1]), 3).is_err());
        assert!(primary_component(&a, &Poly::from_ints(f, &[-5, 1]), 1).is_err());
    }

    #[test]
    fn subspace_operations() {
        let f = Field::Prime(7);
        let v = |xs: &[i64]| xs.iter().map(|&x| f.from_i64(x)).collect::<Vec<_>>();
        let u = Subspace::span(f, 3, &[v(&[1, 2, 0]), v(&[2, 4, 0])]);
        assert_eq!(u.dim(), 1);
        let w = Subspace::span(f, 3, &[v(&[0, 1, 0]), v(&[0, 0, 1])]);
        assert_eq!(u.sum(&w).dim(), 3);
        assert!(u.intersection(&w).is_zero());
        let x = Subspace::span(f, 3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        assert_eq!(x.intersection(&w), Subspace::span(f, 3, &[v(&[0, 3, 0])]));
        assert!(x.contains(&v(&[5, 6, 0])));
        assert!(!x.contains(&v(&[0, 0, 1])));
    }

    #[test]
    fn triangular_solves() {
        let f = Field::Rational;
        let t = Matrix::from_ints(f, &[&[2, 1], &[0, -1]]);
        let x = solve_triangular(&t, &[f.from_i64(3), f.from_i64(1)]).unwrap();
        assert_eq!(x, vec![f.from_i64(2), f.from_i64(-1)]);
        let l = Matrix::from_ints(f, &[&[1, 0], &[4, 2]]);
        let x = solve_triangular(&l, &[f.from_i64(1), f.from_i64(6)]).unwrap();
        assert_eq!(x, vec![f.from_i64(1), f.from_i64(1)]);
        let s = Matrix::from_ints(f, &[&[1, 1], &[0, 0]]);
        assert!(matches!(solve_triangular(&s, &[f.one(), f.one()]), Err(crate::Error::Singular(_))));
    }
}
