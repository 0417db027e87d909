//! Lie algebras given by structure constants.

use crate::error::{bail, Result};
use crate::field::{Elem, Field};
use crate::linalg::{kernel, Subspace};
use crate::matrix::{vec_axpy, vec_is_zero, vec_scale, Matrix};
use crate::quadspace::OrthogonalSpace;

/// `c[i][j]` holds the coordinates of `[e_i, e_j]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LieAlgebra {
    field: Field,
    dim: usize,
    c: Vec<Vec<Vec<Elem>>>,
}

impl LieAlgebra {
    /// Builds the algebra from the brackets `[e_i, e_j]` with `i < j`;
    /// unlisted pairs are zero. Antisymmetry and Jacobi are enforced.
    pub fn new(field: Field, dim: usize, brackets: &[(usize, usize, Vec<Elem>)]) -> Result<LieAlgebra> {
        let mut c = vec![vec![vec![field.zero(); dim]; dim]; dim];
        for (i, j, v) in brackets {
            let (i, j) = (*i, *j);
            if i >= dim || j >= dim {
                bail!(Validation, "bracket index ({i}, {j}) out of range for dimension {dim}");
            }
            if v.len() != dim {
                bail!(Dimension, "bracket [e_{i}, e_{j}] has {} coordinates, expected {dim}", v.len());
            }
            if i == j {
                if !vec_is_zero(v) {
                    bail!(Validation, "[e_{i}, e_{i}] must vanish");
                }
                continue;
            }
            if !vec_is_zero(&c[i][j]) && c[i][j] != *v {
                bail!(Validation, "bracket [e_{i}, e_{j}] listed twice with different values");
            }
            c[i][j] = v.clone();
            c[j][i] = vec_scale(v, &-field.one());
        }
        let l = LieAlgebra { field, dim, c };
        if let Some((i, j, k)) = l.jacobi_check() {
            bail!(Validation, "Jacobi identity fails on basis triple ({i}, {j}, {k})");
        }
        Ok(l)
    }

    /// Builds without the Jacobi check (used by the checker's own tests).
    pub fn new_unchecked(field: Field, dim: usize, brackets: &[(usize, usize, Vec<Elem>)]) -> LieAlgebra {
        let mut c = vec![vec![vec![field.zero(); dim]; dim]; dim];
        for (i, j, v) in brackets {
            c[*i][*j] = v.clone();
            c[*j][*i] = vec_scale(v, &-field.one());
        }
        LieAlgebra { field, dim, c }
    }

    pub fn abelian(field: Field, dim: usize) -> LieAlgebra {
        LieAlgebra::new_unchecked(field, dim, &[])
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn structure(&self, i: usize, j: usize) -> &[Elem] {
        &self.c[i][j]
    }

    /// Nonzero brackets `[e_i, e_j]` with `i < j`.
    pub fn brackets(&self) -> Vec<(usize, usize, Vec<Elem>)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                if !vec_is_zero(&self.c[i][j]) {
                    out.push((i, j, self.c[i][j].clone()));
                }
            }
        }
        out
    }

    pub fn bracket(&self, u: &[Elem], v: &[Elem]) -> Vec<Elem> {
        let mut out = vec![self.field.zero(); self.dim];
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() || i == j {
                    continue;
                }
                out = vec_axpy(&out, &(ui * vj), &self.c[i][j]);
            }
        }
        out
    }

    /// Matrix of `ad u`.
    pub fn ad(&self, u: &[Elem]) -> Matrix {
        let cols: Vec<Vec<Elem>> = (0..self.dim)
            .map(|j| {
                let mut e = vec![self.field.zero(); self.dim];
                e[j] = self.field.one();
                self.bracket(u, &e)
            })
            .collect();
        Matrix::from_columns(self.field, self.dim, &cols)
    }

    fn basis_vector(&self, i: usize) -> Vec<Elem> {
        let mut e = vec![self.field.zero(); self.dim];
        e[i] = self.field.one();
        e
    }

    /// First basis triple `i < j < k` (0-based) on which Jacobi fails.
    pub fn jacobi_check(&self) -> Option<(usize, usize, usize)> {
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for k in j + 1..self.dim {
                    let ei = self.basis_vector(i);
                    let ej = self.basis_vector(j);
                    let ek = self.basis_vector(k);
                    let a = self.bracket(&self.c[i][j], &ek);
                    let b = self.bracket(&self.c[j][k], &ei);
                    let c = self.bracket(&self.c[k][i], &ej);
                    let s: Vec<Elem> = a.iter().zip(&b).zip(&c).map(|((x, y), z)| &(x + y) + z).collect();
                    if !vec_is_zero(&s) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn whole(&self) -> Subspace {
        Subspace::full(self.field, self.dim)
    }

    /// `[U, W]`.
    pub fn bracket_subspaces(&self, u: &Subspace, w: &Subspace) -> Subspace {
        let mut vs = Vec::new();
        for a in u.basis() {
            for b in w.basis() {
                let x = self.bracket(a, b);
                if !vec_is_zero(&x) {
                    vs.push(x);
                }
            }
        }
        Subspace::span(self.field, self.dim, &vs)
    }

    pub fn derived(&self) -> Subspace {
        self.bracket_subspaces(&self.whole(), &self.whole())
    }

    pub fn center(&self) -> Subspace {
        self.centralizer_mod(&Subspace::zero(self.field, self.dim))
    }

    /// `{x : [x, L] in z}`.
    fn centralizer_mod(&self, z: &Subspace) -> Subspace {
        let ann = z.annihilator();
        let mut rows: Vec<Vec<Elem>> = Vec::new();
        for j in 0..self.dim {
            // x -> [x, e_j] = -ad(e_j) x
            let m = self.ad(&self.basis_vector(j));
            for a in ann.basis() {
                let r: Vec<Elem> = (0..self.dim)
                    .map(|col| {
                        let mut s = self.field.zero();
                        for (row, ar) in a.iter().enumerate() {
                            if !ar.is_zero() {
                                s += &(ar * &m[(row, col)]);
                            }
                        }
                        s
                    })
                    .collect();
                if !vec_is_zero(&r) {
                    rows.push(r);
                }
            }
        }
        if rows.is_empty() {
            return self.whole();
        }
        kernel(&Matrix::from_rows(self.field, &rows).unwrap())
    }

    /// `L^1 = L, L^{k+1} = [L^k, L]`, listed until it stabilizes.
    pub fn lower_central_series(&self) -> Vec<Subspace> {
        let mut out = vec![self.whole()];
        loop {
            let next = self.bracket_subspaces(out.last().unwrap(), &self.whole());
            if next == *out.last().unwrap() {
                return out;
            }
            let done = next.is_zero();
            out.push(next);
            if done {
                return out;
            }
        }
    }

    /// `Z_1 = Z(L), Z_{k+1} = {x : [x, L] in Z_k}`, listed until it stabilizes.
    pub fn upper_central_series(&self) -> Vec<Subspace> {
        let mut out = vec![self.center()];
        loop {
            let next = self.centralizer_mod(out.last().unwrap());
            if next == *out.last().unwrap() {
                return out;
            }
            out.push(next);
        }
    }

    /// `L^(0) = L, L^(k+1) = [L^(k), L^(k)]`, listed until it stabilizes.
    pub fn derived_series(&self) -> Vec<Subspace> {
        let mut out = vec![self.whole()];
        loop {
            let last = out.last().unwrap();
            let next = self.bracket_subspaces(last, last);
            if next == *last {
                return out;
            }
            let done = next.is_zero();
            out.push(next);
            if done {
                return out;
            }
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last().unwrap().is_zero()
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().unwrap().is_zero()
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets().is_empty()
    }

    /// Largest `k` with `L^k != 0`, for nilpotent algebras.
    pub fn nilpotency_index(&self) -> Option<usize> {
        let s = self.lower_central_series();
        if s.last().unwrap().is_zero() {
            Some(s.len() - 1)
        } else {
            None
        }
    }

    /// Basis of the symmetric invariant bilinear forms.
    pub fn invariant_forms_basis(&self) -> Vec<Matrix> {
        let n = self.dim;
        let f = self.field;
        let idx = |a: usize, b: usize| -> usize {
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            a * n - a * (a + 1) / 2 + b
        };
        let unknowns = n * (n + 1) / 2;
        let mut rows: Vec<Vec<Elem>> = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in j..n {
                    // S([e_i, e_j], e_k) + S(e_j, [e_i, e_k]) = 0
                    let mut r = vec![f.zero(); unknowns];
                    for m in 0..n {
                        let a = &self.c[i][j][m];
                        if !a.is_zero() {
                            r[idx(m, k)] += a;
                        }
                        let b = &self.c[i][k][m];
                        if !b.is_zero() {
                            r[idx(j, m)] += b;
                        }
                    }
                    if !vec_is_zero(&r) {
                        rows.push(r);
                    }
                }
            }
        }
        let sols = if rows.is_empty() {
            Subspace::full(f, unknowns).basis().to_vec()
        } else {
            kernel(&Matrix::from_rows(f, &rows).unwrap()).basis().to_vec()
        };
        sols.iter()
            .map(|s| {
                let mut m = Matrix::zeros(f, n, n);
                for a in 0..n {
                    for b in 0..n {
                        m[(a, b)] = s[idx(a, b)].clone();
                    }
                }
                m
            })
            .collect()
    }

    pub fn quadratic_dimension(&self) -> usize {
        self.invariant_forms_basis().len()
    }

    /// Structure constants of a subalgebra in the echelon basis of `s`.
    pub fn subalgebra(&self, s: &Subspace) -> Result<LieAlgebra> {
        let b = s.basis();
        let d = b.len();
        let mut brackets = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                let x = self.bracket(&b[i], &b[j]);
                let Some(c) = s.coordinates(&x) else {
                    bail!(Validation, "subspace is not closed under the bracket");
                };
                if !vec_is_zero(&c) {
                    brackets.push((i, j, c));
                }
            }
        }
        Ok(LieAlgebra::new_unchecked(self.field, d, &brackets))
    }

    /// Structure constants in the basis given by the columns of `p`.
    pub fn change_basis(&self, p: &Matrix) -> Result<LieAlgebra> {
        let Some(pinv) = p.inverse() else {
            bail!(Singular, "change of basis is not invertible");
        };
        let cols = p.columns();
        let mut brackets = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let x = pinv.mul_vec(&self.bracket(&cols[i], &cols[j]));
                if !vec_is_zero(&x) {
                    brackets.push((i, j, x));
                }
            }
        }
        Ok(LieAlgebra::new_unchecked(self.field, self.dim, &brackets))
    }

    /// Tests `L^2 = Z(L)` of dimension one; on success returns the columns
    /// `v_1..v_n, w_1..w_n, z` with `[v_i, w_j] = delta_ij z`.
    pub fn is_heisenberg(&self) -> Option<Matrix> {
        let d = self.derived();
        let z = self.center();
        if d.dim() != 1 || d != z {
            return None;
        }
        let zv = z.basis()[0].clone();
        let p = *z.pivots().first().unwrap();
        let coef = |x: &[Elem]| x[p].clone();
        // complement of the centre: unit vectors off the pivot
        let mut pool: Vec<Vec<Elem>> = (0..self.dim).filter(|&i| i != p).map(|i| self.basis_vector(i)).collect();
        let mut vs = Vec::new();
        let mut ws = Vec::new();
        while let Some(v) = pool.first().cloned() {
            let Some(k) = pool.iter().position(|w| !coef(&self.bracket(&v, w)).is_zero()) else {
                return None;
            };
            let mut w = pool[k].clone();
            let c = coef(&self.bracket(&v, &w));
            w = vec_scale(&w, &c.inv().unwrap());
            let mut rest = Vec::new();
            for (i, u) in pool.iter().enumerate() {
                if i == 0 || i == k {
                    continue;
                }
                // u - omega(u, w) v + omega(u, v) w is orthogonal to v and w
                let a = coef(&self.bracket(u, &w));
                let b = coef(&self.bracket(u, &v));
                let mut x = vec_axpy(u, &-a, &v);
                x = vec_axpy(&x, &b, &w);
                rest.push(x);
            }
            vs.push(v);
            ws.push(w);
            pool = rest;
        }
        let mut cols = vs;
        cols.extend(ws);
        cols.push(zv);
        Some(Matrix::from_columns(self.field, self.dim, &cols))
    }
}

/// A Lie algebra with a regular invariant symmetric form on the same basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticLieAlgebra {
    pub algebra: LieAlgebra,
    pub form: OrthogonalSpace,
}

impl QuadraticLieAlgebra {
    pub fn new(algebra: LieAlgebra, form: OrthogonalSpace) -> Result<QuadraticLieAlgebra> {
        if algebra.dim() != form.dim() {
            bail!(Dimension, "algebra of dimension {} with a form of dimension {}", algebra.dim(), form.dim());
        }
        if !form.is_regular() {
            bail!(Precondition, "the invariant form must be regular");
        }
        if let Some((i, j, k)) = invariance_violation(&algebra, form.gram()) {
            bail!(Validation, "form is not invariant on basis triple ({i}, {j}, {k})");
        }
        Ok(QuadraticLieAlgebra { algebra, form })
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Orthogonal complement with respect to the invariant form.
    pub fn perp(&self, s: &Subspace) -> Subspace {
        self.form.ortho_complement(s)
    }

    /// Applies a change of basis (columns of `p`) to both algebra and form.
    pub fn change_basis(&self, p: &Matrix) -> Result<QuadraticLieAlgebra> {
        let algebra = self.algebra.change_basis(p)?;
        let form = OrthogonalSpace::new(self.form.gram().congruent(p))?;
        Ok(QuadraticLieAlgebra { algebra, form })
    }
}

/// First triple with `phi([e_i, e_j], e_k) + phi(e_j, [e_i, e_k]) != 0`.
pub fn invariance_violation(l: &LieAlgebra, gram: &Matrix) -> Option<(usize, usize, usize)> {
    let n = l.dim();
    for i in 0..n {
        for j in 0..n {
            for k in j..n {
                let a = dot_gram(gram, l.structure(i, j), k, true);
                let b = dot_gram(gram, l.structure(i, k), j, false);
                if !(&a + &b).is_zero() {
                    return Some((i, j, k));
                }
            }
        }
    }
    None
}

fn dot_gram(gram: &Matrix, v: &[Elem], k: usize, left: bool) -> Elem {
    let mut s = gram.field().zero();
    for (m, vm) in v.iter().enumerate() {
        if !vm.is_zero() {
            let g = if left { &gram[(m, k)] } else { &gram[(k, m)] };
            s += &(vm * g);
        }
    }
    s
}

/// Outcome of the quadratic dimension lower bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DqBound {
    /// `dim L - dim L^2`, which equals `dim Z(L)` for quadratic algebras.
    pub r: usize,
    pub bound: usize,
    pub dq: usize,
    pub holds: bool,
}

/// Checks `d_q >= 1 + r(r+1)/2`. Abelian inputs are rejected: there the
/// forms built from a complement of `L^2` already span every symmetric form.
pub fn dq_lower_bound_check(q: &QuadraticLieAlgebra) -> Result<DqBound> {
    if q.algebra.is_abelian() {
        bail!(Precondition, "the bound is checked on non-abelian algebras only");
    }
    let r = q.dim() - q.algebra.derived().dim();
    let bound = 1 + r * (r + 1) / 2;
    let dq = q.algebra.quadratic_dimension();
    Ok(DqBound { r, bound, dq, holds: dq >= bound })
}

/// `Z(L)` contained in `L^2`.
pub fn is_reduced(q: &QuadraticLieAlgebra) -> bool {
    q.algebra.derived().contains_subspace(&q.algebra.center())
}

/// Whether `m` lies in the span of `forms`.
pub fn in_span(forms: &[Matrix], m: &Matrix) -> bool {
    let flat = |x: &Matrix| -> Vec<Elem> { x.to_rows().into_iter().flatten().collect() };
    let f = m.field();
    let len = m.rows() * m.cols();
    let span = Subspace::span(f, len, &forms.iter().map(flat).collect::<Vec<_>>());
    span.contains(&flat(m))
}

/// Whether two lists of matrices span the same space.
pub fn same_span(a: &[Matrix], b: &[Matrix]) -> bool {
    a.iter().all(|m| in_span(b, m)) && b.iter().all(|m| in_span(a, m))
}
