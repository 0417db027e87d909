//! Primary and orthogonal decompositions of skew-adjoint maps and their
//! canonical matrix pairs.
//!
//! All constructions are recursive: a block is split off, and the search
//! continues on its orthogonal complement. Vector choices scan echelon bases
//! and take the first admissible vector, so certificates are reproducible.

use std::collections::BTreeMap;

use crate::error::{bail, Error, Result};
use crate::factor::{factor_poly_with, FactorOptions};
use crate::field::{Elem, Field, SquareClass};
use crate::linalg::{kernel, minimal_polynomial, solve_triangular, Subspace};
use crate::matrix::{vec_axpy, vec_is_zero, vec_scale, Matrix};
use crate::poly::Poly;
use crate::quadspace::{IsotropyVerdict, OrthogonalSpace, SkewEndo};

/// One irreducible factor of the minimal polynomial with its primary component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimaryFactor {
    pub factor: Poly,
    pub multiplicity: usize,
    pub component: Subspace,
    /// Index of the factor `pi*`; `None` when `pi*` does not divide the
    /// minimal polynomial, in which case the component lies in the radical.
    pub partner: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimarySplit {
    pub minimal_polynomial: Poly,
    pub factors: Vec<PrimaryFactor>,
}

pub fn primary_split(f: &SkewEndo) -> Result<PrimarySplit> {
    primary_split_with(f, &FactorOptions::default())
}

pub fn primary_split_with(f: &SkewEndo, opts: &FactorOptions) -> Result<PrimarySplit> {
    let a = f.matrix();
    let m = minimal_polynomial(a)?;
    let fs = factor_poly_with(&m, opts)?;
    let stars: Vec<Poly> = fs.iter().map(|(p, _)| p.star()).collect::<Result<_>>()?;
    let mut factors = Vec::with_capacity(fs.len());
    for (i, (p, k)) in fs.iter().enumerate() {
        let component = kernel(&p.pow(*k).eval_matrix(a));
        let partner = fs.iter().position(|(q, _)| *q == stars[i]);
        factors.push(PrimaryFactor { factor: p.clone(), multiplicity: *k, component, partner });
    }
    Ok(PrimarySplit { minimal_polynomial: m, factors })
}

/// `V = V0 + V1 + V2 + V3`: the generalized kernel, self-paired factors
/// other than `x`, cross-paired factors, and unpaired factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourPartSplit {
    pub v0: Subspace,
    pub v1: Subspace,
    pub v2: Subspace,
    pub v3: Subspace,
}

pub fn four_part_split(f: &SkewEndo) -> Result<FourPartSplit> {
    let split = primary_split(f)?;
    let field = f.field();
    let n = f.dim();
    let mut parts = [
        Subspace::zero(field, n),
        Subspace::zero(field, n),
        Subspace::zero(field, n),
        Subspace::zero(field, n),
    ];
    for (i, pf) in split.factors.iter().enumerate() {
        let slot = match pf.partner {
            _ if pf.factor.is_x() => 0,
            Some(j) if j == i => 1,
            Some(_) => 2,
            None => 3,
        };
        parts[slot] = parts[slot].sum(&pf.component);
    }
    let space = f.space();
    for i in 0..4 {
        for j in i + 1..4 {
            for u in parts[i].basis() {
                for v in parts[j].basis() {
                    if !space.form(u, v).is_zero() {
                        bail!(Internal, "parts {i} and {j} of the orthogonal split are not orthogonal");
                    }
                }
            }
        }
    }
    let [v0, v1, v2, v3] = parts;
    Ok(FourPartSplit { v0, v1, v2, v3 })
}

/// Layout of an odd zero-eigenvalue block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OddForm {
    /// `(J_{2n+1}(0), mu * antidiag(1, -1, ..., 1))`.
    Raw,
    /// Jordan blocks of size n on either side of a middle vector, Gram
    /// `(-1)^n mu` times the exchange pattern.
    Standard,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockKind {
    /// `(diag(J_n(l), -J_n(l)^T), [[0, I], [I, 0]])` for a nonzero eigenvalue `l`.
    Paired { eigenvalue: Elem, n: usize },
    /// The paired shape with eigenvalue zero; `n` is even.
    ZeroEven { n: usize },
    /// Size `2n + 1` with scalar `mu`.
    /// `mu_class` is `None` over Q when factoring `mu` exceeds the trial bound.
    ZeroOdd { n: usize, mu: Elem, mu_class: Option<SquareClass>, form: OddForm },
    /// `([[0, -mu], [1, 0]], diag(s, mu * s))` on an anisotropic plane.
    Spectral { mu: Elem, scale: Elem },
}

/// A block of a canonical pair with its matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalBlock {
    pub kind: BlockKind,
    pub a: Matrix,
    pub b: Matrix,
}

fn jordan(field: Field, n: usize, l: &Elem) -> Matrix {
    let mut m = Matrix::zeros(field, n, n);
    for i in 0..n {
        m[(i, i)] = l.clone();
        if i + 1 < n {
            m[(i, i + 1)] = field.one();
        }
    }
    m
}

fn exchange(field: Field, n: usize) -> Matrix {
    let mut b = Matrix::zeros(field, 2 * n, 2 * n);
    for i in 0..n {
        b[(i, n + i)] = field.one();
        b[(n + i, i)] = field.one();
    }
    b
}

impl CanonicalBlock {
    pub fn paired(eigenvalue: &Elem, n: usize) -> CanonicalBlock {
        let field = eigenvalue.field();
        let j = jordan(field, n, eigenvalue);
        let a = Matrix::block_diag(field, &[j.clone(), -&j.transpose()]);
        let kind = if eigenvalue.is_zero() {
            BlockKind::ZeroEven { n }
        } else {
            BlockKind::Paired { eigenvalue: eigenvalue.clone(), n }
        };
        CanonicalBlock { kind, a, b: exchange(field, n) }
    }

    pub fn zero_even(field: Field, n: usize) -> CanonicalBlock {
        CanonicalBlock::paired(&field.zero(), n)
    }

    pub fn zero_odd(n: usize, mu: &Elem, form: OddForm) -> Result<CanonicalBlock> {
        let field = mu.field();
        let mu_class = match mu.square_class() {
            Ok(c) => Some(c),
            Err(e) if e.is_capability() => None,
            Err(e) => return Err(e),
        };
        let size = 2 * n + 1;
        let mut a = Matrix::zeros(field, size, size);
        let mut b = Matrix::zeros(field, size, size);
        match form {
            OddForm::Raw => {
                a = jordan(field, size, &field.zero());
                for s in 0..size {
                    b[(s, 2 * n - s)] = if s % 2 == 0 { mu.clone() } else { -mu };
                }
            }
            OddForm::Standard => {
                for i in 0..n.saturating_sub(1) {
                    a[(i, i + 1)] = field.one();
                }
                if n > 0 {
                    a[(n, 0)] = field.one();
                    a[(n + 1, n)] = -field.one();
                }
                for j in 0..n.saturating_sub(1) {
                    a[(n + 2 + j, n + 1 + j)] = -field.one();
                }
                let g = if n % 2 == 0 { mu.clone() } else { -mu };
                for i in 0..n {
                    b[(i, n + 1 + i)] = g.clone();
                    b[(n + 1 + i, i)] = g.clone();
                }
                b[(n, n)] = g;
            }
        }
        Ok(CanonicalBlock { kind: BlockKind::ZeroOdd { n, mu: mu.clone(), mu_class, form }, a, b })
    }

    pub fn spectral(mu: &Elem, scale: &Elem) -> CanonicalBlock {
        let field = mu.field();
        let mut a = Matrix::zeros(field, 2, 2);
        a[(0, 1)] = -mu;
        a[(1, 0)] = field.one();
        let b = Matrix::diagonal(field, &[scale.clone(), mu * scale]);
        CanonicalBlock { kind: BlockKind::Spectral { mu: mu.clone(), scale: scale.clone() }, a, b }
    }

    pub fn field(&self) -> Field {
        self.a.field()
    }

    pub fn size(&self) -> usize {
        self.a.rows()
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            BlockKind::Paired { .. } => "paired",
            BlockKind::ZeroEven { .. } => "zero_even",
            BlockKind::ZeroOdd { .. } => "zero_odd",
            BlockKind::Spectral { .. } => "definite_semisimple",
        }
    }

    /// The irreducible factor carried by the block (for paired blocks, the
    /// factor of the canonical eigenvalue of the pair).
    pub fn factor(&self) -> Poly {
        let field = self.field();
        match &self.kind {
            BlockKind::Paired { eigenvalue, .. } => Poly::linear(eigenvalue),
            BlockKind::ZeroEven { .. } | BlockKind::ZeroOdd { .. } => Poly::x(field),
            BlockKind::Spectral { mu, .. } => Poly::new(field, vec![mu.clone(), field.zero(), field.one()]),
        }
    }

    pub fn mu(&self) -> Option<&Elem> {
        match &self.kind {
            BlockKind::ZeroOdd { mu, .. } | BlockKind::Spectral { mu, .. } => Some(mu),
            _ => None,
        }
    }

    pub fn mu_class(&self) -> Option<&SquareClass> {
        match &self.kind {
            BlockKind::ZeroOdd { mu_class, .. } => mu_class.as_ref(),
            _ => None,
        }
    }

    fn order_key(&self) -> (usize, Vec<Elem>, usize, Option<SquareClass>, Option<Elem>) {
        let (d, c) = self.factor().sort_key();
        (d, c, self.size(), self.mu_class().cloned(), self.mu().cloned())
    }

    /// Descriptor used in equality of canonical forms (no scalar data).
    pub fn descriptor(&self) -> BlockDescriptor {
        BlockDescriptor { kind: self.kind_name(), size: self.size(), factor: self.factor() }
    }
}

/// A block with the basis vectors (columns) realizing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockBasis {
    pub block: CanonicalBlock,
    pub basis: Matrix,
}

/// Converts a raw odd block to the standard layout. Returns the new block
/// and the change of basis `S` with `S^{-1} A S` and `S^T B S` standard.
pub fn caalim_convert(block: &CanonicalBlock) -> Result<(CanonicalBlock, Matrix)> {
    let (n, mu) = match &block.kind {
        BlockKind::ZeroOdd { n, mu, form: OddForm::Raw, .. } => (*n, mu.clone()),
        _ => bail!(Contract, "conversion applies to raw odd zero blocks only, got {}", block.kind_name()),
    };
    let s = odd_reorder(block.field(), n);
    let std = CanonicalBlock::zero_odd(n, &mu, OddForm::Standard)?;
    if block.a.similar(&s) != std.a || block.b.congruent(&s) != std.b {
        bail!(Internal, "odd block conversion does not reproduce the standard form");
    }
    Ok((std, s))
}

/// Columns: `b_{n+1}, ..., b_{2n}, b_n, -b_{n-1}, b_{n-2}, ..., (-1)^n b_0`.
fn odd_reorder(field: Field, n: usize) -> Matrix {
    let size = 2 * n + 1;
    let mut s = Matrix::zeros(field, size, size);
    for i in 0..n {
        s[(n + 1 + i, i)] = field.one();
    }
    s[(n, n)] = field.one();
    for j in 1..=n {
        s[(n - j, n + j)] = if j % 2 == 0 { field.one() } else { -field.one() };
    }
    s
}

/// Equality data of a block, without the scalar representatives.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockDescriptor {
    pub kind: &'static str,
    pub size: usize,
    pub factor: Poly,
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

/// Congruence invariants of the scalars attached to odd zero blocks of one
/// size: they form a quadratic form of rank `multiplicity`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OddFormInvariant {
    pub n: usize,
    pub multiplicity: usize,
    pub discriminant: SquareClass,
    /// `(positive, negative)` over Q.
    pub signature: Option<(usize, usize)>,
}

/// Comparable summary of a canonical pair.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey {
    pub blocks: Vec<BlockDescriptor>,
    pub odd_forms: Vec<OddFormInvariant>,
    /// `(factor, partner, dimension)` of untreated parts.
    pub residual: Vec<(Poly, Option<Poly>, usize)>,
}

/// Part of the space not brought to canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualPart {
    pub factor: Poly,
    /// Cross-paired partner `pi*` when it differs from `pi`.
    pub partner: Option<Poly>,
    pub multiplicity: usize,
    pub dim: usize,
    /// Spectral blocks when the part is anisotropic-definite and semisimple.
    pub spectral: Option<Vec<CanonicalBlock>>,
    pub a: Matrix,
    pub b: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalPair {
    pub blocks: Vec<CanonicalBlock>,
    /// Columns: the bases of the blocks in order, then the residual bases.
    pub basis_change: Matrix,
    pub residual: Vec<ResidualPart>,
}

impl CanonicalPair {
    /// `(A, B)` assembled block-diagonally, residual parts last.
    pub fn assembled(&self) -> (Matrix, Matrix) {
        let field = self.basis_change.field();
        let mut a: Vec<Matrix> = self.blocks.iter().map(|b| b.a.clone()).collect();
        let mut b: Vec<Matrix> = self.blocks.iter().map(|b| b.b.clone()).collect();
        for r in &self.residual {
            a.push(r.a.clone());
            b.push(r.b.clone());
        }
        (Matrix::block_diag(field, &a), Matrix::block_diag(field, &b))
    }

    /// Checks `P^{-1} A P` and `P^T B P` against the assembled pair.
    pub fn verify(&self, f: &SkewEndo) -> bool {
        let p = &self.basis_change;
        let Some(pinv) = p.inverse() else { return false };
        let (a, b) = self.assembled();
        &(&pinv * f.matrix()) * p == a && f.gram().congruent(p) == b
    }

    pub fn is_complete(&self) -> bool {
        self.residual.is_empty()
    }

    pub fn key(&self) -> Result<CanonicalKey> {
        let mut blocks: Vec<BlockDescriptor> = self.blocks.iter().map(CanonicalBlock::descriptor).collect();
        blocks.sort();
        let mut groups: BTreeMap<usize, Vec<Elem>> = BTreeMap::new();
        for b in &self.blocks {
            if let BlockKind::ZeroOdd { n, mu, .. } = &b.kind {
                groups.entry(*n).or_default().push(mu.clone());
            }
        }
        let mut odd_forms = Vec::new();
        for (n, mus) in groups {
            let field = mus[0].field();
            // the Gram scalar of a block of size 2n+1 is (-1)^n mu
            let signed: Vec<Elem> = mus.iter().map(|m| if n % 2 == 0 { m.clone() } else { -m }).collect();
            // the product is the discriminant of an orthogonal sum, so it is
            // resolvable even when the single scalars are not
            let classes: Option<Vec<SquareClass>> = signed.iter().map(|m| m.square_class().ok()).collect();
            let disc = match classes {
                Some(cs) => cs.iter().skip(1).fold(cs[0].clone(), |acc, c| acc.mul(c)),
                None => signed.iter().fold(field.one(), |acc, m| &acc * m).square_class()?,
            };
            let signature = match field {
                Field::Rational => {
                    let pos = signed.iter().filter(|m| m.sign() == Some(std::cmp::Ordering::Greater)).count();
                    Some((pos, signed.len() - pos))
                }
                Field::Prime(_) => None,
            };
            odd_forms.push(OddFormInvariant {
                n,
                multiplicity: mus.len(),
                discriminant: disc,
                signature,
            });
        }
        let mut residual: Vec<(Poly, Option<Poly>, usize)> =
            self.residual.iter().map(|r| (r.factor.clone(), r.partner.clone(), r.dim)).collect();
        residual.sort();
        Ok(CanonicalKey { blocks, odd_forms, residual })
    }
}

/// Representative of the pair `{l, -l}`: positive over Q, residue at most
/// `(p - 1) / 2` over F_p.
pub fn is_canonical_eigenvalue(l: &Elem) -> bool {
    match l {
        Elem::Q(q) => q > &num_rational::BigRational::from_integer(0.into()),
        Elem::Fp(v, p) => *v != 0 && *v <= (p - 1) / 2,
    }
}

// ---- local machinery ---------------------------------------------------

/// A pair restricted to a subspace: `basis` maps local coordinates to the
/// parent coordinates.
struct Local {
    basis: Matrix,
    a: Matrix,
    b: Matrix,
}

impl Local {
    fn whole(a: &Matrix, b: &Matrix) -> Local {
        Local { basis: Matrix::identity(a.field(), a.rows()), a: a.clone(), b: b.clone() }
    }

    fn restrict(&self, sub: &Subspace) -> Local {
        let m = sub.basis_matrix();
        let l = m.left_inverse().expect("echelon basis has full column rank");
        Local {
            basis: &self.basis * &m,
            a: &(&l * &self.a) * &m,
            b: self.b.congruent(&m),
        }
    }

    fn dim(&self) -> usize {
        self.a.rows()
    }

    fn form(&self, u: &[Elem], v: &[Elem]) -> Elem {
        self.b.bilinear(u, v)
    }

    /// Complement of the span of `vecs` (local coordinates) inside this space.
    fn complement(&self, vecs: &[Vec<Elem>]) -> Local {
        let field = self.a.field();
        let w = Subspace::span(field, self.dim(), vecs);
        let comp = OrthogonalSpace::new(self.b.clone()).expect("symmetric").ortho_complement(&w);
        self.restrict(&comp)
    }

    fn to_parent(&self, vecs: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
        vecs.iter().map(|v| self.basis.mul_vec(v)).collect()
    }
}

fn apply_pow(m: &Matrix, v: &[Elem], k: usize) -> Vec<Elem> {
    let mut x = v.to_vec();
    for _ in 0..k {
        x = m.mul_vec(&x);
    }
    x
}

fn nilpotency_index(m: &Matrix) -> Option<usize> {
    let n = m.rows();
    let mut p = Matrix::identity(m.field(), n);
    for e in 0..=n {
        if p.is_zero() {
            return Some(e);
        }
        p = &p * m;
    }
    None
}

fn shifted(a: &Matrix, l: &Elem) -> Matrix {
    let mut m = a.clone();
    for i in 0..m.rows() {
        m[(i, i)] -= l;
    }
    m
}

/// One paired block: returns `[v_k, ..., v_0, w'_0, ..., w'_k]` in local
/// coordinates. With `zero` set the chains are made isotropic as well.
fn paired_chain(loc: &Local, l: &Elem, k: usize, vl: &Subspace, vml: &Subspace, zero: bool) -> Result<Vec<Vec<Elem>>> {
    let field = loc.a.field();
    let nm = shifted(&loc.a, l);
    let np = shifted(&loc.a, &-l);
    let nmk = nm.pow(k);
    let mut v = vl
        .basis()
        .iter()
        .find(|v| !vec_is_zero(&nmk.mul_vec(v)))
        .cloned()
        .ok_or_else(|| Error::Internal("no vector of maximal height".into()))?;
    let top = nmk.mul_vec(&v);
    let mut w = vml
        .basis()
        .iter()
        .find(|w| !loc.form(&top, w).is_zero())
        .cloned()
        .ok_or_else(|| Error::Internal("no dual vector for the top of the chain".into()))?;
    let alpha = loc.form(&top, &w);
    w = vec_scale(&w, &alpha.inv().unwrap());
    let two = field.from_i64(2);
    if zero {
        for t in (0..k).rev().filter(|t| t % 2 == 0) {
            let c = &loc.form(&v, &apply_pow(&loc.a, &v, t)) / &two;
            if !c.is_zero() {
                v = vec_axpy(&v, &c, &apply_pow(&loc.a, &w, k - t));
            }
        }
    }
    let vs: Vec<Vec<Elem>> = (0..=k).map(|j| apply_pow(&nm, &v, j)).collect();
    let ws: Vec<Vec<Elem>> = (0..=k).map(|i| apply_pow(&np, &w, i)).collect();
    let c: Vec<Elem> = ws.iter().map(|wi| loc.form(&v, wi)).collect();
    // unknowns beta_m = alpha_{k-m}; row j: sum_m (-1)^j c_{k-m+j} beta_m = delta_{jk}
    let mut t = Matrix::zeros(field, k + 1, k + 1);
    for j in 0..=k {
        for m in j..=k {
            let e = &c[k - m + j];
            t[(j, m)] = if j % 2 == 0 { e.clone() } else { -e };
        }
    }
    let mut rhs = vec![field.zero(); k + 1];
    rhs[k] = field.one();
    let beta = solve_triangular(&t, &rhs)?;
    let mut wp = vec![field.zero(); loc.dim()];
    for (i, wi) in ws.iter().enumerate() {
        wp = vec_axpy(&wp, &beta[k - i], wi);
    }
    if zero {
        for t in (0..k).rev().filter(|t| t % 2 == 0) {
            let c = -(&loc.form(&wp, &apply_pow(&loc.a, &wp, t)) / &two);
            if !c.is_zero() {
                wp = vec_axpy(&wp, &c, &apply_pow(&loc.a, &v, k - t));
            }
        }
    }
    let mut out: Vec<Vec<Elem>> = vs.into_iter().rev().collect();
    for s in 0..=k {
        let x = apply_pow(&np, &wp, s);
        out.push(if s % 2 == 0 { x } else { vec_scale(&x, &-field.one()) });
    }
    Ok(out)
}

/// Start `v` of an odd chain with `mu = phi(v, f^{2n} v) != 0`.
///
/// `phi(x, f^{2n} y)` is symmetric and nonzero, so some `e_i` or `e_i + e_j`
/// works. With several blocks of one size its values range over a form of
/// rank above one and can be integers that resist factoring, so small
/// combinations are tried in order of height until the square class of
/// `mu` is resolved.
fn odd_chain_start(loc: &Local, fk: &Matrix) -> Result<(Vec<Elem>, Elem)> {
    let field = loc.a.field();
    let d = loc.dim();
    let std: Vec<Vec<Elem>> = Subspace::full(field, d).basis().to_vec();
    let images: Vec<Vec<Elem>> = std.iter().map(|e| fk.mul_vec(e)).collect();
    let h: Vec<Vec<Elem>> = (0..d).map(|i| (0..d).map(|j| loc.form(&std[i], &images[j])).collect()).collect();
    let mut candidates: Vec<(u64, usize, Vec<Elem>, Elem)> = Vec::new();
    fn push(candidates: &mut Vec<(u64, usize, Vec<Elem>, Elem)>, v: Vec<Elem>, mu: Elem) {
        if !mu.is_zero() {
            let idx = candidates.len();
            candidates.push((mu.height(), idx, v, mu));
        }
    }
    for i in 0..d {
        push(&mut candidates, std[i].clone(), h[i][i].clone());
    }
    if field.is_finite() {
        if let Some(c) = candidates.first() {
            return Ok((c.2.clone(), c.3.clone()));
        }
    }
    for i in 0..d {
        for j in i + 1..d {
            for c in [1i64, -1, 2, -2] {
                let c = field.from_i64(c);
                let mu = &(&h[i][i] + &(&(&field.from_i64(2) * &c) * &h[i][j])) + &(&(&c * &c) * &h[j][j]);
                push(&mut candidates, vec_axpy(&std[i], &c, &std[j]), mu);
            }
        }
    }
    candidates.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    if let Some(c) = candidates.iter().find(|c| c.3.square_class().is_ok()) {
        return Ok((c.2.clone(), c.3.clone()));
    }
    candidates
        .into_iter()
        .next()
        .map(|c| (c.2, c.3))
        .ok_or_else(|| Error::Internal("odd chain start is isotropic for the height form".into()))
}

/// One odd zero block of size `2n + 1`: raw basis `b_s = f^{2n-s}(w)` and `mu`.
fn odd_chain(loc: &Local, n: usize) -> Result<(Vec<Vec<Elem>>, Elem)> {
    let field = loc.a.field();
    let k = 2 * n;
    let fk = loc.a.pow(k);
    let (v, mu) = odd_chain_start(loc, &fk)?;
    let two_mu = &field.from_i64(2) * &mu;
    let mut g = v;
    for j in 1..=n {
        let c = -(&loc.form(&g, &apply_pow(&loc.a, &g, k - 2 * j)) / &two_mu);
        if !c.is_zero() {
            g = vec_axpy(&g, &c, &apply_pow(&loc.a, &g, 2 * j));
        }
    }
    let basis = (0..=k).map(|s| apply_pow(&loc.a, &g, k - s)).collect();
    Ok((basis, mu))
}

struct Piece {
    block: CanonicalBlock,
    /// Columns in the coordinates of the top-level space.
    basis: Vec<Vec<Elem>>,
}

/// Blocks of a nilpotent regular pair, odd blocks in raw layout.
fn zero_pieces(top: Local) -> Result<Vec<Piece>> {
    let mut out = Vec::new();
    let mut loc = top;
    while loc.dim() > 0 {
        let e = nilpotency_index(&loc.a).ok_or_else(|| Error::Domain("map is not nilpotent".into()))?;
        let k = e - 1;
        let (vecs, block) = if e % 2 == 0 {
            let full = Subspace::full(loc.a.field(), loc.dim());
            let vecs = paired_chain(&loc, &loc.a.field().zero(), k, &full, &full, true)?;
            (vecs, CanonicalBlock::zero_even(loc.a.field(), e))
        } else {
            let (vecs, mu) = odd_chain(&loc, k / 2)?;
            (vecs, CanonicalBlock::zero_odd(k / 2, &mu, OddForm::Raw)?)
        };
        check_local_block(&loc, &vecs, &block)?;
        out.push(Piece { block, basis: loc.to_parent(&vecs) });
        loc = loc.complement(&vecs);
    }
    Ok(out)
}

/// Blocks for the eigenvalue pair `{l, -l}` on `V_l + V_{-l}` (the whole local space).
fn nonzero_pieces(top: Local, l: &Elem) -> Result<Vec<Piece>> {
    let mut out = Vec::new();
    let mut loc = top;
    while loc.dim() > 0 {
        let d = loc.dim();
        let vl = kernel(&shifted(&loc.a, l).pow(d));
        let vml = kernel(&shifted(&loc.a, &-l).pow(d));
        if vl.dim() != vml.dim() || vl.dim() * 2 != d {
            bail!(Internal, "eigenvalue components are not equidimensional");
        }
        let restricted = loc.restrict(&vl);
        let e = nilpotency_index(&shifted(&restricted.a, l))
            .ok_or_else(|| Error::Internal("component is not a generalized eigenspace".into()))?;
        let vecs = paired_chain(&loc, l, e - 1, &vl, &vml, false)?;
        let block = CanonicalBlock::paired(l, e);
        check_local_block(&loc, &vecs, &block)?;
        out.push(Piece { block, basis: loc.to_parent(&vecs) });
        loc = loc.complement(&vecs);
    }
    Ok(out)
}

fn check_local_block(loc: &Local, vecs: &[Vec<Elem>], block: &CanonicalBlock) -> Result<()> {
    let m = Matrix::from_columns(loc.a.field(), loc.dim(), vecs);
    let l = m
        .left_inverse()
        .ok_or_else(|| Error::Internal("block vectors are dependent".into()))?;
    let am = &loc.a * &m;
    if &m * &(&l * &am) != am || &(&l * &loc.a) * &m != block.a || loc.b.congruent(&m) != block.b {
        bail!(Internal, "constructed {} block does not match its canonical matrices", block.kind_name());
    }
    Ok(())
}

/// Brings the scalars of odd blocks of equal size to a normal form: over Q
/// each scalar becomes its squarefree representative; over F_p the scalars
/// of each size become `1, ..., 1, d` with `d` the class representative of
/// their product.
fn normalize_odd(pieces: &mut [Piece]) -> Result<()> {
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, p) in pieces.iter().enumerate() {
        if let BlockKind::ZeroOdd { n, .. } = p.block.kind {
            groups.entry(n).or_default().push(i);
        }
    }
    for (n, idx) in groups {
        let mus: Vec<Elem> = idx
            .iter()
            .map(|&i| pieces[i].block.mu().unwrap().clone())
            .collect();
        let field = mus[0].field();
        let form = match &pieces[idx[0]].block.kind {
            BlockKind::ZeroOdd { form, .. } => *form,
            _ => unreachable!(),
        };
        // target scalars and transform M with M^T diag(mus) M = diag(targets)
        let (targets, m) = match field {
            Field::Rational => {
                let mut m = Matrix::identity(field, mus.len());
                let mut targets = Vec::new();
                for (i, mu) in mus.iter().enumerate() {
                    // an unresolved class keeps its scalar
                    let rep = match mu.class_representative() {
                        Ok(r) => r,
                        Err(e) if e.is_capability() => mu.clone(),
                        Err(e) => return Err(e),
                    };
                    let t = (&rep / mu).sqrt().expect("same square class");
                    m[(i, i)] = t;
                    targets.push(rep);
                }
                (targets, m)
            }
            Field::Prime(_) => diagonal_normal_form_fp(&mus)?,
        };
        let old: Vec<Vec<Vec<Elem>>> = idx.iter().map(|&i| pieces[i].basis.clone()).collect();
        for (col, &i) in idx.iter().enumerate() {
            let size = 2 * n + 1;
            let mut basis = vec![vec![field.zero(); old[0][0].len()]; size];
            for (row, ob) in old.iter().enumerate() {
                let c = &m[(row, col)];
                if c.is_zero() {
                    continue;
                }
                for s in 0..size {
                    basis[s] = vec_axpy(&basis[s], c, &ob[s]);
                }
            }
            pieces[i].basis = basis;
            pieces[i].block = CanonicalBlock::zero_odd(n, &targets[col], form)?;
        }
    }
    Ok(())
}

/// `(targets, M)` with `M^T diag(d) M = diag(1, ..., 1, c)` over F_p.
fn diagonal_normal_form_fp(d: &[Elem]) -> Result<(Vec<Elem>, Matrix)> {
    let field = d[0].field();
    let r = d.len();
    let mut m = Matrix::identity(field, r);
    let mut carry = d[0].clone();
    // invariant: column i of m has norm 1 for i < current, the carry column has norm `carry`
    for i in 1..r {
        let (a, b) = (carry.clone(), d[i].clone());
        let (x, y) = represent_one(&a, &b);
        // u = x * carry_col + y * e_i (norm 1), v = -b y * carry_col + a x * e_i (norm a b)
        let carry_col = m.col(i - 1);
        let ei = m.col(i);
        let u = vec_axpy(&vec_scale(&carry_col, &x), &y, &ei);
        let v = vec_axpy(&vec_scale(&carry_col, &-(&b * &y)), &(&a * &x), &ei);
        for row in 0..r {
            m[(row, i - 1)] = u[row].clone();
            m[(row, i)] = v[row].clone();
        }
        carry = &a * &b;
    }
    let rep = carry.class_representative()?;
    let t = (&rep / &carry).sqrt().expect("same square class");
    for row in 0..r {
        m[(row, r - 1)] = &m[(row, r - 1)] * &t;
    }
    let mut targets = vec![field.one(); r];
    targets[r - 1] = rep;
    let check = Matrix::diagonal(field, d).congruent(&m);
    if check != Matrix::diagonal(field, &targets) {
        bail!(Internal, "diagonal normal form transform is wrong");
    }
    Ok((targets, m))
}

/// `(x, y)` with `a x^2 + b y^2 = 1` over F_p.
fn represent_one(a: &Elem, b: &Elem) -> (Elem, Elem) {
    let field = a.field();
    for x in field.elements().unwrap() {
        let rhs = &(&field.one() - &(a * &(&x * &x))) / b;
        if let Some(y) = rhs.sqrt() {
            return (x, y);
        }
    }
    unreachable!("binary forms over finite fields are universal")
}

fn to_block_bases(pieces: Vec<Piece>, n: usize) -> Vec<BlockBasis> {
    pieces
        .into_iter()
        .map(|p| {
            let field = p.block.field();
            BlockBasis { basis: Matrix::from_columns(field, n, &p.basis), block: p.block }
        })
        .collect()
}

fn convert_pieces(pieces: &mut [Piece]) -> Result<()> {
    for p in pieces.iter_mut() {
        if let BlockKind::ZeroOdd { form: OddForm::Raw, .. } = p.block.kind {
            let (std, s) = caalim_convert(&p.block)?;
            let cols = Matrix::from_columns(p.block.field(), p.basis[0].len(), &p.basis);
            p.basis = (&cols * &s).columns();
            p.block = std;
        }
    }
    Ok(())
}

fn require_regular(f: &SkewEndo) -> Result<()> {
    if !f.space().is_regular() {
        bail!(Precondition, "the form must be regular");
    }
    Ok(())
}

/// Canonical blocks for the eigenvalue pair `{l, -l}` with `l` nonzero.
pub fn canonical_pair_nonzero(f: &SkewEndo, l: &Elem) -> Result<Vec<BlockBasis>> {
    require_regular(f)?;
    if l.is_zero() {
        bail!(Contract, "zero eigenvalue is handled by the zero-eigenvalue construction");
    }
    let n = f.dim();
    let a = f.matrix();
    let vl = kernel(&shifted(a, l).pow(n));
    if vl.is_zero() {
        bail!(Domain, "{l} is not an eigenvalue");
    }
    let vml = kernel(&shifted(a, &-l).pow(n));
    let top = Local::whole(a, f.gram()).restrict(&vl.sum(&vml));
    Ok(to_block_bases(nonzero_pieces(top, l)?, n))
}

fn zero_local(f: &SkewEndo) -> Result<Local> {
    let n = f.dim();
    let v0 = kernel(&f.matrix().pow(n));
    let top = Local::whole(f.matrix(), f.gram()).restrict(&v0);
    if top.dim() > 0 && top.b.det().is_zero() {
        bail!(Precondition, "the form restricted to the generalized kernel is degenerate");
    }
    Ok(top)
}

/// Blocks of the generalized kernel in raw layout, scalars as constructed.
pub fn canonical_pair_zero_raw(f: &SkewEndo) -> Result<Vec<BlockBasis>> {
    let pieces = zero_pieces(zero_local(f)?)?;
    Ok(to_block_bases(pieces, f.dim()))
}

/// Blocks of the generalized kernel in standard layout with normalized scalars.
pub fn canonical_pair_zero(f: &SkewEndo) -> Result<Vec<BlockBasis>> {
    let mut pieces = zero_pieces(zero_local(f)?)?;
    normalize_odd(&mut pieces)?;
    convert_pieces(&mut pieces)?;
    Ok(to_block_bases(pieces, f.dim()))
}

pub fn canonical_pair(f: &SkewEndo) -> Result<CanonicalPair> {
    canonical_pair_with(f, &FactorOptions::default())
}

pub fn canonical_pair_with(f: &SkewEndo, opts: &FactorOptions) -> Result<CanonicalPair> {
    require_regular(f)?;
    let field = f.field();
    let n = f.dim();
    let a = f.matrix();
    let whole = Local::whole(a, f.gram());
    let split = primary_split_with(f, opts)?;
    let mut pieces: Vec<Piece> = Vec::new();
    let mut residual: Vec<(ResidualPart, Vec<Vec<Elem>>)> = Vec::new();
    let mut v1_factors: Vec<usize> = Vec::new();
    for (i, pf) in split.factors.iter().enumerate() {
        let Some(j) = pf.partner else {
            bail!(Internal, "unpaired factor {} on a regular space", pf.factor);
        };
        if pf.factor.is_x() {
            let mut z = zero_pieces(whole.restrict(&pf.component))?;
            normalize_odd(&mut z)?;
            convert_pieces(&mut z)?;
            pieces.extend(z);
        } else if pf.factor.deg() == 1 {
            let l = -pf.factor.coeff(0);
            if !is_canonical_eigenvalue(&l) {
                continue;
            }
            let sub = pf.component.sum(&split.factors[j].component);
            pieces.extend(nonzero_pieces(whole.restrict(&sub), &l)?);
        } else if i == j {
            v1_factors.push(i);
        } else if pf.factor < split.factors[j].factor {
            let sub = pf.component.sum(&split.factors[j].component);
            let loc = whole.restrict(&sub);
            let basis = loc.to_parent(&Subspace::full(field, loc.dim()).basis().to_vec());
            residual.push((
                ResidualPart {
                    factor: pf.factor.clone(),
                    partner: Some(split.factors[j].factor.clone()),
                    multiplicity: pf.multiplicity,
                    dim: loc.dim(),
                    spectral: None,
                    a: loc.a,
                    b: loc.b,
                },
                basis,
            ));
        }
    }
    if !v1_factors.is_empty() {
        let v1 = v1_factors
            .iter()
            .fold(Subspace::zero(field, n), |acc, &i| acc.sum(&split.factors[i].component));
        let v1_space = OrthogonalSpace::new(whole.restrict(&v1).b)?;
        let definite = field == Field::Rational
            && v1_space.isotropy_report()?.verdict == IsotropyVerdict::AnisotropicDefinite;
        for &i in &v1_factors {
            let pf = &split.factors[i];
            let loc = whole.restrict(&pf.component);
            let is_even_quadratic = pf.factor.deg() == 2 && pf.factor.coeff(1).is_zero();
            if definite && is_even_quadratic && pf.multiplicity == 1 {
                let mu = pf.factor.coeff(0);
                let (blocks, vecs) = spectral_pieces(loc, &mu)?;
                let (ra, rb) = (
                    Matrix::block_diag(field, &blocks.iter().map(|b| b.a.clone()).collect::<Vec<_>>()),
                    Matrix::block_diag(field, &blocks.iter().map(|b| b.b.clone()).collect::<Vec<_>>()),
                );
                residual.push((
                    ResidualPart {
                        factor: pf.factor.clone(),
                        partner: None,
                        multiplicity: pf.multiplicity,
                        dim: ra.rows(),
                        spectral: Some(blocks),
                        a: ra,
                        b: rb,
                    },
                    vecs,
                ));
            } else {
                let basis = loc.to_parent(&Subspace::full(field, loc.dim()).basis().to_vec());
                residual.push((
                    ResidualPart {
                        factor: pf.factor.clone(),
                        partner: None,
                        multiplicity: pf.multiplicity,
                        dim: loc.dim(),
                        spectral: None,
                        a: loc.a,
                        b: loc.b,
                    },
                    basis,
                ));
            }
        }
    }
    pieces.sort_by(|x, y| x.block.order_key().cmp(&y.block.order_key()));
    residual.sort_by(|x, y| x.0.factor.cmp(&y.0.factor));
    let mut cols: Vec<Vec<Elem>> = Vec::with_capacity(n);
    for p in &pieces {
        cols.extend(p.basis.iter().cloned());
    }
    for (_, vecs) in &residual {
        cols.extend(vecs.iter().cloned());
    }
    let basis_change = Matrix::from_columns(field, n, &cols);
    let pair = CanonicalPair {
        blocks: pieces.into_iter().map(|p| p.block).collect(),
        basis_change,
        residual: residual.into_iter().map(|(r, _)| r).collect(),
    };
    if !pair.verify(f) {
        bail!(Internal, "canonical pair certificate failed verification");
    }
    Ok(pair)
}

/// Spectral blocks of an anisotropic component annihilated by `x^2 + mu`.
fn spectral_pieces(top: Local, mu: &Elem) -> Result<(Vec<CanonicalBlock>, Vec<Vec<Elem>>)> {
    let mut blocks = Vec::new();
    let mut vecs_out = Vec::new();
    let mut loc = top;
    while loc.dim() > 0 {
        let field = loc.a.field();
        let mut v = Subspace::full(field, loc.dim()).basis()[0].clone();
        let s = loc.form(&v, &v);
        if s.is_zero() {
            bail!(Precondition, "isotropic vector in an anisotropic component");
        }
        let rep = s.class_representative()?;
        let t = (&rep / &s).sqrt().expect("same square class");
        v = vec_scale(&v, &t);
        let fv = loc.a.mul_vec(&v);
        let vecs = vec![v, fv];
        let block = CanonicalBlock::spectral(mu, &rep);
        check_local_block(&loc, &vecs, &block)?;
        vecs_out.extend(loc.to_parent(&vecs));
        blocks.push(block);
        loc = loc.complement(&vecs);
    }
    Ok((blocks, vecs_out))
}

/// Result of the spectral normal form on an anisotropic-definite space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralForm {
    /// `P^{-1} A P`.
    pub a: Matrix,
    /// `P^T B P`.
    pub b: Matrix,
    pub basis_change: Matrix,
    /// Dimension of the kernel (number of 1x1 zero blocks).
    pub zero_dim: usize,
    /// Scalars `mu` of the 2x2 blocks in order.
    pub mus: Vec<Elem>,
    /// Factors of degree at least 4 with the dimension of their component,
    /// appended untreated at the end of the basis.
    pub residual: Vec<(Poly, usize)>,
}

pub fn spectral_form(f: &SkewEndo) -> Result<SpectralForm> {
    let report = f.space().isotropy_report()?;
    if report.verdict != IsotropyVerdict::AnisotropicDefinite {
        bail!(Precondition, "spectral form requires an anisotropic-definite form");
    }
    let field = f.field();
    let n = f.dim();
    let whole = Local::whole(f.matrix(), f.gram());
    let split = primary_split(f)?;
    let mut cols: Vec<Vec<Elem>> = Vec::new();
    let mut a_blocks: Vec<Matrix> = Vec::new();
    let mut b_blocks: Vec<Matrix> = Vec::new();
    let mut mus = Vec::new();
    let mut zero_dim = 0;
    let mut residual = Vec::new();
    let mut residual_parts: Vec<(Vec<Vec<Elem>>, Matrix, Matrix)> = Vec::new();
    for pf in &split.factors {
        if pf.multiplicity != 1 {
            bail!(Internal, "anisotropic space with a repeated factor {}", pf.factor);
        }
        let loc = whole.restrict(&pf.component);
        if pf.factor.is_x() {
            let sub = OrthogonalSpace::new(loc.b.clone())?;
            let (p, d) = sub.diagonalize();
            let mut scaled = Vec::new();
            let mut diag = Vec::new();
            for (j, dj) in d.iter().enumerate() {
                let rep = dj.class_representative()?;
                let t = (&rep / dj).sqrt().expect("same square class");
                scaled.push(vec_scale(&p.col(j), &t));
                diag.push(rep);
            }
            zero_dim = d.len();
            cols.extend(loc.to_parent(&scaled));
            a_blocks.push(Matrix::zeros(field, d.len(), d.len()));
            b_blocks.push(Matrix::diagonal(field, &diag));
        } else if pf.factor.deg() == 2 && pf.factor.coeff(1).is_zero() {
            let mu = pf.factor.coeff(0);
            let (blocks, vecs) = spectral_pieces(loc, &mu)?;
            for b in blocks {
                mus.push(mu.clone());
                a_blocks.push(b.a);
                b_blocks.push(b.b);
            }
            cols.extend(vecs);
        } else {
            residual.push((pf.factor.clone(), loc.dim()));
            let basis = loc.to_parent(&Subspace::full(field, loc.dim()).basis().to_vec());
            residual_parts.push((basis, loc.a, loc.b));
        }
    }
    for (basis, ra, rb) in residual_parts {
        cols.extend(basis);
        a_blocks.push(ra);
        b_blocks.push(rb);
    }
    let p = Matrix::from_columns(field, n, &cols);
    let a = Matrix::block_diag(field, &a_blocks);
    let b = Matrix::block_diag(field, &b_blocks);
    if f.matrix().similar(&p) != a || f.gram().congruent(&p) != b {
        bail!(Internal, "spectral form certificate failed verification");
    }
    Ok(SpectralForm { a, b, basis_change: p, zero_dim, mus, residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn skew(field: Field, b: Matrix, a: Matrix) -> SkewEndo {
        let _ = field;
        SkewEndo::new(OrthogonalSpace::new(b).unwrap(), a).unwrap()
    }

    #[test]
    fn n23_fixture_is_one_odd_block() {
        let f = Field::Rational;
        let a = Matrix::from_ints(f, &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let b = Matrix::from_ints(f, &[&[0, 0, -1], &[0, 1, 0], &[-1, 0, 0]]);
        let s = skew(f, b, a);
        let raw = canonical_pair_zero_raw(&s).unwrap();
        assert_eq!(raw.len(), 1);
        assert_eq!(raw[0].block.mu(), Some(&f.from_i64(-1)));
        assert!(raw[0].basis.is_identity());
        let cp = canonical_pair(&s).unwrap();
        assert_eq!(cp.blocks.len(), 1);
        assert_eq!(cp.blocks[0].mu_class(), Some(&SquareClass::Rational((-1).into())));
        assert!(cp.verify(&s));
    }

    #[test]
    fn n32_fixture_is_a_fixed_point() {
        let f = Field::Rational;
        let blk = CanonicalBlock::zero_even(f, 2);
        let s = skew(f, blk.b.clone(), blk.a.clone());
        let cp = canonical_pair(&s).unwrap();
        assert_eq!(cp.blocks, vec![blk]);
        assert!(cp.basis_change.is_identity());
    }

    #[test]
    fn caalim_conversion_sizes() {
        for (field, n) in [(Field::Rational, 0), (Field::Rational, 1), (Field::Prime(7), 2), (Field::Prime(5), 3)] {
            let raw = CanonicalBlock::zero_odd(n, &field.from_i64(3), OddForm::Raw).unwrap();
            let (std, s) = caalim_convert(&raw).unwrap();
            assert_eq!(raw.a.similar(&s), std.a);
            assert_eq!(raw.b.congruent(&s), std.b);
            assert!(caalim_convert(&std).is_err());
        }
    }

    #[test]
    fn split_eigenvalue_pair() {
        let f = Field::Rational;
        let a = Matrix::from_ints(f, &[&[2, 0], &[0, -2]]);
        let b = Matrix::from_ints(f, &[&[0, 1], &[1, 0]]);
        let s = skew(f, b, a);
        let split = primary_split(&s).unwrap();
        assert_eq!(split.factors.len(), 2);
        assert_eq!(split.factors[0].partner, Some(1));
        let parts = four_part_split(&s).unwrap();
        assert_eq!(parts.v2.dim(), 2);
        let blocks = canonical_pair_nonzero(&s, &f.from_i64(2)).unwrap();
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].block, CanonicalBlock::paired(&f.from_i64(2), 1));
        assert!(canonical_pair_nonzero(&s, &f.zero()).is_err());
        assert!(canonical_pair_nonzero(&s, &f.from_i64(3)).is_err());
    }

    #[test]
    fn rotation_is_a_definite_residual() {
        let f = Field::Rational;
        let s = skew(f, Matrix::identity(f, 2), Matrix::from_ints(f, &[&[0, -1], &[1, 0]]));
        let cp = canonical_pair(&s).unwrap();
        assert!(cp.blocks.is_empty());
        assert_eq!(cp.residual.len(), 1);
        assert_eq!(cp.residual[0].factor, Poly::from_ints(f, &[1, 0, 1]));
        assert_eq!(cp.residual[0].spectral.as_ref().unwrap().len(), 1);
        let sf = spectral_form(&s).unwrap();
        assert_eq!(sf.mus, vec![f.one()]);
        assert_eq!(sf.a, Matrix::from_ints(f, &[&[0, -1], &[1, 0]]));
    }

    #[test]
    fn normal_form_of_odd_scalars_over_fp() {
        let f = Field::Prime(7);
        let d = vec![f.from_i64(3), f.from_i64(5), f.from_i64(6)];
        let (targets, m) = diagonal_normal_form_fp(&d).unwrap();
        assert_eq!(Matrix::diagonal(f, &d).congruent(&m), Matrix::diagonal(f, &targets));
        assert_eq!(targets[..2], [f.one(), f.one()]);
    }
}
