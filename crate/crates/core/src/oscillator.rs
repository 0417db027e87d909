//! Generalized oscillator algebras: double extensions of an abelian
//! quadratic algebra `(V, phi)` by a skew map `delta`.
//!
//! Basis convention for the extension: index 0 is `delta`, indices `1..=n`
//! are the basis of `V`, index `n + 1` is `delta*`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::Signed;
use rayon::prelude::*;

use crate::error::{bail, Error, Result};
use crate::field::{Elem, Field, SquareClass};
use crate::linalg::{kernel, minimal_polynomial, Subspace};
use crate::liecore::{in_span, invariance_violation, same_span, LieAlgebra, QuadraticLieAlgebra};
use crate::matrix::{vec_axpy, vec_is_zero, vec_scale, Matrix};
use crate::poly::Poly;
use crate::quadspace::{witt_index_finite, IsotropyVerdict, OrthogonalSpace, SkewEndo};
use crate::skewcanon::{canonical_pair, primary_split, BlockKind, CanonicalBlock, CanonicalKey};

/// `(V, phi, delta)` with `phi` regular and `delta` skew.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OscillatorData {
    delta: SkewEndo,
}

impl OscillatorData {
    pub fn new(gram: Matrix, delta: Matrix) -> Result<OscillatorData> {
        let space = OrthogonalSpace::new(gram)?;
        OscillatorData::from_skew(SkewEndo::new(space, delta)?)
    }

    pub fn from_skew(delta: SkewEndo) -> Result<OscillatorData> {
        if delta.dim() == 0 {
            bail!(Validation, "the orthogonal space must be nonzero");
        }
        if !delta.space().is_regular() {
            bail!(Precondition, "phi must be regular");
        }
        Ok(OscillatorData { delta })
    }

    pub fn field(&self) -> Field {
        self.delta.field()
    }

    /// `dim V`.
    pub fn dim(&self) -> usize {
        self.delta.dim()
    }

    pub fn gram(&self) -> &Matrix {
        self.delta.gram()
    }

    pub fn delta(&self) -> &Matrix {
        self.delta.matrix()
    }

    pub fn skew(&self) -> &SkewEndo {
        &self.delta
    }

    pub fn space(&self) -> &OrthogonalSpace {
        self.delta.space()
    }

    pub fn is_invertible(&self) -> bool {
        !self.delta().det().is_zero()
    }

    /// Same space with `delta` replaced by `c * delta`.
    pub fn scaled(&self, c: &Elem) -> OscillatorData {
        let m = self.delta().scale(c);
        OscillatorData::new(self.gram().clone(), m).expect("scaling keeps skewness")
    }

    /// Gram matrix of `phi_delta` on the extension.
    pub fn extension_gram(&self) -> Matrix {
        phi_ts_gram(self, &self.field().zero(), &self.field().one())
    }

    fn embed(&self, v: &[Elem]) -> Vec<Elem> {
        let f = self.field();
        let mut out = vec![f.zero(); self.dim() + 2];
        out[1..=self.dim()].clone_from_slice(v);
        out
    }

    fn dual_vector(&self) -> Vec<Elem> {
        let f = self.field();
        let mut out = vec![f.zero(); self.dim() + 2];
        out[self.dim() + 1] = f.one();
        out
    }
}

/// The double extension with `phi_delta`; Jacobi and invariance are checked.
pub fn build_double_extension(d: &OscillatorData) -> Result<QuadraticLieAlgebra> {
    let f = d.field();
    let n = d.dim();
    let a = d.delta();
    let b = d.gram();
    let atb = &a.transpose() * b;
    let mut brackets = Vec::new();
    for j in 0..n {
        let v = d.embed(&a.col(j));
        if !vec_is_zero(&v) {
            brackets.push((0, j + 1, v));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let c = &atb[(i, j)];
            if !c.is_zero() {
                brackets.push((i + 1, j + 1, vec_scale(&d.dual_vector(), c)));
            }
        }
    }
    let algebra = LieAlgebra::new(f, n + 2, &brackets)
        .map_err(|e| Error::Internal(format!("double extension violates Jacobi: {e}")))?;
    QuadraticLieAlgebra::new(algebra, OrthogonalSpace::new(d.extension_gram())?)
        .map_err(|e| Error::Internal(format!("phi_delta is not invariant: {e}")))
}

/// Series computed from structure constants next to the closed formulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureReport {
    pub lower_central: Vec<Subspace>,
    pub upper_central: Vec<Subspace>,
    pub derived: Vec<Subspace>,
    pub nilpotent: bool,
    pub nilpotency_index: Option<usize>,
    pub minimal_polynomial: Poly,
    /// When `delta` is invertible: columns `v_1..v_m, w_1..w_m` of a basis
    /// of `V` with `phi(delta v_i, w_j) = delta_ij` and the other pairings zero.
    pub heisenberg_basis: Option<Matrix>,
    pub quadratic_dimension: usize,
    pub mismatches: Vec<String>,
}

impl StructureReport {
    pub fn is_consistent(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn term(series: &[Subspace], i: usize) -> &Subspace {
    series.get(i).unwrap_or_else(|| series.last().unwrap())
}

/// Computes the series of the extension from structure constants and
/// compares each term with its description through powers of `delta`.
pub fn verify_structure(d: &OscillatorData) -> Result<StructureReport> {
    let q = build_double_extension(d)?;
    let l = &q.algebra;
    let f = d.field();
    let n = d.dim();
    let total = n + 2;
    let lower = l.lower_central_series();
    let upper = l.upper_central_series();
    let derived = l.derived_series();
    let m = minimal_polynomial(d.delta())?;
    let mut mismatches = Vec::new();
    let dual = Subspace::span(f, total, &[d.dual_vector()]);
    let mut power = d.delta().clone();
    for k in 1..=n + 1 {
        let (expect_lower, expect_upper) = if power.is_zero() {
            (Subspace::zero(f, total), Subspace::full(f, total))
        } else {
            let im: Vec<Vec<Elem>> = power.columns().iter().map(|c| d.embed(c)).collect();
            let ker: Vec<Vec<Elem>> = kernel(&power).basis().iter().map(|c| d.embed(c)).collect();
            (
                Subspace::span(f, total, &im).sum(&dual),
                Subspace::span(f, total, &ker).sum(&dual),
            )
        };
        if *term(&lower, k) != expect_lower {
            mismatches.push(format!("A^{} differs from im delta^{k} + K delta*", k + 1));
        }
        if *term(&upper, k - 1) != expect_upper {
            mismatches.push(format!("Z_{k} differs from ker delta^{k} + K delta*"));
        }
        if q.perp(term(&upper, k - 1)) != *term(&lower, k) {
            mismatches.push(format!("Z_{k} perp differs from A^{}", k + 1));
        }
        power = &power * d.delta();
    }
    let delta_nilpotent = m.coeffs().iter().take(m.deg()).all(Elem::is_zero);
    let nilpotent = lower.last().unwrap().is_zero();
    if nilpotent != delta_nilpotent {
        mismatches.push("nilpotency of A and of delta disagree".into());
    }
    let index = l.nilpotency_index();
    if nilpotent && index != Some(m.deg()) {
        mismatches.push(format!("nilpotency index {index:?} differs from deg m_delta = {}", m.deg()));
    }
    // [delta x, delta y] = -phi(delta^3 x, y) delta*
    let expect_second = if d.delta().pow(3).is_zero() { Subspace::zero(f, total) } else { dual.clone() };
    if d.delta().is_zero() {
        if !l.is_abelian() {
            mismatches.push("zero delta gives a non-abelian algebra".into());
        }
    } else if *term(&derived, 2) != expect_second || !term(&derived, 3).is_zero() {
        mismatches.push("derived series differs from A, A^2, [A^2, A^2], 0".into());
    }
    let mut heisenberg_basis = None;
    if d.is_invertible() {
        let a2 = term(&lower, 1).clone();
        let sub = l.subalgebra(&a2)?;
        match sub.is_heisenberg() {
            None => mismatches.push("A^2 is not a generalized Heisenberg algebra".into()),
            Some(_) => match symplectic_basis(d) {
                Some(b) => heisenberg_basis = Some(b),
                None => mismatches.push("no symplectic basis for phi(delta x, y)".into()),
            },
        }
    }
    Ok(StructureReport {
        lower_central: lower,
        upper_central: upper,
        derived,
        nilpotent,
        nilpotency_index: index,
        minimal_polynomial: m,
        heisenberg_basis,
        quadratic_dimension: l.quadratic_dimension(),
        mismatches,
    })
}

/// Basis `v_1..v_m, w_1..w_m` of `V` with `phi(delta v_i, w_j) = delta_ij`
/// and `phi(delta v_i, v_j) = phi(delta w_i, w_j) = 0`.
fn symplectic_basis(d: &OscillatorData) -> Option<Matrix> {
    let f = d.field();
    let n = d.dim();
    let a = d.delta();
    let b = d.gram();
    let omega = |x: &[Elem], y: &[Elem]| b.bilinear(&a.mul_vec(x), y);
    let mut pool: Vec<Vec<Elem>> = Subspace::full(f, n).basis().to_vec();
    let mut vs = Vec::new();
    let mut ws = Vec::new();
    while let Some(v) = pool.first().cloned() {
        let k = pool.iter().position(|w| !omega(&v, w).is_zero())?;
        let w = vec_scale(&pool[k], &omega(&v, &pool[k]).inv().unwrap());
        let mut rest = Vec::new();
        for (i, u) in pool.iter().enumerate() {
            if i == 0 || i == k {
                continue;
            }
            let x = vec_axpy(u, &-omega(u, &w), &v);
            rest.push(vec_axpy(&x, &omega(u, &v), &w));
        }
        vs.push(v);
        ws.push(w);
        pool = rest;
    }
    let m = vs.len();
    let mut cols = vs;
    cols.extend(ws);
    let basis = Matrix::from_columns(f, n, &cols);
    for i in 0..2 * m {
        for j in 0..2 * m {
            let expect = if i < m && j == i + m {
                f.one()
            } else if j < m && i == j + m {
                -f.one()
            } else {
                f.zero()
            };
            if omega(&cols[i], &cols[j]) != expect {
                return None;
            }
        }
    }
    Some(basis)
}

/// Canonical blocks of a nilpotent `delta`, with the size constraints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotentClass {
    /// `m_delta = x^k`.
    pub k: usize,
    pub blocks: Vec<CanonicalBlock>,
    pub basis_change: Matrix,
    pub key: CanonicalKey,
    /// Every block has odd size or size divisible by 4.
    pub sizes_admissible: bool,
    /// Odd sizes `2n + 1` with `n <= floor((k - 1) / 2)`, sizes `4m` with `m <= floor(k / 4)`.
    pub stated_bounds: bool,
    /// Odd sizes as above, sizes `4m` with `m <= floor(k / 2)`: a block of size
    /// `4m` carries Jordan chains of length `2m`, which cannot exceed `k`.
    pub chain_bounds: bool,
}

pub fn block_size_checks(blocks: &[CanonicalBlock], k: usize) -> (bool, bool, bool) {
    let mut admissible = true;
    let mut stated = true;
    let mut chain = true;
    for b in blocks {
        let s = b.size();
        if s % 2 == 1 {
            let n = (s - 1) / 2;
            let ok = k >= 1 && n <= (k - 1) / 2;
            stated &= ok;
            chain &= ok;
        } else if s % 4 == 0 {
            let m = s / 4;
            stated &= m <= k / 4;
            chain &= m <= k / 2;
        } else {
            admissible = false;
            stated = false;
            chain = false;
        }
    }
    (admissible, stated, chain)
}

/// Largest Jordan chain length among zero-eigenvalue blocks.
pub fn chain_length(blocks: &[CanonicalBlock]) -> usize {
    blocks
        .iter()
        .map(|b| match &b.kind {
            BlockKind::ZeroEven { n } => *n,
            _ => b.size(),
        })
        .max()
        .unwrap_or(0)
}

pub fn classify_nilpotent(d: &OscillatorData) -> Result<NilpotentClass> {
    let m = minimal_polynomial(d.delta())?;
    if m.coeffs().iter().take(m.deg()).any(|c| !c.is_zero()) {
        bail!(Domain, "delta is not nilpotent (minimal polynomial {m})");
    }
    let k = m.deg();
    let cp = canonical_pair(d.skew())?;
    if !cp.is_complete() {
        bail!(Internal, "nilpotent map left a residual part");
    }
    if chain_length(&cp.blocks) != k {
        bail!(Internal, "block chain lengths disagree with the minimal polynomial");
    }
    let (sizes_admissible, stated_bounds, chain_bounds) = block_size_checks(&cp.blocks, k);
    if !sizes_admissible || !chain_bounds {
        bail!(Internal, "canonical blocks violate the nilpotent size constraints");
    }
    let key = cp.key()?;
    Ok(NilpotentClass {
        k,
        blocks: cp.blocks,
        basis_change: cp.basis_change,
        key,
        sizes_admissible,
        stated_bounds,
        chain_bounds,
    })
}

/// Number of one-dimensional ideals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdealCount {
    Finite(u64),
    Infinite,
}

/// One-dimensional ideals are lines of common eigenvectors of all `ad e_i`;
/// they are enumerated through joint eigenspaces.
pub fn one_dimensional_ideals(l: &LieAlgebra) -> Result<(IdealCount, Vec<Subspace>)> {
    let f = l.field();
    let n = l.dim();
    let ads: Vec<Matrix> = (0..n)
        .map(|i| {
            let mut e = vec![f.zero(); n];
            e[i] = f.one();
            l.ad(&e)
        })
        .collect();
    let mut leaves = Vec::new();
    let mut stack = vec![(0usize, Subspace::full(f, n))];
    while let Some((i, w)) = stack.pop() {
        if i == n {
            leaves.push(w);
            continue;
        }
        for c in eigenvalue_candidates(&ads[i])? {
            let mut shifted = ads[i].clone();
            for r in 0..n {
                shifted[(r, r)] -= &c;
            }
            let next = w.intersection(&kernel(&shifted));
            if !next.is_zero() {
                stack.push((i + 1, next));
            }
        }
    }
    leaves.sort_by(|a, b| a.basis().cmp(b.basis()));
    let count = match f {
        Field::Prime(p) => {
            let mut total: u64 = 0;
            for w in &leaves {
                total += ((p as u64).pow(w.dim() as u32) - 1) / (p as u64 - 1);
            }
            IdealCount::Finite(total)
        }
        Field::Rational => {
            if leaves.iter().any(|w| w.dim() > 1) {
                IdealCount::Infinite
            } else {
                IdealCount::Finite(leaves.len() as u64)
            }
        }
    };
    Ok((count, leaves))
}

fn eigenvalue_candidates(m: &Matrix) -> Result<Vec<Elem>> {
    let f = m.field();
    if let Some(all) = f.elements() {
        return Ok(all);
    }
    let mp = minimal_polynomial(m)?;
    Ok(crate::factor::factor_poly(&mp)?
        .into_iter()
        .filter(|(p, _)| p.deg() == 1)
        .map(|(p, _)| -p.coeff(0))
        .collect())
}

/// The five locality criteria evaluated independently.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalReport {
    /// Exactly one one-dimensional ideal.
    pub local: bool,
    pub one_dim_ideals: IdealCount,
    /// `A = A^2 + K delta` and `delta != 0`.
    pub split: bool,
    pub centre_dim_one: bool,
    pub invertible: bool,
    pub dq_two: bool,
    pub quadratic_dimension: usize,
    /// When the criteria hold: whether the invariant forms are spanned by
    /// `phi_{1,0}` and `phi_delta`.
    pub forms_span: Option<bool>,
}

impl LocalReport {
    pub fn criteria(&self) -> [bool; 5] {
        [self.local, self.split, self.centre_dim_one, self.invertible, self.dq_two]
    }

    pub fn agree(&self) -> bool {
        let c = self.criteria();
        c.iter().all(|&x| x == c[0]) && self.forms_span != Some(false)
    }
}

pub fn local_criteria(d: &OscillatorData) -> Result<LocalReport> {
    let q = build_double_extension(d)?;
    let l = &q.algebra;
    let f = d.field();
    let total = d.dim() + 2;
    let (one_dim_ideals, _) = one_dimensional_ideals(l)?;
    let a2 = l.derived();
    let mut e0 = vec![f.zero(); total];
    e0[0] = f.one();
    let split = !d.delta().is_zero() && a2.dim() + 1 == total && !a2.contains(&e0);
    let centre_dim_one = l.center().dim() == 1;
    let invertible = d.is_invertible();
    let forms = l.invariant_forms_basis();
    let quadratic_dimension = forms.len();
    let dq_two = quadratic_dimension == 2;
    let local = one_dim_ideals == IdealCount::Finite(1);
    let forms_span = if local && split && centre_dim_one && invertible && dq_two {
        let mut p10 = Matrix::zeros(f, total, total);
        p10[(0, 0)] = f.one();
        Some(same_span(&forms, &[p10, d.extension_gram()]))
    } else {
        None
    };
    Ok(LocalReport {
        local,
        one_dim_ideals,
        split,
        centre_dim_one,
        invertible,
        dq_two,
        quadratic_dimension,
        forms_span,
    })
}

/// `(f, z, lambda, mu, nu)` describing `F: A_1 -> A_2` by
/// `F(delta_1) = mu delta_2 + z + nu delta_2*`,
/// `F(x) = f(x) + phi_2(delta_2 z, f(delta_1^{-1} x)) delta_2*`,
/// `F(delta_1*) = lambda delta_2*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoWitness {
    pub f: Matrix,
    pub z: Vec<Elem>,
    pub lambda: Elem,
    pub mu: Elem,
    pub nu: Elem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoVerdict {
    IsometricIsomorphism,
    Isomorphism,
    Invalid(String),
}

/// The map `F` on the extension bases (columns are images).
pub fn witness_map(d1: &OscillatorData, d2: &OscillatorData, w: &IsoWitness) -> Result<Matrix> {
    let f = d1.field();
    let n = d1.dim();
    let Some(inv1) = d1.delta().inverse() else {
        bail!(Precondition, "delta_1 is not invertible");
    };
    let dz = d2.delta().mul_vec(&w.z);
    let mut cols = Vec::with_capacity(n + 2);
    let mut c0 = vec![w.mu.clone()];
    c0.extend(w.z.iter().cloned());
    c0.push(w.nu.clone());
    cols.push(c0);
    for j in 0..n {
        let mut e = vec![f.zero(); n];
        e[j] = f.one();
        let g = d2.gram().bilinear(&dz, &w.f.mul_vec(&inv1.mul_vec(&e)));
        let mut c = vec![f.zero()];
        c.extend(w.f.col(j));
        c.push(g);
        cols.push(c);
    }
    let mut last = vec![f.zero(); n + 2];
    last[n + 1] = w.lambda.clone();
    cols.push(last);
    Ok(Matrix::from_columns(f, n + 2, &cols))
}

pub fn verify_iso_witness(d1: &OscillatorData, d2: &OscillatorData, w: &IsoWitness) -> Result<IsoVerdict> {
    if !d1.is_invertible() || !d2.is_invertible() {
        bail!(Precondition, "witnesses are defined for invertible delta");
    }
    if d1.field() != d2.field() {
        bail!(Validation, "data over different fields");
    }
    let n = d1.dim();
    if d2.dim() != n || w.f.rows() != n || w.f.cols() != n || w.z.len() != n {
        return Ok(IsoVerdict::Invalid("dimensions do not match".into()));
    }
    if w.lambda.is_zero() || w.mu.is_zero() {
        return Ok(IsoVerdict::Invalid("lambda and mu must be nonzero".into()));
    }
    let Some(finv) = w.f.inverse() else {
        return Ok(IsoVerdict::Invalid("f is singular".into()));
    };
    if *d1.delta() != &(&finv * d2.delta()).scale(&w.mu) * &w.f {
        return Ok(IsoVerdict::Invalid("delta_1 != mu f^-1 delta_2 f".into()));
    }
    if d1.gram().scale(&(&w.lambda * &w.mu)) != d2.gram().congruent(&w.f) {
        return Ok(IsoVerdict::Invalid("lambda mu phi_1 != phi_2(f, f)".into()));
    }
    let a1 = build_double_extension(d1)?;
    let a2 = build_double_extension(d2)?;
    let map = witness_map(d1, d2, w)?;
    if !is_homomorphism(&a1.algebra, &a2.algebra, &map) {
        return Ok(IsoVerdict::Invalid("induced map is not a homomorphism".into()));
    }
    let f = d1.field();
    let inv1 = d1.delta().inverse().unwrap();
    let dz = d2.delta().mul_vec(&w.z);
    let mut isometric = (&w.lambda * &w.mu).is_one();
    for j in 0..n {
        let mut e = vec![f.zero(); n];
        e[j] = f.one();
        let lhs = &(&w.mu * &d2.gram().bilinear(&dz, &w.f.mul_vec(&inv1.mul_vec(&e))))
            + &d2.gram().bilinear(&w.z, &w.f.mul_vec(&e));
        isometric &= lhs.is_zero();
    }
    isometric &= (&(&f.from_i64(2) * &(&w.mu * &w.nu)) + &d2.gram().bilinear(&w.z, &w.z)).is_zero();
    let preserves = a2.form.gram().congruent(&map) == *a1.form.gram();
    if isometric != preserves {
        bail!(Internal, "isometry conditions disagree with the transported form");
    }
    Ok(if isometric { IsoVerdict::IsometricIsomorphism } else { IsoVerdict::Isomorphism })
}

/// `map [a, b]_1 = [map a, map b]_2` on basis pairs, with `map` invertible.
pub fn is_homomorphism(l1: &LieAlgebra, l2: &LieAlgebra, map: &Matrix) -> bool {
    if map.inverse().is_none() {
        return false;
    }
    let cols = map.columns();
    for i in 0..l1.dim() {
        for j in i + 1..l1.dim() {
            if map.mul_vec(l1.structure(i, j)) != l2.bracket(&cols[i], &cols[j]) {
                return false;
            }
        }
    }
    true
}

/// Characteristic polynomial assembled from the primary decomposition.
pub fn characteristic_polynomial(s: &SkewEndo) -> Result<Poly> {
    let split = primary_split(s)?;
    let mut p = Poly::one(s.field());
    for pf in &split.factors {
        p = &p * &pf.factor.pow(pf.component.dim() / pf.factor.deg());
    }
    Ok(p)
}

/// All nonzero `mu` with `chi_1(x) = mu^n chi_2(x / mu)`.
fn scaling_candidates(chi1: &Poly, chi2: &Poly) -> Vec<Elem> {
    let f = chi1.field();
    let n = chi1.deg();
    if chi2.deg() != n {
        return Vec::new();
    }
    let a0 = chi2.coeff(0);
    let b0 = chi1.coeff(0);
    if a0.is_zero() || b0.is_zero() {
        return Vec::new();
    }
    let r = &b0 / &a0;
    let roots: Vec<Elem> = match f {
        Field::Prime(_) => f.elements().unwrap().into_iter().filter(|m| !m.is_zero() && m.pow(n as u64) == r).collect(),
        Field::Rational => rational_roots(&r, n),
    };
    let mut out: Vec<Elem> = roots
        .into_iter()
        .filter(|mu| (0..=n).all(|i| chi1.coeff(i) == &chi2.coeff(i) * &mu.pow((n - i) as u64)))
        .collect();
    // positive scalings first over Q
    out.sort_by_key(|m| (m.sign() == Some(Ordering::Less), m.clone()));
    out
}

fn rational_roots(r: &Elem, n: usize) -> Vec<Elem> {
    let q = r.as_rational().unwrap();
    let neg = q.is_negative();
    if neg && n % 2 == 0 {
        return Vec::new();
    }
    let num = q.numer().abs();
    let den = q.denom().clone();
    let rn = num.nth_root(n as u32);
    let rd = den.nth_root(n as u32);
    if num::pow_ok(&rn, n, &num) && num::pow_ok(&rd, n, &den) {
        let base = Field::Rational.from_rational(&num_rational::BigRational::new(rn, rd)).unwrap();
        let base = if neg { -base } else { base };
        if n % 2 == 0 {
            vec![-base.clone(), base]
        } else {
            vec![base]
        }
    } else {
        Vec::new()
    }
}

mod num {
    use num_bigint::BigInt;
    use num_traits::Pow;

    pub fn pow_ok(root: &BigInt, n: usize, target: &BigInt) -> bool {
        Pow::pow(root, n as u32) == *target
    }
}

/// Outcome of the isometric isomorphism decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoDecision {
    Yes(IsoWitness),
    /// `kind` names the invariant that separates the data.
    No { kind: &'static str, detail: String },
    Undecided(String),
}

/// Decides whether `d(V_1, phi_1, delta_1)` and `d(V_2, phi_2, delta_2)` are
/// isometrically isomorphic. Every `Yes` carries a verified witness, every
/// `No` an invariant that differs.
pub fn decide_isometric(d1: &OscillatorData, d2: &OscillatorData) -> Result<IsoDecision> {
    if !d1.is_invertible() || !d2.is_invertible() {
        bail!(Precondition, "the decision is defined for invertible delta");
    }
    if d1.field() != d2.field() {
        bail!(Validation, "data over different fields");
    }
    if d1.dim() != d2.dim() {
        return Ok(IsoDecision::No { kind: "dimension", detail: format!("{} vs {}", d1.dim(), d2.dim()) });
    }
    let field = d1.field();
    // isometric extensions restrict to isometric (V, phi)
    let disc1 = d1.gram().det().square_class()?;
    let disc2 = d2.gram().det().square_class()?;
    if disc1 != disc2 {
        return Ok(IsoDecision::No { kind: "discriminant", detail: format!("{disc1} vs {disc2}") });
    }
    if field == Field::Rational {
        let s1 = d1.space().isotropy_report()?.signature;
        let s2 = d2.space().isotropy_report()?.signature;
        if s1 != s2 {
            return Ok(IsoDecision::No { kind: "signature", detail: format!("{s1:?} vs {s2:?}") });
        }
    }
    if let (Some(l1), Some(l2)) = (lorentz_frequencies(d1)?, lorentz_frequencies(d2)?) {
        let k1 = lorentz_normalize(&l1)?;
        let k2 = lorentz_normalize(&l2)?;
        if k1 != k2 {
            return Ok(IsoDecision::No {
                kind: "normalized-tuple",
                detail: format!("{} vs {}", fmt_tuple(&k1.lam), fmt_tuple(&k2.lam)),
            });
        }
    }
    let chi1 = characteristic_polynomial(d1.skew())?;
    let chi2 = characteristic_polynomial(d2.skew())?;
    let candidates = scaling_candidates(&chi1, &chi2);
    if candidates.is_empty() {
        return Ok(IsoDecision::No {
            kind: "characteristic-polynomial",
            detail: format!("no mu with {chi1} = mu^n chi_2(x/mu), chi_2 = {chi2}"),
        });
    }
    let cp1 = canonical_pair(d1.skew())?;
    let (a1, b1) = cp1.assembled();
    let mut undecided = Vec::new();
    for mu in &candidates {
        let d2s = d2.scaled(mu);
        let cp2 = canonical_pair(d2s.skew())?;
        if cp1.key()? != cp2.key()? {
            continue;
        }
        let (a2, b2) = cp2.assembled();
        if a1 == a2 && b1 == b2 {
            let f = &cp2.basis_change * &cp1.basis_change.inverse().unwrap();
            let w = IsoWitness {
                f,
                z: vec![field.zero(); d1.dim()],
                lambda: mu.inv().unwrap(),
                mu: mu.clone(),
                nu: field.zero(),
            };
            if verify_iso_witness(d1, d2, &w)? != IsoVerdict::IsometricIsomorphism {
                bail!(Internal, "constructed witness failed verification");
            }
            return Ok(IsoDecision::Yes(w));
        }
        undecided.push(mu.to_string());
    }
    if undecided.is_empty() {
        Ok(IsoDecision::No {
            kind: "canonical-blocks",
            detail: format!("block data differ for every scaling mu in {{{}}}", fmt_tuple(&candidates)),
        })
    } else {
        Ok(IsoDecision::Undecided(format!(
            "equal block invariants but no explicit witness for mu in {{{}}}",
            undecided.join(", ")
        )))
    }
}

fn fmt_tuple(v: &[Elem]) -> String {
    v.iter().map(Elem::to_string).collect::<Vec<_>>().join(", ")
}

/// Normalized frequency tuple: sorted ascending and divided by its first entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LorentzKey {
    pub lam: Vec<Elem>,
    pub form_params: Option<(Elem, Elem)>,
}

pub fn lorentz_normalize(lam: &[Elem]) -> Result<LorentzKey> {
    if lam.is_empty() {
        bail!(Validation, "empty frequency tuple");
    }
    for l in lam {
        if l.sign() != Some(Ordering::Greater) {
            bail!(Domain, "frequencies must be positive, got {l}");
        }
    }
    let mut v = lam.to_vec();
    v.sort();
    let first = v[0].clone();
    Ok(LorentzKey { lam: v.iter().map(|x| x / &first).collect(), form_params: None })
}

/// Representative of the class of `phi_{t,s}`: these forms are isometric
/// exactly when `s / s'` is a square, so `(0, c)` with `c` the sign over Q
/// or the square class representative over F_p.
pub fn ts_class(s: &Elem) -> Result<(Elem, Elem)> {
    let f = s.field();
    if s.is_zero() {
        bail!(Degenerate, "s must be nonzero");
    }
    let c = match f {
        Field::Rational => {
            if s.sign() == Some(Ordering::Less) {
                -f.one()
            } else {
                f.one()
            }
        }
        Field::Prime(_) => s.class_representative()?,
    };
    Ok((f.zero(), c))
}

/// Normalized tuple together with the class of `phi_{t,s}`.
pub fn lorentz_key(lam: &[Elem], s: &Elem) -> Result<LorentzKey> {
    let mut key = lorentz_normalize(lam)?;
    key.form_params = Some(ts_class(s)?);
    Ok(key)
}

/// Data on `K^{2n}` with the identity form and `delta(x_i) = -l_i y_i`,
/// `delta(y_i) = l_i x_i` in the basis `x_1..x_n, y_1..y_n`.
pub fn lorentz_data(lam: &[Elem]) -> Result<OscillatorData> {
    if lam.is_empty() {
        bail!(Validation, "empty frequency tuple");
    }
    let f = lam[0].field();
    let n = lam.len();
    let mut a = Matrix::zeros(f, 2 * n, 2 * n);
    for (i, l) in lam.iter().enumerate() {
        a[(n + i, i)] = -l;
        a[(i, n + i)] = l.clone();
    }
    OscillatorData::new(Matrix::identity(f, 2 * n), a)
}

/// Frequencies `l_i` when `phi` is definite over Q and `m_delta` is a
/// product of distinct `x^2 + l^2` with rational `l > 0`.
pub fn lorentz_frequencies(d: &OscillatorData) -> Result<Option<Vec<Elem>>> {
    if d.field() != Field::Rational || d.dim() % 2 != 0 {
        return Ok(None);
    }
    if d.space().isotropy_report()?.verdict != IsotropyVerdict::AnisotropicDefinite {
        return Ok(None);
    }
    let split = primary_split(d.skew())?;
    let mut out = Vec::new();
    for pf in &split.factors {
        let p = &pf.factor;
        if pf.multiplicity != 1 || p.deg() != 2 || !p.coeff(1).is_zero() {
            return Ok(None);
        }
        let Some(l) = p.coeff(0).sqrt() else { return Ok(None) };
        let l = if l.sign() == Some(Ordering::Less) { -l } else { l };
        for _ in 0..pf.component.dim() / 2 {
            out.push(l.clone());
        }
    }
    out.sort();
    Ok(Some(out))
}

fn phi_ts_gram(d: &OscillatorData, t: &Elem, s: &Elem) -> Matrix {
    let f = d.field();
    let n = d.dim();
    let mut g = Matrix::zeros(f, n + 2, n + 2);
    g[(0, 0)] = t.clone();
    g[(0, n + 1)] = s.clone();
    g[(n + 1, 0)] = s.clone();
    for i in 0..n {
        for j in 0..n {
            g[(i + 1, j + 1)] = s * &d.gram()[(i, j)];
        }
    }
    g
}

/// `phi_{t,s} = t phi_{1,0} + s phi_delta`, checked invariant and inside
/// the span of the invariant forms.
pub fn phi_ts_form(d: &OscillatorData, t: &Elem, s: &Elem) -> Result<OrthogonalSpace> {
    if s.is_zero() {
        bail!(Degenerate, "phi_(t,s) with s = 0 is degenerate");
    }
    let g = phi_ts_gram(d, t, s);
    let q = build_double_extension(d)?;
    if invariance_violation(&q.algebra, &g).is_some() {
        bail!(Internal, "phi_(t,s) is not invariant");
    }
    if !in_span(&q.algebra.invariant_forms_basis(), &g) {
        bail!(Internal, "phi_(t,s) lies outside the invariant forms");
    }
    let space = OrthogonalSpace::new(g)?;
    if !space.is_regular() {
        bail!(Internal, "phi_(t,s) is degenerate");
    }
    Ok(space)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TsIsometry {
    /// `F(delta) = delta + nu delta*`, `F(x) = c x`, `F(delta*) = c^2 delta*`,
    /// with `c^2 = s / s'`; `map` holds the columns of `F`.
    Witness { map: Matrix, nu: Elem, scale: Elem },
    /// Isometric over the real closure; the needed square root of `s / s'`
    /// is missing from the field.
    ClassLevel { ratio: Elem },
    No(String),
    Undecided(String),
}

/// Isometry between `(A, phi_{t,s})` and `(A, phi_{t',s'})` for the same data.
pub fn phi_ts_isometry(d: &OscillatorData, ts: (&Elem, &Elem), ts2: (&Elem, &Elem)) -> Result<TsIsometry> {
    let (t, s) = ts;
    let (t2, s2) = ts2;
    if s.is_zero() || s2.is_zero() {
        bail!(Degenerate, "s and s' must be nonzero");
    }
    let f = d.field();
    let n = d.dim();
    let ratio = s / s2;
    if f == Field::Rational && ratio.sign() == Some(Ordering::Less) {
        return Ok(TsIsometry::No("s s' < 0: the forms have opposite signatures".into()));
    }
    let Some(c) = ratio.sqrt() else {
        return Ok(match f {
            Field::Rational => TsIsometry::ClassLevel { ratio },
            Field::Prime(_) => TsIsometry::Undecided("s / s' is not a square in the field".into()),
        });
    };
    let nu = &(t - t2) / &(&f.from_i64(2) * s2);
    let mut map = Matrix::zeros(f, n + 2, n + 2);
    map[(0, 0)] = f.one();
    map[(n + 1, 0)] = nu.clone();
    for i in 0..n {
        map[(i + 1, i + 1)] = c.clone();
    }
    map[(n + 1, n + 1)] = ratio.clone();
    let q = build_double_extension(d)?;
    if !is_homomorphism(&q.algebra, &q.algebra, &map) {
        bail!(Internal, "scaling map is not an automorphism");
    }
    if phi_ts_gram(d, t2, s2).congruent(&map) != phi_ts_gram(d, t, s) {
        bail!(Internal, "scaling map is not an isometry");
    }
    Ok(TsIsometry::Witness { map, nu, scale: c })
}

/// Oscillator data recovered from a quadratic algebra, with the isometric
/// isomorphism from its double extension (columns: images of `delta`, the
/// basis of `V`, `delta*`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recovered {
    pub data: OscillatorData,
    pub iso: Matrix,
}

pub fn recover_double_extension(q: &QuadraticLieAlgebra) -> Result<Recovered> {
    let l = &q.algebra;
    let f = l.field();
    let n = l.dim();
    if n < 3 {
        bail!(Precondition, "dimension {n} is too small for a double extension");
    }
    if !l.is_solvable() {
        bail!(Precondition, "the algebra is not solvable");
    }
    let centre = l.center();
    if centre.dim() != 1 {
        bail!(Precondition, "the centre has dimension {} instead of 1", centre.dim());
    }
    let z = centre.basis()[0].clone();
    if !q.form.form(&z, &z).is_zero() {
        bail!(Precondition, "the centre is not isotropic");
    }
    let d2 = l.derived();
    if d2 != q.perp(&centre) {
        bail!(Precondition, "L^2 is not the orthogonal of the centre");
    }
    if !centre.contains_subspace(&l.bracket_subspaces(&d2, &d2)) {
        bail!(Precondition, "L^2 / Z(L) is not abelian");
    }
    let std = Subspace::full(f, n);
    let x0 = std
        .basis()
        .iter()
        .find(|e| !q.form.form(e, &z).is_zero())
        .cloned()
        .ok_or_else(|| Error::Internal("regular form pairs nothing with the centre".into()))?;
    let mut x = vec_scale(&x0, &q.form.form(&x0, &z).inv().unwrap());
    let half = &q.form.form(&x, &x) / &f.from_i64(2);
    x = vec_axpy(&x, &-half, &z);
    let plane = Subspace::span(f, n, &[x.clone(), z.clone()]);
    let v = q.perp(&plane);
    let m = v.basis_matrix();
    let mleft = m.left_inverse().unwrap();
    let phi = q.form.gram().congruent(&m);
    let mut cols = Vec::with_capacity(v.dim());
    for b in v.basis() {
        let y = l.bracket(&x, b);
        let c = q.form.form(&y, &x);
        let yv = vec_axpy(&y, &-c, &z);
        let coords = mleft.mul_vec(&yv);
        if m.mul_vec(&coords) != yv {
            bail!(Internal, "ad x does not preserve L^2");
        }
        cols.push(coords);
    }
    let delta = Matrix::from_columns(f, v.dim(), &cols);
    let data = OscillatorData::new(phi, delta)?;
    let mut icols = vec![x];
    icols.extend(v.basis().iter().cloned());
    icols.push(z);
    let iso = Matrix::from_columns(f, n, &icols);
    let built = build_double_extension(&data)?;
    if !is_homomorphism(&built.algebra, l, &iso) || q.form.gram().congruent(&iso) != *built.form.gram() {
        bail!(Internal, "recovered data does not reproduce the algebra");
    }
    Ok(Recovered { data, iso })
}

/// Reads the 5-tuple off an isometric isomorphism `F` between two extensions.
pub fn witness_from_map(d1: &OscillatorData, d2: &OscillatorData, map: &Matrix) -> Result<IsoWitness> {
    let n = d1.dim();
    if map.rows() != n + 2 || map.cols() != n + 2 || d2.dim() != n {
        bail!(Dimension, "map does not match the extension dimensions");
    }
    for j in 1..n + 2 {
        if !map[(0, j)].is_zero() {
            bail!(Contract, "map sends a vector of A^2 outside A^2");
        }
    }
    for i in 1..n + 1 {
        if !map[(i, n + 1)].is_zero() {
            bail!(Contract, "map does not preserve the line of delta*");
        }
    }
    let c0 = map.col(0);
    let f = map.submatrix(1..n + 1, 1..n + 1);
    Ok(IsoWitness {
        f,
        z: c0[1..=n].to_vec(),
        lambda: map[(n + 1, n + 1)].clone(),
        mu: c0[0].clone(),
        nu: c0[n + 1].clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witt1Verdict {
    Certified,
    NotCertified(String),
    Undecided(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witt1Report {
    pub verdict: Witt1Verdict,
    /// Set over F_p, where the equivalence is only checked at the level of
    /// the formulas.
    pub formula_level_only: bool,
    pub invertible: bool,
    pub anisotropic: Option<bool>,
    pub semisimple: bool,
    pub even_factors: bool,
    pub witt_index: Option<usize>,
}

pub fn witt1_certify(d: &OscillatorData) -> Result<Witt1Report> {
    let f = d.field();
    let formula_level_only = f.is_finite();
    let invertible = d.is_invertible();
    let m = minimal_polynomial(d.delta())?;
    let semisimple = Poly::gcd(&m, &m.derivative()).is_constant();
    let split = primary_split(d.skew())?;
    let even_factors = split
        .factors
        .iter()
        .all(|pf| pf.factor.coeffs().iter().enumerate().all(|(i, c)| i % 2 == 0 || c.is_zero()));
    let report = d.space().isotropy_report()?;
    let anisotropic = match report.verdict {
        IsotropyVerdict::AnisotropicDefinite => Some(true),
        IsotropyVerdict::Anisotropic => Some(true),
        IsotropyVerdict::Isotropic => Some(false),
        IsotropyVerdict::Undecided => None,
    };
    let mut out = Witt1Report {
        verdict: Witt1Verdict::Certified,
        formula_level_only,
        invertible,
        anisotropic,
        semisimple,
        even_factors,
        witt_index: None,
    };
    if !invertible {
        out.verdict = Witt1Verdict::NotCertified("delta is not invertible".into());
        return Ok(out);
    }
    match anisotropic {
        Some(false) => {
            out.verdict = Witt1Verdict::NotCertified("phi has an isotropic vector".into());
            return Ok(out);
        }
        None => {
            out.verdict = Witt1Verdict::Undecided("isotropy of phi is undecided".into());
            return Ok(out);
        }
        Some(true) => {}
    }
    let psi = OrthogonalSpace::new(d.extension_gram())?;
    out.witt_index = Some(match f {
        Field::Prime(_) => witt_index_finite(psi.dim(), &psi.gram().det()),
        // span(delta, delta*) is a hyperbolic plane orthogonal to the anisotropic V
        Field::Rational => 1,
    });
    if out.witt_index != Some(1) {
        bail!(Internal, "extension of an anisotropic space has Witt index {:?}", out.witt_index);
    }
    if !(semisimple && even_factors) {
        if formula_level_only {
            out.verdict = Witt1Verdict::NotCertified("delta is not semisimple with even factors".into());
        } else {
            bail!(Internal, "anisotropic data with a non-semisimple or odd-factor delta");
        }
    }
    Ok(out)
}

/// One class of the census.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusBucket {
    pub form_discriminant: SquareClass,
    pub nilpotent: bool,
    pub key: CanonicalKey,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub field: Field,
    pub dim: usize,
    pub total: u64,
    pub buckets: Vec<CensusBucket>,
}

pub const CENSUS_MAX_DIM: usize = 4;
pub const CENSUS_MAX_PRIME: u32 = 7;

/// Diagonal representatives of the regular forms of dimension `n` over F_p.
pub fn form_representatives(field: Field, n: usize) -> Result<Vec<Matrix>> {
    let Some(ns) = field.nonsquare() else {
        bail!(Capability, "form classes are enumerated over finite fields only");
    };
    let mut one = vec![field.one(); n];
    let a = Matrix::diagonal(field, &one);
    one[n - 1] = ns;
    Ok(vec![a, Matrix::diagonal(field, &one)])
}

/// Every skew `delta` for every form class over F_p in dimension `dim`,
/// bucketed by canonical key.
pub fn census(field: Field, dim: usize, unsafe_size: bool) -> Result<Census> {
    let Field::Prime(p) = field else {
        bail!(Capability, "the census enumerates finite fields only");
    };
    if dim == 0 {
        bail!(Validation, "dimension must be positive");
    }
    if !unsafe_size && (dim > CENSUS_MAX_DIM || p > CENSUS_MAX_PRIME) {
        bail!(Capability, "census limited to dim <= {CENSUS_MAX_DIM} and p <= {CENSUS_MAX_PRIME}");
    }
    let pairs: Vec<(usize, usize)> = (0..dim).flat_map(|i| (i + 1..dim).map(move |j| (i, j))).collect();
    let count = (p as u64).checked_pow(pairs.len() as u32).ok_or_else(|| Error::Capability("census too large".into()))?;
    let mut map: BTreeMap<(SquareClass, bool, CanonicalKey), u64> = BTreeMap::new();
    let mut total = 0;
    for gram in form_representatives(field, dim)? {
        let disc = gram.det().square_class()?;
        let binv = gram.inverse().unwrap();
        let keys: Vec<Result<(bool, CanonicalKey)>> = (0..count)
            .into_par_iter()
            .map(|code| {
                let mut s = Matrix::zeros(field, dim, dim);
                let mut c = code;
                for &(i, j) in &pairs {
                    let v = field.from_i64((c % p as u64) as i64);
                    c /= p as u64;
                    s[(j, i)] = -&v;
                    s[(i, j)] = v;
                }
                let a = &binv * &s;
                let skew = SkewEndo::new(OrthogonalSpace::new(gram.clone())?, a)?;
                let nilpotent = skew.matrix().pow(dim).is_zero();
                Ok((nilpotent, canonical_pair(&skew)?.key()?))
            })
            .collect();
        for k in keys {
            let (nil, key) = k?;
            *map.entry((disc.clone(), nil, key)).or_default() += 1;
            total += 1;
        }
    }
    let buckets = map
        .into_iter()
        .map(|((form_discriminant, nilpotent, key), count)| CensusBucket { form_discriminant, nilpotent, key, count })
        .collect();
    Ok(Census { field, dim, total, buckets })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::skewcanon::OddForm;

    fn n23(f: Field) -> OscillatorData {
        let b = CanonicalBlock::zero_odd(1, &f.from_i64(-1), OddForm::Raw).unwrap();
        OscillatorData::new(b.b, b.a).unwrap()
    }

    fn n32(f: Field) -> OscillatorData {
        let b = CanonicalBlock::zero_even(f, 2);
        OscillatorData::new(b.b, b.a).unwrap()
    }

    #[test]
    fn free_nilpotent_fixtures() {
        let f = Field::Rational;
        let a = build_double_extension(&n23(f)).unwrap();
        assert_eq!(a.dim(), 5);
        assert_eq!(a.algebra.nilpotency_index(), Some(3));
        assert_eq!(a.algebra.quadratic_dimension(), 4);
        let b = build_double_extension(&n32(f)).unwrap();
        assert_eq!(b.dim(), 6);
        assert_eq!(b.algebra.nilpotency_index(), Some(2));
        assert_eq!(b.algebra.quadratic_dimension(), 7);
        let r = verify_structure(&n23(f)).unwrap();
        assert!(r.is_consistent(), "{:?}", r.mismatches);
        let c = classify_nilpotent(&n32(f)).unwrap();
        assert_eq!(c.k, 2);
        assert!(c.chain_bounds);
        assert!(!c.stated_bounds);
    }

    #[test]
    fn rotation_extension() {
        let f = Field::Rational;
        let d = OscillatorData::new(Matrix::identity(f, 2), Matrix::from_ints(f, &[&[0, -1], &[1, 0]])).unwrap();
        let q = build_double_extension(&d).unwrap();
        let e = |i: usize| {
            let mut v = vec![f.zero(); 4];
            v[i] = f.one();
            v
        };
        assert_eq!(q.algebra.bracket(&e(0), &e(1)), e(2));
        assert_eq!(q.algebra.bracket(&e(0), &e(2)), vec_scale(&e(1), &-f.one()));
        assert_eq!(q.algebra.bracket(&e(1), &e(2)), e(3));
        let r = local_criteria(&d).unwrap();
        assert!(r.criteria().iter().all(|&x| x));
        assert_eq!(r.forms_span, Some(true));
        let w = witt1_certify(&d).unwrap();
        assert_eq!(w.verdict, Witt1Verdict::Certified);
    }

    #[test]
    fn scaling_witness_orientation() {
        let f = Field::Rational;
        let d1 = lorentz_data(&[f.one(), f.from_i64(2)]).unwrap();
        let d2 = d1.scaled(&f.from_i64(2));
        let id = Matrix::identity(f, 4);
        let good = IsoWitness {
            f: id.clone(),
            z: vec![f.zero(); 4],
            lambda: f.from_i64(2),
            mu: f.from_ratio(1, 2),
            nu: f.zero(),
        };
        assert_eq!(verify_iso_witness(&d1, &d2, &good).unwrap(), IsoVerdict::IsometricIsomorphism);
        let swapped = IsoWitness { lambda: f.from_ratio(1, 2), mu: f.from_i64(2), ..good };
        assert!(matches!(verify_iso_witness(&d1, &d2, &swapped).unwrap(), IsoVerdict::Invalid(_)));
    }

    #[test]
    fn ts_family() {
        let f = Field::Rational;
        let d = lorentz_data(&[f.one()]).unwrap();
        let r = phi_ts_isometry(&d, (&f.zero(), &f.one()), (&f.from_i64(4), &f.one())).unwrap();
        match r {
            TsIsometry::Witness { nu, .. } => assert_eq!(nu, f.from_i64(-2)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            phi_ts_isometry(&d, (&f.zero(), &f.one()), (&f.zero(), &f.from_i64(-1))).unwrap(),
            TsIsometry::No(_)
        ));
        assert!(matches!(
            phi_ts_isometry(&d, (&f.zero(), &f.one()), (&f.zero(), &f.from_i64(2))).unwrap(),
            TsIsometry::ClassLevel { .. }
        ));
    }

    #[test]
    fn census_is_deterministic() {
        let f = Field::Prime(3);
        let a = census(f, 2, false).unwrap();
        assert_eq!(a.total, 6);
        assert_eq!(a, census(f, 2, false).unwrap());
        assert!(census(Field::Prime(11), 2, false).is_err());
    }
}
