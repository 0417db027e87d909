//! Seeded generators for test inputs: forms, skew maps, isometries and
//! scrambled canonical block assemblies.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{bail, Result};
use crate::field::{Elem, Field};
use crate::matrix::{vec_axpy, Matrix};
use crate::oscillator::OscillatorData;
use crate::quadspace::{OrthogonalSpace, SkewEndo};
use crate::skewcanon::{CanonicalBlock, OddForm};

/// Entry height for random rationals.
pub const HEIGHT: i64 = 3;
const RETRIES: usize = 500;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix<R: Rng + ?Sized>(field: Field, rows: usize, cols: usize, rng: &mut R) -> Matrix {
    let data = (0..rows * cols).map(|_| field.random_elem(rng, HEIGHT)).collect();
    Matrix::new(field, rows, cols, data).unwrap()
}

pub fn random_invertible<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> Matrix {
    loop {
        let m = random_matrix(field, n, n, rng);
        if !m.det().is_zero() {
            return m;
        }
    }
}

/// Random regular symmetric Gram matrix.
pub fn random_regular_gram<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> Matrix {
    loop {
        let mut g = Matrix::zeros(field, n, n);
        for i in 0..n {
            for j in i..n {
                let x = field.random_elem(rng, HEIGHT);
                g[(i, j)] = x.clone();
                g[(j, i)] = x;
            }
        }
        if !g.det().is_zero() {
            return g;
        }
    }
}

/// `B^{-1} S` for a random antisymmetric `S`; every skew map has this shape.
pub fn random_skew<R: Rng + ?Sized>(gram: &Matrix, rng: &mut R) -> Matrix {
    let f = gram.field();
    let n = gram.rows();
    let mut s = Matrix::zeros(f, n, n);
    for i in 0..n {
        for j in i + 1..n {
            let x = f.random_elem(rng, HEIGHT);
            s[(j, i)] = -&x;
            s[(i, j)] = x;
        }
    }
    &gram.inverse().expect("regular gram") * &s
}

pub fn random_oscillator<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> OscillatorData {
    let g = random_regular_gram(field, n, rng);
    let a = random_skew(&g, rng);
    OscillatorData::new(g, a).expect("generated data is valid")
}

/// Random data with invertible `delta`; `n` must be even.
pub fn random_invertible_oscillator<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> Result<OscillatorData> {
    if n == 0 || n % 2 == 1 {
        bail!(Domain, "invertible skew maps need an even positive dimension, got {n}");
    }
    for _ in 0..RETRIES {
        let d = random_oscillator(field, n, rng);
        if d.is_invertible() {
            return Ok(d);
        }
    }
    bail!(Capability, "no invertible skew map found in {RETRIES} draws")
}

/// Product of random reflections `x -> x - 2 B(x, v) / B(v, v) v`.
pub fn random_isometry<R: Rng + ?Sized>(space: &OrthogonalSpace, reflections: usize, rng: &mut R) -> Matrix {
    let f = space.field();
    let n = space.dim();
    let two = f.from_i64(2);
    let mut m = Matrix::identity(f, n);
    let mut done = 0;
    while done < reflections {
        let v: Vec<Elem> = (0..n).map(|_| f.random_elem(rng, 2)).collect();
        let q = space.form(&v, &v);
        if q.is_zero() {
            continue;
        }
        let cols: Vec<Vec<Elem>> = m
            .columns()
            .iter()
            .map(|c| vec_axpy(c, &-&(&two * &space.form(c, &v) / &q), &v))
            .collect();
        m = Matrix::from_columns(f, n, &cols);
        done += 1;
    }
    m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AssemblyKind {
    Nilpotent,
    SplitEigenvalue,
}

/// A block diagonal pair together with its scrambled copy.
#[derive(Clone, Debug)]
pub struct Assembly {
    pub blocks: Vec<CanonicalBlock>,
    pub original: SkewEndo,
    pub scramble: Matrix,
    pub scrambled: SkewEndo,
}

/// Random canonical blocks of total size at most `max_dim`, assembled and
/// then moved by a random invertible matrix.
pub fn random_assembly<R: Rng + ?Sized>(field: Field, max_dim: usize, kind: AssemblyKind, rng: &mut R) -> Result<Assembly> {
    if max_dim == 0 {
        bail!(Validation, "assembly needs a positive dimension bound");
    }
    let mut blocks: Vec<CanonicalBlock> = Vec::new();
    let mut used = 0;
    loop {
        let room = max_dim - used;
        let mut options: Vec<CanonicalBlock> = Vec::new();
        for n in 0..=2 {
            if 2 * n + 1 <= room {
                let form = if rng.gen_bool(0.5) { OddForm::Raw } else { OddForm::Standard };
                options.push(CanonicalBlock::zero_odd(n, &field.random_unit(rng, HEIGHT), form)?);
            }
        }
        for n in [2, 4] {
            if 2 * n <= room {
                options.push(CanonicalBlock::zero_even(field, n));
            }
        }
        if kind == AssemblyKind::SplitEigenvalue {
            for n in 1..=3 {
                if 2 * n <= room {
                    let l = field.random_unit(rng, HEIGHT);
                    options.push(CanonicalBlock::paired(&l, n));
                    options.push(CanonicalBlock::paired(&l, n));
                }
            }
        }
        if options.is_empty() || (!blocks.is_empty() && rng.gen_bool(0.25)) {
            break;
        }
        let b = options.swap_remove(rng.gen_range(0..options.len()));
        used += b.size();
        blocks.push(b);
    }
    let a = Matrix::block_diag(field, &blocks.iter().map(|b| b.a.clone()).collect::<Vec<_>>());
    let g = Matrix::block_diag(field, &blocks.iter().map(|b| b.b.clone()).collect::<Vec<_>>());
    let original = SkewEndo::new(OrthogonalSpace::new(g)?, a)?;
    let scramble = random_invertible(field, used, rng);
    let scrambled = original.change_basis(&scramble)?;
    Ok(Assembly { blocks, original, scramble, scrambled })
}

/// Positive integer frequencies `1..=bound`.
pub fn random_frequencies<R: Rng + ?Sized>(n: usize, bound: i64, rng: &mut R) -> Vec<Elem> {
    (0..n).map(|_| Field::Rational.from_i64(rng.gen_range(1..=bound))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflections_preserve_the_form() {
        let mut r = rng(7);
        for field in [Field::Rational, Field::Prime(5)] {
            let g = random_regular_gram(field, 4, &mut r);
            let s = OrthogonalSpace::new(g.clone()).unwrap();
            let m = random_isometry(&s, 3, &mut r);
            assert_eq!(g.congruent(&m), g);
        }
    }

    #[test]
    fn assemblies_stay_within_bounds() {
        let mut r = rng(1);
        for _ in 0..20 {
            let a = random_assembly(Field::Prime(7), 10, AssemblyKind::SplitEigenvalue, &mut r).unwrap();
            assert!(a.original.dim() <= 10);
            assert_eq!(a.blocks.iter().map(|b| b.size()).sum::<usize>(), a.original.dim());
        }
    }
}
