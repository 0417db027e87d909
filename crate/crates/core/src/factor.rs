//! Factorization into monic irreducibles over F_p and Q.
//!
//! Over F_p: square-free decomposition, distinct-degree splitting and
//! Cantor-Zassenhaus equal-degree splitting. Over Q: square-free
//! decomposition, factorization modulo a good prime, Hensel lifting and
//! recombination of the lifted factors.

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{bail, Result};
use crate::field::{is_prime_u64, Elem, Field};
use crate::poly::Poly;

/// Default cap on the degree of rational polynomials handed to the factorizer.
pub const DEFAULT_DEGREE_BOUND: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorOptions {
    /// Seed for the randomized equal-degree splitting.
    pub seed: u64,
    /// Largest degree accepted over Q.
    pub degree_bound: usize,
}

impl Default for FactorOptions {
    fn default() -> Self {
        FactorOptions { seed: 0, degree_bound: DEFAULT_DEGREE_BOUND }
    }
}

/// Monic irreducible factors with multiplicities, sorted by degree and then
/// coefficients. The product of the powers equals `p` up to its leading
/// coefficient.
pub fn factor_poly(p: &Poly) -> Result<Vec<(Poly, usize)>> {
    factor_poly_with(p, &FactorOptions::default())
}

pub fn factor_poly_with(p: &Poly, opts: &FactorOptions) -> Result<Vec<(Poly, usize)>> {
    if p.is_zero() {
        bail!(Degenerate, "cannot factor the zero polynomial");
    }
    let mut out = match p.field() {
        Field::Prime(_) => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            factor_fp(&p.monic(), &mut rng)
        }
        Field::Rational => {
            if p.deg() > opts.degree_bound {
                bail!(
                    Capability,
                    "factorization over Q is limited to degree {} (got degree {})",
                    opts.degree_bound,
                    p.deg()
                );
            }
            factor_q(p)?
        }
    };
    out.sort_by_key(|(f, _)| f.sort_key());
    Ok(out)
}

fn pth_root(f: &Poly, p: usize) -> Poly {
    let coeffs = f.coeffs().iter().step_by(p).cloned().collect();
    Poly::new(f.field(), coeffs)
}

fn squarefree_fp(f: &Poly) -> Vec<(Poly, usize)> {
    let p = f.field().characteristic() as usize;
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let d = f.derivative();
    if d.is_zero() {
        for (g, m) in squarefree_fp(&pth_root(f, p)) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = Poly::gcd(f, &d);
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while !w.is_constant() {
        let y = Poly::gcd(&w, &c);
        let z = w.div_exact(&y);
        if !z.is_constant() {
            out.push((z.monic(), i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w);
    }
    if !c.is_constant() {
        for (g, m) in squarefree_fp(&pth_root(&c, p)) {
            out.push((g, m * p));
        }
    }
    out
}

/// Distinct-degree split of a square-free monic polynomial.
fn ddf(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field();
    let p = BigUint::from(field.characteristic());
    let x = Poly::x(field);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut d = 0;
    while rest.deg() >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod(&p, &rest);
        let g = Poly::gcd(&(&h - &x), &rest);
        if !g.is_constant() {
            rest = rest.div_exact(&g);
            h = h.rem(&rest);
            out.push((g, d));
        }
    }
    if !rest.is_constant() {
        let deg = rest.deg();
        out.push((rest, deg));
    }
    out
}

/// Equal-degree split of a product of distinct irreducibles of degree `d`.
fn edf(g: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    if g.deg() == d {
        return vec![g.clone()];
    }
    let field = g.field();
    let p = field.characteristic() as u64;
    let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let coeffs: Vec<Elem> = (0..g.deg()).map(|_| field.random_elem(rng, 0)).collect();
        let a = Poly::new(field, coeffs);
        if a.is_constant() {
            continue;
        }
        let b = &a.pow_mod(&e, g) - &Poly::one(field);
        let h = Poly::gcd(&b, g);
        if !h.is_constant() && h.deg() < g.deg() {
            let mut out = edf(&h, d, rng);
            out.extend(edf(&g.div_exact(&h), d, rng));
            return out;
        }
    }
}

fn factor_fp(f: &Poly, rng: &mut ChaCha8Rng) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    for (sf, m) in squarefree_fp(f) {
        for (g, d) in ddf(&sf) {
            for h in edf(&g, d, rng) {
                out.push((h.monic(), m));
            }
        }
    }
    out
}

fn squarefree_q(f: &Poly) -> Vec<(Poly, usize)> {
    let f = f.monic();
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let a0 = Poly::gcd(&f, &f.derivative());
    let mut b = f.div_exact(&a0);
    let mut c = f.derivative().div_exact(&a0);
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while !b.is_constant() {
        let a = Poly::gcd(&b, &d);
        if !a.is_constant() {
            out.push((a.clone(), i));
        }
        b = b.div_exact(&a);
        c = d.div_exact(&a);
        d = &c - &b.derivative();
        i += 1;
    }
    out
}

type IntPoly = Vec<BigInt>;

fn trim(mut v: IntPoly) -> IntPoly {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

/// Primitive integer polynomial with positive leading coefficient.
fn primitive_integer(f: &Poly) -> IntPoly {
    let qs: Vec<&BigRational> = f.coeffs().iter().map(|c| c.as_rational().unwrap()).collect();
    let l = qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: IntPoly = qs.iter().map(|q| (*q * &l).to_integer()).collect();
    primitive(ints)
}

fn primitive(v: IntPoly) -> IntPoly {
    let v = trim(v);
    let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return v;
    }
    let sign = if v.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
    v.into_iter().map(|c| c / &g * &sign).collect()
}

fn int_to_fp(f: &[BigInt], p: u32) -> Poly {
    let field = Field::Prime(p);
    Poly::new(field, f.iter().map(|c| field.from_bigint(c)).collect())
}

fn fp_to_int(f: &Poly) -> IntPoly {
    f.coeffs().iter().map(|c| BigInt::from(c.residue().unwrap())).collect()
}

fn int_to_q(f: &[BigInt]) -> Poly {
    let field = Field::Rational;
    Poly::new(field, f.iter().map(|c| field.from_bigint(c)).collect())
}

fn int_mul(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn reduce_mod(a: &[BigInt], m: &BigInt) -> IntPoly {
    trim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn symmetric_mod(a: &[BigInt], m: &BigInt) -> IntPoly {
    let half = m / 2;
    trim(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

/// Lifts `f = g h (mod p)` with `g` monic and coprime to `h` to a
/// factorization modulo `p^k`.
fn hensel_two(f: &[BigInt], g: &Poly, h: &Poly, p: u32, k: u32) -> (IntPoly, IntPoly) {
    let (one, _, t) = Poly::ext_gcd(g, h).expect("nonzero factors");
    debug_assert!(one.is_constant());
    let pb = BigInt::from(p);
    let mut gi = fp_to_int(g);
    let mut hi = fp_to_int(h);
    let mut pk = pb.clone();
    for _ in 1..k {
        let next = &pk * &pb;
        let prod = int_mul(&gi, &hi);
        let n = f.len().max(prod.len());
        let diff: IntPoly = (0..n)
            .map(|i| {
                let a = f.get(i).cloned().unwrap_or_default();
                let b = prod.get(i).cloned().unwrap_or_default();
                (a - b).mod_floor(&next) / &pk
            })
            .collect();
        let e = int_to_fp(&diff, p);
        let (_, dg) = (&t * &e).divrem(g).unwrap();
        let dh = (&e - &(h * &dg)).div_exact(g);
        let lift = |base: &mut IntPoly, delta: &Poly| {
            let dv = fp_to_int(delta);
            if base.len() < dv.len() {
                base.resize(dv.len(), BigInt::zero());
            }
            for (i, c) in dv.iter().enumerate() {
                base[i] += c * &pk;
            }
            *base = reduce_mod(base, &next);
        };
        lift(&mut gi, &dg);
        lift(&mut hi, &dh);
        pk = next;
    }
    (gi, hi)
}

fn factor_q(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    let mut out = Vec::new();
    for (sf, m) in squarefree_q(f) {
        for g in factor_squarefree_integer(&primitive_integer(&sf)) {
            out.push((int_to_q(&g).monic(), m));
        }
    }
    Ok(out)
}

fn factor_squarefree_integer(f: &[BigInt]) -> Vec<IntPoly> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    let lc = f[n].clone();
    let p = (3u32..)
        .filter(|&p| is_prime_u64(p as u64))
        .find(|&p| {
            if (&lc % BigInt::from(p)).is_zero() {
                return false;
            }
            let fp = int_to_fp(f, p);
            Poly::gcd(&fp, &fp.derivative()).is_constant()
        })
        .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let fp = int_to_fp(f, p);
    let mut mods: Vec<Poly> = factor_fp(&fp.monic(), &mut rng).into_iter().map(|(g, _)| g).collect();
    if mods.len() == 1 {
        return vec![f.to_vec()];
    }
    mods.sort_by_key(|g| g.sort_key());

    // coefficient bound for factors scaled to leading coefficient lc
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let bound = (norm2.sqrt() + 1u32) * lc.abs() * (BigInt::one() << n);
    let target = bound * 2u32;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = pb.clone();
    while pk <= target {
        pk *= &pb;
        k += 1;
    }

    // lift one factor at a time
    let mut lifted: Vec<IntPoly> = Vec::new();
    let mut rest: IntPoly = f.to_vec();
    let r = mods.len();
    for i in 0..r - 1 {
        let g = &mods[i];
        let mut h = Poly::constant(Field::Prime(p).from_bigint(rest.last().unwrap()));
        for m in &mods[i + 1..] {
            h = &h * m;
        }
        let (gl, hl) = hensel_two(&rest, g, &h, p, k);
        lifted.push(gl);
        rest = hl;
    }
    // make the last lifted factor monic modulo p^k
    let lc_rest = rest.last().unwrap().clone();
    let inv = lc_rest.extended_gcd(&pk).x.mod_floor(&pk);
    lifted.push(reduce_mod(&rest.iter().map(|c| c * &inv).collect::<Vec<_>>(), &pk));

    let mut remaining = f.to_vec();
    let mut pool: Vec<IntPoly> = lifted;
    let mut found = Vec::new();
    let mut s = 1;
    'outer: while 2 * s <= pool.len() {
        for subset in (0..pool.len()).combinations(s) {
            let lcr = remaining.last().unwrap().clone();
            let mut g = vec![lcr.clone()];
            for &i in &subset {
                g = reduce_mod(&int_mul(&g, &pool[i]), &pk);
            }
            let g = primitive(symmetric_mod(&g, &pk));
            if g.len() < 2 {
                continue;
            }
            let (qq, rr) = int_to_q(&remaining).divrem(&int_to_q(&g)).unwrap();
            let integral = qq.coeffs().iter().all(|c| c.as_rational().unwrap().is_integer());
            if rr.is_zero() && integral {
                remaining = qq
                    .coeffs()
                    .iter()
                    .map(|c| c.as_rational().unwrap().to_integer())
                    .collect();
                found.push(g);
                for &i in subset.iter().rev() {
                    pool.remove(i);
                }
                continue 'outer;
            }
        }
        s += 1;
    }
    let remaining = primitive(remaining);
    if remaining.len() > 1 {
        found.push(remaining);
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    fn product(fs: &[(Poly, usize)], field: Field) -> Poly {
        let mut acc = Poly::one(field);
        for (f, m) in fs {
            acc = &acc * &f.pow(*m);
        }
        acc
    }

    fn is_irreducible_fp_bruteforce(f: &Poly) -> bool {
        // no monic factor of degree 1..=deg/2
        let field = f.field();
        let p = field.characteristic() as u64;
        let n = f.deg();
        for d in 1..=n / 2 {
            let count = p.pow(d as u32);
            for code in 0..count {
                let mut c = Vec::with_capacity(d + 1);
                let mut x = code;
                for _ in 0..d {
                    c.push(field.from_i64((x % p) as i64));
                    x /= p;
                }
                c.push(field.one());
                if Poly::new(field, c).divides(f) {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn fp_factorizations_multiply_back() {
        for p in [3u32, 5, 7] {
            let field = Field::Prime(p);
            for code in 0..400u64 {
                let mut c = Vec::new();
                let mut x = code * 7919 + 13;
                for _ in 0..6 {
                    c.push(field.from_i64((x % p as u64) as i64));
                    x /= p as u64;
                }
                c.push(field.one());
                let f = Poly::new(field, c);
                let fs = factor_poly(&f).unwrap();
                assert_eq!(product(&fs, field), f);
                for (g, _) in &fs {
                    assert!(g.is_monic());
                    assert!(is_irreducible_fp_bruteforce(g), "{g} reducible");
                }
            }
        }
    }

    #[test]
    fn fp_repeated_and_pth_power_factors() {
        let field = Field::Prime(3);
        // (x^3 - x - 1)^3 * (x + 1)^4: derivative of the first cube vanishes
        let a = Poly::from_ints(field, &[-1, -1, 0, 1]);
        let b = Poly::from_ints(field, &[1, 1]);
        let f = &a.pow(3) * &b.pow(4);
        let fs = factor_poly(&f).unwrap();
        assert_eq!(fs, vec![(b, 4), (a, 3)]);
    }

    #[test]
    fn rational_factorizations() {
        let q = |c: &[i64]| Poly::from_ints(Field::Rational, c);
        // x^4 - 1 = (x - 1)(x + 1)(x^2 + 1)
        let fs = factor_poly(&q(&[-1, 0, 0, 0, 1])).unwrap();
        assert_eq!(fs, vec![(q(&[-1, 1]), 1), (q(&[1, 1]), 1), (q(&[1, 0, 1]), 1)]);
        // x^4 + 1 is irreducible over Q but splits modulo every prime
        let fs = factor_poly(&q(&[1, 0, 0, 0, 1])).unwrap();
        assert_eq!(fs, vec![(q(&[1, 0, 0, 0, 1]), 1)]);
        // 6x^3 + x^2 - 2x = x (2x - 1)(3x + 2), leading unit 6
        let fs = factor_poly(&q(&[0, -2, 1, 6])).unwrap();
        let f = Field::Rational;
        assert_eq!(
            fs,
            vec![
                (Poly::new(f, vec![f.from_ratio(-1, 2), f.one()]), 1),
                (q(&[0, 1]), 1),
                (Poly::new(f, vec![f.from_ratio(2, 3), f.one()]), 1),
            ]
        );
        // (x^2 - 2)^2 (x^3 + x + 1)
        let g = &q(&[-2, 0, 1]).pow(2) * &q(&[1, 1, 0, 1]);
        let fs = factor_poly(&g).unwrap();
        assert_eq!(fs, vec![(q(&[-2, 0, 1]), 2), (q(&[1, 1, 0, 1]), 1)]);
        // Swinnerton-Dyer style polynomial x^4 - 10x^2 + 1
        let fs = factor_poly(&q(&[1, 0, -10, 0, 1])).unwrap();
        assert_eq!(fs.len(), 1);
        // product of two quadratics and two cubics
        let parts = [q(&[3, 0, 1]), q(&[1, 1, 1]), q(&[-2, 0, 0, 1]), q(&[5, -1, 0, 1])];
        let mut prod = Poly::one(Field::Rational);
        for p in &parts {
            prod = &prod * p;
        }
        let fs = factor_poly(&prod).unwrap();
        assert_eq!(fs.len(), 4);
        assert_eq!(product(&fs, Field::Rational), prod);
    }

    #[test]
    fn degree_cap() {
        let q = Poly::from_ints(Field::Rational, &[1; 18]);
        assert!(matches!(factor_poly(&q), Err(crate::Error::Capability(_))));
        let opts = FactorOptions { degree_bound: 20, ..Default::default() };
        let fs = factor_poly_with(&q, &opts).unwrap();
        assert_eq!(product(&fs, Field::Rational), q);
    }
}
