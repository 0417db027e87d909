//! Dense univariate polynomials over a [`Field`].

use std::fmt;

use num_bigint::BigUint;

use crate::error::{bail, Result};
use crate::field::{Elem, Field};
use crate::matrix::Matrix;

/// Coefficients in ascending degree order, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Elem>,
}

impl Poly {
    pub fn new(field: Field, mut coeffs: Vec<Elem>) -> Poly {
        for c in &coeffs {
            assert_eq!(c.field(), field, "field mismatch in polynomial coefficients");
        }
        while coeffs.last().is_some_and(Elem::is_zero) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn from_ints(field: Field, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: Field) -> Poly {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn one(field: Field) -> Poly {
        Poly::constant(field.one())
    }

    pub fn constant(c: Elem) -> Poly {
        Poly::new(c.field(), vec![c])
    }

    /// The monomial `x`.
    pub fn x(field: Field) -> Poly {
        Poly::new(field, vec![field.zero(), field.one()])
    }

    /// `x - a`.
    pub fn linear(a: &Elem) -> Poly {
        let f = a.field();
        Poly::new(f, vec![-a, f.one()])
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Elem {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(Elem::is_one)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.leading().inv().unwrap();
        self.scale(&inv)
    }

    pub fn scale(&self, c: &Elem) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &Elem) -> Elem {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// `p(A)` by Horner's rule.
    pub fn eval_matrix(&self, a: &Matrix) -> Matrix {
        let n = a.rows();
        let mut acc = Matrix::zeros(self.field, n, n);
        for c in self.coeffs.iter().rev() {
            acc = &acc * a;
            for i in 0..n {
                acc[(i, i)] += c;
            }
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.field,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &self.field.from_i64(i as i64))
                .collect(),
        )
    }

    /// `(q, r)` with `self = q * d + r` and `deg r < deg d`.
    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        if d.is_zero() {
            bail!(Domain, "polynomial division by zero");
        }
        let f = self.field;
        let dd = d.deg();
        let lc_inv = d.leading().inv().unwrap();
        let mut r = self.coeffs.clone();
        if r.len() < d.coeffs.len() {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut q = vec![f.zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] * &lc_inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[i + j] -= &(&c * dc);
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        Ok((Poly::new(f, q), Poly::new(f, r)))
    }

    /// Exact quotient; panics if the division leaves a remainder.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.divrem(d).expect("nonzero divisor");
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).expect("nonzero divisor").1
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.rem(self).is_zero()
    }

    /// Extended gcd: `(g, u, v)` with `u*a + v*b = g` and `g` monic.
    /// Fails when both inputs are zero.
    pub fn ext_gcd(a: &Poly, b: &Poly) -> Result<(Poly, Poly, Poly)> {
        if a.is_zero() && b.is_zero() {
            bail!(Degenerate, "gcd of two zero polynomials");
        }
        let f = a.field;
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = r0.leading().inv().unwrap();
        Ok((r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)))
    }

    /// Monic gcd; the gcd of two zero polynomials is zero.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = x.rem(&y);
            x = std::mem::replace(&mut y, r);
        }
        x.monic()
    }

    /// Monic lcm of nonzero polynomials.
    pub fn lcm(a: &Poly, b: &Poly) -> Poly {
        let g = Poly::gcd(a, b);
        (a * &b.div_exact(&g)).monic()
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut acc = Poly::one(self.field);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, e: &BigUint, m: &Poly) -> Poly {
        let mut acc = Poly::one(self.field).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = (&acc * &acc).rem(m);
            if e.bit(i) {
                acc = (&acc * &base).rem(m);
            }
        }
        acc
    }

    /// The star operation `(-1)^deg p * p(-x)`; requires a monic input.
    pub fn star(&self) -> Result<Poly> {
        if !self.is_monic() {
            bail!(Contract, "star requires a monic polynomial, got {self}");
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if (self.deg() - i) % 2 == 1 { -c } else { c.clone() })
            .collect();
        Ok(Poly::new(self.field, coeffs))
    }

    /// Ordering key: degree first, then coefficients from low to high.
    pub fn sort_key(&self) -> (usize, Vec<Elem>) {
        (self.coeffs.len(), self.coeffs.clone())
    }

    /// Coefficients as decimal strings in ascending order.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    pub fn is_x(&self) -> bool {
        self.coeffs.len() == 2 && self.coeffs[0].is_zero() && self.coeffs[1].is_one()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let s = c.to_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, s),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = mag == "1";
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !unit {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl<'a> std::ops::Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(self.field, (0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect())
    }
}

impl<'a> std::ops::Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(self.field, (0..n).map(|i| &self.coeff(i) - &rhs.coeff(i)).collect())
    }
}

impl<'a> std::ops::Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.field, rhs.field, "field mismatch");
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Poly::new(self.field, out)
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|c| -c).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(c: &[i64]) -> Poly {
        Poly::from_ints(Field::Rational, c)
    }

    #[test]
    fn division_identity() {
        let a = q(&[1, -3, 0, 2, 5]);
        let b = q(&[2, 0, 3]);
        let (qq, r) = a.divrem(&b).unwrap();
        assert_eq!(&(&qq * &b) + &r, a);
        assert!(r.deg() < b.deg());
        assert!(a.divrem(&Poly::zero(Field::Rational)).is_err());
    }

    #[test]
    fn ext_gcd_bezout() {
        let a = &q(&[-1, 1]) * &q(&[2, 0, 1]);
        let b = &q(&[-1, 1]) * &q(&[3, 1]);
        let (g, u, v) = Poly::ext_gcd(&a, &b).unwrap();
        assert_eq!(g, q(&[-1, 1]));
        assert_eq!(&(&u * &a) + &(&v * &b), g);
        let z = Poly::zero(Field::Rational);
        assert!(Poly::ext_gcd(&z, &z).is_err());
        let (g, _, _) = Poly::ext_gcd(&z, &q(&[0, 2])).unwrap();
        assert_eq!(g, q(&[0, 1]));
    }

    #[test]
    fn star_operation() {
        // (x - 2)* = x + 2, (x^2 + x + 1)* = x^2 - x + 1
        assert_eq!(q(&[-2, 1]).star().unwrap(), q(&[2, 1]));
        assert_eq!(q(&[1, 1, 1]).star().unwrap(), q(&[1, -1, 1]));
        assert_eq!(q(&[0, 1]).star().unwrap(), q(&[0, 1]));
        assert!(q(&[1, 2]).star().is_err());
        let p = q(&[3, -1, 4, 1]);
        assert_eq!(p.star().unwrap().star().unwrap(), p);
    }

    #[test]
    fn pow_mod_matches_naive() {
        let f = Field::Prime(7);
        let m = Poly::from_ints(f, &[3, 1, 0, 1]);
        let a = Poly::from_ints(f, &[1, 2]);
        let naive = a.pow(13).rem(&m);
        assert_eq!(a.pow_mod(&BigUint::from(13u32), &m), naive);
    }

    #[test]
    fn display() {
        assert_eq!(q(&[2, -3, 1]).to_string(), "x^2 - 3*x + 2");
        assert_eq!(q(&[0, 1]).to_string(), "x");
        assert_eq!(q(&[-1]).to_string(), "-1");
    }
}
