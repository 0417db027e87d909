//! Exact scalar fields: the rationals and prime fields of odd characteristic.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{bail, Error, Result};

/// Largest admissible characteristic (exclusive).
pub const MAX_PRIME: u32 = 1 << 31;

/// A base field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u32),
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(a != 0);
    pow_mod_u64(a as u64, p as u64 - 2, p as u64) as u32
}

/// Square root of `a` modulo the odd prime `p`, if one exists (Tonelli-Shanks).
pub(crate) fn sqrt_mod(a: u32, p: u32) -> Option<u32> {
    let (a, p) = (a as u64 % p as u64, p as u64);
    if a == 0 {
        return Some(0);
    }
    if pow_mod_u64(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod_u64(a, (p + 1) / 4, p) as u32);
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2u64;
    while pow_mod_u64(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod_u64(z, q, p);
    let mut t = pow_mod_u64(a, q, p);
    let mut r = pow_mod_u64(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut tt = t;
        while tt != 1 {
            tt = tt * tt % p;
            i += 1;
        }
        let b = pow_mod_u64(c, 1u64 << (m - i - 1), p);
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    Some(r as u32)
}

impl Field {
    /// The prime field of characteristic `p`; `p` must be an odd prime below 2^31.
    pub fn prime(p: u32) -> Result<Field> {
        if p >= MAX_PRIME {
            bail!(Validation, "characteristic {p} exceeds the supported bound 2^31");
        }
        if p == 2 {
            bail!(Validation, "characteristic 2 is not supported");
        }
        if !is_prime_u64(p as u64) {
            bail!(Validation, "{p} is not prime");
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Field::Prime(_))
    }

    pub fn zero(&self) -> Elem {
        self.from_i64(0)
    }

    pub fn one(&self) -> Elem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Elem {
        match *self {
            Field::Rational => Elem::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Elem::Fp(n.rem_euclid(p as i64) as u32, p),
        }
    }

    /// `n / d`; panics when `d` is zero in this field.
    pub fn from_ratio(&self, n: i64, d: i64) -> Elem {
        &self.from_i64(n) / &self.from_i64(d)
    }

    pub fn from_bigint(&self, n: &BigInt) -> Elem {
        match *self {
            Field::Rational => Elem::Q(BigRational::from_integer(n.clone())),
            Field::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(p));
                Elem::Fp(r.to_u32().expect("residue fits"), p)
            }
        }
    }

    pub fn from_rational(&self, q: &BigRational) -> Result<Elem> {
        match *self {
            Field::Rational => Ok(Elem::Q(q.clone())),
            Field::Prime(p) => {
                let d = self.from_bigint(q.denom());
                if d.is_zero() {
                    bail!(Domain, "denominator of {q} vanishes modulo {p}");
                }
                Ok(&self.from_bigint(q.numer()) / &d)
            }
        }
    }

    /// Parses `"a"`, `"-a"` or `"a/b"`. Over a prime field the result is reduced.
    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let s = s.trim();
        let q = BigRational::from_str(s).map_err(|_| {
            Error::Validation(format!("cannot parse {s:?} as an element of {self}"))
        })?;
        self.from_rational(&q)
    }

    /// All elements in increasing residue order (prime fields only).
    pub fn elements(&self) -> Option<Vec<Elem>> {
        match *self {
            Field::Rational => None,
            Field::Prime(p) => Some((0..p).map(|v| Elem::Fp(v, p)).collect()),
        }
    }

    /// A uniform residue over F_p, or an integer in `[-height, height]` over Q.
    pub fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R, height: i64) -> Elem {
        match *self {
            Field::Rational => self.from_i64(rng.gen_range(-height..=height)),
            Field::Prime(p) => Elem::Fp(rng.gen_range(0..p), p),
        }
    }

    /// A nonzero random element.
    pub fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R, height: i64) -> Elem {
        loop {
            let x = self.random_elem(rng, height.max(1));
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// The smallest quadratic nonresidue (prime fields only).
    pub fn nonsquare(&self) -> Option<Elem> {
        match *self {
            Field::Rational => None,
            Field::Prime(p) => (2..p)
                .find(|&v| pow_mod_u64(v as u64, (p as u64 - 1) / 2, p as u64) != 1)
                .map(|v| Elem::Fp(v, p)),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    /// Accepts `Q`, `Fp:p`, `Fp<p>` and `F<p>`.
    fn from_str(s: &str) -> Result<Field> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(Field::Rational);
        }
        let digits = t
            .strip_prefix("Fp:")
            .or_else(|| t.strip_prefix("Fp"))
            .or_else(|| t.strip_prefix("F"))
            .ok_or_else(|| Error::Validation(format!("unknown field {s:?}")))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::Validation(format!("unknown field {s:?}")))?;
        if p >= MAX_PRIME as u64 {
            bail!(Validation, "characteristic {p} exceeds the supported bound 2^31");
        }
        Field::prime(p as u32)
    }
}

/// An element of a [`Field`].
///
/// Arithmetic between elements of different fields is a programming error
/// and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Elem {
    Q(BigRational),
    /// Residue and characteristic.
    Fp(u32, u32),
}

/// Square class of a nonzero scalar.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SquareClass {
    Square,
    NonSquare,
    /// Signed squarefree integer representing a class of Q*/(Q*)^2.
    Rational(BigInt),
}

impl SquareClass {
    /// Class of a product.
    pub fn mul(&self, other: &SquareClass) -> SquareClass {
        match (self, other) {
            (SquareClass::Rational(a), SquareClass::Rational(b)) => {
                let g = a.gcd(b);
                SquareClass::Rational(a * b / (&g * &g))
            }
            (SquareClass::Rational(_), _) | (_, SquareClass::Rational(_)) => panic!("mixed square classes"),
            (x, y) if x == y => SquareClass::Square,
            _ => SquareClass::NonSquare,
        }
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SquareClass::Square => write!(f, "square"),
            SquareClass::NonSquare => write!(f, "nonsquare"),
            SquareClass::Rational(n) => write!(f, "{n}"),
        }
    }
}

const TRIAL_LIMIT: u64 = 1 << 16;

/// Signed squarefree part of a nonzero integer.
fn squarefree_part(n: &BigInt) -> Result<BigInt> {
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut r = n.abs();
    let mut out = BigInt::one();
    let mut d = 2u64;
    while d < TRIAL_LIMIT {
        let bd = BigInt::from(d);
        if &bd * &bd > r {
            break;
        }
        let mut e = 0u32;
        loop {
            let (q, rem) = r.div_rem(&bd);
            if !rem.is_zero() {
                break;
            }
            r = q;
            e += 1;
        }
        if e % 2 == 1 {
            out *= &bd;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !r.is_one() {
        let s = r.sqrt();
        if &s * &s == r {
            // r is a perfect square; contributes nothing
        } else if r < BigInt::from(TRIAL_LIMIT).pow(3) {
            // every prime factor of r exceeds the trial bound, so r is either
            // prime, a product of two distinct primes or a square (handled above)
            out *= &r;
        } else {
            bail!(
                Capability,
                "square class of an integer with a cofactor of {} bits is not resolved by trial division up to {TRIAL_LIMIT}",
                r.bits()
            );
        }
    }
    Ok(out * sign)
}

impl Elem {
    pub fn field(&self) -> Field {
        match self {
            Elem::Q(_) => Field::Rational,
            Elem::Fp(_, p) => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Elem::Q(q) => q.is_zero(),
            Elem::Fp(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Elem::Q(q) => q.is_one(),
            Elem::Fp(v, _) => *v == 1,
        }
    }

    pub fn zero_like(&self) -> Elem {
        self.field().zero()
    }

    pub fn one_like(&self) -> Elem {
        self.field().one()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Elem::Q(q) => Some(q),
            Elem::Fp(..) => None,
        }
    }

    /// Residue in `[0, p)` over a prime field.
    pub fn residue(&self) -> Option<u32> {
        match self {
            Elem::Q(_) => None,
            Elem::Fp(v, _) => Some(*v),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Elem> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Elem::Q(q) => Elem::Q(q.recip()),
            Elem::Fp(v, p) => Elem::Fp(inv_mod(*v, *p), *p),
        })
    }

    pub fn checked_div(&self, rhs: &Elem) -> Option<Elem> {
        rhs.inv().map(|r| self * &r)
    }

    pub fn pow(&self, mut e: u64) -> Elem {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Integer power allowing negative exponents for nonzero elements.
    pub fn powi(&self, e: i64) -> Elem {
        if e >= 0 {
            self.pow(e as u64)
        } else {
            self.inv().expect("negative power of zero").pow(e.unsigned_abs())
        }
    }

    /// Sign over Q: `Less`, `Equal` or `Greater` than zero. `None` over F_p.
    pub fn sign(&self) -> Option<Ordering> {
        match self {
            Elem::Q(q) => Some(q.cmp(&BigRational::zero())),
            Elem::Fp(..) => None,
        }
    }

    /// Bit size of numerator plus denominator over Q; zero over F_p.
    pub fn height(&self) -> u64 {
        match self {
            Elem::Q(q) => q.numer().bits() + q.denom().bits(),
            Elem::Fp(..) => 0,
        }
    }

    pub fn is_square(&self) -> bool {
        self.sqrt().is_some()
    }

    /// A square root in the field, if one exists.
    pub fn sqrt(&self) -> Option<Elem> {
        match self {
            Elem::Q(q) => {
                if q.is_negative() {
                    return None;
                }
                let n = q.numer().sqrt();
                let d = q.denom().sqrt();
                if &n * &n == *q.numer() && &d * &d == *q.denom() {
                    Some(Elem::Q(BigRational::new(n, d)))
                } else {
                    None
                }
            }
            Elem::Fp(v, p) => sqrt_mod(*v, *p).map(|r| Elem::Fp(r, *p)),
        }
    }

    /// Class in K*/(K*)^2. Fails on zero, and over Q when trial division
    /// cannot settle the squarefree part.
    pub fn square_class(&self) -> Result<SquareClass> {
        if self.is_zero() {
            bail!(Domain, "zero has no square class");
        }
        match self {
            Elem::Q(q) => {
                let n = q.numer() * q.denom();
                Ok(SquareClass::Rational(squarefree_part(&n)?))
            }
            Elem::Fp(v, p) => {
                if pow_mod_u64(*v as u64, (*p as u64 - 1) / 2, *p as u64) == 1 {
                    Ok(SquareClass::Square)
                } else {
                    Ok(SquareClass::NonSquare)
                }
            }
        }
    }

    /// The canonical representative of the square class: a squarefree integer
    /// over Q, `1` or the smallest nonsquare over F_p.
    pub fn class_representative(&self) -> Result<Elem> {
        let f = self.field();
        Ok(match self.square_class()? {
            SquareClass::Square => f.one(),
            SquareClass::NonSquare => f.nonsquare().expect("prime field"),
            SquareClass::Rational(n) => f.from_bigint(&n),
        })
    }

    fn check_same(&self, other: &Elem) {
        match (self, other) {
            (Elem::Q(_), Elem::Q(_)) => {}
            (Elem::Fp(_, p), Elem::Fp(_, q)) if p == q => {}
            _ => panic!("field mismatch: {} vs {}", self.field(), other.field()),
        }
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Q(q) => write!(f, "{q}"),
            Elem::Fp(v, _) => write!(f, "{v}"),
        }
    }
}

impl PartialOrd for Elem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Numeric order over Q, residue order over F_p; rationals sort before residues.
impl Ord for Elem {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Elem::Q(a), Elem::Q(b)) => a.cmp(b),
            (Elem::Fp(a, p), Elem::Fp(b, q)) => (p, a).cmp(&(q, b)),
            (Elem::Q(_), Elem::Fp(..)) => Ordering::Less,
            (Elem::Fp(..), Elem::Q(_)) => Ordering::Greater,
        }
    }
}

impl<'a> Add<&'a Elem> for &'a Elem {
    type Output = Elem;
    fn add(self, rhs: &Elem) -> Elem {
        self.check_same(rhs);
        match (self, rhs) {
            (Elem::Q(a), Elem::Q(b)) => Elem::Q(a + b),
            (Elem::Fp(a, p), Elem::Fp(b, _)) => {
                let s = *a as u64 + *b as u64;
                Elem::Fp((s % *p as u64) as u32, *p)
            }
            _ => unreachable!(),
        }
    }
}

impl<'a> Sub<&'a Elem> for &'a Elem {
    type Output = Elem;
    fn sub(self, rhs: &Elem) -> Elem {
        self.check_same(rhs);
        match (self, rhs) {
            (Elem::Q(a), Elem::Q(b)) => Elem::Q(a - b),
            (Elem::Fp(a, p), Elem::Fp(b, _)) => {
                let s = *a as u64 + *p as u64 - *b as u64;
                Elem::Fp((s % *p as u64) as u32, *p)
            }
            _ => unreachable!(),
        }
    }
}

impl<'a> Mul<&'a Elem> for &'a Elem {
    type Output = Elem;
    fn mul(self, rhs: &Elem) -> Elem {
        self.check_same(rhs);
        match (self, rhs) {
            (Elem::Q(a), Elem::Q(b)) => Elem::Q(a * b),
            (Elem::Fp(a, p), Elem::Fp(b, _)) => {
                Elem::Fp((*a as u64 * *b as u64 % *p as u64) as u32, *p)
            }
            _ => unreachable!(),
        }
    }
}

/// Panics on division by zero.
impl<'a> Div<&'a Elem> for &'a Elem {
    type Output = Elem;
    fn div(self, rhs: &Elem) -> Elem {
        self * &rhs.inv().expect("division by zero")
    }
}

impl Neg for &Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        match self {
            Elem::Q(a) => Elem::Q(-a),
            Elem::Fp(a, p) => Elem::Fp(if *a == 0 { 0 } else { p - a }, *p),
        }
    }
}

impl Neg for Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Elem> for Elem {
            type Output = Elem;
            fn $m(self, rhs: Elem) -> Elem {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Elem> for Elem {
            type Output = Elem;
            fn $m(self, rhs: &Elem) -> Elem {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Elem> for &'a Elem {
            type Output = Elem;
            fn $m(self, rhs: Elem) -> Elem {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Elem> for Elem {
    fn add_assign(&mut self, rhs: &Elem) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Elem> for Elem {
    fn sub_assign(&mut self, rhs: &Elem) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Elem> for Elem {
    fn mul_assign(&mut self, rhs: &Elem) {
        *self = &*self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_fields() {
        assert_eq!("Q".parse::<Field>().unwrap(), Field::Rational);
        assert_eq!("Fp:5".parse::<Field>().unwrap(), Field::Prime(5));
        assert_eq!("F7".parse::<Field>().unwrap(), Field::Prime(7));
        assert!("Fp:4".parse::<Field>().is_err());
        assert!("Fp:2".parse::<Field>().is_err());
        assert!("Fp:2147483659".parse::<Field>().is_err());
        assert!(Field::prime(2147483647).is_ok());
    }

    #[test]
    fn prime_arithmetic() {
        let f = Field::Prime(7);
        let a = f.from_i64(3);
        let b = f.from_i64(5);
        assert_eq!(&a + &b, f.from_i64(1));
        assert_eq!(&a - &b, f.from_i64(5));
        assert_eq!(&a * &b, f.from_i64(1));
        assert_eq!(&a / &b, f.from_i64(2));
        assert_eq!(-&a, f.from_i64(4));
        assert_eq!(f.parse_elem("-1").unwrap(), f.from_i64(6));
        assert_eq!(f.parse_elem("1/2").unwrap(), f.from_i64(4));
        assert!(f.parse_elem("1/7").is_err());
    }

    #[test]
    fn sqrt_every_residue() {
        for p in [3u32, 5, 7, 13, 17, 41, 97, 65537] {
            let f = Field::Prime(p);
            let mut squares = vec![false; p as usize];
            for x in 0..p as u64 {
                squares[(x * x % p as u64) as usize] = true;
            }
            for v in 0..p {
                let e = Elem::Fp(v, p);
                match e.sqrt() {
                    Some(r) => {
                        assert!(squares[v as usize]);
                        assert_eq!(&r * &r, e);
                    }
                    None => assert!(!squares[v as usize]),
                }
                if v != 0 {
                    let expect = if squares[v as usize] {
                        SquareClass::Square
                    } else {
                        SquareClass::NonSquare
                    };
                    assert_eq!(e.square_class().unwrap(), expect);
                }
            }
            let ns = f.nonsquare().unwrap();
            assert!(!ns.is_square());
        }
    }

    #[test]
    fn rational_square_classes() {
        let f = Field::Rational;
        let cls = |s: &str| f.parse_elem(s).unwrap().square_class().unwrap();
        assert_eq!(cls("12"), SquareClass::Rational(BigInt::from(3)));
        assert_eq!(cls("-8/9"), SquareClass::Rational(BigInt::from(-2)));
        assert_eq!(cls("4/25"), SquareClass::Rational(BigInt::from(1)));
        assert_eq!(cls("1/6"), SquareClass::Rational(BigInt::from(6)));
        // product of two primes above the trial bound
        let big = BigInt::from(65537u64 * 65539u64);
        assert_eq!(
            f.from_bigint(&big).square_class().unwrap(),
            SquareClass::Rational(big.clone())
        );
        let sq = BigInt::from(65537u64 * 65537u64 * 3);
        assert_eq!(
            f.from_bigint(&sq).square_class().unwrap(),
            SquareClass::Rational(BigInt::from(3))
        );
        assert!(f.zero().square_class().is_err());
        assert_eq!(f.parse_elem("9/4").unwrap().sqrt().unwrap(), f.from_ratio(3, 2));
        assert!(f.parse_elem("2").unwrap().sqrt().is_none());
    }

    #[test]
    #[should_panic(expected = "field mismatch")]
    fn mixing_fields_panics() {
        let _ = Field::Rational.one() + Field::Prime(5).one();
    }
}
