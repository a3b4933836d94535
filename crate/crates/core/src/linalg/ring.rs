//! Computable Euclidean domains.
//!
//! A ring is a value (so that `GF(p)[x]` can carry its characteristic);
//! elements are plain data and every operation goes through the ring.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub trait EuclideanDomain: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + Eq + Hash + Debug + Display + Send + Sync + 'static;
    /// Value of the Euclidean function; smaller is "simpler".
    type Size: Ord + Clone + Debug;

    /// Tag used in serialized inputs, e.g. `Z` or `GF(5)[x]`.
    fn tag(&self) -> String;
    /// Symbol used when rendering module normal forms.
    fn symbol(&self) -> String;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Euclidean function; only meaningful on nonzero elements.
    fn size(&self, a: &Self::Elem) -> Self::Size;
    /// Division with remainder, `a = q*b + r` with `r = 0` or `size(r) < size(b)`.
    /// Panics when `b` is zero.
    fn div_rem(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem);
    /// Split `a` as `unit * assoc` with `assoc` the canonical associate
    /// (nonnegative integers, monic polynomials). Zero maps to `(1, 0)`.
    fn normalize(&self, a: &Self::Elem) -> (Self::Elem, Self::Elem);
    fn unit_inverse(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// Upper bound on the composition length of `R/(a)` for nonzero `a`.
    fn length_bound(&self, a: &Self::Elem) -> u64;
    /// All canonical divisors of a nonzero element, ascending by size.
    fn divisors(&self, a: &Self::Elem) -> Result<Vec<Self::Elem>>;
    /// Canonical prime divisors of a nonzero element.
    fn prime_divisors(&self, a: &Self::Elem) -> Result<Vec<Self::Elem>>;

    fn parse_elem(&self, s: &str) -> Result<Self::Elem>;

    fn is_field(&self) -> bool {
        false
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_unit(&self, a: &Self::Elem) -> bool {
        self.unit_inverse(a).is_some()
    }

    fn canonical(&self, a: &Self::Elem) -> Self::Elem {
        self.normalize(a).1
    }

    fn divides(&self, d: &Self::Elem, a: &Self::Elem) -> bool {
        if self.is_zero(d) {
            return self.is_zero(a);
        }
        self.is_zero(&self.div_rem(a, d).1)
    }

    /// Exact quotient `a / d`, if `d` divides `a`.
    fn div_exact(&self, a: &Self::Elem, d: &Self::Elem) -> Option<Self::Elem> {
        if self.is_zero(d) {
            return if self.is_zero(a) { Some(self.zero()) } else { None };
        }
        let (q, r) = self.div_rem(a, d);
        self.is_zero(&r).then_some(q)
    }

    /// Canonical remainder of `a` modulo `d` (`a` itself when `d = 0`).
    fn rem(&self, a: &Self::Elem, d: &Self::Elem) -> Self::Elem {
        if self.is_zero(d) {
            return a.clone();
        }
        self.div_rem(a, d).1
    }

    fn pow(&self, a: &Self::Elem, mut e: u32) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Extended gcd: `(g, s, t)` with `s*a + t*b = g`, `g` canonical.
    fn xgcd(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem, Self::Elem) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (self.one(), self.zero());
        let (mut t0, mut t1) = (self.zero(), self.one());
        while !self.is_zero(&r1) {
            let (q, r) = self.div_rem(&r0, &r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = self.sub(&s0, &self.mul(&q, &s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = self.sub(&t0, &self.mul(&q, &t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        let (unit, g) = self.normalize(&r0);
        let inv = self.unit_inverse(&unit).expect("normalize returns a unit");
        (g, self.mul(&s0, &inv), self.mul(&t0, &inv))
    }

    fn gcd(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.xgcd(a, b).0
    }

    fn lcm(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if self.is_zero(a) || self.is_zero(b) {
            return self.zero();
        }
        let g = self.gcd(a, b);
        let q = self.div_exact(a, &g).expect("gcd divides");
        self.canonical(&self.mul(&q, b))
    }
}

/// The integers with arbitrary-precision arithmetic.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Integers;

impl EuclideanDomain for Integers {
    type Elem = BigInt;
    type Size = BigUint;

    fn tag(&self) -> String {
        "Z".into()
    }

    fn symbol(&self) -> String {
        "Z".into()
    }

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }

    fn one(&self) -> BigInt {
        BigInt::one()
    }

    fn from_i64(&self, n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }

    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }

    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }

    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }

    fn size(&self, a: &BigInt) -> BigUint {
        a.magnitude().clone()
    }

    fn div_rem(&self, a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
        assert!(!b.is_zero(), "division by zero");
        // floor division keeps |r| < |b| and makes remainders mod positive d canonical
        a.div_mod_floor(b)
    }

    fn normalize(&self, a: &BigInt) -> (BigInt, BigInt) {
        match a.sign() {
            Sign::Minus => (BigInt::from(-1), -a),
            _ => (BigInt::one(), a.clone()),
        }
    }

    fn unit_inverse(&self, a: &BigInt) -> Option<BigInt> {
        (a.magnitude().is_one()).then(|| a.clone())
    }

    fn length_bound(&self, a: &BigInt) -> u64 {
        a.magnitude().bits()
    }

    fn divisors(&self, a: &BigInt) -> Result<Vec<BigInt>> {
        let n = a.magnitude().to_u64().ok_or_else(|| {
            Error::ResourceCap(format!("divisor enumeration of {a} exceeds 64 bits"))
        })?;
        if n == 0 {
            return Err(Error::InvalidInput("divisors of zero".into()));
        }
        let mut small = Vec::new();
        let mut large = Vec::new();
        let mut d = 1u64;
        while d.saturating_mul(d) <= n {
            if n % d == 0 {
                small.push(d);
                if d != n / d {
                    large.push(n / d);
                }
            }
            d += 1;
        }
        small.extend(large.into_iter().rev());
        Ok(small.into_iter().map(BigInt::from).collect())
    }

    fn prime_divisors(&self, a: &BigInt) -> Result<Vec<BigInt>> {
        let mut n = a.magnitude().to_u64().ok_or_else(|| {
            Error::ResourceCap(format!("factorization of {a} exceeds 64 bits"))
        })?;
        if n == 0 {
            return Err(Error::InvalidInput("prime divisors of zero".into()));
        }
        let mut primes = Vec::new();
        let mut p = 2u64;
        while p.saturating_mul(p) <= n {
            if n % p == 0 {
                primes.push(BigInt::from(p));
                while n % p == 0 {
                    n /= p;
                }
            }
            p += 1;
        }
        if n > 1 {
            primes.push(BigInt::from(n));
        }
        Ok(primes)
    }

    fn parse_elem(&self, s: &str) -> Result<BigInt> {
        let t = s.trim();
        let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("not a decimal integer: {s:?}")));
        }
        t.parse::<BigInt>()
            .map_err(|e| Error::Parse(format!("not a decimal integer: {s:?} ({e})")))
    }
}

/// Univariate polynomials over the prime field `GF(p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GfPoly {
    p: u64,
}

/// Polynomial with coefficients in `[0, p)`, lowest degree first, no
/// trailing zeros (the zero polynomial is empty).
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Poly(Vec<u64>);

impl Poly {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn trimmed(mut c: Vec<u64>) -> Poly {
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly(c)
    }
}

impl Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (k, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}*x")?,
                (k, 1) => write!(f, "x^{k}")?,
                (k, c) => write!(f, "{c}*x^{k}")?,
            }
        }
        Ok(())
    }
}

/// Largest characteristic accepted; keeps products inside `u128`.
pub const MAX_CHARACTERISTIC: u64 = 1 << 31;
/// Cap on `p^deg` for divisor enumeration over `GF(p)[x]`.
const POLY_DIVISOR_SEARCH_CAP: u128 = 200_000;

impl GfPoly {
    pub fn new(p: u64) -> Result<GfPoly> {
        if p < 2 || p > MAX_CHARACTERISTIC || !is_prime_u64(p) {
            return Err(Error::InvalidInput(format!(
                "GF(p)[x] needs a prime p <= {MAX_CHARACTERISTIC}, got {p}"
            )));
        }
        Ok(GfPoly { p })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn poly(&self, coeffs: &[i64]) -> Poly {
        let p = self.p as i64;
        Poly::trimmed(coeffs.iter().map(|c| c.rem_euclid(p) as u64).collect())
    }

    fn mulmod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn inv_mod(&self, a: u64) -> u64 {
        // Fermat, p prime
        let mut base = a % self.p;
        let mut e = self.p - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mulmod(acc, base);
            }
            base = self.mulmod(base, base);
            e >>= 1;
        }
        acc
    }

    fn monic_of_degree(&self, deg: usize, index: u128) -> Poly {
        let mut c = Vec::with_capacity(deg + 1);
        let mut idx = index;
        for _ in 0..deg {
            c.push((idx % self.p as u128) as u64);
            idx /= self.p as u128;
        }
        c.push(1);
        Poly(c)
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl EuclideanDomain for GfPoly {
    type Elem = Poly;
    type Size = usize;

    fn tag(&self) -> String {
        format!("GF({})[x]", self.p)
    }

    fn symbol(&self) -> String {
        format!("F{}[x]", self.p)
    }

    fn zero(&self) -> Poly {
        Poly(Vec::new())
    }

    fn one(&self) -> Poly {
        Poly(vec![1])
    }

    fn from_i64(&self, n: i64) -> Poly {
        self.poly(&[n])
    }

    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.0.len().max(b.0.len());
        let c = (0..n)
            .map(|i| {
                let x = a.0.get(i).copied().unwrap_or(0);
                let y = b.0.get(i).copied().unwrap_or(0);
                (x + y) % self.p
            })
            .collect();
        Poly::trimmed(c)
    }

    fn neg(&self, a: &Poly) -> Poly {
        Poly::trimmed(a.0.iter().map(|&c| (self.p - c) % self.p).collect())
    }

    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.0.is_empty() || b.0.is_empty() {
            return self.zero();
        }
        let mut c = vec![0u64; a.0.len() + b.0.len() - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                c[i + j] = (c[i + j] + self.mulmod(x, y)) % self.p;
            }
        }
        Poly::trimmed(c)
    }

    fn is_zero(&self, a: &Poly) -> bool {
        a.0.is_empty()
    }

    fn size(&self, a: &Poly) -> usize {
        a.degree().unwrap_or(0)
    }

    fn div_rem(&self, a: &Poly, b: &Poly) -> (Poly, Poly) {
        let db = b.degree().expect("division by zero polynomial");
        let lead_inv = self.inv_mod(b.0[db]);
        let mut r = a.0.clone();
        let mut q = vec![0u64; a.0.len().saturating_sub(db).max(1)];
        while r.len() > db {
            let top = r.len() - 1;
            let c = self.mulmod(r[top], lead_inv);
            let shift = top - db;
            q[shift] = c;
            for (k, &bk) in b.0.iter().enumerate() {
                let sub = self.mulmod(c, bk);
                r[shift + k] = (r[shift + k] + self.p - sub) % self.p;
            }
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        (Poly::trimmed(q), Poly::trimmed(r))
    }

    fn normalize(&self, a: &Poly) -> (Poly, Poly) {
        match a.0.last() {
            None => (self.one(), self.zero()),
            Some(&lead) => {
                let inv = self.inv_mod(lead);
                let monic = Poly::trimmed(a.0.iter().map(|&c| self.mulmod(c, inv)).collect());
                (Poly(vec![lead]), monic)
            }
        }
    }

    fn unit_inverse(&self, a: &Poly) -> Option<Poly> {
        (a.0.len() == 1).then(|| Poly(vec![self.inv_mod(a.0[0])]))
    }

    fn length_bound(&self, a: &Poly) -> u64 {
        a.degree().unwrap_or(0) as u64
    }

    fn divisors(&self, a: &Poly) -> Result<Vec<Poly>> {
        let deg = a
            .degree()
            .ok_or_else(|| Error::InvalidInput("divisors of zero".into()))?;
        let search = (self.p as u128).checked_pow(deg as u32).unwrap_or(u128::MAX);
        if search > POLY_DIVISOR_SEARCH_CAP {
            return Err(Error::ResourceCap(format!(
                "divisor enumeration over GF({})[x] at degree {deg}",
                self.p
            )));
        }
        let mut out = Vec::new();
        for d in 0..=deg {
            let count = (self.p as u128).pow(d as u32);
            for idx in 0..count {
                let cand = self.monic_of_degree(d, idx);
                if self.divides(&cand, a) {
                    out.push(cand);
                }
            }
        }
        Ok(out)
    }

    fn prime_divisors(&self, a: &Poly) -> Result<Vec<Poly>> {
        let divs = self.divisors(a)?;
        let mut primes: Vec<Poly> = Vec::new();
        for d in divs.iter().filter(|d| d.degree().unwrap_or(0) > 0) {
            // irreducible iff no smaller nonconstant divisor among those already found
            if !primes.iter().any(|p| self.divides(p, d)) {
                primes.push(d.clone());
            }
        }
        Ok(primes)
    }

    fn parse_elem(&self, s: &str) -> Result<Poly> {
        parse_poly(self, s)
    }
}

/// Parses `3*x^2 + x + 4`-style expressions. Coefficients are reduced mod p;
/// `-` is accepted between terms and as a leading sign.
fn parse_poly(ring: &GfPoly, s: &str) -> Result<Poly> {
    let err = |msg: &str| Error::Parse(format!("bad polynomial {s:?}: {msg}"));
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(err("empty"));
    }
    let mut acc = ring.zero();
    let bytes = compact.as_bytes();
    let mut i = 0;
    let mut first = true;
    while i < bytes.len() {
        let mut negative = false;
        if bytes[i] == b'+' || bytes[i] == b'-' {
            negative = bytes[i] == b'-';
            i += 1;
        } else if !first {
            return Err(err("expected + or -"));
        }
        first = false;
        let start = i;
        while i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
            i += 1;
        }
        let term = &compact[start..i];
        if term.is_empty() {
            return Err(err("empty term"));
        }
        let (coeff_str, power) = match term.find('x') {
            None => (term, 0u32),
            Some(pos) => {
                let head = &term[..pos];
                let head = if head.is_empty() {
                    "1"
                } else {
                    head.strip_suffix('*').ok_or_else(|| err("expected * before x"))?
                };
                let tail = &term[pos + 1..];
                let power = if tail.is_empty() {
                    1
                } else {
                    let digits = tail.strip_prefix('^').ok_or_else(|| err("expected ^"))?;
                    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                        return Err(err("bad exponent"));
                    }
                    digits.parse::<u32>().map_err(|_| err("bad exponent"))?
                };
                (head, power)
            }
        };
        if power > 4096 {
            return Err(err("exponent too large"));
        }
        if coeff_str.is_empty() || !coeff_str.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err("bad coefficient"));
        }
        let c = coeff_str
            .parse::<BigUint>()
            .map_err(|_| err("bad coefficient"))?;
        let c = (c % BigUint::from(ring.p)).to_u64().unwrap_or(0);
        let mut coeffs = vec![0u64; power as usize + 1];
        coeffs[power as usize] = c;
        let mut term_poly = Poly::trimmed(coeffs);
        if negative {
            term_poly = ring.neg(&term_poly);
        }
        acc = ring.add(&acc, &term_poly);
    }
    Ok(acc)
}

/// Runtime ring selection from a tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingTag {
    Integers,
    GfPoly(u64),
}

impl RingTag {
    pub fn parse(tag: &str) -> Result<RingTag> {
        let t = tag.trim();
        if t == "Z" {
            return Ok(RingTag::Integers);
        }
        let inner = t
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(")[x]"))
            .ok_or_else(|| Error::Parse(format!("unknown ring tag {tag:?} (expected Z or GF(p)[x])")))?;
        if inner.is_empty() || !inner.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad characteristic in {tag:?}")));
        }
        let p = inner
            .parse::<u64>()
            .map_err(|_| Error::Parse(format!("bad characteristic in {tag:?}")))?;
        GfPoly::new(p)?;
        Ok(RingTag::GfPoly(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_division_is_euclidean() {
        let z = Integers;
        for a in -20i64..=20 {
            for b in (-7i64..=7).filter(|b| *b != 0) {
                let (q, r) = z.div_rem(&z.from_i64(a), &z.from_i64(b));
                assert_eq!(&q * b + &r, BigInt::from(a));
                assert!(r.magnitude() < &BigUint::from(b.unsigned_abs()));
            }
        }
    }

    #[test]
    fn integer_units_and_normalization() {
        let z = Integers;
        assert!(z.is_unit(&z.from_i64(-1)));
        assert!(!z.is_unit(&z.from_i64(2)));
        assert!(!z.is_unit(&z.zero()));
        assert_eq!(z.canonical(&z.from_i64(-6)), z.from_i64(6));
        assert_eq!(z.gcd(&z.from_i64(-4), &z.from_i64(6)), z.from_i64(2));
        assert_eq!(z.lcm(&z.from_i64(4), &z.from_i64(6)), z.from_i64(12));
    }

    #[test]
    fn integer_factoring() {
        let z = Integers;
        let ds: Vec<i64> = z
            .divisors(&z.from_i64(12))
            .unwrap()
            .iter()
            .map(|d| d.to_i64().unwrap())
            .collect();
        assert_eq!(ds, vec![1, 2, 3, 4, 6, 12]);
        let ps: Vec<i64> = z
            .prime_divisors(&z.from_i64(-360))
            .unwrap()
            .iter()
            .map(|d| d.to_i64().unwrap())
            .collect();
        assert_eq!(ps, vec![2, 3, 5]);
    }

    #[test]
    fn integer_parsing_is_strict() {
        let z = Integers;
        assert_eq!(z.parse_elem("-17").unwrap(), z.from_i64(-17));
        assert!(z.parse_elem("1.5").is_err());
        assert!(z.parse_elem("").is_err());
        assert!(z.parse_elem("--1").is_err());
        assert!(z.parse_elem("0x10").is_err());
    }

    #[test]
    fn poly_arithmetic_mod_5() {
        let f = GfPoly::new(5).unwrap();
        let a = f.poly(&[1, 0, 1]); // x^2 + 1
        let b = f.poly(&[2, 1]); // x + 2
        let (q, r) = f.div_rem(&a, &b);
        assert_eq!(f.add(&f.mul(&q, &b), &r), a);
        assert!(f.size(&r) < f.size(&b) || f.is_zero(&r));
        // x^2 + 1 = (x+2)(x+3) over GF(5)
        assert!(f.is_zero(&r));
        assert_eq!(f.canonical(&f.poly(&[4, 2])), f.poly(&[2, 1]));
    }

    #[test]
    fn poly_parse_and_display_round_trip() {
        let f = GfPoly::new(7).unwrap();
        let p = f.parse_elem("3*x^2 + x + 4").unwrap();
        assert_eq!(p, f.poly(&[4, 1, 3]));
        assert_eq!(p.to_string(), "3*x^2 + x + 4");
        assert_eq!(f.parse_elem(&p.to_string()).unwrap(), p);
        assert_eq!(f.parse_elem("-x").unwrap(), f.poly(&[0, 6]));
        assert_eq!(f.parse_elem("0").unwrap(), f.zero());
        assert!(f.parse_elem("x^").is_err());
        assert!(f.parse_elem("2x").is_err());
        assert!(f.parse_elem("+").is_err());
    }

    #[test]
    fn poly_prime_divisors() {
        let f = GfPoly::new(2).unwrap();
        // x^3 + x = x (x+1)^2 over GF(2)
        let a = f.poly(&[0, 1, 0, 1]);
        let ps = f.prime_divisors(&a).unwrap();
        assert_eq!(ps, vec![f.poly(&[0, 1]), f.poly(&[1, 1])]);
    }

    #[test]
    fn ring_tags() {
        assert_eq!(RingTag::parse("Z").unwrap(), RingTag::Integers);
        assert_eq!(RingTag::parse("GF(3)[x]").unwrap(), RingTag::GfPoly(3));
        assert!(RingTag::parse("GF(4)[x]").is_err());
        assert!(RingTag::parse("Q").is_err());
    }
}
