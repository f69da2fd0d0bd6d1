//! Base fields: prime fields `F_p` and the rationals.

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// The field every default computation runs over.
pub const DEFAULT_PRIME: u64 = 101;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Prime(u64),
    Rationals,
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Prime(p) => write!(f, "F_{p}"),
            FieldKind::Rationals => write!(f, "Q"),
        }
    }
}

/// A field with exact arithmetic. Elements are always kept in canonical form,
/// so `==` on elements is equality in the field.
pub trait Field: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + fmt::Display + PartialEq + Eq + Hash + Send + Sync;

    fn kind(&self) -> FieldKind;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn parse_elem(&self, s: &str) -> Option<Self::Elem>;
    /// A small random element; uniform over the field for `F_p`.
    fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    /// Candidate roots for a polynomial given low-to-high; over `F_p` this is
    /// every element, over `Q` the rational-root-theorem candidates.
    fn root_candidates(&self, poly: &[Self::Elem]) -> Vec<Self::Elem>;

    fn characteristic(&self) -> u64 {
        match self.kind() {
            FieldKind::Prime(p) => p,
            FieldKind::Rationals => 0,
        }
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn next_prime_above(n: u64) -> u64 {
    let mut q = n + 1;
    while !is_prime(q) {
        q += 1;
    }
    q
}

/// The prime field `F_p`, with `p < 2^31` so products fit comfortably.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) || p >= (1 << 31) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn kind(&self) -> FieldKind {
        FieldKind::Prime(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // Fermat: a^(p-2)
        let mut base = *a;
        let mut e = self.p - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        Some(acc)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn parse_elem(&self, s: &str) -> Option<u64> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n = self.from_i64(n.trim().parse().ok()?);
            let d = self.from_i64(d.trim().parse().ok()?);
            return Some(self.mul(&n, &self.inv(&d)?));
        }
        Some(self.from_i64(s.parse().ok()?))
    }
    fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn root_candidates(&self, _poly: &[u64]) -> Vec<u64> {
        (0..self.p).collect()
    }
}

/// The rationals, with arbitrary-precision numerators and denominators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn kind(&self) -> FieldKind {
        FieldKind::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn parse_elem(&self, s: &str) -> Option<BigRational> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            return Some(BigRational::new(n, d));
        }
        Some(BigRational::from_integer(s.parse().ok()?))
    }
    fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        self.from_i64(rng.gen_range(-4..=4))
    }
    fn root_candidates(&self, poly: &[BigRational]) -> Vec<BigRational> {
        rational_root_candidates(poly)
    }
}

const DIVISOR_SEARCH_LIMIT: u64 = 1_000_000;

fn small_divisors(n: &BigInt) -> Option<Vec<u64>> {
    let n = n.abs().to_u64()?;
    if n > DIVISOR_SEARCH_LIMIT * DIVISOR_SEARCH_LIMIT {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    Some(out)
}

fn rational_root_candidates(poly: &[BigRational]) -> Vec<BigRational> {
    let mut coeffs: Vec<BigRational> = poly.to_vec();
    while coeffs.last().map_or(false, |c| c.is_zero()) {
        coeffs.pop();
    }
    if coeffs.len() <= 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    // strip factors of x
    let lead_zero = coeffs.iter().take_while(|c| c.is_zero()).count();
    if lead_zero > 0 {
        out.push(BigRational::zero());
        coeffs.drain(..lead_zero);
    }
    if coeffs.len() <= 1 {
        return out;
    }
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * &lcm).to_integer()).collect();
    let (Some(num_divs), Some(den_divs)) = (
        small_divisors(&ints[0]),
        small_divisors(ints.last().expect("nonempty")),
    ) else {
        return out;
    };
    for &a in &num_divs {
        for &b in &den_divs {
            let r = BigRational::new(BigInt::from(a), BigInt::from(b));
            out.push(r.clone());
            out.push(-r);
        }
    }
    out.sort();
    out.dedup();
    out
}
