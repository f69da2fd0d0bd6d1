//! Univariate polynomials over a [`Field`], stored low degree first.
//!
//! Only what idempotent splitting needs: gcds, CRT data and factoring into
//! coprime prime-power parts.

use rand::Rng;

use super::field::{Field, FieldKind};
use super::mat::Mat;

pub type Poly<F> = Vec<<F as Field>::Elem>;

pub fn trim<F: Field>(f: &F, mut a: Poly<F>) -> Poly<F> {
    while a.last().map_or(false, |c| f.is_zero(c)) {
        a.pop();
    }
    a
}

/// Degree, with `None` for the zero polynomial.
pub fn degree<F: Field>(f: &F, a: &[F::Elem]) -> Option<usize> {
    a.iter().rposition(|c| !f.is_zero(c))
}

pub fn add<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
    let n = a.len().max(b.len());
    let z = f.zero();
    let out = (0..n)
        .map(|i| f.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trim(f, out)
}

pub fn sub<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
    let n = a.len().max(b.len());
    let z = f.zero();
    let out = (0..n)
        .map(|i| f.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trim(f, out)
}

pub fn mul<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(f, out)
}

pub fn monic<F: Field>(f: &F, a: &[F::Elem]) -> Poly<F> {
    let a = trim(f, a.to_vec());
    match a.last() {
        None => a,
        Some(lead) => {
            let inv = f.inv(lead).expect("nonzero leading coefficient");
            a.iter().map(|c| f.mul(c, &inv)).collect()
        }
    }
}

/// Quotient and remainder; panics on division by zero.
pub fn divrem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> (Poly<F>, Poly<F>) {
    let b = trim(f, b.to_vec());
    let db = degree(f, &b).expect("division by the zero polynomial");
    let mut r = trim(f, a.to_vec());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let inv_lead = f.inv(&b[db]).expect("nonzero");
    let mut q = vec![f.zero(); r.len() - db];
    while let Some(dr) = degree(f, &r) {
        if dr < db {
            break;
        }
        let c = f.mul(&r[dr], &inv_lead);
        let shift = dr - db;
        for (i, bi) in b.iter().enumerate() {
            r[i + shift] = f.sub(&r[i + shift], &f.mul(&c, bi));
        }
        q[shift] = c;
        r = trim(f, r);
    }
    (trim(f, q), r)
}

pub fn rem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
    divrem(f, a, b).1
}

/// Monic gcd.
pub fn gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
    let mut a = trim(f, a.to_vec());
    let mut b = trim(f, b.to_vec());
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    monic(f, &a)
}

/// `(g, u, v)` with `u*a + v*b = g` and `g` the monic gcd.
pub fn ext_gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> (Poly<F>, Poly<F>, Poly<F>) {
    let (mut r0, mut r1) = (trim(f, a.to_vec()), trim(f, b.to_vec()));
    let (mut s0, mut s1) = (vec![f.one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![f.one()]);
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let s2 = sub(f, &s0, &mul(f, &q, &s1));
        let t2 = sub(f, &t0, &mul(f, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    match r0.last() {
        None => (r0, s0, t0),
        Some(lead) => {
            let inv = f.inv(lead).expect("nonzero");
            let sc = |p: &[F::Elem]| trim(f, p.iter().map(|c| f.mul(c, &inv)).collect());
            (sc(&r0), sc(&s0), sc(&t0))
        }
    }
}

pub fn derivative<F: Field>(f: &F, a: &[F::Elem]) -> Poly<F> {
    let out = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| f.mul(c, &f.from_i64(i as i64)))
        .collect();
    trim(f, out)
}

pub fn eval<F: Field>(f: &F, a: &[F::Elem], x: &F::Elem) -> F::Elem {
    a.iter()
        .rev()
        .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
}

/// `a(m)` for a square matrix `m`, with `m^0 = unit`.
pub fn eval_mat<F: Field>(f: &F, a: &[F::Elem], m: &Mat<F>, unit: &Mat<F>) -> Mat<F> {
    let mut acc = Mat::zeros(f, m.rows(), m.cols());
    for c in a.iter().rev() {
        acc = acc.mul(m);
        acc.add_scaled(c, unit);
    }
    acc
}

/// `x^e mod m`.
pub fn pow_mod<F: Field>(f: &F, base: &[F::Elem], mut e: u64, m: &[F::Elem]) -> Poly<F> {
    let mut acc = rem(f, &[f.one()], m);
    let mut b = rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(f, &mul(f, &acc, &b), m);
        }
        e >>= 1;
        if e > 0 {
            b = rem(f, &mul(f, &b, &b), m);
        }
    }
    acc
}

/// Factorization of a monic polynomial into pairwise coprime prime powers.
#[derive(Debug, Clone)]
pub struct CoprimeParts<F: Field> {
    /// `(irreducible factor, multiplicity)`; over `Q` the last factor may be
    /// a product that could not be split further.
    pub parts: Vec<(Poly<F>, usize)>,
    /// Whether every listed factor is known to be irreducible.
    pub complete: bool,
}

impl<F: Field> CoprimeParts<F> {
    pub fn prime_powers(&self, f: &F) -> Vec<Poly<F>> {
        self.parts
            .iter()
            .map(|(g, e)| (0..*e).fold(vec![f.one()], |acc, _| mul(f, &acc, g)))
            .collect()
    }
}

/// Splits a monic polynomial of degree below the characteristic (or over
/// `Q`) into coprime prime-power parts.
pub fn coprime_parts<F: Field, R: Rng + ?Sized>(
    f: &F,
    a: &[F::Elem],
    rng: &mut R,
) -> CoprimeParts<F> {
    let a = monic(f, a);
    if degree(f, &a).unwrap_or(0) == 0 {
        return CoprimeParts {
            parts: Vec::new(),
            complete: true,
        };
    }
    let g = gcd(f, &a, &derivative(f, &a));
    let squarefree = monic(f, &divrem(f, &a, &g).0);
    let (irreducibles, complete) = match f.kind() {
        FieldKind::Prime(p) => (berlekamp(f, &squarefree, p, rng), true),
        FieldKind::Rationals => split_rational(f, &squarefree),
    };
    let parts = irreducibles
        .into_iter()
        .map(|q| {
            let mut rest = a.clone();
            let mut e = 0;
            loop {
                let (d, r) = divrem(f, &rest, &q);
                if !r.is_empty() {
                    break;
                }
                rest = d;
                e += 1;
            }
            (q, e.max(1))
        })
        .collect();
    CoprimeParts { parts, complete }
}

fn split_rational<F: Field>(f: &F, squarefree: &[F::Elem]) -> (Vec<Poly<F>>, bool) {
    let mut rest = squarefree.to_vec();
    let mut out = Vec::new();
    for r in f.root_candidates(squarefree) {
        if degree(f, &rest).unwrap_or(0) == 0 {
            break;
        }
        if f.is_zero(&eval(f, &rest, &r)) {
            let lin = vec![f.neg(&r), f.one()];
            rest = divrem(f, &rest, &lin).0;
            out.push(lin);
        }
    }
    let complete = match degree(f, &rest) {
        Some(0) | None => true,
        // no rational roots left, so degree 2 or 3 is irreducible
        Some(d) => {
            out.push(monic(f, &rest));
            d <= 3
        }
    };
    (out, complete)
}

/// Monic irreducible factors of a monic squarefree polynomial over `F_p`.
fn berlekamp<F: Field, R: Rng + ?Sized>(f: &F, a: &[F::Elem], p: u64, rng: &mut R) -> Vec<Poly<F>> {
    let n = degree(f, a).unwrap_or(0);
    if n <= 1 {
        return if n == 1 { vec![a.to_vec()] } else { Vec::new() };
    }
    // rows of Q - I: x^{ip} mod a, minus x^i
    let xp = pow_mod(f, &[f.zero(), f.one()], p, a);
    let mut q = Mat::zeros(f, n, n);
    let mut row = vec![f.one()];
    for i in 0..n {
        for (j, c) in row.iter().enumerate() {
            q[(i, j)] = c.clone();
        }
        q[(i, i)] = f.sub(&q[(i, i)], &f.one());
        row = rem(f, &mul(f, &row, &xp), a);
    }
    let kernel = q.transpose().kernel_basis();
    let r = kernel.cols();
    if r == 1 {
        return vec![a.to_vec()];
    }
    let basis: Vec<Poly<F>> = kernel.columns().into_iter().map(|c| trim(f, c)).collect();
    let mut factors = vec![a.to_vec()];
    let small = p <= 1000;
    while factors.len() < r {
        let mut progressed = false;
        let splitters: Vec<Poly<F>> = if small {
            basis.clone()
        } else {
            let mut v = Vec::new();
            for b in &basis {
                v = add(f, &v, &mul(f, &[f.random_elem(rng)], b));
            }
            vec![v]
        };
        for v in splitters {
            let mut next = Vec::new();
            for g in factors.drain(..) {
                if degree(f, &g).unwrap_or(0) <= 1 {
                    next.push(g);
                    continue;
                }
                let pieces = if small {
                    split_by_shifts(f, &g, &v, p)
                } else {
                    split_random(f, &g, &v, p)
                };
                if pieces.len() > 1 {
                    progressed = true;
                }
                next.extend(pieces);
            }
            factors = next;
            if factors.len() >= r {
                break;
            }
        }
        if small && !progressed && factors.len() < r {
            unreachable!("Berlekamp basis failed to separate factors");
        }
    }
    factors.into_iter().map(|g| monic(f, &g)).collect()
}

fn split_by_shifts<F: Field>(f: &F, g: &[F::Elem], v: &[F::Elem], p: u64) -> Vec<Poly<F>> {
    let mut out = Vec::new();
    let mut rest = g.to_vec();
    for s in 0..p {
        if degree(f, &rest).unwrap_or(0) == 0 {
            break;
        }
        let shifted = sub(f, v, &[f.from_i64(s as i64)]);
        let h = gcd(f, &rest, &shifted);
        if degree(f, &h).unwrap_or(0) > 0 {
            rest = divrem(f, &rest, &h).0;
            out.push(h);
        }
    }
    if degree(f, &rest).unwrap_or(0) > 0 {
        out.push(rest);
    }
    out
}

fn split_random<F: Field>(f: &F, g: &[F::Elem], v: &[F::Elem], p: u64) -> Vec<Poly<F>> {
    let w = pow_mod(f, v, (p - 1) / 2, g);
    let h = gcd(f, g, &sub(f, &w, &[f.one()]));
    let dh = degree(f, &h).unwrap_or(0);
    if dh == 0 || dh == degree(f, g).unwrap_or(0) {
        vec![g.to_vec()]
    } else {
        let other = divrem(f, g, &h).0;
        vec![h, monic(f, &other)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::field::{PrimeField, Rationals};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(f: &PrimeField, c: &[i64]) -> Vec<u64> {
        trim(f, c.iter().map(|&x| f.from_i64(x)).collect())
    }

    #[test]
    fn divrem_and_gcd() {
        let f = PrimeField::new(7).unwrap();
        // (x-1)(x-2) and (x-1)(x-3)
        let a = mul(&f, &p(&f, &[-1, 1]), &p(&f, &[-2, 1]));
        let b = mul(&f, &p(&f, &[-1, 1]), &p(&f, &[-3, 1]));
        assert_eq!(gcd(&f, &a, &b), p(&f, &[-1, 1]));
        let (q, r) = divrem(&f, &a, &p(&f, &[-1, 1]));
        assert_eq!(q, p(&f, &[-2, 1]));
        assert!(r.is_empty());
        let (g, u, v) = ext_gcd(&f, &a, &b);
        assert_eq!(add(&f, &mul(&f, &u, &a), &mul(&f, &v, &b)), g);
    }

    #[test]
    fn factors_over_f101() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // (x^2 - 2)^2 (x - 3); 2 is a non-residue mod 101
        let q = p(&f, &[-2, 0, 1]);
        let a = mul(&f, &mul(&f, &q, &q), &p(&f, &[-3, 1]));
        let parts = coprime_parts(&f, &a, &mut rng);
        assert!(parts.complete);
        let mut got: Vec<(Vec<u64>, usize)> = parts.parts.clone();
        got.sort();
        let mut want = vec![(q, 2), (p(&f, &[-3, 1]), 1)];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn splits_into_linears() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = (1..=5).fold(vec![1u64], |acc, r| mul(&f, &acc, &p(&f, &[-r, 1])));
        let parts = coprime_parts(&f, &a, &mut rng);
        assert_eq!(parts.parts.len(), 5);
        assert!(parts.parts.iter().all(|(g, e)| g.len() == 2 && *e == 1));
    }

    #[test]
    fn rational_parts() {
        let q = Rationals;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = |v: &[i64]| trim(&q, v.iter().map(|&x| q.from_i64(x)).collect());
        // x^2 (x^2 + 1)
        let a = mul(&q, &c(&[0, 0, 1]), &c(&[1, 0, 1]));
        let parts = coprime_parts(&q, &a, &mut rng);
        assert!(parts.complete);
        assert_eq!(parts.parts.len(), 2);
    }
}
