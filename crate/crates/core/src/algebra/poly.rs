//! Dense univariate polynomials over a [`FiniteField`](super::field::FiniteField).

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use super::field::{prime_factors, Fe, Field};
use crate::error::{Error, Result};

/// Degree of a polynomial; the zero polynomial has degree `NegInfinity`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Coefficients low to high, with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    c: Vec<Fe>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, a.0) {
                (0, v) => write!(f, "{v}")?,
                (1, 1) => write!(f, "x")?,
                (1, v) => write!(f, "{v}*x")?,
                (_, 1) => write!(f, "x^{i}")?,
                (_, v) => write!(f, "{v}*x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Graded order: by degree, then coefficients from the top down.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c
            .len()
            .cmp(&other.c.len())
            .then_with(|| self.c.iter().rev().cmp(other.c.iter().rev()))
    }
}
impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Poly {
    pub fn new(mut c: Vec<Fe>) -> Self {
        while c.last().is_some_and(|a| a.is_zero()) {
            c.pop();
        }
        Poly { c }
    }
    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }
    pub fn one() -> Self {
        Poly { c: vec![Fe::ONE] }
    }
    pub fn constant(a: Fe) -> Self {
        Poly::new(vec![a])
    }
    pub fn x() -> Self {
        Poly {
            c: vec![Fe::ZERO, Fe::ONE],
        }
    }
    pub fn monomial(a: Fe, n: usize) -> Self {
        let mut c = vec![Fe::ZERO; n + 1];
        c[n] = a;
        Poly::new(c)
    }
    pub fn degree(&self) -> Degree {
        match self.c.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }
    /// Finite degree, `None` for zero.
    pub fn deg(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }
    /// Degree with zero mapped to -1, for arithmetic on bounds only.
    pub fn deg_i(&self) -> i64 {
        self.c.len() as i64 - 1
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0] == Fe::ONE
    }
    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }
    pub fn is_monic(&self) -> bool {
        self.lc() == Fe::ONE
    }
    /// Leading coefficient (zero for the zero polynomial).
    pub fn lc(&self) -> Fe {
        self.c.last().copied().unwrap_or(Fe::ZERO)
    }
    pub fn coeff(&self, i: usize) -> Fe {
        self.c.get(i).copied().unwrap_or(Fe::ZERO)
    }
    pub fn coeffs(&self) -> &[Fe] {
        &self.c
    }
    pub fn len(&self) -> usize {
        self.c.len()
    }
}

/// `h/g` with `g` monic and `gcd(h, g) = 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct RationalFunction {
    pub num: Poly,
    pub den: Poly,
}

#[derive(Default)]
struct RingCache {
    irreducibles: Mutex<HashMap<usize, Arc<Vec<Poly>>>>,
    prime_powers: Mutex<HashMap<usize, Arc<Vec<(Poly, u32)>>>>,
    pth_powers: Mutex<HashMap<Poly, Arc<Vec<bool>>>>,
}

/// `F_q[x]` for a fixed field; cheap to clone.
#[derive(Clone)]
pub struct PolyRing {
    field: Field,
    cache: Arc<RingCache>,
}

impl fmt::Debug for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyRing({:?})", self.field)
    }
}

impl PolyRing {
    pub fn new(field: Field) -> Self {
        PolyRing {
            field,
            cache: Arc::default(),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    /// Polynomial from small integer coefficients in the prime field (low to high).
    pub fn from_ints(&self, c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&v| self.field.from_int(v)).collect())
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let f = &self.field;
        let n = a.c.len().max(b.c.len());
        Poly::new((0..n).map(|i| f.add(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        let f = &self.field;
        let n = a.c.len().max(b.c.len());
        Poly::new((0..n).map(|i| f.sub(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        Poly::new(a.c.iter().map(|&x| self.field.neg(x)).collect())
    }

    pub fn scale(&self, s: Fe, a: &Poly) -> Poly {
        Poly::new(a.c.iter().map(|&x| self.field.mul(s, x)).collect())
    }

    /// `a · x^n`.
    pub fn shift(&self, a: &Poly, n: usize) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Fe::ZERO; n];
        c.extend_from_slice(&a.c);
        Poly { c }
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let f = &self.field;
        let mut c = vec![Fe::ZERO; a.c.len() + b.c.len() - 1];
        for (i, &x) in a.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.c.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(x, y));
            }
        }
        Poly::new(c)
    }

    pub fn pow(&self, a: &Poly, mut e: u64) -> Poly {
        let mut acc = Poly::one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Euclidean division; panics if `b` is zero.
    pub fn divrem(&self, a: &Poly, b: &Poly) -> (Poly, Poly) {
        assert!(!b.is_zero(), "division by the zero polynomial");
        let f = &self.field;
        if a.c.len() < b.c.len() {
            return (Poly::zero(), a.clone());
        }
        let db = b.c.len() - 1;
        let li = f.inv(b.lc());
        let mut r = a.c.clone();
        let mut qc = vec![Fe::ZERO; a.c.len() - db];
        for i in (0..qc.len()).rev() {
            let t = f.mul(r[i + db], li);
            qc[i] = t;
            if t.is_zero() {
                continue;
            }
            for (j, &bj) in b.c.iter().enumerate() {
                r[i + j] = f.sub(r[i + j], f.mul(t, bj));
            }
        }
        r.truncate(db);
        (Poly::new(qc), Poly::new(r))
    }

    pub fn rem(&self, a: &Poly, b: &Poly) -> Poly {
        if a.c.len() < b.c.len() {
            return a.clone();
        }
        self.divrem(a, b).1
    }

    /// `a / b` if the division is exact.
    pub fn div_exact(&self, a: &Poly, b: &Poly) -> Option<Poly> {
        let (q, r) = self.divrem(a, b);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, a: &Poly, b: &Poly) -> bool {
        !a.is_zero() && self.rem(b, a).is_zero()
    }

    pub fn monic(&self, a: &Poly) -> Poly {
        if a.is_zero() || a.is_monic() {
            return a.clone();
        }
        self.scale(self.field.inv(a.lc()), a)
    }

    /// Monic gcd; both inputs zero is an error.
    pub fn gcd(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        Ok(self.monic(&a))
    }

    /// `(g, s, t)` with `s·a + t·b = g` monic.
    pub fn ext_gcd(&self, a: &Poly, b: &Poly) -> Result<(Poly, Poly, Poly)> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = self.divrem(&r0, &r1);
            let s = self.sub(&s0, &self.mul(&q, &s1));
            let t = self.sub(&t0, &self.mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        let li = self.field.inv(r0.lc());
        Ok((self.scale(li, &r0), self.scale(li, &s0), self.scale(li, &t0)))
    }

    /// Inverse of `a` modulo `m`, if it exists.
    pub fn inv_mod(&self, a: &Poly, m: &Poly) -> Option<Poly> {
        if m.is_zero() {
            return None;
        }
        let (g, s, _) = self.ext_gcd(&self.rem(a, m), m).ok()?;
        (g.is_one()).then(|| self.rem(&s, m))
    }

    pub fn mulmod(&self, a: &Poly, b: &Poly, m: &Poly) -> Poly {
        self.rem(&self.mul(a, b), m)
    }

    pub fn powmod(&self, a: &Poly, mut e: u64, m: &Poly) -> Poly {
        let mut acc = self.rem(&Poly::one(), m);
        let mut base = self.rem(a, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mulmod(&acc, &base, m);
            }
            e >>= 1;
            if e > 0 {
                base = self.mulmod(&base, &base, m);
            }
        }
        acc
    }

    pub fn derivative(&self, a: &Poly) -> Poly {
        let f = &self.field;
        Poly::new(
            a.c.iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
                .collect(),
        )
    }

    pub fn eval(&self, a: &Poly, x: Fe) -> Fe {
        let f = &self.field;
        a.c.iter().rev().fold(Fe::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// `a(x)^{1/p}` for `a ∈ F_q[x^p]`; `None` if `a' ≠ 0`.
    pub fn pth_root(&self, a: &Poly) -> Option<Poly> {
        let p = self.p() as usize;
        if a.c.iter().enumerate().any(|(i, c)| i % p != 0 && !c.is_zero()) {
            return None;
        }
        Some(Poly::new(
            a.c.iter()
                .step_by(p)
                .map(|&c| self.field.pth_root(c))
                .collect(),
        ))
    }

    /// `x^n a(1/x)` with `n = deg a`.
    pub fn reverse(&self, a: &Poly) -> Poly {
        let mut c = a.c.clone();
        c.reverse();
        Poly::new(c)
    }

    /// `a(x^e)`.
    pub fn compose_power(&self, a: &Poly, e: usize) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Fe::ZERO; (a.c.len() - 1) * e + 1];
        for (i, &v) in a.c.iter().enumerate() {
            c[i * e] = v;
        }
        Poly::new(c)
    }

    pub fn is_squarefree(&self, g: &Poly) -> bool {
        if g.is_zero() {
            return false;
        }
        if g.is_constant() {
            return true;
        }
        self.gcd(g, &self.derivative(g)).is_ok_and(|d| d.is_one())
    }

    /// `x^{q^n} mod m` for `n = 0..=count`.
    fn frobenius_orbit_x(&self, m: &Poly, count: usize) -> Vec<Poly> {
        let q = self.q() as u64;
        let mut out = Vec::with_capacity(count + 1);
        let mut cur = self.rem(&Poly::x(), m);
        out.push(cur.clone());
        for _ in 0..count {
            cur = self.powmod(&cur, q, m);
            out.push(cur.clone());
        }
        out
    }

    /// Exact irreducibility test (Rabin): `x^{q^n} ≡ x` and
    /// `gcd(x^{q^{n/l}} − x, c) = 1` for primes `l | n`.
    pub fn is_irreducible(&self, c: &Poly) -> bool {
        let n = match c.deg() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let orbit = self.frobenius_orbit_x(c, n);
        let x = self.rem(&Poly::x(), c);
        if orbit[n] != x {
            return false;
        }
        prime_factors(n as u64).into_iter().all(|l| {
            let t = self.sub(&orbit[n / l as usize], &x);
            self.gcd(&t, c).is_ok_and(|g| g.is_one())
        })
    }

    /// Base-`q` index of a polynomial of degree `< n`.
    pub fn to_index(&self, a: &Poly) -> u64 {
        let q = self.q() as u64;
        a.c.iter().rev().fold(0u64, |acc, c| acc * q + c.0 as u64)
    }

    pub fn from_index(&self, mut n: u64) -> Poly {
        let q = self.q() as u64;
        let mut c = Vec::new();
        while n > 0 {
            c.push(Fe((n % q) as u32));
            n /= q;
        }
        Poly::new(c)
    }

    /// Residue index of `a mod m`.
    pub fn residue_index(&self, a: &Poly, m: &Poly) -> u64 {
        self.to_index(&self.rem(a, m))
    }

    /// `q^n` as `u64`, or `None` on overflow.
    pub fn q_pow(&self, n: usize) -> Option<u64> {
        (self.q() as u64).checked_pow(n as u32)
    }

    /// All polynomials of degree `< n`, in index order.
    pub fn polys_below(&self, n: usize) -> impl Iterator<Item = Poly> + '_ {
        let total = self.q_pow(n).expect("enumeration size overflows");
        (0..total).map(move |i| self.from_index(i))
    }

    /// All monic polynomials of degree `n`, in index order of the lower part.
    pub fn monics(&self, n: usize) -> impl Iterator<Item = Poly> + '_ {
        let total = self.q_pow(n).expect("enumeration size overflows");
        (0..total).map(move |i| {
            let mut c = self.from_index(i).c;
            c.resize(n, Fe::ZERO);
            c.push(Fe::ONE);
            Poly { c }
        })
    }

    /// Monic irreducibles of degree `e`, sorted; built from minimal
    /// polynomials of elements of `F_{q^e}` and memoized.
    pub fn irreducibles(&self, e: usize) -> Result<Arc<Vec<Poly>>> {
        if let Some(v) = self.cache.irreducibles.lock().unwrap().get(&e) {
            return Ok(v.clone());
        }
        let list = Arc::new(self.compute_irreducibles(e)?);
        self.cache
            .irreducibles
            .lock()
            .unwrap()
            .entry(e)
            .or_insert_with(|| list.clone());
        Ok(list)
    }

    fn compute_irreducibles(&self, e: usize) -> Result<Vec<Poly>> {
        if e == 0 {
            return Ok(Vec::new());
        }
        let f = &self.field;
        if e == 1 {
            let mut v: Vec<Poly> = f
                .elements()
                .map(|a| Poly::new(vec![f.neg(a), Fe::ONE]))
                .collect();
            v.sort();
            return Ok(v);
        }
        let ext = f.extension(e as u32)?;
        let big = &ext.big;
        let mut back = vec![u32::MAX; big.q() as usize];
        for a in f.elements() {
            back[ext.map(a).0 as usize] = a.0;
        }
        let q = f.q() as u64;
        let mut seen = vec![false; big.q() as usize];
        let mut out = Vec::new();
        for alpha in big.elements() {
            if seen[alpha.0 as usize] {
                continue;
            }
            let mut orbit = vec![alpha];
            let mut cur = big.pow(alpha, q);
            while cur != alpha {
                orbit.push(cur);
                cur = big.pow(cur, q);
            }
            for &b in &orbit {
                seen[b.0 as usize] = true;
            }
            if orbit.len() != e {
                continue;
            }
            // Π (x − β) over the orbit, in the big field.
            let mut c = vec![Fe::ONE];
            for &b in &orbit {
                let nb = big.neg(b);
                let mut next = vec![Fe::ZERO; c.len() + 1];
                for (i, &ci) in c.iter().enumerate() {
                    next[i + 1] = big.add(next[i + 1], ci);
                    next[i] = big.add(next[i], big.mul(ci, nb));
                }
                c = next;
            }
            let coeffs: Vec<Fe> = c
                .iter()
                .map(|x| {
                    let v = back[x.0 as usize];
                    assert!(v != u32::MAX, "minimal polynomial not over the base field");
                    Fe(v)
                })
                .collect();
            out.push(Poly::new(coeffs));
        }
        out.sort();
        Ok(out)
    }

    /// Memo slot for the `p`-th power residue bitmap modulo `m`.
    pub(crate) fn memo_pth_powers(&self, m: &Poly, build: impl FnOnce() -> Vec<bool>) -> Arc<Vec<bool>> {
        if let Some(v) = self.cache.pth_powers.lock().unwrap().get(m) {
            return v.clone();
        }
        let v = Arc::new(build());
        self.cache
            .pth_powers
            .lock()
            .unwrap()
            .entry(m.clone())
            .or_insert(v)
            .clone()
    }

    /// Monic prime powers `P^k` of degree `r` with `Λ = deg P`, sorted; memoized.
    pub fn prime_powers(&self, r: usize) -> Result<Arc<Vec<(Poly, u32)>>> {
        if let Some(v) = self.cache.prime_powers.lock().unwrap().get(&r) {
            return Ok(v.clone());
        }
        let mut out = Vec::new();
        for e in 1..=r {
            if r % e != 0 {
                continue;
            }
            for pr in self.irreducibles(e)?.iter() {
                out.push((self.pow(pr, (r / e) as u64), e as u32));
            }
        }
        out.sort();
        let out = Arc::new(out);
        self.cache
            .prime_powers
            .lock()
            .unwrap()
            .entry(r)
            .or_insert_with(|| out.clone());
        Ok(out)
    }
}
