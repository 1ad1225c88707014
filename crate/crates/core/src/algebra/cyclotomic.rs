//! Exact arithmetic in `Z[ζ_p]`, basis `1, ζ, …, ζ^{p-2}`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicInt {
    p: u32,
    c: Vec<BigInt>,
}

impl fmt::Debug for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, a)| match i {
                0 => format!("{a}"),
                1 => format!("{a}*z"),
                _ => format!("{a}*z^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl CyclotomicInt {
    pub fn zero(p: u32) -> Self {
        CyclotomicInt {
            p,
            c: vec![BigInt::zero(); (p - 1) as usize],
        }
    }

    pub fn one(p: u32) -> Self {
        Self::from_int(p, 1)
    }

    pub fn from_int(p: u32, n: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(p);
        z.c[0] = n.into();
        z
    }

    /// `ζ^k`.
    pub fn zeta_pow(p: u32, k: i64) -> Self {
        let mut counts = vec![0i64; p as usize];
        counts[k.rem_euclid(p as i64) as usize] = 1;
        Self::from_exponent_counts(p, &counts)
    }

    /// `Σ_k counts[k] ζ^k`, `counts.len() == p`.
    pub fn from_exponent_counts(p: u32, counts: &[i64]) -> Self {
        Self::from_full(p, counts.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn from_exponent_counts_big(p: u32, counts: Vec<BigInt>) -> Self {
        Self::from_full(p, counts)
    }

    /// Reduce a length-`p` vector in the power basis using `Σ ζ^i = 0`.
    fn from_full(p: u32, mut full: Vec<BigInt>) -> Self {
        assert_eq!(full.len(), p as usize);
        let top = full.pop().unwrap();
        if !top.is_zero() {
            for a in full.iter_mut() {
                *a -= &top;
            }
        }
        CyclotomicInt { p, c: full }
    }

    /// Canonical coordinates in the basis `1, ζ, …, ζ^{p-2}`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn from_coeffs(p: u32, c: Vec<BigInt>) -> Result<Self> {
        if c.len() != (p - 1) as usize {
            return Err(invalid("cyclotomic coordinate vector has wrong length"));
        }
        Ok(CyclotomicInt { p, c })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|a| a.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(|a| a.is_zero())
    }

    /// Rational integer value, if it lies in `Z`.
    pub fn as_integer(&self) -> Option<&BigInt> {
        self.c[1..].iter().all(|a| a.is_zero()).then(|| &self.c[0])
    }

    fn full(&self) -> Vec<BigInt> {
        let mut v = self.c.clone();
        v.push(BigInt::zero());
        v
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        CyclotomicInt {
            p: self.p,
            c: self.c.iter().map(|a| a * s).collect(),
        }
    }

    /// Exact division by a rational integer.
    pub fn div_exact(&self, s: &BigInt) -> Option<Self> {
        let mut c = Vec::with_capacity(self.c.len());
        for a in &self.c {
            let (qt, r) = a.div_rem(s);
            if !r.is_zero() {
                return None;
            }
            c.push(qt);
        }
        Some(CyclotomicInt { p: self.p, c })
    }

    /// Galois automorphism `ζ ↦ ζ^m`.
    pub fn galois(&self, m: i64) -> Self {
        let p = self.p as i64;
        let mut full = vec![BigInt::zero(); self.p as usize];
        for (i, a) in self.c.iter().enumerate() {
            full[(i as i64 * m).rem_euclid(p) as usize] += a;
        }
        Self::from_full(self.p, full)
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// `Σ a_i ζ^i` with `ζ = e^{2πi/p}`.
    pub fn embed(&self) -> Complex64 {
        let p = self.p as f64;
        self.c
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let v = a.to_f64().unwrap_or(f64::NAN);
                Complex64::from_polar(v, 2.0 * std::f64::consts::PI * i as f64 / p)
            })
            .sum()
    }

    /// The exponent `k` if this is `ζ^k`, else `None`.
    pub fn root_of_unity_exponent(&self) -> Option<u32> {
        (0..self.p).find(|&k| *self == Self::zeta_pow(self.p, k as i64))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one(self.p);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.c.iter().map(|a| a.abs()).max().unwrap_or_default()
    }
}

impl Add for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn add(self, o: &CyclotomicInt) -> CyclotomicInt {
        assert_eq!(self.p, o.p);
        CyclotomicInt {
            p: self.p,
            c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect(),
        }
    }
}

impl AddAssign<&CyclotomicInt> for CyclotomicInt {
    fn add_assign(&mut self, o: &CyclotomicInt) {
        assert_eq!(self.p, o.p);
        for (a, b) in self.c.iter_mut().zip(&o.c) {
            *a += b;
        }
    }
}

impl Sub for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn sub(self, o: &CyclotomicInt) -> CyclotomicInt {
        assert_eq!(self.p, o.p);
        CyclotomicInt {
            p: self.p,
            c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn neg(self) -> CyclotomicInt {
        CyclotomicInt {
            p: self.p,
            c: self.c.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn mul(self, o: &CyclotomicInt) -> CyclotomicInt {
        assert_eq!(self.p, o.p);
        let p = self.p as usize;
        let mut full = vec![BigInt::zero(); p];
        let (a, b) = (self.full(), o.full());
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    full[(i + j) % p] += x * y;
                }
            }
        }
        CyclotomicInt::from_full(self.p, full)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CyclotomicInt {
            type Output = CyclotomicInt;
            fn $m(self, o: CyclotomicInt) -> CyclotomicInt {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CyclotomicInt {
    type Output = CyclotomicInt;
    fn neg(self) -> CyclotomicInt {
        -&self
    }
}

/// `ψ_m(a) = ζ_p^{m·a}` on `F_p`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdditiveChar {
    p: u32,
    m: u32,
}

impl AdditiveChar {
    pub fn new(p: u32, m: u32) -> Result<Self> {
        if p < 3 {
            return Err(invalid("additive characters need odd p"));
        }
        if m % p == 0 {
            return Err(invalid("m ≡ 0 mod p gives the trivial character"));
        }
        Ok(AdditiveChar { p, m: m % p })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Exponent of `ζ_p` in `ψ(a)`.
    #[inline]
    pub fn exponent(&self, a: u32) -> u32 {
        ((self.m as u64 * a as u64) % self.p as u64) as u32
    }

    pub fn evaluate(&self, a: u32) -> CyclotomicInt {
        CyclotomicInt::zeta_pow(self.p, self.exponent(a) as i64)
    }
}
