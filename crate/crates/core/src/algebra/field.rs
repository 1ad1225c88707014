//! Finite fields `F_{p^k}` with table arithmetic.
//!
//! Elements are stored as indices: the element `Σ d_j x^j` of `F_p[x]/(m)` has
//! index `Σ d_j p^j`. Index 0 is zero and index 1 is one. Multiplication and
//! addition go through log/exp/Zech tables, built once per field.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{invalid, Error, Result};

/// Largest field order for which tables are built.
pub const MAX_FIELD_ORDER: u64 = 1 << 22;

const NO_LOG: u32 = u32::MAX;

/// An element of a [`FiniteField`], by index.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fe({})", self.0)
    }
}

/// Shared handle to a field.
pub type Field = Arc<FiniteField>;

/// `F_{q^r}` together with the embedding of the base field.
pub struct Extension {
    pub big: Field,
    /// `embed[a.index()]` is the image of `a`.
    pub embed: Vec<Fe>,
}

impl Extension {
    #[inline]
    pub fn map(&self, a: Fe) -> Fe {
        self.embed[a.0 as usize]
    }
}

pub struct FiniteField {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    trace: Vec<u32>,
    half: u32,
    extensions: Mutex<HashMap<u32, Arc<Extension>>>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} (modulus {:?})", self.p, self.k, self.modulus)
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}
impl Eq for FiniteField {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Builds `F_{p^k}` with the lexicographically least monic irreducible modulus
/// (coefficients compared in the order `a_0, a_1, …`).
pub fn make_field(p: u64, k: i64) -> Result<Field> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k < 1 {
        return Err(invalid(format!("extension degree must be positive, got {k}")));
    }
    let p32 = p as u32;
    let k32 = k as u32;
    let modulus = least_irreducible(p32, k32)?;
    FiniteField::build(p32, k32, modulus).map(Arc::new)
}

/// Builds `F_p[x]/(modulus)` for a user-supplied monic irreducible modulus
/// (coefficients low to high).
pub fn make_field_with_modulus(p: u64, modulus: &[u32]) -> Result<Field> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let p32 = p as u32;
    let m: Vec<u32> = modulus.iter().map(|c| c % p32).collect();
    if m.len() < 2 || *m.last().unwrap() != 1 {
        return Err(invalid("modulus must be monic of degree >= 1"));
    }
    if !fp::is_irreducible(p32, &m) {
        return Err(invalid("modulus is reducible"));
    }
    let k = (m.len() - 1) as u32;
    FiniteField::build(p32, k, m).map(Arc::new)
}

fn checked_order(p: u32, k: u32) -> Result<u32> {
    let mut q: u64 = 1;
    for _ in 0..k {
        q = q.saturating_mul(p as u64);
        if q > MAX_FIELD_ORDER {
            return Err(Error::FieldTooLarge(q));
        }
    }
    Ok(q as u32)
}

fn least_irreducible(p: u32, k: u32) -> Result<Vec<u32>> {
    let q = checked_order(p, k)?;
    if k == 1 {
        return Ok(vec![0, 1]);
    }
    for n in 0..q {
        // n enumerates (a_0, …, a_{k-1}) with a_0 as the most significant digit.
        let mut m = vec![0u32; k as usize + 1];
        let mut t = n;
        for j in (0..k as usize).rev() {
            m[j] = t % p;
            t /= p;
        }
        m[k as usize] = 1;
        if fp::is_irreducible(p, &m) {
            return Ok(m);
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FiniteField {
    fn build(p: u32, k: u32, modulus: Vec<u32>) -> Result<Self> {
        let q = checked_order(p, k)?;
        let digits = |mut a: u32| {
            let mut d = vec![0u32; k as usize];
            for x in d.iter_mut() {
                *x = a % p;
                a /= p;
            }
            d
        };
        let undigits = |d: &[u32]| d.iter().rev().fold(0u32, |acc, &x| acc * p + x);
        let mul_slow = |a: u32, b: u32| -> u32 {
            let prod = fp::mul(p, &digits(a), &digits(b));
            let r = fp::rem(p, &prod, &modulus);
            let mut d = r;
            d.resize(k as usize, 0);
            undigits(&d)
        };
        let pow_slow = |a: u32, mut e: u64| -> u32 {
            let mut base = a;
            let mut acc = 1u32;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mul_slow(acc, base);
                }
                base = mul_slow(base, base);
                e >>= 1;
            }
            acc
        };

        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let gen = (1..q)
            .find(|&g| factors.iter().all(|&l| pow_slow(g, order / l) != 1))
            .expect("multiplicative group is cyclic");

        let mut exp = vec![0u32; (q - 1) as usize];
        let mut log = vec![NO_LOG; q as usize];
        let mut cur = 1u32;
        for (i, e) in exp.iter_mut().enumerate() {
            *e = cur;
            log[cur as usize] = i as u32;
            cur = mul_slow(cur, gen);
        }
        debug_assert_eq!(cur, 1);

        let zech: Vec<u32> = exp
            .iter()
            .map(|&a| {
                let d0 = a % p;
                let b = a - d0 + (d0 + 1) % p;
                log[b as usize]
            })
            .collect();

        // Trace is F_p-linear: tr(Σ d_j x^j) = Σ d_j tr(x^j).
        let mut basis_trace = vec![0u32; k as usize];
        for (j, bt) in basis_trace.iter_mut().enumerate() {
            let mut e = vec![0u32; k as usize];
            e[j] = 1;
            let a = undigits(&e);
            let mut acc = vec![0u32; k as usize];
            let mut c = a;
            for _ in 0..k {
                for (x, y) in acc.iter_mut().zip(digits(c)) {
                    *x = (*x + y) % p;
                }
                c = pow_slow(c, p as u64);
            }
            debug_assert!(acc[1..].iter().all(|&x| x == 0));
            *bt = acc[0];
        }
        let trace: Vec<u32> = (0..q)
            .map(|a| {
                digits(a)
                    .iter()
                    .zip(&basis_trace)
                    .fold(0u32, |s, (&d, &t)| (s + d * t) % p)
            })
            .collect();

        let half = if p == 2 { 0 } else { (q - 1) / 2 };
        Ok(FiniteField {
            p,
            k,
            q,
            modulus,
            exp,
            log,
            zech,
            trace,
            half,
            extensions: Mutex::new(HashMap::new()),
        })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }
    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }
    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }
    /// Defining polynomial over `F_p`, coefficients low to high.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.q).map(Fe)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Fe> {
        (1..self.q).map(Fe)
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.p as i64) as u32)
    }

    /// Element with the given coordinates over `F_p` (low to high).
    pub fn from_coeffs(&self, c: &[u32]) -> Fe {
        assert!(c.len() <= self.k as usize, "too many coordinates");
        Fe(c.iter().rev().fold(0u32, |acc, &x| acc * self.p + x % self.p))
    }

    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        let mut t = a.0;
        (0..self.k)
            .map(|_| {
                let d = t % self.p;
                t /= self.p;
                d
            })
            .collect()
    }

    /// `Some(c)` if `a` lies in the prime field.
    pub fn to_prime(&self, a: Fe) -> Option<u32> {
        (a.0 < self.p).then_some(a.0)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.k == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= self.p { s - self.p } else { s });
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let n = self.q - 1;
        let la = self.log[a.0 as usize];
        let lb = self.log[b.0 as usize];
        let d = if lb >= la { lb - la } else { lb + n - la };
        let z = self.zech[d as usize];
        if z == NO_LOG {
            Fe::ZERO
        } else {
            let e = la + z;
            Fe(self.exp[(if e >= n { e - n } else { e }) as usize])
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if a.0 == 0 || self.p == 2 {
            return a;
        }
        if self.k == 1 {
            return Fe(self.p - a.0);
        }
        let n = self.q - 1;
        let e = self.log[a.0 as usize] + self.half;
        Fe(self.exp[(if e >= n { e - n } else { e }) as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        let n = self.q - 1;
        let e = self.log[a.0 as usize] + self.log[b.0 as usize];
        Fe(self.exp[(if e >= n { e - n } else { e }) as usize])
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: Fe) -> Fe {
        assert!(!a.is_zero(), "inverse of zero");
        let n = self.q - 1;
        let l = self.log[a.0 as usize];
        Fe(self.exp[((n - l) % n) as usize])
    }

    #[inline]
    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.0 == 0 {
            return Fe::ZERO;
        }
        let n = (self.q - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        Fe(self.exp[((l * (e % n)) % n) as usize])
    }

    /// Discrete logarithm to the fixed generator.
    pub fn log(&self, a: Fe) -> Option<u32> {
        (!a.is_zero()).then(|| self.log[a.0 as usize])
    }

    pub fn generator(&self) -> Fe {
        Fe(self.exp.get(1).copied().unwrap_or(1))
    }

    #[inline]
    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.p as u64)
    }

    /// Inverse Frobenius `a^{1/p}`.
    pub fn pth_root(&self, a: Fe) -> Fe {
        self.pow(a, (self.q / self.p) as u64)
    }

    /// Absolute trace `F_q → F_p`, returned as an integer in `0..p`.
    #[inline]
    pub fn trace(&self, a: Fe) -> u32 {
        self.trace[a.0 as usize]
    }

    /// `F_{q^r}` with the embedding of this field, memoized.
    pub fn extension(self: &Arc<Self>, r: u32) -> Result<Arc<Extension>> {
        if r == 0 {
            return Err(invalid("extension degree 0"));
        }
        if let Some(e) = self.extensions.lock().unwrap().get(&r) {
            return Ok(e.clone());
        }
        let ext = if r == 1 {
            Extension {
                big: self.clone(),
                embed: self.elements().collect(),
            }
        } else {
            let big = make_field(self.p as u64, (self.k * r) as i64)?;
            // A root of our modulus in the big field gives the embedding.
            let beta = big
                .elements()
                .find(|&b| {
                    let mut acc = Fe::ZERO;
                    for &c in self.modulus.iter().rev() {
                        acc = big.add(big.mul(acc, b), Fe(c));
                    }
                    acc.is_zero()
                })
                .expect("modulus splits in the extension");
            let mut powers = Vec::with_capacity(self.k as usize);
            let mut cur = Fe::ONE;
            for _ in 0..self.k {
                powers.push(cur);
                cur = big.mul(cur, beta);
            }
            let embed = self
                .elements()
                .map(|a| {
                    self.coeffs(a)
                        .iter()
                        .zip(&powers)
                        .fold(Fe::ZERO, |s, (&d, &bp)| big.add(s, big.mul(Fe(d), bp)))
                })
                .collect();
            Extension { big, embed }
        };
        let ext = Arc::new(ext);
        self.extensions
            .lock()
            .unwrap()
            .entry(r)
            .or_insert_with(|| ext.clone());
        Ok(ext)
    }
}

/// Dense polynomial helpers over a prime field, used while bootstrapping.
pub(crate) mod fp {
    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn mul(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] += (x as u64) * (y as u64);
            }
        }
        trim(out.into_iter().map(|c| (c % p as u64) as u32).collect())
    }

    fn inv(p: u32, a: u32) -> u32 {
        let mut r = 1u64;
        let mut b = a as u64 % p as u64;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        r as u32
    }

    pub fn rem(p: u32, a: &[u32], m: &[u32]) -> Vec<u32> {
        let m = trim(m.to_vec());
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let li = inv(p, m[dm]);
        while r.len() > dm {
            let shift = r.len() - 1 - dm;
            let c = (*r.last().unwrap() as u64 * li as u64 % p as u64) as u32;
            for (j, &mj) in m.iter().enumerate() {
                let t = (c as u64 * mj as u64 % p as u64) as u32;
                r[shift + j] = (r[shift + j] + p - t) % p;
            }
            r = trim(r);
        }
        r
    }

    fn gcd(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(p, &a, &b);
            a = b;
            b = r;
        }
        a
    }

    fn powmod_x(p: u32, e_p_power: u32, m: &[u32]) -> Vec<u32> {
        // x^{p^e_p_power} mod m by repeated p-th powering.
        let mut cur = rem(p, &[0, 1], m);
        for _ in 0..e_p_power {
            let mut acc = vec![1u32];
            let mut base = cur.clone();
            let mut e = p;
            while e > 0 {
                if e & 1 == 1 {
                    acc = rem(p, &mul(p, &acc, &base), m);
                }
                base = rem(p, &mul(p, &base, &base), m);
                e >>= 1;
            }
            cur = acc;
        }
        cur
    }

    /// Rabin's irreducibility test for a monic polynomial over `F_p`.
    pub fn is_irreducible(p: u32, m: &[u32]) -> bool {
        let n = m.len() as u32 - 1;
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let sub_x = |mut v: Vec<u32>| {
            v.resize(v.len().max(2), 0);
            v[1] = (v[1] + p - 1) % p;
            trim(v)
        };
        if !sub_x(powmod_x(p, n, m)).is_empty() {
            return false;
        }
        for l in super::prime_factors(n as u64) {
            let t = sub_x(powmod_x(p, n / l as u32, m));
            if gcd(p, &t, m).len() != 1 {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f9_modulus_is_x2_plus_1() {
        let f = make_field(3, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        assert_eq!(make_field(3, 1).unwrap().modulus(), &[0, 1]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(make_field(4, 1), Err(Error::NotPrime(4))));
        assert!(make_field(3, 0).is_err());
    }

    #[test]
    fn f9_modulus_by_root_search() {
        // Oracle: first monic quadratic (by a_0, then a_1) without roots in F_3.
        let mut found = None;
        'outer: for a0 in 0..3u32 {
            for a1 in 0..3u32 {
                if (0..3u32).all(|x| (x * x + a1 * x + a0) % 3 != 0) {
                    found = Some(vec![a0, a1, 1]);
                    break 'outer;
                }
            }
        }
        assert_eq!(make_field(3, 2).unwrap().modulus(), found.unwrap().as_slice());
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, k) in [(3, 1), (3, 2), (5, 1), (2, 3), (3, 3)] {
            let f = make_field(p, k).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a)), Fe::ONE);
                }
                for b in f.elements() {
                    // digitwise addition oracle
                    let s: Vec<u32> = f
                        .coeffs(a)
                        .iter()
                        .zip(f.coeffs(b))
                        .map(|(x, y)| (x + y) % f.p())
                        .collect();
                    assert_eq!(f.add(a, b), f.from_coeffs(&s));
                    for c in [Fe::ONE, f.generator()] {
                        assert_eq!(
                            f.mul(f.add(a, b), c),
                            f.add(f.mul(a, c), f.mul(b, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn trace_matches_frobenius_sum() {
        for (p, k) in [(3, 2), (3, 3), (3, 4), (5, 2)] {
            let f = make_field(p, k).unwrap();
            for a in f.elements() {
                let mut s = Fe::ZERO;
                let mut c = a;
                for _ in 0..k {
                    s = f.add(s, c);
                    c = f.frobenius(c);
                }
                assert_eq!(f.to_prime(s), Some(f.trace(a)));
            }
        }
        let f9 = make_field(3, 2).unwrap();
        assert_eq!(f9.trace(Fe::ZERO), 0);
        assert_eq!(f9.trace(Fe::ONE), 2);
    }

    #[test]
    fn f9_modulus_root_behaves() {
        // With modulus x^2+1 the class of x squares to -1.
        let f = make_field(3, 2).unwrap();
        let x = f.from_coeffs(&[0, 1]);
        assert_eq!(f.mul(x, x), f.from_int(-1));
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let f = make_field(3, 2).unwrap();
        for r in [1, 2, 3] {
            let e = f.extension(r).unwrap();
            let big = &e.big;
            assert_eq!(big.q(), 9u32.pow(r));
            let mut seen = std::collections::HashSet::new();
            for a in f.elements() {
                assert!(seen.insert(e.map(a)));
                for b in f.elements() {
                    assert_eq!(e.map(f.add(a, b)), big.add(e.map(a), e.map(b)));
                    assert_eq!(e.map(f.mul(a, b)), big.mul(e.map(a), e.map(b)));
                }
                // relative trace is r times the absolute trace on F_q
                assert_eq!(big.trace(e.map(a)), (r * f.trace(a)) % 3);
            }
            for c in 0..3 {
                assert_eq!(e.map(Fe(c)), Fe(c));
            }
        }
    }

    #[test]
    fn extension_is_memoized() {
        let f = make_field(3, 1).unwrap();
        let a = f.extension(4).unwrap();
        let b = f.extension(4).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn size_cap() {
        assert!(matches!(make_field(3, 20), Err(Error::FieldTooLarge(_))));
    }
}
