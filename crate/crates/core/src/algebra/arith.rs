//! Arithmetic functions on monic polynomials and symmetric functions of roots.

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use super::field::Fe;
use super::poly::{Poly, PolyRing, RationalFunction};
use crate::error::{Error, Result};

fn require_monic(g: &Poly) -> Result<()> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !g.is_monic() {
        return Err(Error::NotMonic);
    }
    Ok(())
}

impl PolyRing {
    /// `deg P` if `c = P^k` for a prime `P`, else 0.
    ///
    /// Strips `p`-th roots while `c' = 0`; then `h = c / gcd(c, c')` must be
    /// irreducible with `c` a power of `h`.
    pub fn von_mangoldt(&self, c: &Poly) -> Result<u32> {
        require_monic(c)?;
        let mut c = c.clone();
        if c.is_constant() {
            return Ok(0);
        }
        loop {
            let d = self.derivative(&c);
            if !d.is_zero() {
                let g = self.gcd(&c, &d)?;
                let h = self.div_exact(&c, &g).expect("gcd divides");
                let (dc, dh) = (c.deg().unwrap(), h.deg().unwrap());
                if dc % dh != 0 || !self.is_irreducible(&h) {
                    return Ok(0);
                }
                return Ok(if self.pow(&h, (dc / dh) as u64) == c {
                    dh as u32
                } else {
                    0
                });
            }
            c = self.pth_root(&c).expect("zero derivative means a p-th power");
        }
    }

    /// Factorization into monic primes with multiplicities, sorted by prime.
    pub fn factor(&self, g: &Poly) -> Result<Vec<(Poly, u32)>> {
        require_monic(g)?;
        let mut rest = g.clone();
        let mut out = Vec::new();
        let mut e = 1;
        while rest.deg().unwrap_or(0) >= 2 * e {
            for pr in self.irreducibles(e)?.iter() {
                let mut k = 0;
                while let Some(qt) = self.div_exact(&rest, pr) {
                    rest = qt;
                    k += 1;
                }
                if k > 0 {
                    out.push((pr.clone(), k));
                }
            }
            e += 1;
        }
        if rest.deg().unwrap_or(0) >= 1 {
            match out.iter_mut().find(|(pr, _)| *pr == rest) {
                Some(entry) => entry.1 += 1,
                None => out.push((rest, 1)),
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn mobius(&self, g: &Poly) -> Result<i32> {
        let f = self.factor(g)?;
        if f.iter().any(|(_, k)| *k > 1) {
            return Ok(0);
        }
        Ok(if f.len() % 2 == 0 { 1 } else { -1 })
    }

    /// `#(F_q[x]/g)^×`.
    pub fn euler_phi(&self, g: &Poly) -> Result<BigUint> {
        let q = BigUint::from(self.q());
        let mut acc = BigUint::one();
        for (pr, k) in self.factor(g)? {
            let qd = q.pow(pr.deg().unwrap() as u32);
            acc *= (&qd - 1u32) * qd.pow(k - 1);
        }
        Ok(acc)
    }

    pub fn divisor_count(&self, g: &Poly) -> Result<BigUint> {
        Ok(self
            .factor(g)?
            .iter()
            .fold(BigUint::one(), |acc, (_, k)| acc * (k + 1)))
    }

    /// Monic divisors of `g`, sorted.
    pub fn monic_divisors(&self, g: &Poly) -> Result<Vec<Poly>> {
        let mut out = vec![Poly::one()];
        for (pr, k) in self.factor(g)? {
            let mut next = Vec::with_capacity(out.len() * (k as usize + 1));
            for d in &out {
                let mut cur = d.clone();
                next.push(cur.clone());
                for _ in 0..k {
                    cur = self.mul(&cur, &pr);
                    next.push(cur.clone());
                }
            }
            out = next;
        }
        out.sort();
        Ok(out)
    }

    /// Power sums `s_0..s_jmax` of the roots of `c` (with multiplicity),
    /// by Newton's identities on `c / lc(c)`. `s_0 = deg c mod p`.
    pub fn root_power_sums(&self, c: &Poly, jmax: usize) -> Result<Vec<Fe>> {
        if c.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let f = self.field();
        let c = self.monic(c);
        let n = c.deg().unwrap();
        // e[i] = coefficient of x^{n-i}
        let e: Vec<Fe> = (0..=n).map(|i| c.coeff(n - i)).collect();
        let mut s = vec![Fe::ZERO; jmax + 1];
        s[0] = f.from_int(n as i64);
        for j in 1..=jmax {
            let mut acc = if j <= n {
                f.mul(f.from_int(j as i64), e[j])
            } else {
                Fe::ZERO
            };
            for i in 1..j.min(n + 1) {
                acc = f.add(acc, f.mul(e[i], s[j - i]));
            }
            s[j] = f.neg(acc);
        }
        Ok(s)
    }

    /// `Σ_{c(α)=0} u(α)` with multiplicity, as the linear functional
    /// `w ↦ Σ w_j s_j` applied to `w = h·g^{-1} mod c`.
    pub fn sum_over_roots(&self, u: &RationalFunction, c: &Poly) -> Result<Fe> {
        if c.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let n = c.deg().unwrap();
        if n == 0 {
            return Ok(Fe::ZERO);
        }
        let ginv = self.inv_mod(&u.den, c).ok_or(Error::NotCoprime)?;
        let w = self.mulmod(&u.num, &ginv, c);
        let s = self.root_power_sums(c, n - 1)?;
        Ok(self.pair_with_power_sums(&w, &s))
    }

    pub(crate) fn pair_with_power_sums(&self, w: &Poly, s: &[Fe]) -> Fe {
        let f = self.field();
        w.coeffs()
            .iter()
            .zip(s)
            .fold(Fe::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
    }

    /// `p_j = Σ α_i^j`, `j = 1..=jmax`, over the inverse roots of
    /// `c = c(0) Π (1 − α_i x)`.
    pub fn inverse_root_power_sums(&self, c: &Poly, jmax: usize) -> Result<Vec<Fe>> {
        if c.coeff(0).is_zero() {
            return Err(Error::InvalidParameter(
                "inverse roots need c(0) != 0".into(),
            ));
        }
        let s = self.root_power_sums(&self.reverse(c), jmax)?;
        Ok(s[1..].to_vec())
    }

    /// Reduced `h/g` with monic denominator.
    pub fn rational(&self, h: &Poly, g: &Poly) -> Result<RationalFunction> {
        if g.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let d = if h.is_zero() {
            g.clone()
        } else {
            self.gcd(h, g)?
        };
        let mut num = self.div_exact(h, &d).unwrap();
        let mut den = self.div_exact(g, &d).unwrap();
        let li = self.field().inv(den.lc());
        num = self.scale(li, &num);
        den = self.scale(li, &den);
        Ok(RationalFunction { num, den })
    }

    pub fn rational_add_const(&self, u: &RationalFunction, b: Fe) -> RationalFunction {
        RationalFunction {
            num: self.add(&u.num, &self.scale(b, &u.den)),
            den: u.den.clone(),
        }
    }
}

/// `Σ_{P | g} …` helpers work with signed counts.
pub fn signed(v: &BigUint, sign: i32) -> BigInt {
    BigInt::from(v.clone()) * sign
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::make_field;

    fn ring(p: u64, k: i64) -> PolyRing {
        PolyRing::new(make_field(p, k).unwrap())
    }

    #[test]
    fn von_mangoldt_examples() {
        let r = ring(3, 1);
        assert_eq!(r.von_mangoldt(&r.from_ints(&[0, 1])).unwrap(), 1);
        assert_eq!(r.von_mangoldt(&r.from_ints(&[0, 0, 1])).unwrap(), 1);
        assert_eq!(r.von_mangoldt(&r.from_ints(&[0, 1, 1])).unwrap(), 0);
        assert!(matches!(
            r.von_mangoldt(&r.from_ints(&[0, 2])),
            Err(Error::NotMonic)
        ));
        // (x^2+1)^3 and x^9
        let p = r.from_ints(&[1, 0, 1]);
        assert_eq!(r.von_mangoldt(&r.pow(&p, 3)).unwrap(), 2);
        assert_eq!(r.von_mangoldt(&r.pow(&Poly::x(), 9)).unwrap(), 1);
    }

    #[test]
    fn prime_polynomial_theorem() {
        for q in [3u64, 5] {
            let r = ring(q, 1);
            for n in 1..=5usize {
                let total: u64 = r.monics(n).map(|c| r.von_mangoldt(&c).unwrap() as u64).sum();
                assert_eq!(total, q.pow(n as u32), "q={q} n={n}");
                let table: u64 = r.prime_powers(n).unwrap().iter().map(|(_, l)| *l as u64).sum();
                assert_eq!(table, total);
            }
        }
    }

    #[test]
    fn prime_power_table_matches_von_mangoldt() {
        let r = ring(3, 1);
        for n in 1..=5 {
            let table = r.prime_powers(n).unwrap();
            let direct: Vec<(Poly, u32)> = r
                .monics(n)
                .filter_map(|c| {
                    let l = r.von_mangoldt(&c).unwrap();
                    (l > 0).then_some((c, l))
                })
                .collect();
            let mut direct = direct;
            direct.sort();
            assert_eq!(*table, direct);
        }
    }

    #[test]
    fn multiplicative_functions() {
        let r = ring(3, 1);
        let x = Poly::x();
        assert_eq!(r.mobius(&x).unwrap(), -1);
        assert_eq!(r.mobius(&r.from_ints(&[0, 0, 1])).unwrap(), 0);
        assert_eq!(r.euler_phi(&x).unwrap(), BigUint::from(2u32));
        let g = r.from_ints(&[0, 1, 1]);
        assert_eq!(r.divisor_count(&g).unwrap(), BigUint::from(4u32));
        assert_eq!(r.monic_divisors(&g).unwrap().len(), 4);
        // φ(g) by counting units directly
        for g in r.monics(3) {
            let units = r
                .polys_below(3)
                .filter(|a| !a.is_zero() && r.gcd(a, &g).unwrap().is_one())
                .count();
            assert_eq!(r.euler_phi(&g).unwrap(), BigUint::from(units));
        }
    }

    #[test]
    fn factor_reconstructs() {
        let r = ring(3, 1);
        for c in r.monics(5) {
            let f = r.factor(&c).unwrap();
            let prod = f
                .iter()
                .fold(Poly::one(), |acc, (pr, k)| r.mul(&acc, &r.pow(pr, *k as u64)));
            assert_eq!(prod, c);
            assert!(f.iter().all(|(pr, _)| r.is_irreducible(pr)));
        }
    }

    #[test]
    fn sum_over_roots_examples() {
        let r = ring(3, 1);
        let one = Poly::one();
        let u = |h: Poly| RationalFunction {
            num: h,
            den: one.clone(),
        };
        assert_eq!(
            r.sum_over_roots(&u(Poly::x()), &r.from_ints(&[1, 0, 1])).unwrap(),
            Fe(0)
        );
        assert_eq!(
            r.sum_over_roots(&u(r.from_ints(&[0, 0, 1])), &r.from_ints(&[2, 1])).unwrap(),
            Fe(1)
        );
        assert_eq!(
            r.sum_over_roots(&u(r.from_ints(&[1, 1])), &r.from_ints(&[0, 0, 1])).unwrap(),
            Fe(2)
        );
        let bad = RationalFunction {
            num: one.clone(),
            den: Poly::x(),
        };
        assert!(matches!(
            r.sum_over_roots(&bad, &r.from_ints(&[0, 1, 1])),
            Err(Error::NotCoprime)
        ));
    }

    #[test]
    fn sum_over_roots_matches_extension_roots() {
        // Oracle: find the roots of c in F_{q^deg c} and sum u at them.
        let r = ring(3, 1);
        let f = r.field().clone();
        let den = r.from_ints(&[1, 1]);
        let num = r.from_ints(&[2, 0, 1]);
        let u = r.rational(&num, &den).unwrap();
        for c in r.monics(3) {
            if !r.gcd(&c, &den).unwrap().is_one() {
                continue;
            }
            let fac = r.factor(&c).unwrap();
            let mut total = Fe::ZERO;
            for (pr, k) in fac {
                let e = pr.deg().unwrap() as u32;
                let ext = f.extension(e).unwrap();
                let big = &ext.big;
                let evalb = |p: &Poly, a: Fe| {
                    p.coeffs()
                        .iter()
                        .rev()
                        .fold(Fe::ZERO, |acc, &c| big.add(big.mul(acc, a), ext.map(c)))
                };
                let mut s = Fe::ZERO;
                for a in big.elements() {
                    if evalb(&pr, a).is_zero() {
                        s = big.add(s, big.div(evalb(&u.num, a), evalb(&u.den, a)));
                    }
                }
                // s lies in F_3 ⊂ big; embed index equals value for prime field
                let s = big.to_prime(s).expect("symmetric sum lies in base field");
                for _ in 0..k {
                    total = f.add(total, Fe(s));
                }
            }
            assert_eq!(r.sum_over_roots(&u, &c).unwrap(), total, "{c:?}");
        }
    }

    #[test]
    fn sum_over_roots_additive_in_c() {
        let r = ring(5, 1);
        let u = r.rational(&r.from_ints(&[1, 2, 3]), &r.from_ints(&[0, 1])).unwrap();
        for c1 in r.monics(2) {
            for c2 in r.monics(1).skip(1) {
                if c1.coeff(0).is_zero() {
                    continue;
                }
                let a = r.sum_over_roots(&u, &c1).unwrap();
                let b = r.sum_over_roots(&u, &c2).unwrap();
                let ab = r.sum_over_roots(&u, &r.mul(&c1, &c2)).unwrap();
                assert_eq!(r.field().add(a, b), ab);
            }
        }
    }

    #[test]
    fn inverse_root_power_sums_examples() {
        let r = ring(3, 1);
        assert_eq!(r.inverse_root_power_sums(&r.from_ints(&[2, 1]), 1).unwrap(), vec![Fe(1)]);
        assert!(r
            .inverse_root_power_sums(&Poly::one(), 4)
            .unwrap()
            .iter()
            .all(|v| v.is_zero()));
        assert!(r.inverse_root_power_sums(&Poly::x(), 2).is_err());
    }

    #[test]
    fn inverse_root_sums_vs_reciprocal_sum_over_roots() {
        let r = ring(3, 1);
        for n in 0..=3 {
            for c in r.polys_below(n + 1) {
                if c.coeff(0).is_zero() || c.deg() != Some(n) {
                    continue;
                }
                let pj = r.inverse_root_power_sums(&c, 4).unwrap();
                let rc = r.monic(&r.reverse(&c));
                for j in 1..=4 {
                    let u = RationalFunction {
                        num: Poly::monomial(Fe::ONE, j),
                        den: Poly::one(),
                    };
                    assert_eq!(pj[j - 1], r.sum_over_roots(&u, &rc).unwrap());
                }
            }
        }
    }
}
