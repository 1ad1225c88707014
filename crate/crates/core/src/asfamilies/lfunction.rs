use super::family::AsFunction;
use super::lpoly::{LPoly, Side};
use crate::algebra::{AdditiveChar, CyclotomicInt, Fe, Poly, PolyRing, RationalFunction};
use crate::characters::{check_fd, DirichletChar};
use crate::error::{Error, Result};

/// `δ = 2𝔤/(p − 1) = Σ_P (m_P + 1) deg P − 2` over the poles of `f`.
pub fn curve_degree(ring: &PolyRing, f: &AsFunction) -> Result<usize> {
    let p = ring.p() as usize;
    let bad = |m: &str| Error::FamilyConstraint(m.into());
    match f {
        AsFunction::Poly(c) => {
            let n = c.deg().filter(|&n| n >= 1).ok_or_else(|| bad("constant f has no curve"))?;
            if n % p == 0 {
                return Err(bad("order of the pole at ∞ is divisible by p"));
            }
            Ok(n - 1)
        }
        AsFunction::Rational(r) => {
            let dg = r.den.deg().ok_or(Error::ZeroPolynomial)?;
            if !r.den.is_monic() || !ring.is_squarefree(&r.den) {
                return Err(Error::NotSquarefree);
            }
            if !r.num.is_zero() && !ring.gcd(&r.num, &r.den)?.is_one() {
                return Err(Error::NotCoprime);
            }
            let e = r.num.deg().unwrap_or(0).saturating_sub(dg);
            if e % p == 0 && e > 0 {
                return Err(bad("order of the pole at ∞ is divisible by p"));
            }
            let total = 2 * dg + if e > 0 { e + 1 } else { 0 };
            total.checked_sub(2).ok_or_else(|| bad("f has too few poles"))
        }
    }
}

/// `S_r(f) = Σ_{α ∈ P^1(F_{q^r}), f(α) ≠ ∞} ψ(tr_{q^r/p} f(α))`.
pub fn char_power_sum(ring: &PolyRing, f: &AsFunction, psi: AdditiveChar, r: usize) -> Result<CyclotomicInt> {
    if r == 0 {
        return Err(Error::InvalidParameter("r must be positive".into()));
    }
    let base = ring.field();
    let ext = base.extension(r as u32)?;
    let big = &ext.big;
    let lift = |c: &Poly| -> Vec<Fe> { c.coeffs().iter().map(|&a| ext.map(a)).collect() };
    let horner = |c: &[Fe], x: Fe| c.iter().rev().fold(Fe::ZERO, |acc, &a| big.add(big.mul(acc, x), a));
    let p = psi.p();
    let mut counts = vec![0i64; p as usize];
    match f {
        AsFunction::Poly(c) => {
            let c = lift(c);
            for x in big.elements() {
                counts[psi.exponent(big.trace(horner(&c, x))) as usize] += 1;
            }
        }
        AsFunction::Rational(u) => {
            let (h, g) = (lift(&u.num), lift(&u.den));
            for x in big.elements() {
                let gx = horner(&g, x);
                if gx.is_zero() {
                    continue;
                }
                let v = big.div(horner(&h, x), gx);
                counts[psi.exponent(big.trace(v)) as usize] += 1;
            }
        }
    }
    if let Some(b) = f.value_at_infinity(ring) {
        let t = (r as u64 * base.trace(b) as u64 % p as u64) as u32;
        counts[psi.exponent(t) as usize] += 1;
    }
    Ok(CyclotomicInt::from_exponent_counts(p, &counts))
}

/// `L(u, f, ψ)` from `S_1, …, S_δ`; the degree is certified to be `δ` by the
/// functional-equation check `|c_δ|² = q^δ`.
pub fn l_function_as(ring: &PolyRing, f: &AsFunction, psi: AdditiveChar) -> Result<LPoly> {
    let delta = curve_degree(ring, f)?;
    let sums = (1..=delta)
        .map(|r| char_power_sum(ring, f, psi, r))
        .collect::<Result<Vec<_>>>()?;
    let l = LPoly::from_power_sums(psi.p(), &sums, Side::Curve)?;
    if l.degree() != delta || !l.has_unitary_top(ring.q()) {
        return Err(Error::DegreeMismatch { expected: delta, found: l.degree() });
    }
    Ok(l)
}

/// `δ(f) = ψ(tr f(∞))` when `deg h = deg g`, else 1.
pub fn delta_factor(ring: &PolyRing, f: &RationalFunction, psi: AdditiveChar) -> CyclotomicInt {
    let k = delta_exponent(ring, f, psi);
    CyclotomicInt::zeta_pow(psi.p(), k as i64)
}

fn delta_exponent(ring: &PolyRing, f: &RationalFunction, psi: AdditiveChar) -> u32 {
    if f.num.degree() == f.den.degree() {
        let b = ring.field().div(f.num.lc(), f.den.lc());
        psi.exponent(ring.field().trace(b))
    } else {
        0
    }
}

/// `L(u, f + b, ψ) = L(ψ(b) u, f, ψ)`, both sides computed independently.
pub fn twist_check(ring: &PolyRing, f: &AsFunction, b: Fe, psi: AdditiveChar) -> Result<bool> {
    let lhs = l_function_as(ring, &f.add_const(ring, b), psi)?;
    let rhs = l_function_as(ring, f, psi)?.twist(psi.exponent(ring.field().trace(b)));
    Ok(lhs.coeffs() == rhs.coeffs())
}

/// The character attached to `f`, with `L(u, χ) = (1 − ζ^t u) L(u, f, ψ)`
/// when `linear = Some(t)` and `L(u, χ) = L(u, f, ψ)` when `linear = None`
/// (a pole at ∞: `χ` is then a Hecke character and not periodic).
#[derive(Clone, Debug)]
pub struct AsCharacter {
    pub chi: DirichletChar,
    pub linear: Option<u32>,
}

pub fn character_of(ring: &PolyRing, f: &AsFunction, psi: AdditiveChar) -> Result<AsCharacter> {
    let tr_exp = |b: Fe| psi.exponent(ring.field().trace(b));
    match f {
        AsFunction::Poly(c) => {
            let b = c.coeff(0);
            let f0 = ring.sub(c, &Poly::constant(b));
            check_fd(ring, &f0)?;
            let t = tr_exp(b);
            let chi = DirichletChar::chi_poly(ring, &f0, psi)?.twist_by_degree(t);
            Ok(AsCharacter { chi, linear: Some(t) })
        }
        AsFunction::Rational(u) => {
            curve_degree(ring, f)?;
            let (quo, rem) = ring.divrem(&u.num, &u.den);
            let part = RationalFunction { num: rem, den: u.den.clone() };
            let mut chi = DirichletChar::chi_ord(ring, &part, psi)?;
            let b = quo.coeff(0);
            let linear = match quo.deg() {
                Some(1) => {
                    let lin = DirichletChar::chi_linear_twist(ring, quo.coeff(1), &u.den, psi)?;
                    chi = chi.product(&lin)?;
                    None
                }
                _ => Some(tr_exp(b)),
            };
            Ok(AsCharacter { chi: chi.twist_by_degree(tr_exp(b)), linear })
        }
    }
}

impl AsCharacter {
    /// Character-side L: the exact `L(u, χ)` when periodic, else its Euler
    /// series truncated after degree `delta + 1` (which must vanish there).
    pub fn l_function(&self, delta: usize) -> Result<LPoly> {
        match self.linear {
            Some(_) => self.chi.l_function_of_char(),
            None => LPoly::new(self.chi.p(), self.chi.l_series(delta + 1), Side::Character),
        }
    }

    /// `Σ_{deg c = r} Λ(c) χ(c) + ε δ^r`, so that `T^r = −q^{−r/2}` times this.
    pub fn explicit_sum(&self, r: usize) -> Result<CyclotomicInt> {
        let mut s = self.chi.lambda_sum(r)?;
        if let Some(t) = self.linear {
            s += &CyclotomicInt::zeta_pow(self.chi.p(), t as i64 * r as i64);
        }
        Ok(s)
    }
}

/// `(1 − δ u) L(u, f, ψ) = L(u, χ_f)` coefficientwise.
pub fn check_factorization(ring: &PolyRing, f: &AsFunction, psi: AdditiveChar) -> Result<bool> {
    let curve = l_function_as(ring, f, psi)?;
    let ch = character_of(ring, f, psi)?;
    let lhs = match ch.linear {
        Some(t) => curve.times_linear(t),
        None => curve.clone(),
    };
    let rhs = ch.l_function(curve.degree())?;
    Ok(lhs.coeffs() == rhs.coeffs())
}

/// `L(u, f, ψ)` for a character-side polynomial divided by its linear factor.
pub fn curve_side_from_char(ch: &AsCharacter, delta: usize) -> Result<LPoly> {
    let l = ch.l_function(delta)?;
    let l = match ch.linear {
        Some(t) => l.div_linear(t).ok_or(Error::Certification("linear factor does not divide L(u, χ)".into()))?,
        None => l,
    };
    Ok(l.with_side(Side::Curve))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_field;
    use crate::asfamilies::FamilyDescriptor;
    use num_bigint::BigInt;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn setup() -> (PolyRing, AdditiveChar) {
        (PolyRing::new(make_field(3, 1).unwrap()), AdditiveChar::new(3, 1).unwrap())
    }

    #[test]
    fn power_sum_examples() {
        let (r, psi) = setup();
        let x = AsFunction::Poly(Poly::x());
        assert!(char_power_sum(&r, &x, psi, 1).unwrap().is_zero());
        let x2 = AsFunction::Poly(r.from_ints(&[0, 0, 1]));
        let want = &CyclotomicInt::one(3) + &CyclotomicInt::zeta_pow(3, 1).scale(&big(2));
        assert_eq!(char_power_sum(&r, &x2, psi, 1).unwrap(), want);
        let inv = AsFunction::Rational(r.rational(&Poly::one(), &Poly::x()).unwrap());
        assert!(char_power_sum(&r, &inv, psi, 1).unwrap().is_zero());
    }

    #[test]
    fn l_function_examples() {
        let (r, psi) = setup();
        assert!(l_function_as(&r, &AsFunction::Poly(Poly::x()), psi).unwrap().is_trivial());
        let l = l_function_as(&r, &AsFunction::Poly(r.from_ints(&[0, 0, 1])), psi).unwrap();
        let c1 = &CyclotomicInt::one(3) + &CyclotomicInt::zeta_pow(3, 1).scale(&big(2));
        assert_eq!(l.coeffs(), &[CyclotomicInt::one(3), c1]);
    }

    #[test]
    fn delta_examples() {
        let (r, psi) = setup();
        let f = RationalFunction { num: r.from_ints(&[1, 2]), den: Poly::x() };
        assert_eq!(delta_factor(&r, &f, psi), CyclotomicInt::zeta_pow(3, 2));
        let f = RationalFunction { num: Poly::one(), den: Poly::x() };
        assert!(delta_factor(&r, &f, psi).is_one());
    }

    #[test]
    fn twist_examples() {
        let (r, psi) = setup();
        let x2 = AsFunction::Poly(r.from_ints(&[0, 0, 1]));
        assert!(twist_check(&r, &x2, Fe(0), psi).unwrap());
        assert!(twist_check(&r, &x2, Fe(1), psi).unwrap());
        let inv = AsFunction::Rational(r.rational(&Poly::one(), &Poly::x()).unwrap());
        assert!(twist_check(&r, &inv, Fe(2), psi).unwrap());
    }

    #[test]
    fn factorization_small_families() {
        let (r, psi) = setup();
        let descs = [
            FamilyDescriptor::polynomial_as0(2),
            FamilyDescriptor::hg(r.from_ints(&[0, 1, 1])),
            FamilyDescriptor::fixed_g(2, r.from_ints(&[0, 1, 1])),
            FamilyDescriptor::fixed_g(3, r.from_ints(&[0, 1, 1])),
        ];
        for desc in descs {
            for f in desc.enumerate(&r, 1000).unwrap() {
                assert!(check_factorization(&r, &f, psi).unwrap(), "{f}");
            }
        }
    }

    #[test]
    fn degenerate_artin_schreier_is_caught() {
        let (r, psi) = setup();
        // h^3 − h + x with h = x: x^3, a pole of order p
        let f = AsFunction::Poly(r.from_ints(&[0, 0, 0, 1]));
        assert!(l_function_as(&r, &f, psi).is_err());
    }
}
