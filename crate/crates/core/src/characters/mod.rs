//! Dirichlet characters of `F_q[x]` with values in `μ_p`.
//!
//! Values are carried as exponents of `ζ_p` (`Some(k)` for `ζ^k`, `None` for 0).
//! Two root conventions coexist and each backend fixes its own:
//! the polynomial backend uses inverse roots, `c = c(0) Π (1 − α_i x)`;
//! the ordinary and linear-twist backends use roots, `c = lc Π (x − α_i)`.

mod group;

use std::sync::Arc;

use num_bigint::BigInt;

use crate::algebra::{AdditiveChar, CyclotomicInt, Fe, Poly, PolyRing, RationalFunction};
use crate::asfamilies::{LPoly, Side};
use crate::error::{Error, Result};

pub use group::{group_h_odd, pth_power_residues, CharGroup, ResidueSet};

/// Table entry for a non-unit.
pub(crate) const NON_UNIT: u8 = u8::MAX;

#[derive(Clone, Debug)]
pub enum Backend {
    /// `χ_f(c) = ψ(tr Σ f(α_i))` over inverse roots; modulus `x^{d+1}`.
    PolyAs { f: Poly },
    /// `χ_f(c) = ψ(tr Σ_{c(α)=0} f(α))` over roots; modulus `g²`.
    Ordinary { f: RationalFunction },
    /// `χ_{ax}(c) = ψ(tr(a · Σ roots))`.
    LinearTwist { a: Fe },
    /// Explicit exponents on residues mod the modulus.
    Table { table: Arc<Vec<u8>> },
    Product(Vec<DirichletChar>),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// `e(χ)`: 1 for even, 0 for odd.
    pub fn e(self) -> u32 {
        match self {
            Parity::Even => 1,
            Parity::Odd => 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DirichletChar {
    ring: PolyRing,
    modulus: Poly,
    psi: AdditiveChar,
    backend: Backend,
    /// Extra factor `ζ^{t·deg c}`.
    degree_twist: u32,
    periodic: bool,
}

fn psi_for(ring: &PolyRing, psi: &AdditiveChar) -> Result<()> {
    if ring.p() != psi.p() {
        return Err(Error::InvalidParameter(
            "additive character and field have different characteristic".into(),
        ));
    }
    Ok(())
}

/// Checks `f ∈ F_d`: `f(0)=0`, `a_i = 0` for `p | i`, `deg f = d`, `p ∤ d`.
pub fn check_fd(ring: &PolyRing, f: &Poly) -> Result<usize> {
    let p = ring.p() as usize;
    let d = f
        .deg()
        .ok_or_else(|| Error::FamilyConstraint("f = 0 is not in F_d".into()))?;
    if d % p == 0 {
        return Err(Error::FamilyConstraint(format!(
            "deg f = {d} is divisible by p = {p}"
        )));
    }
    if !f.coeff(0).is_zero() {
        return Err(Error::FamilyConstraint("f(0) != 0".into()));
    }
    if let Some(i) = (1..=d).find(|i| i % p == 0 && !f.coeff(*i).is_zero()) {
        return Err(Error::FamilyConstraint(format!(
            "coefficient a_{i} must vanish since p | {i}"
        )));
    }
    Ok(d)
}

impl DirichletChar {
    /// `χ_f` for `f ∈ F_d`, a character modulo `x^{d+1}`.
    pub fn chi_poly(ring: &PolyRing, f: &Poly, psi: AdditiveChar) -> Result<Self> {
        psi_for(ring, &psi)?;
        let d = check_fd(ring, f)?;
        Ok(Self::poly_unchecked(ring, f, d, psi))
    }

    /// `χ_f` for any `f` with `f(0) = 0` and `deg f ≤ d`; modulus `x^{d+1}`.
    /// Used for group members of lower degree (and `f = 0`, the trivial character).
    pub fn poly_unchecked(ring: &PolyRing, f: &Poly, d: usize, psi: AdditiveChar) -> Self {
        DirichletChar {
            ring: ring.clone(),
            modulus: Poly::monomial(Fe::ONE, d + 1),
            psi,
            backend: Backend::PolyAs { f: f.clone() },
            degree_twist: 0,
            periodic: true,
        }
    }

    /// `χ_{h/g}` for `g` monic squarefree, `gcd(h,g) = 1`, `deg h < deg g`;
    /// a character modulo `g²`.
    pub fn chi_ord(ring: &PolyRing, f: &RationalFunction, psi: AdditiveChar) -> Result<Self> {
        psi_for(ring, &psi)?;
        let g = &f.den;
        if !g.is_monic() || !ring.is_squarefree(g) {
            return Err(Error::NotSquarefree);
        }
        if !f.num.is_zero() && !ring.gcd(&f.num, g)?.is_one() {
            return Err(Error::NotCoprime);
        }
        if f.num.degree() >= g.degree() {
            return Err(Error::FamilyConstraint("deg h must be < deg g".into()));
        }
        Ok(Self::ord_unchecked(ring, f, psi, true))
    }

    /// `χ_{h/g}` without the `deg h < deg g` restriction. For `deg h > deg g` the
    /// result is not periodic modulo `g²` (its conductor involves ∞).
    pub fn chi_ord_hecke(ring: &PolyRing, f: &RationalFunction, psi: AdditiveChar) -> Result<Self> {
        psi_for(ring, &psi)?;
        if !ring.is_squarefree(&f.den) {
            return Err(Error::NotSquarefree);
        }
        let periodic = f.num.degree() < f.den.degree();
        Ok(Self::ord_unchecked(ring, f, psi, periodic))
    }

    fn ord_unchecked(ring: &PolyRing, f: &RationalFunction, psi: AdditiveChar, periodic: bool) -> Self {
        DirichletChar {
            ring: ring.clone(),
            modulus: ring.mul(&f.den, &f.den),
            psi,
            backend: Backend::Ordinary { f: f.clone() },
            degree_twist: 0,
            periodic,
        }
    }

    /// `χ_{ax}`, zero on polynomials sharing a factor with `q_mod`.
    pub fn chi_linear_twist(ring: &PolyRing, a: Fe, q_mod: &Poly, psi: AdditiveChar) -> Result<Self> {
        psi_for(ring, &psi)?;
        if q_mod.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(DirichletChar {
            ring: ring.clone(),
            modulus: ring.monic(q_mod),
            psi,
            backend: Backend::LinearTwist { a },
            degree_twist: 0,
            periodic: a.is_zero(),
        })
    }

    /// Character given by its exponent table on residues mod `modulus`
    /// (indexed by [`PolyRing::to_index`], [`NON_UNIT`] on non-units).
    pub fn from_table(ring: &PolyRing, modulus: &Poly, table: Arc<Vec<u8>>, psi: AdditiveChar) -> Result<Self> {
        let n = modulus.deg().ok_or(Error::ZeroPolynomial)?;
        if ring.q_pow(n) != Some(table.len() as u64) {
            return Err(Error::ModulusMismatch);
        }
        Ok(DirichletChar {
            ring: ring.clone(),
            modulus: modulus.clone(),
            psi,
            backend: Backend::Table { table },
            degree_twist: 0,
            periodic: true,
        })
    }

    /// Pointwise product; modulus is the lcm.
    pub fn product(&self, other: &DirichletChar) -> Result<Self> {
        if self.psi.p() != other.psi.p() {
            return Err(Error::ModulusMismatch);
        }
        let r = &self.ring;
        let g = r.gcd(&self.modulus, &other.modulus)?;
        let modulus = r.div_exact(&r.mul(&self.modulus, &other.modulus), &g).unwrap();
        let mut parts = Vec::new();
        for c in [self, other] {
            match &c.backend {
                Backend::Product(v) if c.degree_twist == 0 => parts.extend(v.iter().cloned()),
                _ => parts.push(c.clone()),
            }
        }
        Ok(DirichletChar {
            ring: r.clone(),
            modulus,
            psi: self.psi,
            backend: Backend::Product(parts),
            degree_twist: 0,
            periodic: self.is_periodic() && other.is_periodic(),
        })
    }

    /// `c ↦ χ(c) ζ^{t·deg c}`; `L(u, χ') = L(ζ^t u, χ)`.
    pub fn twist_by_degree(&self, t: u32) -> Self {
        let mut c = self.clone();
        c.degree_twist = (c.degree_twist + t) % self.psi.p();
        c
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }
    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }
    pub fn psi(&self) -> AdditiveChar {
        self.psi
    }
    pub fn backend(&self) -> &Backend {
        &self.backend
    }
    /// Values depend only on the residue mod the modulus.
    pub fn is_periodic(&self) -> bool {
        self.periodic && self.degree_twist == 0
    }

    /// The character with its degree twist removed.
    pub fn untwisted(&self) -> DirichletChar {
        let mut c = self.clone();
        c.degree_twist = 0;
        c
    }
    pub fn degree_twist(&self) -> u32 {
        self.degree_twist
    }
    pub fn p(&self) -> u32 {
        self.psi.p()
    }

    fn is_unit(&self, c: &Poly) -> bool {
        if c.is_zero() {
            return false;
        }
        match &self.backend {
            Backend::PolyAs { .. } => !c.coeff(0).is_zero(),
            Backend::Ordinary { f } => self.ring.gcd(c, &f.den).is_ok_and(|g| g.is_one()),
            _ => self.ring.gcd(c, &self.modulus).is_ok_and(|g| g.is_one()),
        }
    }

    /// Exponent `k` with `χ(c) = ζ^k`, or `None` when `χ(c) = 0`.
    pub fn exponent(&self, c: &Poly) -> Option<u32> {
        let p = self.psi.p();
        let base = match &self.backend {
            Backend::Product(parts) => {
                let mut s = 0;
                for part in parts {
                    s += part.exponent(c)?;
                }
                s % p
            }
            Backend::Table { table } => {
                let v = table[self.ring.residue_index(c, &self.modulus) as usize];
                if v == NON_UNIT {
                    return None;
                }
                v as u32
            }
            _ => {
                if !self.is_unit(c) {
                    return None;
                }
                let s = self.root_sum(c);
                self.psi.exponent(self.ring.field().trace(s))
            }
        };
        let deg = c.deg().unwrap_or(0) as u64;
        Some(((base as u64 + self.degree_twist as u64 * deg) % p as u64) as u32)
    }

    /// `Σ f(α)` over the appropriate root multiset, for a unit `c`.
    fn root_sum(&self, c: &Poly) -> Fe {
        let r = &self.ring;
        let f = r.field();
        match &self.backend {
            Backend::PolyAs { f: poly } => {
                let d = poly.deg().unwrap_or(0);
                if d == 0 || c.is_constant() {
                    return Fe::ZERO;
                }
                let pj = r.inverse_root_power_sums(c, d).expect("unit has c(0) != 0");
                poly.coeffs()
                    .iter()
                    .enumerate()
                    .skip(1)
                    .fold(Fe::ZERO, |acc, (j, &a)| f.add(acc, f.mul(a, pj[j - 1])))
            }
            Backend::Ordinary { f: u } => r.sum_over_roots(u, c).expect("unit is coprime to g"),
            Backend::LinearTwist { a } => match c.deg() {
                Some(n) if n >= 1 => {
                    let s = f.neg(f.div(c.coeff(n - 1), c.lc()));
                    f.mul(*a, s)
                }
                _ => Fe::ZERO,
            },
            _ => unreachable!(),
        }
    }

    pub fn evaluate(&self, c: &Poly) -> CyclotomicInt {
        match self.exponent(c) {
            Some(k) => CyclotomicInt::zeta_pow(self.psi.p(), k as i64),
            None => CyclotomicInt::zero(self.psi.p()),
        }
    }

    /// Exponent table on all residues mod the modulus.
    pub fn value_table(&self) -> Result<Vec<u8>> {
        if !self.is_periodic() {
            return Err(Error::NotPeriodic);
        }
        if let Backend::Table { table } = &self.backend {
            return Ok(table.as_ref().clone());
        }
        let n = self.modulus.deg().ok_or(Error::ZeroPolynomial)?;
        Ok(self
            .ring
            .polys_below(n)
            .map(|c| self.exponent(&c).map_or(NON_UNIT, |k| k as u8))
            .collect())
    }

    /// `χ(a) = 1` for every unit `a ≡ 1 (mod q1)`; `q1 | modulus`.
    pub fn has_period(&self, q1: &Poly) -> Result<bool> {
        if !self.is_periodic() {
            return Err(Error::NotPeriodic);
        }
        let r = &self.ring;
        if !r.divides(q1, &self.modulus) {
            return Err(Error::ModulusMismatch);
        }
        let free = self.modulus.deg().unwrap() - q1.deg().unwrap();
        for t in r.polys_below(free) {
            let a = r.add(&Poly::one(), &r.mul(q1, &t));
            if let Some(k) = self.exponent(&a) {
                if k != 0 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// No period `Q/P` for any prime `P | Q`.
    pub fn is_primitive(&self) -> Result<bool> {
        let r = &self.ring;
        if self.modulus.deg().unwrap_or(0) == 0 {
            return Ok(true);
        }
        for (pr, _) in r.factor(&self.modulus)? {
            let q1 = r.div_exact(&self.modulus, &pr).unwrap();
            if self.has_period(&q1)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_trivial(&self) -> Result<bool> {
        Ok(self.value_table()?.iter().all(|&v| v == 0 || v == NON_UNIT))
    }

    /// Values lie in `μ_p`, so the order is 1 or `p`.
    pub fn character_order(&self) -> Result<u32> {
        Ok(if self.is_trivial()? { 1 } else { self.psi.p() })
    }

    pub fn parity(&self) -> Parity {
        let f = self.ring.field();
        if f.nonzero_elements()
            .all(|a| self.exponent(&Poly::constant(a)) == Some(0))
        {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// `A_r = Σ_{F monic, deg F = r} χ(F)` for `r = 0..=max_deg`.
    pub fn l_series(&self, max_deg: usize) -> Vec<CyclotomicInt> {
        let p = self.psi.p();
        (0..=max_deg)
            .map(|r| {
                let mut counts = vec![0i64; p as usize];
                for c in self.ring.monics(r) {
                    if let Some(k) = self.exponent(&c) {
                        counts[k as usize] += 1;
                    }
                }
                CyclotomicInt::from_exponent_counts(p, &counts)
            })
            .collect()
    }

    /// `L(u, χ) = Σ_{r < deg Q} A_r u^r` for a non-trivial periodic character
    /// (a degree twist is allowed: it only rotates `u`).
    pub fn l_function_of_char(&self) -> Result<LPoly> {
        if !self.periodic {
            return Err(Error::NotPeriodic);
        }
        if self.untwisted().is_trivial()? {
            return Err(Error::TrivialCharacter);
        }
        let m = self.modulus.deg().unwrap();
        LPoly::new(self.psi.p(), self.l_series(m - 1), Side::Character)
    }

    /// Exact `Σ_{deg c = r} Λ(c) χ(c)` over monic prime powers.
    pub fn lambda_sum(&self, r: usize) -> Result<CyclotomicInt> {
        let p = self.psi.p();
        let mut counts = vec![0i64; p as usize];
        for (c, l) in self.ring.prime_powers(r)?.iter() {
            if let Some(k) = self.exponent(c) {
                counts[k as usize] += *l as i64;
            }
        }
        Ok(CyclotomicInt::from_exponent_counts_big(
            p,
            counts.into_iter().map(BigInt::from).collect(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_field;

    fn setup() -> (PolyRing, AdditiveChar) {
        (
            PolyRing::new(make_field(3, 1).unwrap()),
            AdditiveChar::new(3, 1).unwrap(),
        )
    }

    #[test]
    fn chi_poly_examples() {
        let (r, psi) = setup();
        let chi = DirichletChar::chi_poly(&r, &Poly::x(), psi).unwrap();
        assert_eq!(chi.exponent(&r.from_ints(&[2, 1])), Some(1));
        assert_eq!(chi.exponent(&Poly::one()), Some(0));
        assert_eq!(chi.exponent(&Poly::x()), None);
        let bad = r.from_ints(&[0, 1, 0, 1]);
        assert!(matches!(
            DirichletChar::chi_poly(&r, &bad, psi),
            Err(Error::FamilyConstraint(_))
        ));
    }

    #[test]
    fn chi_ord_examples() {
        let (r, psi) = setup();
        let f = r.rational(&Poly::one(), &Poly::x()).unwrap();
        let chi = DirichletChar::chi_ord(&r, &f, psi).unwrap();
        assert_eq!(chi.exponent(&r.from_ints(&[1, 1])), Some(2));
        assert_eq!(chi.exponent(&Poly::x()), None);
        let g = r.from_ints(&[0, 0, 1]);
        let sq = RationalFunction {
            num: Poly::one(),
            den: g,
        };
        assert!(matches!(
            DirichletChar::chi_ord(&r, &sq, psi),
            Err(Error::NotSquarefree)
        ));
    }

    #[test]
    fn linear_twist_examples() {
        let (r, psi) = setup();
        let q = Poly::one();
        let triv = DirichletChar::chi_linear_twist(&r, Fe::ZERO, &q, psi).unwrap();
        assert!(r.monics(2).all(|c| triv.exponent(&c) == Some(0)));
        let chi = DirichletChar::chi_linear_twist(&r, Fe::ONE, &q, psi).unwrap();
        assert_eq!(chi.exponent(&r.from_ints(&[2, 1])), Some(1));
    }

    #[test]
    fn conventions_agree_on_linear_moduli() {
        // For c = x − β, inverse root is β^{-1}... so χ_poly(f)(c) uses f(1/β)
        // while χ_ord(u)(c) uses u(β); they match when u(x) = f(1/x).
        let (r, psi) = setup();
        let f = r.from_ints(&[0, 1, 1]);
        let chi_p = DirichletChar::poly_unchecked(&r, &f, 2, psi);
        // f(1/x) = (x + 1)/x^2 — not a squarefree denominator, use hecke variant on x
        // by checking the values directly instead.
        for beta in r.field().nonzero_elements() {
            let fl = r.field();
            let c = Poly::new(vec![fl.neg(beta), Fe::ONE]);
            let inv = fl.inv(beta);
            let want = psi.exponent(fl.trace(r.eval(&f, inv)));
            assert_eq!(chi_p.exponent(&c), Some(want));
        }
    }

    #[test]
    fn multiplicativity_exhaustive() {
        let (r, psi) = setup();
        let g = r.from_ints(&[0, 1, 1]);
        let chars = vec![
            DirichletChar::chi_poly(&r, &r.from_ints(&[0, 1, 1]), psi).unwrap(),
            DirichletChar::chi_ord(&r, &r.rational(&r.from_ints(&[1, 1]), &g).unwrap(), psi).unwrap(),
            DirichletChar::chi_linear_twist(&r, Fe(2), &g, psi).unwrap(),
        ];
        let polys: Vec<Poly> = r.polys_below(4).filter(|c| !c.is_zero()).collect();
        for chi in &chars {
            for a in polys.iter().step_by(3) {
                for b in polys.iter().step_by(5) {
                    let ab = chi.exponent(&r.mul(a, b));
                    let sep = match (chi.exponent(a), chi.exponent(b)) {
                        (Some(x), Some(y)) => Some((x + y) % 3),
                        _ => None,
                    };
                    assert_eq!(ab, sep);
                }
            }
        }
    }

    #[test]
    fn a1_of_chi_x_squared() {
        let (r, psi) = setup();
        let chi = DirichletChar::chi_poly(&r, &r.from_ints(&[0, 0, 1]), psi).unwrap();
        let a = chi.l_series(1);
        assert!(a[0].is_one());
        assert_eq!(a[1], CyclotomicInt::zeta_pow(3, 1).scale(&BigInt::from(2)));
    }

    #[test]
    fn fd_characters_primitive_order_p_even() {
        let (r, psi) = setup();
        let mut n = 0;
        for a1 in 0..3 {
            for a2 in 1..3 {
                let f = r.from_ints(&[0, a1, a2]);
                let chi = DirichletChar::chi_poly(&r, &f, psi).unwrap();
                assert!(chi.is_primitive().unwrap());
                assert_eq!(chi.character_order().unwrap(), 3);
                assert_eq!(chi.parity(), Parity::Even);
                n += 1;
            }
        }
        assert_eq!(n, 6);
    }

    #[test]
    fn periodicity_of_ordinary_character_mod_g2() {
        let (r, psi) = setup();
        let g = r.from_ints(&[0, 2, 0, 1]); // x^3 + 2x = x(x+1)(x+2)
        let chi = DirichletChar::chi_ord(&r, &r.rational(&r.from_ints(&[1, 0, 1]), &g).unwrap(), psi).unwrap();
        let g2 = chi.modulus().clone();
        for c in r.monics(3) {
            for t in r.polys_below(1).skip(1) {
                let c2 = r.add(&c, &r.mul(&g2, &t));
                assert_eq!(chi.exponent(&c), chi.exponent(&c2));
            }
        }
        // shifting by g alone changes values in general
        assert!(chi.is_primitive().unwrap());
    }

    #[test]
    fn induced_table_character_not_primitive() {
        let (r, psi) = setup();
        let chi = DirichletChar::chi_poly(&r, &r.from_ints(&[0, 1]), psi).unwrap(); // mod x^2
        // view it mod x^3 via its table
        let q3 = Poly::monomial(Fe::ONE, 3);
        let table: Vec<u8> = r
            .polys_below(3)
            .map(|c| chi.exponent(&c).map_or(NON_UNIT, |k| k as u8))
            .collect();
        let t = DirichletChar::from_table(&r, &q3, Arc::new(table), psi).unwrap();
        assert!(!t.is_primitive().unwrap());
        assert!(chi.is_primitive().unwrap());
        let triv = DirichletChar::poly_unchecked(&r, &Poly::zero(), 2, psi);
        assert_eq!(triv.character_order().unwrap(), 1);
        assert!(matches!(triv.l_function_of_char(), Err(Error::TrivialCharacter)));
    }
}
