use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::algebra::{Fe, Poly, PolyRing, RationalFunction};
use crate::error::{Error, Result};

/// Default cap on materialized family sizes.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 10_000_000;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    /// `AS_d^ord`: every monic squarefree `g` of degree `d` or `d − 1`.
    OrdinaryFull,
    /// `AS_{d,g}^ord` for a fixed denominator.
    OrdinaryFixedG,
    /// `H_g = {h/g : deg h < deg g, (h, g) = 1}`.
    OrdinaryHg,
    /// `H_g^a = {f + ax : f ∈ H_g}`.
    OrdinaryHgTwist,
    /// `AS_d^0`.
    PolynomialAs0,
    /// `F_d = {f ∈ AS_d^0 : f(0) = 0}`.
    PolynomialFd,
    /// `AS_d^{0,odd}`.
    OddPolynomial,
}

impl FamilyKind {
    pub fn is_ordinary(self) -> bool {
        matches!(
            self,
            FamilyKind::OrdinaryFull
                | FamilyKind::OrdinaryFixedG
                | FamilyKind::OrdinaryHg
                | FamilyKind::OrdinaryHgTwist
        )
    }
}

/// A rational function defining `y^p − y = f`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AsFunction {
    Poly(Poly),
    Rational(RationalFunction),
}

impl fmt::Display for AsFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AsFunction::Poly(p) => write!(f, "{p:?}"),
            AsFunction::Rational(r) => write!(f, "({:?})/({:?})", r.num, r.den),
        }
    }
}

impl AsFunction {
    /// Degree of the polar divisor, when all finite poles are simple and the
    /// pole at ∞ (if any) too; polynomials may have any order at ∞.
    pub fn polar_degree(&self) -> Option<usize> {
        match self {
            AsFunction::Poly(p) => p.deg(),
            AsFunction::Rational(r) => {
                let dg = r.den.deg()?;
                let dh = r.num.deg().unwrap_or(0);
                Some(dg + dh.saturating_sub(dg))
            }
        }
    }

    /// `f(∞)` when finite.
    pub fn value_at_infinity(&self, ring: &PolyRing) -> Option<Fe> {
        match self {
            AsFunction::Poly(p) => {
                if p.deg().unwrap_or(0) == 0 {
                    Some(p.coeff(0))
                } else {
                    None
                }
            }
            AsFunction::Rational(r) => {
                let dg = r.den.deg().unwrap();
                match r.num.deg() {
                    None => Some(Fe::ZERO),
                    Some(dh) if dh < dg => Some(Fe::ZERO),
                    Some(dh) if dh == dg => Some(ring.field().div(r.num.lc(), r.den.lc())),
                    _ => None,
                }
            }
        }
    }

    /// `f + b`.
    pub fn add_const(&self, ring: &PolyRing, b: Fe) -> AsFunction {
        match self {
            AsFunction::Poly(p) => AsFunction::Poly(ring.add(p, &Poly::constant(b))),
            AsFunction::Rational(r) => AsFunction::Rational(ring.rational_add_const(r, b)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FamilyDescriptor {
    pub kind: FamilyKind,
    pub d: usize,
    pub g: Option<Poly>,
    pub a: Option<Fe>,
}

impl FamilyDescriptor {
    pub fn polynomial_fd(d: usize) -> Self {
        FamilyDescriptor { kind: FamilyKind::PolynomialFd, d, g: None, a: None }
    }
    pub fn polynomial_as0(d: usize) -> Self {
        FamilyDescriptor { kind: FamilyKind::PolynomialAs0, d, g: None, a: None }
    }
    pub fn odd(d: usize) -> Self {
        FamilyDescriptor { kind: FamilyKind::OddPolynomial, d, g: None, a: None }
    }
    pub fn hg(g: Poly) -> Self {
        let d = g.deg().unwrap_or(0);
        FamilyDescriptor { kind: FamilyKind::OrdinaryHg, d, g: Some(g), a: None }
    }
    pub fn hg_twist(g: Poly, a: Fe) -> Self {
        let d = g.deg().unwrap_or(0) + 1;
        FamilyDescriptor { kind: FamilyKind::OrdinaryHgTwist, d, g: Some(g), a: Some(a) }
    }
    pub fn fixed_g(d: usize, g: Poly) -> Self {
        FamilyDescriptor { kind: FamilyKind::OrdinaryFixedG, d, g: Some(g), a: None }
    }
    pub fn ordinary_full(d: usize) -> Self {
        FamilyDescriptor { kind: FamilyKind::OrdinaryFull, d, g: None, a: None }
    }

    /// Checks the parameter constraints of the kind.
    pub fn validate(&self, ring: &PolyRing) -> Result<()> {
        let p = ring.p() as usize;
        let bad = |m: String| Err(Error::FamilyConstraint(m));
        if self.d == 0 {
            return bad("d must be at least 1".into());
        }
        match self.kind {
            FamilyKind::PolynomialAs0 | FamilyKind::PolynomialFd => {
                if self.d % p == 0 {
                    return bad(format!("polynomial families need gcd(d, p) = 1, got d = {}", self.d));
                }
            }
            FamilyKind::OddPolynomial => {
                if self.d % p == 0 || self.d % 2 == 0 {
                    return bad(format!("odd family needs gcd(d, 2p) = 1, got d = {}", self.d));
                }
            }
            FamilyKind::OrdinaryFull => {}
            _ => {
                let g = self.g.as_ref().ok_or_else(|| Error::FamilyConstraint("missing g".into()))?;
                if !g.is_monic() || !ring.is_squarefree(g) {
                    return bad("g must be monic squarefree".into());
                }
                let dg = g.deg().unwrap();
                let ok = match self.kind {
                    FamilyKind::OrdinaryHg => dg == self.d && dg >= 1,
                    FamilyKind::OrdinaryHgTwist => dg + 1 == self.d,
                    _ => dg == self.d || dg + 1 == self.d,
                };
                if !ok {
                    return bad(format!("deg g = {dg} does not fit d = {}", self.d));
                }
                if self.kind == FamilyKind::OrdinaryHgTwist && self.a.is_none() {
                    return bad("missing twist parameter a".into());
                }
            }
        }
        Ok(())
    }

    fn poly_indices(&self, p: usize) -> Vec<usize> {
        let odd = self.kind == FamilyKind::OddPolynomial;
        (1..self.d).filter(|i| i % p != 0 && (!odd || i % 2 == 1)).collect()
    }

    /// Closed-form family size.
    pub fn count(&self, ring: &PolyRing) -> Result<u128> {
        self.validate(ring)?;
        let q = ring.q() as u128;
        let p = ring.p() as usize;
        let phi = |g: &Poly| -> Result<u128> {
            ring.euler_phi(g)?
                .to_u128()
                .ok_or(Error::BudgetExceeded { limit: u64::MAX, needed: u128::MAX })
        };
        Ok(match self.kind {
            FamilyKind::PolynomialFd | FamilyKind::OddPolynomial => {
                (q - 1) * q.pow(self.poly_indices(p).len() as u32)
            }
            FamilyKind::PolynomialAs0 => q * (q - 1) * q.pow(self.poly_indices(p).len() as u32),
            FamilyKind::OrdinaryHg | FamilyKind::OrdinaryHgTwist => phi(self.g.as_ref().unwrap())?,
            FamilyKind::OrdinaryFixedG => {
                let g = self.g.as_ref().unwrap();
                if g.deg() == Some(self.d) {
                    q * phi(g)?
                } else {
                    (q - 1) * q * phi(g)?
                }
            }
            FamilyKind::OrdinaryFull => {
                let mut total = 0u128;
                for dg in [self.d - 1, self.d] {
                    for g in squarefree_monics(ring, dg) {
                        total += FamilyDescriptor::fixed_g(self.d, g).count(ring)?;
                    }
                }
                total
            }
        })
    }

    /// All members in increasing order; errors if the family exceeds `budget`.
    pub fn enumerate(&self, ring: &PolyRing, budget: u64) -> Result<Vec<AsFunction>> {
        let n = self.count(ring)?;
        if n > budget as u128 {
            return Err(Error::BudgetExceeded { limit: budget, needed: n });
        }
        let out = match self.kind {
            FamilyKind::PolynomialFd | FamilyKind::OddPolynomial => self
                .fd_like(ring)
                .into_iter()
                .map(AsFunction::Poly)
                .collect(),
            FamilyKind::PolynomialAs0 => {
                let mut v: Vec<Poly> = Vec::new();
                for f in self.fd_like(ring) {
                    for b in ring.field().elements() {
                        v.push(ring.add(&f, &Poly::constant(b)));
                    }
                }
                v.sort();
                v.into_iter().map(AsFunction::Poly).collect()
            }
            FamilyKind::OrdinaryHg => hg_members(ring, self.g.as_ref().unwrap(), None),
            FamilyKind::OrdinaryHgTwist => hg_members(ring, self.g.as_ref().unwrap(), self.a),
            FamilyKind::OrdinaryFixedG => fixed_g_members(ring, self.d, self.g.as_ref().unwrap()),
            FamilyKind::OrdinaryFull => {
                let mut v = Vec::new();
                for dg in [self.d - 1, self.d] {
                    for g in squarefree_monics(ring, dg) {
                        v.extend(fixed_g_members(ring, self.d, &g));
                    }
                }
                v
            }
        };
        debug_assert_eq!(out.len() as u128, n);
        Ok(out)
    }

    /// Members of `F_d` (or the odd family), sorted.
    fn fd_like(&self, ring: &PolyRing) -> Vec<Poly> {
        let idx = self.poly_indices(ring.p() as usize);
        let q = ring.q() as u64;
        let free = q.pow(idx.len() as u32);
        let mut out = Vec::new();
        for top in ring.field().nonzero_elements() {
            for n in 0..free {
                let mut c = vec![Fe::ZERO; self.d + 1];
                c[self.d] = top;
                let mut m = n;
                for &i in &idx {
                    c[i] = Fe((m % q) as u32);
                    m /= q;
                }
                out.push(Poly::new(c));
            }
        }
        out.sort();
        out
    }
}

/// Monic squarefree polynomials of degree `n`, sorted.
pub fn squarefree_monics(ring: &PolyRing, n: usize) -> Vec<Poly> {
    let mut v: Vec<Poly> = ring.monics(n).filter(|g| ring.is_squarefree(g)).collect();
    v.sort();
    v
}

fn coprime(ring: &PolyRing, h: &Poly, g: &Poly) -> bool {
    if h.is_zero() {
        return g.deg() == Some(0);
    }
    ring.gcd(h, g).is_ok_and(|c| c.is_one())
}

fn hg_members(ring: &PolyRing, g: &Poly, a: Option<Fe>) -> Vec<AsFunction> {
    let n = g.deg().unwrap();
    let mut hs: Vec<Poly> = ring.polys_below(n).filter(|h| coprime(ring, h, g)).collect();
    hs.sort();
    hs.into_iter()
        .map(|h| {
            let num = match a {
                Some(a) => ring.add(&h, &ring.scale(a, &ring.shift(g, 1))),
                None => h,
            };
            AsFunction::Rational(RationalFunction { num, den: g.clone() })
        })
        .collect()
}

fn fixed_g_members(ring: &PolyRing, d: usize, g: &Poly) -> Vec<AsFunction> {
    let dg = g.deg().unwrap();
    let mut hs: Vec<Poly> = ring
        .polys_below(d + 1)
        .filter(|h| (dg == d || h.deg() == Some(d)) && coprime(ring, h, g))
        .collect();
    hs.sort();
    hs.into_iter()
        .map(|num| AsFunction::Rational(RationalFunction { num, den: g.clone() }))
        .collect()
}
