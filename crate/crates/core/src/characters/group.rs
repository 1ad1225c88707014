//! Groups of order-`p` characters as exponent tables, and residue subsets of
//! `(F_q[x]/Q)^×`.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use super::{DirichletChar, NON_UNIT};
use crate::algebra::{AdditiveChar, Fe, Poly, PolyRing};
use crate::error::{Error, Result};

fn residue_count(ring: &PolyRing, q_mod: &Poly) -> Result<usize> {
    let n = q_mod.deg().ok_or(Error::ZeroPolynomial)?;
    ring.q_pow(n)
        .filter(|&v| v <= 1 << 26)
        .map(|v| v as usize)
        .ok_or(Error::BudgetExceeded {
            limit: 1 << 26,
            needed: (ring.q() as u128).pow(n as u32),
        })
}

fn unit_mask(ring: &PolyRing, q_mod: &Poly) -> Result<Vec<bool>> {
    let n = q_mod.deg().ok_or(Error::ZeroPolynomial)?;
    residue_count(ring, q_mod)?;
    Ok(ring
        .polys_below(n)
        .map(|c| !c.is_zero() && ring.gcd(&c, q_mod).is_ok_and(|g| g.is_one()))
        .collect())
}

/// A subset of residues modulo `Q`, as a bitmap over [`PolyRing::to_index`].
#[derive(Clone, Debug)]
pub struct ResidueSet {
    ring: PolyRing,
    modulus: Poly,
    bits: Arc<Vec<bool>>,
}

impl PartialEq for ResidueSet {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.bits == other.bits
    }
}

impl ResidueSet {
    pub fn from_bits(ring: &PolyRing, modulus: &Poly, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != residue_count(ring, modulus)? {
            return Err(Error::ModulusMismatch);
        }
        Ok(ResidueSet {
            ring: ring.clone(),
            modulus: modulus.clone(),
            bits: Arc::new(bits),
        })
    }

    /// Units `a` mod `Q` satisfying `pred`.
    pub fn units_where(ring: &PolyRing, modulus: &Poly, mut pred: impl FnMut(&Poly) -> bool) -> Result<Self> {
        let n = modulus.deg().ok_or(Error::ZeroPolynomial)?;
        let mask = unit_mask(ring, modulus)?;
        let bits = ring
            .polys_below(n)
            .zip(mask)
            .map(|(c, u)| u && pred(&c))
            .collect();
        Self::from_bits(ring, modulus, bits)
    }

    pub fn all_units(ring: &PolyRing, modulus: &Poly) -> Result<Self> {
        Self::units_where(ring, modulus, |_| true)
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn contains(&self, c: &Poly) -> bool {
        self.bits[self.ring.residue_index(c, &self.modulus) as usize]
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i)
    }

    pub fn elements(&self) -> Vec<Poly> {
        self.indices().map(|i| self.ring.from_index(i as u64)).collect()
    }

    /// The product set `{ab}`.
    pub fn product(&self, other: &ResidueSet) -> Result<ResidueSet> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch);
        }
        let r = &self.ring;
        let mut bits = vec![false; self.bits.len()];
        let b: Vec<Poly> = other.elements();
        for a in self.elements() {
            for y in &b {
                bits[r.residue_index(&r.mul(&a, y), &self.modulus) as usize] = true;
            }
        }
        Self::from_bits(r, &self.modulus, bits)
    }
}

/// Image of `a ↦ a^p` on `(F_q[x]/Q)^×`; memoized per ring.
pub fn pth_power_residues(ring: &PolyRing, q_mod: &Poly) -> Result<ResidueSet> {
    let n = q_mod.deg().ok_or(Error::ZeroPolynomial)?;
    if n == 0 {
        return Err(Error::InvalidParameter("modulus must have degree ≥ 1".into()));
    }
    let mask = unit_mask(ring, q_mod)?;
    let p = ring.p() as u64;
    let bits = ring.memo_pth_powers(q_mod, || {
        let mut bits = vec![false; mask.len()];
        for (c, _) in ring.polys_below(n).zip(&mask).filter(|(_, u)| **u) {
            let cp = ring.powmod(&c, p, q_mod);
            bits[ring.to_index(&cp) as usize] = true;
        }
        bits
    });
    Ok(ResidueSet {
        ring: ring.clone(),
        modulus: q_mod.clone(),
        bits,
    })
}

/// A group of characters of order dividing `p` modulo `Q`, stored as sorted
/// exponent tables.
#[derive(Clone, Debug)]
pub struct CharGroup {
    ring: PolyRing,
    modulus: Poly,
    psi: AdditiveChar,
    tables: Vec<Arc<Vec<u8>>>,
}

fn add_tables(a: &[u8], b: &[u8], k: u8, p: u8) -> Vec<u8> {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            if x == NON_UNIT {
                NON_UNIT
            } else {
                ((x as u32 + k as u32 * y as u32) % p as u32) as u8
            }
        })
        .collect()
}

impl CharGroup {
    /// The subgroup generated by `gens` (each of modulus dividing `Q`).
    pub fn span(ring: &PolyRing, q_mod: &Poly, psi: AdditiveChar, gens: &[DirichletChar]) -> Result<Self> {
        let mask = unit_mask(ring, q_mod)?;
        let n = q_mod.deg().unwrap();
        let mut gen_tables = Vec::new();
        for g in gens {
            if !ring.divides(g.modulus(), q_mod) || g.psi().p() != psi.p() {
                return Err(Error::ModulusMismatch);
            }
            let mut t = Vec::with_capacity(mask.len());
            for (c, &u) in ring.polys_below(n).zip(&mask) {
                t.push(if u {
                    g.exponent(&c).ok_or(Error::ModulusMismatch)? as u8
                } else {
                    NON_UNIT
                });
            }
            gen_tables.push(t);
        }
        let trivial: Vec<u8> = mask.iter().map(|&u| if u { 0 } else { NON_UNIT }).collect();
        Ok(Self::close(ring, q_mod, psi, trivial, &gen_tables))
    }

    fn close(ring: &PolyRing, q_mod: &Poly, psi: AdditiveChar, trivial: Vec<u8>, gens: &[Vec<u8>]) -> Self {
        let p = psi.p() as u8;
        let mut set: BTreeSet<Vec<u8>> = BTreeSet::new();
        set.insert(trivial);
        for g in gens {
            if set.contains(g) {
                continue;
            }
            let cur: Vec<Vec<u8>> = set.iter().cloned().collect();
            for s in &cur {
                for k in 1..p {
                    set.insert(add_tables(s, g, k, p));
                }
            }
        }
        CharGroup {
            ring: ring.clone(),
            modulus: q_mod.clone(),
            psi,
            tables: set.into_iter().map(Arc::new).collect(),
        }
    }

    /// Every character of order dividing `p` modulo `Q`.
    ///
    /// These are the linear forms on `G/G^p`, `G = (F_q[x]/Q)^×`; a basis of
    /// `G/G^p` is chosen greedily and each unit gets its coordinate vector.
    pub fn all_order_p(ring: &PolyRing, q_mod: &Poly, psi: AdditiveChar) -> Result<Self> {
        let p = psi.p() as usize;
        let mask = unit_mask(ring, q_mod)?;
        let powers = pth_power_residues(ring, q_mod)?;
        // coordinate vectors for the span discovered so far
        let mut coord: HashMap<usize, Vec<u8>> = powers.indices().map(|i| (i, Vec::new())).collect();
        let mut basis: Vec<Poly> = Vec::new();
        let total = mask.iter().filter(|u| **u).count();
        while coord.len() < total {
            let next = (0..mask.len())
                .find(|i| mask[*i] && !coord.contains_key(i))
                .unwrap();
            let u = ring.from_index(next as u64);
            let old: Vec<(usize, Vec<u8>)> = coord.drain().collect();
            let mut upow = Poly::one();
            for e in 0..p {
                for (i, v) in &old {
                    let prod = ring.mulmod(&ring.from_index(*i as u64), &upow, q_mod);
                    let mut w = v.clone();
                    w.resize(basis.len(), 0);
                    w.push(e as u8);
                    coord.insert(ring.to_index(&prod) as usize, w);
                }
                upow = ring.mulmod(&upow, &u, q_mod);
            }
            basis.push(u);
        }
        let rank = basis.len();
        let pw = p.checked_pow(rank as u32).filter(|&v| v <= 1 << 20).ok_or(Error::BudgetExceeded {
            limit: 1 << 20,
            needed: (p as u128).pow(rank as u32),
        })?;
        let trivial: Vec<u8> = mask.iter().map(|&u| if u { 0 } else { NON_UNIT }).collect();
        let mut tables = Vec::with_capacity(pw);
        for idx in 0..pw {
            let mut a = Vec::with_capacity(rank);
            let mut t = idx;
            for _ in 0..rank {
                a.push(t % p);
                t /= p;
            }
            let mut tab = trivial.clone();
            for (i, v) in &coord {
                let mut s = 0usize;
                for (j, &e) in v.iter().enumerate() {
                    s += a[j] * e as usize;
                }
                tab[*i] = (s % p) as u8;
            }
            tables.push(tab);
        }
        tables.sort();
        Ok(CharGroup {
            ring: ring.clone(),
            modulus: q_mod.clone(),
            psi,
            tables: tables.into_iter().map(Arc::new).collect(),
        })
    }

    /// `{χ_f : f ∈ span{x^i : 1 ≤ i ≤ d, p ∤ i}}` modulo `x^{d+1}`.
    pub fn polynomial_family(ring: &PolyRing, d: usize, psi: AdditiveChar) -> Result<Self> {
        let p = ring.p() as usize;
        Self::monomial_span(ring, d, psi, |i| i % p != 0)
    }

    fn monomial_span(ring: &PolyRing, d: usize, psi: AdditiveChar, keep: impl Fn(usize) -> bool) -> Result<Self> {
        let q_mod = Poly::monomial(Fe::ONE, d + 1);
        let f = ring.field();
        // F_p-basis of F_q times x^i
        let basis: Vec<Fe> = (0..f.k())
            .map(|j| {
                let mut c = vec![0u32; f.k() as usize];
                c[j as usize] = 1;
                f.from_coeffs(&c)
            })
            .collect();
        let gens: Vec<DirichletChar> = (1..=d)
            .filter(|&i| keep(i))
            .flat_map(|i| basis.iter().map(move |&b| (i, b)))
            .map(|(i, b)| DirichletChar::poly_unchecked(ring, &Poly::monomial(b, i), d, psi))
            .collect();
        Self::span(ring, &q_mod, psi, &gens)
    }

    /// `{χ_{h/g} : deg h < deg g}` modulo `g²`, `g` monic squarefree.
    pub fn ordinary_family(ring: &PolyRing, g: &Poly, psi: AdditiveChar) -> Result<Self> {
        if !g.is_monic() || !ring.is_squarefree(g) {
            return Err(Error::NotSquarefree);
        }
        let n = g.deg().unwrap();
        let f = ring.field();
        let mut gens = Vec::new();
        for i in 0..n {
            for j in 0..f.k() {
                let mut c = vec![0u32; f.k() as usize];
                c[j as usize] = 1;
                let h = Poly::monomial(f.from_coeffs(&c), i);
                let u = crate::algebra::RationalFunction { num: h, den: g.clone() };
                gens.push(DirichletChar::chi_ord_hecke(ring, &u, psi)?);
            }
        }
        Self::span(ring, &ring.mul(g, g), psi, &gens)
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
    pub fn len(&self) -> usize {
        self.tables.len()
    }
    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }
    pub fn tables(&self) -> &[Arc<Vec<u8>>] {
        &self.tables
    }

    pub fn contains_table(&self, t: &[u8]) -> bool {
        self.tables.binary_search_by(|x| x.as_slice().cmp(t)).is_ok()
    }

    pub fn member(&self, i: usize) -> DirichletChar {
        DirichletChar::from_table(&self.ring, &self.modulus, self.tables[i].clone(), self.psi)
            .expect("table sized to modulus")
    }

    pub fn members(&self) -> Vec<DirichletChar> {
        (0..self.len()).map(|i| self.member(i)).collect()
    }

    pub fn contains_trivial(&self) -> bool {
        self.tables.iter().any(|t| t.iter().all(|&v| v == 0 || v == NON_UNIT))
    }

    /// Closed under products (inverses follow for finite groups).
    pub fn is_closed(&self) -> bool {
        let p = self.psi.p() as u8;
        self.tables.iter().all(|a| {
            self.tables
                .iter()
                .all(|b| self.contains_table(&add_tables(a, b, 1, p)))
        })
    }

    /// Indices of unit residues `≡ 1 (mod q1)`.
    fn kernel_indices(&self, q1: &Poly) -> Vec<usize> {
        let r = &self.ring;
        let free = self.modulus.deg().unwrap() - q1.deg().unwrap();
        r.polys_below(free)
            .map(|t| r.add(&Poly::one(), &r.mul(q1, &t)))
            .map(|a| r.residue_index(&a, &self.modulus) as usize)
            .collect()
    }

    fn table_has_period(t: &[u8], kernel: &[usize]) -> bool {
        kernel.iter().all(|&i| t[i] == 0 || t[i] == NON_UNIT)
    }

    /// Member indices that are primitive modulo `Q`.
    pub fn primitive_indices(&self) -> Result<Vec<usize>> {
        let r = &self.ring;
        let kernels: Vec<Vec<usize>> = r
            .factor(&self.modulus)?
            .into_iter()
            .map(|(pr, _)| self.kernel_indices(&r.div_exact(&self.modulus, &pr).unwrap()))
            .collect();
        Ok((0..self.len())
            .filter(|&i| kernels.iter().all(|k| !Self::table_has_period(&self.tables[i], k)))
            .collect())
    }

    /// `H_{Q1}`: members of period `Q1`, as characters modulo `Q1`.
    pub fn period_subgroup(&self, q1: &Poly) -> Result<CharGroup> {
        let r = &self.ring;
        let q1 = r.monic(q1);
        if !r.divides(&q1, &self.modulus) {
            return Err(Error::ModulusMismatch);
        }
        let kernel = self.kernel_indices(&q1);
        let n1 = q1.deg().unwrap();
        let free = self.modulus.deg().unwrap() - n1;
        // a lift to a unit mod Q for each unit residue mod Q1
        let mask = unit_mask(r, &q1)?;
        let big_mask = unit_mask(r, &self.modulus)?;
        let mut lift = vec![usize::MAX; mask.len()];
        for (i, c) in r.polys_below(n1).enumerate() {
            if !mask[i] {
                continue;
            }
            for t in r.polys_below(free) {
                let j = r.to_index(&r.add(&c, &r.mul(&q1, &t))) as usize;
                if big_mask[j] {
                    lift[i] = j;
                    break;
                }
            }
        }
        let mut tables: Vec<Vec<u8>> = self
            .tables
            .iter()
            .filter(|t| Self::table_has_period(t, &kernel))
            .map(|t| {
                lift.iter()
                    .map(|&j| if j == usize::MAX { NON_UNIT } else { t[j] })
                    .collect()
            })
            .collect();
        tables.sort();
        tables.dedup();
        Ok(CharGroup {
            ring: r.clone(),
            modulus: q1,
            psi: self.psi,
            tables: tables.into_iter().map(Arc::new).collect(),
        })
    }

    /// Number of members with period `Q1` (`#H_{Q1}`).
    pub fn period_count(&self, q1: &Poly) -> usize {
        let kernel = self.kernel_indices(&self.ring.monic(q1));
        self.tables.iter().filter(|t| Self::table_has_period(t, &kernel)).count()
    }

    /// `H_{Q1}^⊥` pulled back to units modulo `Q`: the `a` killed by every
    /// member of period `Q1`.
    pub fn period_orthogonal(&self, q1: &Poly) -> Result<ResidueSet> {
        let q1 = self.ring.monic(q1);
        if !self.ring.divides(&q1, &self.modulus) {
            return Err(Error::ModulusMismatch);
        }
        let kernel = self.kernel_indices(&q1);
        let sub: Vec<&Arc<Vec<u8>>> = self.tables.iter().filter(|t| Self::table_has_period(t, &kernel)).collect();
        let mask = unit_mask(&self.ring, &self.modulus)?;
        let bits = (0..mask.len()).map(|i| mask[i] && sub.iter().all(|t| t[i] == 0)).collect();
        ResidueSet::from_bits(&self.ring, &self.modulus, bits)
    }

    /// `B^⊥ = {a : χ(a) = 1 for all χ ∈ B}`.
    pub fn orthogonal(&self) -> Result<ResidueSet> {
        let mask = unit_mask(&self.ring, &self.modulus)?;
        let bits = (0..mask.len())
            .map(|i| mask[i] && self.tables.iter().all(|t| t[i] == 0))
            .collect();
        ResidueSet::from_bits(&self.ring, &self.modulus, bits)
    }
}

/// `H = {χ_f : f odd, deg f ≤ d} ∪ {1}` modulo `x^{d+1}`; requires `gcd(d, 2p) = 1`.
pub fn group_h_odd(ring: &PolyRing, d: usize, psi: AdditiveChar) -> Result<CharGroup> {
    let p = ring.p() as usize;
    if d % 2 == 0 || d % p == 0 {
        return Err(Error::FamilyConstraint(format!("gcd(d, 2p) must be 1, got d = {d}")));
    }
    CharGroup::monomial_span(ring, d, psi, |i| i % 2 == 1 && i % p != 0)
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
    fn cubes_small_moduli() {
        let (r, _) = setup();
        let c2 = pth_power_residues(&r, &r.from_ints(&[0, 0, 1])).unwrap();
        assert_eq!(c2.elements(), vec![r.from_ints(&[1]), r.from_ints(&[2])]);
        let c1 = pth_power_residues(&r, &Poly::x()).unwrap();
        assert_eq!(c1.len(), 2);
        assert!(c1.contains(&Poly::one()));
    }

    #[test]
    fn all_order_p_orthogonal_is_pth_powers() {
        let (r, psi) = setup();
        for q_mod in [r.from_ints(&[0, 0, 0, 1]), r.from_ints(&[0, 1, 1]), r.from_ints(&[0, 2, 0, 1])] {
            let g = CharGroup::all_order_p(&r, &q_mod, psi).unwrap();
            assert!(g.is_closed());
            assert!(g.contains_trivial());
            assert_eq!(g.orthogonal().unwrap(), pth_power_residues(&r, &q_mod).unwrap());
        }
    }

    #[test]
    fn cubes_mod_x3_are_fq_of_x_cubed() {
        let (r, _) = setup();
        let q3 = r.from_ints(&[0, 0, 0, 1]);
        let want = ResidueSet::units_where(&r, &q3, |c| c.coeff(1).is_zero() && c.coeff(2).is_zero()).unwrap();
        assert_eq!(pth_power_residues(&r, &q3).unwrap(), want);
    }

    #[test]
    fn polynomial_family_is_all_order_p() {
        let (r, psi) = setup();
        for d in [2usize, 4] {
            let fam = CharGroup::polynomial_family(&r, d, psi).unwrap();
            let all = CharGroup::all_order_p(&r, &Poly::monomial(Fe::ONE, d + 1), psi).unwrap();
            assert_eq!(fam.tables(), all.tables());
        }
    }

    #[test]
    fn period_subgroups_nest() {
        let (r, psi) = setup();
        let g = r.from_ints(&[0, 2, 0, 1]);
        let q_mod = r.mul(&g, &g);
        let h = CharGroup::ordinary_family(&r, &g, psi).unwrap();
        assert_eq!(h.len(), 27);
        // #H_{gQ} = q^{deg Q} for Q | g
        for q in r.monic_divisors(&g).unwrap() {
            let gq = r.mul(&g, &q);
            assert_eq!(h.period_subgroup(&gq).unwrap().len() as u64, r.q_pow(q.deg().unwrap()).unwrap());
        }
        let small = h.period_subgroup(&r.mul(&g, &Poly::x())).unwrap();
        let a = small.len();
        let big = h.period_subgroup(&r.mul(&g, &r.from_ints(&[0, 1, 1]))).unwrap();
        assert!(a <= big.len());
        assert_eq!(h.period_subgroup(&q_mod).unwrap().len(), h.len());
    }

    #[test]
    fn odd_group_orthogonal_is_ab() {
        let (r, psi) = setup();
        let d = 5;
        let h = group_h_odd(&r, d, psi).unwrap();
        assert!(h.is_closed());
        for n in [d, d + 1] {
            let q_mod = Poly::monomial(Fe::ONE, n);
            let hq = h.period_subgroup(&q_mod).unwrap();
            let a = ResidueSet::units_where(&r, &q_mod, |c| (1..n).step_by(2).all(|i| c.coeff(i).is_zero())).unwrap();
            let b = ResidueSet::units_where(&r, &q_mod, |c| (1..n).all(|i| i % 3 == 0 || c.coeff(i).is_zero())).unwrap();
            assert_eq!(hq.orthogonal().unwrap(), a.product(&b).unwrap());
        }
    }
}
