use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::algebra::{AdditiveChar, CyclotomicInt, Fe, Poly, PolyRing};
use crate::asfamilies::AsCharacter;
use crate::characters::{pth_power_residues, CharGroup, DirichletChar, Parity, ResidueSet};
use crate::error::{Error, Result};

use super::zeros::{zeros, ZeroSet};

/// Default cap on enumerated prime powers (or pairs of them).
pub const DEFAULT_PSI_BUDGET: u64 = 50_000_000;

fn qpow_half(q: u32, r: i64) -> f64 {
    (q as f64).powf(-(r.abs() as f64) / 2.0)
}

/// `T^r = −q^{−r/2} (Σ_{deg c = r} Λ(c)χ(c) + ε δ^r)`, conjugated for `r < 0`;
/// `T^0` is the number of zeros `n0`.
pub fn trace_from_lambda(ch: &AsCharacter, r: i64, n0: usize) -> Result<Complex64> {
    if r == 0 {
        return Ok(Complex64::new(n0 as f64, 0.0));
    }
    let q = ch.chi.ring().q();
    let v = ch.explicit_sum(r.unsigned_abs() as usize)?.embed() * (-qpow_half(q, r));
    Ok(if r < 0 { v.conj() } else { v })
}

fn check_even_primitive(chi: &DirichletChar) -> Result<()> {
    if chi.parity() == Parity::Odd {
        return Err(Error::OddCharacter);
    }
    if !chi.is_primitive()? {
        return Err(Error::InvalidParameter("character is not primitive".into()));
    }
    Ok(())
}

/// Zeros of `L(u, χ)/(1 − u)` for an even primitive Dirichlet character.
pub fn char_zero_set(chi: &DirichletChar) -> Result<ZeroSet> {
    check_even_primitive(chi)?;
    let l = chi
        .l_function_of_char()?
        .div_linear(0)
        .ok_or_else(|| Error::Certification("(1 − u) does not divide L(u, χ)".into()))?;
    zeros(&l, chi.ring().q())
}

/// Λ-side trace of an even primitive Dirichlet character.
pub fn char_trace_from_lambda(chi: &DirichletChar, r: i64) -> Result<Complex64> {
    check_even_primitive(chi)?;
    let n0 = chi.modulus().deg().unwrap().saturating_sub(2);
    trace_from_lambda(&AsCharacter { chi: chi.clone(), linear: Some(0) }, r, n0)
}

fn prime_powers_checked(ring: &PolyRing, r: usize, budget: u64) -> Result<std::sync::Arc<Vec<(Poly, u32)>>> {
    let n = ring.q_pow(r).map(|v| v as u128).unwrap_or(u128::MAX);
    if n > budget as u128 {
        return Err(Error::BudgetExceeded { limit: budget, needed: n });
    }
    ring.prime_powers(r)
}

/// `ψ(r; N) = Σ_{deg c = r, c mod Q ∈ N} Λ(c)` over monic `c`.
pub fn chebyshev_psi(ring: &PolyRing, r: usize, n: &ResidueSet, budget: u64) -> Result<BigUint> {
    if r == 0 {
        return Ok(BigUint::zero());
    }
    let m = n.modulus();
    let mut s = BigUint::zero();
    for (c, l) in prime_powers_checked(ring, r, budget)?.iter() {
        if n.contains_index(ring.residue_index(c, m) as usize) {
            s += *l;
        }
    }
    Ok(s)
}

/// `ψ^a(r; N) = Σ χ_{ax}(c) Λ(c)` over the same range.
pub fn psi_a(ring: &PolyRing, r: usize, n: &ResidueSet, a: Fe, psi: AdditiveChar, budget: u64) -> Result<CyclotomicInt> {
    let p = psi.p();
    if r == 0 {
        return Ok(CyclotomicInt::zero(p));
    }
    let m = n.modulus();
    let lin = DirichletChar::chi_linear_twist(ring, a, &Poly::one(), psi)?;
    let mut counts = vec![0i64; p as usize];
    for (c, l) in prime_powers_checked(ring, r, budget)?.iter() {
        if n.contains_index(ring.residue_index(c, m) as usize) {
            let k = lin.exponent(c).expect("χ_{ax} is defined on monic polynomials");
            counts[k as usize] += *l as i64;
        }
    }
    Ok(CyclotomicInt::from_exponent_counts(p, &counts))
}

/// `τ(r, s; N)`: `hg ∈ N` when `rs ≥ 0`, `hg^{−1} ∈ N` (with `(gh, Q) = 1`)
/// when `rs < 0`; `deg h = |r|`, `deg g = |s|`.
pub fn tau(ring: &PolyRing, r: i64, s: i64, n: &ResidueSet, budget: u64) -> Result<BigUint> {
    if r == 0 || s == 0 {
        return Ok(BigUint::zero());
    }
    let m = n.modulus();
    let hs = prime_powers_checked(ring, r.unsigned_abs() as usize, budget)?;
    let gs = prime_powers_checked(ring, s.unsigned_abs() as usize, budget)?;
    let pairs = hs.len() as u128 * gs.len() as u128;
    if pairs > budget as u128 {
        return Err(Error::BudgetExceeded { limit: budget, needed: pairs });
    }
    let reduce = |list: &[(Poly, u32)], invert: bool| -> Vec<(Option<Poly>, u32)> {
        list.iter()
            .map(|(c, l)| {
                let res = ring.rem(c, m);
                let v = if invert { ring.inv_mod(&res, m) } else { Some(res) };
                (v, *l)
            })
            .collect()
    };
    let h_res = reduce(&hs, false);
    let g_res = reduce(&gs, r * s < 0);
    let mut total = 0u64;
    for (h, lh) in &h_res {
        let Some(h) = h else { continue };
        for (g, lg) in &g_res {
            let Some(g) = g else { continue };
            if n.contains_index(ring.to_index(&ring.mulmod(h, g, m)) as usize) {
                total += (*lh as u64) * (*lg as u64);
            }
        }
    }
    Ok(BigUint::from(total))
}

fn to_f64(v: &BigUint) -> f64 {
    v.to_f64().unwrap()
}

/// Inclusion–exclusion weights `μ(Q/Q′) #H_{Q′} / #H^pr` with the
/// orthogonal sets `H_{Q′}^⊥` (as residues mod `Q`).
fn incl_excl_terms(h: &CharGroup) -> Result<Vec<(f64, ResidueSet)>> {
    let ring = h.ring();
    let q_mod = h.modulus();
    let prim = h.primitive_indices()?.len();
    if prim == 0 {
        return Err(Error::InvalidParameter("group has no primitive characters".into()));
    }
    let mut out = Vec::new();
    for q1 in ring.monic_divisors(q_mod)? {
        let mu = ring.mobius(&ring.div_exact(q_mod, &q1).unwrap())?;
        if mu == 0 {
            continue;
        }
        let w = mu as f64 * h.period_count(&q1) as f64 / prim as f64;
        out.push((w, h.period_orthogonal(&q1)?));
    }
    Ok(out)
}

/// `M_H^r = −q^{−|r|/2}(1 + Σ_{Q′|Q} μ(Q/Q′) #H_{Q′}/#H^pr · ψ(|r|; H_{Q′}^⊥))`.
pub fn mean_trace_formula(h: &CharGroup, r: i64, budget: u64) -> Result<f64> {
    if r == 0 {
        return Err(Error::InvalidParameter("r must be nonzero".into()));
    }
    let ring = h.ring();
    let mut s = 1.0;
    for (w, n) in incl_excl_terms(h)? {
        s += w * to_f64(&chebyshev_psi(ring, r.unsigned_abs() as usize, &n, budget)?);
    }
    Ok(-qpow_half(ring.q(), r) * s)
}

/// `M_H^{r,s} = −q^{−(|r|+|s|)/2} − q^{−|s|/2}M_H^r − q^{−|r|/2}M_H^s
///  + q^{−(|r|+|s|)/2} Σ μ(Q/Q′) #H_{Q′}/#H^pr · τ(r, s; H_{Q′}^⊥)`.
pub fn mean_trace_product_formula(h: &CharGroup, r: i64, s: i64, budget: u64) -> Result<f64> {
    if r == 0 || s == 0 {
        return Err(Error::InvalidParameter("r, s must be nonzero".into()));
    }
    let ring = h.ring();
    let q = ring.q();
    let mr = mean_trace_formula(h, r, budget)?;
    let ms = mean_trace_formula(h, s, budget)?;
    let mut t = 0.0;
    for (w, n) in incl_excl_terms(h)? {
        t += w * to_f64(&tau(ring, r, s, &n, budget)?);
    }
    let qrs = qpow_half(q, r) * qpow_half(q, s);
    Ok(-qrs - qpow_half(q, s) * mr - qpow_half(q, r) * ms + qrs * t)
}

fn hg_terms(ring: &PolyRing, g: &Poly) -> Result<Vec<(f64, ResidueSet)>> {
    if !ring.is_squarefree(g) || g.deg().unwrap_or(0) == 0 {
        return Err(Error::NotSquarefree);
    }
    let phi = to_f64(&ring.euler_phi(g)?);
    let mut out = Vec::new();
    for q1 in ring.monic_divisors(g)? {
        let mu = ring.mobius(&ring.div_exact(g, &q1).unwrap())?;
        let w = mu as f64 * (ring.q() as f64).powi(q1.deg().unwrap() as i32) / phi;
        out.push((w, pth_power_residues(ring, &ring.mul(g, &q1))?));
    }
    Ok(out)
}

/// Mean of `T^r` over `H_g`:
/// `−q^{−r/2}(1 + Σ_{Q|g} μ(g/Q) q^{deg Q}/φ(g) · ψ(r; (F_q[x]/gQ)^{×p}))`.
pub fn mean_trace_hg_formula(ring: &PolyRing, g: &Poly, r: i64, budget: u64) -> Result<f64> {
    if r == 0 {
        return Err(Error::InvalidParameter("r must be nonzero".into()));
    }
    let mut s = 1.0;
    for (w, n) in hg_terms(ring, g)? {
        s += w * to_f64(&chebyshev_psi(ring, r.unsigned_abs() as usize, &n, budget)?);
    }
    Ok(-qpow_half(ring.q(), r) * s)
}

/// Mean of `T^r` over `H_g^a = H_g + ax`. The pole at `∞` leaves no linear
/// factor, so there is no constant term:
/// `−q^{−r/2} Σ_{Q|g} μ(g/Q) q^{deg Q}/φ(g) · ψ^a(r; (F_q[x]/gQ)^{×p})`.
pub fn mean_trace_hg_twist_formula(
    ring: &PolyRing,
    g: &Poly,
    a: Fe,
    psi: AdditiveChar,
    r: i64,
    budget: u64,
) -> Result<Complex64> {
    if r == 0 {
        return Err(Error::InvalidParameter("r must be nonzero".into()));
    }
    let mut s = Complex64::new(0.0, 0.0);
    for (w, n) in hg_terms(ring, g)? {
        s += psi_a(ring, r.unsigned_abs() as usize, &n, a, psi, budget)?.embed() * w;
    }
    let v = s * (-qpow_half(ring.q(), r));
    Ok(if r < 0 { v.conj() } else { v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_field;

    #[test]
    fn psi_examples() {
        let ring = PolyRing::new(make_field(3, 1).unwrap());
        let x2 = ring.from_ints(&[0, 0, 1]);
        let cubes = pth_power_residues(&ring, &x2).unwrap();
        assert_eq!(cubes.len(), 2);
        assert_eq!(chebyshev_psi(&ring, 1, &cubes, DEFAULT_PSI_BUDGET).unwrap(), BigUint::zero());
        assert_eq!(chebyshev_psi(&ring, 2, &cubes, DEFAULT_PSI_BUDGET).unwrap(), BigUint::from(2u32));
        assert_eq!(chebyshev_psi(&ring, 0, &cubes, DEFAULT_PSI_BUDGET).unwrap(), BigUint::zero());
        assert_eq!(tau(&ring, 0, 3, &cubes, DEFAULT_PSI_BUDGET).unwrap(), BigUint::zero());
        assert!(matches!(
            chebyshev_psi(&ring, 8, &cubes, 100),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn tau_negative_branch_is_symmetric() {
        // N a group: h g^{-1} ∈ N ⇔ g h^{-1} ∈ N
        let ring = PolyRing::new(make_field(3, 1).unwrap());
        let q = ring.from_ints(&[0, 0, 0, 1]);
        let n = pth_power_residues(&ring, &q).unwrap();
        for (r, s) in [(2i64, -3i64), (1, -4), (3, -3)] {
            assert_eq!(
                tau(&ring, r, s, &n, DEFAULT_PSI_BUDGET).unwrap(),
                tau(&ring, -s, -r, &n, DEFAULT_PSI_BUDGET).unwrap()
            );
        }
    }

    #[test]
    fn char_trace_two_pipelines() {
        let ring = PolyRing::new(make_field(3, 1).unwrap());
        let psi = AdditiveChar::new(3, 1).unwrap();
        let chi = DirichletChar::chi_poly(&ring, &ring.from_ints(&[0, 0, 1]), psi).unwrap();
        let zs = char_zero_set(&chi).unwrap();
        for r in 1..=4 {
            let a = zs.trace(r);
            let b = char_trace_from_lambda(&chi, r).unwrap();
            assert!((a - b).norm() < 1e-10, "r = {r}: {a} vs {b}");
        }
    }

    #[test]
    fn odd_characters_rejected() {
        // order-p characters are always even (p ∤ q − 1); a table that is
        // nontrivial on constants is the only way to get an odd one
        let ring = PolyRing::new(make_field(3, 1).unwrap());
        let psi = AdditiveChar::new(3, 1).unwrap();
        let h = crate::characters::group_h_odd(&ring, 5, psi).unwrap();
        assert!(h.members().iter().all(|c| c.parity() == Parity::Even));
        let t = std::sync::Arc::new(vec![crate::characters::NON_UNIT, 0, 1]);
        let odd = DirichletChar::from_table(&ring, &Poly::x(), t, psi).unwrap();
        assert_eq!(odd.parity(), Parity::Odd);
        assert!(matches!(char_zero_set(&odd), Err(Error::OddCharacter)));
        assert!(matches!(char_trace_from_lambda(&odd, 1), Err(Error::OddCharacter)));
    }
}
