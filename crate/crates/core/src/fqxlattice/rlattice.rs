//! Lattices over `R = F_q[y]`, `y = x^p`, inside
//! `V = R ⊕ xR ⊕ … ⊕ x^{p−2}R` (the derivatives `c′`).

use super::{linalg, weak_popov, Constraint, FqxLattice, PolyVec};
use crate::algebra::{Degree, Fe, Poly, PolyRing};
use crate::error::{Error, Result};

/// `max_i deg a_i` for `v = Σ a_i(x^p) x^i`; errors if `v ∉ V`.
pub fn r_degree(ring: &PolyRing, v: &Poly) -> Result<Degree> {
    Ok(super::vector_degree(&to_r_coords(ring, v)?))
}

fn to_r_coords(ring: &PolyRing, v: &Poly) -> Result<PolyVec> {
    let p = ring.p() as usize;
    let mut a = vec![Vec::new(); p - 1];
    for (j, &c) in v.coeffs().iter().enumerate() {
        let (k, i) = (j / p, j % p);
        if i == p - 1 {
            if !c.is_zero() {
                return Err(Error::InvalidParameter("vector has an x^{kp−1} term, not in V".into()));
            }
            continue;
        }
        if a[i].len() <= k {
            a[i].resize(k + 1, Fe::ZERO);
        }
        a[i][k] = c;
    }
    Ok(a.into_iter().map(Poly::new).collect())
}

fn from_r_coords(ring: &PolyRing, a: &[Poly]) -> Poly {
    let p = ring.p() as usize;
    let len = a.iter().map(|c| c.len()).max().unwrap_or(0) * p;
    let mut c = vec![Fe::ZERO; len];
    for (i, ai) in a.iter().enumerate() {
        for (k, &x) in ai.coeffs().iter().enumerate() {
            c[k * p + i] = x;
        }
    }
    Poly::new(c)
}

/// `Λ_Q = Q·F_q[x] ∩ V` as an `R`-lattice of rank `p − 1`.
#[derive(Clone, Debug)]
pub struct RLattice {
    ring: PolyRing,
    q_mod: Poly,
    basis: Vec<PolyVec>,
    m: usize,
}

/// Exponents `j < n` with `j ≢ −1 (mod p)`: the monomials spanning `V`.
fn v_monomials(p: usize, n: usize) -> Vec<usize> {
    (0..n).filter(|j| j % p != p - 1).collect()
}

/// `F_q`-basis of `{v ∈ Λ_Q : deg_x v < n}`.
fn window_kernel(ring: &PolyRing, q_mod: &Poly, n: usize) -> Vec<Poly> {
    let p = ring.p() as usize;
    let dq = q_mod.deg().unwrap();
    let cols = v_monomials(p, n);
    let mut rows = vec![vec![Fe::ZERO; cols.len()]; dq];
    for (k, &j) in cols.iter().enumerate() {
        let img = ring.rem(&Poly::monomial(Fe::ONE, j), q_mod);
        for (i, row) in rows.iter_mut().enumerate() {
            row[k] = img.coeff(i);
        }
    }
    linalg::kernel(ring.field(), &rows, cols.len())
        .into_iter()
        .map(|v| {
            let mut c = vec![Fe::ZERO; n];
            for (k, &j) in cols.iter().enumerate() {
                c[j] = v[k];
            }
            Poly::new(c)
        })
        .collect()
}

impl RLattice {
    pub fn lambda_q(ring: &PolyRing, q_mod: &Poly) -> Result<Self> {
        if ring.p() < 3 {
            return Err(Error::InvalidParameter("V has rank p − 1; need p ≥ 3".into()));
        }
        let dq = q_mod.deg().ok_or(Error::ZeroPolynomial)?;
        if !ring.is_squarefree(q_mod) {
            return Err(Error::NotSquarefree);
        }
        let q_mod = ring.monic(q_mod);
        let p = ring.p() as usize;
        // a reduced basis has R-degrees summing to deg Q, so it lies in this window
        let window = p * (dq + 1) + p;
        let mut rows: Vec<PolyVec> = window_kernel(ring, &q_mod, window)
            .iter()
            .map(|v| to_r_coords(ring, v))
            .collect::<Result<_>>()?;
        weak_popov(ring, &mut rows, None);
        if rows.len() != p - 1 {
            return Err(Error::Certification("Λ_Q basis has wrong rank".into()));
        }
        let m = linalg::det(ring, &rows).deg().ok_or(Error::Singular)?;
        if m != dq {
            return Err(Error::Certification(format!("vol(Λ_Q) exponent {m} ≠ deg Q = {dq}")));
        }
        Ok(RLattice { ring: ring.clone(), q_mod, basis: rows, m })
    }

    pub fn modulus(&self) -> &Poly {
        &self.q_mod
    }
    /// Basis rows in `R`-coordinates `(a_0, …, a_{p−2})`.
    pub fn basis(&self) -> &[PolyVec] {
        &self.basis
    }
    pub fn basis_vectors(&self) -> Vec<Poly> {
        self.basis.iter().map(|b| from_r_coords(&self.ring, b)).collect()
    }
    pub fn volume_exponent(&self) -> usize {
        self.m
    }

    /// `#{v ∈ Λ_Q : deg_x v ≤ r − 1}`, exact.
    pub fn count_short(&self, r: i64, budget: u64) -> Result<u128> {
        let p = self.ring.p() as i64;
        let bounds: Vec<i64> = (0..p - 1).map(|i| (r - 1 - i).div_euclid(p)).collect();
        let lat = FqxLattice::new(&self.ring, self.basis.clone())?;
        lat.count_short(0, &Constraint::PerCoordinate { bounds, primitive: false }, budget)
    }

    /// Same count from the `F_q`-dimension of the degree window.
    pub fn count_short_by_dimension(&self, r: i64) -> u128 {
        if r <= 0 {
            return 1;
        }
        let k = window_kernel(&self.ring, &self.q_mod, r as usize).len();
        (self.ring.q() as u128).pow(k as u32)
    }
}

/// `[V : Λ_Q]` exponent from `dim_{F_q}` of the image of `V` in `F_q[x]/Q`.
pub fn lambda_q_index_oracle(ring: &PolyRing, q_mod: &Poly) -> usize {
    let p = ring.p() as usize;
    let dq = q_mod.deg().unwrap();
    let rows: Vec<Vec<Fe>> = v_monomials(p, p * (dq + 2))
        .into_iter()
        .map(|j| {
            let img = ring.rem(&Poly::monomial(Fe::ONE, j), q_mod);
            (0..dq).map(|i| img.coeff(i)).collect()
        })
        .collect();
    linalg::rank(ring.field(), &rows, dq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_field;

    #[test]
    fn r_degree_example() {
        let r = PolyRing::new(make_field(3, 1).unwrap());
        let v = r.add(&Poly::monomial(Fe::ONE, 7), &Poly::x());
        assert_eq!(r_degree(&r, &v).unwrap(), Degree::Finite(2));
        // x² = x^{p−1} is not a derivative
        assert!(r_degree(&r, &r.add(&Poly::monomial(Fe::ONE, 7), &Poly::monomial(Fe::ONE, 2))).is_err());
        assert!(r_degree(&r, &Poly::monomial(Fe::ONE, 5)).is_err());
        assert_eq!(r_degree(&r, &Poly::zero()).unwrap(), Degree::NegInfinity);
    }

    #[test]
    fn volumes() {
        let r = PolyRing::new(make_field(3, 1).unwrap());
        let l = RLattice::lambda_q(&r, &Poly::one()).unwrap();
        assert_eq!(l.volume_exponent(), 0);
        let l = RLattice::lambda_q(&r, &r.from_ints(&[1, 1])).unwrap();
        assert_eq!(l.volume_exponent(), 1);
        for d in 1..=3 {
            for qm in r.monics(d).filter(|g| r.is_squarefree(g)) {
                let l = RLattice::lambda_q(&r, &qm).unwrap();
                assert_eq!(lambda_q_index_oracle(&r, &qm), d);
                for v in l.basis_vectors() {
                    assert!(r.divides(&qm, &v));
                }
                for rr in 0..8 {
                    assert_eq!(l.count_short(rr, u64::MAX).unwrap(), l.count_short_by_dimension(rr));
                }
            }
        }
    }

    #[test]
    fn q5_example() {
        let r = PolyRing::new(make_field(5, 1).unwrap());
        let qm = r.from_ints(&[1, 0, 1]);
        let l = RLattice::lambda_q(&r, &qm).unwrap();
        assert_eq!(l.basis().len(), 4);
        assert_eq!(l.count_short(9, u64::MAX).unwrap(), l.count_short_by_dimension(9));
    }
}
