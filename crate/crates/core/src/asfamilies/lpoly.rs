use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::CyclotomicInt;
use crate::error::{invalid, Error, Result};

/// Where an L-polynomial came from.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    /// `L(u, f, ψ)` from character sums over `P^1(F_{q^r})`.
    Curve,
    /// `L(u, χ) = Σ_F χ(F) u^{deg F}`.
    Character,
}

/// Polynomial in `u` with coefficients in `Z[ζ_p]`, constant term 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPoly {
    p: u32,
    coeffs: Vec<CyclotomicInt>,
    side: Side,
}

impl LPoly {
    pub fn new(p: u32, mut coeffs: Vec<CyclotomicInt>, side: Side) -> Result<Self> {
        while coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
            coeffs.pop();
        }
        if coeffs.first().is_none_or(|c| !c.is_one()) {
            return Err(invalid("L-polynomial must have constant term 1"));
        }
        Ok(LPoly { p, coeffs, side })
    }

    pub fn one(p: u32, side: Side) -> Self {
        LPoly {
            p,
            coeffs: vec![CyclotomicInt::one(p)],
            side,
        }
    }

    /// `exp(Σ_{r≥1} S_r u^r / r)` truncated at degree `delta`, from
    /// `sums = [S_1, …, S_delta]`.
    ///
    /// Runs `D_k = Σ_j S_j D_{k−j} (k−1)!/(k−j)!` with `D_k = k!·c_k` so every
    /// intermediate is integral, then divides exactly.
    pub fn from_power_sums(p: u32, sums: &[CyclotomicInt], side: Side) -> Result<Self> {
        let n = sums.len();
        let mut d: Vec<CyclotomicInt> = vec![CyclotomicInt::one(p)];
        for k in 1..=n {
            let mut acc = CyclotomicInt::zero(p);
            // (k−1)!/(k−j)! built incrementally as j grows.
            let mut ratio = BigInt::one();
            for j in 1..=k {
                if j > 1 {
                    ratio *= BigInt::from(k - j + 1);
                }
                acc += &(&sums[j - 1] * &d[k - j]).scale(&ratio);
            }
            d.push(acc);
        }
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut fact = BigInt::one();
        for (k, dk) in d.iter().enumerate() {
            if k > 0 {
                fact *= BigInt::from(k);
            }
            coeffs.push(dk.div_exact(&fact).ok_or(Error::NonIntegral(k))?);
        }
        LPoly::new(p, coeffs, side)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn with_side(mut self, side: Side) -> Self {
        self.side = side;
        self
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[CyclotomicInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> CyclotomicInt {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| CyclotomicInt::zero(self.p))
    }

    /// `(1 − ζ^t u) · L`.
    pub fn times_linear(&self, t: u32) -> LPoly {
        let z = CyclotomicInt::zeta_pow(self.p, t as i64);
        let n = self.coeffs.len();
        let coeffs = (0..=n)
            .map(|k| {
                let mut v = self.coeff(k);
                if k > 0 {
                    v = &v - &(&z * &self.coeffs[k - 1]);
                }
                v
            })
            .collect();
        LPoly::new(self.p, coeffs, self.side).expect("constant term preserved")
    }

    /// `L / (1 − ζ^t u)` if exact.
    pub fn div_linear(&self, t: u32) -> Option<LPoly> {
        let z = CyclotomicInt::zeta_pow(self.p, t as i64);
        let n = self.degree();
        if n == 0 {
            return None;
        }
        let mut out = Vec::with_capacity(n);
        let mut prev = CyclotomicInt::zero(self.p);
        for k in 0..n {
            let v = &self.coeffs[k] + &(&z * &prev);
            out.push(v.clone());
            prev = v;
        }
        // remainder: c_n + z·out[n−1] must vanish
        if !(&self.coeffs[n] + &(&z * &prev)).is_zero() {
            return None;
        }
        LPoly::new(self.p, out, self.side).ok()
    }

    /// `L(ζ^t u)`.
    pub fn twist(&self, t: u32) -> LPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * &CyclotomicInt::zeta_pow(self.p, t as i64 * k as i64))
            .collect();
        LPoly {
            p: self.p,
            coeffs,
            side: self.side,
        }
    }

    pub fn is_conjugation_fixed(&self) -> bool {
        self.coeffs.iter().all(|c| c.conj() == *c)
    }

    /// `|c_δ|² = q^δ` exactly, as required by the functional equation.
    pub fn has_unitary_top(&self, q: u32) -> bool {
        let top = self.coeffs.last().unwrap();
        let n = &(top * &top.conj());
        n.as_integer()
            .is_some_and(|v| *v == BigInt::from(q).pow(self.degree() as u32))
    }

    pub fn embed(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| c.embed()).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn zero_check(c: &CyclotomicInt) -> bool {
        c.coeffs().iter().all(Zero::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recurrence_inverts_log_derivative() {
        // L = (1 − ζu)(1 − 3u): S_r = −(ζ^r + 3^r)
        let p = 3;
        let z = CyclotomicInt::zeta_pow(p, 1);
        let sums: Vec<CyclotomicInt> = (1..=4)
            .map(|r| -(&z.pow(r) + &CyclotomicInt::from_int(p, 3i64.pow(r))))
            .collect();
        let l = LPoly::from_power_sums(p, &sums, Side::Curve).unwrap();
        let want = LPoly::one(p, Side::Curve).times_linear(1);
        let three = LPoly::new(
            p,
            vec![CyclotomicInt::one(p), CyclotomicInt::from_int(p, -3)],
            Side::Curve,
        )
        .unwrap();
        let mut prod = vec![CyclotomicInt::zero(p); 3];
        for (i, a) in want.coeffs().iter().enumerate() {
            for (j, b) in three.coeffs().iter().enumerate() {
                prod[i + j] += &(a * b);
            }
        }
        assert_eq!(l, LPoly::new(p, prod, Side::Curve).unwrap());
    }

    #[test]
    fn linear_factor_roundtrip() {
        let p = 5;
        let base = LPoly::new(
            p,
            vec![
                CyclotomicInt::one(p),
                CyclotomicInt::zeta_pow(p, 2),
                CyclotomicInt::from_int(p, 7),
            ],
            Side::Character,
        )
        .unwrap();
        for t in 0..5 {
            let m = base.times_linear(t);
            assert_eq!(m.div_linear(t).unwrap(), base);
            assert!(m.div_linear((t + 1) % 5).is_none());
        }
        assert_eq!(base.twist(2).twist(3), base);
    }
}
