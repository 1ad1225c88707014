//! Zeros of L-polynomials, band-limited test functions, 1- and 2-level
//! densities, trace means (zero side and von Mangoldt side) and
//! random-matrix reference values.

mod density;
mod rmt;
mod testfn;
mod traces;
mod zeros;

pub use density::{sampling, w1, w1_fourier, w2, w2_fourier};
pub use rmt::{diagonal_chebotarev_count, rmt_reference, usp_trace_moment, RmtKind};
pub use testfn::{gauss_legendre, TestFunction};
pub use traces::{
    char_trace_from_lambda, char_zero_set, chebyshev_psi, mean_trace_formula, mean_trace_hg_formula,
    mean_trace_hg_twist_formula, mean_trace_product_formula, psi_a, tau, trace_from_lambda, DEFAULT_PSI_BUDGET,
};
pub use zeros::{angle, zeros, ZeroSet, BACKWARD_TOL};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::algebra::{AdditiveChar, PolyRing};
use crate::asfamilies::{l_function_as, AsFunction};
use crate::characters::CharGroup;
use crate::error::{invalid, Error, Result};

/// Zeros and traces `T^0..=T^rmax` of one family member.
#[derive(Clone, Debug)]
pub struct MemberStats {
    pub zeros: ZeroSet,
    pub traces: Vec<Complex64>,
}

impl MemberStats {
    fn new(zeros: ZeroSet, rmax: usize) -> Self {
        let traces = (0..=rmax as i64).map(|r| zeros.trace(r)).collect();
        MemberStats { zeros, traces }
    }

    /// `T^r`, with `T^{−r} = conj(T^r)` on the unit circle.
    pub fn trace(&self, r: i64) -> Complex64 {
        let t = self.traces[r.unsigned_abs() as usize];
        if r < 0 {
            t.conj()
        } else {
            t
        }
    }
}

/// Per-member statistics of a family whose members share the zero count `N`.
/// Means are summed in member order, so results do not depend on threads.
#[derive(Clone, Debug)]
pub struct FamilyStats {
    members: Vec<MemberStats>,
    n_zeros: usize,
    rmax: usize,
}

impl FamilyStats {
    fn assemble(members: Vec<MemberStats>, rmax: usize) -> Result<Self> {
        let n_zeros = members.first().ok_or_else(|| invalid("empty family"))?.zeros.len();
        if members.iter().any(|m| m.zeros.len() != n_zeros) {
            return Err(invalid("family members have different numbers of zeros"));
        }
        Ok(FamilyStats { members, n_zeros, rmax })
    }

    pub fn from_functions(ring: &PolyRing, fs: &[AsFunction], psi: AdditiveChar, rmax: usize) -> Result<Self> {
        let q = ring.q();
        let members = fs
            .par_iter()
            .map(|f| Ok(MemberStats::new(zeros(&l_function_as(ring, f, psi)?, q)?, rmax)))
            .collect::<Result<Vec<_>>>()?;
        Self::assemble(members, rmax)
    }

    /// The primitive characters of `h`, through `L(u, χ)/(1 − u)`.
    pub fn from_char_group(h: &CharGroup, rmax: usize) -> Result<Self> {
        let idx = h.primitive_indices()?;
        let members = idx
            .par_iter()
            .map(|&i| Ok(MemberStats::new(char_zero_set(&h.member(i))?, rmax)))
            .collect::<Result<Vec<_>>>()?;
        Self::assemble(members, rmax)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
    pub fn members(&self) -> &[MemberStats] {
        &self.members
    }
    pub fn n_zeros(&self) -> usize {
        self.n_zeros
    }
    pub fn rmax(&self) -> usize {
        self.rmax
    }

    fn need(&self, r: i64) -> Result<()> {
        if r.unsigned_abs() as usize > self.rmax {
            return Err(invalid(format!("trace order {r} beyond computed range {}", self.rmax)));
        }
        Ok(())
    }

    fn mean(&self, f: impl Fn(&MemberStats) -> Complex64) -> Complex64 {
        self.members.iter().map(f).sum::<Complex64>() / self.members.len() as f64
    }

    pub fn mean_trace(&self, r: i64) -> Result<Complex64> {
        self.need(r)?;
        Ok(self.mean(|m| m.trace(r)))
    }

    pub fn mean_trace_product(&self, r: i64, s: i64) -> Result<Complex64> {
        self.need(r)?;
        self.need(s)?;
        Ok(self.mean(|m| m.trace(r) * m.trace(s)))
    }

    pub fn max_rh_residual(&self) -> f64 {
        self.members.iter().map(|m| m.zeros.rh_residual()).fold(0.0, f64::max)
    }

    fn scale(&self) -> Result<usize> {
        if self.n_zeros == 0 {
            return Err(Error::InvalidParameter("members have no zeros".into()));
        }
        Ok(self.n_zeros)
    }

    /// `⟨W_1⟩` from the zeros.
    pub fn mean_w1(&self, phi: &TestFunction) -> Result<f64> {
        let n = self.scale()?;
        let v: Vec<f64> = self.members.iter().map(|m| w1(&m.zeros, phi, n)).collect::<Result<_>>()?;
        Ok(v.iter().sum::<f64>() / v.len() as f64)
    }

    /// `⟨W_2⟩` from the zeros, `Φ₂ = Φ ⊗ Φ`.
    pub fn mean_w2(&self, phi: &TestFunction) -> Result<f64> {
        let n = self.scale()?;
        let v: Vec<f64> = self.members.iter().map(|m| w2(&m.zeros, phi, n)).collect::<Result<_>>()?;
        Ok(v.iter().sum::<f64>() / v.len() as f64)
    }

    /// `⟨W_1⟩ = N^{−1} Σ Φ̂(r/N) M^r`.
    pub fn fourier_w1(&self, phi: &TestFunction) -> Result<f64> {
        let n = self.scale()?;
        self.need((phi.beta() * n as f64).floor() as i64)?;
        let m: Vec<Complex64> = (0..=self.rmax as i64).map(|r| self.mean(|x| x.trace(r))).collect();
        w1_fourier(phi, n, |r| if r < 0 { m[(-r) as usize].conj() } else { m[r as usize] })
    }

    /// `⟨W_2⟩ = N^{−2} Σ Φ̂(r/N)Φ̂(s/N)(M^{r,s} − M^{r+s})`.
    pub fn fourier_w2(&self, phi: &TestFunction) -> Result<f64> {
        let n = self.scale()?;
        self.need(2 * (phi.beta() * n as f64).floor() as i64)?;
        let m: Vec<Complex64> = (0..=self.rmax as i64).map(|r| self.mean(|x| x.trace(r))).collect();
        w2_fourier(
            phi,
            n,
            |r, s| self.mean(|x| x.trace(r) * x.trace(s)),
            |k| if k < 0 { m[(-k) as usize].conj() } else { m[k as usize] },
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_field;
    use crate::asfamilies::FamilyDescriptor;

    #[test]
    fn fd_family_basics() {
        let ring = PolyRing::new(make_field(3, 1).unwrap());
        let psi = AdditiveChar::new(3, 1).unwrap();
        let fs = FamilyDescriptor::polynomial_fd(4).enumerate(&ring, 1 << 20).unwrap();
        let st = FamilyStats::from_functions(&ring, &fs, psi, 8).unwrap();
        assert_eq!(st.n_zeros(), 3);
        assert!((st.mean_trace(0).unwrap().re - 3.0).abs() < 1e-12);
        assert!(st.max_rh_residual() < 1e-9);
        let tri = TestFunction::triangle(0.6).unwrap();
        let a = st.mean_w1(&tri).unwrap();
        let b = st.fourier_w1(&tri).unwrap();
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        let a = st.mean_w2(&tri).unwrap();
        let b = st.fourier_w2(&tri).unwrap();
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }
}
