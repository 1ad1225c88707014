use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::testfn::TestFunction;
use crate::algebra::PolyRing;
use crate::error::{invalid, Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RmtKind {
    #[serde(rename = "U-1level")]
    U1Level,
    #[serde(rename = "U-2level")]
    U2Level,
    #[serde(rename = "USp-1level")]
    USp1Level,
}

/// Large-`N` limits on the Fourier side; 2-level uses `Φ₂ = Φ ⊗ Φ`.
pub fn rmt_reference(kind: RmtKind, phi: &TestFunction) -> Result<f64> {
    if phi.beta() >= 10.0 {
        return Err(invalid("support β must be below 10"));
    }
    let h0 = phi.phi_hat(0.0);
    Ok(match kind {
        RmtKind::U1Level => h0,
        // Φ̂(0) − ½ ∫_{−1}^{1} Φ̂
        RmtKind::USp1Level => h0 - phi.integrate_hat(0.0, 1.0, 1, |_| 1.0),
        // Φ̂(0)² − ∫ Φ̂(σ)Φ̂(−σ)(1 − |σ|)_+ dσ
        RmtKind::U2Level => h0 * h0 - 2.0 * phi.integrate_hat(0.0, 1.0, 2, |s| 1.0 - s),
    })
}

/// `∫_{USp(2n)} tr(U^r) dU = −𝟙_{2|r}` for `1 ≤ r ≤ n`.
pub fn usp_trace_moment(r: i64, n: i64) -> Result<i64> {
    if r < 1 || r > n {
        return Err(Error::InvalidParameter(format!("need 1 ≤ r ≤ {n}, got r = {r}")));
    }
    Ok(if r % 2 == 0 { -1 } else { 0 })
}

/// `#{c monic irreducible, deg c = r_half, c(x²) irreducible}`.
pub fn diagonal_chebotarev_count(ring: &PolyRing, r_half: usize, budget: u64) -> Result<BigUint> {
    if r_half == 0 {
        return Err(invalid("r_half must be at least 1"));
    }
    let n = ring.q_pow(r_half).map(|v| v as u128).unwrap_or(u128::MAX);
    if n > budget as u128 {
        return Err(Error::BudgetExceeded { limit: budget, needed: n });
    }
    let count = ring
        .irreducibles(r_half)?
        .iter()
        .filter(|c| ring.is_irreducible(&ring.compose_power(c, 2)))
        .count();
    Ok(BigUint::from(count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_field;

    #[test]
    fn examples() {
        let tri = TestFunction::triangle(0.5).unwrap();
        assert!((rmt_reference(RmtKind::U1Level, &tri).unwrap() - 1.0).abs() < 1e-15);
        assert!((rmt_reference(RmtKind::USp1Level, &tri).unwrap() - 0.75).abs() < 1e-14);
        assert!(rmt_reference(RmtKind::U1Level, &TestFunction::triangle(12.0).unwrap()).is_err());
        assert_eq!(usp_trace_moment(2, 10).unwrap(), -1);
        assert_eq!(usp_trace_moment(3, 10).unwrap(), 0);
        assert!(usp_trace_moment(11, 10).is_err());
        let ring = PolyRing::new(make_field(3, 1).unwrap());
        assert_eq!(diagonal_chebotarev_count(&ring, 1, 1000).unwrap(), BigUint::from(1u32));
    }

    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let c = (a + b) / 2.0;
        let whole = (b - a) / 6.0 * (f(a) + 4.0 * f(c) + f(b));
        fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, d: u32) -> f64 {
            let m = (a + b) / 2.0;
            let (lm, rm) = ((a + m) / 2.0, (m + b) / 2.0);
            let (flm, frm) = (f(lm), f(rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if d == 0 || (left + right - whole).abs() <= 15.0 * tol {
                return left + right + (left + right - whole) / 15.0;
            }
            rec(f, a, m, fa, flm, fm, left, tol / 2.0, d - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, d - 1)
        }
        rec(f, a, b, f(a), f(c), f(b), whole, tol, depth)
    }

    #[test]
    fn two_level_against_quadrature() {
        for tf in [
            TestFunction::triangle(0.4).unwrap(),
            TestFunction::trapezoid(1.3, 0.5).unwrap(),
            TestFunction::raised_cosine(0.9).unwrap(),
        ] {
            let f = |s: f64| tf.phi_hat(s) * tf.phi_hat(-s) * (1.0 - s.abs()).max(0.0);
            let quad = simpson(&f, -1.0, 1.0, 1e-13, 40);
            let want = tf.phi_hat(0.0).powi(2) - quad;
            let got = rmt_reference(RmtKind::U2Level, &tf).unwrap();
            assert!((got - want).abs() < 1e-9, "{tf:?}: {got} vs {want}");
            let quad1 = simpson(&|s| tf.phi_hat(s), -1.0, 1.0, 1e-13, 40);
            let got1 = rmt_reference(RmtKind::USp1Level, &tf).unwrap();
            assert!((got1 - (tf.phi_hat(0.0) - quad1 / 2.0)).abs() < 1e-9);
        }
    }
}
