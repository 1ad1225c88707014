use std::f64::consts::TAU;

use num_complex::Complex64;

use super::testfn::TestFunction;
use super::zeros::ZeroSet;
use crate::error::{invalid, Result};

fn cutoff(phi: &TestFunction, n: usize) -> i64 {
    (phi.beta() * n as f64).floor() as i64
}

/// `φ_N(t) = N^{−1} Σ_{|r| ≤ βN} Φ̂(r/N) e^{2πirt}`, exact for band-limited `Φ`.
pub fn sampling(phi: &TestFunction, n: usize, t: f64) -> f64 {
    let nf = n as f64;
    let r0 = cutoff(phi, n);
    let mut s = phi.phi_hat(0.0);
    for r in 1..=r0 {
        s += 2.0 * phi.phi_hat(r as f64 / nf) * (TAU * r as f64 * t).cos();
    }
    s / nf
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(invalid("scaling N must be positive"));
    }
    Ok(())
}

/// `W_1 = Σ_i φ_N(θ_i)`.
pub fn w1(zs: &ZeroSet, phi: &TestFunction, n: usize) -> Result<f64> {
    check_n(n)?;
    Ok(zs.theta().iter().map(|&t| sampling(phi, n, t)).sum())
}

/// `W_2 = Σ_{i≠j} φ_N(θ_i) φ_N(θ_j)` for `Φ₂ = Φ ⊗ Φ`, over ordered index pairs.
pub fn w2(zs: &ZeroSet, phi: &TestFunction, n: usize) -> Result<f64> {
    check_n(n)?;
    let v: Vec<f64> = zs.theta().iter().map(|&t| sampling(phi, n, t)).collect();
    let s: f64 = v.iter().sum();
    let s2: f64 = v.iter().map(|x| x * x).sum();
    Ok(s * s - s2)
}

/// `N^{−1} Σ_{|r| ≤ βN} Φ̂(r/N) T^r` for a trace (or mean-trace) sequence.
pub fn w1_fourier(phi: &TestFunction, n: usize, trace: impl Fn(i64) -> Complex64) -> Result<f64> {
    check_n(n)?;
    let r0 = cutoff(phi, n);
    let nf = n as f64;
    let s: Complex64 = (-r0..=r0).map(|r| trace(r) * phi.phi_hat(r as f64 / nf)).sum();
    Ok(s.re / nf)
}

/// `N^{−2} Σ_{r,s} Φ̂(r/N) Φ̂(s/N) (T^rT^s − T^{r+s})`; `pair(r, s)` returns
/// `T^r T^s` (or its mean), `trace(k)` returns `T^k`.
pub fn w2_fourier(
    phi: &TestFunction,
    n: usize,
    pair: impl Fn(i64, i64) -> Complex64,
    trace: impl Fn(i64) -> Complex64,
) -> Result<f64> {
    check_n(n)?;
    let r0 = cutoff(phi, n);
    let nf = n as f64;
    let mut s = Complex64::new(0.0, 0.0);
    for r in -r0..=r0 {
        let a = phi.phi_hat(r as f64 / nf);
        for t in -r0..=r0 {
            s += (pair(r, t) - trace(r + t)) * (a * phi.phi_hat(t as f64 / nf));
        }
    }
    Ok(s.re / (nf * nf))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let tri = TestFunction::triangle(0.5).unwrap();
        assert_eq!(w1(&ZeroSet::empty(), &tri, 3).unwrap(), 0.0);
        assert!(w1(&ZeroSet::empty(), &tri, 0).is_err());
        // one zero at θ = 0 with N = 1: only r = 0 contributes
        assert!((sampling(&tri, 1, 0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sampling_is_periodized_phi() {
        let tri = TestFunction::triangle(0.7).unwrap();
        let n = 9;
        for &t in &[0.0, 0.1, -0.37, 0.49] {
            let direct: f64 = (-20000..=20000)
                .map(|k| tri.phi(n as f64 * (t + k as f64)))
                .sum();
            assert!((direct - sampling(&tri, n, t)).abs() < 1e-4, "t = {t}");
        }
    }
}
