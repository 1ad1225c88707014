use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Even band-limited test functions with closed-form `Φ` and `Φ̂`, where
/// `Φ̂(τ) = ∫ Φ(t) e^{−2πiτt} dt` is supported in `[−β, β]`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum TestFunction {
    /// `Φ̂(τ) = (1 − |τ|/β)_+`.
    Triangle { beta: f64 },
    /// `Φ̂ = 1` on `|τ| ≤ plateau`, linear down to 0 at `β`.
    Trapezoid { beta: f64, plateau: f64 },
    /// `Φ̂(τ) = (1 + cos(πτ/β))/2` on `|τ| ≤ β`.
    RaisedCosine { beta: f64 },
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

impl TestFunction {
    pub fn triangle(beta: f64) -> Result<Self> {
        TestFunction::Triangle { beta }.validated()
    }
    pub fn trapezoid(beta: f64, plateau: f64) -> Result<Self> {
        TestFunction::Trapezoid { beta, plateau }.validated()
    }
    pub fn raised_cosine(beta: f64) -> Result<Self> {
        TestFunction::RaisedCosine { beta }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        let b = self.beta();
        if !(b.is_finite() && b > 0.0) {
            return Err(invalid(format!("support β must be positive, got {b}")));
        }
        if let TestFunction::Trapezoid { plateau, .. } = self {
            if !(plateau > 0.0 && plateau < b) {
                return Err(invalid("trapezoid plateau must lie in (0, β)"));
            }
        }
        Ok(self)
    }

    pub fn beta(&self) -> f64 {
        match *self {
            TestFunction::Triangle { beta }
            | TestFunction::Trapezoid { beta, .. }
            | TestFunction::RaisedCosine { beta } => beta,
        }
    }

    pub fn phi_hat(&self, tau: f64) -> f64 {
        let a = tau.abs();
        match *self {
            TestFunction::Triangle { beta } => (1.0 - a / beta).max(0.0),
            TestFunction::Trapezoid { beta, plateau } => {
                if a <= plateau {
                    1.0
                } else {
                    ((beta - a) / (beta - plateau)).max(0.0)
                }
            }
            TestFunction::RaisedCosine { beta } => {
                if a >= beta {
                    0.0
                } else {
                    0.5 * (1.0 + (PI * a / beta).cos())
                }
            }
        }
    }

    pub fn phi(&self, t: f64) -> f64 {
        match *self {
            TestFunction::Triangle { beta } => beta * sinc(PI * beta * t).powi(2),
            TestFunction::Trapezoid { beta, plateau: a } => {
                (beta * beta * sinc(PI * beta * t).powi(2) - a * a * sinc(PI * a * t).powi(2)) / (beta - a)
            }
            TestFunction::RaisedCosine { beta } => {
                // β sin x · π² / (x (π² − x²)), x = 2πβt
                let x = (2.0 * PI * beta * t).abs();
                if x < PI / 2.0 {
                    beta * sinc(x) * PI * PI / (PI * PI - x * x)
                } else {
                    beta * PI * PI * sinc(PI - x) / (x * (PI + x))
                }
            }
        }
    }

    /// Points in `(0, β]` where `Φ̂` is not smooth.
    fn kinks(&self) -> Vec<f64> {
        match *self {
            TestFunction::Triangle { beta } | TestFunction::RaisedCosine { beta } => vec![beta],
            TestFunction::Trapezoid { beta, plateau } => vec![plateau, beta],
        }
    }

    /// `∫_a^b w(τ) Φ̂(τ)^k dτ` for `0 ≤ a < b`, `w` a polynomial of degree ≤ 1,
    /// by Gauss-Legendre on the smooth pieces (exact for the piecewise-linear
    /// shapes, to rounding for the raised cosine).
    pub fn integrate_hat(&self, a: f64, b: f64, k: i32, w: impl Fn(f64) -> f64) -> f64 {
        let mut cuts = vec![a];
        cuts.extend(self.kinks().into_iter().filter(|&c| c > a && c < b));
        cuts.push(b.min(self.beta()).max(a));
        cuts.windows(2)
            .map(|win| gauss_legendre(win[0], win[1], |t| w(t) * self.phi_hat(t).powi(k)))
            .sum()
    }
}

fn gl_nodes() -> &'static [(f64, f64)] {
    static NODES: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    NODES.get_or_init(|| {
        let n = 32;
        (0..n)
            .map(|i| {
                let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
                let mut dp = 0.0;
                for _ in 0..100 {
                    let (mut p0, mut p1) = (1.0, x);
                    for k in 2..=n {
                        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                        p0 = p1;
                        p1 = p2;
                    }
                    dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                    let dx = p1 / dp;
                    x -= dx;
                    if dx.abs() < 1e-16 {
                        break;
                    }
                }
                (x, 2.0 / ((1.0 - x * x) * dp * dp))
            })
            .collect()
    })
}

/// 32-point Gauss-Legendre on `[a, b]`.
pub fn gauss_legendre(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let (m, h) = ((a + b) / 2.0, (b - a) / 2.0);
    h * gl_nodes().iter().map(|&(x, w)| w * f(m + h * x)).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_hat_zero_is_integral_of_phi() {
        for tf in [
            TestFunction::triangle(0.5).unwrap(),
            TestFunction::trapezoid(0.8, 0.3).unwrap(),
            TestFunction::raised_cosine(0.7).unwrap(),
        ] {
            // Φ(0) = ∫Φ̂, and Φ̂(0) = ∫Φ checked on a long window
            let int_hat = 2.0 * tf.integrate_hat(0.0, 10.0, 1, |_| 1.0);
            assert!((tf.phi(0.0) - int_hat).abs() < 1e-12, "{tf:?}");
            let int_phi = 2.0 * (0..4000).map(|i| gauss_legendre(i as f64 * 0.5, (i + 1) as f64 * 0.5, |t| tf.phi(t))).sum::<f64>();
            assert!((int_phi - tf.phi_hat(0.0)).abs() < 2e-3, "{tf:?}: {int_phi}");
            // continuity of the raised-cosine formula across its branch point
            let x0 = 1.0 / (4.0 * tf.beta());
            assert!((tf.phi(x0 - 1e-9) - tf.phi(x0 + 1e-9)).abs() < 1e-6);
        }
    }

    #[test]
    fn invalid_shapes() {
        assert!(TestFunction::triangle(0.0).is_err());
        assert!(TestFunction::trapezoid(0.5, 0.6).is_err());
    }

    #[test]
    fn gl_is_exact_on_polynomials() {
        let v = gauss_legendre(0.0, 2.0, |x| x.powi(7));
        assert!((v - 32.0).abs() < 1e-12);
    }
}
