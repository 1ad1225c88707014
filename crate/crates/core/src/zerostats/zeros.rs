use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::asfamilies::LPoly;
use crate::error::{Error, Result};

/// Backward-error certificate required of every root.
pub const BACKWARD_TOL: f64 = 1e-12;

/// Normalized zeros `ρ_i = q^{−1/2} λ_i^{−1}` and their angles.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroSet {
    rho: Vec<Complex64>,
    theta: Vec<f64>,
    rh_residual: f64,
}

impl ZeroSet {
    pub fn empty() -> Self {
        ZeroSet { rho: Vec::new(), theta: Vec::new(), rh_residual: 0.0 }
    }
    /// A zero set from given normalized zeros (no certification).
    pub fn from_rho(rho: Vec<Complex64>) -> Self {
        let mut theta: Vec<f64> = rho.iter().map(|&z| angle(z)).collect();
        theta.sort_by(f64::total_cmp);
        let rh_residual = rho.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max);
        ZeroSet { rho, theta, rh_residual }
    }
    pub fn len(&self) -> usize {
        self.rho.len()
    }
    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }
    pub fn rho(&self) -> &[Complex64] {
        &self.rho
    }
    /// Angles in `[−1/2, 1/2)`, ascending.
    pub fn theta(&self) -> &[f64] {
        &self.theta
    }
    /// `max_i ||ρ_i| − 1|`.
    pub fn rh_residual(&self) -> f64 {
        self.rh_residual
    }

    /// `T^r = Σ ρ_i^r`, any sign of `r`.
    pub fn trace(&self, r: i64) -> Complex64 {
        self.rho.iter().map(|z| z.powi(r as i32)).sum()
    }
}

const CLUSTER_RADIUS: f64 = 1e-3;
const MULTIPLICITY_TOL: f64 = 1e-10;

/// Coefficients (high to low) of the `k`-th derivative.
fn derivative(b: &[Complex64], k: usize) -> Vec<Complex64> {
    let mut c = b.to_vec();
    for _ in 0..k {
        let n = c.len() - 1;
        c = c[..n].iter().enumerate().map(|(i, &x)| x * (n - i) as f64).collect();
    }
    c
}

pub fn angle(z: Complex64) -> f64 {
    let t = z.arg() / std::f64::consts::TAU;
    if t >= 0.5 {
        t - 1.0
    } else {
        t
    }
}

fn horner(b: &[Complex64], z: Complex64) -> (Complex64, Complex64, f64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut dv = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    let az = z.norm();
    for &c in b {
        dv = dv * z + v;
        v = v * z + c;
        scale = scale * az + c.norm();
    }
    (v, dv, scale)
}

fn backward_error(b: &[Complex64], z: Complex64) -> f64 {
    let (v, _, scale) = horner(b, z);
    v.norm() / scale.max(f64::MIN_POSITIVE)
}

fn certify(b: &[Complex64], z: Complex64) -> Result<()> {
    let be = backward_error(b, z);
    if !(be <= BACKWARD_TOL) {
        return Err(Error::RootFinding(format!("backward error {be:e} at root {z}")));
    }
    Ok(())
}

/// Up to three Newton steps, stopping when the residual stops decreasing.
fn polish(b: &[Complex64], mut z: Complex64) -> Complex64 {
    for _ in 0..3 {
        let (v, dv, _) = horner(b, z);
        if dv.norm() == 0.0 {
            break;
        }
        let cand = z - v / dv;
        if horner(b, cand).0.norm() >= v.norm() {
            break;
        }
        z = cand;
    }
    z
}

/// Single-linkage groups of eigenvalues closer than `CLUSTER_RADIUS`.
fn clusters(eig: &[Complex64]) -> Vec<Vec<usize>> {
    let n = eig.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (eig[i] - eig[j]).norm() < CLUSTER_RADIUS {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

/// Eigenvalues by complex Schur. Companion matrices with equal-modulus
/// spectra (e.g. `w^n − c`) can stall unshifted-symmetric QR; retry on
/// `M + sI`, which moves the spectrum off the circle, and shift back.
fn eigenvalues(m: DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    let shifts = [(0.0, 0.0), (0.37, 0.21), (-0.29, 0.43), (0.11, -0.53)];
    for (re, im) in shifts {
        let s = Complex64::new(re, im);
        let mut ms = m.clone();
        for i in 0..n {
            ms[(i, i)] += s;
        }
        if let Some(schur) = nalgebra::linalg::Schur::try_new(ms, 1e-15, 10_000) {
            let (_, t) = schur.unpack();
            return Ok((0..n).map(|i| t[(i, i)] - s).collect());
        }
    }
    Err(Error::RootFinding("Schur iteration did not converge".into()))
}

/// Roots of `L` via the companion matrix of the scaled reversal, Newton
/// polish, then a backward-error check.
pub fn zeros(l: &LPoly, q: u32) -> Result<ZeroSet> {
    let n = l.degree();
    if n == 0 {
        return Ok(ZeroSet::empty());
    }
    let sq = (q as f64).sqrt();
    // monic in w with roots ρ: Σ c_k q^{−k/2} w^{n−k}
    let b: Vec<Complex64> = l
        .embed()
        .into_iter()
        .enumerate()
        .map(|(k, c)| c / sq.powi(k as i32))
        .collect();
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..n {
        m[(0, j)] = -b[j + 1];
    }
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    let eig = eigenvalues(m)?;
    let mut rho = Vec::with_capacity(n);
    // a root of multiplicity m splits into m eigenvalues ~ eps^{1/m} apart;
    // their mean is accurate, then Newton on P^{(m−1)}; the multiplicity is
    // accepted only if P, …, P^{(m−1)} all vanish there
    for cluster in clusters(&eig) {
        let m = cluster.len();
        let mean = cluster.iter().map(|&j| eig[j]).sum::<Complex64>() / m as f64;
        let z = polish(&derivative(&b, m - 1), mean);
        if m == 1 || (0..m).all(|k| backward_error(&derivative(&b, k), z) <= MULTIPLICITY_TOL) {
            certify(&b, z)?;
            rho.extend(std::iter::repeat_n(z, m));
        } else {
            for &j in &cluster {
                let z = polish(&b, eig[j]);
                certify(&b, z)?;
                rho.push(z);
            }
        }
    }
    let mut pairs: Vec<(f64, Complex64)> = rho.into_iter().map(|z| (angle(z), z)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let rh_residual = pairs.iter().map(|(_, z)| (z.norm() - 1.0).abs()).fold(0.0, f64::max);
    Ok(ZeroSet {
        theta: pairs.iter().map(|p| p.0).collect(),
        rho: pairs.into_iter().map(|p| p.1).collect(),
        rh_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::CyclotomicInt;
    use crate::asfamilies::Side;
    use num_bigint::BigInt;

    #[test]
    fn trivial_and_single() {
        assert!(zeros(&LPoly::one(3, Side::Curve), 3).unwrap().is_empty());
        let c1 = CyclotomicInt::from_coeffs(3, vec![BigInt::from(1), BigInt::from(2)]).unwrap();
        let l = LPoly::new(3, vec![CyclotomicInt::one(3), c1], Side::Curve).unwrap();
        let z = zeros(&l, 3).unwrap();
        assert_eq!(z.len(), 1);
        assert!((z.theta()[0] + 0.25).abs() < 1e-10);
        assert!(z.rh_residual() < 1e-12);
    }

    #[test]
    fn double_root_is_resolved() {
        // (1 − 3^{1/2}·i u)²-type: L = (1 + i√3 u)² = 1 + 2(1+2ζ)u + (1+2ζ)²u²
        let c1 = CyclotomicInt::from_coeffs(3, vec![BigInt::from(1), BigInt::from(2)]).unwrap();
        let l = LPoly::new(3, vec![CyclotomicInt::one(3), &c1 + &c1, &c1 * &c1], Side::Curve).unwrap();
        let z = zeros(&l, 3).unwrap();
        assert_eq!(z.len(), 2);
        assert!(z.rh_residual() < 1e-13);
        assert!((z.theta()[0] + 0.25).abs() < 1e-13 && (z.theta()[1] + 0.25).abs() < 1e-13);
    }

    #[test]
    fn triple_root_is_resolved() {
        // (1 + i√3 u)³ with i√3 = 1 + 2ζ
        let c1 = CyclotomicInt::from_coeffs(3, vec![BigInt::from(1), BigInt::from(2)]).unwrap();
        let c2 = &c1 * &c1;
        let three = BigInt::from(3);
        let l = LPoly::new(3, vec![CyclotomicInt::one(3), c1.scale(&three), c2.scale(&three), &c2 * &c1], Side::Curve)
            .unwrap();
        let z = zeros(&l, 3).unwrap();
        assert_eq!(z.len(), 3);
        assert!(z.rh_residual() < 1e-13, "{}", z.rh_residual());
    }

    #[test]
    fn angle_range() {
        assert_eq!(angle(Complex64::new(-1.0, 0.0)), -0.5);
        assert!((angle(Complex64::new(0.0, 1.0)) - 0.25).abs() < 1e-15);
    }
}
